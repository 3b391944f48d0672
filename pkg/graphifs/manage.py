#!/usr/bin/env python
"""graphifs command-line utility; Django management commands such as ``test`` pass through."""
import os
import sys


BASE_DIR = os.path.dirname(os.path.abspath(__file__))
MANAGEMENT_COMMANDS = ('test', 'check', 'diffsettings', 'shell')


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'graphifs.settings')
    if sys.argv[1:2] and sys.argv[1] in MANAGEMENT_COMMANDS:
        try:
            from django.core.management import execute_from_command_line
        except ImportError as exc:
            raise ImportError(
                "Couldn't import Django. Are you sure it's installed and "
                "available on your PYTHONPATH environment variable? Did you "
                "forget to activate a virtual environment?"
            ) from exc
        # test discovery starts from the working directory
        os.chdir(BASE_DIR)
        execute_from_command_line(sys.argv)
        return
    from graphifs.cli import main as run_cli
    run_cli()


if __name__ == '__main__':
    main()
