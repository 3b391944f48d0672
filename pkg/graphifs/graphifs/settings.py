"""
Django settings for graphifs.

Select another settings module with DJANGO_SETTINGS_MODULE, or override
single keys for one command from a TOML file named by GRAPHIFS_CONFIG (or the
command line ``--config`` flag). Only UPPERCASE names are settings.
"""

import os

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

DEBUG = False

INSTALLED_APPS = [
    'graphifs.pipeline',
    'graphifs.fractal',
]

USE_TZ = True

# IFS documents shipped with the project
DOCUMENTS_DIR = os.path.join(BASE_DIR, 'documents')

# Dimension solver
DIMENSION_TOLERANCE = 1e-12
BISECTION_INTERVAL_TOLERANCE = 1e-15
BISECTION_MAX_ITERATIONS = 200
BRACKET_LIMIT = 64
POWER_ITERATION_TOLERANCE = 1e-14
POWER_ITERATION_MAX_STEPS = 100000
EIGEN_RESIDUAL_TOLERANCE = 1e-9

# Measure certification: inequalities must clear this margin to count
CONDITION_MARGIN = 1e-9

# Hull endpoint iteration
HULL_MAX_ITERATIONS = 10000
HULL_TOLERANCE = 1e-12

# Interval engine depths
DENSITY_DEPTH = 10
GAP_DEPTH = 6
DENSITY_GRID_SIZE = 200
TRICHOTOMY_REFINEMENT_DEPTH = 3

# Rational factorization
PRIME_LIMIT = 10 ** 6

# SVG rendering
RENDER_MAX_LEVEL = 12
RENDER_WIDTH = 800
RENDER_ROW_HEIGHT = 14
RENDER_ROW_SPACING = 6
RENDER_FILL = '#1f4e79'
RENDER_STROKE = 'none'

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        'graphifs': {
            'handlers': ['console'],
            'level': 'WARNING',
        },
    },
}
