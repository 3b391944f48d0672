import enum

from django.test import SimpleTestCase

from graphifs.pipeline.models import (
    AbstractPipelineNotifier,
    AbstractStepProgressPipeline,
    PipelineStatus,
    Severity,
)


class Stage(enum.Enum):
    FIRST = 'first'
    SECOND = 'second'


class RecordingNotifier(AbstractPipelineNotifier):

    def __init__(self):
        self.statuses = []

    def notify(self, pipeline):
        self.statuses.append(pipeline.status)


class ScriptedPipeline(AbstractStepProgressPipeline):
    """ Runs ``script(pipeline)`` inside each of two stages with one step each """

    name = 'scripted'

    def __init__(self, first=None, second=None, notifiers=None):
        super().__init__(notifiers=notifiers)
        self.scripts = {Stage.FIRST: first, Stage.SECOND: second}
        self.visited = []
        self.add_progress_total_units(2)

    def act(self):
        for stage, script in self.scripts.items():
            with self.stage_context(stage):
                with self.step_context(f'{stage.value}_step') as data:
                    self.visited.append(stage)
                    data.update(label=stage.value)
                    if script:
                        script(self)


class TestPipeline(SimpleTestCase):

    def test_success(self):
        notifier = RecordingNotifier()
        pipeline = ScriptedPipeline(notifiers=[notifier]).run()
        self.assertEqual(pipeline.status, PipelineStatus.SUCCESS)
        self.assertEqual(pipeline.percent_progress, 100)
        self.assertEqual(notifier.statuses[0], PipelineStatus.RUNNING)
        self.assertEqual(notifier.statuses[-1], PipelineStatus.SUCCESS)
        messages = [(d.stage, d.step, d.message) for d in pipeline.diagnostics]
        self.assertEqual(messages[:3], [
            ('first', None, 'started'),
            ('first', 'first_step', 'succeeded'),
            ('first', None, 'succeeded'),
        ])

    def test_warning(self):
        pipeline = ScriptedPipeline(
            second=lambda p: p.record(Severity.WARNING, message='close call', value=1.0)
        ).run()
        self.assertEqual(pipeline.status, PipelineStatus.SUCCESS_WITH_WARNING)
        warning = [d for d in pipeline.diagnostics if d.severity == Severity.WARNING][0]
        self.assertEqual((warning.stage, warning.step), ('second', 'second_step'))
        self.assertEqual(warning.as_document()['details'], {'value': 1.0})

    def test_failed_step_keeps_later_stages(self):
        pipeline = ScriptedPipeline(first=lambda p: p.fail_step('no convergence')).run()
        self.assertEqual(pipeline.status, PipelineStatus.FAILED)
        self.assertEqual(pipeline.visited, [Stage.FIRST, Stage.SECOND])
        critical = [d for d in pipeline.diagnostics if d.severity == Severity.CRITICAL]
        self.assertEqual([d.step for d in critical], ['first_step', None])
        self.assertEqual(critical[0].details['error'], 'no convergence')

    def test_unexpected_error(self):
        def explode(pipeline):
            raise ZeroDivisionError('boom')

        pipeline = ScriptedPipeline(first=explode).run()
        self.assertEqual(pipeline.status, PipelineStatus.ERRORED)
        self.assertIsInstance(pipeline.exception, ZeroDivisionError)
        self.assertEqual(pipeline.visited, [Stage.FIRST])

    def test_explicit_failure(self):
        pipeline = ScriptedPipeline(second=lambda p: p.fail(reason='stop')).run()
        self.assertTrue(pipeline.is_failed)
        self.assertIsNone(pipeline.exception)
