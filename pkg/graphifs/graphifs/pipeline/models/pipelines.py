import enum
import functools
import logging

from .diagnostics import Diagnostic, Severity
from .mixins import ProgressPipelineMixin, StepPipelineMixin
from .notifiers import LoggingNotifier
from ..exceptions import (
    PipelineStateError,
    PipelineFailedError,
    StageFailedError,
    StepFailedError,
)


logger = logging.getLogger(__name__)


class PipelineStatus(enum.IntEnum):
    PENDING = 1
    RUNNING = 3
    FAILED = 5
    ERRORED = 6
    SUCCESS = 7
    SUCCESS_WITH_WARNING = 8


ALL_STATUSES = tuple(PipelineStatus)
FINAL_STATUSES = (
    PipelineStatus.FAILED,
    PipelineStatus.ERRORED,
    PipelineStatus.SUCCESS,
    PipelineStatus.SUCCESS_WITH_WARNING,
)
GOOD_STATUSES = (PipelineStatus.SUCCESS, PipelineStatus.SUCCESS_WITH_WARNING)
BAD_STATUSES = (PipelineStatus.FAILED, PipelineStatus.ERRORED)


# Status changes and notifications are kept apart so that a pipeline can
# change state several times inside one transition and notify once.
def notify_update(f):
    @functools.wraps(f)
    def wrapper(self, *args, **kwargs):
        try:
            return f(self, *args, **kwargs)
        finally:
            self.notify()
    return wrapper


class AbstractPipeline:

    name = 'pipeline'

    def __init__(self, notifiers=None):
        self._status = PipelineStatus.PENDING
        self._notifiers = tuple(notifiers) if notifiers else (LoggingNotifier(),)
        self.diagnostics = []
        self.exception = None

    def __str__(self):
        return self.name

    @property
    def status(self):
        return self._status

    @notify_update
    def running(self):
        self.update_status(PipelineStatus.RUNNING)

    @notify_update
    def fail(self, raise_error=True, reason=''):
        self.update_status(PipelineStatus.FAILED)
        if raise_error:
            raise PipelineFailedError(f'{self} failed, reason={reason}')

    @notify_update
    def success(self):
        self.update_status(PipelineStatus.SUCCESS)

    @notify_update
    def error(self):
        self.update_status(PipelineStatus.ERRORED)

    @notify_update
    def success_with_warning(self):
        self.update_status(PipelineStatus.SUCCESS_WITH_WARNING)

    def update_status(self, status: PipelineStatus):
        assert status in ALL_STATUSES
        self._status = status

    @property
    def notifiers(self):
        return self._notifiers

    def notify(self):
        # notifiers implement 'notify' and accept the pipeline as argument
        for notifier in self.notifiers:
            notifier.notify(self)

    def record(self, severity=Severity.INFO, message='', **details):
        diagnostic = Diagnostic(
            severity=severity,
            message=message,
            stage=getattr(self, 'current_stage_name', None),
            step=getattr(self, 'current_step_name', None),
            details=details,
        )
        self.diagnostics.append(diagnostic)
        return diagnostic

    def act(self):
        raise NotImplementedError()

    @property
    def is_running(self):
        return self.status == PipelineStatus.RUNNING

    @property
    def is_failed(self):
        return self.status == PipelineStatus.FAILED

    @property
    def is_errored(self):
        return self.status == PipelineStatus.ERRORED

    @property
    def max_severity(self):
        if not self.diagnostics:
            return Severity.INFO
        return max(d.severity for d in self.diagnostics)

    def status_from_diagnostics(self):
        severity = self.max_severity
        if severity == Severity.CRITICAL:
            return PipelineStatus.FAILED
        if severity == Severity.WARNING:
            return PipelineStatus.SUCCESS_WITH_WARNING
        return PipelineStatus.SUCCESS

    def on_success(self):
        pass

    def on_failure(self):
        pass

    def finalize(self):
        pass

    def run(self):
        try:
            self.running()
            self.act()
        except (PipelineFailedError, StageFailedError, StepFailedError) as e:
            if self.status != PipelineStatus.FAILED:
                self.fail(raise_error=False, reason=e.args[0] if e.args else '')
        except (Exception, PipelineStateError) as e:
            logger.exception(e)
            self.exception = e
            self.error()
        else:
            if self.status not in FINAL_STATUSES:
                self._finish_from_diagnostics()
        finally:
            try:
                self._process_post_run_hooks()
            except Exception as e:
                logger.exception(e)
                self.success_with_warning()
        return self

    def _finish_from_diagnostics(self):
        status = self.status_from_diagnostics()
        if status == PipelineStatus.FAILED:
            self.fail(raise_error=False)
        elif status == PipelineStatus.SUCCESS_WITH_WARNING:
            self.success_with_warning()
        else:
            self.success()

    def _process_post_run_hooks(self):
        try:
            if self.status in GOOD_STATUSES:
                self.on_success()
            if self.status in BAD_STATUSES:
                self.on_failure()
        finally:
            self.finalize()


class AbstractProgressPipeline(AbstractPipeline, ProgressPipelineMixin):

    def __init__(self, notifiers=None):
        AbstractPipeline.__init__(self, notifiers=notifiers)
        ProgressPipelineMixin.__init__(self)


class AbstractStepProgressPipeline(AbstractProgressPipeline, StepPipelineMixin):
    """ Staged pipeline that records a diagnostic for every stage and step """

    def __init__(self, notifiers=None):
        AbstractProgressPipeline.__init__(self, notifiers=notifiers)
        StepPipelineMixin.__init__(self)

    def on_stage_start(self):
        self.record(message='started')

    def on_stage_success(self):
        self.record(message='succeeded', **self.current_stage_data)

    def on_stage_fail(self):
        self.record(
            Severity.CRITICAL,
            message='failed',
            **self.current_stage_data
        )

    def on_step_success(self):
        self.record(message='succeeded', **self.current_step_data)

    def on_step_fail(self):
        self.record(
            Severity.CRITICAL,
            message='failed',
            **self.current_step_data
        )

    def on_step_end(self):
        self.add_progress_done_units(1)
