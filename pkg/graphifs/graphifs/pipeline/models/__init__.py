from .pipelines import (
    AbstractPipeline,
    AbstractProgressPipeline,
    AbstractStepProgressPipeline,
)
from .pipelines import (
    PipelineStatus,
    ALL_STATUSES,
    FINAL_STATUSES,
    GOOD_STATUSES,
    BAD_STATUSES,
)
from .diagnostics import Diagnostic, Severity
from .notifiers import AbstractPipelineNotifier, LoggingNotifier
