class PipelineStateError(Exception):
    pass


class PipelineFailedError(PipelineStateError):
    pass


class StageFailedError(PipelineStateError):
    pass


class StepFailedError(PipelineStateError):
    pass
