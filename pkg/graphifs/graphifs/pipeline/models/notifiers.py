import abc
import logging


logger = logging.getLogger(__name__)


class AbstractPipelineNotifier(abc.ABC):
    @abc.abstractmethod
    def notify(self, pipeline):
        ...


class LoggingNotifier(AbstractPipelineNotifier):
    """ Report status and progress changes to the pipeline logger """

    def notify(self, pipeline):
        progress = getattr(pipeline, 'percent_progress', None)
        if progress is None:
            logger.debug('%s: %s', pipeline, pipeline.status.name)
        else:
            logger.debug(
                '%s: %s (%d%%)', pipeline, pipeline.status.name, int(progress)
            )
