import enum

import attr


class Severity(enum.IntEnum):
    INFO = 1
    WARNING = 2
    CRITICAL = 3


@attr.frozen
class Diagnostic:
    severity: Severity = Severity.INFO
    message: str = ''
    stage: str = None
    step: str = None
    details: dict = attr.field(factory=dict, eq=False)

    def as_document(self):
        document = {'severity': self.severity.name, 'message': self.message}
        if self.stage is not None:
            document['stage'] = self.stage
        if self.step is not None:
            document['step'] = self.step
        if self.details:
            document['details'] = dict(self.details)
        return document
