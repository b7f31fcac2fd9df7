"""Exception types raised by phonofeat.

Everything derives from :class:`PhonofeatError` (itself a ``ValueError``) so
callers, and the command line, can catch domain errors in one place.
"""


class PhonofeatError(ValueError):
    pass


class SchemaError(PhonofeatError):
    pass


class MalformedVectorError(PhonofeatError):
    pass


class IPAParseError(PhonofeatError):
    pass


class AnalysisError(PhonofeatError):
    pass


class LexiconError(PhonofeatError):
    pass


class MappingError(PhonofeatError):
    pass


class OOVError(PhonofeatError):
    def __init__(self, words):
        self.words = list(words)
        super().__init__("out-of-vocabulary word(s): " + ", ".join(self.words))


class InventoryError(PhonofeatError):
    pass


class PlanError(PhonofeatError):
    pass


class ProjectionError(PhonofeatError):
    pass


class MetricsError(PhonofeatError):
    pass
