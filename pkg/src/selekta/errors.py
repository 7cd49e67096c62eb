"""Exception hierarchy shared by every layer."""


class SelektaError(Exception):
    """Base class for all library errors."""


class ParseError(SelektaError):
    """Malformed input text, with a 1-based position."""

    def __init__(self, message, line=0, col=0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}" if line else message)


class UnsafeRule(SelektaError):
    """A rule variable is not bound by a positive body literal."""


class GroundingError(SelektaError):
    pass


class NotStrictPartialOrder(SelektaError):
    """The declared preferences are cyclic."""


class UnknownLabel(SelektaError):
    pass


class ArityMismatch(SelektaError):
    pass


class VocabularyConflict(SelektaError):
    """A predicate would belong to two vocabularies."""


class NoSelectionInput(SelektaError):
    """The query description base has no answer set."""


class NoAnswerSet(SelektaError):
    pass


class AmbiguousDescription(SelektaError):
    """Query analysis produced more than one answer set."""


class QuerySyntaxError(ParseError):
    def __init__(self, message, line=0, col=0, expected=None):
        self.expected = expected
        super().__init__(message, line, col)


class UnsupportedConstruct(ParseError):
    pass


class UnboundVariable(ParseError):
    pass


class ManifestError(SelektaError):
    pass


class HeadlessRule(SelektaError):
    """An operation needs a rule with a head."""


class UnknownVariant(SelektaError):
    pass
