"""Exception hierarchy shared by every module."""


class PermlabError(Exception):
    """Base class for all library errors."""


class OverlappingRules(PermlabError):
    pass


class SpaceMismatch(PermlabError):
    pass


class BadLegIndex(PermlabError):
    pass


class NotSymmetric(PermlabError):
    pass


class NotSymmetricForm(PermlabError):
    pass


class DegenerateForm(PermlabError):
    pass


class FieldTooLarge(PermlabError):
    pass


class DimTooLarge(PermlabError):
    pass


class UnboundName(PermlabError):
    pass


class SchemaError(PermlabError):
    """Malformed bundle. `location` is a JSON-pointer style path."""

    def __init__(self, message, location=""):
        self.location = location
        self.message = message
        super().__init__(f"{location}: {message}" if location else message)


class UsageError(PermlabError):
    pass


class ParseError(PermlabError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class RankMismatch(ParseError):
    pass


class FreeVarMismatch(ParseError):
    pass


class AxiomFailure(PermlabError):
    """An identity required as a precondition or postcondition failed.

    `report` is the failing Report (with witnesses) when one is available.
    """

    def __init__(self, identity, report=None, message=None):
        self.identity = identity
        self.report = report
        text = message or f"axiom {identity} fails"
        if report is not None and report.witnesses:
            text += f"; first witness {report.witnesses[0]}"
        super().__init__(text)


class HypothesisFailure(AxiomFailure):
    pass
