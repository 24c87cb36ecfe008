"""Exception hierarchy shared by every dynlog module."""


class DynlogError(Exception):
    """Base class for all errors raised by dynlog."""


# order core
class CycleDetected(DynlogError):
    pass


class NoBottom(DynlogError):
    pass


class NoTop(DynlogError):
    pass


class NotALattice(DynlogError):
    def __init__(self, pair, message=None):
        self.pair = pair
        super().__init__(message or f"pair {pair[0]!r}, {pair[1]!r} has no meet or join")


class TrivialLattice(DynlogError):
    pass


class UnknownElement(DynlogError):
    pass


class NotFullSet(DynlogError):
    pass


# propositions / automata
class CarrierMismatch(DynlogError):
    pass


class NotMeetClosed(DynlogError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"meet of {pair[0]!r} and {pair[1]!r} is not in the subposet")


class MissingTop(DynlogError):
    pass


class MissingBottom(DynlogError):
    pass


class UnknownInput(DynlogError):
    pass


class UnknownState(DynlogError):
    pass


# dynamics / synthesis
class AdjunctionRequired(DynlogError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"functors are not adjoint, witness {witness}")


class InvariantViolation(DynlogError):
    """A guaranteed consequence failed; signals a bug or a violated hypothesis."""


class SizeCapExceeded(DynlogError):
    pass


class NotBoolean(DynlogError):
    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"not a Boolean lattice: {witness}")


class PreconditionFailed(DynlogError):
    """Raised when a functor violates a synthesis hypothesis.

    ``reason`` is one of ``"NotMonotone"``, ``"TopNotPreserved"``,
    ``"BottomNotPreserved"`` or ``"NotMeetPreserving"`` (``"NotJoinPreserving"``
    for the dual); ``witness`` names the offending label and members.
    """

    def __init__(self, reason, witness):
        self.reason = reason
        self.witness = witness
        super().__init__(f"{reason}: {witness}")


class ExtensionMismatch(DynlogError):
    def __init__(self, member, label):
        self.member = member
        self.label = label
        super().__init__(f"extended functor differs from the given one at label {label!r}, member {member!r}")


# text io
class ParseError(DynlogError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class ValidationError(ParseError):
    pass


class MissingInput(DynlogError):
    pass


class NotAMorphism(DynlogError):
    pass
