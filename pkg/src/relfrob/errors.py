"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all engine-raised errors."""


class MixedPrime(EngineError):
    """Operands live over different prime fields."""


class Overflow(EngineError):
    """A monomial exceeded the total-degree cap."""


class DomainMismatch(EngineError):
    """Composition of maps whose presentations do not line up."""


class NotWellDefined(EngineError):
    """A generator assignment does not respect the domain relations."""

    def __init__(self, relation, residue):
        self.relation = relation
        self.residue = residue
        super().__init__(f"relation {relation!s} maps to nonzero residue {residue!s}")


class InternalInconsistency(EngineError):
    """A constructed object failed one of its own build-time checks.

    Raising this means the engine, not the input, is wrong.
    """


class ResourceExceeded(EngineError):
    """A computation hit its resource limits; carries partial statistics."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})


class BudgetExceeded(EngineError):
    """An enumeration would exceed its configured budget."""


class ParseError(EngineError):
    def __init__(self, message, line, col, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        super().__init__(f"{line}:{col}: {message}")


class SemanticError(EngineError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)
