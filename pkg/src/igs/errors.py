"""Exception hierarchy shared by all modules."""


class IGSError(Exception):
    """Base class for all errors raised by this package."""


# -- graph construction and queries ----------------------------------------

class LoopEdge(IGSError):
    """An edge joins a vertex to itself."""


class DuplicateEdge(IGSError):
    """The same unordered vertex pair appears twice in an edge list."""


class UnknownVertex(IGSError):
    """A vertex identifier does not belong to the graph."""


class UnknownEdge(IGSError):
    """An edge does not belong to the graph."""


class PathExplosion(IGSError):
    """Path enumeration exceeded its cap."""


# -- iterated graph systems --------------------------------------------------

class ValidationError(IGSError):
    """A candidate IGS violates its definition; carries the violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(v.get("message", str(v)) for v in self.violations))


class DisconnectedBase(IGSError):
    """The base graph of an IGS is not connected."""


class NotOriented(IGSError):
    """The IGS does not carry a global (phi_minus, phi_plus) pair."""


class LevelOutOfRange(IGSError):
    """A tower level outside the built range was requested."""


class BudgetExceeded(IGSError):
    """A tower or solve would exceed the configured size budget."""


class InvalidEndpoints(IGSError):
    """A path does not start or end in the required fiber."""


# -- solvers -----------------------------------------------------------------

class Disconnected(IGSError):
    """The graph handed to a solver is not connected."""


class BadExponent(IGSError):
    """The exponent p is outside (1, infinity)."""


class NonConvergence(IGSError):
    """The solver hit its iteration cap before reaching tolerance."""


class NotAdmissible(IGSError):
    """A density fails admissibility for the stated path family."""


class NotUnitFlow(IGSError):
    """A flow is not a unit flow between its terminals."""


class EmptyFamily(IGSError):
    """A modulus problem was posed over an empty path family."""


class TooManyPaths(IGSError):
    """An explicit path family exceeds the brute-force size cap."""


class NotDoubling(IGSError):
    """The IGS is not doubling (a gluing-image vertex has degree != 1)."""


class NotUniform(IGSError):
    """The IGS is not conductively uniform."""


class NotUniformScaling(IGSError):
    """The IGS does not satisfy the uniform scaling property."""


class AssumptionFailure(IGSError):
    """A structural assumption fails; carries the violated clause."""

    def __init__(self, clause, message=""):
        self.clause = clause
        super().__init__(message or f"assumption clause {clause} fails")


class NotRemovableStructure(IGSError):
    """Removing the edge breaks connectivity or the scaling constant."""


# -- io ------------------------------------------------------------------------

class ParseError(IGSError):
    """A spec file failed to parse; carries best-effort line/column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = f" (line {line}" + (f", column {column})" if column is not None else ")") if line else ""
        super().__init__(message + loc)
