"""Exception hierarchy shared by the analysis and simulation modules."""


class THBError(Exception):
    """Base class for all errors raised by :mod:`thb`."""


class DomainError(THBError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class PreconditionError(THBError, ValueError):
    """A standing assumption of the analysis (N0, N3, ...) is violated."""


class AssumptionN3Error(PreconditionError):
    """The minimal critical delay is attained by more than one mode."""


class WaveNumberRangeError(DomainError):
    """No admissible wave number was found within the search bound."""


class NoImaginaryRootError(DomainError):
    """The quartic in omega has no positive root at the requested mode."""


class NonTransversalError(THBError, ArithmeticError):
    """The crossing derivative is degenerate."""


class UnsupportedModePairError(THBError, NotImplementedError):
    """Only the (k1 != 0, k2 = 0) Turing-Hopf interaction is implemented."""


class ResonanceError(THBError, ArithmeticError):
    """A resolvent needed by the centre-manifold terms is (near) singular."""


class DegenerateUnfoldingError(PreconditionError):
    """A nondegeneracy condition of the planar amplitude system fails."""


class BoundaryError(THBError, ValueError):
    """A parameter point sits on a bifurcation line."""


class ConfigError(PreconditionError):
    """A simulation configuration violates one of its invariants."""


class DivergenceError(THBError, ArithmeticError):
    """The numerical solution blew up."""

    def __init__(self, message, time):
        super().__init__(message)
        self.time = time
