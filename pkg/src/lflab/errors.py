"""Exception hierarchy shared by all lflab modules."""


class LfLabError(Exception):
    """Base class for all lflab errors."""


class PrecisionError(LfLabError):
    """Target tolerance unreachable at the current working precision."""


class PoleError(LfLabError):
    """Evaluation requested at, or within the degeneracy floor of, a pole."""


class ConvergenceError(LfLabError):
    """A series or iteration exhausted its term budget."""


class DomainError(LfLabError):
    """Arguments outside the stated domain of validity."""


class RangeError(LfLabError):
    """Index beyond the supported desk-scale range."""


class ParameterPoleError(PoleError):
    """Hypergeometric lower parameter hit a non-positive integer."""


class ShiftDegeneracyError(LfLabError):
    """Shifts too close to a singular hyperplane and no limit path requested."""


class TailBudgetError(LfLabError):
    """A truncation tail bound exceeds the requested tolerance."""


class ContourTailError(LfLabError):
    """Contour quadrature cannot reach tolerance with the given cutoff."""


class ContourPoleError(LfLabError):
    """A pole drifted within margin of the integration contour."""


class OscillationBudgetError(LfLabError):
    """Oscillatory quadrature beyond the resolving power of the node budget."""


class CrossCheckError(LfLabError):
    """Two supposedly equal representations disagree beyond combined budget."""


class StepTooLargeError(LfLabError):
    """Finite-difference step too large to resolve the oscillation."""


class DegenerateEigenvalueError(LfLabError):
    """Hecke operator spectrum numerically non-simple at working precision."""


class SingularSystemError(LfLabError):
    """Linear system for the harmonic weights is numerically singular."""


class ConsistencyError(LfLabError):
    """Overdetermined system residual above tolerance."""


class MissingDataError(LfLabError):
    """Required spectral data (fixtures) absent."""


class MismatchError(LfLabError):
    """Internal and external data disagree beyond tolerance."""


class SchemaError(LfLabError):
    """Persisted record failed schema or checksum validation."""


class NetworkError(LfLabError):
    """Remote endpoint unavailable."""


class NoSaddleError(LfLabError):
    """No interior saddle point with the required sign change."""


class ConditionError(LfLabError):
    """Sampled derivative bounds violate the saddle-point hypotheses."""


class RegimeError(LfLabError):
    """Arguments outside the stated asymptotic regime."""


class AssemblyError(LfLabError):
    """Main-term assembly identity failed beyond tolerance."""
