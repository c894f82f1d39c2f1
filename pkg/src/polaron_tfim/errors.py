"""Exception types shared across the package."""


class PolaronTfimError(Exception):
    """Base class for all package-specific errors."""


class SizeError(PolaronTfimError, ValueError):
    """Lattice dimension below the minimum supported size."""


class CommensurabilityError(PolaronTfimError, ValueError):
    """Lattice dimension incompatible with the three-sublattice order."""


class GeometryMismatchError(PolaronTfimError, ValueError):
    """Spin configuration does not match the geometry it is used with."""


class DegenerateWallError(PolaronTfimError, ValueError):
    """Domain wall requested between two identical ordered states."""


class ResonantDenominatorError(PolaronTfimError, ValueError):
    """Virtual-state energy denominator vanishes; perturbative rotation undefined."""


class DegenerateEnvironmentError(PolaronTfimError, ValueError):
    """Equal coordination counts make the closed-form diagonal undefined."""


class CapacityError(PolaronTfimError, ValueError):
    """Cluster too large for dense diagonalization."""


class PairDegeneracyError(PolaronTfimError, ValueError):
    """Tunneling-splitting inputs violate the degenerate-pair precondition."""


class DegenerateFitError(PolaronTfimError, ValueError):
    """Log-log exponent fit impossible (zero or too few data points)."""


class ClassicalLimitError(PolaronTfimError, ValueError):
    """Imaginary-time coupling requested where no transverse field is present."""


class UndefinedRateError(PolaronTfimError, ValueError):
    """Flip rate undefined for a trajectory with fewer than two snapshots."""


class RescalingUndefinedError(PolaronTfimError, ValueError):
    """Temperature rescaling undefined for a curve with zero transverse field."""


class NoOverlapError(PolaronTfimError, ValueError):
    """Rescaled curves share no common temperature support."""


class FitImpossibleError(PolaronTfimError, ValueError):
    """No candidate exponent yields overlapping rescaled curves."""


class ConfigError(PolaronTfimError, ValueError):
    """Invalid run configuration (bad key, value, or constraint)."""
