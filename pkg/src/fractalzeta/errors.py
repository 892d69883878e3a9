"""Exception hierarchy shared across the package.

Every numerical operation raises a subclass of FractalZetaError so the CLI can
map failures onto its exit codes (1 config, 2 numerics, 3 verification).
"""


class FractalZetaError(Exception):
    """Base class for all package errors."""


class ConfigError(FractalZetaError):
    """Invalid CLI configuration or unparseable input document."""


# ---------------------------------------------------------------- strings


class InvalidSpec(FractalZetaError):
    """String specification violates its invariants (e.g. m*a >= 1)."""


class TailBoundUnavailable(FractalZetaError):
    """No usable bound on the unenumerated tail at the working level."""


class NotConvergent(FractalZetaError):
    """Dirichlet-type sum does not converge at the requested point."""


# ---------------------------------------------------------------- merofunc


class InvalidRatios(FractalZetaError):
    """Scaling ratios must lie in (0,1) and sum to less than 1."""


class InvalidOrder(FractalZetaError):
    """Pole-order parameter out of range."""


class InvalidParameters(FractalZetaError):
    """Catalog parameters out of range."""


class DeltaTooSmall(FractalZetaError):
    """Neighborhood radius below the closed form's validity threshold."""


class TruncationUnstable(FractalZetaError):
    """Series truncation cannot reach the requested accuracy here."""


class PoleProximity(FractalZetaError):
    """Evaluation point inside the guard radius of a cataloged pole."""


class ContourCrossesPole(FractalZetaError):
    """Integration circle passes through or encloses a foreign pole."""


class NotConverged(FractalZetaError):
    """Contour quadrature did not stabilize within the node budget."""


class ZeroOnContour(FractalZetaError):
    """Function vanishes (numerically) somewhere on the contour."""


class Ambiguous(FractalZetaError):
    """Winding number not close to an integer."""


class CatalogMissingAndSearchFailed(FractalZetaError):
    """No analytic pole catalog and the numerical search could not run."""


# ---------------------------------------------------------------- geometry


class OutOfRange(FractalZetaError):
    """Argument outside a closed form's validity interval."""


class GridTooCoarse(FractalZetaError):
    """Requested accuracy unattainable at the configured resolution."""


class DivergentAt(FractalZetaError):
    """Integral or sum diverges at the requested point."""


class InsufficientSamples(FractalZetaError):
    """Sample set too small or too narrow for the requested operation."""


# ---------------------------------------------------------------- analysis


class DegenerateFit(FractalZetaError):
    """Fitted exponent implies a dimension outside [0, N]."""


class PeriodMismatch(FractalZetaError):
    """Folded branches disagree; the supplied period is wrong."""


class NoiseFloorUndetermined(FractalZetaError):
    """Cannot set a Fourier noise floor for inexact samples."""


class OmegaEqualsN(FractalZetaError):
    """Residue conversion undefined at omega = N."""


class MissingPrincipalPole(FractalZetaError):
    """Record list carries no real pole at the fitted dimension."""


class NewtonDiverged(FractalZetaError):
    """Root search diverged for every seed."""


class EmptyUnion(FractalZetaError):
    """Lattice union has fewer than two points in the window."""


# ---------------------------------------------------------------- cli


class MissingArtifacts(FractalZetaError):
    """Report asked for artifacts that are neither on disk nor computable."""
