"""Exception types shared across the package."""


class TgaWaveguideError(Exception):
    """Base class for all package-specific errors."""


class OutOfBandError(TgaWaveguideError):
    """Energy or wave vector outside the open propagating band (edge margin included)."""


class SingularSystemError(TgaWaveguideError):
    """Scattering linear system is rank deficient (bound-state/BIC degeneracy at this k)."""


class DivisionNearZeroError(TgaWaveguideError):
    """A closed-form denominator vanished; the requested point sits on a pole."""


class EmptyGridError(TgaWaveguideError):
    """A sweep was requested over an empty grid."""


class LatticeTooSmallError(TgaWaveguideError):
    """Wave-packet run detected norm reaching the hard-wall edges (echo contamination)."""


class GapClosedError(TgaWaveguideError):
    """|t1| = |t2|: the SSH bulk gap is closed and the winding number is undefined."""


class IntegratorToleranceError(TgaWaveguideError):
    """Fixed-step propagation violated the lossless norm-conservation contract."""


class NonPositiveDataError(TgaWaveguideError):
    """Log-linear fit requested on data that is not strictly positive."""


class ConfigError(TgaWaveguideError):
    """Invalid or incomplete run configuration (CLI layer)."""
