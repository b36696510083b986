"""Single-photon physics of an SSH-chain giant atom coupled to a resonator waveguide.

Library layout:

- ``model``      parameter types, Hamiltonian assembly, dispersion
- ``scattering`` exact plane-wave scattering, sweeps, wave-packet oracle
- ``spectrum``   bound states, degeneracy structure, SSH winding number
- ``dynamics``   lossy probe-atom time evolution
- ``cli``        deterministic CSV/JSON experiment runner
"""

from .dynamics import (
    ExponentialFit,
    ProbeParams,
    TimeSeries,
    build_probe_system,
    evolve_probe,
    far_detuning_ratio,
    fit_exponential,
)
from .errors import (
    ConfigError,
    DivisionNearZeroError,
    EmptyGridError,
    GapClosedError,
    IntegratorToleranceError,
    LatticeTooSmallError,
    NonPositiveDataError,
    OutOfBandError,
    SingularSystemError,
    TgaWaveguideError,
)
from .model import (
    BAND_EDGE_MARGIN,
    CouplingConfig,
    DenseHamiltonian,
    SystemParams,
    TgaParams,
    WaveguideParams,
    build_tga_hamiltonian,
    build_truncated_system,
    dispersion,
    inverse_dispersion,
)
from .scattering import (
    ScatteringSolution,
    SweepRow,
    SweepTable,
    WavepacketResult,
    reflection_n1_analytic,
    solve_scattering,
    solve_single_point,
    sweep_reflection,
    wavepacket_transmission,
)
from .spectrum import (
    BoundState,
    SpectrumResult,
    WindingResult,
    diagonalize,
    edge_state_check,
    find_bound_states,
    participation_ratio,
    winding_number,
)

__version__ = "0.1.0"

__all__ = [
    "BAND_EDGE_MARGIN",
    "BoundState",
    "ConfigError",
    "CouplingConfig",
    "DenseHamiltonian",
    "DivisionNearZeroError",
    "EmptyGridError",
    "ExponentialFit",
    "GapClosedError",
    "IntegratorToleranceError",
    "LatticeTooSmallError",
    "NonPositiveDataError",
    "OutOfBandError",
    "ProbeParams",
    "ScatteringSolution",
    "SingularSystemError",
    "SpectrumResult",
    "SweepRow",
    "SweepTable",
    "SystemParams",
    "TgaParams",
    "TgaWaveguideError",
    "TimeSeries",
    "WaveguideParams",
    "WavepacketResult",
    "WindingResult",
    "build_probe_system",
    "build_tga_hamiltonian",
    "build_truncated_system",
    "diagonalize",
    "dispersion",
    "edge_state_check",
    "evolve_probe",
    "far_detuning_ratio",
    "find_bound_states",
    "fit_exponential",
    "inverse_dispersion",
    "participation_ratio",
    "reflection_n1_analytic",
    "solve_scattering",
    "solve_single_point",
    "sweep_reflection",
    "wavepacket_transmission",
    "winding_number",
]
