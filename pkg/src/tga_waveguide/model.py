"""Parameter types and single-excitation Hamiltonian assembly.

The system is an infinite coupled-resonator waveguide (CRW),

    H_c = omega_c * sum_j a_j^dag a_j - xi * sum_j (a_{j+1}^dag a_j + h.c.),

side-coupled at sites j = 0 and j = N to a finite SSH chain of L unit
cells (2L sites, N = 2L - 1) acting as a topological giant atom (TGA):

    H_S = omega_e * sum_l (A_l^dag A_l + B_l^dag B_l)
        + t1 * sum_l (A_l^dag B_l + h.c.)
        + t2 * sum_{l<L} (A_{l+1}^dag B_l + h.c.)
        + t3 * (A_1^dag B_L + h.c.),
    H_I = J * (a_0^dag A_1 + a_N^dag B_L + h.c.).

Everything here lives in the single-excitation subspace, so Hamiltonians
are finite matrices over the site basis.  All energies are in units of xi
unless a different xi is supplied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import OutOfBandError

# Dimensionless margin on the cosine argument: scattering within this
# distance of the band edges is ill-conditioned (vanishing group velocity).
BAND_EDGE_MARGIN = 1e-6

# Truncated waveguides must keep some padding on both sides of the TGA span.
MIN_CRW_PADDING = 20

BOUNDARY_KINDS = ("open", "periodic", "custom")
COUPLING_MODES = ("two_point", "single_point")


@dataclass(frozen=True)
class WaveguideParams:
    """Bare resonator frequency and nearest-neighbour hopping of the CRW."""

    omega_c: float
    xi: float = 1.0

    def __post_init__(self) -> None:
        if not (self.xi > 0.0):
            raise ValueError(f"xi must be > 0, got {self.xi}")
        if not math.isfinite(self.omega_c):
            raise ValueError("omega_c must be finite")

    @property
    def band_min(self) -> float:
        return self.omega_c - 2.0 * self.xi

    @property
    def band_max(self) -> float:
        return self.omega_c + 2.0 * self.xi


@dataclass(frozen=True)
class TgaParams:
    """Finite SSH chain parameters.

    ``n_cells`` is the number of unit cells L; the chain has 2L sites and
    the CRW attachment span is [0, N] with N = 2L - 1 (always odd).
    ``boundary`` selects the cyclic bond t3: "open" (t3 = 0), "periodic"
    (t3 = t2) or "custom" (t3 = t3_custom).
    """

    n_cells: int
    omega_e: float
    t1: float
    t2: float
    boundary: str = "open"
    t3_custom: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.n_cells, int) or self.n_cells < 1:
            raise ValueError(f"n_cells must be a positive integer, got {self.n_cells}")
        if self.boundary not in BOUNDARY_KINDS:
            raise ValueError(f"boundary must be one of {BOUNDARY_KINDS}, got {self.boundary!r}")
        for name in ("omega_e", "t1", "t2", "t3_custom"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def n_sites(self) -> int:
        return 2 * self.n_cells

    @property
    def n(self) -> int:
        """Index N of the second CRW attachment site; N = 2L - 1 is odd."""
        return 2 * self.n_cells - 1

    @property
    def t3(self) -> float:
        if self.boundary == "open":
            return 0.0
        if self.boundary == "periodic":
            return self.t2
        return self.t3_custom


@dataclass(frozen=True)
class CouplingConfig:
    """TGA-CRW coupling: strength J and number of attachment points."""

    j: float
    mode: str = "two_point"

    def __post_init__(self) -> None:
        if not (self.j >= 0.0):
            raise ValueError(f"coupling strength must be >= 0, got {self.j}")
        if self.mode not in COUPLING_MODES:
            raise ValueError(f"mode must be one of {COUPLING_MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class SystemParams:
    """Full waveguide + giant atom parameter bundle."""

    waveguide: WaveguideParams
    tga: TgaParams
    coupling: CouplingConfig


def crw_label(j: int) -> str:
    return f"crw:{j}"


def tga_a_label(l: int) -> str:
    return f"A:{l}"


def tga_b_label(l: int) -> str:
    return f"B:{l}"


PROBE_LABEL = "probe"


@dataclass(frozen=True)
class DenseHamiltonian:
    """Dense matrix over a labelled site basis.

    ``site_labels[i]`` names basis index i: "crw:j" (waveguide site j,
    possibly negative), "A:l" / "B:l" (TGA sublattice sites, l = 1..L) or
    "probe".  The matrix is Hermitian unless a probe loss term -i*gamma
    was added, and is stored real whenever no loss is present.
    """

    entries: np.ndarray
    site_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        n = self.entries.shape[0]
        if self.entries.shape != (n, n):
            raise ValueError("entries must be square")
        if len(self.site_labels) != n:
            raise ValueError("site_labels length must equal matrix dimension")
        if len(set(self.site_labels)) != n:
            raise ValueError("site_labels must be unique")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.site_labels)}

    def index_of(self, label: str) -> int:
        return self._index[label]

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


def build_tga_hamiltonian(tga: TgaParams) -> DenseHamiltonian:
    """Isolated TGA matrix over the ordered basis A_1, B_1, ..., A_L, B_L."""
    L = tga.n_cells
    n = tga.n_sites
    H = np.zeros((n, n))
    np.fill_diagonal(H, tga.omega_e)
    for l in range(L):
        H[2 * l, 2 * l + 1] = H[2 * l + 1, 2 * l] = tga.t1
    for l in range(L - 1):
        H[2 * l + 1, 2 * l + 2] = H[2 * l + 2, 2 * l + 1] = tga.t2
    t3 = tga.t3
    if t3 != 0.0:
        # cyclic bond B_L - A_1; for L = 1 it adds onto the t1 bond
        H[n - 1, 0] += t3
        H[0, n - 1] += t3
    labels = []
    for l in range(1, L + 1):
        labels.append(tga_a_label(l))
        labels.append(tga_b_label(l))
    return DenseHamiltonian(entries=H, site_labels=tuple(labels))


def crw_window(n: int, m_sites: int) -> tuple[int, int]:
    """Index range [j_min, j_max] of the truncated CRW with [0, n] centred."""
    extra = m_sites - (n + 1)
    j_min = -(extra // 2)
    return j_min, j_min + m_sites - 1


def build_truncated_system(sys: SystemParams, m_sites: int) -> DenseHamiltonian:
    """Hard-wall CRW of ``m_sites`` resonators coupled to the TGA.

    The TGA attachment span [0, N] sits centred in the truncated chain.
    Basis order: CRW sites left to right, then A_1, B_1, ..., A_L, B_L.
    """
    tga = sys.tga
    wg = sys.waveguide
    N = tga.n
    if m_sites < N + MIN_CRW_PADDING:
        raise ValueError(
            f"m_sites={m_sites} too small: need at least N + {MIN_CRW_PADDING} = {N + MIN_CRW_PADDING}"
        )
    j_min, _ = crw_window(N, m_sites)
    dim = m_sites + tga.n_sites
    H = np.zeros((dim, dim))
    idx = np.arange(m_sites)
    H[idx, idx] = wg.omega_c
    H[idx[:-1], idx[1:]] = -wg.xi
    H[idx[1:], idx[:-1]] = -wg.xi
    tga_block = build_tga_hamiltonian(tga)
    H[m_sites:, m_sites:] = tga_block.entries
    i0 = -j_min            # CRW site j = 0
    iN = i0 + N            # CRW site j = N
    iA1 = m_sites
    iBL = m_sites + tga.n_sites - 1
    J = sys.coupling.j
    H[i0, iA1] = H[iA1, i0] = J
    if sys.coupling.mode == "two_point":
        H[iN, iBL] = H[iBL, iN] = J
    labels = tuple(crw_label(j) for j in range(j_min, j_min + m_sites)) + tga_block.site_labels
    return DenseHamiltonian(entries=H, site_labels=labels)


def dispersion(waveguide: WaveguideParams, k: float) -> float:
    """Energy of the right-moving CRW mode: omega_c - 2 xi cos k, k in (0, pi)."""
    if not (0.0 < k < math.pi):
        raise OutOfBandError(f"k={k} outside the open interval (0, pi)")
    return waveguide.omega_c - 2.0 * waveguide.xi * math.cos(k)


def inverse_dispersion(waveguide: WaveguideParams, energy: float) -> float:
    """Wave vector k in (0, pi) with dispersion(k) = energy.

    Raises OutOfBandError when the energy lies outside the propagating band
    or within the edge margin where the group velocity vanishes.
    """
    c = (waveguide.omega_c - energy) / (2.0 * waveguide.xi)
    if abs(c) > 1.0 - BAND_EDGE_MARGIN:
        raise OutOfBandError(
            f"energy={energy} outside the open band of [{waveguide.band_min}, {waveguide.band_max}]"
        )
    return math.acos(c)
