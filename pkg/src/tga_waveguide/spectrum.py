"""Closed-system spectra: bound states, degeneracies and SSH topology.

Diagonalizing the truncated CRW + TGA Hamiltonian exposes the continuum
band [omega_c - 2 xi, omega_c + 2 xi] plus discrete levels pushed outside
it by the coupling.  Those bound states are localized around the two
coupling sites and their degeneracy pattern tracks the TGA boundary
condition.  The SSH bulk invariant is computed from the Bloch map
h(k) = t1 + t2 e^{-ik}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GapClosedError
from .model import (
    SystemParams,
    TgaParams,
    build_tga_hamiltonian,
    build_truncated_system,
    crw_window,
)

# Energy margin above the band edge for bound-state selection; the
# participation-ratio cut rejects truncation-induced near-edge standing waves.
GAP_THRESHOLD = 1e-6
_BOUND_PR_FRACTION = 0.2

# Eigenvalues closer than this are treated as one degenerate group and
# reported in ascending participation-ratio order (deterministic output).
_DEGENERACY_GROUP_TOL = 1e-9

# Exponential-tail fit window: distances from the nearest coupling site.
_FIT_D_MIN = 5
_FIT_D_MAX = 30
# Amplitudes below this are eigensolver noise, not signal; drop them.
_FIT_AMP_FLOOR = 1e-12


@dataclass(frozen=True)
class BoundState:
    """One out-of-band eigenstate.

    ``localization_length`` is the decay length (in sites) of the CRW
    amplitude fitted away from the coupling span; ``fit_residual`` is the
    rms log-scale deviation of that fit relative to the total fitted drop.
    """

    energy: float
    localization_length: float
    participation_ratio: float
    side: str  # "above" | "below"
    fit_residual: float


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column i pairs with eigenvalues[i]
    band: tuple[float, float]
    bound_states: tuple[BoundState, ...]
    params: SystemParams
    m_sites: int


@dataclass(frozen=True)
class WindingResult:
    winding: int
    gap_closed: bool


def participation_ratio(vec: np.ndarray) -> float:
    """Inverse summed fourth power of a normalized amplitude vector, in sites."""
    p = np.abs(vec) ** 2
    p = p / p.sum()
    return float(1.0 / np.sum(p**2))


def _reorder_degenerate_groups(evals: np.ndarray, evecs: np.ndarray, xi: float) -> np.ndarray:
    """Within each numerically degenerate group, order columns by ascending PR."""
    order = np.arange(len(evals))
    start = 0
    tol = _DEGENERACY_GROUP_TOL * xi
    for i in range(1, len(evals) + 1):
        if i == len(evals) or evals[i] - evals[i - 1] > tol:
            if i - start > 1:
                prs = [participation_ratio(evecs[:, j]) for j in range(start, i)]
                order[start:i] = start + np.argsort(prs, kind="stable")
            start = i
    return order


def _fit_localization(vec: np.ndarray, m_sites: int, i0: int, n: int,
                      dist_wall: int) -> tuple[float, float]:
    """Fit exp(-d / ell) to the CRW amplitude at distance d from the span."""
    d_hi = min(_FIT_D_MAX, dist_wall - 5)
    d_lo = _FIT_D_MIN if d_hi - _FIT_D_MIN >= 2 else 2
    ds = np.arange(d_lo, max(d_hi, d_lo + 2) + 1)
    ds = ds[ds <= dist_wall]
    amp = np.sqrt(np.abs(vec[i0 - ds]) ** 2 + np.abs(vec[i0 + n + ds]) ** 2)
    keep = amp > _FIT_AMP_FLOOR
    if keep.sum() < 3:
        keep = amp > 0.0
    if keep.sum() < 2:
        return math.nan, math.nan
    ds_f = ds[keep]
    log_amp = np.log(amp[keep])
    slope, intercept = np.polyfit(ds_f, log_amp, 1)
    rms = float(np.sqrt(np.mean((log_amp - (slope * ds_f + intercept)) ** 2)))
    drop = abs(slope) * (ds_f[-1] - ds_f[0])
    residual = rms / drop if drop > 0 else math.inf
    return float(-1.0 / slope), residual


def _bound_states_from(evals: np.ndarray, evecs: np.ndarray, sys: SystemParams,
                       m_sites: int) -> tuple[BoundState, ...]:
    wg = sys.waveguide
    n = sys.tga.n
    dim = len(evals)
    j_min, j_max = crw_window(n, m_sites)
    i0 = -j_min
    dist_wall = min(-j_min, j_max - n)
    out = []
    for idx in range(dim):
        e = float(evals[idx])
        if abs(e - wg.omega_c) <= 2.0 * wg.xi + GAP_THRESHOLD * wg.xi:
            continue
        pr = participation_ratio(evecs[:, idx])
        if pr >= _BOUND_PR_FRACTION * dim:
            continue
        loc, resid = _fit_localization(evecs[:, idx], m_sites, i0, n, dist_wall)
        out.append(
            BoundState(
                energy=e,
                localization_length=loc,
                participation_ratio=pr,
                side="above" if e > wg.omega_c else "below",
                fit_residual=resid,
            )
        )
    return tuple(out)


def diagonalize(sys: SystemParams, m_sites: int) -> SpectrumResult:
    """Full eigendecomposition of the truncated closed system.

    Eigenvalues ascend; numerically degenerate groups are ordered by
    participation ratio.  Bound states are identified and characterized
    via find_bound_states.
    """
    n = sys.tga.n
    m_min = max(400, 10 * n)
    if m_sites < m_min:
        raise ValueError(f"m_sites={m_sites} below the convergence floor {m_min}")
    ham = build_truncated_system(sys, m_sites)
    evals, evecs = np.linalg.eigh(ham.entries)
    order = _reorder_degenerate_groups(evals, evecs, sys.waveguide.xi)
    evals = evals[order]
    evecs = evecs[:, order]
    wg = sys.waveguide
    return SpectrumResult(
        eigenvalues=evals,
        eigenvectors=evecs,
        band=(wg.band_min, wg.band_max),
        bound_states=_bound_states_from(evals, evecs, sys, m_sites),
        params=sys,
        m_sites=m_sites,
    )


def find_bound_states(spec: SpectrumResult) -> tuple[BoundState, ...]:
    """Out-of-band eigenstates of a SpectrumResult, with localization fits."""
    return _bound_states_from(spec.eigenvalues, spec.eigenvectors, spec.params, spec.m_sites)


def winding_number(t1: float, t2: float, k_points: int = 1024) -> WindingResult:
    """Winding of h(k) = t1 + t2 e^{-ik} around the origin.

    Wrapped phase increments are summed on a uniform k grid over [0, 2 pi);
    the traversal orientation is discarded so the result is 0 (|t1| > |t2|)
    or 1 (|t1| < |t2|).  Raises GapClosedError at |t1| = |t2|.
    """
    if k_points < 1024:
        raise ValueError(f"k_points must be >= 1024, got {k_points}")
    if abs(abs(t1) - abs(t2)) <= 1e-12:
        raise GapClosedError(f"|t1| = |t2| = {abs(t1)}: winding undefined")
    k = np.linspace(0.0, 2.0 * np.pi, k_points, endpoint=False)
    phase = np.angle(t1 + t2 * np.exp(-1j * k))
    dphi = np.diff(np.concatenate([phase, phase[:1]]))
    dphi = (dphi + np.pi) % (2.0 * np.pi) - np.pi
    w = int(round(abs(float(dphi.sum())) / (2.0 * np.pi)))
    return WindingResult(winding=w, gap_closed=False)


def edge_state_check(tga: TgaParams) -> bool:
    """True when the isolated open TGA hosts end-localized mid-gap states.

    Candidates must sit within tol_edge of omega_e, strictly inside the
    bulk gap, and be end-localized (participation ratio below 0.3 of the
    chain length).  tol_edge scales as 5 |t1/t2|^L max(|t1|, |t2|): the
    finite-chain edge-pair splitting is exponential in L, so no fixed
    tolerance works across sizes.
    """
    if tga.boundary != "open":
        raise ValueError("edge states are defined for the open TGA")
    ham = build_tga_hamiltonian(tga)
    evals, evecs = np.linalg.eigh(ham.entries)
    a1, a2 = abs(tga.t1), abs(tga.t2)
    half_gap = 0.5 * abs(a1 - a2)
    ratio = math.inf if a2 == 0.0 else a1 / a2
    try:
        tol_edge = 5.0 * ratio**tga.n_cells * max(a1, a2) + 1e-10
    except OverflowError:
        tol_edge = math.inf
    n_sites = tga.n_sites
    for idx in range(n_sites):
        de = abs(float(evals[idx]) - tga.omega_e)
        if de > tol_edge or de >= half_gap:
            continue
        if participation_ratio(evecs[:, idx]) < 0.3 * n_sites:
            return True
    return False
