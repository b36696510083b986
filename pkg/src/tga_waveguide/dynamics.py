"""Probe-atom dynamics: non-Hermitian evolution in the single-excitation sector.

A lossy two-level probe (frequency omega_p, spontaneous-emission rate
gamma) couples with strength f to one CRW resonator.  Its excited-state
amplitude obeys i d psi / dt = H_p psi with the probe diagonal entry
omega_p - i gamma, so the total norm decays monotonically for gamma > 0.
Propagation uses a fixed-step classic Runge-Kutta (4th order) scheme in a
frame shifted by omega_c, which removes the fast trivial phase and lets
the step be chosen from the spectral radius of the shifted matrix alone.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numba
import numpy as np

from .errors import IntegratorToleranceError, NonPositiveDataError
from .model import (
    PROBE_LABEL,
    DenseHamiltonian,
    SystemParams,
    build_truncated_system,
    crw_label,
    crw_window,
)

# Lossless runs must conserve the norm to this tolerance over the full window.
NORM_DRIFT_TOL = 1e-8


@dataclass(frozen=True)
class ProbeParams:
    """Probe atom: frequency, loss rate, resonator coupling, attachment site."""

    omega_p: float
    gamma: float
    f: float
    attach_site: int = 0

    def __post_init__(self) -> None:
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.f < 0.0:
            raise ValueError(f"f must be >= 0, got {self.f}")
        for name in ("omega_p", "gamma", "f"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class TimeSeries:
    """Sampled probe population P_e(t) and total excitation norm."""

    times: np.ndarray
    p_e: np.ndarray
    total_norm: np.ndarray

    def __post_init__(self) -> None:
        if not (len(self.times) == len(self.p_e) == len(self.total_norm)):
            raise ValueError("times, p_e and total_norm must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly ascending")


@dataclass(frozen=True)
class ExponentialFit:
    """Log-linear fit of a decay curve: P_e ~ exp(-rate * t)."""

    rate: float
    log_residual_rms: float


def build_probe_system(sys: SystemParams, probe: ProbeParams, m_sites: int) -> DenseHamiltonian:
    """Truncated system extended by the probe index (last basis entry).

    The probe diagonal is omega_p - i gamma, so the matrix is complex and
    non-Hermitian exactly when gamma > 0.
    """
    base = build_truncated_system(sys, m_sites)
    j_min, j_max = crw_window(sys.tga.n, m_sites)
    if not (j_min <= probe.attach_site <= j_max):
        raise ValueError(
            f"attach_site={probe.attach_site} outside the truncated lattice [{j_min}, {j_max}]"
        )
    dim = base.dim + 1
    dtype = complex if probe.gamma > 0.0 else float
    H = np.zeros((dim, dim), dtype=dtype)
    H[:-1, :-1] = base.entries
    H[-1, -1] = probe.omega_p - 1j * probe.gamma if probe.gamma > 0.0 else probe.omega_p
    i_attach = base.index_of(crw_label(probe.attach_site))
    H[-1, i_attach] = H[i_attach, -1] = probe.f
    return DenseHamiltonian(entries=H, site_labels=base.site_labels + (PROBE_LABEL,))


def _banded_parts(entries: np.ndarray):
    """Split a (possibly non-Hermitian-diagonal) symmetric matrix into
    diagonal, first off-diagonal and the remaining long-range pairs."""
    h = np.asarray(entries, dtype=np.complex128)
    diag = np.ascontiguousarray(np.diag(h))
    off = np.ascontiguousarray(np.diag(h, k=1))
    rest = np.triu(h, k=2)
    ii, jj = np.nonzero(rest)
    vals = rest[ii, jj]
    return diag, off, ii.astype(np.int64), jj.astype(np.int64), vals.astype(np.complex128)


@numba.njit(cache=True, fastmath=True)
def _apply(diag, off, p_i, p_j, p_v, psi, out):
    n = psi.shape[0]
    for i in range(n):
        out[i] = diag[i] * psi[i]
    for i in range(n - 1):
        out[i] += off[i] * psi[i + 1]
        out[i + 1] += off[i] * psi[i]
    for p in range(p_i.shape[0]):
        out[p_i[p]] += p_v[p] * psi[p_j[p]]
        out[p_j[p]] += p_v[p] * psi[p_i[p]]


@numba.njit(cache=True, fastmath=True)
def _rk4_propagate(diag, off, p_i, p_j, p_v, psi0, dt, n_steps, sample_every, probe_idx):
    n = psi0.shape[0]
    psi = psi0.copy()
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    tmp = np.empty(n, dtype=np.complex128)
    n_samples = n_steps // sample_every + 1
    p_e = np.empty(n_samples, dtype=np.float64)
    norm = np.empty(n_samples, dtype=np.float64)
    p_e[0] = psi[probe_idx].real ** 2 + psi[probe_idx].imag ** 2
    acc = 0.0
    for i in range(n):
        acc += psi[i].real ** 2 + psi[i].imag ** 2
    norm[0] = acc
    s = 1
    for step in range(1, n_steps + 1):
        _apply(diag, off, p_i, p_j, p_v, psi, k1)
        for i in range(n):
            k1[i] *= -1j
            tmp[i] = psi[i] + 0.5 * dt * k1[i]
        _apply(diag, off, p_i, p_j, p_v, tmp, k2)
        for i in range(n):
            k2[i] *= -1j
            tmp[i] = psi[i] + 0.5 * dt * k2[i]
        _apply(diag, off, p_i, p_j, p_v, tmp, k3)
        for i in range(n):
            k3[i] *= -1j
            tmp[i] = psi[i] + dt * k3[i]
        _apply(diag, off, p_i, p_j, p_v, tmp, k4)
        for i in range(n):
            k4[i] *= -1j
            psi[i] = psi[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        if step % sample_every == 0:
            p_e[s] = psi[probe_idx].real ** 2 + psi[probe_idx].imag ** 2
            acc = 0.0
            for i in range(n):
                acc += psi[i].real ** 2 + psi[i].imag ** 2
            norm[s] = acc
            s += 1
    return p_e, norm


def _spectral_radius(entries: np.ndarray, iterations: int = 100) -> float:
    """Deterministic power-iteration estimate of the largest |eigenvalue|."""
    n = entries.shape[0]
    v = np.ones(n, dtype=complex) / math.sqrt(n)
    rho = 0.0
    for _ in range(iterations):
        w = entries @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        rho = nw
        v = w / nw
    return float(rho)


def _auto_dt(rho: float, t_max: float) -> float:
    """Step keeping the worst-mode RK4 norm drift under a third of the contract.

    One RK4 step multiplies a mode of frequency lambda by R(-i lambda dt)
    with |R|^2 = 1 - (lambda dt)^6 / 72 + ..., so the accumulated drift
    over t_max / dt steps is t_max lambda^6 dt^5 / 72.
    """
    if rho <= 0.0 or t_max <= 0.0:
        return 0.1
    return (72.0 * (NORM_DRIFT_TOL / 3.0) / (t_max * rho**6)) ** 0.2


def evolve_probe(
    sys: SystemParams,
    probe: ProbeParams,
    m_sites: int,
    t_max: float,
    dt: float | None = None,
    sample_stride: float = 1.0,
) -> TimeSeries:
    """Propagate the initially excited probe and sample P_e on a fixed grid.

    The initial state is the probe excited with all resonators empty.
    ``dt`` defaults to a step derived from the shifted spectral radius such
    that the gamma = 0 norm-conservation contract (NORM_DRIFT_TOL) holds;
    a caller-supplied dt is rounded down so an integer number of steps fits
    each sample stride.  Violation of the contract in a lossless run
    raises IntegratorToleranceError.
    """
    if t_max <= 0.0:
        raise ValueError("t_max must be positive")
    if sample_stride <= 0.0:
        raise ValueError("sample_stride must be positive")
    ham = build_probe_system(sys, probe, m_sites)
    shifted = np.asarray(ham.entries, dtype=np.complex128).copy()
    shifted[np.diag_indices_from(shifted)] -= sys.waveguide.omega_c

    if dt is None:
        rho = 1.05 * _spectral_radius(shifted) + probe.gamma
        dt = _auto_dt(rho, t_max)
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    steps_per_sample = max(1, math.ceil(sample_stride / dt))
    dt_eff = sample_stride / steps_per_sample
    n_samples = int(math.floor(t_max / sample_stride + 1e-9)) + 1
    n_steps = (n_samples - 1) * steps_per_sample

    diag, off, p_i, p_j, p_v = _banded_parts(shifted)
    psi0 = np.zeros(ham.dim, dtype=np.complex128)
    probe_idx = ham.index_of(PROBE_LABEL)
    psi0[probe_idx] = 1.0
    p_e, norm = _rk4_propagate(
        diag, off, p_i, p_j, p_v, psi0, dt_eff, n_steps, steps_per_sample, probe_idx
    )
    if probe.gamma == 0.0:
        drift = float(np.max(np.abs(norm - 1.0)))
        if drift > NORM_DRIFT_TOL:
            raise IntegratorToleranceError(
                f"norm drift {drift:.3e} exceeds {NORM_DRIFT_TOL} at gamma=0; reduce dt"
            )
    times = np.arange(n_samples, dtype=float) * sample_stride
    return TimeSeries(times=times, p_e=p_e, total_norm=norm)


def far_detuning_ratio(sys: SystemParams, probe: ProbeParams, m_sites: int | None = None) -> float:
    """min |omega_p - E_bound| / f over the closed system's bound states.

    The probe is effectively decoupled from the bound states only when
    this ratio is large; a pure exponential-decay reading of P_e(t) is
    unreliable below ~10, and a warning is emitted in that regime.
    Returns inf when there are no bound states or f = 0.
    """
    from .spectrum import diagonalize

    if probe.f == 0.0:
        return math.inf
    floor = max(400, 10 * sys.tga.n)
    result = diagonalize(sys, floor if m_sites is None else max(m_sites, floor))
    if not result.bound_states:
        return math.inf
    ratio = min(abs(probe.omega_p - b.energy) for b in result.bound_states) / probe.f
    if ratio < 10.0:
        warnings.warn(
            f"probe within {ratio:.1f} couplings of a bound state; "
            "the far-detuned (pure decay) picture does not apply",
            stacklevel=2,
        )
    return ratio


def fit_exponential(series: TimeSeries) -> ExponentialFit:
    """Least-squares rate of log P_e over the central 80% of the window.

    Returns the decay rate (P_e ~ exp(-rate t)) together with the rms
    residual of the log-linear fit; a large residual flags visibly
    non-exponential dynamics.  Raises NonPositiveDataError when P_e is not
    strictly positive on the fit window.
    """
    t = series.times
    t0, t1 = t[0], t[-1]
    window = (t >= t0 + 0.1 * (t1 - t0)) & (t <= t0 + 0.9 * (t1 - t0))
    if window.sum() < 2:
        raise NonPositiveDataError("fit window contains fewer than two samples")
    pe = series.p_e[window]
    if np.any(pe <= 0.0):
        raise NonPositiveDataError("P_e must be strictly positive over the fit window")
    tw = t[window]
    slope, intercept = np.polyfit(tw, np.log(pe), 1)
    resid = float(np.sqrt(np.mean((np.log(pe) - (slope * tw + intercept)) ** 2)))
    return ExponentialFit(rate=float(-slope), log_residual_rms=resid)
