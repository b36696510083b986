"""Shared builders, oracles and heavyweight session fixtures."""

from __future__ import annotations

import math

import numpy as np
import pytest

from tga_waveguide import (
    CouplingConfig,
    ProbeParams,
    SystemParams,
    TgaParams,
    WaveguideParams,
    build_truncated_system,
    diagonalize,
    evolve_probe,
)

OMEGA0 = 20.0


def make_system(
    n_cells: int = 1,
    t1: float = 0.5,
    t2: float = 0.1,
    j: float = 0.9,
    omega_c: float = OMEGA0,
    omega_e: float = OMEGA0,
    boundary: str = "open",
    mode: str = "two_point",
    t3_custom: float = 0.0,
) -> SystemParams:
    return SystemParams(
        waveguide=WaveguideParams(omega_c=omega_c),
        tga=TgaParams(
            n_cells=n_cells, omega_e=omega_e, t1=t1, t2=t2,
            boundary=boundary, t3_custom=t3_custom,
        ),
        coupling=CouplingConfig(j=j, mode=mode),
    )


def deep_tga_system(boundary: str) -> SystemParams:
    """N=29 strongly coupled setup used for the bound-state and probe studies."""
    return make_system(n_cells=15, t1=0.1, t2=0.2, j=3.0, boundary=boundary)


DEEP_PROBE = ProbeParams(omega_p=16.65, gamma=2e-4, f=2e-3, attach_site=0)


def ring_spectrum(n_sites: int, hop: float, onsite: float) -> np.ndarray:
    """Closed form for a uniform ring: onsite + 2 hop cos(2 pi m / n)."""
    m = np.arange(n_sites)
    return np.sort(onsite + 2.0 * hop * np.cos(2.0 * np.pi * m / n_sites))


def local_minima_times(times: np.ndarray, p_e: np.ndarray, t_window: float,
                       threshold: float = 0.5) -> list[float]:
    """Times of strict local minima of P_e below ``threshold`` within the window."""
    out = []
    for i in range(1, len(times) - 1):
        if times[i] > t_window:
            break
        if p_e[i] < p_e[i - 1] and p_e[i] < p_e[i + 1] and p_e[i] < threshold:
            out.append(float(times[i]))
    return out


def two_level_rabi_period(sys_obc: SystemParams, probe: ProbeParams,
                          m_sites: int = 800) -> float:
    """Independent oracle for the probe oscillation period.

    The probe resonates with the degenerate bound-state pair; within that
    subspace it couples only to the bright combination, with strength
    g = f sqrt(sum |v(attach)|^2) over the pair.  The effective two-level
    beat period is 2 pi / sqrt(4 g^2 + delta^2).
    """
    res = diagonalize(sys_obc, m_sites)
    energies = np.array([b.energy for b in res.bound_states])
    if len(energies) < 2:
        raise AssertionError("expected a bound-state pair for the two-level reduction")
    pair_energies = energies[np.argsort(np.abs(energies - probe.omega_p))[:2]]
    i_attach = build_truncated_system(sys_obc, m_sites).site_labels.index(
        f"crw:{probe.attach_site}"
    )
    amp_sq = 0.0
    for b_energy in pair_energies:
        col = int(np.argmin(np.abs(res.eigenvalues - b_energy)))
        amp_sq += abs(res.eigenvectors[i_attach, col]) ** 2
    g = probe.f * math.sqrt(amp_sq)
    delta = probe.omega_p - float(np.mean(pair_energies))
    return 2.0 * math.pi / math.sqrt(4.0 * g * g + delta * delta)


@pytest.fixture(scope="session")
def spectrum_pbc_800():
    return diagonalize(deep_tga_system("periodic"), 800)


@pytest.fixture(scope="session")
def spectrum_obc_800():
    return diagonalize(deep_tga_system("open"), 800)


@pytest.fixture(scope="session")
def probe_run_pbc():
    return evolve_probe(deep_tga_system("periodic"), DEEP_PROBE, m_sites=400, t_max=2000.0)


@pytest.fixture(scope="session")
def probe_run_obc():
    return evolve_probe(deep_tga_system("open"), DEEP_PROBE, m_sites=400, t_max=2000.0)
