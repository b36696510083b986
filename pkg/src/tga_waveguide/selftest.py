"""Built-in invariant suite behind the `selftest` subcommand.

A quick, deterministic sweep over the package's structural invariants:
unitarity, Hermiticity, decoupling, spectral symmetry, the single-cell
closed form, topology consistency and integrator norm conservation.
Prints one line per check and returns a process exit code.
"""

from __future__ import annotations

import math

import numpy as np

from .dynamics import ProbeParams, evolve_probe
from .model import (
    CouplingConfig,
    SystemParams,
    TgaParams,
    WaveguideParams,
    build_tga_hamiltonian,
    build_truncated_system,
    dispersion,
    inverse_dispersion,
)
from .scattering import (
    reflection_n1_analytic,
    solve_scattering,
    solve_single_point,
    sweep_reflection,
    wavepacket_transmission,
)
from .spectrum import edge_state_check, winding_number


def _system(n_cells=1, t1=0.5, t2=0.1, j=0.9, omega_c=20.0, omega_e=20.0,
            boundary="open", mode="two_point") -> SystemParams:
    return SystemParams(
        waveguide=WaveguideParams(omega_c=omega_c),
        tga=TgaParams(n_cells=n_cells, omega_e=omega_e, t1=t1, t2=t2, boundary=boundary),
        coupling=CouplingConfig(j=j, mode=mode),
    )


def _check_dispersion_roundtrip(rng):
    wg = WaveguideParams(omega_c=20.0)
    worst = 0.0
    for energy in rng.uniform(wg.band_min + 1e-3, wg.band_max - 1e-3, size=100):
        k = inverse_dispersion(wg, energy)
        worst = max(worst, abs(dispersion(wg, k) - energy) / abs(energy))
    return worst < 1e-12, f"max relative defect {worst:.2e}"


def _check_hermiticity(rng):
    worst = 0.0
    for _ in range(5):
        sys_params = _system(
            n_cells=int(rng.integers(1, 5)),
            t1=rng.uniform(-1, 1), t2=rng.uniform(-1, 1), j=rng.uniform(0, 2),
            boundary=str(rng.choice(["open", "periodic"])),
            mode=str(rng.choice(["two_point", "single_point"])),
        )
        ham = build_truncated_system(sys_params, 80)
        worst = max(worst, ham.hermiticity_defect())
    return worst < 1e-12, f"max |H - H^dag| = {worst:.2e}"


def _check_decoupling(rng):
    sys_params = _system(n_cells=2, t1=rng.uniform(0.1, 0.8), t2=rng.uniform(0.1, 0.8), j=0.0)
    coupled = np.linalg.eigvalsh(build_truncated_system(sys_params, 60).entries)
    crw = np.linalg.eigvalsh(build_truncated_system(sys_params, 60).entries[:60, :60])
    tga = np.linalg.eigvalsh(build_tga_hamiltonian(sys_params.tga).entries)
    union = np.sort(np.concatenate([crw, tga]))
    worst = float(np.max(np.abs(coupled - union)))
    return worst < 1e-10, f"multiset defect {worst:.2e}"


def _check_bipartite_symmetry(rng):
    sys_params = _system(n_cells=3, t1=rng.uniform(0.1, 0.8), t2=rng.uniform(0.1, 0.8),
                         j=rng.uniform(0.5, 2.0), boundary="periodic")
    evals = np.linalg.eigvalsh(build_truncated_system(sys_params, 80).entries)
    worst = float(np.max(np.abs((evals - 20.0) + (evals - 20.0)[::-1])))
    return worst < 1e-8, f"pairing defect {worst:.2e}"


def _check_n1_closed_form(rng):
    worst = 0.0
    for _ in range(20):
        sys_params = _system(t1=rng.uniform(0.05, 1.0), j=rng.uniform(0.05, 1.0),
                             omega_e=20.0 + rng.uniform(-2, 2), t2=0.0)
        for k in np.linspace(0.05, math.pi - 0.05, 20):
            diff = abs(solve_scattering(sys_params, k).r - reflection_n1_analytic(sys_params, k))
            worst = max(worst, diff)
    return worst < 1e-10, f"max |r - closed form| = {worst:.2e}"


def _check_sweep_unitarity(rng):
    sys_params = _system(n_cells=3, t1=0.1, t2=0.5, j=0.9)
    table = sweep_reflection(sys_params, np.linspace(-1.5, 1.5, 101))
    worst = 0.0
    for row in table.rows:
        if row.in_band:
            worst = max(worst, abs(row.reflection + row.transmission - 1.0))
    return worst < 1e-10, f"max |R + T - 1| = {worst:.2e}"


def _check_single_point_rabi(rng):
    sys_params = _system(mode="single_point")
    worst = 0.0
    for sign in (1.0, -1.0):
        k = inverse_dispersion(sys_params.waveguide, 20.0 + sign * 0.5)
        worst = max(worst, abs(solve_single_point(sys_params, k).reflection - 1.0))
    return worst < 1e-6, f"max |R - 1| at Delta2 = +/- t1: {worst:.2e}"


def _check_topology(rng):
    agree = True
    for _ in range(10):
        t1 = rng.uniform(0.05, 1.0)
        ratio = rng.uniform(1.4, 4.0)
        t2 = t1 * ratio if rng.uniform() < 0.5 else t1 / ratio
        w1 = winding_number(t1, t2, 1024).winding
        w2 = winding_number(t1, t2, 4096).winding
        edge = edge_state_check(TgaParams(n_cells=15, omega_e=20.0, t1=t1, t2=t2))
        agree = agree and (w1 == w2) and (edge == (w1 == 1))
    return agree, "winding grid-independent and matching edge states on 10 draws"


def _check_norm_conservation(rng):
    sys_params = _system(n_cells=1, t1=0.3, t2=0.0, j=0.5)
    probe = ProbeParams(omega_p=17.0, gamma=0.0, f=0.05, attach_site=0)
    series = evolve_probe(sys_params, probe, m_sites=60, t_max=200.0)
    drift = float(np.max(np.abs(series.total_norm - 1.0)))
    return drift < 1e-8, f"norm drift {drift:.2e} at gamma=0"


def _check_wavepacket_free(rng):
    sys_params = _system(j=0.0)
    result = wavepacket_transmission(sys_params, k0=math.pi / 2)
    return abs(result.transmission - 1.0) < 1e-3, f"J=0 transmission {result.transmission:.6f}"


CHECKS = [
    ("dispersion_roundtrip", _check_dispersion_roundtrip),
    ("hermiticity", _check_hermiticity),
    ("decoupling_at_j0", _check_decoupling),
    ("bipartite_symmetry", _check_bipartite_symmetry),
    ("n1_closed_form", _check_n1_closed_form),
    ("sweep_unitarity", _check_sweep_unitarity),
    ("single_point_rabi", _check_single_point_rabi),
    ("topology_consistency", _check_topology),
    ("norm_conservation", _check_norm_conservation),
    ("wavepacket_free_transmission", _check_wavepacket_free),
]


def run_selftest(seed: int = 0) -> int:
    rng = np.random.default_rng(seed)
    failures = 0
    for name, check in CHECKS:
        ok, detail = check(rng)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok:
            failures += 1
    print(f"selftest: {len(CHECKS) - failures}/{len(CHECKS)} checks passed")
    return 0 if failures == 0 else 2
