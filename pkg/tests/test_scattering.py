"""Plane-wave solver, closed form, sweeps and the wave-packet oracle."""

import cmath
import math

import numpy as np
import pytest

from tga_waveguide import (
    DivisionNearZeroError,
    EmptyGridError,
    OutOfBandError,
    inverse_dispersion,
    reflection_n1_analytic,
    solve_scattering,
    solve_single_point,
    sweep_reflection,
    wavepacket_transmission,
)
from conftest import OMEGA0, make_system


def k_at_delta2(sys_params, delta2):
    return inverse_dispersion(sys_params.waveguide, sys_params.tga.omega_e + delta2)


def reflection_at(sys_params, delta2):
    k = k_at_delta2(sys_params, delta2)
    if sys_params.coupling.mode == "single_point":
        return solve_single_point(sys_params, k).reflection
    return solve_scattering(sys_params, k).reflection


class TestTwoPointSolver:
    def test_decoupled_waveguide_is_transparent(self):
        sys_params = make_system(n_cells=2, j=0.0)
        sol = solve_scattering(sys_params, 1.1)
        assert abs(sol.r) < 1e-14
        assert abs(sol.t - 1.0) < 1e-14
        assert max(abs(x) for x in sol.tga_amplitudes) < 1e-14

    def test_unitarity_residual_continuity(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            sys_params = make_system(
                n_cells=int(rng.integers(1, 6)),
                t1=rng.uniform(0.05, 1.0), t2=rng.uniform(0.05, 1.0),
                j=rng.uniform(0.05, 1.5), omega_e=OMEGA0 + rng.uniform(-1.5, 1.5),
            )
            k = rng.uniform(0.1, math.pi - 0.1)
            sol = solve_scattering(sys_params, k)
            n = sys_params.tga.n
            assert abs(sol.reflection + sol.transmission - 1.0) < 1e-10
            assert sol.residual < 1e-10
            assert abs(1.0 + sol.r - (sol.a + sol.b)) < 1e-12
            phase = cmath.exp(1j * k * n)
            assert abs(sol.a * phase + sol.b / phase - sol.t * phase) < 1e-12

    def test_transmission_reciprocity(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            sys_params = make_system(
                n_cells=int(rng.integers(1, 5)),
                t1=rng.uniform(0.05, 0.9), t2=rng.uniform(0.05, 0.9),
                j=rng.uniform(0.1, 1.2), omega_e=OMEGA0 + rng.uniform(-1.0, 1.0),
            )
            k = rng.uniform(0.2, math.pi - 0.2)
            left = solve_scattering(sys_params, k, incident="left")
            right = solve_scattering(sys_params, k, incident="right")
            assert abs(left.transmission - right.transmission) < 1e-10
            assert right.residual < 1e-10

    def test_requires_open_two_point(self):
        with pytest.raises(ValueError):
            solve_scattering(make_system(boundary="periodic"), 1.0)
        with pytest.raises(ValueError):
            solve_scattering(make_system(mode="single_point"), 1.0)
        with pytest.raises(OutOfBandError):
            solve_scattering(make_system(), math.pi)
        with pytest.raises(OutOfBandError):
            solve_scattering(make_system(), 1e-9)


class TestClosedFormN1:
    def test_decoupled_identity(self):
        # at J=0 the two channel terms sum to exactly 1, cancelling the -1
        sys_params = make_system(t1=0.31, t2=0.0, j=0.0, omega_e=19.3)
        for k in np.linspace(0.07, math.pi - 0.07, 50):
            assert abs(reflection_n1_analytic(sys_params, k)) < 1e-12

    def test_matches_linear_system(self):
        rng = np.random.default_rng(12)
        worst = 0.0
        for _ in range(20):
            sys_params = make_system(
                t1=rng.uniform(1e-3, 1.0), t2=0.0, j=rng.uniform(1e-3, 1.0),
                omega_e=OMEGA0 + rng.uniform(-2.0, 2.0),
            )
            for k in np.linspace(0.01, math.pi - 0.01, 200):
                diff = abs(solve_scattering(sys_params, k).r
                           - reflection_n1_analytic(sys_params, k))
                worst = max(worst, diff)
        assert worst < 1e-10

    def test_midband_value_cross_checked(self):
        sys_params = make_system(t1=0.5, t2=0.0, j=0.9)
        k = math.pi / 2
        r = reflection_n1_analytic(sys_params, k)
        assert r == pytest.approx(solve_scattering(sys_params, k).r, abs=1e-12)

    def test_two_complete_reflection_peaks_off_rabi(self):
        # resonant N=1 sweep: exactly two unit-reflection points, displaced
        # from the bare +/- t1 splitting by the two-path interference
        sys_params = make_system(t1=0.5, t2=0.0, j=0.9)
        grid = np.linspace(-1.0, 1.0, 4001)
        refl = np.array([reflection_at(sys_params, d2) for d2 in grid])
        peaks = [
            i for i in range(1, len(grid) - 1)
            if refl[i] > refl[i - 1] and refl[i] > refl[i + 1] and refl[i] > 0.999
        ]
        assert len(peaks) == 2
        for i in peaks:
            assert min(abs(grid[i] - 0.5), abs(grid[i] + 0.5)) > 0.01

    def test_pole_reported_not_nan(self):
        # J = 0 with Delta2 = -t1 zeroes the first channel denominator
        sys_params = make_system(t1=0.25, t2=0.0, j=0.0)
        k = inverse_dispersion(sys_params.waveguide, OMEGA0 - 0.25)
        with pytest.raises(DivisionNearZeroError):
            reflection_n1_analytic(sys_params, k)

    def test_requires_single_cell(self):
        with pytest.raises(ValueError):
            reflection_n1_analytic(make_system(n_cells=2), 1.0)


class TestSinglePoint:
    def test_rabi_peaks_at_bare_splitting(self):
        sys_params = make_system(t1=0.5, t2=0.0, mode="single_point")
        for sign in (+1.0, -1.0):
            refl = reflection_at(sys_params, sign * 0.5)
            assert abs(refl - 1.0) < 1e-6

    def test_decoupled(self):
        sol = solve_single_point(make_system(j=0.0, mode="single_point"), 0.9)
        assert abs(sol.r) < 1e-14
        assert abs(sol.t - 1.0) < 1e-14

    def test_unitarity_and_residual(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            sys_params = make_system(
                n_cells=int(rng.integers(1, 5)),
                t1=rng.uniform(0.05, 0.9), t2=rng.uniform(0.05, 0.9),
                j=rng.uniform(0.1, 1.2), mode="single_point",
            )
            sol = solve_single_point(sys_params, rng.uniform(0.2, math.pi - 0.2))
            assert abs(sol.reflection + sol.transmission - 1.0) < 1e-10
            assert sol.residual < 1e-10

    def test_mode_guard(self):
        with pytest.raises(ValueError):
            solve_single_point(make_system(mode="two_point"), 1.0)


class TestSweeps:
    def test_topological_windows(self):
        trivial = make_system(n_cells=3, t1=0.5, t2=0.1)
        nontrivial = make_system(n_cells=3, t1=0.1, t2=0.5)
        for d2 in np.linspace(-0.05, 0.05, 11):
            assert reflection_at(trivial, d2) < 0.05
            assert reflection_at(nontrivial, d2) > 0.99

    def test_narrow_peak_at_zero_detuning(self):
        sys_params = make_system(n_cells=3, t1=0.2, t2=0.1)
        r0 = reflection_at(sys_params, 0.0)
        assert r0 > 0.3
        assert r0 > reflection_at(sys_params, 0.02)
        assert r0 > 3.0 * reflection_at(sys_params, 0.05)

    def test_fano_asymmetry_off_resonance(self):
        sys_params = make_system(t1=0.5, t2=0.0, omega_e=18.0)
        grid = np.linspace(0.05, 3.95, 801)
        refl = np.array([reflection_at(sys_params, d2) for d2 in grid])
        d2_star = grid[int(np.argmax(refl))]
        assert refl.max() > 0.999
        lo = reflection_at(sys_params, d2_star - 0.5)
        hi = reflection_at(sys_params, d2_star + 0.5)
        assert abs(hi - lo) > 0.2

    def test_rows_and_flags(self):
        sys_params = make_system(n_cells=2, t1=0.3, t2=0.2)
        grid = np.linspace(-3.0, 3.0, 61)  # extends past both band edges
        table = sweep_reflection(sys_params, grid)
        assert len(table.rows) == 61
        in_band = [row for row in table.rows if row.in_band]
        out_band = [row for row in table.rows if not row.in_band]
        assert in_band and out_band
        for row in out_band:
            assert math.isnan(row.k) and math.isnan(row.reflection)
        for row in in_band:
            assert abs(row.reflection + row.transmission - 1.0) < 1e-10
            assert -1e-10 <= row.reflection <= 1.0 + 1e-10
            assert -1e-10 <= row.transmission <= 1.0 + 1e-10
        assert [row.delta2 for row in table.rows] == [pytest.approx(d) for d in grid]

    def test_single_point_dispatch(self):
        sys_params = make_system(t1=0.5, t2=0.0, mode="single_point")
        table = sweep_reflection(sys_params, [0.5])
        assert abs(table.rows[0].reflection - 1.0) < 1e-6

    def test_empty_grid(self):
        with pytest.raises(EmptyGridError):
            sweep_reflection(make_system(), [])


class TestWavepacketOracle:
    def test_free_packet_transmits(self):
        result = wavepacket_transmission(make_system(j=0.0), k0=math.pi / 2)
        assert abs(result.transmission - 1.0) < 1e-3
        assert result.reflection + result.transmission > 1.0 - 1e-3

    def test_reflection_window_blocks_packet(self):
        # nontrivial-phase window: the packet at Delta2 = 0 is fully reflected
        sys_params = make_system(n_cells=3, t1=0.1, t2=0.5)
        result = wavepacket_transmission(sys_params, k0=math.pi / 2)
        assert result.transmission < 0.02
        assert result.reflection > 0.97

    def test_agrees_with_solver_at_flat_point(self):
        # plateau point: T varies by < 1e-2 across the packet's momentum support
        sys_params = make_system(n_cells=2, t1=0.3, t2=0.6, j=0.5)
        k0 = 1.3
        solver_t = solve_scattering(sys_params, k0).transmission
        result = wavepacket_transmission(sys_params, k0)
        assert abs(result.transmission - solver_t) < 0.02
        assert abs(result.reflection + result.transmission + result.trapped_norm - 1.0) < 1e-3

    def test_sigma_k_guard(self):
        with pytest.raises(ValueError):
            wavepacket_transmission(make_system(), k0=1.0, sigma_k=0.2)
