"""Profile solver: invariants, frozen oracles, persistence, cache."""

import numpy as np
import pytest

import solerlab as sl

# Frozen v(0) values from the development-time reference solver
# (adaptive RK45 rtol=1e-12 with 200 bisection steps).  The omega=0.5 entry
# was independently confirmed by a fixed-step RK4 (h=1e-4, r_max=40)
# shooting oracle: 1.3805659225301499.
V0_TABLE = {
    0.99: 0.4191636646,
    0.95: 0.8383869198,
    0.90: 1.0647716979,
    0.80: 1.2745554060,
    0.50: 1.3805659225,
    0.20: 1.2024219715,
}


def test_kappa_analytic(profile_of):
    p = profile_of(0.9)
    assert p.kappa == pytest.approx(np.sqrt(1 - 0.81), abs=1e-14)
    assert p.kappa == pytest.approx(0.43589, abs=1e-5)


def test_invalid_omega_rejected():
    for bad in (-0.1, 0.0, 1.0, 1.5):
        with pytest.raises(ValueError):
            sl.solve_profile(bad, 1.0)


@pytest.mark.parametrize("omega", sorted(V0_TABLE))
def test_frozen_amplitudes(profile_of, omega):
    assert profile_of(omega).v_at_zero == pytest.approx(V0_TABLE[omega], abs=2e-9)


def test_rk4_oracle_omega_half(profile_of):
    # independent fixed-step oracle, agreement well beyond 4 significant digits
    assert profile_of(0.5).v_at_zero == pytest.approx(1.3805659225301499, rel=1e-8)


def test_small_amplitude_monotone(profile_of):
    v0s = [profile_of(w).v_at_zero for w in (0.9, 0.95, 0.99)]
    assert v0s[0] > v0s[1] > v0s[2] > 0


def test_boundary_values(profile_of):
    p = profile_of(0.9)
    v, u = sl.evaluate_profile(p, 0.0)
    assert v == pytest.approx(p.v_at_zero, abs=1e-14)
    assert u == 0.0


def test_v_even_at_origin(profile_of):
    p = profile_of(0.9)
    eps = 1e-6
    v_eps, _ = sl.evaluate_profile(p, eps)
    # |v'(0)| < tol: the O(eps^2) curvature term contributes ~5e-8 here
    assert abs(v_eps - p.v_at_zero) / eps < 1e-6


def test_nodeless(profile_of):
    for w in (0.2, 0.5, 0.9):
        p = profile_of(w)
        assert np.all(p.samples[:, 1] > 0)
        r = np.linspace(0, p.r_max, 2000)
        v, _ = sl.evaluate_profile(p, r)
        assert np.all(v > 0)


@pytest.mark.parametrize("omega", [0.2, 0.5, 0.9, 0.99])
def test_ode_residual(profile_of, omega):
    p = profile_of(omega)
    # 2x finer than the native sample grid, same graded layout
    r = p.r_cut * np.linspace(0, 1, 2 * p.samples.shape[0]) ** 2
    assert sl.profile_residual(p, r[r > 1e-5]) < 1e-6


def test_tail_decay_bound(profile_of):
    p = profile_of(0.9)
    r0 = p.r_max
    v1, u1 = sl.evaluate_profile(p, r0)
    v2, u2 = sl.evaluate_profile(p, r0 + 10.0)
    bound = np.exp(-p.kappa * 10.0) * (abs(v1) + abs(u1)) * 1.01
    assert abs(v2) + abs(u2) <= bound


def test_tail_log_slope(profile_of):
    # the 3-D tail is C exp(-kappa r)/r, so the fitted log-slope of r|v|
    # must match -kappa (within 2%, actually far better)
    p = profile_of(0.5)
    r = np.linspace(0.6 * p.r_max, p.r_max, 200)
    v, _ = sl.evaluate_profile(p, r)
    slope = np.polyfit(r, np.log(r * np.abs(v)), 1)[0]
    assert slope == pytest.approx(-p.kappa, rel=0.02)


def test_f_tends_to_mass(profile_of):
    p = profile_of(0.5)
    v, u = sl.evaluate_profile(p, np.array([p.r_max, 2 * p.r_max]))
    f = 1.0 - (v * v - u * u)
    assert np.allclose(f, 1.0, atol=1e-10)


def test_interpolation_matches_native_samples(profile_of):
    p = profile_of(0.5)
    r, v, u = p.samples[100:-1:371].T
    vi, ui = sl.evaluate_profile(p, r)
    assert np.allclose(vi, v, rtol=0, atol=1e-12)
    assert np.allclose(ui, u, rtol=0, atol=1e-12)


def test_step_refinement_stability(profile_of):
    # tightening the adaptive-step control must not move v(0)
    a = profile_of(0.7).v_at_zero
    b = profile_of(0.7, rtol=1e-12 / 16).v_at_zero
    assert abs(a - b) / a < 1e-6


def test_mass_scaling(profile_of):
    # v0(omega, mass) = sqrt(mass) v0(omega/mass, 1); r scales by 1/mass
    p1 = profile_of(0.45, 1.0)
    p2 = profile_of(0.9, 2.0)
    assert p2.v_at_zero == pytest.approx(np.sqrt(2) * p1.v_at_zero, rel=1e-7)
    assert p2.kappa == pytest.approx(2 * p1.kappa, rel=1e-12)
    r = np.array([0.5, 1.0, 3.0])
    v1, u1 = sl.evaluate_profile(p1, r)
    v2, u2 = sl.evaluate_profile(p2, r / 2)
    assert np.allclose(v2, np.sqrt(2) * v1, rtol=1e-6)
    assert np.allclose(u2, np.sqrt(2) * u1, rtol=1e-6)


def test_negative_r_rejected(profile_of):
    with pytest.raises(ValueError):
        sl.evaluate_profile(profile_of(0.9), [-1.0])


def test_csv_round_trip(tmp_path, profile_of):
    p = profile_of(0.9)
    path = tmp_path / "p.csv"
    sl.save_profile_csv(p, path)
    q = sl.load_profile_csv(path)
    assert q.omega == p.omega and q.mass == p.mass
    assert q.v_at_zero == p.v_at_zero
    assert q.kappa == p.kappa
    assert np.array_equal(q.samples, p.samples)
    r = np.linspace(0, 2 * p.r_max, 500)
    for a, b in zip(sl.evaluate_profile(p, r), sl.evaluate_profile(q, r)):
        assert np.array_equal(a, b)


def test_csv_header_format(tmp_path, profile_of):
    path = tmp_path / "p.csv"
    sl.save_profile_csv(profile_of(0.9), path)
    lines = path.read_text().splitlines()
    keys = [ln.split("=")[0] for ln in lines if ln.startswith("#")]
    assert keys[:4] == ["# omega", "# mass", "# kappa", "# v0"]
    assert "r,v,u" in lines
    body = lines[lines.index("r,v,u") + 1:]
    rs = [float(ln.split(",")[0]) for ln in body]
    assert rs == sorted(rs)


def test_cache_hit_and_first_writer_wins(tmp_path, profile_of):
    cache = sl.ProfileCache(tmp_path)
    p = cache.get(0.9)
    assert p.v_at_zero == pytest.approx(V0_TABLE[0.90], abs=2e-9)
    # poison the cached file: a second get must adopt it, not re-solve
    path = cache._path(0.9, 1.0, sl.SolverOptions())
    poisoned = sl.load_profile_csv(path)
    text = open(path).read().replace(repr(p.v_at_zero), repr(p.v_at_zero + 1.0))
    with open(path, "w") as fh:
        fh.write(text)
    q = cache.get(0.9)
    assert q.v_at_zero == pytest.approx(p.v_at_zero + 1.0)
    assert poisoned.v_at_zero == pytest.approx(p.v_at_zero)
