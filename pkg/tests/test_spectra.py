"""Spectrum computation, classification rules, persistence."""

import numpy as np
import pytest

import solerlab as sl
from solerlab.spectra import Tolerances, classify


# --- compute_spectrum on synthetic matrices --------------------------------


def test_zero_matrix_spectrum():
    lam = sl.compute_spectrum(np.zeros((6, 6)))
    assert np.all(lam == 0)


def test_diag_matrix_spectrum():
    # mu = {1, -1}  ->  lambda = -i mu = {-i, +i}, sorted by Im
    lam = sl.compute_spectrum(np.diag([1.0, -1.0]))
    assert np.allclose(lam, [-1j, 1j])


def test_rotation_matrix_spectrum():
    # mu = {i, -i}  ->  lambda = {1, -1}: a real unstable/stable pair
    M = np.array([[0.0, 1.0], [-1.0, 0.0]])
    lam = np.sort_complex(sl.compute_spectrum(M))
    assert np.allclose(lam, [-1.0, 1.0], atol=1e-14)


def test_spectrum_sorted_and_vectors_consistent():
    rng = np.random.default_rng(7)
    M = rng.standard_normal((40, 40))
    lam, vecs = sl.compute_spectrum(M, want_vectors=True)
    key = np.lexsort((lam.real, lam.imag))
    assert np.array_equal(key, np.arange(len(lam)))
    for j in (0, 17, 39):
        assert sl.residual_check(M, lam[j], vecs[:, j]) < 1e-10


def test_nonfinite_matrix_raises():
    M = np.zeros((4, 4))
    M[2, 2] = np.nan
    with pytest.raises(sl.EigensolverError):
        sl.compute_spectrum(M)


def test_determinism():
    rng = np.random.default_rng(3)
    M = rng.standard_normal((30, 30))
    a = sl.compute_spectrum(M.copy())
    b = sl.compute_spectrum(M.copy())
    assert np.array_equal(a, b)


# --- residual_check ---------------------------------------------------------


def test_residual_zero_vector_rejected():
    with pytest.raises(ValueError):
        sl.residual_check(np.eye(3), 0.0, np.zeros(3))


def test_residual_exact_and_perturbed():
    M = np.diag([2.0, -1.0, 0.5])
    v = np.array([1.0, 0.0, 0.0])
    assert sl.residual_check(M, -2j, v) == pytest.approx(0.0, abs=1e-15)
    # a relative 1e-3 perturbation of the eigenvector gives a residual of
    # the same order (times the spectral spread)
    w = v + 1e-3 * np.array([0.0, 1.0, 0.0])
    res = sl.residual_check(M, -2j, w)
    assert 1e-4 < res < 1e-2


# --- classification rules on synthetic spectra ------------------------------


def test_classify_zero_mode():
    rec = classify(np.array([0.0 + 1e-7j]), 0.5, np.array([0.0 + 0j]))
    assert rec.tags == ("zero-mode",)
    assert rec.instability_measure == 0.0


def test_classify_essential_unmatched():
    # |Im| = 1.7 >= band edge 0.8 at omega = 0.2, no fine partner
    rec = classify(np.array([1e-5 + 1.7j]), 0.2, np.array([5.0j]))
    assert rec.tags == ("essential",)


def test_classify_in_band_but_matched_is_discrete():
    # a matched eigenvalue inside the band is a genuine discrete mode
    z = 1e-5 + 1.7j
    rec = classify(np.array([z]), 0.2, np.array([z]))
    assert rec.tags == ("discrete",)


def test_classify_discrete_gap_mode():
    z = 2j * 0.9
    rec = classify(np.array([z, -z]), 0.9, np.array([z, -z]))
    assert rec.tags == ("discrete", "discrete")


def test_classify_unstable_matched():
    lam = np.array([-0.05 + 0j, 0.05 + 0j])
    rec = classify(lam, 0.95, lam.copy())
    assert rec.tags == ("unstable", "unstable")
    assert rec.instability_measure == pytest.approx(0.05)


def test_classify_artifact_unmatched_real_part():
    # real-part candidate without a cross-resolution partner
    rec = classify(np.array([0.3 + 5.0j]), 0.5, np.array([0.1 + 40.0j]))
    assert rec.tags == ("artifact-suspect",)
    assert rec.instability_measure == 0.0


def test_classify_mutual_match_required():
    # coarse z is nearest to fine w, but w's nearest coarse partner is z2:
    # the match is not mutual, so z stays artifact-suspect
    coarse = np.array([0.05 + 0.5j, 0.05 + 0.502j])
    fine = np.array([0.05 + 0.503j])
    rec = classify(coarse, 0.5, fine)
    assert rec.tags.count("artifact-suspect") == 1
    assert rec.tags.count("unstable") == 1


def test_classify_tail_test(profile_of, grid64):
    # a synthetic "eigenvector" living entirely at the far end of the grid
    # fails the localization test and demotes the mode to artifact-suspect
    p = profile_of(0.9)
    far = np.zeros((grid64.n, 2))
    far[-1, 0] = 1.0
    near = np.zeros((grid64.n, 2))
    near[0, 1] = 1.0
    vecs = far + near
    lam = np.array([0.05 + 0j, 0.06 + 0j])
    rec = classify(lam, 0.9, lam.copy(), grid=grid64, vectors=vecs,
                   profile_r_max=p.r_max)
    assert rec.tags == ("artifact-suspect", "unstable")


def test_tolerances_respected():
    lam = np.array([5e-4 + 0j])
    loose = classify(lam, 0.9, lam.copy(), tol=Tolerances(re_tol=1e-3))
    strict = classify(lam, 0.9, lam.copy(), tol=Tolerances(re_tol=1e-4))
    assert loose.tags == ("discrete",)
    assert strict.tags == ("unstable",)


# --- end-to-end channel solves ----------------------------------------------


def test_solve_channel_unstable_ell0(profile_of):
    rec = sl.solve_channel(profile_of(0.95), "ell0", n=128)
    assert rec.instability_measure == pytest.approx(0.05482, abs=5e-4)
    un = rec.tagged("unstable")
    assert len(un) == 2
    # conjugation closure: tags come in +/- mirror pairs
    for z in un:
        assert np.abs(un + np.conj(z)).min() < 1e-10


def test_solve_channel_refinement_consistency(profile_of):
    # the decisive eigenvalue is grid-independent well beyond match_tol
    a = sl.solve_channel(profile_of(0.95), "ell0", n=96)
    b = sl.solve_channel(profile_of(0.95), "ell0", n=160)
    assert a.instability_measure == pytest.approx(b.instability_measure, rel=1e-3)


def test_solve_channel_zero_modes(profile_of):
    rec = sl.solve_channel(profile_of(0.9), "ell0", n=128)
    assert len(rec.tagged("zero-mode")) >= 2
    assert rec.instability_measure == 0.0


def test_solve_channel_su11_pair(profile_of):
    rec = sl.solve_channel(profile_of(0.9), sl.ChannelSpec(1, 1), n=96)
    lam = rec.eigenvalues
    i = np.argmin(np.abs(lam - 1.8j))
    assert abs(lam[i] - 1.8j) < 1e-6
    assert rec.tags[i] == "discrete"


def test_solve_channel_essential_band(profile_of):
    rec = sl.solve_channel(profile_of(0.9), "ell0", n=96)
    ess = rec.tagged("essential")
    assert len(ess) > 0
    assert np.abs(ess.imag).min() >= 1.0 - 0.9 - 1e-3


# --- persistence -------------------------------------------------------------


def test_spectrum_json_round_trip(tmp_path, profile_of):
    rec = sl.solve_channel(profile_of(0.95), "ell0", n=96)
    path = tmp_path / "spec.json"
    sl.save_spectrum_json(rec, path)
    back = sl.load_spectrum_json(path)
    assert back.omega == rec.omega
    assert back.channel == rec.channel
    assert back.grid_ref == rec.grid_ref
    assert back.tags == rec.tags
    assert np.allclose(back.eigenvalues, rec.eigenvalues, atol=1e-15)
    assert back.instability_measure == pytest.approx(rec.instability_measure)


def test_spectrum_json_channelspec_round_trip(tmp_path, profile_of):
    rec = sl.solve_channel(profile_of(0.9), sl.ChannelSpec(2, 1, 0.5), n=64)
    path = tmp_path / "spec.json"
    sl.save_spectrum_json(rec, path)
    back = sl.load_spectrum_json(path)
    assert back.channel == sl.ChannelSpec(2, 1, 0.5)
    assert back.tags == rec.tags


def test_channel_fields():
    assert sl.channel_fields("ell0") == (0, 0, 0.0)
    assert sl.channel_fields(sl.ChannelSpec(2, -1, 0.5)) == (2, -1, 0.5)
