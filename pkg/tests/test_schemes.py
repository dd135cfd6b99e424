import itertools
import warnings

import numpy as np
import pytest

from oiasim.channels import ChannelSet, NetworkConfig, draw_cscg, generate_channels
from oiasim.errors import InfeasibleAssignment, ShapeMismatch
from oiasim.grassmann import chordal_distance_sq, orthonormalize, spread_approx
from oiasim.schemes import (ALL_SCHEMES, Scheme, SchemeId, alignment_scores_us, evaluate_selection,
                            feedback_matrix_up, interference_covariance, max_snr_metric,
                            min_inr_metric, moa_user_us, pair_users_oia_up, post_processor, run_scheme,
                            schedule, select_users_oia_us, served_channels, sum_rate)
from oiasim.validation import reference_sum_rate

from conftest import eig_oracle, proj, random_unitary


def aligned_user(rng, K, M, k):
    """Channels of one user whose K-1 interferers share one M-dim subspace."""
    h = draw_cscg((K, 2 * M, M), rng)
    base = draw_cscg((2 * M, M), rng)
    for l in range(K):
        if l != k:
            h[l] = base @ draw_cscg((M, M), rng)
    return h


# -- alignment measure ------------------------------------------------------

def test_moa_k2_is_zero(rng):
    h = draw_cscg((2, 6, 3), rng)
    assert moa_user_us(h, 0) == 0.0
    assert moa_user_us(h, 1) == 0.0


def test_moa_k3_is_chordal(rng):
    h = draw_cscg((3, 6, 3), rng)
    q = orthonormalize(h)
    assert moa_user_us(h, 0) == pytest.approx(chordal_distance_sq(q[1], q[2]), abs=1e-12)


def test_moa_aligned_is_zero(rng):
    h = aligned_user(rng, 3, 3, 0)
    assert moa_user_us(h, 0) == pytest.approx(0.0, abs=1e-10)


def test_alignment_scores_match_per_user(rng):
    ch = generate_channels(NetworkConfig.user_selection(4, 2, 5), 8)
    scores = alignment_scores_us(ch)
    assert scores.shape == (4, 5)
    for k in range(4):
        for n in range(5):
            assert scores[k, n] == pytest.approx(moa_user_us(ch.matrices[k, n], k), abs=1e-12)


# -- user selection ---------------------------------------------------------

def test_select_single_user():
    ch = generate_channels(NetworkConfig.user_selection(3, 2, 1), 1)
    assert select_users_oia_us(ch) == (0, 0, 0)


def test_select_planted_users(rng):
    K, M, S = 3, 2, 6
    ch = generate_channels(NetworkConfig.user_selection(K, M, S), 4)
    planted = (4, 1, 5)
    for k, n in enumerate(planted):
        ch.matrices[k, n] = aligned_user(rng, K, M, k)
    assert select_users_oia_us(ch) == planted
    res = run_scheme(("oia", "us"), ch, 100.0)
    assert res.selection == planted
    assert np.all(res.leakage < 1e-9)


def test_select_matches_exhaustive_scan():
    K, M, S = 3, 2, 5
    ch = generate_channels(NetworkConfig.user_selection(K, M, S), 21)
    expected = []
    for k in range(K):
        scores = [moa_user_us(ch.matrices[k, n], k) for n in range(S)]
        expected.append(int(np.argmin(scores)))
    assert select_users_oia_us(ch) == tuple(expected)


# -- user pairing -----------------------------------------------------------

def test_feedback_k2_zero():
    ch = generate_channels(NetworkConfig.user_pairing(2, 2, 5), 2)
    assert np.all(feedback_matrix_up(ch) == 0.0)


def test_feedback_single_user_k3():
    ch = generate_channels(NetworkConfig.user_pairing(3, 2, 3), 2)
    q = orthonormalize(ch.matrices[0])
    f = feedback_matrix_up(ch)[0]
    expected = [chordal_distance_sq(q[1], q[2]), chordal_distance_sq(q[0], q[2]),
                chordal_distance_sq(q[0], q[1])]
    assert np.allclose(f, expected, atol=1e-12)


def test_feedback_componentwise():
    ch = generate_channels(NetworkConfig.user_pairing(3, 2, 4), 9)
    f = feedback_matrix_up(ch)
    assert f.shape == (4, 3)
    for n in range(4):
        for k in range(3):
            q = orthonormalize(np.delete(ch.matrices[n], k, axis=0))
            assert f[n, k] == pytest.approx(float(spread_approx(q)), abs=1e-12)
    assert np.all(f >= 0)


def test_pairing_zero_per_column():
    f = np.ones((5, 3))
    f[3, 0] = f[0, 1] = f[4, 2] = 0.0
    assert pair_users_oia_up(f) == (3, 0, 4)


def test_pairing_identity():
    f = np.ones((4, 4)) - np.eye(4)
    assert pair_users_oia_up(f) == (0, 1, 2, 3)


def test_pairing_exhaustive(rng):
    f = rng.uniform(size=(6, 3))
    perms = list(itertools.permutations(range(6), 3))
    assert len(perms) == 120
    best = min(sum(f[r, k] for k, r in enumerate(p)) for p in perms)
    pairing = pair_users_oia_up(f)
    assert sum(f[r, k] for k, r in enumerate(pairing)) == pytest.approx(best, abs=1e-12)


def test_pairing_infeasible():
    with pytest.raises(InfeasibleAssignment):
        pair_users_oia_up(np.zeros((2, 3)))


# -- post-processing --------------------------------------------------------

def test_post_processor_block():
    m = 3
    b = np.diag([1.0] * m + [0.0] * m).astype(complex)
    u = post_processor(b)
    assert np.allclose(proj(u), np.diag([0] * m + [1] * m), atol=1e-12)
    assert np.trace(u.conj().T @ b @ u).real == pytest.approx(0.0, abs=1e-12)


def test_post_processor_isotropic():
    u = post_processor(np.eye(6, dtype=complex))
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-10)
    assert np.trace(u.conj().T @ u).real == pytest.approx(3.0)


def test_post_processor_leakage_oracle(rng):
    h = draw_cscg((3, 6, 3), rng)
    b = sum(proj(x) for x in h)
    u = post_processor(b)
    assert np.linalg.norm(u.conj().T @ u - np.eye(3)) < 1e-10
    leak = np.trace(u.conj().T @ b @ u).real
    assert leak == pytest.approx(eig_oracle(b)[3:].sum(), abs=1e-8)


# -- baseline metrics -------------------------------------------------------

def test_min_inr_metric_cases(rng):
    assert min_inr_metric(np.zeros((2, 6, 3), dtype=complex)) == pytest.approx(0.0, abs=1e-12)
    base = draw_cscg((6, 3), rng)
    common = np.stack([base @ draw_cscg((3, 3), rng) for _ in range(3)])
    assert min_inr_metric(common) == pytest.approx(0.0, abs=1e-9)
    h = draw_cscg((3, 6, 3), rng)
    assert min_inr_metric(h) == pytest.approx(eig_oracle(sum(proj(x) for x in h))[3:].sum(), abs=1e-8)


def test_max_snr_metric_cases(rng):
    assert max_snr_metric(np.zeros((4, 2))) == 0.0
    h = np.zeros((4, 2), dtype=complex)
    h[0, 0], h[2, 1] = 2.0, 3.0
    assert max_snr_metric(h) == pytest.approx(13.0)
    h = draw_cscg((6, 3), rng)
    assert max_snr_metric(h) == pytest.approx(eig_oracle(proj(h))[:3].sum(), abs=1e-8)


def test_scale_free_feedback_vs_scaled_inr(rng):
    ch = generate_channels(NetworkConfig.user_pairing(3, 2, 4), 17)
    scaled = ChannelSet(ch.config, ch.matrices.copy())
    scaled.matrices[2] *= 3.7
    assert np.allclose(feedback_matrix_up(ch), feedback_matrix_up(scaled), atol=1e-12)
    before = min_inr_metric(ch.matrices[2, 1:])
    after = min_inr_metric(scaled.matrices[2, 1:])
    assert after == pytest.approx(3.7**2 * before, rel=1e-9)
    assert after != pytest.approx(before)


def test_generator_choice_invariance(rng):
    ch = generate_channels(NetworkConfig.user_selection(4, 2, 6), 33)
    rotated = ChannelSet(ch.config, ch.matrices @ random_unitary(rng, 2))
    assert np.allclose(alignment_scores_us(ch), alignment_scores_us(rotated), atol=1e-10)
    assert select_users_oia_us(ch) == select_users_oia_us(rotated)
    up = generate_channels(NetworkConfig.user_pairing(4, 2, 8), 34)
    up_rot = ChannelSet(up.config, up.matrices @ random_unitary(rng, 2))
    assert pair_users_oia_up(feedback_matrix_up(up)) == pair_users_oia_up(feedback_matrix_up(up_rot))


# -- sum-rate ---------------------------------------------------------------

def test_sum_rate_zero_power():
    ch = generate_channels(NetworkConfig.user_pairing(3, 2, 5), 3)
    sel = (0, 1, 2)
    post, _, _ = evaluate_selection(ch, sel, 1.0)
    assert sum_rate(ch, sel, post, 0.0) == 0.0


def test_sum_rate_without_interference():
    ch = generate_channels(NetworkConfig.user_pairing(3, 2, 3), 4)
    sel = (2, 0, 1)
    for k, n in enumerate(sel):
        for l in range(3):
            if l != k:
                ch.matrices[n, l] = 0.0
    post, rate, leak = evaluate_selection(ch, sel, 10.0)
    expected = 0.0
    for k, n in enumerate(sel):
        a = post[k].conj().T @ ch.matrices[n, k]
        expected += np.log2(np.linalg.det(np.eye(2) + 10.0 / 2 * a @ a.conj().T).real)
    assert rate == pytest.approx(expected, rel=1e-12)
    assert np.all(leak == 0.0)


def test_sum_rate_dual_implementation():
    ch = generate_channels(NetworkConfig.user_selection(3, 2, 4), 5)
    sel = select_users_oia_us(ch)
    post, rate, _ = evaluate_selection(ch, sel, 10.0)
    ref = reference_sum_rate(ch, sel, post, 10.0)
    assert rate == pytest.approx(ref, rel=1e-9)


def test_sum_rate_shape_mismatch():
    ch = generate_channels(NetworkConfig.user_pairing(3, 2, 4), 5)
    with pytest.raises(ShapeMismatch):
        sum_rate(ch, (0, 1), np.zeros((2, 4, 2)), 1.0)
    with pytest.raises(ShapeMismatch):
        sum_rate(ch, (0, 1, 2), np.zeros((3, 4, 1)), 1.0)


def test_served_channels_layout():
    ch = generate_channels(NetworkConfig.user_selection(3, 2, 4), 5)
    served = served_channels(ch, (1, 3, 0))
    assert np.array_equal(served[1, 2], ch.matrices[1, 3, 2])
    b = interference_covariance(served)
    assert np.allclose(b[0], proj(served[0, 1]) + proj(served[0, 2]))


# -- end-to-end -------------------------------------------------------------

@pytest.mark.parametrize("sid", ALL_SCHEMES, ids=str)
def test_run_scheme_valid(sid):
    fw = sid.framework.value
    cfg = NetworkConfig(fw, 3, 2, 9)
    ch = generate_channels(cfg, 6)
    res = run_scheme(sid, ch, 100.0)
    assert len(res.selection) == 3
    assert res.sum_rate > 0 and np.isfinite(res.sum_rate)
    eye = np.eye(2)
    for u in res.post_processors:
        assert np.linalg.norm(u.conj().T @ u - eye) < 1e-10
    if sid.scheme is not Scheme.MAX_SNR:
        b = interference_covariance(served_channels(ch, res.selection))
        for k in range(3):
            assert res.leakage[k] == pytest.approx(eig_oracle(b[k])[2:].sum(), abs=1e-8)


@pytest.mark.parametrize("fw", ["us", "up"])
def test_k2_falls_back_to_max_snr(fw):
    ch = generate_channels(NetworkConfig(fw, 2, 2, 6), 6)
    with pytest.warns(RuntimeWarning):
        sel = schedule(("oia", fw), ch)
    assert sel == schedule(("max-snr", fw), ch)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert run_scheme(("oia", fw), ch, 10.0).sum_rate >= 0


def test_run_scheme_deterministic():
    cfg = NetworkConfig.user_selection(3, 3, 10)
    a = run_scheme(("oia", "us"), generate_channels(cfg, 99), 100.0)
    b = run_scheme(("oia", "us"), generate_channels(cfg, 99), 100.0)
    assert a.selection == b.selection and a.sum_rate == b.sum_rate


def test_framework_mismatch_rejected():
    ch = generate_channels(NetworkConfig.user_pairing(3, 2, 4), 1)
    with pytest.raises(ValueError):
        run_scheme(("oia", "us"), ch, 1.0)


def test_rate_nonnegative_over_powers():
    for seed in range(20):
        ch = generate_channels(NetworkConfig.user_pairing(3, 2, 6), seed)
        for p in (0.0, 0.1, 1.0, 1e3):
            for s in Scheme:
                assert run_scheme(SchemeId(s, ch.framework), ch, p).sum_rate >= 0


def test_oia_us_diversity_gain():
    # more users per cell never hurts on average (500 trials, 2 SE slack)
    means, ses = [], []
    for S in (1, 5, 10):
        cfg = NetworkConfig.user_selection(3, 3, S)
        rates = np.array([run_scheme(("oia", "us"), generate_channels(cfg, (77, S, t)), 100.0).sum_rate
                          for t in range(500)])
        means.append(rates.mean())
        ses.append(rates.std(ddof=1) / np.sqrt(rates.size))
    for i in range(2):
        assert means[i + 1] >= means[i] - 2 * np.hypot(ses[i], ses[i + 1])
