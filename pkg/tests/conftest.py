import numpy as np
import pytest

from oiasim.channels import draw_cscg
from oiasim.grassmann import orthonormalize

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        detail = getattr(item, "acceptance_detail", "")
        _ACCEPTANCE.append((number, title, report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, detail in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"[{status}] criterion {number}: {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_generator(rng, n, m, batch=()):
    return orthonormalize(draw_cscg(tuple(batch) + (n, m), rng))


def random_unitary(rng, m):
    return orthonormalize(draw_cscg((m, m), rng))


def proj(a):
    return a @ a.conj().T


def eig_oracle(b):
    """
    Eigenvalues of a Hermitian matrix through its real symmetric embedding.

    ``[[Re, -Im], [Im, Re]]`` has every eigenvalue of ``b`` twice; a
    different LAPACK path (real symmetric) than the complex solver under test.
    """
    b = 0.5 * (b + b.conj().T)
    real = np.block([[b.real, -b.imag], [b.imag, b.real]])
    w = np.sort(np.linalg.eigvalsh(real))[::-1]
    return w[::2]


def random_pairing_rates(K, M, N, snr_db, trials, seed, grid_index):
    """
    Sum-rates of uniformly random pairing on the harness's channel draws.

    Test-only lower anchor: K distinct users picked at random, each with the
    leakage-minimising receiver.
    """
    from oiasim.channels import NetworkConfig, generate_channels
    from oiasim.harness import trial_seed
    from oiasim.schemes import evaluate_selection

    cfg = NetworkConfig.user_pairing(K, M, N)
    power = 10.0 ** (snr_db / 10.0)
    rates = np.empty(trials)
    for t in range(trials):
        ch = generate_channels(cfg, trial_seed(seed, grid_index, t))
        pick = np.random.default_rng([seed, grid_index, t, 7]).permutation(N)[:K]
        rates[t] = evaluate_selection(ch, tuple(int(i) for i in pick), power)[1]
    return rates


def gap_verdict(mean_a, se_a, mean_b, se_b):
    """'resolved' if a > b beyond 2 SE, 'tie' within 2 SE, 'reversed' otherwise."""
    diff = mean_a - mean_b
    se = float(np.hypot(se_a, se_b))
    if diff > 2 * se:
        return "resolved"
    if diff >= -2 * se:
        return "tie"
    return "reversed"
