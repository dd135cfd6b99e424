"""
Self-checks of the numerical core against independent references.

Each check draws its own random instances and reports how many passed.
The references deliberately take a different route from the production
code (eigenvalue log-determinants instead of ``slogdet``, exhaustive
enumeration instead of the Hungarian method, closed-form spectra instead
of an eigensolver).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import complexity
from .assignment import brute_force_assignment, hungarian_rectangular
from .channels import NetworkConfig, draw_cscg, generate_channels
from .grassmann import (chordal_distance_sq, hermitian_eigs, two_subspace_eigs, orthonormalize,
                        pairwise_chordal_sq, principal_angles, spread_approx, spread_exact,
                        sum_projectors)
from .schemes import evaluate_selection, sum_rate


def reference_sum_rate(channels, selection, post_processors, power):
    """
    Sum-rate by explicit loops and eigenvalue log-determinants.

    Independent of :func:`oiasim.schemes.sum_rate`; used as its oracle.
    """
    h = channels.matrices
    k_tx = h.shape[-3]
    m = h.shape[-1]
    total = 0.0
    for k in range(k_tx):
        n = selection[k]
        user = h[k, n] if channels.framework.value == "us" else h[n]
        u = post_processors[k]
        signal = np.zeros((m, m), dtype=complex)
        interference = np.zeros((m, m), dtype=complex)
        for l in range(k_tx):
            a = u.conj().T @ user[l]
            c = a @ a.conj().T
            signal += c
            if l != k:
                interference += c
        num = np.linalg.eigvalsh(np.eye(m) + power / m * signal)
        den = np.linalg.eigvalsh(np.eye(m) + power / m * interference)
        total += sum(math.log2(x) for x in num) - sum(math.log2(x) for x in den)
    return total


def random_generators(rng, count, m, n=None):
    n = 2 * m if n is None else n
    return orthonormalize(draw_cscg((count, n, m), rng))


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    notes: list = field(default_factory=list)

    def record(self, ok, note=None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if note and len(self.notes) < 5:
                self.notes.append(note)


@dataclass
class ValidationReport:
    checks: list

    @property
    def failures(self):
        return sum(c.failed for c in self.checks)

    @property
    def ok(self):
        return self.failures == 0

    def lines(self):
        for c in self.checks:
            status = "PASS" if c.failed == 0 else "FAIL"
            yield f"{status} {c.name}: {c.passed} passed, {c.failed} failed"
            for note in c.notes:
                yield f"    {note}"


def check_two_subspace_spectrum(rng, trials):
    res = CheckResult("closed-form spectrum of two projectors")
    for m in range(1, 7):
        for _ in range(trials):
            a, b = random_generators(rng, 2, m)
            eig = hermitian_eigs(sum_projectors([a, b]))
            ref = two_subspace_eigs(principal_angles(a, b))
            err = float(np.max(np.abs(eig - ref)))
            res.record(err <= 1e-8, f"M={m}: max error {err:.2e}")
    return res


def check_spread_bound(rng, trials):
    res = CheckResult("exact spread bounded by every leave-one-in sum")
    for n_sub in range(2, 7):
        for m in range(1, 5):
            for _ in range(trials):
                gens = random_generators(rng, n_sub, m)
                exact = float(spread_exact(gens))
                sums = np.sum(pairwise_chordal_sq(gens), axis=1)
                ok = exact <= float(spread_approx(gens)) + 1e-10 and np.all(exact <= sums + 1e-10)
                res.record(bool(ok), f"L={n_sub}, M={m}: exact={exact:.3e}")
    return res


def check_alignment_zero(rng, trials):
    res = CheckResult("perfectly aligned interference scores zero")
    for _ in range(trials):
        m = int(rng.integers(1, 5))
        n_sub = int(rng.integers(2, 6))
        base = draw_cscg((2 * m, m), rng)
        mix = draw_cscg((n_sub, m, m), rng)
        gens = orthonormalize(base @ mix)
        exact, approx = float(spread_exact(gens)), float(spread_approx(gens))
        res.record(exact <= 1e-10 and approx <= 1e-10, f"exact={exact:.1e} approx={approx:.1e}")
    return res


def check_assignment(rng, trials):
    res = CheckResult("Hungarian solver against exhaustive search")
    for _ in range(trials):
        k = int(rng.integers(1, 5))
        n = int(rng.integers(k, 9))
        cost = rng.uniform(size=(n, k))
        h, b = hungarian_rectangular(cost), brute_force_assignment(cost)
        res.record(h.objective == b.objective, f"{n}x{k}: {h.objective} vs {b.objective}")
    return res


def check_sum_rate(rng, trials):
    res = CheckResult("sum-rate against loop/eigenvalue reference")
    for t in range(trials):
        k = int(rng.integers(2, 5))
        m = int(rng.integers(1, 4))
        cfg = NetworkConfig.user_pairing(k, m, k + int(rng.integers(0, 4)))
        ch = generate_channels(cfg, rng.integers(2**63))
        sel = tuple(int(i) for i in rng.permutation(cfg.n_users)[:k])
        power = float(10 ** rng.uniform(-1, 3))
        post, rate, _ = evaluate_selection(ch, sel, power)
        ref = reference_sum_rate(ch, sel, post, power)
        ok = abs(rate - ref) <= 1e-9 * max(1.0, abs(ref))
        ok &= sum_rate(ch, sel, post, 0.0) == 0.0
        res.record(bool(ok), f"rate={rate!r} ref={ref!r}")
    return res


def check_flops():
    res = CheckResult("reference flop totals")
    golden = [
        (complexity.psi_oia_up(3, 30, 6), 174_960),
        (complexity.psi_min_inr_up(3, 30, 6), 2_498_040),
        (complexity.psi_max_snr_up(3, 30, 6), 2_485_080),
        (complexity.psi_oia_us(3, 10, 6), 138_240),
        (complexity.psi_op("gso", 6, 3), 396),
        (complexity.psi_op("svd", 6, 3), 5346),
    ]
    for got, want in golden:
        res.record(got == want, f"{got} != {want}")
    return res


def check_chordal(rng, trials):
    res = CheckResult("chordal distance equals sum of squared sines")
    for _ in range(trials):
        m = int(rng.integers(1, 7))
        a, b = random_generators(rng, 2, m)
        d = float(chordal_distance_sq(a, b))
        ref = float(np.sum(np.sin(principal_angles(a, b)) ** 2))
        res.record(abs(d - ref) <= 1e-9, f"{d} vs {ref}")
    return res


def run_validation(seed=42, trials=50):
    """Run every check with ``trials`` instances each; returns a ValidationReport."""
    rng = np.random.default_rng(seed)
    checks = [
        check_chordal(rng, trials),
        check_two_subspace_spectrum(rng, trials),
        check_spread_bound(rng, max(1, trials // 5)),
        check_alignment_zero(rng, trials),
        check_assignment(rng, trials),
        check_sum_rate(rng, trials),
        check_flops(),
    ]
    return ValidationReport(checks)
