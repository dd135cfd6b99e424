"""
Opportunistic scheduling schemes for the K-transmitter MIMO interference
channel.

Three schemes are provided in both frameworks:

``oia``
    Users report how well their interference subspaces are aligned
    (min over interferers of summed squared chordal distances); the best
    aligned user is served.
``min-inr``
    Users report the interference power left after the leakage-minimising
    receive filter; the smallest is served.
``max-snr``
    Users report the desired-signal energy captured by the best M-dim
    receive subspace; the largest is served.

Under user selection each cell picks its own user; under user pairing the
central node solves an assignment problem on the N x K report matrix.
"""

import enum
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .assignment import hungarian_rectangular
from .channels import ChannelSet, Framework
from .errors import InfeasibleAssignment, ShapeMismatch
from .grassmann import hermitian, hermitian_eigh, hermitian_eigs, orthonormalize, pairwise_chordal_sq, spread_approx


class Scheme(str, enum.Enum):
    OIA = "oia"
    MIN_INR = "min-inr"
    MAX_SNR = "max-snr"


class SchemeId(NamedTuple):
    scheme: Scheme
    framework: Framework

    @classmethod
    def parse(cls, scheme, framework):
        return cls(Scheme(scheme), Framework(framework))

    def __str__(self):
        return f"{self.scheme.value}-{self.framework.value}"


ALL_SCHEMES = tuple(SchemeId(s, f) for f in Framework for s in Scheme)


# -- per-user metrics -------------------------------------------------------

def _leave_one_out_min(d):
    """``g[..., k] = min_{j != k} sum_{l != k} d[..., j, l]`` for a distance matrix."""
    k = d.shape[-1]
    partial = np.sum(d, axis=-1)[..., :, None] - d
    idx = np.arange(k)
    partial[..., idx, idx] = np.inf
    return np.min(partial, axis=-2)


def moa_user_us(user_channels, k):
    """
    Alignment measure of one user whose serving transmitter is ``k``.

    ``user_channels`` holds the K channels (2M x M) from every transmitter
    to this user. The serving channel is dropped and the spread of the
    remaining K-1 interference subspaces is approximated.
    """
    h = np.asarray(user_channels)
    interf = np.delete(h, k, axis=0)
    return float(spread_approx(orthonormalize(interf)))


def alignment_scores_us(channels: ChannelSet):
    """(K, S) array of alignment measures, entry ``[k, n]`` for user n of cell k."""
    h = channels.matrices
    n_cells = h.shape[0]
    d = pairwise_chordal_sq(orthonormalize(h))
    g = _leave_one_out_min(d)  # (K, S, K): hypothesis on last axis
    return g[np.arange(n_cells), :, np.arange(n_cells)]


def feedback_matrix_up(channels: ChannelSet):
    """N x K matrix of alignment measures, entry ``[n, k]`` for user n served by k."""
    g = channels.matrices
    d = pairwise_chordal_sq(orthonormalize(g))
    return _leave_one_out_min(d)


def _outer(h):
    return h @ hermitian(h)


def _trailing_sum(b, m):
    return np.sum(hermitian_eigs(b)[..., m:], axis=-1)


def min_inr_metric(interference_channels):
    """
    Interference power remaining after leakage-minimising post-processing.

    Sum of the M smallest eigenvalues of ``sum_l H_l H_l^H`` over the raw
    interference channels (2M x M each).
    """
    h = np.asarray(interference_channels)
    m = h.shape[-1]
    return float(_trailing_sum(np.sum(_outer(h), axis=0), m))


def max_snr_metric(desired_channel):
    """
    Sum of the M largest eigenvalues of ``H_d H_d^H``.

    ``H_d`` is 2M x M so the product has rank <= M and the top-M sum is its
    trace, i.e. the squared Frobenius norm.
    """
    return float(np.sum(np.abs(np.asarray(desired_channel)) ** 2))


def min_inr_scores(channels: ChannelSet):
    h = channels.matrices
    m = h.shape[-1]
    p = _outer(h)
    b = np.sum(p, axis=-3, keepdims=True) - p  # interference if that tx serves
    scores = _trailing_sum(b, m)
    if channels.framework is Framework.USER_SELECTION:
        n_cells = h.shape[0]
        return scores[np.arange(n_cells), :, np.arange(n_cells)]
    return scores


def max_snr_scores(channels: ChannelSet):
    h = channels.matrices
    energy = np.sum(np.abs(h) ** 2, axis=(-2, -1))
    if channels.framework is Framework.USER_SELECTION:
        n_cells = h.shape[0]
        return energy[np.arange(n_cells), :, np.arange(n_cells)]
    return energy


# -- selection / pairing ----------------------------------------------------

def select_users_oia_us(channels: ChannelSet):
    """Per cell, the user with the smallest alignment measure (lowest index on ties)."""
    return tuple(int(i) for i in np.argmin(alignment_scores_us(channels), axis=1))


def pair_users_oia_up(feedback):
    """Pairing ``(n_1, ..., n_K)`` minimising the summed feedback entries."""
    f = np.asarray(feedback, dtype=float)
    if f.shape[0] < f.shape[1]:
        raise InfeasibleAssignment(f"{f.shape[0]} users cannot serve {f.shape[1]} transmitters")
    return hungarian_rectangular(f).pairing


# -- receivers and rates ----------------------------------------------------

def post_processor(b, m=None):
    """
    Receive filter minimising interference leakage ``Tr(U^H B U)``.

    Columns are eigenvectors of the Hermitian interference covariance ``b``
    for its ``m`` smallest eigenvalues (``m`` defaults to half the size).
    Works on stacks.
    """
    b = np.asarray(b)
    if m is None:
        m = b.shape[-1] // 2
    _, v = hermitian_eigh(b)
    return v[..., b.shape[-1] - m:]


def matched_filter(desired):
    """Orthonormal basis of the dominant left singular subspace of ``desired``."""
    u, _, _ = np.linalg.svd(desired, full_matrices=False)
    return u[..., :, : desired.shape[-1]]


def served_channels(channels: ChannelSet, selection):
    """
    Channels seen by the scheduled users, shape (K, K, 2M, M).

    Entry ``[k, l]`` is the channel from transmitter ``l`` to the user
    served by transmitter ``k``.
    """
    h = channels.matrices
    sel = np.asarray(selection, dtype=int)
    n_tx = h.shape[-3]
    if sel.shape != (n_tx,):
        raise ShapeMismatch(f"expected {n_tx} selected users, got {sel.shape}")
    if channels.framework is Framework.USER_SELECTION:
        return h[np.arange(n_tx), sel]
    if len(set(sel.tolist())) != n_tx:
        raise ValueError("pairing must map transmitters to distinct users")
    return h[sel]


def interference_covariance(served):
    """Raw interference covariance at each served user, shape (K, 2M, 2M)."""
    p = _outer(served)
    idx = np.arange(served.shape[0])
    return np.sum(p, axis=1) - p[idx, idx]


def _log2det(a):
    sign, logdet = np.linalg.slogdet(a)
    return logdet / np.log(2.0)


def link_rates(served, post, power):
    """Achievable rate of every served link in bits/s/Hz."""
    served = np.asarray(served)
    k_tx, m = served.shape[0], served.shape[-1]
    if served.shape[:2] != (k_tx, k_tx) or post.shape != (k_tx, served.shape[-2], m):
        raise ShapeMismatch("served channels and post-processors disagree")
    # projected channels U_k^H H_{k,l}: (K, K, M, M)
    proj = hermitian(post)[:, None] @ served
    cov = _outer(proj)
    total = np.sum(cov, axis=1)
    idx = np.arange(k_tx)
    interf = total - cov[idx, idx]
    eye = np.eye(m)
    snr = power / m
    return _log2det(eye + snr * total) - _log2det(eye + snr * interf)


def sum_rate_served(served, post, power):
    if power < 0:
        raise ValueError("power must be nonnegative")
    if power == 0:
        return 0.0
    return max(float(np.sum(link_rates(served, post, power))), 0.0)


def sum_rate(channels: ChannelSet, selection, post_processors, power):
    """
    Network sum-rate with Gaussian signalling and equal power per stream.

    ``sum_k log2 |I + P/M sum_l U_k^H H_kl H_kl^H U_k|
    - log2 |I + P/M sum_{l != k} U_k^H H_kl H_kl^H U_k|``, using raw
    (unnormalised) channels. ``power`` is the linear transmit power with
    unit noise variance.
    """
    return sum_rate_served(served_channels(channels, selection), np.asarray(post_processors), power)


# -- end-to-end -------------------------------------------------------------

@dataclass
class SchemeResult:
    scheme: SchemeId
    selection: tuple
    post_processors: np.ndarray
    sum_rate: float
    leakage: np.ndarray


def evaluate_selection(channels: ChannelSet, selection, power, receiver="leakage"):
    """
    Build receive filters for a given schedule and evaluate it.

    ``receiver`` is ``"leakage"`` (interference-leakage minimiser) or
    ``"matched"`` (dominant subspace of the desired channel).
    Returns ``(post_processors, sum_rate, leakage)``.
    """
    served = served_channels(channels, selection)
    b = interference_covariance(served)
    if receiver == "leakage":
        post = post_processor(b)
    elif receiver == "matched":
        idx = np.arange(served.shape[0])
        post = matched_filter(served[idx, idx])
    else:
        raise ValueError(f"unknown receiver {receiver!r}")
    leakage = np.real(np.trace(hermitian(post) @ b @ post, axis1=-2, axis2=-1))
    return post, sum_rate_served(served, post, power), np.maximum(leakage, 0.0)


def _choose(scores, framework, minimise=True):
    if framework is Framework.USER_SELECTION:
        pick = np.argmin if minimise else np.argmax
        return tuple(int(i) for i in pick(scores, axis=1))
    cost = scores if minimise else -scores
    return hungarian_rectangular(cost).pairing


def schedule(scheme: SchemeId, channels: ChannelSet):
    """Selected user per transmitter for ``scheme`` on this realisation."""
    scheme = SchemeId.parse(*scheme)
    if scheme.framework is not channels.framework:
        raise ValueError(f"scheme {scheme} does not match {channels.framework.value} channels")
    fw = channels.framework
    if scheme.scheme is Scheme.OIA:
        if channels.config.K == 2:
            warnings.warn("K=2: alignment measure is identically zero, "
                          "falling back to max-SNR ordering", RuntimeWarning, stacklevel=2)
            return _choose(max_snr_scores(channels), fw, minimise=False)
        if fw is Framework.USER_SELECTION:
            return _choose(alignment_scores_us(channels), fw)
        return _choose(feedback_matrix_up(channels), fw)
    if scheme.scheme is Scheme.MIN_INR:
        return _choose(min_inr_scores(channels), fw)
    return _choose(max_snr_scores(channels), fw, minimise=False)


def run_scheme(scheme, channels: ChannelSet, power) -> SchemeResult:
    """Schedule, build receivers and evaluate the sum-rate for one trial."""
    scheme = SchemeId.parse(*scheme)
    selection = schedule(scheme, channels)
    receiver = "matched" if scheme.scheme is Scheme.MAX_SNR else "leakage"
    post, rate, leak = evaluate_selection(channels, selection, power, receiver)
    return SchemeResult(scheme, selection, post, rate, leak)
