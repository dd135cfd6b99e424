"""
Dense complex linear algebra and geometry on the Grassmann manifold.

A point of G(M, N) is represented by a *generator*: an N x M complex matrix
with orthonormal columns. Generators are unique only up to right
multiplication by an M x M unitary, so everything computed here depends on
generators through projectors ``A @ A^H`` or through invariant spectra.

Functions accept plain ``numpy.ndarray`` objects. Most of them also accept
stacks of matrices (leading batch axes), which the scheduling code relies
on to process every user of a trial in one call.
"""

from typing import NamedTuple, Sequence

import numpy as np

from .errors import EmptyList, NotHermitian, RankDeficient, ShapeMismatch

ORTHONORMAL_TOL = 1e-10
RANK_RATIO = 1e-9
HERMITIAN_TOL = 1e-6
DEGENERATE_GAP = 1e-10


def hermitian(a):
    """Conjugate transpose over the last two axes."""
    return np.conj(np.swapaxes(a, -1, -2))


def column_rank_ok(a, ratio=RANK_RATIO):
    """True where the smallest singular value exceeds ``ratio`` times the largest.

    Works on a single matrix or a stack; returns a bool array for stacks.
    """
    s = np.linalg.svd(a, compute_uv=False)
    return s[..., -1] > ratio * s[..., 0]


def orthonormalize(a, check_rank=True):
    """
    Orthonormal basis for the column space of ``a``.

    Parameters
    ----------
    a : ndarray, shape (..., N, M)
        Tall matrix (or stack of matrices) with N >= M.
    check_rank : bool
        Verify full numerical column rank first.

    Returns
    -------
    ndarray, shape (..., N, M)
        Generator(s) ``Q`` with ``Q^H Q = I`` and ``span(Q) = span(a)``.

    Raises
    ------
    RankDeficient
        If some input has smallest singular value <= 1e-9 times its largest.
    """
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-2] < a.shape[-1]:
        raise ShapeMismatch(f"expected tall matrix, got shape {a.shape}")
    if check_rank and not np.all(column_rank_ok(a)):
        raise RankDeficient("matrix does not have full numerical column rank")
    q, _ = np.linalg.qr(a)
    return q


def projector(a):
    return a @ hermitian(a)


def is_generator(a, tol=ORTHONORMAL_TOL):
    a = np.asarray(a)
    eye = np.eye(a.shape[-1])
    return bool(np.all(np.linalg.norm(hermitian(a) @ a - eye, axis=(-2, -1)) <= tol))


def _check_pair(a, b):
    if a.shape[-2:] != b.shape[-2:]:
        raise ShapeMismatch(f"generator shapes differ: {a.shape} vs {b.shape}")


def chordal_distance_sq(a, b):
    """
    Squared chordal distance ``M - tr(A^H B B^H A)`` between two subspaces.

    Both arguments must be generators of the same shape. Broadcasts over
    leading axes. The result is clipped into ``[0, M]``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    _check_pair(a, b)
    m = a.shape[-1]
    c = hermitian(a) @ b
    overlap = np.sum(np.abs(c) ** 2, axis=(-2, -1))
    return np.clip(m - overlap, 0.0, m)


def principal_angles(a, b):
    """
    Principal angles between ``span(a)`` and ``span(b)``, ascending.

    The cosines are the singular values of ``A^H B``; they are clamped to
    [0, 1] before ``arccos`` so roundoff cannot produce NaN.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    _check_pair(a, b)
    cosines = np.linalg.svd(hermitian(a) @ b, compute_uv=False)
    # svd returns descending singular values -> ascending angles
    return np.arccos(np.clip(cosines, 0.0, 1.0))


def _as_stack(generators):
    if isinstance(generators, np.ndarray):
        stack = generators
    else:
        if len(generators) == 0:
            raise EmptyList("need at least one generator")
        shapes = {np.shape(g) for g in generators}
        if len(shapes) != 1:
            raise ShapeMismatch(f"generators have differing shapes {shapes}")
        stack = np.stack([np.asarray(g) for g in generators])
    if stack.ndim < 3 or stack.shape[-3] == 0:
        raise EmptyList("need at least one generator")
    return stack


def sum_projectors(generators):
    """Hermitian matrix ``sum_l H_l H_l^H`` over the last-but-two axis."""
    stack = _as_stack(generators)
    total = np.sum(stack @ hermitian(stack), axis=-3)
    return 0.5 * (total + hermitian(total))


def _symmetrize(b):
    b = np.asarray(b)
    if b.shape[-1] != b.shape[-2]:
        raise ShapeMismatch(f"expected square matrix, got {b.shape}")
    sym = 0.5 * (b + hermitian(b))
    scale = max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    if np.max(np.abs(b - sym), initial=0.0) > HERMITIAN_TOL * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    return sym


def hermitian_eigs(b):
    """Real eigenvalues of a Hermitian matrix (or stack), sorted descending."""
    w = np.linalg.eigvalsh(_symmetrize(b))
    return w[..., ::-1]


def hermitian_eigh(b):
    """Eigenpairs of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, v)`` with ``v[..., :, i]`` the eigenvector for ``w[..., i]``.
    """
    w, v = np.linalg.eigh(_symmetrize(b))
    return w[..., ::-1], v[..., ::-1]


class SubspaceMean(NamedTuple):
    basis: np.ndarray
    objective: float
    degenerate: bool


def subspace_mean(generators, dim=None):
    """
    Grassmannian mean of a set of subspaces.

    The mean minimises the summed squared chordal distance to the inputs;
    it is spanned by the dominant ``dim`` eigenvectors of the projector sum.

    Parameters
    ----------
    generators : sequence of ndarray (N, M) or ndarray (L, N, M)
    dim : int, optional
        Subspace dimension, defaults to M.

    Returns
    -------
    SubspaceMean
        ``basis`` (N x dim generator), the attained ``objective``
        ``L*dim - sum of top eigenvalues``, and ``degenerate`` set when
        the eigenvalue gap at the cut is below 1e-10 so the mean is not
        unique.
    """
    stack = _as_stack(generators)
    m = stack.shape[-1] if dim is None else dim
    n_sub = stack.shape[-3]
    w, v = hermitian_eigh(sum_projectors(stack))
    degenerate = bool(m < w.shape[-1] and abs(w[m - 1] - w[m]) < DEGENERATE_GAP)
    objective = max(n_sub * m - float(np.sum(w[:m])), 0.0)
    return SubspaceMean(v[:, :m], objective, degenerate)


def spread_exact(generators):
    """
    Spread of subspaces about their Grassmannian mean.

    Equal to ``L*M`` minus the sum of the M largest eigenvalues of the
    projector sum, i.e. the sum of the trailing eigenvalues. Zero iff all
    subspaces coincide. Batched over leading axes of an ndarray input.
    """
    stack = _as_stack(generators)
    n_sub, m = stack.shape[-3], stack.shape[-1]
    w = hermitian_eigs(sum_projectors(stack))
    return np.maximum(n_sub * m - np.sum(w[..., :m], axis=-1), 0.0)


def pairwise_chordal_sq(generators):
    """Matrix ``D[j, l] = d_c^2(H_j, H_l)`` (batched over leading axes)."""
    stack = _as_stack(generators)
    m = stack.shape[-1]
    a = stack[..., :, None, :, :]
    b = stack[..., None, :, :, :]
    overlap = np.sum(np.abs(hermitian(a) @ b) ** 2, axis=(-2, -1))
    d = np.clip(m - overlap, 0.0, m)
    idx = np.arange(stack.shape[-3])
    d[..., idx, idx] = 0.0
    return d


def spread_approx(generators):
    """
    Cheap upper bound on :func:`spread_exact`.

    ``min_j sum_l d_c^2(H_j, H_l)``: the mean is replaced by the input
    subspace closest to all the others. For two subspaces this is just
    their squared chordal distance; for one it is zero.
    """
    d = pairwise_chordal_sq(generators)
    return np.min(np.sum(d, axis=-1), axis=-1)


def two_subspace_eigs(angles: Sequence[float]):
    """
    Closed-form spectrum of ``H1 H1^H + H2 H2^H`` from principal angles.

    ``[1+cos t_1, ..., 1+cos t_M, 1-cos t_M, ..., 1-cos t_1]`` for angles
    sorted ascending; the result is sorted descending.
    """
    c = np.cos(np.sort(np.asarray(angles, dtype=float)))
    return np.concatenate([1.0 + c, (1.0 - c)[::-1]])
