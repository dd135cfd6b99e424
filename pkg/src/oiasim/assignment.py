"""
Rectangular linear assignment: pick one distinct row for every column of
an N x K cost matrix (N >= K) so that the summed cost is minimal.

Rows are users, columns are transmitters. ``pairing[k]`` is the row chosen
for column ``k``. Among several optimal pairings the lexicographically
smallest vector ``(pairing[0], ..., pairing[K-1])`` is returned, by both
the Hungarian solver and the brute-force reference.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleAssignment, NonFiniteCost, TooLarge

BRUTE_FORCE_MAX_ROWS = 10
BRUTE_FORCE_MAX_COLS = 5


@dataclass(frozen=True)
class AssignmentResult:
    pairing: tuple
    objective: float

    def as_matrix(self, n_rows):
        """0/1 pairing matrix P with ``P[pairing[k], k] = 1``."""
        p = np.zeros((n_rows, len(self.pairing)), dtype=int)
        p[list(self.pairing), np.arange(len(self.pairing))] = 1
        return p


def _validate(cost):
    c = np.asarray(cost, dtype=float)
    if c.ndim != 2:
        raise ValueError(f"cost matrix must be 2-D, got shape {c.shape}")
    n, k = c.shape
    if n < k:
        raise InfeasibleAssignment(f"{n} rows cannot cover {k} columns")
    if not np.all(np.isfinite(c)):
        raise NonFiniteCost("cost matrix contains NaN or Inf")
    return c


def objective(cost, pairing):
    """Exactly rounded sum of the selected entries (order independent)."""
    return math.fsum(float(cost[r, k]) for k, r in enumerate(pairing))


def _tolerance(c):
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    return 1e-12 * max(1.0, c.shape[1] * scale)


def _shortest_augmenting_path(a):
    """
    Hungarian method with potentials on a K x N matrix (K <= N).

    Each of the K "workers" (transmitters) is inserted in turn and matched
    along a Dijkstra-style shortest augmenting path. Returns the job chosen
    by every worker and the dual potentials ``(u, v)``; ``v <= 0`` and
    ``v = 0`` on unmatched jobs, so reduced costs ``a - u - v`` bound the
    extra cost of using any edge.
    """
    k_rows, n_cols = a.shape
    # 1-based bookkeeping; index 0 is the virtual root
    u = np.zeros(k_rows + 1)
    v = np.zeros(n_cols + 1)
    owner = np.zeros(n_cols + 1, dtype=int)
    way = np.zeros(n_cols + 1, dtype=int)
    for i in range(1, k_rows + 1):
        owner[0] = i
        j0 = 0
        minv = np.full(n_cols + 1, np.inf)
        used = np.zeros(n_cols + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = owner[j0]
            free = ~used[1:]
            cur = a[i0 - 1] - u[i0] - v[1:]
            improve = free & (cur < minv[1:])
            minv[1:][improve] = cur[improve]
            way[1:][improve] = j0
            masked = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(masked)) + 1
            delta = masked[j1 - 1]
            u[owner[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    pairing = np.empty(k_rows, dtype=int)
    for j in range(1, n_cols + 1):
        if owner[j]:
            pairing[owner[j] - 1] = j - 1
    return pairing, u[1:], v[1:]


def _solve(c):
    pairing, _, _ = _shortest_augmenting_path(c.T)
    return pairing


def hungarian_rectangular(cost) -> AssignmentResult:
    """
    Minimum-cost assignment of distinct rows to all columns.

    Solved directly on the rectangular matrix (no square padding) with the
    shortest-augmenting-path Hungarian method in O(K^2 N). A second pass
    enforces the lexicographic tie-break: for each column in turn it tries
    smaller rows whose reduced cost is zero and keeps the first one that
    still admits an optimal completion.

    Raises
    ------
    InfeasibleAssignment
        If there are fewer rows than columns.
    NonFiniteCost
        If any entry is NaN or infinite.
    """
    c = _validate(cost)
    n_rows, n_cols = c.shape
    if n_cols == 0:
        return AssignmentResult((), 0.0)
    pairing, u, v = _shortest_augmenting_path(c.T)
    best = objective(c, pairing)
    tol = _tolerance(c)
    reduced = c - u[None, :] - v[:, None]

    cur = [int(r) for r in pairing]
    taken = []
    for k in range(n_cols):
        for r in range(cur[k]):
            if r in taken or reduced[r, k] > tol:
                continue
            rest_rows = [i for i in range(n_rows) if i not in taken and i != r]
            rest_cols = list(range(k + 1, n_cols))
            tail = []
            if rest_cols:
                sub = _solve(c[np.ix_(rest_rows, rest_cols)])
                tail = [rest_rows[i] for i in sub]
            cand = cur[:k] + [r] + tail
            if objective(c, cand) <= best + tol:
                cur = cand
                break
        taken.append(cur[k])
    return AssignmentResult(tuple(cur), objective(c, cur))


def brute_force_assignment(cost) -> AssignmentResult:
    """
    Exhaustive reference solver over all injective column-to-row maps.

    Uses the same lexicographic tie-break and tolerance as
    :func:`hungarian_rectangular`. Refuses problems with more than 10 rows
    or 5 columns.
    """
    c = _validate(cost)
    n_rows, n_cols = c.shape
    if n_rows > BRUTE_FORCE_MAX_ROWS or n_cols > BRUTE_FORCE_MAX_COLS:
        raise TooLarge(f"{n_rows}x{n_cols} exceeds brute-force limits")
    if n_cols == 0:
        return AssignmentResult((), 0.0)
    perms = np.array(list(itertools.permutations(range(n_rows), n_cols)))
    approx = c[perms, np.arange(n_cols)].sum(axis=1)
    tol = _tolerance(c)
    near = np.flatnonzero(approx <= approx.min() + 4 * tol)
    exact = [objective(c, perms[i]) for i in near]
    best = min(exact)
    # ``near`` is in lexicographic order, so the first hit wins
    for i, val in zip(near, exact):
        if val <= best + tol:
            return AssignmentResult(tuple(int(r) for r in perms[i]), val)
    raise AssertionError("unreachable")
