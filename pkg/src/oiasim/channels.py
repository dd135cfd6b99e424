"""
Random MIMO interference-channel realisations.

Two layouts are supported:

* user selection: ``H[k, n, l]`` is the 2M x M channel from transmitter
  ``l`` to user ``n`` of cell ``k`` (S users per cell);
* user pairing: ``G[n, k]`` is the channel from transmitter ``k`` to user
  ``n`` (any user may be served by any transmitter).

Every entry is i.i.d. CN(0, 1). A realisation is a pure function of the
configuration and a seed, so trials can be generated in any order or in
parallel.
"""

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidConfig
from .grassmann import column_rank_ok

log = logging.getLogger(__name__)

MAX_REDRAWS = 16


class Framework(str, enum.Enum):
    USER_SELECTION = "us"
    USER_PAIRING = "up"


@dataclass(frozen=True)
class NetworkConfig:
    """
    K transmitters with M antennas each, receivers with 2M antennas.

    ``n_users`` is the total number of users N. In the user-selection
    framework it must split evenly into K cells of ``group_size`` users.
    """

    framework: Framework
    K: int
    M: int
    n_users: int

    def __post_init__(self):
        object.__setattr__(self, "framework", Framework(self.framework))
        if self.K < 2:
            raise InvalidConfig(f"need K >= 2 transmitters, got {self.K}")
        if self.M < 1:
            raise InvalidConfig(f"need M >= 1 antennas, got {self.M}")
        if self.framework is Framework.USER_SELECTION:
            if self.n_users < self.K or self.n_users % self.K:
                raise InvalidConfig(
                    f"user selection needs N divisible by K (N={self.n_users}, K={self.K})")
        elif self.n_users < self.K:
            raise InvalidConfig(
                f"user pairing needs N >= K (N={self.n_users}, K={self.K})")

    @property
    def n_rx(self):
        return 2 * self.M

    @property
    def n_tx(self):
        return self.M

    @property
    def group_size(self):
        """Users per cell S; only meaningful for user selection."""
        return self.n_users // self.K

    @property
    def shape(self):
        """Array shape of the channel tensor for this layout."""
        if self.framework is Framework.USER_SELECTION:
            return (self.K, self.group_size, self.K, self.n_rx, self.n_tx)
        return (self.n_users, self.K, self.n_rx, self.n_tx)

    @classmethod
    def user_selection(cls, K, M, group_size):
        return cls(Framework.USER_SELECTION, K, M, K * group_size)

    @classmethod
    def user_pairing(cls, K, M, n_users):
        return cls(Framework.USER_PAIRING, K, M, n_users)


@dataclass
class ChannelSet:
    """One channel realisation.

    ``matrices`` has shape ``(K, S, K, 2M, M)`` for user selection
    (cell, user, transmitter) and ``(N, K, 2M, M)`` for user pairing
    (user, transmitter).
    """

    config: NetworkConfig
    matrices: np.ndarray
    redraws: int = field(default=0)

    @property
    def framework(self):
        return self.config.framework

    @property
    def count(self):
        return int(np.prod(self.matrices.shape[:-2]))


def as_seed_sequence(seed):
    """Accept an int, a sequence of ints or a SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (int, np.integer)):
        return np.random.SeedSequence(int(seed))
    seed = [int(s) for s in seed]
    return np.random.SeedSequence(seed[0], spawn_key=tuple(seed[1:]))


def draw_cscg_matrix(rows, cols, rng):
    """Matrix of i.i.d. CN(0, 1) entries (real and imaginary variance 1/2)."""
    return draw_cscg((rows, cols), rng)


def draw_cscg(shape, rng):
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) * np.sqrt(0.5)


def generate_channels(config: NetworkConfig, seed) -> ChannelSet:
    """
    Draw a full channel realisation for ``config``.

    The whole tensor comes from one stream derived from ``seed``. A matrix
    that fails the column-rank test is replaced by a draw from a substream
    keyed on its flat index, so the rest of the realisation is untouched.
    """
    ss = as_seed_sequence(seed)
    rng = np.random.default_rng(ss)
    mats = draw_cscg(config.shape, rng)

    flat = mats.reshape((-1,) + mats.shape[-2:])
    redraws = 0
    bad = np.flatnonzero(~column_rank_ok(flat))
    for idx in bad:
        for attempt in range(MAX_REDRAWS):
            sub = np.random.SeedSequence(
                ss.entropy, spawn_key=tuple(ss.spawn_key) + (int(idx), attempt + 1))
            cand = draw_cscg(flat.shape[-2:], np.random.default_rng(sub))
            redraws += 1
            if column_rank_ok(cand):
                flat[idx] = cand
                break
        else:
            raise InvalidConfig("could not draw a full-rank channel matrix")
    if redraws:
        log.info("redrew %d rank-deficient channel matrices", redraws)
    return ChannelSet(config, flat.reshape(mats.shape), redraws)
