"""
Monte Carlo sweeps and CSV output.

Every grid point averages the sum-rate over independent channel draws.
Trial ``t`` of grid point ``g`` always uses the seed
``SeedSequence(seed, spawn_key=(g, t))``, and results are collected in
trial order, so output is identical for any number of worker threads.
"""

import csv
import enum
import io
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .channels import Framework, NetworkConfig, generate_channels
from .complexity import scheme_flops
from .errors import InvalidConfig, InvalidSpec, UnsupportedCombination
from .schemes import ALL_SCHEMES, Scheme, SchemeId, run_scheme

THREADS_ENV = "OIA_SIM_THREADS"

CSV_HEADER = ("sweep,scheme,framework,K,M,N,snr_db,trials,"
              "mean_sum_rate,stderr_sum_rate,mean_leakage,flops")


class SweepKind(str, enum.Enum):
    SNR = "sumrate-vs-snr"
    USERS = "sumrate-vs-users"
    ANTENNAS = "sumrate-vs-antennas"
    COMPLEXITY = "complexity"
    VALIDATE = "validate"


def _strictly_increasing(seq):
    return all(a < b for a, b in zip(seq, seq[1:]))


@dataclass(frozen=True)
class ExperimentSpec:
    """
    One sweep. ``M``, ``users`` and ``snr_db`` are grids; the sweep visits
    their Cartesian product in that nesting order (usually only one of them
    has more than one value).
    """

    sweep: SweepKind
    K: int
    M: tuple
    users: tuple
    snr_db: tuple = (0.0,)
    schemes: tuple = ALL_SCHEMES
    trials: int = 1000
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(self, "sweep", SweepKind(self.sweep))
        for name in ("M", "users", "snr_db"):
            val = getattr(self, name)
            val = tuple(val) if np.iterable(val) else (val,)
            object.__setattr__(self, name, val)
            if not val:
                raise InvalidSpec(f"{name} grid is empty", name)
            if not _strictly_increasing(val):
                raise InvalidSpec(f"{name} grid must be strictly increasing", name)
        object.__setattr__(self, "schemes", tuple(SchemeId.parse(*s) for s in self.schemes))
        if not self.schemes:
            raise InvalidSpec("no schemes selected", "schemes")
        if self.trials < 1:
            raise InvalidSpec("trials must be >= 1", "trials")
        if self.K < 2:
            raise InvalidSpec("K must be >= 2", "K")
        for m, n in itertools.product(self.M, self.users):
            for fw in self.frameworks:
                try:
                    NetworkConfig(fw, self.K, m, n)
                except InvalidConfig as exc:
                    raise InvalidSpec(str(exc), "M" if m < 1 else "users") from exc

    @property
    def frameworks(self):
        return tuple(fw for fw in Framework if any(s.framework is fw for s in self.schemes))

    def grid(self):
        return list(itertools.product(self.M, self.users, self.snr_db))


@dataclass
class ResultRow:
    sweep: str
    scheme: str
    framework: str
    K: int
    M: int
    N: int
    snr_db: Optional[float] = None
    trials: Optional[int] = None
    mean_sum_rate: Optional[float] = None
    stderr_sum_rate: Optional[float] = None
    mean_leakage: Optional[float] = None
    flops: Optional[int] = None


def default_workers():
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise InvalidSpec(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        if value < 1:
            raise InvalidSpec(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        return value
    return os.cpu_count() or 1


def trial_seed(seed, grid_index, trial):
    return np.random.SeedSequence(seed, spawn_key=(grid_index, trial))


def _run_trial(config, schemes, power, seed):
    channels = generate_channels(config, seed)
    out = np.empty((len(schemes), 2))
    for i, sid in enumerate(schemes):
        res = run_scheme(sid, channels, power)
        out[i] = res.sum_rate, float(np.mean(res.leakage))
    return out


def simulate_point(config, schemes, snr_db, trials, seed, grid_index=0, workers=None):
    """
    Per-trial ``(sum_rate, mean_leakage)`` for each scheme at one grid point.

    Returns an array of shape ``(trials, len(schemes), 2)`` in trial order.
    """
    power = 10.0 ** (snr_db / 10.0)
    seeds = [trial_seed(seed, grid_index, t) for t in range(trials)]
    workers = default_workers() if workers is None else workers

    def job(s):
        return _run_trial(config, schemes, power, s)

    if workers <= 1:
        results = [job(s) for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, seeds))
    return np.stack(results)


def _stderr(x):
    if x.size < 2:
        return 0.0
    return float(np.std(x, ddof=1) / math.sqrt(x.size))


def _rate_sweep(spec, workers):
    rows = []
    for g, (m, n, snr) in enumerate(spec.grid()):
        by_scheme = {}
        for fw in spec.frameworks:
            group = [s for s in spec.schemes if s.framework is fw]
            data = simulate_point(NetworkConfig(fw, spec.K, m, n), group, snr,
                                  spec.trials, spec.seed, g, workers)
            for i, sid in enumerate(group):
                by_scheme[sid] = data[:, i]
        for sid in spec.schemes:
            d = by_scheme[sid]
            rows.append(ResultRow(
                spec.sweep.value, sid.scheme.value, sid.framework.value, spec.K, m, n,
                snr_db=snr, trials=spec.trials,
                mean_sum_rate=float(np.mean(d[:, 0])),
                stderr_sum_rate=_stderr(d[:, 0]),
                mean_leakage=float(np.mean(d[:, 1]))))
    return rows


def _complexity_sweep(spec):
    rows = []
    for m, n in itertools.product(spec.M, spec.users):
        for sid in spec.schemes:
            flops = scheme_flops(sid.scheme, sid.framework, spec.K, n, 2 * m)
            rows.append(ResultRow(spec.sweep.value, sid.scheme.value, sid.framework.value,
                                  spec.K, m, n, flops=flops))
    return rows


def check_supported(spec):
    if spec.sweep is SweepKind.COMPLEXITY:
        for sid in spec.schemes:
            if sid.framework is Framework.USER_SELECTION and sid.scheme is not Scheme.OIA:
                raise UnsupportedCombination(
                    f"complexity of {sid.scheme.value} under user selection is not modelled")


def run_sweep(spec: ExperimentSpec, workers=None):
    """
    Evaluate a sweep and return its :class:`ResultRow` list.

    Rows are ordered by grid point, then by the order of ``spec.schemes``.
    For rate sweeps the transmit power is ``10**(snr_db/10)`` (unit noise).
    """
    check_supported(spec)
    if spec.sweep is SweepKind.COMPLEXITY:
        return _complexity_sweep(spec)
    if spec.sweep is SweepKind.VALIDATE:
        raise InvalidSpec("use oiasim.validation.run_validation for the oracle suite")
    return _rate_sweep(spec, workers)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def format_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    names = [f.name for f in fields(ResultRow)]
    for row in rows:
        writer.writerow([_fmt(getattr(row, name)) for name in names])
    return buf.getvalue()


def emit_csv(rows, destination):
    """Write rows to a path or an open text stream, header first."""
    text = format_csv(rows)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text)


def read_csv(source):
    """Parse a CSV written by :func:`emit_csv` back into ResultRow objects."""
    text = source.read() if hasattr(source, "read") else Path(source).read_text()
    reader = csv.DictReader(io.StringIO(text))
    types = {"K": int, "M": int, "N": int, "trials": int, "flops": int,
             "snr_db": float, "mean_sum_rate": float, "stderr_sum_rate": float,
             "mean_leakage": float}
    rows = []
    for rec in reader:
        kw = {k: (types[k](v) if v != "" else None) if k in types else v for k, v in rec.items()}
        rows.append(ResultRow(**kw))
    return rows


def users_gain_at_matched_rate(rows):
    """
    How many more users selection needs than pairing for the same sum-rate.

    Takes the rows of a users sweep and, for each scheme and every pairing
    grid point, interpolates the user count at which the selection curve
    reaches the same mean rate. Returns ``{scheme: [(N_up, N_us / N_up), ...]}``;
    points outside the selection curve's range are omitted.
    """
    curves = {}
    for r in rows:
        curves.setdefault((r.scheme, r.framework, r.snr_db), []).append((r.N, r.mean_sum_rate))
    out = {}
    for (scheme, fw, snr), pts in curves.items():
        if fw != Framework.USER_PAIRING.value:
            continue
        us = sorted(curves.get((scheme, Framework.USER_SELECTION.value, snr), []))
        if len(us) < 2:
            continue
        n_us, r_us = np.array(us).T
        if not _strictly_increasing(list(r_us)):
            continue
        ratios = []
        for n, rate in sorted(pts):
            if r_us[0] <= rate <= r_us[-1]:
                ratios.append((n, float(np.interp(rate, r_us, n_us)) / n))
        out[scheme if snr is None else f"{scheme}@{snr:g}dB"] = ratios
    return out
