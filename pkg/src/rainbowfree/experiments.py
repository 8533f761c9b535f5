"""Monte Carlo harness around the colourability phase transition.

Estimates Pr[random hypergraph is rainbow-free colourable] over grids of
edge probabilities, locates where the empirical curve crosses 1/2, and
validates the analytic first-moment formula. Every trial draws its own
seed from a fixed mix of (master seed, n index, p index, trial index), so
sweeps are reproducible and independent of scheduling; worker processes
only change wall time, never results.
"""

from __future__ import annotations

import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import Iterable, Sequence, TextIO

from .errors import CapacityError, InvalidInputError, NotBracketedError
from .hypergraph import Hypergraph
from .random_model import (
    RandomModelParams,
    expected_type1_count,
    mix64,
    sample,
    threshold_p_star,
)
from .solver import (
    ORACLE_EVAL_LIMIT,
    PEEL_SUBSET_LIMIT,
    count_type1_colourings,
    decide_oracle,
    decide_peel,
    decide_type1,
)

__all__ = [
    "DEFAULT_ALPHAS",
    "SweepConfig",
    "SweepRecord",
    "CrossingEstimate",
    "ExpectationReport",
    "DominanceReport",
    "run_sweep",
    "estimate_crossing",
    "validate_expectation",
    "type1_dominance",
    "wilson_interval",
    "isotonic_nonincreasing",
    "derive_trial_seed",
    "format_csv",
    "write_csv",
    "records_to_json",
    "CSV_HEADER",
]

DEFAULT_ALPHAS = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0)
METHODS = ("oracle", "peel", "type1-then-peel")

CSV_HEADER = "n,k,p,alpha,trials,successes,fraction,ci_low,ci_high,type1_fraction,seconds"

# Trials are dispatched in fixed-size blocks; block boundaries are part of
# nothing observable, since per-point statistics are sums over trials.
_BLOCK_TRIALS = 25


def derive_trial_seed(master: int, n_index: int, p_index: int, trial_index: int) -> int:
    """Fixed per-trial seed derivation; independent of execution order."""
    h = mix64(master)
    h = mix64(h ^ n_index)
    h = mix64(h ^ p_index)
    return mix64(h ^ trial_index)


@dataclass(frozen=True)
class SweepConfig:
    """A sweep over (n, p) points at fixed uniformity.

    The probability grid is either explicit (``p_grid``) or derived per n
    as multiples ``alpha * p_star(n, k)``. Derived probabilities above 1
    are rejected, not clamped, like any other out-of-range probability.
    """

    k: int
    n_list: tuple[int, ...]
    trials: int
    seed: int
    p_grid: tuple[float, ...] | None = None
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    method: str = "type1-then-peel"
    confidence: float = 0.95

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(self.n_list))
        object.__setattr__(self, "alphas", tuple(self.alphas))
        if self.p_grid is not None:
            object.__setattr__(self, "p_grid", tuple(self.p_grid))
        if self.k < 2:
            raise InvalidInputError(f"uniformity must be >= 2, got {self.k}")
        if not self.n_list:
            raise InvalidInputError("n_list must not be empty")
        for n in self.n_list:
            if n < 2:
                raise InvalidInputError(f"sweep vertex counts must be >= 2, got {n}")
        if self.trials < 1:
            raise InvalidInputError(f"trials must be >= 1, got {self.trials}")
        if self.method not in METHODS:
            raise InvalidInputError(
                f"unknown method {self.method!r}; expected one of {METHODS}"
            )
        if not 0.0 < self.confidence < 1.0:
            raise InvalidInputError(
                f"confidence must lie in (0, 1), got {self.confidence}"
            )
        if self.p_grid is not None:
            for p in self.p_grid:
                if not 0.0 <= p <= 1.0:
                    raise InvalidInputError(
                        f"probabilities must lie in [0, 1], got {p}"
                    )
            if not self.p_grid:
                raise InvalidInputError("p_grid must not be empty")
        else:
            if not self.alphas:
                raise InvalidInputError("alphas must not be empty")
            for a in self.alphas:
                if a <= 0:
                    raise InvalidInputError(f"alpha multiples must be > 0, got {a}")


@dataclass(frozen=True)
class SweepRecord:
    """Empirical colourability at one (n, p) point."""

    n: int
    k: int
    p: float
    alpha: float
    trials: int
    successes: int
    fraction: float
    ci_low: float
    ci_high: float
    type1_fraction: float
    seconds: float


@dataclass(frozen=True)
class CrossingEstimate:
    """Interpolated probability where the colourable fraction crosses 1/2."""

    n: int
    k: int
    p_half: float
    p_star: float
    ratio: float


@dataclass(frozen=True)
class ExpectationReport:
    """Monte Carlo check of the expected singleton-classes colouring count."""

    n: int
    k: int
    p: float
    trials: int
    analytic: float
    sample_mean: float
    std_error: float
    z_score: float


@dataclass(frozen=True)
class DominanceReport:
    """Among colourable samples, how often a singleton-classes colouring exists."""

    n: int
    k: int
    p: float
    trials: int
    colourable_trials: int
    type1_trials: int
    conditional_fraction: float | None


def wilson_interval(
    successes: int, trials: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Stays inside [0, 1] and behaves sensibly at 0 or ``trials`` successes,
    which Wald intervals do not near the transition.
    """
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise InvalidInputError(f"successes {successes} outside 0..{trials}")
    if not 0.0 < confidence < 1.0:
        raise InvalidInputError(f"confidence must lie in (0, 1), got {confidence}")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    phat = successes / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2.0 * trials)) / denom
    margin = (
        z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials))
    ) / denom
    # the interval always contains phat analytically; enforce it under
    # floating-point rounding as well
    low = max(0.0, min(centre - margin, phat))
    high = min(1.0, max(centre + margin, phat))
    return low, high


def isotonic_nonincreasing(
    values: Sequence[float], weights: Sequence[float] | None = None
) -> list[float]:
    """Weighted least-squares nonincreasing fit by pool-adjacent-violators."""
    if weights is None:
        weights = [1.0] * len(values)
    if len(weights) != len(values):
        raise InvalidInputError("values and weights must have equal length")
    # blocks of (weight sum, weighted value sum, member count)
    blocks: list[list[float]] = []
    for y, w in zip(values, weights):
        blocks.append([float(w), float(w) * float(y), 1])
        while len(blocks) >= 2:
            prev, cur = blocks[-2], blocks[-1]
            if prev[1] / prev[0] >= cur[1] / cur[0]:
                break
            cur[0] += prev[0]
            cur[1] += prev[1]
            cur[2] += prev[2]
            del blocks[-2]
    fitted: list[float] = []
    for w_sum, wy_sum, count in blocks:
        fitted.extend([wy_sum / w_sum] * count)
    return fitted


def _resolve_points(config: SweepConfig):
    """Expand the config into (n_index, n, p_index, p, alpha) tuples."""
    points = []
    for n_index, n in enumerate(config.n_list):
        p_star = threshold_p_star(n, config.k)
        if config.p_grid is not None:
            probs = config.p_grid
        else:
            probs = []
            for alpha in config.alphas:
                p = alpha * p_star
                if p > 1.0:
                    raise InvalidInputError(
                        f"alpha={alpha} gives p={p:.6g} > 1 at n={n}; "
                        "probabilities are rejected, not clamped"
                    )
                probs.append(p)
        for p_index, p in enumerate(probs):
            points.append((n_index, n, p_index, float(p), float(p) / p_star))
    return points


def _check_capacity(config: SweepConfig) -> None:
    for n in config.n_list:
        if config.method == "oracle":
            if config.k**n > ORACLE_EVAL_LIMIT:
                raise CapacityError(
                    f"method 'oracle' cannot handle n={n} at k={config.k}: "
                    f"{config.k}**{n} > {ORACLE_EVAL_LIMIT}"
                )
        elif 2**n > PEEL_SUBSET_LIMIT:
            raise CapacityError(
                f"method {config.method!r} cannot handle n={n}: "
                f"2**{n} > {PEEL_SUBSET_LIMIT}"
            )


def _decide_trial(h: Hypergraph, method: str) -> tuple[bool, bool]:
    """Decide one sampled hypergraph; returns (colourable, type1 available)."""
    t1 = decide_type1(h)
    type1_available = t1.colourable is True
    if method == "oracle":
        colourable = bool(decide_oracle(h).colourable)
    elif method == "peel":
        colourable = bool(decide_peel(h).colourable)
    else:  # type1-then-peel: fall back to peeling only when type1 is unknown
        if t1.colourable is None:
            colourable = bool(decide_peel(h).colourable)
        else:
            colourable = type1_available
    return colourable, type1_available


def _run_block(config: SweepConfig, point, lo: int, hi: int):
    """Run trials lo..hi-1 of one sweep point; returns partial sums."""
    n_index, n, p_index, p, _alpha = point
    started = time.perf_counter()
    successes = 0
    type1_hits = 0
    for trial in range(lo, hi):
        seed = derive_trial_seed(config.seed, n_index, p_index, trial)
        h = sample(RandomModelParams(n=n, k=config.k, p=p, seed=seed))
        colourable, type1_available = _decide_trial(h, config.method)
        successes += colourable
        type1_hits += type1_available
    return successes, type1_hits, time.perf_counter() - started


def run_sweep(config: SweepConfig, threads: int = 1) -> list[SweepRecord]:
    """Run all trials of a sweep and aggregate per (n, p) point.

    Capacity is checked up front; no partial results are ever produced.
    ``threads`` caps worker processes and has no effect on the records
    apart from the wall-time column.
    """
    if threads < 1:
        raise InvalidInputError(f"threads must be >= 1, got {threads}")
    _check_capacity(config)
    points = _resolve_points(config)
    tasks = []
    for point_index in range(len(points)):
        for lo in range(0, config.trials, _BLOCK_TRIALS):
            tasks.append((point_index, lo, min(lo + _BLOCK_TRIALS, config.trials)))
    if threads == 1:
        results = [
            _run_block(config, points[pi], lo, hi) for pi, lo, hi in tasks
        ]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_run_block, config, points[pi], lo, hi)
                for pi, lo, hi in tasks
            ]
            results = [f.result() for f in futures]
    sums = [[0, 0, 0.0] for _ in points]
    for (point_index, _lo, _hi), (successes, type1_hits, seconds) in zip(
        tasks, results
    ):
        sums[point_index][0] += successes
        sums[point_index][1] += type1_hits
        sums[point_index][2] += seconds
    records = []
    for (n_index, n, p_index, p, alpha), (successes, type1_hits, seconds) in zip(
        points, sums
    ):
        ci_low, ci_high = wilson_interval(successes, config.trials, config.confidence)
        records.append(
            SweepRecord(
                n=n,
                k=config.k,
                p=p,
                alpha=alpha,
                trials=config.trials,
                successes=successes,
                fraction=successes / config.trials,
                ci_low=ci_low,
                ci_high=ci_high,
                type1_fraction=type1_hits / config.trials,
                seconds=seconds,
            )
        )
    return records


def estimate_crossing(records: Iterable[SweepRecord]) -> CrossingEstimate:
    """Locate where the (isotonically smoothed) success curve crosses 1/2.

    Records must belong to a single (n, k); fractions are first smoothed to
    be nonincreasing in p (pool-adjacent-violators weighted by trial
    counts), then linearly interpolated at 1/2.
    """
    recs = sorted(records, key=lambda r: r.p)
    if len(recs) < 2:
        raise InvalidInputError("crossing estimation needs at least two records")
    ns = {r.n for r in recs}
    ks = {r.k for r in recs}
    if len(ns) != 1 or len(ks) != 1:
        raise InvalidInputError("crossing estimation needs records for a single (n, k)")
    n, k = recs[0].n, recs[0].k
    smoothed = isotonic_nonincreasing(
        [r.fraction for r in recs], [r.trials for r in recs]
    )
    ps = [r.p for r in recs]
    p_half = None
    for i in range(len(recs) - 1):
        f0, f1 = smoothed[i], smoothed[i + 1]
        if f0 >= 0.5 >= f1:
            if f0 == f1:
                p_half = ps[i]
            else:
                p_half = ps[i] + (f0 - 0.5) / (f0 - f1) * (ps[i + 1] - ps[i])
            break
    if p_half is None:
        raise NotBracketedError(
            f"smoothed fractions ({smoothed[0]:.3g}..{smoothed[-1]:.3g}) "
            "never straddle 0.5"
        )
    p_star = threshold_p_star(n, k)
    return CrossingEstimate(n=n, k=k, p_half=p_half, p_star=p_star, ratio=p_half / p_star)


def validate_expectation(
    n: int, k: int, p: float, trials: int, seed: int
) -> ExpectationReport:
    """Monte Carlo mean of the singleton-classes colouring count vs analytic.

    Each trial samples a hypergraph and counts the (k-1)-subsets contained
    in no edge; the analytic comparator is C(n, k-1) * (1-p)^(n-k+1).
    """
    analytic = expected_type1_count(n, k, p)
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    counts = []
    for trial in range(trials):
        trial_seed = derive_trial_seed(seed, 0, 0, trial)
        h = sample(RandomModelParams(n=n, k=k, p=p, seed=trial_seed))
        counts.append(count_type1_colourings(h))
    mean = statistics.fmean(counts)
    stdev = statistics.stdev(counts) if trials > 1 else 0.0
    std_error = stdev / math.sqrt(trials)
    if std_error == 0.0:
        z = 0.0 if mean == analytic else math.copysign(math.inf, mean - analytic)
    else:
        z = (mean - analytic) / std_error
    return ExpectationReport(
        n=n,
        k=k,
        p=p,
        trials=trials,
        analytic=analytic,
        sample_mean=mean,
        std_error=std_error,
        z_score=z,
    )


def type1_dominance(n: int, k: int, p: float, trials: int, seed: int) -> DominanceReport:
    """Fraction of colourable samples admitting a singleton-classes colouring.

    Every trial is decided exactly (one-sided check first, peeling when it
    is unknown). With zero colourable trials the conditional fraction is
    None, not an error. Intended for probabilities at or above the
    threshold, where that fraction tends to one.
    """
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"edge probability must lie in [0, 1], got {p}")
    if 2**n > PEEL_SUBSET_LIMIT:
        raise CapacityError(f"exact decision cannot handle n={n}: 2**{n} too large")
    colourable = 0
    type1 = 0
    for trial in range(trials):
        trial_seed = derive_trial_seed(seed, 0, 0, trial)
        h = sample(RandomModelParams(n=n, k=k, p=p, seed=trial_seed))
        t1 = decide_type1(h)
        if t1.colourable is True:
            colourable += 1
            type1 += 1
        elif t1.colourable is None and decide_peel(h).colourable:
            colourable += 1
    conditional = type1 / colourable if colourable else None
    return DominanceReport(
        n=n,
        k=k,
        p=p,
        trials=trials,
        colourable_trials=colourable,
        type1_trials=type1,
        conditional_fraction=conditional,
    )


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def format_csv(records: Sequence[SweepRecord], config: SweepConfig) -> str:
    """CSV rows for the records, preceded by a reproducibility comment block."""
    lines = [
        "# rainbowfree sweep",
        f"# k={config.k} trials={config.trials} seed={config.seed} "
        f"method={config.method} confidence={_fmt(config.confidence)}",
        f"# n_list={','.join(str(n) for n in config.n_list)}",
    ]
    if config.p_grid is not None:
        lines.append(f"# p_grid={','.join(_fmt(p) for p in config.p_grid)}")
    else:
        lines.append(f"# alphas={','.join(_fmt(a) for a in config.alphas)}")
    lines.append(CSV_HEADER)
    for r in records:
        lines.append(
            ",".join(
                [
                    str(r.n),
                    str(r.k),
                    _fmt(r.p),
                    _fmt(r.alpha),
                    str(r.trials),
                    str(r.successes),
                    _fmt(r.fraction),
                    _fmt(r.ci_low),
                    _fmt(r.ci_high),
                    _fmt(r.type1_fraction),
                    _fmt(r.seconds),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_csv(records: Sequence[SweepRecord], config: SweepConfig, stream: TextIO) -> None:
    stream.write(format_csv(records, config))


def records_to_json(records: Sequence[SweepRecord], config: SweepConfig) -> str:
    """JSON mirror of the CSV records plus the config block."""
    payload = {
        "config": {
            "k": config.k,
            "n_list": list(config.n_list),
            "trials": config.trials,
            "seed": config.seed,
            "p_grid": list(config.p_grid) if config.p_grid is not None else None,
            "alphas": list(config.alphas),
            "method": config.method,
            "confidence": config.confidence,
        },
        "records": [
            {
                "n": r.n,
                "k": r.k,
                "p": r.p,
                "alpha": r.alpha,
                "trials": r.trials,
                "successes": r.successes,
                "fraction": r.fraction,
                "ci_low": r.ci_low,
                "ci_high": r.ci_high,
                "type1_fraction": r.type1_fraction,
                "seconds": r.seconds,
            }
            for r in records
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True)
