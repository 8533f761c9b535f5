"""Seeded sampling of random k-uniform hypergraphs and the analytic formulas.

Every one of the C(n, k) possible edges is included independently with
probability p. Inclusion is decided by hashing ``(seed, edge rank)``
through a fixed 64-bit mixer and comparing a 53-bit uniform draw against
p, so the sampled hypergraph is bit-identical across runs, platforms and
any evaluation order or parallel schedule. Edge ranks use the
colexicographic combinatorial number system and are fixed forever.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import CapacityError, InvalidInputError
from .hypergraph import Hypergraph

__all__ = [
    "RandomModelParams",
    "sample",
    "threshold_p_star",
    "expected_type1_count",
    "mix64",
    "edge_uniform",
    "colex_rank",
    "MAX_EDGE_RANK",
]

_MASK64 = (1 << 64) - 1

# Edge ranks must stay within the 64-bit mixing domain; one sign bit of
# headroom is reserved so ranks survive signed round-trips.
MAX_EDGE_RANK = (1 << 63) - 1


def mix64(x: int) -> int:
    """SplitMix64 finalizer over 64-bit words.

    This is the single fixed mixing function behind edge sampling and
    trial-seed derivation; changing it would change every sampled
    hypergraph, so it never does.
    """
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def edge_uniform(seed: int, rank: int) -> float:
    """Uniform draw in [0, 1) for one edge, at 53-bit resolution."""
    h = mix64(mix64(seed & _MASK64) ^ (rank & _MASK64))
    return (h >> 11) * 2.0**-53


def colex_rank(edge: tuple[int, ...]) -> int:
    """Colexicographic rank of an ascending k-tuple among all k-subsets."""
    return sum(math.comb(v, i) for i, v in enumerate(edge, start=1))


@dataclass(frozen=True)
class RandomModelParams:
    """Parameters of the independent-edge random hypergraph model."""

    n: int
    k: int
    p: float
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"vertex count must be >= 1, got {self.n}")
        if self.k < 2:
            raise InvalidInputError(f"uniformity must be >= 2, got {self.k}")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidInputError(
                f"edge probability must lie in [0, 1], got {self.p}"
            )


def sample(params: RandomModelParams) -> Hypergraph:
    """Sample a random k-uniform hypergraph, deterministically in the seed.

    Each edge's inclusion depends only on ``(seed, colex rank)``, never on
    iteration order. Raises when there are no possible edges (k > n) or
    when the rank domain would overflow.
    """
    n, k, p, seed = params.n, params.k, params.p, params.seed
    total = math.comb(n, k)
    if total < 1:
        raise InvalidInputError(
            f"no possible edges for n={n}, k={k}; need k <= n"
        )
    if total - 1 > MAX_EDGE_RANK:
        raise CapacityError(
            f"C({n},{k}) = {total} exceeds the {MAX_EDGE_RANK + 1} edge-rank capacity"
        )
    edges = [
        combo
        for combo in itertools.combinations(range(n), k)
        if edge_uniform(seed, colex_rank(combo)) < p
    ]
    return Hypergraph(n, k, edges)


def threshold_p_star(n: int, k: int) -> float:
    """The threshold edge probability ``(k-1) * ln(n) / n``, clamped to [0, 1].

    Clamping applies only here; probabilities supplied in configurations
    are validated, not clamped.
    """
    if n < 2:
        raise InvalidInputError(f"threshold needs n >= 2, got {n}")
    if k < 2:
        raise InvalidInputError(f"uniformity must be >= 2, got {k}")
    return min(1.0, (k - 1) * math.log(n) / n)


def expected_type1_count(n: int, k: int, p: float) -> float:
    """Expected number of rainbow-free colourings with k-1 singleton classes.

    Counted up to colour permutation, one candidate per choice of the k-1
    singletons: ``C(n, k-1) * (1-p)^(n-k+1)``. Exact at p=0 and monotone
    nonincreasing in p.
    """
    if k < 2:
        raise InvalidInputError(f"uniformity must be >= 2, got {k}")
    if n < k:
        raise InvalidInputError(f"need n >= k, got n={n}, k={k}")
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"edge probability must lie in [0, 1], got {p}")
    return math.comb(n, k - 1) * (1.0 - p) ** (n - k + 1)
