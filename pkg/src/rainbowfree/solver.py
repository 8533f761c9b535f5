"""Decision procedures for rainbow-free k-colourability.

Four routes with different cost/answer profiles:

* ``decide_oracle``: exhaustive enumeration of surjective colourings with
  colour symmetry broken by restricted growth strings (vertex order fixes
  which class gets which label), pruning any branch whose already-assigned
  vertices complete a rainbow edge. Also powers exact counting.
* ``decide_peel``: recursive peeling. A hypergraph is rainbow-free
  k-colourable exactly when some non-empty proper subset S of the active
  vertices projects to a rainbow-free (k-1)-colourable subhypergraph; the
  2-uniform base case is plain disconnectedness. Candidate subsets are
  iterated smallest-first, restricted to a complete pruned family (see
  ``_candidate_sizes``).
* ``decide_type1``: one-sided check for a colouring with k-1 singleton
  classes; answers True (with witness) or Unknown (None), never a
  definitive False once a surjective colouring is possible at all.
* ``recover_colouring``: reconstructs the colour classes of a colouring
  from the full family of its non-rainbow k-subsets, validating the input.

Enumerative routes take explicit capacity limits and refuse oversized
inputs instead of degrading.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import CapacityError, InconsistencyError, InvalidInputError
from .hypergraph import Colouring, Hypergraph, classify_signature, is_disconnected

__all__ = [
    "Decision",
    "CountResult",
    "RecoveryResult",
    "decide_oracle",
    "decide_peel",
    "decide_type1",
    "count_rainbow_free",
    "count_type1_colourings",
    "recover_colouring",
    "ORACLE_EVAL_LIMIT",
    "PEEL_SUBSET_LIMIT",
]

# Default enumeration budgets: the oracle evaluates at most k**n colourings,
# the peeling search at most 2**n subsets per level.
ORACLE_EVAL_LIMIT = 10**8
PEEL_SUBSET_LIMIT = 10**7


@dataclass(frozen=True)
class Decision:
    """Outcome of a decision procedure.

    ``colourable`` is True/False for the exact methods; the one-sided
    type-1 check may return None, meaning unknown. When a witness is
    present it passes ``is_rainbow_free``. ``nodes`` counts enumeration
    steps (colouring extensions or candidate subsets examined).
    """

    colourable: bool | None
    witness: Colouring | None
    method: str
    nodes: int


@dataclass(frozen=True)
class CountResult:
    """Exact count of rainbow-free colourings, bucketed by signature type.

    Counts partitions when ``up_to_permutation`` is true, labelled
    surjective maps otherwise (each partition corresponds to exactly k!
    labelled maps since its blocks are distinct sets). ``by_type`` is empty
    for k = 2, where the five-type classification does not apply.
    """

    total: int
    by_type: dict[int, int]
    up_to_permutation: bool


@dataclass(frozen=True)
class RecoveryResult:
    """Colour classes recovered from a full rainbow-free edge set."""

    partition: frozenset[frozenset[int]]
    canonical: tuple[tuple[int, ...], ...]


def _mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _components_split(pair_masks, act_mask: int):
    """Split the active mask into (component of lowest vertex, rest).

    Returns None when the pairs connect all active vertices. Pairs must be
    2-element masks within ``act_mask``.
    """
    comp = act_mask & -act_mask
    changed = True
    while changed:
        changed = False
        for pm in pair_masks:
            if pm & comp and pm & ~comp:
                comp |= pm
                changed = True
    if comp == act_mask:
        return None
    return comp, act_mask ^ comp


# ---------------------------------------------------------------------------
# Exhaustive oracle


def _oracle_scan(h: Hypergraph, eval_limit: int, stop_at_first: bool):
    """Enumerate rainbow-free partitions into exactly k non-empty classes.

    Returns (witness_assignment or None, partition_count, by_type, nodes).
    Enumeration follows restricted growth strings over the sorted active
    vertices: the lowest vertex always has class 0 and each new class first
    appears in vertex order, so every partition is visited exactly once.
    Branches are cut as soon as the assigned vertices complete a rainbow
    edge, which removes no rainbow-free completions.
    """
    k = h.k
    if k < 2:
        raise InvalidInputError(f"decision procedures need uniformity >= 2, got {k}")
    verts = sorted(h.vertices)
    nv = len(verts)
    if k**nv > eval_limit:
        raise CapacityError(
            f"oracle would evaluate {k}**{nv} > {eval_limit} colourings; "
            "raise eval_limit explicitly to allow this"
        )
    pos_of = {v: i for i, v in enumerate(verts)}
    edges_at: list[list[tuple[int, ...]]] = [[] for _ in range(nv)]
    for edge in h.edges:
        positions = sorted(pos_of[v] for v in edge)
        edges_at[positions[-1]].append(tuple(positions))

    assign = [0] * nv
    state = {"nodes": 0, "total": 0, "witness": None}
    by_type: dict[int, int] = {}

    def recurse(i: int, used: int) -> bool:
        if i == nv:
            state["total"] += 1
            if k >= 3:
                sizes = [0] * k
                for c in assign:
                    sizes[c] += 1
                tid = classify_signature(sizes, nv, k).type_id
                by_type[tid] = by_type.get(tid, 0) + 1
            if stop_at_first:
                state["witness"] = assign.copy()
                return True
            return False
        remaining = nv - i - 1
        top = used if used < k else k - 1
        for c in range(top + 1):
            new_used = used + 1 if c == used else used
            if new_used + remaining < k:
                continue
            state["nodes"] += 1
            assign[i] = c
            rainbow = False
            for edge in edges_at[i]:
                if len({assign[p] for p in edge}) == k:
                    rainbow = True
                    break
            if not rainbow and recurse(i + 1, new_used):
                return True
        return False

    if nv >= k:
        recurse(0, 0)
    return state["witness"], state["total"], by_type, state["nodes"]


def decide_oracle(h: Hypergraph, *, eval_limit: int = ORACLE_EVAL_LIMIT) -> Decision:
    """Exhaustively decide rainbow-free colourability with palette k = h.k.

    Intended for small instances (the budget is k**n evaluations, e.g.
    n <= 16 at k = 3); refuses larger ones with a capacity error.
    """
    if h.k >= 2 and h.num_vertices < h.k:
        return Decision(False, None, "oracle", 0)
    assignment, _, _, nodes = _oracle_scan(h, eval_limit, stop_at_first=True)
    if assignment is None:
        return Decision(False, None, "oracle", nodes)
    verts = sorted(h.vertices)
    witness = Colouring({verts[i]: c + 1 for i, c in enumerate(assignment)}, h.k)
    return Decision(True, witness, "oracle", nodes)


def count_rainbow_free(
    h: Hypergraph,
    up_to_permutation: bool = True,
    *,
    eval_limit: int = ORACLE_EVAL_LIMIT,
) -> CountResult:
    """Exact number of rainbow-free colourings of ``h``.

    Partitions into k non-empty classes by default; multiply by k! for
    labelled surjective maps (no division is ever involved, so coinciding
    class sizes need no special case).
    """
    _, total, by_type, _ = _oracle_scan(h, eval_limit, stop_at_first=False)
    if not up_to_permutation:
        factor = math.factorial(h.k)
        total *= factor
        by_type = {tid: cnt * factor for tid, cnt in by_type.items()}
    return CountResult(total=total, by_type=by_type, up_to_permutation=up_to_permutation)


# ---------------------------------------------------------------------------
# Peeling search


def _candidate_sizes(act_count: int, k: int) -> int:
    # Any rainbow-free colouring has k - 1 classes avoiding the lowest
    # active vertex; the smallest of them has at most this many vertices,
    # so searching only these candidates is still complete.
    return (act_count - 1) // (k - 1)


def _project_masks(edge_masks, s_mask: int):
    projected = set()
    for em in edge_masks:
        t = em & s_mask
        if t and not (t & (t - 1)):
            projected.add(em ^ t)
    return sorted(projected)


def _peel3(edge_masks, act_mask: int, counter: list[int]):
    """Specialised innermost level: find S with a disconnected projection.

    Union-find over projected pairs with an early exit once the remainder
    is known to be connected; the winning candidate is re-projected to
    produce the actual two-sided split.
    """
    act_count = act_mask.bit_count()
    if act_count < 3:
        return None
    verts = list(_bits(act_mask))
    rest = verts[1:]
    width = act_mask.bit_length()
    fresh = list(range(width))
    for size in range(1, _candidate_sizes(act_count, 3) + 1):
        for combo in itertools.combinations(rest, size):
            counter[0] += 1
            s_mask = 0
            for v in combo:
                s_mask |= 1 << v
            w_mask = act_mask ^ s_mask
            target = w_mask.bit_count() - 1
            merges = 0
            parent = fresh.copy()
            connected = False
            for em in edge_masks:
                t = em & s_mask
                if not t or (t & (t - 1)):
                    continue
                pm = em ^ t
                a = (pm & -pm).bit_length() - 1
                b = pm.bit_length() - 1
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                while parent[b] != b:
                    parent[b] = parent[parent[b]]
                    b = parent[b]
                if a != b:
                    parent[a] = b
                    merges += 1
                    if merges == target:
                        connected = True
                        break
            if not connected:
                split = _components_split(_project_masks(edge_masks, s_mask), w_mask)
                return [split[0], split[1], s_mask]
    return None


def _peel(edge_masks, act_mask: int, k: int, counter: list[int]):
    """Recursive peeling; returns class masks in colour order, or None."""
    if k == 2:
        split = _components_split(edge_masks, act_mask)
        return None if split is None else [split[0], split[1]]
    if k == 3:
        return _peel3(edge_masks, act_mask, counter)
    act_count = act_mask.bit_count()
    if act_count < k:
        return None
    verts = list(_bits(act_mask))
    rest = verts[1:]
    for size in range(1, _candidate_sizes(act_count, k) + 1):
        for combo in itertools.combinations(rest, size):
            counter[0] += 1
            s_mask = 0
            for v in combo:
                s_mask |= 1 << v
            sub = _peel(_project_masks(edge_masks, s_mask), act_mask ^ s_mask, k - 1, counter)
            if sub is not None:
                sub.append(s_mask)
                return sub
    return None


def decide_peel(h: Hypergraph, *, subset_limit: int = PEEL_SUBSET_LIMIT) -> Decision:
    """Decide rainbow-free colourability by peeling one colour class at a
    time, smallest candidate sets first.

    Exact in both directions. The witness colours each peeled set with the
    highest colour of its level and the final two components with colours
    1 and 2; the first success in candidate order wins, independent of any
    execution schedule.
    """
    k = h.k
    if k < 2:
        raise InvalidInputError(f"decision procedures need uniformity >= 2, got {k}")
    act_list = sorted(h.vertices)
    if len(act_list) < k:
        return Decision(False, None, "peel", 0)
    act_mask = _mask_of(act_list)
    edge_masks = sorted(_mask_of(e) for e in h.edges)
    counter = [0]
    if k == 2:
        if not is_disconnected(h):
            return Decision(False, None, "peel", 0)
        split = _components_split(edge_masks, act_mask)
        classes = [split[0], split[1]]
    else:
        if 2 ** len(act_list) > subset_limit:
            raise CapacityError(
                f"peeling would scan up to 2**{len(act_list)} > {subset_limit} "
                "subsets per level; raise subset_limit explicitly to allow this"
            )
        classes = _peel(edge_masks, act_mask, k, counter)
        if classes is None:
            return Decision(False, None, "peel", counter[0])
    colours = {}
    for i, class_mask in enumerate(classes):
        for v in _bits(class_mask):
            colours[v] = i + 1
    return Decision(True, Colouring(colours, k), "peel", counter[0])


# ---------------------------------------------------------------------------
# Type-1 one-sided check


def _covered_tuples(h: Hypergraph) -> set[tuple[int, ...]]:
    covered: set[tuple[int, ...]] = set()
    for edge in h.edges:
        covered.update(itertools.combinations(edge, h.k - 1))
    return covered


def decide_type1(h: Hypergraph) -> Decision:
    """Search for a colouring with k-1 singleton classes.

    Such a colouring exists exactly when some (k-1)-subset of vertices is
    contained in no edge: those vertices become the singletons and
    everything else the big class. Returns True with the witness, or None
    (unknown) when every (k-1)-subset is covered; other colouring shapes
    are not examined. Fewer than k active vertices admit no surjective
    colouring at all, so that case is a definitive False.
    """
    k = h.k
    if k < 2:
        raise InvalidInputError(f"decision procedures need uniformity >= 2, got {k}")
    verts = sorted(h.vertices)
    if len(verts) < k:
        return Decision(False, None, "type1", 0)
    covered = _covered_tuples(h)
    nodes = 0
    for singles in itertools.combinations(verts, k - 1):
        nodes += 1
        if singles not in covered:
            colours = {v: i + 1 for i, v in enumerate(singles)}
            chosen = set(singles)
            for v in verts:
                if v not in chosen:
                    colours[v] = k
            return Decision(True, Colouring(colours, k), "type1", nodes)
    return Decision(None, None, "type1", nodes)


def count_type1_colourings(h: Hypergraph) -> int:
    """Number of (k-1)-subsets contained in no edge.

    One singleton-classes colouring per such subset, matching the
    first-moment convention of counting one colouring per choice of the
    k-1 singleton vertices.
    """
    if h.k < 2:
        raise InvalidInputError(f"decision procedures need uniformity >= 2, got {h.k}")
    verts = sorted(h.vertices)
    if len(verts) < h.k:
        return 0
    covered = _covered_tuples(h)
    return sum(
        1 for t in itertools.combinations(verts, h.k - 1) if t not in covered
    )


# ---------------------------------------------------------------------------
# Colour-class recovery


def recover_colouring(h: Hypergraph, k: int) -> RecoveryResult:
    """Reconstruct colour classes from a full rainbow-free edge set.

    The caller asserts that ``h.edges`` is exactly the family of k-subsets
    on which some surjective colouring is not rainbow. Two vertices share a
    class precisely when no complementary (rainbow) k-subset contains both,
    so classes can be read off the complement. The result is validated by
    regenerating the edge set from the recovered partition; any mismatch
    raises an inconsistency error naming the violated check.
    """
    if k < 2:
        raise InvalidInputError(f"recovery needs palette >= 2, got {k}")
    if k != h.k:
        raise InvalidInputError(f"palette {k} does not match uniformity {h.k}")
    verts = sorted(h.vertices)
    nv = len(verts)
    if nv < k:
        raise InvalidInputError(f"need at least k={k} active vertices, got {nv}")
    separated: dict[int, set[int]] = {v: set() for v in verts}
    for combo in itertools.combinations(verts, k):
        if combo not in h.edges:
            for u, v in itertools.combinations(combo, 2):
                separated[u].add(v)
                separated[v].add(u)
    class_of = {
        v: frozenset(u for u in verts if u == v or u not in separated[v])
        for v in verts
    }
    classes = sorted(set(class_of.values()), key=min)
    if sum(len(c) for c in classes) != nv:
        raise InconsistencyError(
            "classes overlap",
            "recovered classes are not pairwise disjoint",
        )
    if len(classes) != k:
        raise InconsistencyError(
            "wrong class count", f"expected {k} classes, recovered {len(classes)}"
        )
    class_id = {}
    for idx, cls in enumerate(classes):
        for v in cls:
            class_id[v] = idx
    regenerated = {
        combo
        for combo in itertools.combinations(verts, k)
        if len({class_id[v] for v in combo}) != k
    }
    if regenerated != h.edges:
        raise InconsistencyError(
            "edge set mismatch",
            "input is not the full rainbow-free family of any colouring",
        )
    return RecoveryResult(
        partition=frozenset(classes),
        canonical=tuple(tuple(sorted(c)) for c in classes),
    )
