"""Core combinatorial types: uniform hypergraphs, colourings, size signatures.

Vertices are integers. A hypergraph lives on the ambient index range
``0..n-1`` but carries an explicit set of *active* vertices: taking an
induced subhypergraph removes vertices without renumbering the survivors,
so a colouring found on the subhypergraph extends to the parent directly.

A surjective colouring with palette ``{1..k}`` is *rainbow-free* when no
edge attains all k colours. All types here are immutable after
construction and every operation is a pure function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInputError, ParseError

__all__ = [
    "Hypergraph",
    "Colouring",
    "SizeSignature",
    "classify_signature",
    "is_rainbow_free",
    "induced_subhypergraph",
    "repeated_induced",
    "is_disconnected",
    "parse_instance",
    "format_instance",
]


@dataclass(frozen=True, init=False)
class Hypergraph:
    """A k-uniform hypergraph with an explicit active-vertex set.

    Edges are stored as ascending k-tuples of distinct active vertices,
    deduplicated (set semantics). ``vertices`` equals ``range(n)`` for a
    freshly built hypergraph and shrinks under induced projections; ``n``
    always names the ambient index range.
    """

    n: int
    k: int
    edges: frozenset[tuple[int, ...]]
    vertices: frozenset[int]

    def __init__(
        self,
        n: int,
        k: int,
        edges: Iterable[Iterable[int]] = (),
        vertices: Iterable[int] | None = None,
    ):
        if n < 1:
            raise InvalidInputError(f"vertex count must be >= 1, got {n}")
        # 1-uniform hypergraphs arise as fully peeled projections; colouring
        # operations themselves require k >= 2.
        if k < 1:
            raise InvalidInputError(f"uniformity must be >= 1, got {k}")
        if vertices is None:
            active = frozenset(range(n))
        else:
            active = frozenset(vertices)
            for v in active:
                if not 0 <= v < n:
                    raise InvalidInputError(f"vertex {v} outside 0..{n - 1}")
        canon = set()
        for raw in edges:
            edge = tuple(sorted(raw))
            if len(edge) != k or len(set(edge)) != k:
                raise InvalidInputError(
                    f"edge {edge} does not have exactly {k} distinct vertices"
                )
            for v in edge:
                if v not in active:
                    raise InvalidInputError(f"edge {edge} uses inactive vertex {v}")
            canon.add(edge)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "edges", frozenset(canon))
        object.__setattr__(self, "vertices", active)

    @classmethod
    def complete(cls, n: int, k: int) -> "Hypergraph":
        """The hypergraph containing every k-subset of ``range(n)``."""
        return cls(n, k, itertools.combinations(range(n), k))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_vertices(self) -> int:
        """Number of active vertices."""
        return len(self.vertices)

    def has_edge(self, edge: Iterable[int]) -> bool:
        return tuple(sorted(edge)) in self.edges

    def sorted_vertices(self) -> list[int]:
        return sorted(self.vertices)

    def sorted_edges(self) -> list[tuple[int, ...]]:
        return sorted(self.edges)


@dataclass(frozen=True, init=False)
class Colouring:
    """A total map from a vertex set to the palette ``{1..palette}``."""

    palette: int
    colours: Mapping[int, int]

    def __init__(self, colours: Mapping[int, int], palette: int):
        if palette < 1:
            raise InvalidInputError(f"palette size must be >= 1, got {palette}")
        store = dict(colours)
        for v, c in store.items():
            if not 1 <= c <= palette:
                raise InvalidInputError(
                    f"vertex {v} has colour {c} outside 1..{palette}"
                )
        object.__setattr__(self, "palette", palette)
        object.__setattr__(self, "colours", store)

    @classmethod
    def from_classes(cls, classes: Sequence[Iterable[int]]) -> "Colouring":
        """Build a colouring that gives class ``i`` (0-based) colour ``i + 1``."""
        colours: dict[int, int] = {}
        for i, cls_vertices in enumerate(classes):
            for v in cls_vertices:
                if v in colours:
                    raise InvalidInputError(f"vertex {v} appears in two classes")
                colours[v] = i + 1
        return cls(colours, len(classes))

    def classes(self) -> tuple[frozenset[int], ...]:
        """Colour classes ``C_1..C_palette`` (preimages, possibly empty)."""
        buckets: list[set[int]] = [set() for _ in range(self.palette)]
        for v, c in self.colours.items():
            buckets[c - 1].add(v)
        return tuple(frozenset(b) for b in buckets)

    def is_surjective(self) -> bool:
        return len(set(self.colours.values())) == self.palette


@dataclass(frozen=True)
class SizeSignature:
    """Sorted class-size sequence of a surjective colouring, with its type.

    ``sizes`` is nondecreasing and sums to n; ``sigma`` and ``pi`` are the
    sum and product of all but the largest entry. Exactly one of five types
    applies:

    1. ``(1, ..., 1, n-k+1)``
    2. ``(1, ..., 1, 2, n-k)``
    3. ``(1, ..., 1, x, n-k+2-x)`` with ``x >= 3``
    4. second-smallest-but-one entry >= 2 and ``sigma <= 6k``
    5. same but ``sigma > 6k``
    """

    sizes: tuple[int, ...]
    sigma: int
    pi: int
    type_id: int


def classify_signature(sizes: Iterable[int], n: int, k: int) -> SizeSignature:
    """Sort class sizes and classify them into one of the five types.

    Requires k >= 3 positive sizes summing to n.
    """
    if k < 3:
        raise InvalidInputError(f"signature classification needs k >= 3, got {k}")
    s = tuple(sorted(sizes))
    if len(s) != k:
        raise InvalidInputError(f"expected {k} class sizes, got {len(s)}")
    if any(x < 1 for x in s):
        raise InvalidInputError(f"class sizes must all be >= 1, got {s}")
    if sum(s) != n:
        raise InvalidInputError(f"class sizes {s} sum to {sum(s)}, expected {n}")
    sigma = sum(s[:-1])
    pi = 1
    for x in s[:-1]:
        pi *= x
    # s[k-3] is the (k-2)-nd smallest size; "all ones below the top two"
    # distinguishes types 1-3 from 4-5.
    if s[k - 3] == 1:
        second = s[k - 2]
        if second == 1:
            type_id = 1
        elif second == 2:
            type_id = 2
        else:
            type_id = 3
    elif sigma <= 6 * k:
        type_id = 4
    else:
        type_id = 5
    return SizeSignature(sizes=s, sigma=sigma, pi=pi, type_id=type_id)


def is_rainbow_free(h: Hypergraph, colouring: Colouring, palette: int) -> bool:
    """True iff ``colouring`` uses all ``palette`` colours and no edge does.

    The colouring must assign a colour to exactly the active vertices of
    ``h`` and its declared palette must match ``palette``.
    """
    if colouring.palette != palette:
        raise InvalidInputError(
            f"palette size {palette} does not match colouring palette "
            f"{colouring.palette}"
        )
    if set(colouring.colours) != set(h.vertices):
        raise InvalidInputError(
            "colouring must assign a colour to exactly the active vertices"
        )
    if not colouring.is_surjective():
        return False
    colours = colouring.colours
    for edge in h.edges:
        if len({colours[v] for v in edge}) == palette:
            return False
    return True


def _project(h: Hypergraph, s_set: frozenset[int]) -> Hypergraph:
    if not s_set <= h.vertices:
        raise InvalidInputError("peeled set must consist of active vertices")
    remaining = h.vertices - s_set
    projected = set()
    for edge in h.edges:
        hits = sum(1 for v in edge if v in s_set)
        if hits == 1:
            projected.add(tuple(v for v in edge if v not in s_set))
    return Hypergraph(h.n, h.k - 1, projected, remaining)


def induced_subhypergraph(h: Hypergraph, s: Iterable[int]) -> Hypergraph:
    """Remove ``s`` and keep the traces of edges meeting it exactly once.

    The result is (k-1)-uniform on the remaining active vertices: an edge
    ``e`` with ``|e & s| == 1`` contributes ``e - s``; every other edge is
    dropped. Duplicated traces collapse (set semantics). Peeling the whole
    active set is allowed and yields a hypergraph with no active vertices,
    which downstream colouring operations reject.
    """
    if h.k == 2:
        raise InvalidInputError(
            "induced subhypergraph of a 2-uniform hypergraph is unsupported; "
            "use is_disconnected"
        )
    return _project(h, frozenset(s))


def repeated_induced(h: Hypergraph, sets: Sequence[Iterable[int]]) -> Hypergraph:
    """Project out each of the pairwise disjoint sets in turn.

    With ``ell`` sets the result is (k-ell)-uniform; the outcome does not
    depend on the order of the sets. Unlike the single-step operation this
    may continue down to a 1-uniform result.
    """
    materialized = [frozenset(s) for s in sets]
    ell = len(materialized)
    if not 1 <= ell < h.k:
        raise InvalidInputError(
            f"number of peeled sets must be in 1..{h.k - 1}, got {ell}"
        )
    total = sum(len(s) for s in materialized)
    if len(frozenset().union(*materialized)) != total:
        raise InvalidInputError("peeled sets must be pairwise disjoint")
    result = h
    for s in materialized:
        result = _project(result, s)
    return result


def is_disconnected(g: Hypergraph) -> bool:
    """True iff the active vertices of a 2-uniform ``g`` split into >= 2
    connected components.

    Equivalent to rainbow-free 2-colourability: the two sides of a
    component split are the colour classes. A single active vertex gives
    False (no surjective 2-colouring exists).
    """
    if g.k != 2:
        raise InvalidInputError(f"connectivity check needs a 2-uniform graph, got k={g.k}")
    if not g.vertices:
        raise InvalidInputError("connectivity check needs a non-empty active vertex set")
    verts = g.vertices
    if len(verts) == 1:
        return False
    parent = {v: v for v in verts}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = len(verts)
    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            components -= 1
    return components >= 2


def parse_instance(text: str) -> Hypergraph:
    """Parse the shared instance format.

    First content line is ``k n m``, followed by exactly ``m`` edge lines of
    ``k`` strictly ascending vertex indices. Lines starting with ``#`` are
    comments and may appear anywhere; blank lines are ignored. Duplicate
    edge lines are rejected with the offending line number.
    """
    header: tuple[int, int, int] | None = None
    edges: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            values = [int(f) for f in fields]
        except ValueError:
            raise ParseError(lineno, f"expected integers, got {line!r}")
        if header is None:
            if len(values) != 3:
                raise ParseError(lineno, "header must be 'k n m'")
            k, n, m = values
            if k < 2:
                raise ParseError(lineno, f"uniformity must be >= 2, got {k}")
            if n < 1:
                raise ParseError(lineno, f"vertex count must be >= 1, got {n}")
            if m < 0:
                raise ParseError(lineno, f"edge count must be >= 0, got {m}")
            header = (k, n, m)
            continue
        k, n, m = header
        if len(edges) == m:
            raise ParseError(lineno, f"more than {m} edge lines")
        if len(values) != k:
            raise ParseError(lineno, f"expected {k} vertices, got {len(values)}")
        for v in values:
            if not 0 <= v < n:
                raise ParseError(lineno, f"vertex {v} outside 0..{n - 1}")
        if any(a >= b for a, b in zip(values, values[1:])):
            raise ParseError(lineno, "vertices must be strictly ascending")
        edge = tuple(values)
        if edge in seen:
            raise ParseError(
                lineno, f"duplicate edge (first seen on line {seen[edge]})"
            )
        seen[edge] = lineno
        edges.append(edge)
    if header is None:
        raise ParseError(1, "missing 'k n m' header")
    k, n, m = header
    if len(edges) != m:
        raise ParseError(
            len(text.splitlines()) or 1,
            f"header promised {m} edges, found {len(edges)}",
        )
    return Hypergraph(n, k, edges)


def format_instance(h: Hypergraph, comments: Sequence[str] = ()) -> str:
    """Render a hypergraph in the shared instance format (edges sorted).

    Only hypergraphs whose active set is the full index range serialize;
    induced subhypergraphs have no representation in this format.
    """
    if h.vertices != frozenset(range(h.n)):
        raise InvalidInputError(
            "only hypergraphs with all vertices active can be serialized"
        )
    lines = [f"# {c}" for c in comments]
    lines.append(f"{h.k} {h.n} {h.num_edges}")
    for edge in sorted(h.edges):
        lines.append(" ".join(str(v) for v in edge))
    return "\n".join(lines) + "\n"
