"""Vertex-colored graphs and the flag complexes they span.

A flag complex is stored as its 1-skeleton: faces are exactly the cliques.
Adjacency is kept as one Python ``int`` bitset per vertex, so clique counting
is an ordered expansion over candidate masks.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

from flagforge.combinatorics import binom
from flagforge.config import get_runtime_config
from flagforge.errors import input_error, make_error
from flagforge.models import FaceVector, HVector

LOG = logging.getLogger(__name__)

VD_MAX_VERTICES = 25


def _graph_error(message: str, **details: object) -> Exception:
    return make_error(
        error_code="FLAG_002",
        message=message,
        details=dict(details),
        recovery_hint="Edges must join two distinct existing vertices.",
    )


def _coloring_error(u: int, v: int, color: int) -> Exception:
    return make_error(
        error_code="FLAG_005",
        message="Edge joins two vertices of the same color.",
        details={"edge": [u, v], "color": color},
        recovery_hint="Recolor the graph so every edge joins different colors.",
    )


class VertexColoredGraph:
    """Simple graph with a positive integer color on every vertex.

    The coloring is not assumed proper; ``is_properly_colored`` checks it.
    Graphs are grown with ``add_vertex``/``add_edge`` during construction and
    treated as read-only afterwards.
    """

    __slots__ = ("_adj", "_colors")

    def __init__(self, colors: Iterable[int] = (), edges: Iterable[Sequence[int]] = ()) -> None:
        self._colors: list[int] = []
        self._adj: list[int] = []
        for color in colors:
            self.add_vertex(color)
        for edge in edges:
            if len(edge) != 2:
                raise _graph_error("Edges must have exactly two endpoints.", edge=list(edge))
            self.add_edge(int(edge[0]), int(edge[1]))

    @property
    def vertex_count(self) -> int:
        return len(self._colors)

    @property
    def colors(self) -> tuple[int, ...]:
        return tuple(self._colors)

    @property
    def adjacency(self) -> tuple[int, ...]:
        return tuple(self._adj)

    def color(self, v: int) -> int:
        return self._colors[v]

    def add_vertex(self, color: int, neighbors: Iterable[int] = ()) -> int:
        if isinstance(color, bool) or not isinstance(color, int) or color < 1:
            raise _graph_error("Colors must be positive integers.", color=color)
        self._colors.append(color)
        self._adj.append(0)
        v = len(self._colors) - 1
        for u in neighbors:
            self.add_edge(u, v)
        return v

    def add_edge(self, u: int, v: int) -> None:
        n = len(self._colors)
        if u == v:
            raise _graph_error("Self-loops are not allowed.", vertex=u)
        if not (0 <= u < n and 0 <= v < n):
            raise _graph_error("Edge endpoint out of range.", edge=[u, v], vertex_count=n)
        self._adj[u] |= 1 << v
        self._adj[v] |= 1 << u

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return _bits(self._adj[v])

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        out: list[tuple[int, int]] = []
        for u, mask in enumerate(self._adj):
            for v in _bits(mask >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    @property
    def edge_count(self) -> int:
        return sum(mask.bit_count() for mask in self._adj) // 2

    def used_colors(self) -> list[int]:
        return sorted(set(self._colors))

    def color_classes(self) -> dict[int, list[int]]:
        """Vertices of each color in index order."""
        classes: dict[int, list[int]] = {}
        for v, color in enumerate(self._colors):
            classes.setdefault(color, []).append(v)
        return classes

    def improper_edge(self) -> tuple[int, int] | None:
        for u, v in self.edges():
            if self._colors[u] == self._colors[v]:
                return (u, v)
        return None

    def is_properly_colored(self) -> bool:
        return self.improper_edge() is None

    def require_proper_coloring(self) -> None:
        bad = self.improper_edge()
        if bad is not None:
            raise _coloring_error(bad[0], bad[1], self._colors[bad[0]])

    def copy(self) -> VertexColoredGraph:
        out = VertexColoredGraph()
        out._colors = list(self._colors)
        out._adj = list(self._adj)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexColoredGraph):
            return NotImplemented
        return self._colors == other._colors and self._adj == other._adj

    def __repr__(self) -> str:
        return f"VertexColoredGraph(vertices={self.vertex_count}, edges={self.edge_count})"


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def build_multipartite(parts: Sequence[int]) -> VertexColoredGraph:
    """Complete multipartite graph; part i gets color i + 1 and consecutive indices."""
    if any(size < 0 for size in parts):
        raise input_error("Part sizes must be nonnegative.", parts=list(parts))
    g = VertexColoredGraph()
    everyone = (1 << sum(parts)) - 1
    start = 0
    for index, size in enumerate(parts):
        block = ((1 << size) - 1) << start
        g._colors.extend([index + 1] * size)
        g._adj.extend([everyone & ~block] * size)
        start += size
    return g


def _count_from(adj: Sequence[int], starts: Sequence[int], max_card: int) -> list[int]:
    """Clique counts by size for cliques whose lowest vertex is in ``starts``."""
    counts = [0] * (max_card + 1)

    def expand(cand: int, size: int) -> None:
        if size + 1 == max_card:
            counts[max_card] += cand.bit_count()
            return
        while cand:
            low = cand & -cand
            cand ^= low
            counts[size + 1] += 1
            u = low.bit_length() - 1
            nxt = cand & adj[u]
            if nxt:
                expand(nxt, size + 1)

    for v in starts:
        counts[1] += 1
        if max_card >= 2:
            higher = adj[v] >> (v + 1) << (v + 1)
            if higher:
                expand(higher, 1)
    return counts


def adjacency_clique_counts(adj: Sequence[int], max_card: int) -> list[int]:
    """Single-process clique counts straight from adjacency bitsets."""
    counts = _count_from(adj, range(len(adj)), max_card)
    counts[0] = 1
    return counts


def clique_counts(g: VertexColoredGraph, max_card: int, *, threads: int | None = None) -> list[int]:
    """[1, #1-cliques, ..., #max_card-cliques], exact and independent of ``threads``."""
    if max_card < 1:
        raise input_error("max_card must be >= 1.", max_card=max_card)
    n = g.vertex_count
    if threads is None:
        threads = get_runtime_config().threads
    adj = g.adjacency
    if threads <= 1 or n < 2 * threads:
        counts = _count_from(adj, range(n), max_card)
    else:
        chunks = [list(range(i, n, threads)) for i in range(threads)]
        LOG.debug("counting cliques of %d vertices across %d workers", n, threads)
        counts = [0] * (max_card + 1)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_count_from, [adj] * threads, chunks, [max_card] * threads):
                counts = [a + b for a, b in zip(counts, part)]
    counts[0] = 1
    return counts


def clique_f_vector(g: VertexColoredGraph, max_card: int | None = None, *, threads: int | None = None) -> FaceVector:
    """Face vector of the clique complex, cut at ``max_card`` and with trailing zeros removed."""
    if max_card is None:
        max_card = max(g.vertex_count, 1)
    counts = clique_counts(g, max_card, threads=threads)
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return FaceVector(tuple(counts))


def clique_number(g: VertexColoredGraph) -> int:
    return clique_f_vector(g).d


def maximal_cliques(g: VertexColoredGraph) -> list[frozenset[int]]:
    """Bron-Kerbosch with pivoting over adjacency bitsets."""
    adj = g.adjacency
    found: list[frozenset[int]] = []

    def bk(r: int, p: int, x: int) -> None:
        if not p and not x:
            found.append(frozenset(_bits(r)))
            return
        pivot = max(_bits(p | x), key=lambda u: (p & adj[u]).bit_count())
        for v in _bits(p & ~adj[pivot]):
            bit = 1 << v
            bk(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    if g.vertex_count:
        bk(0, (1 << g.vertex_count) - 1, 0)
    return sorted(found, key=lambda c: sorted(c))


def f_to_h_entries(f: Sequence[int], d: int | None = None) -> list[int]:
    """h_k = sum_{i<=k} (-1)^(k-i) binom(d-i, k-i) f_{i-1}; ``f[i]`` is f_{i-1}."""
    if d is None:
        d = len(f) - 1
    padded = list(f) + [0] * (d + 1 - len(f))
    return [
        sum((-1) ** (k - i) * binom(d - i, k - i) * padded[i] for i in range(k + 1))
        for k in range(d + 1)
    ]


def h_to_f_entries(h: Sequence[int], d: int | None = None) -> list[int]:
    """f_{k-1} = sum_{i<=k} binom(d-i, k-i) h_i."""
    if d is None:
        d = len(h) - 1
    padded = list(h) + [0] * (d + 1 - len(h))
    return [sum(binom(d - i, k - i) * padded[i] for i in range(k + 1)) for k in range(d + 1)]


def f_to_h(f: FaceVector, d: int | None = None) -> HVector:
    return HVector(tuple(f_to_h_entries(f.entries, d)))


def h_to_f(h: HVector, d: int | None = None) -> FaceVector:
    return FaceVector(tuple(h_to_f_entries(h.entries, d)))


def polynomial_identity_holds(f: Sequence[int], h: Sequence[int], t: int) -> bool:
    """sum f_{i-1} t^(d-i) == sum h_i (t+1)^(d-i) at one point."""
    d = len(h) - 1
    padded = list(f) + [0] * (d + 1 - len(f))
    left = sum(padded[i] * t ** (d - i) for i in range(d + 1))
    right = sum(h[i] * (t + 1) ** (d - i) for i in range(d + 1))
    return left == right


def plus_construction(g: VertexColoredGraph, colors: Iterable[int] | None = None) -> VertexColoredGraph:
    """Add one vertex per color, joined to every vertex (old or new) of another color.

    ``colors`` defaults to 1..max used color. The new vertices come last, in
    color order.
    """
    g.require_proper_coloring()
    if colors is None:
        used = g.used_colors()
        palette = list(range(1, used[-1] + 1)) if used else []
    else:
        palette = sorted(set(colors))
        missing = set(g.used_colors()) - set(palette)
        if missing:
            raise input_error("Declared colors must cover the graph's colors.", missing=sorted(missing))
    out = g.copy()
    for color in palette:
        others = [u for u in range(out.vertex_count) if out.color(u) != color]
        out.add_vertex(color, others)
    return out


def is_balanced(g: VertexColoredGraph) -> bool:
    """Proper coloring with exactly (dimension + 1) colors."""
    if not g.is_properly_colored():
        return False
    return len(g.used_colors()) == clique_number(g)


Facet = frozenset[int]


def _maximal(sets: Iterable[Facet]) -> frozenset[Facet]:
    unique = sorted(set(sets), key=len, reverse=True)
    kept: list[Facet] = []
    for s in unique:
        if not any(s < t for t in kept):
            kept.append(s)
    return frozenset(kept)


class SimplicialComplexExplicit:
    """Complex given by its facets. ``facets == {}`` is the void complex, ``{frozenset()}`` is {∅}."""

    __slots__ = ("facets",)

    def __init__(self, facets: Iterable[Iterable[int]]) -> None:
        self.facets: frozenset[Facet] = _maximal(frozenset(f) for f in facets)

    @classmethod
    def from_graph(cls, g: VertexColoredGraph) -> SimplicialComplexExplicit:
        if g.vertex_count == 0:
            return cls([frozenset()])
        return cls(maximal_cliques(g))

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.facets) if self.facets else frozenset()

    def is_simplex(self) -> bool:
        return len(self.facets) <= 1

    def faces(self) -> Iterator[Facet]:
        seen: set[Facet] = set()
        for facet in self.facets:
            items = sorted(facet)
            for mask in range(1 << len(items)):
                face = frozenset(items[i] for i in range(len(items)) if mask >> i & 1)
                if face not in seen:
                    seen.add(face)
                    yield face

    def f_vector(self) -> FaceVector:
        sizes: dict[int, int] = {}
        for face in self.faces():
            sizes[len(face)] = sizes.get(len(face), 0) + 1
        top = max(sizes) if sizes else 0
        return FaceVector(tuple(sizes.get(i, 0) for i in range(top + 1)) or (1,))

    def link(self, v: int) -> SimplicialComplexExplicit:
        return SimplicialComplexExplicit(f - {v} for f in self.facets if v in f)

    def deletion(self, v: int) -> SimplicialComplexExplicit:
        return SimplicialComplexExplicit(f - {v} for f in self.facets)

    def is_shedding(self, v: int) -> bool:
        """No face of the link is a facet of the deletion."""
        return not (self.link(v).facets & self.deletion(v).facets)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplexExplicit):
            return NotImplemented
        return self.facets == other.facets

    def __hash__(self) -> int:
        return hash(self.facets)

    def __repr__(self) -> str:
        return f"SimplicialComplexExplicit(facets={len(self.facets)}, vertices={len(self.vertices)})"


def is_vertex_decomposable(c: SimplicialComplexExplicit) -> bool:
    """Recursive shedding-vertex check, memoized on the facet set."""
    n = len(c.vertices)
    if n > VD_MAX_VERTICES:
        raise make_error(
            error_code="FLAG_004",
            message="Complex too large for the vertex-decomposability check.",
            details={"vertices": n, "limit": VD_MAX_VERTICES},
            recovery_hint=f"Use a complex on at most {VD_MAX_VERTICES} vertices.",
        )

    @lru_cache(maxsize=None)
    def vd(facets: frozenset[Facet]) -> bool:
        if len(facets) <= 1:
            return True
        for v in sorted(frozenset().union(*facets)):
            link = _maximal(f - {v} for f in facets if v in f)
            deletion = _maximal(f - {v} for f in facets)
            if link & deletion:
                continue
            if vd(link) and vd(deletion):
                LOG.debug("shedding vertex %d among %d facets", v, len(facets))
                return True
        return False

    return vd(c.facets)


def is_flag_closed(c: SimplicialComplexExplicit) -> bool:
    """True when every clique of the 1-skeleton is a face, i.e. minimal non-faces are edges."""
    vertices = sorted(c.vertices)
    index = {v: i for i, v in enumerate(vertices)}
    g = VertexColoredGraph([1] * len(vertices))
    for facet in c.facets:
        items = sorted(facet)
        for a in range(len(items)):
            for b in range(a + 1, len(items)):
                u, v = index[items[a]], index[items[b]]
                if not g.has_edge(u, v):
                    g.add_edge(u, v)
    for clique in maximal_cliques(g):
        face = frozenset(vertices[i] for i in clique)
        if not any(face <= facet for facet in c.facets):
            return False
    return True
