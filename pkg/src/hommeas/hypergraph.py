"""
Hypergraphs given by edge-vertex incidence matrices.

Rows of the incidence matrix are edges and columns are vertices. Edges
may repeat. The Cheeger constant is computed exactly by enumerating
vertex subsets, so graphs are limited to a configurable number of
vertices (24 by default).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import f2la
from .f2la import as_bits

__all__ = [
    "Hypergraph",
    "CheegerCapExceeded",
    "DEFAULT_CHEEGER_CAP",
    "boundary",
    "cheeger",
    "sparsest_cut",
    "expand_edges",
    "expand_hyperedges",
    "perfect_matchings",
    "cycle_basis",
    "Cellulation",
    "cellulate",
]

DEFAULT_CHEEGER_CAP = 24


class CheegerCapExceeded(RuntimeError):
    """Too many vertices for exhaustive subset enumeration."""


class Hypergraph:
    """Vertex count plus an incidence matrix of shape ``(edges, vertices)``."""

    def __init__(self, incidence, n_vertices: int | None = None):
        a = np.asarray(incidence)
        if a.size == 0:
            cols = n_vertices if n_vertices is not None else (a.shape[1] if a.ndim == 2 else 0)
            m = np.zeros((0, cols), np.uint8)
        else:
            m = as_bits(a)
        if n_vertices is not None and m.shape[1] != n_vertices:
            raise ValueError(f"incidence has {m.shape[1]} columns, expected {n_vertices}")
        if m.shape[0] and not m.any(axis=1).all():
            raise ValueError("edges must contain at least one vertex")
        m.setflags(write=False)
        self.incidence = m

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Sequence[Sequence[int]]) -> "Hypergraph":
        m = np.zeros((len(edges), n_vertices), np.uint8)
        for i, e in enumerate(edges):
            for v in e:
                if not 0 <= v < n_vertices:
                    raise ValueError(f"vertex {v} out of range")
                m[i, v] ^= 1
        return cls(m, n_vertices)

    @property
    def n_vertices(self) -> int:
        return self.incidence.shape[1]

    @property
    def n_edges(self) -> int:
        return self.incidence.shape[0]

    def degrees(self) -> np.ndarray:
        return self.incidence.sum(axis=0).astype(np.int64)

    def edges(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in np.flatnonzero(r)) for r in self.incidence]

    def is_graph(self) -> bool:
        """True when every edge has exactly two vertices."""
        return bool((self.incidence.sum(axis=1) == 2).all())

    def with_edges(self, edges: Sequence[Sequence[int]]) -> "Hypergraph":
        extra = Hypergraph.from_edges(self.n_vertices, edges).incidence
        return Hypergraph(np.vstack([self.incidence, extra]), self.n_vertices)

    def _key(self) -> tuple:
        return (self.incidence.shape, self.incidence.tobytes())

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Hypergraph(vertices={self.n_vertices}, edges={self.n_edges})"


def boundary(g: Hypergraph, s) -> np.ndarray:
    """Indices of edges meeting ``s`` in an odd number of vertices."""
    ind = np.zeros(g.n_vertices, np.int64)
    for v in s:
        if not 0 <= v < g.n_vertices:
            raise ValueError(f"vertex {v} out of range")
        ind[v] = 1
    odd = (g.incidence.astype(np.int64) @ ind) & 1
    return np.flatnonzero(odd)


def _lowest_bit_index(x: np.ndarray) -> np.ndarray:
    low = x & -x
    return np.log2(low.astype(np.float64)).astype(np.int64)


def _lexmin_subset(masks: np.ndarray) -> int:
    """Mask whose sorted vertex tuple is lexicographically smallest."""
    masks = np.unique(masks.astype(np.int64))
    prefix = 0
    while True:
        low = _lowest_bit_index(masks)
        masks = masks[low == low.min()]
        bit = np.int64(1) << low.min()
        prefix |= int(bit)
        masks = masks ^ bit
        if (masks == 0).any() or masks.size == 0:
            return prefix


@lru_cache(maxsize=4096)
def _sparsest(shape: tuple[int, int], data: bytes, cap: int) -> tuple[Fraction, tuple[int, ...]]:
    inc = np.frombuffer(data, dtype=np.uint8).reshape(shape)
    n_e, n_v = shape
    if n_v < 2:
        raise ValueError("the Cheeger constant needs at least two vertices")
    if n_v > cap:
        raise CheegerCapExceeded(f"{n_v} vertices exceed the Cheeger cap {cap}")
    half = n_v // 2
    vert = f2la.pack_rows(inc.T) if n_e else np.zeros((n_v, 1), np.uint64)
    b = min(n_v, 16)
    table = np.zeros((1 << b, vert.shape[1]), np.uint64)
    for i in range(b):
        table[1 << i: 1 << (i + 1)] = table[: 1 << i] ^ vert[i]
    low_ids = np.arange(1 << b, dtype=np.int64)
    low_size = np.bitwise_count(low_ids).astype(np.int64)
    best = np.full(half + 1, np.iinfo(np.int64).max, np.int64)
    chunks = []
    offset = np.zeros(vert.shape[1], np.uint64)
    prev = 0
    for i in range(1 << (n_v - b)):
        gray = i ^ (i >> 1)
        flip = gray ^ prev
        if flip:
            offset ^= vert[b + flip.bit_length() - 1]
        prev = gray
        sizes = low_size + bin(gray).count("1")
        ok = (sizes >= 1) & (sizes <= half)
        if not ok.any():
            continue
        cuts = np.bitwise_count(table ^ offset).sum(axis=1, dtype=np.int64)
        np.minimum.at(best, sizes[ok], cuts[ok])
        chunks.append((gray, sizes, cuts, ok))
    ratio = min(Fraction(int(best[s]), s) for s in range(1, half + 1))
    p, q = ratio.numerator, ratio.denominator
    ties = []
    for gray, sizes, cuts, ok in chunks:
        hit = ok & (cuts * q == p * sizes)
        if hit.any():
            ties.append(low_ids[hit] | (np.int64(gray) << b))
    mask = _lexmin_subset(np.concatenate(ties))
    subset = tuple(v for v in range(n_v) if mask >> v & 1)
    return ratio, subset


def _sparsest_of(g: Hypergraph, cap: int) -> tuple[Fraction, tuple[int, ...]]:
    if g.n_vertices < 2:
        # no admissible cut exists, so the minimum is over an empty set
        return math.inf, ()
    inc = np.ascontiguousarray(g.incidence, dtype=np.uint8)
    return _sparsest(inc.shape, inc.tobytes(), int(cap))


def cheeger(g: Hypergraph, cap: int = DEFAULT_CHEEGER_CAP) -> Fraction:
    """Exact Cheeger constant ``min |dS| / |S|`` over ``0 < |S| <= |V|/2``.

    A graph with fewer than two vertices has no such ``S``; its constant
    is ``math.inf``.

    Raises
    ------
    CheegerCapExceeded
        If the graph has more than ``cap`` vertices.
    """
    return _sparsest_of(g, cap)[0]


def sparsest_cut(g: Hypergraph, cap: int = DEFAULT_CHEEGER_CAP) -> tuple[int, ...]:
    """A vertex set attaining the Cheeger constant.

    Among all minimizers the one whose sorted vertex tuple is
    lexicographically smallest is returned.
    """
    return _sparsest_of(g, cap)[1]


def expand_edges(g: Hypergraph, cap: int = DEFAULT_CHEEGER_CAP,
                 trace: list | None = None) -> tuple[Hypergraph, list[tuple[int, int]]]:
    """Greedily add two-vertex edges until the Cheeger constant reaches 1.

    Each round finds the sparsest cut ``S`` and tries every pair of a
    minimum-degree vertex of ``S`` with a minimum-degree vertex outside
    ``S``. The pair giving the largest Cheeger constant wins; ties go to
    the pair that is farthest apart in the current graph (a long-range
    edge shortens the cycles it closes) and then to index order.

    Parameters
    ----------
    trace : list, optional
        Receives the Cheeger constant before each round and at the end.
    """
    added: list[tuple[int, int]] = []
    h, s = _sparsest_of(g, cap)
    if trace is not None:
        trace.append(h)
    while h < 1:
        deg = g.degrees()
        inside = np.zeros(g.n_vertices, bool)
        inside[list(s)] = True
        ins = np.flatnonzero(inside)
        out = np.flatnonzero(~inside)
        v1s = ins[deg[ins] == deg[ins].min()]
        v2s = out[deg[out] == deg[out].min()]
        best_key = None
        best_e = None
        for v1 in v1s:
            dist = _distances(g, int(v1))
            for v2 in v2s:
                e = (int(min(v1, v2)), int(max(v1, v2)))
                key = (cheeger(g.with_edges([e]), cap), dist[v2])
                if best_key is None or key > best_key:
                    best_key, best_e = key, e
        g = g.with_edges([best_e])
        added.append(best_e)
        h, s = _sparsest_of(g, cap)
        if trace is not None:
            trace.append(h)
    return g, added


def _distances(g: Hypergraph, source: int) -> np.ndarray:
    """Hop distances from ``source``; vertices sharing an edge are adjacent.

    Unreachable vertices get ``n_vertices``, which exceeds every finite
    distance.
    """
    n = g.n_vertices
    dist = np.full(n, n, np.int64)
    dist[source] = 0
    inc = g.incidence.astype(bool)
    frontier = np.zeros(n, bool)
    frontier[source] = True
    step = 0
    while frontier.any():
        step += 1
        touched = inc[inc[:, frontier].any(axis=1)].any(axis=0)
        frontier = touched & (dist == n)
        dist[frontier] = step
    return dist


def perfect_matchings(vertices: Sequence[int]):
    """Yield every perfect matching of ``vertices`` as a list of pairs.

    The first element is always paired first, so matchings come out in
    lexicographic order of their pair lists.
    """
    vs = list(vertices)
    if not vs:
        yield []
        return
    a = vs[0]
    for i in range(1, len(vs)):
        rest = vs[1:i] + vs[i + 1:]
        for m in perfect_matchings(rest):
            yield [(a, vs[i])] + m


def expand_hyperedges(g: Hypergraph, cap: int = DEFAULT_CHEEGER_CAP) -> tuple[Hypergraph, list[int]]:
    """Replace every edge on more than two vertices by a perfect matching of it.

    Hyperedges are handled in row order. For each one, all perfect
    matchings of its vertices are scored by the Cheeger constant of the
    graph after the replacement (later hyperedges still present) and the
    first best one is kept.

    Returns
    -------
    (graph, origin)
        ``origin[j]`` is the index of the input edge that new edge ``j``
        came from, so a map on edges is carried over by ``f0[:, origin]``.

    Raises
    ------
    ValueError
        For a hyperedge with an odd number of vertices.
    """
    rows = [tuple(int(v) for v in np.flatnonzero(r)) for r in g.incidence]
    for r in rows:
        if len(r) % 2:
            raise ValueError(f"edge {r} has odd weight {len(r)}")
    pieces: list[list[tuple[int, ...]]] = [[r] for r in rows]

    def graph_of(pcs) -> Hypergraph:
        flat = [e for p in pcs for e in p]
        return Hypergraph.from_edges(g.n_vertices, flat)

    for i, r in enumerate(rows):
        if len(r) <= 2:
            continue
        best_h = None
        best_m = None
        for m in perfect_matchings(r):
            trial = pieces[:i] + [m] + pieces[i + 1:]
            hc = cheeger(graph_of(trial), cap) if g.n_vertices >= 2 else Fraction(0)
            if best_h is None or hc > best_h:
                best_h, best_m = hc, m
        pieces[i] = [tuple(e) for e in best_m]
    origin = [i for i, p in enumerate(pieces) for _ in p]
    return graph_of(pieces), origin


def cycle_basis(g: Hypergraph) -> np.ndarray:
    """Rows ``N`` (cycles over edge indices) with ``N M = 0`` and full row rank.

    The row count is ``|E| - rank M``.
    """
    return f2la.nullspace(g.incidence.T)


class Cellulation(NamedTuple):
    graph: Hypergraph
    cycles: np.ndarray
    added: list
    complete: bool


def _cycle_order(edges: list[tuple[int, ...]], cycle: np.ndarray) -> list[int] | None:
    """Vertices of a simple cycle in traversal order, or None if not simple."""
    idx = np.flatnonzero(cycle)
    if idx.size < 3:
        return None
    adj: dict[int, list[int]] = {}
    for e in idx:
        ed = edges[e]
        if len(ed) != 2:
            return None
        a, b = ed
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if any(len(v) != 2 for v in adj.values()) or len(adj) != idx.size:
        return None
    start = min(adj)
    order = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        order.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
        if len(order) > len(adj):
            return None
    return order if len(order) == len(adj) else None


def cellulate(g: Hypergraph, cycles, max_cycle_weight: int, max_degree: int) -> Cellulation:
    """Split heavy cycles by adding chords inside them.

    Cycle rows of weight at least ``max_cycle_weight`` are cut in two, one
    chord at a time, where a chord joins two vertices of the cycle and may
    not push either endpoint above ``max_degree``. Each step looks at all
    heavy cycles together and adds the chord with the lightest heavier
    piece; ties prefer endpoints lying on fewer heavy cycles, then the
    smallest vertex pair. Pieces are revisited until no heavy cycle admits
    a chord.

    Returns
    -------
    Cellulation
        New graph, cycle rows over the enlarged edge set, the added chords
        and ``complete``, which is False when some heavy cycle (or a cycle
        that is not a simple cycle of two-vertex edges) could not be split.
    """
    cycles = as_bits(cycles, ncols=g.n_edges)
    rows = [r.astype(np.uint8) for r in cycles]
    edges = g.edges()
    deg = g.degrees().copy()
    added: list[tuple[int, int]] = []
    stuck: set[int] = set()
    complete = True

    def weight(r):
        return int(r.sum())

    while True:
        heavy = [i for i, r in enumerate(rows) if weight(r) >= max_cycle_weight and i not in stuck]
        if not heavy:
            break
        demand = np.zeros(g.n_vertices, np.int64)
        for r in rows:
            if weight(r) >= max_cycle_weight:
                for e in np.flatnonzero(r):
                    for v in set(edges[e]):
                        demand[v] += 1
        best = None
        orders = {}
        for i in heavy:
            order = _cycle_order(edges, rows[i])
            found = False
            if order is not None:
                orders[i] = order
                length = len(order)
                for a_pos, b_pos in itertools.combinations(range(length), 2):
                    gap = b_pos - a_pos
                    if gap < 2 or gap > length - 2:
                        continue
                    a, b = order[a_pos], order[b_pos]
                    if deg[a] + 1 > max_degree or deg[b] + 1 > max_degree:
                        continue
                    found = True
                    heavier = max(gap + 1, length - gap + 1)
                    key = (heavier, int(demand[a] + demand[b]), tuple(sorted((a, b))), i, a_pos, b_pos)
                    if best is None or key < best:
                        best = key
            if not found:
                # degrees only grow, so this cycle can never be split later
                stuck.add(i)
                complete = False
        if best is None:
            continue
        _, _, chord, i, a_pos, b_pos = best
        order = orders[i]
        edges.append(chord)
        added.append(chord)
        deg[chord[0]] += 1
        deg[chord[1]] += 1
        rows = [np.append(r, 0).astype(np.uint8) for r in rows]
        e_new = len(edges) - 1
        edge_index = {}
        for e in np.flatnonzero(rows[i]):
            edge_index.setdefault(frozenset(edges[e]), []).append(e)
        piece1 = np.zeros(len(edges), np.uint8)
        for t in range(a_pos, b_pos):
            piece1[edge_index[frozenset((order[t], order[t + 1]))][0]] = 1
        piece1[e_new] = 1
        piece2 = rows[i] ^ piece1
        rows[i] = piece1
        rows.append(piece2)
    graph = Hypergraph.from_edges(g.n_vertices, edges)
    out = np.array(rows, dtype=np.uint8) if rows else np.zeros((0, len(edges)), np.uint8)
    return Cellulation(graph, out, added, complete)
