"""Weighted directed graphs with exact rational weights.

Everything in this module is exact: weights are `fractions.Fraction` from
parse to answer, and floating point appears only when a caller converts at a
matrix-construction boundary.  Graphs are simple (no loops, at most one edge
per unordered vertex pair) and immutable after construction.

Tie-breaking everywhere is lexicographic by vertex label (integers before
strings, so mixed labelings still order deterministically).
"""
from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

Vertex = int | str


def _vkey(v: Vertex):
    # Integers sort numerically, strings lexicographically, ints first.
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


def parse_weight(w) -> Fraction:
    if isinstance(w, bool):
        raise ValueError("weight must be a rational number, not a boolean")
    if isinstance(w, (int, str, Fraction)):
        value = Fraction(w)
    elif isinstance(w, float):
        # Floats are accepted but converted through their decimal repr so
        # "0.1" means 1/10, not the binary neighbour.
        value = Fraction(repr(w))
    else:
        raise ValueError(f"cannot parse weight {w!r}")
    return value


def format_weight(w: Fraction) -> str:
    return f"{w.numerator}/{w.denominator}" if w.denominator != 1 else str(w.numerator)


@dataclass(frozen=True)
class Edge:
    src: Vertex
    dst: Vertex
    weight: Fraction
    phase: float | None = None

    def endpoints(self) -> frozenset:
        return frozenset((self.src, self.dst))


@dataclass(frozen=True)
class WeightedDigraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    _adj: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        seen_v = set()
        for v in self.vertices:
            if v in seen_v:
                raise ValueError(f"duplicate vertex {v!r}")
            seen_v.add(v)
        seen_pairs = set()
        for e in self.edges:
            if e.src == e.dst:
                raise ValueError(f"loop at vertex {e.src!r} rejected")
            if e.src not in seen_v or e.dst not in seen_v:
                raise ValueError(f"edge {e.src!r}->{e.dst!r} uses an unknown vertex")
            pair = e.endpoints()
            if pair in seen_pairs:
                raise ValueError(f"parallel edge on {set(pair)!r} rejected")
            seen_pairs.add(pair)
            if e.weight <= 0:
                raise ValueError(f"edge {e.src!r}->{e.dst!r} has nonpositive weight")
        adj: dict[Vertex, list[tuple[int, Vertex]]] = {v: [] for v in self.vertices}
        for k, e in enumerate(self.edges):
            adj[e.src].append((k, e.dst))
            adj[e.dst].append((k, e.src))
        object.__setattr__(self, "_adj", adj)

    # -- basic queries -----------------------------------------------------

    def __contains__(self, v: Vertex) -> bool:
        return v in self._adj

    def require_vertex(self, v: Vertex) -> None:
        if v not in self._adj:
            raise KeyError(f"unknown vertex {v!r}")

    def incident(self, v: Vertex) -> list[tuple[int, Vertex]]:
        """(edge index, other endpoint) pairs, undirected."""
        return list(self._adj[v])

    def degree(self, v: Vertex) -> int:
        return len(self._adj[v])

    def out_edges(self, v: Vertex) -> list[int]:
        return [k for k, e in enumerate(self.edges) if e.src == v]

    def in_edges(self, v: Vertex) -> list[int]:
        return [k for k, e in enumerate(self.edges) if e.dst == v]

    def edge_between(self, u: Vertex, v: Vertex) -> tuple[int, int] | None:
        """(edge index, direction) with +1 if u->v is the orientation."""
        for k, e in enumerate(self.edges):
            if (e.src, e.dst) == (u, v):
                return k, +1
            if (e.src, e.dst) == (v, u):
                return k, -1
        return None

    def components(self) -> list[list[Vertex]]:
        seen: set[Vertex] = set()
        comps = []
        for v in sorted(self.vertices, key=_vkey):
            if v in seen:
                continue
            comp = []
            stack = [v]
            seen.add(v)
            while stack:
                u = stack.pop()
                comp.append(u)
                for _, w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp, key=_vkey))
        return comps

    # -- serialization -----------------------------------------------------

    @classmethod
    def from_json_dict(cls, data: dict) -> "WeightedDigraph":
        try:
            vertices = list(data["vertices"])
            raw_edges = list(data["edges"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"graph object needs 'vertices' and 'edges': {exc}") from exc
        edges = []
        for i, rec in enumerate(raw_edges):
            try:
                phase = rec.get("phase")
                edges.append(
                    Edge(
                        src=rec["src"],
                        dst=rec["dst"],
                        weight=parse_weight(rec["weight"]),
                        phase=None if phase is None else float(phase),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"/edges/{i}: {exc}") from exc
        return cls(tuple(vertices), tuple(edges))

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [
                {
                    "src": e.src,
                    "dst": e.dst,
                    "weight": format_weight(e.weight),
                    **({} if e.phase is None else {"phase": e.phase}),
                }
                for e in self.edges
            ],
        }

    @classmethod
    def from_json(cls, text: str) -> "WeightedDigraph":
        return cls.from_json_dict(json.loads(text))


# -- geodesics --------------------------------------------------------------


def geodesic_distances_from(g: WeightedDigraph, source: Vertex) -> dict[Vertex, Fraction]:
    """Single-source Dijkstra on the undirected underlying graph, exact.

    Unreachable vertices are simply absent from the result.
    """
    g.require_vertex(source)
    dist: dict[Vertex, Fraction] = {source: Fraction(0)}
    done: set[Vertex] = set()
    heap: list[tuple[Fraction, tuple, Vertex]] = [(Fraction(0), _vkey(source), source)]
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for k, w in g.incident(u):
            nd = d + g.edges[k].weight
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, _vkey(w), w))
    return dist


def geodesic_distance(g: WeightedDigraph, i: Vertex, j: Vertex) -> Fraction | float:
    """Infimum of undirected path lengths; math.inf for disconnected pairs."""
    g.require_vertex(j)
    dist = geodesic_distances_from(g, i)
    return dist.get(j, math.inf)


def bellman_ford_undirected(g: WeightedDigraph, source: Vertex) -> dict[Vertex, Fraction]:
    """Independent all-positive-weight shortest-path route (test oracle duty).

    Treats every edge as a pair of opposite arcs and relaxes |V|-1 times.
    """
    g.require_vertex(source)
    dist: dict[Vertex, Fraction | None] = {v: None for v in g.vertices}
    dist[source] = Fraction(0)
    arcs = [(e.src, e.dst, e.weight) for e in g.edges]
    arcs += [(e.dst, e.src, e.weight) for e in g.edges]
    for _ in range(max(0, len(g.vertices) - 1)):
        changed = False
        for u, v, w in arcs:
            du = dist[u]
            if du is not None and (dist[v] is None or du + w < dist[v]):
                dist[v] = du + w
                changed = True
        if not changed:
            break
    return {v: d for v, d in dist.items() if d is not None}


# -- orientation ------------------------------------------------------------


@dataclass(frozen=True)
class Acyclic:
    order: tuple[Vertex, ...]


@dataclass(frozen=True)
class Cyclic:
    cycle: tuple[Vertex, ...]  # closed: first == last


def acyclicity_witness(g: WeightedDigraph) -> Acyclic | Cyclic:
    """Topological order if the orientation is acyclic, else a directed cycle.

    The order comes from Kahn's algorithm with a heap, so ties resolve
    lexicographically; the cycle is a shortest one through the lexicographically
    smallest vertex that lies on any cycle.
    """
    indeg = {v: 0 for v in g.vertices}
    for e in g.edges:
        indeg[e.dst] += 1
    heap = [_vkey(v) + (v,) for v in g.vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order: list[Vertex] = []
    indeg_work = dict(indeg)
    while heap:
        *_, u = heapq.heappop(heap)
        order.append(u)
        for k in g.out_edges(u):
            w = g.edges[k].dst
            indeg_work[w] -= 1
            if indeg_work[w] == 0:
                heapq.heappush(heap, _vkey(w) + (w,))
    if len(order) == len(g.vertices):
        return Acyclic(tuple(order))
    return Cyclic(_shortest_directed_cycle(g))


def _shortest_directed_cycle(g: WeightedDigraph) -> tuple[Vertex, ...]:
    out_adj: dict[Vertex, list[Vertex]] = {v: [] for v in g.vertices}
    for e in g.edges:
        out_adj[e.src].append(e.dst)
    for v in out_adj:
        out_adj[v].sort(key=_vkey)
    best: tuple[int, list[Vertex]] | None = None
    for start in sorted(g.vertices, key=_vkey):
        # BFS over directed arcs until we step back onto start.
        parent: dict[Vertex, Vertex] = {}
        depth = {start: 0}
        frontier = [start]
        found: Vertex | None = None
        while frontier and found is None:
            nxt = []
            for u in frontier:
                for w in out_adj[u]:
                    if w == start:
                        found = u
                        break
                    if w not in depth:
                        depth[w] = depth[u] + 1
                        parent[w] = u
                        nxt.append(w)
                if found is not None:
                    break
            frontier = nxt
        if found is None:
            continue
        path = [found]
        while path[-1] != start:
            path.append(parent[path[-1]])
        cycle = [start] + list(reversed(path))[1:] + [start]
        length = len(cycle) - 1
        if best is None or length < best[0]:
            best = (length, cycle)
    if best is None:
        raise AssertionError("cycle requested on an acyclic orientation")
    return tuple(best[1])


# -- cycle space ------------------------------------------------------------


def _spanning_forest(g: WeightedDigraph) -> tuple[dict[Vertex, tuple[int, Vertex] | None], list[int]]:
    """DFS forest rooted at the smallest label of each component.

    Returns parent links (edge index, parent vertex) and the list of non-tree
    edge indices in declared edge order.
    """
    parent: dict[Vertex, tuple[int, Vertex] | None] = {}
    tree_edges: set[int] = set()
    for root in sorted(g.vertices, key=_vkey):
        if root in parent:
            continue
        parent[root] = None
        stack = [root]
        while stack:
            u = stack.pop()
            for k, w in sorted(g.incident(u), key=lambda t: t[0]):
                if w not in parent:
                    parent[w] = (k, u)
                    tree_edges.add(k)
                    stack.append(w)
        # DFS via an explicit stack; edge order makes this deterministic.
    non_tree = [k for k in range(len(g.edges)) if k not in tree_edges]
    return parent, non_tree


def _root_path(parent, v: Vertex) -> list[Vertex]:
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]][1])
    return path


def fundamental_cycles(g: WeightedDigraph) -> list[tuple[Vertex, ...]]:
    """One closed vertex path per independent cycle, |E| - |V| + #components.

    Each cycle traverses its non-tree edge first (src to dst) and returns to
    src through the spanning forest.
    """
    parent, non_tree = _spanning_forest(g)
    cycles = []
    for k in non_tree:
        e = g.edges[k]
        pa = _root_path(parent, e.src)
        pb = _root_path(parent, e.dst)
        sb = set(pb)
        # Lowest common ancestor: first vertex on src's root path that also
        # lies on dst's.
        meet = next(v for v in pa if v in sb)
        back = pb[: pb.index(meet) + 1] + list(reversed(pa[: pa.index(meet)]))
        cycles.append(tuple([e.src] + back))
    return cycles
