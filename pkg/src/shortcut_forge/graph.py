"""Directed graphs, reachability bitsets and shortcut/spanner verification.

Vertices are dense integers ``0..n-1``. Vertex sets and reachability rows are
Python ints used as bitsets: bit ``v`` of ``reach[u]`` is set iff a path of
length >= 1 leads from ``u`` to ``v``.
"""

from __future__ import annotations

import hashlib
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import IndexOutOfRange, NotADag, SelfLoop

Edge = tuple[int, int]
INF = math.inf


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class DiGraph:
    """Immutable simple digraph with lazily cached reachability."""

    def __init__(self, n: int, edges: Iterable[Edge]):
        if n < 0:
            raise IndexOutOfRange(f"vertex count must be non-negative, got {n}")
        seen: set[Edge] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise IndexOutOfRange(f"edge ({u},{v}) outside [0,{n})")
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            seen.add((u, v))
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(sorted(seen))
        self.edge_set: frozenset[Edge] = frozenset(seen)
        out: list[list[int]] = [[] for _ in range(n)]
        inn: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            out[u].append(v)
            inn[v].append(u)
        self.out: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in out)
        self.inn: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in inn)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"DiGraph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DiGraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_set

    @cached_property
    def graph_id(self) -> str:
        h = hashlib.sha256(f"{self.n}:{self.edges}".encode()).hexdigest()
        return h[:16]

    @cached_property
    def out_mask(self) -> tuple[int, ...]:
        return tuple(bits_of(a) for a in self.out)

    # -- strongly connected components ---------------------------------

    @cached_property
    def _scc(self) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        """Tarjan's algorithm, iterative.

        Returns (comp_of_vertex, components) with components emitted in
        reverse topological order of the condensation.
        """
        n = self.n
        index = [-1] * n
        low = [0] * n
        on_stack = [False] * n
        stack: list[int] = []
        comp = [-1] * n
        comps: list[tuple[int, ...]] = []
        counter = 0
        for root in range(n):
            if index[root] != -1:
                continue
            work = [(root, 0)]
            index[root] = low[root] = counter
            counter += 1
            stack.append(root)
            on_stack[root] = True
            while work:
                v, i = work[-1]
                succ = self.out[v]
                if i < len(succ):
                    work[-1] = (v, i + 1)
                    w = succ[i]
                    if index[w] == -1:
                        index[w] = low[w] = counter
                        counter += 1
                        stack.append(w)
                        on_stack[w] = True
                        work.append((w, 0))
                    elif on_stack[w]:
                        low[v] = min(low[v], index[w])
                    continue
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    members = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp[w] = len(comps)
                        members.append(w)
                        if w == v:
                            break
                    comps.append(tuple(sorted(members)))
        return tuple(comp), tuple(comps)

    @cached_property
    def is_dag(self) -> bool:
        _, comps = self._scc
        return len(comps) == self.n

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        """Kahn's algorithm with smallest-index-first tie breaking."""
        if not self.is_dag:
            raise NotADag("graph contains a directed cycle")
        import heapq

        indeg = [len(a) for a in self.inn]
        heap = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for w in self.out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        return tuple(order)

    def require_dag(self) -> None:
        if not self.is_dag:
            raise NotADag("graph contains a directed cycle")

    # -- reachability ----------------------------------------------------

    @cached_property
    def reach(self) -> tuple[int, ...]:
        """Descendant bitsets; ``u`` is in its own row only if it lies on a cycle."""
        comp, comps = self._scc
        comp_bits = [bits_of(c) for c in comps]
        comp_reach = [0] * len(comps)
        # Tarjan emits sinks first, so every successor component is done.
        for c, members in enumerate(comps):
            acc = 0
            for v in members:
                for w in self.out[v]:
                    cw = comp[w]
                    if cw != c:
                        acc |= comp_bits[cw] | comp_reach[cw]
            if len(members) > 1:
                acc |= comp_bits[c]
            comp_reach[c] = acc
        return tuple(comp_reach[comp[v]] for v in range(self.n))

    @cached_property
    def ancestors(self) -> tuple[int, ...]:
        anc = [0] * self.n
        for u, row in enumerate(self.reach):
            bit = 1 << u
            for v in iter_bits(row):
                anc[v] |= bit
        return tuple(anc)

    def reaches(self, u: int, v: int) -> bool:
        return bool(self.reach[u] >> v & 1)

    def closure_edges(self) -> list[Edge]:
        """E^T as a sorted list; self-pairs of cyclic vertices are excluded."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.reach[u]) if v != u]

    def candidate_edges(self) -> list[Edge]:
        """E^T \\ E, the edges a shortcut may use."""
        return [e for e in self.closure_edges() if e not in self.edge_set]

    def reachable_pairs(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v in iter_bits(self.reach[u]):
                if v != u:
                    yield (u, v)

    def local_mask(self, u: int, v: int) -> int:
        """Vertices lying on some u->v path, both endpoints included."""
        return (self.reach[u] | 1 << u) & (self.ancestors[v] | 1 << v)


@dataclass(frozen=True)
class ShortcutSet:
    edges: frozenset[Edge]
    base_graph_id: str = ""
    info: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(sorted(self.edges))

    def __contains__(self, e: object) -> bool:
        return e in self.edges

    @classmethod
    def of(cls, g: DiGraph, edges: Iterable[Edge], **info) -> "ShortcutSet":
        return cls(frozenset((int(u), int(v)) for u, v in edges), g.graph_id, dict(info))


@dataclass(frozen=True)
class PairSet:
    pairs: frozenset[Edge]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Edge]:
        return iter(sorted(self.pairs))

    def __contains__(self, p: object) -> bool:
        return p in self.pairs


def build_graph(n: int, edge_list: Iterable[Edge]) -> DiGraph:
    return DiGraph(n, edge_list)


def transitive_closure(g: DiGraph) -> tuple[int, ...]:
    return g.reach


@dataclass(frozen=True)
class Condensation:
    dag: DiGraph
    component: tuple[int, ...]
    representative: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]


def scc_condense(g: DiGraph) -> Condensation:
    """Contract every SCC; components are numbered by their smallest vertex.

    The representative of a component is its minimum-index vertex, so for a
    DAG the vertex map is the identity.
    """
    raw_comp, comps = g._scc
    order = sorted(range(len(comps)), key=lambda c: comps[c][0])
    renumber = {old: new for new, old in enumerate(order)}
    component = tuple(renumber[c] for c in raw_comp)
    members = tuple(comps[old] for old in order)
    dag_edges = {(component[u], component[v]) for u, v in g.edges if component[u] != component[v]}
    dag = DiGraph(len(members), dag_edges)
    return Condensation(dag, component, tuple(m[0] for m in members), members)


def transitive_reduction(g: DiGraph) -> DiGraph:
    """Unique minimum closure-preserving subgraph of a DAG."""
    g.require_dag()
    reach = g.reach
    kept = []
    for u in range(g.n):
        succ = g.out[u]
        via = 0
        for w in succ:
            via |= reach[w]
        kept.extend((u, v) for v in succ if not via >> v & 1)
    return DiGraph(g.n, kept)


def combined_adjacency(n: int, base: Iterable[Edge], extra: Iterable[Edge] = ()) -> list[list[int]]:
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in base:
        adj[u].add(v)
    for u, v in extra:
        adj[u].add(v)
    return [sorted(a) for a in adj]


def bfs_distances(adj: Sequence[Sequence[int]], source: int, limit: float = INF) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        dx = dist[x]
        if dx >= limit:
            continue
        for y in adj[x]:
            if y not in dist:
                dist[y] = dx + 1
                queue.append(y)
    return dist


def bounded_dist(g: DiGraph, extra: Iterable[Edge] | ShortcutSet, u: int, v: int, limit: float) -> float:
    """Hop distance u->v in E plus ``extra``, or ``inf`` when it exceeds ``limit``."""
    if limit < 0:
        raise ValueError("limit must be non-negative")
    adj = combined_adjacency(g.n, g.edges, _edges_of(extra))
    if u == v:
        return 0
    d = bfs_distances(adj, u, limit).get(v)
    return INF if d is None else d


def ball_masks(adj_mask: Sequence[int], source: int, limit: int) -> int:
    """Bitset of vertices within ``limit`` hops of ``source`` (source included)."""
    seen = frontier = 1 << source
    for _ in range(limit):
        nxt = 0
        for x in iter_bits(frontier):
            nxt |= adj_mask[x]
        frontier = nxt & ~seen
        if not frontier:
            break
        seen |= frontier
    return seen


def adjacency_masks(n: int, base: Iterable[Edge], extra: Iterable[Edge] = ()) -> list[int]:
    masks = [0] * n
    for u, v in base:
        masks[u] |= 1 << v
    for u, v in extra:
        masks[u] |= 1 << v
    return masks


def unsettled_pairs(g: DiGraph, extra: Iterable[Edge], pairs: Iterable[Edge], bound: int) -> list[Edge]:
    """Pairs whose distance in E plus ``extra`` exceeds ``bound``, sorted."""
    by_source: dict[int, int] = {}
    for u, v in pairs:
        by_source[u] = by_source.get(u, 0) | 1 << v
    masks = adjacency_masks(g.n, g.edges, extra)
    bad = []
    for u in sorted(by_source):
        missing = by_source[u] & ~ball_masks(masks, u, bound)
        bad.extend((u, v) for v in iter_bits(missing))
    return bad


@dataclass
class VerifyReport:
    valid: bool
    reason: str
    worst_pair: Edge | None
    worst_dist: float
    size: int

    def __bool__(self) -> bool:
        return self.valid


def _edges_of(f) -> list[Edge]:
    if isinstance(f, ShortcutSet):
        return sorted(f.edges)
    return sorted((int(u), int(v)) for u, v in f)


def _diameter_over(g: DiGraph, adj: Sequence[Sequence[int]]) -> tuple[float, Edge | None]:
    """Largest distance over reachable distinct pairs of ``g``, with its pair.

    Ties resolve to the lexicographically smallest pair.
    """
    worst: float = 0
    worst_pair: Edge | None = None
    for u in range(g.n):
        targets = g.reach[u] & ~(1 << u)
        if not targets:
            continue
        dist = bfs_distances(adj, u)
        for v in iter_bits(targets):
            d = dist.get(v, INF)
            if d > worst:
                worst, worst_pair = d, (u, v)
    return worst, worst_pair


def graph_diameter(g: DiGraph) -> float:
    return _diameter_over(g, g.out)[0]


def verify_shortcut(g: DiGraph, f, D: float) -> VerifyReport:
    edges = _edges_of(f)
    for u, v in edges:
        if not (0 <= u < g.n and 0 <= v < g.n) or u == v or not g.reaches(u, v):
            return VerifyReport(False, f"edge ({u},{v}) not in closure", (u, v), INF, len(edges))
        if (u, v) in g.edge_set:
            return VerifyReport(False, f"edge ({u},{v}) already in base graph", (u, v), INF, len(edges))
    adj = combined_adjacency(g.n, g.edges, edges)
    worst, pair = _diameter_over(g, adj)
    if worst > D:
        return VerifyReport(False, f"diameter {worst} exceeds {D}", pair, worst, len(edges))
    return VerifyReport(True, "ok", pair, worst, len(edges))


def verify_tc_spanner(g: DiGraph, h, D: float) -> VerifyReport:
    edges = _edges_of(h)
    for u, v in edges:
        if not (0 <= u < g.n and 0 <= v < g.n) or u == v or not g.reaches(u, v):
            return VerifyReport(False, f"edge ({u},{v}) not in closure", (u, v), INF, len(edges))
    hg = DiGraph(g.n, edges)
    if hg.reach != g.reach:
        pair = next((u, v) for u, v in g.reachable_pairs() if not hg.reaches(u, v))
        return VerifyReport(False, "closure mismatch", pair, INF, len(edges))
    worst, pair = _diameter_over(g, hg.out)
    if worst > D:
        return VerifyReport(False, f"diameter {worst} exceeds {D}", pair, worst, len(edges))
    return VerifyReport(True, "ok", pair, worst, len(edges))
