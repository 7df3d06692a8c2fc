"""Chain/antichain partitions of a DAG's closure and 2-shortcuts of chains."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BadK, NotAChain
from .graph import DiGraph, Edge, ShortcutSet, iter_bits


@dataclass(frozen=True)
class Decomposition:
    chains: tuple[tuple[int, ...], ...]
    antichains: tuple[tuple[int, ...], ...]
    k: int

    def check(self, g: DiGraph) -> None:
        """Raise AssertionError if any partition invariant fails."""
        parts = [v for c in self.chains for v in c] + [v for q in self.antichains for v in q]
        assert sorted(parts) == list(range(g.n)), "parts must partition V"
        for c in self.chains:
            for x, y in zip(c, c[1:]):
                assert g.reaches(x, y), f"chain order broken at ({x},{y})"
        for q in self.antichains:
            mask = sum(1 << v for v in q)
            for x in q:
                assert not g.reach[x] & mask, f"antichain {q} has comparable members"
        assert len(self.antichains) <= 2 * g.n / self.k
        assert len(self.chains) <= self.k


def _longest_chain(g: DiGraph, alive: int) -> list[int]:
    """Lexicographically smallest maximum-length chain among ``alive`` vertices."""
    reach = g.reach
    order = [v for v in g.topological_order if alive >> v & 1]
    length = {}
    for v in reversed(order):
        best = 0
        for w in iter_bits(reach[v] & alive):
            if length[w] > best:
                best = length[w]
        length[v] = best + 1
    if not length:
        return []
    top = max(length.values())
    v = min(x for x in length if length[x] == top)
    chain = [v]
    while length[v] > 1:
        v = min(w for w in iter_bits(reach[v] & alive) if length[w] == length[v] - 1)
        chain.append(v)
    return chain


def chain_antichain_decompose(g: DiGraph, k: int) -> Decomposition:
    """Partition V into at most ``k`` chains and at most ``2n/k`` antichains.

    Longest chains are peeled off while they hold at least ``2n/k`` vertices
    (so fewer than ``k/2`` are taken); the rest is split into Mirsky layers,
    whose count equals its longest chain and is therefore below ``2n/k``.
    """
    g.require_dag()
    n = g.n
    if not 1 <= k <= max(n, 1):
        raise BadK(f"k must lie in [1, {n}], got {k}")
    threshold = 2 * n / k
    alive = (1 << n) - 1
    chains = []
    while alive:
        chain = _longest_chain(g, alive)
        if len(chain) < threshold:
            break
        chains.append(tuple(chain))
        for v in chain:
            alive &= ~(1 << v)
    level: dict[int, int] = {}
    anc = g.ancestors
    for v in g.topological_order:
        if alive >> v & 1:
            level[v] = 1 + max((level[w] for w in iter_bits(anc[v] & alive)), default=0)
    layers: dict[int, list[int]] = {}
    for v, lv in level.items():
        layers.setdefault(lv, []).append(v)
    antichains = tuple(tuple(sorted(layers[lv])) for lv in sorted(layers))
    return Decomposition(tuple(chains), antichains, k)


def _midpoint_edges(length: int) -> list[tuple[int, int]]:
    """Index pairs of the divide-and-conquer 2-shortcut of a path 0..length."""
    out: list[tuple[int, int]] = []
    stack = [(0, length)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        mid = (lo + hi) // 2
        out.extend((i, mid) for i in range(lo, mid - 1))
        out.extend((mid, j) for j in range(mid + 2, hi + 1))
        stack.append((lo, mid - 1))
        stack.append((mid + 1, hi))
    return out


def path_two_shortcut(chain: Sequence[int], g: DiGraph | None = None) -> ShortcutSet:
    """Edges bringing every ordered pair of ``chain`` within two hops.

    Consecutive chain pairs are the path itself and never returned. When ``g``
    is given the chain order is checked against its closure and edges already
    in ``g`` are dropped.
    """
    chain = list(chain)
    if len(set(chain)) != len(chain):
        raise NotAChain("chain repeats a vertex")
    if g is not None:
        for x, y in zip(chain, chain[1:]):
            if not g.reaches(x, y):
                raise NotAChain(f"{x} does not reach {y}")
    edges: set[Edge] = {(chain[i], chain[j]) for i, j in _midpoint_edges(len(chain) - 1)}
    if g is not None:
        edges -= g.edge_set
        return ShortcutSet.of(g, edges)
    return ShortcutSet(frozenset(edges))
