"""Exhaustive exact baselines for tiny graphs.

Subsets are tried by increasing size, each size in colexicographic order, so
the witness returned is the first optimal subset in that canonical order.
Edges without which no solution exists at all are fixed up front; since every
solution contains them, this changes neither the optimum nor the witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import BudgetExceeded
from .graph import DiGraph, Edge, ShortcutSet, adjacency_masks, ball_masks


@dataclass(frozen=True)
class OracleBudget:
    max_n: int = 7
    max_candidates: int = 24
    max_size: int | None = None

    def __post_init__(self):
        if self.max_n < 1 or self.max_candidates < 1:
            raise ValueError("oracle caps must be positive")
        if self.max_size is not None and self.max_size < 0:
            raise ValueError("max_size must be non-negative")


DEFAULT_BUDGET = OracleBudget()


def colex_combinations(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """k-subsets of range(n) in colexicographic order."""
    if k == 0:
        yield ()
        return
    for top in range(k - 1, n):
        for rest in colex_combinations(top, k - 1):
            yield rest + (top,)


class _Checker:
    """Tests whether base edges plus a subset keep every reachable pair within d."""

    def __init__(self, g: DiGraph, base: Sequence[Edge], candidates: Sequence[Edge], d: int):
        self.n = g.n
        self.d = d
        self.base = adjacency_masks(g.n, base)
        self.candidates = list(candidates)
        self.targets = [g.reach[u] & ~(1 << u) for u in range(g.n)]

    def ok(self, chosen: Sequence[Edge]) -> bool:
        masks = list(self.base)
        for u, v in chosen:
            masks[u] |= 1 << v
        for u in range(self.n):
            t = self.targets[u]
            if t and t & ~ball_masks(masks, u, self.d):
                return False
        return True


def _search(checker: _Checker, limit: int) -> tuple[int, tuple[Edge, ...]] | None:
    """Smallest valid subset of size <= limit, or None."""
    cands = checker.candidates
    if not checker.ok(cands):
        return None
    forced = [e for i, e in enumerate(cands) if not checker.ok(cands[:i] + cands[i + 1 :])]
    free = [e for e in cands if e not in set(forced)]
    for k in range(len(forced), min(limit, len(cands)) + 1):
        for idx in colex_combinations(len(free), k - len(forced)):
            chosen = forced + [free[i] for i in idx]
            if checker.ok(chosen):
                return k, tuple(sorted(chosen))
    return None


def _check_caps(g: DiGraph, candidates: Sequence[Edge], budget: OracleBudget) -> None:
    if g.n > budget.max_n:
        raise BudgetExceeded(f"n={g.n} exceeds oracle cap {budget.max_n}")
    if len(candidates) > budget.max_candidates:
        raise BudgetExceeded(f"{len(candidates)} candidate edges exceed oracle cap {budget.max_candidates}")


def _limit(n_cands: int, budget: OracleBudget) -> int:
    return n_cands if budget.max_size is None else min(n_cands, budget.max_size)


def min_shortcut_exact(g: DiGraph, d: int, budget: OracleBudget = DEFAULT_BUDGET) -> tuple[int, ShortcutSet]:
    """Minimum number of E^T \\ E edges bringing every reachable pair within d hops."""
    if d < 1:
        raise ValueError("d must be >= 1")
    cands = g.candidate_edges()
    _check_caps(g, cands, budget)
    found = _search(_Checker(g, g.edges, cands, d), _limit(len(cands), budget))
    if found is None:
        raise BudgetExceeded(f"no shortcut within max_size={budget.max_size}")
    size, edges = found
    return size, ShortcutSet.of(g, edges)


def min_tc_spanner_exact(g: DiGraph, d: int, budget: OracleBudget = DEFAULT_BUDGET) -> tuple[int, frozenset[Edge]]:
    """Minimum closure-preserving H within E^T whose diameter is at most d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    cands = g.closure_edges()
    _check_caps(g, cands, budget)
    found = _search(_Checker(g, (), cands, d), _limit(len(cands), budget))
    if found is None:
        raise BudgetExceeded(f"no spanner within max_size={budget.max_size}")
    size, edges = found
    return size, frozenset(edges)


def min_closure_subgraph(g: DiGraph, budget: OracleBudget = DEFAULT_BUDGET) -> frozenset[Edge]:
    """Brute-force minimum subgraph of E with the same closure as g."""
    cands = list(g.edges)
    _check_caps(g, g.candidate_edges(), budget)
    reach = g.reach
    for k in range(len(cands) + 1):
        for idx in colex_combinations(len(cands), k):
            h = DiGraph(g.n, [cands[i] for i in idx])
            if h.reach == reach:
                return frozenset(h.edges)
    raise AssertionError("E itself preserves the closure")


def exists_shortcut(g: DiGraph, s: int, d: int, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    """Whether some d-shortcut with at most s edges exists."""
    cands = g.candidate_edges()
    if s >= len(cands):
        return True
    _check_caps(g, cands, budget)
    return _search(_Checker(g, g.edges, cands, d), max(0, int(s))) is not None
