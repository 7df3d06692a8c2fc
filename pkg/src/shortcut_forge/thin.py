"""Thin-pair settler: critical-set LP solved by cutting planes.

A k-critical set of a reachable pair (u, v) is a set A of closure edges
outside E such that the closure minus A has no u->v path of at most k hops.
Every d-shortcut must hit every such set, so each one is a valid covering
constraint ``sum_{e in A} x_e >= 1``. The driver keeps a pool of them, solves
the LP restricted to the pool, and asks Cut-or-Round for either a rounded
solution or a new violated constraint.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from .errors import (
    Infeasible,
    IterationCapExceeded,
    NotReachable,
    ParameterError,
    PreconditionViolated,
    RetryExhausted,
)
from .graph import DiGraph, Edge, PairSet, ShortcutSet, iter_bits, unsettled_pairs
from .params import DEFAULT_CONSTANTS, Constants, log2n, max_retries, thin_size_cap
from .thick import classify_pairs

log = logging.getLogger(__name__)

LP_EPS = 1e-9


@dataclass(frozen=True)
class CriticalSet:
    edges: frozenset[Edge]
    witness: Edge
    bound: int

    def __len__(self) -> int:
        return len(self.edges)

    def mass(self, x: "FractionalSolution | Mapping[Edge, float]") -> float:
        values = x.x if isinstance(x, FractionalSolution) else x
        return math.fsum(values.get(e, 0.0) for e in self.edges)

    def line(self) -> str:
        u, v = self.witness
        body = " ".join(f"{a},{b}" for a, b in sorted(self.edges))
        return f"{self.bound} {u} {v} : {body}".rstrip()


@dataclass
class FractionalSolution:
    x: dict[Edge, float]
    budget: float

    @property
    def total(self) -> float:
        return math.fsum(self.x.values())


class _LocalClosure:
    """Closure edges inside the local graph of (u, v), with some edges removed.

    ``allowed[a]`` is the bitset of heads b such that (a, b) is a closure
    edge inside the local graph and not currently removed.
    """

    def __init__(self, g: DiGraph, u: int, v: int):
        self.u, self.v = u, v
        self.local = g.local_mask(u, v)
        self.full = {a: g.reach[a] & self.local for a in iter_bits(self.local)}
        self.allowed = dict(self.full)

    def contains(self, e: Edge) -> bool:
        a, b = e
        return a in self.full and bool(self.full[a] >> b & 1)

    def remove(self, e: Edge) -> None:
        a, b = e
        if a in self.allowed:
            self.allowed[a] &= ~(1 << b)

    def restore(self, e: Edge) -> None:
        a, b = e
        if a in self.full and self.full[a] >> b & 1:
            self.allowed[a] |= 1 << b

    def within(self, k: int) -> bool:
        """True iff v is reachable from u in at most k remaining hops."""
        seen = frontier = 1 << self.u
        target = 1 << self.v
        for _ in range(k):
            nxt = 0
            for a in iter_bits(frontier):
                nxt |= self.allowed[a]
            if nxt & target:
                return True
            frontier = nxt & ~seen
            if not frontier:
                return False
            seen |= frontier
        return False


def _closure(g: DiGraph, u: int, v: int) -> _LocalClosure:
    if u == v or not g.reaches(u, v):
        raise NotReachable(f"{v} is not reachable from {u}")
    return _LocalClosure(g, u, v)


def is_critical(g: DiGraph, A: Iterable[Edge], u: int, v: int, k: int) -> bool:
    """True iff the closure minus ``A`` has no u->v path of length <= k."""
    lc = _closure(g, u, v)
    for e in A:
        lc.remove(e)
    return not lc.within(k)


def _prune(lc: _LocalClosure, edges: Iterable[Edge], k: int) -> frozenset[Edge]:
    """Greedy single pass: drop every edge whose restoration keeps criticality.

    Criticality is monotone under supersets, so one pass yields a minimal set.
    """
    kept = set(edges)
    for e in sorted(kept):
        lc.restore(e)
        if lc.within(k):
            lc.remove(e)
        else:
            kept.discard(e)
    return frozenset(kept)


def is_minimal_critical(g: DiGraph, A: Iterable[Edge], u: int, v: int, k: int) -> bool:
    A = set(A)
    if not is_critical(g, A, u, v, k):
        return False
    return all(not is_critical(g, A - {e}, u, v, k) for e in A)


def minimal_critical_set(g: DiGraph, u: int, v: int, k: int, protected: Iterable[Edge] = ()) -> CriticalSet:
    """Minimal k-critical set for (u, v) avoiding E and ``protected``."""
    lc = _closure(g, u, v)
    protected = set(protected)
    keep = g.edge_set | protected
    start = [
        (a, b)
        for a in iter_bits(lc.local)
        for b in iter_bits(lc.allowed[a])
        if (a, b) not in keep
    ]
    for e in start:
        lc.remove(e)
    if lc.within(k):
        raise PreconditionViolated(f"({u},{v}) is already within {k} hops of E plus the protected edges")
    return CriticalSet(_prune(lc, start, k), (u, v), k)


class ConstraintPool:
    """Covering constraints, each revalidated as a minimal critical set on insert."""

    def __init__(self, g: DiGraph, validate: bool = True):
        self.g = g
        self.validate = validate
        self.constraints: list[CriticalSet] = []
        self._seen: set[frozenset[Edge]] = set()

    def __len__(self) -> int:
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    def add(self, cs: CriticalSet) -> bool:
        """Insert ``cs``; returns False if an identical edge set is pooled."""
        if cs.edges in self._seen:
            return False
        if self.validate:
            if cs.edges & self.g.edge_set:
                raise PreconditionViolated("critical set intersects E")
            u, v = cs.witness
            if not is_minimal_critical(self.g, cs.edges, u, v, cs.bound):
                raise PreconditionViolated(f"not a minimal {cs.bound}-critical set for {cs.witness}")
        self.constraints.append(cs)
        self._seen.add(cs.edges)
        return True

    def dump(self) -> str:
        return "".join(cs.line() + "\n" for cs in self.constraints)


def _solve_cover(constraints: list[CriticalSet], domain: set[Edge] | None):
    variables = sorted(set().union(*(c.edges for c in constraints)))
    if domain is not None:
        variables = [e for e in variables if e in domain]
    col = {e: i for i, e in enumerate(variables)}
    rows, cols = [], []
    for r, cs in enumerate(constraints):
        for e in cs.edges:
            if e in col:
                rows.append(r)
                cols.append(col[e])
    if any(not any(e in col for e in cs.edges) for cs in constraints):
        return variables, None, None
    a = csr_matrix((-np.ones(len(rows)), (rows, cols)), shape=(len(constraints), len(variables)))
    res = linprog(
        np.ones(len(variables)),
        A_ub=a,
        b_ub=-np.ones(len(constraints)),
        bounds=(0, 1),
        method="highs",
    )
    if res.status != 0:
        return variables, None, None
    return variables, res, col


def certified_lower_bound(constraints: list[CriticalSet], duals: Iterable[float]) -> Fraction:
    """Exact weak-duality bound on sum(x) over all covers of ``constraints``.

    Any y >= 0 whose per-edge load sum_{A containing e} y_A is at most 1
    certifies sum(x) >= sum(y). Loads are computed in rationals and y is
    scaled down when the float duals slightly overload an edge.
    """
    ys = [max(Fraction(0), Fraction(float(y)).limit_denominator(10**9)) for y in duals]
    load: dict[Edge, Fraction] = {}
    for cs, y in zip(constraints, ys):
        for e in cs.edges:
            load[e] = load.get(e, Fraction(0)) + y
    peak = max(load.values(), default=Fraction(0))
    total = sum(ys, Fraction(0))
    return total / peak if peak > 1 else total


def min_cover_value(constraints: list[CriticalSet]) -> tuple[float, Fraction]:
    """(LP optimum, exact certified lower bound) of min sum(x) over the pool."""
    if not constraints:
        return 0.0, Fraction(0)
    _, res, _ = _solve_cover(constraints, None)
    duals = -np.asarray(res.ineqlin.marginals)
    return float(res.fun), certified_lower_bound(constraints, duals)


def lp_feasible(pool: ConstraintPool | list[CriticalSet], candidates: Iterable[Edge] | None, s: float) -> FractionalSolution:
    """Minimum-mass point satisfying every pooled constraint, within budget ``s``.

    Raises ``Infeasible`` when the pool alone forces more than ``s`` mass,
    which proves the graph has no (s, d)-shortcut.
    """
    constraints = list(pool)
    if not constraints:
        return FractionalSolution({}, s)
    domain = None if candidates is None else set(candidates)
    variables, res, _ = _solve_cover(constraints, domain)
    if res is None:
        raise Infeasible("a pooled constraint has no candidate edge", constraints, math.inf, s)
    if res.fun > s + LP_EPS:
        duals = -np.asarray(res.ineqlin.marginals)
        bound = certified_lower_bound(constraints, duals)
        raise Infeasible(
            f"pooled critical sets need mass {res.fun:.6g} > budget {s}",
            constraints,
            bound,
            s,
        )
    x = {}
    for e, val in zip(variables, res.x):
        val = min(1.0, max(0.0, float(val)))
        if val > 1e-12:
            x[e] = val
    return FractionalSolution(x, s)


@dataclass(frozen=True)
class Rounded:
    f2: frozenset[Edge]


@dataclass(frozen=True)
class Violated:
    constraint: CriticalSet
    source: CriticalSet
    source_mass: float


@dataclass(frozen=True)
class Fail:
    reason: str


def _bfs_layers(lc: _LocalClosure, source: int) -> list[int]:
    layers = []
    seen = frontier = 1 << source
    while frontier:
        layers.append(frontier)
        nxt = 0
        for a in iter_bits(frontier):
            nxt |= lc.allowed[a]
        frontier = nxt & ~seen
        seen |= frontier
    return layers


def decompose_critical(
    g: DiGraph,
    a_prime: CriticalSet,
    x: FractionalSolution | Mapping[Edge, float],
    d: int,
    alpha_d: int,
) -> CriticalSet:
    """Extract a minimal d-critical subset of light mass from an (alpha_d d)-critical set.

    Layers L_0, L_1, ... come from a BFS rooted at the witness source in the
    closure minus ``a_prime`` (restricted to the witness's local graph, which
    holds every relevant shortest path). Batch i spans layers 2(i-1)d to
    2id-1 and A_i collects the edges of ``a_prime`` touching it; each edge
    touches at most two batches, so the lightest A_i has mass below 1. Its
    witness u is a source-most vertex of L_{2(i-1)d} with a closure edge into
    L_{2id-1}, and v any such endpoint.
    """
    g.require_dag()
    values = x.x if isinstance(x, FractionalSolution) else x
    s, t = a_prime.witness
    bound = alpha_d * d
    if d < 1 or alpha_d < 1:
        raise ParameterError("d and alpha_d must be >= 1")
    if a_prime.bound < bound or a_prime.edges & g.edge_set:
        raise PreconditionViolated("input must be an (alpha_d d)-critical set disjoint from E")
    if not is_critical(g, a_prime.edges, s, t, bound):
        raise PreconditionViolated(f"input is not {bound}-critical for {a_prime.witness}")
    mass = a_prime.mass(values)
    if mass >= alpha_d / 9:
        raise PreconditionViolated(f"mass {mass:.6g} is not below alpha_d/9 = {alpha_d / 9:.6g}")

    lc = _closure(g, s, t)
    inside = frozenset(e for e in a_prime.edges if lc.contains(e))

    if alpha_d == 1:
        lc_min = _closure(g, s, t)
        for e in inside:
            lc_min.remove(e)
        return CriticalSet(_prune(lc_min, inside, d), (s, t), d)

    if d == 1:
        # Batches of width 1 degenerate; a single light edge is itself a
        # minimal 1-critical set for its own endpoints.
        e = min(inside, key=lambda f: (values.get(f, 0.0), f))
        if values.get(e, 0.0) >= 1:
            raise PreconditionViolated("no edge of mass below 1")
        return CriticalSet(frozenset([e]), e, 1)

    for e in inside:
        lc.remove(e)
    layers = _bfs_layers(lc, s)
    n_batches = (bound + 1) // (2 * d)
    if n_batches < 1 or len(layers) <= 2 * n_batches * d - 1:
        raise PreconditionViolated("not enough BFS layers for a batch")

    best_i, best_mass, best_edges = 0, math.inf, frozenset()
    for i in range(1, n_batches + 1):
        batch = 0
        for j in range(2 * (i - 1) * d, 2 * i * d):
            batch |= layers[j]
        a_i = frozenset(e for e in inside if batch >> e[0] & 1 or batch >> e[1] & 1)
        m_i = math.fsum(values.get(e, 0.0) for e in a_i)
        if m_i < best_mass:
            best_i, best_mass, best_edges = i, m_i, a_i
    first, last = layers[2 * (best_i - 1) * d], layers[2 * best_i * d - 1]
    starts = [w for w in iter_bits(first) if g.reach[w] & last]
    s_mask = sum(1 << w for w in starts)
    u = next(w for w in starts if not g.reach[w] & s_mask)
    v = next(iter_bits(g.reach[u] & last))

    lc_uv = _closure(g, u, v)
    for e in best_edges:
        lc_uv.remove(e)
    if lc_uv.within(d):
        raise AssertionError(f"batch {best_i} is not {d}-critical for ({u},{v})")
    result = CriticalSet(_prune(lc_uv, best_edges, d), (u, v), d)
    if result.mass(values) >= 1:
        raise AssertionError("decomposed critical set is not violated")
    return result


def cut_or_round(
    g: DiGraph,
    x: FractionalSolution,
    thin: PairSet | Iterable[Edge],
    d: int,
    alpha_d: int,
    beta: float,
    seed: int,
    constants: Constants = DEFAULT_CONSTANTS,
) -> Rounded | Violated | Fail:
    """Round ``x`` to a thin-pair shortcut, or return a violated constraint."""
    n = g.n
    lg = log2n(n)
    scale = constants.round_prob * lg * beta / alpha_d
    rng = random.Random(seed)
    f2 = set()
    for e in sorted(x.x):
        p = min(1.0, scale * x.x[e])
        if p > 0 and rng.random() < p:
            f2.add(e)
    bound = alpha_d * d
    pairs = thin.pairs if isinstance(thin, PairSet) else set(thin)
    open_pairs = unsettled_pairs(g, f2, pairs, bound)
    if not open_pairs:
        if len(f2) <= thin_size_cap(n, beta, alpha_d, x.budget, constants):
            return Rounded(frozenset(f2))
        return Fail("rounded set exceeds the size cap")
    u, v = open_pairs[0]
    a_prime = minimal_critical_set(g, u, v, bound, protected=f2)
    mass = a_prime.mass(x)
    if mass >= alpha_d / 9:
        return Fail(f"critical set for ({u},{v}) carries mass {mass:.4g}")
    a = a_prime if alpha_d == 1 else decompose_critical(g, a_prime, x, d, alpha_d)
    return Violated(a, a_prime, mass)


@dataclass
class ThinTrace:
    """Collects every Cut-or-Round outcome together with the x it saw."""

    events: list[tuple[FractionalSolution, object]] = field(default_factory=list)

    def __call__(self, x: FractionalSolution, outcome) -> None:
        self.events.append((x, outcome))


def settle_thin(
    g: DiGraph,
    s: float,
    d: int,
    alpha_d: int,
    beta: float,
    seed: int = 0,
    constants: Constants = DEFAULT_CONSTANTS,
    retries: int | None = None,
    trace: Callable[[FractionalSolution, object], None] | None = None,
    thin: PairSet | None = None,
) -> ShortcutSet:
    """Cutting-plane loop producing F2 that (alpha_d d)-settles all thin pairs."""
    g.require_dag()
    if s < g.n:
        raise ParameterError(f"budget s={s} must be at least n={g.n}")
    if d < 1 or alpha_d < 1:
        raise ParameterError("d and alpha_d must be >= 1")
    retries = max_retries() if retries is None else retries
    if thin is None:
        _, thin = classify_pairs(g, beta)
    bound = alpha_d * d
    pending = PairSet(frozenset(unsettled_pairs(g, (), thin.pairs, bound)))
    info = {"thin_pairs": len(thin), "pending": len(pending), "constraints": 0, "fails": 0, "lp_solves": 0}
    if not pending:
        return ShortcutSet.of(g, (), **info)

    pool = ConstraintPool(g)
    candidates = g.candidate_edges()
    cap = 4 * g.n * g.n
    rng_seed = seed
    while True:
        x = lp_feasible(pool, candidates, s)
        info["lp_solves"] += 1
        for _ in range(retries):
            outcome = cut_or_round(g, x, pending, d, alpha_d, beta, rng_seed, constants)
            rng_seed += 1
            if trace is not None:
                trace(x, outcome)
            if isinstance(outcome, Rounded):
                info.update(constraints=len(pool), pool=pool)
                return ShortcutSet.of(g, outcome.f2, **info)
            if isinstance(outcome, Violated) and pool.add(outcome.constraint):
                break
            info["fails"] += 1
        else:
            raise RetryExhausted(f"Cut-or-Round failed {retries} times on one LP point")
        if len(pool) > cap:
            raise IterationCapExceeded(f"more than {cap} constraints added")
