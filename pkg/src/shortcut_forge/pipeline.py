"""Top-level solvers: bicriteria shortcuts for DAGs and general digraphs,
and TC spanners via the shortcut reductions.

Every solver verifies its own output before returning it; a value that comes
back is always valid at the advertised hop bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadBudget, ParameterError, PromiseViolated
from .graph import (
    DiGraph,
    ShortcutSet,
    graph_diameter,
    scc_condense,
    transitive_reduction,
    verify_shortcut,
    verify_tc_spanner,
)
from .params import DEFAULT_CONSTANTS, Constants, thick_size_cap, thin_size_cap, theorem_cap
from .thick import ThickConfig, classify_pairs, settle_thick, universal_shortcut
from .thin import settle_thin

FALLBACK_EXPONENT = 0.45


@dataclass(frozen=True)
class SolveParams:
    s: float
    d: int
    alpha_d: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise ParameterError(f"d must be >= 1, got {self.d}")
        if self.alpha_d < 1 or int(self.alpha_d) != self.alpha_d:
            raise ParameterError(f"alpha_d must be a positive integer, got {self.alpha_d}")

    @property
    def bound(self) -> int:
        return self.alpha_d * self.d


def balanced_beta(n: int, s: float, d: int, alpha_d: int) -> float:
    """Threshold equalising the two settler size bounds, before clamping."""
    return n / (d * math.sqrt(s * alpha_d))


class SolverFailure(RuntimeError):
    """A component returned a set that failed final verification (a bug)."""


def approx_shortcut_dag(
    g: DiGraph,
    p: SolveParams,
    constants: Constants = DEFAULT_CONSTANTS,
    retries: int | None = None,
    trace=None,
) -> ShortcutSet:
    """(alpha_d, alpha_s)-approximate shortcut of a DAG: F1 for thick pairs, F2 for thin."""
    g.require_dag()
    n = g.n
    if p.s < n:
        raise ParameterError(f"budget s={p.s} must be at least n={n}")
    bound = p.bound
    info = {
        "n": n,
        "m": g.m,
        "s": p.s,
        "d": p.d,
        "alpha_d": p.alpha_d,
        "cap": theorem_cap(n, p.s, p.d, p.alpha_d, constants),
    }
    if graph_diameter(g) <= bound:
        info.update(regime="trivial", beta=None, retries=0, f1=0, f2=0)
        return ShortcutSet.of(g, (), **info)

    raw_beta = balanced_beta(n, p.s, p.d, p.alpha_d)
    if raw_beta < 1 or bound >= n**FALLBACK_EXPONENT:
        f1 = universal_shortcut(g, bound, p.seed, constants, retries)
        f2 = ShortcutSet.of(g, ())
        beta = 1.0
        regime = "universal_fallback"
        thick_retries = f1.info.get("retries", 0)
    else:
        beta = min(max(raw_beta, 1.0), float(n))
        _, thin = classify_pairs(g, beta)
        cfg = ThickConfig(beta=beta, alpha_d=p.alpha_d, d=p.d, seed=p.seed, constants=constants)
        f1 = settle_thick(g, cfg, retries)
        f2 = settle_thin(g, p.s, p.d, p.alpha_d, beta, p.seed, constants, retries, trace, thin)
        regime = f1.info["regime"]
        thick_retries = f1.info["retries"]
    edges = f1.edges | f2.edges
    report = verify_shortcut(g, edges, bound)
    if not report.valid:
        raise SolverFailure(f"final verification failed: {report.reason}")
    info.update(
        regime=regime,
        beta=beta,
        retries=thick_retries + f2.info.get("fails", 0),
        f1=len(f1),
        f2=len(f2),
        f1_cap=thick_size_cap(n, beta, bound, constants),
        f2_cap=thin_size_cap(n, beta, p.alpha_d, p.s, constants),
        constraints=f2.info.get("constraints", 0),
        achieved=report.worst_dist,
    )
    return ShortcutSet.of(g, edges, **info)


def approx_shortcut(
    g: DiGraph,
    p: SolveParams,
    constants: Constants = DEFAULT_CONSTANTS,
    retries: int | None = None,
) -> ShortcutSet:
    """Shortcut for any digraph: solve the condensation, lift through SCC centers.

    Each SCC gets a two-way star around its smallest vertex (< 2n edges in
    total) and each condensation shortcut (C, C') becomes an edge between
    centers. The result is verified at 3 alpha_d d. Entering and leaving an
    SCC through non-center vertices can cost two extra hops per component, so
    if verification fails every condensation edge is also lifted to its
    centers, which caps distances at alpha_d d + 2.
    """
    if p.s < g.n:
        raise ParameterError(f"budget s={p.s} must be at least n={g.n}")
    if g.is_dag:
        return approx_shortcut_dag(g, p, constants, retries)
    cond = scc_condense(g)
    inner = approx_shortcut_dag(cond.dag, p, constants, retries)
    rep = cond.representative
    lifted = {(rep[a], rep[b]) for a, b in inner.edges} - g.edge_set
    star = set()
    for members in cond.members:
        center = members[0]
        for w in members[1:]:
            star.add((center, w))
            star.add((w, center))
    star -= g.edge_set
    edges = lifted | star
    bound = 3 * p.bound
    report = verify_shortcut(g, edges, bound)
    repair = set()
    if not report.valid:
        repair = {(rep[a], rep[b]) for a, b in cond.dag.edges} - g.edge_set - edges
        edges |= repair
        report = verify_shortcut(g, edges, bound)
        if not report.valid:
            raise SolverFailure(f"final verification failed: {report.reason}")
    info = dict(inner.info)
    info.update(
        n=g.n,
        m=g.m,
        components=cond.dag.n,
        lifted=len(lifted),
        star=len(star),
        repair=len(repair),
        bound=bound,
        achieved=report.worst_dist,
    )
    return ShortcutSet.of(g, edges, **info)


def approx_tc_spanner(
    g: DiGraph,
    p: SolveParams,
    constants: Constants = DEFAULT_CONSTANTS,
    retries: int | None = None,
) -> ShortcutSet:
    """TC spanner = transitive reduction plus a shortcut of the reduction.

    Cyclic inputs are condensed first; the spanner of the condensation is
    lifted to SCC centers and completed with two-way stars (bound 3 alpha_d d).
    """
    if not g.is_dag:
        cond = scc_condense(g)
        inner = approx_tc_spanner(cond.dag, p, constants, retries)
        rep = cond.representative
        edges = {(rep[a], rep[b]) for a, b in inner.edges}
        for members in cond.members:
            for w in members[1:]:
                edges.add((members[0], w))
                edges.add((w, members[0]))
        bound = 3 * p.bound
        report = verify_tc_spanner(g, edges, bound)
        if not report.valid:
            raise SolverFailure(f"final verification failed: {report.reason}")
        return ShortcutSet.of(g, edges, **dict(inner.info, bound=bound, achieved=report.worst_dist))

    reduction = transitive_reduction(g)
    if reduction.m > p.s:
        raise PromiseViolated(
            f"transitive reduction has {reduction.m} edges > s={p.s}; no (s, d) TC spanner exists"
        )
    f = approx_shortcut_dag(reduction, p, constants, retries)
    edges = set(reduction.edges) | f.edges
    report = verify_tc_spanner(g, edges, p.bound)
    if not report.valid:
        raise SolverFailure(f"final verification failed: {report.reason}")
    info = dict(f.info, reduction=reduction.m, shortcut=len(f), achieved=report.worst_dist)
    return ShortcutSet.of(g, edges, **info)


def shortcut_from_tcspanner(
    g: DiGraph,
    p: SolveParams,
    constants: Constants = DEFAULT_CONSTANTS,
    retries: int | None = None,
) -> ShortcutSet:
    """Shortcut obtained from a TC-spanner call with budget 2s (needs s >= m)."""
    if p.s < g.m:
        raise BadBudget(f"s={p.s} must be at least m={g.m}")
    budget = max(2 * p.s, g.n)
    h = approx_tc_spanner(g, SolveParams(budget, p.d, p.alpha_d, p.seed), constants, retries)
    edges = h.edges - g.edge_set
    bound = h.info.get("bound", p.bound)
    report = verify_shortcut(g, edges, bound)
    if not report.valid:
        raise SolverFailure(f"final verification failed: {report.reason}")
    return ShortcutSet.of(g, edges, **dict(h.info, spanner_size=len(h), achieved=report.worst_dist))
