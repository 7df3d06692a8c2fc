"""Thick/thin pair classification and the sampling settler for thick pairs."""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field

from .decompose import chain_antichain_decompose, path_two_shortcut
from .errors import NotReachable, ParameterError, RetryExhausted
from .graph import DiGraph, Edge, PairSet, ShortcutSet, graph_diameter, iter_bits, unsettled_pairs
from .params import DEFAULT_CONSTANTS, Constants, log2n, max_retries

log = logging.getLogger(__name__)

REGIMES = ("unit", "small_log", "general", "universal_fallback")


def local_graph_size(g: DiGraph, u: int, v: int) -> int:
    if u == v or not g.reaches(u, v):
        raise NotReachable(f"{v} is not reachable from {u}")
    return g.local_mask(u, v).bit_count()


def classify_pairs(g: DiGraph, beta: float) -> tuple[PairSet, PairSet]:
    """Split reachable pairs into (thick, thin) by local-graph size >= beta."""
    thick, thin = [], []
    anc = g.ancestors
    for u in range(g.n):
        down = g.reach[u] | 1 << u
        for v in iter_bits(g.reach[u]):
            if v == u:
                continue
            size = (down & (anc[v] | 1 << v)).bit_count()
            (thick if size >= beta else thin).append((u, v))
    return PairSet(frozenset(thick)), PairSet(frozenset(thin))


@dataclass(frozen=True)
class ThickConfig:
    beta: float
    alpha_d: int
    d: int
    seed: int = 0
    regime: str | None = None  # None picks the regime from alpha_d * d
    constants: Constants = field(default=DEFAULT_CONSTANTS)

    def __post_init__(self):
        if self.beta < 1:
            raise ParameterError(f"beta must be >= 1, got {self.beta}")
        if self.alpha_d < 1 or self.d < 1:
            raise ParameterError("alpha_d and d must be >= 1")
        if self.regime is not None and self.regime not in REGIMES:
            raise ParameterError(f"unknown regime {self.regime!r}")

    @property
    def reach_bound(self) -> int:
        return self.alpha_d * self.d

    def resolve_regime(self, n: int) -> str:
        if self.regime not in (None, "universal_fallback"):
            return self.regime
        if self.reach_bound == 1:
            return "unit"
        if self.reach_bound <= self.constants.log_regime * log2n(n):
            return "small_log"
        return "general"


def _hub_closure_edges(g: DiGraph, hubs) -> set[Edge]:
    edges = set()
    anc = g.ancestors
    for u in hubs:
        edges.update((v, u) for v in iter_bits(anc[u]) if v != u)
        edges.update((u, v) for v in iter_bits(g.reach[u]) if v != u)
    return edges - g.edge_set


def chain_shortcut_edges(g: DiGraph, chains) -> set[Edge]:
    """Edges giving every chain diameter <= 2 on top of E."""
    edges: set[Edge] = set()
    for chain in chains:
        edges.update(zip(chain, chain[1:]))
        edges |= path_two_shortcut(chain, g).edges
    return edges - g.edge_set


def _hub_path_edges(g: DiGraph, hubs, chains) -> set[Edge]:
    edges = set()
    anc = g.ancestors
    for u in hubs:
        down, up = g.reach[u], anc[u]
        for chain in chains:
            first = next((w for w in chain if down >> w & 1), None)
            if first is not None:
                edges.add((u, first))
            last = next((w for w in reversed(chain) if up >> w & 1), None)
            if last is not None:
                edges.add((last, u))
    return edges - g.edge_set


def settle_thick(g: DiGraph, cfg: ThickConfig, retries: int | None = None) -> ShortcutSet:
    """Build F1 so that every beta-thick pair ends up within alpha_d * d hops.

    Sampling is retried with seeds ``seed, seed+1, ...`` until the thick pairs
    verify, so the result is always correct or ``RetryExhausted`` is raised.
    """
    g.require_dag()
    n = g.n
    retries = max_retries() if retries is None else retries
    regime = cfg.resolve_regime(n)
    bound = cfg.reach_bound
    c = cfg.constants
    thick, _ = classify_pairs(g, cfg.beta)
    info = {"regime": regime, "beta": cfg.beta, "retries": 0, "thick_pairs": len(thick)}

    if regime == "unit":
        edges = {p for p in thick.pairs if p not in g.edge_set}
        return ShortcutSet.of(g, edges, **info)

    base: set[Edge] = set()
    chains: tuple = ()
    if regime == "general":
        k = min(max(1, math.ceil(8 * n / bound)), max(n, 1))
        dec = chain_antichain_decompose(g, k)
        chains = dec.chains
        base = chain_shortcut_edges(g, chains)
        info.update(chains=len(chains), antichains=len(dec.antichains), chain_edges=len(base))
    if not thick:
        return ShortcutSet.of(g, base, **info)

    lg = log2n(n)
    for attempt in range(retries):
        rng = random.Random(cfg.seed + attempt)
        if regime == "small_log":
            n_hubs = min(math.ceil(n / cfg.beta * lg), n)
            hubs = sorted(rng.sample(range(n), n_hubs))
            edges = _hub_closure_edges(g, hubs)
        else:
            n_hubs = min(math.ceil(c.hub_sample * lg * n / cfg.beta), n)
            n_chains = min(math.ceil(c.chain_sample * lg * n / bound**2), len(chains))
            hubs = sorted(rng.sample(range(n), n_hubs))
            picked = sorted(rng.sample(range(len(chains)), n_chains))
            edges = base | _hub_path_edges(g, hubs, [chains[i] for i in picked])
        missed = unsettled_pairs(g, edges, thick.pairs, bound)
        if not missed:
            info.update(retries=attempt, hubs=n_hubs)
            return ShortcutSet.of(g, edges, **info)
        log.debug("thick attempt %d left %d pairs unsettled", attempt, len(missed))
    raise RetryExhausted(f"thick pairs unsettled after {retries} attempts")


def universal_shortcut(
    g: DiGraph,
    D: int,
    seed: int = 0,
    constants: Constants = DEFAULT_CONSTANTS,
    retries: int | None = None,
) -> ShortcutSet:
    """Shortcut bringing every reachable pair within ``D`` hops.

    Stand-in for a dedicated large-diameter construction: runs the thick
    settler with beta = 1, so every pair counts as thick. Size is
    O(n log n + n^2 log^2 n / D^2).
    """
    g.require_dag()
    if graph_diameter(g) <= D:
        return ShortcutSet.of(g, (), regime="universal_fallback", beta=1, retries=0)
    cfg = ThickConfig(beta=1, alpha_d=1, d=max(1, D), seed=seed, regime="universal_fallback", constants=constants)
    f = settle_thick(g, cfg, retries)
    f.info["inner_regime"] = f.info["regime"]
    f.info["regime"] = "universal_fallback"
    return f
