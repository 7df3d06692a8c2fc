"""Instance factories: random and structured DAGs, cyclic digraphs and LabelCover graphs."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import BadRho, ParameterError
from .graph import DiGraph, Edge, ShortcutSet


def _check_prob(p: float) -> None:
    if not 0 <= p <= 1:
        raise ParameterError(f"edge probability must lie in [0, 1], got {p}")


def gen_random_dag(n: int, edge_prob: float, seed: int = 0) -> DiGraph:
    _check_prob(edge_prob)
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_prob]
    return DiGraph(n, edges)


def gen_path(n: int) -> DiGraph:
    if n < 1:
        raise ParameterError("n must be >= 1")
    return DiGraph(n, [(i, i + 1) for i in range(n - 1)])


def layer_of(n: int, layers: int, v: int) -> int:
    """Layer index of vertex v when n vertices are split into contiguous layers."""
    return v * layers // n


def gen_layered(n: int, layers: int, edge_prob: float, seed: int = 0) -> DiGraph:
    """Random DAG whose edges only join consecutive layers."""
    if n < 1 or layers < 1:
        raise ParameterError("n and layers must be >= 1")
    _check_prob(edge_prob)
    rng = random.Random(seed)
    groups: list[list[int]] = [[] for _ in range(layers)]
    for v in range(n):
        groups[layer_of(n, layers, v)].append(v)
    edges = []
    for lo, hi in zip(groups, groups[1:]):
        edges.extend((u, v) for u in lo for v in hi if rng.random() < edge_prob)
    return DiGraph(n, edges)


def gen_planted_cycles(
    n: int, edge_prob: float, cycles: int = 2, cycle_len: int = 3, seed: int = 0
) -> DiGraph:
    """Random DAG plus ``cycles`` directed cycles on random vertex sets."""
    _check_prob(edge_prob)
    if cycle_len < 2 or cycle_len > n:
        raise ParameterError(f"cycle length must lie in [2, {n}]")
    rng = random.Random(seed)
    edges = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_prob}
    for _ in range(cycles):
        ring = rng.sample(range(n), cycle_len)
        edges.update(zip(ring, ring[1:] + ring[:1]))
    return DiGraph(n, edges)


@dataclass(frozen=True)
class LabelCoverInstance:
    """Bipartite instance with |A| = |B| = delta and labels 0..labels-1.

    ``relations`` maps each edge (i, i') of A x B to its nonempty set of
    acceptable label pairs.
    """

    delta: int
    labels: int
    edges: tuple[Edge, ...]
    relations: Mapping[Edge, frozenset[tuple[int, int]]]
    regular: bool = False
    planted: tuple[tuple[int, ...], tuple[int, ...]] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.delta < 1 or self.labels < 1:
            raise ParameterError("delta and labels must be >= 1")
        object.__setattr__(self, "edges", tuple(sorted(set(self.edges))))
        if set(self.relations) != set(self.edges):
            raise ParameterError("relations must be given for exactly the instance edges")
        for (i, j), rel in self.relations.items():
            if not (0 <= i < self.delta and 0 <= j < self.delta):
                raise ParameterError(f"edge ({i},{j}) out of range")
            if not rel:
                raise ParameterError(f"relation of edge ({i},{j}) is empty")
            for a, b in rel:
                if not (0 <= a < self.labels and 0 <= b < self.labels):
                    raise ParameterError(f"label pair ({a},{b}) out of range")
        if self.regular:
            deg_a = [0] * self.delta
            deg_b = [0] * self.delta
            for i, j in self.edges:
                deg_a[i] += 1
                deg_b[j] += 1
            if len(set(deg_a + deg_b)) > 1:
                raise ParameterError("instance flagged regular has uneven degrees")

    def covers(self, psi_a: Sequence[int], psi_b: Sequence[int]) -> bool:
        return all((psi_a[i], psi_b[j]) in self.relations[(i, j)] for i, j in self.edges)


def figure_instance() -> LabelCoverInstance:
    """delta = labels = 3 with one edge (1, 1) and a cyclic relation."""
    rel = frozenset({(0, 1), (1, 2), (2, 0)})
    return LabelCoverInstance(3, 3, ((1, 1),), {(1, 1): rel}, planted=((0, 0, 0), (1, 1, 1)))


def gen_labelcover_instance(
    delta: int,
    labels: int,
    density: float,
    seed: int = 0,
    satisfiable: bool = False,
    regular: bool = False,
) -> LabelCoverInstance:
    """Random instance; ``satisfiable`` plants a covering labeling first.

    Regular instances use ``round(density * delta)`` cyclic shifts (at least one).
    """
    _check_prob(density)
    rng = random.Random(seed)
    if regular:
        degree = max(1, round(density * delta))
        shifts = rng.sample(range(delta), degree)
        edges = [(i, (i + o) % delta) for i in range(delta) for o in shifts]
    else:
        edges = [(i, j) for i in range(delta) for j in range(delta) if rng.random() < density]
    planted = None
    if satisfiable:
        planted = (
            tuple(rng.randrange(labels) for _ in range(delta)),
            tuple(rng.randrange(labels) for _ in range(delta)),
        )
    all_pairs = [(a, b) for a in range(labels) for b in range(labels)]
    relations = {}
    for i, j in edges:
        rel = set()
        if planted:
            rel.add((planted[0][i], planted[1][j]))
        while not rel:
            rel = {p for p in all_pairs if rng.random() < 0.5}
        if planted:
            rel |= {p for p in all_pairs if rng.random() < 0.5}
        relations[(i, j)] = frozenset(rel)
    return LabelCoverInstance(delta, labels, tuple(edges), relations, regular, planted)


class LabelCoverLayout:
    """Vertex numbering of the LabelCover graph for given instance sizes and rho."""

    def __init__(self, delta: int, labels: int, rho: int):
        if rho < 2:
            raise BadRho(f"rho must be >= 2, got {rho}")
        self.delta, self.labels, self.rho = delta, labels, rho
        self._cell = delta * labels
        self._hat = self._cell * (rho - 1)

    @property
    def n(self) -> int:
        return 2 * self.delta + 2 * self._cell + 2 * self._hat

    def a(self, i: int) -> int:
        return i

    def b(self, i: int) -> int:
        return self.delta + i

    def alpha(self, i: int, j: int) -> int:
        return 2 * self.delta + i * self.labels + j

    def beta(self, i: int, j: int) -> int:
        return 2 * self.delta + self._cell + i * self.labels + j

    def alpha_hat(self, i: int, j: int, k: int) -> int:
        """k-th interior vertex (1..rho-1) of the a -> alpha path."""
        return 2 * self.delta + 2 * self._cell + (i * self.labels + j) * (self.rho - 1) + k - 1

    def beta_hat(self, i: int, j: int, k: int) -> int:
        """k-th interior vertex (1..rho-1) of the beta -> b path."""
        return self.alpha_hat(i, j, k) + self._hat

    def names(self) -> dict[int, str]:
        out = {}
        for i in range(self.delta):
            out[self.a(i)] = f"a[{i}]"
            out[self.b(i)] = f"b[{i}]"
            for j in range(self.labels):
                out[self.alpha(i, j)] = f"alpha[{i}][{j}]"
                out[self.beta(i, j)] = f"beta[{i}][{j}]"
                for k in range(1, self.rho):
                    out[self.alpha_hat(i, j, k)] = f"alpha_hat[{i}][{j}][{k}]"
                    out[self.beta_hat(i, j, k)] = f"beta_hat[{i}][{j}][{k}]"
        return out


def labelcover_counts(inst: LabelCoverInstance, rho: int) -> tuple[int, int]:
    """Closed-form (vertex, edge) counts of the LabelCover graph."""
    cells = inst.delta * inst.labels
    n = 2 * inst.delta + 2 * cells + 2 * cells * (rho - 1)
    m = sum(len(r) for r in inst.relations.values()) + 4 * cells * rho
    return n, m


def gen_labelcover_graph(inst: LabelCoverInstance, rho: int) -> tuple[DiGraph, dict[int, str]]:
    """LabelCover graph: each a_i fans out over length-rho paths to alpha[i][j],
    each beta[i][j] runs a length-rho path into b_i, middle edges follow the
    relations, and every path vertex points back at its a_i (resp. is pointed
    at by its b_i), making each side strongly connected.
    """
    lay = LabelCoverLayout(inst.delta, inst.labels, rho)
    edges: set[Edge] = set()
    for i in range(inst.delta):
        for j in range(inst.labels):
            a_path = [lay.a(i)] + [lay.alpha_hat(i, j, k) for k in range(1, rho)] + [lay.alpha(i, j)]
            b_path = [lay.beta(i, j)] + [lay.beta_hat(i, j, k) for k in range(1, rho)] + [lay.b(i)]
            edges.update(zip(a_path, a_path[1:]))
            edges.update(zip(b_path, b_path[1:]))
            edges.update((w, lay.a(i)) for w in a_path[1:])
            edges.update((lay.b(i), w) for w in b_path[:-1])
    for (i, i2), rel in inst.relations.items():
        edges.update((lay.alpha(i, j), lay.beta(i2, j2)) for j, j2 in rel)
    g = DiGraph(lay.n, edges)
    n_exp, m_exp = labelcover_counts(inst, rho)
    assert (g.n, g.m) == (n_exp, m_exp), "LabelCover graph counts disagree with the closed form"
    return g, lay.names()


def canonical_shortcut(
    inst: LabelCoverInstance, psi_a: Sequence[int], psi_b: Sequence[int], rho: int
) -> ShortcutSet:
    """2 delta edges a_i -> alpha[i][psi_a(i)] and beta[i][psi_b(i)] -> b_i."""
    if len(psi_a) != inst.delta or len(psi_b) != inst.delta:
        raise ParameterError("labelings must assign a label to every vertex")
    if any(not 0 <= x < inst.labels for x in (*psi_a, *psi_b)):
        raise ParameterError("label out of range")
    lay = LabelCoverLayout(inst.delta, inst.labels, rho)
    g, _ = gen_labelcover_graph(inst, rho)
    edges = [(lay.a(i), lay.alpha(i, psi_a[i])) for i in range(inst.delta)]
    edges += [(lay.beta(i, psi_b[i]), lay.b(i)) for i in range(inst.delta)]
    return ShortcutSet.of(g, edges, covering=inst.covers(psi_a, psi_b))
