"""Approximate shortcut sets and transitive-closure spanners for directed graphs."""

from .decompose import Decomposition, chain_antichain_decompose, path_two_shortcut
from .errors import (
    BadBudget,
    BadK,
    BadRho,
    BudgetExceeded,
    Infeasible,
    IterationCapExceeded,
    NotAChain,
    NotADag,
    NotReachable,
    ParameterError,
    PreconditionViolated,
    PromiseViolated,
    RetryExhausted,
    ShortcutForgeError,
)
from .generators import (
    LabelCoverInstance,
    canonical_shortcut,
    gen_labelcover_graph,
    gen_labelcover_instance,
    gen_layered,
    gen_path,
    gen_planted_cycles,
    gen_random_dag,
)
from .graph import (
    DiGraph,
    PairSet,
    ShortcutSet,
    VerifyReport,
    bounded_dist,
    build_graph,
    graph_diameter,
    scc_condense,
    transitive_closure,
    transitive_reduction,
    verify_shortcut,
    verify_tc_spanner,
)
from .oracle import OracleBudget, exists_shortcut, min_shortcut_exact, min_tc_spanner_exact
from .pipeline import SolveParams, approx_shortcut, approx_shortcut_dag, approx_tc_spanner, shortcut_from_tcspanner
from .thick import ThickConfig, classify_pairs, local_graph_size, settle_thick, universal_shortcut
from .thin import (
    ConstraintPool,
    CriticalSet,
    FractionalSolution,
    cut_or_round,
    decompose_critical,
    is_critical,
    lp_feasible,
    minimal_critical_set,
    settle_thin,
)

__version__ = "0.1.0"
