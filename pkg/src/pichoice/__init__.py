"""Path-independent choice correspondences and constrained-efficient matching."""
from .axioms import (
    HOLDS,
    HOLDS_ON_TESTED,
    VIOLATED,
    Verdict,
    check_acceptant_corr,
    check_bridging,
    check_closure,
    check_gmatroid,
    check_irc_corr,
    check_lad_corr,
    check_lad_fn,
    check_mnat,
    check_ordinal_concavity,
    check_pi_corr,
    check_pi_fn,
    check_sc1,
    check_sc2,
    check_size_restricted,
    check_sub_fn,
    extendable_element,
    replay,
    tau,
)
from .choice import (
    ChoiceCorrespondence,
    ChoiceFunction,
    ExplicitTable,
    FeasibleFamily,
    UnionOfFunctions,
    UtilityBacked,
    UtilityFunction,
    from_names,
    materialize,
)
from .core import NEG_INF, GroundSet, UMWeight, canonical_weight, is_um, positive_weight, random_um_weight
from .errors import *  # noqa: F401,F403
from .instances import paper_instance, instance_matching
from .matching import (
    Market,
    Matching,
    apply_psic,
    build_exchange_graph,
    constrained_efficient,
    deferred_acceptance,
    find_psic,
    improve_to_maximal,
    is_maximal,
    is_psic,
    is_stable,
    oracle_constrained_efficient,
    pareto_dominates,
    stable_matchings,
)
from .rationalize import CycleWitness, RevealedOrder, rationalize_pi, sarp_check, utility_from_order
from .tiebreak import algorithm1_choice, choose_pi_lad, choose_tiebroken, tiebroken_function

__version__ = "0.1.0"
