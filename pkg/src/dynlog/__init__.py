"""Dynamic logic of finite automata.

Compute the labelled upper and lower transition functors of an automaton over
a finite lattice of truth values, recover the transition relation from them,
and synthesize an automaton from a partially known functor.
"""
from .automaton import Automaton, TransitionFrame, fibre, is_deterministic, predecessors, successors, to_dot
from .dynamics import (
    LOWER,
    UPPER,
    TransitionFunctor,
    check_adjunction,
    check_inclusion_conditions,
    check_recovery_witnesses,
    induced_lower_relation,
    induced_state_transition_relation,
    induced_upper_relation,
    labelled_functors,
    lower_functor_from_frame,
    recover,
    upper_functor_from_frame,
)
from .errors import DynlogError
from .order import (
    BOOL2,
    BoundedMorphismFamily,
    Poset,
    TruthLattice,
    as_complete_lattice,
    build_poset,
    chain,
    check_full_set,
    diamond,
    join_subset,
    meet_subset,
)
from .propositions import (
    Proposition,
    PropositionAlgebra,
    StateSet,
    Subposet,
    all_crisp_algebra,
    contains_all_crisp,
    embed_pointwise,
    meet_closed_subposet,
    pointwise_leq,
    subposet,
)
from .synthesis import (
    DOWNSET,
    ULTRAFILTER,
    CanonicalStateSpace,
    check_join_preserving,
    check_meet_preserving,
    downset_state_space,
    synthesize,
    synthesize_dual,
    ultrafilter_state_space,
)

__version__ = "0.1.0"
