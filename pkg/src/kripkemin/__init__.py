"""Bisimulation minimization of Kripke structures.

Finite structures are minimized by partition refinement; infinite ones
given by a simple graph grammar are folded to a finite structure first.
"""

from .bisim import (
    BisimError,
    BisimRelation,
    are_equivalent,
    bisimilar_states,
    is_bisimulation,
    is_coalgebra_bisimulation,
    k_approximant,
    largest_bisimulation,
)
from .ctl import CtlError, models, parse_formula, sat_set
from .grammar import (
    Fragment,
    GrammarError,
    GraphGrammar,
    fold,
    parse_grammar,
    serialize_grammar,
    unfold,
    validate_grammar,
)
from .kripke import (
    CoalgebraView,
    KripkeError,
    KripkeStructure,
    export_dot,
    from_coalgebra_view,
    parse_kripke,
    restrict_reachable,
    serialize_kripke,
    to_coalgebra_view,
)
from .partition import (
    MinimizeError,
    Partition,
    are_isomorphic,
    initial_partition,
    is_connected,
    is_reduced,
    minimize,
    minimize_detailed,
    quotient,
    refine_to_fixpoint,
)
from .unwind import UnwindTree, canonicalize, h_approx_equal, unwind_tree

__version__ = "0.1.0"
