"""Finite simple semigroups as equational domains.

Build Rees matrix semigroups over finite groups, decide whether they are
equational domains, and synthesise equation systems whose solution set is any
prescribed finite point set, checking everything against brute force.
"""

from .decision import (
    EdCertificate,
    center_refutation,
    decide_ed,
    decide_ed_rees,
    decide_ed_star,
    homogroup_refutation,
    ideal_refutation,
    recheck,
    size_bound_check,
)
from .equations import (
    Equation,
    EquationSystem,
    enumerate_terms,
    gamma_reduce,
    is_gamma_valued,
    solve,
)
from .groups import (
    FiniteGroup,
    ZeroDivisorWitness,
    group_from_permutations,
    is_group_ed,
    validate_group,
    zero_divisors,
)
from .io import load_group, load_points, load_structure, load_system
from .points import FullSpace, MsemSpace, PointSet
from .semigroups import (
    ONE,
    FiniteSemigroup,
    ReesElement,
    ReesSemigroup,
    SandwichMatrix,
    StarSemigroup,
    adjoin_identity,
    center,
    is_group_case,
    is_homogroup,
    is_nonsingular,
    kernel,
    rees_mul,
    rees_to_table,
)
from .synthesis import (
    KillerTerm,
    combine_killers,
    conjugate_killer,
    killer_pair,
    msem_system,
    point_killer,
    separate_simple,
    separate_star,
    synthesize_system,
    term_inverse,
    verify_singular_obstruction,
)
from .terms import Concat, Const, Power, Term, Var, eval_term, parse_term, render_term

__version__ = "0.1.0"
