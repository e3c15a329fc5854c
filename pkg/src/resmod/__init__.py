"""Resolution workbench: plain, set-of-support, ordered and polarized resolution.

Also translates one-way clauses into polarized rewrite rules and checks and
searches proofs in the polarized sequent calculus modulo those rules.
"""

__version__ = "0.1.0"

from .logic import Atom, Clause, Fn, Literal, Substitution, Var, apply_substitution, is_variant, rename_apart, unify
from .orders import Cmp, Precedence, SelectAllNegative, SelectNone, ExplicitSelection, compare_atoms
from .rewrite import PolarizedRule, Sign, check_disjoint_criterion, clause_to_rule, rewrites_to
from .saturation import PRM, OrderedSelection, Plain, SetOfSupport, Status, enumerate_refutations, saturate
from .sequent import ProofTree, Sequent, check_proof, cutfree_search, has_cut
from .syntax import Problem, parse_problem

__all__ = [
    "Atom", "Clause", "Fn", "Literal", "Substitution", "Var", "apply_substitution", "is_variant",
    "rename_apart", "unify", "Cmp", "Precedence", "SelectAllNegative", "SelectNone", "ExplicitSelection",
    "compare_atoms", "PolarizedRule", "Sign", "check_disjoint_criterion", "clause_to_rule", "rewrites_to",
    "PRM", "OrderedSelection", "Plain", "SetOfSupport", "Status", "enumerate_refutations", "saturate",
    "ProofTree", "Sequent", "check_proof", "cutfree_search", "has_cut", "Problem", "parse_problem",
]
