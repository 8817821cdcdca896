"""Finite matrix semantics for the fragments of intuitionistic propositional logic."""

__version__ = "0.1.0"

from .errors import (EvaluationError, FinsemError, FormulaSyntaxError, FragmentError,
                     InvariantError, MatrixError, PreconditionError, ResourceLimitError,
                     UnsupportedFragmentError)
from .formula import (AND, IMPLIES, NOT, OR, And, Connective, Formula, Imp, Not, Or, Var,
                      dotvee, fragment_of, gen_alpha, gen_alpha_arrow, gen_alpha_orneg,
                      letters_of, parse, parse_fragment, substitute, to_cnf, to_text)
from .sequent import Sequent, Verdict, parse_sequent
from .matrix import (Matrix, consequence, congruences, evaluate, is_subalgebra, is_valid,
                     make_chain, make_three, make_two, validate_matrix)
from .deciders import (classical_consequence, decide, decide_conj_disj_syntactic,
                       decide_conj_syntactic)
from .oracle import check_disjunction_property, prove_ipc
from .refuter import chain_countermodel_report, refute_matrix
from .search import enumerate_matrices, search, standard_corpus, test_candidate

__all__ = [
    "EvaluationError", "FinsemError", "FormulaSyntaxError", "FragmentError",
    "InvariantError", "MatrixError", "PreconditionError", "ResourceLimitError",
    "UnsupportedFragmentError", "AND", "IMPLIES", "NOT", "OR", "And", "Connective",
    "Formula", "Imp", "Not", "Or", "Var", "dotvee", "fragment_of", "gen_alpha",
    "gen_alpha_arrow", "gen_alpha_orneg", "letters_of", "parse", "parse_fragment",
    "substitute", "to_cnf", "to_text", "Sequent", "Verdict", "parse_sequent", "Matrix",
    "consequence", "congruences", "evaluate", "is_subalgebra", "is_valid", "make_chain",
    "make_three", "make_two", "validate_matrix", "classical_consequence", "decide",
    "decide_conj_disj_syntactic", "decide_conj_syntactic", "check_disjunction_property",
    "prove_ipc", "chain_countermodel_report", "refute_matrix", "enumerate_matrices",
    "search", "standard_corpus", "test_candidate",
]
