"""Decision procedures for the fragments without implication that have a
finite characteristic matrix.

Sub-fragments of {and, or} are decided by the two-element matrix and
sub-fragments of {and, not} by the three-element chain 0 < h < 1. Two
syntactic procedures cross-check the matrix route. Implication, or both
disjunction and negation, put a sequent outside every finite matrix, and
:func:`decide` refuses it.
"""
from __future__ import annotations

from .errors import FragmentError, UnsupportedFragmentError
from .formula import AND, IMPLIES, NOT, OR, fragment_name, letters_of, to_cnf
from .matrix import consequence, make_three, make_two
from .sequent import Sequent, Verdict

CONJ_DISJ = frozenset({AND, OR})
CONJ_NEG = frozenset({AND, NOT})

_TWO = make_two(CONJ_DISJ)
_THREE = make_three(CONJ_NEG)
_CLASSICAL = make_two()


def unsupported_part(fragment: frozenset) -> frozenset:
    """Smallest connective set that rules out a finite matrix, or empty."""
    if IMPLIES in fragment:
        return frozenset({IMPLIES})
    if {OR, NOT} <= fragment:
        return frozenset({OR, NOT})
    return frozenset()


def decide(s: Sequent) -> Verdict:
    frag = s.fragment
    bad = unsupported_part(frag)
    if bad:
        raise UnsupportedFragmentError(bad)
    if frag <= CONJ_DISJ:
        return consequence(_TWO, s.premises, s.conclusion, "matrix-2")
    return consequence(_THREE, s.premises, s.conclusion, "matrix-3")


def _letters(s: Sequent) -> list[int]:
    return [v.index for v in s.letters]


def decide_conj_syntactic(s: Sequent) -> Verdict:
    """{and}-sequents: derivable iff each conclusion letter occurs in a premise.

    A negative verdict carries the two-valued countermodel that sends the
    missing letter to 0 and every other letter to 1.
    """
    if not s.fragment <= {AND}:
        raise FragmentError(f"expected an {{and}}-sequent, got [{fragment_name(s.fragment)}]")
    available = {v.index for f in s.premises for v in letters_of(f)}
    for v in letters_of(s.conclusion):
        if v.index not in available:
            witness = {i: int(i != v.index) for i in _letters(s)}
            return Verdict(False, "syntactic-and", witness, _TWO)
    return Verdict(True, "syntactic-and")


def decide_conj_disj_syntactic(s: Sequent, cnf_limit: int | None = None) -> Verdict:
    """{and, or}-sequents by clause subsumption after CNF conversion.

    Premise conjunctions are flattened into one clause set. The sequent is
    derivable iff every conclusion clause contains some premise clause.
    """
    if not s.fragment <= CONJ_DISJ:
        raise FragmentError(f"expected an {{and,or}}-sequent, got [{fragment_name(s.fragment)}]")
    kw = {} if cnf_limit is None else {"limit": cnf_limit}
    delta = set()
    for f in s.premises:
        delta |= to_cnf(f, **kw)
    for clause in sorted(to_cnf(s.conclusion, **kw), key=sorted):
        if not any(d <= clause for d in delta):
            witness = {i: int(i not in clause) for i in _letters(s)}
            return Verdict(False, "syntactic-cnf", witness, _TWO)
    return Verdict(True, "syntactic-cnf")


def decide_syntactic(s: Sequent) -> Verdict:
    if s.fragment <= {AND}:
        return decide_conj_syntactic(s)
    return decide_conj_disj_syntactic(s)


def classical_consequence(s: Sequent) -> Verdict:
    """Two-valued truth-table consequence over all four connectives."""
    return consequence(_CLASSICAL, s.premises, s.conclusion, "classical")
