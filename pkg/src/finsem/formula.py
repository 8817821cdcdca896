"""Propositional formulas over letters p1, p2, ... and the connectives
&, |, -> and ~.

There are no constants: every leaf is a letter. Formulas are immutable
and hashable, so they can be used as dictionary keys and set members.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator

from .errors import FormulaSyntaxError, FragmentError, ResourceLimitError


class Connective(str, enum.Enum):
    AND = "and"
    OR = "or"
    IMPLIES = "implies"
    NOT = "not"

    @property
    def arity(self) -> int:
        return 1 if self is Connective.NOT else 2


AND, OR, IMPLIES, NOT = Connective.AND, Connective.OR, Connective.IMPLIES, Connective.NOT
CONNECTIVES = (AND, OR, IMPLIES, NOT)

Fragment = frozenset  # frozenset[Connective]

_FRAGMENT_ALIASES = {
    "and": AND, "&": AND, "∧": AND,
    "or": OR, "|": OR, "∨": OR,
    "implies": IMPLIES, "imp": IMPLIES, "->": IMPLIES, "→": IMPLIES,
    "not": NOT, "~": NOT, "¬": NOT,
}


def parse_fragment(text: str) -> frozenset:
    """``"and,not"`` -> {AND, NOT}; the literal ``"empty"`` is the empty fragment."""
    text = text.strip()
    if text in ("empty", "", "{}"):
        return frozenset()
    out = set()
    for part in text.strip("{}").split(","):
        key = part.strip().lower()
        if key not in _FRAGMENT_ALIASES:
            raise FragmentError(f"unknown connective {part.strip()!r}")
        out.add(_FRAGMENT_ALIASES[key])
    return frozenset(out)


def fragment_name(fragment: Iterable[Connective]) -> str:
    fragment = frozenset(fragment)
    if not fragment:
        return "empty"
    return ",".join(c.value for c in CONNECTIVES if c in fragment)


def all_fragments() -> list[frozenset]:
    """The sixteen subsets of the four connectives, smallest first."""
    out = []
    for mask in range(16):
        out.append(frozenset(c for k, c in enumerate(CONNECTIVES) if mask >> k & 1))
    out.sort(key=lambda f: (len(f), [CONNECTIVES.index(c) for c in CONNECTIVES if c in f]))
    return out


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Var(Formula):
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"letter index must be a positive integer, got {self.index!r}")

    def __repr__(self):
        return f"p{self.index}"


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Imp(Formula):
    left: Formula
    right: Formula


BINARY = {And: AND, Or: OR, Imp: IMPLIES}
NODE_OF = {AND: And, OR: Or, IMPLIES: Imp}


def p(i: int) -> Var:
    return Var(i)


def connective_of(f: Formula) -> Connective | None:
    if isinstance(f, Not):
        return NOT
    return BINARY.get(type(f))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<letter>p[0-9]+)|(?P<imp>->|→)|(?P<sym>[~¬&∧|∨()]))"
)
_CANON = {"¬": "~", "∧": "&", "∨": "|", "→": "->"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError("unexpected character", text, pos)
        start = m.start(m.lastgroup)
        if m.lastgroup == "letter":
            digits = m.group("letter")[1:]
            if digits == "0":
                raise FormulaSyntaxError("letter index 0 is not allowed", text, start)
            if digits.startswith("0"):
                raise FormulaSyntaxError("letter index has a leading zero", text, start)
            tokens.append(("letter", digits, start))
        else:
            tok = m.group(m.lastgroup)
            tokens.append(("op", _CANON.get(tok, tok), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            want = value or "end of input"
            raise FormulaSyntaxError(f"expected {want!r}", self.text, tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Imp(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[1] == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.negation()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.negation())
        return f

    def negation(self) -> Formula:
        if self.peek()[1] == "~":
            self.take()
            return Not(self.negation())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "letter":
            self.take()
            return Var(int(value))
        if value == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        what = "end of input" if kind == "end" else repr(value)
        raise FormulaSyntaxError(f"expected a letter or '(' but found {what}", self.text, pos)


def parse(text: str) -> Formula:
    """Parse ASCII (or Unicode-alias) formula text.

    Precedence from tightest: ``~``, ``&``, ``|``, ``->``. Conjunction and
    disjunction associate to the left, implication to the right.
    """
    parser = _Parser(text)
    f = parser.formula()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {value!r}", text, pos)
    return f


# ---------------------------------------------------------------------------
# printing

_PREC = {Imp: 1, Or: 2, And: 3, Not: 4, Var: 5}
_SYM = {And: "&", Or: "|", Imp: "->"}


def to_text(f: Formula, full: bool = False) -> str:
    """Render ``f`` in the input grammar.

    The default uses the fewest parentheses that round-trip through
    :func:`parse`. With ``full=True`` every binary subformula is wrapped,
    including the outermost one.
    """
    if full:
        return _full(f)
    return _min(f)


def _min(f: Formula) -> str:
    if isinstance(f, Var):
        return f"p{f.index}"
    if isinstance(f, Not):
        inner = _min(f.arg)
        return "~" + (inner if _PREC[type(f.arg)] >= 4 else f"({inner})")
    prec = _PREC[type(f)]
    left, right = _min(f.left), _min(f.right)
    if isinstance(f, Imp):
        # right-associative
        lpar = _PREC[type(f.left)] <= prec
        rpar = _PREC[type(f.right)] < prec
    else:
        lpar = _PREC[type(f.left)] < prec
        rpar = _PREC[type(f.right)] <= prec
    if lpar:
        left = f"({left})"
    if rpar:
        right = f"({right})"
    return f"{left} {_SYM[type(f)]} {right}"


def _full(f: Formula) -> str:
    if isinstance(f, Var):
        return f"p{f.index}"
    if isinstance(f, Not):
        return "~" + _full(f.arg)
    return f"({_full(f.left)} {_SYM[type(f)]} {_full(f.right)})"


# ---------------------------------------------------------------------------
# structural operations

def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Not):
            stack.append(g.arg)
        elif not isinstance(g, Var):
            stack.append(g.right)
            stack.append(g.left)


def letters_of(f: Formula) -> tuple[Var, ...]:
    found = {g.index for g in subformulas(f) if isinstance(g, Var)}
    return tuple(Var(i) for i in sorted(found))


def fragment_of(f: Formula) -> frozenset:
    return frozenset(c for c in map(connective_of, subformulas(f)) if c is not None)


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def depth(f: Formula) -> int:
    if isinstance(f, Var):
        return 0
    if isinstance(f, Not):
        return 1 + depth(f.arg)
    return 1 + max(depth(f.left), depth(f.right))


def substitute(f: Formula, target: Var, replacement: Var) -> Formula:
    """Replace every occurrence of the letter ``target`` by ``replacement``."""
    if isinstance(f, Var):
        return replacement if f == target else f
    if isinstance(f, Not):
        return Not(substitute(f.arg, target, replacement))
    return type(f)(substitute(f.left, target, replacement),
                   substitute(f.right, target, replacement))


def dotvee(a: Formula, b: Formula) -> Formula:
    """``(a -> b) -> b``, an implication-only stand-in for disjunction."""
    return Imp(Imp(a, b), b)


def alpha_pairs(n: int) -> list[tuple[int, int]]:
    """Index pairs (i, j), 1 <= i < j <= n+1, in fold order.

    Ascending lexicographic: for n = 2 it is (1,2), (1,3), (2,3). The order
    matters for the arrow family. On a chain with p_i -> i the disjunct
    values then never decrease along the fold, so the fold evaluates to n.
    Any descent sends a dot-vee step to the top element.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return [(i, j) for i in range(1, n + 2) for j in range(i + 1, n + 2)]


def gen_alpha_arrow(n: int) -> Formula:
    """Left-associated dot-vee fold of ``p_j -> p_i`` over all pairs i < j <= n+1."""
    disjuncts = [Imp(Var(j), Var(i)) for i, j in alpha_pairs(n)]
    return reduce(dotvee, disjuncts)


def gen_alpha_orneg(n: int) -> Formula:
    """Left-associated disjunction of ``~~(~p_i | p_j)`` over all pairs i < j <= n+1."""
    disjuncts = [Not(Not(Or(Not(Var(i)), Var(j)))) for i, j in alpha_pairs(n)]
    return reduce(Or, disjuncts)


def gen_alpha(variant: str, n: int) -> Formula:
    if variant == "arrow":
        return gen_alpha_arrow(n)
    if variant == "orneg":
        return gen_alpha_orneg(n)
    raise ValueError(f"unknown variant {variant!r} (expected 'arrow' or 'orneg')")


# ---------------------------------------------------------------------------
# conjunctive normal form for the {and, or} fragment

ClauseSet = frozenset  # frozenset[frozenset[int]], letter indices

DEFAULT_CNF_LIMIT = 4096


def to_cnf(f: Formula, limit: int = DEFAULT_CNF_LIMIT) -> frozenset:
    """Fully distributed clause set of an {and, or}-formula.

    Each clause is a frozenset of letter indices. Duplicate clauses and
    repeated letters collapse; no absorption is performed.
    """
    bad = fragment_of(f) - {AND, OR}
    if bad:
        raise FragmentError(f"to_cnf needs an {{and,or}}-formula; found {fragment_name(bad)}")
    return _cnf(f, limit)


def _cnf(f: Formula, limit: int) -> frozenset:
    if isinstance(f, Var):
        return frozenset([frozenset([f.index])])
    left, right = _cnf(f.left, limit), _cnf(f.right, limit)
    if isinstance(f, And):
        out = left | right
    else:
        if len(left) * len(right) > limit:
            raise ResourceLimitError(
                f"CNF distribution would exceed {limit} clauses", limit)
        out = frozenset(a | b for a in left for b in right)
    if len(out) > limit:
        raise ResourceLimitError(f"CNF exceeds {limit} clauses", limit)
    return out


def clauses_to_formula(clauses: frozenset) -> Formula:
    """Conjunction-of-disjunctions reading of a clause set (sorted, left-folded)."""
    ordered = sorted(sorted(c) for c in clauses)
    parts = [reduce(Or, [Var(i) for i in c]) for c in ordered]
    return reduce(And, parts)
