"""Finite logical matrices: an operation table per connective plus a set of
designated elements.

Elements are always the indices ``0..m-1``; ``names`` only affects how
they are printed and read from files. A valuation is a plain mapping from
letter index to element index.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import EvaluationError, MatrixError, ResourceLimitError
from .formula import (AND, CONNECTIVES, IMPLIES, NOT, OR, And, Formula, Not,
                      Or, Var, fragment_name, letters_of)
from .sequent import Verdict

Valuation = Mapping[int, int]


@dataclass(frozen=True, eq=False)
class Matrix:
    size: int
    names: tuple[str, ...]
    designated: frozenset
    tables: Mapping  # Connective -> tuple (unary) or tuple of tuples (binary)
    label: str = ""

    @property
    def fragment(self) -> frozenset:
        return frozenset(self.tables)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise MatrixError(f"unknown element name {name!r}") from None

    def op(self, connective, *args: int) -> int:
        table = self.tables[connective]
        return table[args[0]] if len(args) == 1 else table[args[0]][args[1]]

    def encode(self) -> tuple:
        """Flat integer encoding (designated indicator, then tables in fixed order)."""
        out = [int(a in self.designated) for a in range(self.size)]
        for c in CONNECTIVES:
            if c in self.tables:
                t = self.tables[c]
                out.extend(t if c is NOT else itertools.chain.from_iterable(t))
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.size == other.size and self.fragment == other.fragment
                and self.encode() == other.encode())

    def __hash__(self):
        return hash((self.size, self.fragment, self.encode()))

    def __repr__(self):
        label = self.label or f"{self.size}-element matrix"
        return f"<Matrix {label} [{fragment_name(self.fragment)}]>"


def build_matrix(size, tables, designated, names=None, label="") -> Matrix:
    """Normalise nested sequences into tuples; no validation."""
    names = tuple(names) if names is not None else tuple(str(a) for a in range(size))
    norm = {}
    for c, t in tables.items():
        norm[c] = tuple(t) if c is NOT else tuple(tuple(row) for row in t)
    return Matrix(size, names, frozenset(designated), norm, label)


def validate_matrix(M: Matrix) -> None:
    """Raise :class:`MatrixError` on the first violated invariant.

    An empty or full designated set is legal but degenerate and only warns.
    """
    m = M.size
    if not isinstance(m, int) or m < 1:
        raise MatrixError(f"size must be a positive integer, got {m!r}")
    if len(M.names) != m:
        raise MatrixError(f"expected {m} element names, got {len(M.names)}")
    if len(set(M.names)) != m:
        raise MatrixError("element names must be distinct")
    for c in CONNECTIVES:
        if c not in M.tables:
            continue
        t = M.tables[c]
        if c is NOT:
            if len(t) != m:
                raise MatrixError(f"'not' table needs {m} entries, got {len(t)}")
            cells = t
        else:
            if len(t) != m or any(len(row) != m for row in t):
                got = sum(len(row) for row in t)
                raise MatrixError(f"'{c.value}' table needs {m}x{m} entries, got {got}")
            cells = itertools.chain.from_iterable(t)
        for x in cells:
            if not isinstance(x, int) or not 0 <= x < m:
                raise MatrixError(f"'{c.value}' table entry {x!r} out of range 0..{m - 1}")
    for c in M.tables:
        if c not in CONNECTIVES:
            raise MatrixError(f"unknown connective {c!r}")
    for d in M.designated:
        if not isinstance(d, int) or not 0 <= d < m:
            raise MatrixError(f"designated element {d!r} out of range 0..{m - 1}")
    if not M.designated:
        warnings.warn("designated set is empty: no formula is valid", stacklevel=2)
    elif len(M.designated) == m:
        warnings.warn("every element is designated: every formula is valid", stacklevel=2)


# ---------------------------------------------------------------------------
# standard matrices

_ALL = frozenset(CONNECTIVES)


def make_two(fragment: Iterable = _ALL) -> Matrix:
    """Two-element Boolean matrix, 0 < 1, designated {1}."""
    fragment = frozenset(fragment)
    r = range(2)
    make = {
        AND: lambda: [[min(a, b) for b in r] for a in r],
        OR: lambda: [[max(a, b) for b in r] for a in r],
        IMPLIES: lambda: [[max(1 - a, b) for b in r] for a in r],
        NOT: lambda: [1 - a for a in r],
    }
    return build_matrix(2, {c: make[c]() for c in fragment}, {1}, ("0", "1"), "2")


def make_three(fragment: Iterable = (AND, NOT)) -> Matrix:
    """Three-element chain 0 < h < 1 with meet and Heyting negation, designated {1}."""
    fragment = frozenset(fragment)
    if not fragment:
        raise MatrixError("the three-element matrix needs a non-empty fragment")
    if fragment - {AND, NOT}:
        bad = fragment_name(fragment - {AND, NOT})
        raise MatrixError(f"the three-element matrix is defined for {{and,not}} only, not {bad}")
    tables = {}
    if AND in fragment:
        tables[AND] = [[min(a, b) for b in range(3)] for a in range(3)]
    if NOT in fragment:
        tables[NOT] = [2, 0, 0]
    return build_matrix(3, tables, {2}, ("0", "h", "1"), "3")


def make_chain(m: int, fragment: Iterable = (IMPLIES,)) -> Matrix:
    """Heyting chain 1 < 2 < ... < m, designated {m}.

    Element index ``a`` carries the name ``str(a + 1)``. Implication gives
    the top when a <= b and b otherwise; negation is implication into 1.
    """
    if not isinstance(m, int) or m < 1:
        raise MatrixError(f"chain length must be a positive integer, got {m!r}")
    fragment = frozenset(fragment)
    r = range(m)
    top = m - 1
    imp = [[top if a <= b else b for b in r] for a in r]
    make = {
        AND: lambda: [[min(a, b) for b in r] for a in r],
        OR: lambda: [[max(a, b) for b in r] for a in r],
        IMPLIES: lambda: imp,
        NOT: lambda: [imp[a][0] for a in r],
    }
    names = tuple(str(a + 1) for a in r)
    return build_matrix(m, {c: make[c]() for c in fragment}, {top}, names, f"chain-{m}")


# ---------------------------------------------------------------------------
# evaluation and consequence

def evaluate(M: Matrix, v: Valuation, f: Formula) -> int:
    """Value of ``f`` under ``v`` (letter index -> element index)."""
    if isinstance(f, Var):
        try:
            return v[f.index]
        except KeyError:
            raise EvaluationError(f"letter p{f.index} has no assigned value") from None
    tables = M.tables
    if isinstance(f, Not):
        if NOT not in tables:
            raise EvaluationError(f"{M!r} has no table for 'not'")
        return tables[NOT][evaluate(M, v, f.arg)]
    c = AND if isinstance(f, And) else OR if isinstance(f, Or) else IMPLIES
    if c not in tables:
        raise EvaluationError(f"{M!r} has no table for '{c.value}'")
    return tables[c][evaluate(M, v, f.left)][evaluate(M, v, f.right)]


def valuations(M: Matrix, letters: Sequence[int]):
    """Every assignment of ``letters``, lexicographic with the first letter slowest."""
    for values in itertools.product(range(M.size), repeat=len(letters)):
        yield dict(zip(letters, values))


def consequence(M: Matrix, premises: Sequence[Formula], f: Formula,
                method: str | None = None) -> Verdict:
    """Does every valuation designating all premises designate ``f``?

    Only letters occurring in the premises or ``f`` are enumerated. A
    failing verdict carries the first counter-valuation in
    :func:`valuations` order.
    """
    letters = set()
    for g in (*premises, f):
        letters.update(x.index for x in letters_of(g))
    letters = sorted(letters)
    D = M.designated
    method = method or f"matrix-{M.label or M.size}"
    for v in valuations(M, letters):
        if all(evaluate(M, v, g) in D for g in premises) and evaluate(M, v, f) not in D:
            return Verdict(False, method, v, M)
    return Verdict(True, method, None, M)


def is_valid(M: Matrix, f: Formula, method: str | None = None) -> Verdict:
    return consequence(M, (), f, method)


# ---------------------------------------------------------------------------
# subalgebras and congruences

def is_subalgebra(M: Matrix, subset: Iterable[int]) -> bool:
    """True iff ``subset`` is closed under every table of ``M``."""
    S = frozenset(subset)
    if not S:
        raise MatrixError("a subalgebra universe must be non-empty")
    if any(not 0 <= a < M.size for a in S):
        raise MatrixError("subset element out of range")
    for c, t in M.tables.items():
        if c is NOT:
            if any(t[a] not in S for a in S):
                return False
        elif any(t[a][b] not in S for a in S for b in S):
            return False
    return True


@dataclass(frozen=True)
class CongruenceRelation:
    blocks: tuple[tuple[int, ...], ...]

    def block_of(self) -> dict[int, int]:
        return {a: k for k, block in enumerate(self.blocks) for a in block}

    def related(self, a: int, b: int) -> bool:
        lookup = self.block_of()
        return lookup[a] == lookup[b]

    @property
    def is_trivial(self) -> bool:
        return len(self.blocks) in (1, sum(len(b) for b in self.blocks))

    def render(self, names: Sequence[str]) -> str:
        return " ".join("{" + ",".join(names[a] for a in b) + "}" for b in self.blocks)


MAX_CONGRUENCE_SIZE = 8


def set_partitions(m: int):
    """All partitions of ``range(m)`` as restricted growth strings."""
    def grow(prefix, top):
        if len(prefix) == m:
            yield tuple(prefix)
            return
        for k in range(top + 2):
            prefix.append(k)
            yield from grow(prefix, max(top, k))
            prefix.pop()
    if m == 0:
        yield ()
        return
    yield from grow([0], 0)


def is_congruence(M: Matrix, labels: Sequence[int]) -> bool:
    """``labels[a]`` is the block id of element ``a``."""
    m = M.size
    for c, t in M.tables.items():
        if c is NOT:
            for a in range(m):
                for b in range(a + 1, m):
                    if labels[a] == labels[b] and labels[t[a]] != labels[t[b]]:
                        return False
        else:
            pairs = [(a, b) for a in range(m) for b in range(m) if labels[a] == labels[b]]
            for a1, b1 in pairs:
                for a2, b2 in pairs:
                    if labels[t[a1][a2]] != labels[t[b1][b2]]:
                        return False
    return True


def congruences(M: Matrix, max_size: int = MAX_CONGRUENCE_SIZE) -> list[CongruenceRelation]:
    """Every equivalence relation on the universe compatible with all tables."""
    if M.size > max_size:
        raise ResourceLimitError(
            f"congruence enumeration is limited to {max_size} elements (got {M.size})", max_size)
    out = []
    for labels in set_partitions(M.size):
        if is_congruence(M, labels):
            blocks = {}
            for a, k in enumerate(labels):
                blocks.setdefault(k, []).append(a)
            out.append(CongruenceRelation(tuple(tuple(b) for b in blocks.values())))
    return out


def partition_from_blocks(blocks: Iterable[Iterable[int]]) -> CongruenceRelation:
    ordered = sorted(tuple(sorted(b)) for b in blocks)
    return CongruenceRelation(tuple(ordered))


# ---------------------------------------------------------------------------
# file format

_OP_NAMES = {"not": NOT, "and": AND, "or": OR, "imp": IMPLIES, "implies": IMPLIES}
_OP_TOKENS = {NOT: "not", AND: "and", OR: "or", IMPLIES: "imp"}


def parse_matrix(text: str) -> Matrix:
    """Read the line-oriented matrix format (see README)."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line.split()))
    size = names = designated = None
    tables = {}
    k = 0

    def fail(lineno, msg):
        raise MatrixError(f"line {lineno}: {msg}")

    def elem(lineno, name):
        if names is None:
            fail(lineno, "'elements' must come before any table")
        if name not in names:
            fail(lineno, f"unknown element name {name!r}")
        return names.index(name)

    while k < len(lines):
        lineno, toks = lines[k]
        k += 1
        key = toks[0]
        if key == "size":
            if len(toks) != 2 or not toks[1].isdigit() or int(toks[1]) < 1:
                fail(lineno, "expected 'size <positive integer>'")
            size = int(toks[1])
        elif key == "elements":
            if size is None:
                fail(lineno, "'size' must come first")
            names = tuple(toks[1:])
            if len(names) != size or len(set(names)) != size:
                fail(lineno, f"expected {size} distinct element names")
        elif key == "designated":
            designated = [elem(lineno, t) for t in toks[1:]]
        elif key == "op":
            if len(toks) != 3 or toks[1] not in _OP_NAMES:
                fail(lineno, "expected 'op <not|and|or|imp> <arity>'")
            c = _OP_NAMES[toks[1]]
            if toks[2] != str(c.arity):
                fail(lineno, f"'{toks[1]}' has arity {c.arity}")
            if c in tables:
                fail(lineno, f"duplicate table for '{toks[1]}'")
            if names is None:
                fail(lineno, "'elements' must come before any table")
            cells = {}
            for _ in range(size ** c.arity):
                if k >= len(lines):
                    fail(lineno, f"table '{toks[1]}' is incomplete")
                ln, row = lines[k]
                k += 1
                if len(row) != c.arity + 2 or row[c.arity] != "->":
                    fail(ln, f"expected {c.arity} argument(s), '->' and a result")
                args = tuple(elem(ln, t) for t in row[:c.arity])
                if args in cells:
                    fail(ln, "duplicate table cell")
                cells[args] = elem(ln, row[-1])
            if c is NOT:
                tables[c] = [cells[(a,)] for a in range(size)]
            else:
                tables[c] = [[cells[(a, b)] for b in range(size)] for a in range(size)]
        else:
            fail(lineno, f"unknown directive {key!r}")
    if size is None or names is None:
        raise MatrixError("matrix file needs 'size' and 'elements'")
    if designated is None:
        raise MatrixError("matrix file needs a 'designated' line (it may be empty)")
    M = build_matrix(size, tables, designated, names)
    validate_matrix(M)
    return M


def load_matrix(path) -> Matrix:
    M = parse_matrix(Path(path).read_text())
    return Matrix(M.size, M.names, M.designated, M.tables, Path(path).stem)


def format_matrix(M: Matrix) -> str:
    n = M.names
    out = [f"size {M.size}", "elements " + " ".join(n),
           "designated " + " ".join(n[a] for a in sorted(M.designated))]
    for c in CONNECTIVES:
        if c not in M.tables:
            continue
        t = M.tables[c]
        out.append(f"op {_OP_TOKENS[c]} {c.arity}")
        if c is NOT:
            out.extend(f"{n[a]} -> {n[t[a]]}" for a in range(M.size))
        else:
            out.extend(f"{n[a]} {n[b]} -> {n[t[a][b]]}"
                       for a in range(M.size) for b in range(M.size))
    return "\n".join(out) + "\n"
