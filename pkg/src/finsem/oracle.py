"""Decision procedure for full intuitionistic propositional derivability.

Backward proof search in Dyckhoff's contraction-free sequent calculus
(G4ip / LJT). Negation is encoded as implication into an internal falsum
constant that never leaves this module. Every rule strictly decreases a
well-founded multiset weight, so search terminates without loop checks;
results are memoised per query.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError, ResourceLimitError
from .formula import And, Formula, Not, Or, Var
from .sequent import Sequent, Verdict

DEFAULT_BUDGET = 2_000_000

# internal node kinds
_ATOM, _BOT, _AND, _OR, _IMP = range(5)


class Prover:
    """Reusable prover; the memo table survives between queries."""

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget
        self.steps = 0
        self._nodes: list[tuple] = []
        self._ids: dict[tuple, int] = {}
        self._memo: dict[tuple, bool] = {}
        self.bot = self._intern((_BOT,))

    def _intern(self, node: tuple) -> int:
        got = self._ids.get(node)
        if got is None:
            got = len(self._nodes)
            self._nodes.append(node)
            self._ids[node] = got
        return got

    def encode(self, f: Formula) -> int:
        if isinstance(f, Var):
            return self._intern((_ATOM, f.index))
        if isinstance(f, Not):
            return self._intern((_IMP, self.encode(f.arg), self.bot))
        kind = _AND if isinstance(f, And) else _OR if isinstance(f, Or) else _IMP
        return self._intern((kind, self.encode(f.left), self.encode(f.right)))

    def provable(self, s: Sequent) -> bool:
        self.steps = 0
        ctx = frozenset(self.encode(f) for f in s.premises)
        return self._prove(ctx, self.encode(s.conclusion))

    def _prove(self, ctx: frozenset, goal: int) -> bool:
        key = (ctx, goal)
        got = self._memo.get(key)
        if got is None:
            self.steps += 1
            if self.steps > self.budget:
                raise ResourceLimitError(
                    f"proof search exceeded its budget of {self.budget} sequents", self.budget)
            got = self._search(ctx, goal)
            self._memo[key] = got
        return got

    def _search(self, ctx: frozenset, goal: int) -> bool:
        nodes = self._nodes
        bot = self.bot
        if goal in ctx or bot in ctx:
            return True

        # invertible right rules
        g = nodes[goal]
        if g[0] == _AND:
            return self._prove(ctx, g[1]) and self._prove(ctx, g[2])
        if g[0] == _IMP:
            return self._prove(ctx | {g[1]}, g[2])

        # invertible left rules, principal formula chosen by smallest id
        for h in sorted(ctx):
            n = nodes[h]
            kind = n[0]
            if kind == _AND:
                return self._prove((ctx - {h}) | {n[1], n[2]}, goal)
            if kind == _OR:
                rest = ctx - {h}
                return self._prove(rest | {n[1]}, goal) and self._prove(rest | {n[2]}, goal)
            if kind == _IMP:
                a = nodes[n[1]]
                if a[0] == _ATOM and n[1] in ctx:
                    return self._prove((ctx - {h}) | {n[2]}, goal)
                if a[0] == _BOT:
                    return self._prove(ctx - {h}, goal)
                if a[0] == _AND:
                    inner = self._intern((_IMP, a[2], n[2]))
                    curried = self._intern((_IMP, a[1], inner))
                    return self._prove((ctx - {h}) | {curried}, goal)
                if a[0] == _OR:
                    left = self._intern((_IMP, a[1], n[2]))
                    right = self._intern((_IMP, a[2], n[2]))
                    return self._prove((ctx - {h}) | {left, right}, goal)

        # non-invertible rules: right disjunction, then nested implications
        if g[0] == _OR and (self._prove(ctx, g[1]) or self._prove(ctx, g[2])):
            return True
        for h in sorted(ctx):
            n = nodes[h]
            if n[0] != _IMP:
                continue
            a = nodes[n[1]]
            if a[0] != _IMP:
                continue
            d, b = a[2], n[2]
            rest = ctx - {h}
            d_to_b = self._intern((_IMP, d, b))
            if self._prove(rest | {d_to_b}, n[1]) and self._prove(rest | {b}, goal):
                return True
        return False


def prove_ipc(s: Sequent, budget: int = DEFAULT_BUDGET, prover: Prover | None = None) -> Verdict:
    """Intuitionistic derivability of ``s``; ``method`` is ``"oracle"``."""
    prover = prover or Prover(budget)
    return Verdict(prover.provable(s), "oracle")


def is_theorem(f: Formula, budget: int = DEFAULT_BUDGET, prover: Prover | None = None) -> bool:
    return prove_ipc(Sequent((), f), budget, prover).derivable


@dataclass(frozen=True)
class DisjunctionReport:
    formula: Formula
    left: bool
    right: bool

    @property
    def side(self) -> str:
        if self.left and self.right:
            return "both"
        return "left" if self.left else "right" if self.right else "neither"


def check_disjunction_property(f: Formula, budget: int = DEFAULT_BUDGET,
                               prover: Prover | None = None) -> DisjunctionReport:
    """For a derivable closed disjunction, report which disjuncts are theorems."""
    if not isinstance(f, Or):
        raise PreconditionError(f"expected a disjunction, got {f}")
    prover = prover or Prover(budget)
    if not is_theorem(f, prover=prover):
        raise PreconditionError(f"{f} is not intuitionistically derivable")
    return DisjunctionReport(f, is_theorem(f.left, prover=prover),
                             is_theorem(f.right, prover=prover))
