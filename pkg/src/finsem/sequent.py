"""Sequents ``phi1 ; phi2 |- psi`` and the verdicts returned by every decider."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import FormulaSyntaxError
from .formula import Formula, fragment_of, letters_of, parse, to_text


@dataclass(frozen=True)
class Sequent:
    premises: tuple[Formula, ...]
    conclusion: Formula

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    @property
    def fragment(self) -> frozenset:
        out = fragment_of(self.conclusion)
        for f in self.premises:
            out |= fragment_of(f)
        return out

    @property
    def letters(self):
        found = set(letters_of(self.conclusion))
        for f in self.premises:
            found.update(letters_of(f))
        return tuple(sorted(found, key=lambda v: v.index))

    def __str__(self):
        return format_sequent(self)


def parse_sequent(text: str) -> Sequent:
    """``"p1 ; p1 -> p2 |- p2"``; the premise side may be empty."""
    if text.count("|-") != 1:
        raise FormulaSyntaxError("a sequent needs exactly one '|-'", text, max(text.find("|-"), 0))
    lhs, rhs = text.split("|-")
    premises = []
    if lhs.strip():
        for part in lhs.split(";"):
            if not part.strip():
                raise FormulaSyntaxError("empty premise", text, 0)
            premises.append(parse(part))
    return Sequent(tuple(premises), parse(rhs))


def format_sequent(s: Sequent) -> str:
    lhs = " ; ".join(to_text(f) for f in s.premises)
    return f"{lhs} |- {to_text(s.conclusion)}" if lhs else f"|- {to_text(s.conclusion)}"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure.

    ``witness`` maps letter indices to element indices of ``matrix`` and is
    present for every negative matrix-based verdict, so it can be replayed
    with :func:`finsem.matrix.evaluate`.
    """
    derivable: bool
    method: str
    witness: Mapping[int, int] | None = field(default=None, compare=False)
    matrix: object | None = field(default=None, compare=False, repr=False)

    @property
    def outcome(self) -> str:
        return "derivable" if self.derivable else "not-derivable"

    # matrix consequence reads more naturally as holds / fails
    @property
    def holds(self) -> bool:
        return self.derivable

    def witness_text(self) -> str:
        if self.witness is None:
            return ""
        names = getattr(self.matrix, "names", None)
        parts = []
        for i in sorted(self.witness):
            value = self.witness[i]
            parts.append(f"p{i}={names[value] if names else value}")
        return ",".join(parts)
