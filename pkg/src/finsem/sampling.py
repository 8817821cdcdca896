"""Seeded random formulas and sequents restricted to a fragment."""
from __future__ import annotations

import random

from .formula import AND, CONNECTIVES, IMPLIES, NOT, OR, And, Formula, Imp, Not, Or, Var
from .sequent import Sequent

_BUILD = {AND: And, OR: Or, IMPLIES: Imp}


def random_formula(rng: random.Random, fragment, letters: int = 4, depth: int = 4,
                   leaf_bias: float = 0.3) -> Formula:
    """A formula of depth at most ``depth`` over p1..p_letters using only ``fragment``."""
    ops = [c for c in CONNECTIVES if c in fragment]
    if depth <= 0 or not ops or rng.random() < leaf_bias:
        return Var(rng.randint(1, letters))
    c = rng.choice(ops)
    if c is NOT:
        return Not(random_formula(rng, fragment, letters, depth - 1, leaf_bias))
    return _BUILD[c](random_formula(rng, fragment, letters, depth - 1, leaf_bias),
                     random_formula(rng, fragment, letters, depth - 1, leaf_bias))


def random_sequent(rng: random.Random, fragment, letters: int = 4, depth: int = 4,
                   max_premises: int = 4) -> Sequent:
    k = rng.randint(0, max_premises)
    premises = tuple(random_formula(rng, fragment, letters, depth) for _ in range(k))
    return Sequent(premises, random_formula(rng, fragment, letters, depth))
