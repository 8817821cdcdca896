import itertools
import random

import pytest

from finsem.errors import FragmentError, InvariantError
from finsem.formula import IMPLIES, NOT, OR, Imp, Not, Or, Var, gen_alpha, subformulas, substitute
from finsem.matrix import build_matrix, evaluate, make_chain, make_three, make_two
from finsem.oracle import Prover, is_theorem
from finsem.deciders import classical_consequence
from finsem.refuter import COMPLETENESS, SOUNDNESS, chain_countermodel_report, refute_matrix
from finsem.sequent import Sequent


def broken_arrow():
    return build_matrix(2, {IMPLIES: [[0, 0], [0, 0]]}, {1}, ["0", "1"], "broken")


def perturbed(base, rng, changes=2):
    """Copy of ``base`` with a few random table cells rewritten."""
    m = base.size
    tables = {c: ([list(t)] if c is NOT else [list(r) for r in t]) for c, t in base.tables.items()}
    for _ in range(changes):
        c = rng.choice(sorted(tables, key=lambda x: x.value))
        t = tables[c]
        if c is NOT:
            t[0][rng.randrange(m)] = rng.randrange(m)
        else:
            t[rng.randrange(m)][rng.randrange(m)] = rng.randrange(m)
    tables = {c: (t[0] if c is NOT else t) for c, t in tables.items()}
    return build_matrix(m, tables, base.designated, base.names, f"{base.label}~")


def test_chain_two_arrow():
    r = refute_matrix(make_chain(2), "arrow")
    assert r.mode == COMPLETENESS and r.n == 2
    assert r.oracle_confirmation is not None and not r.oracle_confirmation.derivable
    C, w, value = r.chain_countermodel
    assert C.size == 3 and C.names[value] == "2"
    r.replay()


def test_chain_three_arrow():
    r = refute_matrix(make_chain(3), "arrow")
    assert r.mode == COMPLETENESS
    assert r.chain_countermodel.matrix.size == 4
    r.replay()


def test_boolean_orneg():
    r = refute_matrix(make_two({OR, NOT}), "orneg")
    assert r.mode == COMPLETENESS and r.n == 2
    assert not r.oracle_confirmation.derivable
    assert len(r.classical_falsifications) == 3
    for disjunct, v in r.classical_falsifications:
        i, j = disjunct.arg.arg.left.arg.index, disjunct.arg.arg.right.index
        assert v[i] == 1 and v[j] == 0
    r.replay()


def test_broken_arrow_soundness_violation():
    r = refute_matrix(broken_arrow(), "arrow")
    assert r.mode == SOUNDNESS
    i, j = r.identified_pair
    assert (i, j) == (1, 2)
    assert Imp(Var(j), Var(j)) in set(subformulas(r.witness_formula))
    assert r.oracle_confirmation.derivable
    assert evaluate(r.matrix, r.witness_valuation, r.witness_formula) not in r.matrix.designated
    r.replay()


def test_fragment_checks():
    with pytest.raises(FragmentError):
        refute_matrix(make_three(), "arrow")
    with pytest.raises(FragmentError):
        refute_matrix(make_two({OR}), "orneg")
    with pytest.raises(ValueError):
        refute_matrix(make_chain(2), "sideways")


def test_oracle_cannot_be_skipped_for_small_matrices():
    r = refute_matrix(make_chain(3), "arrow", use_oracle=False)
    assert r.oracle_confirmation is not None
    r = refute_matrix(make_chain(4), "arrow", use_oracle=False)
    assert r.oracle_confirmation is None and r.mode == COMPLETENESS
    r.replay()


def test_replay_detects_tampering():
    r = refute_matrix(broken_arrow(), "arrow")
    r.identified_pair = (1, 3)
    with pytest.raises(InvariantError):
        r.replay()
    r = refute_matrix(make_chain(2), "arrow")
    r.mode = "something"
    with pytest.raises(InvariantError):
        r.replay()


# chain countermodels

@pytest.mark.parametrize("n", range(1, 7))
def test_chain_countermodel_value(n):
    C, w, value = chain_countermodel_report(n)
    assert C.size == n + 1
    assert w == {i: i - 1 for i in range(1, n + 2)}
    assert C.names[value] == str(n)
    assert value not in C.designated


def test_chain_countermodel_rejects_bad_n():
    with pytest.raises(ValueError):
        chain_countermodel_report(0)


# invariants

@pytest.mark.parametrize("n", [1, 2, 3])
def test_pigeonhole_totality(n):
    for values in itertools.product(range(n), repeat=n + 1):
        assert any(values[i] == values[j] for i in range(n + 1) for j in range(i + 1, n + 1))


@pytest.mark.parametrize("variant", ["arrow", "orneg"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_alpha_not_theorem_and_every_beta_is(variant, n):
    prover = Prover()
    alpha = gen_alpha(variant, n)
    assert not is_theorem(alpha, prover=prover)
    for i in range(1, n + 2):
        for j in range(i + 1, n + 2):
            assert is_theorem(substitute(alpha, Var(i), Var(j)), prover=prover)


@pytest.mark.parametrize("i, j", [(1, 2), (2, 1), (1, 3), (3, 4)])
def test_orneg_disjunct_classically_false(i, j):
    d = Not(Not(Or(Not(Var(i)), Var(j))))
    v = classical_consequence(Sequent((), d))
    assert not v.holds
    two = make_two()
    assert evaluate(two, {i: 1, j: 0}, d) == 0


def _random_reports(variant, base, seeds):
    out = []
    for seed in seeds:
        M = perturbed(base, random.Random(seed), changes=1 + seed % 3)
        r = refute_matrix(M, variant)
        r.replay()
        out.append(r)
    return out


@pytest.mark.parametrize("variant, base", [
    ("arrow", make_chain(2)), ("arrow", make_chain(3)),
    ("orneg", make_two({OR, NOT})), ("orneg", make_chain(3, {OR, NOT})),
])
def test_dichotomy_on_perturbed_matrices(variant, base):
    reports = _random_reports(variant, base, range(12))
    for r in reports:
        assert r.mode in (COMPLETENESS, SOUNDNESS)
        if r.mode == SOUNDNESS:
            assert r.oracle_confirmation.derivable
        else:
            assert not r.oracle_confirmation.derivable


def test_porcelain_lines_are_key_value():
    for M, variant in ((make_chain(2), "arrow"), (broken_arrow(), "arrow"),
                       (make_two({OR, NOT}), "orneg")):
        text = refute_matrix(M, variant).porcelain()
        for line in text.splitlines():
            key, _, value = line.partition(": ")
            assert key and value and " " not in key
