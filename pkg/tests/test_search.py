import itertools

import pytest

from finsem.errors import FragmentError, ResourceLimitError
from finsem.formula import AND, IMPLIES, NOT, OR, gen_alpha, substitute, Var, alpha_pairs
from finsem.matrix import build_matrix, make_three, make_two
from finsem.refuter import COMPLETENESS, refute_matrix
from finsem.search import (INCOMPLETE, UNSOUND, Corpus, CorpusEntry, canonical_form,
                           enumerate_matrices, format_corpus, parse_corpus, permute,
                           raw_space_size, search, standard_corpus, test_candidate)
from finsem.sequent import Sequent, parse_sequent


def entry(text, derivable, note=""):
    return CorpusEntry(parse_sequent(text), derivable, note)


def _raw_codes(fragment, m):
    """Every raw encoding: designated bits, then tables in and/or/imp/not order."""
    width = sum(m ** c.arity for c in fragment)
    return itertools.product(*([range(2)] * m + [range(m)] * width))


def _act(fragment, m, perm, code):
    """Relabel a raw encoding by ``perm``; written out independently of the package."""
    inv = [perm.index(x) for x in range(m)]
    out = [code[inv[x]] for x in range(m)]
    pos = m
    for c in (AND, OR, IMPLIES, NOT):
        if c not in fragment:
            continue
        if c is NOT:
            t = code[pos:pos + m]
            out += [perm[t[inv[x]]] for x in range(m)]
            pos += m
        else:
            t = code[pos:pos + m * m]
            out += [perm[t[inv[x] * m + inv[y]]] for x in range(m) for y in range(m)]
            pos += m * m
    return tuple(out)


def orbit_count(fragment, m):
    """Burnside: average number of fixed encodings over all relabellings."""
    perms = list(itertools.permutations(range(m)))
    fixed = 0
    for perm in perms:
        fixed += sum(1 for code in _raw_codes(fragment, m) if _act(fragment, m, perm, code) == code)
    assert fixed % len(perms) == 0
    return fixed // len(perms)


# enumeration

def test_raw_space_sizes():
    assert raw_space_size({NOT}, 1) == 2
    assert raw_space_size({NOT}, 2) == 16
    assert raw_space_size({AND}, 2) == 64
    assert raw_space_size({AND, NOT}, 3) == 3 ** 9 * 3 ** 3 * 2 ** 3


@pytest.mark.parametrize("fragment, m", [
    ({NOT}, 1), ({NOT}, 2), ({NOT}, 3), ({AND}, 2), ({IMPLIES}, 2), ({AND, NOT}, 2),
    (set(), 3), ({AND, OR}, 2),
])
def test_enumeration_matches_orbit_count(fragment, m):
    found = list(enumerate_matrices(fragment, m))
    assert len(found) == orbit_count(frozenset(fragment), m)
    assert len({canonical_form(M) for M in found}) == len(found)


def test_enumeration_small_counts():
    assert len(list(enumerate_matrices({NOT}, 1))) == 2
    assert len(list(enumerate_matrices({NOT}, 2))) == 10


def test_enumeration_guard():
    with pytest.raises(ResourceLimitError):
        next(enumerate_matrices({AND, OR}, 3))
    with pytest.raises(ValueError):
        next(enumerate_matrices({AND}, 0))


def test_canonical_form_is_permutation_invariant():
    M = make_three()
    for perm in itertools.permutations(range(3)):
        assert canonical_form(permute(M, perm)) == canonical_form(M)


# candidates

def test_candidate_examples():
    corpus = Corpus([entry("~~p1 |- p1", False)])
    assert test_candidate(make_three(), corpus).passed
    r = test_candidate(make_two({AND, NOT}), corpus)
    assert not r.passed and r.entry == 0 and r.direction == INCOMPLETE
    trivial = Corpus([entry("p1 |- p1", True)])
    for M in enumerate_matrices({NOT}, 2):
        assert test_candidate(M, trivial).passed


def test_candidate_unsound_direction():
    constant = build_matrix(2, {AND: [[0, 0], [0, 0]]}, {1})
    r = test_candidate(constant, Corpus([entry("p1 ; p2 |- p1 & p2", True)]))
    assert r == type(r)(False, 0, UNSOUND)


def test_candidate_fragment_mismatch():
    with pytest.raises(FragmentError):
        test_candidate(make_two({AND}), Corpus([entry("p1 |- p1 | p2", True)]))


def test_isomorphic_copies_agree():
    corpus = standard_corpus({AND, NOT}, count=30)
    for M in list(enumerate_matrices({AND, NOT}, 2))[::7] + [make_three()]:
        base = test_candidate(M, corpus)
        for perm in itertools.permutations(range(M.size)):
            assert test_candidate(permute(M, perm), corpus) == base


# corpus

def test_standard_corpus_labels_come_from_prover():
    corpus = standard_corpus({IMPLIES})
    corpus.validate()
    notes = {e.note for e in corpus}
    assert {"alpha_2 arrow", "alpha_3 arrow"} <= notes
    assert all(e.sequent.fragment <= {IMPLIES} for e in corpus)
    costs = [e.cost() for e in corpus]
    assert costs == sorted(costs)


def test_corpus_round_trip(tmp_path):
    corpus = standard_corpus({AND, NOT}, count=25)
    text = format_corpus(corpus)
    again = parse_corpus(text)
    assert again.entries == corpus.entries
    assert parse_corpus("# only a comment\n\n").entries == []


def test_corpus_validation_rejects_wrong_labels():
    with pytest.raises(ValueError):
        parse_corpus("~~p1 |- p1 :: derivable :: wrong\n")
    assert len(parse_corpus("~~p1 |- p1 :: derivable :: wrong\n", validate=False)) == 1
    with pytest.raises(ValueError):
        parse_corpus("p1 |- p1 :: maybe\n", validate=False)


# search

def brute_force(fragment, max_size, corpus):
    forms = set()
    for m in range(1, max_size + 1):
        for M in enumerate_matrices(fragment, m):
            if test_candidate(M, corpus).passed:
                forms.add(canonical_form(M))
    return forms


@pytest.mark.parametrize("fragment, k", [
    (frozenset(), 3), ({AND}, 2), ({NOT}, 3), ({AND, NOT}, 2), ({OR}, 2), ({IMPLIES}, 2),
])
def test_search_matches_brute_force(fragment, k):
    corpus = standard_corpus(fragment, count=25)
    outcome = search(fragment, k, corpus)
    assert outcome.survivor_forms() == brute_force(fragment, k, corpus)
    for m, st in outcome.stats.items():
        assert st.candidates == raw_space_size(fragment, m)
        assert st.candidates == st.rejected + st.survivors_raw
    for M, form in outcome.survivors:
        assert test_candidate(M, corpus).passed and canonical_form(M) == form


def test_search_and_not_finds_three():
    outcome = search({AND, NOT}, 3, standard_corpus({AND, NOT}))
    assert canonical_form(make_three()) in outcome.survivor_forms()


def test_search_and_finds_two():
    outcome = search({AND}, 2, standard_corpus({AND}))
    assert canonical_form(make_two({AND})) in outcome.survivor_forms()


def test_search_rejection_causes_name_entries():
    corpus = standard_corpus({NOT})
    outcome = search({NOT}, 2, corpus)
    for st in outcome.stats.values():
        for (k, cause), count in st.rejections.items():
            assert 0 <= k < len(corpus) and cause in (UNSOUND, INCOMPLETE) and count > 0


def test_search_determinism_across_workers():
    corpus = standard_corpus({AND, NOT})
    one = search({AND, NOT}, 3, corpus, workers=1)
    two = search({AND, NOT}, 3, corpus, workers=2)
    assert one.porcelain() == two.porcelain()
    assert one.table() == two.table()


def test_search_guards():
    with pytest.raises(ResourceLimitError):
        search({AND, OR}, 4, Corpus([]))
    with pytest.raises(FragmentError):
        search({AND}, 2, Corpus([entry("~p1 |- ~p1", True)]))


# refuter and search together

def test_refuter_eliminates_survivors_of_a_weak_corpus():
    weak = Corpus([entry("p1 |- p1", True), entry("p1 |- p2", False)])
    outcome = search({IMPLIES}, 2, weak)
    assert outcome.survivors
    for M, _ in outcome.survivors:
        report = refute_matrix(M, "arrow")
        report.replay()
        derivable = report.mode != COMPLETENESS
        extra = CorpusEntry(Sequent((), report.witness_formula), derivable, report.mode)
        stronger = Corpus(weak.entries + [extra])
        assert not test_candidate(M, stronger).passed


def test_pigeonhole_corpus_leaves_no_implication_matrices():
    entries = []
    for n in (1, 2):
        alpha = gen_alpha("arrow", n)
        entries.append(CorpusEntry(Sequent((), alpha), False))
        for i, j in alpha_pairs(n):
            entries.append(CorpusEntry(Sequent((), substitute(alpha, Var(i), Var(j))), True))
    outcome = search({IMPLIES}, 2, Corpus(entries))
    assert outcome.survivors == []
