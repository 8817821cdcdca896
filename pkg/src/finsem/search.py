"""Bounded search for characteristic matrices.

Every matrix of a given size over a fragment is tested against a corpus
of sequents labelled by the intuitionistic prover. The raw space is
astronomically redundant, so :func:`search` prunes in stages:

1. designated set and negation table ("skeleton"), tested on entries
   without binary connectives;
2. each binary table separately, vectorised over all tables with numpy,
   tested on entries that use that one binary connective;
3. the product of the surviving binary tables, tested on the rest.

Rejection counts always refer to the raw (labelled) candidate space.
Survivors are reported up to isomorphism.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import FormulaSyntaxError, FragmentError, ResourceLimitError
from .formula import (AND, CONNECTIVES, IMPLIES, NOT, OR, And, Formula, Not, Or, Var,
                      alpha_pairs, fragment_name, gen_alpha, size, substitute)
from .matrix import Matrix, build_matrix, consequence
from .oracle import Prover, prove_ipc
from .sampling import random_sequent
from .sequent import Sequent, format_sequent, parse_sequent

BINARY_OPS = (AND, OR, IMPLIES)
DEFAULT_TABLE_LIMIT = 50_000
DEFAULT_COMBO_LIMIT = 2_000_000
UNSOUND = "unsound"
INCOMPLETE = "incomplete"


# ---------------------------------------------------------------------------
# corpus

@dataclass(frozen=True)
class CorpusEntry:
    sequent: Sequent
    derivable: bool
    note: str = ""

    @property
    def label(self) -> str:
        return "derivable" if self.derivable else "not-derivable"

    def cost(self) -> tuple[int, int]:
        s = self.sequent
        return (len(s.letters), sum(size(f) for f in (*s.premises, s.conclusion)))


@dataclass
class Corpus:
    entries: list[CorpusEntry] = field(default_factory=list)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def fragment(self) -> frozenset:
        out = frozenset()
        for e in self.entries:
            out |= e.sequent.fragment
        return out

    def restricted(self, fragment) -> "Corpus":
        fragment = frozenset(fragment)
        return Corpus([e for e in self.entries if e.sequent.fragment <= fragment])

    def validate(self, prover: Prover | None = None) -> None:
        """Re-derive every label with the prover; raise ValueError on a mismatch."""
        prover = prover or Prover()
        for k, e in enumerate(self.entries):
            got = prove_ipc(e.sequent, prover=prover).derivable
            if got != e.derivable:
                raise ValueError(f"corpus entry {k} ({format_sequent(e.sequent)}) is labelled "
                                 f"{e.label} but the prover says otherwise")


def format_corpus(corpus: Corpus) -> str:
    lines = [f"# {len(corpus)} entries; labels from the intuitionistic prover"]
    for e in corpus:
        lines.append(f"{format_sequent(e.sequent)} :: {e.label} :: {e.note}")
    return "\n".join(lines) + "\n"


def parse_corpus(text: str, validate: bool = True) -> Corpus:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [x.strip() for x in line.split("::")]
        if len(parts) not in (2, 3) or parts[1] not in ("derivable", "not-derivable"):
            raise FormulaSyntaxError(
                f"line {lineno}: expected '<sequent> :: derivable|not-derivable :: <note>'")
        entries.append(CorpusEntry(parse_sequent(parts[0]), parts[1] == "derivable",
                                   parts[2] if len(parts) == 3 else ""))
    corpus = Corpus(entries)
    if validate:
        corpus.validate()
    return corpus


def load_corpus(path, validate: bool = True) -> Corpus:
    return parse_corpus(Path(path).read_text(), validate)


_SEED_ITEMS = [
    ("p1 |- p1", "identity"),
    ("p1 ; p2 |- p1", "weakening"),
    ("p1 |- p2", "distinct letters"),
    ("p1 & p2 |- p2", "and elimination"),
    ("p1 |- p1 & p2", "and introduction needs both"),
    ("p1 ; p2 |- p1 & p2", "and introduction"),
    ("p1 & p2 |- p2 & p1", "and commutes"),
    ("p1 |- p1 | p2", "or introduction"),
    ("p1 | p2 |- p1", "or is not projection"),
    ("p1 | p2 |- p2 | p1", "or commutes"),
    ("p1 | p1 |- p1", "or idempotent"),
    ("p1 & (p2 | p3) |- p1 & p2 | p1 & p3", "distributivity"),
    ("p1 | p2 & p3 |- (p1 | p2) & (p1 | p3)", "distributivity"),
    ("(p1 | p2) & (p1 | p3) |- p1 | p2 & p3", "distributivity converse"),
    ("p1 | p2 ; p1 | p3 |- p2 | p3", "no resolution"),
    ("~~p1 |- p1", "double negation elimination fails"),
    ("p1 |- ~~p1", "double negation introduction"),
    ("p1 ; ~p1 |- p2", "explosion"),
    ("~~~p1 |- ~p1", "triple negation"),
    ("~p1 |- ~~~p1", "triple negation"),
    ("~p1 |- p1", "negation is not identity"),
    ("p1 |- ~p1", "negation is not identity"),
    ("~p1 ; ~~p1 |- p2", "explosion on a negation"),
    ("|- ~(p1 & ~p1)", "non-contradiction"),
    ("~p1 |- ~(p1 & p2)", "negation of a conjunct"),
    ("~(p1 & p2) |- ~p1", "De Morgan direction fails"),
    ("~~(p1 & p2) |- ~~p1 & ~~p2", "double negation distributes"),
    ("~~p1 & ~~p2 |- ~~(p1 & p2)", "double negation distributes"),
    ("~(p1 & ~p2) ; p1 |- ~~p2", "Glivenko pair, negated conclusion"),
    ("~(p1 & ~p2) ; p1 |- p2", "Glivenko pair, bare conclusion"),
    ("~~p1 ; ~p2 |- ~(p1 & p2)", "Glivenko"),
    ("|- p1 | ~p1", "excluded middle fails"),
    ("|- ~~(p1 | ~p1)", "double-negated excluded middle"),
    ("~(p1 | p2) |- ~p1 & ~p2", "De Morgan"),
    ("~p1 | ~p2 |- ~(p1 & p2)", "De Morgan"),
    ("~(p1 & p2) |- ~p1 | ~p2", "De Morgan direction fails"),
    ("|- p1 -> p1", "implication identity"),
    ("p1 ; p1 -> p2 |- p2", "modus ponens"),
    ("p1 -> p2 ; p2 -> p3 |- p1 -> p3", "transitivity"),
    ("|- p1 -> p2 -> p1", "K"),
    ("|- ((p1 -> p2) -> p1) -> p1", "Peirce fails"),
    ("p2 -> p1 |- p1 -> p2", "converse fails"),
    ("|- (p1 -> p2) | (p2 -> p1)", "linearity fails"),
    ("|- ~~p1 -> p1", "double negation elimination fails"),
    ("p1 -> p2 |- ~p2 -> ~p1", "contraposition"),
]


def _pigeonhole_families(fragment: frozenset, max_n: int = 3):
    for variant, needs in (("arrow", {IMPLIES}), ("orneg", {OR, NOT})):
        if not needs <= fragment:
            continue
        for n in range(1, max_n + 1):
            alpha = gen_alpha(variant, n)
            yield Sequent((), alpha), f"alpha_{n} {variant}"
            for i, j in alpha_pairs(n):
                yield Sequent((), substitute(alpha, Var(i), Var(j))), f"beta_{n} {variant} p{i}:=p{j}"


def standard_corpus(fragment, count: int = 40, seed: int = 0,
                    prover: Prover | None = None) -> Corpus:
    """Seed sequents, pigeonhole instances and random sequents in ``fragment``, prover-labelled.

    Entries are sorted cheapest first: fewer letters, then fewer symbols.
    """
    fragment = frozenset(fragment)
    prover = prover or Prover()
    items = []
    seen = set()

    def add(s: Sequent, note: str):
        if s.fragment <= fragment and s not in seen:
            seen.add(s)
            items.append((s, note))

    for text, note in _SEED_ITEMS:
        add(parse_sequent(text), note)
    for s, note in _pigeonhole_families(fragment):
        add(s, note)
    rng = random.Random(seed)
    attempts = 0
    while len(items) < count and attempts < 50 * count:
        attempts += 1
        add(random_sequent(rng, fragment, letters=3, depth=3, max_premises=2),
            f"random seed {seed}")
    entries = [CorpusEntry(s, prove_ipc(s, prover=prover).derivable, note) for s, note in items]
    entries.sort(key=CorpusEntry.cost)
    return Corpus(entries)


# ---------------------------------------------------------------------------
# canonical forms and plain enumeration

def permute(M: Matrix, perm: Sequence[int]) -> Matrix:
    """Isomorphic copy in which old element ``a`` becomes ``perm[a]``."""
    m = M.size
    inv = [0] * m
    for a, b in enumerate(perm):
        inv[b] = a
    tables = {}
    for c, t in M.tables.items():
        if c is NOT:
            tables[c] = [perm[t[inv[x]]] for x in range(m)]
        else:
            tables[c] = [[perm[t[inv[x]][inv[y]]] for y in range(m)] for x in range(m)]
    names = [M.names[inv[x]] for x in range(m)]
    return build_matrix(m, tables, {perm[d] for d in M.designated}, names, M.label)


def canonical_form(M: Matrix) -> tuple:
    """Lexicographically least encoding over all relabellings of the elements."""
    return min(permute(M, perm).encode() for perm in itertools.permutations(range(M.size)))


def canonical_matrix(M: Matrix) -> Matrix:
    best = min((permute(M, perm) for perm in itertools.permutations(range(M.size))),
               key=Matrix.encode)
    return build_matrix(M.size, best.tables, best.designated, None, M.label)


def raw_space_size(fragment, m: int) -> int:
    total = 2 ** m
    for c in fragment:
        total *= m ** (m ** c.arity)
    return total


def _decode(fragment: frozenset, m: int, code: Sequence[int]) -> Matrix:
    designated = {a for a in range(m) if code[a]}
    pos = m
    tables = {}
    for c in CONNECTIVES:
        if c not in fragment:
            continue
        if c is NOT:
            tables[c] = list(code[pos:pos + m])
            pos += m
        else:
            flat = code[pos:pos + m * m]
            tables[c] = [flat[a * m:(a + 1) * m] for a in range(m)]
            pos += m * m
    return build_matrix(m, tables, designated)


def enumerate_matrices(fragment, m: int, limit: int = 1_000_000) -> Iterator[Matrix]:
    """Every size-``m`` matrix over ``fragment``, one per isomorphism class.

    Walks the raw space in encoding order and keeps the encodings that are
    already canonical, so it is only practical for small spaces.
    """
    fragment = frozenset(fragment)
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"size must be a positive integer, got {m!r}")
    total = raw_space_size(fragment, m)
    if total > limit:
        raise ResourceLimitError(
            f"{total} raw matrices of size {m} over [{fragment_name(fragment)}] exceed the "
            f"enumeration limit {limit}; use search() for pruned exploration", limit)
    width = m
    for c in fragment:
        width += m ** c.arity
    digits = [range(2)] * m + [range(m)] * (width - m)
    for code in itertools.product(*digits):
        M = _decode(fragment, m, code)
        if canonical_form(M) == code:
            yield M


# ---------------------------------------------------------------------------
# testing a single candidate

@dataclass(frozen=True)
class CandidateResult:
    passed: bool
    entry: int | None = None
    direction: str | None = None


def test_candidate(M: Matrix, corpus: Corpus) -> CandidateResult:
    """First corpus entry on which ``M`` disagrees with the label, if any.

    ``unsound``: the entry is derivable but the matrix has a counter-valuation.
    ``incomplete``: the entry is not derivable but the matrix validates it.
    """
    for k, e in enumerate(corpus):
        if not e.sequent.fragment <= M.fragment:
            raise FragmentError(f"corpus entry {k} uses connectives outside "
                                f"[{fragment_name(M.fragment)}]")
    for k, e in enumerate(corpus):
        holds = consequence(M, e.sequent.premises, e.sequent.conclusion).holds
        if e.derivable and not holds:
            return CandidateResult(False, k, UNSOUND)
        if not e.derivable and holds:
            return CandidateResult(False, k, INCOMPLETE)
    return CandidateResult(True)


test_candidate.__test__ = False  # not a pytest test


# ---------------------------------------------------------------------------
# staged vectorised search

class _Compiled:
    """A corpus entry prepared for array evaluation at one matrix size."""

    def __init__(self, index: int, entry: CorpusEntry, m: int):
        s = entry.sequent
        self.index = index
        self.derivable = entry.derivable
        self.premises = s.premises
        self.conclusion = s.conclusion
        self.ops = s.fragment & set(BINARY_OPS)
        letters = [v.index for v in s.letters]
        grid = np.array(list(itertools.product(range(m), repeat=len(letters))), dtype=np.int16)
        grid = grid.reshape(-1, len(letters))
        self.letter_values = {i: grid[:, k][None, :] for k, i in enumerate(letters)}


def _eval_array(f: Formula, env: dict, memo: dict) -> np.ndarray:
    got = memo.get(f)
    if got is not None:
        return got
    if isinstance(f, Var):
        out = env["letters"][f.index]
    elif isinstance(f, Not):
        out = env["not"][_eval_array(f.arg, env, memo)]
    else:
        c = AND if isinstance(f, And) else OR if isinstance(f, Or) else IMPLIES
        x = _eval_array(f.left, env, memo)
        y = _eval_array(f.right, env, memo)
        tab = env[c]
        idx = x * env["m"] + y
        idx = np.broadcast_to(idx, (tab.shape[0], idx.shape[1]))
        out = np.take_along_axis(tab, idx, axis=1)
    memo[f] = out
    return out


def _entry_holds(e: _Compiled, env: dict, n: int) -> np.ndarray:
    """Boolean vector over the ``n`` candidates in ``env``: does the consequence hold?"""
    memo: dict = {}
    D = env["designated"]
    ok = np.ones((1, 1), dtype=bool)
    for f in e.premises:
        ok = ok & D[_eval_array(f, env, memo)]
    concl = D[_eval_array(e.conclusion, env, memo)]
    holds = np.all(~ok | concl, axis=1)
    return np.broadcast_to(holds, (n,)) if holds.shape[0] == 1 else holds


def _filter(entries, env, n, weight, rejections) -> np.ndarray:
    """Keep-mask over ``n`` candidates; rejected ones are charged ``weight`` each."""
    keep = np.ones(n, dtype=bool)
    for e in entries:
        if not keep.any():
            break
        holds = _entry_holds(e, env, n)
        bad = keep & (~holds if e.derivable else holds)
        count = int(bad.sum())
        if count:
            rejections[(e.index, UNSOUND if e.derivable else INCOMPLETE)] += count * weight
            keep &= ~bad
    return keep


@dataclass(frozen=True)
class _Job:
    fragment: frozenset
    m: int
    corpus: Corpus
    skeletons: tuple
    combo_limit: int


def _all_tables(m: int) -> np.ndarray:
    return np.array(list(itertools.product(range(m), repeat=m * m)), dtype=np.int16)


def _run_skeletons(job: _Job):
    m = job.m
    ops = [c for c in BINARY_OPS if c in job.fragment]
    compiled = [_Compiled(k, e, m) for k, e in enumerate(job.corpus)]
    stage_a = [e for e in compiled if not e.ops]
    stage_b = {c: [e for e in compiled if e.ops == {c}] for c in ops}
    stage_c = [e for e in compiled if len(e.ops) > 1]
    tables = _all_tables(m) if ops else None
    per_op = len(tables) if ops else 1
    rejections: Counter = Counter()
    survivors = []

    for designated, unary in job.skeletons:
        env = {"m": m, "designated": np.array(designated, dtype=bool), "letters": None}
        if unary is not None:
            env["not"] = np.array(unary, dtype=np.int16)
        block = per_op ** len(ops)

        ok = True
        for e in stage_a:
            env["letters"] = e.letter_values
            holds = bool(_entry_holds(e, env, 1)[0])
            if holds != e.derivable:
                rejections[(e.index, UNSOUND if e.derivable else INCOMPLETE)] += block
                ok = False
                break
        if not ok:
            continue

        kept = {}
        remaining = block
        for c in ops:
            # each table of c stands for every combination with the other ops still open
            weight = remaining // per_op
            cand = tables
            entries = stage_b[c]
            keep = np.ones(per_op, dtype=bool)
            for e in entries:
                idx = np.flatnonzero(keep)
                if idx.size == 0:
                    break
                sub_env = dict(env, letters=e.letter_values)
                sub_env[c] = cand[idx]
                holds = _entry_holds(e, sub_env, idx.size)
                bad = ~holds if e.derivable else holds
                count = int(bad.sum())
                if count:
                    rejections[(e.index, UNSOUND if e.derivable else INCOMPLETE)] += count * weight
                    keep[idx[bad]] = False
            kept[c] = cand[keep]
            remaining = weight * len(kept[c])
            if remaining == 0:
                break
        if remaining == 0:
            continue

        sizes = [len(kept[c]) for c in ops]
        combos = int(np.prod(sizes)) if ops else 1
        if combos > job.combo_limit:
            raise ResourceLimitError(
                f"{combos} table combinations survive single-connective pruning at size {m}; "
                f"limit is {job.combo_limit}", job.combo_limit)
        grids = np.indices(sizes).reshape(len(ops), -1) if ops else np.zeros((0, 1), dtype=int)
        combo_env = dict(env)
        for k, c in enumerate(ops):
            combo_env[c] = kept[c][grids[k]]
        keep = np.ones(combos, dtype=bool)
        for e in stage_c:
            idx = np.flatnonzero(keep)
            if idx.size == 0:
                break
            sub_env = dict(combo_env, letters=e.letter_values)
            for c in ops:
                sub_env[c] = combo_env[c][idx]
            holds = _entry_holds(e, sub_env, idx.size)
            bad = ~holds if e.derivable else holds
            count = int(bad.sum())
            if count:
                rejections[(e.index, UNSOUND if e.derivable else INCOMPLETE)] += count
                keep[idx[bad]] = False
        for k in np.flatnonzero(keep):
            code = [int(d) for d in designated]
            for c in CONNECTIVES:
                if c not in job.fragment:
                    continue
                if c is NOT:
                    code.extend(unary)
                else:
                    code.extend(int(x) for x in combo_env[c][k])
            survivors.append(tuple(code))
    return rejections, survivors


@dataclass
class SizeStats:
    candidates: int
    survivors_raw: int
    rejections: Counter

    @property
    def rejected(self) -> int:
        return sum(self.rejections.values())


@dataclass
class SearchOutcome:
    fragment: frozenset
    max_size: int
    corpus: Corpus
    survivors: list[tuple[Matrix, tuple]]
    stats: dict[int, SizeStats]

    def survivor_forms(self) -> set[tuple]:
        return {form for _, form in self.survivors}

    def table(self) -> str:
        lines = [f"search over [{fragment_name(self.fragment)}], sizes 1..{self.max_size}, "
                 f"{len(self.corpus)} corpus entries",
                 f"{'size':>4} {'raw candidates':>16} {'rejected':>16} {'raw survivors':>14} "
                 f"{'classes':>8}"]
        for m, st in sorted(self.stats.items()):
            classes = sum(1 for M, _ in self.survivors if M.size == m)
            lines.append(f"{m:>4} {st.candidates:>16} {st.rejected:>16} {st.survivors_raw:>14} "
                         f"{classes:>8}")
        if self.survivors:
            lines.append("survivors (canonical representatives):")
            for M, form in self.survivors:
                lines.append(f"  size {M.size}: designated={sorted(M.designated)} "
                             f"encoding={''.join(map(str, form))}")
        else:
            lines.append("no survivors")
        return "\n".join(lines)

    def porcelain(self) -> str:
        lines = [f"fragment: {fragment_name(self.fragment)}", f"max_size: {self.max_size}",
                 f"corpus_entries: {len(self.corpus)}"]
        for m, st in sorted(self.stats.items()):
            lines.append(f"size_{m}_candidates: {st.candidates}")
            lines.append(f"size_{m}_rejected: {st.rejected}")
            lines.append(f"size_{m}_survivors_raw: {st.survivors_raw}")
            for (entry, cause), count in sorted(st.rejections.items()):
                lines.append(f"size_{m}_rejected_by: {entry} {cause} {count}")
        lines.append(f"survivors: {len(self.survivors)}")
        for M, form in self.survivors:
            lines.append(f"survivor: {M.size} {''.join(map(str, form))}")
        return "\n".join(lines)


def _skeletons(fragment: frozenset, m: int) -> list:
    unary = list(itertools.product(range(m), repeat=m)) if NOT in fragment else [None]
    designated = list(itertools.product((0, 1), repeat=m))
    return [(d, u) for d in designated for u in unary]


def search(fragment, max_size: int, corpus: Corpus, workers: int = 1,
           table_limit: int = DEFAULT_TABLE_LIMIT,
           combo_limit: int = DEFAULT_COMBO_LIMIT) -> SearchOutcome:
    """Test every matrix of size 1..``max_size`` over ``fragment`` against ``corpus``.

    The outcome does not depend on ``workers``: counts are summed and
    survivors sorted by canonical form.
    """
    fragment = frozenset(fragment)
    for k, e in enumerate(corpus):
        if not e.sequent.fragment <= fragment:
            raise FragmentError(f"corpus entry {k} ({format_sequent(e.sequent)}) is outside "
                                f"[{fragment_name(fragment)}]")
    ops = [c for c in BINARY_OPS if c in fragment]
    for m in range(1, max_size + 1):
        if ops and m ** (m * m) > table_limit:
            raise ResourceLimitError(
                f"size {m} has {m ** (m * m)} tables per binary connective; limit is "
                f"{table_limit}", table_limit)

    survivors = {}
    stats = {}
    for m in range(1, max_size + 1):
        skel = _skeletons(fragment, m)
        chunks = max(1, min(workers, len(skel)))
        jobs = [_Job(fragment, m, corpus, tuple(skel[k::chunks]), combo_limit)
                for k in range(chunks)]
        if chunks == 1:
            results = [_run_skeletons(jobs[0])]
        else:
            with ProcessPoolExecutor(max_workers=chunks) as pool:
                results = list(pool.map(_run_skeletons, jobs))
        rejections: Counter = Counter()
        raw = []
        for rej, surv in results:
            rejections.update(rej)
            raw.extend(surv)
        stats[m] = SizeStats(raw_space_size(fragment, m), len(raw), rejections)
        for code in raw:
            M = _decode(fragment, m, code)
            form = canonical_form(M)
            if form not in survivors:
                survivors[form] = _decode(fragment, m, form)
    ordered = sorted(survivors.items(), key=lambda kv: (kv[1].size, kv[0]))
    return SearchOutcome(fragment, max_size, corpus, [(M, form) for form, M in ordered], stats)
