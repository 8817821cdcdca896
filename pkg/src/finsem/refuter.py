"""Per-matrix refutations of "this finite matrix characterises the fragment"
for fragments containing implication, or containing disjunction and negation.

For a matrix with n elements, take the pigeonhole formula alpha_n over
n+1 letters. Either the matrix validates alpha_n, which is not an
intuitionistic theorem (completeness fails), or some valuation falsifies
it. That valuation gives two letters the same value. Identifying them
yields a theorem beta with the same value, so soundness fails.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .deciders import classical_consequence
from .errors import FragmentError, InvariantError
from .formula import IMPLIES, NOT, OR, Formula, Not, Or, Var, alpha_pairs, gen_alpha, substitute, to_text
from .matrix import Matrix, evaluate, is_valid, make_chain, make_two, validate_matrix
from .oracle import Prover, prove_ipc
from .sequent import Sequent, Verdict

COMPLETENESS = "completeness-violation"
SOUNDNESS = "soundness-violation"
ORACLE_MANDATORY_UP_TO = 3

_REQUIRED = {"arrow": frozenset({IMPLIES}), "orneg": frozenset({OR, NOT})}


class ChainCountermodel(NamedTuple):
    matrix: Matrix
    valuation: dict
    value: int  # element index; the element's name is str(value + 1)


def chain_countermodel_report(n: int) -> ChainCountermodel:
    """alpha_n (arrow) in the (n+1)-chain under p_i -> i; the value is element n."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    M = make_chain(n + 1, {IMPLIES})
    w = {i: i - 1 for i in range(1, n + 2)}
    value = evaluate(M, w, gen_alpha("arrow", n))
    if M.names[value] != str(n):
        raise InvariantError(f"alpha_{n} took value {M.names[value]} in the {n + 1}-chain, expected {n}")
    return ChainCountermodel(M, w, value)


def _valuation_text(M: Matrix, v) -> str:
    return ",".join(f"p{i}={M.names[v[i]]}" for i in sorted(v))


def _proved(f: Formula, prover: Prover | None) -> bool:
    return prove_ipc(Sequent((), f), prover=prover).derivable


@dataclass
class RefutationReport:
    variant: str
    n: int
    matrix: Matrix
    alpha: Formula
    mode: str
    witness_formula: Formula
    witness_valuation: dict | None = None
    identified_pair: tuple[int, int] | None = None
    chain_countermodel: ChainCountermodel | None = None
    classical_falsifications: list[tuple[Formula, dict]] = field(default_factory=list)
    oracle_confirmation: Verdict | None = None

    def replay(self, prover: Prover | None = None) -> None:
        """Re-check the evidence from scratch; the prover is re-run if it was used."""
        M = self.matrix
        if self.mode == COMPLETENESS:
            if not is_valid(M, self.alpha).holds:
                raise InvariantError("alpha is not valid in the matrix")
            if self.oracle_confirmation is not None and _proved(self.alpha, prover):
                raise InvariantError("the prover derives alpha")
            if self.chain_countermodel is not None:
                C, w, value = self.chain_countermodel
                if value in C.designated or evaluate(C, w, self.alpha) != value:
                    raise InvariantError("chain countermodel does not replay")
            two = make_two()
            for disjunct, v in self.classical_falsifications:
                if evaluate(two, v, disjunct) in two.designated:
                    raise InvariantError(f"{disjunct} is not falsified by {v}")
        elif self.mode == SOUNDNESS:
            w = self.witness_valuation
            i, j = self.identified_pair
            if w[i] != w[j]:
                raise InvariantError("identified letters take different values")
            expected = substitute(self.alpha, Var(i), Var(j))
            if expected != self.witness_formula:
                raise InvariantError("witness formula is not the identified instance of alpha")
            value = evaluate(M, w, self.witness_formula)
            if value != evaluate(M, w, self.alpha) or value in M.designated:
                raise InvariantError("witness formula is designated or differs from alpha")
            if self.oracle_confirmation is not None and not _proved(self.witness_formula, prover):
                raise InvariantError("the prover does not derive the witness formula")
        else:
            raise InvariantError(f"unknown mode {self.mode!r}")

    def porcelain(self) -> str:
        M = self.matrix
        lines = [
            f"variant: {self.variant}",
            f"n: {self.n}",
            f"matrix: {M.label or M.size}",
            f"mode: {self.mode}",
            f"alpha: {to_text(self.alpha)}",
            f"witness_formula: {to_text(self.witness_formula)}",
        ]
        if self.witness_valuation is not None:
            lines.append(f"witness_valuation: {_valuation_text(M, self.witness_valuation)}")
            lines.append(f"witness_value: {M.names[evaluate(M, self.witness_valuation, self.witness_formula)]}")
        if self.identified_pair is not None:
            lines.append("identified_pair: {},{}".format(*self.identified_pair))
        if self.chain_countermodel is not None:
            C, w, value = self.chain_countermodel
            lines.append(f"chain_size: {C.size}")
            lines.append(f"chain_valuation: {_valuation_text(C, w)}")
            lines.append(f"chain_value: {C.names[value]}")
        for disjunct, v in self.classical_falsifications:
            two = ",".join(f"p{i}={v[i]}" for i in sorted(v))
            lines.append(f"classical_falsification: {to_text(disjunct)} :: {two}")
        oracle = self.oracle_confirmation.outcome if self.oracle_confirmation else "skipped"
        lines.append(f"oracle: {oracle}")
        return "\n".join(lines)

    def text(self) -> str:
        M = self.matrix
        name = M.label or f"{M.size}-element matrix"
        out = [f"Refutation of {name} as a characteristic matrix ({self.variant} family, n = {self.n})",
               f"  alpha_{self.n} = {to_text(self.alpha)}"]
        if self.mode == COMPLETENESS:
            out.append(f"  {name} validates alpha_{self.n}, but alpha_{self.n} is not a theorem.")
            if self.chain_countermodel is not None:
                C, w, value = self.chain_countermodel
                out.append(f"  In the {C.size}-chain under {_valuation_text(C, w)} it takes value "
                           f"{C.names[value]}, below the top {C.names[-1]}.")
            for disjunct, v in self.classical_falsifications:
                two = ",".join(f"p{i}={v[i]}" for i in sorted(v))
                out.append(f"  {to_text(disjunct)} is classically false at {two}.")
        else:
            i, j = self.identified_pair
            w = self.witness_valuation
            out.append(f"  {name} falsifies alpha_{self.n} at {_valuation_text(M, w)}.")
            out.append(f"  p{i} and p{j} share a value, so identifying them gives the theorem")
            out.append(f"    beta = {to_text(self.witness_formula)}")
            out.append(f"  which also takes the undesignated value "
                       f"{M.names[evaluate(M, w, self.witness_formula)]}.")
        oracle = self.oracle_confirmation.outcome if self.oracle_confirmation else "skipped"
        out.append(f"  Prover check on {'alpha' if self.mode == COMPLETENESS else 'beta'}: {oracle}")
        out.append(f"  Verdict: {self.mode}")
        return "\n".join(out)


def refute_matrix(M: Matrix, variant: str, use_oracle: bool = True,
                  prover: Prover | None = None) -> RefutationReport:
    """Refute ``M`` as a characteristic matrix of any fragment containing the
    connectives of ``variant``.

    The prover check is always run for n <= 3; ``use_oracle=False`` only
    skips it for larger matrices.
    """
    if variant not in _REQUIRED:
        raise ValueError(f"unknown variant {variant!r} (expected 'arrow' or 'orneg')")
    validate_matrix(M)
    missing = _REQUIRED[variant] - M.fragment
    if missing:
        raise FragmentError(f"variant {variant!r} needs tables for "
                            + ",".join(sorted(c.value for c in missing)))
    n = M.size
    alpha = gen_alpha(variant, n)
    run_oracle = use_oracle or n <= ORACLE_MANDATORY_UP_TO
    prover = prover or Prover()
    verdict = is_valid(M, alpha)

    if verdict.holds:
        report = RefutationReport(variant, n, M, alpha, COMPLETENESS, alpha)
        if run_oracle:
            report.oracle_confirmation = prove_ipc(Sequent((), alpha), prover=prover)
            if report.oracle_confirmation.derivable:
                raise InvariantError(f"alpha_{n} ({variant}) was proved; it must not be a theorem")
        if variant == "arrow":
            report.chain_countermodel = chain_countermodel_report(n)
        else:
            for i, j in alpha_pairs(n):
                disjunct = Not(Not(Or(Not(Var(i)), Var(j))))
                c = classical_consequence(Sequent((), disjunct))
                if c.holds:
                    raise InvariantError(f"{disjunct} is classically valid")
                report.classical_falsifications.append((disjunct, dict(c.witness)))
        return report

    w = dict(verdict.witness)
    pair = next(((i, j) for i in range(1, n + 2) for j in range(i + 1, n + 2)
                 if w[i] == w[j]), None)
    if pair is None:
        raise InvariantError(f"no two of the {n + 1} letters share a value among {n} elements")
    i, j = pair
    beta = substitute(alpha, Var(i), Var(j))
    value = evaluate(M, w, beta)
    if value != evaluate(M, w, alpha) or value in M.designated:
        raise InvariantError("identified instance does not keep alpha's undesignated value")
    report = RefutationReport(variant, n, M, alpha, SOUNDNESS, beta, w, pair)
    if run_oracle:
        report.oracle_confirmation = prove_ipc(Sequent((), beta), prover=prover)
        if not report.oracle_confirmation.derivable:
            raise InvariantError(f"identified instance {to_text(beta)} was not proved")
    return report
