"""Reductions between representations and syntactic closures.

A reduction carries a forward expression translation, a backward one, and
a backward trace relation.  Its four laws make the target a faithful
shadow of the source: translating an expression there and back lands in
the same order-equivalence class.  Exactness then transfers backwards
along any valid reduction; that transfer is this module's load-bearing
theorem and failures of it raise an inconsistency alarm rather than an
ordinary violation verdict.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CarrierMismatch, TheoremInconsistencyError, UnvalidatedError
from .rel import (
    FuncTable,
    Rel,
    cograph,
    compose,
    compose_func,
    converse,
    equal_verdict,
    graph,
    is_included,
)
from .represent import (
    Representation,
    interpret,
    is_exact,
    trivial_representation,
    validate_representation,
)
from .verdict import LawReport, Verdict


@dataclass(eq=False)
class Reduction:
    source: Representation
    target: Representation
    phi: FuncTable  # source exprs -> target exprs
    tau: FuncTable  # target exprs -> source exprs
    psi: Rel  # target traces ⇸ source traces
    validated: bool = False

    def __post_init__(self):
        if self.phi.src is not self.source.exprs or self.phi.tgt is not self.target.exprs:
            raise CarrierMismatch("forward translation must go source exprs -> target exprs")
        if self.tau.src is not self.target.exprs or self.tau.tgt is not self.source.exprs:
            raise CarrierMismatch("backward translation must go target exprs -> source exprs")
        if self.psi.src is not self.target.traces or self.psi.tgt is not self.source.traces:
            raise CarrierMismatch("trace relation must go target traces -> source traces")


def validate_reduction(r: Reduction) -> LawReport:
    report = LawReport(
        subject=f"reduction {r.source.name!r} -> {r.target.name!r}"
    )
    report.add(
        is_included(
            compose(cograph(r.tau), r.target.leq),
            compose(r.source.leq, cograph(r.tau)),
            "tau-monotone",
        )
    )
    report.add(
        equal_verdict(
            compose(r.target.models, cograph(r.phi)),
            compose(r.psi, r.source.models),
            "models-transport",
        )
    )
    report.add(
        is_included(
            compose(cograph(r.tau), cograph(r.phi)),
            r.source.leq,
            "roundtrip-up",
        )
    )
    report.add(
        is_included(
            compose(graph(r.phi), graph(r.tau)),
            r.source.leq,
            "roundtrip-down",
        )
    )
    r.validated = report.passed
    return report


def identity_reduction(rep: Representation) -> Reduction:
    return Reduction(
        rep,
        rep,
        FuncTable.identity(rep.exprs),
        FuncTable.identity(rep.exprs),
        Rel.identity(rep.traces),
        validated=True,
    )


def compose_reductions(r: Reduction, r2: Reduction) -> Reduction:
    """Diagrammatic order: r first, then r2."""
    from .represent import same_representation

    if not same_representation(r.target, r2.source):
        raise CarrierMismatch("reductions do not chain")
    return Reduction(
        r.source,
        r2.target,
        compose_func(r2.phi, r.phi),
        compose_func(r.tau, r2.tau),
        compose(r2.psi, r.psi),
        validated=r.validated and r2.validated,
    )


def self_reduction(rep: Representation):
    """Identity-shaped reduction onto the trivial representation of its
    own satisfaction.  Validates exactly when `rep` is exact; the report
    pinpoints the failing law otherwise."""
    target = trivial_representation(rep.models)
    red = Reduction(
        rep,
        target,
        FuncTable.identity(rep.exprs),
        FuncTable.identity(rep.exprs),
        Rel.identity(rep.traces),
    )
    return red, validate_reduction(red)


def _setwise_exactness(rep: Representation) -> Verdict:
    # second route: compare satisfying-trace sets directly, no residual
    for i, e in enumerate(rep.exprs.elements):
        ie = set(interpret(rep, e))
        for j, f in enumerate(rep.exprs.elements):
            if ie <= set(interpret(rep, f)) and not rep.leq.m[i, j]:
                return Verdict("exactness-setwise-route", False, witness=(e, f))
    return Verdict("exactness-setwise-route", True)


def transfer_exactness(r: Reduction) -> LawReport:
    """Exactness of the target forces exactness of the source; checked by
    two independent routes that must also agree with each other."""
    if not r.validated:
        raise UnvalidatedError("reduction is not validated")
    if not r.target.validated:
        validate_representation(r.target)
    if not r.target.validated:
        raise ValueError("target representation fails validation")
    if not is_exact(r.target).ok:
        raise ValueError("target representation is not exact")
    if not r.source.validated:
        validate_representation(r.source)
    if not r.source.validated:
        raise ValueError("source representation fails validation")

    residual = is_exact(r.source)
    residual = Verdict("exactness-residual-route", residual.ok, residual.witness)
    setwise = _setwise_exactness(r.source)
    report = LawReport(subject=f"exactness transfer onto {r.source.name!r}")
    report.add(residual)
    report.add(setwise)
    if residual.ok != setwise.ok:
        raise TheoremInconsistencyError(
            "the two exactness routes disagree:\n" + report.describe()
        )
    if not residual.ok:
        raise TheoremInconsistencyError(
            "valid reduction onto an exact target, yet the source is not exact:\n"
            + report.describe()
        )
    return report


def validate_syntactic_closure(
    r1: Representation, r2: Representation, down: FuncTable
) -> LawReport:
    """A closure maps each expression to one that the finer satisfaction
    already covers, without leaving its order-equivalence class."""
    if r1.traces is not r2.traces or r1.exprs is not r2.exprs:
        raise CarrierMismatch("closure needs representations over shared carriers")
    if down.src is not r1.exprs or down.tgt is not r1.exprs:
        raise CarrierMismatch("closure map must be square on the expression carrier")
    report = LawReport(subject=f"closure {r1.name!r} / {r2.name!r}")
    report.add(
        is_included(
            r1.models,
            compose(r2.models, cograph(down)),
            "closure-covers-satisfaction",
        )
    )
    report.add(is_included(cograph(down), r1.leq, "closure-within-order"))
    return report


@dataclass(eq=False)
class ClosureHypotheses:
    """Side conditions under which the closure and reduction readings of a
    map necessarily agree."""

    r1: Representation
    r2: Representation

    def __post_init__(self):
        if self.r1.traces is not self.r2.traces or self.r1.exprs is not self.r2.exprs:
            raise CarrierMismatch("hypotheses compare representations over shared carriers")

    def check(self) -> LawReport:
        report = LawReport(subject="closure hypotheses")
        report.add(
            is_included(self.r2.leq, self.r1.leq, "order-hypothesis")
        )
        report.add(
            is_included(self.r2.models, self.r1.models, "satisfaction-hypothesis")
        )
        if not self.r2.validated:
            validate_representation(self.r2)
        exact = (
            is_exact(self.r2) if self.r2.validated else Verdict("exactness", False)
        )
        report.add(Verdict("target-exact-hypothesis", exact.ok, exact.witness))
        return report


def closure_reduction_equivalence(
    r1: Representation, r2: Representation, down: FuncTable
) -> LawReport:
    """Under the hypotheses, the two readings of `down` stand or fall
    together; without them, only the two verdicts are reported."""
    hyp = ClosureHypotheses(r1, r2).check()
    red = Reduction(
        r1,
        r2,
        down,
        FuncTable.identity(r1.exprs),
        Rel.identity(r1.traces),
    )
    as_reduction = validate_reduction(red).passed
    as_closure = validate_syntactic_closure(r1, r2, down).passed
    report = LawReport(subject="closure/reduction equivalence")
    report.extend(hyp)
    report.scope = (
        f"reduction route {'valid' if as_reduction else 'invalid'}, "
        f"closure route {'valid' if as_closure else 'invalid'}"
    )
    if hyp.passed:
        report.add(
            Verdict(
                "routes-agree",
                as_reduction == as_closure,
                note=report.scope,
            )
        )
    return report


def reduction_morphism_candidates(r: Reduction) -> LawReport:
    """Which of the two arrows hiding in a reduction are morphisms.

    When both representations are exact the forward pair must be one;
    that being a theorem, its failure raises the inconsistency alarm.
    """
    if not r.validated:
        raise UnvalidatedError("reduction is not validated")
    from .morphism import Morphism, validate_morphism

    forward = validate_morphism(Morphism(r.source, r.target, r.phi, r.psi))
    backward = validate_morphism(
        Morphism(r.target, r.source, r.tau, converse(r.psi))
    )
    report = LawReport(subject="morphism candidates of a reduction")
    for v in forward.verdicts:
        report.add(Verdict(f"forward-{v.law}", v.ok, v.witness, v.note))
    for v in backward.verdicts:
        report.add(Verdict(f"backward-{v.law}", v.ok, v.witness, v.note))
    for rep in (r.source, r.target):
        if not rep.validated:
            validate_representation(rep)
    if r.source.validated and r.target.validated:
        if is_exact(r.source).ok and is_exact(r.target).ok:
            if not forward.passed:
                raise TheoremInconsistencyError(
                    "both representations exact, yet the forward pair is not a morphism:\n"
                    + report.describe()
                )
            report.add(
                Verdict(
                    "exact-exact-forward-morphism",
                    True,
                    note="both representations exact; forward pair confirmed",
                )
            )
    return report
