"""Representations: a trace carrier, an expression carrier, a satisfaction
relation between them, and a preorder on expressions.

A representation is *sound* when enlarging an expression along the preorder
never loses a satisfying trace, and *exact* when the preorder captures all
of semantic containment.  Soundness is part of validation; exactness is a
separate verdict because many useful representations are sound but inexact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CarrierMismatch, UnvalidatedError
from .fset import FiniteSet, powerset_of
from .rel import (
    FuncTable,
    Rel,
    cograph,
    compose,
    equal_verdict,
    graph,
    is_included,
    is_preorder,
    membership_rel,
    over,
    under,
)
from .verdict import LawReport, Verdict


@dataclass(eq=False)
class Representation:
    name: str
    traces: FiniteSet
    exprs: FiniteSet
    models: Rel  # traces ⇸ exprs
    leq: Rel  # square on exprs
    validated: bool = False

    def __post_init__(self):
        if self.models.src is not self.traces or self.models.tgt is not self.exprs:
            raise CarrierMismatch(
                f"satisfaction of {self.name!r} must go traces -> exprs"
            )
        if self.leq.src is not self.exprs or self.leq.tgt is not self.exprs:
            raise CarrierMismatch(f"order of {self.name!r} must be square on exprs")


def same_representation(r1: Representation, r2: Representation) -> bool:
    """Value-level sameness: identical carriers, equal relations.

    Distinct wrapper objects over the same data count as the same
    representation; construction helpers build fresh wrappers freely.
    """
    return (
        r1.traces is r2.traces
        and r1.exprs is r2.exprs
        and r1.models == r2.models
        and r1.leq == r2.leq
    )


@dataclass(eq=False)
class SpecTheory:
    """Characteristic-expression form: one expression per trace, plus an order."""

    traces: FiniteSet
    exprs: FiniteSet
    chi: FuncTable  # traces -> exprs
    leq: Rel

    def __post_init__(self):
        if self.chi.src is not self.traces or self.chi.tgt is not self.exprs:
            raise CarrierMismatch("characteristic map must go traces -> exprs")
        if self.leq.src is not self.exprs or self.leq.tgt is not self.exprs:
            raise CarrierMismatch("order must be square on exprs")


def validate_representation(rep: Representation) -> LawReport:
    """Preorder and soundness axioms; stamps the flag with the outcome."""
    report = LawReport(subject=f"representation {rep.name!r}")
    report.extend(is_preorder(rep.leq))
    sound = is_included(compose(rep.models, rep.leq), rep.models, "soundness")
    if not sound.ok:
        t, e = sound.witness
        ti = rep.traces.index(t)
        ei = rep.exprs.index(e)
        row = rep.models.m[ti] & rep.leq.m[:, ei]
        mid = rep.exprs.elements[int(np.argmax(row))]
        sound = Verdict(
            "soundness",
            False,
            witness=(t, e),
            note=f"via link ({mid}, {e})",
        )
    report.add(sound)
    rep.validated = report.passed
    return report


def semantic_containment(rep: Representation) -> Rel:
    """Expressions ordered by inclusion of their satisfying-trace sets."""
    return under(rep.models, rep.models)


def trace_preorder(rep: Representation) -> Rel:
    """(s, t) present iff every expression satisfied by t is satisfied by s."""
    return over(rep.models, rep.models)


def is_exact(rep: Representation) -> Verdict:
    if not rep.validated:
        raise UnvalidatedError(f"representation {rep.name!r} has not been validated")
    return is_included(semantic_containment(rep), rep.leq, "exactness")


def interpret(rep: Representation, e: str) -> tuple[str, ...]:
    """Satisfying traces of one expression, in trace-carrier order."""
    col = rep.models.m[:, rep.exprs.index(e)]
    return tuple(t for i, t in enumerate(rep.traces.elements) if col[i])


def check_interpretation_identity(rep: Representation, cap: int = 4) -> Verdict:
    """Satisfaction must factor through membership in the interpretation table."""
    p = powerset_of(rep.traces, cap)
    mask_index = {mask: i for i, mask in enumerate(p.payload)}
    table = []
    for j in range(len(rep.exprs)):
        mask = 0
        for i in np.flatnonzero(rep.models.m[:, j]):
            mask |= 1 << int(i)
        table.append(mask_index[mask])
    interp = FuncTable(rep.exprs, p, table)
    lhs = compose(membership_rel(rep.traces, cap), cograph(interp))
    return equal_verdict(lhs, rep.models, "interpretation-identity")


def trivial_representation(x: Rel, name: str | None = None) -> Representation:
    """Expressions ordered by the self-residual of the given satisfaction."""
    if name is None:
        name = f"trivial({x.src.name}|{x.tgt.name})"
    return Representation(name, x.src, x.tgt, x, under(x, x), validated=True)


def membership_representation(a: FiniteSet, cap: int = 4) -> Representation:
    """Subsets as expressions, ordered by subset inclusion (mask route)."""
    p = powerset_of(a, cap)
    n = len(p)
    m = np.zeros((n, n), dtype=bool)
    for i, x in enumerate(p.payload):
        for j, y in enumerate(p.payload):
            m[i, j] = (x & ~y) == 0
    return Representation(
        f"membership({a.name})",
        a,
        p,
        membership_rel(a, cap),
        Rel(p, p, m),
        validated=True,
    )


def spec_theory_to_representation(s: SpecTheory) -> Representation:
    """Each trace satisfies everything above its characteristic expression."""
    order = is_preorder(s.leq)
    if not order.passed:
        bad = order.first_failure
        raise ValueError(f"order is not a preorder: {bad.describe()}")
    models = compose(graph(s.chi), s.leq)
    return Representation(
        f"spec({s.traces.name}|{s.exprs.name})",
        s.traces,
        s.exprs,
        models,
        s.leq,
        validated=True,
    )
