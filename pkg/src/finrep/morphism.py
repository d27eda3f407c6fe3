"""Morphisms between representations, and the binary product.

A morphism carries a forward expression translation (a function) and a
backward trace relation.  The two laws: the translation preserves the
order, and satisfaction in the target factors through the trace relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CarrierMismatch, UnvalidatedError
from .rel import (
    FuncTable,
    Rel,
    cograph,
    compose,
    compose_func,
    equal_verdict,
    graph,
    inter,
    is_included,
    product_set,
    sum_set,
    union,
)
from .represent import Representation, same_representation
from .verdict import LawReport, Verdict


@dataclass(eq=False)
class Morphism:
    source: Representation
    target: Representation
    phi: FuncTable  # source.exprs -> target.exprs
    psi: Rel  # target.traces ⇸ source.traces
    validated: bool = False

    def __post_init__(self):
        if self.phi.src is not self.source.exprs or self.phi.tgt is not self.target.exprs:
            raise CarrierMismatch("translation must go source exprs -> target exprs")
        if self.psi.src is not self.target.traces or self.psi.tgt is not self.source.traces:
            raise CarrierMismatch("trace relation must go target traces -> source traces")


def validate_morphism(m: Morphism) -> LawReport:
    report = LawReport(
        subject=f"morphism {m.source.name!r} -> {m.target.name!r}"
    )
    report.add(
        is_included(
            compose(cograph(m.phi), m.source.leq),
            compose(m.target.leq, cograph(m.phi)),
            "order-preservation",
        )
    )
    report.add(
        equal_verdict(
            compose(m.target.models, cograph(m.phi)),
            compose(m.psi, m.source.models),
            "models-transport",
        )
    )
    m.validated = report.passed
    return report


def identity_morphism(r: Representation) -> Morphism:
    return Morphism(r, r, FuncTable.identity(r.exprs), Rel.identity(r.traces), validated=True)


def compose_morphisms(m: Morphism, m2: Morphism) -> Morphism:
    """Diagrammatic order: m first, then m2."""
    if not same_representation(m.target, m2.source):
        raise CarrierMismatch("morphisms do not chain")
    return Morphism(
        m.source,
        m2.target,
        compose_func(m2.phi, m.phi),
        compose(m2.psi, m.psi),
        validated=m.validated and m2.validated,
    )


def morphisms_equal(m: Morphism, m2: Morphism) -> bool:
    return (
        same_representation(m.source, m2.source)
        and same_representation(m.target, m2.target)
        and np.array_equal(m.phi.table, m2.phi.table)
        and m.psi == m2.psi
    )


def product(r1: Representation, r2: Representation):
    """Product representation with its two projection morphisms.

    Traces are the tagged union, expressions the pair carrier; a tagged
    trace satisfies a pair through its own component, and pairs are ordered
    componentwise.
    """
    if not (r1.validated and r2.validated):
        raise UnvalidatedError("product needs validated factors")
    t, i1, i2 = sum_set(r1.traces, r2.traces)
    e, pr1, pr2 = product_set(r1.exprs, r2.exprs)
    models = union(
        compose(cograph(i1), compose(r1.models, cograph(pr1))),
        compose(cograph(i2), compose(r2.models, cograph(pr2))),
    )
    leq = inter(
        compose(graph(pr1), compose(r1.leq, cograph(pr1))),
        compose(graph(pr2), compose(r2.leq, cograph(pr2))),
    )
    rp = Representation(f"({r1.name} x {r2.name})", t, e, models, leq, validated=True)
    p1 = Morphism(rp, r1, pr1, graph(i1), validated=True)
    p2 = Morphism(rp, r2, pr2, graph(i2), validated=True)
    return rp, p1, p2


def pairing(f1: Morphism, f2: Morphism, rp: Representation) -> Morphism:
    """The canonical mediating morphism into the product carrier rp."""
    r = f1.source
    n2 = len(f2.target.exprs)
    table = f1.phi.table * n2 + f2.phi.table
    t, i1, i2 = sum_set(f1.target.traces, f2.target.traces)
    psi = union(compose(cograph(i1), f1.psi), compose(cograph(i2), f2.psi))
    return Morphism(r, rp, FuncTable(r.exprs, rp.exprs, table), psi)


def product_universal(
    r: Representation,
    f1: Morphism,
    f2: Morphism,
    budget: int = 10**6,
    candidates: tuple[Morphism, ...] = (),
):
    """Mediating morphism plus a uniqueness report.

    Below the budget the whole morphism space into the product is searched;
    above it, only the supplied candidates are checked against the product
    equations.
    """
    if f1.source is not r or f2.source is not r:
        raise CarrierMismatch("both arrows must start at the given representation")
    if not (f1.validated and f2.validated):
        raise UnvalidatedError("universal property needs validated arrows")
    rp, p1, p2 = product(f1.target, f2.target)
    g = pairing(f1, f2, rp)
    report = LawReport(subject=f"universal property at {r.name!r}")
    report.extend(validate_morphism(g))
    report.add(
        Verdict(
            "factor-first",
            morphisms_equal(compose_morphisms(g, p1), f1),
        )
    )
    report.add(
        Verdict(
            "factor-second",
            morphisms_equal(compose_morphisms(g, p2), f2),
        )
    )

    cells = len(rp.traces) * len(r.traces)
    phi_count = len(rp.exprs) ** len(r.exprs)
    psi_count = 1 << cells if cells < 64 else budget + 1
    total = phi_count * psi_count
    if total <= budget:
        matches = 0
        for table in itertools.product(range(len(rp.exprs)), repeat=len(r.exprs)):
            phi = FuncTable(r.exprs, rp.exprs, table)
            for mask in range(psi_count):
                m = np.zeros(cells, dtype=bool)
                rest, i = mask, 0
                while rest:
                    if rest & 1:
                        m[i] = True
                    rest >>= 1
                    i += 1
                psi = Rel(rp.traces, r.traces, m.reshape(len(rp.traces), len(r.traces)))
                cand = Morphism(r, rp, phi, psi)
                if not validate_morphism(cand).passed:
                    continue
                if not morphisms_equal(compose_morphisms(cand, p1), f1):
                    continue
                if not morphisms_equal(compose_morphisms(cand, p2), f2):
                    continue
                matches += 1
                if not morphisms_equal(cand, g):
                    report.add(
                        Verdict(
                            "uniqueness",
                            False,
                            note="a different mediating morphism satisfies both equations",
                        )
                    )
                    return g, report
        report.add(
            Verdict(
                "uniqueness",
                matches == 1,
                note=f"searched {total} candidates, {matches} satisfied the equations",
            )
        )
    else:
        refuted = None
        for cand in candidates:
            fits = (
                validate_morphism(cand).passed
                and morphisms_equal(compose_morphisms(cand, p1), f1)
                and morphisms_equal(compose_morphisms(cand, p2), f2)
            )
            if fits and not morphisms_equal(cand, g):
                refuted = cand
        report.add(
            Verdict(
                "uniqueness",
                refuted is None,
                note=(
                    f"space of {total} candidates over budget {budget}; "
                    f"refutation-only over {len(candidates)} supplied"
                ),
            )
        )
    return g, report
