"""Set-indexed representations built from a pair of functors.

A higher-order structure assigns to every carrier a representation
whose traces and expressions come from applying two functors, with the
satisfaction family right-linear and the order family natural.  Such a
structure acts on functions, lifts along preorders, and lifts along
representations.  The monoid-term built-in lives here; the bounded
regular-expression built-in lives in the kleene module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UnvalidatedError
from .fset import FiniteSet
from .functors import (
    Functor,
    ListFunctor,
    Signature,
    TermFunctor,
    term_var,
    var_list,
)
from .morphism import Morphism, validate_morphism
from .naturality import (
    IndexedRelation,
    ProbeUniverse,
    is_natural_relation,
    linearity_check,
    max_var_count,
    samevars_family,
    varlist_family,
)
from .rel import (
    FuncTable,
    Rel,
    cograph,
    compose,
    equal_verdict,
    is_included,
    is_preorder,
    star,
    under,
    union,
)
from .represent import Representation, validate_representation
from .verdict import LawReport, Verdict

MON_SIG = Signature.of({"mul": 2, "one": 0})


@dataclass
class PreorderedSet:
    carrier: FiniteSet
    order: Rel

    def __post_init__(self):
        assert self.order.src is self.carrier and self.order.tgt is self.carrier
        report = is_preorder(self.order)
        if not report.passed:
            raise ValueError(f"order is not a preorder: {report.first_failure.describe()}")


@dataclass
class HOR:
    """Functor pair plus satisfaction and order families."""

    name: str
    t_functor: Functor
    e_functor: Functor
    models_gen: "callable[[FiniteSet], Rel]" = field(repr=False, default=None)
    leq_gen: "callable[[FiniteSet], Rel]" = field(repr=False, default=None)
    relational: bool = True

    def models_at(self, a: FiniteSet) -> Rel:
        r = self.models_gen(a)
        assert r.src is self.t_functor.carrier(a)
        assert r.tgt is self.e_functor.carrier(a)
        return r

    def leq_at(self, a: FiniteSet) -> Rel:
        r = self.leq_gen(a)
        assert r.src is self.e_functor.carrier(a)
        assert r.tgt is self.e_functor.carrier(a)
        return r

    def models_family(self) -> IndexedRelation:
        return IndexedRelation(
            f"{self.name}-satisfaction", self.t_functor, self.e_functor, self.models_at
        )

    def leq_family(self) -> IndexedRelation:
        return IndexedRelation(
            f"{self.name}-order", self.e_functor, self.e_functor, self.leq_at
        )


def instantiate(h: HOR, a: FiniteSet) -> Representation:
    rep = Representation(
        name=f"{h.name}({a.name})",
        traces=h.t_functor.carrier(a),
        exprs=h.e_functor.carrier(a),
        models=h.models_at(a),
        leq=h.leq_at(a),
    )
    validate_representation(rep)
    return rep


def hor_arrow(h: HOR, f: FuncTable) -> Morphism:
    """Action on a function: rename expressions forward, pull traces back."""
    m = Morphism(
        source=instantiate(h, f.src),
        target=instantiate(h, f.tgt),
        phi=h.e_functor.fmap(f),
        psi=cograph(h.t_functor.fmap(f)),
    )
    validate_morphism(m)
    return m


def _interpretation_sets(rep: Representation) -> list[frozenset]:
    return [frozenset(np.flatnonzero(rep.models.m[:, j])) for j in range(len(rep.exprs))]


def validate_hor(h: HOR, probes: ProbeUniverse) -> LawReport:
    report = LawReport(subject=f"higher-order structure {h.name}")

    bad = None
    count = 0
    for a in probes.carriers():
        rep = instantiate(h, a)
        count += 1
        if not rep.validated:
            inner = validate_representation(rep)
            bad = Verdict(
                "per-set-representations",
                False,
                inner.first_failure.witness,
                note=f"at carrier {a.name}: {inner.first_failure.law}",
            )
            break
    report.add(bad or Verdict("per-set-representations", True, note=f"{count} carriers"))

    rl = linearity_check(h.models_family(), probes, side="right", mode="relations").verdicts[0]
    report.add(Verdict("satisfaction-right-linear", rl.ok, rl.witness, rl.note))

    nat = is_natural_relation(h.leq_family(), probes)
    report.add(Verdict("order-natural", nat.ok, nat.witness, nat.note if not nat.ok else ""))

    # e -> I(e) into subsets of traces must commute with renaming; this is
    # the same statement as right-linearity, so the two verdicts must agree
    bad = None
    for a, b, f in probes.functions():
        ra, rb = instantiate(h, a), instantiate(h, b)
        tf = h.t_functor.fmap(f)
        ef = h.e_functor.fmap(f)
        ia, ib = _interpretation_sets(ra), _interpretation_sets(rb)
        for j in range(len(ra.exprs)):
            image = frozenset(tf.table[t] for t in ia[j])
            if image != ib[ef.table[j]]:
                bad = Verdict(
                    "interpretation-naturality",
                    False,
                    witness=(ra.exprs.elements[j],),
                    note=f"{f.src.name}->{f.tgt.name}",
                )
                break
        if bad:
            break
    report.add(bad or Verdict("interpretation-naturality", True))
    report.add(
        Verdict(
            "interpretation-matches-right-linearity",
            report.verdicts[1].ok == report.verdicts[3].ok,
            note="the two readings of the satisfaction condition must agree",
        )
    )
    report.scope = probes.scope
    return report


def check_relational_hor_conditions(
    t_obj,
    t_rel,
    e_functor: Functor,
    models_gen,
    leq_gen,
    probes: ProbeUniverse,
) -> LawReport:
    """The trace side is supplied as tables: a carrier per probe set and a
    relation per probe function (target traces to source traces).  The
    three conditions characterize which such tables assemble into a
    set-indexed representation."""
    report = LawReport(subject="relational trace-functor conditions")

    def models_at(a):
        r = models_gen(a)
        assert r.src is t_obj(a) and r.tgt is e_functor.carrier(a)
        return r

    bad = None
    for a in probes.carriers():
        leq = leq_gen(a)
        got = equal_verdict(leq, under(leq, leq), "order-self-residual")
        if not got.ok:
            bad = Verdict(got.law, False, got.witness, note=f"at carrier {a.name}")
            break
    report.add(bad or Verdict("order-self-residual", True))

    bad = None
    for a in probes.carriers():
        got = is_included(
            compose(models_at(a), leq_gen(a)), models_at(a), "satisfaction-absorbs-order"
        )
        if not got.ok:
            bad = Verdict(got.law, False, got.witness, note=f"at carrier {a.name}")
            break
    report.add(bad or Verdict("satisfaction-absorbs-order", True))

    bad = None
    for a, b, f in probes.functions():
        try:
            arrow = t_rel(f)
        except KeyError as exc:
            raise ValueError(f"missing trace table for a probe function: {exc}") from exc
        assert arrow.src is t_obj(b) and arrow.tgt is t_obj(a), "trace table off its carriers"
        got = equal_verdict(
            compose(arrow, models_at(a)),
            compose(models_at(b), cograph(e_functor.fmap(f))),
            "arrow-exchange",
        )
        if not got.ok:
            bad = Verdict(got.law, False, got.witness, note=f"{f.src.name}->{f.tgt.name}")
            break
    report.add(bad or Verdict("arrow-exchange", True))
    report.scope = probes.scope
    return report


def hor_trace_tables(h: HOR):
    """Tabulate a structure's own trace side for the conditions check."""
    return h.t_functor.carrier, lambda f: cograph(h.t_functor.fmap(f))


def _require_relational(h: HOR, what: str):
    if not h.relational:
        raise ValueError(f"{what} needs a relational structure with liftings for both functors")


def tilde_lift(h: HOR, p: PreorderedSet) -> Representation:
    """Relax satisfaction along a preorder on the generators."""
    _require_relational(h, "the preorder lift")
    a = p.carrier
    rep = Representation(
        name=f"{h.name}-over-{a.name}",
        traces=h.t_functor.carrier(a),
        exprs=h.e_functor.carrier(a),
        models=compose(h.t_functor.lift(p.order), h.models_at(a)),
        leq=star(union(h.e_functor.lift(p.order), h.leq_at(a))),
    )
    validate_representation(rep)
    return rep


def check_tilde_soundness(h: HOR, p: PreorderedSet) -> LawReport:
    """Validation of the lifted representation plus the two absorption
    inclusions that drive its soundness argument."""
    rep = tilde_lift(h, p)
    report = validate_representation(rep)
    a = p.carrier
    lifted_models = compose(h.t_functor.lift(p.order), h.models_at(a))
    report.add(
        is_included(
            compose(lifted_models, h.e_functor.lift(p.order)),
            lifted_models,
            "absorbs-lifted-order",
        )
    )
    report.add(
        is_included(
            compose(lifted_models, h.leq_at(a)),
            lifted_models,
            "absorbs-base-order",
        )
    )
    return report


def hat_lift(h: HOR, r: Representation) -> Representation:
    """Parametrize by another representation: traces over its traces,
    expressions over its expressions."""
    _require_relational(h, "the representation lift")
    if not r.validated:
        raise UnvalidatedError("lift over an unvalidated representation")
    rep = Representation(
        name=f"{h.name}-over-{r.name}",
        traces=h.t_functor.carrier(r.traces),
        exprs=h.e_functor.carrier(r.exprs),
        models=compose(h.t_functor.lift(r.models), h.models_at(r.exprs)),
        leq=star(union(h.e_functor.lift(r.leq), h.leq_at(r.exprs))),
    )
    validate_representation(rep)
    return rep


def hat_report(h: HOR, r: Representation) -> tuple[Representation, LawReport]:
    """Exactness of the lifted representation is reported as a finding,
    never asserted: lifting does not preserve it in general."""
    rep = hat_lift(h, r)
    report = validate_representation(rep)
    sem = under(rep.models, rep.models)
    missing = np.argwhere(sem.m & ~rep.leq.m)
    if len(missing) == 0:
        note = "exact at this instance"
        witness = None
    else:
        i, j = missing[0]
        note = "not exact at this instance"
        witness = (rep.exprs.elements[i], rep.exprs.elements[j])
    report.add(Verdict("exactness-finding", True, witness, note))
    return rep, report


def hat_exactness_search(h: HOR, sizes=(1, 2), seed: int = 0, tries: int = 20) -> dict:
    """Look for an exact parameter whose lift is inexact.  The report is
    descriptive either way: absence at this bound proves nothing."""
    from .generate import carrier, random_exact_representation

    rng = np.random.default_rng(seed)
    checked = 0
    for nt in sizes:
        for ne in sizes:
            for t in range(tries):
                base_t = carrier(f"t{nt}", nt)
                base_e = carrier(f"e{ne}", ne)
                r = random_exact_representation(rng, base_t, base_e)
                rep, report = hat_report(h, r)
                checked += 1
                finding = report.verdicts[-1]
                if finding.witness is not None:
                    return {
                        "found": True,
                        "checked": checked,
                        "parameter": r,
                        "lifted": rep,
                        "witness": finding.witness,
                    }
    return {"found": False, "checked": checked}


# ----------------------------------------------------------- monoid terms

def mon_hor(depth: int = 3) -> HOR:
    """Lists against monoid terms: a term satisfies exactly the list of
    its variables read left to right."""
    ell = varlist_family(MON_SIG, depth)
    eq = samevars_family(MON_SIG, depth)
    return HOR(
        name=f"mon(depth {depth})",
        t_functor=ListFunctor(max_var_count(MON_SIG, depth)),
        e_functor=TermFunctor(MON_SIG, depth),
        models_gen=lambda a: cograph(ell.func_at(a)),
        leq_gen=eq.rel_at,
    )


def eq_mon(term_carrier: FiniteSet, u: str, v: str) -> bool:
    """Monoid equality decided by the flattening normal form."""
    tu = term_carrier.payload[term_carrier.index(u)]
    tv = term_carrier.payload[term_carrier.index(v)]
    return var_list(tu) == var_list(tv)


def mon_congruence_closure(term_carrier: FiniteSet) -> Rel:
    """Independent oracle: the least congruence containing associativity
    and the unit laws, closed inside the bounded carrier."""
    terms = term_carrier.payload
    index = {t: i for i, t in enumerate(terms)}
    parent = list(range(len(terms)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def join(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri
            return True
        return False

    from .functors import term_node

    changed = True
    for t in terms:
        if t.op == "mul":
            u, v = t.children
            # unit laws
            if v.op == "one":
                join(index[t], index[u])
            if u.op == "one":
                join(index[t], index[v])
            # associativity, when the rebracketing stays in the carrier
            if v.op == "mul":
                v1, v2 = v.children
                other = term_node("mul", (term_node("mul", (u, v1)), v2))
                if other in index:
                    join(index[t], index[other])
    muls = [(i, index[t.children[0]], index[t.children[1]]) for i, t in enumerate(terms) if t.op == "mul"]
    while changed:
        changed = False
        for i, ui, vi in muls:
            for j, uj, vj in muls:
                if find(ui) == find(uj) and find(vi) == find(vj) and join(i, j):
                    changed = True
    roots = np.array([find(i) for i in range(len(terms))])
    return Rel(term_carrier, term_carrier, roots[:, None] == roots[None, :])


def tilde_mon_rule_check(p: PreorderedSet, depth: int = 2) -> LawReport:
    """The lifted order recomputed from its three inference rules
    (congruence step, monoid equality step, generator step) must equal
    the star-of-union form produced by the preorder lift."""
    h = mon_hor(depth)
    lifted = tilde_lift(h, p).leq
    term_carrier = h.e_functor.carrier(p.carrier)
    terms = term_carrier.payload
    index = {t: i for i, t in enumerate(terms)}

    m = samevars_family(MON_SIG, depth).rel_at(p.carrier).m.copy()
    for i in range(len(p.carrier)):
        for j in range(len(p.carrier)):
            if p.order.m[i, j]:
                m[index[term_var(i)], index[term_var(j)]] = True

    muls = [i for i, t in enumerate(terms) if t.op == "mul"]
    lefts = np.array([index[terms[i].children[0]] for i in muls], dtype=np.int64)
    rights = np.array([index[terms[i].children[1]] for i in muls], dtype=np.int64)
    mul_ix = np.array(muls, dtype=np.int64)
    while True:
        before = m.copy()
        m |= m @ m
        if len(muls):
            cong = m[np.ix_(lefts, lefts)] & m[np.ix_(rights, rights)]
            m[np.ix_(mul_ix, mul_ix)] |= cong
        if (m == before).all():
            break

    report = LawReport(subject=f"rule closure for the lifted monoid order over {p.carrier.name}")
    report.add(
        equal_verdict(Rel(term_carrier, term_carrier, m), lifted, "rule-closure-matches-lifted-order")
    )
    return report
