import re as re_mod

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finrep.errors import BudgetError
from finrep.fset import FiniteSet
from finrep.hor import hor_arrow, instantiate, validate_hor
from finrep.kleene import (
    RegexFunctor,
    axiomatic_leq,
    bounded_language,
    generate_axiom_instances,
    ka_completeness_report,
    ka_hor,
    ka_semantic_exactness,
    language_table,
    models_matrix,
    re_cat,
    re_eps,
    re_letter,
    re_plus,
    re_star,
    re_zero,
    regex_label,
    semantic_leq,
    word_carrier,
)
from finrep.naturality import ProbeUniverse, check_functor_laws, probe_carrier
from finrep.rel import FuncTable, graph, under
from finrep.represent import is_exact, validate_representation

AB = FiniteSet("ab", ["a", "b"])


def test_carrier_counts_and_order():
    # cumulative counts over a 2-letter alphabet, one new size per cap
    for cap, want in [(1, 4), (2, 8), (3, 44), (4, 144), (5, 852), (6, 3736), (7, 22140)]:
        assert len(RegexFunctor(cap).carrier(AB)) == want
    c = RegexFunctor(2).carrier(AB)
    assert c.elements == ("a", "b", "0", "1", "a*", "b*", "0*", "1*")
    one = FiniteSet("one-letter", ["a"])
    assert len(RegexFunctor(1).carrier(one)) == 3


def test_carrier_interned_and_size_closed():
    c = RegexFunctor(3).carrier(AB)
    assert RegexFunctor(3).carrier(AB) is c
    assert RegexFunctor(4).carrier(AB) is not c
    for e in c.payload:
        assert e.size <= 3
        for child in e.children:
            assert child in c.payload


def test_label_fencing():
    weird = FiniteSet("weird", ["x", "a+b"])
    c = RegexFunctor(2).carrier(weird)
    assert "<a+b>" in c.elements
    assert "<a+b>*" in c.elements
    assert regex_label(re_plus(re_letter(0), re_letter(1)), weird) == "(x+<a+b>)"


def test_budget_guard():
    with pytest.raises(BudgetError):
        RegexFunctor(9).carrier(AB)
    with pytest.raises(BudgetError):
        language_table(AB, 2, 6)


def test_bounded_language_examples():
    assert bounded_language(AB, "(a+b)", 2) == {"[a]", "[b]"}
    assert bounded_language(AB, "a*", 3) == {"[]", "[a]", "[a,a]", "[a,a,a]"}
    assert bounded_language(AB, "(a.b)*", 3) == {"[]", "[a,b]"}
    assert bounded_language(AB, "0", 3) == frozenset()
    assert bounded_language(AB, "1", 3) == {"[]"}
    assert bounded_language(AB, re_cat(re_letter(0), re_letter(1)), 3) == {"[a,b]"}


def _python_regex(e):
    if e.kind == "letter":
        return re_mod.escape("ab"[e.letter])
    if e.kind == "zero":
        return "(?!)"
    if e.kind == "eps":
        return "(?:)"
    if e.kind == "plus":
        return f"(?:{_python_regex(e.children[0])}|{_python_regex(e.children[1])})"
    if e.kind == "cat":
        return f"(?:{_python_regex(e.children[0])})(?:{_python_regex(e.children[1])})"
    return f"(?:{_python_regex(e.children[0])})*"


def test_languages_against_re_module():
    # truncation commutes with the operations, so the bounded language is
    # the true language cut at the length bound; re.fullmatch is the oracle
    exprs, words, masks = language_table(AB, 4, 3)
    strings = ["".join("ab"[i] for i in w) for w in words.payload]
    for idx, e in enumerate(exprs.payload):
        pat = re_mod.compile(_python_regex(e))
        want = {j for j, s in enumerate(strings) if pat.fullmatch(s)}
        got = {j for j in range(len(words)) if int(masks[idx]) >> j & 1}
        assert got == want, exprs.elements[idx]


def test_models_matrix_matches_languages():
    m = models_matrix(AB, 3, 2)
    exprs = RegexFunctor(3).carrier(AB)
    words = word_carrier(AB, 2)
    assert m.src is words and m.tgt is exprs
    for j, lab in enumerate(exprs.elements):
        lang = bounded_language(AB, lab, 2, expr_size_cap=3)
        assert {words.elements[i] for i in np.flatnonzero(m.m[:, j])} == lang


def test_semantic_leq_is_containment():
    # mask route vs residual of the satisfaction matrix
    leq = semantic_leq(AB, 3, 2)
    m = models_matrix(AB, 3, 2)
    assert (leq.m == under(m, m).m).all()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 143), st.integers(0, 143))
def test_semantic_leq_pointwise(i, j):
    exprs, words, masks = language_table(AB, 4, 2)
    leq = semantic_leq(AB, 4, 2)
    assert leq.m[i, j] == (int(masks[i]) & ~int(masks[j]) == 0)


def test_regex_functor_laws():
    report = check_functor_laws(RegexFunctor(3), ProbeUniverse(max_size=2, rel_samples=6))
    assert report.passed, report.describe()


def test_fmap_renames_letters():
    ba = FuncTable(AB, AB, [1, 0])
    fm = RegexFunctor(3).fmap(ba)
    c = RegexFunctor(3).carrier(AB)
    assert c.elements[fm.table[c.index("(a.b)")]] == "(b.a)"
    assert c.elements[fm.table[c.index("a*")]] == "b*"
    assert c.elements[fm.table[c.index("0")]] == "0"


def test_lift_of_graph_is_graph_of_fmap():
    fun = RegexFunctor(3)
    ba = FuncTable(AB, AB, [1, 0])
    assert (fun.lift(graph(ba)).m == graph(fun.fmap(ba)).m).all()


def test_semantic_exactness_small_caps():
    for cap, k in [(2, 2), (3, 2), (3, 3), (4, 3)]:
        v = ka_semantic_exactness(AB, cap, k)
        assert v.ok, (cap, k, v.describe())
        r = instantiate(ka_hor(cap, k), AB)
        assert is_exact(r).ok


def test_blockwise_matches_dense():
    # tiny block size forces the block loop through many rounds
    v = ka_semantic_exactness(AB, 3, 2, block=7)
    assert v.ok and "44 expressions" in v.note


def test_validate_hor_semantic():
    h = ka_hor(3, 2)
    report = validate_hor(h, ProbeUniverse(max_size=2, rel_samples=8))
    assert report.passed, report.describe()
    assert [v.law for v in report.verdicts] == [
        "per-set-representations",
        "satisfaction-right-linear",
        "order-natural",
        "interpretation-naturality",
        "interpretation-matches-right-linearity",
    ]


def test_hor_arrow_on_probe_functions():
    h = ka_hor(2, 2)
    probes = ProbeUniverse(max_size=2)
    for _, _, f in probes.functions():
        m = hor_arrow(h, f)
        assert m.validated


def test_axiom_instances_sound_by_re_oracle():
    exprs, words, masks = language_table(AB, 4, 3)
    strings = ["".join("ab"[i] for i in w) for w in words.payload]
    langs = []
    for e in exprs.payload:
        pat = re_mod.compile(_python_regex(e))
        langs.append({s for s in strings if pat.fullmatch(s)})
    for i, j in generate_axiom_instances(AB, 4):
        assert langs[i] <= langs[j], (exprs.elements[i], exprs.elements[j])


def test_axiomatic_leq_below_semantic():
    pairs = generate_axiom_instances(AB, 3)
    ax = axiomatic_leq(AB, 3, pairs)
    sem = semantic_leq(AB, 3, 2)
    assert (~ax.m | sem.m).all()
    assert not (ax.m == sem.m).all()


def test_axiomatic_mode_sound_not_exact():
    h = ka_hor(3, 2, leq_mode="axiomatic")
    r = instantiate(h, AB)
    assert validate_representation(r).passed
    assert not is_exact(r).ok


def test_axiomatic_derives_plus_upper_bound():
    c = RegexFunctor(3).carrier(AB)
    ax = axiomatic_leq(AB, 3, generate_axiom_instances(AB, 3))
    assert ax.m[c.index("a"), c.index("(a+b)")]
    assert ax.m[c.index("b"), c.index("(a+b)")]
    assert ax.m[c.index("(a+b)"), c.index("(b+a)")]
    assert ax.m[c.index("a"), c.index("(a.1)")]
    # true inclusion with no derivation: nothing rewrites into (a.a)
    sem = semantic_leq(AB, 3, 2)
    assert sem.m[c.index("0"), c.index("(a.a)")]
    assert not ax.m[c.index("0"), c.index("(a.a)")]


def test_completeness_report_shape():
    report = ka_completeness_report(AB, 4, 3)
    assert [v.law for v in report.verdicts] == ["axiom-instances-sound", "completeness-gap"]
    assert report.passed
    lo, hi = report.verdicts[1].witness
    assert bounded_language(AB, lo, 3, expr_size_cap=4) <= bounded_language(AB, hi, 3, expr_size_cap=4)
    pairs = set(generate_axiom_instances(AB, 4))
    exprs = RegexFunctor(4).carrier(AB)
    assert (exprs.index(lo), exprs.index(hi)) not in pairs


def test_completeness_report_degenerate():
    report = ka_completeness_report(AB, 2, 2, axioms=lambda a, cap: [])
    assert report.passed
    assert "syntactic identity" in report.verdicts[0].note
    assert report.scope == "degenerate instance list"


def test_cap7_exactness_and_gap():
    v = ka_semantic_exactness(AB, 7, 3)
    assert v.ok and "22140 expressions" in v.note
    report = ka_completeness_report(AB, 7, 3)
    assert report.passed
    assert report.verdicts[1].witness == ("a", "(a.a*)")


def test_instantiate_names_and_sizes():
    r = instantiate(ka_hor(2, 2), AB)
    assert len(r.exprs) == 8
    assert len(r.traces) == 7
    p = probe_carrier(0)
    r0 = instantiate(ka_hor(2, 2), p)
    assert len(r0.exprs) == 4  # 0, 1, 0*, 1* survive an empty alphabet
    assert r0.traces.elements == ("[]",)
