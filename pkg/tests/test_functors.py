import itertools

import numpy as np
import pytest

from finrep.errors import BudgetError
from finrep.fset import FiniteSet, powerset_of, subset_members
from finrep.functors import (
    ComposedFunctor,
    IdentityFunctor,
    ListFunctor,
    PowersetFunctor,
    Signature,
    TermFunctor,
    enumerate_terms,
    term_label,
    term_node,
    term_var,
    var_list,
)
from finrep.rel import FuncTable, Rel, compose_func, graph

SIG = Signature.of({"mul": 2, "one": 0})


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature.of({"f": -1})
    with pytest.raises(ValueError):
        Signature((("f", 1), ("f", 2)))
    assert SIG.arity("mul") == 2
    assert SIG.arity("one") == 0


def test_list_carrier_frozen():
    a = FiniteSet("a", ["a"])
    c = ListFunctor(2).carrier(a)
    assert c.elements == ("[]", "[a]", "[a,a]")
    assert c.payload == ((), (0,), (0, 0))


def test_term_carrier_frozen():
    p = FiniteSet("p", ["p"])
    c = TermFunctor(SIG, 2).carrier(p)
    assert c.elements == (
        "p",
        "one",
        "mul(p,p)",
        "mul(p,one)",
        "mul(one,p)",
        "mul(one,one)",
    )


def test_term_enumeration_counts():
    # depth 1: 2 vars + one; depth 2: mul over 3x3; depth 3 adds
    # mul pairs with at least one depth-2 child: 12*12 - 3*3
    assert len(enumerate_terms(SIG, 1, 2)) == 3
    assert len(enumerate_terms(SIG, 2, 2)) == 12
    assert len(enumerate_terms(SIG, 3, 2)) == 147


def test_var_list_reads_leaves_left_to_right():
    t = term_node("mul", (term_node("mul", (term_var(1), term_var(0))), term_var(1)))
    assert var_list(t) == (1, 0, 1)
    assert var_list(term_node("one", ())) == ()


def test_term_label_fences_ambiguous_variable_labels():
    base = FiniteSet("weird", ["one", "plain"])
    lab = term_label(term_var(0), base, nullary=frozenset({"one"}))
    assert lab == "<one>"
    assert term_label(term_var(1), base, nullary=frozenset({"one"})) == "plain"


def test_term_over_term_carrier_builds():
    # inner terms used as variables print fenced, so the composite
    # carrier has no label collisions with structural terms
    p = FiniteSet("p", ["p"])
    tf = TermFunctor(SIG, 2)
    c = ComposedFunctor(tf, tf).carrier(p)
    assert len(c) == 56
    assert "<mul(p,p)>" in c.elements
    assert "mul(p,p)" in c.elements
    assert len(set(c.elements)) == 56


def test_carriers_are_interned():
    a = FiniteSet("a", ["a", "b"])
    assert TermFunctor(SIG, 2).carrier(a) is TermFunctor(SIG, 2).carrier(a)
    assert ListFunctor(3).carrier(a) is ListFunctor(3).carrier(a)
    assert PowersetFunctor(4).carrier(a) is PowersetFunctor(4).carrier(a)
    assert ListFunctor(2).carrier(a) is not ListFunctor(3).carrier(a)


def test_carrier_budget_guard():
    big = FiniteSet("big", [f"e{i}" for i in range(5)])
    with pytest.raises(BudgetError):
        ListFunctor(8).carrier(big)
    with pytest.raises(BudgetError):
        TermFunctor(SIG, 5).carrier(big)


def test_powerset_fmap_is_direct_image():
    a = FiniteSet("src3", ["a", "b", "c"])
    b = FiniteSet("tgt2", ["u", "v"])
    f = FuncTable(a, b, [1, 1, 0])
    pf = PowersetFunctor(4)
    pa = pf.carrier(a)
    ff = pf.fmap(f)
    for s in pa.elements:
        image = sorted({f(x) for x in subset_members(pa, s)})
        assert sorted(subset_members(pf.carrier(b), ff(s))) == image


def test_list_and_term_fmap_rename_elementwise():
    a = FiniteSet("ab", ["a", "b"])
    b = FiniteSet("uv", ["u", "v"])
    f = FuncTable(a, b, [1, 0])
    lf = ListFunctor(2)
    la = lf.carrier(a)
    lfm = lf.fmap(f)
    assert lfm("[a,b]") == "[v,u]"
    assert lfm("[]") == "[]"
    tf = TermFunctor(SIG, 2)
    tfm = tf.fmap(f)
    assert tfm("mul(a,one)") == "mul(v,one)"
    assert tfm("b") == "u"


def _em_oracle(pf, x):
    """Direct double-quantifier reading of the set lifting."""
    pa = pf.carrier(x.src)
    pb = pf.carrier(x.tgt)
    m = np.zeros((len(pa), len(pb)), dtype=bool)
    for i, s in enumerate(pa.elements):
        xs = subset_members(pa, s)
        for j, t in enumerate(pb.elements):
            ys = subset_members(pb, t)
            fwd = all(any(x.holds(u, v) for v in ys) for u in xs)
            bwd = all(any(x.holds(u, v) for u in xs) for v in ys)
            m[i, j] = fwd and bwd
    return Rel(pa, pb, m)


def test_powerset_lift_matches_double_quantifier_oracle():
    a = FiniteSet("src3", ["a", "b", "c"])
    b = FiniteSet("tgt2", ["u", "v"])
    pf = PowersetFunctor(4)
    rng = np.random.default_rng(7)
    for _ in range(60):
        x = Rel(a, b, rng.random((3, 2)) < rng.uniform(0.2, 0.8))
        assert pf.lift(x) == _em_oracle(pf, x)
    for mask in range(64):
        m = np.array([[mask >> (2 * i + j) & 1 for j in range(2)] for i in range(3)], dtype=bool)
        x = Rel(a, b, m)
        assert pf.lift(x) == _em_oracle(pf, x)


def test_term_lift_relates_same_shape_pointwise():
    a = FiniteSet("ab", ["a", "b"])
    b = FiniteSet("uv", ["u", "v"])
    x = Rel(a, b, [[True, False], [True, True]])
    tf = TermFunctor(SIG, 2)
    lx = tf.lift(x)
    assert lx.holds("mul(a,b)", "mul(u,u)")
    assert lx.holds("mul(a,b)", "mul(u,v)")
    assert not lx.holds("mul(a,b)", "mul(v,u)")
    assert lx.holds("one", "one")
    assert not lx.holds("one", "u")
    assert not lx.holds("a", "mul(u,u)")


def test_list_lift_is_equal_length_pointwise():
    a = FiniteSet("ab", ["a", "b"])
    b = FiniteSet("uv", ["u", "v"])
    x = Rel(a, b, [[True, False], [False, True]])
    lf = ListFunctor(2)
    lx = lf.lift(x)
    assert lx.holds("[a,b]", "[u,v]")
    assert not lx.holds("[a,b]", "[v,u]")
    assert not lx.holds("[a]", "[u,v]")
    assert lx.holds("[]", "[]")


def test_lift_of_graph_is_graph_of_fmap():
    a = FiniteSet("src3", ["a", "b", "c"])
    b = FiniteSet("tgt2", ["u", "v"])
    kinds = [
        IdentityFunctor(),
        PowersetFunctor(4),
        ListFunctor(2),
        TermFunctor(SIG, 2),
        ComposedFunctor(ListFunctor(2), PowersetFunctor(4)),
    ]
    for fun in kinds:
        for table in itertools.product(range(2), repeat=3):
            f = FuncTable(a, b, table)
            assert fun.lift(graph(f)) == graph(fun.fmap(f)), fun.name


def test_composed_functor_is_composition():
    a = FiniteSet("ab", ["a", "b"])
    b = FiniteSet("uv", ["u", "v"])
    f = FuncTable(a, b, [1, 0])
    outer, inner = ListFunctor(2), PowersetFunctor(4)
    comp = ComposedFunctor(outer, inner)
    assert comp.carrier(a) is outer.carrier(inner.carrier(a))
    assert comp.fmap(f) == outer.fmap(inner.fmap(f))
    x = Rel(a, b, [[True, False], [True, True]])
    assert comp.lift(x) == outer.lift(inner.lift(x))


def test_fmap_respects_composition_spot_check():
    a = FiniteSet("ab", ["a", "b"])
    b = FiniteSet("uv", ["u", "v"])
    c = FiniteSet("tgt3", ["p", "q", "r"])
    f = FuncTable(a, b, [1, 0])
    g = FuncTable(b, c, [2, 0])
    for fun in [PowersetFunctor(4), ListFunctor(3), TermFunctor(SIG, 2)]:
        assert fun.fmap(compose_func(g, f)) == compose_func(fun.fmap(g), fun.fmap(f))
