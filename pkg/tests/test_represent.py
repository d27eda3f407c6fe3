"""Representation structure: validation, exactness, interpretation."""

import numpy as np
import pytest

from finrep.errors import UnvalidatedError
from finrep.fset import FiniteSet, powerset_of
from finrep.generate import (
    carrier,
    random_exact_representation,
    random_sound_representation,
)
from finrep.rel import FuncTable, Rel, is_preorder, under
from finrep.represent import (
    Representation,
    SpecTheory,
    check_interpretation_identity,
    interpret,
    is_exact,
    membership_representation,
    semantic_containment,
    spec_theory_to_representation,
    trace_preorder,
    trivial_representation,
    validate_representation,
)


@pytest.fixture
def two():
    return FiniteSet("A2", ["a", "b"])


def test_validate_membership(two):
    r = membership_representation(two)
    report = validate_representation(r)
    assert report.passed
    assert [v.law for v in report.verdicts] == ["reflexivity", "transitivity", "soundness"]


def test_validate_soundness_witness_with_link():
    t = FiniteSet("T", ["t"])
    e = FiniteSet("E", ["e0", "e1"])
    models = Rel.from_pairs(t, e, [("t", "e0")])
    leq = Rel.from_pairs(e, e, [("e0", "e0"), ("e1", "e1"), ("e0", "e1")])
    r = Representation("broken", t, e, models, leq)
    report = validate_representation(r)
    assert not report.passed
    assert not r.validated
    sound = report.verdicts[-1]
    assert sound.law == "soundness"
    assert sound.witness == ("t", "e1")
    assert "(e0, e1)" in sound.note


def test_validate_empty_traces_vacuously_sound():
    t = FiniteSet("T0", [])
    e = FiniteSet("E1", ["e"])
    r = Representation("empty", t, e, Rel.empty(t, e), Rel.identity(e))
    assert validate_representation(r).passed


def test_exactness_requires_validation(two):
    r = membership_representation(two)
    r.validated = False
    with pytest.raises(UnvalidatedError):
        is_exact(r)


def test_trivial_representation_frozen_order():
    a = FiniteSet("A", ["a", "b"])
    b = FiniteSet("B", ["0", "1"])
    r = trivial_representation(Rel.from_pairs(a, b, [("a", "0")]))
    assert sorted(r.leq.pairs()) == [("0", "0"), ("1", "0"), ("1", "1")]
    assert is_exact(r).ok


def test_trivial_of_empty_relation_orders_everything():
    a = FiniteSet("Ax", ["a", "b"])
    b = FiniteSet("Bx", ["0", "1"])
    r = trivial_representation(Rel.empty(a, b))
    assert r.leq == Rel.full(b, b)


def test_trivial_always_exact_sampled():
    rng = np.random.default_rng(5)
    t = carrier("rt", 4)
    e = carrier("re", 5)
    for _ in range(500):
        r = random_exact_representation(rng, t, e)
        assert validate_representation(r).passed
        assert is_exact(r).ok


def test_inexact_witness_is_first_collapsed_pair():
    t = FiniteSet("Ti", ["t"])
    e = FiniteSet("Ei", ["e0", "e1"])
    r = Representation(
        "inexact", t, e, Rel.full(t, e), Rel.identity(e)
    )
    assert validate_representation(r).passed
    verdict = is_exact(r)
    assert not verdict.ok
    assert verdict.witness == ("e0", "e1")


def test_membership_exact_small_sizes():
    for n in range(4):
        a = carrier(f"m{n}", n)
        r = membership_representation(a)
        assert validate_representation(r).passed
        assert is_exact(r).ok


def test_membership_sizes_and_identity_on_empty(two):
    r = membership_representation(two)
    assert len(r.exprs) == 4
    assert r.leq.count() == 9
    empty = FiniteSet("none", [])
    r0 = membership_representation(empty)
    assert r0.exprs.elements == ("{}",)
    assert r0.leq == Rel.identity(r0.exprs)


def test_semantic_containment_of_membership_is_subset_order():
    # dual route: the module builds ⊆ from masks, this rederives it as a residual
    for n in range(5):
        a = carrier(f"s{n}", n)
        r = membership_representation(a, cap=4)
        assert semantic_containment(r) == r.leq


def test_interpret_membership(two):
    r = membership_representation(two)
    assert interpret(r, "{a}") == ("a",)
    assert interpret(r, "{}") == ()
    assert interpret(r, "{a,b}") == ("a", "b")


def test_interpretation_identity_random():
    rng = np.random.default_rng(9)
    for i in range(100):
        t = carrier(f"it{i}", int(rng.integers(0, 5)))
        e = carrier(f"ie{i}", int(rng.integers(0, 5)))
        r = random_sound_representation(rng, t, e)
        assert check_interpretation_identity(r).ok


def test_trace_preorder_properties():
    rng = np.random.default_rng(2)
    t = carrier("tp", 4)
    e = carrier("te", 3)
    for _ in range(50):
        r = random_sound_representation(rng, t, e)
        assert is_preorder(trace_preorder(r)).passed
    void = Representation("void", t, e, Rel.empty(t, e), Rel.identity(e), validated=True)
    assert trace_preorder(void) == Rel.full(t, t)


def test_soundness_restated_and_exactness_as_coincidence():
    rng = np.random.default_rng(4)
    t = carrier("ct", 3)
    e = carrier("ce", 4)
    for _ in range(100):
        r = random_sound_representation(rng, t, e)
        sem = semantic_containment(r)
        assert is_preorder(sem).passed
        # soundness, read through the adjunction
        assert (r.leq.m & ~sem.m).sum() == 0
        if is_exact(r).ok:
            assert r.leq == sem


def test_interpret_monotone_and_converse_for_exact():
    rng = np.random.default_rng(6)
    t = carrier("mt", 3)
    e = carrier("me", 4)
    for _ in range(60):
        r = random_sound_representation(rng, t, e)
        for e1 in r.exprs:
            for e2 in r.exprs:
                if r.leq.holds(e1, e2):
                    assert set(interpret(r, e1)) <= set(interpret(r, e2))
        x = random_exact_representation(rng, t, e)
        validate_representation(x)
        for e1 in x.exprs:
            for e2 in x.exprs:
                if set(interpret(x, e1)) <= set(interpret(x, e2)):
                    assert x.leq.holds(e1, e2)


def test_spec_theory_identity_case():
    e = FiniteSet("Es", ["p", "q"])
    st = SpecTheory(e, e, FuncTable.identity(e), Rel.identity(e))
    r = spec_theory_to_representation(st)
    assert r.models == Rel.identity(e)


def test_spec_theory_unfolds_order():
    t = FiniteSet("Tt", ["t"])
    e = FiniteSet("Ee", ["e0", "e1"])
    chi = FuncTable.from_map(t, e, {"t": "e0"})
    leq = Rel.from_pairs(e, e, [("e0", "e0"), ("e1", "e1"), ("e0", "e1")])
    r = spec_theory_to_representation(SpecTheory(t, e, chi, leq))
    assert interpret(r, "e1") == ("t",)
    assert validate_representation(r).passed


def test_spec_theory_rejects_non_preorder():
    t = FiniteSet("Tr", ["t"])
    e = FiniteSet("Er", ["e0", "e1"])
    chi = FuncTable.from_map(t, e, {"t": "e0"})
    bad = Rel.from_pairs(e, e, [("e0", "e1")])
    with pytest.raises(ValueError, match="preorder"):
        spec_theory_to_representation(SpecTheory(t, e, chi, bad))


def test_spec_theories_always_validate_random():
    rng = np.random.default_rng(13)
    from finrep.generate import random_preorder
    from finrep.laws import random_func

    for i in range(100):
        t = carrier(f"st{i}", int(rng.integers(0, 4)))
        e = carrier(f"se{i}", int(rng.integers(1, 5)))
        st = SpecTheory(t, e, random_func(rng, t, e), random_preorder(rng, e))
        assert validate_representation(spec_theory_to_representation(st)).passed
