"""Bounded endofunctors on finite carriers, with relation liftings.

Four kinds: identity, powerset (capped), lists up to a length bound, and
terms over a signature up to a depth bound.  Each functor produces interned
carriers, maps functions, and lifts relations; composition chains two
functors.  Bounds fail loudly, nothing truncates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetError, CarrierMismatch
from .fset import FiniteSet, intern, powerset_of
from .rel import FuncTable, Rel

_CARRIER_BUDGET = 200_000


@dataclass(frozen=True)
class Signature:
    """Operator symbols with arities, in declaration order."""

    ops: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen = set()
        for sym, arity in self.ops:
            if not isinstance(sym, str) or not sym:
                raise ValueError(f"operator symbol {sym!r} must be a nonempty string")
            if arity < 0:
                raise ValueError(f"operator {sym!r} has negative arity")
            if sym in seen:
                raise ValueError(f"duplicate operator symbol {sym!r}")
            seen.add(sym)

    @classmethod
    def of(cls, mapping):
        return cls(tuple(mapping.items()))

    def arity(self, sym: str) -> int:
        for s, a in self.ops:
            if s == sym:
                return a
        raise KeyError(f"unknown operator {sym!r}")


@dataclass(frozen=True)
class Term:
    """Finite term: a variable leaf (op None) or an operator node."""

    op: str | None
    var: int | None
    children: tuple["Term", ...]
    depth: int


def term_var(i: int) -> Term:
    return Term(None, i, (), 1)


def term_node(op: str, children: tuple[Term, ...]) -> Term:
    depth = 1 + max((c.depth for c in children), default=0)
    return Term(op, None, children, depth)


def term_label(t: Term, base: FiniteSet, nullary: frozenset = frozenset()) -> str:
    if t.op is None:
        lab = base.elements[t.var]
        # syntax-bearing variable labels (e.g. terms over terms) get fenced
        if lab in nullary or any(c in lab for c in "(),<>"):
            return f"<{lab}>"
        return lab
    if not t.children:
        return t.op
    return f"{t.op}({','.join(term_label(c, base, nullary) for c in t.children)})"


def var_list(t: Term) -> tuple[int, ...]:
    """Variable indices in left-to-right leaf order."""
    if t.op is None:
        return (t.var,)
    out = []
    for c in t.children:
        out.extend(var_list(c))
    return tuple(out)


def enumerate_terms(sig: Signature, max_depth: int, n_vars: int) -> list[Term]:
    """All terms up to the depth bound: by depth, variables before
    operators, operators in signature order, children lexicographic."""
    if max_depth < 1:
        return []
    by_depth: list[list[Term]] = [[]]
    level1 = [term_var(i) for i in range(n_vars)]
    level1 += [term_node(sym, ()) for sym, arity in sig.ops if arity == 0]
    by_depth.append(level1)
    for d in range(2, max_depth + 1):
        shallower = [t for level in by_depth for t in level]
        level = []
        for sym, arity in sig.ops:
            if arity == 0:
                continue
            for kids in itertools.product(shallower, repeat=arity):
                if max(k.depth for k in kids) == d - 1:
                    level.append(term_node(sym, kids))
        by_depth.append(level)
        if sum(len(lv) for lv in by_depth) > _CARRIER_BUDGET:
            raise BudgetError(
                f"term carrier exceeds {_CARRIER_BUDGET} elements "
                f"at depth {d} over {n_vars} variables"
            )
    return [t for level in by_depth for t in level]


def _payload_lookup(carrier: FiniteSet) -> dict:
    return _payload_lookup_cached(carrier.uid, carrier)


@lru_cache(maxsize=None)
def _payload_lookup_cached(uid: int, carrier: FiniteSet) -> dict:
    return {p: i for i, p in enumerate(carrier.payload)}


class Functor:
    """Object map, arrow map, and relation lifting, bounded."""

    key: tuple
    name: str

    def carrier(self, a: FiniteSet) -> FiniteSet:
        raise NotImplementedError

    def fmap(self, f: FuncTable) -> FuncTable:
        raise NotImplementedError

    def lift(self, x: Rel) -> Rel:
        raise NotImplementedError

    def __repr__(self):
        return f"Functor({self.name})"


class IdentityFunctor(Functor):
    key = ("id",)
    name = "identity"

    def carrier(self, a):
        return a

    def fmap(self, f):
        return f

    def lift(self, x):
        return x


class PowersetFunctor(Functor):
    """Subsets with direct-image arrows and the two-sided lifting: each
    member on either side must be matched across the relation."""

    key = ("pow",)

    def __init__(self, cap: int = 4):
        self.cap = cap
        self.name = f"powerset(cap {cap})"

    def carrier(self, a):
        return self.carrier_masks(a)[0]

    def carrier_masks(self, a):
        p = powerset_of(a, self.cap)
        return p, np.array(p.payload, dtype=np.int64)

    def fmap(self, f):
        pa, _ = self.carrier_masks(f.src)
        pb, _ = self.carrier_masks(f.tgt)
        index = _payload_lookup(pb)
        table = []
        for mask in pa.payload:
            image = 0
            for i in range(len(f.src)):
                if mask >> i & 1:
                    image |= 1 << int(f.table[i])
            table.append(index[image])
        return FuncTable(pa, pb, table)

    def lift(self, x):
        pa, amasks = self.carrier_masks(x.src)
        pb, bmasks = self.carrier_masks(x.tgt)
        na, nb = len(x.src), len(x.tgt)
        succ = [0] * na
        pred = [0] * nb
        for i in range(na):
            for j in range(nb):
                if x.m[i, j]:
                    succ[i] |= 1 << j
                    pred[j] |= 1 << i
        # fwd[X, Y]: every member of X sees something in Y
        hungry_a = np.zeros(len(pb), dtype=np.int64)  # members with no match in Y
        for yi, ymask in enumerate(pb.payload):
            bad = 0
            for i in range(na):
                if not (succ[i] & ymask):
                    bad |= 1 << i
            hungry_a[yi] = bad
        hungry_b = np.zeros(len(pa), dtype=np.int64)
        for xi, xmask in enumerate(pa.payload):
            bad = 0
            for j in range(nb):
                if not (pred[j] & xmask):
                    bad |= 1 << j
            hungry_b[xi] = bad
        fwd = (amasks[:, None] & hungry_a[None, :]) == 0
        bwd = (bmasks[None, :] & hungry_b[:, None]) == 0
        return Rel(pa, pb, fwd & bwd)


class ListFunctor(Functor):
    """Lists up to a fixed length; arrows map elementwise and the lifting
    relates only equal-length pointwise-related lists."""

    def __init__(self, max_len: int):
        if max_len < 0:
            raise ValueError("length bound must be nonnegative")
        self.max_len = max_len
        self.key = ("list", max_len)
        self.name = f"list(len {max_len})"

    def carrier(self, a):
        def build():
            total = sum(len(a) ** l for l in range(self.max_len + 1))
            if total > _CARRIER_BUDGET:
                raise BudgetError(
                    f"list carrier over {a.name!r} has {total} elements, "
                    f"budget {_CARRIER_BUDGET}"
                )
            labels, payload = [], []
            for l in range(self.max_len + 1):
                for tup in itertools.product(range(len(a)), repeat=l):
                    labels.append("[" + ",".join(a.elements[i] for i in tup) + "]")
                    payload.append(tup)
            return FiniteSet(f"list{self.max_len}({a.name})", labels, payload)

        return intern(("list", self.max_len, a), build)

    def fmap(self, f):
        la = self.carrier(f.src)
        lb = self.carrier(f.tgt)
        index = _payload_lookup(lb)
        table = [index[tuple(int(f.table[i]) for i in tup)] for tup in la.payload]
        return FuncTable(la, lb, table)

    def lift(self, x):
        la = self.carrier(x.src)
        lb = self.carrier(x.tgt)
        m = np.zeros((len(la), len(lb)), dtype=bool)
        by_len: dict[int, list[int]] = {}
        for j, tup in enumerate(lb.payload):
            by_len.setdefault(len(tup), []).append(j)
        for i, s in enumerate(la.payload):
            for j in by_len.get(len(s), ()):
                t = lb.payload[j]
                if all(x.m[a, b] for a, b in zip(s, t)):
                    m[i, j] = True
        return Rel(la, lb, m)


class TermFunctor(Functor):
    """Terms over a signature up to a depth bound; arrows rename variables
    and the lifting relates same-shaped terms with related variables."""

    def __init__(self, sig: Signature, max_depth: int):
        if max_depth < 1:
            raise ValueError("depth bound must be at least 1")
        self.sig = sig
        self.max_depth = max_depth
        self.key = ("term", sig.ops, max_depth)
        self.name = f"term({dict(sig.ops)}, depth {max_depth})"

    def carrier(self, a):
        def build():
            terms = enumerate_terms(self.sig, self.max_depth, len(a))
            nullary = frozenset(s for s, k in self.sig.ops if k == 0)
            labels = [term_label(t, a, nullary) for t in terms]
            return FiniteSet(
                f"term{self.max_depth}({a.name})", labels, terms
            )

        return intern(("term", self.sig.ops, self.max_depth, a), build)

    def fmap(self, f):
        ta = self.carrier(f.src)
        tb = self.carrier(f.tgt)
        index = _payload_lookup(tb)

        def rename(t: Term) -> Term:
            if t.op is None:
                return term_var(int(f.table[t.var]))
            return Term(t.op, None, tuple(rename(c) for c in t.children), t.depth)

        return FuncTable(ta, tb, [index[rename(t)] for t in ta.payload])

    def lift(self, x):
        ta = self.carrier(x.src)
        tb = self.carrier(x.tgt)

        def related(s: Term, t: Term) -> bool:
            if s.op is None and t.op is None:
                return bool(x.m[s.var, t.var])
            if s.op != t.op or len(s.children) != len(t.children):
                return False
            return all(related(a, b) for a, b in zip(s.children, t.children))

        m = np.zeros((len(ta), len(tb)), dtype=bool)
        for i, s in enumerate(ta.payload):
            for j, t in enumerate(tb.payload):
                if s.depth == t.depth and related(s, t):
                    m[i, j] = True
        return Rel(ta, tb, m)


class ComposedFunctor(Functor):
    def __init__(self, outer: Functor, inner: Functor):
        self.outer = outer
        self.inner = inner
        self.key = ("comp", outer.key, inner.key)
        self.name = f"{outer.name} after {inner.name}"

    def carrier(self, a):
        return self.outer.carrier(self.inner.carrier(a))

    def fmap(self, f):
        return self.outer.fmap(self.inner.fmap(f))

    def lift(self, x):
        return self.outer.lift(self.inner.lift(x))
