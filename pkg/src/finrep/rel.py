"""Relations between finite carriers, stored as dense boolean matrices.

The public operator set is negation-free (residuals are computed by a
direct forall/exists scan); complement shows up only as an internal bit
trick.  Matrices are immutable after construction.  Operations that would
touch more cells than a dense pass can afford switch to packed 64-bit row
arithmetic with duplicate-row sharing, which keeps the same answers exact.
"""

from __future__ import annotations

import numpy as np

from .errors import CarrierMismatch
from .fset import FiniteSet, powerset_of, product_of, sum_of
from .verdict import LawReport, Verdict

# beyond this estimated cell count, compose/under leave the plain dense path
_DENSE_COST_LIMIT = 100_000_000
# target size (in uint64 elements) for blocked temporaries
_BLOCK_ELEMS = 8_000_000


class Rel:
    """Binary relation src ⇸ tgt as a |src| x |tgt| boolean matrix."""

    __slots__ = ("src", "tgt", "m")

    def __init__(self, src: FiniteSet, tgt: FiniteSet, matrix):
        m = np.array(matrix, dtype=bool, copy=True)
        if m.shape != (len(src), len(tgt)):
            raise CarrierMismatch(
                f"matrix shape {m.shape} does not fit carriers "
                f"{src.name!r} ({len(src)}) and {tgt.name!r} ({len(tgt)})"
            )
        m.setflags(write=False)
        self.src = src
        self.tgt = tgt
        self.m = m

    @classmethod
    def empty(cls, src, tgt):
        return cls(src, tgt, np.zeros((len(src), len(tgt)), dtype=bool))

    @classmethod
    def full(cls, src, tgt):
        return cls(src, tgt, np.ones((len(src), len(tgt)), dtype=bool))

    @classmethod
    def identity(cls, a):
        return cls(a, a, np.eye(len(a), dtype=bool))

    @classmethod
    def from_pairs(cls, src, tgt, pairs):
        m = np.zeros((len(src), len(tgt)), dtype=bool)
        for x, y in pairs:
            m[src.index(x), tgt.index(y)] = True
        return cls(src, tgt, m)

    def holds(self, x: str, y: str) -> bool:
        return bool(self.m[self.src.index(x), self.tgt.index(y)])

    def pairs(self):
        """Related pairs as labels, row-major."""
        for i, j in np.argwhere(self.m):
            yield self.src.elements[i], self.tgt.elements[j]

    def count(self) -> int:
        return int(self.m.sum())

    def __eq__(self, other):
        if not isinstance(other, Rel):
            return NotImplemented
        return (
            self.src is other.src
            and self.tgt is other.tgt
            and np.array_equal(self.m, other.m)
        )

    __hash__ = None

    def __repr__(self):
        return f"Rel({self.src.name!r} -> {self.tgt.name!r}, {self.count()} pairs)"


class FuncTable:
    """Total function between carriers as a target-index table."""

    __slots__ = ("src", "tgt", "table")

    def __init__(self, src: FiniteSet, tgt: FiniteSet, table):
        table = np.array(table, dtype=np.int64, copy=True)
        if table.shape != (len(src),):
            raise CarrierMismatch(
                f"table length {table.shape} does not fit carrier {src.name!r}"
            )
        if len(src) and (table.min() < 0 or table.max() >= len(tgt)):
            raise CarrierMismatch(f"table entry out of range for carrier {tgt.name!r}")
        table.setflags(write=False)
        self.src = src
        self.tgt = tgt
        self.table = table

    @classmethod
    def from_map(cls, src, tgt, mapping):
        return cls(src, tgt, [tgt.index(mapping[x]) for x in src.elements])

    @classmethod
    def identity(cls, a):
        return cls(a, a, np.arange(len(a)))

    def __call__(self, label: str) -> str:
        return self.tgt.elements[self.table[self.src.index(label)]]

    def items(self):
        for i, x in enumerate(self.src.elements):
            yield x, self.tgt.elements[self.table[i]]

    def __eq__(self, other):
        if not isinstance(other, FuncTable):
            return NotImplemented
        return (
            self.src is other.src
            and self.tgt is other.tgt
            and np.array_equal(self.table, other.table)
        )

    __hash__ = None

    def __repr__(self):
        return f"FuncTable({self.src.name!r} -> {self.tgt.name!r})"


def compose_func(outer: FuncTable, inner: FuncTable) -> FuncTable:
    """outer after inner."""
    if inner.tgt is not outer.src:
        raise CarrierMismatch("function tables do not chain")
    return FuncTable(inner.src, outer.tgt, outer.table[inner.table])


def graph(f: FuncTable) -> Rel:
    m = np.zeros((len(f.src), len(f.tgt)), dtype=bool)
    m[np.arange(len(f.src)), f.table] = True
    return Rel(f.src, f.tgt, m)


def cograph(f: FuncTable) -> Rel:
    """Converse of the function graph."""
    return converse(graph(f))


# ---------------------------------------------------------------- packing

def _pack_rows(m: np.ndarray) -> np.ndarray:
    """bool (r, c) -> uint64 (r, ceil(c/64)), little-endian bits, zero padding."""
    m = np.ascontiguousarray(m)
    packed8 = np.packbits(m, axis=1, bitorder="little")
    pad = (-packed8.shape[1]) % 8
    if pad:
        packed8 = np.pad(packed8, ((0, 0), (0, pad)))
    return packed8.view(np.uint64)


def _unpack_rows(p: np.ndarray, cols: int) -> np.ndarray:
    if cols == 0:
        return np.zeros((p.shape[0], 0), dtype=bool)
    bits = np.unpackbits(p.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :cols].astype(bool)


def _bool_mm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean matrix product, switching representation by estimated cost."""
    n, k = a.shape
    k2, c = b.shape
    assert k == k2
    if n * k * c <= _DENSE_COST_LIMIT:
        return a @ b
    bp = _pack_rows(b)
    w = bp.shape[1]
    out = np.zeros((n, w), dtype=np.uint64)
    ap = _pack_rows(a)
    seen: dict[bytes, np.ndarray] = {}
    zero = np.zeros(w, dtype=np.uint64)
    for i in range(n):
        key = ap[i].tobytes()
        row = seen.get(key)
        if row is None:
            sel = np.flatnonzero(a[i])
            row = np.bitwise_or.reduce(bp[sel], axis=0) if sel.size else zero
            seen[key] = row
        out[i] = row
    return _unpack_rows(out, c)


# ------------------------------------------------------------- operators

def compose(x: Rel, y: Rel) -> Rel:
    if x.tgt is not y.src:
        raise CarrierMismatch(
            f"cannot compose {x.src.name}->{x.tgt.name} with {y.src.name}->{y.tgt.name}"
        )
    return Rel(x.src, y.tgt, _bool_mm(x.m, y.m))


def converse(x: Rel) -> Rel:
    return Rel(x.tgt, x.src, x.m.T)


def union(x: Rel, y: Rel) -> Rel:
    _same_carriers(x, y)
    return Rel(x.src, x.tgt, x.m | y.m)


def inter(x: Rel, y: Rel) -> Rel:
    _same_carriers(x, y)
    return Rel(x.src, x.tgt, x.m & y.m)


def under(x: Rel, z: Rel) -> Rel:
    """Left residual: largest y with x;y included in z.

    (b, c) holds iff every a with x(a, b) also has z(a, c).
    """
    if x.src is not z.src:
        raise CarrierMismatch("residual under(x, z) needs a shared source carrier")
    nb, nc, na = len(x.tgt), len(z.tgt), len(x.src)
    if nb * nc * max(na, 1) <= _DENSE_COST_LIMIT:
        return Rel(x.tgt, z.tgt, ~(x.m.T @ ~z.m))
    xp = _pack_rows(x.m.T)            # (B, W) bits over the shared source
    zp = _pack_rows(z.m.T)            # (C, W)
    w = max(xp.shape[1], 1)
    out = np.empty((nb, nc), dtype=bool)
    chunk = max(1, _BLOCK_ELEMS // max(1, nc * w))
    notz = ~zp
    for lo in range(0, nb, chunk):
        hi = min(nb, lo + chunk)
        viol = np.any(xp[lo:hi, None, :] & notz[None, :, :], axis=2)
        out[lo:hi] = ~viol
    return Rel(x.tgt, z.tgt, out)


def over(z: Rel, y: Rel) -> Rel:
    """Right residual: largest x with x;y included in z."""
    return converse(under(converse(y), converse(z)))


def star(x: Rel) -> Rel:
    """Reflexive-transitive closure."""
    if x.src is not x.tgt:
        raise CarrierMismatch("closure needs a square relation")
    n = len(x.src)
    m = x.m | np.eye(n, dtype=bool)
    if n <= 1024:
        for k in range(n):
            col = m[:, k].copy()
            col[k] = False
            if col.any():
                m[col] |= m[k]
        return Rel(x.src, x.tgt, m)
    while True:
        grown = _bool_mm(m, m) | m
        if np.array_equal(grown, m):
            return Rel(x.src, x.tgt, m)
        m = grown


def is_included(x: Rel, y: Rel, law: str = "inclusion") -> Verdict:
    """Pointwise inclusion with the row-major first violation as witness."""
    _same_carriers(x, y)
    viol = x.m & ~y.m
    if not viol.any():
        return Verdict(law, True)
    flat = int(np.argmax(viol))
    i, j = divmod(flat, max(1, viol.shape[1]))
    return Verdict(law, False, witness=(x.src.elements[i], x.tgt.elements[j]))


def equal_verdict(x: Rel, y: Rel, law: str = "equality") -> Verdict:
    fwd = is_included(x, y, law)
    if not fwd.ok:
        return Verdict(law, False, fwd.witness, note="left side has an extra pair")
    bwd = is_included(y, x, law)
    if not bwd.ok:
        return Verdict(law, False, bwd.witness, note="right side has an extra pair")
    return Verdict(law, True)


def is_function(x: Rel) -> tuple[Verdict, Verdict]:
    """Univalence and totality, via the two relational checks."""
    univalent = is_included(
        compose(converse(x), x), Rel.identity(x.tgt), "univalence"
    )
    total = is_included(
        Rel.identity(x.src), compose(x, converse(x)), "totality"
    )
    return univalent, total


def to_func(x: Rel) -> FuncTable:
    """Tabulate a relation that is a function graph; loud failure otherwise."""
    counts = x.m.sum(axis=1)
    bad = np.flatnonzero(counts != 1)
    if bad.size:
        i = int(bad[0])
        raise ValueError(
            f"not a function graph: {x.src.elements[i]!r} has {int(counts[i])} successors"
        )
    return FuncTable(x.src, x.tgt, np.argmax(x.m, axis=1))


def is_preorder(x: Rel) -> LawReport:
    report = LawReport(subject="preorder")
    if x.src is not x.tgt:
        raise CarrierMismatch("preorder check needs a square relation")
    report.add(is_included(Rel.identity(x.src), x, "reflexivity"))
    report.add(is_included(compose(x, x), x, "transitivity"))
    return report


def sum_set(a: FiniteSet, b: FiniteSet) -> tuple[FiniteSet, FuncTable, FuncTable]:
    s = sum_of(a, b)
    i1 = FuncTable(a, s, np.arange(len(a)))
    i2 = FuncTable(b, s, len(a) + np.arange(len(b)))
    return s, i1, i2


def product_set(a: FiniteSet, b: FiniteSet) -> tuple[FiniteSet, FuncTable, FuncTable]:
    p = product_of(a, b)
    pr1 = FuncTable(p, a, np.repeat(np.arange(len(a)), len(b)))
    pr2 = FuncTable(p, b, np.tile(np.arange(len(b)), len(a)))
    return p, pr1, pr2


def membership_rel(a: FiniteSet, cap: int = 4) -> Rel:
    """Element-of relation a ⇸ powerset(a), decoded from subset masks."""
    p = powerset_of(a, cap)
    m = np.zeros((len(a), len(p)), dtype=bool)
    for j, mask in enumerate(p.payload):
        for i in range(len(a)):
            if mask >> i & 1:
                m[i, j] = True
    return Rel(a, p, m)


def check_coproduct_axioms(a: FiniteSet, b: FiniteSet) -> LawReport:
    """The three relational laws that make the tagged union a coproduct."""
    s, i1, i2 = sum_set(a, b)
    report = LawReport(subject=f"coproduct {a.name}+{b.name}")
    report.add(
        equal_verdict(compose(graph(i1), cograph(i1)), Rel.identity(a), "roundtrip-left")
    )
    report.add(
        equal_verdict(compose(graph(i2), cograph(i2)), Rel.identity(b), "roundtrip-right")
    )
    report.add(
        equal_verdict(compose(graph(i1), cograph(i2)), Rel.empty(a, b), "disjointness")
    )
    cover = union(
        compose(cograph(i1), graph(i1)),
        compose(cograph(i2), graph(i2)),
    )
    report.add(is_included(Rel.identity(s), cover, "joint-cover"))
    return report


def _same_carriers(x: Rel, y: Rel) -> None:
    if x.src is not y.src or x.tgt is not y.tgt:
        raise CarrierMismatch(
            f"carriers differ: {x.src.name}->{x.tgt.name} vs {y.src.name}->{y.tgt.name}"
        )
