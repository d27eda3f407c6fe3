"""Bounded regular expressions over finite alphabets.

Expressions are capped by node count, traces are words capped by length,
and satisfaction is bounded-language membership.  At these caps the
semantic order (language inclusion among the bounded languages) is exact
by construction; the axiomatic order generated from explicit instance
lists is sound but incomplete, and the gap is measured, not hidden.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import functors as _functors
from .errors import BudgetError
from .fset import FiniteSet, intern
from .functors import Functor, ListFunctor
from .hor import HOR
from .rel import FuncTable, Rel, star, union
from .verdict import LawReport, Verdict

_WORD_BITS = 64

_language_cache: dict = {}


@dataclass(frozen=True)
class RegExpr:
    kind: str
    letter: int | None = None
    children: tuple["RegExpr", ...] = ()

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)


def re_letter(i: int) -> RegExpr:
    return RegExpr("letter", i)


def re_zero() -> RegExpr:
    return RegExpr("zero")


def re_eps() -> RegExpr:
    return RegExpr("eps")


def re_plus(e: RegExpr, f: RegExpr) -> RegExpr:
    return RegExpr("plus", None, (e, f))


def re_cat(e: RegExpr, f: RegExpr) -> RegExpr:
    return RegExpr("cat", None, (e, f))


def re_star(e: RegExpr) -> RegExpr:
    return RegExpr("star", None, (e,))


def regex_label(e: RegExpr, alphabet: FiniteSet) -> str:
    if e.kind == "letter":
        lab = alphabet.elements[e.letter]
        if any(c in lab for c in "+.*()01<>"):
            lab = f"<{lab}>"
        return lab
    if e.kind == "zero":
        return "0"
    if e.kind == "eps":
        return "1"
    if e.kind == "plus":
        return f"({regex_label(e.children[0], alphabet)}+{regex_label(e.children[1], alphabet)})"
    if e.kind == "cat":
        return f"({regex_label(e.children[0], alphabet)}.{regex_label(e.children[1], alphabet)})"
    return f"{regex_label(e.children[0], alphabet)}*"


class RegexFunctor(Functor):
    """Expressions of bounded node count; renaming maps letters."""

    def __init__(self, size_cap: int):
        assert size_cap >= 1
        self.size_cap = size_cap
        self.key = ("reg", size_cap)
        self.name = f"regex(size {size_cap})"

    def carrier(self, a: FiniteSet) -> FiniteSet:
        def build():
            by_size = {}
            total = 0
            for s in range(1, self.size_cap + 1):
                level = []
                if s == 1:
                    level.extend(re_letter(i) for i in range(len(a)))
                    level.append(re_zero())
                    level.append(re_eps())
                else:
                    level.extend(re_star(e) for e in by_size[s - 1])
                    for op in (re_plus, re_cat):
                        for i in range(1, s - 1):
                            for e in by_size[i]:
                                for f in by_size[s - 1 - i]:
                                    level.append(op(e, f))
                total += len(level)
                if total > _functors._CARRIER_BUDGET:
                    raise BudgetError(
                        f"expression carrier over budget at size {s}: "
                        f"{total} > {_functors._CARRIER_BUDGET}"
                    )
                by_size[s] = level
            exprs = [e for s in range(1, self.size_cap + 1) for e in by_size[s]]
            return FiniteSet(
                f"reg{self.size_cap}({a.name})",
                [regex_label(e, a) for e in exprs],
                payload=tuple(exprs),
                origin=("reg", self.size_cap, a),
            )

        return intern(("reg", self.size_cap, a), build)

    def fmap(self, f: FuncTable) -> FuncTable:
        ca, cb = self.carrier(f.src), self.carrier(f.tgt)
        index = {e: i for i, e in enumerate(cb.payload)}

        def rename(e: RegExpr) -> RegExpr:
            if e.kind == "letter":
                return re_letter(int(f.table[e.letter]))
            return RegExpr(e.kind, None, tuple(rename(c) for c in e.children))

        return FuncTable(ca, cb, [index[rename(e)] for e in ca.payload])

    def lift(self, x: Rel) -> Rel:
        ca, cb = self.carrier(x.src), self.carrier(x.tgt)

        def related(e: RegExpr, f: RegExpr) -> bool:
            if e.kind != f.kind:
                return False
            if e.kind == "letter":
                return bool(x.m[e.letter, f.letter])
            return all(related(c, d) for c, d in zip(e.children, f.children))

        m = np.zeros((len(ca), len(cb)), dtype=bool)
        for i, e in enumerate(ca.payload):
            for j, f in enumerate(cb.payload):
                m[i, j] = related(e, f)
        return Rel(ca, cb, m)


def word_carrier(alphabet: FiniteSet, word_len_cap: int) -> FiniteSet:
    return ListFunctor(word_len_cap).carrier(alphabet)


def language_table(alphabet: FiniteSet, expr_size_cap: int, word_len_cap: int):
    """Bounded language of every expression in the carrier, as bit masks
    over the word carrier.  Truncation applies at every concatenation and
    star step, so the result is exactly the bounded words of the language."""
    key = ("ka-langs", expr_size_cap, word_len_cap, alphabet)
    got = _language_cache.get(key)
    if got is not None:
        return got

    def build():
        exprs = RegexFunctor(expr_size_cap).carrier(alphabet)
        words = word_carrier(alphabet, word_len_cap)
        if len(words) > _WORD_BITS:
            raise BudgetError(f"word carrier too large for masks: {len(words)} > {_WORD_BITS}")
        windex = {w: i for i, w in enumerate(words.payload)}
        n = len(words)
        cat_table = np.full((n, n), -1, dtype=np.int64)
        for i, u in enumerate(words.payload):
            for j, v in enumerate(words.payload):
                if len(u) + len(v) <= word_len_cap:
                    cat_table[i, j] = windex[u + v]

        def cat_mask(m1: int, m2: int) -> int:
            out = 0
            for i in _bits(m1):
                row = cat_table[i]
                for j in _bits(m2):
                    k = row[j]
                    if k >= 0:
                        out |= 1 << int(k)
            return out

        memo: dict[RegExpr, int] = {}

        def lang(e: RegExpr) -> int:
            got = memo.get(e)
            if got is not None:
                return got
            if e.kind == "letter":
                out = 1 << windex[(e.letter,)]
            elif e.kind == "zero":
                out = 0
            elif e.kind == "eps":
                out = 1 << windex[()]
            elif e.kind == "plus":
                out = lang(e.children[0]) | lang(e.children[1])
            elif e.kind == "cat":
                out = cat_mask(lang(e.children[0]), lang(e.children[1]))
            else:
                body = lang(e.children[0])
                out = 1 << windex[()]
                while True:
                    grown = out | cat_mask(out, body)
                    if grown == out:
                        break
                    out = grown
            memo[e] = out
            return out

        masks = np.array([lang(e) for e in exprs.payload], dtype=np.uint64)
        return exprs, words, masks

    got = build()
    _language_cache[key] = got
    return got


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def bounded_language(alphabet: FiniteSet, e, word_len_cap: int, expr_size_cap: int = 7) -> frozenset:
    """Set of word labels matched within the length bound."""
    exprs, words, masks = language_table(alphabet, expr_size_cap, word_len_cap)
    if isinstance(e, str):
        idx = exprs.index(e)
    else:
        idx = exprs.payload.index(e)
    mask = int(masks[idx])
    return frozenset(words.elements[i] for i in _bits(mask))


def models_matrix(alphabet: FiniteSet, expr_size_cap: int, word_len_cap: int) -> Rel:
    exprs, words, masks = language_table(alphabet, expr_size_cap, word_len_cap)
    shifts = np.arange(len(words), dtype=np.uint64)
    m = (masks[None, :] >> shifts[:, None]) & np.uint64(1)
    return Rel(words, exprs, m.astype(bool))


def semantic_leq(alphabet: FiniteSet, expr_size_cap: int, word_len_cap: int) -> Rel:
    """Language inclusion at the bound, computed from masks."""
    exprs, _, masks = language_table(alphabet, expr_size_cap, word_len_cap)
    m = (masks[:, None] & ~masks[None, :]) == 0
    return Rel(exprs, exprs, m)


def generate_axiom_instances(alphabet: FiniteSet, expr_size_cap: int) -> list[tuple[int, int]]:
    """Instance pairs (below, above) of the usual equational axioms for
    union, concatenation, and one unfolding of star, restricted to the
    expressions whose composites stay inside the carrier.

    Generated by scanning the carrier for the axiom shapes: an instance
    only exists when both sides are in the carrier, so matching one side
    and looking up the rewritten partner finds every instance."""
    exprs = RegexFunctor(expr_size_cap).carrier(alphabet)
    index = {e: i for i, e in enumerate(exprs.payload)}
    pairs = set()

    def eq(a: RegExpr, b: RegExpr):
        ia, ib = index.get(a), index.get(b)
        if ia is not None and ib is not None:
            pairs.add((ia, ib))
            pairs.add((ib, ia))

    def le(a: RegExpr, b: RegExpr):
        ia, ib = index.get(a), index.get(b)
        if ia is not None and ib is not None:
            pairs.add((ia, ib))

    zero, eps = re_zero(), re_eps()
    for p in exprs.payload:
        if p.kind == "plus":
            e, f = p.children
            eq(p, re_plus(f, e))
            le(e, p)
            le(f, p)
            if e == f:
                eq(p, e)
            if f == zero:
                eq(p, e)
            if e == zero:
                eq(p, f)
            if f.kind == "plus":
                g, h = f.children
                eq(p, re_plus(re_plus(e, g), h))
            if e == eps and f.kind == "cat" and f.children[1] == re_star(f.children[0]):
                eq(p, f.children[1])
        elif p.kind == "cat":
            e, f = p.children
            if f == eps:
                eq(p, e)
            if e == eps:
                eq(p, f)
            if f == zero or e == zero:
                eq(p, zero)
            if f.kind == "cat":
                g, h = f.children
                eq(p, re_cat(re_cat(e, g), h))
            if f.kind == "plus":
                g, h = f.children
                eq(p, re_plus(re_cat(e, g), re_cat(e, h)))
            if e.kind == "plus":
                g, h = e.children
                eq(p, re_plus(re_cat(g, f), re_cat(h, f)))
            if e == f and e.kind == "star":
                eq(p, e)
        elif p.kind == "star":
            e = p.children[0]
            le(eps, p)
            le(e, p)
    return sorted(pairs)


def axiomatic_leq(alphabet: FiniteSet, expr_size_cap: int, axiom_pairs) -> Rel:
    """Reflexive-transitive closure of the instance pairs.  Dense; meant
    for carriers small enough to validate on probes."""
    exprs = RegexFunctor(expr_size_cap).carrier(alphabet)
    m = np.zeros((len(exprs), len(exprs)), dtype=bool)
    for i, j in axiom_pairs:
        m[i, j] = True
    return star(union(Rel.identity(exprs), Rel(exprs, exprs, m)))


def ka_hor(
    expr_size_cap: int = 3,
    word_len_cap: int = 2,
    leq_mode: str = "semantic",
    axioms=None,
) -> HOR:
    """Words against expressions, polymorphic in the alphabet."""
    assert leq_mode in ("semantic", "axiomatic")
    if axioms is None:
        axioms = generate_axiom_instances

    def models_gen(a):
        return models_matrix(a, expr_size_cap, word_len_cap)

    def leq_gen(a):
        if leq_mode == "semantic":
            return semantic_leq(a, expr_size_cap, word_len_cap)
        return axiomatic_leq(a, expr_size_cap, axioms(a, expr_size_cap))

    return HOR(
        name=f"ka({leq_mode}, size {expr_size_cap}, words {word_len_cap})",
        t_functor=ListFunctor(word_len_cap),
        e_functor=RegexFunctor(expr_size_cap),
        models_gen=models_gen,
        leq_gen=leq_gen,
    )


def ka_semantic_exactness(alphabet: FiniteSet, expr_size_cap: int, word_len_cap: int, block: int = 2048) -> Verdict:
    """Semantic containment must equal the semantic order cell for cell.
    Containment is recomputed from the satisfaction matrix, the order from
    the language masks, so the two sides are independent routes."""
    exprs, words, masks = language_table(alphabet, expr_size_cap, word_len_cap)
    models = models_matrix(alphabet, expr_size_cap, word_len_cap).m
    not_models = ~models
    n = len(exprs)
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        containment = ~(models[:, lo:hi].T @ not_models)
        order = (masks[lo:hi, None] & ~masks[None, :]) == 0
        if not (containment == order).all():
            i, j = np.argwhere(containment != order)[0]
            return Verdict(
                "semantic-exactness",
                False,
                witness=(exprs.elements[lo + i], exprs.elements[j]),
            )
    return Verdict(
        "semantic-exactness",
        True,
        note=f"{n} expressions, {len(words)} words",
    )


def _derivable_from(src: int, adjacency: dict) -> set:
    seen = {src}
    frontier = [src]
    while frontier:
        i = frontier.pop()
        for j in adjacency.get(i, ()):
            if j not in seen:
                seen.add(j)
                frontier.append(j)
    return seen


def ka_completeness_report(
    alphabet: FiniteSet,
    expr_size_cap: int,
    word_len_cap: int,
    axioms=None,
    gap_scan_limit: int = 200,
) -> LawReport:
    """Soundness of the instance list plus the first measured gap: a true
    bounded-language inclusion the instances cannot derive."""
    exprs, words, masks = language_table(alphabet, expr_size_cap, word_len_cap)
    if axioms is None:
        axioms = generate_axiom_instances
    pairs = axioms(alphabet, expr_size_cap)
    report = LawReport(subject=f"axiomatic order over {len(exprs)} expressions")
    if not pairs:
        report.add(
            Verdict(
                "axiom-instances-sound",
                True,
                note="no axiom instances supplied: the generated order is syntactic identity",
            )
        )
        report.scope = "degenerate instance list"

    mask_ints = [int(m) for m in masks]
    full = (1 << len(words)) - 1
    bad = None
    for i, j in pairs:
        if mask_ints[i] & ~mask_ints[j] & full:
            bad = Verdict(
                "axiom-instances-sound",
                False,
                witness=(exprs.elements[i], exprs.elements[j]),
            )
            break
    if pairs:
        report.add(
            bad
            or Verdict(
                "axiom-instances-sound",
                True,
                note=(
                    f"{len(pairs)} instances semantically valid; the closure stays "
                    "below the semantic order because that order is reflexive and transitive"
                ),
            )
        )

    adjacency: dict[int, list] = {}
    for i, j in pairs:
        adjacency.setdefault(i, []).append(j)
    gap = None
    scanned = 0
    for i in range(len(exprs)):
        if scanned >= gap_scan_limit:
            break
        reach = _derivable_from(i, adjacency)
        mi = mask_ints[i]
        for j in range(len(exprs)):
            if (mi & ~mask_ints[j] & full) == 0 and j not in reach:
                gap = (i, j)
                break
        scanned += 1
        if gap:
            break
    if gap:
        i, j = gap
        report.add(
            Verdict(
                "completeness-gap",
                True,
                witness=(exprs.elements[i], exprs.elements[j]),
                note="true at the bound but not derivable from the instances",
            )
        )
    else:
        report.add(
            Verdict(
                "completeness-gap",
                True,
                note=f"no gap among the first {scanned} expressions at this bound",
            )
        )
    return report
