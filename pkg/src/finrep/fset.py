"""Finite carriers and their canonical constructions.

Carrier identity is object identity: two sets built independently are
different carriers even if their labels coincide.  Derived carriers (sum,
product, powerset, and the functor-built ones) are interned by construction
recipe, so deriving the same thing twice returns the very same object and
relations over it stay composable.
"""

from __future__ import annotations

import itertools

from .errors import BudgetError

_fresh = itertools.count()

# recipe tuple -> FiniteSet; guarded only by construction-time insertion,
# values are immutable afterwards
_interned: dict[tuple, "FiniteSet"] = {}


class FiniteSet:
    """Ordered finite carrier of distinct element labels.

    `payload`, when present, holds one structured value per element (subset
    mask, index tuple, term object, ...) for the construction that produced
    the carrier.  It is positional: payload[i] belongs to elements[i].
    """

    __slots__ = ("name", "elements", "payload", "origin", "uid", "_index")

    def __init__(self, name, elements, payload=None, origin=None):
        elements = tuple(elements)
        index = {}
        for i, lab in enumerate(elements):
            if not isinstance(lab, str):
                raise TypeError(f"element label {lab!r} is not a string")
            if lab in index:
                raise ValueError(f"duplicate element label {lab!r} in carrier {name!r}")
            index[lab] = i
        if payload is not None:
            payload = tuple(payload)
            if len(payload) != len(elements):
                raise ValueError("payload length does not match element count")
        self.name = name
        self.elements = elements
        self.payload = payload
        self.origin = origin
        self.uid = next(_fresh)
        self._index = index

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label):
        return label in self._index

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not an element of carrier {self.name!r}") from None

    def __repr__(self):
        return f"FiniteSet({self.name!r}, {len(self)} elements)"


def intern(recipe, build):
    """Return the carrier for `recipe`, building it on first request."""
    got = _interned.get(recipe)
    if got is None:
        got = build()
        got.origin = recipe
        _interned[recipe] = got
    return got


def sum_of(a: FiniteSet, b: FiniteSet) -> FiniteSet:
    """Tagged disjoint union, left block first.  payload: (tag, base index)."""

    def build():
        labels = [f"inl({x})" for x in a.elements] + [f"inr({y})" for y in b.elements]
        payload = [(0, i) for i in range(len(a))] + [(1, j) for j in range(len(b))]
        return FiniteSet(f"{a.name}+{b.name}", labels, payload)

    return intern(("sum", a, b), build)


def product_of(a: FiniteSet, b: FiniteSet) -> FiniteSet:
    """Pair carrier, first component major.  payload: (i, j) index pairs."""

    def build():
        labels = [f"({x},{y})" for x in a.elements for y in b.elements]
        payload = [(i, j) for i in range(len(a)) for j in range(len(b))]
        return FiniteSet(f"{a.name}*{b.name}", labels, payload)

    return intern(("product", a, b), build)


def powerset_of(a: FiniteSet, cap: int = 4) -> FiniteSet:
    """All subsets of `a`, ordered by (size, then member labels).

    payload: bit mask over base indices.  Refuses carriers larger than
    `cap`; the carrier itself does not remember the cap, so different call
    sites with different caps still share one interned powerset.
    """
    if len(a) > cap:
        raise BudgetError(
            f"powerset of {a.name!r} has {2 ** len(a)} elements, over the cap for |A| = {cap}"
        )

    def build():
        order = sorted(range(len(a)), key=lambda i: a.elements[i])
        labels, payload = [], []
        for size in range(len(a) + 1):
            for combo in itertools.combinations(order, size):
                members = sorted(a.elements[i] for i in combo)
                labels.append("{" + ",".join(members) + "}")
                mask = 0
                for i in combo:
                    mask |= 1 << i
                payload.append(mask)
        return FiniteSet(f"P({a.name})", labels, payload)

    return intern(("pow", a), build)


def subset_members(p: FiniteSet, label: str) -> tuple[str, ...]:
    """Decode one powerset element back to base labels (base order)."""
    recipe = p.origin
    if not (isinstance(recipe, tuple) and recipe and recipe[0] == "pow"):
        raise ValueError(f"{p.name!r} is not an interned powerset carrier")
    base = recipe[1]
    mask = p.payload[p.index(label)]
    return tuple(lab for i, lab in enumerate(base.elements) if mask >> i & 1)
