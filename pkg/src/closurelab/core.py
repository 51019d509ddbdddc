"""Universe, attribute sets, dependency pairs and dependency functions.

Attribute sets are stored as Python ints used as bitmasks over the positions
of a :class:`Universe`.  Every higher module works on those masks directly in
its inner loops and wraps results back into :class:`AttrSet` at the API edge.
"""
from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple

from .errors import (
    DuplicateAttribute,
    DuplicateLeft,
    EmptyName,
    NotHereditary,
    UniverseMismatch,
)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


def mask_key(mask: int):
    """Canonical sort key: cardinality first, then lexicographic positions."""
    return (mask.bit_count(), bits(mask))


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, from ``mask`` itself down to 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class Universe:
    """Ordered, duplicate-free list of attribute names."""

    __slots__ = ("attributes", "index")

    def __init__(self, attributes: Iterable[str]):
        attributes = tuple(attributes)
        index = {}
        for pos, name in enumerate(attributes):
            if not isinstance(name, str) or not name.strip():
                raise EmptyName(f"attribute #{pos} has an empty name")
            if name in index:
                raise DuplicateAttribute(f"attribute {name!r} declared twice")
            index[name] = pos
        self.attributes = attributes
        self.index = index

    def __len__(self):
        return len(self.attributes)

    def __iter__(self):
        return iter(self.attributes)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Universe):
            return NotImplemented
        return self.attributes == other.attributes

    def __hash__(self):
        return hash(self.attributes)

    def __repr__(self):
        return f"Universe({list(self.attributes)!r})"

    @property
    def full_mask(self) -> int:
        return (1 << len(self.attributes)) - 1

    def mask_of(self, names) -> int:
        """Bitmask for ``names`` (an iterable of names or a whitespace-separated string)."""
        if isinstance(names, str):
            names = names.split()
        mask = 0
        for name in names:
            try:
                mask |= 1 << self.index[name]
            except KeyError:
                raise UniverseMismatch(f"unknown attribute {name!r}") from None
        return mask

    def set(self, names=()) -> "AttrSet":
        return AttrSet(self, self.mask_of(names))

    def from_mask(self, mask: int) -> "AttrSet":
        return AttrSet(self, mask)

    def empty(self) -> "AttrSet":
        return AttrSet(self, 0)

    def full(self) -> "AttrSet":
        return AttrSet(self, self.full_mask)

    def names(self, mask: int) -> list[str]:
        return [self.attributes[i] for i in iter_bits(mask)]

    def fmt(self, mask: int, empty: str = "") -> str:
        """Space-separated names in declaration order."""
        return " ".join(self.names(mask)) or empty


def make_universe(names) -> Universe:
    return Universe(names)


def _check_same(u: Universe, v: Universe):
    if u is not v and u != v:
        raise UniverseMismatch("operands belong to different universes")


class AttrSet:
    """An immutable subset of a universe's attributes."""

    __slots__ = ("universe", "mask")

    def __init__(self, universe: Universe, mask: int = 0):
        if mask < 0 or mask >> len(universe):
            raise UniverseMismatch(f"mask {mask:#x} has bits outside the universe")
        self.universe = universe
        self.mask = mask

    def _other(self, other) -> int:
        if not isinstance(other, AttrSet):
            raise TypeError(f"expected AttrSet, got {type(other).__name__}")
        _check_same(self.universe, other.universe)
        return other.mask

    def __or__(self, other):
        return AttrSet(self.universe, self.mask | self._other(other))

    def __and__(self, other):
        return AttrSet(self.universe, self.mask & self._other(other))

    def __sub__(self, other):
        return AttrSet(self.universe, self.mask & ~self._other(other))

    def __xor__(self, other):
        return AttrSet(self.universe, self.mask ^ self._other(other))

    def __invert__(self):
        return AttrSet(self.universe, self.universe.full_mask & ~self.mask)

    def __le__(self, other):
        return self.mask & ~self._other(other) == 0

    def __lt__(self, other):
        o = self._other(other)
        return self.mask != o and self.mask & ~o == 0

    def __ge__(self, other):
        return self._other(other) & ~self.mask == 0

    def __gt__(self, other):
        o = self._other(other)
        return self.mask != o and o & ~self.mask == 0

    def issubset(self, other) -> bool:
        return self <= other

    def __eq__(self, other):
        if not isinstance(other, AttrSet):
            return NotImplemented
        return self.mask == other.mask and self.universe == other.universe

    def __hash__(self):
        return hash(self.mask)

    def __len__(self):
        return self.mask.bit_count()

    def __bool__(self):
        return self.mask != 0

    def __iter__(self):
        return iter(self.universe.names(self.mask))

    def __contains__(self, name):
        pos = self.universe.index.get(name)
        return pos is not None and bool(self.mask >> pos & 1)

    def indices(self) -> tuple[int, ...]:
        return bits(self.mask)

    def sort_key(self):
        return mask_key(self.mask)

    def __str__(self):
        return "{" + ", ".join(self) + "}"

    def __repr__(self):
        return f"AttrSet({self.universe.fmt(self.mask)!r})"


def set_ops(a: AttrSet, b: AttrSet) -> dict:
    """Every binary set operation on ``a`` and ``b`` at once."""
    return {
        "union": a | b,
        "intersection": a & b,
        "difference": a - b,
        "subset": a <= b,
        "proper_subset": a < b,
    }


class FdPair(NamedTuple):
    left: AttrSet
    right: AttrSet

    def fmt(self) -> str:
        u = self.left.universe
        lhs = u.fmt(self.left.mask)
        rhs = u.fmt(self.right.mask)
        return f"{lhs} -> {rhs}".strip()

    @property
    def is_reflexive(self) -> bool:
        return self.left.mask == self.right.mask


class FdFunction:
    """A set of dependency pairs with at most one right side per left side.

    Internally a ``{left_mask: right_mask}`` dict; iteration always follows the
    canonical order (left cardinality, then lexicographic left positions).
    """

    __slots__ = ("universe", "_map", "_order", "_cache")

    def __init__(self, universe: Universe, pairs: Iterable = (), merge: bool = False):
        table: dict[int, int] = {}
        for pair in pairs:
            left, right = pair
            if isinstance(left, AttrSet):
                _check_same(universe, left.universe)
                _check_same(universe, right.universe)
                left, right = left.mask, right.mask
            elif left >> len(universe) or right >> len(universe):
                raise UniverseMismatch("pair has bits outside the universe")
            if left in table:
                if not merge:
                    raise DuplicateLeft(
                        f"left side {{{universe.fmt(left)}}} appears twice"
                    )
                table[left] |= right
            else:
                table[left] = right
        self.universe = universe
        self._map = table
        self._order = None
        self._cache = {}

    @classmethod
    def from_map(cls, universe: Universe, table: dict) -> "FdFunction":
        f = cls.__new__(cls)
        f.universe = universe
        f._map = dict(table)
        f._order = None
        f._cache = {}
        return f

    @classmethod
    def parse_pairs(cls, universe: Universe, text_pairs, merge: bool = False):
        """Build from ``[("a c", "d"), ...]`` name strings."""
        return cls(
            universe,
            [(universe.mask_of(l), universe.mask_of(r)) for l, r in text_pairs],
            merge=merge,
        )

    # -- canonical order -------------------------------------------------
    def lefts(self) -> list[int]:
        if self._order is None:
            self._order = sorted(self._map, key=mask_key)
        return self._order

    def masks(self) -> list[tuple[int, int]]:
        """``(left, right)`` bitmask pairs in canonical order."""
        m = self._map
        return [(l, m[l]) for l in self.lefts()]

    def pairs(self) -> list[FdPair]:
        u = self.universe
        return [FdPair(AttrSet(u, l), AttrSet(u, r)) for l, r in self.masks()]

    def __iter__(self):
        return iter(self.pairs())

    def __len__(self):
        return len(self._map)

    def as_map(self) -> dict[int, int]:
        return dict(self._map)

    def right_of(self, left: int):
        return self._map.get(left)

    def has_mask(self, left: int, right: int) -> bool:
        return self._map.get(left) == right

    def __contains__(self, pair):
        left, right = pair
        if isinstance(left, AttrSet):
            if left.universe != self.universe:
                return False
            left, right = left.mask, right.mask
        return self._map.get(left) == right

    def __eq__(self, other):
        if not isinstance(other, FdFunction):
            return NotImplemented
        return self.universe == other.universe and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def sort_key(self):
        return tuple((mask_key(l), mask_key(r)) for l, r in self.masks())

    # -- set algebra on functions -----------------------------------------
    def _other_map(self, other: "FdFunction") -> dict:
        _check_same(self.universe, other.universe)
        return other._map

    def issubset(self, other: "FdFunction") -> bool:
        om = self._other_map(other)
        return all(om.get(l) == r for l, r in self._map.items())

    __le__ = issubset

    def __sub__(self, other):
        om = self._other_map(other)
        return FdFunction.from_map(
            self.universe, {l: r for l, r in self._map.items() if om.get(l) != r}
        )

    def __or__(self, other):
        # Union of two functions; a clash of right sides breaks functionality.
        om = self._other_map(other)
        table = dict(self._map)
        for l, r in om.items():
            if table.get(l, r) != r:
                raise DuplicateLeft(
                    f"left side {{{self.universe.fmt(l)}}} maps to two right sides"
                )
            table[l] = r
        return FdFunction.from_map(self.universe, table)

    def without(self, pair) -> "FdFunction":
        left = pair[0].mask if isinstance(pair[0], AttrSet) else pair[0]
        table = dict(self._map)
        table.pop(left, None)
        return FdFunction.from_map(self.universe, table)

    def restrict_to(self, lefts: Iterable[int]) -> "FdFunction":
        m = self._map
        return FdFunction.from_map(self.universe, {l: m[l] for l in lefts})

    def filter(self, predicate) -> "FdFunction":
        """Sub-function of the ``(left, right)`` mask pairs accepted by ``predicate``."""
        return FdFunction.from_map(
            self.universe, {l: r for l, r in self._map.items() if predicate(l, r)}
        )

    def fmt_lines(self) -> list[str]:
        return [p.fmt() for p in self.pairs()]

    def __repr__(self):
        return "FdFunction({" + "; ".join(self.fmt_lines()) + "})"


def insert_pair(f: FdFunction, p: FdPair, merge: bool = False) -> FdFunction:
    _check_same(f.universe, p.left.universe)
    _check_same(f.universe, p.right.universe)
    table = f.as_map()
    l, r = p.left.mask, p.right.mask
    if l in table:
        if not merge:
            raise DuplicateLeft(f"left side {p.left} already present")
        table[l] |= r
    else:
        table[l] = r
    return FdFunction.from_map(f.universe, table)


def canonical_order(f: FdFunction) -> list[FdPair]:
    return f.pairs()


class HereditaryCollection:
    """A downward-closed family of attribute sets over one universe."""

    __slots__ = ("universe", "members", "_cache")

    def __init__(self, universe: Universe, members: Iterable[int], check: bool = True):
        self.universe = universe
        self.members = frozenset(m.mask if isinstance(m, AttrSet) else m for m in members)
        self._cache = {}
        if check:
            bad = self.first_heredity_violation()
            if bad is not None:
                member, missing = bad
                raise NotHereditary(
                    f"{{{universe.fmt(member)}}} is a member but its subset "
                    f"{{{universe.fmt(missing)}}} is not"
                )

    def first_heredity_violation(self):
        for m in sorted(self.members, key=mask_key):
            for b in iter_bits(m):
                if m & ~(1 << b) not in self.members:
                    return m, m & ~(1 << b)
        return None

    def __contains__(self, item):
        mask = item.mask if isinstance(item, AttrSet) else item
        return mask in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        u = self.universe
        return iter([AttrSet(u, m) for m in self.sorted_masks()])

    def __eq__(self, other):
        if not isinstance(other, HereditaryCollection):
            return NotImplemented
        return self.universe == other.universe and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def sorted_masks(self) -> list[int]:
        if "sorted" not in self._cache:
            self._cache["sorted"] = sorted(self.members, key=mask_key)
        return self._cache["sorted"]

    def maximal_masks(self) -> list[int]:
        """Facets: members with no proper superset in the collection."""
        ms = self.members
        full = self.universe.full_mask
        return [
            m for m in self.sorted_masks()
            if not any(m | (1 << b) in ms for b in iter_bits(full & ~m))
        ]

    def __repr__(self):
        u = self.universe
        inner = ", ".join("{" + u.fmt(m) + "}" for m in self.sorted_masks())
        return f"HereditaryCollection([{inner}])"
