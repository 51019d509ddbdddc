"""Hereditary collections and their flat closures.

The flat closure is computed two ways: top-down as the intersection of the
dependence-function images containing a set, and bottom-up by running the
staged recurrence on the dependence function itself.  The two agree for
matroids; for general hereditary collections they can differ, and the
difference is reported rather than treated as an error.
"""
from __future__ import annotations

from itertools import combinations

from .closure import extend_by_closure
from .core import (
    AttrSet,
    FdFunction,
    HereditaryCollection,
    Universe,
    _check_same,
    iter_bits,
    mask_key,
    submasks,
)
from .errors import CapExceeded, NotIndependent

FACET_CAP = 16

__all__ = [
    "HereditaryCollection",
    "from_facets",
    "uniform_collection",
    "delta",
    "ancestors",
    "kappa_topdown",
    "kappa_bottomup",
    "flat_report",
    "maximal_independent_subsets",
]


def from_facets(u: Universe, facets, cap: int = FACET_CAP) -> HereditaryCollection:
    """Downward closure of the given facets (an empty list gives ``{∅}``)."""
    if len(u) > cap:
        raise CapExceeded(f"|U| = {len(u)} exceeds the cap of {cap}")
    members = {0}
    for facet in facets:
        if isinstance(facet, AttrSet):
            _check_same(u, facet.universe)
            facet = facet.mask
        members.update(submasks(facet))
    return HereditaryCollection(u, members, check=False)


def uniform_collection(k: int, n: int, names=None) -> HereditaryCollection:
    """All subsets of size at most ``k`` of an ``n``-element universe."""
    u = Universe(names or [chr(ord("a") + i) for i in range(n)])
    facets = [sum(1 << i for i in c) for c in combinations(range(n), min(k, n))]
    return from_facets(u, facets)


def _delta_mask(h: HereditaryCollection, i: int) -> int:
    out = i
    for p in iter_bits(h.universe.full_mask & ~i):
        if i | (1 << p) not in h.members:
            out |= 1 << p
    return out


def delta_table(h: HereditaryCollection) -> dict[int, int]:
    """``{I: dependence image of I}`` for every member, cached on ``h``."""
    table = h._cache.get("delta")
    if table is None:
        table = h._cache["delta"] = {i: _delta_mask(h, i) for i in h.sorted_masks()}
    return table


def delta(h: HereditaryCollection, i: AttrSet) -> AttrSet:
    _check_same(h.universe, i.universe)
    if i.mask not in h.members:
        raise NotIndependent(f"{i} is not a member of the collection")
    return AttrSet(h.universe, delta_table(h)[i.mask])


def _ancestor_masks(h: HereditaryCollection, x: int) -> list[int]:
    images = {d for d in delta_table(h).values() if x & ~d == 0}
    return sorted(images, key=mask_key)


def ancestors(h: HereditaryCollection, x: AttrSet) -> list[AttrSet]:
    _check_same(h.universe, x.universe)
    return [AttrSet(h.universe, d) for d in _ancestor_masks(h, x.mask)]


def kappa_mask(h: HereditaryCollection, x: int) -> int:
    out = h.universe.full_mask  # empty intersection convention; never hit for nonempty h
    for d in delta_table(h).values():
        if x & ~d == 0:
            out &= d
    return out


def kappa_topdown(h: HereditaryCollection, x: AttrSet) -> AttrSet:
    _check_same(h.universe, x.universe)
    return AttrSet(h.universe, kappa_mask(h, x.mask))


def delta_function(h: HereditaryCollection) -> FdFunction:
    f = h._cache.get("delta_fn")
    if f is None:
        f = h._cache["delta_fn"] = FdFunction.from_map(h.universe, delta_table(h))
    return f


def kappa_bottomup(h: HereditaryCollection, x: AttrSet, cap: int = FACET_CAP) -> AttrSet:
    _check_same(h.universe, x.universe)
    if len(h.universe) > cap:
        raise CapExceeded(f"|U| = {len(h.universe)} exceeds the cap of {cap}")
    result, _ = extend_by_closure(delta_function(h), x)
    return result


def maximal_independent_subsets(h: HereditaryCollection, x: AttrSet) -> list[AttrSet]:
    """Members of ``h`` inside ``x`` that cannot be grown by another point of ``x``."""
    _check_same(h.universe, x.universe)
    out = []
    for i in h.sorted_masks():
        if i & ~x.mask:
            continue
        if all(i | (1 << p) not in h.members for p in iter_bits(x.mask & ~i)):
            out.append(AttrSet(h.universe, i))
    return out


def flat_report(h: HereditaryCollection, x: AttrSet) -> dict:
    """Both flat-closure computations for ``x`` and whether they diverge."""
    top = kappa_topdown(h, x)
    bottom = kappa_bottomup(h, x)
    return {
        "topdown": top,
        "bottomup": bottom,
        "ancestors": ancestors(h, x),
        "divergent": top != bottom,
    }
