"""Closures of attribute sets under a dependency function, closed sets and keys."""
from __future__ import annotations

from dataclasses import dataclass, field

from ._accel import ClosureIndex
from .core import (
    AttrSet,
    FdFunction,
    FdPair,
    HereditaryCollection,
    Universe,
    iter_bits,
    mask_key,
    submasks,
)
from .errors import CapExceeded, NotClosed, UniverseMismatch

ENUM_CAP = 12
MU_CAP = 12


@dataclass(frozen=True)
class Trace:
    """Stage sequence of the staged recurrence.

    ``stages[0]`` is the input set and every later stage strictly contains the
    one before it.  ``fired[t]`` lists the pairs whose left side first became
    contained in ``stages[t-1]`` and so contributed to ``stages[t]``;
    ``fired[0]`` is always empty.
    """

    stages: list = field(default_factory=list)
    fired: list = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.stages) - 1

    @property
    def result(self) -> AttrSet:
        return self.stages[-1]

    def fmt(self) -> list[str]:
        lines = []
        for t, stage in enumerate(self.stages):
            u = stage.universe
            line = f"stage {t}: {u.fmt(stage.mask, '{}')}"
            if self.fired[t]:
                line += "  <= " + "; ".join(p.fmt() for p in self.fired[t])
            lines.append(line)
        return lines


def _check(f: FdFunction, x: AttrSet):
    if x.universe is not f.universe and x.universe != f.universe:
        raise UniverseMismatch("set and function belong to different universes")


def extend_by_closure(f: FdFunction, x: AttrSet) -> tuple[AttrSet, Trace]:
    """Closure of ``x`` by repeatedly adding every right side whose left side is covered."""
    _check(f, x)
    u = f.universe
    pairs = f.masks()
    stage = x.mask
    stages = [AttrSet(u, stage)]
    fired = [[]]
    used = set()
    while True:
        delta = 0
        newly = []
        for l, r in pairs:
            if l & ~stage == 0:
                delta |= r
                if l not in used:
                    used.add(l)
                    newly.append(FdPair(AttrSet(u, l), AttrSet(u, r)))
        nxt = stage | delta
        if nxt == stage:
            break
        stage = nxt
        stages.append(AttrSet(u, stage))
        fired.append(newly)
    return stages[-1], Trace(stages, fired)


def closure_index(f: FdFunction) -> ClosureIndex:
    idx = f._cache.get("index")
    if idx is None:
        idx = f._cache["index"] = ClosureIndex(len(f.universe), f.masks())
    return idx


def closure_mask(f: FdFunction, x: int) -> int:
    return closure_index(f).closure(x)


def fast_closure(f: FdFunction, x: AttrSet) -> AttrSet:
    _check(f, x)
    return AttrSet(f.universe, closure_mask(f, x.mask))


def closure_table(f: FdFunction, cap: int = MU_CAP) -> list[int]:
    """``table[m]`` is the closure of bitmask ``m``, for every ``m`` in 2^U."""
    n = len(f.universe)
    if n > cap:
        raise CapExceeded(f"|U| = {n} exceeds the cap of {cap}")
    table = f._cache.get("table")
    if table is None:
        table = f._cache["table"] = closure_index(f).closure_many(list(range(1 << n)))
    return table


def is_closed(f: FdFunction, c: AttrSet) -> bool:
    _check(f, c)
    return closure_mask(f, c.mask) == c.mask


def closed_sets(f: FdFunction, cap: int = ENUM_CAP) -> list[AttrSet]:
    table = closure_table(f, cap)
    u = f.universe
    return [AttrSet(u, m) for m in sorted((m for m, c in enumerate(table) if c == m), key=mask_key)]


def _keys_within(f: FdFunction, c: int) -> list[int]:
    reach = {s for s in submasks(c) if closure_mask(f, s) == c}
    keys = [s for s in reach if not any(s & ~(1 << b) in reach for b in iter_bits(s))]
    return sorted(keys, key=mask_key)


def keys_of(f: FdFunction, c: AttrSet, cap: int = ENUM_CAP) -> list[AttrSet]:
    """Inclusion-minimal subsets of the closed set ``c`` whose closure is ``c``."""
    _check(f, c)
    if len(c) > cap:
        raise CapExceeded(f"|C| = {len(c)} exceeds the cap of {cap}")
    if closure_mask(f, c.mask) != c.mask:
        raise NotClosed(f"{c} is not closed")
    return [AttrSet(f.universe, k) for k in _keys_within(f, c.mask)]


def key_masks(f: FdFunction, cap: int = ENUM_CAP) -> list[int]:
    """All keys as bitmasks: sets none of whose one-smaller subsets keep the closure."""
    table = closure_table(f, cap)
    keys = [
        k for k in range(len(table))
        if all(table[k & ~(1 << b)] != table[k] for b in iter_bits(k))
    ]
    return sorted(keys, key=mask_key)


def all_keys(f: FdFunction, cap: int = ENUM_CAP) -> HereditaryCollection:
    return HereditaryCollection(f.universe, key_masks(f, cap), check=True)


def key_restriction(f: FdFunction, cap: int = ENUM_CAP) -> FdFunction:
    table = closure_table(f, cap)
    return FdFunction.from_map(f.universe, {k: table[k] for k in key_masks(f, cap)})


def canonicalize(raw, universe: Universe | None = None) -> FdFunction:
    """Merge duplicate left sides, then replace each right side by the closure of its left."""
    raw = list(raw)
    if universe is None:
        if not raw:
            raise ValueError("a universe is required to canonicalize an empty relation")
        universe = raw[0][0].universe
    merged = FdFunction(universe, raw, merge=True)
    idx = closure_index(merged)
    lefts = merged.lefts()
    rights = idx.closure_many(lefts)
    return FdFunction.from_map(universe, dict(zip(lefts, rights)))


def materialize_mu(f: FdFunction, cap: int = MU_CAP) -> FdFunction:
    """The full closure ``{(S, closure(S)) : S in 2^U}`` as an explicit function."""
    table = closure_table(f, cap)
    mu = FdFunction.from_map(f.universe, dict(enumerate(table)))
    mu._cache["table"] = table
    return mu


def is_materialized(f: FdFunction) -> bool:
    return len(f) == 1 << len(f.universe)
