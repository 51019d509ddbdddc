"""Brute-force ground truth, kept independent of the production code paths.

Nothing here calls the counter-based closure kernel: closures are naive
full-scan fixpoints, either in plain Python or vectorised over every
subfamily of a small pair list.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from ._accel import subset_closures
from .core import FdFunction, Universe
from .errors import BadParams, CapExceeded, NotMaterialized

TABLE_CAP = 10
COVER_CAP = 4


def naive_closure(pairs, x: int) -> int:
    """Repeated full passes over ``pairs`` until nothing changes."""
    cur = x
    while True:
        nxt = cur
        for l, r in pairs:
            if l & ~nxt == 0:
                nxt |= r
        if nxt == cur:
            return cur
        cur = nxt


def oracle_closure_table(f: FdFunction, cap: int = TABLE_CAP) -> FdFunction:
    n = len(f.universe)
    if n > cap:
        raise CapExceeded(f"|U| = {n} exceeds the oracle cap of {cap}")
    pairs = list(f.as_map().items())
    return FdFunction.from_map(f.universe, {s: naive_closure(pairs, s) for s in range(1 << n)})


def _require_small_mu(mu: FdFunction, cap: int):
    n = len(mu.universe)
    if n > cap:
        raise CapExceeded(f"|U| = {n} exceeds the exhaustive cap of {cap}")
    if len(mu) != 1 << n:
        raise NotMaterialized("expected the closure materialized over all of 2^U")


def subset_cover_flags(mu: FdFunction, cap: int = COVER_CAP):
    """Cover and nonredundancy flags for every subfamily of mu's non-reflexive pairs.

    Returns ``(pairs, is_cover, is_basis)`` where the boolean arrays are
    indexed by bitmasks over positions in ``pairs``.
    """
    _require_small_mu(mu, cap)
    pairs = [(l, r) for l, r in mu.masks() if l != r]
    table = mu.as_map()
    queries = np.arange(1 << len(mu.universe), dtype=np.int64)
    targets = np.array([table[int(s)] for s in queries], dtype=np.int64)
    out = subset_closures([l for l, _ in pairs], [r for _, r in pairs], queries)
    cover = (out == targets[None, :]).all(axis=1)
    M = cover.shape[0]
    basis = cover.copy()
    ids = np.arange(M)
    for j in range(len(pairs)):
        has = (ids >> j) & 1 == 1
        basis &= ~(has & cover[ids ^ (1 << j)])
    return pairs, cover, basis


def _family(mu: FdFunction, pairs, m: int) -> FdFunction:
    return FdFunction.from_map(
        mu.universe, {pairs[j][0]: pairs[j][1] for j in range(len(pairs)) if m >> j & 1}
    )


def oracle_nonredundant_covers(mu: FdFunction, cap: int = COVER_CAP) -> list[FdFunction]:
    """Every subfamily of mu's non-reflexive pairs that covers mu and has no removable pair."""
    pairs, _, basis = subset_cover_flags(mu, cap)
    found = [_family(mu, pairs, int(m)) for m in np.flatnonzero(basis)]
    return sorted(found, key=lambda f: f.sort_key())


def span_masks_all_subsets(mu: FdFunction, cap: int = COVER_CAP):
    """Span of every subfamily of ``mu`` (reflexive pairs included).

    Returns ``(pairs, spans)`` with ``spans[m]`` the bitmask, over positions
    in ``pairs``, of the pairs derivable from the subfamily ``m``.
    """
    _require_small_mu(mu, cap)
    pairs = mu.masks()
    lefts = np.array([l for l, _ in pairs], dtype=np.int64)
    rights = np.array([r for _, r in pairs], dtype=np.int64)
    out = subset_closures(lefts, rights, lefts)
    weights = np.int64(1) << np.arange(len(pairs), dtype=np.int64)
    return pairs, ((out == rights[None, :]) * weights).sum(axis=1)


def popcounts(arr: np.ndarray) -> np.ndarray:
    arr = arr.astype(np.int64)
    out = np.zeros(arr.shape, dtype=np.int64)
    while arr.any():
        out += arr & 1
        arr = arr >> 1
    return out


@dataclass(frozen=True)
class InstanceParams:
    universe_size: int
    max_pairs: int = 5
    kind: str = "fd"
    max_facets: int = 3


def _names(n: int) -> list[str]:
    return [chr(ord("a") + i) for i in range(n)]


def random_instance(seed: int, params: InstanceParams):
    """Deterministic random FD function (canonicalized) or hereditary collection."""
    from .closure import canonicalize
    from .flats import from_facets

    n = params.universe_size
    if not 1 <= n <= 8:
        raise BadParams("universe_size must be between 1 and 8")
    if params.max_pairs < 0 or params.max_facets < 0:
        raise BadParams("counts must be non-negative")
    if params.kind not in ("fd", "hereditary"):
        raise BadParams(f"unknown instance kind {params.kind!r}")
    rng = random.Random(f"{params.kind}:{seed}:{n}:{params.max_pairs}:{params.max_facets}")
    u = Universe(_names(n))
    full = u.full_mask
    if params.kind == "hereditary":
        count = rng.randint(1, max(1, params.max_facets)) if params.max_facets else 0
        facets = [rng.randint(0, full) for _ in range(count)]
        return from_facets(u, facets)
    raw = []
    for _ in range(rng.randint(1, params.max_pairs) if params.max_pairs else 0):
        size = 0 if rng.random() < 0.05 else rng.choice((1, 1, 1, 2, 2, 3))
        left = 0
        for p in rng.sample(range(n), min(size, n)):
            left |= 1 << p
        right = 0
        for p in rng.sample(range(n), rng.randint(1, min(2, n))):
            right |= 1 << p
        raw.append((left, right))
    return canonicalize(raw, universe=u)



def large_instance(n_attrs: int = 500, n_pairs: int = 5000, seed: int = 0) -> FdFunction:
    """Canonical function with ``n_pairs`` distinct left sides, for timing runs.

    Left sides have 1 to 3 attributes and raw right sides point a short way
    forward in declaration order, so closures form long chains without
    collapsing to the whole universe.
    """
    from .closure import canonicalize

    rng = random.Random(f"large:{seed}:{n_attrs}:{n_pairs}")
    u = Universe(f"x{i}" for i in range(n_attrs))
    raw = {}
    while len(raw) < n_pairs:
        k = rng.choice((1, 2, 2, 3))
        left = 0
        for p in rng.sample(range(n_attrs), k):
            left |= 1 << p
        hi = left.bit_length() - 1
        right = 0
        for _ in range(rng.randint(1, 3)):
            right |= 1 << min(n_attrs - 1, hi + rng.randint(1, 40))
        raw[left] = raw.get(left, 0) | right
    return canonicalize(list(raw.items()), universe=u)
