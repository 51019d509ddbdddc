"""Removable pairs, covers, spans and one-pass redundancy elimination."""
from __future__ import annotations

from .closure import MU_CAP, closure_index, closure_table, is_materialized
from .core import FdFunction, FdPair, _check_same
from .errors import CapExceeded, NotMaterialized, NotSubsetOfMu


def _removable_flags(f: FdFunction) -> list[bool]:
    idx = closure_index(f)
    active = idx.all_active.copy()
    flags = []
    for j, (l, r) in enumerate(f.masks()):
        active[j] = False
        flags.append(r & ~idx.closure(l, active, target=r) == 0)
        active[j] = True
    return flags


def removable_pairs(f: FdFunction) -> list[FdPair]:
    """Pairs whose right side is still derivable from their left side once they are dropped."""
    return [p for p, bad in zip(f.pairs(), _removable_flags(f)) if bad]


def is_independent(f: FdFunction) -> bool:
    """No pair of ``f`` is removable."""
    return not any(_removable_flags(f))


def nonredundant_cover(f: FdFunction) -> FdFunction:
    # Single scan in canonical order against the partially pruned function.
    idx = closure_index(f)
    active = idx.all_active.copy()
    masks = f.masks()
    for j, (l, r) in enumerate(masks):
        active[j] = False
        if r & ~idx.closure(l, active, target=r):
            active[j] = True
    return FdFunction.from_map(f.universe, {l: r for (l, r), keep in zip(masks, active) if keep})


def derives_all(f: FdFunction, g: FdFunction) -> bool:
    """Every pair of ``g`` follows from ``f``."""
    idx = closure_index(f)
    return all(r & ~idx.closure(l, target=r) == 0 for l, r in g.masks())


def is_cover(f: FdFunction, ref: FdFunction) -> bool:
    _check_same(f.universe, ref.universe)
    return derives_all(f, ref) and derives_all(ref, f)


def _check_mu(mu: FdFunction, cap: int):
    n = len(mu.universe)
    if n > cap:
        raise CapExceeded(f"|U| = {n} exceeds the cap of {cap}")
    if not is_materialized(mu):
        raise NotMaterialized("span needs the closure materialized over all of 2^U")


def span(f: FdFunction, mu: FdFunction, cap: int = MU_CAP) -> FdFunction:
    """Pairs ``(S, closure(S))`` of ``mu`` that ``f`` alone already derives."""
    _check_same(f.universe, mu.universe)
    _check_mu(mu, cap)
    if not f.issubset(mu):
        extra = (f - mu).pairs()[0]
        raise NotSubsetOfMu(f"pair {extra.fmt()} is not in mu")
    target = mu.as_map()
    got = closure_table(f, cap)
    return FdFunction.from_map(f.universe, {s: c for s, c in target.items() if got[s] == c})

