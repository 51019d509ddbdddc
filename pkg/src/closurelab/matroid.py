"""The matroid whose bases are the nonredundant covers of a closure.

Covers here are functions ``f`` with every pair of the form ``(S, closure(S))``.
Direct determination between two sets with the same closure ``C`` is decided
from the interior of any cover at ``C`` (the pairs whose right side is a
proper subset of ``C``), which does not depend on the chosen cover.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .closure import (
    Trace,
    closure_index,
    closure_mask,
    closure_table,
    extend_by_closure,
    is_materialized,
)
from .core import AttrSet, FdFunction, FdPair, _check_same, iter_bits, mask_key
from .covers import is_cover, is_independent, nonredundant_cover
from .errors import (
    CapExceeded,
    ClosureMismatch,
    EmptyTop,
    InvariantViolation,
    NoDirectDetermination,
    NotACover,
    NotClosed,
    NotMaterialized,
    NotNonredundantCover,
    PairMismatch,
    PairNotInMu,
    UnequalClosures,
)

BASIS_CAP = 8
MAX_BASES = 10_000


@dataclass(frozen=True)
class RangeRestriction:
    body: FdFunction
    interior: FdFunction
    top: FdFunction
    closed_set: AttrSet


def restrict(f: FdFunction, c: AttrSet, ambient: FdFunction | None = None) -> RangeRestriction:
    """Split the pairs of ``f`` with right side inside ``c`` into interior and top.

    ``ambient`` is any function generating the closure ``c`` must be closed
    under; it defaults to ``f`` itself.
    """
    amb = f if ambient is None else ambient
    _check_same(f.universe, c.universe)
    _check_same(amb.universe, c.universe)
    C = c.mask
    if closure_mask(amb, C) != C:
        raise NotClosed(f"{c} is not closed")
    body = f.filter(lambda l, r: r & ~C == 0)
    return RangeRestriction(
        body=body,
        interior=body.filter(lambda l, r: r != C),
        top=body.filter(lambda l, r: r == C),
        closed_set=c,
    )


def _interior_active(f: FdFunction, C: int) -> np.ndarray:
    key = ("interior", C)
    act = f._cache.get(key)
    if act is None:
        act = np.array([r & ~C == 0 and r != C for _, r in f.masks()], dtype=bool)
        f._cache[key] = act
    return act


def interior_closure_mask(f: FdFunction, C: int, x: int) -> int:
    """Closure of ``x`` using only the pairs of ``f`` whose right side is a proper subset of ``C``."""
    return closure_index(f).closure(x, _interior_active(f, C))


def dd_mask(f: FdFunction, C: int, x: int, y: int) -> bool:
    return y & ~interior_closure_mask(f, C, x) == 0


def check_cover_shape(f: FdFunction):
    """Every pair of ``f`` must be ``(S, closure of S under f)``."""
    idx = closure_index(f)
    for l, r in f.masks():
        if idx.closure(l) != r:
            u = f.universe
            raise NotACover(
                f"pair {{{u.fmt(l)}}} -> {{{u.fmt(r)}}} is not closed under its own function"
            )


def directly_determines(cover: FdFunction, x: AttrSet, y: AttrSet,
                        mu: FdFunction | None = None) -> tuple[bool, Trace]:
    _check_same(cover.universe, x.universe)
    _check_same(cover.universe, y.universe)
    check_cover_shape(cover)
    if mu is not None and not is_cover(cover, mu):
        raise NotACover("function does not cover the given closure")
    C = closure_mask(cover, x.mask)
    if closure_mask(cover, y.mask) != C:
        raise UnequalClosures(f"{x} and {y} have different closures")
    interior = cover.filter(lambda l, r: r & ~C == 0 and r != C)
    reached, trace = extend_by_closure(interior, x)
    return y.mask & ~reached.mask == 0, trace


def _top_lefts(cover: FdFunction, C: int) -> list[int]:
    return [l for l, r in cover.masks() if r == C]


def dd_target_case(cover: FdFunction, y: AttrSet, c: AttrSet) -> tuple[FdPair, str]:
    """Like :func:`dd_target` but also names the case ("subset", "closure" or "stage")."""
    _check_same(cover.universe, y.universe)
    _check_same(cover.universe, c.universe)
    C = c.mask
    if closure_mask(cover, C) != C:
        raise NotClosed(f"{c} is not closed")
    if closure_mask(cover, y.mask) != C:
        raise ClosureMismatch(f"closure of {y} is not {c}")
    tops = _top_lefts(cover, C)
    if not tops:
        raise EmptyTop(f"no pair of the cover has right side {c}")
    u = cover.universe

    def pair(z):
        return FdPair(AttrSet(u, z), AttrSet(u, C))

    Y = y.mask
    for z in tops:
        if z & ~Y == 0:
            return pair(z), "subset"
    if C & ~interior_closure_mask(cover, C, Y) == 0:
        return pair(tops[0]), "closure"
    _, trace = extend_by_closure(cover, y)
    for stage in trace.stages:
        hits = [z for z in tops if z & ~stage.mask == 0]
        if hits:
            z = hits[0]
            if not dd_mask(cover, C, Y, z):
                raise InvariantViolation(
                    f"stage search picked {{{u.fmt(z)}}}, which {y} does not directly determine"
                )
            return pair(z), "stage"
    raise InvariantViolation(f"no top pair fires while closing {y}")


def dd_target(cover: FdFunction, y: AttrSet, c: AttrSet) -> FdPair:
    """A top pair ``(Z, c)`` of ``cover`` with ``y`` directly determining ``Z``."""
    return dd_target_case(cover, y, c)[0]


def exchange(basis: FdFunction, out: FdPair, in_: FdPair) -> FdFunction:
    """Swap ``out`` for ``in_``; requires ``out``'s left side to directly determine ``in_``'s."""
    _check_same(basis.universe, out.left.universe)
    _check_same(basis.universe, in_.left.universe)
    if out not in basis:
        raise PairMismatch(f"{out.fmt()} is not in the basis")
    if out == in_:
        return basis
    C = out.right.mask
    if in_.right.mask != C:
        raise PairMismatch("pairs belong to different closed sets")
    if closure_mask(basis, in_.left.mask) != C:
        raise PairMismatch(f"{in_.fmt()} is not a pair of the closure")
    if in_ in basis:
        raise PairMismatch(f"{in_.fmt()} is already in the basis")
    if not dd_mask(basis, C, out.left.mask, in_.left.mask):
        raise NoDirectDetermination(f"{out.left} does not directly determine {in_.left}")
    table = basis.as_map()
    del table[out.left.mask]
    table[in_.left.mask] = C
    result = FdFunction.from_map(basis.universe, table)
    if len(result) != len(basis) or not is_cover(result, basis):
        raise InvariantViolation(f"exchanging {out.fmt()} for {in_.fmt()} lost the cover")
    return result


def _require_nonredundant(f: FdFunction):
    if not is_independent(f):
        raise NotNonredundantCover("function has a removable pair")


def dd_bijection(a: FdFunction, b: FdFunction) -> list[tuple[FdPair, FdPair]]:
    """Match every pair of ``a`` with the unique pair of ``b`` its left side directly determines."""
    _check_same(a.universe, b.universe)
    for f in (a, b):
        _require_nonredundant(f)
        check_cover_shape(f)
    if not is_cover(a, b):
        raise NotNonredundantCover("the two functions cover different closures")

    def match(src, dst):
        out = {}
        dst_by_c = {}
        for l, r in dst.masks():
            dst_by_c.setdefault(r, []).append(l)
        for x, c in src.masks():
            hits = [y for y in dst_by_c.get(c, []) if dd_mask(src, c, x, y)]
            if len(hits) != 1:
                u = src.universe
                raise InvariantViolation(
                    f"{{{u.fmt(x)}}} directly determines {len(hits)} pairs of the other cover"
                )
            out[x] = hits[0]
        return out

    fwd = match(a, b)
    back = match(b, a)
    if len(set(fwd.values())) != len(fwd) or len(fwd) != len(b):
        raise InvariantViolation("direct determination is not a bijection")
    for x, y in fwd.items():
        if back[y] != x:
            raise InvariantViolation("direct determination is not self-inverse")
    u = a.universe
    mb = b.as_map()
    return [
        (FdPair(AttrSet(u, x), AttrSet(u, c)), FdPair(AttrSet(u, fwd[x]), AttrSet(u, mb[fwd[x]])))
        for x, c in a.masks()
    ]


def _require_mu(mu: FdFunction, cap: int):
    n = len(mu.universe)
    if n > cap:
        raise CapExceeded(f"|U| = {n} exceeds the cap of {cap}")
    if not is_materialized(mu):
        raise NotMaterialized("expected the closure materialized over all of 2^U")


def enumerate_bases(mu: FdFunction, cap: int = MAX_BASES, basis_cap: int = BASIS_CAP) -> list[FdFunction]:
    """Nonredundant covers reachable from one another by single-pair exchanges."""
    _require_mu(mu, basis_cap)
    by_c: dict[int, list[int]] = {}
    for l, r in mu.masks():
        if l != r:
            by_c.setdefault(r, []).append(l)

    start = nonredundant_cover(mu)
    seen = {frozenset(start.as_map())}
    found = [start]
    queue = deque([start])
    while queue:
        basis = queue.popleft()
        table = basis.as_map()
        for x, c in basis.masks():
            for y in by_c.get(c, ()):
                if y in table or not dd_mask(basis, c, x, y):
                    continue
                nxt = dict(table)
                del nxt[x]
                nxt[y] = c
                key = frozenset(nxt)
                if key in seen:
                    continue
                cand = FdFunction.from_map(mu.universe, nxt)
                if not is_independent(cand):
                    continue
                seen.add(key)
                found.append(cand)
                if len(found) > cap:
                    raise CapExceeded(f"more than {cap} bases")
                queue.append(cand)
    return sorted(found, key=lambda f: f.sort_key())


def top_signature(cover: FdFunction) -> list[AttrSet]:
    """Closed sets at which the nonredundant cover has a pair with that right side."""
    _require_nonredundant(cover)
    u = cover.universe
    return [AttrSet(u, c) for c in sorted({r for _, r in cover.masks()}, key=mask_key)]


@dataclass(frozen=True)
class SingletonStatus:
    pair: FdPair
    reflexive: bool
    left_is_key: bool
    determines_closure: bool
    mat12_dependent: bool
    mat12_verdict: str
    locally_independent: bool
    in_some_basis: bool | None
    oracle_independent: bool
    conflict: bool

    def as_dict(self) -> dict:
        return {
            "pair": self.pair.fmt(),
            "reflexive": self.reflexive,
            "left_is_key": self.left_is_key,
            "determines_closure": self.determines_closure,
            "mat12_dependent": self.mat12_dependent,
            "mat12_verdict": self.mat12_verdict,
            "locally_independent": self.locally_independent,
            "in_some_basis": self.in_some_basis,
            "oracle_independent": self.oracle_independent,
            "conflict": self.conflict,
        }


def singleton_status(mu: FdFunction, p: FdPair, basis_cap: int = BASIS_CAP,
                     bases: list[FdFunction] | None = None) -> SingletonStatus:
    """Compare the sufficient dependence test for a one-pair function with ground truth.

    ``mu`` may be any function generating the closure.  The test only ever
    proves dependence, so a negative answer is reported as "undetermined".
    """
    _check_same(mu.universe, p.left.universe)
    X, C = p.left.mask, p.right.mask
    if closure_mask(mu, X) != C:
        raise PairNotInMu(f"{p.fmt()} is not a pair of the closure")
    reflexive = X == C
    left_is_key = all(closure_mask(mu, X & ~(1 << b)) != C for b in iter_bits(X))
    determines = C & ~interior_closure_mask(mu, C, X) == 0
    dependent = reflexive or not left_is_key or determines
    single = FdFunction.from_map(mu.universe, {X: C})
    local = is_independent(single)
    in_basis = None
    if bases is None and len(mu.universe) <= basis_cap:
        full = mu if is_materialized(mu) else FdFunction.from_map(mu.universe, dict(enumerate(closure_table(mu))))
        bases = enumerate_bases(full, basis_cap=basis_cap)
    if bases is not None:
        in_basis = any(b.has_mask(X, C) for b in bases)
    oracle = local and (in_basis if in_basis is not None else True)
    return SingletonStatus(
        pair=p,
        reflexive=reflexive,
        left_is_key=left_is_key,
        determines_closure=determines,
        mat12_dependent=dependent,
        mat12_verdict="dependent" if dependent else "undetermined",
        locally_independent=local,
        in_some_basis=in_basis,
        oracle_independent=oracle,
        conflict=dependent and oracle,
    )
