"""Brute-force audit of the closure, cover, flat and matroid claims.

Each claim has a checker that looks at one instance and either passes,
fails with a detail record, or declares itself capped when the instance is
too large for exhaustive checking.  Failing instances are shrunk greedily
(drop a pair or facet, drop an attribute) while the failure persists, and the
shrunken instance is stored as a replayable witness.

Claims come in two groups.  ``must-pass`` claims are expected to hold on
every instance and make the suite exit non-zero when they fail.
``audited-open`` claims are recorded with witnesses but never fail the run.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .closure import (
    closure_index,
    closure_table,
    extend_by_closure,
    key_masks,
    key_restriction,
    materialize_mu,
    canonicalize,
)
from .core import AttrSet, FdFunction, HereditaryCollection, Universe, iter_bits, mask_key, submasks
from .covers import is_cover, is_independent, nonredundant_cover, span
from .errors import InvariantViolation
from .fileio import (
    format_facets_file,
    format_fd_file,
    parse_facets_file,
    parse_fd_file,
)
from .flats import delta_table, kappa_bottomup, kappa_mask
from .matroid import (
    dd_bijection,
    dd_mask,
    enumerate_bases,
    interior_closure_mask,
    singleton_status,
    top_signature,
)
from .oracle import (
    COVER_CAP,
    InstanceParams,
    oracle_closure_table,
    popcounts,
    random_instance,
    span_masks_all_subsets,
    subset_cover_flags,
)

MUST_PASS = "must-pass"
AUDITED_OPEN = "audited-open"

PASS, FAIL, CAPPED = "pass", "fail", "capped"

TABLE_CAP = 10
FLAT_CAP = 8
DD_CAP = 6
MAX_BASIS_PAIRS = 4096
MAX_INDEPENDENT = 20000
SAMPLE_SUBFAMILIES = 24
SHRINK_BUDGET = 400


class Capped(Exception):
    pass


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

@dataclass
class Instance:
    """An audit subject: a canonical dependency function or a hereditary collection."""

    instance_id: str
    kind: str
    universe: Universe
    fd: FdFunction | None = None
    h: HereditaryCollection | None = None

    @classmethod
    def from_fd(cls, instance_id, f: FdFunction):
        return cls(instance_id, "fd", f.universe, fd=f)

    @classmethod
    def from_hereditary(cls, instance_id, h: HereditaryCollection):
        return cls(instance_id, "hereditary", h.universe, h=h)

    def text(self) -> str:
        return format_fd_file(self.fd) if self.kind == "fd" else format_facets_file(self.h)

    @classmethod
    def from_text(cls, kind: str, text: str, instance_id="witness"):
        if kind == "fd":
            return cls.from_fd(instance_id, parse_fd_file(text)[1])
        return cls.from_hereditary(instance_id, parse_facets_file(text))

    def shrink_candidates(self):
        """Smaller instances: one pair or facet removed, or one attribute removed."""
        u = self.universe
        if self.kind == "fd":
            masks = self.fd.masks()
            for j in range(len(masks)):
                rest = masks[:j] + masks[j + 1:]
                yield Instance.from_fd(self.instance_id, canonicalize(rest, universe=u))
        else:
            facets = [m for m in self.h.maximal_masks() if m]
            for j in range(len(facets)):
                rest = facets[:j] + facets[j + 1:]
                yield Instance.from_hereditary(self.instance_id, _facets(u, rest))
        if len(u) > 1:
            for a in range(len(u)):
                yield self._drop_attribute(a)

    def _drop_attribute(self, a: int) -> "Instance":
        u = self.universe
        v = Universe(name for i, name in enumerate(u.attributes) if i != a)
        low = (1 << a) - 1

        def squeeze(m):
            return (m & low) | ((m >> (a + 1)) << a)

        if self.kind == "fd":
            raw = [(squeeze(l), squeeze(r)) for l, r in self.fd.masks() if not l >> a & 1]
            return Instance.from_fd(self.instance_id, canonicalize(raw, universe=v))
        facets = [squeeze(m) for m in self.h.maximal_masks()]
        return Instance.from_hereditary(self.instance_id, _facets(v, facets))


def _facets(u, facets):
    from .flats import from_facets

    return from_facets(u, facets)


class Context:
    """Lazily computed facts about one instance, shared by every checker."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.u = inst.universe
        self.n = len(inst.universe)

    def fmt(self, mask: int) -> str:
        return self.u.fmt(mask, "{}")

    def need(self, cap: int):
        if self.n > cap:
            raise Capped(f"|U| = {self.n} > {cap}")

    @cached_property
    def fn(self) -> FdFunction:
        """A function generating the instance's closure."""
        if self.inst.kind == "fd":
            return self.inst.fd
        self.need(FLAT_CAP)
        h = self.inst.h
        return FdFunction.from_map(self.u, {x: kappa_mask(h, x) for x in range(1 << self.n)})

    @cached_property
    def table(self) -> list[int]:
        self.need(TABLE_CAP)
        return closure_table(self.fn, TABLE_CAP)

    @cached_property
    def mu(self) -> FdFunction:
        self.need(TABLE_CAP)
        return materialize_mu(self.fn, TABLE_CAP)

    @cached_property
    def keys(self) -> set[int]:
        self.need(TABLE_CAP)
        return set(key_masks(self.fn, TABLE_CAP))

    @cached_property
    def closed(self) -> list[int]:
        return sorted((m for m, c in enumerate(self.table) if c == m), key=mask_key)

    @cached_property
    def hc(self) -> HereditaryCollection:
        """The hereditary collection the flat-closure claims are checked on."""
        if self.inst.kind == "hereditary":
            return self.inst.h
        self.need(FLAT_CAP)
        return HereditaryCollection(self.u, self.keys, check=False)

    @cached_property
    def kappa(self) -> list[int]:
        self.need(FLAT_CAP)
        return [kappa_mask(self.hc, x) for x in range(1 << self.n)]

    @cached_property
    def mincover(self) -> FdFunction:
        return nonredundant_cover(self.fn)

    @cached_property
    def cover_flags(self):
        self.need(COVER_CAP)
        return subset_cover_flags(self.mu, COVER_CAP)

    @cached_property
    def basis_masks(self) -> list[int]:
        _, _, basis = self.cover_flags
        return [int(m) for m in np.flatnonzero(basis)]

    @cached_property
    def bases(self) -> list[FdFunction]:
        pairs, _, _ = self.cover_flags
        return [
            FdFunction.from_map(self.u, {pairs[j][0]: pairs[j][1] for j in iter_bits(m)})
            for m in self.basis_masks
        ]

    @cached_property
    def spans(self):
        self.need(COVER_CAP)
        return span_masks_all_subsets(self.mu, COVER_CAP)

    @cached_property
    def independent(self) -> np.ndarray:
        """Local irredundance of every subfamily of mu: no member lies in the span of the rest."""
        pairs, spans = self.spans
        ids = np.arange(spans.shape[0], dtype=np.int64)
        ok = np.ones(ids.shape[0], dtype=bool)
        for j in range(len(pairs)):
            bit = np.int64(1) << j
            has = (ids & bit) != 0
            ok &= ~(has & ((spans[ids ^ bit] & bit) != 0))
        return ok

    def family(self, m: int) -> FdFunction:
        pairs = self.mu.masks()
        return FdFunction.from_map(self.u, {pairs[j][0]: pairs[j][1] for j in iter_bits(m)})

    def fmt_family(self, f: FdFunction) -> list[str]:
        return [p.fmt() for p in f.pairs()]

    def sample_families(self) -> list[int]:
        # deterministic spread of subfamily masks, always including the extremes
        M = 1 << len(self.mu)
        step = max(1, M // SAMPLE_SUBFAMILIES)
        picks = {0, M - 1}
        picks.update(range(1, M, step))
        picks.update((i * 2654435761) % M for i in range(SAMPLE_SUBFAMILIES))
        return sorted(picks)


# ---------------------------------------------------------------------------
# Checkers.  Each returns None on success or a detail dict describing a failure.
# ---------------------------------------------------------------------------

def chk_co6(ctx: Context):
    keys = ctx.keys
    for k in sorted(keys, key=mask_key):
        for b in iter_bits(k):
            if k & ~(1 << b) not in keys:
                return {"key": ctx.fmt(k), "non_key_subset": ctx.fmt(k & ~(1 << b))}
    return None


def chk_co7(ctx: Context):
    t = ctx.table
    full = ctx.u.full_mask
    for c in range(1 << ctx.n):
        closed = t[c] == c
        grows = all(
            t[c] != t[c | 1 << p] and t[c] & ~t[c | 1 << p] == 0
            for p in iter_bits(full & ~c)
        )
        if closed != grows:
            return {"set": ctx.fmt(c), "closed": closed, "every_point_grows": grows}
    return None


def chk_co8(ctx: Context):
    non_keys = sum(1 << p for p in range(ctx.n) if (1 << p) not in ctx.keys)
    if ctx.table[0] != non_keys:
        return {"closure_of_empty": ctx.fmt(ctx.table[0]), "non_key_points": ctx.fmt(non_keys)}
    return None


def chk_ec2(ctx: Context):
    f = ctx.fn
    n = ctx.n
    fast = ctx.table
    naive = oracle_closure_table(f, TABLE_CAP).as_map()
    for x in range(1 << n):
        res, trace = extend_by_closure(f, AttrSet(ctx.u, x))
        if not (res.mask == fast[x] == naive[x]):
            return {"set": ctx.fmt(x), "staged": ctx.fmt(res.mask), "fast": ctx.fmt(fast[x]),
                    "naive": ctx.fmt(naive[x])}
        stages = [s.mask for s in trace.stages]
        if any(a == b or a & ~b for a, b in zip(stages, stages[1:])) \
                or trace.steps > n - x.bit_count():
            return {"set": ctx.fmt(x), "trace": [ctx.fmt(s) for s in stages]}
    for y in range(1 << n):
        if y & ~fast[y]:
            return {"law": "inclusion", "set": ctx.fmt(y)}
        if fast[fast[y]] != fast[y]:
            return {"law": "idempotence", "set": ctx.fmt(y)}
        for x in submasks(y):
            if fast[x] & ~fast[y]:
                return {"law": "monotonicity", "smaller": ctx.fmt(x), "larger": ctx.fmt(y)}
    return None


def chk_ec3(ctx: Context):
    regen = closure_table(key_restriction(ctx.fn, TABLE_CAP), TABLE_CAP)
    for x, c in enumerate(ctx.table):
        if regen[x] != c:
            return {"set": ctx.fmt(x), "closure": ctx.fmt(c), "from_keys": ctx.fmt(regen[x])}
    return None


def chk_ec7(ctx: Context):
    ok = ctx.independent
    for m in np.flatnonzero(ok):
        m = int(m)
        for j in iter_bits(m):
            sub = m & ~(1 << j)
            if not ok[sub]:
                return {"independent": ctx.fmt_family(ctx.family(m)),
                        "dependent_subset": ctx.fmt_family(ctx.family(sub))}
    for m in ctx.sample_families():
        fam = ctx.family(m)
        if is_independent(fam) != bool(ok[m]):
            return {"family": ctx.fmt_family(fam), "library": not ok[m], "exhaustive": bool(ok[m])}
    return None


def chk_ec8_spanlaws(ctx: Context):
    pairs, spans = ctx.spans
    M = spans.shape[0]
    ids = np.arange(M, dtype=np.int64)
    bad = np.flatnonzero(ids & ~spans)
    if bad.size:
        return {"law": "inclusion", "family": ctx.fmt_family(ctx.family(int(bad[0])))}
    for j in range(len(pairs)):
        bit = np.int64(1) << j
        lo = ids[(ids & bit) == 0]
        bad = np.flatnonzero(spans[lo] & ~spans[lo | bit])
        if bad.size:
            m = int(lo[bad[0]])
            return {"law": "monotonicity", "family": ctx.fmt_family(ctx.family(m)),
                    "added": ctx.fmt_family(ctx.family(1 << j))}
    bad = np.flatnonzero(spans[spans] != spans)
    if bad.size:
        return {"law": "idempotence", "family": ctx.fmt_family(ctx.family(int(bad[0])))}
    for m in ctx.sample_families():
        fam = ctx.family(m)
        lib = span(fam, ctx.mu, TABLE_CAP)
        if lib != ctx.family(int(spans[m])):
            return {"family": ctx.fmt_family(fam), "library_span": ctx.fmt_family(lib),
                    "exhaustive_span": ctx.fmt_family(ctx.family(int(spans[m])))}
    return None


def chk_ec8_keys(ctx: Context):
    pairs, spans = ctx.spans
    ids = np.arange(spans.shape[0], dtype=np.int64)
    key = np.ones(ids.shape[0], dtype=bool)
    for j in range(len(pairs)):
        bit = np.int64(1) << j
        has = (ids & bit) != 0
        key &= ~(has & (spans[ids ^ bit] == spans))
    bad = np.flatnonzero(key != ctx.independent)
    if bad.size:
        m = int(bad[0])
        return {"family": ctx.fmt_family(ctx.family(m)), "span_key": bool(key[m]),
                "irredundant": bool(ctx.independent[m])}
    return None


def _covers_for_interiors(ctx: Context) -> list[FdFunction]:
    return [ctx.fn, ctx.mincover, ctx.mu]


def chk_mat2(ctx: Context):
    ctx.need(DD_CAP)
    t = ctx.table
    for f in (ctx.fn, ctx.mincover):
        for C in ctx.closed:
            body = f.filter(lambda l, r: r & ~C == 0)
            interior = body.filter(lambda l, r: r != C)
            bidx, iidx = closure_index(body), closure_index(interior)
            for x in submasks(C):
                if bidx.closure(x) != t[x]:
                    return {"cover": ctx.fmt_family(f), "closed": ctx.fmt(C), "set": ctx.fmt(x),
                            "body_closure": ctx.fmt(bidx.closure(x)), "closure": ctx.fmt(t[x])}
                ix = iidx.closure(x)
                if ix & ~t[x] or (interior.right_of(x) is not None and ix != t[x]):
                    return {"cover": ctx.fmt_family(f), "closed": ctx.fmt(C), "set": ctx.fmt(x),
                            "interior_closure": ctx.fmt(ix), "closure": ctx.fmt(t[x])}
    return None


def chk_mat4(ctx: Context):
    sigs = {}
    for b in ctx.bases:
        sig = tuple(s.mask for s in top_signature(b))
        if sig != tuple(sorted({r for _, r in b.masks()}, key=mask_key)):
            return {"basis": ctx.fmt_family(b), "library_signature": [ctx.fmt(m) for m in sig]}
        sigs.setdefault(sig, b)
    if len(sigs) > 1:
        (s1, b1), (s2, b2) = list(sigs.items())[:2]
        return {"basis_a": ctx.fmt_family(b1), "signature_a": [ctx.fmt(m) for m in s1],
                "basis_b": ctx.fmt_family(b2), "signature_b": [ctx.fmt(m) for m in s2]}
    return None


def chk_mat6(ctx: Context):
    ctx.need(5)
    f = ctx.fn
    t = ctx.table
    for C in ctx.closed:
        cls = [x for x in submasks(C) if t[x] == C]
        cls.sort(key=mask_key)
        reach = [interior_closure_mask(f, C, x) for x in cls]
        k = len(cls)
        R = np.array([[y & ~reach[i] == 0 for y in cls] for i in range(k)], dtype=bool)
        for i in range(k):
            if not R[i, i]:
                return {"law": "reflexive", "set": ctx.fmt(cls[i])}
            for j in range(k):
                if cls[j] & ~cls[i] == 0 and not R[i, j]:
                    return {"law": "projective", "from": ctx.fmt(cls[i]), "to": ctx.fmt(cls[j])}
        two = (R.astype(np.int64) @ R.astype(np.int64)) > 0
        bad = np.argwhere(two & ~R)
        if bad.size:
            i, j = (int(v) for v in bad[0])
            mid = int(np.flatnonzero(R[i] & R[:, j])[0])
            return {"law": "transitive", "from": ctx.fmt(cls[i]), "via": ctx.fmt(cls[mid]),
                    "to": ctx.fmt(cls[j])}
    return None


def chk_mat7(ctx: Context):
    ctx.need(DD_CAP)
    covers = _covers_for_interiors(ctx)
    for C in ctx.closed:
        for x in submasks(C):
            vals = [interior_closure_mask(f, C, x) for f in covers]
            if len(set(vals)) > 1:
                return {"closed": ctx.fmt(C), "set": ctx.fmt(x),
                        "interior_closures": [ctx.fmt(v) for v in vals],
                        "covers": [ctx.fmt_family(f) for f in covers]}
    return None


def _basis_pairs(ctx: Context):
    bases = ctx.bases
    if len(bases) ** 2 > MAX_BASIS_PAIRS:
        raise Capped(f"{len(bases)} bases")
    return bases


def chk_mat9(ctx: Context):
    bases = _basis_pairs(ctx)
    for a in bases:
        for b in bases:
            for x, c in a.masks():
                for y, c2 in b.masks():
                    if c2 != c or x == y or not dd_mask(a, c, x, y):
                        continue
                    swapped = a.as_map()
                    del swapped[x]
                    swapped[y] = c
                    g = FdFunction.from_map(ctx.u, swapped)
                    if not is_cover(g, a):
                        return {"cover": ctx.fmt_family(a), "out": ctx.fmt(x), "in": ctx.fmt(y),
                                "closed": ctx.fmt(c)}
    return None


def chk_mat10(ctx: Context):
    bases = _basis_pairs(ctx)
    for a in bases:
        for b in bases:
            try:
                fwd = dd_bijection(a, b)
                back = dd_bijection(b, a)
            except InvariantViolation as exc:
                return {"cover_a": ctx.fmt_family(a), "cover_b": ctx.fmt_family(b),
                        "error": str(exc)}
            if sorted((q.left.mask, p.left.mask) for p, q in fwd) != \
                    sorted((p.left.mask, q.left.mask) for p, q in back):
                return {"cover_a": ctx.fmt_family(a), "cover_b": ctx.fmt_family(b),
                        "error": "reverse matching is not the transpose"}
    return None


def chk_mat11_cardinality(ctx: Context):
    bases = ctx.bases
    if not bases:
        return {"error": "no nonredundant cover found"}
    sizes = {len(b): b for b in bases}
    if len(sizes) > 1:
        (s1, b1), (s2, b2) = sorted(sizes.items())[:2]
        return {"basis_a": ctx.fmt_family(b1), "size_a": s1,
                "basis_b": ctx.fmt_family(b2), "size_b": s2}
    return None


def chk_mat11_exchange(ctx: Context):
    masks = ctx.basis_masks
    if len(masks) ** 2 > MAX_BASIS_PAIRS:
        raise Capped(f"{len(masks)} bases")
    basis_set = set(masks)
    by_mask = dict(zip(masks, ctx.bases))
    pairs = ctx.cover_flags[0]
    for a in masks:
        for b in masks:
            for xj in iter_bits(a & ~b):
                if not any((a & ~(1 << xj)) | (1 << yj) in basis_set for yj in iter_bits(b & ~a)):
                    removed = FdFunction.from_map(ctx.u, {pairs[xj][0]: pairs[xj][1]})
                    return {"basis_a": ctx.fmt_family(by_mask[a]), "basis_b": ctx.fmt_family(by_mask[b]),
                            "removed": ctx.fmt_family(removed)[0]}
    found = {f for f in enumerate_bases(ctx.mu, basis_cap=COVER_CAP)}
    if found != set(ctx.bases):
        return {"exchange_graph": sorted(" ; ".join(ctx.fmt_family(f)) for f in found),
                "exhaustive": sorted(" ; ".join(ctx.fmt_family(f)) for f in ctx.bases)}
    return None


def chk_mat12(ctx: Context):
    bases = ctx.bases
    for l, c in ctx.mu.masks():
        p = FdFunction.from_map(ctx.u, {l: c}).pairs()[0]
        st = singleton_status(ctx.mu, p, bases=bases)
        if st.conflict:
            home = next(b for b in bases if b.has_mask(l, c))
            return {"pair": p.fmt(), "reflexive": st.reflexive, "left_is_key": st.left_is_key,
                    "determines_closure": st.determines_closure, "basis": ctx.fmt_family(home)}
    return None


def chk_ec6(ctx: Context):
    ok = ctx.independent
    pairs = ctx.mu.masks()
    pos = {lr: j for j, lr in enumerate(pairs)}
    below = np.zeros(ok.shape[0], dtype=bool)
    for b in ctx.bases:
        full = sum(1 << pos[lr] for lr in b.masks())
        below[list(submasks(full))] = True
    bad = np.flatnonzero(ok != below)
    if bad.size:
        m = int(bad[0])
        return {"family": ctx.fmt_family(ctx.family(m)), "irredundant": bool(ok[m]),
                "inside_a_nonredundant_cover": bool(below[m])}
    return None


def chk_mat11_augmentation(ctx: Context):
    ok = ctx.independent
    ind = np.flatnonzero(ok).astype(np.int64)
    if ind.size > MAX_INDEPENDENT:
        raise Capped(f"{ind.size} independent families")
    size = popcounts(ind)
    P = len(ctx.mu)
    for i in ind:
        i = int(i)
        ext = 0
        for j in range(P):
            if not i >> j & 1 and ok[i | 1 << j]:
                ext |= 1 << j
        bigger = ind[size == i.bit_count() + 1]
        bad = bigger[(bigger & ext) == 0]
        if bad.size:
            return {"smaller": ctx.fmt_family(ctx.family(i)),
                    "larger": ctx.fmt_family(ctx.family(int(bad[0])))}
    return None


def chk_fl4_closurelaws(ctx: Context):
    k = ctx.kappa
    for y in range(1 << ctx.n):
        if y & ~k[y]:
            return {"law": "inclusion", "set": ctx.fmt(y)}
        if k[k[y]] != k[y]:
            return {"law": "idempotence", "set": ctx.fmt(y)}
        for x in submasks(y):
            if k[x] & ~k[y]:
                return {"law": "monotonicity", "smaller": ctx.fmt(x), "larger": ctx.fmt(y)}
    return None


def _kappa_keys(ctx: Context) -> set[int]:
    k = ctx.kappa
    return {x for x in range(1 << ctx.n) if all(k[x & ~(1 << b)] != k[x] for b in iter_bits(x))}


def chk_fl4_h_subset(ctx: Context):
    keys = _kappa_keys(ctx)
    for i in ctx.hc.sorted_masks():
        if i not in keys:
            return {"member": ctx.fmt(i), "flat": ctx.fmt(ctx.kappa[i])}
    return None


def chk_fl4_keyset(ctx: Context):
    keys = _kappa_keys(ctx)
    extra = sorted(keys - ctx.hc.members, key=mask_key)
    missing = sorted(ctx.hc.members - keys, key=mask_key)
    if extra or missing:
        return {"keys_not_in_collection": [ctx.fmt(m) for m in extra],
                "members_not_keys": [ctx.fmt(m) for m in missing]}
    return None


def chk_fl3_note_a(ctx: Context):
    d = delta_table(ctx.hc)
    for i in ctx.hc.sorted_masks():
        if d[i] != ctx.kappa[i]:
            return {"member": ctx.fmt(i), "dependence_image": ctx.fmt(d[i]),
                    "flat": ctx.fmt(ctx.kappa[i])}
    return None


def chk_fl5(ctx: Context):
    d = delta_table(ctx.hc)
    members = ctx.hc.members
    for x in sorted(range(1 << ctx.n), key=mask_key):
        for i in ctx.hc.sorted_masks():
            if i & ~x or any(i | 1 << p in members for p in iter_bits(x & ~i)):
                continue
            if d[i] != ctx.kappa[x]:
                return {"set": ctx.fmt(x), "maximal_independent": ctx.fmt(i),
                        "dependence_image": ctx.fmt(d[i]), "flat": ctx.fmt(ctx.kappa[x])}
    return None


def chk_fl6(ctx: Context):
    diverge = []
    for x in sorted(range(1 << ctx.n), key=mask_key):
        b = kappa_bottomup(ctx.hc, AttrSet(ctx.u, x)).mask
        if b != ctx.kappa[x]:
            diverge.append((x, b))
    if diverge:
        x, b = diverge[0]
        return {"set": ctx.fmt(x), "topdown": ctx.fmt(ctx.kappa[x]), "bottomup": ctx.fmt(b),
                "divergent_sets": [ctx.fmt(m) for m, _ in diverge]}
    return None


def chk_fl7(ctx: Context):
    pairs, spans = ctx.spans
    ok = ctx.independent
    P = len(pairs)
    M = 1 << P
    full = M - 1
    ids = np.arange(M, dtype=np.int64)
    members = np.flatnonzero(ok)
    # dependence image of every independent family
    dep = ids.copy()
    for j in range(P):
        bit = np.int64(1) << j
        dep |= np.where(((ids & bit) == 0) & ~ok[ids | bit], bit, 0)
    g = np.full(M, full, dtype=np.int64)
    g[dep[members]] = dep[members]
    for j in range(P):  # AND over all supersets
        bit = np.int64(1) << j
        lo = ids[(ids & bit) == 0]
        g[lo] &= g[lo | bit]
    bad = np.flatnonzero(g != spans)
    if bad.size:
        m = int(bad[0])
        return {"family": ctx.fmt_family(ctx.family(m)),
                "span": ctx.fmt_family(ctx.family(int(spans[m]))),
                "flat": ctx.fmt_family(ctx.family(int(g[m])))}
    return None


@dataclass(frozen=True)
class Claim:
    claim_id: str
    group: str
    checker: object
    summary: str


REGISTRY: dict[str, Claim] = {c.claim_id: c for c in [
    Claim("CO6", MUST_PASS, chk_co6, "keys form a hereditary collection"),
    Claim("CO7", MUST_PASS, chk_co7, "closed iff every outside point strictly grows the closure"),
    Claim("CO8", MUST_PASS, chk_co8, "closure of the empty set = points that are not keys"),
    Claim("EC2", MUST_PASS, chk_ec2, "staged recurrence is a closure operator; kernels agree"),
    Claim("EC3", MUST_PASS, chk_ec3, "keys with their closures regenerate the closure"),
    Claim("EC7-monotonicity", MUST_PASS, chk_ec7, "irredundance is inherited by subfamilies"),
    Claim("EC8-spanlaws", MUST_PASS, chk_ec8_spanlaws, "span is a closure operator on subfamilies"),
    Claim("EC8-keys", MUST_PASS, chk_ec8_keys, "span keys are exactly the irredundant families"),
    Claim("MAT2", MUST_PASS, chk_mat2, "body of a cover regenerates the closure below C"),
    Claim("MAT4", MUST_PASS, chk_mat4, "all nonredundant covers share one top signature"),
    Claim("MAT6", MUST_PASS, chk_mat6, "direct determination is reflexive, projective, transitive"),
    Claim("MAT7", MUST_PASS, chk_mat7, "interior closures do not depend on the cover"),
    Claim("MAT9", MUST_PASS, chk_mat9, "swapping a directly determined pair keeps the cover"),
    Claim("MAT10", MUST_PASS, chk_mat10, "direct determination pairs up any two bases"),
    Claim("MAT11-cardinality", MUST_PASS, chk_mat11_cardinality, "all bases have one size"),
    Claim("MAT11-exchange", MUST_PASS, chk_mat11_exchange, "basis exchange; exchange graph is complete"),
    Claim("FL4-closurelaws", MUST_PASS, chk_fl4_closurelaws, "top-down flat closure is a closure"),
    Claim("FL4-H-subset-of-keys", MUST_PASS, chk_fl4_h_subset, "every member is a key of the flat closure"),
    Claim("FL3-note-a", AUDITED_OPEN, chk_fl3_note_a, "dependence image equals flat closure on members"),
    Claim("FL4-keyset-equality", AUDITED_OPEN, chk_fl4_keyset, "keys of the flat closure are exactly the members"),
    Claim("FL5", AUDITED_OPEN, chk_fl5, "flat closure = dependence image of any maximal independent subset"),
    Claim("FL6", AUDITED_OPEN, chk_fl6, "bottom-up and top-down flat closures agree"),
    Claim("FL7", AUDITED_OPEN, chk_fl7, "span is the flat closure of the irredundant families"),
    Claim("MAT12", AUDITED_OPEN, chk_mat12, "sufficient test for dependent one-pair functions"),
    Claim("EC6-equivalence", AUDITED_OPEN, chk_ec6, "irredundant iff inside some nonredundant cover"),
    Claim("MAT11-augmentation", AUDITED_OPEN, chk_mat11_augmentation, "irredundant families satisfy augmentation"),
]}

CLAIM_IDS = list(REGISTRY)


def evaluate(claim_id: str, inst: Instance, ctx: Context | None = None):
    """Run one checker: returns ``(status, detail)``."""
    ctx = ctx or Context(inst)
    try:
        detail = REGISTRY[claim_id].checker(ctx)
    except Capped as exc:
        return CAPPED, {"reason": str(exc)}
    except InvariantViolation as exc:
        return FAIL, {"error": str(exc)}
    return (PASS, None) if detail is None else (FAIL, detail)


def shrink(claim_id: str, inst: Instance, budget: int = SHRINK_BUDGET):
    """Greedily remove pairs, facets and attributes while ``claim_id`` keeps failing."""
    cur = inst
    status, detail = evaluate(claim_id, cur)
    progress = True
    while progress and budget > 0:
        progress = False
        for cand in cur.shrink_candidates():
            budget -= 1
            s, d = evaluate(claim_id, cand)
            if s == FAIL:
                cur, detail, progress = cand, d, True
                break
            if budget <= 0:
                break
    return cur, detail


def replay_witness(claim_id: str, witness: dict) -> bool:
    """True when the witness instance on its own still fails the claim."""
    inst = Instance.from_text(witness["kind"], witness["instance"])
    status, _ = evaluate(claim_id, inst)
    return status == FAIL


@dataclass
class Verdict:
    claim: str
    status: str
    witness: dict | None = None
    note: str | None = None

    def as_dict(self) -> dict:
        out = {"claim": self.claim, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note is not None:
            out["note"] = self.note
        return out


@dataclass
class AuditReport:
    instance_id: str
    kind: str
    universe: list
    verdicts: dict = field(default_factory=dict)

    def must_pass_failures(self) -> list[str]:
        return [c for c, v in self.verdicts.items() if v.status == FAIL and REGISTRY[c].group == MUST_PASS]

    def as_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "kind": self.kind,
            "universe": self.universe,
            "verdicts": [v.as_dict() for v in self.verdicts.values()],
        }


def audit_instance(inst: Instance, claims=None, minimize: bool = True) -> AuditReport:
    claims = CLAIM_IDS if claims is None else [c for c in CLAIM_IDS if c in set(claims)]
    ctx = Context(inst)
    report = AuditReport(inst.instance_id, inst.kind, list(inst.universe.attributes))
    for cid in claims:
        status, detail = evaluate(cid, inst, ctx)
        if status == FAIL:
            small, sdetail = shrink(cid, inst) if minimize else (inst, detail)
            witness = {
                "instance_id": inst.instance_id,
                "kind": small.kind,
                "instance": small.text(),
                "detail": sdetail,
                "found": detail,
            }
            report.verdicts[cid] = Verdict(cid, FAIL, witness)
        elif status == CAPPED:
            report.verdicts[cid] = Verdict(cid, CAPPED, note=detail["reason"])
        else:
            report.verdicts[cid] = Verdict(cid, PASS)
    return report


@dataclass
class AuditConfig:
    seeds: list = field(default_factory=lambda: list(range(1000)))
    sizes: list = field(default_factory=lambda: [3, 4, 5, 6])
    max_pairs: int = 8
    max_facets: int = 3
    kinds: tuple = ("fd",)
    claims: list | None = None
    fixtures: bool = True
    minimize: bool = True


def fixture_instances() -> list[Instance]:
    from . import fixtures

    out = [Instance.from_fd(name, parse_fd_file(text)[1]) for name, text in fixtures.FD_FIXTURES.items()]
    out += [Instance.from_hereditary(name, parse_facets_file(text))
            for name, text in fixtures.FACET_FIXTURES.items()]
    return out


def config_instances(config: AuditConfig) -> list[Instance]:
    out = fixture_instances() if config.fixtures else []
    if not config.seeds:
        return out
    for seed in config.seeds:
        n = config.sizes[seed % len(config.sizes)]
        for kind in config.kinds:
            params = InstanceParams(n, config.max_pairs, kind, config.max_facets)
            obj = random_instance(seed, params)
            iid = f"{kind}:seed={seed}:n={n}"
            out.append(Instance.from_fd(iid, obj) if kind == "fd" else Instance.from_hereditary(iid, obj))
    return out


@dataclass
class AuditSummary:
    reports: list
    claims: list

    @property
    def tallies(self) -> dict:
        out = {c: {PASS: 0, FAIL: 0, CAPPED: 0} for c in self.claims}
        for r in self.reports:
            for c, v in r.verdicts.items():
                out[c][v.status] += 1
        return out

    def must_pass_failures(self) -> list[tuple[str, str]]:
        return [(r.instance_id, c) for r in self.reports for c in r.must_pass_failures()]

    @property
    def exit_code(self) -> int:
        return 1 if self.must_pass_failures() else 0

    def claim_verdicts(self) -> list[Verdict]:
        """One aggregated verdict per claim, carrying the first failure's witness."""
        out = []
        tallies = self.tallies
        for c in self.claims:
            t = tallies[c]
            witness = None
            for r in self.reports:
                v = r.verdicts.get(c)
                if v is not None and v.status == FAIL:
                    witness = v.witness
                    break
            if t[FAIL]:
                status = FAIL
            elif t[PASS]:
                status = PASS
            else:
                status = CAPPED
            out.append(Verdict(c, status, witness))
        return out

    def as_dict(self) -> dict:
        return {
            "instances": len(self.reports),
            "exit_code": self.exit_code,
            "tallies": {c: {"group": REGISTRY[c].group, **t} for c, t in self.tallies.items()},
            "must_pass_failures": [list(x) for x in self.must_pass_failures()],
            "reports": [r.as_dict() for r in self.reports],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False)

    def text_lines(self) -> list[str]:
        lines = []
        for v in self.claim_verdicts():
            t = self.tallies[v.claim]
            lines.append(
                f"{v.claim:<22} {REGISTRY[v.claim].group:<12} {v.status:<6} "
                f"pass={t[PASS]} fail={t[FAIL]} capped={t[CAPPED]}"
            )
            if v.witness is not None:
                lines.append(f"    witness from {v.witness['instance_id']}: "
                             + json.dumps(v.witness["detail"], ensure_ascii=False))
                for wl in v.witness["instance"].rstrip("\n").split("\n"):
                    lines.append("      | " + wl)
        lines.append(f"instances: {len(self.reports)}  must-pass failures: {len(self.must_pass_failures())}")
        return lines


def run_suite(config: AuditConfig | None = None, instances=None) -> AuditSummary:
    config = config or AuditConfig()
    claims = CLAIM_IDS if config.claims is None else [c for c in CLAIM_IDS if c in set(config.claims)]
    if instances is None:
        instances = config_instances(config)
    reports = [audit_instance(inst, claims, config.minimize) for inst in instances]
    return AuditSummary(reports, claims)
