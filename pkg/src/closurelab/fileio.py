"""Plain-text dependency files and facet files.

Dependency file::

    attrs: a b c d      # header naming the universe, in order
    a -> b
    a c -> d
    -> a                # empty left side

Facet file: the same header, then one facet (maximal independent set) per line.
"""
from __future__ import annotations

from .closure import canonicalize
from .core import FdFunction, HereditaryCollection, Universe, iter_bits
from .errors import (
    DuplicateAttribute,
    EmptyName,
    FileSyntaxError,
    MissingHeader,
    UnknownAttribute,
)
from .flats import from_facets

EMPTY_TOKEN = "{}"


def _lines(text: str):
    for n, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").split("#", 1)[0].strip()
        if line:
            yield n, line


def _header(lines) -> Universe:
    try:
        n, line = next(lines)
    except StopIteration:
        raise MissingHeader("missing 'attrs:' header") from None
    if not line.startswith("attrs:"):
        raise MissingHeader("first line must be the 'attrs:' header", n)
    names = line[len("attrs:"):].split()
    if not names:
        raise FileSyntaxError("header declares no attributes", n)
    for name in names:
        if "->" in name or name == EMPTY_TOKEN:
            raise FileSyntaxError(f"invalid attribute name {name!r}", n)
    try:
        return Universe(names)
    except (DuplicateAttribute, EmptyName) as exc:
        raise FileSyntaxError(str(exc), n) from None


def _mask(u: Universe, tokens, n: int) -> int:
    mask = 0
    for tok in tokens:
        pos = u.index.get(tok)
        if pos is None:
            raise UnknownAttribute(f"attribute {tok!r} is not declared in the header", n)
        mask |= 1 << pos
    return mask


def parse_fd_file(text: str, canonical: bool = True) -> tuple[Universe, FdFunction]:
    """Parse a dependency file; duplicate left sides are merged, then canonicalized."""
    lines = _lines(text)
    u = _header(lines)
    raw = []
    for n, line in lines:
        parts = line.split("->")
        if len(parts) != 2:
            raise FileSyntaxError("expected exactly one '->'", n)
        raw.append((_mask(u, parts[0].split(), n), _mask(u, parts[1].split(), n)))
    if not canonical:
        return u, FdFunction(u, raw, merge=True)
    return u, canonicalize(raw, universe=u)


def parse_facets_file(text: str) -> HereditaryCollection:
    lines = _lines(text)
    u = _header(lines)
    facets = []
    where = {}
    for n, line in lines:
        m = _mask(u, line.split(), n)
        if m in where:
            raise FileSyntaxError(f"facet repeats line {where[m]}", n)
        where[m] = n
        facets.append(m)
    for m, n in where.items():
        for other, n2 in where.items():
            if m != other and m & ~other == 0:
                raise FileSyntaxError(
                    f"not a facet: contained in the set on line {n2} "
                    "(list maximal sets only)", n)
    return from_facets(u, facets)


def format_set(u: Universe, mask: int) -> str:
    return u.fmt(mask, EMPTY_TOKEN)


def parse_set(u: Universe, text: str) -> int:
    tokens = [t for t in text.replace(",", " ").split() if t != EMPTY_TOKEN]
    return _mask(u, tokens, None)


def format_fd_file(f: FdFunction) -> str:
    u = f.universe
    lines = ["attrs: " + " ".join(u.attributes)]
    lines += f.fmt_lines()
    return "\n".join(lines) + "\n"


def format_facets_file(h: HereditaryCollection) -> str:
    u = h.universe
    lines = ["attrs: " + " ".join(u.attributes)]
    lines += [u.fmt(m) for m in h.maximal_masks() if m]
    return "\n".join(lines) + "\n"


def masks_to_names(u: Universe, mask: int) -> list[str]:
    return [u.attributes[i] for i in iter_bits(mask)]
