"""Command-line front end: ``closurelab <command> ...``.

Set output lists attributes in declaration order separated by spaces, the
empty set prints as ``{}`` and lists of sets are joined with `` / ``.
Exit status is 0 on success, 1 when an audit finds a must-pass failure and
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import NamedTuple

from .audit import CLAIM_IDS, AuditConfig, Instance, run_suite
from .closure import (
    MU_CAP,
    all_keys,
    closed_sets,
    extend_by_closure,
    fast_closure,
    keys_of,
    materialize_mu,
)
from .core import AttrSet, FdFunction, FdPair, Universe
from .covers import nonredundant_cover, span
from .errors import ClosureLabError
from .fileio import format_fd_file, format_set, parse_facets_file, parse_fd_file, parse_set
from .flats import ancestors, kappa_bottomup, kappa_topdown
from .matroid import directly_determines, enumerate_bases, singleton_status, top_signature

LIST_SEP = " / "


class CommandResult(NamedTuple):
    code: int
    stdout: str
    stderr: str


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_fds(args) -> FdFunction:
    return parse_fd_file(_read(args.fds))[1]


def _set(u: Universe, text: str) -> AttrSet:
    return AttrSet(u, parse_set(u, text))


def _fmt(s: AttrSet) -> str:
    return format_set(s.universe, s.mask)


def _names(s: AttrSet) -> list[str]:
    return list(s)


def _pair_json(p: FdPair) -> dict:
    return {"left": _names(p.left), "right": _names(p.right)}


def _fn_json(f: FdFunction) -> list[dict]:
    return [_pair_json(p) for p in f.pairs()]


class Output:
    """Collects the text and JSON forms of a command's result."""

    def __init__(self, command: str, universe: Universe | None):
        self.command = command
        self.universe = universe
        self.lines: list[str] = []
        self.result = None
        self.verdicts = None

    def json(self) -> str:
        doc = {
            "command": self.command,
            "universe": list(self.universe.attributes) if self.universe is not None else [],
            "result": self.result,
        }
        if self.verdicts is not None:
            doc["verdicts"] = self.verdicts
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


def cmd_closure(args, out: Output):
    f = _load_fds(args)
    out.universe = f.universe
    x = _set(f.universe, args.set)
    res = fast_closure(f, x)
    out.lines.append(_fmt(res))
    out.result = {"set": _names(x), "closure": _names(res)}
    if args.trace:
        staged, trace = extend_by_closure(f, x)
        assert staged == res
        out.lines += trace.fmt()
        out.result["trace"] = [
            {"stage": _names(s), "fired": [_pair_json(p) for p in fired]}
            for s, fired in zip(trace.stages, trace.fired)
        ]


def cmd_closed_sets(args, out: Output):
    f = _load_fds(args)
    out.universe = f.universe
    sets = closed_sets(f)
    out.lines.append(LIST_SEP.join(_fmt(s) for s in sets))
    out.result = [_names(s) for s in sets]


def cmd_keys(args, out: Output):
    f = _load_fds(args)
    u = out.universe = f.universe
    if args.of is not None:
        keys = keys_of(f, _set(u, args.of))
    else:
        keys = [AttrSet(u, m) for m in all_keys(f).sorted_masks()]
    out.lines.append(LIST_SEP.join(_fmt(k) for k in keys))
    out.result = [_names(k) for k in keys]


def _emit_function(f: FdFunction, out: Output):
    out.universe = f.universe
    out.lines += format_fd_file(f).rstrip("\n").split("\n")
    out.result = _fn_json(f)


def cmd_mincover(args, out: Output):
    _emit_function(nonredundant_cover(_load_fds(args)), out)


def cmd_canonicalize(args, out: Output):
    _emit_function(_load_fds(args), out)


def cmd_span(args, out: Output):
    f = _load_fds(args)
    u = out.universe = f.universe
    mu = materialize_mu(f, MU_CAP)
    lefts = [parse_set(u, chunk) for chunk in args.lefts.split(";") if chunk.strip()]
    fam = FdFunction.from_map(u, {l: mu.right_of(l) for l in lefts})
    res = span(fam, mu)
    out.lines += res.fmt_lines()
    out.result = _fn_json(res)


def cmd_dd(args, out: Output):
    f = _load_fds(args)
    u = out.universe = f.universe
    x, y = _set(u, getattr(args, "from")), _set(u, args.to)
    ok, trace = directly_determines(f, x, y)
    out.lines.append("yes" if ok else "no")
    out.lines += trace.fmt()
    out.result = {
        "from": _names(x),
        "to": _names(y),
        "directly_determines": ok,
        "interior_closure": _names(trace.result),
    }


def cmd_bases(args, out: Output):
    f = _load_fds(args)
    out.universe = f.universe
    mu = materialize_mu(f, MU_CAP)
    bases = enumerate_bases(mu)
    out.lines += ["; ".join(b.fmt_lines()) for b in bases]
    out.result = [_fn_json(b) for b in bases]


def cmd_top_signature(args, out: Output):
    f = _load_fds(args)
    out.universe = f.universe
    sig = top_signature(nonredundant_cover(f))
    out.lines.append(LIST_SEP.join(_fmt(s) for s in sig))
    out.result = [_names(s) for s in sig]


def cmd_flats(args, out: Output):
    h = parse_facets_file(_read(args.facets))
    u = out.universe = h.universe
    x = _set(u, args.set)
    top, bottom = kappa_topdown(h, x), kappa_bottomup(h, x)
    anc = ancestors(h, x)
    out.lines += [
        f"topdown: {_fmt(top)}",
        f"bottomup: {_fmt(bottom)}",
        f"divergent: {'yes' if top != bottom else 'no'}",
        f"ancestors: {LIST_SEP.join(_fmt(a) for a in anc)}",
    ]
    out.result = {
        "set": _names(x),
        "topdown": _names(top),
        "bottomup": _names(bottom),
        "divergent": top != bottom,
        "ancestors": [_names(a) for a in anc],
    }


def cmd_singleton(args, out: Output):
    f = _load_fds(args)
    u = out.universe = f.universe
    p = FdPair(_set(u, args.left), _set(u, args.closed))
    st = singleton_status(f, p).as_dict()
    for k, v in st.items():
        if isinstance(v, bool):
            v = "yes" if v else "no"
        elif v is None:
            v = "n/a"
        out.lines.append(f"{k}: {v}")
    out.result = st


def cmd_audit(args, out: Output):
    claims = None
    if args.claims:
        claims = [c.strip() for c in args.claims.split(",") if c.strip()]
        unknown = [c for c in claims if c not in CLAIM_IDS]
        if unknown:
            raise UsageError(f"unknown claim id {unknown[0]!r}")
    config = AuditConfig(claims=claims, fixtures=False, seeds=[])
    if args.fds:
        f = _load_fds(args)
        out.universe = f.universe
        instances = [Instance.from_fd(Path(args.fds).name, f)]
    elif args.facets:
        h = parse_facets_file(_read(args.facets))
        out.universe = h.universe
        instances = [Instance.from_hereditary(Path(args.facets).name, h)]
    else:
        if args.universe is None or not 1 <= args.universe <= 8:
            raise UsageError("--random needs --universe between 1 and 8")
        config.seeds = list(range(args.seed, args.seed + args.random))
        config.sizes = [args.universe]
        config.kinds = (args.kind,)
        out.universe = Universe(chr(ord("a") + i) for i in range(args.universe))
        instances = None
    summary = run_suite(config, instances)
    out.lines += summary.text_lines()
    out.result = {
        "instances": len(summary.reports),
        "exit_code": summary.exit_code,
        "tallies": summary.as_dict()["tallies"],
        "must_pass_failures": [list(x) for x in summary.must_pass_failures()],
    }
    out.verdicts = [v.as_dict() for v in summary.claim_verdicts()]
    return summary.exit_code


COMMANDS = {
    "closure": cmd_closure,
    "closed-sets": cmd_closed_sets,
    "keys": cmd_keys,
    "mincover": cmd_mincover,
    "canonicalize": cmd_canonicalize,
    "span": cmd_span,
    "dd": cmd_dd,
    "bases": cmd_bases,
    "top-signature": cmd_top_signature,
    "flats": cmd_flats,
    "singleton": cmd_singleton,
    "audit": cmd_audit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="closurelab", description="Closures, covers, flats and cover matroids.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help, fds=True):
        p = sub.add_parser(name, help=help)
        if fds:
            p.add_argument("--fds", required=True, help="dependency file")
        p.add_argument("--json", action="store_true", help="emit one JSON object")
        return p

    add("closure", "closure of a set").add_argument("--set", required=True)
    sub.choices["closure"].add_argument("--trace", action="store_true", help="show the stages")
    add("closed-sets", "all closed sets")
    add("keys", "keys of every closed set, or of one").add_argument("--of")
    add("mincover", "nonredundant cover in one pass")
    add("canonicalize", "merged function with closures on the right")
    add("span", "span of the pairs with the given left sides").add_argument(
        "--lefts", required=True, help='left sides separated by ";", e.g. "a c; b"')
    p = add("dd", "direct determination between two sets")
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    add("bases", "all nonredundant covers")
    add("top-signature", "closed sets carrying a top pair in a nonredundant cover")
    p = add("flats", "both flat closures of a set", fds=False)
    p.add_argument("--facets", required=True, help="facets file")
    p.add_argument("--set", required=True)
    p = add("singleton", "dependence status of one pair")
    p.add_argument("--left", required=True)
    p.add_argument("--closed", required=True)
    p = add("audit", "brute-force claim audit", fds=False)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--fds")
    src.add_argument("--facets")
    src.add_argument("--random", type=int, metavar="N", help="audit N seeded random instances")
    p.add_argument("--universe", type=int, metavar="K")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=("fd", "hereditary"), default="fd")
    p.add_argument("--claims", help="comma-separated claim ids")
    return parser


def run_command(argv) -> CommandResult:
    try:
        args = build_parser().parse_args(list(argv))
        out = Output(args.command, None)
        code = COMMANDS[args.command](args, out) or 0
    except UsageError as exc:
        return CommandResult(2, "", f"closurelab: error: {exc}\n")
    except ClosureLabError as exc:
        return CommandResult(2, "", f"closurelab: error: {exc}\n")
    return CommandResult(code, out.json() if args.json else out.text(), "")


def main(argv=None) -> int:
    res = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(res.stdout)
    sys.stderr.write(res.stderr)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
