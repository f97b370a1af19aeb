"""Command-line front end: ``toric-todd <subcommand> --input FILE``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass

from .cones import DEFAULT_POINT_CAP
from .equivariant import cech_cohomology_dims, cone_id, homology_presentation, nonequivariant_ranks, \
    piecewise_poly_dims
from .fans import Fan, LatticePolytope, resolve_to_smooth
from .io import InputError, dumps_machine, read_input
from .todd import brion_character, count_lattice_points, equivariant_todd, smooth_crosscheck, \
    subdivision_crosscheck

log = logging.getLogger("toric_todd")

EXIT_OK, EXIT_INVALID, EXIT_INPUT = 0, 1, 2

FAN_COMMANDS = ("validate", "todd", "homology", "cohomology", "resolve", "crosscheck")
POLYTOPE_COMMANDS = ("count", "character")


@dataclass
class RunConfig:
    subcommand: str
    input: str
    order: int | None = None
    cutoff: int | None = None
    cap: int = DEFAULT_POINT_CAP
    format: str = "machine"

    def check(self):
        if self.order is not None and self.order < 0:
            raise InputError("--order must be non-negative")
        if self.cutoff is not None and self.cutoff < 1:
            raise InputError("--cutoff must be positive")
        if self.cap < 1:
            raise InputError("--cap must be at least 1")


class _Failed(Exception):
    """A well-formed run whose answer is a validation failure."""

    def __init__(self, doc):
        self.doc = doc


def _validate(f: Fan, cfg: RunConfig) -> dict:
    doc = f.report.to_json()
    if not f.report.well_formed:
        raise _Failed(doc)
    return doc


def _todd(f: Fan, cfg: RunConfig) -> dict:
    return equivariant_todd(f, cfg.cap).to_json()


def _homology(f: Fan, cfg: RunConfig) -> dict:
    gens, rels = homology_presentation(f)
    return {"generators": [cone_id(k) for k in gens],
            "relations": [r.to_json() for r in rels],
            "ranks": nonequivariant_ranks(f)}


def _cohomology(f: Fan, cfg: RunConfig) -> dict:
    cutoff = cfg.cutoff if cfg.cutoff is not None else 2 * f.ambient_rank
    doc = {"cutoff": cutoff, "dims": cech_cohomology_dims(f, cutoff)}
    if f.is_complete:
        doc["piecewise"] = [piecewise_poly_dims(f, k) for k in range(cutoff // 2 + 1)]
    return doc


def _resolve(f: Fan, cfg: RunConfig) -> dict:
    fine, rmap = resolve_to_smooth(f)
    return {"fan": fine.to_json(), "refinement": rmap.to_json()}


def _crosscheck(f: Fan, cfg: RunConfig) -> dict:
    reports = []
    if f.is_smooth and f.is_complete:
        reports.append(smooth_crosscheck(f, cfg.order, cfg.cap).to_json())
    reports.append(subdivision_crosscheck(f, cfg.cap).to_json())
    doc = {"reports": reports}
    if not all(r["passed"] for r in reports):
        raise _Failed(doc)
    return doc


def _count(p: LatticePolytope, cfg: RunConfig) -> dict:
    return {"count": count_lattice_points(p, cfg.order, cap=cfg.cap)}


def _character(p: LatticePolytope, cfg: RunConfig) -> dict:
    return {"character": brion_character(p, cfg.cap).to_json()}


HANDLERS = {
    "validate": _validate,
    "todd": _todd,
    "homology": _homology,
    "cohomology": _cohomology,
    "resolve": _resolve,
    "crosscheck": _crosscheck,
    "count": _count,
    "character": _character,
}


def _gf_text(gf: dict) -> str:
    def mono(e):
        return "e^(" + ",".join(str(x) for x in e) + ")"

    num = " + ".join(f"{t['coeff']}*{mono(t['exp'])}" for t in gf["numerator"]) or "0"
    den = "".join(f"(1 - {mono(w)})" for w in gf["denominator"])
    return f"({num}) / {den}" if den else num


def _pretty(cmd: str, doc: dict) -> str:
    if cmd == "todd":
        return "\n".join(f"cone {k}: {_gf_text(v)}" for k, v in doc["coefficients"].items())
    if cmd == "character":
        return _gf_text(doc["character"])
    if cmd == "count":
        return f"lattice points: {doc['count']}"
    if cmd == "validate":
        flags = ", ".join(f"{k}={'yes' if doc[k] else 'no'}" for k in ("well_formed", "complete", "simplicial", "smooth"))
        lines = [flags, "cones per dimension: " + ", ".join(f"{k}:{v}" for k, v in doc["counts"].items())]
        lines += [f"violation: {v}" for v in doc["violations"]]
        return "\n".join(lines)
    if cmd == "cohomology":
        lines = [f"H^{n}: {v}" for n, v in enumerate(doc["dims"])]
        if "piecewise" in doc:
            lines.append("piecewise polynomial dims: " + " ".join(str(x) for x in doc["piecewise"]))
        return "\n".join(lines)
    if cmd == "homology":
        return (f"{len(doc['generators'])} generators, {len(doc['relations'])} relations\n"
                "ordinary ranks: " + " ".join(str(x) for x in doc["ranks"]))
    if cmd == "crosscheck":
        return "\n".join(f"{r['check']}: {'pass' if r['passed'] else 'FAIL'}" for r in doc["reports"])
    return json.dumps(doc, indent=2, sort_keys=True)


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg.check()
        obj = read_input(cfg.input)
        if cfg.subcommand in FAN_COMMANDS and not isinstance(obj, Fan):
            raise InputError(f"{cfg.subcommand} expects a fan file")
        if cfg.subcommand in POLYTOPE_COMMANDS and not isinstance(obj, LatticePolytope):
            raise InputError(f"{cfg.subcommand} expects a polytope file")
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    if isinstance(obj, Fan):
        obj = obj.canonical()
    status = EXIT_OK
    try:
        doc = HANDLERS[cfg.subcommand](obj, cfg)
    except _Failed as failed:
        doc, status = failed.doc, EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    text = dumps_machine(doc) if cfg.format == "machine" else _pretty(cfg.subcommand, doc)
    print(text, file=out)
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toric-todd",
                                     description="Exact toric Todd classes, cohomology and lattice-point counts.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "validate": "check fan axioms and report completeness, simpliciality, smoothness",
        "todd": "localized equivariant Todd class coefficients per maximal cone",
        "count": "number of lattice points of a polytope",
        "character": "vertex-cone generating function of a polytope",
        "homology": "equivariant homology presentation and ordinary ranks",
        "cohomology": "graded dimensions of equivariant cohomology",
        "resolve": "smooth refinement and its refinement map",
        "crosscheck": "smooth-case and resolution cross-checks of the Todd class",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--input", required=True, metavar="PATH")
        p.add_argument("--order", type=int, default=None, metavar="K", help="truncation order (default d+2)")
        p.add_argument("--cutoff", type=int, default=None, metavar="N", help="cohomology degree cutoff (default 2d)")
        p.add_argument("--cap", type=int, default=DEFAULT_POINT_CAP, metavar="M", help="parallelepiped point cap")
        p.add_argument("--format", choices=("machine", "pretty"), default="machine")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(args.subcommand, args.input, args.order, args.cutoff, args.cap, args.format)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
