"""Command line front end: ``intcells <subcommand> ...``.

Exit codes: 0 when a computation finished or a claim held, 1 when a claim was
violated (or ``--oracle`` disagreed), 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import oracles
from .bodies import ConstantsConfig, best_cell_projection, cell_count_body, comb_dimension_body
from .errors import InputError, PreconditionError
from .generators import GenSpec, generate
from .io import dumps, instance_to_json, read_config, read_instance, read_json
from .lattice import (
    IndexSet,
    IntegerPointSet,
    box_content,
    cell_content,
    count_cells_in_cconv,
    integer_boxes_in,
    natarajan_dimension,
    project,
    shattering_dimension_discrete,
    vc_dimension,
)
from .polytope import CoordSubspace, RationalPolytope, polar, project_polytope, section, volume
from .reports import RunManifest, VerificationReport, digest, parse_csv, render_csv, render_json, render_rows_csv, to_jsonable
from .verify import CONVEX_CLAIMS, DISCRETE_CLAIMS, sweep, verify

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


# ---------------------------------------------------------------- argument helpers


def _indices(text: str | None, n: int) -> IndexSet | None:
    if text is None:
        return None
    try:
        idx = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise InputError(f"index list must look like 1,3,4 (got {text!r})") from None
    return IndexSet.of(n, idx)


def _params(pairs: list[str] | None) -> dict:
    """key=value pairs; values are parsed as JSON when possible, else kept as strings."""
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise InputError(f"parameter {item!r} is not of the form key=value")
        k, v = item.split("=", 1)
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


def _cfg(args) -> ConstantsConfig:
    cfg = read_config(args.cfg) if args.cfg else ConstantsConfig()
    if args.seed is not None:
        cfg = ConstantsConfig(cfg.c_ak, cfg.C_Ak, cfg.c_41, cfg.mc_samples, args.seed)
    return cfg


def _need(args, attr="inp"):
    path = getattr(args, attr)
    if path is None:
        raise InputError("this command needs --in FILE")
    return read_instance(path)


def _fmt(x):
    return to_jsonable(x)


# ---------------------------------------------------------------- commands


def cmd_gen(args, cfg):
    spec = GenSpec(args.family, _params(args.param), args.seed or 0)
    inst = generate(spec)
    return {"spec": spec.to_dict(), "digest": digest(instance_to_json(inst))}, inst, None


def _oracle_mismatch(name, ours, theirs):
    return None if ours == theirs else f"oracle disagreement in {name}: {ours} vs {theirs}"


def cmd_cells(args, cfg):
    X = _need(args)
    I = _indices(args.proj, X.dim)
    problem = None
    if isinstance(X, IntegerPointSet):
        I = I or IndexSet.full(X.dim)
        count = count_cells_in_cconv(X, I)
        if args.oracle:
            n_or = oracles.oracle_cconv_cells(project(X, I))
            problem = _oracle_mismatch("cells", count, n_or)
        return {"projection": I, "cells": count}, None, problem
    if I is None:
        bp = best_cell_projection(X)
        I, count = bp.indices, bp.count
        extra = {"vol_K/6": bp.vol_sixth, "vol_K/4-2^-n": bp.quarter_bound}
    else:
        count, extra = cell_count_body(X, I), {}
    if args.oracle:
        problem = _oracle_mismatch("cells", count, oracles.exhaustive_cell_count(X, I.positions))
    return {"projection": I, "cells": count, **extra}, None, problem


def cmd_boxes(args, cfg):
    X = _need(args)
    if not isinstance(X, IntegerPointSet):
        raise InputError("boxes works on point sets")
    I = _indices(args.proj, X.dim) or IndexSet.full(X.dim)
    return {"projection": I, "boxes": integer_boxes_in(X, I)}, None, None


def cmd_content(args, cfg):
    X = _need(args)
    if not isinstance(X, IntegerPointSet):
        raise InputError("content works on point sets")
    return {"size": len(X.points), "cell_content": cell_content(X), "box_content": box_content(X)}, None, None


def cmd_dim(args, cfg):
    X = _need(args)
    problem = None
    if args.kind == "vc":
        if not isinstance(X, IntegerPointSet):
            raise InputError("vc dimension needs a point set")
        return {"vc": vc_dimension(X)}, None, None
    if args.kind == "natarajan":
        if not isinstance(X, IntegerPointSet):
            raise InputError("Natarajan dimension needs a point set")
        return {"natarajan": natarajan_dimension(X)}, None, None
    if args.t is None:
        raise InputError("dim comb needs --t")
    t = Fraction(args.t)
    if isinstance(X, IntegerPointSet):
        v, wit = shattering_dimension_discrete(X, t)
        if args.oracle:
            problem = _oracle_mismatch("comb", v, oracles.grid_shatter_search(X, t, Fraction(1, 4)))
        return {"comb": v, "t": t, "witness": wit}, None, problem
    return {"comb": comb_dimension_body(X, t), "t": t}, None, None


def cmd_volume(args, cfg):
    X = _need(args)
    if not isinstance(X, RationalPolytope):
        raise InputError("volume works on polytopes")
    v = volume(X)
    out = {"volume": v, "float": float(v)}
    problem = None
    if args.oracle:
        est = oracles.mc_volume(X, cfg.mc_samples, cfg.mc_seed)
        out["mc"] = {"value": est.value, "half_width_95": est.half_width_95}
        tol = args.tol if args.tol is not None else 0.0
        if abs(est.value - float(v)) > est.half_width_95 + tol * float(v):
            problem = f"oracle disagreement in volume: exact {float(v)} vs MC {est.value} ± {est.half_width_95}"
    return out, None, problem


def cmd_project(args, cfg):
    X = _need(args)
    I = _indices(args.proj, X.dim)
    if I is None:
        raise InputError("project needs --proj")
    Y = project(X, I) if isinstance(X, IntegerPointSet) else project_polytope(X, I)
    return {"projection": I}, Y, None


def cmd_section(args, cfg):
    X = _need(args)
    if not isinstance(X, RationalPolytope):
        raise InputError("section works on polytopes")
    I = _indices(args.keep, X.dim)
    if I is None:
        raise InputError("section needs --keep")
    S = section(X, CoordSubspace(X.dim, I))
    return {"kept": I, "empty": S.is_empty}, S, None


def cmd_polar(args, cfg):
    X = _need(args)
    if not isinstance(X, RationalPolytope):
        raise InputError("polar works on polytopes")
    return {}, polar(X), None


def cmd_verify(args, cfg):
    params = _params(args.param)
    X = read_instance(args.inp) if args.inp else None
    if X is None and args.claim != "LEM_4_2":
        raise InputError("verify needs --in FILE")
    return verify(args.claim, X, params, cfg), None, None


def _corpus(path: str) -> list:
    p = Path(path)
    if not p.is_dir():
        raise InputError(f"corpus {path} is not a directory")
    files = sorted(p.glob("*.json"))
    if not files:
        raise InputError(f"corpus {path} has no .json instances")
    return [read_instance(f) for f in files]


def cmd_sweep(args, cfg):
    params = _params(args.param)
    corpus = _corpus(args.corpus) if args.corpus else []
    res = sweep(args.claim, corpus, params, cfg)
    return {"sweep": res.to_dict()}, None, None


def cmd_report(args, cfg):
    """Re-render stored reports (JSON from ``verify``) as JSON or CSV and gate on them."""
    if args.inp is None:
        raise InputError("report needs --in FILE")
    if not Path(args.inp).is_file():
        raise InputError(f"no such file: {args.inp}")
    if args.inp.endswith(".csv"):
        try:
            rows = parse_csv(Path(args.inp).read_text())
        except (ValueError, KeyError) as exc:
            raise InputError(f"{args.inp}: not a report CSV ({exc})") from None
    else:
        doc = read_json(args.inp)
        rows = doc.get("reports", [doc]) if isinstance(doc, dict) else doc
    failed = [r.get("claim") for r in rows if not r.get("pass", False)]
    return {"reports": rows, "failed": failed}, None, None


COMMANDS = {
    "gen": cmd_gen,
    "cells": cmd_cells,
    "boxes": cmd_boxes,
    "content": cmd_content,
    "dim": cmd_dim,
    "volume": cmd_volume,
    "project": cmd_project,
    "section": cmd_section,
    "polar": cmd_polar,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="inp", metavar="FILE", help="instance file (JSON)")
    common.add_argument("--out", metavar="FILE", help="write the result here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, help="random seed (generators and Monte Carlo)")
    common.add_argument("--cfg", metavar="FILE", help="constants configuration (JSON)")
    common.add_argument("--oracle", action="store_true", help="recompute with the brute-force oracles and compare")
    common.add_argument("--tol", type=float, help="extra relative tolerance for Monte Carlo comparisons")

    p = _Parser(prog="intcells", description="Integer cells, coordinate convexity and volume ratios.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    s = sub.add_parser("gen", parents=[common], help="generate an instance")
    s.add_argument("family")
    s.add_argument("--param", "-p", action="append", metavar="KEY=VALUE")
    for name, text in (("cells", "integer cells of a coordinate projection"),
                       ("boxes", "integer boxes of a coordinate projection"),
                       ("project", "coordinate projection of a point set or polytope")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("--proj", metavar="I", help="comma separated 1-based coordinates")
    sub.add_parser("content", parents=[common], help="cell content and box content of a point set")
    s = sub.add_parser("dim", parents=[common], help="VC, Natarajan or combinatorial dimension")
    s.add_argument("kind", choices=("vc", "natarajan", "comb"))
    s.add_argument("--t", metavar="P/Q", help="scale for the combinatorial dimension")
    sub.add_parser("volume", parents=[common], help="exact volume of a polytope")
    s = sub.add_parser("section", parents=[common], help="section by a coordinate subspace")
    s.add_argument("--keep", metavar="I", help="coordinates spanning the subspace")
    sub.add_parser("polar", parents=[common], help="polar body")
    s = sub.add_parser("verify", parents=[common], help="check one claim on one instance")
    s.add_argument("claim", choices=DISCRETE_CLAIMS + CONVEX_CLAIMS, metavar="CLAIM")
    s.add_argument("--param", "-p", action="append", metavar="KEY=VALUE")
    s = sub.add_parser("sweep", parents=[common], help="measure the best constant of a claim over a corpus")
    s.add_argument("claim", metavar="CLAIM")
    s.add_argument("--corpus", metavar="DIR")
    s.add_argument("--param", "-p", action="append", metavar="KEY=VALUE")
    sub.add_parser("report", parents=[common], help="re-render stored reports")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        cfg = _cfg(args)
        manifest = RunManifest.start(["intcells"] + argv, cfg.to_dict(), [cfg.mc_seed] + ([args.seed] if args.seed is not None else []))
        result, instance, problem = COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        sys.stderr.write(str(exc))
        return EXIT_USAGE
    except (InputError, PreconditionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    manifest.finish()

    if isinstance(result, VerificationReport):
        text = render_csv([result], manifest) if args.format == "csv" else render_json([result], manifest)
        _emit(text, args.out)
        return EXIT_OK if result.passed else EXIT_VIOLATED

    if instance is not None:
        # instance-producing commands write the instance itself; metadata goes to stderr
        _emit(dumps(instance_to_json(instance)), args.out)
        if result:
            sys.stderr.write(json.dumps(_fmt(result), sort_keys=True) + "\n")
    else:
        doc = {"command": args.command, "result": _fmt(result), "manifest": manifest.to_dict()}
        if args.format == "csv" and args.command == "report":
            text = render_rows_csv(result["reports"])
        elif args.format == "csv":
            text = _flat_csv(doc["result"])
        else:
            text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
        _emit(text, args.out)
    if problem:
        sys.stderr.write(problem + "\n")
        return EXIT_VIOLATED
    if args.command == "report" and result["failed"]:
        return EXIT_VIOLATED
    return EXIT_OK


def _flat_csv(result: dict) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k in sorted(result):
        v = result[k]
        w.writerow([k, v if isinstance(v, str) else json.dumps(v, sort_keys=True)])
    return buf.getvalue()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
