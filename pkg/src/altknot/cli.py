"""Command-line interface.

Commands: ``analyze``, ``reduce``, ``augment``, ``bounds``, ``gen``,
``selfcheck``, ``render``.  Files may hold one diagram or a corpus of
blank-line-separated PD blocks (optionally titled with ``# name:``
comments); batch output is one JSON line per block in input order.

Exit codes: 0 success, 1 precondition failure, 2 input or I/O error,
3 internal guarantee violation.  Machine-readable error objects go to
stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .analysis import analysis_report
from .augmentation import augment
from .diagram import parse_pd, serialize_pd
from .errors import DiagramError, exit_code_for
from .generate import random_knot_diagram
from .reduction import preprocess
from .render import render_svg
from .selfcheck import run_selfcheck
from .volume import augmented_volume_bounds, constants, twist_volume_bounds, volume_report

_DEFAULT_SEED = 20240900


def _split_corpus(text: str) -> list[tuple[str, str]]:
    """(name, pd text) per blank-line-separated block."""
    blocks = []
    name = None
    buf: list[str] = []
    for line in text.splitlines() + [""]:
        stripped = line.strip()
        if stripped.startswith("#"):
            comment = stripped.lstrip("#").strip()
            if comment.lower().startswith("name:"):
                name = comment[5:].strip()
            continue
        if not stripped:
            if buf:
                blocks.append((name or f"diagram-{len(blocks)}", "\n".join(buf)))
                buf, name = [], None
            continue
        buf.append(line)
    return blocks


def _emit(obj: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        for k, v in obj.items():
            print(f"{k}: {v}")


def _run_blocks(blocks, worker, parallelism: int):
    if parallelism <= 1 or len(blocks) <= 1:
        return [worker(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(worker, blocks))


def _cmd_analyze(args) -> int:
    blocks = _split_corpus(_read(args.file))

    def work(block):
        name, text = block
        rep = analysis_report(parse_pd(text))
        rep["name"] = name
        return rep

    for rep in _run_blocks(blocks, work, args.parallel):
        _emit(rep, args.format)
    return 0


def _cmd_reduce(args) -> int:
    blocks = _split_corpus(_read(args.file))

    def work(block):
        name, text = block
        d, trace = preprocess(parse_pd(text))
        return {"name": name, "pd": serialize_pd(d), "trace": trace.to_json()}

    for rep in _run_blocks(blocks, work, args.parallel):
        _emit(rep, args.format)
    return 0


def _cmd_augment(args) -> int:
    blocks = _split_corpus(_read(args.file))

    def work(block):
        name, text = block
        res = augment(parse_pd(text))
        rep = res.to_json()
        rep["name"] = name
        rep["volume"] = volume_report(res)
        return rep, res

    outputs = _run_blocks(blocks, work, args.parallel)
    for rep, res in outputs:
        _emit(rep, args.format)
    if args.emit_pd:
        with open(args.emit_pd, "w") as fh:
            for rep, _res in outputs:
                fh.write(f"# name: {rep['name']}\n{rep['pd_G']}\n\n")
    if args.emit_svg:
        _rep, res = outputs[-1]
        with open(args.emit_svg, "w") as fh:
            fh.write(render_svg(res.g))
    return 0


def _cmd_bounds(args) -> int:
    w = twist_volume_bounds(args.twist)
    upper, lower = augmented_volume_bounds(args.twist, args.claim_min_twist)
    out = {
        "v3": constants().v3,
        "t": args.twist,
        "lower_raw": w.lower_raw,
        "lower": w.lower if args.clamp_lower else w.lower_raw,
        "upper": w.upper,
        "altvol_upper": upper.upper,
    }
    if lower is not None:
        out["altvol_lower"] = lower.lower
    _emit(out, args.format)
    return 0


def _cmd_gen(args) -> int:
    d, trace = random_knot_diagram(
        args.seed, args.letters, args.flips, max_crossings=args.max_crossings
    )
    out = {
        "seed": args.seed,
        "pd": serialize_pd(d),
        "crossings": len(d.crossings),
        "reduction_steps": len(trace.steps),
    }
    _emit(out, args.format)
    return 0


def _cmd_selfcheck(args) -> int:
    def progress(case):
        if args.format == "text":
            status = "ok" if case.ok else "FAIL"
            print(
                f"seed {case.seed}: {case.crossings} crossings, "
                f"t {case.t_d} -> {case.t_g}, {case.seconds * 1e3:.0f} ms [{status}]"
            )

    report = run_selfcheck(args.cases, seed=args.seed, progress=progress)
    _emit(report, args.format)
    return 0 if report["passed"] == report["cases"] else 1


def _cmd_render(args) -> int:
    d = parse_pd(_read(args.file))
    svg = render_svg(d)
    with open(args.out, "w") as fh:
        fh.write(svg)
    return 0


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="altknot",
        description="Alternating augmentations of knot diagrams with "
        "certified twist-number and volume bounds.",
    )
    p.add_argument("--version", action="version", version=f"altknot {__version__}")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--parallel", type=int, default=1, help="batch worker count")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="diagram predicates and twist statistics")
    a.add_argument("file")
    a.set_defaults(func=_cmd_analyze)

    r = sub.add_parser("reduce", help="remove nugatory crossings and R2 bigons")
    r.add_argument("file")
    r.set_defaults(func=_cmd_reduce)

    g = sub.add_parser("augment", help="build an alternating augmentation")
    g.add_argument("file")
    g.add_argument("--emit-pd", help="write the augmented PD codes here")
    g.add_argument("--emit-svg", help="write an SVG of the (last) augmentation here")
    g.set_defaults(func=_cmd_augment)

    b = sub.add_parser("bounds", help="volume windows for a twist count")
    b.add_argument("--twist", type=int, required=True)
    b.add_argument("--claim-min-twist", type=int, default=None)
    b.add_argument("--no-clamp-lower", dest="clamp_lower", action="store_false")
    b.set_defaults(func=_cmd_bounds, clamp_lower=True)

    gen = sub.add_parser("gen", help="random qualifying knot diagram")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--letters", type=int, default=12)
    gen.add_argument("--flips", type=int, default=2)
    gen.add_argument("--max-crossings", type=int, default=None)
    gen.set_defaults(func=_cmd_gen)

    s = sub.add_parser("selfcheck", help="run the pipeline property suite")
    s.add_argument("--cases", type=int, default=25)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=_cmd_selfcheck)

    rd = sub.add_parser("render", help="draw a diagram as SVG")
    rd.add_argument("file")
    rd.add_argument("out")
    rd.set_defaults(func=_cmd_render)
    return p


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", None) is None and args.command in ("gen", "selfcheck"):
        args.seed = int(os.environ.get("ALTKNOT_SEED", _DEFAULT_SEED))
    try:
        return args.func(args)
    except DiagramError as exc:
        code = exit_code_for(exc)
        err = {"error": type(exc).__name__, "message": str(exc), "exit": code}
        print(json.dumps(err), file=sys.stderr)
        return code
    except OSError as exc:
        print(
            json.dumps({"error": "OSError", "message": str(exc), "exit": 2}),
            file=sys.stderr,
        )
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
