"""Command-line front door.

Subcommands: ``check`` (parse + typecheck), ``eval`` (denotation),
``equiv`` (exact denotational equality of two definitions), ``trace``
(oracle enumeration), ``mc`` (seeded sampling), ``laws`` (law-suite
report), ``webs`` (coherence-space generators for a ground type).

Exit codes: 0 success, 1 domain failure (type error, law failure,
inequivalence), 2 usage or I/O error.  Output is plain deterministic
text; ``--plot``/``--report-dir`` additionally render figures to files.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .denot import denote_def, distribution, format_distribution
from .gen import GenConfig
from .laws import run_laws
from .matrix import SEMIRINGS, SizeCapError
from .oracle import OracleError, enumerate_dist, mc_sample
from .pcoh import check_bipolar_closed, web_meas
from .surface import ParseError, parse_mk_type_str, parse_program, point_str
from .typecheck import TypeCheckError, typecheck_program

DEFAULT_WEB_BASES = {"Bool": ("tt", "ff"), "Tri": ("a", "b", "c")}


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)
    return parse_program(text)


def cmd_check(args) -> int:
    try:
        program = _load(args.file)
        typecheck_program(program)
    except (ParseError, TypeCheckError) as exc:
        print(f"{args.file}: {exc}")
        return 1
    print("OK")
    return 0


def _resolve_def(program, name: str):
    if name not in program.defs:
        print(f"error: no def named {name}", file=sys.stderr)
        raise SystemExit(2)
    return program.defs[name]


def cmd_eval(args) -> int:
    semiring = SEMIRINGS["bool" if args.model == "rel" else "prob"]
    try:
        program = _load(args.file)
        typecheck_program(program)
        _resolve_def(program, args.def_name)
        items = distribution(program, args.def_name, semiring)
    except (ParseError, TypeCheckError, SizeCapError, ValueError) as exc:
        print(f"{args.file}: {exc}")
        return 1
    print(format_distribution(items, semiring))
    if args.plot:
        from .figures import save_distribution_figure

        save_distribution_figure(
            items, args.plot, title=f"{args.def_name} ({args.model})"
        )
    return 0


def cmd_equiv(args) -> int:
    try:
        program = _load(args.file)
        typecheck_program(program)
        left = _resolve_def(program, args.left)
        right = _resolve_def(program, args.right)
        if left.decl_type != right.decl_type:
            print(
                f"INEQUIV: {args.left} : {left.decl_type} vs "
                f"{args.right} : {right.decl_type} (different types)"
            )
            return 1
        lm = denote_def(program, args.left)
        rm = denote_def(program, args.right)
    except (ParseError, TypeCheckError, SizeCapError) as exc:
        print(f"{args.file}: {exc}")
        return 1
    if lm == rm:
        print("EQUIV")
        return 0
    for (r, c, a), (_, _, b) in zip(lm.entries(), rm.entries()):
        if a != b:
            print(
                f"INEQUIV at [{point_str(r)} -> {point_str(c)}]: "
                f"{a} vs {b}"
            )
            return 1
    print("INEQUIV (index sets differ)")
    return 1


def cmd_trace(args) -> int:
    try:
        program = _load(args.file)
        typecheck_program(program)
        _resolve_def(program, args.def_name)
        dist = enumerate_dist(program, args.def_name)
    except (ParseError, TypeCheckError, OracleError) as exc:
        print(f"{args.file}: {exc}")
        return 1
    print(str(dist))
    if args.plot:
        from .figures import save_distribution_figure

        save_distribution_figure(
            dist.items, args.plot, title=f"{args.def_name} (trace)"
        )
    return 0


def cmd_mc(args) -> int:
    try:
        program = _load(args.file)
        typecheck_program(program)
        _resolve_def(program, args.def_name)
        counts = mc_sample(program, args.def_name, args.seed, args.n)
    except (ParseError, TypeCheckError, OracleError) as exc:
        print(f"{args.file}: {exc}")
        return 1
    items = sorted(
        ((p, Fraction(c, args.n)) for p, c in counts.items()),
        key=lambda pw: point_str(pw[0]),
    ) if args.n else []
    print(format_distribution(items))
    if args.plot:
        from .figures import save_distribution_figure

        save_distribution_figure(
            items, args.plot,
            title=f"{args.def_name} (mc, seed={args.seed}, n={args.n})",
        )
    return 0


def cmd_laws(args) -> int:
    config = GenConfig(seed=args.seed, instances=args.instances)
    report = run_laws(config)
    text = report.to_text()
    print(text, end="")
    if args.report_dir:
        os.makedirs(args.report_dir, exist_ok=True)
        with open(
            os.path.join(args.report_dir, "report.txt"), "w", encoding="utf-8"
        ) as fh:
            fh.write(text)
        with open(
            os.path.join(args.report_dir, "report.kv"), "w", encoding="utf-8"
        ) as fh:
            fh.write(report.to_kv())
        from .figures import save_report_figure

        save_report_figure(
            report, os.path.join(args.report_dir, "report.png")
        )
    return 0 if report.passed else 1


def cmd_webs(args) -> int:
    if args.file:
        program = _load(args.file)
        bases = program.bases
    else:
        bases = DEFAULT_WEB_BASES
    try:
        t = parse_mk_type_str(args.type, bases)
        web = web_meas(bases, t)
        closed = check_bipolar_closed(web)
    except (ParseError, SizeCapError) as exc:
        print(f"error: {exc}")
        return 1
    print(f"web {t}")
    print(f"index: {' '.join(point_str(p) for p in web.index.points)}")
    for g in web.gens:
        print("gen: " + " ".join(str(x) for x in g))
    for h in web.polar_gens:
        print("polar: " + " ".join(str(x) for x in h))
    print(f"bipolar-closed: {'yes' if closed else 'NO'}")
    return 0 if closed else 1


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llmk",
        description=(
            "Exact interpreter and law checker for a two-level probabilistic "
            "calculus (kernel programs + a linear lambda calculus)"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and typecheck a program file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("eval", help="print the denotation of a definition")
    p.add_argument("file")
    p.add_argument("--def", dest="def_name", required=True)
    p.add_argument("--model", choices=("prob", "rel"), default="prob")
    p.add_argument("--plot", help="write a bar-chart figure to this path")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("equiv", help="exact denotational equality of two defs")
    p.add_argument("file")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(fn=cmd_equiv)

    p = sub.add_parser("trace", help="oracle enumeration of a definition")
    p.add_argument("file")
    p.add_argument("--def", dest="def_name", required=True)
    p.add_argument("--plot", help="write a bar-chart figure to this path")
    p.set_defaults(fn=cmd_trace)

    p = sub.add_parser("mc", help="seeded Monte Carlo sampling of a definition")
    p.add_argument("file")
    p.add_argument("--def", dest="def_name", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--plot", help="write a bar-chart figure to this path")
    p.set_defaults(fn=cmd_mc)

    p = sub.add_parser("laws", help="run the equational-law suite")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--instances", type=int, default=200)
    p.add_argument(
        "--report-dir",
        help="also write report.txt, report.kv, and report.png here",
    )
    p.set_defaults(fn=cmd_laws)

    p = sub.add_parser("webs", help="print the coherence-space web of a type")
    p.add_argument("--type", required=True)
    p.add_argument("--file", help="program file supplying base declarations")
    p.set_defaults(fn=cmd_webs)

    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.fn(args)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
