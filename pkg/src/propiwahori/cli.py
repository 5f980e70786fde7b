"""Command line interface: preset ingestion, command dispatch, reports.

Commands emit a JSON report to stdout or --out; --figures renders PNG
figures and a TSV summary alongside.  The exit code is nonzero iff any
check in the report failed.
"""

from __future__ import annotations

import argparse
import sys

from . import driver, reporting
from .presets import load_preset, preset_to_dict


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", default="gl2", help="built-in name or JSON path")
    common.add_argument("--p", type=int, default=5, help="residue characteristic")
    common.add_argument("--field-degree", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the JSON report here (default stdout)")
    common.add_argument("--figures", help="directory for PNG figures + TSV summary")

    p = argparse.ArgumentParser(
        prog="propiwahori",
        description="Exact verification suite for pro-p Iwahori Hecke algebras",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run every relation sweep")
    v.add_argument("--ball-radius", type=int, default=2, help="pairing bound")

    b = sub.add_parser(
        "bernstein-table", parents=[common], help="E-basis expansions over a ball"
    )
    b.add_argument("--ball-radius", type=int, default=1)

    s = sub.add_parser(
        "std-module", parents=[common], help="standard modules and intertwiners"
    )
    s.add_argument("--count", type=int, default=6)
    s.add_argument("--theta", help="comma-separated simple root indices")

    sub.add_parser("induce", parents=[common], help="parabolic induction, both ways")

    ss = sub.add_parser(
        "supersingular-search", parents=[common], help="search simple supersingulars"
    )
    ss.add_argument("--theta", help="comma-separated simple root indices")
    ss.add_argument("--count", type=int, default=4)
    ss.add_argument("--dim-bound", type=int, default=None)

    c = sub.add_parser("classify", parents=[common], help="the classification sweep")
    c.add_argument("--free-samples", type=int, default=2)
    c.add_argument("--full-torsion", action="store_true")
    c.add_argument("--cap", type=int, default=None, help="cap characters per Levi")
    c.add_argument("--dim-bound", type=int, default=None)

    sub.add_parser("dump-preset", parents=[common], help="normalized preset document")
    return p


def _parse_theta(arg):
    if arg is None:
        return None
    arg = arg.strip()
    if not arg:
        return frozenset()
    return frozenset(int(x) for x in arg.split(","))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        preset = load_preset(args.preset, p=args.p, field_degree=args.field_degree)
    except (ValueError, OSError) as exc:
        print(f"preset rejected: {exc}", file=sys.stderr)
        return 1

    if args.command == "verify":
        report = driver.verify_report(preset, max_pairing=args.ball_radius, seed=args.seed)
    elif args.command == "bernstein-table":
        report = driver.bernstein_report(preset, radius=args.ball_radius)
        report["all_passed"] = report["all_integral"]
    elif args.command == "std-module":
        report = driver.std_module_report(
            preset, count=args.count, seed=args.seed, theta=_parse_theta(args.theta)
        )
    elif args.command == "induce":
        report = driver.induce_report(preset, seed=args.seed)
    elif args.command == "supersingular-search":
        theta = _parse_theta(args.theta) or frozenset()
        report = driver.search_report(
            preset, theta=theta, count=args.count, seed=args.seed,
            dim_bound=args.dim_bound,
        )
    elif args.command == "classify":
        report = driver.classify_report(
            preset,
            free_count=args.free_samples,
            seed=args.seed,
            full_torsion=args.full_torsion,
            cap=args.cap,
            dim_bound=args.dim_bound,
        )
    elif args.command == "dump-preset":
        report = {"command": "dump-preset", "preset": preset.name,
                  "p": preset.p, "document": preset_to_dict(preset),
                  "all_passed": True}
    else:  # pragma: no cover
        raise AssertionError(args.command)

    text = reporting.dump_json(report, args.out)
    if not args.out:
        print(text)
    if args.figures:
        written = reporting.render_figures(report, args.figures)
        print("wrote " + ", ".join(written), file=sys.stderr)
    return 0 if report.get("all_passed", False) else 1


if __name__ == "__main__":
    raise SystemExit(main())
