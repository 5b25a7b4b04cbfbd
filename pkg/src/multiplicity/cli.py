"""Command line entry point: ``multiplicity {trace,index,verify,plot,demo} ...``."""
import argparse
import json
import logging
import sys
from pathlib import Path

from .config import DEFAULT_TOLERANCES
from .errors import MultiplicityError, ValidationError
from .examples import DEMO_CHARTS, DEMOS
from .report import OUTPUTS, RunConfig, dumps_report, parse_config, run_pipeline

log = logging.getLogger("multiplicity")

_TOL_FLAGS = tuple(DEFAULT_TOLERANCES.as_dict())


def _positive_int(s):
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-n", type=_positive_int, help="marching-squares cells per chart side")
    common.add_argument("--output-dir", type=Path, help="directory for report.json and figures")
    common.add_argument("--chart", choices=("z", "w"), help="chart plane the figures are drawn in")
    for name in _TOL_FLAGS:
        kind = int if name == "index_samples" else float
        common.add_argument("--" + name.replace("_", "-"), type=kind, dest=name, metavar="X",
                            help=f"tolerance {name} (default {DEFAULT_TOLERANCES.as_dict()[name]})")
    common.add_argument("--json", action="store_true", help="print the full report to stdout")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="multiplicity",
                                description="Multiplicity base and index of symbols on the sphere.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in (("trace", "trace the multiplicity base and check genericity"),
                       ("index", "compute the index three ways"),
                       ("verify", "index check plus figures (the full pipeline)"),
                       ("plot", "trace and draw the figures")):
        sp = sub.add_parser(name, parents=[common], help=text, description=text)
        sp.add_argument("config", type=Path, help="JSON config file")
    sp = sub.add_parser("demo", parents=[common], help="run a built-in example end to end")
    sp.add_argument("name", choices=sorted(DEMOS))
    return p


def _load(args):
    if args.command == "demo":
        chart = DEMO_CHARTS[args.name]
        out = args.output_dir or Path("out") / args.name
        cfg = RunConfig(DEMOS[args.name](), outputs=OUTPUTS, output_dir=out, chart=chart)
        command = "verify"
    else:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from exc
        cfg = parse_config(text, base_dir=args.config.parent)
        command = args.command
    tol = {k: getattr(args, k) for k in _TOL_FLAGS}
    return cfg.with_overrides(grid_n=args.grid_n, output_dir=args.output_dir, chart=args.chart,
                              **tol), command


def _summary(res):
    rep = res.report
    lines = [f"{rep['command']}: {rep['spec']['label'] or 'symbol'}  grid_n={rep['grid_n']}"]
    if rep["components"] is not None:
        lines.append(f"  components: {rep['components']}   verdict: {rep['verdict']}")
    for c in rep["per_component"] or []:
        lines.append(f"    #{c['component']}: ind_w={c['ind_w']:+d} ind_v={c['ind_v']:+d} "
                     f"ind_M={c['ind_M']:+d}  ({c['vertices']} vertices)")
    if rep["indices"]:
        i = rep["indices"]
        lines.append(f"  index: direct={i['direct']} w-v={i['w_minus_v']} formula={i['formula']}  "
                     f"consistent={rep['consistent']}")
    if rep["critical_points"] is not None:
        lines.append(f"  critical points in f<0: {len(rep['critical_points'])}")
    if rep["error"]:
        lines.append(f"  error: {rep['error']['error']}: {rep['error']['message']}")
    if res.artifacts:
        lines.append(f"  wrote: {', '.join(res.artifacts)}")
    lines.append(f"  exit {res.exit_code}  ({res.seconds:.2f} s)")
    return "\n".join(lines)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg, command = _load(args)
    except MultiplicityError as exc:
        print(json.dumps(exc.record()), file=sys.stderr)
        return exc.exit_code
    res = run_pipeline(cfg, command)
    print(dumps_report(res.report) if args.json else _summary(res), end="\n" if not args.json else "")
    if res.exit_code:
        print(json.dumps(res.report["error"]), file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
