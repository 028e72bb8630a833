"""Command-line front end.

Every subcommand reads a scenario config for its named objects; the
analysis subcommands build a single-task run from their flags, while `run`
executes the config's own task list.  Results land in --out as
report.json, summary.txt, and per-task CSVs; the summary is echoed to
stdout.  ITERLAB_THREADS (the only honored environment variable) sizes the
sampling thread pool.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import ConfigError, Scenario, Task, load_config
from .runner import run_scenario


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scenario = load_config(args.config)
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        scenario.seed = args.seed
    if args.radii is not None:
        scenario.plan_params["num_radii"] = args.radii
    if args.directions is not None:
        scenario.plan_params["num_directions"] = args.directions

    if args.command != "run":
        try:
            scenario.tasks = [_task_from_args(args, scenario)]
        except ConfigError as exc:
            print(exc, file=sys.stderr)
            return 2

    threads = _thread_count()
    report = run_scenario(scenario, out_dir=args.out, threads=threads)
    print(report.summary_text(), end="")
    return report.exit_code


def _thread_count() -> int:
    raw = os.environ.get("ITERLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        print(f"ignoring non-integer ITERLAB_THREADS={raw!r}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iterlab",
        description="growth exponents, weight functions, and iterate norms "
                    "for constant-coefficient operator systems")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="scenario TOML file")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the scenario seed")
        sp.add_argument("--radii", type=int, default=None,
                        help="number of sampling radii")
        sp.add_argument("--directions", type=int, default=None,
                        help="number of random sampling directions")
        sp.add_argument("--snap-den", type=int, default=None,
                        help="max denominator for rational snapping "
                             "(growth subcommands)")
        sp.add_argument("--out", default=None,
                        help="output directory for report.json/summary/CSVs")

    sp = sub.add_parser("run", help="execute the config's task list")
    common(sp)

    sp = sub.add_parser("estimate-gamma",
                        help="derivative-decay exponent of a system")
    common(sp)
    sp.add_argument("--system", required=True)
    sp.add_argument("--alpha-max", type=int, default=None)

    sp = sub.add_parser("estimate-h", help="weakness exponent of one system "
                                           "under another")
    common(sp)
    sp.add_argument("--weaker", required=True)
    sp.add_argument("--stronger", required=True)

    sp = sub.add_parser("check-elliptic", help="two-route ellipticity test")
    common(sp)
    sp.add_argument("--system", required=True)

    sp = sub.add_parser("compare", help="mutual weakness and consistency")
    common(sp)
    sp.add_argument("--first", required=True)
    sp.add_argument("--second", required=True)

    sp = sub.add_parser("iterate-norms", help="iterate norm table on the box")
    common(sp)
    sp.add_argument("--system", required=True)
    sp.add_argument("--function", required=True)
    sp.add_argument("--b-max", type=int, default=None)

    sp = sub.add_parser("seminorm", help="weighted iterate semi-norm")
    common(sp)
    sp.add_argument("--system", required=True)
    sp.add_argument("--function", required=True)
    sp.add_argument("--weight", required=True)
    sp.add_argument("--lam", type=float, required=True)
    sp.add_argument("--b-max", type=int, default=None)

    sp = sub.add_parser("classify", help="membership in the iterate class")
    common(sp)
    sp.add_argument("--system", required=True)
    sp.add_argument("--function", required=True)
    sp.add_argument("--weight", required=True)
    sp.add_argument("--mode", choices=("beurling", "roumieu"),
                    default="beurling")
    sp.add_argument("--b-max", type=int, default=None)

    sp = sub.add_parser("verify-inclusion",
                        help="membership preservation between two classes")
    common(sp)
    sp.add_argument("--source", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--weight", required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--h", type=float, required=True)
    sp.add_argument("--functions", required=True,
                    help="comma-separated function names")
    sp.add_argument("--mode", choices=("beurling", "roumieu"),
                    default="beurling")
    return parser


def _task_from_args(args, scenario: Scenario) -> Task:
    kind = args.command.replace("-", "_")
    params: dict = {}
    errors = []

    def pick(attr, key=None, cast=None):
        val = getattr(args, attr, None)
        if val is not None:
            params[key or attr] = cast(val) if cast else val

    pick("system"); pick("weaker"); pick("stronger")
    pick("first"); pick("second"); pick("source"); pick("target")
    pick("function"); pick("weight"); pick("lam"); pick("mode")
    pick("alpha_max"); pick("b_max")
    pick("s"); pick("h")
    if kind in ("estimate_gamma", "estimate_h", "compare"):
        pick("snap_den")
    if kind == "verify_inclusion":
        params["functions"] = [f.strip() for f in args.functions.split(",")
                               if f.strip()]
    for key in ("system", "weaker", "stronger", "first", "second",
                "source", "target"):
        if key in params and params[key] not in scenario.systems:
            errors.append(f"--{key}: undeclared system {params[key]!r}")
    if "weight" in params and params["weight"] not in scenario.weights:
        errors.append(f"--weight: undeclared weight {params['weight']!r}")
    if "function" in params and params["function"] not in scenario.functions:
        errors.append(f"--function: undeclared function {params['function']!r}")
    for fname in params.get("functions", []):
        if fname not in scenario.functions:
            errors.append(f"--functions: undeclared function {fname!r}")
    if errors:
        raise ConfigError(errors)
    return Task(name=f"00_{kind}", kind=kind, params=params)


if __name__ == "__main__":
    sys.exit(main())
