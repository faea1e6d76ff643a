"""Command-line harness.

    submigrate run --family num_localities --model interview --seed 1 \
        --trials 10 --samples 1000 --out results/
    submigrate scenario gen scenario.json --model interview --agents 100 --localities 10
    submigrate scenario validate scenario.json
    submigrate selftest [--quick]
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Tuple

from . import harness, selftest
from .scenario import MODEL_KINDS, Scenario

DEFAULT_SWEEPS = {
    "num_localities": [1, 2, 5, 10, 20, 50],
    "num_agents": [20, 60, 100, 140, 200],
    "num_professions": [1, 2, 5, 10, 20, 50],
    "job_availability": [(25, 25), (25, 50), (50, 50), (50, 75), (75, 75)],
    "specialization": [0, 1, 2, 3, 4, 5],
}


def _parse_values(family: str, raw: str):
    values = []
    for tok in raw.split(","):
        tok = tok.strip()
        if family == "job_availability":
            a, b = tok.split(":")
            values.append((int(a), int(b)))
        else:
            values.append(int(tok))
    return values


def cmd_run(args) -> int:
    values = (_parse_values(args.family, args.values)
              if args.values else DEFAULT_SWEEPS[args.family])
    spec = harness.ExperimentSpec(
        family=args.family, model=args.model, values=tuple(values),
        trials=args.trials, seed=args.seed, samples=args.samples,
        exact_cutoff=args.exact_cutoff,
    )
    n = 0
    for rec in harness.run_experiment(spec, args.out):
        n += 1
        rel = "" if rec.rel_improvement is None else f"{rec.rel_improvement:+.2%}"
        print(f"{rec.family} x={rec.x} trial={rec.trial}: "
              f"greedy={rec.greedy_utility:.3f} additive={rec.additive_utility:.3f} {rel}")
    print(f"wrote {n} new records to {args.out}")
    return 0


def cmd_scenario(args) -> int:
    if args.action == "gen":
        scenario = harness.generate_standard(args.model, args.agents,
                                             args.localities, args.seed)
        scenario.to_json(args.file)
        print(f"wrote {args.file}")
        return 0
    try:
        scenario = Scenario.from_json(args.file)
    except (ValueError, KeyError, OSError) as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return 1
    print(f"ok: {args.file} ({scenario.model}, {len(scenario.agents)} agents, "
          f"{len(scenario.localities)} localities)")
    return 0


def cmd_selftest(args) -> int:
    results = selftest.run_all(full=not args.quick, seed=args.seed)
    for r in results:
        print(r)
    failed = [r for r in results if not r.ok]
    if failed:
        print(f"{len(failed)} suite(s) FAILED", file=sys.stderr)
        return 1
    print("all property suites passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="submigrate")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a greedy-vs-additive experiment family")
    run.add_argument("--family", required=True, choices=harness.FAMILIES)
    run.add_argument("--model", required=True, choices=MODEL_KINDS)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--trials", type=int, default=10)
    run.add_argument("--samples", type=int, default=1000)
    run.add_argument("--out", required=True)
    run.add_argument("--values", default=None,
                     help="comma-separated swept values; job_availability uses k0:k1 pairs")
    run.add_argument("--exact-cutoff", type=int, default=7)
    run.set_defaults(func=cmd_run)

    scen = sub.add_parser("scenario", help="generate or validate a scenario file")
    scen.add_argument("action", choices=["gen", "validate"])
    scen.add_argument("file")
    scen.add_argument("--model", default="interview", choices=MODEL_KINDS)
    scen.add_argument("--agents", type=int, default=100)
    scen.add_argument("--localities", type=int, default=10)
    scen.add_argument("--seed", type=int, default=0)
    scen.set_defaults(func=cmd_scenario)

    st = sub.add_parser("selftest", help="run the exhaustive property suites")
    st.add_argument("--quick", action="store_true", help="reduced draw counts")
    st.add_argument("--seed", type=int, default=0)
    st.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
