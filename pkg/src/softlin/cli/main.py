"""Command line: ``softlin check|report|selftest``."""

import argparse
import os
import sys

from .. import selftest
from .report import emit_report, emit_selftest
from .scene import SceneError, parse_scene
from .tasks import Options, execute


def _default_seed():
    raw = os.environ.get("SOFTLIN_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"softlin: SOFTLIN_SEED must be an integer, got {raw!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="tolerance for rank, membership and axiom checks")
    common.add_argument("--samples", type=int, default=None, help="sample count for randomized checks")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $SOFTLIN_SEED or 0)")
    common.add_argument("--window-n", type=int, default=10_000, help="prefix length N for sequence windows")
    common.add_argument("--format", choices=("json", "text"), default=None)

    ap = argparse.ArgumentParser(prog="softlin", description="Check soft-set and soft-norm scenes.")
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb, help_ in (("check", "run a scene and print a summary"), ("report", "run a scene and print the full report")):
        p = sub.add_parser(verb, parents=[common], help=help_)
        p.add_argument("scene")
        p.add_argument("-o", "--output", help="write the report here instead of stdout")
    sub.add_parser("selftest", parents=[common], help="run the built-in theorem suite")
    return ap


def _write(data, path=None):
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv=None):
    args = build_parser().parse_args(argv)
    seed = _default_seed() if args.seed is None else args.seed
    if args.verb == "selftest":
        results = selftest.run_all(seed)
        _write(emit_selftest(results, args.format or "json"))
        return 0 if all(r.passed for r in results) else 1
    try:
        scene = parse_scene(args.scene)
    except SceneError as e:
        for path, msg in e.diagnostics:
            print(f"softlin: {path}: {msg}" if path else f"softlin: {msg}", file=sys.stderr)
        return 2
    opts = Options(tol=args.tol, samples=args.samples, seed=seed, window_n=args.window_n)
    report = execute(scene, opts)
    fmt = args.format or ("text" if args.verb == "check" else "json")
    _write(emit_report(report, fmt), args.output)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
