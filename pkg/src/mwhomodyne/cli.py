"""Command-line interface.

Subcommands `two-bec`, `thermometry`, `lattice` and `correlation` run a
JSON-configured scenario and write a CSV; `validate` runs the
cross-module oracle suite.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, parse_config
from .runner import run_scenario
from .validate import validate

_KIND_BY_COMMAND = {
    "two-bec": "two_bec",
    "thermometry": "thermometry",
    "lattice": "lattice",
    "correlation": "correlation",
}


def _add_scenario_parser(sub, name):
    p = sub.add_parser(name, help="run a %s scenario from a JSON config" % name)
    p.add_argument("--config", required=True, help="path to the JSON config")
    p.add_argument("--out", default=None, help="output CSV path (default from config)")
    p.add_argument("--method", default=None,
                   choices=["exact", "closed-form", "saddle"],
                   help="evaluation route (default: exact)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for sweep points (results are "
                        "byte-identical for any value)")
    return p


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mwhomodyne",
        description="Matter-wave homodyne detection simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _KIND_BY_COMMAND:
        _add_scenario_parser(sub, name)
    sub.add_parser("validate", help="run the cross-module oracle suite")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        results = validate()
        for r in results:
            print(r.line())
        n_fail = sum(not r.passed for r in results)
        print("%d/%d checks passed" % (len(results) - n_fail, len(results)))
        return 0 if n_fail == 0 else 1

    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    expected = _KIND_BY_COMMAND[args.command]
    if cfg.kind != expected:
        print("config kind %r does not match subcommand %r" % (cfg.kind, args.command),
              file=sys.stderr)
        return 2
    if args.method:
        cfg.params["method"] = args.method
    out_path = args.out or cfg.out_path
    if not out_path:
        print("no output path: pass --out or set \"out\" in the config",
              file=sys.stderr)
        return 2
    output = run_scenario(cfg, threads=args.threads)
    output.write(out_path)
    print("wrote %s (%d rows)" % (out_path, len(output.rows)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
