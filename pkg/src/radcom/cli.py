"""Command-line entry point.

    radcom run <config>        full Monte Carlo sweep, writes the results CSV
    radcom crlb <config>       bounds and rates only (no trials)
    radcom validate <config>   parse and construct everything, then exit

Config files use the flat `key = value` format documented in the README.
"""

import argparse
import sys

from . import harness
from ._backend import backend_name
from .errors import RadcomError


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="radcom",
        description="Joint radar/communication Monte Carlo simulator "
                    "(OFDM, OTFS, FMCW)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("run", "run the configured SNR sweep"),
                       ("crlb", "compute bounds and rates only"),
                       ("validate", "check a config file and exit")):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("config", help="path to the experiment config file")
        cmd.add_argument("--output", help="override the output_csv path")
        cmd.add_argument("--workers", type=int, default=None,
                         help="override the worker count")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        spec = harness.load_spec(args.config)
        if args.command == "validate":
            harness.validate_spec(spec)
            print(f"OK: {args.config} ({', '.join(spec.waveforms)}; "
                  f"kernel backend: {backend_name()})")
            return 0
        rows = harness.run_experiment(spec, workers=args.workers,
                                      monte_carlo=(args.command == "run"))
        out = harness.write_csv(rows, args.output or spec.output_csv)
        failed = [r for r in rows if r.error]
        print(f"wrote {len(rows)} rows to {out}"
              + (f" ({len(failed)} rows carry errors)" if failed else ""))
        return 0
    except (RadcomError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
