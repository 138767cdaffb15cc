"""Command-line entry points.

Two subcommands: `run` executes a single-dt config and writes the per-step
CSV; `sweep` executes every dt in the config and writes sweep.csv alongside
the per-run files. Errors are reported as one JSON line on stderr with a
`kind` of config, numerical, or io, mapped to exit codes 2, 3, and 4.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import ConfigError, load_config
from .runner import run_single, run_sweep
from .transport import ConvergenceError


def _fail(kind: str, message) -> None:
    print(json.dumps({"kind": kind, "message": str(message)}), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgfem",
        description="Transport experiments with Lagrange-Galerkin schemes.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("run", "execute a single run (config must have one dt)"),
                       ("sweep", "execute one run per dt and write sweep.csv")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("config", help="path to a key = value config file")
        sp.add_argument("--out", default=None, metavar="DIR",
                        help="override the config's output directory")
        sp.add_argument("--threads", type=int, default=None, metavar="N",
                        help="override the config's worker count (sweep only)")
        sp.add_argument("--dump-mesh", action="store_true",
                        help="write mesh.txt next to the run CSV (run only)")
        sp.add_argument("--dump-field", type=int, default=None, metavar="EVERY_K",
                        help="write the field every K steps (run only)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2

    try:
        cfg = load_config(ns.config)
        if ns.threads is not None and ns.threads < 1:
            raise ConfigError("--threads must be at least 1")
        if ns.dump_field is not None and ns.dump_field < 1:
            raise ConfigError("--dump-field must be at least 1")

        if ns.command == "run":
            if len(cfg.dts) != 1:
                raise ConfigError(
                    f"run takes a config with exactly one dt, got {len(cfg.dts)}; "
                    "use sweep for dt lists")
            result = run_single(cfg, cfg.dts[0], out_dir=ns.out,
                                dump_mesh=ns.dump_mesh,
                                dump_field_every=ns.dump_field or 0)
            print(f"wrote {result.csv_path}")
            if result.record.flags:
                print("flags: " + ",".join(result.record.flags))
        else:
            if ns.dump_mesh or ns.dump_field is not None:
                raise ConfigError("--dump-mesh/--dump-field apply to run, "
                                  "not sweep")
            path = run_sweep(cfg, out_dir=ns.out, threads=ns.threads)
            print(f"wrote {path}")
        return 0
    except ConfigError as exc:
        _fail("config", exc)
        return 2
    except (ConvergenceError, FloatingPointError) as exc:
        _fail("numerical", exc)
        return 3
    except OSError as exc:
        _fail("io", exc)
        return 4
