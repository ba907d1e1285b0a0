"""``orsim`` command line: sweeps, single-decision explain, and a self test."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from ..graphmodel import LinkProbModel, TopologyError
from .config import ConfigError, parse_config
from .explain import explain_selection
from .runner import run_density_sweep, run_load_sweep


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orsim", description="opportunistic routing relay-set simulator")
    ap.add_argument("command", choices=["density", "load", "explain", "selftest"])
    ap.add_argument("--config", help="key=value configuration file")
    ap.add_argument("--profile", choices=["desk", "paper"], default="paper")
    ap.add_argument("--seed-base", type=int, help="shift configured seeds to start here")
    ap.add_argument("--out", default="orsim-out", help="output directory for CSV files")
    ap.add_argument("--policies", help="comma list, e.g. dda,exor,soar")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one config key")
    ap.add_argument("--topology", help="node file for explain")
    ap.add_argument("--sender", type=int)
    ap.add_argument("--destination", type=int)
    ap.add_argument("--utility", choices=["progress", "energy"], default="progress")
    ap.add_argument("--probe", action="append", default=[], metavar="IDS", help="node ids to classify, e.g. 2,5,6")
    return ap


def _fail(kind: str, message: str, key: str | None = None, code: int = 2) -> int:
    print(json.dumps({"error": kind, "key": key, "message": message}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "selftest":
        from .selftest import run_selftest
        return 0 if run_selftest() else 1

    overrides = {}
    for item in args.set:
        if "=" not in item:
            return _fail("config", f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        overrides[k.strip()] = v
    if args.policies:
        overrides["policies"] = args.policies
    try:
        cfg = parse_config(args.config, args.profile, overrides)
        if args.seed_base is not None:
            cfg = replace(cfg, seeds=tuple(args.seed_base + k for k in range(len(cfg.seeds))))
    except ConfigError as exc:
        return _fail("config", exc.message, exc.key)

    if args.command == "explain":
        if args.topology is None or args.sender is None or args.destination is None:
            return _fail("usage", "explain needs --topology, --sender and --destination")
        try:
            probes = [tuple(int(x) for x in p.split(",")) for p in args.probe]
            model = LinkProbModel.constant(cfg.link_p) if cfg.link_model == "constant" else LinkProbModel.distance_decay(cfg.link_beta)
            text = explain_selection(Path(args.topology), args.sender, args.destination, model, args.utility, probes)
        except (TopologyError, ValueError) as exc:
            return _fail("explain", str(exc))
        except Exception as exc:
            return _fail("explain", f"{type(exc).__name__}: {exc}")
        sys.stdout.write(text)
        return 0

    sweep = run_density_sweep if args.command == "density" else run_load_sweep
    sys.stdout.write(sweep(cfg, out_dir=args.out))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
