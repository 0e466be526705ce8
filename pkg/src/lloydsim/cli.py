"""``simulate`` command line entry point."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import PRESETS, ConfigError, load_config, parse_seeds
from .runner import run_scenarios

log = logging.getLogger("lloydsim")

EXIT_CONFIG = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="simulate",
        description="Run replications of the subscription insurance market simulation.",
    )
    p.add_argument("--config", help="YAML file of key: value overrides")
    p.add_argument("--preset", choices=sorted(PRESETS), help="scenario preset")
    p.add_argument("--seeds", help="N for seeds 0..N-1, or a comma list such as 0,3,7")
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--emit-trace", action="store_true", help="also write the full event trace per seed")
    p.add_argument("--workers", type=int, default=1, help="parallel replications (default: 1)")
    p.add_argument("--no-plots", action="store_true", help="skip the SVG charts")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = load_config(args.config, preset=args.preset)
        seeds = parse_seeds(args.seeds) if args.seeds is not None else cfg.seeds
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    log.info("running %s over seeds %s", cfg.preset or "custom config", list(seeds))
    try:
        summary = run_scenarios(
            cfg, seeds, args.out, workers=args.workers, emit_trace=args.emit_trace, plots=not args.no_plots
        )
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(
        f"{len(seeds)} replication(s) written to {args.out}: "
        f"insolvencies={summary['insolvencies_total']} "
        f"premium_convergence={summary['premium_convergence']}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
