"""Replication fan-out and result bundle export."""

from __future__ import annotations

import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from .config import ScenarioConfig
from .market import run_market
from .metrics import RunResult, summarize, write_run


def check_writable(out_dir: Path) -> Path:
    """Create ``out_dir`` if needed and prove it accepts files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile(dir=out_dir, prefix=".probe", delete=True):
        pass
    return out_dir


def _run_one(args: tuple[ScenarioConfig, int, bool]) -> RunResult:
    cfg, seed, trace = args
    return run_market(cfg, seed, record_trace=trace)


def run_replications(
    cfg: ScenarioConfig, seeds: Sequence[int], workers: int = 1, emit_trace: bool = False
) -> list[RunResult]:
    """One independent simulation per seed, returned in seed order.

    Each worker owns a whole simulation; nothing is shared, so the results
    do not depend on ``workers``.
    """
    jobs = [(cfg, int(s), emit_trace) for s in seeds]
    if workers <= 1 or len(jobs) <= 1:
        results = [_run_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_run_one, jobs))
    return sorted(results, key=lambda r: r.seed)


def conservation_report(results: Sequence[RunResult]) -> dict:
    worst = 0.0
    for r in results:
        for led in r.ledgers:
            scale = max(abs(led.capital_start), abs(led.capital_end), 1.0)
            worst = max(worst, abs(led.residual) / scale)
    return {"max_relative_residual": worst}


def run_scenarios(
    cfg: ScenarioConfig,
    seeds: Sequence[int] | None = None,
    out_dir: str | os.PathLike = "out",
    workers: int = 1,
    emit_trace: bool = False,
    plots: bool = True,
) -> dict:
    """Run all seeds, write CSVs, ``summary.json`` and SVG charts to ``out_dir``.

    Returns the summary dictionary.
    """
    out = check_writable(Path(out_dir))
    seeds = tuple(cfg.seeds if seeds is None else seeds)
    results = run_replications(cfg, seeds, workers, emit_trace)
    for r in results:
        write_run(r, out)
    summary = summarize(out, cfg.horizon_years)
    summary["config"] = cfg.to_dict()
    summary["conservation"] = conservation_report(results)
    summary["max_line_total"] = max((max(r.line_totals, default=0.0) for r in results), default=0.0)
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if plots:
        from .plotting import plot_seed, plot_uniform_deviation

        label = cfg.preset or "custom"
        for s in seeds:
            plot_seed(out, s, label)
        plot_uniform_deviation(out, seeds, label)
    return summary
