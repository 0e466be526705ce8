"""Yearly metrics: collection during a run, CSV export and summary statistics.

Everything in :func:`summarize` is computed from the CSV files alone, so a
summary can be rebuilt from an output directory at any time.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .engine import DAYS_PER_YEAR, Event, EventKind, Process
from .syndicate import YearFrame

CSV_HEADER = (
    "seed",
    "year",
    "syndicate_id",
    "capital",
    "premiums_offered_mean",
    "premiums_earned",
    "claims_paid",
    "loss_ratio",
    "insolvent",
)
INDUSTRY_HEADER = ("seed", "year", "claim_frequency", "claim_severity", "claims_count", "exposure_years", "policies_bound")
EXPOSURE_HEADER = ("seed", "year", "syndicate_id", "uniform_deviation", "policies_in_force")
CATASTROPHE_HEADER = (
    "seed", "cat_id", "day", "year", "peril_region", "severity", "exposed_limit", "insured_loss", "claims_paid",
    "policies_hit",
)


def uniform_deviation(counts: Sequence[float]) -> float:
    """Total-variation distance between a regional distribution and uniform.

    0 means perfectly spread; all mass in one of N regions gives 1 - 1/N.
    An empty portfolio counts as 0.
    """
    c = np.asarray(counts, dtype=float)
    if c.size == 0:
        return 0.0
    if np.any(c < 0):
        raise ValueError("counts must be non-negative")
    total = c.sum()
    if total <= 0:
        return 0.0
    return float(0.5 * np.abs(c / total - 1.0 / c.size).sum())


@dataclass
class IndustryFrame:
    year: int
    claim_frequency: float
    claim_severity: float
    claims_count: int
    exposure_years: float
    policies_bound: int


@dataclass
class SyndicateLedger:
    """Lifetime money flows for the conservation check."""

    syndicate_id: int
    capital_start: float
    capital_end: float
    premiums: float
    claims: float
    dividends: float
    insolvent: bool

    @property
    def residual(self) -> float:
        return (self.capital_end - self.capital_start) - (self.premiums - self.claims - self.dividends)


@dataclass
class RunResult:
    seed: int
    frames: list[YearFrame]
    industry: list[IndustryFrame]
    catastrophes: list
    ledgers: list[SyndicateLedger]
    line_totals: list[float]
    events: int = 0
    trace: list[str] = field(default_factory=list)


class MetricsSink(Process):
    """Takes one frame per syndicate per year, live or failed that year.

    Registered after the syndicates and the industry statistics so their
    year-end handlers have already run when this one fires.
    """

    subscriptions = (EventKind.YEAR, EventKind.LEAD_QUOTE_ACCEPTED)

    def __init__(self, syndicates, industry):
        self.syndicates = list(syndicates)
        self.industry = industry
        self.frames: list[YearFrame] = []
        self.industry_frames: list[IndustryFrame] = []
        self._bound = 0
        self._closed: set[int] = set()

    def on_lead_quote_accepted(self, event: Event) -> None:
        self._bound += 1

    def on_year(self, event: Event) -> None:
        year = event.day // DAYS_PER_YEAR
        for syn in self.syndicates:
            if syn.syndicate_id in self._closed:
                continue
            self.frames.append(syn.year_frame(year))
            if syn.insolvent:
                self._closed.add(syn.syndicate_id)
            else:
                syn.roll_year()
        stats = self.industry.reports[-1]
        self.industry_frames.append(
            IndustryFrame(year, stats.claim_frequency, stats.claim_severity, stats.claims_count,
                          stats.exposure_years, self._bound)
        )
        self._bound = 0


# -- CSV ---------------------------------------------------------------------
def _num(x: float | None, fmt: str = ".6f") -> str:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return ""
    return format(x, fmt)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def metrics_csv(result: RunResult) -> str:
    rows = (
        (
            str(result.seed),
            str(f.year),
            str(f.syndicate_id),
            _num(f.capital),
            _num(f.premiums_offered_mean),
            _num(f.premiums_earned),
            _num(f.claims_paid),
            _num(f.loss_ratio, ".10f"),
            "1" if f.insolvent else "0",
        )
        for f in result.frames
    )
    return _csv_text(CSV_HEADER, rows)


def industry_csv(result: RunResult) -> str:
    rows = (
        (str(result.seed), str(f.year), _num(f.claim_frequency, ".10f"), _num(f.claim_severity),
         str(f.claims_count), _num(f.exposure_years), str(f.policies_bound))
        for f in result.industry
    )
    return _csv_text(INDUSTRY_HEADER, rows)


def exposure_csv(result: RunResult) -> str:
    rows = (
        (str(result.seed), str(f.year), str(f.syndicate_id), _num(uniform_deviation(f.region_counts), ".10f"),
         str(sum(f.region_counts)))
        for f in result.frames
    )
    return _csv_text(EXPOSURE_HEADER, rows)


def catastrophe_csv(result: RunResult) -> str:
    rows = (
        (str(result.seed), str(c.cat_id), str(c.day), str(c.day // DAYS_PER_YEAR + 1), str(c.peril_region),
         _num(c.severity), _num(c.exposed_limit), _num(c.insured_loss), _num(c.claims_paid), str(c.policies_hit))
        for c in result.catastrophes
    )
    return _csv_text(CATASTROPHE_HEADER, rows)


OUTPUTS = {
    "metrics": metrics_csv,
    "industry": industry_csv,
    "exposure": exposure_csv,
    "catastrophes": catastrophe_csv,
}


def write_run(result: RunResult, out_dir: Path) -> list[Path]:
    out_dir = Path(out_dir)
    paths = []
    for name, render in OUTPUTS.items():
        p = out_dir / f"{name}_seed{result.seed}.csv"
        p.write_text(render(result), encoding="utf-8")
        paths.append(p)
    if result.trace:
        p = out_dir / f"trace_seed{result.seed}.csv"
        p.write_text("day,seq,kind,payload\n" + "\n".join(result.trace) + "\n", encoding="utf-8")
        paths.append(p)
    return paths


# -- tables ------------------------------------------------------------------
def _parse(value: str):
    if value == "":
        return math.nan
    try:
        return int(value)
    except ValueError:
        return float(value)


def read_table(path: Path) -> dict[str, np.ndarray]:
    """CSV file as column arrays; blanks become NaN."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[_parse(v) for v in r] for r in reader]
    if not rows:
        return {h: np.array([]) for h in header}
    cols = list(zip(*rows))
    return {h: np.array(c, dtype=float) for h, c in zip(header, cols)}


def table_from_result(result: RunResult, name: str = "metrics") -> dict[str, np.ndarray]:
    text = OUTPUTS[name](result)
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = [[_parse(v) for v in r] for r in reader]
    if not rows:
        return {h: np.array([]) for h in header}
    return {h: np.array(c, dtype=float) for h, c in zip(header, zip(*rows))}


# -- statistics ----------------------------------------------------------------
def _in_years(t, lo: int, hi: int) -> np.ndarray:
    return (t["year"] >= lo) & (t["year"] <= hi)


def market_premium_by_year(t) -> dict[int, float]:
    """Mean offered premium across syndicates that quoted, per year."""
    out = {}
    for y in np.unique(t["year"]):
        v = t["premiums_offered_mean"][t["year"] == y]
        v = v[np.isfinite(v)]
        if v.size:
            out[int(y)] = float(v.mean())
    return out


def mean_offered_premium(t, first_year: int, last_year: int) -> float:
    v = t["premiums_offered_mean"][_in_years(t, first_year, last_year)]
    v = v[np.isfinite(v)]
    return float(v.mean()) if v.size else math.nan


def insolvency_count(t) -> int:
    if t["insolvent"].size == 0:
        return 0
    return int(np.unique(t["syndicate_id"][t["insolvent"] == 1]).size)


def premium_dispersion(t, first_year: int, last_year: int) -> float:
    """Cross-syndicate std of offered premium, averaged over years."""
    stds = []
    for y in range(first_year, last_year + 1):
        v = t["premiums_offered_mean"][t["year"] == y]
        v = v[np.isfinite(v)]
        if v.size >= 2:
            stds.append(v.std())
    return float(np.mean(stds)) if stds else math.nan


def _by_syndicate(t, column: str) -> dict[int, dict[int, float]]:
    out: dict[int, dict[int, float]] = {}
    for sid, y, v in zip(t["syndicate_id"], t["year"], t[column]):
        out.setdefault(int(sid), {})[int(y)] = float(v)
    return out


def loss_ratio_correlation(t, min_years: int = 3) -> float:
    """Mean pairwise Pearson correlation of yearly loss ratios."""
    series = _by_syndicate(t, "loss_ratio")
    corrs = []
    for a, b in itertools.combinations(sorted(series), 2):
        years = sorted(y for y in series[a] if y in series[b]
                       and math.isfinite(series[a][y]) and math.isfinite(series[b][y]))
        if len(years) < min_years:
            continue
        x = np.array([series[a][y] for y in years])
        z = np.array([series[b][y] for y in years])
        if x.std() == 0 or z.std() == 0:
            continue
        corrs.append(float(np.corrcoef(x, z)[0, 1]))
    return float(np.mean(corrs)) if corrs else math.nan


def capital_changes(t, initial_capital: float) -> dict[int, dict[int, float]]:
    """Year-over-year capital change per syndicate (year 1 against the initial capital)."""
    out = {}
    for sid, caps in _by_syndicate(t, "capital").items():
        prev = initial_capital
        deltas = {}
        for y in sorted(caps):
            deltas[y] = caps[y] - prev
            prev = caps[y]
        out[sid] = deltas
    return out


def catastrophe_responses(t, cats, threshold: float = 1e6, window: int = 2) -> list[dict]:
    """Market premium in the ``window`` years before and after each large catastrophe.

    Events too close to either end of the run to have a full window are
    skipped.
    """
    prem = market_premium_by_year(t)
    out = []
    for cat_id, year, insured in zip(cats["cat_id"], cats["year"], cats["insured_loss"]):
        if not insured > threshold:
            continue
        y = int(year)
        before = [prem.get(y - k) for k in range(1, window + 1)]
        after = [prem.get(y + k) for k in range(1, window + 1)]
        if any(v is None for v in before + after):
            continue
        b, a = float(np.mean(before)), float(np.mean(after))
        out.append({"cat_id": int(cat_id), "year": y, "insured_loss": float(insured),
                    "before": b, "after": a, "rose": a > b})
    return out


def final_uniform_deviation(exposure, first_year: int, last_year: int) -> float:
    """Mean uniform deviation of syndicates holding policies in the window."""
    mask = _in_years(exposure, first_year, last_year) & (exposure["policies_in_force"] > 0)
    v = exposure["uniform_deviation"][mask]
    return float(v.mean()) if v.size else math.nan


# -- summary -----------------------------------------------------------------
def _load(out_dir: Path, name: str) -> dict[int, dict[str, np.ndarray]]:
    tables = {}
    for p in sorted(Path(out_dir).glob(f"{name}_seed*.csv")):
        seed = int(p.stem.rsplit("seed", 1)[1])
        tables[seed] = read_table(p)
    return dict(sorted(tables.items()))


def _finite_mean(values) -> float | None:
    v = [x for x in values if x is not None and math.isfinite(x)]
    return float(np.mean(v)) if v else None


def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def summarize(out_dir: Path, horizon_years: int | None = None) -> dict:
    """Cross-replication summary built only from the CSVs in ``out_dir``."""
    metrics = _load(out_dir, "metrics")
    exposure = _load(out_dir, "exposure")
    cats = _load(out_dir, "catastrophes")
    if not metrics:
        raise FileNotFoundError(f"no metrics CSVs in {out_dir}")
    if horizon_years is None:
        horizon_years = int(max(t["year"].max() for t in metrics.values() if t["year"].size))
    per_seed = {}
    responses = []
    for seed, t in metrics.items():
        caps = t["capital"][t["year"] == horizon_years]
        row = {
            "insolvencies": insolvency_count(t),
            "premium_years_40_50": _clean(mean_offered_premium(t, horizon_years - 10, horizon_years)),
            "premium_dispersion_10_50": _clean(premium_dispersion(t, 10, horizon_years)),
            "loss_ratio_correlation": _clean(loss_ratio_correlation(t)),
            "final_capital_mean": _clean(float(caps.mean())) if caps.size else None,
        }
        if seed in exposure:
            row["uniform_deviation_final_decade"] = _clean(
                final_uniform_deviation(exposure[seed], horizon_years - 9, horizon_years)
            )
        if seed in cats:
            r = catastrophe_responses(t, cats[seed])
            row["catastrophes"] = int(cats[seed]["cat_id"].size)
            responses.extend({"seed": seed, **x} for x in r)
        per_seed[str(seed)] = row

    def pooled(key):
        return _finite_mean(r.get(key) for r in per_seed.values())

    summary = {
        "seeds": [int(s) for s in metrics],
        "insolvencies_total": int(sum(r["insolvencies"] for r in per_seed.values())),
        "seeds_without_insolvency": int(sum(r["insolvencies"] == 0 for r in per_seed.values())),
        "premium_convergence": pooled("premium_years_40_50"),
        "premium_dispersion": pooled("premium_dispersion_10_50"),
        "loss_ratio_correlation": pooled("loss_ratio_correlation"),
        "uniform_deviation_final_decade": pooled("uniform_deviation_final_decade"),
        "catastrophe_responses": {
            "events": len(responses),
            "rose": int(sum(r["rose"] for r in responses)),
            "fraction_rose": (sum(r["rose"] for r in responses) / len(responses)) if responses else None,
        },
        "per_seed": per_seed,
    }
    return summary
