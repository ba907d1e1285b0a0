"""Density and traffic-load sweeps with CSV and aggregate output."""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
from scipy import stats

from ..simcore.routing import Policy
from ..simcore.scenario import MetricsRow, run_scenario
from .config import ExperimentConfig

SCHEMA_VERSION = 1
CSV_HEADER = ("policy", "nodes", "cbr", "seed", "mean_delay_ms", "pdr", "throughput",
              "dup_per_delivery", "failures")
AGG_METRICS = ("mean_delay_ms", "pdr", "throughput", "dup_per_delivery", "failures")


def density_grid(cfg: ExperimentConfig) -> list[tuple[str, int, int, int]]:
    return [(p, n, cfg.density_cbr, s) for p in _policies(cfg) for n in cfg.node_counts for s in cfg.seeds]


def load_grid(cfg: ExperimentConfig) -> list[tuple[str, int, int, int]]:
    return [(p, cfg.load_nodes, c, s) for p in _policies(cfg) for c in cfg.cbr_connections for s in cfg.seeds]


def _policies(cfg: ExperimentConfig) -> list[str]:
    return [Policy.parse(p).value for p in cfg.policies]


def _run_job(args) -> MetricsRow:
    cfg, (policy, nodes, cbr, seed) = args
    try:
        return run_scenario(cfg.scenario(policy, nodes, cbr), seed)
    except Exception as exc:  # recorded as a failure row; the sweep continues
        nan = math.nan
        return MetricsRow(policy, nodes, cbr, seed, nan, nan, nan, nan, 0, error=f"{type(exc).__name__}: {exc}")


def workers() -> int:
    env = os.environ.get("ORSIM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_grid(cfg: ExperimentConfig, grid, max_workers: int | None = None) -> list[MetricsRow]:
    jobs = [(cfg, g) for g in grid]
    n = min(max_workers or workers(), len(jobs)) or 1
    if n == 1:
        rows = [_run_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n) as pool:
            rows = list(pool.map(_run_job, jobs, chunksize=1))
    order = {p: k for k, p in enumerate(_policies(cfg))}
    return sorted(rows, key=lambda r: (order[r.policy], r.nodes, r.cbr, r.seed))


def _fmt(x) -> str:
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def rows_to_csv(rows: list[MetricsRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.policy, r.nodes, r.cbr, r.seed, _fmt(r.mean_delay_ms), _fmt(r.pdr),
                    _fmt(r.throughput), _fmt(r.duplicates_per_delivery), r.failures])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {"policy": rec["policy"]}
        for k in ("nodes", "cbr", "seed", "failures"):
            row[k] = int(rec[k])
        for k in ("mean_delay_ms", "pdr", "throughput", "dup_per_delivery"):
            row[k] = float(rec[k])
        out.append(row)
    return out


def mean_ci(values) -> tuple[int, float, float]:
    """Count, mean and 95% t-interval half-width over the finite values."""
    x = np.asarray([v for v in values if not math.isnan(v)], dtype=float)
    if len(x) == 0:
        return 0, math.nan, math.nan
    if len(x) == 1:
        return 1, float(x[0]), math.nan
    half = stats.t.ppf(0.975, len(x) - 1) * x.std(ddof=1) / math.sqrt(len(x))
    return len(x), float(x.mean()), float(half)


def aggregate(rows: list[dict]) -> list[dict]:
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        groups.setdefault((r["policy"], r["nodes"], r["cbr"]), []).append(r)
    out = []
    for (policy, nodes, cbr), members in groups.items():
        rec = {"policy": policy, "nodes": nodes, "cbr": cbr, "seeds": len(members)}
        for m in AGG_METRICS:
            _, mean, half = mean_ci([float(r[m]) for r in members])
            rec[m] = mean
            rec[m + "_ci95"] = half
        out.append(rec)
    return out


def aggregate_text(rows: list[dict]) -> str:
    cols = ["policy", "nodes", "cbr", "seeds"]
    for m in AGG_METRICS:
        cols += [m, m + "_ci95"]
    lines = [f"# orsim aggregate schema {SCHEMA_VERSION}; mean and 95% t-interval half-width over seeds",
             "# " + " ".join(cols)]
    for rec in aggregate(rows):
        lines.append(" ".join(_fmt(rec[c]) if isinstance(rec[c], float) else str(rec[c]) for c in cols))
    return "\n".join(lines) + "\n"


def parse_aggregate(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    cols = lines[1].lstrip("# ").split()
    out = []
    for ln in lines[2:]:
        vals = ln.split()
        rec = {}
        for c, v in zip(cols, vals):
            rec[c] = v if c == "policy" else (int(v) if c in ("nodes", "cbr", "seeds") else float(v))
        out.append(rec)
    return out


def write_outputs(rows: list[MetricsRow], out_dir, stem: str) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    text = rows_to_csv(rows)
    csv_path = out / f"{stem}.csv"
    agg_path = out / f"{stem}_agg.dat"
    csv_path.write_text(text)
    agg_path.write_text(aggregate_text(read_csv(text)))
    return csv_path, agg_path


def run_density_sweep(cfg: ExperimentConfig, out_dir=None, max_workers: int | None = None) -> str:
    rows = run_grid(cfg, density_grid(cfg), max_workers)
    if out_dir is not None:
        write_outputs(rows, out_dir, "density")
    return rows_to_csv(rows)


def run_load_sweep(cfg: ExperimentConfig, out_dir=None, max_workers: int | None = None) -> str:
    rows = run_grid(cfg, load_grid(cfg), max_workers)
    if out_dir is not None:
        write_outputs(rows, out_dir, "load")
    return rows_to_csv(rows)
