"""Experiment configuration, parallel Monte Carlo execution, and result files.

Every trial draws from its own stream derived from (master seed, point
index, trial index), and results are aggregated in trial order after the
workers join, so the report bytes never depend on the worker count.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from typing import Iterable

from scipy import stats as _stats

from .algorithms import (
    MutationKind,
    OutcomeKind,
    TrialOutcome,
    default_budget_alg1,
    default_budget_alg2,
    run_alg1,
    run_alg2,
)
from .core import RandomStream
from .oracle import min_population, theorem1_bound, theorem2_bound

ALGORITHMS = ("rls", "oea", "muea")

_CSV_HEADER = (
    "algorithm,n,mu,trials,opt_count,eventI_count,eventII_count,budget_count,"
    "success_rate,wilson95_lo,wilson95_hi,cond_mean_gens,cond_var_gens,"
    "theorem_bound,seed"
)


class ConfigError(ValueError):
    """Invalid experiment configuration, with a field-level message."""


@dataclass
class ExperimentConfig:
    algorithm: str
    n_values: list[int]
    mu_values: list[int] | None = None  # explicit mu per n; None uses the theorem rule
    delta: float = 1e-9
    trials: int = 100
    budget_mult: float = 1.0
    master_seed: int = 0
    early_exit: bool = True
    workers: int | None = None  # None: one per available core

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm: must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if not self.n_values:
            raise ConfigError("n_values: must not be empty")
        if any(n < 2 for n in self.n_values):
            raise ConfigError(f"n_values: all n must be >= 2, got {self.n_values}")
        if self.trials < 1:
            raise ConfigError(f"trials: must be >= 1, got {self.trials}")
        if self.budget_mult <= 0:
            raise ConfigError(f"budget_mult: must be > 0, got {self.budget_mult}")
        if self.delta <= 0:
            raise ConfigError(f"delta: must be > 0, got {self.delta}")
        if self.mu_values is not None and len(self.mu_values) != len(self.n_values):
            raise ConfigError("mu_values: must match n_values in length")
        if self.mu_values is not None and any(m < 1 for m in self.mu_values):
            raise ConfigError(f"mu_values: all mu must be >= 1, got {self.mu_values}")

    def resolved_mu(self) -> list[int]:
        if self.algorithm != "muea":
            return [1] * len(self.n_values)
        if self.mu_values is not None:
            return list(self.mu_values)
        return [min_population(n, self.delta) for n in self.n_values]

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        with open(path) as fh:
            return cls(**json.load(fh))


@dataclass
class PointResult:
    """Aggregated outcomes for one (algorithm, n, mu) grid point."""

    algorithm: str
    n: int
    mu: int
    trials: int
    opt_count: int
    event_i_count: int
    event_ii_count: int
    budget_count: int
    failed_count: int
    cond_mean_gens: float
    cond_var_gens: float
    theorem_bound: float
    seed: int

    @property
    def success_rate(self) -> float:
        return self.opt_count / self.trials

    @property
    def failure_rate(self) -> float:
        return (self.event_i_count + self.event_ii_count) / self.trials

    def wilson95(self) -> tuple[float, float]:
        return wilson_interval(self.opt_count, self.trials, 0.95)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    points: list[PointResult] = field(default_factory=list)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes must be in [0, trials], got {successes}/{trials}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must be in (0,1), got {confidence}")
    z = _stats.norm.ppf(1.0 - (1.0 - confidence) / 2.0)
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    # the boundary endpoints are exactly 0 and 1; keep them free of rounding
    lo = 0.0 if successes == 0 else max(0.0, float(center - half))
    hi = 1.0 if successes == trials else min(1.0, float(center + half))
    return (lo, hi)


def _trial_stream(master_seed: int, point_index: int, trial: int) -> RandomStream:
    return RandomStream(master_seed, (point_index << 32) | trial)


@dataclass(slots=True)
class _TrialTask:
    algorithm: str
    n: int
    mu: int
    budget: int
    master_seed: int
    point_index: int
    early_exit: bool
    start: int
    count: int


def _run_chunk(task: _TrialTask) -> list[tuple[int, str, int]]:
    out = []
    for trial in range(task.start, task.start + task.count):
        rng = _trial_stream(task.master_seed, task.point_index, trial)
        try:
            if task.algorithm == "muea":
                result = run_alg2(task.n, task.mu, task.budget, rng, task.early_exit)
            else:
                kind = MutationKind.ONE_BIT if task.algorithm == "rls" else MutationKind.BITWISE
                result = run_alg1(task.n, kind, task.budget, rng, task.early_exit)
            out.append((trial, result.kind.value, result.generation))
        except Exception as exc:  # noqa: BLE001 - a bad trial must not kill the batch
            out.append((trial, f"failed:{exc}", -1))
    return out


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Execute all grid points; bit-identical reports for identical configs."""
    config.validate()
    report = ExperimentReport(config=config)
    workers = config.workers or os.cpu_count() or 1
    mus = config.resolved_mu()

    for point_index, (n, mu) in enumerate(zip(config.n_values, mus)):
        if config.algorithm == "muea":
            budget = int(default_budget_alg2(n, mu) * config.budget_mult)
        else:
            budget = int(default_budget_alg1(n) * config.budget_mult)
        chunk = max(1, math.ceil(config.trials / (4 * workers)))
        tasks = [
            _TrialTask(
                algorithm=config.algorithm,
                n=n,
                mu=mu,
                budget=budget,
                master_seed=config.master_seed,
                point_index=point_index,
                early_exit=config.early_exit,
                start=start,
                count=min(chunk, config.trials - start),
            )
            for start in range(0, config.trials, chunk)
        ]
        if workers == 1 or len(tasks) == 1:
            results = [r for task in tasks for r in _run_chunk(task)]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = [r for rs in pool.map(_run_chunk, tasks) for r in rs]
        results.sort(key=lambda r: r[0])  # canonical trial order
        report.points.append(_aggregate(config, point_index, n, mu, results))
    return report


def _aggregate(
    config: ExperimentConfig, point_index: int, n: int, mu: int,
    results: list[tuple[int, str, int]],
) -> PointResult:
    counts = {k.value: 0 for k in OutcomeKind}
    failed = 0
    opt_gens: list[int] = []
    for _, kind, generation in results:
        if kind.startswith("failed:"):
            failed += 1
            continue
        counts[kind] += 1
        if kind == OutcomeKind.OPTIMUM_FOUND.value:
            opt_gens.append(generation)
    if opt_gens:
        mean = sum(opt_gens) / len(opt_gens)
        var = sum((g - mean) ** 2 for g in opt_gens) / len(opt_gens)
    else:
        mean = var = float("nan")
    if config.algorithm == "muea":
        bound = theorem2_bound(n, mu, config.delta).value
    else:
        bound = theorem1_bound(n).value
    return PointResult(
        algorithm=config.algorithm,
        n=n,
        mu=mu,
        trials=config.trials,
        opt_count=counts[OutcomeKind.OPTIMUM_FOUND.value],
        event_i_count=counts[OutcomeKind.STAGNATED_EVENT_I.value],
        event_ii_count=counts[OutcomeKind.STAGNATED_EVENT_II.value],
        budget_count=counts[OutcomeKind.BUDGET_EXHAUSTED.value],
        failed_count=failed,
        cond_mean_gens=mean,
        cond_var_gens=var,
        theorem_bound=bound,
        seed=config.master_seed,
    )


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    return f"{x:.6g}"


def report_csv(report: ExperimentReport) -> str:
    lines = [_CSV_HEADER]
    for p in report.points:
        lo, hi = p.wilson95()
        lines.append(
            f"{p.algorithm},{p.n},{p.mu},{p.trials},{p.opt_count},{p.event_i_count},"
            f"{p.event_ii_count},{p.budget_count},{_fmt(p.success_rate)},{_fmt(lo)},"
            f"{_fmt(hi)},{_fmt(p.cond_mean_gens)},{_fmt(p.cond_var_gens)},"
            f"{_fmt(p.theorem_bound)},{p.seed}"
        )
    return "\n".join(lines) + "\n"


def report_json_obj(report: ExperimentReport) -> dict:
    points = []
    for p in report.points:
        lo, hi = p.wilson95()
        d = asdict(p)
        d["success_rate"] = float(_fmt(p.success_rate))
        d["wilson95_lo"] = float(_fmt(lo))
        d["wilson95_hi"] = float(_fmt(hi))
        points.append(d)
    return {"config": asdict(report.config), "points": points}


def write_report(report: ExperimentReport, path: str, format: str = "csv") -> None:
    """Write the report as CSV (fixed column set) or an equivalent JSON object."""
    try:
        if format == "csv":
            with open(path, "w") as fh:
                fh.write(report_csv(report))
        elif format == "json":
            with open(path, "w") as fh:
                json.dump(report_json_obj(report), fh, indent=2)
                fh.write("\n")
        else:
            raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


@dataclass
class ScalingRow:
    n: int
    mu: int
    cond_mean_gens: float
    ratio: float | None  # mean / (mu * n); None when no successful trials


@dataclass
class ScalingTable:
    rows: list[ScalingRow]
    flagged: bool  # True when max ratio / min ratio exceeds 2


def runtime_scaling_check(report: ExperimentReport) -> ScalingTable:
    """Check that conditional mean generations grow like mu*n across the sweep."""
    if len(report.points) < 2:
        raise ValueError("scaling check needs results for at least 2 values of n")
    rows = []
    ratios = []
    for p in report.points:
        if p.opt_count >= 2 and not math.isnan(p.cond_mean_gens):
            ratio = p.cond_mean_gens / (p.mu * p.n)
            ratios.append(ratio)
        else:
            ratio = None
        rows.append(ScalingRow(p.n, p.mu, p.cond_mean_gens, ratio))
    if len(ratios) < 2:
        raise ValueError("scaling check needs >= 2 points with successful trials")
    flagged = max(ratios) / min(ratios) > 2.0
    return ScalingTable(rows=rows, flagged=flagged)
