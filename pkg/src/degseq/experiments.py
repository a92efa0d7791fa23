"""Consistency experiment: draw β ~ U[-L, L]^n, sample a graph, refit, compare."""
import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .beta_model import sample_graph
from .mle_solver import FitConfig, FitStatus, fit_mle


@dataclass(frozen=True)
class ExperimentSpec:
    n_list: tuple
    L: float = 1.0
    trials: int = 20
    seed: int = 0
    output_path: str | None = None

    def __post_init__(self):
        n_list = tuple(int(n) for n in self.n_list)
        if not n_list or any(n < 3 for n in n_list):
            raise ValueError("every n must be at least 3")
        if not self.trials >= 1:
            raise ValueError("trials must be at least 1")
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        object.__setattr__(self, "n_list", n_list)


@dataclass
class TrialResult:
    n: int
    trial: int
    status: FitStatus
    iterations: int
    max_error: float | None
    beta: np.ndarray = field(repr=False)
    beta_hat: np.ndarray | None = field(repr=False)


@dataclass
class ConsistencyReport:
    spec: ExperimentSpec
    config: FitConfig
    trials: list

    def errors(self, n):
        return [t.max_error for t in self.trials if t.n == n and t.max_error is not None]

    def median_error(self, n):
        errs = self.errors(n)
        return float(np.median(errs)) if errs else float("nan")

    def max_error(self, n):
        errs = self.errors(n)
        return float(np.max(errs)) if errs else float("nan")

    def all_converged(self):
        return all(t.status is FitStatus.CONVERGED for t in self.trials)

    def summary(self):
        out = []
        for n in self.spec.n_list:
            rows = [t for t in self.trials if t.n == n]
            out.append({
                "n": n,
                "converged": sum(t.status is FitStatus.CONVERGED for t in rows),
                "trials": len(rows),
                "median_max_error": self.median_error(n),
                "max_max_error": self.max_error(n),
                "rate_sqrt_logn_over_n": float(np.sqrt(np.log(n) / n)),
            })
        return out

    def to_dict(self):
        return {
            "seed": self.spec.seed,
            "L": self.spec.L,
            "n_list": list(self.spec.n_list),
            "trials_per_n": self.spec.trials,
            "config": self.config.to_dict(),
            "summary": self.summary(),
            "trials": [
                {
                    "n": t.n,
                    "trial": t.trial,
                    "status": t.status.value,
                    "iterations": t.iterations,
                    "max_error": t.max_error,
                }
                for t in self.trials
            ],
        }

    def scatter_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "trial", "i", "beta", "beta_hat"])
        for t in self.trials:
            if t.beta_hat is None:
                continue
            for i, (b, bh) in enumerate(zip(t.beta, t.beta_hat)):
                writer.writerow([t.n, t.trial, i, repr(float(b)), repr(float(bh))])
        return buf.getvalue()


def trial_rng(seed, n, trial):
    """Generator for one (n, trial) cell, independent of scheduling."""
    return np.random.default_rng(np.random.SeedSequence([seed, n, trial]))


def run_trial(spec, n, trial, cfg):
    rng = trial_rng(spec.seed, n, trial)
    beta = rng.uniform(-spec.L, spec.L, size=n)
    G = sample_graph(beta, rng)
    report = fit_mle(G.degrees.astype(float), cfg)
    err = None
    beta_hat = None
    if report.status is FitStatus.CONVERGED:
        beta_hat = report.beta_hat
        err = float(np.max(np.abs(beta_hat - beta)))
    return TrialResult(n, trial, report.status, report.iterations, err, beta, beta_hat)


def _threads():
    try:
        return max(1, int(os.environ.get("DEGSEQ_THREADS", "1")))
    except ValueError:
        return 1


def run_consistency(spec, cfg=None, workers=None):
    cfg = cfg or FitConfig()
    jobs = [(n, t) for n in spec.n_list for t in range(spec.trials)]
    workers = workers or _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: run_trial(spec, job[0], job[1], cfg), jobs))
    else:
        results = [run_trial(spec, n, t, cfg) for n, t in jobs]
    return ConsistencyReport(spec=spec, config=cfg, trials=results)
