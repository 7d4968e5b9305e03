"""Experiment drivers producing `ExperimentReport` objects."""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import replace
from typing import Callable

import numpy as np

from .. import __version__
from ..baselines import PathScheme, mc_estimate, path_map, qmc_estimate, terminal_map
from ..doss import vasicek_gap_bound
from ..models import Cir, ModelSpec, analytic_law
from ..nisp import pce_sample, project
from ..sampling import SamplingPlan, Scheme, make_generator, sample_quantile, standard_normals
from .config import ExperimentConfig
from .report import ExperimentReport, Row

FAST_ROW_SECONDS = 0.05
TIMING_REPEATS = 3
_QUANTILE_STREAM_BASE = 1000


def median_elapsed(run: Callable, elapsed_of: Callable):
    """Run once; if that took under 50 ms, run twice more and report the median time.

    Every repetition is deterministic, so the first result is returned.
    """
    result = run()
    t = elapsed_of(result)
    if t < FAST_ROW_SECONDS:
        times = [t] + [elapsed_of(run()) for _ in range(TIMING_REPEATS - 1)]
        t = statistics.median(times)
    return result, t


def _wall(fn):
    def run():
        t0 = time.perf_counter()
        out = fn()
        return out, time.perf_counter() - t0
    return run


def gamma_label(gamma: float) -> str:
    return f"q{gamma * 100:g}"


def _metadata(cfg: ExperimentConfig) -> dict:
    meta = {
        "experiment": cfg.name,
        "kind": cfg.kind,
        "seed": cfg.seed,
        "config_hash": cfg.config_hash(),
        "package_version": __version__,
        "numpy": np.__version__,
        "failures": [],
    }
    if cfg.pce is not None:
        meta["tolerances"] = {"name": cfg.pce.tolerances.name, "abs_tol": cfg.pce.tolerances.abs_tol,
                              "rel_tol": cfg.pce.tolerances.rel_tol}
        meta["nodes_override"] = cfg.pce.nodes
    return meta


class _Emitter:
    def __init__(self, cfg: ExperimentConfig, report: ExperimentReport):
        self.cfg = cfg
        self.report = report

    def __call__(self, model: ModelSpec, method: str, param, metric: str, value: float, elapsed: float):
        self.report.add(Row(self.cfg.name, model.kind, float(model.sigma), method, param, metric,
                            float(value), max(0.0, float(elapsed)), self.cfg.seed))

    def failure(self, model: ModelSpec, method: str, param, exc: BaseException):
        self(model, method, param, "failed", math.nan, 0.0)
        self.report.metadata["failures"].append(
            {"model": model.kind, "sigma": model.sigma, "method": method, "param": param,
             "error": f"{type(exc).__name__}: {exc}"})


def _project_timed(cfg: ExperimentConfig, model: ModelSpec, p: int):
    s = cfg.pce
    return median_elapsed(
        lambda: project(model, p, s.tolerances, s.nodes, parallel=s.parallel),
        lambda e: e.timing.total)


def _pce_rows(cfg, emit, model, law, p, quantiles: bool):
    try:
        exp, elapsed = _project_timed(cfg, model, p)
    except Exception as exc:  # recorded and the sweep carries on
        emit.failure(model, "pce", p, exc)
        return None
    mean, var = exp.mean(), exp.variance()
    emit(model, "pce", p, "mean", mean, elapsed)
    emit(model, "pce", p, "variance", var, elapsed)
    emit(model, "pce", p, "mean_abs_err", abs(mean - law.mean), elapsed)
    emit(model, "pce", p, "var_abs_err", abs(var - law.variance), elapsed)
    emit(model, "pce", p, "mean_rel_err", abs(mean - law.mean) / abs(law.mean), elapsed)
    emit(model, "pce", p, "var_rel_err", abs(var - law.variance) / law.variance, elapsed)
    if quantiles:
        plan = SamplingPlan(cfg.pce.quantile_sample, Scheme.LATIN_HYPERCUBE, cfg.seed, 0)
        (sample, t_s) = median_elapsed(_wall(lambda: pce_sample(exp, plan)), lambda r: r[1])
        sample = sample[0]
        for g in cfg.pce.gammas:
            est = sample_quantile(sample, g)
            emit(model, "pce", p, f"{gamma_label(g)}_abs_err", abs(est.value - float(law.quantile(g))), t_s)
    return exp


def _quantile_study_rows(cfg, emit, model, law):
    qs = cfg.quantile_study
    fn, dim = terminal_map(model, vectorized=True)
    t0 = time.perf_counter()
    est = {g: [] for g in qs.gammas}
    for rep in range(qs.repeats):
        gen = make_generator(cfg.seed, _QUANTILE_STREAM_BASE + rep)
        z = standard_normals(gen, (qs.M,) if dim == 1 else (qs.M, dim))
        x = np.asarray(fn(z))
        for g in qs.gammas:
            est[g].append(sample_quantile(x, g).value)
    elapsed = time.perf_counter() - t0
    for g in qs.gammas:
        q = np.asarray(est[g])
        label = gamma_label(g)
        emit(model, "mc_quantile", qs.M, f"{label}_mean", float(np.mean(q)), elapsed)
        emit(model, "mc_quantile", qs.M, f"{label}_se", float(np.std(q, ddof=1) / math.sqrt(q.size)), elapsed)
        emit(model, "mc_quantile", qs.M, f"{label}_exact", float(law.quantile(g)), elapsed)


def run_pce_convergence(cfg: ExperimentConfig) -> ExperimentReport:
    """PCE moment and quantile errors for every degree in the configured range."""
    if cfg.pce is None:
        raise ValueError("configuration has no PCE settings")
    report = ExperimentReport(cfg.name, metadata=_metadata(cfg))
    emit = _Emitter(cfg, report)
    for model in cfg.models:
        law = analytic_law(model)
        for p in cfg.pce.degrees:
            _pce_rows(cfg, emit, model, law, p, quantiles=True)
        if cfg.quantile_study is not None:
            _quantile_study_rows(cfg, emit, model, law)
    return report


def _baseline_map(cfg, model, vectorized):
    if isinstance(model, Cir):
        return path_map(PathScheme(model, cfg.path_steps), vectorized=vectorized), cfg.path_steps
    return terminal_map(model, vectorized=vectorized)


def run_comparison(cfg: ExperimentConfig) -> ExperimentReport:
    """PCE against Monte Carlo and Sobol quasi-Monte Carlo on the same models.

    gBm and Vasicek baselines sample the exact terminal law; CIR baselines
    simulate paths with ``cfg.path_steps`` steps. Relative times are derived
    from the elapsed column, see `ExperimentReport.relative_times`.
    """
    report = ExperimentReport(cfg.name, metadata=_metadata(cfg))
    report.metadata["path_steps"] = cfg.path_steps
    emit = _Emitter(cfg, report)
    for model in cfg.models:
        law = analytic_law(model)
        if cfg.pce is not None:
            for p in cfg.pce.degrees:
                _pce_rows(cfg, emit, model, law, p, quantiles=False)
        if cfg.mc is not None:
            fn, dim = _baseline_map(cfg, model, cfg.mc.vectorized)
            for M in cfg.mc.sizes:
                stream = int(math.log2(M))
                try:
                    r, t = median_elapsed(
                        lambda: mc_estimate(fn, M, cfg.seed, dim, stream, cfg.mc.vectorized),
                        lambda res: res.elapsed)
                except Exception as exc:
                    emit.failure(model, "mc", M, exc)
                    continue
                for metric, v in (("mean", r.mean), ("variance", r.variance),
                                  ("se_mean", r.se_mean), ("se_var", r.se_variance)):
                    emit(model, "mc", M, metric, v, t)
        if cfg.qmc is not None:
            fn, dim = _baseline_map(cfg, model, cfg.qmc.vectorized)
            for M in cfg.qmc.sizes:
                try:
                    r, t = median_elapsed(
                        lambda: qmc_estimate(fn, M, dim, law, cfg.qmc.vectorized),
                        lambda res: res.elapsed)
                except Exception as exc:
                    emit.failure(model, "qmc", M, exc)
                    continue
                for metric, v in (("mean", r.mean), ("variance", r.variance),
                                  ("err_mean", r.err_mean), ("err_var", r.err_variance)):
                    emit(model, "qmc", M, metric, v, t)
    return report


def run_beta_sweep(cfg: ExperimentConfig) -> ExperimentReport:
    """Vasicek variance error against the mean-reversion speed, with a log-log fit."""
    sweep = cfg.beta_sweep
    tol = cfg.pce.tolerances if cfg.pce is not None else None
    nodes = cfg.pce.nodes if cfg.pce is not None else None
    report = ExperimentReport(cfg.name, metadata=_metadata(cfg))
    emit = _Emitter(cfg, report)
    for base in cfg.models:
        betas, errs = [], []
        for beta in sweep.betas:
            model = replace(base, beta=beta)
            law = analytic_law(model)
            kwargs = {} if tol is None else {"tolerances": tol}
            try:
                exp, t = median_elapsed(lambda: project(model, sweep.p, nodes=nodes, **kwargs),
                                        lambda e: e.timing.total)
            except Exception as exc:
                emit.failure(model, "pce", beta, exc)
                continue
            err = abs(exp.variance() - law.variance)
            emit(model, "pce", beta, "var_abs_err", err, t)
            emit(model, "pce", beta, "var_gap_first_order", vasicek_gap_bound(model), 0.0)
            betas.append(beta)
            errs.append(err)
        if len(betas) >= 2 and all(e > 0 for e in errs):
            slope = float(np.polyfit(np.log(betas), np.log(errs), 1)[0])
            emit(base, "beta_sweep", "fit", "loglog_slope", slope, 0.0)
    return report


RUNNERS = {
    "pce_convergence": run_pce_convergence,
    "comparison": run_comparison,
    "beta_sweep": run_beta_sweep,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    return RUNNERS[cfg.kind](cfg)


def plateau_degree(degrees, errors, factor: float = 2.0) -> int:
    """First degree from which every later error stays within `factor` of the final level.

    The final level is the median error over the upper half of the range.
    """
    errors = list(errors)
    tail = errors[len(errors) // 2:]
    level = statistics.median(tail)
    for k, d in enumerate(degrees):
        if all(level / factor <= e <= level * factor for e in errors[k:]):
            return d
    return degrees[-1]


def plateau_relative_time(report: ExperimentReport, model: str, sigma: float,
                          metric: str = "mean_abs_err") -> tuple:
    """Time of PCE at its plateau degree relative to the slowest MC/QMC row.

    Returns ``(plateau_degree, relative_time)``.
    """
    rows = sorted(report.select(model=model, sigma=sigma, method="pce", metric=metric),
                  key=lambda r: r.param)
    if not rows:
        raise KeyError(f"no PCE rows for {model} sigma={sigma}")
    p_star = plateau_degree([r.param for r in rows], [r.value for r in rows])
    t_pce = next(r.elapsed_s for r in rows if r.param == p_star)
    base = [r.elapsed_s for r in report.rows
            if r.model == model and r.sigma == sigma and r.method in ("mc", "qmc")]
    if not base:
        raise KeyError(f"no MC/QMC rows for {model} sigma={sigma}")
    return p_star, t_pce / max(base)
