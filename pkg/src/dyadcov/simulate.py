"""Monte Carlo harness: rejection frequencies of the variance estimators.

The data generating process draws node effects that follow a stationary
AR(1) along the node order, so nearby-in-order nodes are dependent, and
builds regressors, a heteroskedastic disturbance, and outcomes on the
complete dyad array. Each replication tests whether the last coefficient
equals its true value of one, at standard-normal critical values.

Randomness comes from the Philox counter-based generator with one
substream per replication keyed by ``(seed, replication index)``, and
Gaussians are produced by inverse-CDF transform of 53-bit uniforms, so a
run is reproducible regardless of how replications are scheduled across
workers.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.special import ndtri

from .bandwidth import scaled_bandwidth, select_bandwidth
from .data import DyadicDataset, NodeOrder, complete_dyads
from .errors import NonpositiveVarianceError, UnknownParameterError
from .estimator import estimate_variances
from .ols import fit_ols
from .variance import ALL_KINDS, EstimatorKind, node_scores, t_test

__all__ = [
    "SimConfig",
    "SimResult",
    "gen_ar1_nodes",
    "gen_dyadic_sample",
    "run_replication",
    "run_monte_carlo",
    "run_sweep",
    "write_results_csv",
]

# Simulation knobs a sweep may vary, with the coercion each one needs.
_SWEEPABLE = {
    "n": int,
    "k": int,
    "rho": float,
    "omega": float,
    "gamma_het": float,
    "sigma_l": float,
}


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo design point.

    ``k`` counts all regressors including the intercept column; the tested
    coefficient is the last one. ``sigma_l`` rescales the data-driven
    bandwidth inside each replication.
    """

    n: int = 50
    k: int = 10
    rho: float = 0.5
    omega: float = 1.0
    gamma_het: float = 0.5
    reps: int = 5000
    seed: int = 0
    level: float = 0.05
    estimators: tuple[EstimatorKind, ...] = field(default=ALL_KINDS)
    sigma_l: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least two nodes, got n={self.n}")
        if self.k < 1:
            raise ValueError(f"need at least one regressor, got k={self.k}")
        if not abs(self.rho) < 1:
            raise ValueError(f"the node AR(1) must be stationary, got rho={self.rho}")
        if self.reps < 1:
            raise ValueError(f"need at least one replication, got reps={self.reps}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if not 0 < self.level < 1:
            raise ValueError(f"level must be strictly between 0 and 1, got {self.level}")
        if self.sigma_l < 0:
            raise ValueError(f"bandwidth scale must be nonnegative, got {self.sigma_l}")
        if not self.estimators:
            raise ValueError("at least one estimator is required")


@dataclass(frozen=True, eq=False)
class SimResult:
    """Outcomes of one design point.

    ``outcomes`` keeps one row per replication with a code per estimator
    (1 reject, 0 accept, -1 no usable variance). Rejection frequencies
    divide by the replications in which the estimator produced a usable
    (positive) contrast variance; failures count the rest.
    ``mean_bandwidth`` averages the bandwidth actually used across all
    replications.
    """

    config: SimConfig
    outcomes: np.ndarray
    mean_bandwidth: float

    @property
    def rejections(self) -> np.ndarray:
        return (self.outcomes == 1).sum(axis=0)

    @property
    def failures(self) -> np.ndarray:
        return (self.outcomes == -1).sum(axis=0)

    @property
    def rejection_rate(self) -> dict[EstimatorKind, float]:
        rates = {}
        rejections, failures = self.rejections, self.failures
        for pos, kind in enumerate(self.config.estimators):
            valid = self.config.reps - int(failures[pos])
            rates[kind] = float(rejections[pos]) / valid if valid > 0 else float("nan")
        return rates


def _rep_generator(seed: int, rep_index: int) -> np.random.Generator:
    key = np.array([seed, rep_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _standard_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Inverse-CDF Gaussians from 53-bit uniforms, offset away from 0 and 1."""
    bits = rng.integers(0, 1 << 53, size=shape, dtype=np.uint64)
    return ndtri((bits.astype(np.float64) + 0.5) * 2.0**-53)


def gen_ar1_nodes(rng: np.random.Generator, n: int, k: int, rho: float) -> np.ndarray:
    """Stationary AR(1) node effects: ``n`` rows of ``k`` unit-variance columns.

    The first row is a plain standard normal draw and each later row is
    ``rho`` times the previous one plus a ``sqrt(1 - rho^2)`` innovation,
    so every marginal stays standard normal.
    """
    shocks = _standard_normal(rng, (n, k))
    out = np.empty((n, k))
    out[0] = shocks[0]
    scale = np.sqrt(1.0 - rho * rho)
    for row in range(1, n):
        out[row] = rho * out[row - 1] + scale * shocks[row]
    return out


def gen_dyadic_sample(cfg: SimConfig, rng: np.random.Generator) -> DyadicDataset:
    """Draw one complete dyadic sample.

    Regressors add the two endpoint node effects (weighted by ``omega``)
    to an idiosyncratic shock; the disturbance does the same through its
    own node effects and is scaled by ``1 + gamma_het * |x_K|``. Outcomes
    use unit coefficients on the regressors as generated; the first
    regressor column is set to one afterwards, so it enters the fit as an
    intercept.
    """
    n, k = cfg.n, cfg.k
    a_x = gen_ar1_nodes(rng, n, k, cfg.rho)
    a_u = gen_ar1_nodes(rng, n, 1, cfg.rho)
    dyads = complete_dyads(n)
    i0, j0 = dyads[:, 0] - 1, dyads[:, 1] - 1
    m = dyads.shape[0]
    x = cfg.omega * (a_x[i0] + a_x[j0]) + _standard_normal(rng, (m, k))
    v = cfg.omega * (a_u[i0, 0] + a_u[j0, 0]) + _standard_normal(rng, m)
    u = (1.0 + cfg.gamma_het * np.abs(x[:, -1])) * v
    y = x.sum(axis=1) + u
    x[:, 0] = 1.0
    return DyadicDataset(
        n=n,
        dyads=dyads,
        y=y,
        X=x,
        order=NodeOrder.identity(n),
        x_names=tuple(f"x{col}" for col in range(1, k + 1)),
    )


def run_replication(cfg: SimConfig, rep_index: int) -> tuple[np.ndarray, int]:
    """One replication: simulate, fit, select a bandwidth, test every estimator.

    Returns one outcome code per configured estimator (1 reject, 0 accept,
    -1 no usable variance) and the bandwidth used.
    """
    rng = _rep_generator(cfg.seed, rep_index)
    ds = gen_dyadic_sample(cfg, rng)
    fit = fit_ols(ds)
    selection = select_bandwidth(node_scores(fit.scores, ds.dyads, ds.n))
    bandwidth = scaled_bandwidth(selection.L, cfg.sigma_l)
    variances = estimate_variances(ds, fit, cfg.estimators, bandwidth=bandwidth)
    contrast = np.zeros(cfg.k)
    contrast[-1] = 1.0
    critical = float(-ndtri(cfg.level / 2.0))
    outcomes = np.zeros(len(cfg.estimators), dtype=np.int8)
    for pos, kind in enumerate(cfg.estimators):
        try:
            result = t_test(fit.beta_hat, variances[kind].V, contrast, null_value=1.0)
        except NonpositiveVarianceError:
            outcomes[pos] = -1
            continue
        outcomes[pos] = 1 if abs(result.t) > critical else 0
    return outcomes, bandwidth


def _run_range(cfg: SimConfig, start: int, stop: int) -> tuple[int, np.ndarray, np.ndarray]:
    outcomes = np.empty((stop - start, len(cfg.estimators)), dtype=np.int8)
    bandwidths = np.empty(stop - start, dtype=np.int64)
    for rep in range(start, stop):
        outcomes[rep - start], bandwidths[rep - start] = run_replication(cfg, rep)
    return start, outcomes, bandwidths


def run_monte_carlo(cfg: SimConfig, threads: int = 1) -> SimResult:
    """Run every replication of a design point, optionally on worker processes.

    Replication ``r`` always uses the substream keyed by ``(seed, r)``, so
    the outcome is identical for any worker count.
    """
    outcomes = np.empty((cfg.reps, len(cfg.estimators)), dtype=np.int8)
    bandwidths = np.empty(cfg.reps, dtype=np.int64)
    if threads <= 1 or cfg.reps == 1:
        _, outcomes[:], bandwidths[:] = _run_range(cfg, 0, cfg.reps)
    else:
        workers = min(threads, cfg.reps)
        chunk = max(1, -(-cfg.reps // (workers * 4)))
        starts = range(0, cfg.reps, chunk)
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_range, cfg, s, min(s + chunk, cfg.reps)) for s in starts]
            for future in concurrent.futures.as_completed(futures):
                start, rows, used = future.result()
                outcomes[start : start + rows.shape[0]] = rows
                bandwidths[start : start + used.shape[0]] = used
    return SimResult(
        config=cfg,
        outcomes=outcomes,
        mean_bandwidth=float(bandwidths.mean()),
    )


def run_sweep(
    cfg: SimConfig, parameter: str, values: Sequence, threads: int = 1
) -> list[SimResult]:
    """Rerun the Monte Carlo once per value of one simulation knob."""
    parameter = parameter.lower()
    cast = _SWEEPABLE.get(parameter)
    if cast is None:
        raise UnknownParameterError(
            f"cannot sweep {parameter!r}; choose one of {', '.join(sorted(_SWEEPABLE))}"
        )
    results = []
    for value in values:
        point = replace(cfg, **{parameter: cast(value)})
        results.append(run_monte_carlo(point, threads=threads))
    return results


def write_results_csv(out: io.TextIOBase, results: Sequence[tuple[object, SimResult]]) -> None:
    """Write ``value,estimator,rejection,failures,mean_L`` rows.

    ``results`` pairs each :class:`SimResult` with the swept value it was
    run at (the empty string for a single run). Formatting is fixed so
    identical runs produce identical bytes.
    """
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["value", "estimator", "rejection", "failures", "mean_L"])
    for value, result in results:
        label = format(value, "g") if isinstance(value, (int, float)) else str(value)
        rates = result.rejection_rate
        failures = result.failures
        for pos, kind in enumerate(result.config.estimators):
            rate = rates[kind]
            writer.writerow(
                [
                    label,
                    kind.value,
                    "nan" if rate != rate else f"{rate:.6f}",
                    int(failures[pos]),
                    f"{result.mean_bandwidth:.6g}",
                ]
            )
