"""Sandwich variance estimators for dyadic OLS scores.

Every estimator here assembles a "meat" matrix from the per-dyad scores
``s_d = x_d * residual_d`` and wraps it in ``(X'X)^{-1} meat (X'X)^{-1}``.
They differ only in which score pairs the meat sums and with what weight:

* ``White``: own pairs only.
* ``OneWay1`` / ``OneWay2``: pairs sharing the first (second) endpoint.
* ``TwoWay``: union of the two one-way clusterings by inclusion-exclusion.
* ``Dyadic``: pairs sharing either endpoint.
* ``DNDyadic``: every endpoint pairing of two dyads contributes a Bartlett
  weight in its rank gap, with the duplicate own-pair contribution removed,
  so dependence between nearby-in-order nodes is picked up on top of the
  shared-node dependence and bandwidth one recovers ``Dyadic``.
* ``DNDyadicNoDC``: the same Bartlett-weighted HAC over per-node score
  sums but without the correction, so own pairs stay double counted.

The jackknife kinds live in :mod:`dyadcov.jackknife`; they reuse the
White meat computed here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

import numpy as np

from .errors import BandwidthTooLargeWarning, DegenerateDofError, NonpositiveVarianceError
from .ols import RegressionFit

__all__ = [
    "EstimatorKind",
    "ALL_KINDS",
    "parse_estimators",
    "VarianceEstimate",
    "TTestResult",
    "node_scores",
    "meat_white",
    "meat_oneway",
    "meat_twoway",
    "meat_dyadic",
    "meat_dn",
    "meat_dn_nodc",
    "sandwich",
    "var_iid",
    "t_test",
]


class EstimatorKind(str, Enum):
    """Names of the supported variance estimators."""

    IID = "IID"
    WHITE = "White"
    ONEWAY1 = "OneWay1"
    ONEWAY2 = "OneWay2"
    TWOWAY = "TwoWay"
    DYADIC = "Dyadic"
    DN_DYADIC = "DNDyadic"
    DN_DYADIC_NODC = "DNDyadicNoDC"
    JACKKNIFE = "JK"
    JACKKNIFE_NODC = "JKNoDC"


ALL_KINDS: tuple[EstimatorKind, ...] = tuple(EstimatorKind)

_KIND_BY_TOKEN = {kind.value.lower(): kind for kind in ALL_KINDS}


def parse_estimators(spec: str | Iterable[str | EstimatorKind]) -> tuple[EstimatorKind, ...]:
    """Resolve ``"all"``, a comma list, or an iterable of names to kinds.

    Matching is case-insensitive; the result keeps the canonical kind
    order and drops duplicates.
    """
    if isinstance(spec, str):
        if spec.strip().lower() == "all":
            return ALL_KINDS
        tokens = [tok for tok in (part.strip() for part in spec.split(",")) if tok]
    else:
        tokens = [tok.value if isinstance(tok, EstimatorKind) else str(tok) for tok in spec]
    requested = set()
    for token in tokens:
        kind = _KIND_BY_TOKEN.get(token.lower())
        if kind is None:
            valid = ", ".join(k.value for k in ALL_KINDS)
            raise ValueError(f"unknown estimator {token!r}; valid names: all, {valid}")
        requested.add(kind)
    if not requested:
        raise ValueError("no estimators requested")
    return tuple(kind for kind in ALL_KINDS if kind in requested)


@dataclass(frozen=True, eq=False)
class VarianceEstimate:
    """A coefficient covariance matrix plus how it was obtained.

    ``min_eigenvalue`` refers to the meat for sandwich-formed kinds and to
    the covariance matrix itself for the IID and jackknife kinds, whose
    construction has no separate meat step. ``psd_fixed`` records whether
    negative meat eigenvalues were clipped before the sandwich was formed.
    """

    kind: EstimatorKind
    V: np.ndarray
    bandwidth: int | None
    min_eigenvalue: float
    psd_fixed: bool
    pseudo_inverse_count: int = 0


class TTestResult(NamedTuple):
    """Contrast estimate with its standard error, t statistic, and p-value."""

    estimate: float
    se: float
    t: float
    p: float


def _symmetrize(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2.0


def _group_sums(scores: np.ndarray, index0: np.ndarray, n: int) -> np.ndarray:
    """Sum score rows by a zero-based group index."""
    out = np.empty((n, scores.shape[1]))
    for k in range(scores.shape[1]):
        out[:, k] = np.bincount(index0, weights=scores[:, k], minlength=n)
    return out


def node_scores(scores: np.ndarray, dyads: np.ndarray, n: int) -> np.ndarray:
    """Per-node score sums: row ``r`` adds the scores of every dyad touching rank ``r+1``.

    Each dyad contributes to exactly two rows, so the columns sum to twice
    the column sums of ``scores``.
    """
    return _group_sums(scores, dyads[:, 0] - 1, n) + _group_sums(scores, dyads[:, 1] - 1, n)


def _effective_bandwidth(L: int, n: int) -> int:
    if L < 1:
        raise ValueError(f"bandwidth must be at least 1, got {L}")
    if L >= n:
        warnings.warn(
            f"bandwidth {L} is at least the node count {n}; clamping to {n - 1}",
            BandwidthTooLargeWarning,
            stacklevel=3,
        )
        return n - 1
    return int(L)


def _lag_cross(g: np.ndarray, L: int) -> np.ndarray:
    """Bartlett-weighted sum of symmetrized node-score cross products at lags ``1..L-1``."""
    acc = np.zeros((g.shape[1], g.shape[1]))
    for lag in range(1, L):
        weight = 1.0 - lag / L
        cross = g[:-lag].T @ g[lag:]
        acc = acc + weight * (cross + cross.T)
    return acc


def meat_white(scores: np.ndarray) -> np.ndarray:
    """Heteroskedasticity-only meat: the sum of own-score outer products."""
    return _symmetrize(scores.T @ scores)


def meat_oneway(scores: np.ndarray, clusters: np.ndarray, n: int) -> np.ndarray:
    """Cluster meat: outer products of score sums within each cluster.

    ``clusters`` assigns each dyad a rank in ``1..n``; pass the first or
    second dyad endpoint to cluster on that side.
    """
    sums = _group_sums(scores, np.asarray(clusters) - 1, n)
    return _symmetrize(sums.T @ sums)


def meat_twoway(scores: np.ndarray, dyads: np.ndarray, n: int) -> np.ndarray:
    """Two-way cluster meat: both one-way meats minus the own-pair overlap."""
    return (
        meat_oneway(scores, dyads[:, 0], n)
        + meat_oneway(scores, dyads[:, 1], n)
        - meat_white(scores)
    )


def meat_dyadic(scores: np.ndarray, dyads: np.ndarray, n: int) -> np.ndarray:
    """Dyadic cluster meat: all score pairs whose dyads share a node.

    The lag-zero node-score sum counts own pairs through both endpoints,
    so one own-pair term is removed to leave every sharing pair with
    weight one.
    """
    g = node_scores(scores, dyads, n)
    return _symmetrize(g.T @ g - scores.T @ scores)


def meat_dn(scores: np.ndarray, dyads: np.ndarray, n: int, L: int) -> np.ndarray:
    """Kernel-weighted dyadic meat with the own-pair double count removed.

    Every endpoint pairing of two dyads contributes a Bartlett weight
    ``max(0, 1 - gap / L)`` in its rank gap. Summed over pairings this
    counts each own pair twice through its two zero gaps, so one own-pair
    term is subtracted, the same correction the jackknife applies. With
    ``L = 1`` only the zero gaps survive and the result is exactly the
    shared-node dyadic meat. A bandwidth of ``L >= n`` is clamped to
    ``n - 1`` with a :class:`BandwidthTooLargeWarning`.

    Notes
    -----
    Computed from per-node score sums as the shared-node meat plus the
    kernel-weighted cross-lag terms, without enumerating dyad pairs. The
    subtraction means the result is not positive semidefinite in general;
    see :func:`sandwich` for the optional eigenvalue clip.
    """
    L = _effective_bandwidth(L, n)
    meat = meat_dyadic(scores, dyads, n)
    if L > 1:
        meat = meat + _lag_cross(node_scores(scores, dyads, n), L)
    return meat


def meat_dn_nodc(scores: np.ndarray, dyads: np.ndarray, n: int, L: int) -> np.ndarray:
    """Bartlett HAC meat over the per-node score sums, uncorrected.

    Weights each dyad pair by the sum of its four endpoint-gap kernel
    weights, so own pairs are double counted rather than corrected for.
    Always positive semidefinite.
    """
    L = _effective_bandwidth(L, n)
    g = node_scores(scores, dyads, n)
    acc = g.T @ g
    if L > 1:
        acc = acc + _lag_cross(g, L)
    return _symmetrize(acc)


def sandwich(
    gram_inv: np.ndarray,
    meat: np.ndarray,
    kind: EstimatorKind,
    bandwidth: int | None = None,
    psd_fix: bool = False,
) -> VarianceEstimate:
    """Wrap a meat in ``(X'X)^{-1} meat (X'X)^{-1}``.

    Records the smallest meat eigenvalue; with ``psd_fix`` any negative
    eigenvalues are clipped to zero before the sandwich is formed.
    """
    w, u = np.linalg.eigh(meat)
    min_eig = float(w[0])
    fixed = False
    if psd_fix and min_eig < 0.0:
        meat = (u * np.maximum(w, 0.0)) @ u.T
        fixed = True
    v = _symmetrize(gram_inv @ meat @ gram_inv)
    return VarianceEstimate(
        kind=kind, V=v, bandwidth=bandwidth, min_eigenvalue=min_eig, psd_fixed=fixed
    )


def var_iid(fit: RegressionFit, m: int) -> VarianceEstimate:
    """Classical variance ``RSS / (M - K) * (X'X)^{-1}``."""
    k = fit.gram.shape[0]
    if m <= k:
        raise DegenerateDofError(f"need more dyads than regressors, got M={m}, K={k}")
    rss = float(fit.residuals @ fit.residuals)
    v = (rss / (m - k)) * fit.gram_inv
    return VarianceEstimate(
        kind=EstimatorKind.IID,
        V=v,
        bandwidth=None,
        min_eigenvalue=float(np.linalg.eigvalsh(v)[0]),
        psd_fixed=False,
    )


def t_test(
    beta_hat: np.ndarray,
    V: np.ndarray,
    contrast: np.ndarray,
    null_value: float = 0.0,
) -> TTestResult:
    """Two-sided test of ``contrast' beta = null_value`` with normal p-values.

    Raises :class:`NonpositiveVarianceError` when the contrast variance
    ``contrast' V contrast`` is zero or negative, which the uncorrected
    kernel and jackknife estimators can produce.
    """
    a = np.asarray(contrast, dtype=float)
    if a.shape != beta_hat.shape:
        raise ValueError(f"contrast has shape {a.shape}, expected {beta_hat.shape}")
    var = float(a @ V @ a)
    if var <= 0.0:
        raise NonpositiveVarianceError(f"contrast variance is not positive: {var:.6g}")
    se = math.sqrt(var)
    estimate = float(a @ beta_hat)
    t = (estimate - null_value) / se
    p = math.erfc(abs(t) / math.sqrt(2.0))
    return TTestResult(estimate=estimate, se=se, t=t, p=p)
