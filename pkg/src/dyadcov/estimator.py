"""High-level estimator tying the fit, bandwidth, and variance pieces together."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .bandwidth import BandwidthSelection, scaled_bandwidth, select_bandwidth
from .data import DyadicDataset, NodeOrder, canonical_dyads
from .jackknife import jk_variance
from .ols import fit_ols
from .variance import (
    EstimatorKind,
    TTestResult,
    VarianceEstimate,
    _effective_bandwidth,
    meat_dn,
    meat_dn_nodc,
    meat_dyadic,
    meat_oneway,
    meat_twoway,
    meat_white,
    node_scores,
    parse_estimators,
    sandwich,
    t_test,
    var_iid,
)

__all__ = ["estimate_variances", "DyadicRegression"]

_BANDWIDTH_KINDS = {
    EstimatorKind.DN_DYADIC,
    EstimatorKind.DN_DYADIC_NODC,
    EstimatorKind.JACKKNIFE,
    EstimatorKind.JACKKNIFE_NODC,
}


def estimate_variances(
    ds: DyadicDataset,
    fit,
    kinds,
    bandwidth: int | None = None,
    psd_fix: bool = False,
) -> dict[EstimatorKind, VarianceEstimate]:
    """Compute the requested coefficient covariance estimates in one pass.

    Intermediate results are shared: the White meat feeds the two-way
    combination and the jackknife correction, and a single sweep of block
    deletions serves both jackknife kinds. ``bandwidth`` is required by the
    kernel and jackknife kinds and is clamped to ``n - 1`` with a warning
    when it reaches the node count.
    """
    kinds = parse_estimators(kinds)
    scores, dyads, n = fit.scores, ds.dyads, ds.n
    L = None
    if any(kind in _BANDWIDTH_KINDS for kind in kinds):
        if bandwidth is None:
            raise ValueError("a bandwidth is required for the kernel and jackknife estimators")
        L = _effective_bandwidth(bandwidth, n)

    white = None

    def white_meat() -> np.ndarray:
        nonlocal white
        if white is None:
            white = meat_white(scores)
        return white

    jk = None

    def jk_result():
        nonlocal jk
        if jk is None:
            jk = jk_variance(ds, fit, L, corrected=True)
        return jk

    out: dict[EstimatorKind, VarianceEstimate] = {}
    for kind in kinds:
        if kind is EstimatorKind.IID:
            out[kind] = var_iid(fit, ds.m)
        elif kind is EstimatorKind.WHITE:
            out[kind] = sandwich(fit.gram_inv, white_meat(), kind, psd_fix=psd_fix)
        elif kind is EstimatorKind.ONEWAY1:
            meat = meat_oneway(scores, dyads[:, 0], n)
            out[kind] = sandwich(fit.gram_inv, meat, kind, psd_fix=psd_fix)
        elif kind is EstimatorKind.ONEWAY2:
            meat = meat_oneway(scores, dyads[:, 1], n)
            out[kind] = sandwich(fit.gram_inv, meat, kind, psd_fix=psd_fix)
        elif kind is EstimatorKind.TWOWAY:
            meat = meat_twoway(scores, dyads, n)
            out[kind] = sandwich(fit.gram_inv, meat, kind, psd_fix=psd_fix)
        elif kind is EstimatorKind.DYADIC:
            meat = meat_dyadic(scores, dyads, n)
            out[kind] = sandwich(fit.gram_inv, meat, kind, psd_fix=psd_fix)
        elif kind is EstimatorKind.DN_DYADIC:
            meat = meat_dn(scores, dyads, n, L)
            out[kind] = sandwich(fit.gram_inv, meat, kind, bandwidth=L, psd_fix=psd_fix)
        elif kind is EstimatorKind.DN_DYADIC_NODC:
            meat = meat_dn_nodc(scores, dyads, n, L)
            out[kind] = sandwich(fit.gram_inv, meat, kind, bandwidth=L, psd_fix=psd_fix)
        elif kind is EstimatorKind.JACKKNIFE:
            res = jk_result()
            out[kind] = VarianceEstimate(
                kind=kind,
                V=res.V,
                bandwidth=L,
                min_eigenvalue=float(np.linalg.eigvalsh(res.V)[0]),
                psd_fixed=False,
                pseudo_inverse_count=res.pseudo_inverse_used,
            )
        elif kind is EstimatorKind.JACKKNIFE_NODC:
            res = jk_result()
            out[kind] = VarianceEstimate(
                kind=kind,
                V=res.V0,
                bandwidth=L,
                min_eigenvalue=float(np.linalg.eigvalsh(res.V0)[0]),
                psd_fixed=False,
                pseudo_inverse_count=res.pseudo_inverse_used,
            )
    return out


class DyadicRegression(BaseEstimator):
    """OLS on dyadic observations with dependence-robust variance estimates.

    Parameters
    ----------
    estimators : str or iterable, default "all"
        Which variance estimators to compute at fit time; ``"all"``, a
        comma-separated string, or an iterable of names.
    bandwidth : int, optional
        Kernel bandwidth and jackknife block length. Left unset, it is
        selected from the node-score autocorrelations and scaled by
        ``sigma_l``; an explicit value is used as given.
    sigma_l : float, default 1.0
        Multiplier applied to the data-driven bandwidth.
    psd_fix : bool, default False
        Clip negative meat eigenvalues before forming sandwiches.

    Attributes
    ----------
    coef_ : ndarray of shape (K,)
        Fitted coefficients.
    variances_ : dict of str to VarianceEstimate
        One entry per requested estimator, keyed by estimator name.
    bandwidth_used_ : int or None
        Bandwidth handed to the kernel and jackknife estimators; None when
        none of them was requested.
    bandwidth_selection_ : BandwidthSelection or None
        Selection trace, or None when an explicit bandwidth was given.
    """

    def __init__(self, *, estimators="all", bandwidth=None, sigma_l=1.0, psd_fix=False):
        self.estimators = estimators
        self.bandwidth = bandwidth
        self.sigma_l = sigma_l
        self.psd_fix = psd_fix

    def fit(self, X, y, *, dyads, n_nodes=None):
        """Fit from arrays: regressors, outcomes, and an ``(M, 2)`` array of node ranks.

        ``n_nodes`` defaults to the largest rank appearing in ``dyads``.
        Nodes are assumed to be numbered in their order of interest.
        """
        X = check_array(X, dtype=np.float64)
        y = np.asarray(check_array(y, dtype=np.float64, ensure_2d=False))
        if y.ndim != 1:
            raise ValueError(f"y must be 1-d, got shape {y.shape}")
        dyads = np.asarray(dyads)
        if n_nodes is None:
            if dyads.size == 0:
                raise ValueError("cannot infer the node count from an empty dyad array")
            n_nodes = int(dyads.max())
        dyads = canonical_dyads(dyads, int(n_nodes))
        ds = DyadicDataset(
            n=int(n_nodes),
            dyads=dyads,
            y=y,
            X=X,
            order=NodeOrder.identity(int(n_nodes)),
            x_names=tuple(f"x{k}" for k in range(1, X.shape[1] + 1)),
        )
        return self.fit_dataset(ds)

    def fit_dataset(self, ds: DyadicDataset):
        """Fit from an assembled :class:`DyadicDataset` (the CSV ingestion path)."""
        kinds = parse_estimators(self.estimators)
        fit = fit_ols(ds)
        selection: BandwidthSelection | None = None
        bandwidth_used: int | None = None
        if self.bandwidth is not None:
            if int(self.bandwidth) < 1:
                raise ValueError(f"bandwidth must be at least 1, got {self.bandwidth}")
            bandwidth_used = int(self.bandwidth)
        else:
            selection = select_bandwidth(node_scores(fit.scores, ds.dyads, ds.n))
            bandwidth_used = scaled_bandwidth(selection.L, self.sigma_l)
        variances = estimate_variances(
            ds, fit, kinds, bandwidth=bandwidth_used, psd_fix=self.psd_fix
        )
        if not any(kind in _BANDWIDTH_KINDS for kind in kinds):
            bandwidth_used = None

        self.coef_ = fit.beta_hat
        self.rank_ = fit.rank
        self.rank_deficient_ = fit.rank_deficient
        self.residuals_ = fit.residuals
        self.n_features_in_ = ds.k
        self.n_nodes_ = ds.n
        self.n_dyads_ = ds.m
        self.x_names_ = ds.x_names
        self.bandwidth_selection_ = selection
        self.bandwidth_used_ = bandwidth_used
        self.variances_ = {kind.value: est for kind, est in variances.items()}
        return self

    def predict(self, X):
        """Fitted values ``X @ coef_``."""
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=np.float64)
        return X @ self.coef_

    def contrast_test(self, contrast, null_value: float = 0.0, kind="JK") -> TTestResult:
        """Two-sided test of a coefficient contrast under one fitted estimator.

        ``contrast`` is either a 1-based column index or a length-K vector.
        """
        check_is_fitted(self, "coef_")
        (kind,) = parse_estimators([kind] if isinstance(kind, (str, EstimatorKind)) else kind)
        try:
            estimate = self.variances_[kind.value]
        except KeyError:
            raise ValueError(f"estimator {kind.value!r} was not computed at fit time") from None
        if np.isscalar(contrast):
            index = int(contrast)
            if not 1 <= index <= self.coef_.shape[0]:
                raise ValueError(f"contrast index {index} outside 1..{self.coef_.shape[0]}")
            vec = np.zeros(self.coef_.shape[0])
            vec[index - 1] = 1.0
        else:
            vec = np.asarray(contrast, dtype=float)
        return t_test(self.coef_, estimate.V, vec, null_value=null_value)
