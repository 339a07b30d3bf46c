"""Least-squares fit on a dyadic dataset, keeping the pieces variance code reuses."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import DyadicDataset

__all__ = ["RegressionFit", "fit_ols", "RANK_RTOL"]

# Relative eigenvalue cutoff for rank decisions, shared with the jackknife
# downdates so both paths call the same design singular.
RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class RegressionFit:
    """Outputs of an OLS fit.

    Attributes
    ----------
    beta_hat : ndarray of shape (K,)
        Coefficients. The minimum-norm solution when the gram is singular.
    gram : ndarray of shape (K, K)
        ``X'X``.
    gram_inv : ndarray of shape (K, K)
        Inverse of the gram, or its pseudo-inverse when rank deficient.
    xty : ndarray of shape (K,)
        ``X'y``.
    residuals : ndarray of shape (M,)
        ``y - X beta_hat``.
    scores : ndarray of shape (M, K)
        Per-dyad scores ``x_d * residual_d``, the building block of every
        sandwich meat.
    rank : int
        Numerical rank of the gram.
    rank_deficient : bool
        Whether ``rank < K``.
    """

    beta_hat: np.ndarray
    gram: np.ndarray
    gram_inv: np.ndarray
    xty: np.ndarray
    residuals: np.ndarray
    scores: np.ndarray
    rank: int
    rank_deficient: bool


def pinv_gram(gram: np.ndarray) -> tuple[np.ndarray, int]:
    """Pseudo-inverse of a symmetric PSD matrix and its numerical rank.

    Eigenvalues below ``RANK_RTOL`` times the largest one are treated as
    zero. Used for the full-sample gram and for jackknife downdates alike.
    """
    w, u = np.linalg.eigh(gram)
    cutoff = RANK_RTOL * max(w[-1], 0.0)
    keep = w > cutoff
    inv_w = np.where(keep, 1.0 / np.where(keep, w, 1.0), 0.0)
    return (u * inv_w) @ u.T, int(keep.sum())


def fit_ols(ds: DyadicDataset) -> RegressionFit:
    """Fit ``y`` on ``X`` by least squares.

    Solves the normal equations through an eigendecomposition of the gram
    matrix; a singular gram falls back to the pseudo-inverse, which yields
    the minimum-norm coefficient vector.
    """
    X, y = ds.X, ds.y
    gram = X.T @ X
    xty = X.T @ y
    gram_inv, rank = pinv_gram(gram)
    beta = gram_inv @ xty
    # One refinement pass keeps X'(y - X beta) near machine precision on
    # badly scaled designs such as wide fixed-effect expansions.
    beta = beta + gram_inv @ (xty - gram @ beta)
    residuals = y - X @ beta
    scores = X * residuals[:, None]
    return RegressionFit(
        beta_hat=beta,
        gram=gram,
        gram_inv=gram_inv,
        xty=xty,
        residuals=residuals,
        scores=scores,
        rank=rank,
        rank_deficient=rank < X.shape[1],
    )
