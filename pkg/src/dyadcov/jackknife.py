"""Moving-block jackknife over the node order, deleting rows and columns together.

Each block covers ``L`` consecutive node ranks. Deleting a block removes
every dyad with an endpoint in it, the coefficient vector is refit on the
remainder, and the spread of the refits around the full-sample fit
estimates the coefficient covariance. The refits reuse the full-sample
cross products through downdates instead of rebuilding the design.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import DyadicDataset
from .errors import BlockTooLongError
from .ols import RegressionFit, pinv_gram
from .variance import meat_white

__all__ = ["BlockDeletion", "JackknifeResult", "block_deletion_sets", "delete_block_fit", "jk_variance"]


@dataclass(frozen=True, eq=False)
class BlockDeletion:
    """A block of node ranks and the dyad rows an endpoint of which falls in it."""

    start: int
    nodes: np.ndarray
    touched: np.ndarray


@dataclass(frozen=True, eq=False)
class JackknifeResult:
    """Jackknife covariance matrices and the per-block refits behind them.

    ``V`` subtracts the full-sample heteroskedasticity component from the
    raw block spread ``V0``; the subtraction can leave ``V`` indefinite.
    ``pseudo_inverse_used`` counts blocks whose downdated cross products
    were rank deficient and fell back to a pseudo-inverse refit.
    """

    V0: np.ndarray
    V: np.ndarray
    deleted_betas: np.ndarray
    pseudo_inverse_used: int


def block_deletion_sets(dyads: np.ndarray, n: int, L: int) -> list[BlockDeletion]:
    """All ``n - L + 1`` length-``L`` blocks of consecutive ranks with their touched rows.

    Requires ``1 <= L < n``; a block spanning every node would delete the
    whole sample.
    """
    if not 1 <= L < n:
        raise BlockTooLongError(f"block length must satisfy 1 <= L < n, got L={L}, n={n}")
    i, j = dyads[:, 0], dyads[:, 1]
    blocks = []
    for start in range(1, n - L + 2):
        end = start + L - 1
        touch = ((i >= start) & (i <= end)) | ((j >= start) & (j <= end))
        blocks.append(
            BlockDeletion(
                start=start,
                nodes=np.arange(start, end + 1, dtype=np.int64),
                touched=np.flatnonzero(touch),
            )
        )
    return blocks


def delete_block_fit(
    ds: DyadicDataset, fit: RegressionFit, block: BlockDeletion
) -> tuple[np.ndarray, bool]:
    """Coefficients refit with a block's touched rows removed.

    Downdates ``X'X`` and ``X'y`` by the touched rows and solves through
    the PSD pseudo-inverse, so a deletion that wipes out a regressor
    still yields the minimum-norm refit. Returns the coefficient vector
    and whether the downdated cross products were rank deficient.
    """
    x_gone = ds.X[block.touched]
    y_gone = ds.y[block.touched]
    gram_down = fit.gram - x_gone.T @ x_gone
    xty_down = fit.xty - x_gone.T @ y_gone
    inv, rank = pinv_gram(gram_down)
    return inv @ xty_down, rank < ds.k


def jk_variance(
    ds: DyadicDataset, fit: RegressionFit, L: int, corrected: bool = True
) -> JackknifeResult:
    """Block-jackknife covariance of the coefficients.

    ``V0`` is ``1/L`` times the sum of outer products of the block refits
    around the full-sample coefficients. With ``corrected`` (the default),
    ``V`` additionally subtracts the full-sample White sandwich; that
    component is never recomputed per deletion. With ``corrected=False``
    the result's ``V`` equals ``V0``.
    """
    blocks = block_deletion_sets(ds.dyads, ds.n, L)
    deltas = np.empty((len(blocks), ds.k))
    pinv_count = 0
    for row, block in enumerate(blocks):
        beta_del, used_pinv = delete_block_fit(ds, fit, block)
        deltas[row] = beta_del - fit.beta_hat
        pinv_count += used_pinv
    v0 = (deltas.T @ deltas) / L
    if corrected:
        v = v0 - fit.gram_inv @ meat_white(fit.scores) @ fit.gram_inv
    else:
        v = v0
    return JackknifeResult(V0=v0, V=v, deleted_betas=deltas + fit.beta_hat, pseudo_inverse_used=pinv_count)
