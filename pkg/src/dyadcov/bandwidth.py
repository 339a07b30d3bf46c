"""Data-driven kernel bandwidth selection from per-node score sums."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["BandwidthSelection", "select_bandwidth", "scaled_bandwidth"]

# The qualifying rule looks at this many consecutive lags at once.
_RUN = 5


@dataclass(frozen=True, eq=False)
class BandwidthSelection:
    """Outcome of the bandwidth search.

    Attributes
    ----------
    L : int
        Selected bandwidth, in ``1 .. h_max``.
    h_max : int
        Largest lag considered, ``max(1, floor(n ** 0.4))``.
    threshold : float
        Noise threshold ``sqrt(log(n) / n)`` the autocorrelations are
        compared against.
    rho_max : ndarray of shape (h_max,)
        Largest absolute column autocorrelation of the centered node
        scores at lags ``1 .. h_max``.
    defaulted : bool
        True when no lag qualified (or none could be examined) and ``L``
        fell back to ``h_max``.
    """

    L: int
    h_max: int
    threshold: float
    rho_max: np.ndarray
    defaulted: bool


def select_bandwidth(node_scores: np.ndarray) -> BandwidthSelection:
    """Pick the smallest lag past which node-score autocorrelations look like noise.

    The node scores are centered per column and autocorrelated along the
    node order. The selected ``L`` is the smallest lag ``h`` such that the
    largest absolute autocorrelation stays below ``sqrt(log(n) / n)`` for
    five consecutive lags ``h .. h+4``. When no lag qualifies, or ``h_max``
    is too small to examine any, ``L`` defaults to ``h_max``.
    """
    g = np.asarray(node_scores, dtype=float)
    if g.ndim != 2:
        raise ValueError(f"node scores must be 2-d, got shape {g.shape}")
    n = g.shape[0]
    if n < 2:
        raise ValueError("bandwidth selection needs at least two nodes")
    h_max = max(1, int(math.floor(n**0.4)))
    threshold = math.sqrt(math.log(n) / n)
    centered = g - g.mean(axis=0)
    rho_max = np.zeros(h_max)
    for h in range(1, h_max + 1):
        lead, lag = centered[: n - h], centered[h:]
        num = (lead * lag).sum(axis=0)
        den = np.sqrt((lead * lead).sum(axis=0)) * np.sqrt((lag * lag).sum(axis=0))
        ratios = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
        rho_max[h - 1] = np.abs(ratios).max()
    selected = None
    for h in range(1, h_max - _RUN + 2):
        if np.all(rho_max[h - 1 : h - 1 + _RUN] < threshold):
            selected = h
            break
    defaulted = selected is None
    L = h_max if defaulted else selected
    L = min(max(L, 1), h_max)
    return BandwidthSelection(
        L=L, h_max=h_max, threshold=threshold, rho_max=rho_max, defaulted=defaulted
    )


def scaled_bandwidth(L: int, sigma_l: float) -> int:
    """Scale a selected bandwidth by ``sigma_l``, rounding half away from zero.

    The result is clamped to at least 1, so a zero scale still yields a
    usable bandwidth.
    """
    if L < 1:
        raise ValueError(f"bandwidth must be at least 1, got {L}")
    if sigma_l < 0:
        raise ValueError(f"bandwidth scale must be nonnegative, got {sigma_l}")
    return max(1, int(math.floor(sigma_l * L + 0.5)))
