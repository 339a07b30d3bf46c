"""Bartlett kernel weights and the endpoint distance between node pairs."""

from __future__ import annotations

__all__ = ["bartlett_weight", "endpoint_distance"]


def bartlett_weight(h: int, L: int) -> float:
    """Triangular kernel weight ``max(0, 1 - h / L)`` for a lag ``h``.

    Parameters
    ----------
    h : int
        Nonnegative lag.
    L : int
        Bandwidth, at least 1. Lags of ``L`` or more receive weight zero.
    """
    if L < 1:
        raise ValueError(f"bandwidth must be at least 1, got {L}")
    if h < 0:
        raise ValueError(f"lag must be nonnegative, got {h}")
    return max(0.0, 1.0 - h / L)


def endpoint_distance(d: tuple[int, int], e: tuple[int, int]) -> int:
    """Smallest rank gap between an endpoint of ``d`` and an endpoint of ``e``.

    Both arguments are ``(i, j)`` pairs of node ranks. The distance is
    ``min(|i-p|, |i-q|, |j-p|, |j-q|)``; it is zero exactly when the two
    dyads share a node.
    """
    i, j = d
    p, q = e
    return min(abs(i - p), abs(i - q), abs(j - p), abs(j - q))
