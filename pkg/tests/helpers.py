"""Shared helpers for building random test instances."""

from __future__ import annotations

import numpy as np

from dyadcov import DyadicDataset, NodeOrder, complete_dyads


def random_dyads(rng: np.random.Generator, n: int, complete: bool = False) -> np.ndarray:
    """Canonical dyads on ``n`` nodes; incomplete arrays drop a random subset."""
    dyads = complete_dyads(n)
    if complete:
        return dyads
    m = dyads.shape[0]
    keep_count = int(rng.integers(max(3, m // 2), m + 1))
    keep = np.sort(rng.choice(m, size=keep_count, replace=False))
    return dyads[keep]


def random_scores(rng: np.random.Generator, m: int, k: int) -> np.ndarray:
    return rng.standard_normal((m, k))


def random_instance(
    rng: np.random.Generator,
    n_range: tuple[int, int] = (6, 12),
    k_range: tuple[int, int] = (1, 4),
) -> tuple[np.ndarray, np.ndarray, int]:
    """A (scores, dyads, n) triple with random size and completeness."""
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    k = int(rng.integers(k_range[0], k_range[1] + 1))
    complete = bool(rng.integers(0, 2))
    dyads = random_dyads(rng, n, complete=complete)
    scores = random_scores(rng, dyads.shape[0], k)
    return scores, dyads, n


def random_dataset(
    rng: np.random.Generator,
    n: int = 10,
    k: int = 3,
    complete: bool = True,
    noise: float = 1.0,
) -> DyadicDataset:
    """A dataset with an intercept column and Gaussian everything else."""
    dyads = random_dyads(rng, n, complete=complete)
    m = dyads.shape[0]
    X = np.hstack([np.ones((m, 1)), rng.standard_normal((m, k - 1))]) if k > 1 else np.ones((m, 1))
    beta = rng.standard_normal(k)
    y = X @ beta + noise * rng.standard_normal(m)
    return DyadicDataset(
        n=n,
        dyads=dyads,
        y=y,
        X=X,
        order=NodeOrder.identity(n),
        x_names=tuple(f"x{c}" for c in range(1, k + 1)),
    )
