"""Exception and warning types shared across the package."""

from __future__ import annotations

__all__ = [
    "DyadDataError",
    "UnknownLabelError",
    "SelfLoopError",
    "DuplicateDyadError",
    "RaggedRegressorsError",
    "EmptyDatasetError",
    "DegenerateDofError",
    "BlockTooLongError",
    "NonpositiveVarianceError",
    "UnknownParameterError",
    "BandwidthTooLargeWarning",
]


class DyadDataError(ValueError):
    """Base class for errors raised while assembling a dyadic dataset."""


class UnknownLabelError(DyadDataError):
    """A dyad references a node label that the ordering does not contain."""


class SelfLoopError(DyadDataError):
    """A dyad links a node to itself."""


class DuplicateDyadError(DyadDataError):
    """The same unordered node pair appears more than once."""


class RaggedRegressorsError(DyadDataError):
    """Regressor rows do not all have the same length."""


class EmptyDatasetError(DyadDataError):
    """No dyad rows were supplied."""


class DegenerateDofError(ValueError):
    """A residual-variance estimate has no degrees of freedom (M <= K)."""


class BlockTooLongError(ValueError):
    """A jackknife block length is not in ``1 <= L < n``."""


class NonpositiveVarianceError(ValueError):
    """The estimated variance of a contrast is zero or negative."""


class UnknownParameterError(ValueError):
    """A parameter sweep names something that is not a simulation knob."""


class BandwidthTooLargeWarning(UserWarning):
    """A kernel bandwidth of ``L >= n`` was clamped down to ``n - 1``."""
