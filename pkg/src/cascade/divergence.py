"""
Kullback-Leibler comparison of per-cascade value distributions.

Divergences use the natural logarithm.
"""
import math
from typing import Optional, Sequence

import numpy as np

from src.errors import DivergenceError
from src.models import DistributionComparison, DistributionKind

DEFAULT_SMOOTHING = 1e-4
DEFAULT_RHO_BINS = 20


def kl_divergence(p: Sequence[float], q: Sequence[float], smoothing: float = DEFAULT_SMOOTHING) -> float:
    """
    Discrete ``D(p || q) = sum p_i log(p_i / q_i)``.

    Both inputs are normalized first. Bins where ``q`` is empty but ``p`` has
    mass receive ``smoothing`` before ``q`` is renormalized; bins where
    ``p_i = 0`` contribute nothing. ``D(p || p)`` is therefore exactly 0.

    Raises:
        DivergenceError: for mismatched or empty inputs, negative entries or
            nonpositive smoothing
    """
    if not smoothing > 0:
        raise DivergenceError(f"smoothing must be positive, got {smoothing}")
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1 or p.size == 0:
        raise DivergenceError("distributions must be nonempty and share their bins")
    if (p < 0).any() or (q < 0).any() or p.sum() == 0 or q.sum() == 0:
        raise DivergenceError("distributions need nonnegative entries with positive total mass")

    p = p / p.sum()
    q = q / q.sum()
    gaps = (q == 0) & (p > 0)
    if gaps.any():
        q = np.where(gaps, smoothing, q)
        q = q / q.sum()
    support = p > 0
    return max(0.0, float(np.sum(p[support] * np.log(p[support] / q[support]))))


def common_bin_edges(values: Sequence[float], bins: Optional[int] = None) -> np.ndarray:
    """
    Bin edges shared by all distributions.

    With ``bins=None`` the bins have unit width and integer edges covering the
    union support; otherwise ``bins`` equal-width bins span the value range.
    """
    values = np.asarray(values, dtype=float)
    lo, hi = float(values.min()), float(values.max())
    if bins is None:
        return np.arange(math.floor(lo), math.floor(hi) + 2, dtype=float)
    if bins < 1:
        raise DivergenceError(f"bins must be >= 1, got {bins}")
    if hi == lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, bins + 1)


def compare_distributions(
    real: Sequence[float],
    greedy: Sequence[float],
    random: Sequence[float],
    bins: Optional[int] = None,
    smoothing: float = DEFAULT_SMOOTHING,
    kind: DistributionKind = DistributionKind.INFLUENCE,
) -> DistributionComparison:
    """
    Divergence of the observed values from the greedy and from the random
    baseline values, over a common binning.

    Args:
        real, greedy, random: one value per cascade
        bins: number of equal-width bins; ``None`` means unit-width integer
            bins for influence values and 20 bins for normalized values
        smoothing: mass given to empty baseline bins
        kind: what the values are, recorded in the result

    Raises:
        DivergenceError: for empty inputs or nonpositive smoothing
    """
    if not len(real) or not len(greedy) or not len(random):
        raise DivergenceError("every distribution needs at least one value")
    if not smoothing > 0:
        raise DivergenceError(f"smoothing must be positive, got {smoothing}")
    kind = DistributionKind(kind)
    if bins is None and kind == DistributionKind.RHO:
        bins = DEFAULT_RHO_BINS

    edges = common_bin_edges(np.concatenate([real, greedy, random]), bins)
    p_real, _ = np.histogram(real, bins=edges)
    q_greedy, _ = np.histogram(greedy, bins=edges)
    q_random, _ = np.histogram(random, bins=edges)
    return DistributionComparison(
        kl_real_vs_greedy=kl_divergence(p_real, q_greedy, smoothing),
        kl_real_vs_random=kl_divergence(p_real, q_random, smoothing),
        bin_edges=edges.tolist(),
        kind=kind,
        smoothing=smoothing,
        log_base="e",
    )
