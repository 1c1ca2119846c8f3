"""
Growth of the optimal influence I* and of k* with tree size and tree height.

Each replicate draws its own random stream from ``(seed, x, replicate)`` so
curves do not depend on the order replicates are evaluated in.
"""
import logging
import math
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from src.errors import DegenerateFitError, DomainError
from src.models import FitResult, GrowthCurvePoint, HeightTrend
from src.optimal.tree_max_influence import optimal_summary
from src.synth.generators import TreeModel, random_tree, random_tree_fixed_height
from src.tree.directed_tree import DirectedTree

logger = logging.getLogger(__name__)

DEFAULT_N_RANGE = range(5, 101)
DEFAULT_HEIGHT_N = 50
DEFAULT_REPLICATES = 100


def replicate_rng(seed: int, x: int, replicate: int) -> np.random.Generator:
    """Independent random stream for one replicate of one curve point."""
    return np.random.default_rng([seed, x, replicate])


def _curve_point(x: int, make_tree: Callable[[np.random.Generator], DirectedTree],
                 replicates: int, seed: int) -> GrowthCurvePoint:
    i_values = []
    k_values = []
    for rep in range(replicates):
        report = optimal_summary(make_tree(replicate_rng(seed, x, rep)))
        i_values.append(report.influence)
        k_values.append(report.k)
    return GrowthCurvePoint(
        x=x,
        mean_I_star=float(np.mean(i_values)),
        sd_I_star=float(np.std(i_values)),
        mean_k_star=float(np.mean(k_values)),
        sd_k_star=float(np.std(k_values)),
        replicates=replicates,
    )


def fit_linear(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """
    Ordinary least-squares line with the t-test p-value of its slope.

    Raises:
        DegenerateFitError: with fewer than three distinct x values
    """
    if len(set(xs)) < 3:
        raise DegenerateFitError(f"a linear fit needs at least 3 distinct x values, got {len(set(xs))}")
    result = stats.linregress(xs, ys)
    r = float(result.rvalue)
    return FitResult(
        slope=float(result.slope),
        intercept=float(result.intercept),
        # constant ys leave r undefined
        r_squared=0.0 if math.isnan(r) else min(r * r, 1.0),
        p_value=float(result.pvalue),
        stderr=float(result.stderr),
    )


def _fit_or_flag(xs: Sequence[float], ys: Sequence[float], label: str) -> FitResult:
    try:
        return fit_linear(xs, ys)
    except DegenerateFitError as exc:
        logger.warning("%s fit flagged as degenerate: %s", label, exc)
        return FitResult(slope=math.nan, intercept=math.nan, r_squared=0.0,
                         p_value=math.nan, stderr=math.nan, degenerate=True)


def growth_vs_n(
    n_range: Iterable[int] = DEFAULT_N_RANGE,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
    model: TreeModel = random_tree,
) -> Tuple[List[GrowthCurvePoint], FitResult, FitResult]:
    """
    Mean I* and k* of random trees for each size in ``n_range``.

    Returns:
        ``(points, fit of mean I* vs n, fit of mean k* vs n)``; a fit over
        fewer than three sizes is returned with ``degenerate=True``
    """
    sizes = list(n_range)
    if not sizes:
        raise DomainError("n_range must contain at least one size")
    if replicates < 1:
        raise DomainError(f"replicates must be >= 1, got {replicates}")

    points = []
    for n in sizes:
        points.append(_curve_point(n, lambda rng, n=n: model(n, rng), replicates, seed))
        logger.debug("n=%d: mean I*=%.2f, mean k*=%.2f", n, points[-1].mean_I_star, points[-1].mean_k_star)

    xs = [p.x for p in points]
    fit_i = _fit_or_flag(xs, [p.mean_I_star for p in points], "I* vs n")
    fit_k = _fit_or_flag(xs, [p.mean_k_star for p in points], "k* vs n")
    logger.info("growth vs n: slope(I*)=%.3f slope(k*)=%.3f", fit_i.slope, fit_k.slope)
    return points, fit_i, fit_k


def growth_vs_height(
    n: int = DEFAULT_HEIGHT_N,
    h_range: Optional[Iterable[int]] = None,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
) -> List[GrowthCurvePoint]:
    """
    Mean I* and k* of random ``n``-node trees for each height in ``h_range``
    (default ``1..n-1``).
    """
    heights = list(h_range) if h_range is not None else list(range(1, n))
    if not heights:
        raise DomainError("h_range must contain at least one height")
    for h in heights:
        if not 1 <= h <= n - 1:
            raise DomainError(f"height h={h} is infeasible for n={n} nodes")
    if replicates < 1:
        raise DomainError(f"replicates must be >= 1, got {replicates}")

    points = [
        _curve_point(h, lambda rng, h=h: random_tree_fixed_height(n, h, rng), replicates, seed)
        for h in heights
    ]
    logger.info("growth vs height: %d heights for n=%d", len(points), n)
    return points


def curve_knee(points: Sequence[GrowthCurvePoint]) -> Optional[int]:
    """
    x where the mean I* curve lies farthest from the chord joining its ends,
    after scaling both axes to ``[0, 1]``.
    """
    if len(points) < 3:
        return None
    xs = np.array([p.x for p in points], dtype=float)
    ys = np.array([p.mean_I_star for p in points], dtype=float)
    span_x, span_y = np.ptp(xs), np.ptp(ys)
    if span_x == 0 or span_y == 0:
        return None
    xs = (xs - xs.min()) / span_x
    ys = (ys - ys.min()) / span_y
    dx, dy = xs[-1] - xs[0], ys[-1] - ys[0]
    distance = np.abs(dy * (xs - xs[0]) - dx * (ys - ys[0])) / math.hypot(dx, dy)
    return int(points[int(np.argmax(distance))].x)


def height_trend(points: Sequence[GrowthCurvePoint]) -> HeightTrend:
    """Spearman correlation of mean I* with height, plus the knee of the curve."""
    if len(points) < 2:
        rho = math.nan
    else:
        rho, _ = stats.spearmanr([p.x for p in points], [p.mean_I_star for p in points])
    return HeightTrend(spearman_rho=float(rho), knee_x=curve_knee(points))
