"""Least-squares power-law fits in log-log space."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from degchain.errors import EmptyDistribution, InsufficientPoints
from degchain.evolve import DegreeDistribution, expected_degree
from degchain.kernel import initial_degree


@dataclass(frozen=True)
class FitResult:
    gamma: float
    c: float
    k_min: int
    k_max: int
    residual_rms: float
    n_points: int

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "c": self.c,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "residual_rms": self.residual_rms,
            "n_points": self.n_points,
        }


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Slope, intercept and RMS residual of ``y ~ x``."""
    xm = x.mean()
    ym = y.mean()
    dx = x - xm
    slope = float(np.dot(dx, y - ym) / np.dot(dx, dx))
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    return slope, intercept, float(np.sqrt(np.mean(resid**2)))


def fit_arrays(k, p, k_min=None, k_max=None) -> FitResult:
    """Fit ``p ~ c * k**-gamma`` by unweighted OLS of log10 p on log10 k.

    Points with ``p <= 0`` are skipped.
    """
    k = np.asarray(k, dtype=float)
    p = np.asarray(p, dtype=float)
    mask = p > 0
    if k_min is not None:
        mask &= k >= k_min
    if k_max is not None:
        mask &= k <= k_max
    if mask.sum() < 3:
        raise InsufficientPoints(
            f"need at least 3 positive points in [{k_min}, {k_max}], got {int(mask.sum())}"
        )
    ks = k[mask]
    slope, intercept, rms = _ols(np.log10(ks), np.log10(p[mask]))
    return FitResult(
        gamma=-slope,
        c=10.0**intercept,
        k_min=int(ks[0]),
        k_max=int(ks[-1]),
        residual_rms=rms,
        n_points=int(mask.sum()),
    )


def default_fit_range(dist: DegreeDistribution) -> tuple[int, int]:
    """From the smallest populated degree up to the largest degree expected
    to hold at least one node (``p >= 1 / (t - S + 1)``)."""
    positive = dist.p > 0
    if not positive.any():
        raise EmptyDistribution("distribution has no positive entries")
    k_min = int(dist.k[positive][0])
    # small slack so that exactly-one-node degrees are not lost to rounding
    populated = dist.p * dist.nodes >= 1.0 - 1e-9
    k_max = int(dist.k[populated][-1]) if populated.any() else k_min
    return k_min, k_max


def tail_fit_range(dist: DegreeDistribution) -> tuple[int, int]:
    """Window on the power-law tail of a run over nodes ``S..t``.

    The upper end is half the expected degree of the oldest node, below the
    finite-size cutoff.  The lower end is twice the largest initial degree
    (clear of the pile-up of recently added nodes) but never more than one
    decade below the upper end.
    """
    k_hi = int(expected_degree(dist.model, dist.S, dist.t) / 2)
    k_lo = max(2 * initial_degree(dist.model, dist.t), math.ceil(k_hi / 10))
    return k_lo, k_hi


def common_tail_range(dists: Sequence[DegreeDistribution]) -> tuple[int, int]:
    """Intersection of :func:`tail_fit_range` over several runs, so that
    coefficients fitted at different times are comparable."""
    windows = [tail_fit_range(d) for d in dists]
    return max(lo for lo, _ in windows), min(hi for _, hi in windows)


def fit_power_law(
    dist: DegreeDistribution, k_min: int | None = None, k_max: int | None = None
) -> FitResult:
    if k_min is None or k_max is None:
        lo, hi = default_fit_range(dist)
        k_min = lo if k_min is None else k_min
        k_max = hi if k_max is None else k_max
    return fit_arrays(dist.k, dist.p, k_min, k_max)


def estimate_nonstationary_exponent(fits: Sequence[tuple[float, FitResult | float]]) -> float:
    """Slope of log10 c against log10 t over ``(t, fit)`` pairs.

    Plain coefficients may be passed in place of FitResult objects.
    """
    pairs = sorted(
        (float(t), fit.c if isinstance(fit, FitResult) else float(fit)) for t, fit in fits
    )
    ts = np.array([t for t, _ in pairs])
    if len(np.unique(ts)) < 2:
        raise InsufficientPoints("need fits at two or more distinct times")
    cs = np.array([c for _, c in pairs])
    slope, _, _ = _ols(np.log10(ts), np.log10(cs))
    return slope
