"""Threshold extraction and maxima localization on sweep curves.

Mixedness curves are fitted with a weighted monotone model: isotonic
regression of the means (weights 1/stderr^2) joined by a shape-preserving
cubic through the fitted nodes, held constant outside the data range.  The
model is monotone non-decreasing and maps [0, 1] into [0, 100] by
construction, which a fixed sigmoid family cannot guarantee for these
curves: they rise concavely from q = 0 with no lower shoulder, and a
misspecified family biases the late crossing points by several grid steps.
Thresholds solve f(q) = level by bisection; uncertainties come from
refitting under Gaussian perturbations of the data, 100 times by default.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import isotonic_regression

from .errors import (
    BootstrapUnstableError,
    FitDegenerateError,
    InvalidInputError,
    NoCrossingError,
    NoInteriorMaxError,
)

FIT_FAMILY = "isotonic-pchip"


@dataclass(frozen=True, eq=False)
class FitModel:
    """Monotone fitted curve.

    knots are the data grid values; params the fitted node values.  Between
    knots the curve is the monotone piecewise cubic through the nodes;
    outside the knot range it continues at the boundary value.
    """

    family: str
    knots: tuple
    params: tuple
    residual: float

    def __post_init__(self):
        kq = np.asarray(self.knots, dtype=np.float64)
        kv = np.asarray(self.params, dtype=np.float64)
        if kq.size != kv.size or kq.size < 2:
            raise InvalidInputError("need at least two fitted nodes")
        object.__setattr__(self, "_interp", PchipInterpolator(kq, kv, extrapolate=False))
        object.__setattr__(self, "_lo", float(kq[0]))
        object.__setattr__(self, "_hi", float(kq[-1]))

    def predict(self, q):
        x = np.clip(np.asarray(q, dtype=np.float64), self._lo, self._hi)
        return np.clip(self._interp(x), 0.0, 100.0)


@dataclass(frozen=True)
class ThresholdResult:
    """Crossing point of one fitted mixedness curve."""

    label: int
    q_star: float
    uncertainty: float

    def __post_init__(self):
        if not 0.0 <= self.q_star <= 1.0:
            raise InvalidInputError(f"q_star {self.q_star} outside [0, 1]")
        if not 0.0 <= self.uncertainty < 0.5:
            raise InvalidInputError(f"implausible uncertainty {self.uncertainty}")


def _parse_points(points, need: int):
    arr = np.asarray([[float(v) for v in row] for row in points], dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < need or arr.shape[1] not in (2, 3):
        raise InvalidInputError(
            f"need >= {need} points of (q, mean[, stderr]), got shape {arr.shape}"
        )
    q, y = arr[:, 0], arr[:, 1]
    se = arr[:, 2] if arr.shape[1] == 3 else np.zeros_like(q)
    if np.any((y < -1e-9) | (y > 100.0 + 1e-9)):
        raise InvalidInputError("means must lie in [0, 100]")
    if np.any(se < 0):
        raise InvalidInputError("stderr values must be non-negative")
    order = np.argsort(q)
    q, y, se = q[order], y[order], se[order]
    if np.any(np.diff(q) <= 0):
        raise InvalidInputError("grid values must be distinct")
    return q, y, se


def _weights(se) -> np.ndarray:
    """1/stderr^2 weights.

    Zero-stderr points (saturated 0% or 100% bins, where the binomial spread
    estimate collapses) are weighted as if they had the smallest nonzero
    stderr in the set: they stay influential without becoming infinitely so.
    """
    w = np.zeros_like(se)
    pos = se > 0
    w[pos] = 1.0 / se[pos] ** 2
    if pos.any():
        w[~pos] = w[pos].max()
    else:
        w[:] = 1.0
    return w


def fit_mixedness_curve(points) -> FitModel:
    """Weighted monotone fit of a (q, mean%, stderr%) curve.

    The 1/stderr^2-weighted isotonic regression of the means gives the node
    values; the reported residual is the unweighted sum of squared
    deviations between nodes and raw means.
    """
    q, y, se = _parse_points(points, need=8)
    if np.ptp(y) == 0.0:
        raise FitDegenerateError("all means are equal; nothing to fit")
    iso = isotonic_regression(y, weights=_weights(se), increasing=True)
    vals = np.clip(np.asarray(iso.x, dtype=np.float64), 0.0, 100.0)
    return FitModel(
        family=FIT_FAMILY,
        knots=tuple(float(v) for v in q),
        params=tuple(float(v) for v in vals),
        residual=float(np.sum((vals - y) ** 2)),
    )


def solve_threshold(fit: FitModel, level: float = 99.9) -> float:
    """Smallest q in [0, 1] with fit(q) = level, by bisection to 1e-6."""
    if not 0.0 < level < 100.0:
        raise InvalidInputError(f"level must be in (0, 100), got {level}")
    if float(fit.predict(1.0)) < level:
        raise NoCrossingError(f"fitted curve stays below {level}% on [0, 1]")
    if float(fit.predict(0.0)) >= level:
        return 0.0
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f = float(fit.predict(mid))
        if abs(f - level) < 1e-6:
            return mid
        if f < level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bootstrap_threshold(points, level: float = 99.9, n_boot: int = 100, rng=None):
    """Mean and spread of the threshold over noisy refits.

    Each replica perturbs every mean by centered Gaussian noise of scale
    stderr (clipped back into [0, 100]) and repeats fit + solve.  Replicas
    whose curve never crosses are dropped; more than 20% drops raises.
    Returns (mean q*, std q*).
    """
    if n_boot < 1:
        raise InvalidInputError("n_boot must be >= 1")
    q, y, se = _parse_points(points, need=8)
    rng = np.random.default_rng(0) if rng is None else rng
    base = np.column_stack([q, y, se])
    solve_threshold(fit_mixedness_curve(base), level)  # fail fast on hopeless input
    hits, dropped = [], 0
    for _ in range(n_boot):
        yy = np.clip(y + rng.normal(size=y.size) * se, 0.0, 100.0)
        try:
            hits.append(solve_threshold(fit_mixedness_curve(np.column_stack([q, yy, se])), level))
        except (NoCrossingError, FitDegenerateError):
            dropped += 1
    if dropped > 0.2 * n_boot:
        raise BootstrapUnstableError(
            f"{dropped}/{n_boot} bootstrap refits failed to cross {level}%"
        )
    hits = np.asarray(hits)
    return float(hits.mean()), float(hits.std())


def _vertex(q, y, lo):
    """Vertex of the parabola through 5 grid points starting at index lo."""
    qw = q[lo : lo + 5]
    yw = y[lo : lo + 5]
    c2, c1, _ = np.polyfit(qw, yw, 2)
    if c2 >= 0.0:
        return None
    v = -c1 / (2.0 * c2)
    return float(min(max(v, qw[0]), qw[-1]))


def locate_max(points, n_boot: int = 100, rng=None):
    """Quadratic-vertex location of an interior maximum, with bootstrap spread.

    points rows are (q, mean) or (q, mean, stderr); the parabola is fitted
    to the 5 grid points around the empirical argmax.  Returns
    (q_at_max, uncertainty).
    """
    arr = np.asarray([[float(v) for v in row] for row in points], dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 5 or arr.shape[1] not in (2, 3):
        raise InvalidInputError("need >= 5 points of (q, mean[, stderr])")
    order = np.argsort(arr[:, 0])
    q = arr[order, 0]
    y = arr[order, 1]
    se = arr[order, 2] if arr.shape[1] == 3 else np.zeros_like(q)
    k = int(np.argmax(y))
    if k in (0, q.size - 1):
        raise NoInteriorMaxError(f"empirical maximum sits at the grid edge q={q[k]}")
    lo = min(max(k - 2, 0), q.size - 5)
    v0 = _vertex(q, y, lo)
    if v0 is None:
        raise NoInteriorMaxError("local quadratic around the argmax is not concave")
    rng = np.random.default_rng(0) if rng is None else rng
    hits, dropped = [], 0
    for _ in range(n_boot):
        yy = y + rng.normal(size=y.size) * se
        kk = int(np.argmax(yy))
        if kk in (0, q.size - 1):
            dropped += 1
            continue
        vv = _vertex(q, yy, min(max(kk - 2, 0), q.size - 5))
        hits.append(q[kk] if vv is None else vv)
    if dropped > 0.2 * n_boot:
        raise BootstrapUnstableError(
            f"{dropped}/{n_boot} bootstrap replicas had no interior maximum"
        )
    return v0, float(np.std(np.asarray(hits)))
