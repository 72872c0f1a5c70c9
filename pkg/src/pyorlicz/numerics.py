##
# Numerical building blocks shared by the Young function calculus:
# vectorized monotone inversion, Gauss-Legendre panels on a log axis, grids and trend detection
##

import functools
import logging
import math
import os

import numpy as np

from .const import (
    ENV_THREADS,
    GAUSS_NODES,
    GRID_PER_DECADE,
    INVERSE_MAX_DOUBLINGS,
    INVERSE_MAX_ITER,
    INVERSE_RTOL,
    PANEL_MAX_SPLITS,
    QUAD_RTOL,
    OrliczConfigException,
    OrliczQuadratureException,
)


_LOGGER = logging.getLogger(__name__)

TINY = 1e-300
HUGE = 1e300
STEP = 16.0                     # bracket widening factor


def log_grid(lo: float, hi: float, per_decade: int = GRID_PER_DECADE, points: int|None = None) -> np.ndarray:
    """Geometric grid on [lo, hi], both ends included"""
    if points is None:
        points = max(2, int(math.ceil(math.log10(hi / lo) * per_decade)) + 1)
    return np.geomspace(lo, hi, points)


@functools.lru_cache(maxsize=None)
def gauss_legendre(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]"""
    return np.polynomial.legendre.leggauss(nodes)


def round_up(x: float, digits: int = 6) -> float:
    """Round up to the given number of significant digits"""
    if x is None or not math.isfinite(x) or x <= 0:
        return x
    r = float(f"{x:.{digits-1}e}")
    if r < x:
        e = math.floor(math.log10(x)) - digits + 1
        r = float(f"{r + 10.0**e:.{digits-1}e}")
    return r


def generalized_inverse(func, values, rtol: float = INVERSE_RTOL, max_iter: int = INVERSE_MAX_ITER) -> np.ndarray:
    """
    Vectorized inf{x > 0 : func(x) > value} for a non-decreasing func.

    func receives an array shaped like values and must evaluate elementwise.
    The bracket starts at 1 and is widened geometrically inside [1e-300, 1e300];
    returns 0 when func exceeds the value everywhere and inf when it never does.
    """
    values = np.asarray(values, dtype=float)
    target = np.atleast_1d(values).astype(float)

    lo = np.ones_like(target)
    hi = np.ones_like(target)
    with np.errstate(all="ignore"):
        above = func(hi) > target

        # widen upward where func(1) <= value
        grow = ~above
        for _ in range(INVERSE_MAX_DOUBLINGS // 4):
            if not grow.any():
                break
            hi = np.where(grow, hi * STEP, hi)
            grow = grow & ~(func(hi) > target) & (hi < HUGE)
        never = ~(func(hi) > target)
        lo = np.where(~above, hi / STEP, lo)

        # widen downward where func(1) > value
        shrink = above.copy()
        for _ in range(INVERSE_MAX_DOUBLINGS // 4):
            if not shrink.any():
                break
            lo = np.where(shrink, lo / STEP, lo)
            shrink = shrink & (func(lo) > target) & (lo > TINY)
        always = func(lo) > target
        hi = np.where(above, np.minimum(hi, lo * STEP), hi)

        active = ~(never | always)
        for _ in range(max_iter):
            todo = active & (hi > lo * (1.0 + rtol))
            if not todo.any():
                break
            mid = np.sqrt(lo * hi)
            ok = func(mid) > target
            hi = np.where(todo & ok, mid, hi)
            lo = np.where(todo & ~ok, mid, lo)

    result = np.where(never, np.inf, np.where(always, 0.0, hi))
    result = np.where(np.isposinf(target), np.inf, result)
    return result.reshape(values.shape)


def bisect_geometric(pred, lo, hi, rtol: float = INVERSE_RTOL, max_iter: int = INVERSE_MAX_ITER) -> np.ndarray:
    """
    Vectorized geometric bisection on a bracket [lo, hi] with 0 < lo.

    pred(x) is True on the upper part of the bracket. Returns the upper end.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    lo = lo.copy()
    hi = hi.copy()
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            todo = hi > lo * (1.0 + rtol)
            if not todo.any():
                break
            mid = np.sqrt(lo * hi)
            ok = pred(mid)
            hi = np.where(todo & ok, mid, hi)
            lo = np.where(todo & ~ok, mid, lo)
    return hi


def log_panels(g, lo, hi, nodes: int = GAUSS_NODES) -> np.ndarray:
    """Gauss-Legendre estimates of the integral of g over each [lo_i, hi_i], on the log axis"""
    x, w = gauss_legendre(nodes)
    la = np.log(np.asarray(lo, dtype=float))
    lb = np.log(np.asarray(hi, dtype=float))
    half = 0.5 * (lb - la)
    mid = 0.5 * (lb + la)
    t = np.exp(mid[..., None] + half[..., None] * x)
    with np.errstate(all="ignore"):
        vals = g(t) * t
    return np.sum(vals * w, axis=-1) * half


def integrate_log(g, a: float, b: float, rtol: float = QUAD_RTOL, nodes: int = GAUSS_NODES,
                  max_splits: int = PANEL_MAX_SPLITS) -> float:
    """
    Adaptive integral of g over [a, b], 0 < a < b, with panels on the log axis.

    A panel is accepted when its estimate agrees with the sum over its two halves.
    """
    if b <= a:
        return 0.0

    edges = log_grid(a, b, per_decade=1)
    lo = edges[:-1]
    hi = edges[1:]
    total = 0.0
    for _ in range(max_splits):
        mid = np.sqrt(lo * hi)
        whole = log_panels(g, lo, hi, nodes)
        halves = log_panels(g, lo, mid, nodes) + log_panels(g, mid, hi, nodes)
        if not np.all(np.isfinite(halves)):
            msg = f"Integrand is not finite on [{a:g}, {b:g}]"
            raise OrliczQuadratureException(msg)

        ok = np.abs(whole - halves) <= rtol * np.abs(halves) + TINY
        total += float(np.sum(halves[ok]))
        if ok.all():
            return total

        lo, hi = np.concatenate([lo[~ok], mid[~ok]]), np.concatenate([mid[~ok], hi[~ok]])

    rest = float(np.sum(log_panels(g, lo, hi, nodes)))
    _LOGGER.warning(f"Log-axis quadrature on [{a:g}, {b:g}] stopped after {max_splits} splits with {len(lo)} open panels")
    return total + rest


def local_slopes(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """d log y / d log t between consecutive points"""
    with np.errstate(all="ignore"):
        return np.diff(np.log(y)) / np.diff(np.log(t))


def fitted_exponent(t: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log y against log t"""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = np.isfinite(y) & (y > 0)
    if ok.sum() < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(t[ok]), np.log(y[ok]), 1)
    return float(slope)


def decade_ratio(t: np.ndarray, y: np.ndarray, at_end: bool = True, decades: float = 1.0) -> float:
    """Ratio between the value at one end of a grid and the value the given number of decades inward"""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if at_end:
        inner = t[-1] / 10.0**decades
        idx = int(np.searchsorted(t, inner))
        ref, end = y[min(idx, len(y) - 1)], y[-1]
    else:
        inner = t[0] * 10.0**decades
        idx = int(np.searchsorted(t, inner))
        ref, end = y[min(idx, len(y) - 1)], y[0]
    with np.errstate(all="ignore"):
        return float(end / ref)


def is_nonincreasing(values, rtol: float = 1e-9) -> bool:
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        return True
    return bool(np.all(values[1:] <= values[:-1] * (1.0 + rtol) + TINY))


def worker_count() -> int|None:
    """Thread count for parallel sub-jobs, None lets the executor decide"""
    raw = os.environ.get(ENV_THREADS)
    if raw is None or raw.strip() == "":
        return None
    try:
        count = int(raw)
    except ValueError:
        msg = f"Environment variable {ENV_THREADS} must be an integer, got '{raw}'"
        raise OrliczConfigException(msg)
    if count < 1:
        msg = f"Environment variable {ENV_THREADS} must be at least 1, got {count}"
        raise OrliczConfigException(msg)
    return count
