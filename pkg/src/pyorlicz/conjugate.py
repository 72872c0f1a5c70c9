##
# Sobolev conjugates A_sigma = A o H_sigma^-1 with
#   H_sigma(s) = (int_0^s (t/A(t))^{1/(sigma-1)} dt)^{(sigma-1)/sigma}
# built on a cached monotone table of the inner integral.
##

import logging
import math

from dataclasses import dataclass
from typing import Any

import numpy as np

from .const import (
    DIVERGENCE_SLOPE_TOL,
    GAUSS_NODES,
    HAT_GLUE_EXP_MAX,
    HN_NEWTON_STEPS,
    HN_TABLE_KNOTS,
    HN_TABLE_T_MIN,
    HN_VALUE_CEILING,
    MODIFY_EXP_MIN,
    QUAD_RTOL,
    OrliczConstructionException,
    OrliczDomainException,
    OrliczIndeterminateException,
    OrliczIntegral,
    OrliczPreconditionException,
)
from .growth import (
    OrliczGrowth,
    conjugate_growth,
    integral_at_infinity,
    integral_at_zero,
)
from .numerics import (
    HUGE,
    integrate_log,
    log_panels,
    local_slopes,
)
from .young import (
    YoungFunction,
)


_LOGGER = logging.getLogger(__name__)

SLOPE_PROBE_DECADES = 3
SLOPE_PROBE_ZERO = 1e-9     # decades [1e-9, 1e-6] near zero
SLOPE_PROBE_INF = 1e6       # decades [1e6, 1e9] near infinity
EXPONENT_PROBE = 2.0        # ratio of the two points that estimate a local exponent


def _integrand(Y: YoungFunction, sigma: float):
    q = 1.0 / (sigma - 1.0)
    def g(t):
        with np.errstate(all="ignore"):
            return (t / Y(t))**q
    return g


def _local_exponent(g, s: float, ratio: float = EXPONENT_PROBE) -> float:
    a, b = g(np.array([s, s * ratio]))
    with np.errstate(all="ignore"):
        return float(math.log(b / a) / math.log(ratio)) if a > 0 and b > 0 else -math.inf


class OrliczHn:
    """
    Monotone table of I(s) = int_0^s g, g = (t/A(t))^{1/(sigma-1)}, and H = I^{(sigma-1)/sigma}.

    Knots are log-spaced on [1e-30, s_hi] where A(s_hi) reaches 1e300; below and above the table
    the integrand is extended by its local power law.
    """

    def __init__(self, Y: YoungFunction, sigma: float, knots: int = HN_TABLE_KNOTS, rtol: float = QUAD_RTOL):
        self.source = Y
        self.sigma = float(sigma)
        self.exponent = (self.sigma - 1.0) / self.sigma
        self.g = _integrand(Y, self.sigma)

        s_hi = float(np.minimum(Y.inverse(HN_VALUE_CEILING), HUGE))
        if not s_hi > HN_TABLE_T_MIN * 10:
            msg = f"Young function {Y.label} reaches {HN_VALUE_CEILING:g} too early for a conjugate table"
            raise OrliczConstructionException(msg)

        self.knots = np.geomspace(HN_TABLE_T_MIN, s_hi, knots)
        s_lo = self.knots[0]

        # power-law tail near zero
        self.e_lo = _local_exponent(self.g, s_lo)
        if not self.e_lo > -1.0:
            msg = f"Integrand of H for {Y.label} is not integrable at zero (local exponent {self.e_lo:g})"
            raise OrliczPreconditionException(msg)
        self.g_lo = float(self.g(s_lo))
        head = self.g_lo * s_lo / (self.e_lo + 1.0)

        # panels between knots, refined where the halves check disagrees
        lo, hi = self.knots[:-1], self.knots[1:]
        mid = np.sqrt(lo * hi)
        whole = log_panels(self.g, lo, hi, GAUSS_NODES)
        halves = log_panels(self.g, lo, mid, GAUSS_NODES) + log_panels(self.g, mid, hi, GAUSS_NODES)
        bad = ~(np.abs(whole - halves) <= rtol * np.abs(halves)) | ~np.isfinite(halves)
        for i in np.flatnonzero(bad):
            halves[i] = integrate_log(self.g, lo[i], hi[i], rtol)
        if np.any(bad):
            _LOGGER.debug(f"Refined {int(bad.sum())} of {len(lo)} panels of the conjugate table for {Y.label}")

        self.cumul = head + np.concatenate([[0.0], np.cumsum(halves)])

        # power-law tail above the table
        self.s_hi = s_hi
        self.g_hi = float(self.g(s_hi))
        self.e_hi = _local_exponent(self.g, s_hi / EXPONENT_PROBE)
        self.i_hi = float(self.cumul[-1])

        if self.g_hi == 0.0:
            self.i_limit = self.i_hi
        elif self.e_hi < -1.0 - DIVERGENCE_SLOPE_TOL:
            self.i_limit = self.i_hi - self.g_hi * s_hi / (self.e_hi + 1.0)
        else:
            self.i_limit = math.inf
        self.limit = self.i_limit**self.exponent

        _LOGGER.info(f"Built conjugate table for {Y.label} with sigma={self.sigma:g}, s_hi={s_hi:g}, H_limit={self.limit:g}")


    def integral(self, s):
        """I(s) for s >= 0"""
        s = np.asarray(s, dtype=float)
        k = self.knots
        out = np.zeros_like(s)

        below = (s > 0) & (s < k[0])
        with np.errstate(all="ignore"):
            out = np.where(below, self.cumul[0] * (s / k[0])**(self.e_lo + 1.0), out)

        inside = (s >= k[0]) & (s <= k[-1])
        if np.any(inside):
            si = s[inside]
            idx = np.clip(np.searchsorted(k, si, side='right') - 1, 0, len(k) - 2)
            out[inside] = self.cumul[idx] + log_panels(self.g, k[idx], si, GAUSS_NODES)

        above = s > k[-1]
        if np.any(above):
            out[above] = self._upper(s[above])
        return out

    def _upper(self, s):
        if self.g_hi == 0.0:
            return np.full_like(s, self.i_hi)
        scale = self.g_hi * self.s_hi
        e1 = self.e_hi + 1.0
        with np.errstate(all="ignore"):
            if abs(e1) <= DIVERGENCE_SLOPE_TOL:
                return self.i_hi + scale * np.log(s / self.s_hi)
            return self.i_hi + scale * ((s / self.s_hi)**e1 - 1.0) / e1

    def _upper_inverse(self, v):
        if self.g_hi == 0.0:
            return np.where(v <= self.i_hi, self.s_hi, np.inf)
        scale = self.g_hi * self.s_hi
        e1 = self.e_hi + 1.0
        with np.errstate(all="ignore"):
            if abs(e1) <= DIVERGENCE_SLOPE_TOL:
                return self.s_hi * np.exp((v - self.i_hi) / scale)
            base = 1.0 + (v - self.i_hi) * e1 / scale
            return np.where(base > 0, self.s_hi * base**(1.0 / e1), np.inf)

    def integral_inverse(self, v):
        """Smallest s with I(s) >= v"""
        v = np.asarray(v, dtype=float)
        k, c = self.knots, self.cumul
        out = np.zeros_like(v)

        below = (v > 0) & (v < c[0])
        with np.errstate(all="ignore"):
            out = np.where(below, k[0] * (v / c[0])**(1.0 / (self.e_lo + 1.0)), out)

        inside = (v >= c[0]) & (v <= c[-1])
        if np.any(inside):
            vi = v[inside]
            idx = np.clip(np.searchsorted(c, vi, side='right') - 1, 0, len(k) - 2)
            k0, k1, c0, c1 = k[idx], k[idx + 1], c[idx], c[idx + 1]
            with np.errstate(all="ignore"):
                frac = np.log(vi / c0) / np.log(c1 / c0)
            frac = np.where(np.isfinite(frac), np.clip(frac, 0.0, 1.0), 0.0)
            s = np.exp(np.log(k0) + frac * np.log(k1 / k0))
            for _ in range(HN_NEWTON_STEPS):
                gs = self.g(s)
                step = np.where(gs > 0, (c0 + log_panels(self.g, k0, s, GAUSS_NODES) - vi) / np.where(gs > 0, gs, 1.0), 0.0)
                s = np.clip(s - step, k0, k1)
            out[inside] = s

        above = v > c[-1]
        if np.any(above):
            out[above] = self._upper_inverse(v[above])
        return out

    def __call__(self, s):
        arr = np.asarray(s, dtype=float)
        y = self.integral(np.atleast_1d(arr))**self.exponent
        return float(y[0]) if arr.ndim == 0 else y.reshape(arr.shape)

    def inverse(self, t):
        """H^-1(t); infinite at and beyond H_limit"""
        arr = np.asarray(t, dtype=float)
        flat = np.atleast_1d(arr)
        with np.errstate(all="ignore"):
            s = self.integral_inverse(np.maximum(flat, 0.0)**(1.0 / self.exponent))
        s = np.where(flat >= self.limit, np.inf, np.where(flat <= 0, 0.0, s))
        return float(s[0]) if arr.ndim == 0 else s.reshape(arr.shape)


@dataclass
class ConjugateResult:
    Hn: OrliczHn
    An: YoungFunction
    H_limit: float
    classification_zero: OrliczIntegral
    classification_inf: OrliczIntegral
    source: YoungFunction
    sigma: float
    modified: bool = False

    def rows(self, t) -> list[tuple[float, float, float, float]]:
        """(t, A(t), H(t), A_sigma(t)) on the given points"""
        t = np.asarray(t, dtype=float)
        a = self.source(t)
        h = self.Hn(t)
        an = self.An(t)
        return [(float(x), float(y), float(z), float(w)) for x, y, z, w in zip(t, a, h, an)]

    def to_dict(self) -> dict[str,Any]:
        return {
            "source": self.source.to_dict(),
            "sigma": self.sigma,
            "H_limit": self.H_limit if math.isfinite(self.H_limit) else None,
            "classification_zero": str(self.classification_zero),
            "classification_inf": str(self.classification_inf),
            "modified": self.modified,
        }


##
# Classification of the defining integral
##
def _slope_verdict(Y: YoungFunction, sigma: float, at_zero: bool) -> OrliczIntegral:
    g = _integrand(Y, sigma)
    start = SLOPE_PROBE_ZERO if at_zero else SLOPE_PROBE_INF
    t = start * 10.0**np.arange(SLOPE_PROBE_DECADES + 1)
    y = g(t)
    if at_zero and np.any(np.isposinf(y)):
        return OrliczIntegral.DIVERGES
    if not at_zero and np.all(y[1:] == 0):
        return OrliczIntegral.CONVERGES

    slopes = local_slopes(t, y)
    if not np.all(np.isfinite(slopes)):
        return OrliczIntegral.INDETERMINATE

    if at_zero:
        if np.all(slopes < -1.0 - DIVERGENCE_SLOPE_TOL):
            return OrliczIntegral.DIVERGES
        if np.all(slopes > -1.0 + DIVERGENCE_SLOPE_TOL):
            return OrliczIntegral.CONVERGES
    else:
        if np.all(slopes > -1.0 + DIVERGENCE_SLOPE_TOL):
            return OrliczIntegral.DIVERGES
        if np.all(slopes < -1.0 - DIVERGENCE_SLOPE_TOL):
            return OrliczIntegral.CONVERGES
    return OrliczIntegral.INDETERMINATE


def _check_sigma(sigma: float):
    if not sigma > 1:
        msg = f"Exponent must exceed 1, got {sigma}"
        raise OrliczDomainException(msg)


def classify_integral_zero(Y: YoungFunction, n: float) -> OrliczIntegral:
    """Behaviour of int_0 (t/A(t))^{1/(n-1)} dt"""
    _check_sigma(n)
    verdict = integral_at_zero(Y.zero_growth, n)
    if verdict == OrliczIntegral.INDETERMINATE:
        verdict = _slope_verdict(Y, n, at_zero=True)
    return verdict


def classify_integral_inf(Y: YoungFunction, n: float) -> OrliczIntegral:
    """Behaviour of int^infinity (t/A(t))^{1/(n-1)} dt"""
    _check_sigma(n)
    verdict = integral_at_infinity(Y.inf_growth, n)
    if verdict == OrliczIntegral.INDETERMINATE:
        verdict = _slope_verdict(Y, n, at_zero=False)
    return verdict


##
# Conjugates
##
def _conjugate_growths(Y: YoungFunction, sigma: float, limit: float) -> tuple[OrliczGrowth|None, OrliczGrowth|None]:
    zero = None
    g0 = Y.zero_growth
    if g0 is not None and g0.is_poly and g0.eps is None and g0.log == 0 and g0.loglog == 0 and 0 < g0.power < sigma:
        h0 = OrliczGrowth.poly((sigma - g0.power) / sigma)
        zero = g0.compose(h0.inverse())

    if math.isfinite(limit):
        return zero, OrliczGrowth.jump()

    inf = None
    try:
        h = conjugate_growth(Y.inf_growth, sigma) if Y.inf_growth is not None else None
        if h is not None and not h.is_bounded:
            inf = Y.inf_growth.compose(h.inverse())
    except OrliczIndeterminateException as ex:
        _LOGGER.debug(f"Growth of the conjugate of {Y.label} not tracked: {ex}")
    return zero, inf


def sobolev_conjugate_sigma(Y: YoungFunction, sigma: float, n: int = 2) -> ConjugateResult:
    """
    A_sigma = A o H_sigma^-1 for sigma >= n.
    A whose defining integral diverges at zero is first replaced near zero by a linear chord.
    """
    if n < 2:
        msg = f"Dimension must be at least 2, got {n}"
        raise OrliczDomainException(msg)
    if sigma < n:
        msg = f"Exponent sigma={sigma:g} must not be below the dimension {n}"
        raise OrliczDomainException(msg)

    zero = classify_integral_zero(Y, sigma)
    if zero == OrliczIntegral.INDETERMINATE:
        msg = f"Cannot decide the integral at zero for {Y.label} with sigma={sigma:g}"
        raise OrliczIndeterminateException(msg)

    source = Y
    modified = zero == OrliczIntegral.DIVERGES
    if modified:
        source = Y.modify_near_zero(n)
        _LOGGER.info(f"Integral at zero diverges for {Y.label}, using {source.label}")

    inf = classify_integral_inf(source, sigma)
    if inf == OrliczIntegral.INDETERMINATE:
        msg = f"Cannot decide the integral at infinity for {Y.label} with sigma={sigma:g}"
        raise OrliczIndeterminateException(msg)

    hn = OrliczHn(source, sigma)
    limit = math.inf if inf == OrliczIntegral.DIVERGES else hn.limit
    zero_growth, inf_growth = _conjugate_growths(source, sigma, limit)

    An = YoungFunction.custom(
        lambda t: source(hn.inverse(t)),
        zero_growth,
        inf_growth,
        lambda s: hn(source.inverse(s)),
        f"conjugate({source.label},{sigma:g})",
        limit if math.isfinite(limit) else None,
    )
    return ConjugateResult(hn, An, limit, zero, inf, Y, float(sigma), modified)


def sobolev_conjugate(Y: YoungFunction, n: int) -> ConjugateResult:
    return sobolev_conjugate_sigma(Y, n, n)


def H_n(Y: YoungFunction, n: int, s):
    if n < 2:
        msg = f"Dimension must be at least 2, got {n}"
        raise OrliczDomainException(msg)
    if classify_integral_zero(Y, n) != OrliczIntegral.CONVERGES:
        msg = f"Integral at zero does not converge for {Y.label}; modify it near zero first"
        raise OrliczPreconditionException(msg)
    if np.any(np.asarray(s, dtype=float) < 0):
        msg = "H_n is defined for non-negative arguments"
        raise OrliczDomainException(msg)
    return OrliczHn(Y, n)(s)


def hat_An(Y: YoungFunction, n: int) -> YoungFunction:
    """
    Y near zero, A_n near infinity. The glue point is the first dyadic t* >= 1 (then below 1) where A_n
    is finite with a slope at least that of Y; the A_n part is shifted to meet Y continuously.
    """
    result = sobolev_conjugate(Y, n)
    An = result.An

    candidates = list(range(0, HAT_GLUE_EXP_MAX + 1)) + list(range(-1, MODIFY_EXP_MIN - 1, -1))
    for j in candidates:
        t_star = 2.0**j
        y, an = Y(t_star), An(t_star)
        if not (math.isfinite(an) and math.isfinite(y)):
            continue
        if Y.slope(t_star) <= An.slope(t_star) and math.isfinite(An.slope(t_star)):
            break
    else:
        msg = f"No glue point between {Y.label} and its conjugate"
        raise OrliczConstructionException(msg)

    shift = an - y
    if shift == 0.0:
        tail = An
    else:
        tail = YoungFunction.custom(
            lambda t: An(t) - shift,
            An.zero_growth,
            An.inf_growth,
            lambda s: An.inverse(np.asarray(s, dtype=float) + shift),
            f"{An.label}-{shift:g}",
            An.finite_jump,
        )
    _LOGGER.debug(f"Glued {Y.label} to its conjugate at {t_star:g}")
    return YoungFunction.glued(Y, tail, t_star)
