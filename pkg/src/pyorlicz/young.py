##
# One-dimensional Young functions: parametric families, glued and piecewise functions and
# black-box evaluators, together with Delta2, equivalence and the near-zero modification.
##

import logging
import math

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .const import (
    COMPARE_RTOL,
    EQUIV_C_MAX,
    GRID_PER_DECADE,
    GRID_T_MAX,
    GRID_T_MIN,
    MODIFY_EXP_MAX,
    MODIFY_EXP_MIN,
    PROBE_POINTS,
    PROBE_TOL,
    REGIME_CUTOFF,
    TREND_FACTOR,
    OrliczConfigException,
    OrliczConstructionException,
    OrliczDomainException,
    OrliczGrowthKind,
    OrliczIndeterminateException,
    OrliczKind,
    OrliczRegimeTag,
)
from .growth import (
    OrliczGrowth,
)
from .numerics import (
    bisect_geometric,
    decade_ratio,
    generalized_inverse,
    log_grid,
    round_up,
)


_LOGGER = logging.getLogger(__name__)

SLOPE_STEP = 1e-6       # relative step of one-sided difference quotients


@dataclass(frozen=True)
class Regime:
    tag: OrliczRegimeTag = OrliczRegimeTag.GLOBAL
    t0: float = REGIME_CUTOFF

    def __post_init__(self):
        if not (self.t0 > 0 and math.isfinite(self.t0)):
            msg = f"Regime cutoff must be a positive number, got {self.t0}"
            raise OrliczDomainException(msg)

    @staticmethod
    def global_():
        return Regime(OrliczRegimeTag.GLOBAL)

    @staticmethod
    def near_zero(t0: float = REGIME_CUTOFF):
        return Regime(OrliczRegimeTag.NEAR_ZERO, t0)

    @staticmethod
    def near_infinity(t0: float = REGIME_CUTOFF):
        return Regime(OrliczRegimeTag.NEAR_INFINITY, t0)

    @staticmethod
    def from_str(s: str):
        """'global', 'near_zero' or 'near_infinity', optionally followed by ':t0'"""
        tag, _, t0 = s.partition(':')
        try:
            cutoff = float(t0) if t0 else REGIME_CUTOFF
        except ValueError:
            msg = f"Invalid regime cutoff in '{s}'"
            raise OrliczConfigException(msg)
        return Regime(OrliczRegimeTag.from_str(tag), cutoff)

    @property
    def bounds(self) -> tuple[float, float]:
        match self.tag:
            case OrliczRegimeTag.NEAR_ZERO:
                return (min(GRID_T_MIN, self.t0 / 10.0), self.t0)
            case OrliczRegimeTag.NEAR_INFINITY:
                return (self.t0, max(GRID_T_MAX, self.t0 * 10.0))
            case _:
                return (GRID_T_MIN, GRID_T_MAX)

    def grid(self, per_decade: int = GRID_PER_DECADE) -> np.ndarray:
        lo, hi = self.bounds
        return log_grid(lo, hi, per_decade)

    def __str__(self):
        if self.tag == OrliczRegimeTag.GLOBAL:
            return str(self.tag)
        return f"{self.tag}:{self.t0:g}"


@dataclass
class OrliczVerdict:
    """Outcome of a Delta2 or equivalence decision"""
    holds: bool
    constant: float|None = None
    witness: float|None = None
    analytic: bool = False

    def to_dict(self) -> dict[str,Any]:
        return {
            "holds": self.holds,
            "constant": self.constant,
            "witness": self.witness,
            "analytic": self.analytic,
        }


def _as_output(t, y):
    if np.ndim(t) == 0:
        return float(y)
    return y


@dataclass(frozen=True)
class YoungFunction:
    kind: OrliczKind
    params: tuple = ()
    zero_growth: OrliczGrowth|None = None
    inf_growth: OrliczGrowth|None = None
    finite_jump: float|None = None
    label: str|None = None
    evaluator: Callable = field(default=None, compare=False, repr=False)
    inverter: Callable|None = field(default=None, compare=False, repr=False)

    ##
    # Constructors
    ##
    @staticmethod
    def power(p: float):
        p = float(p)
        if not p > 0:
            msg = f"Power exponent must be positive, got {p}"
            raise OrliczDomainException(msg)
        if p < 1:
            _LOGGER.warning(f"Power exponent {p:g} below 1 does not give a convex function")

        growth = OrliczGrowth.poly(p)
        return YoungFunction(
            OrliczKind.POWER, (p,), growth, growth, None, f"power:{p:g}",
            lambda t: t**p,
            lambda s: s**(1.0 / p),
        )

    @staticmethod
    def linear():
        growth = OrliczGrowth.poly(1.0)
        return YoungFunction(
            OrliczKind.LINEAR, (), growth, growth, None, "linear",
            lambda t: t * 1.0,
            lambda s: s * 1.0,
        )

    @staticmethod
    def power_log(p: float, alpha: float, c: float|None = None):
        """t^p log^alpha(c + t); c defaults to 1, or e when alpha is negative"""
        p, alpha = float(p), float(alpha)
        if c is None:
            c = 1.0 if alpha >= 0 else math.e
        c = float(c)
        if not p > 0 or c < 1.0:
            msg = f"Invalid log-power parameters p={p}, c={c}"
            raise OrliczDomainException(msg)
        if alpha < 0 and c <= 1.0:
            msg = f"Negative log order {alpha} needs c > 1, got c={c}"
            raise OrliczDomainException(msg)

        if c == 1.0:
            func = lambda t: t**p * np.log1p(t)**alpha
            zero = OrliczGrowth.poly(p + alpha)
        else:
            func = lambda t: t**p * np.log(c + t)**alpha
            zero = OrliczGrowth.poly(p)
        return YoungFunction(
            OrliczKind.POWER_LOG, (p, alpha, c), zero, OrliczGrowth.poly(p, alpha), None,
            f"powerlog:{p:g},{alpha:g},{c:g}",
            func,
        )

    @staticmethod
    def power_loglog(p: float, alpha: float, c: float|None = None):
        """t^p (log log(c + t))^alpha; c defaults to e, or e^2 when alpha is negative"""
        p, alpha = float(p), float(alpha)
        if c is None:
            c = math.e if alpha >= 0 else math.e**2
        c = float(c)
        if not p > 0 or c < math.e:
            msg = f"Invalid log-log-power parameters p={p}, c={c}"
            raise OrliczDomainException(msg)
        if alpha < 0 and c <= math.e:
            msg = f"Negative log-log order {alpha} needs c > e, got c={c}"
            raise OrliczDomainException(msg)

        if c == math.e:
            func = lambda t: t**p * np.log1p(np.log1p(t / math.e))**alpha
            zero = OrliczGrowth.poly(p + alpha)
        else:
            func = lambda t: t**p * np.log(np.log(c + t))**alpha
            zero = OrliczGrowth.poly(p)
        return YoungFunction(
            OrliczKind.POWER_LOGLOG, (p, alpha, c), zero, OrliczGrowth.poly(p, 0.0, alpha), None,
            f"powerloglog:{p:g},{alpha:g},{c:g}",
            func,
        )

    @staticmethod
    def exp(alpha: float, shift: float = 0.0):
        """exp((t + shift)^alpha) - exp(shift^alpha)"""
        alpha, shift = float(alpha), float(shift)
        if not alpha > 0 or shift < 0:
            msg = f"Invalid exponential parameters alpha={alpha}, shift={shift}"
            raise OrliczDomainException(msg)

        if shift == 0.0:
            if alpha < 1:
                _LOGGER.warning(f"Exponential order {alpha:g} below 1 without shift is not convex near zero")
            func = lambda t: np.expm1(t**alpha)
            inv = lambda s: np.log1p(s)**(1.0 / alpha)
            zero = OrliczGrowth.poly(alpha)
        else:
            base = math.exp(shift**alpha)
            func = lambda t: np.exp((t + shift)**alpha) - base
            inv = lambda s: np.maximum(np.log(s + base)**(1.0 / alpha) - shift, 0.0)
            zero = OrliczGrowth.poly(1.0)
        return YoungFunction(
            OrliczKind.EXP, (alpha, shift), zero, OrliczGrowth.exp(alpha), None,
            f"exp:{alpha:g},{shift:g}" if shift else f"exp:{alpha:g}",
            func, inv,
        )

    @staticmethod
    def exp_neg_inv(alpha: float):
        """
        exp(-t^-alpha) near zero, continued by its tangent line from
        half the last point of convexity onward.
        """
        alpha = float(alpha)
        if not alpha > 0:
            msg = f"Exponent of exp(-t^-alpha) must be positive, got {alpha}"
            raise OrliczDomainException(msg)

        tg = 0.5 * (alpha / (alpha + 1.0))**(1.0 / alpha)
        fg = math.exp(-tg**(-alpha))
        slope = alpha * tg**(-alpha - 1.0) * fg

        def func(t):
            return np.where(t <= tg, np.exp(-t**(-alpha)), fg + slope * (t - tg))

        def inv(s):
            near = (-np.log(np.minimum(s, fg)))**(-1.0 / alpha)
            return np.where(s <= 0, 0.0, np.where(s < fg, near, tg + (s - fg) / slope))

        return YoungFunction(
            OrliczKind.EXP_NEG_INV, (alpha,), OrliczGrowth.exp_neg(alpha), OrliczGrowth.poly(1.0), None,
            f"expneginv:{alpha:g}",
            func, inv,
        )

    @staticmethod
    def piecewise(branches):
        """
        Piecewise linear function from (breakpoint, value, slope) triples.
        The branch starting at b covers (b, next b]; value inf marks the jump to infinity.
        """
        rows = tuple((float(b), float(v), float(m)) for b, v, m in branches)
        if not rows or rows[0][0] != 0.0 or rows[0][1] != 0.0:
            msg = "Piecewise function must start with a branch at 0 with value 0"
            raise OrliczDomainException(msg)
        if any(r1[0] <= r0[0] for r0, r1 in zip(rows, rows[1:])):
            msg = "Piecewise breakpoints must be strictly increasing"
            raise OrliczDomainException(msg)
        if any(m < 0 for _, _, m in rows):
            msg = "Piecewise slopes must be non-negative"
            raise OrliczDomainException(msg)

        bs = np.array([r[0] for r in rows])
        vs = np.array([r[1] for r in rows])
        ms = np.array([r[2] for r in rows])

        def func(t):
            idx = np.clip(np.searchsorted(bs, t, side='left') - 1, 0, len(bs) - 1)
            return np.where(np.isinf(vs[idx]), np.inf, vs[idx] + ms[idx] * (t - bs[idx]))

        def inv_one(s):
            for i, (b, v, m) in enumerate(rows):
                if math.isinf(v) or s < v:
                    return b
                end = rows[i + 1][0] if i + 1 < len(rows) else math.inf
                top = v + m * (end - b) if m > 0 else v
                if m > 0 and s < top:
                    return b + (s - v) / m
            return math.inf

        def inv(s):
            return np.vectorize(inv_one, otypes=[float])(s)

        zero = OrliczGrowth.poly(1.0) if rows[0][2] > 0 else OrliczGrowth.flat()
        jump = next((b for b, v, _ in rows if math.isinf(v)), None)
        if jump is not None:
            inf = OrliczGrowth.jump()
        elif rows[-1][2] > 0:
            inf = OrliczGrowth.poly(1.0)
        else:
            _LOGGER.warning("Piecewise function is bounded and therefore not a Young function")
            inf = OrliczGrowth.bounded()

        label = "piecewise:" + ";".join(f"{b:g},{v:g},{m:g}" for b, v, m in rows)
        return YoungFunction(OrliczKind.PIECEWISE, rows, zero, inf, jump, label, func, inv)

    @staticmethod
    def glued(near_zero: 'YoungFunction', near_infinity: 'YoungFunction', t_star: float):
        """near_zero on [0, t_star], near_infinity beyond"""
        t_star = float(t_star)
        if not t_star > 0:
            msg = f"Glue point must be positive, got {t_star}"
            raise OrliczDomainException(msg)

        def func(t):
            return np.where(t <= t_star, near_zero(t), near_infinity(t))

        level = float(near_zero(t_star))

        def inv(s):
            s = np.asarray(s, dtype=float)
            low = np.minimum(near_zero.inverse(np.minimum(s, level)), t_star)
            high = np.maximum(near_infinity.inverse(s), t_star)
            return np.where(s < level, low, high)

        jump = near_infinity.finite_jump
        if jump is not None and jump < t_star:
            jump = near_zero.finite_jump
        label = f"glued:{near_zero.label}|{near_infinity.label}|{t_star:g}"
        return YoungFunction(
            OrliczKind.GLUED, (near_zero, near_infinity, t_star),
            near_zero.zero_growth, near_infinity.inf_growth, jump, label,
            func, inv,
        )

    @staticmethod
    def custom(evaluator: Callable, zero_growth: OrliczGrowth|None = None, inf_growth: OrliczGrowth|None = None,
               inverse: Callable|None = None, label: str|None = None, finite_jump: float|None = None):
        """Black-box Young function; the evaluator must accept numpy arrays"""
        return YoungFunction(
            OrliczKind.CUSTOM, (), zero_growth, inf_growth, finite_jump, label or "custom",
            evaluator, inverse,
        )

    ##
    # Evaluation
    ##
    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            y = np.broadcast_to(np.asarray(self.evaluator(arr), dtype=float), arr.shape)
        y = np.where(arr == 0, 0.0, y)
        return _as_output(t, y)

    def eval(self, t):
        """A(t) for t >= 0, +inf allowed"""
        if np.any(np.asarray(t, dtype=float) < 0):
            msg = f"Young function {self.label} evaluated at negative argument"
            raise OrliczDomainException(msg)
        return self(t)

    def inverse(self, s):
        """Right-continuous generalized inverse inf{t >= 0 : A(t) > s}"""
        arr = np.asarray(s, dtype=float)
        if self.inverter is not None:
            with np.errstate(all="ignore"):
                y = np.asarray(self.inverter(np.maximum(arr, 0.0)), dtype=float)
            y = np.where(np.isposinf(arr), np.inf, y)
        else:
            y = generalized_inverse(self, arr)
        y = np.where(arr < 0, 0.0, y)
        return _as_output(s, y)

    def slope(self, t, step: float = SLOPE_STEP):
        """One-sided right difference quotient"""
        arr = np.asarray(t, dtype=float)
        h = arr * step
        with np.errstate(all="ignore"):
            y = (self(arr + h) - self(arr)) / h
        return _as_output(t, y)

    @property
    def zero_exponent(self) -> float|None:
        g = self.zero_growth
        return g.power if g is not None and g.is_poly else None

    @property
    def inf_exponent(self) -> float|None:
        g = self.inf_growth
        return g.power if g is not None and g.is_poly else None

    def growth_on(self, regime: Regime) -> list[OrliczGrowth|None]:
        match regime.tag:
            case OrliczRegimeTag.NEAR_ZERO:
                return [self.zero_growth]
            case OrliczRegimeTag.NEAR_INFINITY:
                return [self.inf_growth]
            case _:
                return [self.zero_growth, self.inf_growth]

    def is_identical(self, other: 'YoungFunction') -> bool:
        if self is other:
            return True
        return self.kind != OrliczKind.CUSTOM and self == other

    ##
    # Properties
    ##
    def check_delta2(self, regime: Regime|None = None) -> OrliczVerdict:
        """A(2t) <= c A(t) on the regime"""
        regime = regime or Regime.global_()
        t = regime.grid()
        with np.errstate(all="ignore"):
            a = self(t)
            ratio = self(2.0 * t) / a
        ratio = np.where((a == 0) & (self(2.0 * t) == 0), np.nan, ratio)
        finite = np.isfinite(a) & ~np.isnan(ratio)
        if not np.any(finite):
            msg = f"Young function {self.label} vanishes on the probed regime {regime}"
            raise OrliczIndeterminateException(msg)

        known = [_delta2_of_growth(g) for g in self.growth_on(regime)]
        if any(k is False for k in known):
            witness = _argmax_finite(t, ratio, finite)
            _LOGGER.debug(f"Delta2 fails for {self.label} on {regime} by growth class")
            return OrliczVerdict(False, None, witness, True)

        if all(k is True for k in known):
            if self.kind == OrliczKind.POWER:
                return OrliczVerdict(True, 2.0**self.params[0], None, True)
            return OrliczVerdict(True, round_up(float(np.nanmax(ratio[finite]))), None, True)

        # black box: unbounded ratios or a growing trend at the open ends
        r = np.where(finite, ratio, np.nan)
        if np.any(np.isposinf(r)):
            return OrliczVerdict(False, None, float(t[np.isposinf(r)][0]), False)
        ends = []
        if regime.tag != OrliczRegimeTag.NEAR_ZERO:
            ends.append(True)
        if regime.tag != OrliczRegimeTag.NEAR_INFINITY:
            ends.append(False)
        ok = ~np.isnan(r)
        for at_end in ends:
            if decade_ratio(t[ok], r[ok], at_end=at_end) > TREND_FACTOR:
                return OrliczVerdict(False, None, _argmax_finite(t, ratio, finite), False)
        return OrliczVerdict(True, round_up(float(np.nanmax(r))), None, False)


    def equivalent(self, other: 'YoungFunction', regime: Regime|None = None, c_max: float = EQUIV_C_MAX) -> OrliczVerdict:
        """Smallest c with A(t/c) <= B(t) <= A(ct) on the regime"""
        regime = regime or Regime.global_()
        if self.is_identical(other):
            return OrliczVerdict(True, 1.0, None, True)

        t = regime.grid()
        with np.errstate(all="ignore"):
            b = other(t)
            a = self(t)
            log_gap = np.abs(np.log(a / b))

        parametric = True
        for mine, theirs in zip(self.growth_on(regime), other.growth_on(regime)):
            if mine is None or theirs is None:
                parametric = False
                continue
            try:
                order = mine.compare(theirs)
            except OrliczIndeterminateException:
                parametric = False
                continue
            if order != 0:
                witness = _argmax_finite(t, log_gap, np.isfinite(log_gap))
                return OrliczVerdict(False, None, witness, True)

        def fits(c: float) -> bool:
            with np.errstate(all="ignore"):
                lower = self(t / c) <= b * (1.0 + COMPARE_RTOL)
                upper = b <= self(c * t) * (1.0 + COMPARE_RTOL)
            return bool(np.all(lower & upper))

        if fits(1.0):
            return OrliczVerdict(True, 1.0, None, parametric)

        if not fits(c_max):
            if not parametric:
                msg = f"Equivalence of {self.label} and {other.label} inconclusive up to c={c_max:g}"
                raise OrliczIndeterminateException(msg)
            witness = _argmax_finite(t, log_gap, np.isfinite(log_gap))
            return OrliczVerdict(False, None, witness, False)

        c = bisect_geometric(np.vectorize(fits, otypes=[bool]), 1.0, c_max)
        return OrliczVerdict(True, round_up(float(c)), None, parametric)


    def is_nondegenerate(self) -> bool:
        """A(t) > 0 for every t > 0"""
        g = self.zero_growth
        if g is not None:
            return g.kind != OrliczGrowthKind.FLAT
        return bool(self(GRID_T_MIN) > 0)


    def modify_near_zero(self, n: int) -> 'YoungFunction':
        """
        Replace the function near zero by the linear chord through (t*, A(t*)), where t* is the first dyadic
        point with a finite positive value and a chord slope not above the right slope.
        """
        if n < 2:
            msg = f"Dimension must be at least 2, got {n}"
            raise OrliczDomainException(msg)

        for j in range(MODIFY_EXP_MIN, MODIFY_EXP_MAX + 1):
            t_star = 2.0**j
            y = self(t_star)
            if not (0 < y < math.inf):
                continue
            if y / t_star <= self.slope(t_star) * (1.0 + PROBE_TOL):
                chord = YoungFunction.piecewise([(0.0, 0.0, y / t_star)])
                _LOGGER.debug(f"Modified {self.label} near zero with glue point {t_star:g}")
                return YoungFunction.glued(chord, self, t_star)

        msg = f"No glue point for {self.label} in [2^{MODIFY_EXP_MIN}, 2^{MODIFY_EXP_MAX}]"
        raise OrliczConstructionException(msg)

    ##
    # Axiom probes on a log grid
    ##
    def check_convexity(self, points: int = PROBE_POINTS) -> bool:
        t = log_grid(GRID_T_MIN, GRID_T_MAX, points=points)
        s, u = np.meshgrid(t, t, indexing='ij')
        pairs = s < u
        with np.errstate(all="ignore"):
            a_s, a_u, a_mid = self(s), self(u), self(0.5 * (s + u))
        finite = pairs & np.isfinite(a_u)
        ok = a_mid <= 0.5 * (a_s + a_u) + PROBE_TOL * (1.0 + a_u)
        if np.all(ok[finite]):
            return True
        bad = np.argwhere(finite & ~ok)[0]
        _LOGGER.warning(f"Convexity probe of {self.label} fails between {s[tuple(bad)]:g} and {u[tuple(bad)]:g}")
        return False

    def check_incr(self, points: int = PROBE_POINTS) -> bool:
        """A(t)/t non-decreasing where finite"""
        t = log_grid(GRID_T_MIN, GRID_T_MAX, points=points)
        q = self(t) / t
        q = q[np.isfinite(q)]
        return bool(np.all(q[1:] >= q[:-1] * (1.0 - PROBE_TOL)))

    def check_alambda(self, lambdas=(1.0, 2.0, 10.0, 1e3), points: int = PROBE_POINTS) -> bool:
        """lambda A(t) <= A(lambda t) for lambda >= 1 where A(t) is finite"""
        t = log_grid(GRID_T_MIN, GRID_T_MAX, points=points)
        a = self(t)
        finite = np.isfinite(a)
        for lam in lambdas:
            with np.errstate(all="ignore"):
                ok = lam * a <= self(lam * t) * (1.0 + PROBE_TOL)
            if not np.all(ok[finite]):
                return False
        return True

    ##
    # Serialization
    ##
    def to_dict(self) -> dict[str,Any]:
        match self.kind:
            case OrliczKind.POWER:
                return {"kind": str(self.kind), "p": self.params[0]}
            case OrliczKind.LINEAR:
                return {"kind": str(self.kind)}
            case OrliczKind.POWER_LOG | OrliczKind.POWER_LOGLOG:
                p, alpha, c = self.params
                return {"kind": str(self.kind), "p": p, "alpha": alpha, "c": c}
            case OrliczKind.EXP:
                alpha, shift = self.params
                return {"kind": str(self.kind), "alpha": alpha, "shift": shift}
            case OrliczKind.EXP_NEG_INV:
                return {"kind": str(self.kind), "alpha": self.params[0]}
            case OrliczKind.PIECEWISE:
                return {"kind": str(self.kind), "branches": [[b, "inf" if math.isinf(v) else v, m] for b, v, m in self.params]}
            case OrliczKind.GLUED:
                near_zero, near_infinity, t_star = self.params
                return {"kind": str(self.kind), "near_zero": near_zero.to_dict(), "near_infinity": near_infinity.to_dict(), "t_star": t_star}
            case _:
                return {"kind": str(self.kind), "label": self.label}

    @staticmethod
    def from_dict(d: dict):
        """Parametric record to function, None when the record is not valid"""
        if not isinstance(d, dict):
            return None
        kind = OrliczKind.from_str(str(d.get('kind', '')), default="")
        try:
            match kind:
                case OrliczKind.POWER:
                    return YoungFunction.power(d['p'])
                case OrliczKind.LINEAR:
                    return YoungFunction.linear()
                case OrliczKind.POWER_LOG:
                    return YoungFunction.power_log(d['p'], d['alpha'], d.get('c', None))
                case OrliczKind.POWER_LOGLOG:
                    return YoungFunction.power_loglog(d['p'], d['alpha'], d.get('c', None))
                case OrliczKind.EXP:
                    return YoungFunction.exp(d['alpha'], d.get('shift', 0.0))
                case OrliczKind.EXP_NEG_INV:
                    return YoungFunction.exp_neg_inv(d['alpha'])
                case OrliczKind.PIECEWISE:
                    return YoungFunction.piecewise([(b, float(v), m) for b, v, m in d['branches']])
                case OrliczKind.GLUED:
                    near_zero = YoungFunction.from_dict(d['near_zero'])
                    near_infinity = YoungFunction.from_dict(d['near_infinity'])
                    if near_zero is None or near_infinity is None:
                        return None
                    return YoungFunction.glued(near_zero, near_infinity, d['t_star'])
        except (KeyError, TypeError, ValueError, OrliczDomainException) as ex:
            _LOGGER.debug(f"Invalid Young function record {d}: {ex}")
        return None

    @staticmethod
    def from_str(s: str):
        """Compact form 'kind:p1,p2,...', e.g. 'power:2', 'powerlog:2,1', 'exp:1', 'linear'"""
        name, _, args = s.strip().partition(':')
        kind = OrliczKind.from_str(name)
        try:
            values = [float(x) for x in args.split(',')] if args else []
        except ValueError:
            msg = f"Invalid parameters in Young function '{s}'"
            raise OrliczConfigException(msg)

        arity = {
            OrliczKind.POWER: (1, 1),
            OrliczKind.LINEAR: (0, 0),
            OrliczKind.POWER_LOG: (2, 3),
            OrliczKind.POWER_LOGLOG: (2, 3),
            OrliczKind.EXP: (1, 2),
            OrliczKind.EXP_NEG_INV: (1, 1),
        }
        if kind not in arity or not (arity[kind][0] <= len(values) <= arity[kind][1]):
            msg = f"Young function '{s}' does not match a parametric kind"
            raise OrliczConfigException(msg)

        try:
            match kind:
                case OrliczKind.POWER: return YoungFunction.power(*values)
                case OrliczKind.LINEAR: return YoungFunction.linear()
                case OrliczKind.POWER_LOG: return YoungFunction.power_log(*values)
                case OrliczKind.POWER_LOGLOG: return YoungFunction.power_loglog(*values)
                case OrliczKind.EXP: return YoungFunction.exp(*values)
                case OrliczKind.EXP_NEG_INV: return YoungFunction.exp_neg_inv(*values)
        except OrliczDomainException as ex:
            msg = f"Young function '{s}': {ex}"
            raise OrliczConfigException(msg)

    def __str__(self):
        return self.label or str(self.kind)


def _delta2_of_growth(g: OrliczGrowth|None) -> bool|None:
    if g is None:
        return None
    match g.kind:
        case OrliczGrowthKind.POLY:
            return True
        case OrliczGrowthKind.EXP | OrliczGrowthKind.EXP_EXP | OrliczGrowthKind.SUPER | OrliczGrowthKind.JUMP | OrliczGrowthKind.EXP_NEG | OrliczGrowthKind.FLAT:
            return False
    return None


def _argmax_finite(t: np.ndarray, values: np.ndarray, mask: np.ndarray) -> float|None:
    ok = mask & np.isfinite(values)
    if not np.any(ok):
        return float(t[-1])
    return float(t[ok][np.argmax(values[ok])])
