##
# Asymptotic growth descriptors and the exponent algebra used by the analytic decision paths.
#
# A descriptor classifies a function as t -> infinity (or t -> 0 for EXP_NEG / FLAT) up to
# multiplicative constants inside its argument. POLY(a, b, c) stands for t^a log^b(t) (log log t)^c;
# an eps level marks an extra order that can be made arbitrarily small but stays positive
# (t^{0+}, log^{0+}, loglog^{0+}), which arises when a free constant sits in an exponent.
##

import logging

from dataclasses import dataclass

from .const import (
    EXPONENT_TOL,
    OrliczGrowthKind,
    OrliczIndeterminateException,
    OrliczIntegral,
)


_LOGGER = logging.getLogger(__name__)

POWER = 0
LOG = 1
LOGLOG = 2


def _pos(x: float) -> bool:
    return x > EXPONENT_TOL

def _neg(x: float) -> bool:
    return x < -EXPONENT_TOL

def _zero(x: float) -> bool:
    return abs(x) <= EXPONENT_TOL

def _sign(x: float) -> int:
    return 1 if _pos(x) else (-1 if _neg(x) else 0)


@dataclass(frozen=True)
class OrliczGrowth:
    kind: OrliczGrowthKind
    power: float = 0.0
    log: float = 0.0
    loglog: float = 0.0
    eps: int|None = None

    @staticmethod
    def poly(power: float = 0.0, log: float = 0.0, loglog: float = 0.0, eps: int|None = None):
        return OrliczGrowth(OrliczGrowthKind.POLY, float(power), float(log), float(loglog), eps)

    @staticmethod
    def bounded():
        return OrliczGrowth.poly()

    @staticmethod
    def exp(power: float, log: float = 0.0):
        """exp(t^power log^log t)"""
        return OrliczGrowth(OrliczGrowthKind.EXP, float(power), float(log))

    @staticmethod
    def exp_exp(power: float):
        return OrliczGrowth(OrliczGrowthKind.EXP_EXP, float(power))

    @staticmethod
    def exp_neg(power: float):
        """exp(-t^-power) as t -> 0"""
        return OrliczGrowth(OrliczGrowthKind.EXP_NEG, float(power))

    @staticmethod
    def flat():
        return OrliczGrowth(OrliczGrowthKind.FLAT)

    @staticmethod
    def jump():
        return OrliczGrowth(OrliczGrowthKind.JUMP)

    @staticmethod
    def super_poly():
        return OrliczGrowth(OrliczGrowthKind.SUPER)

    @property
    def is_poly(self) -> bool:
        return self.kind == OrliczGrowthKind.POLY

    @property
    def is_bounded(self) -> bool:
        return self.is_poly and self.eps is None and _zero(self.power) and _zero(self.log) and _zero(self.loglog)

    @property
    def orders(self) -> tuple[float, float, float]:
        return (self.power, self.log, self.loglog)

    def __str__(self):
        match self.kind:
            case OrliczGrowthKind.POLY:
                parts = [f"t^{self.power:g}"]
                if not _zero(self.log):
                    parts.append(f"log^{self.log:g}")
                if not _zero(self.loglog):
                    parts.append(f"loglog^{self.loglog:g}")
                if self.eps is not None:
                    parts.append(f"({['t', 'log', 'loglog'][self.eps]}^0+)")
                return " ".join(parts)
            case OrliczGrowthKind.EXP:
                return f"exp(t^{self.power:g} log^{self.log:g})"
            case OrliczGrowthKind.EXP_EXP:
                return f"exp(exp(t^{self.power:g}))"
            case OrliczGrowthKind.EXP_NEG:
                return f"exp(-t^-{self.power:g})"
            case _:
                return str(self.kind)


    def product(self, other: 'OrliczGrowth') -> 'OrliczGrowth':
        """Class of self(t) * other(t)"""
        if self.is_poly and other.is_poly:
            levels = [e for e in (self.eps, other.eps) if e is not None]
            return OrliczGrowth.poly(
                self.power + other.power,
                self.log + other.log,
                self.loglog + other.loglog,
                min(levels) if levels else None,
            )

        if self.is_poly or other.is_poly:
            rest = other if self.is_poly else self
            if rest.kind in (OrliczGrowthKind.EXP, OrliczGrowthKind.EXP_EXP, OrliczGrowthKind.SUPER, OrliczGrowthKind.JUMP):
                return rest

        if self.kind == other.kind == OrliczGrowthKind.EXP:
            return self if self.compare(other) >= 0 else other

        msg = f"Product of {self} and {other} is not tracked"
        raise OrliczIndeterminateException(msg)


    def compose(self, inner: 'OrliczGrowth') -> 'OrliczGrowth':
        """Class of self(inner(t))"""
        match self.kind:
            case OrliczGrowthKind.POLY:
                if self.is_bounded:
                    return OrliczGrowth.bounded()
                match inner.kind:
                    case OrliczGrowthKind.POLY:
                        return self._poly_of_poly(inner)
                    case OrliczGrowthKind.EXP | OrliczGrowthKind.EXP_EXP | OrliczGrowthKind.SUPER | OrliczGrowthKind.JUMP:
                        if _pos(self.power):
                            return inner

            case OrliczGrowthKind.EXP:
                exponent = OrliczGrowth.poly(self.power, self.log).compose(inner)
                return exponent.exp_of()

            case OrliczGrowthKind.EXP_EXP:
                exponent = OrliczGrowth.poly(self.power).compose(inner)
                return exponent.exp_of().exp_of()

        msg = f"Composition of {self} with {inner} is not tracked"
        raise OrliczIndeterminateException(msg)


    def _poly_of_poly(self, inner: 'OrliczGrowth') -> 'OrliczGrowth':
        a, b, c = self.orders
        x, y, z = inner.orders
        if inner.is_bounded:
            return OrliczGrowth.bounded()
        if _neg(x) or (_zero(x) and _neg(y)) or (_zero(x) and _zero(y) and _neg(z)):
            msg = f"Inner class {inner} tends to zero"
            raise OrliczIndeterminateException(msg)

        power = a * x
        log = a * y
        loglog = a * z
        eps = inner.eps if _pos(a) else None

        # log(inner) and loglog(inner) up to constant factors
        grows_power = _pos(x) or inner.eps == POWER
        grows_log = not grows_power and (_pos(y) or inner.eps == LOG)

        if not _zero(b):
            if grows_power:
                log += b
            elif grows_log:
                loglog += b
            else:
                msg = f"log of {inner} needs a triple logarithm"
                raise OrliczIndeterminateException(msg)

        if not _zero(c):
            if grows_power:
                loglog += c
            else:
                msg = f"loglog of {inner} needs a triple logarithm"
                raise OrliczIndeterminateException(msg)

        return OrliczGrowth.poly(power, log, loglog, eps)


    def exp_of(self) -> 'OrliczGrowth':
        """
        Class of exp(K self(t)) where K is a free positive constant.
        Classes slower than every power are bounded above by t^{0+}.
        """
        match self.kind:
            case OrliczGrowthKind.POLY:
                pass
            case OrliczGrowthKind.EXP:
                return OrliczGrowth.exp_exp(self.power)
            case OrliczGrowthKind.SUPER:
                return self
            case _:
                msg = f"Exponential of {self} is not tracked"
                raise OrliczIndeterminateException(msg)

        a, b, c = self.orders
        if _pos(a):
            if not _zero(c):
                msg = f"Exponential of {self} with a double logarithm is not tracked"
                raise OrliczIndeterminateException(msg)
            return OrliczGrowth.exp(a, b)
        if _neg(a):
            return OrliczGrowth.bounded()
        if self.eps == POWER:
            return OrliczGrowth.super_poly()

        # exponent grows at most logarithmically
        if _pos(b - 1.0) or (_zero(b - 1.0) and (_pos(c) or self.eps in (LOG, LOGLOG))):
            return OrliczGrowth.super_poly()
        if _zero(b - 1.0) or _pos(b):
            return OrliczGrowth.poly(eps=POWER)
        if _neg(b):
            return OrliczGrowth.bounded()

        # exponent grows at most like a power of log log t
        if self.eps == LOG:
            return OrliczGrowth.poly(eps=POWER)
        if _pos(c - 1.0) or (_zero(c - 1.0) and self.eps == LOGLOG):
            return OrliczGrowth.poly(eps=POWER)
        if _pos(c) or self.eps == LOGLOG:
            return OrliczGrowth.poly(eps=LOG)
        return OrliczGrowth.bounded()


    def inverse(self) -> 'OrliczGrowth':
        """Class of the inverse function"""
        match self.kind:
            case OrliczGrowthKind.POLY if self.eps is None and _pos(self.power):
                a, b, c = self.orders
                return OrliczGrowth.poly(1.0 / a, -b / a, -c / a)
            case OrliczGrowthKind.POLY if self.eps is None and _zero(self.power) and _pos(self.log) and _zero(self.loglog):
                return OrliczGrowth.exp(1.0 / self.log)
            case OrliczGrowthKind.EXP if _pos(self.power):
                return OrliczGrowth.poly(0.0, 1.0 / self.power, -self.log / self.power)

        msg = f"Inverse of {self} is not tracked"
        raise OrliczIndeterminateException(msg)


    def compare(self, other: 'OrliczGrowth') -> int:
        """
        -1, 0 or +1 as self grows slower, alike or faster than other, up to constants inside arguments
        """
        if self.kind == other.kind:
            match self.kind:
                case OrliczGrowthKind.POLY:
                    return self._compare_poly(other)
                case OrliczGrowthKind.EXP:
                    return _sign(self.power - other.power) or _sign(self.log - other.log)
                case OrliczGrowthKind.EXP_EXP:
                    return _sign(self.power - other.power)
                case OrliczGrowthKind.EXP_NEG:
                    # larger exponent means faster decay at zero
                    return _sign(other.power - self.power)
                case OrliczGrowthKind.FLAT | OrliczGrowthKind.JUMP:
                    return 0
                case _:
                    msg = f"Cannot order {self} against {other}"
                    raise OrliczIndeterminateException(msg)

        if OrliczGrowthKind.SUPER in (self.kind, other.kind):
            rest = other if self.kind == OrliczGrowthKind.SUPER else self
            sign = 1 if self.kind == OrliczGrowthKind.SUPER else -1
            match rest.kind:
                case OrliczGrowthKind.POLY | OrliczGrowthKind.EXP_NEG | OrliczGrowthKind.FLAT:
                    return sign
                case OrliczGrowthKind.JUMP:
                    return -sign
            msg = f"Cannot order {self} against {other}"
            raise OrliczIndeterminateException(msg)

        return _sign(_RANK[self.kind] - _RANK[other.kind])


    def _compare_poly(self, other: 'OrliczGrowth') -> int:
        for level, (x, y) in enumerate(zip(self.orders, other.orders)):
            s = _sign(x - y)
            if s != 0:
                return s
            mine, theirs = self.eps == level, other.eps == level
            if mine and not theirs:
                return 1
            if theirs and not mine:
                return -1
            if mine and theirs:
                return 0
        return 0


_RANK = {
    OrliczGrowthKind.FLAT: 0,
    OrliczGrowthKind.EXP_NEG: 1,
    OrliczGrowthKind.POLY: 2,
    OrliczGrowthKind.EXP: 3,
    OrliczGrowthKind.EXP_EXP: 4,
    OrliczGrowthKind.JUMP: 5,
}


def conjugate_growth(growth: OrliczGrowth, sigma: float) -> OrliczGrowth:
    """
    Class of H_sigma(t) = (int_0^t (s/A(s))^{1/(sigma-1)} ds)^{(sigma-1)/sigma} as t -> infinity,
    for A of the given class. Bounded when the integral converges at infinity.
    """
    if not growth.is_poly:
        return OrliczGrowth.bounded()
    if growth.eps is not None:
        msg = f"Conjugate of {growth} is not tracked"
        raise OrliczIndeterminateException(msg)

    p, alpha, c = growth.orders
    if _neg(p - sigma):
        return OrliczGrowth.poly((sigma - p) / sigma, -alpha / sigma, -c / sigma)
    if _pos(p - sigma):
        return OrliczGrowth.bounded()
    if _neg(alpha - (sigma - 1.0)):
        return OrliczGrowth.poly(0.0, (sigma - 1.0 - alpha) / sigma, -c / sigma)
    if _pos(alpha - (sigma - 1.0)):
        return OrliczGrowth.bounded()
    if _neg(c - (sigma - 1.0)):
        return OrliczGrowth.poly(0.0, 0.0, (sigma - 1.0 - c) / sigma)
    if _pos(c - (sigma - 1.0)):
        return OrliczGrowth.bounded()

    msg = f"Conjugate of {growth} grows like a triple logarithm"
    raise OrliczIndeterminateException(msg)


def integral_at_zero(growth: OrliczGrowth|None, sigma: float) -> OrliczIntegral:
    """Behaviour of int_0 (t/A(t))^{1/(sigma-1)} dt for A of the given class near zero"""
    if growth is None:
        return OrliczIntegral.INDETERMINATE
    match growth.kind:
        case OrliczGrowthKind.POLY:
            return OrliczIntegral.CONVERGES if _neg(growth.power - sigma) else OrliczIntegral.DIVERGES
        case OrliczGrowthKind.EXP_NEG | OrliczGrowthKind.FLAT:
            return OrliczIntegral.DIVERGES
    return OrliczIntegral.INDETERMINATE


def integral_at_infinity(growth: OrliczGrowth|None, sigma: float) -> OrliczIntegral:
    """Behaviour of int^infinity (t/A(t))^{1/(sigma-1)} dt for A of the given class near infinity"""
    if growth is None:
        return OrliczIntegral.INDETERMINATE
    match growth.kind:
        case OrliczGrowthKind.POLY:
            p, alpha, c = growth.orders
            if _pos(p - sigma):
                return OrliczIntegral.CONVERGES
            if _neg(p - sigma):
                return OrliczIntegral.DIVERGES
            if _pos(alpha - (sigma - 1.0)):
                return OrliczIntegral.CONVERGES
            if _neg(alpha - (sigma - 1.0)):
                return OrliczIntegral.DIVERGES
            return OrliczIntegral.CONVERGES if _pos(c - (sigma - 1.0)) else OrliczIntegral.DIVERGES
        case OrliczGrowthKind.EXP | OrliczGrowthKind.EXP_EXP | OrliczGrowthKind.SUPER | OrliczGrowthKind.JUMP:
            return OrliczIntegral.CONVERGES
    return OrliczIntegral.INDETERMINATE
