##
# Envelopes E bounding the derivative of a Lipschitz-type function: |f'(t)| <= E(t)
##

import logging
import math

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .const import (
    GRID_T_MAX,
    GRID_T_MIN,
    PROBE_POINTS,
    PROBE_TOL,
    OrliczConfigException,
    OrliczDomainException,
    OrliczEnvelopeKind,
)
from .growth import (
    OrliczGrowth,
)
from .numerics import (
    log_grid,
)


_LOGGER = logging.getLogger(__name__)

LOGLOG_SHIFT = math.e**math.e      # log log(LOGLOG_SHIFT) = 1

_ARITY = {
    OrliczEnvelopeKind.ONE: 0,
    OrliczEnvelopeKind.POWER: 1,
    OrliczEnvelopeKind.LOG_POWER: 1,
    OrliczEnvelopeKind.EXP: 1,
    OrliczEnvelopeKind.EXP_EXP: 1,
    OrliczEnvelopeKind.POWER_LOG: 2,
    OrliczEnvelopeKind.POWER_LOGLOG: 2,
    OrliczEnvelopeKind.EXP_POWER_LOG: 2,
}


@dataclass(frozen=True)
class Envelope:
    kind: OrliczEnvelopeKind
    params: tuple[float, ...] = ()
    growth: OrliczGrowth|None = None
    label: str|None = None
    evaluator: Callable = field(default=None, compare=False, repr=False)

    @staticmethod
    def one():
        return Envelope(OrliczEnvelopeKind.ONE, (), OrliczGrowth.bounded(), "one", lambda t: np.ones_like(t))

    @staticmethod
    def power(r: float):
        r = _nonneg("power", r)
        return Envelope(OrliczEnvelopeKind.POWER, (r,), OrliczGrowth.poly(r), None, lambda t: t**r)

    @staticmethod
    def log_power(r: float):
        """log^r(1 + t)"""
        r = _nonneg("log power", r)
        return Envelope(OrliczEnvelopeKind.LOG_POWER, (r,), OrliczGrowth.poly(0.0, r), None, lambda t: np.log1p(t)**r)

    @staticmethod
    def exp(b: float):
        """exp(t^b)"""
        b = _nonneg("exponential order", b)
        return Envelope(OrliczEnvelopeKind.EXP, (b,), OrliczGrowth.exp(b), None, lambda t: np.exp(t**b))

    @staticmethod
    def exp_exp(b: float):
        """exp(exp(t^b))"""
        b = _nonneg("exponential order", b)
        return Envelope(OrliczEnvelopeKind.EXP_EXP, (b,), OrliczGrowth.exp_exp(b), None, lambda t: np.exp(np.exp(t**b)))

    @staticmethod
    def power_log(r: float, gamma: float):
        """t^r log^gamma(e + t)"""
        r = _nonneg("power", r)
        gamma = float(gamma)
        return Envelope(
            OrliczEnvelopeKind.POWER_LOG, (r, gamma), OrliczGrowth.poly(r, gamma), None,
            lambda t: t**r * np.log(math.e + t)**gamma,
        )

    @staticmethod
    def power_loglog(r: float, gamma: float):
        """t^r (log log(e^e + t))^gamma"""
        r = _nonneg("power", r)
        gamma = float(gamma)
        return Envelope(
            OrliczEnvelopeKind.POWER_LOGLOG, (r, gamma), OrliczGrowth.poly(r, 0.0, gamma), None,
            lambda t: t**r * np.log(np.log(LOGLOG_SHIFT + t))**gamma,
        )

    @staticmethod
    def exp_power_log(b: float, a: float):
        """exp(t^b log^a(e + t))"""
        b = _nonneg("exponential order", b)
        a = float(a)
        return Envelope(
            OrliczEnvelopeKind.EXP_POWER_LOG, (b, a), OrliczGrowth.exp(b, a), None,
            lambda t: np.exp(t**b * np.log(math.e + t)**a),
        )

    @staticmethod
    def custom(evaluator: Callable, growth: OrliczGrowth|None = None, label: str|None = None):
        return Envelope(OrliczEnvelopeKind.CUSTOM, (), growth, label or "custom", evaluator)

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            y = np.broadcast_to(np.asarray(self.evaluator(arr), dtype=float), arr.shape).copy()
        if np.ndim(t) == 0:
            return float(y)
        return y

    def check_monotone(self, grid=None) -> bool:
        """Non-decreasing on the grid and not identically zero there"""
        t = np.concatenate([[0.0], log_grid(GRID_T_MIN, GRID_T_MAX, points=PROBE_POINTS)]) if grid is None else np.asarray(grid, dtype=float)
        e = self(t)
        ok = ~np.isnan(e)
        if not np.any(e[ok] > 0):
            _LOGGER.warning(f"Envelope {self} vanishes on the probe grid")
            return False
        e = e[ok]
        return bool(np.all(e[1:] >= e[:-1] * (1.0 - PROBE_TOL)))

    def to_str(self) -> str:
        if self.kind == OrliczEnvelopeKind.CUSTOM:
            return self.label
        if not self.params:
            return str(self.kind)
        return f"{self.kind}:" + ",".join(format(x, "g") for x in self.params)

    def __str__(self):
        return self.to_str()

    def to_dict(self) -> dict[str,Any]:
        if self.kind == OrliczEnvelopeKind.CUSTOM:
            return {"kind": str(self.kind), "label": self.label}
        return {"kind": str(self.kind), "params": list(self.params)}

    @staticmethod
    def from_dict(d: dict):
        if not isinstance(d, dict):
            return None
        kind = OrliczEnvelopeKind.from_str(str(d.get('kind', '')), default="")
        params = d.get('params', [])
        if kind not in _ARITY or not isinstance(params, list) or len(params) != _ARITY[kind]:
            return None
        try:
            return Envelope._build(kind, [float(x) for x in params])
        except (TypeError, ValueError, OrliczDomainException):
            return None

    @staticmethod
    def from_str(s: str):
        """Compact form 'kind:a,b', e.g. 'one', 'power:1', 'powerlog:1,0', 'exp:1.5'"""
        name, _, args = s.strip().partition(':')
        kind = OrliczEnvelopeKind.from_str(name)
        try:
            params = [float(x) for x in args.split(',')] if args else []
        except ValueError:
            msg = f"Invalid parameters in envelope '{s}'"
            raise OrliczConfigException(msg)
        if kind not in _ARITY or len(params) != _ARITY[kind]:
            msg = f"Envelope '{s}' needs {_ARITY.get(kind, 0)} parameters"
            raise OrliczConfigException(msg)
        try:
            return Envelope._build(kind, params)
        except OrliczDomainException as ex:
            msg = f"Envelope '{s}': {ex}"
            raise OrliczConfigException(msg)

    @staticmethod
    def _build(kind: OrliczEnvelopeKind, params: list[float]):
        match kind:
            case OrliczEnvelopeKind.ONE: return Envelope.one()
            case OrliczEnvelopeKind.POWER: return Envelope.power(*params)
            case OrliczEnvelopeKind.LOG_POWER: return Envelope.log_power(*params)
            case OrliczEnvelopeKind.EXP: return Envelope.exp(*params)
            case OrliczEnvelopeKind.EXP_EXP: return Envelope.exp_exp(*params)
            case OrliczEnvelopeKind.POWER_LOG: return Envelope.power_log(*params)
            case OrliczEnvelopeKind.POWER_LOGLOG: return Envelope.power_loglog(*params)
            case OrliczEnvelopeKind.EXP_POWER_LOG: return Envelope.exp_power_log(*params)


def _nonneg(what: str, x: float) -> float:
    x = float(x)
    if not x >= 0:
        msg = f"Envelope {what} must be non-negative, got {x}"
        raise OrliczDomainException(msg)
    return x
