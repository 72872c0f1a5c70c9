##
# Registries of named Young functions, envelopes, Lipschitz specs and test functions
##

import logging
import math

from dataclasses import dataclass
from typing import Any

import numpy as np

from .const import (
    OrliczConfigException,
)
from .envelope import (
    Envelope,
)
from .modular import (
    LOWER,
    TestFunction,
)
from .nemytskii import (
    COUNTER_A,
    COUNTER_F,
    LipschitzSpec,
)
from .young import (
    YoungFunction,
)


_LOGGER = logging.getLogger(__name__)


class OrliczFamilyUnknownException(Exception):
    """Registry lookup by an unknown name"""
    pass


@dataclass
class OrliczEntry:
    name: str
    description: str
    value: Any


class _OrliczRegistry:
    """Class-level OrliczEntry members, looked up by name"""

    _name_map: dict[str,OrliczEntry] = None

    @classmethod
    def get_list(cls) -> list[OrliczEntry]:
        return [val for val in cls.__dict__.values() if type(val) is OrliczEntry]

    @classmethod
    def _build_static_maps(cls):
        """Fill static variable once per registry"""
        if cls.__dict__.get('_name_map') is None:
            cls._name_map = {e.name: e for e in cls.get_list()}

    @classmethod
    def get_by_name(cls, name: str):
        cls._build_static_maps()
        entry = cls._name_map.get(name)
        if entry is None:
            raise OrliczFamilyUnknownException(name)
        return entry.value

    @classmethod
    def names(cls) -> list[str]:
        return [e.name for e in cls.get_list()]


class OrliczFamilies(_OrliczRegistry):
    LINEAR = OrliczEntry("linear", "t", YoungFunction.linear())
    POWER_1_5 = OrliczEntry("power1.5", "t^1.5", YoungFunction.power(1.5))
    POWER_2 = OrliczEntry("power2", "t^2", YoungFunction.power(2))
    POWER_3 = OrliczEntry("power3", "t^3", YoungFunction.power(3))
    POWER_4 = OrliczEntry("power4", "t^4", YoungFunction.power(4))
    ZYGMUND_2_1 = OrliczEntry("zygmund2_1", "t^2 log(1+t)", YoungFunction.power_log(2, 1))
    LOGLOG_2_1 = OrliczEntry("loglog2_1", "t^2 loglog(e+t)", YoungFunction.power_loglog(2, 1))
    EXP_1 = OrliczEntry("exp1", "exp(t) - 1", YoungFunction.exp(1))
    EXP_2 = OrliczEntry("exp2", "exp(t^2) - 1", YoungFunction.exp(2))
    TEXP = OrliczEntry("texp", "t exp(t)", COUNTER_A)
    EXP_NEG_1 = OrliczEntry("expneginv1", "exp(-1/t) near zero", YoungFunction.exp_neg_inv(1))
    FLAT_THEN_LINEAR = OrliczEntry(
        "flatlin", "max(0, t - 1)",
        YoungFunction.piecewise([(0.0, 0.0, 0.0), (1.0, 0.0, 1.0)]),
    )


class OrliczEnvelopes(_OrliczRegistry):
    ONE = OrliczEntry("one", "1", Envelope.one())
    LINEAR = OrliczEntry("t", "t", Envelope.power(1))
    SQUARE = OrliczEntry("t2", "t^2", Envelope.power(2))
    LOG = OrliczEntry("log", "log(1+t)", Envelope.log_power(1))
    EXP = OrliczEntry("expt", "exp(t)", Envelope.exp(1))


def _identity_spec() -> LipschitzSpec:
    return LipschitzSpec(lambda t: np.asarray(t, dtype=float), lambda t: np.ones_like(t, dtype=float),
                         1.0, Envelope.one(), 1.0, "identity")


def _constant_spec(c: float = 1.0) -> LipschitzSpec:
    return LipschitzSpec(lambda t: np.full_like(t, c, dtype=float), lambda t: np.zeros_like(t, dtype=float),
                         1.0, Envelope.one(), 0.0, f"constant{c:g}")


def _half_square_spec() -> LipschitzSpec:
    return LipschitzSpec(lambda t: t * np.abs(t) / 2.0, lambda t: np.abs(t), 1.0, Envelope.power(1), None, "t|t|/2")


def truncation_spec(s: float = 1.0) -> LipschitzSpec:
    """g_s(t) = sign(t) max(0, |t| - s), right derivative at the kinks"""
    return LipschitzSpec(
        lambda t: np.sign(t) * np.maximum(0.0, np.abs(t) - s),
        lambda t: np.where((t >= s) | (t < -s), 1.0, 0.0),
        1.0, Envelope.one(), 1.0, f"g_{s:g}",
    )


class OrliczLipschitzSpecs(_OrliczRegistry):
    IDENTITY = OrliczEntry("identity", "f(t) = t", _identity_spec())
    CONSTANT = OrliczEntry("constant", "f(t) = 1", _constant_spec())
    HALF_SQUARE = OrliczEntry("halfsquare", "f(t) = t|t|/2", _half_square_spec())
    COUNTER = OrliczEntry("counter", "f(t) = max(0, |t| - 1)", COUNTER_F)
    TRUNCATION = OrliczEntry("truncation", "g_1(t)", truncation_spec(1.0))


##
# Test functions
##
def _function(value, gradient, label: str, faces=()) -> TestFunction:
    return TestFunction(value, gradient, label, tuple(faces))


def _axis_gradient(x, axis: int, values):
    g = np.zeros_like(x)
    g[..., axis] = values
    return g


def product_bump(g, dg, label: str) -> TestFunction:
    """prod_i g(x_i) with gradient dg(x_i) prod_{j != i} g(x_j)"""
    def value(x):
        return np.prod(g(x), axis=-1)

    def gradient(x):
        gx = g(x)
        dgx = dg(x)
        n = x.shape[-1]
        out = np.empty_like(x)
        for i in range(n):
            others = np.prod(np.delete(gx, i, axis=-1), axis=-1) if n > 1 else 1.0
            out[..., i] = dgx[..., i] * others
        return out

    return _function(value, gradient, label)


def _norm_corpus() -> list[TestFunction]:
    pi = math.pi
    return [
        _function(lambda x: np.ones(x.shape[:-1]), lambda x: np.zeros_like(x), "one"),
        _function(lambda x: np.full(x.shape[:-1], -0.5), lambda x: np.zeros_like(x), "minus_half"),
        _function(lambda x: x[..., 0], lambda x: _axis_gradient(x, 0, 1.0), "x1"),
        _function(lambda x: x[..., 1], lambda x: _axis_gradient(x, 1, 1.0), "x2"),
        _function(lambda x: x[..., 0] + x[..., 1], lambda x: _axis_gradient(x, 0, 1.0) + _axis_gradient(x, 1, 1.0), "x1+x2"),
        _function(lambda x: x[..., 0] * x[..., 1],
                  lambda x: _axis_gradient(x, 0, x[..., 1]) + _axis_gradient(x, 1, x[..., 0]), "x1*x2"),
        _function(lambda x: x[..., 0]**2, lambda x: _axis_gradient(x, 0, 2.0 * x[..., 0]), "x1^2"),
        _function(lambda x: np.sin(pi * x[..., 0]), lambda x: _axis_gradient(x, 0, pi * np.cos(pi * x[..., 0])), "sin"),
        _function(lambda x: np.cos(pi * x[..., 0]) * np.cos(pi * x[..., 1]),
                  lambda x: _axis_gradient(x, 0, -pi * np.sin(pi * x[..., 0]) * np.cos(pi * x[..., 1]))
                  + _axis_gradient(x, 1, -pi * np.cos(pi * x[..., 0]) * np.sin(pi * x[..., 1])), "coscos"),
        _function(lambda x: np.expm1(x[..., 0]), lambda x: _axis_gradient(x, 0, np.exp(x[..., 0])), "expm1"),
        _function(lambda x: x[..., 0]**2 * x[..., 1] - x[..., 1] / 2.0,
                  lambda x: _axis_gradient(x, 0, 2.0 * x[..., 0] * x[..., 1]) + _axis_gradient(x, 1, x[..., 0]**2 - 0.5), "poly"),
        _function(lambda x: x[..., 0] * np.log(x[..., 0]), lambda x: _axis_gradient(x, 0, np.log(x[..., 0]) + 1.0),
                  "xlogx", [(0, LOWER)]),
    ]


def _interval_corpus() -> list[TestFunction]:
    pi = math.pi
    return [
        _function(lambda x: x[..., 0], lambda x: np.ones_like(x), "x"),
        _function(lambda x: x[..., 0]**2, lambda x: 2.0 * x, "x^2"),
        _function(lambda x: x[..., 0]**1.5, lambda x: 1.5 * np.sqrt(x), "x^1.5"),
        _function(lambda x: np.sin(pi * x[..., 0] / 2.0), lambda x: pi / 2.0 * np.cos(pi * x / 2.0), "sin"),
        _function(lambda x: x[..., 0] * (1.0 - x[..., 0]), lambda x: 1.0 - 2.0 * x, "x(1-x)"),
        _function(lambda x: np.expm1(x[..., 0]), lambda x: np.exp(x), "expm1"),
    ]


def _bump_corpus() -> list[TestFunction]:
    pi = math.pi
    return [
        product_bump(lambda x: x * (1.0 - x), lambda x: 1.0 - 2.0 * x, "parabola"),
        product_bump(lambda x: np.sin(pi * x), lambda x: pi * np.cos(pi * x), "sine"),
        product_bump(lambda x: np.sin(pi * x)**2, lambda x: pi * np.sin(2.0 * pi * x), "sine^2"),
        product_bump(lambda x: (x * (1.0 - x))**2, lambda x: 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x), "parabola^2"),
        product_bump(lambda x: x**2 * (1.0 - x), lambda x: 2.0 * x - 3.0 * x**2, "skew"),
    ]


class OrliczTestFunctions(_OrliczRegistry):
    X1 = OrliczEntry("x1", "u = x_1", _norm_corpus()[2])
    XLOGX = OrliczEntry("xlogx", "u = x_1 log x_1", _norm_corpus()[-1])
    BUMP = OrliczEntry("bump", "prod sin(pi x_i)", _bump_corpus()[1])
    PARABOLA = OrliczEntry("parabola", "prod x_i (1 - x_i)", _bump_corpus()[0])

    @staticmethod
    def norm_corpus() -> list[TestFunction]:
        """Twelve functions on the unit square"""
        return _norm_corpus()

    @staticmethod
    def interval_corpus() -> list[TestFunction]:
        """Six functions on (0,1) vanishing at 0"""
        return _interval_corpus()

    @staticmethod
    def bump_corpus(n: int) -> list[TestFunction]:
        """Five functions vanishing on the boundary of (0,1)^n"""
        if n < 1:
            msg = f"Dimension must be positive, got {n}"
            raise OrliczConfigException(msg)
        return _bump_corpus()


##
# Named family records loaded from families.json
##
@dataclass
class OrliczFamilyRecord:
    name: str
    description: str
    young: YoungFunction

    @staticmethod
    def from_dict(d):
        if not isinstance(d, dict):
            return None
        name = d.get('name', None)
        description = d.get('description', "")
        young = YoungFunction.from_dict(d.get('young', None))
        if not isinstance(name, str) or young is None:
            _LOGGER.debug(f"Skipping invalid family record {d}")
            return None
        return OrliczFamilyRecord(name, str(description), young)


class OrliczFamilySet:

    PATH = __file__.replace('.py', '.json')

    def __init__(self, records: list[OrliczFamilyRecord] | None = None):
        self._records = records or []

    def get_by_name(self, name: str) -> YoungFunction:
        for record in self._records:
            if record.name == name:
                return record.young

        raise OrliczFamilyUnknownException(name)

    def get_list(self) -> list[OrliczFamilyRecord]:
        return list(self._records)
