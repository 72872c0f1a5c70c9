import math
import numpy as np
import pytest
from pyorlicz import YoungFunction, Regime, OrliczGrowth, OrliczKind, OrliczRegimeTag
from pyorlicz import OrliczConfigException, OrliczConstructionException, OrliczDomainException


LINF = YoungFunction.piecewise([(0, 0, 0), (1, math.inf, 0)])
FLATLIN = YoungFunction.piecewise([(0, 0, 0), (1, 0, 1)])
SQUARE_CUBE = YoungFunction.glued(YoungFunction.power(2), YoungFunction.power(3), 1.0)


@pytest.mark.parametrize(
    "name, young, t, exp_val",
    [
        ("power",          YoungFunction.power(2),             3.0,  9.0),
        ("power zero",     YoungFunction.power(2),             0.0,  0.0),
        ("linear",         YoungFunction.linear(),             2.5,  2.5),
        ("powerlog",       YoungFunction.power_log(2, 1),      1.0,  math.log(2.0)),
        ("powerlog neg",   YoungFunction.power_log(1, -1),     1.0,  1.0 / math.log(math.e + 1.0)),
        ("exp",            YoungFunction.exp(1),               1.0,  math.e - 1.0),
        ("exp shift",      YoungFunction.exp(1, 1),            1.0,  math.e**2 - math.e),
        ("expneginv",      YoungFunction.exp_neg_inv(1),       0.1,  math.exp(-10.0)),
        ("linf below",     LINF,                               0.5,  0.0),
        ("linf above",     LINF,                               2.0,  math.inf),
        ("flatlin",        FLATLIN,                            3.0,  2.0),
        ("glued low",      SQUARE_CUBE,                        0.5,  0.25),
        ("glued high",     SQUARE_CUBE,                        2.0,  8.0),
    ]
)
def test_evaluate(name, young, t, exp_val):
    val = young.eval(t)
    assert type(val) is float
    assert val == pytest.approx(exp_val, rel=1e-12)


def test_evaluate_array():
    t = np.array([0.0, 1.0, 2.0])
    assert YoungFunction.power(3)(t) == pytest.approx([0.0, 1.0, 8.0])


def test_evaluate_negative():
    with pytest.raises(OrliczDomainException):
        YoungFunction.power(2).eval(-1.0)


@pytest.mark.parametrize(
    "name, young, s, exp_val",
    [
        ("power",      YoungFunction.power(2),                        9.0,                 3.0),
        ("exp",        YoungFunction.exp(1),                          math.e - 1.0,        1.0),
        ("exp shift",  YoungFunction.exp(1, 1),                       math.e**2 - math.e,  1.0),
        ("expneginv",  YoungFunction.exp_neg_inv(1),                  math.exp(-10.0),     0.1),
        ("linf zero",  LINF,                                          0.0,                 1.0),
        ("linf",       LINF,                                          5.0,                 1.0),
        ("flatlin",    FLATLIN,                                       2.0,                 3.0),
        ("glued low",  SQUARE_CUBE,                                   0.25,                0.5),
        ("glued high", SQUARE_CUBE,                                   8.0,                 2.0),
        ("black box",  YoungFunction.custom(lambda t: t**3),          8.0,                 2.0),
        ("infinite",   YoungFunction.power(2),                        math.inf,            math.inf),
        ("negative",   YoungFunction.power(2),                        -1.0,                0.0),
    ]
)
def test_inverse(name, young, s, exp_val):
    assert young.inverse(s) == pytest.approx(exp_val, rel=1e-9)


@pytest.mark.parametrize(
    "name, young, regime, exp_holds, exp_constant, exp_analytic",
    [
        ("power",             YoungFunction.power(2),              Regime.global_(),        True,  4.0,   True),
        ("powerlog",          YoungFunction.power_log(2, 1),       Regime.global_(),        True,  8.0,   True),
        ("exp",               YoungFunction.exp(1),                Regime.global_(),        False, None,  True),
        ("exp near zero",     YoungFunction.exp(1),                Regime.near_zero(),      True,  math.e + 1.0, True),
        ("exp near infinity", YoungFunction.exp(1),                Regime.near_infinity(),  False, None,  True),
        ("expneginv",         YoungFunction.exp_neg_inv(1),        Regime.near_zero(0.1),   False, None,  True),
        ("black box square",  YoungFunction.custom(lambda t: t**2), Regime.global_(),       True,  4.0,   False),
        ("black box expm1",   YoungFunction.custom(np.expm1),      Regime.global_(),        False, None,  False),
    ]
)
def test_delta2(name, young, regime, exp_holds, exp_constant, exp_analytic):
    verdict = young.check_delta2(regime)
    assert verdict.holds == exp_holds
    assert verdict.analytic == exp_analytic
    if exp_constant is None:
        assert verdict.constant is None
        assert verdict.witness is not None
    else:
        assert verdict.constant == pytest.approx(exp_constant, rel=1e-4)


@pytest.mark.parametrize(
    "name, left, right, exp_holds, exp_constant, exp_analytic",
    [
        ("identical",   YoungFunction.power(2), YoungFunction.power(2),        True,  1.0,  True),
        ("same values", YoungFunction.power(2), YoungFunction.power_log(2, 0), True,  1.0,  True),
        ("scaled",      YoungFunction.power(2),
                        YoungFunction.custom(lambda t: 4.0 * t**2, OrliczGrowth.poly(2), OrliczGrowth.poly(2)),
                                                                               True,  2.0,  True),
        ("black box",   YoungFunction.power(2), YoungFunction.custom(lambda t: 4.0 * t**2),
                                                                               True,  2.0,  False),
        ("growth",      YoungFunction.power(2), YoungFunction.power(3),        False, None, True),
        ("log factor",  YoungFunction.power(2), YoungFunction.power_log(2, 1), False, None, True),
    ]
)
def test_equivalent(name, left, right, exp_holds, exp_constant, exp_analytic):
    verdict = left.equivalent(right)
    assert verdict.holds == exp_holds
    assert verdict.analytic == exp_analytic
    if exp_constant is not None:
        assert verdict.constant == pytest.approx(exp_constant, rel=1e-4)


def test_equivalent_near_infinity():
    # t^2 and t^2 + t differ near zero only
    other = YoungFunction.custom(lambda t: t**2 + t, OrliczGrowth.poly(1), OrliczGrowth.poly(2))
    assert not YoungFunction.power(2).equivalent(other).holds
    assert YoungFunction.power(2).equivalent(other, Regime.near_infinity()).holds


@pytest.mark.parametrize(
    "name, young, exp_val",
    [
        ("power",     YoungFunction.power(2),        True),
        ("expneginv", YoungFunction.exp_neg_inv(1),  True),
        ("linf",      LINF,                          False),
        ("flatlin",   FLATLIN,                       False),
        ("black box", YoungFunction.custom(lambda t: t**2), True),
    ]
)
def test_nondegenerate(name, young, exp_val):
    assert young.is_nondegenerate() == exp_val


@pytest.mark.parametrize(
    "name, young, exp_t_star",
    [
        ("power",     YoungFunction.power(2),       2.0**-20),
        ("expneginv", YoungFunction.exp_neg_inv(1), 2.0**-9),
    ]
)
def test_modify_near_zero(name, young, exp_t_star):
    modified = young.modify_near_zero(3)
    assert modified.kind == OrliczKind.GLUED
    assert modified.params[2] == exp_t_star
    assert modified.is_nondegenerate()
    assert modified(1e-12) > 0
    assert modified(1.0) == young(1.0)
    assert modified(exp_t_star / 2.0) == pytest.approx(young(exp_t_star) / 2.0, rel=1e-12)


def test_modify_near_zero_fails():
    with pytest.raises(OrliczDomainException):
        YoungFunction.power(2).modify_near_zero(1)
    with pytest.raises(OrliczConstructionException):
        YoungFunction.custom(lambda t: np.zeros_like(t)).modify_near_zero(2)


@pytest.mark.parametrize(
    "name, young, exp_convex, exp_incr, exp_alambda",
    [
        ("power",  YoungFunction.power(2),             True,  True,  True),
        ("cube",   YoungFunction.power(3),             True,  True,  True),
        ("linear", YoungFunction.linear(),             True,  True,  True),
        ("sqrt",   YoungFunction.custom(np.sqrt),      False, False, False),
    ]
)
def test_axioms(name, young, exp_convex, exp_incr, exp_alambda):
    assert young.check_convexity() == exp_convex
    assert young.check_incr() == exp_incr
    assert young.check_alambda() == exp_alambda


@pytest.mark.parametrize(
    "name, inp_str, exp_kind, exp_params, exp_except",
    [
        ("power",        "power:2",        OrliczKind.POWER,       (2.0,),             None),
        ("linear",       "linear",         OrliczKind.LINEAR,      (),                 None),
        ("powerlog",     "powerlog:2,1",   OrliczKind.POWER_LOG,   (2.0, 1.0, 1.0),    None),
        ("powerlog neg", "powerlog:2,-1",  OrliczKind.POWER_LOG,   (2.0, -1.0, math.e), None),
        ("powerloglog",  "powerloglog:3,1", OrliczKind.POWER_LOGLOG, (3.0, 1.0, math.e), None),
        ("exp",          "exp:1",          OrliczKind.EXP,         (1.0, 0.0),         None),
        ("exp shift",    "exp:1,1",        OrliczKind.EXP,         (1.0, 1.0),         None),
        ("expneginv",    " expneginv:2 ",  OrliczKind.EXP_NEG_INV, (2.0,),             None),

        ("unknown",      "bogus:1",        None, None, OrliczConfigException),
        ("arity",        "power:2,3",      None, None, OrliczConfigException),
        ("no args",      "power",          None, None, OrliczConfigException),
        ("not a number", "power:x",        None, None, OrliczConfigException),
        ("domain",       "power:-1",       None, None, OrliczConfigException),
        ("piecewise",    "piecewise:1",    None, None, OrliczConfigException),
    ]
)
def test_from_str(name, inp_str, exp_kind, exp_params, exp_except):
    if exp_except is None:
        young = YoungFunction.from_str(inp_str)
        assert young.kind == exp_kind
        assert young.params == pytest.approx(exp_params)
    else:
        with pytest.raises(exp_except):
            YoungFunction.from_str(inp_str)


@pytest.mark.parametrize(
    "name, record, exp_label",
    [
        ("power",      {"kind": "power", "p": 2},                         "power:2"),
        ("powerlog",   {"kind": "zygmund", "p": 3, "alpha": 2},           "powerlog:3,2,1"),
        ("exp",        {"kind": "exp", "alpha": 1, "shift": 1},           "exp:1,1"),
        ("piecewise",  {"kind": "piecewise", "branches": [[0, 0, 0], [1, "inf", 0]]}, "piecewise:0,0,0;1,inf,0"),
        ("glued",      {"kind": "glued", "near_zero": {"kind": "power", "p": 2},
                        "near_infinity": {"kind": "power", "p": 3}, "t_star": 1}, "glued:power:2|power:3|1"),

        ("no kind",    {"p": 2},                                          None),
        ("bad kind",   {"kind": "bogus"},                                 None),
        ("missing",    {"kind": "power"},                                 None),
        ("domain",     {"kind": "power", "p": -1},                        None),
        ("bad glue",   {"kind": "glued", "near_zero": {"kind": "power"},
                        "near_infinity": {"kind": "power", "p": 3}, "t_star": 1}, None),
        ("not a dict", ["power", 2],                                      None),
    ]
)
def test_from_dict(name, record, exp_label):
    young = YoungFunction.from_dict(record)
    if exp_label is None:
        assert young is None
    else:
        assert young.label == exp_label


def test_to_dict():
    assert SQUARE_CUBE.to_dict() == {
        "kind": "glued",
        "near_zero": {"kind": "power", "p": 2.0},
        "near_infinity": {"kind": "power", "p": 3.0},
        "t_star": 1.0,
    }
    assert YoungFunction.from_dict(LINF.to_dict()) == LINF


@pytest.mark.parametrize(
    "name, inp_str, exp_tag, exp_t0, exp_except",
    [
        ("global",        "global",            OrliczRegimeTag.GLOBAL,        1.0, None),
        ("near zero",     "near_zero:0.5",     OrliczRegimeTag.NEAR_ZERO,     0.5, None),
        ("near infinity", "near_infinity:10",  OrliczRegimeTag.NEAR_INFINITY, 10.0, None),
        ("short",         "inf",               OrliczRegimeTag.NEAR_INFINITY, 1.0, None),

        ("unknown",       "somewhere",         None, None, OrliczConfigException),
        ("bad cutoff",    "near_zero:x",       None, None, OrliczConfigException),
        ("negative",      "near_zero:-1",      None, None, OrliczDomainException),
    ]
)
def test_regime(name, inp_str, exp_tag, exp_t0, exp_except):
    if exp_except is None:
        regime = Regime.from_str(inp_str)
        assert regime.tag == exp_tag
        assert regime.t0 == exp_t0
    else:
        with pytest.raises(exp_except):
            Regime.from_str(inp_str)


def test_regime_bounds():
    assert Regime.global_().bounds == (1e-6, 1e6)
    assert Regime.near_zero(0.5).bounds == (1e-6, 0.5)
    assert Regime.near_infinity(1e7).bounds == (1e7, 1e8)
    assert str(Regime.near_zero(0.5)) == "near_zero:0.5"
