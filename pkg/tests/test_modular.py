import math
import numpy as np
import pytest
from pyorlicz import YoungFunction, NDimYoungFunction, BoxDomain, TestFunction, OrliczTestFunctions
from pyorlicz import phi_circ_function
from pyorlicz import modular_integral, luxemburg_norm, w1a_quantities, modular_convergence
from pyorlicz import OrliczDomainException
from pyorlicz.modular import LOWER, UPPER, column_converges, sup_norm, check_interval_embedding, calibrate_interval_constant

from . import luxemburg_reference


X1 = OrliczTestFunctions.get_by_name("x1")
XLOGX = OrliczTestFunctions.get_by_name("xlogx")
LOG = TestFunction(lambda x: np.log(x[..., 0]), lambda x: 1.0 / x, "log", ((0, LOWER),))
UNIT2 = BoxDomain.unit(2)
INTERVAL = BoxDomain.interval(0.0, 1.0)


@pytest.mark.parametrize(
    "name, lower, upper, faces, exp_except",
    [
        ("unit square",  (0, 0),     (1, 1),        (),             None),
        ("cube faces",   (0, 0, 0),  (1, 1, 1),     ((2, UPPER),),  None),
        ("reversed",     (1,),       (0,),          (),             OrliczDomainException),
        ("lengths",      (0, 0),     (1,),          (),             OrliczDomainException),
        ("four",         (0,) * 4,   (1,) * 4,      (),             OrliczDomainException),
        ("bad axis",     (0, 0),     (1, 1),        ((2, LOWER),),  OrliczDomainException),
        ("bad side",     (0, 0),     (1, 1),        ((0, 2),),      OrliczDomainException),
        ("unbounded",    (0,),       (math.inf,),   (),             OrliczDomainException),
    ]
)
def test_box_domain(name, lower, upper, faces, exp_except):
    if exp_except is None:
        domain = BoxDomain(lower, upper, faces)
        assert domain.n == len(lower)
        assert domain.measure == 1.0
        assert domain.is_bounded
    else:
        with pytest.raises(exp_except):
            BoxDomain(lower, upper, faces)


def test_box_domain_helpers():
    assert str(UNIT2) == "(0,1)x(0,1)"
    assert BoxDomain.interval(-1, 3).measure == 4.0
    assert UNIT2.with_faces([(0, LOWER)]).singular_faces == ((0, LOWER),)

    half_line = BoxDomain((0.0,), (math.inf,), truncation=10.0, tail=lambda r: 0.0)
    assert not half_line.is_bounded
    assert half_line.bounds == [(0.0, 10.0)]


def test_test_function_algebra():
    x = np.array([[0.5, 0.25]])
    u = OrliczTestFunctions.get_by_name("x1")
    v = 3 * u
    assert v(x) == pytest.approx([1.5])
    assert v.grad(x) == pytest.approx([[3.0, 0.0]])
    assert (v - u)(x) == pytest.approx([1.0])
    assert (u + u).grad(x) == pytest.approx([[2.0, 0.0]])
    assert u.shifted(1.0)(x) == pytest.approx([1.5])
    assert (u - XLOGX).singular_faces == ((0, LOWER),)


def test_check_gradient():
    for u in OrliczTestFunctions.norm_corpus():
        assert u.check_gradient(UNIT2), u.label
    wrong = TestFunction(lambda x: x[..., 0]**2, lambda x: np.ones_like(x), "wrong")
    assert not wrong.check_gradient(UNIT2)


@pytest.mark.parametrize(
    "name, u, Y, lam, part, exp_val",
    [
        ("value",           X1,    YoungFunction.power(2), 1.0, "value",    1.0 / 3.0),
        ("value scaled",    X1,    YoungFunction.power(2), 2.0, "value",    1.0 / 12.0),
        ("gradient",        X1,    YoungFunction.power(2), 1.0, "gradient", 1.0),
        ("both",            X1,    YoungFunction.power(2), 1.0, "both",     4.0 / 3.0),
        ("exp",             X1,    YoungFunction.exp(1),   1.0, "value",    math.e - 2.0),
        ("singular value",  XLOGX, YoungFunction.power(2), 1.0, "value",    2.0 / 27.0),
        ("singular grad",   XLOGX, YoungFunction.power(2), 1.0, "gradient", 1.0),
    ]
)
def test_modular_integral(name, u, Y, lam, part, exp_val):
    assert modular_integral(u, Y, lam, UNIT2, part) == pytest.approx(exp_val, rel=1e-6)


@pytest.mark.parametrize(
    "name, Y",
    [
        ("power",  YoungFunction.power(2)),
        ("linear", YoungFunction.linear()),
    ]
)
def test_modular_integral_diverges(name, Y):
    assert modular_integral(LOG, Y, 1.0, INTERVAL, "gradient") == math.inf


def test_modular_integral_unbounded():
    decay = TestFunction(lambda x: np.exp(-x[..., 0]), lambda x: -np.exp(-x), "exp(-x)")
    domain = BoxDomain((0.0,), (math.inf,), truncation=10.0, tail=lambda r: math.exp(-2.0 * r) / 2.0)
    assert modular_integral(decay, YoungFunction.power(2), 1.0, domain) == pytest.approx(0.5, rel=1e-9)


@pytest.mark.parametrize(
    "name, lam, part, exp_except",
    [
        ("zero scale", 0.0, "value", OrliczDomainException),
        ("bad part",   1.0, "curl",  OrliczDomainException),
    ]
)
def test_modular_integral_errors(name, lam, part, exp_except):
    with pytest.raises(exp_except):
        modular_integral(X1, YoungFunction.power(2), lam, UNIT2, part)


@pytest.mark.parametrize(
    "name, Y",
    [
        ("power",    YoungFunction.power(2)),
        ("zygmund",  YoungFunction.power_log(2, 1)),
        ("exp",      YoungFunction.exp(1)),
    ]
)
def test_luxemburg_corpus(name, Y):
    for u in OrliczTestFunctions.norm_corpus():
        norm = luxemburg_norm(u, Y, UNIT2)
        assert norm > 0, u.label
        assert modular_integral(u, Y, norm, UNIT2) == pytest.approx(1.0, rel=1e-6), u.label
        assert luxemburg_norm(3 * u, Y, UNIT2) == pytest.approx(3.0 * norm, rel=1e-6), u.label
        assert luxemburg_norm(-0.5 * u, Y, UNIT2) == pytest.approx(0.5 * norm, rel=1e-6), u.label


def test_luxemburg_reference():
    Y = YoungFunction.power_log(2, 1)
    u = OrliczTestFunctions.get_by_name("parabola")
    exp_val = luxemburg_reference(lambda lam: modular_integral(u, Y, lam, UNIT2))
    assert luxemburg_norm(u, Y, UNIT2) == pytest.approx(exp_val, rel=1e-6)


def test_luxemburg_power():
    # ||u|| = (int |u|^p)^(1/p) for A(t) = t^p
    assert luxemburg_norm(X1, YoungFunction.power(2), UNIT2) == pytest.approx(math.sqrt(1.0 / 3.0), rel=1e-8)
    assert luxemburg_norm(X1, YoungFunction.power(3), UNIT2, "gradient") == pytest.approx(1.0, rel=1e-8)

    zero = TestFunction(lambda x: np.zeros(x.shape[:-1]), lambda x: np.zeros_like(x), "zero")
    assert luxemburg_norm(zero, YoungFunction.power(2), UNIT2) == 0.0


def test_w1a_quantities():
    quantities = w1a_quantities(X1, YoungFunction.power(2), UNIT2)
    assert quantities.norm_u == pytest.approx(math.sqrt(1.0 / 3.0), rel=1e-8)
    assert quantities.norm_grad == pytest.approx(1.0, rel=1e-8)
    assert quantities.norm == pytest.approx(1.0 + math.sqrt(1.0 / 3.0), rel=1e-8)
    assert quantities.modular_u(2.0) == pytest.approx(1.0 / 12.0, rel=1e-9)
    assert quantities.modular_grad(2.0) == pytest.approx(0.25, rel=1e-9)
    assert set(quantities.to_dict()) == {"norm_u", "norm_grad", "norm"}


def test_sup_norm():
    assert sup_norm(X1, UNIT2) == 1.0
    assert sup_norm(XLOGX, UNIT2) == pytest.approx(1.0 / math.e, rel=1e-2)


@pytest.mark.parametrize(
    "name, values, exp_val",
    [
        ("decays",        [1.0, 0.1, 0.0005],               True),
        ("after inf",     [math.inf, 4.0, 1.0, 0.001],     True),
        ("all zero",      [0.0, 0.0, 0.0],                 True),
        ("too slow",      [1.0, 0.5, 0.25],                False),
        ("grows",         [1.0, 2.0],                      False),
        ("one finite",    [math.inf, 1.0],                 False),
    ]
)
def test_column_converges(name, values, exp_val):
    assert column_converges(values) == exp_val


def test_modular_convergence():
    indices = [2**j for j in range(1, 9)]
    report = modular_convergence(lambda k: X1.shifted(1.0 / k), X1, YoungFunction.power(2), UNIT2, [0.5, 1.0, 2.0], indices)

    assert report.indices == indices
    assert report.converging_lambdas == [0.5, 1.0, 2.0]
    assert report.norm_convergence
    assert report.smallest_converging_lambda == 0.5
    assert report.modular_values[0] == pytest.approx([1.0, 0.25, 0.0625], rel=1e-9)

    rows = report.to_rows()
    assert len(rows) == 24
    assert rows[0][0] == 2
    assert rows[0][1] == 0.5
    assert rows[0][2] == pytest.approx(1.0, rel=1e-9)


def test_modular_convergence_gradient():
    members = [X1 * (1.0 + 1.0 / k) for k in (4, 40, 400, 4000)]
    report = modular_convergence(members, X1, YoungFunction.power(2), UNIT2, [1.0], part="gradient")

    assert report.indices == [1, 2, 3, 4]
    assert report.part == "gradient"
    assert report.modular_values[-1][0] == pytest.approx(1.0 / 4000.0**2, rel=1e-6)
    assert report.norm_convergence


def test_modular_convergence_fails():
    report = modular_convergence([X1.shifted(1.0)] * 4, X1, YoungFunction.power(2), UNIT2, [1.0, 2.0])

    assert report.converging_lambdas == []
    assert not report.norm_convergence
    assert report.smallest_converging_lambda == math.inf
    assert report.to_dict()["smallest_converging_lambda"] is None


def test_ndim_reduction_built_once(monkeypatch):
    calls = []

    def counting(phi, *args, **kwargs):
        calls.append(phi)
        return phi_circ_function(phi, *args, **kwargs)

    monkeypatch.setattr("pyorlicz.modular.phi_circ_function", counting)
    square = NDimYoungFunction.black_box(lambda x: np.sum(x**2, axis=-1), 2, "square")

    report = modular_convergence(lambda k: X1.shifted(1.0 / k), X1, square, UNIT2, [0.5, 1.0, 2.0], [2, 4, 8])
    assert len(calls) == 1
    assert report.modular_values[0] == pytest.approx([1.0, 0.25, 0.0625], rel=1e-5)

    calls.clear()
    assert luxemburg_norm(X1, square, UNIT2) == pytest.approx(math.sqrt(1.0 / 3.0), rel=1e-5)
    assert len(calls) == 1

    calls.clear()
    q = w1a_quantities(X1, square, UNIT2)
    assert q.modular_u(1.0) == pytest.approx(1.0 / 3.0, rel=1e-5)
    assert q.modular_u(2.0) == pytest.approx(1.0 / 12.0, rel=1e-5)
    assert len(calls) == 1


@pytest.mark.parametrize(
    "name, seq, grid, indices",
    [
        ("empty grid",      [X1],                       [],          None),
        ("unsorted grid",   [X1],                       [2.0, 1.0],  None),
        ("negative scale",  [X1],                       [-1.0],      None),
        ("no indices",      lambda k: X1.shifted(1.0 / k), [1.0],    None),
    ]
)
def test_modular_convergence_errors(name, seq, grid, indices):
    with pytest.raises(OrliczDomainException):
        modular_convergence(seq, X1, YoungFunction.power(2), UNIT2, grid, indices)


@pytest.mark.parametrize(
    "name, Y",
    [
        ("power",   YoungFunction.power(2)),
        ("cube",    YoungFunction.power(3)),
        ("exp",     YoungFunction.exp(1)),
        ("zygmund", YoungFunction.power_log(1, 1)),
    ]
)
def test_interval_embedding(name, Y):
    for u in OrliczTestFunctions.interval_corpus():
        holds, lhs, rhs = check_interval_embedding(u, Y, INTERVAL)
        assert holds, u.label
        assert lhs > 0


def test_interval_calibration():
    corpus = OrliczTestFunctions.interval_corpus()
    constant, ratios = calibrate_interval_constant(corpus, YoungFunction.power(2), INTERVAL)
    assert len(ratios) == 6
    assert constant == max(ratios)
    # u = x has sup 1 and int |u'|^2 = 1
    assert ratios[0] == pytest.approx(1.0, rel=1e-9)

    constant, ratios = calibrate_interval_constant(corpus, YoungFunction.power(2), INTERVAL, mode="norm")
    assert 0 < constant < 1

    with pytest.raises(OrliczDomainException):
        calibrate_interval_constant(corpus, YoungFunction.power(2), INTERVAL, mode="sup")
    with pytest.raises(OrliczDomainException):
        calibrate_interval_constant(corpus, YoungFunction.power(2), UNIT2)
