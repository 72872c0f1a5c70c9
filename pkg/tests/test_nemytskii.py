import math
import numpy as np
import pytest
from pyorlicz import YoungFunction, Envelope, LipschitzSpec, BoxDomain
from pyorlicz import OrliczLipschitzSpecs, OrliczTestFunctions
from pyorlicz import continuity_experiment, counterexample_run, poincare_probe
from pyorlicz import lemma_lem1_test, lemma_inqd_test, lemma_fan_probe
from pyorlicz import OrliczDomainException, OrliczPreconditionException
from pyorlicz.nemytskii import COUNTER_A, COUNTER_F, compose, truncate, counter_function, counter_shift, strip_closed_form

from . import strip_reference


X1 = OrliczTestFunctions.get_by_name("x1")
UNIT2 = BoxDomain.unit(2)


@pytest.mark.parametrize(
    "name, spec, exp_envelope, exp_zero",
    [
        ("identity",    "identity",   True, 0.0),
        ("constant",    "constant",   True, 1.0),
        ("half square", "halfsquare", True, 0.0),
        ("counter",     "counter",    True, 0.0),
        ("truncation",  "truncation", True, 0.0),
    ]
)
def test_lipschitz_specs(name, spec, exp_envelope, exp_zero):
    spec = OrliczLipschitzSpecs.get_by_name(spec)
    assert spec.check_envelope() == exp_envelope
    assert spec.f_at_zero == exp_zero


def test_lipschitz_spec_errors():
    with pytest.raises(OrliczPreconditionException):
        OrliczLipschitzSpecs.get_by_name("constant").require_zero()
    OrliczLipschitzSpecs.get_by_name("identity").require_zero()

    with pytest.raises(OrliczDomainException):
        LipschitzSpec(np.abs, np.sign, 0.0)

    too_steep = LipschitzSpec(lambda t: t * np.abs(t) / 2.0, np.abs, 1.0, Envelope.one(), None, "steep")
    assert not too_steep.check_envelope()


def test_compose_and_truncate():
    x = np.array([[0.25, 0.5], [0.75, 0.5]])

    square = compose(OrliczLipschitzSpecs.get_by_name("halfsquare"), X1)
    assert square(x) == pytest.approx([0.03125, 0.28125])
    assert square.grad(x) == pytest.approx([[0.25, 0.0], [0.75, 0.0]])
    assert square.check_gradient(UNIT2)

    cut = truncate(X1, 0.5)
    assert cut(x) == pytest.approx([0.0, 0.25])
    assert cut.grad(x) == pytest.approx([[0.0, 0.0], [1.0, 0.0]])

    with pytest.raises(OrliczDomainException):
        truncate(X1, 0.0)


def test_counter_ingredients():
    assert COUNTER_A(2.0) == pytest.approx(2.0 * math.e**2)
    assert COUNTER_A.inverse(COUNTER_A(np.array([0.5, 2.0, 10.0]))) == pytest.approx([0.5, 2.0, 10.0], rel=1e-10)
    assert COUNTER_F.check_envelope()

    for k in (8, 64, 512):
        # u_k reaches 1 exactly at x_1 = 1/k
        u_k = counter_function(2, counter_shift(k))
        assert u_k(np.array([[1.0 / k, 0.5]])) == pytest.approx([1.0], rel=1e-12)


@pytest.mark.parametrize(
    "k, delta",
    [
        (8,   1e-3),
        (8,   1e-6),
        (64,  1e-4),
        (512, 1e-6),
    ]
)
def test_strip_closed_form(k, delta):
    assert strip_closed_form(k, delta) == pytest.approx(strip_reference(k, delta), rel=1e-8)


def test_counterexample():
    report = counterexample_run([8, 64, 512], n=2)

    assert report.diverges
    assert report.k_list == [8, 64, 512]
    assert report.delta_list == [1e-3, 1e-4, 1e-6]

    # the source difference is the constant (log k + 1)/k
    shift = counter_shift(8)
    assert report.source.modular_values[0][2] == pytest.approx(shift * math.exp(shift), rel=1e-7)
    assert all(d['decays'] for d in report.decay)

    exact = [s for s in report.strips if s.closed_form is not None]
    assert len(exact) == 9
    for s in exact:
        assert s.rel_error <= 1e-6
        assert s.closed_form == pytest.approx(strip_closed_form(s.k, s.delta))

    assert report.image_trend[0.25] == "diverges"
    assert report.image_trend[1.0] == "diverges"
    assert report.image_trend[2.0] == "converges"
    assert report.image_trend[4.0] == "converges"

    rows = report.to_rows()
    assert len(rows[0]) == len(report.HEADER)
    assert rows[0][0] == "source"
    assert rows[-1] == ["verdict", "", "", "", "", "", "", "diverges"]
    assert report.to_dict()["diverges"] is True


def test_counterexample_skips_short_strips():
    report = counterexample_run([2, 2000], delta_list=[1e-3, 1e-6], n=1, lambda_grid=[1.0])
    skipped = [s for s in report.strips if s.quadrature is None]
    assert [(s.k, s.delta) for s in skipped] == [(2000, 1e-3)]
    assert skipped[0].note.startswith("skipped")


@pytest.mark.parametrize(
    "name, k_list, n",
    [
        ("empty",       [],         2),
        ("decreasing",  [64, 8],    2),
        ("from one",    [1, 8],     2),
        ("dimension",   [8, 64],    0),
    ]
)
def test_counterexample_errors(name, k_list, n):
    with pytest.raises(OrliczDomainException):
        counterexample_run(k_list, n=n)


def test_continuity_experiment():
    spec = OrliczLipschitzSpecs.get_by_name("identity")
    A = YoungFunction.power(2)
    report = continuity_experiment(spec, lambda k: X1 * (1.0 + 1.0 / k), X1, A, A, UNIT2, [1.0, 2.0])

    assert report.condition.holds
    assert report.lam == 1.0
    assert report.norm_limit == pytest.approx(1.0 + math.sqrt(1.0 / 3.0), rel=1e-8)
    assert report.predicted == pytest.approx(24.0 * report.norm_limit)
    assert report.predicted in report.image.lambda_grid
    assert report.converges_at_predicted
    assert report.to_dict()["converges_at_predicted"] is True


@pytest.mark.parametrize(
    "name, spec, seq, B",
    [
        ("envelope",   LipschitzSpec(lambda t: t * np.abs(t) / 2.0, np.abs, 1.0, Envelope.one(), None, "steep"),
                       lambda k: X1 * (1.0 + 1.0 / k), YoungFunction.power(2)),
        ("condition",  OrliczLipschitzSpecs.get_by_name("identity"),
                       lambda k: X1 * (1.0 + 1.0 / k), YoungFunction.power(3)),
        ("no limit",   OrliczLipschitzSpecs.get_by_name("identity"),
                       [X1.shifted(1.0)] * 4, YoungFunction.power(2)),
    ]
)
def test_continuity_experiment_refused(name, spec, seq, B):
    with pytest.raises(OrliczPreconditionException):
        continuity_experiment(spec, seq, X1, YoungFunction.power(2), B, UNIT2, [1.0, 2.0])


@pytest.mark.parametrize("n", [2, 3])
def test_poincare_probe(n):
    report = poincare_probe(OrliczTestFunctions.bump_corpus(n), YoungFunction.power(2), n)

    assert len(report.constants) == 5
    assert all(c > 0 for c in report.constants)
    assert report.c_star == max(report.constants)
    assert report.stable
    assert report.to_dict()["stable"] is True


def test_poincare_probe_errors():
    with pytest.raises(OrliczDomainException):
        poincare_probe(OrliczTestFunctions.bump_corpus(2), YoungFunction.power(2), 3, UNIT2)


@pytest.mark.parametrize(
    "name, A, B, E, n",
    [
        ("same power",   YoungFunction.power(2),        YoungFunction.power(2),   Envelope.one(),   3),
        ("power gain",   YoungFunction.power(2),        YoungFunction.power(1.5), Envelope.power(1), 3),
        ("zygmund",      YoungFunction.power_log(2, 1), YoungFunction.power(2),   Envelope.one(),   3),
    ]
)
def test_lemma_lem1(name, A, B, E, n):
    verdict = lemma_lem1_test(A, B, E, n)
    assert verdict.holds
    assert verdict.constant >= 0
    assert verdict.witness is None


def test_lemma_lem1_refused():
    with pytest.raises(OrliczPreconditionException):
        lemma_lem1_test(YoungFunction.power(2), YoungFunction.power(3), Envelope.one(), 3)


@pytest.mark.parametrize(
    "name, B, E, exp_except",
    [
        ("identity",   YoungFunction.power(2), Envelope.one(),    None),
        ("amgm",       YoungFunction.linear(), Envelope.power(1), None),
        ("too large",  YoungFunction.power(2), Envelope.power(1), OrliczPreconditionException),
    ]
)
def test_lemma_inqd(name, B, E, exp_except):
    A = F = YoungFunction.power(2)
    if exp_except is None:
        assert lemma_inqd_test(A, B, E, F).holds
    else:
        with pytest.raises(exp_except):
            lemma_inqd_test(A, B, E, F)


def test_lemma_fan_probe():
    verdict = lemma_fan_probe(YoungFunction.power(2), 3)
    assert verdict.holds
    assert not verdict.indeterminate

    with pytest.raises(OrliczPreconditionException):
        lemma_fan_probe(YoungFunction.power(4), 3)
