import math
import numpy as np
import pytest
from pyorlicz import YoungFunction, Envelope, NDimYoungFunction, OrliczForm, OrliczIntegral, OrliczKind
from pyorlicz import bar_p, orthotropic_bar, phi_circ, phi_circ_function, phi_n, sublevel_volume, theta_solution, solve_theta
from pyorlicz import log_grid, fitted_exponent
from pyorlicz.numerics import is_nonincreasing
from pyorlicz import OrliczConstructionException, OrliczDomainException
from pyorlicz.aniso import classify_phi_inf, classify_phi_zero, unit_ball_volume

from . import power_An


ISO2 = NDimYoungFunction.isotropic(YoungFunction.power(2), 2)
ISO3 = NDimYoungFunction.isotropic(YoungFunction.power(2), 3)
L1 = NDimYoungFunction.orthotropic([YoungFunction.linear(), YoungFunction.linear()])


@pytest.mark.parametrize(
    "name, ps, exp_val, exp_except",
    [
        ("mixed",   (1, 4),     1.6,  None),
        ("equal",   (2, 2, 2),  2.0,  None),
        ("single",  (3,),       3.0,  None),
        ("below 1", (0.5, 2),   None, OrliczDomainException),
        ("empty",   (),         None, OrliczDomainException),
    ]
)
def test_bar_p(name, ps, exp_val, exp_except):
    if exp_except is None:
        assert bar_p(ps) == pytest.approx(exp_val, rel=1e-12)
    else:
        with pytest.raises(exp_except):
            bar_p(ps)


def test_unit_ball_volume():
    assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-12)
    assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-12)


@pytest.mark.parametrize(
    "name, phi, xi, exp_val",
    [
        ("isotropic",    ISO2,                                                                   [3.0, 4.0],        25.0),
        ("orthotropic",  NDimYoungFunction.orthotropic([YoungFunction.power(2), YoungFunction.power(4)]), [1.0, -2.0], 17.0),
        ("linear image", NDimYoungFunction.linear_image([([[1.0, 1.0]], YoungFunction.power(2))], 2), [1.0, 2.0], 9.0),
        ("black box",    NDimYoungFunction.black_box(lambda x: np.sum(x**2, axis=-1), 3),       [1.0, 2.0, 2.0],   9.0),
        ("origin",       ISO3,                                                                   [0.0, 0.0, 0.0],   0.0),
    ]
)
def test_evaluate(name, phi, xi, exp_val):
    assert phi(xi) == pytest.approx(exp_val, rel=1e-12)


def test_evaluate_errors():
    with pytest.raises(OrliczDomainException):
        ISO2([1.0, 2.0, 3.0])
    with pytest.raises(OrliczDomainException):
        NDimYoungFunction.isotropic(YoungFunction.power(2), 1)
    with pytest.raises(OrliczDomainException):
        NDimYoungFunction.linear_image([([[1.0, 1.0, 1.0]], YoungFunction.power(2))], 2)


def test_form():
    assert ISO2.form == OrliczForm.ISOTROPIC
    assert L1.form == OrliczForm.ORTHOTROPIC
    assert str(L1) == "ortho(linear,linear)"
    assert not NDimYoungFunction.orthotropic([YoungFunction.power(2), YoungFunction.piecewise([(0, 0, 0), (1, 0, 1)])]).nondegenerate


@pytest.mark.parametrize(
    "name, phi, exp_val",
    [
        ("isotropic",   ISO3,                                                                    True),
        ("l1",          L1,                                                                      True),
        ("square root", NDimYoungFunction.black_box(lambda x: np.sqrt(np.linalg.norm(x, axis=-1)), 2), False),
        ("odd",         NDimYoungFunction.black_box(lambda x: np.exp(x[..., 0]) + np.sum(x**2, axis=-1), 2), False),
    ]
)
def test_convexity(name, phi, exp_val):
    assert phi.check_convexity() == exp_val


@pytest.mark.parametrize(
    "name, phi, t, exp_val, rel",
    [
        ("disc",       ISO2, [0.5, 1.0, 4.0],  [0.5 * math.pi, math.pi, 4.0 * math.pi],  1e-9),
        ("ball",       ISO3, [1.0, 4.0],       [4.0 * math.pi / 3.0, 32.0 * math.pi / 3.0], 1e-9),
        ("diamond",    L1,   [1.0, 3.0],       [2.0, 18.0],                               1e-3),
        ("zero level", ISO2, [0.0],            [0.0],                                     1e-9),
    ]
)
def test_sublevel_volume_rays(name, phi, t, exp_val, rel):
    volume, error = sublevel_volume(phi, t)
    assert error is None
    assert volume == pytest.approx(exp_val, rel=rel)


def test_sublevel_volume_batches(monkeypatch):
    monkeypatch.setattr("pyorlicz.aniso.VOLUME_CHUNK", 2000)
    t = np.array([0.5, 1.0, 2.0, 4.0, 8.0])

    volume, error = sublevel_volume(ISO2, t, method="rays")
    assert error is None
    assert volume == pytest.approx(math.pi * t, rel=1e-9)

    volume, error = sublevel_volume(ISO2, t, method="monte_carlo", samples=1000)
    assert len(volume) == len(t)
    assert volume == pytest.approx(math.pi * t, rel=1e-9)
    assert np.all(error < 1e-9)


def test_sublevel_volume_monte_carlo():
    volume, error = sublevel_volume(ISO2, [1.0, 2.0], method="monte_carlo", samples=20000)
    assert volume == pytest.approx([math.pi, 2.0 * math.pi], rel=1e-9)
    assert np.all(error < 1e-6)

    volume, error = sublevel_volume(L1, [1.0], method="monte_carlo", samples=20000)
    assert error[0] > 0
    assert abs(volume[0] - 2.0) < 5.0 * error[0]

    again, _ = sublevel_volume(L1, [1.0], method="monte_carlo", samples=20000)
    assert again[0] == volume[0]


@pytest.mark.parametrize(
    "name, phi, method, exp_except",
    [
        ("unknown method", ISO2, "octree", OrliczDomainException),
        ("dimension four", NDimYoungFunction.isotropic(YoungFunction.power(2), 4), "rays", OrliczDomainException),
        ("unbounded",      NDimYoungFunction.black_box(lambda x: np.where(x[..., 1] > 0, 0.0, np.linalg.norm(x, axis=-1)), 2),
                                 "rays", OrliczConstructionException),
    ]
)
def test_sublevel_volume_errors(name, phi, method, exp_except):
    with pytest.raises(exp_except):
        sublevel_volume(phi, [1.0], method=method)


@pytest.mark.parametrize(
    "name, phi, method",
    [
        ("isotropic auto",   ISO2,                                                                               "auto"),
        ("orthotropic auto", NDimYoungFunction.orthotropic([YoungFunction.power(2), YoungFunction.power(2)]),     "auto"),
        ("isotropic rays",   ISO2,                                                                               "rays"),
        ("ball rays",        ISO3,                                                                               "rays"),
    ]
)
def test_phi_circ(name, phi, method):
    t = np.array([1e-2, 1.0, 1e2])
    assert phi_circ(phi, t, method) == pytest.approx(np.sqrt(t), rel=1e-9)
    assert phi_circ(phi, 4.0, method) == pytest.approx(2.0, rel=1e-9)


def test_orthotropic_bar():
    bar = orthotropic_bar([YoungFunction.power(1), YoungFunction.power(4)])
    assert bar.kind == OrliczKind.POWER
    assert bar.params[0] == pytest.approx(1.6)

    mixed = orthotropic_bar([YoungFunction.power(2), YoungFunction.power_log(2, 0)])
    assert mixed.kind == OrliczKind.CUSTOM
    assert mixed(3.0) == pytest.approx(9.0, rel=1e-9)
    assert mixed.inverse(9.0) == pytest.approx(3.0, rel=1e-9)
    assert mixed.inf_growth.orders == pytest.approx((2.0, 0.0, 0.0))

    with pytest.raises(OrliczConstructionException):
        orthotropic_bar([YoungFunction.power(2), YoungFunction.custom(lambda t: np.full_like(t, np.inf))])


def test_phi_circ_function():
    assert phi_circ_function(ISO2) is ISO2.components[0]

    table = phi_circ_function(ISO2, method="rays")
    rho = np.array([1e-2, 1.0, 10.0])
    assert table.kind == OrliczKind.CUSTOM
    assert table.zero_growth is None
    assert table(rho) == pytest.approx(rho**2, rel=1e-6)
    assert table.inverse(rho**2) == pytest.approx(rho, rel=1e-6)


@pytest.mark.parametrize(
    "name, phi, exp_exponent",
    [
        ("isotropic square", ISO3,                                                                         6.0),
        ("orthotropic 1,4",  NDimYoungFunction.orthotropic([YoungFunction.power(1), YoungFunction.power(4)]), 8.0),
    ]
)
def test_phi_n(name, phi, exp_exponent):
    result = phi_n(phi)
    t = log_grid(1e2, 1e6, 16)
    assert fitted_exponent(t, result.An(t)) == pytest.approx(exp_exponent, abs=1e-3)


@pytest.mark.parametrize(
    "name, ps",
    [
        ("powers 1,4",     (1, 4)),
        ("powers 1.5,1.5", (1.5, 1.5)),
    ]
)
def test_phi_n_rays_matches_reduction(name, ps):
    phi = NDimYoungFunction.orthotropic([YoungFunction.power(p) for p in ps])
    by_volume = phi_n(phi, "rays")
    by_reduction = phi_n(phi)

    verdict = by_volume.An.equivalent(by_reduction.An)
    assert verdict.holds
    assert verdict.constant <= 4.0


@pytest.mark.parametrize(
    "name, phi",
    [
        ("linear image", NDimYoungFunction.linear_image([([[1.0, 0.5], [0.0, 1.0]], YoungFunction.power(2)),
                                                         ([[1.0, -1.0]], YoungFunction.linear())], 2)),
        ("black box",    NDimYoungFunction.black_box(lambda x: np.sum(x**2, axis=-1) + np.sum(x**4, axis=-1), 2)),
        ("black box 3d", NDimYoungFunction.black_box(lambda x: np.sum(np.abs(x)**3, axis=-1), 3)),
    ]
)
def test_phi_circ_nondecreasing(name, phi):
    t = log_grid(1e-3, 1e3, 8)
    r = phi_circ(phi, t, "rays")
    assert np.all(r > 0)
    assert is_nonincreasing(-r)


def test_classify_phi():
    assert classify_phi_zero(ISO3) == OrliczIntegral.CONVERGES
    assert classify_phi_inf(ISO3) == OrliczIntegral.DIVERGES


def test_theta_recovers_scale():
    # Phi_n(s) = Phi(xi / s) when |xi| = H_n^-1(s) s
    solution = theta_solution(ISO3, Envelope.power(1))
    assert solution.conjugate.An(4.0) == pytest.approx(float(power_An(2, 3, 4.0)), rel=1e-6)

    s = log_grid(1e-2, 1e2, points=1000)
    rng = np.random.default_rng(7)
    dirs = rng.normal(size=(len(s), 3))
    dirs /= np.linalg.norm(dirs, axis=-1, keepdims=True)
    xi = (solution.conjugate.Hn.inverse(s) * s)[:, None] * dirs

    theta = solution(xi)
    assert theta == pytest.approx(s, rel=1e-6)
    assert np.all(solution.residual(xi, theta) < 1e-8)


def test_theta_single():
    solution = theta_solution(ISO3, Envelope.one())
    assert solution([0.0, 0.0, 0.0]) == 0.0

    theta = solution([1.0, 0.0, 0.0])
    assert type(theta) is float
    # E = 1 leaves A_n(theta) = 1
    assert solution.conjugate.An(theta) == pytest.approx(1.0, rel=1e-8)

    assert solve_theta(ISO3, Envelope.one(), 3, [1.0, 0.0, 0.0]) == pytest.approx(theta, rel=1e-12)
    with pytest.raises(OrliczDomainException):
        solve_theta(ISO3, Envelope.one(), 2, [1.0, 0.0, 0.0])

    assert solution.to_dict() == {"phi": "iso(power:2)", "envelope": "one", "residual_tol": 1e-8}
