##
# The composition operator u -> f(u), continuity experiments, the modular Poincare-Sobolev probe
# and the norm-topology counterexample.
##

import logging
import math

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from scipy.special import lambertw

from .conditions import (
    ConditionVerdict,
    check_inq_ass2,
    check_inq_assD,
    limsup_probe,
    pointwise_margin,
)
from .conjugate import (
    classify_integral_zero,
    sobolev_conjugate,
)
from .const import (
    COND_GRID_MIN,
    COUNTER_TAIL_K,
    DEFAULT_K_LIST,
    LEMMA_GRID_MAX,
    LEMMA_GRID_MIN,
    LEMMA_GRID_POINTS,
    LIMSUP_LAMBDAS,
    MODULAR_RTOL,
    POINCARE_DRIFT,
    PROBE_POINTS,
    PROBE_TOL,
    OrliczDomainException,
    OrliczIntegral,
    OrliczPreconditionException,
    OrliczSolverException,
)
from .envelope import (
    Envelope,
)
from .growth import (
    OrliczGrowth,
)
from .modular import (
    LOWER,
    BoxDomain,
    ModularReport,
    TestFunction,
    modular_convergence,
    modular_integral,
    quadrature_rule,
    tensor_integral,
    w1a_quantities,
)
from .numerics import (
    bisect_geometric,
    integrate_log,
    log_grid,
    worker_count,
)
from .young import (
    YoungFunction,
)


_LOGGER = logging.getLogger(__name__)

CONTINUITY_FACTOR = 24.0
COUNTER_LAMBDAS = (0.25, 0.5, 1.0, 2.0, 4.0)
COUNTER_DELTAS = (1e-3, 1e-4, 1e-6)
COUNTER_DECAY = 1e-3
STRIP_RTOL = 1e-6
POINCARE_LEVEL = 1
POINCARE_RTOL = 1e-6
POINCARE_C_MIN = 1e-12
POINCARE_MAX_DOUBLINGS = 200


@dataclass(frozen=True)
class LipschitzSpec:
    """f with a Borel derivative bounded by kappa E(kappa |t|)"""
    f: Callable
    fprime: Callable
    kappa: float = 1.0
    envelope: Envelope = field(default_factory=Envelope.one)
    global_lipschitz: float|None = None
    label: str = "f"

    def __post_init__(self):
        if not self.kappa > 0:
            msg = f"Lipschitz constant kappa must be positive, got {self.kappa}"
            raise OrliczDomainException(msg)

    @property
    def f_at_zero(self) -> float:
        return float(self.f(np.zeros(1))[0])

    def check_envelope(self, grid=None) -> bool:
        """|f'(t)| <= kappa E(kappa |t|) on a symmetric probe grid"""
        if grid is None:
            half = log_grid(1e-6, 1e6, points=PROBE_POINTS)
            grid = np.concatenate([-half[::-1], [0.0], half])
        t = np.asarray(grid, dtype=float)
        lhs = np.abs(self.fprime(t))
        rhs = self.kappa * self.envelope(self.kappa * np.abs(t))
        ok = lhs <= rhs * (1.0 + PROBE_TOL) + PROBE_TOL
        if not np.all(ok):
            _LOGGER.warning(f"Envelope {self.envelope} does not bound the derivative of {self.label} at t={t[~ok][0]:g}")
        return bool(np.all(ok))

    def require_zero(self):
        if self.f_at_zero != 0.0:
            msg = f"{self.label} must vanish at zero, got f(0)={self.f_at_zero:g}"
            raise OrliczPreconditionException(msg)

    def __str__(self):
        return self.label


def compose(spec: LipschitzSpec, u: TestFunction) -> TestFunction:
    """f(u) with gradient f'(u) grad u"""
    return TestFunction(
        lambda x: spec.f(u(x)),
        lambda x: spec.fprime(u(x))[..., None] * u.grad(x),
        f"{spec.label}({u.label})",
        u.singular_faces,
    )


def truncate(u: TestFunction, s: float) -> TestFunction:
    """g_s(u): zero where |u| < s, u - s sign(u) elsewhere"""
    if not s > 0:
        msg = f"Truncation level must be positive, got {s}"
        raise OrliczDomainException(msg)
    s = float(s)

    def value(x):
        v = u(x)
        return np.sign(v) * np.maximum(0.0, np.abs(v) - s)

    def gradient(x):
        return np.where((np.abs(u(x)) >= s)[..., None], u.grad(x), 0.0)

    return TestFunction(value, gradient, f"g_{s:g}({u.label})", u.singular_faces)


##
# Continuity experiments
##
@dataclass
class ContinuityReport:
    condition: ConditionVerdict
    source: ModularReport
    lam: float
    norm_limit: float
    predicted: float
    image: ModularReport

    @property
    def converges_at_predicted(self) -> bool:
        return self.predicted in self.image.converging_lambdas

    def to_dict(self) -> dict[str,Any]:
        return {
            "condition": self.condition.to_dict(),
            "source": self.source.to_dict(),
            "lambda": self.lam,
            "norm_limit": self.norm_limit,
            "predicted": self.predicted,
            "image": self.image.to_dict(),
            "converges_at_predicted": self.converges_at_predicted,
        }


def continuity_experiment(spec: LipschitzSpec, seq, limit: TestFunction, A: YoungFunction, B: YoungFunction,
                          domain: BoxDomain, lambda_grid, indices=None, n: int|None = None) -> ContinuityReport:
    """
    f(u_k) -> f(u) modularly in W^{1,B} with the predicted scale 24 kappa max(lambda, ||u||_{W^{1,A}}),
    where lambda is the smallest grid scale at which u_k -> u modularly in W^{1,A}
    """
    n = n or domain.n
    if not spec.check_envelope():
        msg = f"Envelope {spec.envelope} does not bound the derivative of {spec}"
        raise OrliczPreconditionException(msg)

    condition = check_inq_ass2(A, B, spec.envelope, n)
    if not condition.holds:
        msg = f"Condition inq-ass2 fails for A={A}, B={B}, E={spec.envelope}, n={n}; experiment refused"
        raise OrliczPreconditionException(msg)

    if callable(seq):
        if indices is None:
            indices = list(DEFAULT_K_LIST)
        members = [seq(k) for k in indices]
    else:
        members = list(seq)
    source = modular_convergence(members, limit, A, domain, lambda_grid, indices, "both")
    if not math.isfinite(source.smallest_converging_lambda):
        msg = f"Sequence does not converge modularly to {limit.label} at any lambda of the grid; experiment refused"
        raise OrliczPreconditionException(msg)

    lam = source.smallest_converging_lambda
    norm_limit = w1a_quantities(limit, A, domain).norm
    predicted = CONTINUITY_FACTOR * spec.kappa * max(lam, norm_limit)
    _LOGGER.info(f"Predicted image scale {predicted:g} from lambda={lam:g}, norm={norm_limit:g}")

    images = [compose(spec, u_k) for u_k in members]
    image_grid = sorted(set(source.lambda_grid) | {predicted})
    image = modular_convergence(images, compose(spec, limit), B, domain, image_grid, source.indices, "both")
    report = ContinuityReport(condition, source, lam, norm_limit, predicted, image)
    _LOGGER.info(f"Images under {spec} converge at the predicted scale: {report.converges_at_predicted}")
    return report


##
# The counterexample: A(t) = t e^t, f(t) = max(0, |t| - 1), u = 1 + x_1 (log x_1 - 1)
##
def _texp_inverse(s):
    return np.real(lambertw(np.asarray(s, dtype=float)))


COUNTER_A = YoungFunction.custom(
    lambda t: t * np.exp(t), OrliczGrowth.poly(1.0), OrliczGrowth.exp(1.0), _texp_inverse, "texp",
)

COUNTER_F = LipschitzSpec(
    lambda t: np.maximum(0.0, np.abs(t) - 1.0),
    lambda t: np.where(t >= 1.0, 1.0, np.where(t < -1.0, -1.0, 0.0)),
    1.0, Envelope.one(), 1.0, "max(0,|t|-1)",
)


def counter_function(n: int, shift: float = 0.0) -> TestFunction:
    """1 + x_1 (log x_1 - 1) + shift on (0,1)^n, singular at x_1 = 0"""
    def value(x):
        x1 = x[..., 0]
        with np.errstate(all="ignore"):
            return 1.0 + np.where(x1 > 0, x1 * (np.log(x1) - 1.0), 0.0) + shift

    def gradient(x):
        g = np.zeros_like(x)
        with np.errstate(all="ignore"):
            g[..., 0] = np.log(x[..., 0])
        return g

    return TestFunction(value, gradient, f"u+{shift:g}" if shift else "u", ((0, LOWER),))


def counter_shift(k: int) -> float:
    """(log k + 1)/k"""
    return (math.log(k) + 1.0) / k


def strip_closed_form(k: int, delta: float) -> float:
    """int over (delta, 1/k) of A(|log x|) = ((log delta)^2 - (log k)^2)/2"""
    return (math.log(delta)**2 - math.log(k)**2) / 2.0


@dataclass
class StripRow:
    k: int
    delta: float
    lam: float
    quadrature: float|None
    closed_form: float|None
    rel_error: float|None
    note: str = ""


@dataclass
class CounterexampleReport:
    n: int
    k_list: list[int]
    delta_list: list[float]
    lambda_grid: list[float]
    source: ModularReport
    decay: list[dict[str,Any]]
    strips: list[StripRow]
    image_trend: dict[float,str]
    diverges: bool

    HEADER = ["section", "k", "delta", "lambda", "value", "closed_form", "rel_error", "note"]

    def to_rows(self) -> list[list[Any]]:
        rows = []
        for k, lam, value in self.source.to_rows():
            rows.append(["source", k, "", lam, value, "", "", ""])
        for d in self.decay:
            rows.append(["decay", d['final_k'], "", d['lambda'], d['final'], "", d['ratio'], "decays" if d['decays'] else "stalls"])
        for s in self.strips:
            rows.append(["strip", s.k, s.delta, s.lam, _blank(s.quadrature), _blank(s.closed_form), _blank(s.rel_error), s.note])
        for lam, trend in self.image_trend.items():
            rows.append(["trend", "", "", lam, "", "", "", trend])
        rows.append(["verdict", "", "", "", "", "", "", "diverges" if self.diverges else "inconclusive"])
        return rows

    def to_dict(self) -> dict[str,Any]:
        return {
            "n": self.n,
            "k_list": self.k_list,
            "delta_list": self.delta_list,
            "lambda_grid": self.lambda_grid,
            "source": self.source.to_dict(),
            "decay": self.decay,
            "strips": [s.__dict__ for s in self.strips],
            "image_trend": {str(k): v for k, v in self.image_trend.items()},
            "diverges": self.diverges,
        }


def _blank(x):
    return "" if x is None else x


def _strip_integral(diff: TestFunction, n: int, lam: float, a: float, b: float) -> float:
    """int over (a, b) x (0,1)^{n-1} of A(|grad diff|/lam) for a difference depending on x_1 only"""
    def g(t):
        x = np.full(np.shape(t) + (n,), 0.5)
        x[..., 0] = t
        return COUNTER_A(np.linalg.norm(diff.grad(x), axis=-1) / lam)
    return integrate_log(g, a, b)


def _delta_trend(values: list[float], deltas: list[float]) -> str:
    """'diverges' when the per-decade increments toward zero do not decay"""
    steps = [
        (v1 - v0) / math.log10(d0 / d1)
        for v0, v1, d0, d1 in zip(values, values[1:], deltas, deltas[1:])
    ]
    if steps and all(s > 0 for s in steps) and all(b >= a for a, b in zip(steps, steps[1:])):
        return "diverges"
    return "converges"


def counterexample_run(k_list=DEFAULT_K_LIST, delta_list=COUNTER_DELTAS, n: int = 2,
                       lambda_grid=COUNTER_LAMBDAS, tail_k: int = COUNTER_TAIL_K) -> CounterexampleReport:
    """
    u_k -> u in norm in W^{1,A}(0,1)^n while the gradients of f(u_k) keep a divergent strip integral
    near x_1 = 0, so f(u_k) does not converge to f(u) in norm.
    """
    k_list = [int(k) for k in k_list]
    delta_list = sorted((float(d) for d in delta_list), reverse=True)
    lambda_grid = [float(x) for x in lambda_grid]
    if n < 1:
        msg = f"Dimension must be positive, got {n}"
        raise OrliczDomainException(msg)
    if not k_list or any(b <= a for a, b in zip(k_list, k_list[1:])) or k_list[0] < 2:
        msg = f"Indices must be increasing integers from 2 on, got {k_list}"
        raise OrliczDomainException(msg)

    domain = BoxDomain.unit(n)
    u = counter_function(n)
    fu = compose(COUNTER_F, u)

    source = modular_convergence(lambda k: counter_function(n, counter_shift(k)), u, COUNTER_A, domain, lambda_grid, k_list, "both")

    # the difference u_k - u is constant, so the decay is followed on the dyadic continuation
    tail = [k_list[-1] * 2**j for j in range(1, 64) if k_list[-1] * 2**j <= tail_k]
    decay = []
    for j, lam in enumerate(lambda_grid):
        initial = source.modular_values[0][j]
        final_k, final = k_list[-1], source.modular_values[-1][j]
        for k in tail:
            if final <= COUNTER_DECAY * initial:
                break
            final_k = k
            final = modular_integral(counter_function(n, counter_shift(k)) - u, COUNTER_A, lam, domain, "both")
        ratio = final / initial if initial > 0 else 0.0
        decay.append({"lambda": lam, "initial": initial, "final": final, "final_k": final_k, "ratio": ratio,
                      "decays": ratio <= COUNTER_DECAY})

    def strip_rows(k: int) -> list[StripRow]:
        fuk = compose(COUNTER_F, counter_function(n, counter_shift(k)))
        diff = fuk - fu
        rows = []
        for lam in lambda_grid:
            for delta in delta_list:
                if 1.0 / k <= delta:
                    rows.append(StripRow(k, delta, lam, None, None, None, "skipped: 1/k <= delta"))
                    continue
                value = _strip_integral(diff, n, lam, delta, 1.0 / k)
                if lam == 1.0:
                    exact = strip_closed_form(k, delta)
                    rows.append(StripRow(k, delta, lam, value, exact, abs(value - exact) / exact))
                else:
                    rows.append(StripRow(k, delta, lam, value, None, None))
        return rows

    with ThreadPoolExecutor(max_workers=worker_count()) as executor:
        strips = [row for rows in executor.map(strip_rows, k_list) for row in rows]

    image_trend = {}
    for lam in lambda_grid:
        trends = []
        for k in k_list:
            rows = [s for s in strips if s.k == k and s.lam == lam and s.quadrature is not None]
            if len(rows) >= 2:
                trends.append(_delta_trend([s.quadrature for s in rows], [s.delta for s in rows]))
        image_trend[lam] = "diverges" if trends and all(t == "diverges" for t in trends) else "converges"

    exact_rows = [s for s in strips if s.closed_form is not None]
    matches = bool(exact_rows) and all(s.rel_error <= STRIP_RTOL for s in exact_rows)
    diverges = matches and image_trend.get(1.0) == "diverges"
    for s in exact_rows:
        if s.rel_error > STRIP_RTOL:
            _LOGGER.warning(f"Strip integral for k={s.k}, delta={s.delta:g} is off the closed form by {s.rel_error:.2e}")

    report = CounterexampleReport(n, k_list, delta_list, lambda_grid, source, decay, strips, image_trend, diverges)
    _LOGGER.info(f"Counterexample in dimension {n}: source converges in norm={source.norm_convergence}, image diverges={diverges}")
    return report


##
# Poincare-Sobolev probe
##
@dataclass
class PoincareReport:
    labels: list[str]
    constants: list[float]
    constants_refined: list[float]
    c_star: float
    c_star_refined: float

    @property
    def drift(self) -> float:
        if self.c_star == 0:
            return 0.0
        return abs(self.c_star_refined - self.c_star) / self.c_star

    @property
    def stable(self) -> bool:
        return math.isfinite(self.c_star_refined) and self.drift <= POINCARE_DRIFT

    def to_dict(self) -> dict[str,Any]:
        return {
            "labels": self.labels,
            "constants": self.constants,
            "constants_refined": self.constants_refined,
            "c_star": self.c_star,
            "c_star_refined": self.c_star_refined,
            "drift": self.drift,
            "stable": self.stable,
        }


def _poincare_constant(u: TestFunction, A: YoungFunction, An: YoungFunction, rule) -> float:
    """Smallest c with int A_n(|u| / (c G^{1/n})) <= G, G = int A(|grad u|), on a fixed rule"""
    n = len(rule)
    gradient = tensor_integral(lambda x: A(np.linalg.norm(u.grad(x), axis=-1)), rule)
    if gradient == 0:
        return 0.0
    scale = gradient**(1.0 / n)

    def fits(c):
        c = float(c)
        return np.asarray(tensor_integral(lambda x: An(np.abs(u(x)) / (c * scale)), rule) <= gradient * (1.0 + MODULAR_RTOL))

    hi = 1.0
    for _ in range(POINCARE_MAX_DOUBLINGS):
        if fits(hi):
            break
        hi *= 2.0
    else:
        msg = f"No Poincare constant found for {u.label} below {hi:g}"
        raise OrliczSolverException(msg)
    lo = hi / 2.0
    while fits(lo):
        if lo < POINCARE_C_MIN:
            return 0.0
        lo /= 2.0
    return float(bisect_geometric(fits, lo, hi, rtol=POINCARE_RTOL))


def poincare_probe(corpus, A: YoungFunction, n: int, domain: BoxDomain|None = None, level: int = POINCARE_LEVEL) -> PoincareReport:
    """
    Smallest c per function with int A_n(|u| / (c (int A(|grad u|))^{1/n})) <= int A(|grad u|),
    at a quadrature level and one level finer
    """
    domain = domain or BoxDomain.unit(n)
    if domain.n != n:
        msg = f"Domain of dimension {domain.n} does not match n={n}"
        raise OrliczDomainException(msg)
    An = sobolev_conjugate(A, n).An
    corpus = list(corpus)

    def run(lv: int) -> list[float]:
        rule = quadrature_rule(domain, lv)
        with ThreadPoolExecutor(max_workers=worker_count()) as executor:
            return list(executor.map(lambda u: _poincare_constant(u, A, An, rule), corpus))

    coarse = run(level)
    fine = run(level + 1)
    report = PoincareReport(
        [u.label for u in corpus], coarse, fine,
        max(coarse, default=0.0), max(fine, default=0.0),
    )
    _LOGGER.info(f"Poincare constant for {A}, n={n}: {report.c_star:g} -> {report.c_star_refined:g} (drift {report.drift:.2%})")
    return report


##
# Inequalities from the technical lemmas, on a two-variable log grid
##
def _lemma_grid(points: int) -> tuple[np.ndarray, np.ndarray]:
    s = np.concatenate([[0.0], log_grid(LEMMA_GRID_MIN, LEMMA_GRID_MAX, points=points)])
    t = log_grid(LEMMA_GRID_MIN, LEMMA_GRID_MAX, points=points)
    return np.meshgrid(s, t, indexing='ij')


def lemma_lem1_test(A: YoungFunction, B: YoungFunction, E: Envelope, n: int, t0: float = 1.0,
                    points: int = LEMMA_GRID_POINTS) -> ConditionVerdict:
    """B(E(s) t/2) <= c + A_n(s) + A(t) with c = B(t0 E(A_n^-1(A(t0))))"""
    hypothesis = check_inq_ass2(A, B, E, n, t0)
    if not hypothesis.holds:
        msg = f"Condition inq-ass2 fails for A={A}, B={B}, E={E}; lemma test refused"
        raise OrliczPreconditionException(msg)

    An = sobolev_conjugate(A, n).An
    c = float(B(t0 * E(An.inverse(A(t0)))))
    s, t = _lemma_grid(points)
    lhs = B(E(s) * t / 2.0)
    rhs = c + An(s) + A(t)
    margin, idx, ok = pointwise_margin(rhs.ravel(), lhs.ravel())
    holds = bool(np.all(ok))
    grid = f"s in {{0}} + log[{LEMMA_GRID_MIN:g},{LEMMA_GRID_MAX:g}]x{points}, t log x{points}"
    _LOGGER.info(f"Lemma inequality for A={A}, B={B}, E={E}, n={n} with c={c:g}: holds={holds}, margin={margin:g}")
    return ConditionVerdict(holds, margin, None if holds else float(t.ravel()[idx]), grid, False, c, False,
                            {"s": float(s.ravel()[idx])})


def lemma_inqd_test(A: YoungFunction, B: YoungFunction, E: Envelope, F: YoungFunction,
                    points: int = LEMMA_GRID_POINTS) -> ConditionVerdict:
    """B(E(s) t) <= F(s) + A(t), after checking B(t E(F^-1(A(t)))) <= A(t) for all t"""
    hypothesis = check_inq_assD(A, B, E, F, LEMMA_GRID_MAX)
    if not hypothesis.details['inequality']:
        msg = f"Hypothesis B(tE(F^-1(A(t)))) <= A(t) fails for A={A}, B={B}, E={E}, F={F}; lemma test refused"
        raise OrliczPreconditionException(msg)

    s, t = _lemma_grid(points)
    lhs = B(E(s) * t)
    rhs = F(s) + A(t)
    margin, idx, ok = pointwise_margin(rhs.ravel(), lhs.ravel())
    holds = bool(np.all(ok))
    return ConditionVerdict(holds, margin, None if holds else float(t.ravel()[idx]),
                            f"log[{LEMMA_GRID_MIN:g},{LEMMA_GRID_MAX:g}]^2x{points}", False, None, False,
                            {"s": float(s.ravel()[idx])})


def lemma_fan_probe(A: YoungFunction, n: int, lambdas=LIMSUP_LAMBDAS) -> ConditionVerdict:
    """limsup_{t->0} A_n(lambda t)/A(t) < inf for A whose defining integral converges at zero"""
    if classify_integral_zero(A, n) != OrliczIntegral.CONVERGES:
        msg = f"Integral at zero does not converge for {A}; probe refused"
        raise OrliczPreconditionException(msg)
    An = sobolev_conjugate(A, n).An
    verdict, largest = limsup_probe(An, A, lambdas)
    return ConditionVerdict(
        verdict == "holds", 0.0, None, f"log[{COND_GRID_MIN:g},1e-2], lambda in {tuple(lambdas)}",
        An.zero_growth is not None and A.zero_growth is not None, largest, verdict == "indeterminate",
    )
