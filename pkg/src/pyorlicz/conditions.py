##
# Admissibility conditions linking A, B and the envelope E, decided from growth classes when
# possible and on log grids otherwise, plus the boundary tables of the classical and Zygmund families.
#
# Young functions only matter up to equivalence, so the grid paths search the smallest scale c >= 1
# for which the inequality holds with arguments divided by c, and fail when that scale keeps growing.
##

import logging
import math

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .aniso import (
    NDimYoungFunction,
    bar_p,
    orthotropic_bar,
    theta_solution,
)
from .conjugate import (
    sobolev_conjugate_sigma,
)
from .const import (
    ANISO_DIRECTIONS,
    ANISO_RADII,
    COMPARE_RTOL,
    COND_GRID_MAX,
    COND_GRID_MIN,
    COND_GRID_POINTS,
    EQUIV_C_MAX,
    LEMMA_GRID_MAX,
    LEMMA_GRID_MIN,
    LIMSUP_LAMBDAS,
    LIMSUP_T_MAX,
    LIMSUP_T_MIN,
    MONTE_CARLO_SEED,
    PROBE_TOL,
    SCALE_TREND,
    TREND_FACTOR,
    OrliczDomainException,
    OrliczEnvelopeKind,
    OrliczGrowthKind,
    OrliczIndeterminateException,
    OrliczIntegral,
    OrliczPreconditionException,
    OrliczTable,
)
from .envelope import (
    Envelope,
)
from .growth import (
    OrliczGrowth,
    conjugate_growth,
    integral_at_infinity,
)
from .numerics import (
    bisect_geometric,
    decade_ratio,
    log_grid,
    round_up,
)
from .young import (
    YoungFunction,
)


_LOGGER = logging.getLogger(__name__)

PROBE_STEP = 1e-2       # relative step beyond a table boundary


@dataclass
class ConditionVerdict:
    holds: bool
    worst_margin: float
    witness: float|None = None
    grid: str = ""
    analytic: bool = False
    constant: float|None = None
    indeterminate: bool = False
    details: dict[str,Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str,Any]:
        def clean(x):
            return x if not isinstance(x, float) or math.isfinite(x) else None
        return {
            "holds": self.holds,
            "worst_margin": clean(self.worst_margin),
            "witness": clean(self.witness),
            "grid": self.grid,
            "analytic": self.analytic,
            "constant": clean(self.constant),
            "indeterminate": self.indeterminate,
            "details": self.details,
        }


def pointwise_margin(rhs: np.ndarray, lhs: np.ndarray) -> tuple[float, float|None, np.ndarray]:
    """Worst signed margin rhs - lhs, its index and the pointwise pass mask"""
    with np.errstate(all="ignore"):
        diff = np.where(np.isposinf(lhs) & np.isposinf(rhs), 0.0, rhs - lhs)
    ok = diff >= -PROBE_TOL * (1.0 + np.abs(np.where(np.isfinite(rhs), rhs, 0.0)))
    diff = np.where(np.isnan(diff), -np.inf, diff)
    idx = int(np.argmin(diff))
    return float(diff[idx]), idx, ok


def _scale_trend(scales: np.ndarray, outer: int) -> bool:
    """True when the scales over the last points do not exceed the rest by more than SCALE_TREND"""
    if len(scales) <= outer:
        return bool(np.all(np.isfinite(scales)))
    head, tail = scales[:-outer], scales[-outer:]
    return bool(np.all(np.isfinite(scales)) and tail.max() <= (1.0 + SCALE_TREND) * head.max())


def _minimal_scale(lhs_at, rhs: np.ndarray, c_max: float = EQUIV_C_MAX) -> np.ndarray:
    """Smallest c in [1, c_max] with lhs_at(c) <= rhs pointwise, inf where none exists"""
    def fits(c):
        with np.errstate(all="ignore"):
            return lhs_at(c) <= rhs * (1.0 + COMPARE_RTOL)

    ones = np.ones_like(rhs)
    at_one = fits(ones)
    at_max = fits(np.full_like(rhs, c_max))
    c = bisect_geometric(fits, ones, np.full_like(rhs, c_max))
    return np.where(at_one, 1.0, np.where(at_max, c, np.inf))


##
# inq-ass2: B(t E(H(t))) <= A(t) near infinity
##
def inq_ass2_growth(a: OrliczGrowth, b: OrliczGrowth, e: OrliczGrowth, sigma: float) -> OrliczGrowth:
    """Class of B(t E(H_sigma(t))) for A, B, E of the given classes"""
    h = conjugate_growth(a, sigma)
    return b.compose(OrliczGrowth.poly(1.0).product(e.compose(h)))


def inq_ass2_holds(a: OrliczGrowth, b: OrliczGrowth, e: OrliczGrowth, sigma: float) -> bool:
    return inq_ass2_growth(a, b, e, sigma).compare(a) <= 0


def check_inq_ass2(A: YoungFunction, B: YoungFunction, E: Envelope, n: int, t0: float = 1.0, sigma: float|None = None,
                   method: str = "auto", points: int = COND_GRID_POINTS, t_max: float = COND_GRID_MAX) -> ConditionVerdict:
    """B(t E(H(t))) <= A(t) for t >= t0, up to equivalence"""
    if not A.is_nondegenerate():
        msg = f"Young function {A.label} is degenerate"
        raise OrliczPreconditionException(msg)
    sigma = float(sigma or n)

    if method in ("auto", "analytic"):
        growths = (A.inf_growth, B.inf_growth, E.growth)
        try:
            if any(g is None for g in growths):
                msg = "growth classes are not known"
                raise OrliczIndeterminateException(msg)
            holds = inq_ass2_holds(*growths, sigma)
            _LOGGER.debug(f"inq-ass2 for A={A}, B={B}, E={E}, sigma={sigma:g} decided by growth: {holds}")
            return ConditionVerdict(holds, 0.0 if holds else -math.inf, None, "growth", True)
        except OrliczIndeterminateException as ex:
            if method == "analytic":
                raise
            _LOGGER.debug(f"inq-ass2 falls back to the grid: {ex}")

    conj = sobolev_conjugate_sigma(A, sigma, n)
    t = log_grid(t0, t_max, points=points)
    a = A(t)
    h = conj.Hn(t)

    def lhs_at(c):
        return B((t / c) * E(h / c))

    margin, idx, _ = pointwise_margin(a, lhs_at(np.ones_like(t)))
    scales = _minimal_scale(lhs_at, a)
    outer = int(np.searchsorted(t, t[-1] / 100.0))
    holds = _scale_trend(scales, len(t) - outer)
    witness = None
    if not holds:
        bad = ~np.isfinite(scales)
        witness = float(t[bad][0]) if np.any(bad) else float(t[int(np.argmax(scales))])
    constant = round_up(float(np.max(scales))) if np.all(np.isfinite(scales)) else math.inf
    grid = f"log[{t0:g},{t_max:g}]x{points}"
    _LOGGER.info(f"inq-ass2 for A={A}, B={B}, E={E} on {grid}: holds={holds}, scale={constant}")
    return ConditionVerdict(holds, margin, witness, grid, False, constant)


##
# Near-zero conditions
##
def _limsup_by_growth(F: OrliczGrowth|None, A: OrliczGrowth|None) -> bool|None:
    """Whether F(lambda t)/A(t) stays bounded as t -> 0 for every lambda, from the classes near zero"""
    if F is None or A is None:
        return None
    match (F.kind, A.kind):
        case (OrliczGrowthKind.EXP_NEG, OrliczGrowthKind.EXP_NEG):
            return F.power > A.power
        case (OrliczGrowthKind.POLY, OrliczGrowthKind.POLY) if F.eps is None and A.eps is None:
            return F.power >= A.power
        case (OrliczGrowthKind.EXP_NEG | OrliczGrowthKind.FLAT, OrliczGrowthKind.POLY):
            return True
        case (OrliczGrowthKind.POLY, OrliczGrowthKind.EXP_NEG | OrliczGrowthKind.FLAT):
            return False
    return None


def limsup_probe(F: YoungFunction, A: YoungFunction, lambdas=LIMSUP_LAMBDAS,
                 t_min: float = LIMSUP_T_MIN, t_max: float = LIMSUP_T_MAX) -> tuple[str, float|None]:
    """
    'holds', 'fails' or 'indeterminate' for limsup_{t->0} F(lambda t)/A(t) < inf,
    with the largest ratio seen on the probe window
    """
    t = log_grid(t_min, t_max, per_decade=64)
    with np.errstate(all="ignore"):
        ratios = [F(lam * t) / A(t) for lam in lambdas]
    finite = [r[np.isfinite(r)] for r in ratios]
    largest = max((float(r.max()) for r in finite if len(r)), default=None)

    known = _limsup_by_growth(F.zero_growth, A.zero_growth)
    if known is not None:
        return ("holds" if known else "fails"), largest

    verdicts = []
    for r in ratios:
        ok = np.isfinite(r)
        if np.any(np.isposinf(r)):
            verdicts.append("fails")
        elif ok.sum() < 2:
            verdicts.append("indeterminate")
        else:
            trend = decade_ratio(t[ok], r[ok], at_end=False)
            if trend > TREND_FACTOR:
                verdicts.append("fails")
            elif trend <= 1.0 + SCALE_TREND:
                verdicts.append("holds")
            else:
                verdicts.append("indeterminate")
    if "fails" in verdicts:
        return "fails", largest
    if "indeterminate" in verdicts:
        return "indeterminate", largest
    return "holds", largest


def check_inq_assD(A: YoungFunction, B: YoungFunction, E: Envelope, F: YoungFunction, t1: float,
                   points: int = COND_GRID_POINTS) -> ConditionVerdict:
    """B(t E(F^-1(A(t)))) <= A(t) on (0, t1] together with limsup F(lambda t)/A(t) < inf as t -> 0"""
    if not t1 > COND_GRID_MIN:
        msg = f"Upper end {t1} must exceed {COND_GRID_MIN:g}"
        raise OrliczDomainException(msg)

    t = log_grid(COND_GRID_MIN, t1, points=points)
    a = A(t)
    lhs = B(t * E(F.inverse(a)))
    margin, idx, ok = pointwise_margin(a, lhs)
    inequality = bool(np.all(ok))
    limsup, largest = limsup_probe(F, A)

    holds = inequality and limsup == "holds"
    witness = None if inequality else float(t[~ok][0])
    grid = f"log[{COND_GRID_MIN:g},{t1:g}]x{points}"
    _LOGGER.info(f"inq-assD for A={A}, B={B}, E={E}, F={F}: inequality={inequality}, limsup={limsup}")
    return ConditionVerdict(
        holds, margin, witness, grid, False, None, limsup == "indeterminate" and inequality,
        {"inequality": inequality, "limsup": limsup, "limsup_max_ratio": largest},
    )


def check_double_a(A: YoungFunction, B: YoungFunction, E: Envelope, t1: float, points: int = COND_GRID_POINTS) -> ConditionVerdict:
    """B(t E(t)) <= A(t) on (0, t1]"""
    t = log_grid(COND_GRID_MIN, t1, points=points)
    a = A(t)
    margin, idx, ok = pointwise_margin(a, B(t * E(t)))
    holds = bool(np.all(ok))
    return ConditionVerdict(holds, margin, None if holds else float(t[~ok][0]), f"log[{COND_GRID_MIN:g},{t1:g}]x{points}")


##
# Orthotropic and anisotropic conditions
##
def check_ortho(As, Bs, E: Envelope, n: int, t0: float = 1.0, method: str = "auto",
                points: int = COND_GRID_POINTS, t_max: float = COND_GRID_MAX) -> ConditionVerdict:
    """B_i(A_i^-1(A_bar(t)) E(H_bar(t))) <= A_bar(t) near infinity for every i"""
    As, Bs = list(As), list(Bs)
    if len(As) != n or len(Bs) != n:
        msg = f"Need {n} components A_i and B_i, got {len(As)} and {len(Bs)}"
        raise OrliczDomainException(msg)
    bar = orthotropic_bar(As)

    if method in ("auto", "analytic"):
        try:
            growths = [bar.inf_growth, E.growth] + [A.inf_growth for A in As] + [B.inf_growth for B in Bs]
            if any(g is None for g in growths):
                msg = "growth classes are not known"
                raise OrliczIndeterminateException(msg)
            h = conjugate_growth(bar.inf_growth, n)
            eh = E.growth.compose(h)
            rows = []
            for A, B in zip(As, Bs):
                inner = A.inf_growth.inverse().compose(bar.inf_growth).product(eh)
                rows.append(B.inf_growth.compose(inner).compare(bar.inf_growth) <= 0)
            holds = all(rows)
            return ConditionVerdict(holds, 0.0 if holds else -math.inf, None, "growth", True, None, False, {"components": rows})
        except OrliczIndeterminateException as ex:
            if method == "analytic":
                raise
            _LOGGER.debug(f"ortho condition falls back to the grid: {ex}")

    conj = sobolev_conjugate_sigma(bar, n, n)
    t = log_grid(t0, t_max, points=points)
    a = bar(t)
    h = conj.Hn(t)
    outer = len(t) - int(np.searchsorted(t, t[-1] / 100.0))
    rows, margins, constants = [], [], []
    for A, B in zip(As, Bs):
        base = A.inverse(a)

        def lhs_at(c, base=base):
            return B((base / c) * E(h / c))

        margin, _, _ = pointwise_margin(a, lhs_at(np.ones_like(t)))
        scales = _minimal_scale(lhs_at, a)
        rows.append(_scale_trend(scales, outer))
        margins.append(margin)
        constants.append(float(np.max(scales)))
    holds = all(rows)
    constant = round_up(max(constants)) if all(math.isfinite(c) for c in constants) else math.inf
    return ConditionVerdict(holds, min(margins), None, f"log[{t0:g},{t_max:g}]x{points}", False, constant, False, {"components": rows})


def _aniso_grid(n: int, directions: int, radii: int) -> np.ndarray:
    if n == 2:
        angles = 2.0 * math.pi * np.arange(directions) / directions
        dirs = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    else:
        rng = np.random.default_rng(MONTE_CARLO_SEED)
        dirs = rng.normal(size=(directions, n))
        dirs /= np.linalg.norm(dirs, axis=-1, keepdims=True)
    rho = log_grid(LEMMA_GRID_MIN, LEMMA_GRID_MAX, points=radii)
    return rho[:, None, None] * dirs[None, :, :]


def check_aniso(phi: NDimYoungFunction, psi: NDimYoungFunction, E: Envelope, n: int, with_constant: bool = False,
                directions: int = ANISO_DIRECTIONS, radii: int = ANISO_RADII) -> ConditionVerdict:
    """
    Psi(xi) <= Phi(xi / E(theta(xi))) up to equivalence on a radius-by-direction grid.
    With with_constant only the outer half of the radii must satisfy the scaled inequality and the
    additive constant needed on the inner half is reported.
    """
    if phi.n != n or psi.n != n:
        msg = f"Dimension {n} does not match the functions of dimension {phi.n} and {psi.n}"
        raise OrliczDomainException(msg)
    if not phi.nondegenerate:
        msg = f"n-dimensional function {phi} is degenerate"
        raise OrliczPreconditionException(msg)

    xi = _aniso_grid(n, directions, radii)
    flat = xi.reshape(-1, n)
    solution = theta_solution(phi, E)
    theta = solution(flat)
    rhs = phi(flat / E(theta)[:, None])
    lhs = psi(flat)

    def lhs_at(c):
        return psi(flat / c[:, None])

    margin, idx, _ = pointwise_margin(rhs, lhs)
    scales = _minimal_scale(lhs_at, rhs).reshape(radii, directions)
    region = scales[radii // 2:] if with_constant else scales
    per_radius = region.max(axis=1)
    holds = _scale_trend(per_radius, max(1, len(per_radius) // 3))
    constant = round_up(float(region.max())) if np.all(np.isfinite(region)) else math.inf

    details = {}
    if with_constant and math.isfinite(constant):
        inner = slice(0, (radii // 2) * directions)
        excess = psi(flat[inner] / constant) - rhs[inner]
        details["additive"] = float(max(0.0, np.max(excess)))
    witness = None if holds else float(np.linalg.norm(flat[idx]))
    grid = f"{directions} directions x {radii} radii on [{LEMMA_GRID_MIN:g},{LEMMA_GRID_MAX:g}]"
    _LOGGER.info(f"Anisotropic condition for Phi={phi}, Psi={psi}, E={E}: holds={holds}, scale={constant}")
    return ConditionVerdict(holds, margin, witness, grid, False, constant, False, details)


##
# Boundary tables
##
@dataclass
class ZygmundRegion:
    table: OrliczTable
    case: str
    n: int
    p: float
    alpha: float
    r: float
    gamma: float
    envelope: str
    q_max: float
    q_strict: bool
    beta_max: float|None
    beta_strict: bool
    unconditional: bool
    validated: bool = False

    HEADER = ["table", "case", "n", "p", "alpha", "r", "gamma", "envelope", "q_max", "q_strict", "beta_max", "beta_strict", "unconditional"]

    def to_row(self) -> list[str]:
        return [
            str(self.table), self.case, str(self.n),
            _fmt(self.p), _fmt(self.alpha), _fmt(self.r), _fmt(self.gamma),
            self.envelope,
            _fmt(self.q_max), _flag(self.q_strict),
            _fmt(self.beta_max), _flag(self.beta_strict),
            _flag(self.unconditional),
        ]

    def to_dict(self) -> dict[str,Any]:
        return {
            "table": str(self.table), "case": self.case, "n": self.n, "p": self.p, "alpha": self.alpha,
            "r": self.r, "gamma": self.gamma, "envelope": self.envelope, "q_max": self.q_max,
            "q_strict": self.q_strict, "beta_max": self.beta_max, "beta_strict": self.beta_strict,
            "unconditional": self.unconditional, "validated": self.validated,
        }


def _fmt(x: float|None) -> str:
    if x is None:
        return ""
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _flag(b: bool) -> str:
    return "true" if b else "false"


def _target(table: OrliczTable, q: float, beta: float|None, log_target: str = "log") -> OrliczGrowth:
    beta = beta or 0.0
    match table:
        case OrliczTable.ZYGMUND:
            return OrliczGrowth.poly(q, beta)
        case OrliczTable.ZYGMUND2:
            return OrliczGrowth.poly(q, 0.0, beta)
        case OrliczTable.CLASSICAL2 if log_target == "loglog":
            return OrliczGrowth.poly(q, 0.0, beta)
        case _:
            return OrliczGrowth.poly(q, beta)


def _check_ranges(p: float, alpha: float):
    if p > 1 or (p == 1 and alpha >= 0):
        return
    msg = f"Parameters p={p}, alpha={alpha} outside the admissible range (p > 1, or p = 1 with alpha >= 0)"
    raise OrliczDomainException(msg)


def zygmund_table(p: float, alpha: float, n: int, envelope_kind, r: float = 1.0, gamma: float = 0.0,
                  table=OrliczTable.ZYGMUND) -> ZygmundRegion:
    """
    Admissible target (q, beta) for A(t) = t^p log^alpha t (table zygmund), t^p (log log t)^alpha (zygmund2)
    or t^p (classical, classical2), given the envelope kind. Each row is cross-checked on growth classes.
    """
    table = OrliczTable.from_str(str(table))
    kind = OrliczEnvelopeKind.from_str(str(envelope_kind))
    p, alpha, r, gamma = float(p), float(alpha), float(r), float(gamma)
    if n < 2:
        msg = f"Dimension must be at least 2, got {n}"
        raise OrliczDomainException(msg)
    if table in (OrliczTable.CLASSICAL, OrliczTable.CLASSICAL2):
        alpha = 0.0
    _check_ranges(p, alpha)

    nn = n / (n - 1.0)
    match table:
        case OrliczTable.ZYGMUND | OrliczTable.CLASSICAL:
            a = OrliczGrowth.poly(p, alpha)
        case OrliczTable.ZYGMUND2:
            a = OrliczGrowth.poly(p, 0.0, alpha)
        case _:
            a = OrliczGrowth.poly(p)

    region = _region(table, kind, p, alpha, n, nn, r, gamma)
    if region is None:
        msg = f"No {table} row for p={p:g}, alpha={alpha:g}, n={n} with envelope {kind}"
        raise OrliczDomainException(msg)
    case, envelope, q_max, q_strict, beta_max, beta_strict, unconditional, log_target = region

    if unconditional:
        validated = integral_at_infinity(a, n) == OrliczIntegral.CONVERGES
        env = "any"
    else:
        e = envelope.growth
        beta_probe = beta_max if beta_max is not None else alpha
        if beta_max is not None:
            step = PROBE_STEP
            inside = _target(table, q_max, beta_max - step if beta_strict else beta_max, log_target)
            beyond = _target(table, q_max, beta_max if beta_strict else beta_max + step, log_target)
        else:
            inside = _target(table, q_max * (1.0 - PROBE_STEP) if q_strict else q_max, beta_probe, log_target)
            beyond = _target(table, q_max if q_strict else q_max * (1.0 + PROBE_STEP), beta_probe, log_target)
        validated = inq_ass2_holds(a, inside, e, n) and not inq_ass2_holds(a, beyond, e, n)
        env = envelope.to_str()

    if not validated:
        _LOGGER.warning(f"{table} row '{case}' for p={p:g}, alpha={alpha:g}, n={n} did not validate on growth classes")
    return ZygmundRegion(table, case, n, p, alpha, r, gamma, env, q_max, q_strict, beta_max, beta_strict, unconditional, validated)


def _region(table, kind, p, alpha, n, nn, r, gamma):
    """(case, envelope, q_max, q_strict, beta_max, beta_strict, unconditional, log_target) or None"""
    tol = 1e-12
    below, equal, above = p < n - tol, abs(p - n) <= tol, p > n + tol
    denom = n + r * (n - p)

    if kind == OrliczEnvelopeKind.ONE and table in (OrliczTable.ZYGMUND, OrliczTable.ZYGMUND2):
        return ("identity", Envelope.one(), p, False, alpha, False, False, "log")

    match table:
        case OrliczTable.ZYGMUND:
            if below and kind in (OrliczEnvelopeKind.POWER_LOG, OrliczEnvelopeKind.POWER):
                env = Envelope.power_log(r, gamma) if kind == OrliczEnvelopeKind.POWER_LOG else Envelope.power(r)
                g = gamma if kind == OrliczEnvelopeKind.POWER_LOG else 0.0
                return ("p<n", env, n * p / denom, False, n * (alpha * (1 + r) - g * p) / denom, False, False, "log")
            if equal and alpha < n - 1 - tol:
                if kind == OrliczEnvelopeKind.EXP:
                    return ("p=n,alpha<n-1", Envelope.exp(n / (n - 1 - alpha)), n, True, None, False, False, "log")
                if kind == OrliczEnvelopeKind.POWER:
                    return ("p=q=n,alpha<n-1", Envelope.power(r), n, False, alpha * (1 + r) - r * (n - 1), False, False, "log")
            if equal and abs(alpha - (n - 1)) <= tol:
                if kind == OrliczEnvelopeKind.EXP_EXP:
                    return ("p=n,alpha=n-1", Envelope.exp_exp(nn), n, True, None, False, False, "log")
                if kind == OrliczEnvelopeKind.EXP:
                    return ("p=q=n,alpha=n-1", Envelope.exp(nn), n, False, n - 1.0, True, False, "log")
            if (equal and alpha > n - 1 + tol) or above:
                return ("p=q=n,alpha>n-1" if equal else "p=q>n", None, p, False, alpha, False, True, "log")

        case OrliczTable.ZYGMUND2:
            if below and kind in (OrliczEnvelopeKind.POWER_LOGLOG, OrliczEnvelopeKind.POWER):
                env = Envelope.power_loglog(r, gamma) if kind == OrliczEnvelopeKind.POWER_LOGLOG else Envelope.power(r)
                g = gamma if kind == OrliczEnvelopeKind.POWER_LOGLOG else 0.0
                return ("p<n", env, n * p / denom, False, n * (alpha * (1 + r) - g * p) / denom, False, False, "loglog")
            if equal and kind == OrliczEnvelopeKind.EXP_POWER_LOG:
                return ("p=n", Envelope.exp_power_log(nn, alpha / (n - 1)), n, True, None, False, False, "loglog")
            if equal and kind == OrliczEnvelopeKind.LOG_POWER and gamma > 0:
                return ("p=q=n", Envelope.log_power(gamma), n, False, alpha - n * gamma, False, False, "loglog")
            if above:
                return ("p=q>n", None, p, False, alpha, False, True, "loglog")

        case OrliczTable.CLASSICAL:
            if below and kind == OrliczEnvelopeKind.POWER:
                return ("p<n", Envelope.power(r), n * p / denom, False, None, False, False, "log")
            if equal and kind == OrliczEnvelopeKind.ONE:
                return ("p=n", Envelope.one(), n, False, None, False, False, "log")
            if equal and kind == OrliczEnvelopeKind.POWER:
                return ("p=n", Envelope.power(r), n, True, None, False, False, "log")
            if above:
                return ("p>n", None, p, False, None, False, True, "log")

        case OrliczTable.CLASSICAL2 if equal:
            if kind == OrliczEnvelopeKind.EXP:
                return ("p=n", Envelope.exp(nn), n, True, None, False, False, "log")
            if kind == OrliczEnvelopeKind.POWER:
                return ("p=n", Envelope.power(r), n, False, -r * (n - 1), False, False, "log")
            if kind == OrliczEnvelopeKind.LOG_POWER:
                return ("p=n", Envelope.log_power(r), n, False, -r * n, False, False, "loglog")

    return None


def ortho_table(ps, n: int, envelope_kind=OrliczEnvelopeKind.POWER, r: float = 1.0) -> list[ZygmundRegion]:
    """Admissible q_i for orthotropic power components A_i = t^{p_i}, one row per component"""
    ps = [float(p) for p in ps]
    if len(ps) != n:
        msg = f"Need {n} exponents, got {len(ps)}"
        raise OrliczDomainException(msg)
    kind = OrliczEnvelopeKind.from_str(str(envelope_kind))
    pb = bar_p(ps)
    bar = OrliczGrowth.poly(pb)
    h = conjugate_growth(bar, n)

    tol = 1e-12
    rows = []
    for i, p in enumerate(ps):
        case = f"i={i + 1}"
        if pb > n + tol:
            rows.append(ZygmundRegion(OrliczTable.ORTHO, case, n, p, 0.0, r, 0.0, "any", p, False, None, False, True,
                                      integral_at_infinity(bar, n) == OrliczIntegral.CONVERGES))
            continue

        if pb < n - tol and kind == OrliczEnvelopeKind.POWER:
            envelope = Envelope.power(r)
            q, strict = pb * n * p / (n * pb + p * r * (n - pb)), False
        elif abs(pb - n) <= tol and kind == OrliczEnvelopeKind.EXP:
            envelope = Envelope.exp(n / (n - 1.0))
            q, strict = p, True
        else:
            msg = f"No orthotropic row for bar p={pb:g}, n={n} with envelope {kind}"
            raise OrliczDomainException(msg)

        inner = OrliczGrowth.poly(p).inverse().compose(bar).product(envelope.growth.compose(h))
        def holds(qq):
            return OrliczGrowth.poly(qq).compose(inner).compare(bar) <= 0
        inside = q * (1.0 - PROBE_STEP) if strict else q
        beyond = q if strict else q * (1.0 + PROBE_STEP)
        rows.append(ZygmundRegion(OrliczTable.ORTHO, case, n, p, 0.0, r, 0.0, envelope.to_str(), q, strict, None, False, False,
                                  holds(inside) and not holds(beyond)))
    return rows


def table_rows(table, sweeps) -> list[ZygmundRegion]:
    """Rows for a table from sweep records with keys p (or ps), alpha, n, envelope, r, gamma"""
    table = OrliczTable.from_str(str(table))
    rows = []
    for s in sweeps:
        if table == OrliczTable.ORTHO:
            rows.extend(ortho_table(s['ps'], s['n'], s.get('envelope', 'power'), s.get('r', 1.0)))
        else:
            rows.append(zygmund_table(s['p'], s.get('alpha', 0.0), s['n'], s.get('envelope', 'power'),
                                      s.get('r', 1.0), s.get('gamma', 0.0), table))
    return rows
