##
# Modular integrals, Luxemburg norms and modular convergence on box domains.
#
# Integrals use tensor-product Gauss-Legendre panels; axes with a singular face get panels that
# shrink geometrically toward that face. Refinement levels increase both the grading depth and
# the number of uniform panels until two successive levels agree.
##

import logging
import math

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .aniso import (
    NDimYoungFunction,
    phi_circ_function,
)
from .const import (
    CONVERGENCE_TOL,
    DIVERGENCE_BOUND,
    FD_POINTS,
    FD_RTOL,
    GRADING_BASE,
    GRADING_MAX,
    GRADING_STEP,
    LUX_LAMBDA_MAX,
    MODULAR_RTOL,
    MONTE_CARLO_SEED,
    QUAD_CHUNK,
    QUAD_GAUSS_NODES,
    QUAD_MAX_LEVEL,
    QUAD_MAX_POINTS,
    OrliczDomainException,
    OrliczQuadratureException,
)
from .numerics import (
    TINY,
    bisect_geometric,
    gauss_legendre,
    is_nonincreasing,
    worker_count,
)
from .young import (
    YoungFunction,
)


_LOGGER = logging.getLogger(__name__)

LOWER = 0
UPPER = 1
PARTS = ("value", "gradient", "both")


@dataclass(frozen=True)
class BoxDomain:
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    singular_faces: tuple[tuple[int, int], ...] = ()
    truncation: float|None = None
    tail: Callable|None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'lower', tuple(float(x) for x in self.lower))
        object.__setattr__(self, 'upper', tuple(float(x) for x in self.upper))
        object.__setattr__(self, 'singular_faces', tuple((int(a), int(s)) for a, s in self.singular_faces))

        if len(self.lower) != len(self.upper) or not 1 <= len(self.lower) <= 3:
            msg = f"Box bounds must have equal length between 1 and 3, got {self.lower} and {self.upper}"
            raise OrliczDomainException(msg)
        if any(not lo < hi for lo, hi in zip(self.lower, self.upper)):
            msg = f"Box bounds must satisfy lower < upper, got {self.lower} and {self.upper}"
            raise OrliczDomainException(msg)
        if any(not 0 <= a < self.n or s not in (LOWER, UPPER) for a, s in self.singular_faces):
            msg = f"Invalid singular faces {self.singular_faces} for dimension {self.n}"
            raise OrliczDomainException(msg)
        if not self.is_bounded and (self.truncation is None or self.tail is None):
            msg = "Unbounded box needs a truncation radius and a tail bound"
            raise OrliczDomainException(msg)

    @staticmethod
    def unit(n: int, singular_faces=()):
        return BoxDomain((0.0,) * n, (1.0,) * n, tuple(singular_faces))

    @staticmethod
    def interval(a: float, b: float, singular_faces=()):
        return BoxDomain((a,), (b,), tuple(singular_faces))

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def is_bounded(self) -> bool:
        return all(math.isfinite(x) for x in self.lower + self.upper)

    @property
    def measure(self) -> float:
        return math.prod(hi - lo for lo, hi in zip(self.lower, self.upper))

    @property
    def bounds(self) -> list[tuple[float, float]]:
        """Bounds with infinite sides cut at the truncation radius"""
        r = self.truncation or math.inf
        return [(max(lo, -r), min(hi, r)) for lo, hi in zip(self.lower, self.upper)]

    def with_faces(self, faces):
        merged = tuple(sorted(set(self.singular_faces) | set(tuple(f) for f in faces)))
        return BoxDomain(self.lower, self.upper, merged, self.truncation, self.tail)

    def __str__(self):
        return "x".join(f"({lo:g},{hi:g})" for lo, hi in zip(self.lower, self.upper))


@dataclass(frozen=True)
class TestFunction:
    """Scalar field with an analytically supplied gradient; points are arrays shaped (..., n)"""
    __test__ = False

    value: Callable
    gradient: Callable
    label: str = "u"
    singular_faces: tuple[tuple[int, int], ...] = ()

    def __call__(self, x):
        return np.asarray(self.value(np.asarray(x, dtype=float)), dtype=float)

    def grad(self, x):
        return np.asarray(self.gradient(np.asarray(x, dtype=float)), dtype=float)

    def __sub__(self, other: 'TestFunction') -> 'TestFunction':
        return TestFunction(
            lambda x: self.value(x) - other.value(x),
            lambda x: self.gradient(x) - other.gradient(x),
            f"{self.label}-{other.label}",
            tuple(sorted(set(self.singular_faces) | set(other.singular_faces))),
        )

    def __add__(self, other: 'TestFunction') -> 'TestFunction':
        return TestFunction(
            lambda x: self.value(x) + other.value(x),
            lambda x: self.gradient(x) + other.gradient(x),
            f"{self.label}+{other.label}",
            tuple(sorted(set(self.singular_faces) | set(other.singular_faces))),
        )

    def __mul__(self, c: float) -> 'TestFunction':
        c = float(c)
        return TestFunction(lambda x: c * self.value(x), lambda x: c * self.gradient(x), f"{c:g}*{self.label}", self.singular_faces)

    __rmul__ = __mul__

    def shifted(self, c: float) -> 'TestFunction':
        """u + c"""
        c = float(c)
        return TestFunction(lambda x: self.value(x) + c, self.gradient, f"{self.label}+{c:g}", self.singular_faces)

    def check_gradient(self, domain: BoxDomain, points: int = FD_POINTS, rtol: float = FD_RTOL, seed: int = MONTE_CARLO_SEED) -> bool:
        """Central differences at random points of the inner 80% of the box"""
        rng = np.random.default_rng(seed)
        lo = np.array([a for a, _ in domain.bounds])
        hi = np.array([b for _, b in domain.bounds])
        span = hi - lo
        x = lo + span * (0.1 + 0.8 * rng.random((points, domain.n)))
        g = self.grad(x).reshape(points, domain.n)
        for i in range(domain.n):
            h = 1e-6 * np.maximum(1.0, np.abs(x[:, i]))
            e = np.zeros(domain.n)
            e[i] = 1.0
            fd = (self(x + h[:, None] * e) - self(x - h[:, None] * e)) / (2.0 * h)
            if not np.all(np.abs(fd - g[:, i]) <= rtol * (1.0 + np.abs(g[:, i]))):
                _LOGGER.warning(f"Gradient of {self.label} disagrees with finite differences along axis {i}")
                return False
        return True


##
# Quadrature
##
def grading_depth(level: int) -> int:
    return min(GRADING_BASE + GRADING_STEP * level, GRADING_MAX)


def _axis_edges(a: float, b: float, toward_lower: bool, toward_upper: bool, level: int) -> np.ndarray:
    if toward_lower and toward_upper:
        m = 0.5 * (a + b)
        return np.concatenate([_axis_edges(a, m, True, False, level), _axis_edges(m, b, False, True, level)[1:]])

    uniform = 2**level
    if not (toward_lower or toward_upper):
        return np.linspace(a, b, uniform + 1)

    depth = grading_depth(level)
    length = b - a
    offsets = length * 2.0**-np.arange(depth, 0, -1)
    rest = np.linspace(0.5 * length, length, uniform + 1)[1:]
    rel = np.concatenate([[0.0], offsets, rest])
    edges = a + rel if toward_lower else b - rel[::-1]
    return np.unique(edges)


def _axis_rule(a: float, b: float, toward_lower: bool, toward_upper: bool, level: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = gauss_legendre(QUAD_GAUSS_NODES)
    edges = _axis_edges(a, b, toward_lower, toward_upper, level)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (mid[:, None] + half[:, None] * x).reshape(-1)
    weights = (half[:, None] * w).reshape(-1)
    return nodes, weights


def quadrature_rule(domain: BoxDomain, level: int, faces=()) -> list[tuple[np.ndarray, np.ndarray]]:
    singular = set(domain.singular_faces) | set(tuple(f) for f in faces)
    return [
        _axis_rule(a, b, (i, LOWER) in singular, (i, UPPER) in singular, level)
        for i, (a, b) in enumerate(domain.bounds)
    ]


def _rule_size(rule) -> int:
    return math.prod(len(x) for x, _ in rule)


def tensor_integral(f: Callable, rule) -> float:
    """Integral of f over the tensor rule, evaluated in chunks; inf as soon as a weighted node is infinite"""
    x0, w0 = rule[0]
    rest = rule[1:]
    if rest:
        grids = np.meshgrid(*[x for x, _ in rest], indexing='ij')
        rest_points = np.stack([g.reshape(-1) for g in grids], axis=-1)
        rest_weights = np.prod(np.meshgrid(*[w for _, w in rest], indexing='ij'), axis=0).reshape(-1)
    else:
        rest_points = np.zeros((1, 0))
        rest_weights = np.ones(1)

    rows = max(1, QUAD_CHUNK // len(rest_weights))
    total = 0.0
    with np.errstate(all="ignore"):
        for i in range(0, len(x0), rows):
            xs = x0[i:i + rows]
            pts = np.concatenate([
                np.broadcast_to(xs[:, None, None], (len(xs), len(rest_weights), 1)),
                np.broadcast_to(rest_points[None, :, :], (len(xs), len(rest_weights), rest_points.shape[1])),
            ], axis=-1)
            vals = np.asarray(f(pts), dtype=float)
            weighted = (w0[i:i + rows, None] * rest_weights[None, :]) > 0
            if np.any(np.isposinf(vals) & weighted):
                return math.inf
            vals = np.where(weighted, vals, 0.0)
            total += float(w0[i:i + rows] @ vals @ rest_weights)
    return total


@dataclass
class QuadratureResult:
    value: float
    level: int
    history: list[float]


def adaptive_integral(f: Callable, domain: BoxDomain, rtol: float = MODULAR_RTOL, faces=()) -> QuadratureResult:
    """
    Integral of f refined level by level. Infinite when a node value is infinite, when estimates pass
    the divergence bound while growing, or when level increments do not decay.
    """
    graded = bool(set(domain.singular_faces) | set(tuple(face) for face in faces))
    history = []
    for level in range(QUAD_MAX_LEVEL + 1):
        # stop once the grading toward a singular face no longer deepens by a full step
        if graded and level > 0 and grading_depth(level) - grading_depth(level - 1) < GRADING_STEP:
            break
        rule = quadrature_rule(domain, level, faces)
        if history and _rule_size(rule) > QUAD_MAX_POINTS:
            break
        value = tensor_integral(f, rule)
        if math.isinf(value):
            return QuadratureResult(math.inf, level, history + [value])
        history.append(value)
        _LOGGER.debug(f"Level {level}: {value!r} with {_rule_size(rule)} points on {domain}")
        if len(history) >= 2 and abs(history[-1] - history[-2]) <= rtol * abs(history[-1]) + TINY:
            return QuadratureResult(_with_tail(domain, value), level, history)

    last = history[-1]
    if len(history) >= 2 and last > DIVERGENCE_BOUND and last > history[-2]:
        return QuadratureResult(math.inf, len(history) - 1, history)

    steps = np.diff(history)
    if len(steps) >= 3 and np.all(steps[-3:] > 0) and np.all(steps[-2:] >= steps[-3:-1] * (1.0 - 1e-9)):
        _LOGGER.debug(f"Level increments {steps[-3:]} do not decay on {domain}, integral diverges")
        return QuadratureResult(math.inf, len(history) - 1, history)

    msg = f"Quadrature on {domain} did not settle: last levels {history[-3:]}"
    raise OrliczQuadratureException(msg)


def _with_tail(domain: BoxDomain, value: float) -> float:
    if domain.is_bounded:
        return value
    bound = float(domain.tail(domain.truncation))
    _LOGGER.warning(f"Domain {domain} truncated at radius {domain.truncation:g}, tail bound {bound:g} added")
    return value + bound


##
# Modulars and norms
##
def _reduced(Y):
    """One-dimensional function applied to |u|: Phi_o for an n-dimensional Y"""
    return phi_circ_function(Y) if isinstance(Y, NDimYoungFunction) else Y


def _modular_integrand(u: TestFunction, Y, lam: float, part: str, circ=None) -> Callable:
    if part not in PARTS:
        msg = f"Unknown modular part '{part}', expected one of {PARTS}"
        raise OrliczDomainException(msg)

    if circ is None:
        circ = _reduced(Y)

    def value(x):
        return circ(np.abs(u(x)) / lam)

    def gradient(x):
        g = u.grad(x)
        if isinstance(Y, NDimYoungFunction):
            return Y(g / lam)
        return Y(np.linalg.norm(g, axis=-1) / lam)

    match part:
        case "value": return value
        case "gradient": return gradient
        case _: return lambda x: value(x) + gradient(x)


def _check_lambda(lam: float):
    if not lam > 0:
        msg = f"Modular scale must be positive, got {lam}"
        raise OrliczDomainException(msg)


def modular_integral(u: TestFunction, Y, lam: float, domain: BoxDomain, part: str = "value", circ=None) -> float:
    """
    int_Omega Y(|u|/lambda), or Y(|grad u|/lambda) for part 'gradient'.
    circ is a prepared Phi_o for an n-dimensional Y; it is tabulated here when absent.
    """
    _check_lambda(lam)
    f = _modular_integrand(u, Y, lam, part, circ)
    return adaptive_integral(f, domain, faces=u.singular_faces).value


def _probe_points(u: TestFunction, domain: BoxDomain, level: int) -> np.ndarray:
    rule = quadrature_rule(domain, level, u.singular_faces)
    grids = np.meshgrid(*[x for x, _ in rule], indexing='ij')
    return np.stack([g.reshape(-1) for g in grids], axis=-1)


def sup_norm(u: TestFunction, domain: BoxDomain, level: int = 2) -> float:
    """Largest |u| over the quadrature nodes and box corners"""
    pts = _probe_points(u, domain, level)
    corners = np.array(np.meshgrid(*[[a, b] for a, b in domain.bounds], indexing='ij')).reshape(domain.n, -1).T
    with np.errstate(all="ignore"):
        vals = np.abs(np.concatenate([u(pts).reshape(-1), u(corners).reshape(-1)]))
    vals = vals[~np.isnan(vals)]
    return float(vals.max()) if len(vals) else 0.0


def _part_sup(u: TestFunction, domain: BoxDomain, part: str, level: int = 0) -> float:
    pts = _probe_points(u, domain, level)
    with np.errstate(all="ignore"):
        value = np.abs(u(pts)).reshape(-1)
        grad = np.linalg.norm(u.grad(pts).reshape(len(pts), -1), axis=-1)
    match part:
        case "value": vals = value
        case "gradient": vals = grad
        case _: vals = np.maximum(value, grad)
    vals = vals[~np.isnan(vals)]
    return float(vals.max()) if len(vals) else 0.0


def luxemburg_norm(u: TestFunction, Y, domain: BoxDomain, part: str = "value", circ=None) -> float:
    """
    inf{lambda > 0 : modular(u/lambda) <= 1}. The refinement level is fixed at lambda0 = max|u| so the
    modular is exactly monotone in lambda during the bracketing and bisection.
    """
    scale = _part_sup(u, domain, part)
    if scale == 0.0:
        return 0.0

    lam0 = scale if math.isfinite(scale) else 1.0
    if circ is None:
        circ = _reduced(Y)
    level = adaptive_integral(_modular_integrand(u, Y, lam0, part, circ), domain, faces=u.singular_faces).level
    rule = quadrature_rule(domain, level, u.singular_faces)

    def modular(lam: float) -> float:
        return tensor_integral(_modular_integrand(u, Y, lam, part, circ), rule)

    if modular(LUX_LAMBDA_MAX) > 1.0:
        return math.inf

    lo = hi = 1.0
    while modular(hi) > 1.0:
        hi *= 2.0
    if hi == 1.0:
        while modular(lo) <= 1.0:
            lo *= 0.5
            if lo < TINY:
                return 0.0
        hi = 2.0 * lo
    else:
        lo = 0.5 * hi

    def ok(lams):
        return np.vectorize(lambda x: modular(float(x)) <= 1.0, otypes=[bool])(lams)

    norm = float(bisect_geometric(ok, lo, hi, rtol=1e-12))
    _LOGGER.debug(f"Luxemburg norm of {u.label} ({part}) with {Y}: {norm!r} at level {level}")
    return norm


@dataclass
class W1AQuantities:
    norm_u: float
    norm_grad: float
    modular_u: Callable[[float], float] = field(repr=False)
    modular_grad: Callable[[float], float] = field(repr=False)

    @property
    def norm(self) -> float:
        return self.norm_u + self.norm_grad

    def to_dict(self) -> dict[str,Any]:
        return {"norm_u": self.norm_u, "norm_grad": self.norm_grad, "norm": self.norm}


def w1a_quantities(u: TestFunction, Y, domain: BoxDomain) -> W1AQuantities:
    """Norms of u and grad u; an n-dimensional Y acts on the full gradient and through Phi_o on u"""
    circ = _reduced(Y)
    return W1AQuantities(
        luxemburg_norm(u, Y, domain, "value", circ),
        luxemburg_norm(u, Y, domain, "gradient", circ),
        lambda lam: modular_integral(u, Y, lam, domain, "value", circ),
        lambda lam: modular_integral(u, Y, lam, domain, "gradient", circ),
    )


##
# Modular convergence
##
@dataclass
class ModularReport:
    lambda_grid: list[float]
    indices: list[int]
    modular_values: list[list[float]]
    converging_lambdas: list[float]
    norm_convergence: bool
    smallest_converging_lambda: float
    part: str = "value"

    def to_rows(self) -> list[list[Any]]:
        """index, lambda, modular rows for CSV output"""
        return [
            [k, lam, value]
            for k, row in zip(self.indices, self.modular_values)
            for lam, value in zip(self.lambda_grid, row)
        ]

    def to_dict(self) -> dict[str,Any]:
        return {
            "part": self.part,
            "lambda_grid": self.lambda_grid,
            "indices": self.indices,
            "modular_values": [[v if math.isfinite(v) else None for v in row] for row in self.modular_values],
            "converging_lambdas": self.converging_lambdas,
            "norm_convergence": self.norm_convergence,
            "smallest_converging_lambda": self.smallest_converging_lambda if math.isfinite(self.smallest_converging_lambda) else None,
        }


def column_converges(values, tol: float = CONVERGENCE_TOL) -> bool:
    """Finite tail non-increasing and its last value at most tol times its first, or all zero"""
    values = np.asarray(values, dtype=float)
    if np.all(values == 0):
        return True
    infinite = np.flatnonzero(~np.isfinite(values))
    tail = values[infinite[-1] + 1:] if len(infinite) else values
    if len(tail) < 2:
        return False
    return is_nonincreasing(tail) and tail[-1] <= tol * tail[0]


def modular_convergence(seq, limit: TestFunction, Y, domain: BoxDomain, lambda_grid, indices=None, part: str = "value") -> ModularReport:
    """
    Modulars of u_k - u along the indices for every lambda of the grid.
    seq is a callable k -> TestFunction or a sequence indexed by position.
    """
    grid = [float(x) for x in lambda_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        msg = f"Lambda grid must be non-empty and increasing, got {grid}"
        raise OrliczDomainException(msg)
    for lam in grid:
        _check_lambda(lam)

    if callable(seq):
        if indices is None:
            msg = "Indices are required for a sequence given as a function"
            raise OrliczDomainException(msg)
        members = [seq(k) for k in indices]
    else:
        members = list(seq)
        indices = list(indices) if indices is not None else list(range(1, len(members) + 1))

    circ = _reduced(Y)

    def row(u_k: TestFunction) -> list[float]:
        diff = u_k - limit
        return [modular_integral(diff, Y, lam, domain, part, circ) for lam in grid]

    with ThreadPoolExecutor(max_workers=worker_count()) as executor:
        values = list(executor.map(row, members))

    for k, r in zip(indices, values):
        if not is_nonincreasing(r):
            _LOGGER.warning(f"Modulars for index {k} are not non-increasing in lambda: {r}")

    columns = np.array(values, dtype=float).T
    converging = [lam for lam, col in zip(grid, columns) if column_converges(col)]
    report = ModularReport(
        grid,
        [int(k) for k in indices],
        values,
        converging,
        len(converging) == len(grid),
        min(converging) if converging else math.inf,
        part,
    )
    _LOGGER.info(f"Modular convergence of {limit.label} ({part}): {len(converging)} of {len(grid)} lambdas converge")
    return report


##
# One-dimensional embedding checks
##
def _require_interval(domain: BoxDomain):
    if domain.n != 1 or not domain.is_bounded:
        msg = f"Interval checks need a bounded one-dimensional domain, got {domain}"
        raise OrliczDomainException(msg)


def check_interval_embedding(u: TestFunction, Y: YoungFunction, domain: BoxDomain) -> tuple[bool, float, float]:
    """sup|u| <= |Omega| A^-1(int A(|u'|) / |Omega|) for u vanishing at an end point"""
    _require_interval(domain)
    measure = domain.measure
    lhs = sup_norm(u, domain)
    rhs = measure * float(Y.inverse(modular_integral(u, Y, 1.0, domain, "gradient") / measure))
    return lhs <= rhs * (1.0 + MODULAR_RTOL), lhs, rhs


def calibrate_interval_constant(corpus, Y: YoungFunction, domain: BoxDomain, mode: str = "modular") -> tuple[float, list[float]]:
    """
    Largest ratio sup|u| / int A(|u'|) ('modular') or sup|u| / ||u||_{W^{1,A}} ('norm') over the corpus
    """
    _require_interval(domain)
    ratios = []
    for u in corpus:
        lhs = sup_norm(u, domain)
        match mode:
            case "modular":
                rhs = modular_integral(u, Y, 1.0, domain, "gradient")
            case "norm":
                rhs = w1a_quantities(u, Y, domain).norm
            case _:
                msg = f"Unknown calibration mode '{mode}'"
                raise OrliczDomainException(msg)
        ratios.append(lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf))
    constant = max(ratios) if ratios else 0.0
    _LOGGER.info(f"Calibrated interval constant {constant:g} ({mode}) over {len(ratios)} functions for {Y}")
    return constant, ratios
