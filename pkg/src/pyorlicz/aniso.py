##
# n-dimensional Young functions: orthotropic reduction, the rearranged function Phi_o built from
# sublevel-set volumes, the anisotropic conjugate Phi_n and the implicit scale theta.
##

import logging
import math

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from scipy.special import gamma

from .const import (
    GRID_T_MAX,
    GRID_T_MIN,
    MONTE_CARLO_SAMPLES,
    MONTE_CARLO_SEED,
    PROBE_TOL,
    THETA_BISECT_RTOL,
    THETA_MAX_DOUBLINGS,
    THETA_RTOL,
    VOLUME_CHUNK,
    VOLUME_LEVELS,
    VOLUME_RAYS_2D,
    VOLUME_RAYS_3D,
    OrliczConstructionException,
    OrliczDomainException,
    OrliczForm,
    OrliczIndeterminateException,
    OrliczIntegral,
    OrliczKind,
    OrliczSolverException,
)
from .conjugate import (
    ConjugateResult,
    classify_integral_inf,
    classify_integral_zero,
    sobolev_conjugate,
)
from .envelope import (
    Envelope,
)
from .growth import (
    OrliczGrowth,
)
from .numerics import (
    gauss_legendre,
    generalized_inverse,
)
from .young import (
    YoungFunction,
)


_LOGGER = logging.getLogger(__name__)

BISECT_MAX_ITER = 200


def unit_ball_volume(n: int) -> float:
    return float(math.pi**(n / 2.0) / gamma(n / 2.0 + 1.0))


def bar_p(ps) -> float:
    """n / sum(1/p_i)"""
    ps = [float(p) for p in ps]
    if not ps or any(p < 1 for p in ps):
        msg = f"Exponents must be at least 1, got {ps}"
        raise OrliczDomainException(msg)
    return len(ps) / sum(1.0 / p for p in ps)


@dataclass(frozen=True)
class NDimYoungFunction:
    n: int
    form: OrliczForm
    components: tuple[YoungFunction, ...] = ()
    rows: tuple = ()
    label: str|None = None
    nondegenerate: bool = True
    evaluator: Callable = field(default=None, compare=False, repr=False)

    @staticmethod
    def isotropic(A: YoungFunction, n: int):
        """A(|xi|)"""
        _check_dim(n)
        return NDimYoungFunction(
            n, OrliczForm.ISOTROPIC, (A,), (), f"iso({A.label})", A.is_nondegenerate(),
            lambda xi: A(np.linalg.norm(xi, axis=-1)),
        )

    @staticmethod
    def orthotropic(components):
        """sum A_i(|xi_i|)"""
        components = tuple(components)
        n = len(components)
        _check_dim(n)

        def func(xi):
            return sum(A(np.abs(xi[..., i])) for i, A in enumerate(components))

        label = "ortho(" + ",".join(A.label for A in components) + ")"
        return NDimYoungFunction(
            n, OrliczForm.ORTHOTROPIC, components, (), label, all(A.is_nondegenerate() for A in components), func,
        )

    @staticmethod
    def linear_image(rows, n: int):
        """sum_j A_j(|M_j xi|) for (matrix M_j, Young function A_j) pairs"""
        _check_dim(n)
        mats = []
        for matrix, A in rows:
            m = np.atleast_2d(np.asarray(matrix, dtype=float))
            if m.shape[1] != n:
                msg = f"Row set of shape {m.shape} does not act on dimension {n}"
                raise OrliczDomainException(msg)
            mats.append((m, A))

        def func(xi):
            return sum(A(np.linalg.norm(xi @ m.T, axis=-1)) for m, A in mats)

        frozen = tuple((tuple(map(tuple, m)), A) for m, A in mats)
        return NDimYoungFunction(n, OrliczForm.LINEAR_IMAGE, tuple(A for _, A in mats), frozen, "linear-image", True, func)

    @staticmethod
    def black_box(evaluator: Callable, n: int, label: str|None = None, nondegenerate: bool = True):
        """evaluator maps arrays shaped (..., n) to (...)"""
        _check_dim(n)
        return NDimYoungFunction(n, OrliczForm.BLACK_BOX, (), (), label or "blackbox", nondegenerate, evaluator)

    def __call__(self, xi):
        arr = np.asarray(xi, dtype=float)
        if arr.shape[-1] != self.n:
            msg = f"Expected vectors of dimension {self.n}, got shape {arr.shape}"
            raise OrliczDomainException(msg)
        with np.errstate(all="ignore"):
            y = np.asarray(self.evaluator(arr), dtype=float)
        y = np.where(np.all(arr == 0, axis=-1), 0.0, y)
        return float(y) if y.ndim == 0 else y

    def check_convexity(self, samples: int = 1000, scale: float = 10.0, seed: int = MONTE_CARLO_SEED) -> bool:
        """Midpoint convexity and evenness on random segments"""
        rng = np.random.default_rng(seed)
        a = rng.normal(scale=scale, size=(samples, self.n))
        b = rng.normal(scale=scale, size=(samples, self.n))
        fa, fb, fm = self(a), self(b), self(0.5 * (a + b))
        finite = np.isfinite(fa) & np.isfinite(fb)
        convex = fm[finite] <= 0.5 * (fa[finite] + fb[finite]) + PROBE_TOL * (1.0 + np.maximum(fa[finite], fb[finite]))
        even = np.isclose(self(-a), fa, rtol=1e-12, equal_nan=True)
        return bool(np.all(convex) and np.all(even))

    def __str__(self):
        return self.label or str(self.form)


def _check_dim(n: int):
    if int(n) != n or n < 2:
        msg = f"Dimension must be an integer of at least 2, got {n}"
        raise OrliczDomainException(msg)


##
# Orthotropic reduction
##
def _mean_inverse_growth(growths) -> OrliczGrowth|None:
    """Class of the function whose inverse is the geometric mean of the inverses"""
    if any(g is None for g in growths):
        return None
    try:
        inverses = [g.inverse() for g in growths]
        if not all(g.is_poly for g in inverses):
            return None
        k = len(inverses)
        mean = OrliczGrowth.poly(
            sum(g.power for g in inverses) / k,
            sum(g.log for g in inverses) / k,
            sum(g.loglog for g in inverses) / k,
        )
        return mean.inverse()
    except OrliczIndeterminateException:
        return None


def orthotropic_bar(components) -> YoungFunction:
    """A_bar with A_bar^-1 = (prod A_i^-1)^(1/n)"""
    components = tuple(components)
    if len(components) < 1:
        msg = "Orthotropic reduction needs at least one component"
        raise OrliczDomainException(msg)

    probe = np.array([GRID_T_MIN, 1.0, GRID_T_MAX])
    for A in components:
        if np.all(A.inverse(probe) == 0):
            msg = f"Component {A.label} is degenerate: its inverse vanishes"
            raise OrliczConstructionException(msg)

    if all(A.kind == OrliczKind.POWER for A in components):
        return YoungFunction.power(bar_p([A.params[0] for A in components]))

    n = len(components)

    def inv(s):
        with np.errstate(all="ignore"):
            logs = sum(np.log(A.inverse(s)) for A in components)
        return np.exp(logs / n)

    def func(t):
        return generalized_inverse(inv, t)

    label = "bar(" + ",".join(A.label for A in components) + ")"
    return YoungFunction.custom(
        func,
        _mean_inverse_growth([A.zero_growth for A in components]),
        _mean_inverse_growth([A.inf_growth for A in components]),
        inv,
        label,
    )


##
# Sublevel volumes and Phi_o
##
def _directions(n: int, rays: int|None) -> tuple[np.ndarray, np.ndarray]:
    """Unit directions and quadrature weights on the sphere"""
    match n:
        case 2:
            count = rays or VOLUME_RAYS_2D
            angles = 2.0 * math.pi * np.arange(count) / count
            dirs = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
            weights = np.full(count, 2.0 * math.pi / count)
        case 3:
            polar = rays or VOLUME_RAYS_3D
            azimuth = 2 * polar
            z, wz = gauss_legendre(polar)
            phi = 2.0 * math.pi * np.arange(azimuth) / azimuth
            zz, pp = np.meshgrid(z, phi, indexing='ij')
            rr = np.sqrt(1.0 - zz**2)
            dirs = np.stack([rr * np.cos(pp), rr * np.sin(pp), zz], axis=-1).reshape(-1, 3)
            weights = (wz[:, None] * np.full(azimuth, 2.0 * math.pi / azimuth)[None, :]).reshape(-1)
        case _:
            msg = f"Ray quadrature supports dimensions 2 and 3, got {n}"
            raise OrliczDomainException(msg)
    return dirs, weights


def _radii(phi: NDimYoungFunction, dirs: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """sup{rho : Phi(rho u) <= t} per (level, direction)"""
    shape = (len(levels), len(dirs))
    targets = np.broadcast_to(levels[:, None], shape).reshape(-1)
    units = np.broadcast_to(dirs[None, :, :], shape + (phi.n,)).reshape(-1, phi.n)
    radii = generalized_inverse(lambda rho: phi.evaluator(rho[:, None] * units), targets)
    radii = radii.reshape(shape)
    if np.any(np.isinf(radii)):
        msg = f"Sublevel set of {phi} is unbounded"
        raise OrliczConstructionException(msg)
    return radii


def _radii_batches(phi: NDimYoungFunction, dirs: np.ndarray, levels: np.ndarray):
    """_radii over consecutive runs of levels, at most VOLUME_CHUNK pairs at a time"""
    step = max(1, VOLUME_CHUNK // len(dirs))
    for start in range(0, len(levels), step):
        yield _radii(phi, dirs, levels[start:start + step])


def sublevel_volume(phi: NDimYoungFunction, t, method: str = "rays", rays: int|None = None,
                    samples: int = MONTE_CARLO_SAMPLES, seed: int = MONTE_CARLO_SEED) -> tuple[np.ndarray, np.ndarray|None]:
    """
    |{Phi <= t}| for convex even Phi by ray casting (n = 2, 3) or by Monte Carlo over uniform directions.
    Returns the volumes and, for Monte Carlo, their standard errors.

    Sublevel sets are star-shaped, so each ray meets the boundary once and the radius is solved to
    machine precision. The default ray counts keep the relative volume error within VOLUME_RTOL (1e-3)
    for Lipschitz boundaries, polyhedral ones included.
    """
    levels = np.atleast_1d(np.asarray(t, dtype=float))
    n = phi.n
    sphere = n * unit_ball_volume(n)

    match method:
        case "rays":
            dirs, weights = _directions(n, rays)
            parts = [(radii**n / n) @ weights for radii in _radii_batches(phi, dirs, levels)]
            volume = np.concatenate(parts) if parts else np.zeros(0)
            error = None
        case "monte_carlo":
            rng = np.random.default_rng(seed)
            dirs = rng.normal(size=(int(samples), n))
            dirs /= np.linalg.norm(dirs, axis=-1, keepdims=True)
            volume, error = np.zeros(0), np.zeros(0)
            for radii in _radii_batches(phi, dirs, levels):
                vals = sphere * radii**n / n
                volume = np.concatenate([volume, vals.mean(axis=-1)])
                error = np.concatenate([error, vals.std(axis=-1, ddof=1) / math.sqrt(samples)])
        case _:
            msg = f"Unknown volume method '{method}'"
            raise OrliczDomainException(msg)

    volume = np.where(levels <= 0, 0.0, volume)
    _LOGGER.debug(f"Sublevel volumes of {phi} at {len(levels)} levels by {method}")
    return volume, error


def phi_circ(phi: NDimYoungFunction, t, method: str = "auto"):
    """Phi_o^-1(t) = (|{Phi <= t}| / omega_n)^(1/n)"""
    arr = np.asarray(t, dtype=float)
    if method == "auto":
        match phi.form:
            case OrliczForm.ISOTROPIC:
                return phi.components[0].inverse(t)
            case OrliczForm.ORTHOTROPIC:
                return orthotropic_bar(phi.components).inverse(t)
        method = "rays"

    volume, _ = sublevel_volume(phi, arr, method)
    r = (volume / unit_ball_volume(phi.n))**(1.0 / phi.n)
    return float(r[0]) if arr.ndim == 0 else r.reshape(arr.shape)


def phi_circ_function(phi: NDimYoungFunction, method: str = "auto", levels: int = VOLUME_LEVELS) -> YoungFunction:
    """
    Phi_o as a one-dimensional Young function. Isotropic and orthotropic forms reduce analytically;
    other forms interpolate a table of sublevel radii in log-log coordinates.
    """
    if method == "auto":
        match phi.form:
            case OrliczForm.ISOTROPIC:
                return phi.components[0]
            case OrliczForm.ORTHOTROPIC:
                return orthotropic_bar(phi.components)
        method = "rays"

    t = np.geomspace(GRID_T_MIN, GRID_T_MAX, levels)
    r = phi_circ(phi, t, method)
    lr, lt = np.log(r), np.log(t)
    slope_lo = (lt[1] - lt[0]) / (lr[1] - lr[0])
    slope_hi = (lt[-1] - lt[-2]) / (lr[-1] - lr[-2])

    def func(rho):
        with np.errstate(all="ignore"):
            x = np.log(rho)
            y = np.interp(x, lr, lt)
            y = np.where(x < lr[0], lt[0] + slope_lo * (x - lr[0]), y)
            y = np.where(x > lr[-1], lt[-1] + slope_hi * (x - lr[-1]), y)
            return np.exp(y)

    def inv(s):
        with np.errstate(all="ignore"):
            y = np.log(s)
            x = np.interp(y, lt, lr)
            x = np.where(y < lt[0], lr[0] + (y - lt[0]) / slope_lo, x)
            x = np.where(y > lt[-1], lr[-1] + (y - lt[-1]) / slope_hi, x)
            return np.exp(x)

    _LOGGER.info(f"Tabulated Phi_o of {phi} on {levels} levels, end slopes {slope_lo:.4f} and {slope_hi:.4f}")
    return YoungFunction.custom(func, None, None, inv, f"circ({phi})")


def phi_n(phi: NDimYoungFunction, method: str = "auto") -> ConjugateResult:
    """Anisotropic conjugate, the one-dimensional conjugate of Phi_o in dimension n"""
    return sobolev_conjugate(phi_circ_function(phi, method), phi.n)


def classify_phi_zero(phi: NDimYoungFunction, method: str = "auto") -> OrliczIntegral:
    """Defining integral of Phi_o at zero"""
    return classify_integral_zero(phi_circ_function(phi, method), phi.n)


def classify_phi_inf(phi: NDimYoungFunction, method: str = "auto") -> OrliczIntegral:
    """Defining integral of Phi_o at infinity; divergence means Phi_n is finite-valued"""
    return classify_integral_inf(phi_circ_function(phi, method), phi.n)


##
# theta: Phi_n(theta) = Phi(xi / E(theta))
##
@dataclass
class ThetaSolution:
    phi: NDimYoungFunction
    envelope: Envelope
    conjugate: ConjugateResult
    residual_tol: float = THETA_RTOL

    def _gap(self, t: np.ndarray, xi: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            lhs = self.conjugate.An(t)
            rhs = self.phi(xi / self.envelope(t)[:, None])
        return lhs - rhs

    def __call__(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        single = xi.ndim == 1
        xi = np.atleast_2d(xi)
        zero = np.all(xi == 0, axis=-1)

        lo = np.zeros(len(xi))
        hi = np.ones(len(xi))
        open_ = ~zero & (self._gap(hi, xi) < 0)
        for _ in range(THETA_MAX_DOUBLINGS):
            if not open_.any():
                break
            lo = np.where(open_, hi, lo)
            hi = np.where(open_, 2.0 * hi, hi)
            open_ = open_ & (self._gap(hi, xi) < 0)
        if open_.any():
            msg = f"Cannot bracket theta for {int(open_.sum())} points after {THETA_MAX_DOUBLINGS} doublings"
            raise OrliczSolverException(msg)

        for _ in range(BISECT_MAX_ITER):
            todo = ~zero & (hi - lo > THETA_BISECT_RTOL * hi)
            if not todo.any():
                break
            mid = 0.5 * (lo + hi)
            up = self._gap(mid, xi) >= 0
            hi = np.where(todo & up, mid, hi)
            lo = np.where(todo & ~up, mid, lo)

        theta = np.where(zero, 0.0, 0.5 * (lo + hi))
        return float(theta[0]) if single else theta

    def residual(self, xi, theta) -> np.ndarray:
        """|Phi_n(theta) - Phi(xi/E(theta))| / (1 + Phi_n(theta))"""
        xi = np.atleast_2d(np.asarray(xi, dtype=float))
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        lhs = self.conjugate.An(theta)
        return np.abs(self._gap(theta, xi)) / (1.0 + lhs)

    def to_dict(self) -> dict[str,Any]:
        return {"phi": str(self.phi), "envelope": str(self.envelope), "residual_tol": self.residual_tol}


def theta_solution(phi: NDimYoungFunction, E: Envelope, method: str = "auto") -> ThetaSolution:
    return ThetaSolution(phi, E, phi_n(phi, method))


def solve_theta(phi: NDimYoungFunction, E: Envelope, n: int, xi):
    if n != phi.n:
        msg = f"Dimension {n} does not match the n-dimensional function of dimension {phi.n}"
        raise OrliczDomainException(msg)
    return theta_solution(phi, E)(xi)
