#! /usr/bin/env python3

##
# Definition of all parameters / constants used by the Orlicz-Sobolev toolkit
##

from enum import StrEnum


class OrliczDomainException(Exception):
    """Exception to indicate an argument outside the domain of an operation"""

class OrliczIndeterminateException(Exception):
    """Exception to indicate that a black-box decision could not be made"""

class OrliczConstructionException(Exception):
    """Exception to indicate failure to build a derived function"""

class OrliczPreconditionException(Exception):
    """Exception to indicate that a documented precondition does not hold"""

class OrliczQuadratureException(Exception):
    """Exception to indicate quadrature that neither converges nor diverges"""

class OrliczSolverException(Exception):
    """Exception to indicate failure to bracket or solve an equation"""

class OrliczConfigException(Exception):
    """Exception to indicate an invalid configuration record or command line"""


# Young functions
INVERSE_RTOL = 1e-12
INVERSE_MAX_ITER = 200
INVERSE_MAX_DOUBLINGS = 1100    # 2**1100 exceeds the float range

GRID_T_MIN = 1e-6
GRID_T_MAX = 1e6
GRID_PER_DECADE = 256
REGIME_CUTOFF = 1.0             # default t0 of NearZero / NearInfinity
PROBE_POINTS = 64               # axiom probes on [GRID_T_MIN, GRID_T_MAX]
PROBE_TOL = 1e-9
EQUIV_C_MAX = 1e6
TREND_FACTOR = 2.0              # Delta2 ratio growth over one decade that signals failure
COMPARE_RTOL = 1e-10
EXPONENT_TOL = 1e-12            # equality of asymptotic exponents

MODIFY_EXP_MIN = -20            # dyadic glue candidates 2**-20 ... 2**20
MODIFY_EXP_MAX = 20

# Sobolev conjugates
QUAD_RTOL = 1e-8
HN_TABLE_KNOTS = 1024
HN_TABLE_T_MIN = 1e-30
HN_VALUE_CEILING = 1e300        # table stops where A reaches this value
HN_NEWTON_STEPS = 6
GAUSS_NODES = 20                # nodes per panel on the log axis
PANEL_MAX_SPLITS = 30
DIVERGENCE_SLOPE_TOL = 1e-3     # margin around -1 for the log-integrand slope
HAT_GLUE_EXP_MAX = 40

# Anisotropic functions
THETA_RTOL = 1e-8
THETA_MAX_DOUBLINGS = 120
THETA_BISECT_RTOL = 1e-14
VOLUME_RTOL = 1e-3
VOLUME_RAYS_2D = 512
VOLUME_RAYS_3D = 64             # polar nodes; azimuthal count is twice this
VOLUME_LEVELS = 96              # sublevel tables per Phi_circ construction
VOLUME_CHUNK = 2**22           # (level, direction) pairs per ray-casting batch
MONTE_CARLO_SAMPLES = 1000000
MONTE_CARLO_SEED = 1234

# Modular integrals
MODULAR_RTOL = 1e-7
QUAD_GAUSS_NODES = 15
QUAD_MAX_LEVEL = 14
QUAD_MAX_POINTS = 4000000
QUAD_CHUNK = 500000
GRADING_BASE = 20               # geometric panels toward a singular face at level 0
GRADING_STEP = 12
GRADING_MAX = 96
DIVERGENCE_BOUND = 1e12
LUX_LAMBDA_MAX = 1e12
CONVERGENCE_TOL = 1e-3
FD_POINTS = 32
FD_RTOL = 1e-4

# Nemytskii operator
DEFAULT_K_LIST = tuple(2**j for j in range(1, 11))
DEFAULT_LAMBDA_EXPONENTS = tuple(range(-6, 7))
COUNTER_TAIL_K = 2**20
POINCARE_DRIFT = 0.05

# Conditions
COND_GRID_POINTS = 512
COND_GRID_MAX = 1e6
COND_GRID_MIN = 1e-8            # lower end for near-zero conditions
LEMMA_GRID_POINTS = 64
LEMMA_GRID_MIN = 1e-3
LEMMA_GRID_MAX = 1e3
LIMSUP_LAMBDAS = (1.0, 10.0, 100.0)
LIMSUP_T_MIN = 1e-8
LIMSUP_T_MAX = 1e-2
SCALE_TREND = 0.02              # growth of the required constant over the outer decades
ANISO_DIRECTIONS = 32
ANISO_RADII = 64

# Command line
SCHEMA_VERSION = 1
ENV_THREADS = "PYORLICZ_THREADS"
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INDETERMINATE = 2


def _unknown(what: str, s: str, default):
    if default is not None:
        return default
    msg = f"Unknown {what}: '{s}'"
    raise OrliczConfigException(msg)


class OrliczKind(StrEnum):
    POWER = "power"
    POWER_LOG = "powerlog"
    POWER_LOGLOG = "powerloglog"
    EXP = "exp"
    EXP_NEG_INV = "expneginv"
    LINEAR = "linear"
    PIECEWISE = "piecewise"
    GLUED = "glued"
    CUSTOM = "custom"

    @staticmethod
    def from_str(s: str, default: str|None = None):
        match s.upper():
            case 'POWER': return OrliczKind.POWER
            case 'POWERLOG' | 'POWER_LOG' | 'ZYGMUND': return OrliczKind.POWER_LOG
            case 'POWERLOGLOG' | 'POWER_LOGLOG': return OrliczKind.POWER_LOGLOG
            case 'EXP': return OrliczKind.EXP
            case 'EXPNEGINV' | 'EXP_NEG_INV': return OrliczKind.EXP_NEG_INV
            case 'LINEAR': return OrliczKind.LINEAR
            case 'PIECEWISE': return OrliczKind.PIECEWISE
            case 'GLUED': return OrliczKind.GLUED
            case 'CUSTOM': return OrliczKind.CUSTOM
            case _: return _unknown("kind", s, default)

    def __str__(self):
        return self.value


class OrliczRegimeTag(StrEnum):
    GLOBAL = "global"
    NEAR_ZERO = "near_zero"
    NEAR_INFINITY = "near_infinity"

    @staticmethod
    def from_str(s: str, default: str|None = None):
        match s.upper():
            case 'GLOBAL': return OrliczRegimeTag.GLOBAL
            case 'NEAR_ZERO' | 'NEARZERO' | 'ZERO': return OrliczRegimeTag.NEAR_ZERO
            case 'NEAR_INFINITY' | 'NEARINFINITY' | 'INFINITY' | 'INF': return OrliczRegimeTag.NEAR_INFINITY
            case _: return _unknown("regime", s, default)


class OrliczIntegral(StrEnum):
    CONVERGES = "converges"
    DIVERGES = "diverges"
    INDETERMINATE = "indeterminate"

    def __str__(self):
        return self.name

    def __repr__(self):
        return self.name


class OrliczGrowthKind(StrEnum):
    POLY = "poly"           # t^a log^b loglog^c
    EXP = "exp"             # exp(t^a log^b)
    EXP_EXP = "expexp"      # exp(exp(t^a))
    EXP_NEG = "expneg"      # exp(-t^-a) near zero
    FLAT = "flat"           # identically zero near zero
    JUMP = "jump"           # infinite beyond a finite point
    SUPER = "super"         # faster than every power, no finer class tracked

    def __str__(self):
        return self.name


class OrliczEnvelopeKind(StrEnum):
    ONE = "one"
    POWER = "power"
    LOG_POWER = "logpower"
    EXP = "exp"
    EXP_EXP = "expexp"
    POWER_LOG = "powerlog"
    POWER_LOGLOG = "powerloglog"
    EXP_POWER_LOG = "exppowerlog"
    CUSTOM = "custom"

    @staticmethod
    def from_str(s: str, default: str|None = None):
        match s.upper():
            case 'ONE' | '1': return OrliczEnvelopeKind.ONE
            case 'POWER': return OrliczEnvelopeKind.POWER
            case 'LOGPOWER' | 'LOG_POWER' | 'LOG': return OrliczEnvelopeKind.LOG_POWER
            case 'EXP': return OrliczEnvelopeKind.EXP
            case 'EXPEXP' | 'EXP_EXP': return OrliczEnvelopeKind.EXP_EXP
            case 'POWERLOG' | 'POWER_LOG': return OrliczEnvelopeKind.POWER_LOG
            case 'POWERLOGLOG' | 'POWER_LOGLOG': return OrliczEnvelopeKind.POWER_LOGLOG
            case 'EXPPOWERLOG' | 'EXP_POWER_LOG': return OrliczEnvelopeKind.EXP_POWER_LOG
            case 'CUSTOM': return OrliczEnvelopeKind.CUSTOM
            case _: return _unknown("envelope kind", s, default)

    def __str__(self):
        return self.value


class OrliczForm(StrEnum):
    ISOTROPIC = "iso"
    ORTHOTROPIC = "ortho"
    LINEAR_IMAGE = "linear"
    BLACK_BOX = "blackbox"

    @staticmethod
    def from_str(s: str, default: str|None = None):
        match s.upper():
            case 'ISO' | 'ISOTROPIC': return OrliczForm.ISOTROPIC
            case 'ORTHO' | 'ORTHOTROPIC': return OrliczForm.ORTHOTROPIC
            case 'LINEAR' | 'LINEAR_IMAGE': return OrliczForm.LINEAR_IMAGE
            case 'BLACKBOX' | 'BLACK_BOX': return OrliczForm.BLACK_BOX
            case _: return _unknown("form", s, default)


class OrliczCondition(StrEnum):
    INQ_ASS2 = "inq-ass2"
    INQ_ASSD = "inq-assD"
    DOUBLE_A = "double-a"
    ORTHO = "ortho"
    ANISO = "aniso"

    @staticmethod
    def from_str(s: str, default: str|None = None):
        match s.upper():
            case 'INQ-ASS2' | 'INQ_ASS2' | 'ASS2': return OrliczCondition.INQ_ASS2
            case 'INQ-ASSD' | 'INQ_ASSD' | 'ASSD': return OrliczCondition.INQ_ASSD
            case 'DOUBLE-A' | 'DOUBLE_A' | 'INQ-ASSDBIS': return OrliczCondition.DOUBLE_A
            case 'ORTHO' | 'ASS-ORTHO': return OrliczCondition.ORTHO
            case 'ANISO' | 'ASSUMPT1' | 'ASSUMPT2': return OrliczCondition.ANISO
            case _: return _unknown("condition", s, default)


class OrliczTable(StrEnum):
    CLASSICAL = "classical"
    CLASSICAL2 = "classical2"
    ZYGMUND = "zygmund"
    ZYGMUND2 = "zygmund2"
    ORTHO = "ortho"

    @staticmethod
    def from_str(s: str, default: str|None = None):
        match s.upper():
            case 'CLASSICAL': return OrliczTable.CLASSICAL
            case 'CLASSICAL2': return OrliczTable.CLASSICAL2
            case 'ZYGMUND': return OrliczTable.ZYGMUND
            case 'ZYGMUND2': return OrliczTable.ZYGMUND2
            case 'ORTHO': return OrliczTable.ORTHO
            case _: return _unknown("table", s, default)


class OrliczCommand(StrEnum):
    CONJUGATE = "conjugate"
    ANISO = "aniso"
    NORM = "norm"
    CONVERGE = "converge"
    CHECK = "check"
    TABLE = "table"
    COUNTEREXAMPLE = "counterexample"
    EXPERIMENT = "experiment"

    @staticmethod
    def from_str(s: str, default: str|None = None):
        try:
            return OrliczCommand(s.lower())
        except ValueError:
            return _unknown("command", s, default)


class OrliczFormat(StrEnum):
    CSV = "csv"
    JSON = "json"

    @staticmethod
    def from_str(s: str, default: str|None = None):
        match s.upper():
            case 'CSV': return OrliczFormat.CSV
            case 'JSON': return OrliczFormat.JSON
            case _: return _unknown("format", s, default)
