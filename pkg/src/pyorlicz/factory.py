##
# Loading of package JSON resources and run configurations
##

import logging
import orjson

from dataclasses import dataclass, field
from typing import Any

from .aniso import (
    NDimYoungFunction,
)
from .const import (
    COUNTER_TAIL_K,
    DEFAULT_K_LIST,
    DEFAULT_LAMBDA_EXPONENTS,
    MONTE_CARLO_SEED,
    SCHEMA_VERSION,
    OrliczCommand,
    OrliczCondition,
    OrliczConfigException,
    OrliczFormat,
    OrliczTable,
)
from .envelope import (
    Envelope,
)
from .families import (
    OrliczEnvelopes,
    OrliczFamilies,
    OrliczFamilyRecord,
    OrliczFamilySet,
    OrliczFamilyUnknownException,
    OrliczLipschitzSpecs,
    OrliczTestFunctions,
)
from .modular import (
    BoxDomain,
    TestFunction,
)
from .nemytskii import (
    COUNTER_DELTAS,
    LipschitzSpec,
)
from .young import (
    YoungFunction,
)


_LOGGER = logging.getLogger(__name__)

PATH_TABLES = __file__.replace('factory.py', 'tables.json')
SEQUENCES = ("shift", "scale")


def _vectors(value) -> list[list[float]]:
    """xi points as lists of floats, or 'a,b;c,d'"""
    if value is None:
        return []
    if isinstance(value, str):
        value = [part.split(',') for part in value.split(';') if part]
    try:
        vectors = [[float(x) for x in v] for v in value]
    except (TypeError, ValueError):
        msg = f"Field 'xi': expected a list of vectors, got {value!r}"
        raise OrliczConfigException(msg)
    if len({len(v) for v in vectors}) > 1:
        msg = f"Field 'xi': vectors of different lengths {value!r}"
        raise OrliczConfigException(msg)
    return vectors


def _names(value) -> list:
    """Family lists as JSON lists or 'power:2;power:3'"""
    if value is None:
        return []
    if isinstance(value, str):
        return [part for part in value.split(';') if part]
    return list(value)


@dataclass
class RunConfig:
    command: OrliczCommand
    A: Any = None
    B: Any = None
    E: Any = None
    F: Any = None
    A_list: list = field(default_factory=list)
    B_list: list = field(default_factory=list)
    phi: Any = None
    psi: Any = None
    f: str|None = None
    u: str|None = None
    seq: str = "shift"
    n: int = 2
    t0: float = 1.0
    t1: float|None = None
    sigma: float|None = None
    condition: OrliczCondition|None = None
    table: OrliczTable|None = None
    method: str = "auto"
    with_constant: bool = False
    domain: dict|None = None
    points: list = field(default_factory=list)
    xi: list = field(default_factory=list)
    sweeps: list = field(default_factory=list)
    k_list: list[int] = field(default_factory=lambda: list(DEFAULT_K_LIST))
    k_max: int|None = None
    delta_list: list[float] = field(default_factory=lambda: list(COUNTER_DELTAS))
    lambda_grid: list[float]|None = None
    tail_k: int = COUNTER_TAIL_K
    output: str|None = None
    format: OrliczFormat = OrliczFormat.CSV
    seed: int = MONTE_CARLO_SEED
    schema: int = SCHEMA_VERSION

    @staticmethod
    def from_dict(d: dict) -> 'RunConfig':
        """Config record to RunConfig; raises naming the offending field"""
        if not isinstance(d, dict) or not d:
            msg = "Empty configuration; a command is required"
            raise OrliczConfigException(msg)
        if d.get('command', None) is None:
            msg = "Field 'command' is missing"
            raise OrliczConfigException(msg)

        schema = d.get('schema', SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            msg = f"Field 'schema': unsupported version {schema}, expected {SCHEMA_VERSION}"
            raise OrliczConfigException(msg)

        known = set(RunConfig.__dataclass_fields__)
        unknown = sorted(set(d) - known)
        if unknown:
            msg = f"Unknown field(s) {unknown}"
            raise OrliczConfigException(msg)

        def number(key, kind, default):
            value = d.get(key, None)
            if value is None:
                return default
            try:
                return kind(value)
            except (TypeError, ValueError):
                msg = f"Field '{key}': expected a number, got {value!r}"
                raise OrliczConfigException(msg)

        def numbers(key, kind, default):
            value = d.get(key, None)
            if value is None:
                return default
            if not isinstance(value, (list, tuple)) or not value:
                msg = f"Field '{key}': expected a non-empty list, got {value!r}"
                raise OrliczConfigException(msg)
            try:
                return [kind(x) for x in value]
            except (TypeError, ValueError):
                msg = f"Field '{key}': expected numbers, got {value!r}"
                raise OrliczConfigException(msg)

        config = RunConfig(
            command = OrliczCommand.from_str(str(d['command'])),
            A = d.get('A', None),
            B = d.get('B', None),
            E = d.get('E', None),
            F = d.get('F', None),
            A_list = _names(d.get('A_list', None)),
            B_list = _names(d.get('B_list', None)),
            phi = d.get('phi', None),
            psi = d.get('psi', None),
            f = d.get('f', None),
            u = d.get('u', None),
            seq = str(d.get('seq', None) or "shift"),
            n = number('n', int, 2),
            t0 = number('t0', float, 1.0),
            t1 = number('t1', float, None),
            sigma = number('sigma', float, None),
            condition = OrliczCondition.from_str(str(d['condition'])) if d.get('condition', None) else None,
            table = OrliczTable.from_str(str(d['table'])) if d.get('table', None) else None,
            method = str(d.get('method', None) or "auto"),
            with_constant = bool(d.get('with_constant', False)),
            domain = d.get('domain', None),
            points = numbers('points', float, []),
            xi = _vectors(d.get('xi', None)),
            sweeps = list(d.get('sweeps', None) or []),
            k_list = numbers('k_list', int, list(DEFAULT_K_LIST)),
            k_max = number('k_max', int, None),
            delta_list = numbers('delta_list', float, list(COUNTER_DELTAS)),
            lambda_grid = numbers('lambda_grid', float, None),
            tail_k = number('tail_k', int, COUNTER_TAIL_K),
            output = d.get('output', None),
            format = OrliczFormat.from_str(str(d.get('format', None) or OrliczFormat.CSV)),
            seed = number('seed', int, MONTE_CARLO_SEED),
        )
        if config.seq not in SEQUENCES:
            msg = f"Field 'seq': expected one of {SEQUENCES}, got '{config.seq}'"
            raise OrliczConfigException(msg)
        if config.n < 1:
            msg = f"Field 'n': dimension must be positive, got {config.n}"
            raise OrliczConfigException(msg)
        if config.k_max is not None:
            config.k_list = [k for k in (2**j for j in range(1, 64)) if k <= config.k_max]
            if not config.k_list:
                msg = f"Field 'k_max': no dyadic index between 2 and {config.k_max}"
                raise OrliczConfigException(msg)
        return config


##
# Resolution of names and records
##
def resolve_young(value, familyset: OrliczFamilySet|None = None, field_name: str = "A") -> YoungFunction:
    """Registry name, families.json name, compact string or parametric record"""
    if isinstance(value, YoungFunction):
        return value
    if isinstance(value, dict):
        young = YoungFunction.from_dict(value)
        if young is None:
            msg = f"Field '{field_name}': invalid Young function record {value}"
            raise OrliczConfigException(msg)
        return young
    if not isinstance(value, str) or not value:
        msg = f"Field '{field_name}' is required"
        raise OrliczConfigException(msg)

    try:
        return OrliczFamilies.get_by_name(value)
    except OrliczFamilyUnknownException:
        pass
    if familyset is not None:
        try:
            return familyset.get_by_name(value)
        except OrliczFamilyUnknownException:
            pass
    try:
        return YoungFunction.from_str(value)
    except OrliczConfigException as ex:
        msg = f"Field '{field_name}': {ex}"
        raise OrliczConfigException(msg)


def resolve_envelope(value, field_name: str = "E") -> Envelope:
    if isinstance(value, Envelope):
        return value
    if value is None:
        return Envelope.one()
    if isinstance(value, dict):
        envelope = Envelope.from_dict(value)
        if envelope is None:
            msg = f"Field '{field_name}': invalid envelope record {value}"
            raise OrliczConfigException(msg)
        return envelope
    try:
        return OrliczEnvelopes.get_by_name(str(value))
    except OrliczFamilyUnknownException:
        pass
    try:
        return Envelope.from_str(str(value))
    except OrliczConfigException as ex:
        msg = f"Field '{field_name}': {ex}"
        raise OrliczConfigException(msg)


def resolve_phi(value, n: int, familyset: OrliczFamilySet|None = None, field_name: str = "phi") -> NDimYoungFunction:
    """'iso:<young>', 'ortho:<young>;<young>;...', or a Young function taken isotropically"""
    if isinstance(value, NDimYoungFunction):
        return value
    if isinstance(value, str):
        form, _, rest = value.partition(':')
        match form:
            case "iso":
                return NDimYoungFunction.isotropic(resolve_young(rest, familyset, field_name), n)
            case "ortho":
                parts = [p for p in rest.split(';') if p]
                if len(parts) != n:
                    msg = f"Field '{field_name}': {len(parts)} components for dimension {n}"
                    raise OrliczConfigException(msg)
                return NDimYoungFunction.orthotropic([resolve_young(p, familyset, field_name) for p in parts])
    return NDimYoungFunction.isotropic(resolve_young(value, familyset, field_name), n)


def resolve_spec(value) -> LipschitzSpec:
    if isinstance(value, LipschitzSpec):
        return value
    try:
        return OrliczLipschitzSpecs.get_by_name(str(value))
    except OrliczFamilyUnknownException:
        msg = f"Field 'f': unknown Lipschitz function '{value}', expected one of {OrliczLipschitzSpecs.names()}"
        raise OrliczConfigException(msg)


def resolve_function(value) -> TestFunction:
    if isinstance(value, TestFunction):
        return value
    try:
        return OrliczTestFunctions.get_by_name(str(value))
    except OrliczFamilyUnknownException:
        msg = f"Field 'u': unknown test function '{value}', expected one of {OrliczTestFunctions.names()}"
        raise OrliczConfigException(msg)


def resolve_domain(value, n: int) -> BoxDomain:
    if value is None:
        domain = BoxDomain.unit(n)
    else:
        try:
            domain = BoxDomain(value['lower'], value['upper'], tuple(tuple(f) for f in value.get('faces', [])))
        except (KeyError, TypeError, ValueError) as ex:
            msg = f"Field 'domain': invalid box {value}: {ex}"
            raise OrliczConfigException(msg)
    return domain


def make_sequence(kind: str, u: TestFunction):
    """k -> u + 1/k ('shift') or (1 + 1/k) u ('scale')"""
    match kind:
        case "shift":
            return lambda k: u.shifted(1.0 / k)
        case "scale":
            return lambda k: u * (1.0 + 1.0 / k)
    msg = f"Field 'seq': unknown sequence '{kind}'"
    raise OrliczConfigException(msg)


def default_lambda_grid(scale: float = 1.0) -> list[float]:
    return [scale * 2.0**j for j in DEFAULT_LAMBDA_EXPONENTS]


class OrliczFactory:

    @staticmethod
    def create_familyset() -> OrliczFamilySet:
        """
        Named parametric families are kept in a separate json file and parsed on demand.
        Invalid records are skipped.
        """
        with open(OrliczFamilySet.PATH, "r", encoding="UTF-8") as file:
            text = file.read()

        values = orjson.loads(text)
        records = list(filter(None, [OrliczFamilyRecord.from_dict(val) for val in values]))

        _LOGGER.info(f"Using {len(records)} family records")
        return OrliczFamilySet(records)


    @staticmethod
    def create_sweeps(table) -> list[dict]:
        """Parameter sweeps of one of the example tables"""
        table = OrliczTable.from_str(str(table))
        with open(PATH_TABLES, "r", encoding="UTF-8") as file:
            text = file.read()

        values = orjson.loads(text)
        sweeps = values.get(str(table), None)
        if not isinstance(sweeps, list):
            msg = f"No sweeps for table '{table}'"
            raise OrliczConfigException(msg)
        return sweeps


    @staticmethod
    def read_config(path: str) -> dict:
        """Raw config record; CLI flags are merged into it before validation"""
        try:
            with open(path, "r", encoding="UTF-8") as file:
                text = file.read()
        except OSError as ex:
            msg = f"Cannot read config '{path}': {ex}"
            raise OrliczConfigException(msg)
        try:
            values = orjson.loads(text)
        except orjson.JSONDecodeError as ex:
            msg = f"Config '{path}' is not valid JSON: {ex}"
            raise OrliczConfigException(msg)
        if not isinstance(values, dict):
            msg = f"Config '{path}' must hold a JSON object"
            raise OrliczConfigException(msg)
        return values


    @staticmethod
    def load_config(path: str) -> RunConfig:
        return RunConfig.from_dict(OrliczFactory.read_config(path))
