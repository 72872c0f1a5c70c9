##
# Command-line front-end
#
# pyorlicz <command> [options]
#   conjugate        A, A_n and H_n on a log grid, classification of the defining integrals
#   aniso            Phi_o, Phi_n and theta for an n-dimensional Young function
#   norm             Luxemburg norms and modulars of a test function
#   converge         modular convergence of a sequence u_k -> u over a lambda grid
#   check            one admissibility condition, JSON verdict
#   table            boundary tables for the example parameter sweeps
#   counterexample   modular versus norm convergence of the composition operator
#   experiment       continuity experiment from a config file
#
# Exit status: 0 on success (a failing verdict is a result), 2 on indeterminate verdicts, 1 on errors.
##

import argparse
import csv
import logging
import math
import sys

import numpy as np
import orjson

from .aniso import (
    phi_circ,
    phi_n,
    sublevel_volume,
    theta_solution,
    unit_ball_volume,
)
from .conditions import (
    ZygmundRegion,
    check_aniso,
    check_double_a,
    check_inq_ass2,
    check_inq_assD,
    check_ortho,
    table_rows,
)
from .conjugate import (
    sobolev_conjugate,
    sobolev_conjugate_sigma,
)
from .const import (
    EXIT_ERROR,
    EXIT_INDETERMINATE,
    EXIT_OK,
    SCHEMA_VERSION,
    OrliczCommand,
    OrliczCondition,
    OrliczConfigException,
    OrliczConstructionException,
    OrliczDomainException,
    OrliczFormat,
    OrliczIndeterminateException,
    OrliczPreconditionException,
    OrliczQuadratureException,
    OrliczSolverException,
)
from .factory import (
    OrliczFactory,
    RunConfig,
    default_lambda_grid,
    make_sequence,
    resolve_domain,
    resolve_envelope,
    resolve_function,
    resolve_phi,
    resolve_spec,
    resolve_young,
)
from .families import (
    OrliczFamilyUnknownException,
)
from .modular import (
    modular_convergence,
    w1a_quantities,
)
from .nemytskii import (
    CounterexampleReport,
    continuity_experiment,
    counterexample_run,
)
from .numerics import (
    log_grid,
)


_LOGGER = logging.getLogger(__name__)

GRID_LO = 1e-3
GRID_HI = 1e3
GRID_PER_DECADE = 8

CONJUGATE_HEADER = ["t", "A", "H", "A_n"]
ANISO_HEADER = ["section", "t", "xi", "value", "stderr"]
NORM_HEADER = ["quantity", "lambda", "value"]
CONVERGE_HEADER = ["k", "lambda", "modular"]
EXPERIMENT_HEADER = ["section", "k", "lambda", "value"]
VERDICT_HEADER = ["condition", "holds", "worst_margin", "witness", "grid", "analytic", "constant", "indeterminate"]

ERRORS = (
    OrliczConfigException,
    OrliczConstructionException,
    OrliczDomainException,
    OrliczFamilyUnknownException,
    OrliczPreconditionException,
    OrliczQuadratureException,
    OrliczSolverException,
    OSError,
)


class _Parser(argparse.ArgumentParser):
    """Usage errors surface as OrliczConfigException instead of exiting with status 2"""

    def error(self, message):
        msg = f"{self.prog}: {message}"
        raise OrliczConfigException(msg)


##
# Argument parsing
##
def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON run configuration")
    common.add_argument("--out", dest="output", default=argparse.SUPPRESS, help="output file, stdout when absent")
    common.add_argument("--format", default=argparse.SUPPRESS, choices=[str(f) for f in OrliczFormat])
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)
    return common


def _floats(s: str) -> list[float]:
    try:
        return [float(x) for x in s.split(',') if x]
    except ValueError:
        msg = f"Expected comma separated numbers, got '{s}'"
        raise argparse.ArgumentTypeError(msg)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="pyorlicz", description="Orlicz-Sobolev numerical toolkit", parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(command: OrliczCommand, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(str(command), help=help, parents=[common])
        p.add_argument("--n", type=int, default=argparse.SUPPRESS, help="dimension")
        return p

    p = add(OrliczCommand.CONJUGATE, "Sobolev conjugate of a Young function")
    p.add_argument("--A", default=argparse.SUPPRESS, help="family name or 'kind:p1,p2'")
    p.add_argument("--sigma", type=float, default=argparse.SUPPRESS)
    p.add_argument("--points", type=_floats, default=argparse.SUPPRESS, help="t values, comma separated")

    p = add(OrliczCommand.ANISO, "anisotropic conjugate and theta")
    p.add_argument("--phi", default=argparse.SUPPRESS, help="'iso:<A>' or 'ortho:<A1>;<A2>;...'")
    p.add_argument("--E", default=argparse.SUPPRESS)
    p.add_argument("--xi", default=argparse.SUPPRESS, help="points 'a,b;c,d'")
    p.add_argument("--method", default=argparse.SUPPRESS, choices=["auto", "rays", "monte_carlo"])
    p.add_argument("--points", type=_floats, default=argparse.SUPPRESS)

    for command, help in ((OrliczCommand.NORM, "Luxemburg norms of a test function"),
                          (OrliczCommand.CONVERGE, "modular convergence of a sequence")):
        p = add(command, help)
        p.add_argument("--A", default=argparse.SUPPRESS)
        p.add_argument("--u", default=argparse.SUPPRESS, help="test function name")
        p.add_argument("--lambdas", dest="lambda_grid", type=_floats, default=argparse.SUPPRESS)
        if command == OrliczCommand.CONVERGE:
            p.add_argument("--seq", default=argparse.SUPPRESS, choices=["shift", "scale"])
            p.add_argument("--kmax", dest="k_max", type=int, default=argparse.SUPPRESS)

    p = add(OrliczCommand.CHECK, "admissibility condition")
    p.add_argument("--cond", dest="condition", default=argparse.SUPPRESS, choices=[str(c) for c in OrliczCondition])
    for name in ("A", "B", "E", "F", "phi", "psi"):
        p.add_argument(f"--{name}", default=argparse.SUPPRESS)
    p.add_argument("--A-list", dest="A_list", default=argparse.SUPPRESS, help="'A1;A2;...'")
    p.add_argument("--B-list", dest="B_list", default=argparse.SUPPRESS, help="'B1;B2;...'")
    p.add_argument("--t0", type=float, default=argparse.SUPPRESS)
    p.add_argument("--t1", type=float, default=argparse.SUPPRESS)
    p.add_argument("--sigma", type=float, default=argparse.SUPPRESS)
    p.add_argument("--method", default=argparse.SUPPRESS, choices=["auto", "analytic", "grid"])
    p.add_argument("--with-constant", dest="with_constant", action="store_true", default=argparse.SUPPRESS)

    p = add(OrliczCommand.TABLE, "example boundary tables")
    p.add_argument("--table", default=argparse.SUPPRESS)

    p = sub.add_parser(str(OrliczCommand.COUNTEREXAMPLE), help="norm counterexample", parents=[common])
    p.add_argument("--dim", dest="n", type=int, default=argparse.SUPPRESS)
    p.add_argument("--kmax", dest="k_max", type=int, default=argparse.SUPPRESS)
    p.add_argument("--deltas", dest="delta_list", type=_floats, default=argparse.SUPPRESS)
    p.add_argument("--lambdas", dest="lambda_grid", type=_floats, default=argparse.SUPPRESS)

    sub.add_parser(str(OrliczCommand.EXPERIMENT), help="continuity experiment from --config", parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Config file values overridden by command line flags"""
    values = {}
    path = getattr(args, "config", None)
    if path:
        values = OrliczFactory.read_config(path)

    flags = {k: v for k, v in vars(args).items() if k not in ("config", "verbose") and v is not None}
    if flags.get("command", None) is None:
        flags.pop("command", None)
    if flags.get("command", None) == str(OrliczCommand.EXPERIMENT) and not path:
        msg = "Command 'experiment' needs --config"
        raise OrliczConfigException(msg)
    values.update(flags)
    return RunConfig.from_dict(values)


##
# Output
##
def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def write_output(config: RunConfig, header: list[str], rows: list[list], payload: dict):
    """CSV rows or a JSON document, to the configured file or stdout"""
    if config.format == OrliczFormat.JSON:
        document = {"schema": SCHEMA_VERSION, "command": str(config.command)} | payload
        data = orjson.dumps(document, option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_NON_STR_KEYS)
        if config.output:
            with open(config.output, "wb") as file:
                file.write(data)
                file.write(b"\n")
        else:
            sys.stdout.write(data.decode("utf-8") + "\n")
    else:
        if config.output:
            with open(config.output, "w", newline="", encoding="utf-8") as file:
                writer = csv.writer(file, lineterminator="\n")
                writer.writerow(header)
                writer.writerows(rows)
        else:
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)

    if config.output:
        _LOGGER.info(f"Wrote {len(rows)} rows to {config.output}")


##
# Commands
##
def _grid(config: RunConfig) -> np.ndarray:
    if config.points:
        return np.asarray(sorted(config.points), dtype=float)
    return log_grid(GRID_LO, GRID_HI, GRID_PER_DECADE)


def run_conjugate(config: RunConfig) -> int:
    A = resolve_young(config.A, OrliczFactory.create_familyset())
    if config.sigma is not None:
        result = sobolev_conjugate_sigma(A, config.sigma, config.n)
    else:
        result = sobolev_conjugate(A, config.n)

    rows = [list(r) for r in result.rows(_grid(config))]
    payload = result.to_dict() | {"n": config.n, "rows": [[_clean(x) for x in r] for r in rows]}
    write_output(config, CONJUGATE_HEADER, rows, payload)
    return EXIT_OK


def run_aniso(config: RunConfig) -> int:
    familyset = OrliczFactory.create_familyset()
    phi = resolve_phi(config.phi, config.n, familyset)
    E = resolve_envelope(config.E)
    t = _grid(config)

    if config.method == "monte_carlo":
        volume, error = sublevel_volume(phi, t, "monte_carlo", seed=config.seed)
        radius = (volume / unit_ball_volume(phi.n))**(1.0 / phi.n)
        stderr = radius * error / (phi.n * volume)
    else:
        radius = phi_circ(phi, t, config.method)
        stderr = np.full_like(t, np.nan)

    # Monte Carlo only cross-checks the volumes; Phi_n and theta use the ray table
    table_method = "rays" if config.method == "monte_carlo" else config.method
    conj = phi_n(phi, table_method)
    rows = []
    for s, r, e in zip(t, radius, stderr):
        rows.append(["circ_inverse", float(s), "", float(r), "" if math.isnan(e) else float(e)])
    for s, value in zip(t, conj.An(t)):
        rows.append(["phi_n", float(s), "", float(value), ""])

    thetas = []
    if config.xi:
        xi = np.asarray(config.xi, dtype=float)
        if xi.shape[-1] != phi.n:
            msg = f"Field 'xi': points of length {xi.shape[-1]} for dimension {phi.n}"
            raise OrliczConfigException(msg)
        thetas = np.atleast_1d(theta_solution(phi, E, table_method)(xi))
        for x, th in zip(xi, thetas):
            rows.append(["theta", "", ";".join(f"{v:g}" for v in x), float(th), ""])

    payload = {
        "phi": str(phi),
        "envelope": str(E),
        "conjugate": conj.to_dict(),
        "rows": [[_clean(x) for x in r] for r in rows],
    }
    write_output(config, ANISO_HEADER, rows, payload)
    return EXIT_OK


def run_norm(config: RunConfig) -> int:
    A = resolve_young(config.A, OrliczFactory.create_familyset())
    u = resolve_function(config.u)
    domain = resolve_domain(config.domain, config.n)
    grid = config.lambda_grid or default_lambda_grid()

    q = w1a_quantities(u, A, domain)
    rows = []
    for lam in grid:
        rows.append(["modular_value", lam, q.modular_u(lam)])
        rows.append(["modular_gradient", lam, q.modular_grad(lam)])
    rows.append(["norm_value", "", q.norm_u])
    rows.append(["norm_gradient", "", q.norm_grad])
    rows.append(["norm", "", q.norm])

    payload = {"u": u.label, "A": str(A), "domain": str(domain)} | q.to_dict() | {
        "modulars": [[_clean(x) for x in r] for r in rows[:-3]],
    }
    write_output(config, NORM_HEADER, rows, payload)
    return EXIT_OK


def run_converge(config: RunConfig) -> int:
    A = resolve_young(config.A, OrliczFactory.create_familyset())
    u = resolve_function(config.u)
    domain = resolve_domain(config.domain, config.n)
    grid = config.lambda_grid or default_lambda_grid()

    report = modular_convergence(make_sequence(config.seq, u), u, A, domain, grid, config.k_list, "both")
    payload = {"u": u.label, "A": str(A), "seq": config.seq} | report.to_dict()
    write_output(config, CONVERGE_HEADER, report.to_rows(), payload)
    return EXIT_OK


def run_check(config: RunConfig) -> int:
    familyset = OrliczFactory.create_familyset()

    def young(value, name):
        return resolve_young(value, familyset, name)

    E = resolve_envelope(config.E)

    match config.condition:
        case OrliczCondition.INQ_ASS2:
            verdict = check_inq_ass2(young(config.A, "A"), young(config.B, "B"), E, config.n, config.t0,
                                     config.sigma, config.method)
        case OrliczCondition.INQ_ASSD:
            verdict = check_inq_assD(young(config.A, "A"), young(config.B, "B"), E, young(config.F, "F"), _t1(config))
        case OrliczCondition.DOUBLE_A:
            verdict = check_double_a(young(config.A, "A"), young(config.B, "B"), E, _t1(config))
        case OrliczCondition.ORTHO:
            As = [young(a, "A_list") for a in config.A_list]
            Bs = [young(b, "B_list") for b in config.B_list]
            verdict = check_ortho(As, Bs, E, config.n, config.t0, config.method)
        case OrliczCondition.ANISO:
            phi = resolve_phi(config.phi, config.n, familyset, "phi")
            psi = resolve_phi(config.psi, config.n, familyset, "psi")
            verdict = check_aniso(phi, psi, E, config.n, config.with_constant)
        case _:
            msg = "Field 'condition' is required for command 'check'"
            raise OrliczConfigException(msg)

    d = verdict.to_dict()
    row = [str(config.condition)] + [d[k] for k in VERDICT_HEADER[1:]]
    write_output(config, VERDICT_HEADER, [row], {"condition": str(config.condition)} | d)
    return EXIT_INDETERMINATE if verdict.indeterminate else EXIT_OK


def _t1(config: RunConfig) -> float:
    if config.t1 is None:
        msg = f"Field 't1' is required for condition '{config.condition}'"
        raise OrliczConfigException(msg)
    return config.t1


def run_table(config: RunConfig) -> int:
    if config.table is None:
        msg = "Field 'table' is required for command 'table'"
        raise OrliczConfigException(msg)
    sweeps = config.sweeps or OrliczFactory.create_sweeps(config.table)
    try:
        regions = table_rows(config.table, sweeps)
    except (KeyError, TypeError) as ex:
        msg = f"Field 'sweeps': invalid sweep record ({ex})"
        raise OrliczConfigException(msg)

    for region in regions:
        if not region.validated:
            _LOGGER.warning(f"Row '{region.case}' with p={region.p:g}, n={region.n} did not validate")
    payload = {"table": str(config.table), "rows": [r.to_dict() for r in regions]}
    write_output(config, ZygmundRegion.HEADER, [r.to_row() for r in regions], payload)
    return EXIT_OK


def run_counterexample(config: RunConfig) -> int:
    kwargs = {}
    if config.lambda_grid:
        kwargs["lambda_grid"] = config.lambda_grid
    report = counterexample_run(config.k_list, config.delta_list, config.n, tail_k=config.tail_k, **kwargs)
    write_output(config, CounterexampleReport.HEADER, report.to_rows(), report.to_dict())
    return EXIT_OK


def run_experiment(config: RunConfig) -> int:
    familyset = OrliczFactory.create_familyset()
    A = resolve_young(config.A, familyset, "A")
    B = resolve_young(config.B, familyset, "B")
    spec = resolve_spec(config.f)
    u = resolve_function(config.u)
    domain = resolve_domain(config.domain, config.n)
    grid = config.lambda_grid or default_lambda_grid()

    report = continuity_experiment(spec, make_sequence(config.seq, u), u, A, B, domain, grid, config.k_list)
    rows = [["source", k, lam, value] for k, lam, value in report.source.to_rows()]
    rows += [["image", k, lam, value] for k, lam, value in report.image.to_rows()]
    rows.append(["source_lambda", "", report.lam, ""])
    rows.append(["norm_limit", "", "", report.norm_limit])
    rows.append(["predicted", "", report.predicted, "true" if report.converges_at_predicted else "false"])
    write_output(config, EXPERIMENT_HEADER, rows, {"f": str(spec), "u": u.label} | report.to_dict())
    return EXIT_OK


COMMANDS = {
    OrliczCommand.CONJUGATE: run_conjugate,
    OrliczCommand.ANISO: run_aniso,
    OrliczCommand.NORM: run_norm,
    OrliczCommand.CONVERGE: run_converge,
    OrliczCommand.CHECK: run_check,
    OrliczCommand.TABLE: run_table,
    OrliczCommand.COUNTEREXAMPLE: run_counterexample,
    OrliczCommand.EXPERIMENT: run_experiment,
}


def run(config: RunConfig) -> int:
    _LOGGER.info(f"Running {config.command}")
    return COMMANDS[config.command](config)


def main(argv: list[str]|None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except OrliczConfigException as ex:
        sys.stderr.write(f"{ex}\n")
        return EXIT_ERROR

    logging.basicConfig(
        stream=sys.stdout,
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    try:
        config = config_from_args(args)
        return run(config)
    except OrliczIndeterminateException as ex:
        _LOGGER.warning(f"Indeterminate: {ex}")
        return EXIT_INDETERMINATE
    except ERRORS as ex:
        _LOGGER.error(f"{type(ex).__name__}: {ex}")
        sys.stderr.write(f"{ex}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
