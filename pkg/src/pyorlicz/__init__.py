from .young import YoungFunction, Regime, OrliczVerdict
from .envelope import Envelope
from .conjugate import ConjugateResult, sobolev_conjugate, sobolev_conjugate_sigma, H_n, hat_An, classify_integral_zero, classify_integral_inf
from .aniso import NDimYoungFunction, ThetaSolution, bar_p, orthotropic_bar, phi_circ, phi_circ_function, phi_n, sublevel_volume, theta_solution, solve_theta
from .modular import BoxDomain, TestFunction, ModularReport, W1AQuantities, modular_integral, luxemburg_norm, w1a_quantities, modular_convergence
from .nemytskii import LipschitzSpec, ContinuityReport, CounterexampleReport, PoincareReport, continuity_experiment, counterexample_run, poincare_probe
from .nemytskii import lemma_lem1_test, lemma_inqd_test, lemma_fan_probe
from .conditions import ConditionVerdict, ZygmundRegion, check_inq_ass2, check_inq_assD, check_double_a, check_ortho, check_aniso, zygmund_table, ortho_table, table_rows

from .const import OrliczKind, OrliczRegimeTag, OrliczIntegral, OrliczEnvelopeKind, OrliczForm, OrliczCondition, OrliczTable, OrliczCommand, OrliczFormat
from .const import OrliczDomainException, OrliczIndeterminateException, OrliczConstructionException, OrliczPreconditionException, OrliczQuadratureException, OrliczSolverException, OrliczConfigException
from .families import OrliczFamilies, OrliczEnvelopes, OrliczLipschitzSpecs, OrliczTestFunctions, OrliczFamilySet, OrliczFamilyRecord, OrliczFamilyUnknownException
from .factory import OrliczFactory, RunConfig

# For unit testing
from .growth import OrliczGrowth, conjugate_growth, integral_at_zero, integral_at_infinity
from .conjugate import OrliczHn
from .numerics import log_grid, generalized_inverse, bisect_geometric, integrate_log, fitted_exponent
