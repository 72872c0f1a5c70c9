import logging
import sys

from pyorlicz import OrliczFactory, OrliczFamilies, OrliczTestFunctions
from pyorlicz import BoxDomain, YoungFunction, Envelope
from pyorlicz import sobolev_conjugate, luxemburg_norm, check_inq_ass2

# Setup logging to StdOut
logging.basicConfig(stream=sys.stdout, level=logging.INFO)
logger = logging.getLogger(__name__)


def main():
    familyset = OrliczFactory.create_familyset()

    # Sobolev conjugates in dimension 3 for a few named Young functions
    for A in [OrliczFamilies.get_by_name("power2"), OrliczFamilies.get_by_name("zygmund2_1"), familyset.get_by_name("llogl")]:
        result = sobolev_conjugate(A, 3)
        logger.info(f"")
        logger.info(f"{A}: H(inf)={result.H_limit:g}, integral at zero {result.classification_zero}, at infinity {result.classification_inf}")
        for t, a, h, an in result.rows([0.5, 1.0, 2.0, 4.0]):
            logger.info(f"  t={t:g}  A={a:.6g}  H={h:.6g}  A_n={an:.6g}")

    # Luxemburg norm of u = x_1 on the unit square
    u = OrliczTestFunctions.get_by_name("x1")
    domain = BoxDomain.unit(2)
    A = YoungFunction.power_log(2, 1)
    logger.info(f"")
    logger.info(f"|{u.label}|_{A} on {domain} = {luxemburg_norm(u, A, domain):.6f}")

    # Condition on the pair (A, B) with envelope E(t) = t
    verdict = check_inq_ass2(YoungFunction.power(2), YoungFunction.power(1.5), Envelope.power(1), 3)
    logger.info(f"")
    logger.info(f"inq-ass2 holds: {verdict.holds} (analytic: {verdict.analytic}, constant: {verdict.constant})")


if __name__ == "__main__":
    main()
