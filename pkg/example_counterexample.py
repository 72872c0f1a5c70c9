import logging
import sys

from pyorlicz import counterexample_run

# Setup logging to StdOut
logging.basicConfig(stream=sys.stdout, level=logging.INFO)
logger = logging.getLogger(__name__)


def main():
    # u_k -> u in W^{1,A} on the unit square with A(t) = t e^t, while f(u_k) does not converge in modular
    report = counterexample_run(k_list=[2**j for j in range(1, 10)], n=2)

    for k, lam, value in report.source.to_rows():
        logger.info(f"source  k={k:<4} lambda={lam:<6g} modular={value:.6g}")

    for strip in report.strips:
        logger.info(f"strip   k={strip.k:<4} delta={strip.delta:<6g} lambda={strip.lam:<6g} integral={strip.quadrature} closed form={strip.closed_form} {strip.note}")

    for lam, trend in report.image_trend.items():
        logger.info(f"image   lambda={lam:<6g} {trend}")

    logger.info(f"")
    logger.info(f"Image sequence {'diverges' if report.diverges else 'is inconclusive'}")


if __name__ == "__main__":
    main()
