##
# Closed-form and scipy reference values shared by the tests
##

import math

import numpy as np

from scipy import integrate, optimize


def power_Hn(p: float, n: int, s):
    """H_n for A(t) = t^p with p < n"""
    s = np.asarray(s, dtype=float)
    return ((n - 1.0) / (n - p) * s**((n - p) / (n - 1.0)))**((n - 1.0) / n)


def power_An(p: float, n: int, t):
    """A_n = A o H_n^-1 for A(t) = t^p with p < n, which is c t^(np/(n-p))"""
    t = np.asarray(t, dtype=float)
    inverse = ((n - p) / (n - 1.0) * t**(n / (n - 1.0)))**((n - 1.0) / (n - p))
    return inverse**p


def quad_Hn(Y, n: int, s: float) -> float:
    """H_n(s) by scipy quad on the log axis"""
    def g(x):
        t = math.exp(x)
        return (t / float(Y(t)))**(1.0 / (n - 1.0)) * t
    value, _ = integrate.quad(g, -60.0, math.log(s), limit=400)
    return value**((n - 1.0) / n)


def luxemburg_reference(modular, lo: float = 1e-6, hi: float = 1e6) -> float:
    """Root of modular(lambda) = 1 for a decreasing modular"""
    return optimize.brentq(lambda lam: modular(lam) - 1.0, lo, hi, xtol=1e-14, rtol=1e-12)


def strip_reference(k: int, delta: float) -> float:
    """int_delta^{1/k} |log x| / x dx"""
    value, _ = integrate.quad(lambda x: -math.log(x) / x, delta, 1.0 / k, limit=400)
    return value
