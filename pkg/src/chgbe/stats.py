"""Distributional test statistics and quadrature used by the verification suite."""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import AccuracyError


@dataclass
class KsReport:
    statistic: float
    n1: int
    n2: int  # None for the one-sample test
    threshold: float
    passed: bool


def ks_critical(alpha):
    """Asymptotic Kolmogorov-Smirnov critical coefficient c(alpha)."""
    return math.sqrt(-0.5 * math.log(alpha / 2.0))


def ks_two_sample(a, b, alpha_level=0.001):
    """Exact sup-distance of two empirical CDFs with asymptotic threshold."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("samples must be nonempty")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    d = float(np.abs(fa - fb).max())
    thr = ks_critical(alpha_level) * math.sqrt((a.size + b.size) / (a.size * b.size))
    return KsReport(statistic=d, n1=a.size, n2=b.size, threshold=thr, passed=d < thr)


def ks_one_sample(a, cdf, alpha_level=0.001):
    """Exact sup-distance between the empirical CDF and a given CDF."""
    x = np.sort(np.asarray(a, dtype=float))
    if x.size == 0:
        raise ValueError("sample must be nonempty")
    F = np.asarray(cdf(x), dtype=float)
    if (np.diff(F) < -1e-12).any():
        raise ValueError("cdf is not monotone on the sample points")
    n = x.size
    i = np.arange(1, n + 1)
    d = float(max((i / n - F).max(), (F - (i - 1) / n).max()))
    thr = ks_critical(alpha_level) / math.sqrt(n)
    return KsReport(statistic=d, n1=n, n2=None, threshold=thr, passed=d < thr)


def quad_nd(logf, domain, tol=1e-8):
    """Adaptive quadrature of exp(logf) over a box (dimension <= 3).

    logf takes scalar coordinates in the same order as domain; domain
    entries are (lo, hi) pairs or callables of the outer variables as in
    scipy's nquad (first coordinate innermost).  Raises AccuracyError with
    the best estimate if the requested absolute tolerance is not reached.
    """
    domain = list(domain)
    if not 1 <= len(domain) <= 3:
        raise ValueError("quad_nd supports dimensions 1..3")

    def f(*xs):
        v = logf(*xs)
        return math.exp(v) if v > -math.inf else 0.0

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.nquad(
            f, domain, opts={"epsabs": tol / 10.0, "epsrel": 1e-10, "limit": 200}
        )
    if err > tol:
        raise AccuracyError(
            "quadrature error %g exceeds tolerance %g" % (err, tol), val, err
        )
    return float(val)
