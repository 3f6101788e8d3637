"""Closed-form joint eigenvalue and spectral-measure log-densities.

Everything is computed and returned in log space (the gamma-function and
Vandermonde factors overflow very quickly).  Conventions:

* the spectral-measure density is for the unordered lambda tuple on
  (0, inf)^s together with Dirichlet weights, so it integrates to one over
  the full cube times the weight simplex;
* the fixed-coupling Hermitian density lives on the slice {sum z = l} of the
  sign-alternating cone, as a density in the first N-1 coordinates;
* the random-coupling Hermitian density lives on the full alternating cone
  in all N coordinates;
* the non-Hermitian density is reported with respect to the configuration
  reference measure prod dy (imaginary points) prod dx dy (pairs), with the
  pair abscissae ranging over all of R, which carries the 1/(L! M!)
  symmetry factor.  On the canonical chart x > 0 the density is 2^M times
  larger.

The |z_j + z_k| and |z_j - conj(z_k)| products run over ALL ordered pairs,
including j = k; that is the only reading under which the densities
normalise, and the normalization tests pin it.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .eig import CharPoly, ComplexConfig, HermitianConfig, alternating_ok
from .models import EnsembleParams

LOG2 = math.log(2.0)
TRACE_TOL = 1e-9

L_MODES = ("fixed", "chi", "custom")


@dataclass(frozen=True)
class DensityParams:
    """Ensemble parameters plus how the coupling strength l is distributed.

    mode 'fixed' needs l > 0; 'chi' draws l as sqrt(2) * chi_{beta*m/2};
    'custom' needs a positive density F on (0, inf) integrating to one.
    """

    params: EnsembleParams
    mode: str = "fixed"
    l: float = None
    F: object = None

    def __post_init__(self):
        if self.mode not in L_MODES:
            raise ValueError("mode must be one of %r" % (L_MODES,))
        if self.mode == "fixed" and not (self.l is not None and self.l > 0):
            raise ValueError("fixed mode needs l > 0")
        if self.mode == "custom" and not callable(self.F):
            raise ValueError("custom mode needs a callable density F")


def h_const(beta, s, a):
    """log of the spectral-measure normalization constant h_{beta,s,a}."""
    if not (beta > 0 and s >= 1):
        raise ValueError("need beta > 0 and s >= 1")
    if not beta * a / 2 > -1:
        raise ValueError("need beta*a/2 > -1 for integrability")
    t = s * (a * beta / 2 + 1 + (s - 1) * beta / 2) * LOG2
    j = np.arange(1, s + 1)
    t += float(
        (gammaln(1 + beta * j / 2) + gammaln(1 + beta * a / 2 + beta * (j - 1) / 2)).sum()
    )
    t -= s * float(gammaln(1 + beta / 2))
    return t


def Z_const(beta, m, a):
    """log Z: normalizer of the fixed-l Hermitian density, even size N = 2m."""
    return (
        m * (beta - 2) / 2 * LOG2
        + h_const(beta, m, a)
        + m * float(gammaln(beta / 2))
        - float(gammaln(beta * m / 2))
        - math.lgamma(m + 1)
    )


def W_const(beta, m, n, a):
    """log W: normalizer of the fixed-l Hermitian density, odd size N = 2n+1."""
    if not m >= n + 1:
        raise ValueError("odd case needs m >= n+1")
    return (
        (2 * n + 1) * (beta - 2) / 4 * LOG2
        + h_const(beta, n, a)
        + n * float(gammaln(beta / 2))
        + float(gammaln(beta * (m - n) / 2))
        - float(gammaln(beta * m / 2))
        - math.lgamma(n + 1)
    )


def Z_tilde(beta, m, a):
    """log of the random-l (chi) normalizer, even case."""
    return (
        (m * beta - m - 1) * LOG2
        + h_const(beta, m, a)
        + float(gammaln(beta * m / 4))
        + m * float(gammaln(beta / 2))
        - float(gammaln(beta * m / 2))
        - math.lgamma(m + 1)
    )


def W_tilde(beta, m, n, a):
    """log of the random-l (chi) normalizer, odd case."""
    return (
        ((2 * n + 1) * (beta - 2) / 4 + beta * m / 2 - 1) * LOG2
        + h_const(beta, n, a)
        + float(gammaln(beta * m / 4))
        + n * float(gammaln(beta / 2))
        + float(gammaln(beta * (m - n) / 2))
        - float(gammaln(beta * m / 2))
        - math.lgamma(n + 1)
    )


def chi_l_logpdf(l, beta, m):
    """log density of the built-in coupling law l ~ sqrt(2) chi_{beta*m/2}."""
    if l <= 0:
        return -math.inf
    k = beta * m / 2
    return (
        -(k - 1) * LOG2
        - float(gammaln(k / 2))
        + (k - 1) * math.log(l)
        - l * l / 4
    )


def spectral_logdensity(params, lambdas, weights, w0=None):
    """Joint log density of the chiral-ensemble spectral measure.

    Even case (m <= n): density of (lambda_1..lambda_m, w_1..w_{m-1}) with
    w_m implied.  Odd case (m >= n+1): density of (lambda_1..lambda_n,
    w_1..w_n) with w0 implied; w0 must then be supplied.  Off the support
    the value is -inf.
    """
    beta, a = params.beta, params.a
    s = min(params.m, params.n)
    odd = params.odd
    lam = np.asarray(lambdas, dtype=float)
    w = np.asarray(weights, dtype=float)
    if lam.size != s or w.size != s:
        raise ValueError("expected %d lambdas and weights" % s)
    if odd and w0 is None:
        raise ValueError("odd case needs w0")
    if not odd and w0 is not None:
        raise ValueError("even case takes no w0")
    allw = np.concatenate([w, [w0]]) if odd else w
    if (lam <= 0).any() or (allw <= 0).any() or abs(allw.sum() - 1.0) > TRACE_TOL:
        return -math.inf
    if lam.size > 1 and np.unique(lam).size < lam.size:
        return -math.inf
    t = s * LOG2 - h_const(beta, s, a)
    t += float(((beta * a + 1) * np.log(lam) - lam**2 / 2).sum())
    if s > 1:
        lam2 = lam**2
        gaps = np.abs(lam2[:, None] - lam2[None, :])[np.triu_indices(s, 1)]
        t += beta * float(np.log(gaps).sum())
    t += float(gammaln(beta * params.m / 2)) - s * float(gammaln(beta / 2))
    t += (beta / 2 - 1) * float(np.log(w).sum())
    if odd:
        k = beta * (params.m - params.n) / 2
        t += (k - 1) * math.log(w0) - float(gammaln(k))
    return t


def _config_terms(z, beta, exponent):
    """Shared factors: |z_j|^exponent e^{-z_j^2/4} and the two products."""
    zc = np.asarray(z, dtype=complex)
    absz = np.abs(zc)
    if (absz == 0).any():
        return -math.inf
    t = float(exponent * np.log(absz).sum()) - float(np.real((zc**2).sum())) / 4
    diff = np.abs(zc[:, None] - zc[None, :])[np.triu_indices(zc.size, 1)]
    if (diff == 0).any():
        return -math.inf
    t += float(np.log(diff).sum())
    return t


def _plus_product(z, beta, conjugate):
    """(beta-2)/4 * sum over ALL ordered pairs of log|z_j + z_k| (or |z_j - conj z_k|).

    Exactly zero at beta = 2; this code path is skipped then so the
    specialisation is exact rather than approximate.
    """
    if beta == 2:
        return 0.0
    zc = np.asarray(z, dtype=complex)
    other = np.conj(zc) if conjugate else -zc
    pair = np.abs(zc[:, None] - other[None, :])
    if (pair == 0).any():
        return -math.inf
    return (beta - 2) / 4 * float(np.log(pair).sum())


def hermitian_logdensity(z, dp):
    """Log density of the Hermitian-perturbation eigenvalue configuration.

    z is a HermitianConfig or a plain array; off-support input (wrong
    alternation, or trace away from l in fixed mode) gives -inf.  In fixed
    mode the returned value is a density in the first N-1 coordinates; in
    chi mode it is a density in all N coordinates.
    """
    if isinstance(z, HermitianConfig):
        z = z.z
    z = np.asarray(z, dtype=float)
    p = dp.params
    beta, a, m, n = p.beta, p.a, p.m, p.n
    N = p.N
    if z.size != N:
        raise ValueError("configuration size %d does not match N=%d" % (z.size, N))
    if dp.mode == "custom":
        raise ValueError("hermitian density supports fixed or chi coupling")
    if not alternating_ok(z):
        return -math.inf
    odd = p.odd
    exponent = (2 * beta * a - beta + 2) / 4 if not odd else (2 * beta * m - 2 * beta * n - beta - 2) / 4
    core = _config_terms(z, beta, exponent)
    if core == -math.inf:
        return -math.inf
    core += _plus_product(z, beta, conjugate=False)
    if dp.mode == "fixed":
        l = dp.l
        if abs(z.sum() - l) > TRACE_TOL:
            return -math.inf
        logc = Z_const(beta, m, a) if not odd else W_const(beta, m, n, a)
        return core - logc + (1 - m * beta / 2) * math.log(l) + l * l / 4
    logc = Z_tilde(beta, m, a) if not odd else W_tilde(beta, m, n, a)
    return core - logc


def nonhermitian_logdensity(config, dp):
    """Log density of the anti-Hermitian-perturbation configuration.

    With respect to the reference measure prod dy_j prod (dx_j dy_j) on the
    stratum X_{L,M} with pair abscissae over all of R; the 1/(L! M!)
    symmetry factor is included.  dp.mode must be 'chi' or 'custom'.
    """
    if dp.mode == "fixed":
        raise ValueError("the non-Hermitian law needs an absolutely continuous l")
    if not isinstance(config, ComplexConfig):
        config = _classify_or_none(config)
        if config is None:
            return -math.inf
    p = dp.params
    beta, a, m, n = p.beta, p.a, p.m, p.n
    if config.N != p.N:
        raise ValueError("configuration size %d does not match N=%d" % (config.N, p.N))
    z = config.points()
    tr = z.sum()
    if abs(tr.real) > TRACE_TOL * (1 + abs(tr)):
        return -math.inf
    l = tr.imag
    if l <= 0:
        return -math.inf
    if dp.mode == "chi":
        logF = chi_l_logpdf(l, beta, m)
    else:
        F = dp.F(l)
        if not F > 0:
            return -math.inf
        logF = math.log(F)
    odd = p.odd
    exponent = (2 * beta * a - beta + 2) / 4 if not odd else (2 * beta * m - 2 * beta * n - beta - 2) / 4
    core = _config_terms(z, beta, exponent)
    if core == -math.inf:
        return -math.inf
    core += _plus_product(z, beta, conjugate=True)
    logc = Z_const(beta, m, a) if not odd else W_const(beta, m, n, a)
    return (
        core
        - logc
        + logF
        + (1 - m * beta / 2) * math.log(l)
        - l * l / 4
        - math.lgamma(config.L + 1)
        - math.lgamma(config.M + 1)
    )


def _classify_or_none(z):
    from .eig import classify_roots

    try:
        return classify_roots(np.asarray(z, dtype=complex))
    except Exception:
        return None


def coeffs_from_spectral(lambdas, weights, l, kind, w0=None):
    """Characteristic-polynomial coefficients from the spectral data.

    The even part is prod(u - lambda_j^2); the odd part is
    -l sum_j w_j prod_{k != j} (u - lambda_k^2), with the point u = 0 and
    weight w0 joining the product in the odd-size case.  For the
    anti-Hermitian kind the corresponding coefficients pick up a factor i.
    """
    lam = np.asarray(lambdas, dtype=float)
    w = np.asarray(weights, dtype=float)
    if kind not in ("herm", "antiherm"):
        raise ValueError("kind must be 'herm' or 'antiherm'")
    if lam.size != w.size:
        raise ValueError("lambdas and weights must have equal length")
    lam2 = lam**2
    poly = np.polynomial.polynomial
    c = poly.polyfromroots(lam2) if lam2.size else np.array([1.0])
    if w0 is None:
        # N = 2s: kappa_{2j} = c_j, kappa_{2j+1} = d_j (times i if anti)
        d = np.zeros(lam.size)
        for j in range(lam.size):
            d = d + w[j] * poly.polyfromroots(np.delete(lam2, j))
        d = -l * d
        s = lam.size
        kappa = np.zeros(2 * s + 1, dtype=float if kind == "herm" else complex)
        kappa[0::2] = c
        kappa[1::2] = d if kind == "herm" else 1j * d
    else:
        # N = 2s+1: kappa_{2j+1} = c_j, kappa_{2j} = d_j (times i if anti)
        nodes = np.concatenate([[0.0], lam2])
        ws = np.concatenate([[w0], w])
        d = np.zeros(lam.size + 1)
        for j in range(nodes.size):
            d = d + ws[j] * poly.polyfromroots(np.delete(nodes, j))
        d = -l * d
        s = lam.size
        kappa = np.zeros(2 * s + 2, dtype=float if kind == "herm" else complex)
        kappa[1::2] = c
        kappa[0::2] = d if kind == "herm" else 1j * d
    return CharPoly(kappa=kappa, kind=kind)
