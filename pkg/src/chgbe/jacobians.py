"""Jacobians of the (lambda, w) -> kappa change of variables, closed form and
an independent central-difference verifier.

The free coefficients are (kappa_0 .. kappa_{2m-2}) for even size N = 2m and
(kappa_0 .. kappa_{2n-1}) for odd size N = 2n+1; for the anti-Hermitian kind
the differentiated components are the alternating real/imaginary parts, the
others being exactly constant by the parity structure.  The closed forms
are identical for the two kinds (the extra factors of i have modulus one).
"""

from dataclasses import dataclass

import numpy as np

from .densities import coeffs_from_spectral
from .errors import DegenerateInputError

PARITIES = ("even", "odd")


@dataclass
class JacobianResult:
    closed_form: float
    finite_diff: float
    rel_error: float


@dataclass
class JacobianReport:
    max_rel_error: float
    trials: int
    rejected: int
    worst_case: tuple


def jacobian_closed_form(lambdas, l, parity, kind="herm"):
    """log |det d(kappa)/d(lambda, w)| in closed form.

    Even: 2^m l^(m-1) prod lambda_j prod_{j<k} |lambda_j^2 - lambda_k^2|^2.
    Odd:  2^n l^n     prod lambda_j^3 prod_{j<k} |lambda_j^2 - lambda_k^2|^2.
    """
    lam = np.asarray(lambdas, dtype=float)
    if parity not in PARITIES:
        raise ValueError("parity must be 'even' or 'odd'")
    if kind not in ("herm", "antiherm"):
        raise ValueError("kind must be 'herm' or 'antiherm'")
    if not l > 0:
        raise ValueError("l must be positive")
    if (lam <= 0).any():
        raise ValueError("lambdas must be positive")
    s = lam.size
    lam2 = lam**2
    if s > 1:
        gaps = np.abs(lam2[:, None] - lam2[None, :])[np.triu_indices(s, 1)]
        if (gaps == 0).any():
            raise DegenerateInputError("coincident lambdas")
        gap_term = 2.0 * float(np.log(gaps).sum())
    else:
        gap_term = 0.0
    if parity == "even":
        return s * np.log(2.0) + (s - 1) * np.log(l) + float(np.log(lam).sum()) + gap_term
    return s * np.log(2.0) + s * np.log(l) + 3.0 * float(np.log(lam).sum()) + gap_term


def free_coefficients(lambdas, weights, l, parity, kind):
    """The differentiated real coefficient components as a flat vector."""
    lam = np.asarray(lambdas, dtype=float)
    w = np.asarray(weights, dtype=float)
    s = lam.size
    if parity == "even":
        kappa = coeffs_from_spectral(lam, w, l, kind).kappa
        free = kappa[: 2 * s - 1]
        if kind == "herm":
            return np.asarray(free, dtype=float)
        # Re kappa_0, Im kappa_1, Re kappa_2, ...
        j = np.arange(free.size)
        return np.where(j % 2 == 0, free.real, free.imag)
    w0 = 1.0 - w.sum()
    kappa = coeffs_from_spectral(lam, w, l, kind, w0=w0).kappa
    free = kappa[: 2 * s]
    if kind == "herm":
        return np.asarray(free, dtype=float)
    # Im kappa_0, Re kappa_1, Im kappa_2, ...
    j = np.arange(free.size)
    return np.where(j % 2 == 0, free.imag, free.real)


def jacobian_finite_difference(lambdas, weights, l, parity, kind="herm", step=1e-5, richardson=False):
    """log |det| of the map by central differences at the given point.

    weights are the full w_1..w_s with sum(w) = 1 (even, the last one is
    implied by the others) or sum(w) + w0 = 1 (odd, w0 implied).  The
    coefficients are polynomial in the parameters so the truncation error
    is O(step^2); richardson=True adds one extrapolation level for
    near-degenerate points.
    """
    lam = np.asarray(lambdas, dtype=float)
    w = np.asarray(weights, dtype=float)
    s = lam.size
    nfree_w = s - 1 if parity == "even" else s
    point = np.concatenate([lam, w[:nfree_w]])

    def f(q):
        lam_q = q[:s]
        if parity == "even":
            w_q = np.concatenate([q[s:], [1.0 - q[s:].sum()]])
        else:
            w_q = q[s:]
        return free_coefficients(lam_q, w_q, l, parity, kind)

    def partials(h):
        cols = []
        for i in range(point.size):
            e = np.zeros(point.size)
            e[i] = h
            cols.append((f(point + e) - f(point - e)) / (2 * h))
        return np.column_stack(cols)

    Jm = partials(step)
    if richardson:
        Jm = (4.0 * partials(step / 2) - Jm) / 3.0
    sign, logdet = np.linalg.slogdet(Jm)
    if sign == 0 or not np.isfinite(logdet):
        raise DegenerateInputError("singular finite-difference Jacobian")
    return float(logdet)


def compare_jacobians(lambdas, weights, l, parity, kind="herm", step=1e-5):
    cf = jacobian_closed_form(lambdas, l, parity, kind)
    fd = jacobian_finite_difference(lambdas, weights, l, parity, kind, step)
    return JacobianResult(closed_form=cf, finite_diff=fd, rel_error=abs(np.expm1(cf - fd)))


def verify_jacobians(grid, trials, rng, step=1e-5, min_gap=0.08):
    """Sample random interior points and compare both Jacobian routes.

    grid is an iterable of (parity, s, kind).  Points with nearly coincident
    lambdas are rejected and resampled (the change of variables degenerates
    there), counted in the report.
    """
    worst = 0.0
    worst_case = None
    rejected = 0
    total = 0
    for parity, s, kind in grid:
        for _ in range(trials):
            while True:
                lam = np.sort(rng.gen.uniform(0.5, 3.0, size=s))
                if s == 1 or np.diff(lam).min() > min_gap:
                    break
                rejected += 1
            if parity == "even":
                w = rng.gen.dirichlet(np.ones(s))
            else:
                w = rng.gen.dirichlet(np.ones(s + 1))[:s]
            l = rng.gen.uniform(0.5, 2.0)
            res = compare_jacobians(lam, w, float(l), parity, kind, step)
            total += 1
            if res.rel_error > worst:
                worst = res.rel_error
                worst_case = (parity, s, kind, lam.copy(), w.copy(), float(l))
    return JacobianReport(max_rel_error=worst, trials=total, rejected=rejected, worst_case=worst_case)
