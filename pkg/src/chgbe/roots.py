"""Aberth-Ehrlich simultaneous polynomial root finder, vectorised over batches.

Works on monic polynomials given by ascending coefficient arrays.  The
iteration refines all roots of each polynomial at once; batches share the
iteration so Monte Carlo root-finding over many sampled characteristic
polynomials stays cheap.  Companion-matrix eigenvalues are the fallback for
the rare polynomial that stagnates.
"""

import numpy as np

from .errors import NumericalFailureError

MAX_ITER = 500


def aberth_roots(coeffs, tol_scale=1e-13):
    """All complex roots of monic polynomials with ascending coefficients.

    Parameters
    ----------
    coeffs : (deg+1,) or (batch, deg+1) array
        Ascending coefficients; the leading coefficient must be nonzero
        (polynomials are normalised to monic internally).
    tol_scale : float
        Convergence is declared when every correction is below
        tol_scale * root_scale for a batch member.

    Returns
    -------
    roots : (deg,) or (batch, deg) complex array
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    single = np.asarray(coeffs).ndim == 1
    if abs(c[:, -1]).min() == 0.0:
        raise ValueError("leading coefficient must be nonzero")
    c = c / c[:, -1:]
    batch, deg = c.shape[0], c.shape[1] - 1
    if deg < 1:
        raise ValueError("degree must be >= 1")

    # Cauchy-style radius bound, then staggered starting circle; the angular
    # offset breaks the conjugate symmetry that can trap real-coefficient cases
    radius = 1.0 + np.abs(c[:, :-1]).max(axis=1)
    k = np.arange(deg)
    angles = 2 * np.pi * k / deg + 0.4
    z = radius[:, None] * np.exp(1j * angles)[None, :] * (0.8 + 0.2 * (k % 2))

    active = np.ones(batch, dtype=bool)
    for _ in range(MAX_ITER):
        za = z[active]
        ca = c[active]
        p, dp = _polyval_and_deriv(ca, za)
        ratio = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), 0.0)
        # sum over j != i of 1/(z_i - z_j); colliding iterates are skipped
        diff = za[:, :, None] - za[:, None, :]
        mask = ~np.eye(deg, dtype=bool)
        inv = np.zeros_like(diff)
        off = diff[:, mask]
        inv[:, mask] = np.where(off != 0, 1.0 / np.where(off != 0, off, 1.0), 0.0)
        s = inv.sum(axis=2)
        denom = 1.0 - ratio * s
        step = ratio / np.where(denom != 0, denom, 1.0)
        z[active] = za - step
        scale = np.maximum(np.abs(za).max(axis=1), 1.0)
        done = np.abs(step).max(axis=1) <= tol_scale * scale
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            break
    if active.any():
        # stagnation: fall back to companion eigenvalues per polynomial
        for i in np.flatnonzero(active):
            try:
                z[i] = np.roots(c[i][::-1])
            except np.linalg.LinAlgError as exc:
                raise NumericalFailureError("root finding failed for batch item %d" % i) from exc
    return z[0] if single else z


def _polyval_and_deriv(c, z):
    """Horner evaluation of p and p' for batched ascending coefficients."""
    batch, deg1 = c.shape
    p = np.broadcast_to(c[:, -1:], z.shape).copy()
    dp = np.zeros_like(z)
    for j in range(deg1 - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, j : j + 1]
    return p, dp
