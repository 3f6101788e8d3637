"""Eigenvalues, spectral measures and the inverse maps back to Jacobi matrices.

The Hermitian-perturbed matrix has real eigenvalues in the sign-alternating
order z1 > -z2 > z3 > ... > 0; the anti-Hermitian one has eigenvalues in the
open upper half plane, symmetric under z -> -conj(z).  Both correspondences
are bijections, realised here constructively: forward via the symmetric
tridiagonal solver or root finding on the characteristic polynomial, inverse
via the even/odd coefficient split, residue formulas for the weights, and a
three-term (Lanczos) recurrence on the reconstructed spectral measure.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import (
    DegeneracyWarning,
    IllConditionedMeasureError,
    NumericalFailureError,
    SymmetryViolationError,
)
from .models import JacobiMatrix, PerturbedJacobi
from .roots import aberth_roots

CLASSIFY_TOL = 1e-9


@dataclass(frozen=True)
class SpectralMeasure:
    """Symmetric discrete measure sum w_j/2 (d_{l_j} + d_{-l_j}) (+ w0 d_0).

    lambdas are strictly positive and strictly decreasing; w0 is present
    exactly when the matrix size is odd.
    """

    lambdas: np.ndarray
    weights: np.ndarray
    w0: float = None

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "weights", w)
        if lam.size != w.size:
            raise ValueError("lambdas and weights must have equal length")
        if not ((lam > 0).all() and (np.diff(lam) < 0).all()):
            raise ValueError("lambdas must be positive and strictly decreasing")
        if not (w > 0).all():
            raise ValueError("weights must be positive")
        total = w.sum() + (self.w0 if self.w0 is not None else 0.0)
        if abs(total - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1, got %r" % (total,))

    @property
    def N(self):
        return 2 * self.lambdas.size + (1 if self.w0 is not None else 0)

    def support(self):
        """Support points and masses of the measure, negative side included."""
        t = np.concatenate([self.lambdas, -self.lambdas])
        p = np.concatenate([self.weights / 2, self.weights / 2])
        if self.w0 is not None:
            t = np.concatenate([t, [0.0]])
            p = np.concatenate([p, [self.w0]])
        return t, p

    def moment(self, k):
        t, p = self.support()
        return float((p * t**k).sum())


@dataclass(frozen=True)
class HermitianConfig:
    """Eigenvalues of J + l I_{1x1} in the sign-alternating order."""

    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        object.__setattr__(self, "z", z)
        if not alternating_ok(z):
            raise ValueError("z is not in the strict sign-alternating order")

    @property
    def l(self):
        return float(self.z.sum())


@dataclass(frozen=True)
class ComplexConfig:
    """Upper-half-plane eigenvalue configuration of J + i l I_{1x1}.

    imag_points holds the heights of the L purely imaginary points; pairs is
    an (M, 2) array of (x, y) with x, y > 0 for the mirror pairs +-x + i y.
    """

    imag_points: np.ndarray
    pairs: np.ndarray

    def __post_init__(self):
        yi = np.asarray(self.imag_points, dtype=float).reshape(-1)
        pr = np.asarray(self.pairs, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "imag_points", yi)
        object.__setattr__(self, "pairs", pr)
        if yi.size and not (yi > 0).all():
            raise ValueError("imaginary points must have positive height")
        if pr.size and not (pr > 0).all():
            raise ValueError("pair coordinates must be positive")

    @property
    def L(self):
        return self.imag_points.size

    @property
    def M(self):
        return self.pairs.shape[0]

    @property
    def N(self):
        return self.L + 2 * self.M

    @property
    def l(self):
        return float(self.imag_points.sum() + 2 * self.pairs[:, 1].sum())

    def points(self):
        """All N eigenvalues as a complex array."""
        out = [1j * self.imag_points]
        if self.M:
            x, y = self.pairs[:, 0], self.pairs[:, 1]
            out += [x + 1j * y, -x + 1j * y]
        return np.concatenate(out)


@dataclass(frozen=True)
class CharPoly:
    """Monic characteristic polynomial, ascending coefficients kappa_0..kappa_N."""

    kappa: np.ndarray
    kind: str

    @property
    def N(self):
        return self.kappa.size - 1


def alternating_ok(z):
    """Strict sign-alternating order: z1 > -z2 > z3 > ... > 0."""
    z = np.asarray(z, dtype=float)
    signs = np.where(np.arange(z.size) % 2 == 0, 1.0, -1.0)
    seq = signs * z
    return bool((seq > 0).all() and (np.diff(seq) < 0).all())


def char_poly(pj):
    """Coefficients of det(z - M) via the three-term determinant recurrence.

    p_k = (z - d_k) p_{k-1} - a_{k-1}^2 p_{k-2} with d_1 = l (or i l) and
    d_k = 0 afterwards.  Hermitian coefficients stay exactly real; the
    anti-Hermitian ones alternate real / purely imaginary exactly, because
    the recurrence never mixes the two lattices.
    """
    a = pj.base.a
    kappa = _char_poly_batch(a[None, :], pj.l, pj.kind)[0]
    return CharPoly(kappa=kappa, kind=pj.kind)


def _char_poly_batch(entries, l, kind):
    """(reps, N+1) ascending coefficients for a batch of off-diagonal rows."""
    reps, nm1 = entries.shape
    N = nm1 + 1
    dtype = float if kind == "herm" else complex
    d1 = l if kind == "herm" else 1j * l
    p_prev = np.zeros((reps, N + 1), dtype=dtype)
    p = np.zeros((reps, N + 1), dtype=dtype)
    p_prev[:, 0] = 1.0
    p[:, 0] = -d1
    p[:, 1] = 1.0
    for k in range(2, N + 1):
        a2 = (entries[:, k - 2] ** 2)[:, None]
        p_new = np.zeros_like(p)
        p_new[:, 1:] = p[:, :-1]
        p_new -= a2 * p_prev
        p_prev, p = p, p_new
    return p


def eig_hermitian(pj):
    """Alternating eigenvalue configuration of J + l I_{1x1} plus first components.

    Returns (HermitianConfig, first_components) where first_components[j] is
    <v_j, e1> for the normalised eigenvector of z_j.
    """
    if pj.kind != "herm":
        raise ValueError("eig_hermitian needs kind='herm'")
    N = pj.N
    d = np.zeros(N)
    d[0] = pj.l
    try:
        w, V = eigh_tridiagonal(d, pj.base.a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError("tridiagonal eigensolver failed") from exc
    z, first = _alternating_order(w, V[0])
    return HermitianConfig(z=z), first


def _alternating_order(w, first):
    pos = w > 0
    if pos.sum() != (w.size + 1) // 2:
        raise SymmetryViolationError(
            "expected %d positive eigenvalues, got %d" % ((w.size + 1) // 2, int(pos.sum()))
        )
    ip = np.argsort(-w[pos])
    im = np.argsort(w[~pos])
    zp, fp = w[pos][ip], first[pos][ip]
    zm, fm = w[~pos][im], first[~pos][im]
    z = np.empty(w.size)
    f = np.empty(w.size)
    z[0::2], f[0::2] = zp, fp
    z[1::2], f[1::2] = zm, fm
    return z, f


def eig_nonhermitian(pj):
    """Upper-half-plane configuration of J + i l I_{1x1}.

    The rotated polynomial Q(z) = i^N kappa(z/i) has real coefficients and
    zeros at i z_j, so real roots of Q give purely imaginary eigenvalues and
    conjugate root pairs give mirror pairs.
    """
    if pj.kind != "antiherm":
        raise ValueError("eig_nonhermitian needs kind='antiherm'")
    kappa = char_poly(pj).kappa
    q = _rotate_to_real(kappa)
    roots = aberth_roots(q)
    return classify_roots(-1j * roots)


def _rotate_to_real(kappa):
    """Real coefficients of Q(z) = i^N kappa(z/i)."""
    N = kappa.size - 1
    j = np.arange(N + 1)
    q = (1j ** ((N - j) % 4)) * kappa
    if abs(q.imag).max() > 1e-10 * max(abs(q.real).max(), 1.0):
        raise SymmetryViolationError("rotated polynomial is not real")
    return q.real


def classify_roots(z, tol=CLASSIFY_TOL):
    """Sort eigenvalues into imaginary points and mirror pairs.

    A point is purely imaginary when |Re z| <= tol * (1 + |z|); the rest
    must pair up under z -> -conj(z) within the same tolerance.
    """
    z = np.asarray(z, dtype=complex)
    scale = 1.0 + np.abs(z)
    if (z.imag <= 0).any():
        worst = z[np.argmin(z.imag)]
        raise NumericalFailureError("eigenvalue %r not in the open upper half plane" % worst)
    is_imag = np.abs(z.real) <= tol * scale
    band = (np.abs(z.real) > 0.5 * tol * scale) & (np.abs(z.real) <= 2.0 * tol * scale)
    if band.any():
        warnings.warn(
            "roots within the classification tolerance band (tol=%g)" % tol,
            DegeneracyWarning,
        )
    yi = np.sort(z.imag[is_imag])[::-1]
    rest = z[~is_imag]
    pairs = []
    left = list(np.flatnonzero(rest.real > 0))
    right = list(np.flatnonzero(rest.real < 0))
    if len(left) != len(right):
        raise NumericalFailureError("mirror classes are unbalanced; degenerate sample")
    for i in left:
        errs = [abs(rest[i] + np.conj(rest[j])) for j in right]
        k = int(np.argmin(errs))
        j = right[k]
        if errs[k] > tol * (1 + abs(rest[i])):
            raise NumericalFailureError(
                "mirror pairing error %g exceeds tolerance" % errs[k]
            )
        x = (rest[i].real - rest[j].real) / 2.0
        y = (rest[i].imag + rest[j].imag) / 2.0
        pairs.append((x, y))
        right.pop(k)
    pairs = np.array(pairs).reshape(-1, 2)
    return ComplexConfig(imag_points=yi, pairs=pairs)


def hermitian_eigs_batch(entries, l):
    """Eigenvalues (ascending) of J + l I_{1x1} for a batch of off-diagonal rows.

    entries has shape (reps, N-1); the result is (reps, N).  Stacked dense
    symmetric matrices keep the whole Monte Carlo loop in LAPACK.
    """
    reps, nm1 = entries.shape
    N = nm1 + 1
    M = np.zeros((reps, N, N))
    idx = np.arange(N - 1)
    M[:, idx, idx + 1] = entries
    M[:, idx + 1, idx] = entries
    M[:, 0, 0] = l
    return np.linalg.eigvalsh(M)


def jacobi_eigs_batch(entries):
    """Eigenvalues and squared first components of plain Jacobi matrices.

    Returns (eigs ascending, first2) with shapes (reps, N); first2[r, j] is
    |<v_j, e1>|^2 of the j-th eigenvector.
    """
    reps, nm1 = entries.shape
    N = nm1 + 1
    M = np.zeros((reps, N, N))
    idx = np.arange(N - 1)
    M[:, idx, idx + 1] = entries
    M[:, idx + 1, idx] = entries
    w, V = np.linalg.eigh(M)
    return w, V[:, 0, :] ** 2


def alternating_check_batch(z_desc_interleaved):
    """Vectorised strict alternation check for rows already in config order."""
    signs = np.where(np.arange(z_desc_interleaved.shape[1]) % 2 == 0, 1.0, -1.0)
    seq = signs[None, :] * z_desc_interleaved
    return (seq > 0).all(axis=1) & (np.diff(seq, axis=1) < 0).all(axis=1)


def alternating_order_batch(eigs):
    """Rows of ascending eigenvalues rearranged into the alternating order.

    Positives descending interleaved with negatives ascending-by-value,
    valid whenever row r has ceil(N/2) positive eigenvalues (checked).
    """
    reps, N = eigs.shape
    npos = (N + 1) // 2
    if ((eigs > 0).sum(axis=1) != npos).any():
        raise SymmetryViolationError("unexpected positive-eigenvalue count in batch")
    z = np.empty_like(eigs)
    z[:, 0::2] = eigs[:, N - npos :][:, ::-1]
    z[:, 1::2] = eigs[:, : N - npos]
    return z


def nonhermitian_eigs_batch(entries, l, tol=CLASSIFY_TOL):
    """Eigenvalues of J + i l I_{1x1} for a batch, with classification stats.

    Returns a dict with the (reps, N) complex eigenvalues, per-rep counts of
    purely imaginary points, mirror-pairing errors, and trace errors.
    """
    from .models import PerturbedJacobi  # noqa: F401  (doc reference)

    kappa = _char_poly_batch(entries, l, "antiherm")
    N = entries.shape[1] + 1
    j = np.arange(N + 1)
    q = ((1j ** ((N - j) % 4))[None, :] * kappa).real
    roots = aberth_roots(q)
    z = -1j * roots
    scale = 1.0 + np.abs(z)
    upper_ok = (z.imag > 0).all(axis=1)
    is_imag = np.abs(z.real) <= tol * scale
    L = is_imag.sum(axis=1)
    # mirror symmetry: snap axis points onto the axis (sign noise in their
    # real parts would scramble the lexicographic sort), charge them their
    # own distance to the axis, then compare the sorted multiset with its
    # reflection
    zc = np.where(is_imag, 1j * z.imag, z)
    s1 = np.sort_complex(zc)
    s2 = np.sort_complex(-np.conj(zc))
    axis_err = np.where(is_imag, 2 * np.abs(z.real), 0.0).max(axis=1)
    mirror_err = np.maximum(np.abs(s1 - s2).max(axis=1), axis_err)
    trace_err = np.abs(z.sum(axis=1) - 1j * l)
    return {
        "points": z,
        "n_imag": L,
        "upper_ok": upper_ok,
        "mirror_err": mirror_err,
        "trace_err": trace_err,
    }


def spectral_measure(J):
    """Spectral measure of a Jacobi matrix with respect to e1.

    Eigenvalues come in +- pairs (plus 0 when N is odd); pairs are merged so
    the positive member carries w_j = 2 |<v_j, e1>|^2.
    """
    N = J.N
    w, V = eigh_tridiagonal(np.zeros(N), J.a)
    first2 = V[0] ** 2
    order = np.argsort(w)
    w, first2 = w[order], first2[order]
    s = N // 2
    scale = max(abs(w[0]), abs(w[-1]), 1.0)
    lam = []
    wt = []
    for k in range(s):
        lo, hi = w[k], w[N - 1 - k]
        if abs(lo + hi) > 1e-8 * scale:
            raise SymmetryViolationError(
                "eigenvalues %r and %r do not mirror" % (lo, hi)
            )
        lam.append((hi - lo) / 2.0)
        wt.append(first2[k] + first2[N - 1 - k])
    w0 = None
    if N % 2 == 1:
        if abs(w[s]) > 1e-8 * scale:
            raise SymmetryViolationError("middle eigenvalue %r is not zero" % w[s])
        w0 = float(first2[s])
    # k = 0 pairs the outermost eigenvalues, so lam is already decreasing
    return SpectralMeasure(lambdas=np.array(lam), weights=np.array(wt), w0=w0)


def reconstruct_jacobi(sm):
    """Jacobi matrix whose spectral measure is the given symmetric measure.

    Runs the three-term (Stieltjes/Lanczos) recurrence on the discrete
    measure with full reorthogonalisation.  The diagonal recurrence
    coefficients must vanish by symmetry and are asserted to.
    """
    t, p = sm.support()
    N = t.size
    q = np.sqrt(p)
    Q = np.zeros((N, N))
    Q[:, 0] = q / np.linalg.norm(q)
    alphas = np.zeros(N - 1)
    betas = np.zeros(N - 1)
    scale = max(abs(t).max(), 1.0)
    for k in range(N - 1):
        r = t * Q[:, k]
        alphas[k] = Q[:, k] @ r
        r = r - alphas[k] * Q[:, k]
        if k > 0:
            r = r - betas[k - 1] * Q[:, k - 1]
        # twice-is-enough reorthogonalisation
        r -= Q[:, : k + 1] @ (Q[:, : k + 1].T @ r)
        r -= Q[:, : k + 1] @ (Q[:, : k + 1].T @ r)
        nrm2 = r @ r
        if nrm2 <= 0 or not np.isfinite(nrm2):
            raise IllConditionedMeasureError("lost orthogonality at step %d" % k)
        betas[k] = np.sqrt(nrm2)
        Q[:, k + 1] = r / betas[k]
    if abs(alphas).max() > 1e-9 * scale:
        raise SymmetryViolationError(
            "diagonal recurrence coefficients did not vanish: %g" % abs(alphas).max()
        )
    return JacobiMatrix(a=betas)


def reconstruct_perturbed(config):
    """Perturbed Jacobi matrix with the given eigenvalue configuration.

    Recovers l from the trace, the lambda's by rooting the even part of the
    characteristic polynomial in u = z^2, the weights from the residues of
    the m-function, and the Jacobi entries from the measure.
    """
    if isinstance(config, HermitianConfig):
        return _reconstruct_hermitian(config)
    if isinstance(config, ComplexConfig):
        return _reconstruct_antihermitian(config)
    raise TypeError("config must be HermitianConfig or ComplexConfig")


def _reconstruct_hermitian(config):
    z = config.z
    N = z.size
    l = float(z.sum())
    if l <= 0:
        raise ValueError("configuration implies l <= 0")
    lam = _lambdas_from_points(z.astype(complex), N)
    odd = N % 2 == 1
    w, w0 = _weights_from_residues(z.astype(complex), lam, l, odd)
    sm = SpectralMeasure(lambdas=lam, weights=w, w0=w0)
    return PerturbedJacobi(base=reconstruct_jacobi(sm), l=l, kind="herm")


def _reconstruct_antihermitian(config):
    pts = config.points()
    N = pts.size
    # the correspondence admits multiple points, but the inverse map rejects
    # them: the forward solver cannot resolve them to tolerance anyway
    gaps = np.abs(pts[:, None] - pts[None, :])[np.triu_indices(N, 1)]
    if N > 1 and gaps.min() <= 1e-10 * (1 + np.abs(pts).max()):
        raise ValueError("coincident configuration points; inverse map rejects multiplicity")
    l = float(pts.sum().imag)
    if l <= 0:
        raise ValueError("configuration implies l <= 0")
    lam = _lambdas_from_points(pts, N)
    odd = N % 2 == 1
    w, w0 = _weights_from_residues(pts, lam, l, odd)
    sm = SpectralMeasure(lambdas=lam, weights=w, w0=w0)
    return PerturbedJacobi(base=reconstruct_jacobi(sm), l=l, kind="antiherm")


def _lambdas_from_points(pts, N):
    """Positive spectrum of the unperturbed matrix from the configuration.

    The symmetrised polynomial (prod(z - z_k) + prod(z - s(z_k)))/2, with
    s the relevant reflection, equals prod(z^2 - lambda_j^2) (times z when
    N is odd); its positive u-roots give the lambda's.
    """
    if abs(pts.imag).max(initial=0.0) == 0.0:
        mirror = -pts
    else:
        mirror = np.conj(pts)
    p1 = np.polynomial.polynomial.polyfromroots(pts)
    p2 = np.polynomial.polynomial.polyfromroots(mirror)
    s = (p1 + p2) / 2.0
    if abs(s.imag).max() > 1e-9 * max(abs(s.real).max(), 1.0):
        raise ValueError("configuration is not mirror symmetric")
    s = s.real
    odd = N % 2 == 1
    if odd:
        if abs(s[0]) > 1e-9 * max(abs(s).max(), 1.0):
            raise ValueError("odd-size configuration must have vanishing constant term")
        s = s[1:]
    # only even powers survive; coefficients in u = z^2
    if abs(s[1::2]).max(initial=0.0) > 1e-9 * max(abs(s).max(), 1.0):
        raise ValueError("symmetrised polynomial has odd-power terms")
    c = s[0::2]
    u = _positive_real_roots(c)
    return np.sort(np.sqrt(u))[::-1]


def _positive_real_roots(c):
    """Roots of a real polynomial known to have simple positive real roots.

    Companion-matrix roots polished by a few Newton steps in real
    arithmetic; coincident or nonpositive roots are rejected because the
    inverse maps are only defined off the degenerate set.
    """
    c = np.asarray(c, dtype=float)
    r = np.polynomial.polynomial.polyroots(c)
    if abs(r.imag).max(initial=0.0) > 1e-7 * max(1.0, abs(r).max()):
        raise ValueError("expected real roots, found complex pair (degenerate input)")
    u = r.real.copy()
    dc = np.polynomial.polynomial.polyder(c)
    for _ in range(3):
        f = np.polynomial.polynomial.polyval(u, c)
        df = np.polynomial.polynomial.polyval(u, dc)
        upd = np.where(df != 0, f / np.where(df != 0, df, 1.0), 0.0)
        u = u - upd
    if (u <= 0).any():
        raise ValueError("recovered squared eigenvalues must be positive")
    u = np.sort(u)
    if u.size > 1 and (np.diff(u) <= 1e-10 * u.max()).any():
        raise ValueError("coincident eigenvalues; inverse map rejects multiple points")
    return u


def _weights_from_residues(pts, lam, l, odd):
    """Spectral weights from residues of the m-function at +-lambda_j (and 0)."""
    lam2 = lam**2
    w = np.empty(lam.size)
    for j, lj in enumerate(lam):
        num = np.abs(np.prod(lj - pts))
        den_gaps = np.prod(np.abs(np.delete(lam2, j) - lam2[j])) if lam.size > 1 else 1.0
        power = 2 if odd else 1
        w[j] = num / (l * lj**power * den_gaps)
    if odd:
        w0 = float(np.prod(np.abs(pts)) / (l * np.prod(lam2)))
    else:
        w0 = None
    total = w.sum() + (w0 or 0.0)
    if abs(total - 1.0) > 1e-6:
        raise ValueError("recovered weights sum to %r, configuration inconsistent" % total)
    # remove the accumulated roundoff so the measure constructor is happy
    if w0 is None:
        w = w / total
    else:
        w = w / total
        w0 = w0 / total
    return w, w0
