"""Matrix models: dense chiral ensembles, rank-one perturbations, and the
sparse (Jacobi) forms they reduce to.

The dense chiral matrix is the Hermitian block matrix [[0, X], [X*, 0]] with
an m x n Gaussian block X over the real (beta=1), complex (beta=2) or
quaternion (beta=4) field.  Rank-one perturbations put Gamma = l u u*
(Hermitian) or Gamma = i l u u* (anti-Hermitian) in the upper-left block.
The anti-Hermitian-base variant of the model (blocks [[0, Y], [-Y*, 0]]) is
obtained by multiplying everything by i, so it is not constructed separately.

Householder bidiagonalization with left reflections fixing e1, followed by
an interleaving permutation, reduces the dense matrix to a zero-diagonal
Jacobi matrix with independent chi-distributed off-diagonals; the same
tridiagonal ensemble is sampled directly for arbitrary beta > 0.
"""

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DegenerateInputError
from .quaternion import ONE, QArray, sconj, smul, sabs, sphase, unitary_from_unit_vector
from .rng import RngStream, ScalarField, sample_haar_unit_vector

KINDS = ("none", "herm", "antiherm")

# draws below this are treated as degenerate and resampled; the bijections
# between matrices and eigenvalue configurations need all a_j, l > 0
DEGENERATE_TOL = 1e-13


@dataclass(frozen=True)
class EnsembleParams:
    """Chiral ensemble parameters (beta, m, n) and derived quantities."""

    beta: float
    m: int
    n: int

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive, got %r" % (self.beta,))
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be >= 1")

    @property
    def N(self):
        """Size of the trimmed Jacobi matrix: 2m if m <= n, else 2n+1."""
        return 2 * self.m if self.m <= self.n else 2 * self.n + 1

    @property
    def a(self):
        return abs(self.n - self.m) + 1 - 2.0 / self.beta

    @property
    def odd(self):
        """True in the m >= n+1 case (Jacobi size odd, zero is an eigenvalue)."""
        return self.m > self.n


@dataclass(frozen=True)
class JacobiMatrix:
    """Zero-diagonal symmetric tridiagonal matrix with positive off-diagonals."""

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.ndim != 1 or a.size < 1:
            raise ValueError("off-diagonal must be a nonempty 1-D array")
        if not (a > 0).all():
            raise ValueError("all off-diagonal entries must be positive")
        object.__setattr__(self, "a", a)

    @property
    def N(self):
        return self.a.size + 1

    def to_dense(self):
        J = np.zeros((self.N, self.N))
        idx = np.arange(self.N - 1)
        J[idx, idx + 1] = self.a
        J[idx + 1, idx] = self.a
        return J


@dataclass(frozen=True)
class PerturbedJacobi:
    """Jacobi matrix plus l (Hermitian) or i*l (anti-Hermitian) in the (1,1) entry."""

    base: JacobiMatrix
    l: float
    kind: str

    def __post_init__(self):
        if self.kind not in ("herm", "antiherm"):
            raise ValueError("kind must be 'herm' or 'antiherm', got %r" % (self.kind,))
        if not self.l > 0:
            raise ValueError("l must be positive, got %r" % (self.l,))

    @property
    def N(self):
        return self.base.N

    def to_dense(self):
        if self.kind == "herm":
            M = self.base.to_dense()
            M[0, 0] = self.l
        else:
            M = self.base.to_dense().astype(complex)
            M[0, 0] = 1j * self.l
        return M


@dataclass(frozen=True)
class Bidiagonal:
    """Lower-bidiagonal core of the reduced chiral block.

    x holds the diagonal (length min(m, n)) and y the subdiagonal
    (length m-1 for m <= n, length n for m >= n+1); all entries positive.
    """

    x: np.ndarray
    y: np.ndarray
    shape: tuple

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        m, n = self.shape
        want_y = m - 1 if m <= n else n
        if self.x.size != min(m, n) or self.y.size != want_y:
            raise ValueError("entry counts do not match shape %r" % (self.shape,))
        if not ((self.x > 0).all() and (self.y > 0).all()):
            raise ValueError("bidiagonal entries must be positive")

    def to_matrix(self):
        m, n = self.shape
        B = np.zeros((m, n))
        for j, v in enumerate(self.x):
            B[j, j] = v
        for j, v in enumerate(self.y):
            B[j + 1, j] = v
        return B


@dataclass(frozen=True)
class DenseChiral:
    """Dense chiral matrix data: Gaussian block X and optional rank-one Gamma."""

    field: ScalarField
    m: int
    n: int
    X: object  # ndarray for beta = 1, 2; QArray for beta = 4
    kind: str = "none"
    l: float = 0.0
    u: object = None  # unit vector defining Gamma = l u u* (or i l u u*)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("kind must be one of %r" % (KINDS,))
        if self.kind != "none":
            if not self.l > 0:
                raise ValueError("perturbed models need l > 0")
            if self.u is None:
                raise ValueError("perturbed models need the unit vector u")


@dataclass
class BidiagReport:
    """Transforms and residuals from a bidiagonalization run."""

    L: QArray
    R: QArray
    residual: float
    e1_residual: float


def chi_orders(params):
    """Chi parameters of the Jacobi entries a_1..a_{N-1}, interleaved x, y.

    x_j ~ chi_{beta(n-j+1)} and y_j ~ chi_{beta(m-j)}; for m <= n there are
    m x's and m-1 y's, for m >= n+1 there are n of each.
    """
    beta, m, n = params.beta, params.m, params.n
    ny = m - 1 if m <= n else n
    orders = []
    for j in range(1, min(m, n) + 1):
        orders.append(beta * (n - j + 1))
        if j <= ny:
            orders.append(beta * (m - j))
    return np.array(orders)


def sample_chiral_jacobi(params, rng):
    """Draw a Jacobi matrix from the chiral Gaussian beta-ensemble (any beta > 0)."""
    entries, _ = sample_jacobi_batch(params, rng, 1)
    return JacobiMatrix(entries[0])


def sample_jacobi_batch(params, rng, reps):
    """Vectorised sampler: (reps, N-1) array of off-diagonals plus resample count.

    Entries below DEGENERATE_TOL are rejected and redrawn (measure-zero
    events that would break the matrix/configuration bijections).
    """
    orders = chi_orders(params)
    g = 2.0 * rng.gen.standard_gamma(orders / 2.0, size=(reps, orders.size))
    entries = np.sqrt(g)
    resampled = 0
    bad = entries < DEGENERATE_TOL
    while bad.any():
        k = int(bad.sum())
        resampled += k
        shapes = np.broadcast_to(orders / 2.0, entries.shape)[bad]
        entries[bad] = np.sqrt(2.0 * rng.gen.standard_gamma(shapes))
        bad = entries < DEGENERATE_TOL
    return entries, resampled


def sample_dense(params, rng, kind="none", l=0.0, u=None, u_e1=False):
    """Dense chiral model with an optional rank-one perturbation.

    The Gaussian block has E|X_11|^2 = beta.  u defaults to a Haar unit
    vector independent of X; u_e1=True uses the first basis vector instead
    (the trivial fast path where Gamma = l I_{1x1} exactly).
    """
    field = ScalarField.from_beta(params.beta)
    m, n = params.m, params.n
    if kind not in KINDS:
        raise ValueError("kind must be one of %r" % (KINDS,))
    if kind == "none":
        l, u = 0.0, None
    else:
        if not l > 0:
            raise ValueError("perturbed models need l > 0")
        if u is None:
            if u_e1:
                e1 = np.zeros(m)
                e1[0] = 1.0
                u = QArray(e1) if field is ScalarField.QUATERNION else e1
            else:
                u = sample_haar_unit_vector(field, m, rng)
    if field is ScalarField.REAL:
        X = rng.gen.normal(0.0, 1.0, size=(m, n))
    elif field is ScalarField.COMPLEX:
        X = rng.gen.normal(0.0, 1.0, size=(m, n)) + 1j * rng.gen.normal(0.0, 1.0, size=(m, n))
    else:
        g = rng.gen.normal(0.0, 1.0, size=(m, n, 4))
        X = QArray(g[..., 0] + 1j * g[..., 1], g[..., 2] + 1j * g[..., 3])
    return DenseChiral(field=field, m=m, n=n, X=X, kind=kind, l=float(l), u=u)


def assemble_full(d):
    """Assembled square matrix of the dense model.

    beta = 1, 2: an (m+n) x (m+n) array, real for the unperturbed real case.
    beta = 4: the complex embedding of the quaternion matrix, size 2(m+n).
    The anti-Hermitian Gamma = i l u u* is formed inside the embedding,
    where multiplication by i is central (it is not over the quaternions),
    so the whole spectrum simply doubles.
    """
    m, n = d.m, d.n
    if d.field is ScalarField.QUATERNION:
        M = QArray.zeros((m + n, m + n))
        Xq = d.X
        M[:m, m:] = Xq
        M[m:, :m] = Xq.dagger()
        u = d.u if isinstance(d.u, QArray) else None
        if d.kind == "herm":
            M[:m, :m] = d.l * (u @ u.dagger())
            return M.embed()
        E = M.embed()
        if d.kind == "antiherm":
            # the Gamma block occupies embedding rows/cols [0:m] and
            # [m+n : m+n+m] under the big-block layout
            P = (d.l * (u @ u.dagger())).embed()
            S = np.concatenate([np.arange(m), m + n + np.arange(m)])
            E[np.ix_(S, S)] += 1j * P
        return E
    X = np.asarray(d.X)
    dtype = complex if (np.iscomplexobj(X) or d.kind == "antiherm") else float
    M = np.zeros((m + n, m + n), dtype=dtype)
    M[:m, m:] = X
    M[m:, :m] = np.conj(X).T
    if d.kind != "none":
        u = np.asarray(d.u, dtype=dtype)
        G = d.l * np.outer(u, np.conj(u))
        if d.kind == "antiherm":
            G = 1j * G
        M[:m, :m] = G
    return M


def bidiagonalize(X):
    """Householder bidiagonalization B = L X R with L e1 = L* e1 = e1.

    Right reflections compress each row in turn; left reflections act only on
    rows 2..m so they fix e1.  Phases are then swept off the bidiagonal so
    its entries come out real nonnegative (the distributional statement only
    fixes entries in law, so signs are canonicalised).

    Accepts a real/complex ndarray or a quaternion QArray; everything runs in
    the quaternion pair representation, which reduces to the plain cases.

    Returns (Bidiagonal, BidiagReport).
    """
    A = X.copy() if isinstance(X, QArray) else QArray(np.asarray(X, dtype=complex))
    m, n = A.shape
    scale = max(A.norm(), 1.0)
    L = QArray.eye(m)
    R = QArray.eye(n)
    for j in range(min(m, n)):
        # right reflection: row j -> (x_{j+1}, 0, ..., 0)
        v = A[j : j + 1, j:].dagger()
        if v.norm() <= DEGENERATE_TOL * scale:
            raise DegenerateInputError("zero pivot in row %d; resample the input" % j)
        H = _expand(_hh(v), n, j)
        A = A @ H
        R = R @ H
        if j <= min(m - 2, n - 1):
            # left reflection on rows j+1.. : column j -> (.., y_{j+1}, 0, ..)
            v = A[j + 1 :, j : j + 1]
            if v.norm() <= DEGENERATE_TOL * scale:
                raise DegenerateInputError("zero pivot in column %d; resample the input" % j)
            H = _expand(_hh(v), m, j + 1)
            A = H @ A
            L = H @ L
    dl, dr = _phase_sweep(A)
    DL = QArray.diag(dl)
    DR = QArray.diag(dr)
    A = DL @ A @ DR
    L = DL @ L
    R = R @ DR
    x = np.array([sabs(A.item(j, j)) for j in range(min(m, n))])
    ny = m - 1 if m <= n else n
    y = np.array([sabs(A.item(j + 1, j)) for j in range(ny)])
    bid = Bidiagonal(x=x, y=y, shape=(m, n))
    Bq = QArray(bid.to_matrix().astype(complex))
    Xq = X if isinstance(X, QArray) else QArray(np.asarray(X, dtype=complex))
    residual = (L @ Xq @ R - Bq).norm()
    e1 = QArray.zeros((m, 1))
    e1.set_item(0, 0, ONE)
    e1_residual = (L @ e1 - e1).norm()
    return bid, BidiagReport(L=L, R=R, residual=residual, e1_residual=e1_residual)


def _hh(v):
    from .quaternion import householder

    return householder(v)


def _expand(H, size, offset):
    """Embed a small reflection into the identity at the given offset."""
    F = QArray.eye(size)
    F[offset:, offset:] = H
    return F


def _phase_sweep(A):
    """Diagonal unitaries (left fixing e1, right free) making the bidiagonal
    entries real nonnegative, consumed in the zig-zag order (0,0), (1,0), (1,1)..."""
    m, n = A.shape
    dl = [ONE] * m
    dr = [ONE] * n
    for c in range(min(m, n)):
        p = smul(dl[c], A.item(c, c))
        dr[c] = sconj(sphase(p)) if sabs(p) > 0 else ONE
        if c + 1 < m and c < n:
            q = smul(A.item(c + 1, c), dr[c])
            dl[c + 1] = sconj(sphase(q)) if sabs(q) > 0 else ONE
    return dl, dr


def permutation_indices(m, n):
    """0-based interleaving order turning [[0,B],[B*,0]] into the Jacobi form."""
    order = []
    for j in range(min(m, n)):
        order += [j, m + j]
    if m <= n:
        order += list(range(2 * m, m + n))
    else:
        order += [n] + list(range(n + 1, m))
    return np.array(order)


def permute_to_jacobi(bid):
    """Apply the interleaving permutation to [[0,B],[B*,0]] and trim zeros.

    The permuted matrix is verified to be tridiagonal with the interleaved
    (x, y) entries before the trailing zero block is removed.
    """
    m, n = bid.shape
    B = bid.to_matrix()
    M = np.zeros((m + n, m + n))
    M[:m, m:] = B
    M[m:, :m] = B.T
    order = permutation_indices(m, n)
    P = M[np.ix_(order, order)]
    N = 2 * m if m <= n else 2 * n + 1
    if N < m + n and abs(P[N:, :]).max() > 0:
        raise AssertionError("trailing block is not zero; permutation is wrong")
    J = P[:N, :N]
    a = np.diag(J, 1)
    expect = interleave_entries(bid)
    if not np.array_equal(a, expect):
        raise AssertionError("permuted matrix does not interleave x, y as expected")
    return JacobiMatrix(a.copy())


def interleave_entries(bid):
    """Off-diagonal vector (x1, y1, x2, y2, ...) of the Jacobi form."""
    m, n = bid.shape
    out = []
    for j in range(min(m, n)):
        out.append(bid.x[j])
        if j < bid.y.size:
            out.append(bid.y[j])
    return np.array(out)


def perturb(J, l, kind):
    """Rank-one perturbed Jacobi matrix J + l I_{1x1} or J + i l I_{1x1}."""
    return PerturbedJacobi(base=J, l=float(l), kind=kind)


def antibidiagonal_form(pj):
    """Permutation-similar presentation with the coupling in the middle.

    Nonzeros sit on the two central antidiagonals, and l (or i*l) lands at
    position (floor(N/2)+1, floor(N/2)+1); eigenvalues are preserved exactly.
    """
    N = pj.N
    desc = list(range(N, 0, -2))
    asc = [k for k in range(1, N + 1) if k not in set(desc)]
    order = np.array(desc + asc) - 1
    M = pj.to_dense()
    return M[np.ix_(order, order)]


def antibidiagonal_permutation(N):
    """0-based index order used by antibidiagonal_form."""
    desc = list(range(N, 0, -2))
    asc = [k for k in range(1, N + 1) if k not in set(desc)]
    return np.array(desc + asc) - 1


@dataclass
class ReductionReport:
    """Comparison of the dense spectrum with the reduced Jacobi spectrum."""

    max_discrepancy: float
    dense_eigs: np.ndarray
    reduced_eigs: np.ndarray
    bidiag_residual: float
    e1_residual: float


def dense_reduction_check(d):
    """Push one dense realization through the unitary reductions and compare.

    Path A diagonalises the assembled dense matrix.  Path B extracts U from
    Gamma = U (l I_{1x1}) U*, bidiagonalises U* X, permutes to the Jacobi
    form, perturbs and embeds back with the zero block.  Both paths see the
    same realization, so the sorted spectra agree to roundoff.
    """
    from . import eig as eigmod

    if d.kind == "none":
        raise ValueError("the reduction check needs a perturbed model")
    m, n = d.m, d.n
    quat = d.field is ScalarField.QUATERNION
    full = assemble_full(d)
    if d.kind == "herm":
        dense_eigs = np.linalg.eigvalsh(full)
    else:
        dense_eigs = np.linalg.eigvals(full)

    uq = d.u if isinstance(d.u, QArray) else QArray(np.asarray(d.u, dtype=complex))
    U = unitary_from_unit_vector(uq)
    Xq = d.X if isinstance(d.X, QArray) else QArray(np.asarray(d.X, dtype=complex))
    Y = U.dagger() @ Xq
    bid, rep = bidiagonalize(Y)
    J = permute_to_jacobi(bid)
    pj = perturb(J, d.l, d.kind)
    if d.kind == "herm":
        config, _ = eigmod.eig_hermitian(pj)
        core = config.z
    else:
        core = eigmod.eig_nonhermitian(pj).points()

    n_zero = m + n - pj.N
    reduced = np.concatenate([core, np.zeros(n_zero, dtype=core.dtype)])
    if quat:
        # the embedding doubles every eigenvalue of the quaternion model
        reduced = np.repeat(reduced, 2)
        if d.kind == "herm":
            reduced = np.sort(reduced.real)

    disc = _spectrum_distance(dense_eigs, reduced)
    return ReductionReport(
        max_discrepancy=disc,
        dense_eigs=np.sort_complex(np.asarray(dense_eigs, dtype=complex)),
        reduced_eigs=np.sort_complex(np.asarray(reduced, dtype=complex)),
        bidiag_residual=rep.residual,
        e1_residual=rep.e1_residual,
    )


def _spectrum_distance(a, b):
    """Max distance under the optimal pairing of two equal-size spectra."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size != b.size:
        raise ValueError("spectra have different sizes: %d vs %d" % (a.size, b.size))
    if (abs(a.imag).max(initial=0.0) == 0.0) and (abs(b.imag).max(initial=0.0) == 0.0):
        return float(np.abs(np.sort(a.real) - np.sort(b.real)).max())
    from scipy.optimize import linear_sum_assignment

    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
