"""Quaternion matrices stored as pairs of complex arrays (Cayley-Dickson form).

A quaternion q = a + b*j is held as two complex numbers (a, b), using
j*z = conj(z)*j and j*j = -1.  A matrix of quaternions is then a pair of
complex ndarrays of equal shape.  The complex embedding of a single entry is

    [[ a,        b      ],
     [-conj(b),  conj(a)]]

and for a full r x c matrix the block form [[A, B], [-conj(B), conj(A)]]
(size 2r x 2c) multiplies, transposes and norms consistently with the
quaternion operations below.

Real and complex matrices embed as QArray(X) with zero j-part, so code
written against QArray covers beta = 1, 2, 4 with one code path.
"""

import numpy as np

# scalar quaternions are (a, b) complex pairs
ONE = (1.0 + 0.0j, 0.0 + 0.0j)


def smul(p, q):
    """Product of two scalar quaternions."""
    return (p[0] * q[0] - p[1] * np.conj(q[1]), p[0] * q[1] + p[1] * np.conj(q[0]))


def sconj(p):
    return (np.conj(p[0]), -p[1])


def sabs(p):
    return float(np.hypot(abs(p[0]), abs(p[1])))


def sphase(p):
    """Unit quaternion p/|p|; identity for |p| = 0."""
    r = sabs(p)
    if r == 0.0:
        return ONE
    return (p[0] / r, p[1] / r)


class QArray:
    """2-D array of quaternions with numpy-style slicing and ``@``."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=None):
        a = np.array(a, dtype=complex, copy=True)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        if a.ndim != 2:
            raise ValueError("QArray holds 2-D arrays, got ndim=%d" % a.ndim)
        if b is None:
            b = np.zeros_like(a)
        else:
            b = np.array(b, dtype=complex, copy=True)
            if b.ndim == 1:
                b = b.reshape(-1, 1)
            if b.shape != a.shape:
                raise ValueError("component shapes differ: %s vs %s" % (a.shape, b.shape))
        self.a = a
        self.b = b

    @property
    def shape(self):
        return self.a.shape

    @classmethod
    def eye(cls, n):
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros(shape, dtype=complex))

    @classmethod
    def diag(cls, scalars):
        """Diagonal matrix from a list of scalar quaternion pairs."""
        n = len(scalars)
        a = np.zeros((n, n), dtype=complex)
        b = np.zeros((n, n), dtype=complex)
        for i, (pa, pb) in enumerate(scalars):
            a[i, i] = pa
            b[i, i] = pb
        return cls(a, b)

    def copy(self):
        return QArray(self.a, self.b)

    def __getitem__(self, key):
        a = np.atleast_2d(self.a[key])
        b = np.atleast_2d(self.b[key])
        return QArray(a, b)

    def __setitem__(self, key, value):
        if not isinstance(value, QArray):
            raise TypeError("QArray slices are assigned from QArray")
        self.a[key] = value.a.reshape(self.a[key].shape)
        self.b[key] = value.b.reshape(self.b[key].shape)

    def item(self, i, j):
        """Scalar quaternion at (i, j) as an (a, b) pair."""
        return (complex(self.a[i, j]), complex(self.b[i, j]))

    def set_item(self, i, j, p):
        self.a[i, j] = p[0]
        self.b[i, j] = p[1]

    def __add__(self, other):
        return QArray(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return QArray(self.a - other.a, self.b - other.b)

    def __mul__(self, scalar):
        s = float(scalar)
        return QArray(self.a * s, self.b * s)

    __rmul__ = __mul__

    def __matmul__(self, other):
        a = self.a @ other.a - self.b @ np.conj(other.b)
        b = self.a @ other.b + self.b @ np.conj(other.a)
        return QArray(a, b)

    def dagger(self):
        """Conjugate transpose."""
        return QArray(np.conj(self.a).T, -self.b.T)

    def norm(self):
        """Frobenius norm, sqrt(sum |q_ij|^2)."""
        return float(np.sqrt((np.abs(self.a) ** 2 + np.abs(self.b) ** 2).sum()))

    def embed(self):
        """Complex embedding [[A, B], [-conj(B), conj(A)]] of shape (2r, 2c)."""
        return np.block([[self.a, self.b], [-np.conj(self.b), np.conj(self.a)]])

    def is_plain(self, tol=0.0):
        """True when the j-part vanishes (entries are plain complex numbers)."""
        return float(np.abs(self.b).max(initial=0.0)) <= tol

    def to_complex(self):
        if not self.is_plain(1e-14 * max(1.0, self.norm())):
            raise ValueError("matrix has a nonzero j-part")
        return self.a.copy()


def householder(v):
    """Reflection H with H v = -phase(v_0) * ||v|| * e1, for a column QArray.

    H is quaternion-Hermitian and involutive.  The sign choice avoids
    cancellation in u = v + phase(v_0) ||v|| e1.
    """
    k = v.shape[0]
    nrm = v.norm()
    if nrm == 0.0:
        raise ValueError("cannot reflect a zero vector")
    omega = sphase(v.item(0, 0))
    u = v.copy()
    p = u.item(0, 0)
    u.set_item(0, 0, (p[0] + omega[0] * nrm, p[1] + omega[1] * nrm))
    n2 = u.norm() ** 2
    return QArray.eye(k) - (2.0 / n2) * (u @ u.dagger())


def unitary_from_unit_vector(u):
    """Unitary U with first column equal to the unit column vector u."""
    k = u.shape[0]
    if abs(u.norm() - 1.0) > 1e-10:
        raise ValueError("u must have unit norm")
    H = householder(u)
    omega = sphase(u.item(0, 0))
    # H u = e1*(-omega) and H is involutive, so (H e1) = u*(-conj(omega));
    # right-multiplying the first column by -omega lands exactly on u.
    dneg = [(-omega[0], -omega[1])] + [ONE] * (k - 1)
    return H @ QArray.diag(dneg)
