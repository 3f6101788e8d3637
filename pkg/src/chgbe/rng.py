"""Seeded, splittable random streams and the scalar distributions the models need.

Streams are counter-based (Philox keyed by (seed, stream_id)), so the same
pair always reproduces the identical sequence bit for bit and distinct
stream ids give statistically independent streams.  Parallel Monte Carlo
allocates disjoint stream ids instead of sharing a generator.
"""

import enum

import numpy as np

from .quaternion import QArray

_U64 = np.uint64


class ScalarField(enum.Enum):
    """Entry field of the dense models; the value is the matching beta."""

    REAL = 1
    COMPLEX = 2
    QUATERNION = 4

    @property
    def beta(self):
        return self.value

    @classmethod
    def from_beta(cls, beta):
        if beta in (1, 2, 4):
            return cls(int(beta))
        raise ValueError(
            "dense models exist only for beta in {1, 2, 4}, got beta=%r" % (beta,)
        )


class RngStream:
    """Reproducible random stream identified by (seed, stream_id).

    Wraps a Philox counter-based generator keyed by the two 64-bit ids.
    The underlying ``numpy.random.Generator`` is exposed as ``.gen`` for
    vectorised draws.
    """

    def __init__(self, seed, stream_id=0):
        for name, v in (("seed", seed), ("stream_id", stream_id)):
            if not (0 <= int(v) < 2**64):
                raise ValueError("%s must fit in 64 bits, got %r" % (name, v))
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        key = np.array([self.seed, self.stream_id], dtype=_U64)
        self.gen = np.random.Generator(np.random.Philox(key=key))

    def split(self, stream_id):
        """Fresh stream with the same seed and a new stream id."""
        return RngStream(self.seed, stream_id)

    def __repr__(self):
        return "RngStream(seed=%d, stream_id=%d)" % (self.seed, self.stream_id)


def sample_gaussian(field, variance, rng, size=None):
    """Centered field Gaussian with E|X|^2 = variance.

    Real: N(0, variance).  Complex: two independent real parts of variance/2.
    Quaternion: four components of variance/4 each, returned as a trailing
    axis of length 4 in the order (1, i, j, k).
    """
    if not variance > 0:
        raise ValueError("variance must be positive, got %r" % (variance,))
    if field is ScalarField.REAL:
        return rng.gen.normal(0.0, np.sqrt(variance), size=size)
    if field is ScalarField.COMPLEX:
        s = np.sqrt(variance / 2.0)
        re = rng.gen.normal(0.0, s, size=size)
        im = rng.gen.normal(0.0, s, size=size)
        return re + 1j * im
    if field is ScalarField.QUATERNION:
        s = np.sqrt(variance / 4.0)
        shape = (4,) if size is None else tuple(np.atleast_1d(size)) + (4,)
        return rng.gen.normal(0.0, s, size=shape)
    raise ValueError("unknown field %r" % (field,))


def sample_chi(alpha, rng, size=None):
    """Chi-distributed draw with parameter alpha > 0 (pdf ~ x^(alpha-1) e^(-x^2/2)).

    Implemented as the square root of a Gamma(alpha/2, scale=2) draw; numpy's
    gamma sampler is rejection-based and valid for all shapes, including the
    shape < 1 regime that general beta requires.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive, got %r" % (alpha,))
    g = 2.0 * rng.gen.standard_gamma(alpha / 2.0, size=size)
    # gamma draws can underflow to exactly 0 for tiny shapes; chi must be > 0
    if size is None:
        while g == 0.0:
            g = 2.0 * rng.gen.standard_gamma(alpha / 2.0)
    else:
        bad = g == 0.0
        while bad.any():
            g[bad] = 2.0 * rng.gen.standard_gamma(alpha / 2.0, size=int(bad.sum()))
            bad = g == 0.0
    return np.sqrt(g)


def sample_haar_unit_vector(field, dim, rng):
    """Unit vector invariant under the field's unitary group.

    A vector of i.i.d. standard field Gaussians normalised to unit norm.
    Real/complex fields return a 1-D ndarray; the quaternion field returns
    a (dim, 1) QArray column.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1, got %r" % (dim,))
    if field is ScalarField.QUATERNION:
        g = rng.gen.normal(size=(dim, 4))
        q = QArray(g[:, 0] + 1j * g[:, 1], g[:, 2] + 1j * g[:, 3])
        return (1.0 / q.norm()) * q
    v = sample_gaussian(field, float(field.beta), rng, size=dim)
    return v / np.linalg.norm(v)
