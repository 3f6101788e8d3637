import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import gammainc

from chgbe.rng import RngStream, ScalarField, sample_chi, sample_gaussian, sample_haar_unit_vector


def test_same_seed_and_stream_reproduce_bit_for_bit():
    a = RngStream(123, 7).gen.normal(size=1000)
    b = RngStream(123, 7).gen.normal(size=1000)
    assert np.array_equal(a, b)


def test_distinct_streams_differ():
    a = RngStream(123, 0).gen.normal(size=100)
    b = RngStream(123, 1).gen.normal(size=100)
    assert not np.array_equal(a, b)
    # and are uncorrelated to MC accuracy
    big_a = RngStream(5, 0).gen.normal(size=10**5)
    big_b = RngStream(5, 1).gen.normal(size=10**5)
    assert abs(np.corrcoef(big_a, big_b)[0, 1]) < 0.02


def test_seed_out_of_range_rejected():
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(0, 2**64)


def test_gaussian_field_variances():
    n = 10**6
    rng = RngStream(11)
    x = sample_gaussian(ScalarField.REAL, 1.0, rng, size=n)
    # E X^2 = 1 within 3 sigma of the MC error of the second moment
    se = math.sqrt(2.0 / n)
    assert abs((x**2).mean() - 1.0) < 3 * se

    z = sample_gaussian(ScalarField.COMPLEX, 2.0, rng, size=n // 10)
    assert abs((z.real**2).mean() - 1.0) < 5 * math.sqrt(2.0 / (n // 10))
    assert abs((z.imag**2).mean() - 1.0) < 5 * math.sqrt(2.0 / (n // 10))

    q = sample_gaussian(ScalarField.QUATERNION, 4.0, rng, size=n // 10)
    assert q.shape == (n // 10, 4)
    for k in range(4):
        assert abs((q[:, k] ** 2).mean() - 1.0) < 5 * math.sqrt(2.0 / (n // 10))


def test_gaussian_rejects_bad_variance():
    with pytest.raises(ValueError):
        sample_gaussian(ScalarField.REAL, 0.0, RngStream(0))
    with pytest.raises(ValueError):
        sample_gaussian(ScalarField.REAL, -1.0, RngStream(0))


def test_chi_square_mean_alpha2():
    x = sample_chi(2.0, RngStream(21), size=10**6)
    se = math.sqrt(8.0 / 10**6)  # var(chi^2_2) = 2*dof = 4
    assert abs((x**2).mean() - 2.0) < 4 * se


def test_chi_mean_alpha3_against_quadrature_oracle():
    # E[chi_3] by direct quadrature of x * pdf
    pdf = lambda x: x**2 * np.exp(-x * x / 2) / (2 ** (1 / 2) * math.gamma(1.5))
    want, _ = integrate.quad(lambda x: x * pdf(x), 0, 40)
    assert abs(want - 1.5957691216057308) < 1e-12  # frozen oracle value
    x = sample_chi(3.0, RngStream(22), size=10**6)
    se = x.std() / math.sqrt(x.size)
    assert abs(x.mean() - want) < 4 * se


def test_chi_small_alpha_binned_law():
    # binned probability mass vs the exact CDF, sup norm below 5/sqrt(n)
    n = 10**6
    x = sample_chi(0.5, RngStream(23), size=n)
    cdf = lambda t: gammainc(0.25, t * t / 2)
    edges = np.linspace(0.0, 4.0, 51)
    emp = np.searchsorted(np.sort(x), edges, side="right") / n
    exact = cdf(edges)
    assert np.abs(emp - exact).max() < 5.0 / math.sqrt(n)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.0, 8.0])
def test_chi_moments_grid(alpha):
    n = 10**6
    x = sample_chi(alpha, RngStream(int(alpha * 10)), size=n)
    assert (x > 0).all()
    mean = math.sqrt(2) * math.gamma((alpha + 1) / 2) / math.gamma(alpha / 2)
    var = alpha - mean**2
    assert abs(x.mean() - mean) < 4 * x.std() / math.sqrt(n)
    sample_var = x.var(ddof=1)
    se_var = math.sqrt(max(np.mean((x - x.mean()) ** 4) - sample_var**2, 0.0) / n)
    assert abs(sample_var - var) < 4 * se_var


def test_chi_rejects_bad_alpha():
    with pytest.raises(ValueError):
        sample_chi(0.0, RngStream(0))


def test_haar_unit_vector_real_dim1_is_sign():
    vals = [float(sample_haar_unit_vector(ScalarField.REAL, 1, RngStream(2, s))[0]) for s in range(200)]
    assert all(abs(abs(v) - 1.0) < 1e-14 for v in vals)
    frac = np.mean([v > 0 for v in vals])
    assert 0.3 < frac < 0.7


def test_haar_unit_vector_norms():
    u = sample_haar_unit_vector(ScalarField.COMPLEX, 3, RngStream(3))
    assert abs(np.linalg.norm(u) - 1.0) < 1e-14
    q = sample_haar_unit_vector(ScalarField.QUATERNION, 4, RngStream(3))
    assert abs(q.norm() - 1.0) < 1e-14
    with pytest.raises(ValueError):
        sample_haar_unit_vector(ScalarField.REAL, 0, RngStream(0))


def test_haar_first_coordinate_beta_law():
    # dim=2 real: u1^2 ~ Beta(1/2, 1/2), mean 1/2
    rng = RngStream(4)
    g = rng.gen.normal(size=(10**5, 2))
    u1sq = g[:, 0] ** 2 / (g**2).sum(axis=1)
    se = u1sq.std() / math.sqrt(u1sq.size)
    assert abs(u1sq.mean() - 0.5) < 4 * se
    # spot check the Beta(1/2,1/2) cdf at a few points
    for t in (0.2, 0.5, 0.8):
        want = 2 / math.pi * math.asin(math.sqrt(t))
        assert abs((u1sq < t).mean() - want) < 0.01
