import math

import numpy as np
import pytest

from chgbe import eig as eg
from chgbe import models as md
from chgbe.rng import RngStream

SQRT2 = math.sqrt(2.0)


def jacobi(*a):
    return md.JacobiMatrix(np.array(a, dtype=float))


def test_char_poly_small_cases():
    cp = eg.char_poly(md.perturb(jacobi(1.0), 2.0, "herm"))
    assert np.array_equal(cp.kappa, [-1.0, -2.0, 1.0])
    cp = eg.char_poly(md.perturb(jacobi(1.0), 2.0, "antiherm"))
    assert np.array_equal(cp.kappa, [-1.0, -2.0j, 1.0])
    cp = eg.char_poly(md.perturb(jacobi(1.0, 1.0), 1.0, "herm"))
    assert np.array_equal(cp.kappa, [1.0, -2.0, -1.0, 1.0])


def test_char_poly_matches_determinant():
    rng = RngStream(1)
    a = rng.gen.uniform(0.5, 2.0, size=7)
    for kind in ("herm", "antiherm"):
        pj = md.perturb(md.JacobiMatrix(a), 1.7, kind)
        kappa = eg.char_poly(pj).kappa
        M = pj.to_dense()
        want = np.poly(M)[::-1]  # ascending
        assert np.abs(np.asarray(kappa, complex) - want).max() < 1e-10


def test_char_poly_coefficient_parity_is_exact():
    rng = RngStream(2)
    a = rng.gen.uniform(0.5, 2.0, size=9)
    kappa_h = eg.char_poly(md.perturb(md.JacobiMatrix(a), 0.9, "herm")).kappa
    assert kappa_h.dtype == np.float64  # exactly real by construction
    kappa_a = eg.char_poly(md.perturb(md.JacobiMatrix(a), 0.9, "antiherm")).kappa
    N = kappa_a.size - 1
    for j in range(N + 1):
        if (N - j) % 2 == 0:
            assert kappa_a[j].imag == 0.0
        else:
            assert kappa_a[j].real == 0.0
    assert kappa_a[N] == 1.0 and kappa_a[N - 1] == -0.9j


def test_eig_hermitian_small_and_trace():
    cfg, first = eg.eig_hermitian(md.perturb(jacobi(1.0), 2.0, "herm"))
    assert np.allclose(cfg.z, [1 + SQRT2, 1 - SQRT2])
    assert cfg.z[0] > -cfg.z[1] > 0
    assert abs(first**2).sum() == pytest.approx(1.0, abs=1e-12)

    rng = RngStream(3)
    a = rng.gen.uniform(0.5, 2.0, size=5)
    pj = md.perturb(md.JacobiMatrix(a), 1.2, "herm")
    cfg, _ = eg.eig_hermitian(pj)
    assert abs(cfg.z.sum() - 1.2) < 1e-12


def test_eig_hermitian_matches_polynomial_roots():
    rng = RngStream(4)
    a = rng.gen.uniform(0.5, 2.0, size=7)
    pj = md.perturb(md.JacobiMatrix(a), 0.8, "herm")
    cfg, _ = eg.eig_hermitian(pj)
    roots = np.sort(np.roots(eg.char_poly(pj).kappa[::-1]).real)
    assert np.abs(np.sort(cfg.z) - roots).max() < 1e-9


def test_eig_nonhermitian_quadratic_cases():
    cfg = eg.eig_nonhermitian(md.perturb(jacobi(1.0), 1.0, "antiherm"))
    assert cfg.L == 0 and cfg.M == 1
    assert np.allclose(cfg.pairs, [[math.sqrt(3) / 2, 0.5]])

    cfg = eg.eig_nonhermitian(md.perturb(jacobi(0.4), 1.0, "antiherm"))
    assert cfg.L == 2 and cfg.M == 0
    assert np.allclose(np.sort(cfg.imag_points), [0.2, 0.8])

    rng = RngStream(5)
    a = rng.gen.uniform(0.5, 2.0, size=6)
    pj = md.perturb(md.JacobiMatrix(a), 1.4, "antiherm")
    cfg = eg.eig_nonhermitian(pj)
    assert abs(cfg.points().sum() - 1.4j) < 1e-9
    assert (cfg.points().imag > 0).all()


def test_spectral_measure_explicit_cases():
    sm = eg.spectral_measure(jacobi(0.7))
    assert np.allclose(sm.lambdas, [0.7]) and np.allclose(sm.weights, [1.0])
    assert sm.w0 is None

    sm = eg.spectral_measure(jacobi(1.0, 1.0))
    assert np.allclose(sm.lambdas, [SQRT2])
    assert np.allclose(sm.weights, [0.5])
    assert sm.w0 == pytest.approx(0.5, abs=1e-12)


def test_spectral_measure_moments_match_matrix_powers():
    rng = RngStream(6)
    for nm1 in (3, 6, 9):
        J = md.JacobiMatrix(rng.gen.uniform(0.5, 2.0, size=nm1))
        sm = eg.spectral_measure(J)
        D = J.to_dense()
        for k in range(7):
            want = np.linalg.matrix_power(D, k)[0, 0]
            assert abs(sm.moment(k) - want) < 1e-10 * max(1.0, abs(want))


def test_unperturbed_spectrum_is_symmetric():
    rng = RngStream(7)
    for params in (md.EnsembleParams(1.5, 4, 4), md.EnsembleParams(2.0, 5, 3)):
        J = md.sample_chiral_jacobi(params, rng)
        w = np.sort(np.linalg.eigvalsh(J.to_dense()))
        assert np.abs(w + w[::-1]).max() < 1e-10
        if params.N % 2 == 1:
            assert abs(w[params.N // 2]) < 1e-10


def test_reconstruct_jacobi_inverse_cases():
    J = eg.reconstruct_jacobi(eg.SpectralMeasure(lambdas=np.array([0.7]), weights=np.array([1.0])))
    assert np.allclose(J.a, [0.7])
    J = eg.reconstruct_jacobi(
        eg.SpectralMeasure(lambdas=np.array([SQRT2]), weights=np.array([0.5]), w0=0.5)
    )
    assert np.allclose(J.a, [1.0, 1.0], atol=1e-12)


def test_reconstruct_jacobi_round_trip():
    rng = RngStream(8)
    for params in (md.EnsembleParams(2.0, 10, 10), md.EnsembleParams(1.0, 10, 9)):
        J = md.sample_chiral_jacobi(params, rng)
        sm = eg.spectral_measure(J)
        J2 = eg.reconstruct_jacobi(sm)
        assert np.abs(J.a - J2.a).max() / np.abs(J.a).max() < 1e-8


def test_reconstruct_perturbed_explicit_inverses():
    cfg = eg.HermitianConfig(z=np.array([1 + SQRT2, 1 - SQRT2]))
    pj = eg.reconstruct_perturbed(cfg)
    assert pj.l == pytest.approx(2.0, abs=1e-12)
    assert np.allclose(pj.base.a, [1.0], atol=1e-10)

    cfg = eg.ComplexConfig(imag_points=np.array([0.8, 0.2]), pairs=np.zeros((0, 2)))
    pj = eg.reconstruct_perturbed(cfg)
    assert pj.l == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(pj.base.a, [0.4], atol=1e-10)


def test_reconstruct_perturbed_round_trip_n10():
    rng = RngStream(9)
    p = md.EnsembleParams(beta=2.0, m=5, n=5)
    for _ in range(10):
        J = md.sample_chiral_jacobi(p, rng)
        pj = md.perturb(J, 1.1, "herm")
        cfg, _ = eg.eig_hermitian(pj)
        back = eg.reconstruct_perturbed(cfg)
        assert abs(back.l - pj.l) < 1e-7
        assert np.abs(back.base.a - pj.base.a).max() < 1e-7


def test_configuration_round_trip_identity():
    # eig(reconstruct(config)) = config
    cfg = eg.HermitianConfig(z=np.array([2.5, -1.4, 0.9, -0.3]))
    pj = eg.reconstruct_perturbed(cfg)
    cfg2, _ = eg.eig_hermitian(pj)
    assert np.abs(cfg.z - cfg2.z).max() < 1e-8

    cfg = eg.ComplexConfig(imag_points=np.array([0.9]), pairs=np.array([[1.2, 0.4]]))
    pj = eg.reconstruct_perturbed(cfg)
    cfg2 = eg.eig_nonhermitian(pj)
    assert cfg2.L == 1 and cfg2.M == 1
    assert abs(cfg2.imag_points[0] - 0.9) < 1e-8
    assert np.abs(cfg2.pairs - cfg.pairs).max() < 1e-8


def test_invalid_configurations_rejected():
    with pytest.raises(ValueError):
        eg.HermitianConfig(z=np.array([1.0, 2.0]))  # not alternating
    with pytest.raises(ValueError):
        eg.ComplexConfig(imag_points=np.array([-0.5]), pairs=np.zeros((0, 2)))
    # coincident squared eigenvalues are rejected by the inverse map
    with pytest.raises(ValueError):
        eg.reconstruct_perturbed(
            eg.ComplexConfig(imag_points=np.zeros(0), pairs=np.array([[0.7, 0.4], [0.7, 0.4]]))
        )


def test_alternating_order_batch_agrees_with_single():
    rng = RngStream(10)
    p = md.EnsembleParams(beta=2.0, m=3, n=2)
    entries, _ = md.sample_jacobi_batch(p, rng, 50)
    eigs = eg.hermitian_eigs_batch(entries, 0.9)
    z = eg.alternating_order_batch(eigs)
    assert eg.alternating_check_batch(z).all()
    cfg, _ = eg.eig_hermitian(md.perturb(md.JacobiMatrix(entries[17]), 0.9, "herm"))
    assert np.allclose(z[17], cfg.z, atol=1e-12)


def test_nonhermitian_batch_agrees_with_single():
    rng = RngStream(11)
    p = md.EnsembleParams(beta=1.0, m=2, n=3)
    entries, _ = md.sample_jacobi_batch(p, rng, 40)
    out = eg.nonhermitian_eigs_batch(entries, 1.3)
    assert out["upper_ok"].all()
    assert out["mirror_err"].max() < 1e-9
    assert out["trace_err"].max() < 1e-9
    cfg = eg.eig_nonhermitian(md.perturb(md.JacobiMatrix(entries[11]), 1.3, "antiherm"))
    got = np.sort_complex(out["points"][11])
    want = np.sort_complex(cfg.points())
    assert np.abs(got - want).max() < 1e-9
