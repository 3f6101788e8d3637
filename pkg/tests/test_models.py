import math

import numpy as np
import pytest

from chgbe import eig as eigmod
from chgbe import models as md
from chgbe.errors import DegenerateInputError
from chgbe.quaternion import QArray
from chgbe.rng import RngStream, ScalarField


def test_ensemble_params_derived_quantities():
    p = md.EnsembleParams(beta=2.0, m=2, n=3)
    assert p.N == 4 and not p.odd
    assert p.a == pytest.approx(1 + 1 - 1.0, abs=0)  # |3-2| + 1 - 2/2
    p = md.EnsembleParams(beta=1.0, m=3, n=1)
    assert p.N == 3 and p.odd
    assert p.a == 2 + 1 - 2.0
    p = md.EnsembleParams(beta=0.7, m=4, n=4)
    assert p.N == 8
    assert p.a == pytest.approx(1 - 2 / 0.7, rel=1e-15)
    with pytest.raises(ValueError):
        md.EnsembleParams(beta=0.0, m=1, n=1)
    with pytest.raises(ValueError):
        md.EnsembleParams(beta=1.0, m=0, n=1)


def test_chi_orders_match_the_index_rules():
    # m <= n: x_j ~ chi_{beta(n-j+1)}, y_j ~ chi_{beta(m-j)}
    assert list(md.chi_orders(md.EnsembleParams(2.0, 1, 1))) == [2.0]
    assert list(md.chi_orders(md.EnsembleParams(2.0, 2, 1))) == [2.0, 2.0]
    assert list(md.chi_orders(md.EnsembleParams(1.0, 2, 2))) == [2.0, 1.0, 1.0]
    assert list(md.chi_orders(md.EnsembleParams(2.0, 2, 3))) == [6.0, 2.0, 4.0]


def test_sample_dense_unperturbed_block_structure():
    p = md.EnsembleParams(beta=2.0, m=2, n=3)
    d = md.sample_dense(p, RngStream(1), kind="none")
    H = md.assemble_full(d)
    assert H.shape == (5, 5)
    assert np.allclose(H, H.conj().T)
    assert np.abs(H[:2, :2]).max() == 0.0
    assert np.abs(H[2:, 2:]).max() == 0.0


def test_sample_dense_e1_perturbation_is_exact():
    p = md.EnsembleParams(beta=1.0, m=2, n=2)
    d = md.sample_dense(p, RngStream(2), kind="herm", l=1.0, u_e1=True)
    H1 = md.assemble_full(d)
    H0 = md.assemble_full(md.DenseChiral(field=d.field, m=2, n=2, X=d.X, kind="none"))
    diff = H1 - H0
    assert diff[0, 0] == 1.0
    assert np.abs(diff).sum() == 1.0


def test_sample_dense_quaternion_embedding_doubles():
    p = md.EnsembleParams(beta=4.0, m=1, n=1)
    d = md.sample_dense(p, RngStream(3), kind="none")
    H = md.assemble_full(d)
    assert H.shape == (4, 4)
    w = np.linalg.eigvalsh(H)
    assert abs(w[0] - w[1]) < 1e-12 and abs(w[2] - w[3]) < 1e-12


def test_sample_dense_rejects_general_beta():
    p = md.EnsembleParams(beta=0.7, m=2, n=2)
    with pytest.raises(ValueError):
        md.sample_dense(p, RngStream(0))


def test_assemble_full_antihermitian_gamma_block():
    p = md.EnsembleParams(beta=2.0, m=3, n=2)
    d = md.sample_dense(p, RngStream(4), kind="antiherm", l=0.7)
    H = md.assemble_full(d)
    G = H[:3, :3]
    assert np.allclose(G, -G.conj().T)
    assert np.allclose(-1j * G, (-1j * G).conj().T)


def test_two_by_two_chiral_eigenvalues():
    z = 0.8 - 0.6j
    d = md.DenseChiral(field=ScalarField.COMPLEX, m=1, n=1, X=np.array([[z]]), kind="none")
    w = np.linalg.eigvalsh(md.assemble_full(d))
    assert np.allclose(w, [-abs(z), abs(z)])


def test_bidiagonalize_identity_case():
    B0 = np.array([[2.0, 0.0, 0.0], [1.0, 3.0, 0.0]])
    bid, rep = md.bidiagonalize(B0)
    assert np.allclose(bid.to_matrix(), B0, atol=1e-14)
    assert rep.residual < 1e-13
    assert rep.e1_residual < 1e-15


def test_bidiagonalize_preserves_singular_values():
    rng = RngStream(5)
    X = rng.gen.normal(size=(2, 3)) + 1j * rng.gen.normal(size=(2, 3))
    bid, rep = md.bidiagonalize(X)
    sv1 = np.sort(np.linalg.svd(X, compute_uv=False))
    sv2 = np.sort(np.linalg.svd(bid.to_matrix(), compute_uv=False))
    assert np.abs(sv1 - sv2).max() < 1e-12
    assert rep.residual < 1e-12


def test_bidiagonalize_first_row_moments():
    # L fixes e1, so <e1, (BB*)^k e1> = <e1, (XX*)^k e1>
    rng = RngStream(6)
    X = rng.gen.normal(size=(3, 5)) + 1j * rng.gen.normal(size=(3, 5))
    bid, _ = md.bidiagonalize(X)
    B = bid.to_matrix()
    P, Q = X @ X.conj().T, B @ B.T
    for k in (1, 2, 3):
        a = np.linalg.matrix_power(P, k)[0, 0]
        b = np.linalg.matrix_power(Q, k)[0, 0]
        assert abs(a - b) < 1e-10 * max(1.0, abs(a))


def test_bidiagonalize_rejects_zero_input():
    with pytest.raises(DegenerateInputError):
        md.bidiagonalize(np.zeros((2, 3)))


def test_jacobi_sampler_entries_positive_any_beta():
    for beta in (0.3, 1.0, 2.7):
        p = md.EnsembleParams(beta=beta, m=3, n=2)
        entries, nres = md.sample_jacobi_batch(p, RngStream(7), 2000)
        assert entries.shape == (2000, p.N - 1)
        assert (entries > 0).all()
    J = md.sample_chiral_jacobi(p, RngStream(8))
    assert J.N == p.N


def test_permute_to_jacobi_trivial_and_similarity():
    bid = md.Bidiagonal(x=np.array([1.5]), y=np.array([]), shape=(1, 1))
    J = md.permute_to_jacobi(bid)
    assert J.N == 2 and J.a[0] == 1.5

    rng = RngStream(9)
    X = rng.gen.normal(size=(2, 2))
    bid, _ = md.bidiagonalize(X)
    J = md.permute_to_jacobi(bid)
    B = bid.to_matrix()
    M = np.block([[np.zeros((2, 2)), B], [B.T, np.zeros((2, 2))]])
    assert np.allclose(np.sort(np.linalg.eigvalsh(J.to_dense())), np.sort(np.linalg.eigvalsh(M)), atol=1e-12)


def test_permute_to_jacobi_strips_zero_block():
    rng = RngStream(10)
    X = rng.gen.normal(size=(1, 3))
    bid, _ = md.bidiagonalize(X)
    J = md.permute_to_jacobi(bid)
    assert J.N == 2
    B = bid.to_matrix()
    M = np.block([[np.zeros((1, 1)), B], [B.T, np.zeros((3, 3))]])
    w_full = np.sort(np.linalg.eigvalsh(M))
    w_core = np.sort(np.concatenate([np.linalg.eigvalsh(J.to_dense()), np.zeros(2)]))
    assert np.abs(w_full - w_core).max() < 1e-12


def test_perturb_trace_and_eigenvalues():
    J = md.JacobiMatrix(np.array([1.0]))
    pj = md.perturb(J, 2.0, "herm")
    assert np.trace(pj.to_dense()) == 2.0
    w = np.sort(np.linalg.eigvalsh(pj.to_dense()))
    assert np.allclose(w, [1 - math.sqrt(2), 1 + math.sqrt(2)])
    pj2 = md.perturb(J, 2.0, "antiherm")
    assert np.trace(pj2.to_dense()) == 2.0j
    with pytest.raises(ValueError):
        md.perturb(J, 0.0, "herm")
    with pytest.raises(ValueError):
        md.perturb(J, 1.0, "bogus")


def test_antibidiagonal_form_small_and_similarity():
    J = md.JacobiMatrix(np.array([1.3]))
    pj = md.perturb(J, 0.7, "herm")
    A = md.antibidiagonal_form(pj)
    assert np.allclose(A, np.array([[0.0, 1.3], [1.3, 0.7]]))

    rng = RngStream(11)
    for N in (4, 5, 8):
        a = rng.gen.uniform(0.5, 2.0, size=N - 1)
        pj = md.perturb(md.JacobiMatrix(a), 1.1, "herm")
        A = md.antibidiagonal_form(pj)
        mid = N // 2
        assert A[mid, mid] == pytest.approx(1.1)
        w1 = np.sort(np.linalg.eigvalsh(A))
        w2 = np.sort(np.linalg.eigvalsh(pj.to_dense()))
        assert np.abs(w1 - w2).max() < 1e-12
        assert int((A != 0).sum()) == 2 * (N - 1) + 1
        # exact permutation similarity: conjugating back recovers the matrix
        order = md.antibidiagonal_permutation(N)
        P = np.zeros((N, N))
        P[np.arange(N), order] = 1.0
        assert np.array_equal(P.T @ A @ P, pj.to_dense())


def test_antibidiagonal_form_antihermitian_variant():
    pj = md.perturb(md.JacobiMatrix(np.array([1.0, 0.5])), 0.9, "antiherm")
    A = md.antibidiagonal_form(pj)
    mid = pj.N // 2
    assert A[mid, mid] == 0.9j
    w1 = np.sort_complex(np.linalg.eigvals(A))
    w2 = np.sort_complex(np.linalg.eigvals(pj.to_dense()))
    assert np.abs(w1 - w2).max() < 1e-12


@pytest.mark.parametrize("beta", [1, 2, 4])
@pytest.mark.parametrize("mn", [(2, 3), (3, 2), (1, 3), (2, 2)])
@pytest.mark.parametrize("kind", ["herm", "antiherm"])
def test_dense_reduction_same_realization(beta, mn, kind):
    p = md.EnsembleParams(beta=beta, m=mn[0], n=mn[1])
    rng = RngStream(31, beta * 100 + mn[0] * 10 + mn[1])
    for _ in range(5):
        d = md.sample_dense(p, rng, kind=kind, l=1.0)
        r = md.dense_reduction_check(d)
        assert r.max_discrepancy < 1e-10


def test_dense_reduction_zero_multiplicity():
    p = md.EnsembleParams(beta=1.0, m=3, n=1)
    d = md.sample_dense(p, RngStream(13), kind="herm", l=0.5)
    r = md.dense_reduction_check(d)
    assert int((np.abs(r.dense_eigs) < 1e-10).sum()) == 1  # m - n - 1


def test_dense_reduction_quadratic_formula_case():
    # beta=2, m=n=1, anti-Hermitian: z = (i l +- sqrt(4 x^2 - l^2)) / 2
    p = md.EnsembleParams(beta=2.0, m=1, n=1)
    d = md.sample_dense(p, RngStream(14), kind="antiherm", l=1.0)
    r = md.dense_reduction_check(d)
    x = abs(complex(np.asarray(d.X)[0, 0]))
    disc = 4 * x * x - 1.0
    root = math.sqrt(abs(disc)) * (1 if disc >= 0 else 1j)
    want = np.sort_complex(np.array([(1j + root) / 2, (1j - root) / 2]))
    got = np.sort_complex(r.dense_eigs)
    assert np.abs(got - want).max() < 1e-10


@pytest.mark.parametrize("beta", [1, 2, 4])
@pytest.mark.parametrize("mn", [(2, 4), (4, 2)])
def test_dense_spectral_moments_match_jacobi(beta, mn):
    # the reduction chain fixes e1, so dense and Jacobi spectral moments agree
    p = md.EnsembleParams(beta=beta, m=mn[0], n=mn[1])
    d = md.sample_dense(p, RngStream(15, beta), kind="none")
    H = md.assemble_full(d)
    Xq = d.X if isinstance(d.X, QArray) else QArray(np.asarray(d.X, dtype=complex))
    bid, _ = md.bidiagonalize(Xq)
    J = md.permute_to_jacobi(bid).to_dense()
    for k in range(5):
        dense_mom = np.linalg.matrix_power(H, k)[0, 0].real
        jac_mom = np.linalg.matrix_power(J, k)[0, 0]
        assert abs(dense_mom - jac_mom) < 1e-8 * max(1.0, abs(jac_mom))
