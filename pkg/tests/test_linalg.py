import numpy as np
import pytest

from lindblad_pc import (
    assemble,
    builtin,
    commutator,
    expm,
    integral_at,
    kron,
    minimal_poly_degree,
    null_space,
    unvec,
    vec,
)
from lindblad_pc.errors import DimensionMismatchError, NonFiniteError


def random_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_diagonal_with_identity(self):
        a, b = 2.0, -3.0
        out = kron(np.diag([a, b]), np.eye(2))
        assert np.array_equal(out, np.diag([a, a, b, b]))

    def test_mixed_product_with_vectors(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = random_complex(rng, 2, 2)
            b = random_complex(rng, 2, 2)
            x = random_complex(rng, 2)
            y = random_complex(rng, 2)
            lhs = kron(a, b) @ np.kron(x, y)
            rhs = np.kron(a @ x, b @ y)
            assert np.abs(lhs - rhs).max() <= 1e-12


class TestVec:
    def test_column_stacking_order(self):
        m = np.array([[1, 2], [3, 4]], dtype=complex)
        assert np.array_equal(vec(m), np.array([1, 3, 2, 4], dtype=complex))

    def test_unvec_inverts_vec(self):
        rng = np.random.default_rng(4)
        m = random_complex(rng, 3, 3)
        assert np.array_equal(unvec(vec(m), 3), m)

    def test_unvec_rejects_bad_length(self):
        with pytest.raises(DimensionMismatchError):
            unvec(np.zeros(5), 2)

    def test_column_lemma_on_random_triples(self):
        # vec(A B C) = (C^T kron A) vec(B)
        rng = np.random.default_rng(5)
        for _ in range(100):
            a = random_complex(rng, 3, 3)
            b = random_complex(rng, 3, 3)
            c = random_complex(rng, 3, 3)
            lhs = vec(a @ b @ c)
            rhs = kron(c.T, a) @ vec(b)
            assert np.abs(lhs - rhs).max() <= 1e-12


class TestCommutator:
    def test_self_commutator_vanishes(self):
        rng = np.random.default_rng(6)
        a = random_complex(rng, 3, 3)
        assert np.abs(commutator(a, a)).max() == 0.0

    def test_diagonal_matrices_commute(self):
        a = np.diag([1.0, 2.0, 3.0])
        b = np.diag([-1.0, 0.5, 2.0])
        assert np.abs(commutator(a, b)).max() == 0.0

    def test_ladder_pair(self):
        e12 = np.zeros((2, 2), dtype=complex)
        e12[0, 1] = 1.0
        e21 = e12.T.copy()
        assert np.array_equal(commutator(e12, e21), np.diag([1.0, -1.0]))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            commutator(np.eye(2), np.eye(3))


class TestExpm:
    def test_zero(self):
        assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        lam = np.array([0.3, -1.0, 2.0 + 1.0j])
        out = expm(np.diag(lam))
        assert np.abs(out - np.diag(np.exp(lam))).max() <= 1e-13

    def test_nilpotent_is_truncated_series(self):
        n = np.zeros((3, 3), dtype=complex)
        n[0, 1] = n[1, 2] = 1.0
        expected = np.eye(3) + n + n @ n / 2.0
        assert np.abs(expm(n) - expected).max() <= 1e-15

    def test_derivative_property(self):
        # d/dt expm(t A) at t=1 equals A expm(A)
        rng = np.random.default_rng(7)
        h = 1e-5
        for _ in range(10):
            a = random_complex(rng, 4, 4)
            a /= np.linalg.norm(a)
            diff = (expm((1 + h) * a) - expm((1 - h) * a)) / (2 * h)
            assert np.abs(diff - a @ expm(a)).max() <= 1e-6

    def test_rejects_non_finite(self):
        bad = np.zeros((2, 2))
        bad[0, 0] = np.nan
        with pytest.raises(NonFiniteError):
            expm(bad)


class TestNullSpace:
    def test_zero_matrix_gives_full_space(self):
        sub = null_space(np.zeros((4, 4)))
        assert sub.rank == 4
        assert np.abs(sub.projector() - np.eye(4)).max() <= 1e-12

    def test_rank_one_projector(self):
        sub = null_space(np.diag([1.0, 0.0]))
        assert sub.rank == 1
        assert np.abs(np.abs(sub.basis[:, 0]) - np.array([0.0, 1.0])).max() <= 1e-12

    def test_basis_is_orthonormal_and_annihilated(self):
        rng = np.random.default_rng(8)
        rel_tol = 1e-10
        for _ in range(10):
            a = random_complex(rng, 6, 6)
            a[:, :2] = 0.0  # at least a 2-dimensional kernel
            sub = null_space(a, rel_tol)
            assert sub.rank >= 2
            gram = sub.basis.conj().T @ sub.basis
            assert np.abs(gram - np.eye(sub.rank)).max() <= 1e-12
            smax = np.linalg.svd(a, compute_uv=False)[0]
            for i in range(sub.rank):
                assert np.linalg.norm(a @ sub.basis[:, i]) <= 10 * rel_tol * smax

    def test_residual_measures_membership(self):
        sub = null_space(np.diag([1.0, 0.0, 0.0]))
        assert sub.residual(np.array([0.0, 1.0, 1.0])) <= 1e-14
        assert sub.residual(np.array([1.0, 0.0, 0.0])) == pytest.approx(1.0)


class TestMinimalPolyDegree:
    def test_identity(self):
        assert minimal_poly_degree(np.eye(5)) == 1

    def test_zero(self):
        assert minimal_poly_degree(np.zeros((4, 4))) == 1

    def test_nilpotent_jordan_block(self):
        n = np.zeros((3, 3), dtype=complex)
        n[0, 1] = n[1, 2] = 1.0
        assert minimal_poly_degree(n) == 3

    def test_cascade_integral_with_degenerate_energies(self):
        # with the level energies degenerate the integrated generator has
        # six distinct eigenvalues, so the degree drops from 9 to 6
        g = assemble(builtin("cascade3", {"eps": 0.0}))
        for t in (0.5, 1.0, 2.0):
            assert minimal_poly_degree(integral_at(g, t)) == 6

    def test_scale_invariance(self):
        g = assemble(builtin("cascade3", {"eps": 0.0}))
        b = integral_at(g, 1.0)
        degrees = {minimal_poly_degree(c * b) for c in (1e-3, 1.0, 1e3)}
        assert degrees == {6}
