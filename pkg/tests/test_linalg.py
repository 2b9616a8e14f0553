import numpy as np
import pytest

from oracles import frame_operator_loops
from tightproj import (
    ConvergenceError,
    FrameSpec,
    InvalidInputError,
    Projection,
    SymMatrix,
    compress,
    frame_bounds,
    frame_operator,
    jacobi_eigh,
    project_frame,
    tighten,
    verify_tight,
)
from tightproj.linalg import max_norm, probe_vectors


def noproj_frame(d):
    return FrameSpec(d, np.diag([np.sqrt(2.0 - 1.0 / n) for n in range(1, d + 1)]))


class TestFrameSpec:
    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInputError, match="non-finite"):
            FrameSpec(2, [[1.0, np.nan]])

    def test_rejects_wrong_length(self):
        with pytest.raises(InvalidInputError):
            FrameSpec(3, [[1.0, 2.0]])

    def test_rejects_empty(self):
        with pytest.raises(InvalidInputError):
            FrameSpec(2, np.zeros((0, 2)))

    def test_is_immutable(self):
        f = FrameSpec.from_vectors([[1.0, 0.0]])
        with pytest.raises(ValueError):
            f.vectors[0, 0] = 3.0


class TestFrameOperator:
    def test_orthonormal_basis_gives_identity(self):
        assert np.array_equal(frame_operator(np.eye(2)).entries, np.eye(2))

    def test_repeated_vector(self):
        vecs = [[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
        expected = frame_operator_loops(vecs)
        assert np.array_equal(expected, np.diag([2.0, 1.0]))
        assert np.array_equal(frame_operator(vecs).entries, expected)

    def test_noproj_truncation(self):
        d = 8
        s = frame_operator(noproj_frame(d)).entries
        np.testing.assert_allclose(np.diag(s), [2.0 - 1.0 / n for n in range(1, d + 1)], rtol=0, atol=1e-15)
        assert max_norm(s - np.diag(np.diag(s))) == 0.0

    def test_matches_loop_oracle_and_is_symmetric(self, rng):
        vecs = rng.standard_normal((7, 4))
        s = frame_operator(vecs).entries
        np.testing.assert_allclose(s, frame_operator_loops(vecs), atol=1e-13)
        assert np.array_equal(s, s.T)

    def test_psd(self, rng):
        for _ in range(20):
            d = int(rng.integers(1, 10))
            vecs = rng.standard_normal((int(rng.integers(1, 2 * d + 1)), d))
            s = frame_operator(vecs)
            w = jacobi_eigh(s).eigenvalues
            assert w.min() >= -1e-12 * max_norm(s.entries)

    def test_positive_definite_iff_spanning(self, rng):
        spanning = rng.standard_normal((5, 3))
        deficient = rng.standard_normal((5, 1)) @ rng.standard_normal((1, 3))
        assert frame_bounds(spanning)[0] > 1e-8
        assert frame_bounds(deficient)[0] < 1e-12


class TestSymMatrix:
    def test_upper_triangle_wins(self):
        s = SymMatrix([[1.0, 2.0], [2.0000000000001, 3.0]])
        assert s.entries[1, 0] == 2.0

    def test_checked_rejects_asymmetric(self):
        with pytest.raises(InvalidInputError, match="not symmetric"):
            SymMatrix.checked([[1.0, 2.0], [0.0, 1.0]])


class TestJacobi:
    def test_already_diagonal(self):
        e = jacobi_eigh(SymMatrix.diag([2.0, 1.0]))
        assert np.array_equal(e.eigenvalues, [1.0, 2.0])
        assert np.array_equal(e.eigenvectors, [[0.0, 1.0], [1.0, 0.0]])
        assert e.sweeps == 0

    def test_swap_matrix(self):
        e = jacobi_eigh([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(e.eigenvalues, [-1.0, 1.0], atol=1e-15)
        r = 1 / np.sqrt(2)
        assert np.allclose(np.abs(e.eigenvectors[:, 0]), [r, r])
        assert e.eigenvectors[0, 0] * e.eigenvectors[1, 0] < 0
        assert e.eigenvectors[0, 1] * e.eigenvectors[1, 1] > 0

    def test_random_64(self, rng):
        a = rng.standard_normal((64, 64))
        s = SymMatrix(a + a.T)
        e = jacobi_eigh(s)
        assert max_norm(e.reconstruct() - s.entries) <= 1e-10 * max_norm(s.entries)
        assert e.orthonormality_residual() <= 1e-12

    def test_agrees_with_lapack(self, rng):
        a = rng.standard_normal((20, 20))
        s = SymMatrix(a + a.T)
        np.testing.assert_allclose(jacobi_eigh(s).eigenvalues, np.linalg.eigvalsh(s.entries), atol=1e-12)

    def test_invariants_on_seeded_batch(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            d = int(rng.integers(1, 65))
            a = rng.standard_normal((d, d)) * rng.uniform(0.01, 100)
            s = SymMatrix(a + a.T)
            e = jacobi_eigh(s)
            assert e.orthonormality_residual() <= 1e-12
            assert max_norm(e.reconstruct() - s.entries) <= 1e-10 * (1 + max_norm(s.entries))

    def test_deterministic(self, rng):
        a = rng.standard_normal((12, 12))
        e1, e2 = jacobi_eigh(a + a.T), jacobi_eigh(a + a.T)
        assert np.array_equal(e1.eigenvectors, e2.eigenvectors)

    def test_ties_keep_stable_order(self):
        e = jacobi_eigh(SymMatrix.diag([1.0, 0.0, 1.0]))
        assert np.array_equal(e.eigenvectors[:, 1], [1.0, 0.0, 0.0])
        assert np.array_equal(e.eigenvectors[:, 2], [0.0, 0.0, 1.0])

    def test_sweep_cap(self, rng):
        a = rng.standard_normal((10, 10))
        with pytest.raises(ConvergenceError) as info:
            jacobi_eigh(a + a.T, max_sweeps=1)
        assert info.value.off_norm > 0

    def test_zero_matrix(self):
        e = jacobi_eigh(np.zeros((3, 3)))
        assert np.array_equal(e.eigenvalues, np.zeros(3))


class TestFrameBounds:
    def test_orthonormal(self):
        assert frame_bounds(np.eye(3)) == (1.0, 1.0)

    def test_repeated_vector(self):
        a, b = frame_bounds([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        assert (a, b) == (1.0, 2.0)

    def test_noproj_truncation(self):
        a, b = frame_bounds(noproj_frame(8))
        assert a == pytest.approx(1.0, abs=1e-15)
        assert b == pytest.approx(15 / 8, abs=1e-15)

    def test_sandwich(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            d = int(rng.integers(1, 9))
            vecs = rng.standard_normal((int(rng.integers(d, 2 * d + 1)), d))
            a, b = frame_bounds(vecs)
            probes = rng.standard_normal((100, d))
            probes /= np.linalg.norm(probes, axis=1, keepdims=True)
            energy = np.sum((probes @ vecs.T) ** 2, axis=1)
            assert np.all(a - 1e-8 <= energy)
            assert np.all(energy <= b + 1e-8)


class TestProjection:
    def test_rejects_non_orthonormal(self):
        with pytest.raises(InvalidInputError, match="orthonormal"):
            Projection(2, [[1.0], [1.0]])

    def test_rank_mismatch(self):
        with pytest.raises(InvalidInputError):
            Projection(2, np.eye(2), rank=1)

    def test_idempotent_and_trace(self, rng):
        q, _ = np.linalg.qr(rng.standard_normal((9, 4)))
        p = Projection(9, q)
        m = p.matrix
        assert max_norm(m @ m - m) <= 1e-10
        assert max_norm(m - m.T) == 0.0
        assert abs(np.trace(m) - 4) <= 1e-8

    def test_zero_rank(self):
        p = Projection.zero(3)
        assert p.rank == 0 and np.array_equal(p.matrix, np.zeros((3, 3)))


class TestCompress:
    def test_identity(self, rng):
        a = rng.standard_normal((4, 4))
        e = SymMatrix(a + a.T)
        np.testing.assert_allclose(compress(Projection.identity(4), e).entries, e.entries, atol=1e-14)

    def test_zero_projection(self):
        assert np.array_equal(compress(Projection.zero(2), SymMatrix.diag([1.0, 3.0])).entries, np.zeros((2, 2)))

    def test_diagonal_direction(self):
        p = Projection(2, np.array([[1.0], [1.0]]) / np.sqrt(2))
        out = compress(p, SymMatrix.diag([1.0, 3.0])).entries
        np.testing.assert_allclose(out, np.ones((2, 2)), atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError, match="dimension mismatch"):
            compress(Projection.identity(2), SymMatrix.diag([1.0, 2.0, 3.0]))


class TestProjectFrame:
    def test_identity(self, rng):
        vecs = rng.standard_normal((3, 2))
        np.testing.assert_allclose(project_frame(Projection.identity(2), vecs).vectors, vecs)

    def test_coordinate_projection(self):
        out = project_frame(Projection(2, [[1.0], [0.0]]), np.eye(2)).vectors
        assert np.array_equal(out, [[1.0, 0.0], [0.0, 0.0]])

    def test_projected_frame_is_tight_on_range(self):
        frame = FrameSpec.from_vectors([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        p, alpha, _ = tighten(frame)
        g = project_frame(p, frame).vectors
        q = p.basis
        # frame operator of {P f_i} restricted to ran P is alpha * I
        np.testing.assert_allclose(q.T @ (g.T @ g) @ q, alpha * np.eye(p.rank), atol=1e-12)


class TestVerifyTight:
    def test_orthonormal_basis(self):
        cert = verify_tight(np.eye(3), Projection.identity(3), 1.0)
        assert cert.passed
        assert cert.residual_compression <= 1e-15 and cert.residual_reconstruction <= 1e-15

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
    def test_not_tight(self, alpha):
        cert = verify_tight([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]], Projection.identity(2), alpha)
        assert not cert.passed
        assert cert.routes_agree

    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(InvalidInputError):
            verify_tight(np.eye(2), Projection.identity(2), 0.0)

    def test_probe_vectors_in_range_and_seeded(self, rng):
        q, _ = np.linalg.qr(rng.standard_normal((6, 3)))
        p = Projection(6, q)
        f = probe_vectors(p, 8, seed=5)
        assert f.shape == (6, 11)
        np.testing.assert_allclose(p.matrix @ f, f, atol=1e-14)
        np.testing.assert_allclose(np.linalg.norm(f, axis=0), 1.0)
        assert np.array_equal(f, probe_vectors(p, 8, seed=5))

    def test_seed_recorded(self):
        cert = verify_tight(np.eye(2), Projection.identity(2), 1.0, seed=42)
        assert cert.seed == 42 and cert.probes == 8

    def test_default_tolerance_scales(self):
        vecs = 10 * np.eye(2)
        cert = verify_tight(vecs, Projection.identity(2), 100.0)
        assert cert.tolerance == pytest.approx(1e-10 * 101)
