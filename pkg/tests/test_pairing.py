import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pair_weights_linear_solve, random_orthogonal
from tightproj import (
    FrameSpec,
    InfeasibleAlphaError,
    InvalidInputError,
    Pair,
    PairingPlan,
    Singleton,
    SymMatrix,
    build_pairing,
    choose_alpha,
    compress,
    eigenspace_projection,
    jacobi_eigh,
    pairing_projection,
    tighten,
)
from tightproj.linalg import max_norm
from tightproj.pairing import pair_weights

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


class TestPairWeights:
    def test_quarter_split(self):
        expected = pair_weights_linear_solve(1.0, 5.0, 2.0)
        np.testing.assert_allclose(expected, [0.75, 0.25])
        a_n, a_m = pair_weights(1.0, 5.0, 2.0)
        assert (a_n**2, a_m**2) == pytest.approx((0.75, 0.25), abs=1e-15)

    def test_midpoint(self):
        a_n, a_m = pair_weights(1.0, 3.0, 2.0)
        assert a_n == pytest.approx(np.sqrt(0.5)) and a_m == pytest.approx(np.sqrt(0.5))

    def test_degenerate_pair(self):
        assert pair_weights(2.0, 2.0, 2.0) == (1.0, 0.0)

    def test_outside_interval(self):
        with pytest.raises(InfeasibleAlphaError):
            pair_weights(1.0, 3.0, 3.5)

    def test_unordered(self):
        with pytest.raises(InvalidInputError):
            pair_weights(3.0, 1.0, 2.0)

    @given(finite, finite, st.floats(0, 1))
    def test_weight_identity(self, x, y, t):
        lo, hi = min(x, y), max(x, y)
        alpha = lo + t * (hi - lo)
        a_n, a_m = pair_weights(lo, hi, alpha)
        assert 0 <= a_n <= 1 and 0 <= a_m <= 1
        assert abs(a_n**2 + a_m**2 - 1) <= 1e-14
        scale = 1 + abs(lo) + abs(hi)
        assert abs(a_n**2 * lo + a_m**2 * hi - alpha) <= 1e-13 * scale


class TestChooseAlpha:
    def test_even_uses_central_gap(self):
        assert choose_alpha([1.0, 2.0, 4.0, 7.0]) == 3.0

    def test_odd_uses_median(self):
        assert choose_alpha([1.0, 2.0, 9.0]) == 2.0

    def test_override_accepted(self):
        assert choose_alpha([1.0, 3.0], override=1.5) == 1.5

    def test_override_infeasible(self):
        with pytest.raises(InfeasibleAlphaError):
            choose_alpha([1.0, 2.0, 3.0, 4.0], override=3.5)

    def test_unsorted(self):
        with pytest.raises(InvalidInputError, match="sorted"):
            choose_alpha([2.0, 1.0])


class TestBuildPairing:
    def test_symmetric_indices(self):
        plan = build_pairing([1.0, 2.0, 3.0, 4.0], 2.5)
        assert [(p.n, p.m) for p in plan.pairs] == [(0, 3), (1, 2)]
        assert plan.rank == 2 and plan.residual([1.0, 2.0, 3.0, 4.0]) <= 1e-15

    def test_odd_singleton(self):
        lam = [1.0, 2.0, 3.0, 4.0, 5.0]
        plan = build_pairing(lam, 3.0)
        assert plan.singletons == [Singleton(2)]
        assert sorted(plan.consumed_indices) == list(range(5))

    def test_odd_requires_median(self):
        with pytest.raises(InfeasibleAlphaError, match="median"):
            build_pairing([1.0, 2.0, 3.0], 2.5)

    def test_plan_rejects_reused_index(self):
        with pytest.raises(InvalidInputError, match="twice"):
            PairingPlan(1.0, [Singleton(0), Pair(0, 1, 1.0, 0.0)])

    def test_plan_rejects_bad_weights(self):
        with pytest.raises(InvalidInputError):
            PairingPlan(1.0, [Pair(0, 1, 0.5, 0.5)])

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(0.01, 100), min_size=1, max_size=40))
    def test_rank_and_residual(self, values):
        lam = np.sort(np.array(values))
        alpha = choose_alpha(lam)
        plan = build_pairing(lam, alpha)
        assert plan.rank == (lam.size + 1) // 2
        assert plan.residual(lam) <= 1e-12 * (1 + lam[-1])


class TestEigenspaceProjection:
    def test_cluster(self):
        eig = jacobi_eigh(SymMatrix.diag([1.0, 2.0, 2.0, 3.0]))
        p = eigenspace_projection(eig, 2.0, 1e-12)
        assert p.rank == 2
        np.testing.assert_allclose(p.matrix, np.diag([0.0, 1.0, 1.0, 0.0]), atol=1e-15)

    def test_empty(self):
        eig = jacobi_eigh(SymMatrix.diag([1.0, 3.0]))
        assert eigenspace_projection(eig, 2.0, 1e-12).rank == 0


class TestTighten:
    def test_repeated_vector(self):
        p, alpha, cert = tighten([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        assert alpha == 1.5 and p.rank == 1 and cert.passed
        np.testing.assert_allclose(np.abs(p.basis[:, 0]), [np.sqrt(0.5)] * 2, atol=1e-15)

    def test_tight_frame_returns_identity(self):
        p, alpha, cert = tighten(np.eye(4))
        assert p.rank == 4 and alpha == 1.0 and cert.passed

    def test_alpha_override(self):
        p, alpha, cert = tighten([[1.0, 0.0], [0.0, np.sqrt(3.0)]], alpha_override=2.5)
        assert alpha == 2.5 and cert.passed

    def test_infeasible_override(self):
        with pytest.raises(InfeasibleAlphaError):
            tighten([[1.0, 0.0], [0.0, np.sqrt(3.0)]], alpha_override=4.0)

    def test_zero_frame(self):
        with pytest.raises(InvalidInputError):
            tighten(np.zeros((2, 2)))

    @pytest.mark.parametrize("d", [8, 16, 32])
    def test_noproj_truncations_tighten(self, d):
        frame = FrameSpec(d, np.diag([np.sqrt(2.0 - 1.0 / n) for n in range(1, d + 1)]))
        p, alpha, cert = tighten(frame)
        assert cert.passed and p.rank == d // 2
        assert 1.0 < alpha < 2.0

    def test_rank_law_and_gram(self):
        rng = np.random.default_rng(3)
        for d in range(1, 17):
            vecs = rng.standard_normal((int(rng.integers(d, 2 * d + 1)), d))
            p, alpha, cert = tighten(vecs)
            assert p.rank == (d + 1) // 2
            assert max_norm(p.basis.T @ p.basis - np.eye(p.rank)) <= 1e-12
            s = vecs.T @ vecs
            assert max_norm(compress(p, s).entries - alpha * p.matrix) <= 1e-9 * (1 + max_norm(s))

    def test_unitary_equivariance(self, rng):
        vecs = rng.standard_normal((9, 6))
        u = random_orthogonal(rng, 6)
        p1, a1, _ = tighten(vecs)
        p2, a2, _ = tighten(FrameSpec.from_vectors(vecs).transformed(u))
        assert a2 == pytest.approx(a1, rel=1e-10)
        # U P U^T is again a tight projection for the rotated frame with the same alpha
        rotated = u @ p1.matrix @ u.T
        s2 = u @ (vecs.T @ vecs) @ u.T
        assert max_norm(rotated @ s2 @ rotated - a1 * rotated) <= 1e-9 * (1 + max_norm(s2))
        assert p2.rank == p1.rank

    @pytest.mark.parametrize("c", [0.1, 3.0, 17.0])
    def test_scale_covariance(self, c, rng):
        vecs = rng.standard_normal((7, 5))
        _, a1, _ = tighten(vecs)
        _, a2, _ = tighten(FrameSpec.from_vectors(vecs).scaled(c))
        assert a2 == pytest.approx(a1 * c * c, rel=1e-10)

    def test_pairing_projection_matches_plan(self, rng):
        a = rng.standard_normal((6, 6))
        eig = jacobi_eigh(a @ a.T)
        plan = build_pairing(eig.eigenvalues, choose_alpha(eig.eigenvalues))
        p = pairing_projection(eig, plan)
        e = eig.reconstruct()
        np.testing.assert_allclose(np.diag(p.basis.T @ e @ p.basis), plan.block_values(eig.eigenvalues), atol=1e-12)
