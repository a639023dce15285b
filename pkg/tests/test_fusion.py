import numpy as np
import pytest

from fusionframes import (
    canonical_dual,
    classify,
    coordinate_subspace,
    frame_bounds,
    frame_operator,
    full_subspace,
    fusion_frame,
    is_nontrivial,
    make_dual_pair,
    orthogonal_complement,
    orthonormal_basis,
    riesz_constants,
    spd_inverse,
    subspaces_equal,
)
from helpers import (
    OVERCOMPLETE_SINV,
    inflated_dual,
    orthobasis_frame_r3,
    overcomplete_frame_r3,
    overlap_frame_r4,
    random_fusion_frame,
    random_unitary,
)


def counterexample_frame():
    # complements of two coordinate lines in R^3
    return fusion_frame(
        [
            orthogonal_complement(orthonormal_basis([[1, 0, 0]])),
            orthogonal_complement(orthonormal_basis([[0, 1, 0]])),
        ]
    )


class TestFrameOperator:
    def test_orthonormal_basis_gives_identity(self):
        w = fusion_frame([coordinate_subspace(4, [k]) for k in range(1, 5)])
        assert np.allclose(frame_operator(w), np.eye(4))

    def test_overlap_frame(self):
        s = frame_operator(overlap_frame_r4())
        assert np.abs(s - np.diag([1.0, 2.0, 1.0, 1.0])).max() < 1e-12
        assert np.abs(spd_inverse(s) - np.diag([1.0, 0.5, 1.0, 1.0])).max() < 1e-12

    def test_overcomplete_frame_inverse(self):
        s = frame_operator(overcomplete_frame_r3())
        assert np.abs(spd_inverse(s) - OVERCOMPLETE_SINV).max() < 1e-12

    def test_counterexample_inverse_action(self):
        s_inv = spd_inverse(frame_operator(counterexample_frame()))
        assert np.abs(s_inv - np.diag([1.0, 1.0, 0.5])).max() < 1e-12


class TestFrameBounds:
    def test_orthonormal_fusion_basis(self):
        lower, upper = frame_bounds(orthobasis_frame_r3())
        assert lower == pytest.approx(1.0, abs=1e-12)
        assert upper == pytest.approx(1.0, abs=1e-12)

    def test_overlap_frame(self):
        # oracle: eigenvalues of diag(1, 2, 1, 1)
        assert frame_bounds(overlap_frame_r4()) == (1.0, 2.0)

    def test_non_spanning_family_flagged(self):
        w = fusion_frame([coordinate_subspace(2, [1])])
        lower, upper = frame_bounds(w)
        assert lower == 0.0
        assert upper == 1.0
        assert not classify(w).is_frame
        assert not w.spans_ambient

    def test_spanning_diagnostic(self):
        assert overlap_frame_r4().spans_ambient


class TestClassify:
    def test_orthonormal_fusion_basis(self):
        cls = classify(orthobasis_frame_r3())
        assert cls.is_orthonormal_fusion_basis
        assert cls.is_riesz_fusion_basis
        assert cls.is_parseval

    def test_overlap_frame_not_riesz(self):
        cls = classify(overlap_frame_r4())
        assert cls.is_frame
        assert not cls.is_riesz_fusion_basis
        assert (cls.lower_bound, cls.upper_bound) == (1.0, 2.0)

    def test_single_full_member(self):
        w = fusion_frame([full_subspace(3)])
        cls = classify(w)
        assert cls.is_parseval and cls.is_riesz_fusion_basis
        assert not is_nontrivial(w)

    def test_parseval_implies_tight(self, rng):
        for _ in range(10):
            w = random_fusion_frame(rng, 4, 3, weighted=True)
            cls = classify(w)
            assert cls.lower_bound <= cls.upper_bound + 1e-12
            if cls.is_parseval:
                assert cls.is_tight
            if cls.is_orthonormal_fusion_basis:
                assert cls.is_riesz_fusion_basis


class TestCanonicalDual:
    def test_overlap_frame_fixed_point(self):
        w = overlap_frame_r4()
        dual = canonical_dual(w)
        for ws, vs in zip(w.subspaces, dual.subspaces):
            assert subspaces_equal(ws, vs)

    def test_parseval_fixed_point(self):
        w = orthobasis_frame_r3()
        dual = canonical_dual(w)
        for ws, vs in zip(w.subspaces, dual.subspaces):
            assert subspaces_equal(ws, vs)

    def test_counterexample_members_invariant(self):
        w = counterexample_frame()
        dual = canonical_dual(w)
        for ws, vs in zip(w.subspaces, dual.subspaces):
            assert subspaces_equal(ws, vs)

    def test_non_frame_rejected(self):
        with pytest.raises(ValueError, match="span"):
            canonical_dual(fusion_frame([coordinate_subspace(3, [1])]))

    def test_dimensions_preserved(self, rng):
        w = random_fusion_frame(rng, 5, 4, weighted=True)
        dual = canonical_dual(w)
        assert [s.dim for s in dual.subspaces] == [s.dim for s in w.subspaces]
        assert dual.weights == w.weights


class TestInvariants:
    def test_operator_positive_definite_iff_frame(self, rng):
        for _ in range(10):
            w = random_fusion_frame(rng, 4, 3)
            eigvals = np.linalg.eigvalsh(frame_operator(w))
            assert classify(w).is_frame == (eigvals[0] > 1e-9)

    def test_unitary_conjugation_of_operator(self, rng):
        from fusionframes import FusionFrame, image_subspace

        for _ in range(10):
            w = random_fusion_frame(rng, 4, 3, weighted=True)
            u = random_unitary(rng, 4)
            moved = FusionFrame(
                4, tuple(image_subspace(u, s) for s in w.subspaces), w.weights
            )
            assert np.abs(frame_operator(moved) - u @ frame_operator(w) @ u.T).max() < 1e-9

    def test_invertible_conjugation_under_member_invariance(self):
        # for maps whose Gram matrix leaves every member invariant, the
        # frame operator transforms by similarity
        from fusionframes import FusionFrame, image_subspace

        w = overlap_frame_r4()
        u = np.diag([1.0, 1.0, 1.0, 2.0])
        moved = FusionFrame(4, tuple(image_subspace(u, s) for s in w.subspaces), w.weights)
        expected = u @ frame_operator(w) @ np.linalg.inv(u)
        assert np.abs(frame_operator(moved) - expected).max() < 1e-9

    def test_double_canonical_of_parseval(self, rng):
        w = orthobasis_frame_r3()
        again = canonical_dual(canonical_dual(w))
        for ws, vs in zip(w.subspaces, again.subspaces):
            assert subspaces_equal(ws, vs)

    def test_canonical_dual_reconstructs(self, rng):
        for _ in range(10):
            w = random_fusion_frame(rng, int(rng.integers(3, 6)), int(rng.integers(2, 5)), weighted=True)
            pair = make_dual_pair(w, canonical_dual(w))
            assert pair.duality_residual < 1e-9

    def test_inflated_duals_reconstruct(self, rng):
        for _ in range(10):
            w = random_fusion_frame(rng, 4, 3)
            pair = make_dual_pair(w, inflated_dual(rng, w))
            assert pair.duality_residual < 1e-9


def test_riesz_constants_orthonormal_basis():
    lo, hi = riesz_constants(orthobasis_frame_r3())
    assert lo == pytest.approx(1.0)
    assert hi == pytest.approx(1.0)


def test_riesz_constants_overcomplete_lower_zero():
    lo, _ = riesz_constants(overlap_frame_r4())
    assert lo == pytest.approx(0.0, abs=1e-12)


def test_member_validation():
    with pytest.raises(ValueError, match="positive"):
        fusion_frame([full_subspace(2)], [0.0])
    with pytest.raises(ValueError, match="at least one"):
        fusion_frame([])
