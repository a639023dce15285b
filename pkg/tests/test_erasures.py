import itertools

import numpy as np
import pytest

from fusionframes import (
    ENUMERATION_CAP,
    ErasureMask,
    block_mask,
    bridge_dual_to_discrete,
    bridge_fusion_to_discrete,
    canonical_pair,
    coordinate_subspace,
    discrete_canonical_dual,
    discrete_error_operator,
    discrete_frame,
    discrete_worst_case,
    fusion_error_operator,
    fusion_frame,
    fusion_partial_error,
    halving_dual,
    make_dual_pair,
    matrix_norm,
    partial_erasure_error,
    transport_by_unitary,
    worst_case_error,
)
from helpers import (
    ORTHOBASIS_ALT_DUAL_BRIDGED,
    ORTHOBASIS_BRIDGED,
    OVERCOMPLETE_BRIDGED,
    SQRT54,
    inflated_dual,
    overlap_extended_dual,
    overlap_frame_r4,
    random_fusion_frame,
    random_unitary,
)


def subsets_by_bitmask(total: int, r: int):
    """Independent subset enumerator: binary counting instead of combinations."""
    for mask in range(1 << total):
        if mask.bit_count() == r:
            yield tuple(k + 1 for k in range(total) if mask >> k & 1)


class TestFusionErrorOperator:
    def test_empty_mask(self):
        pair = canonical_pair(overlap_frame_r4())
        err = fusion_error_operator(pair, ErasureMask(3, []))
        assert np.abs(err).max() == 0.0

    def test_full_mask_reconstructs(self):
        pair = canonical_pair(overlap_frame_r4())
        err = fusion_error_operator(pair, ErasureMask(3, [1, 2, 3]))
        assert np.abs(err - np.eye(4)).max() < 1e-12
        assert matrix_norm(err, "frobenius") == pytest.approx(2.0)

    def test_single_member_operator(self):
        pair = canonical_pair(overlap_frame_r4())
        err = fusion_error_operator(pair, ErasureMask(3, [1]))
        assert np.abs(err - np.diag([1.0, 0.5, 0.0, 0.0])).max() < 1e-12

    def test_out_of_range_index(self):
        with pytest.raises(ValueError, match="range"):
            ErasureMask(3, [4])


class TestWorstCase:
    def test_overlap_single_erasure(self):
        report = worst_case_error(canonical_pair(overlap_frame_r4()), 1, "frobenius")
        assert report.worst_value == pytest.approx(SQRT54, abs=1e-12)
        assert report.argmax_subsets == ((1,), (2,))

    def test_overlap_extended_dual_same_value(self, rng):
        w = overlap_frame_r4()
        for _ in range(3):
            v = overlap_extended_dual(rng.standard_normal(7))
            report = worst_case_error(make_dual_pair(w, v), 1, "frobenius")
            assert report.worst_value == pytest.approx(SQRT54, abs=1e-10)

    def test_pair_erasures_match_bruteforce(self, rng):
        for _ in range(5):
            w = random_fusion_frame(rng, 4, 5, weighted=True)
            pair = make_dual_pair(w, inflated_dual(rng, w))
            report = worst_case_error(pair, 2, "frobenius")
            oracle = max(
                fusion_partial_error(pair, ErasureMask(5, subset), "frobenius")
                for subset in itertools.combinations(range(1, 6), 2)
            )
            assert report.worst_value == pytest.approx(oracle, abs=1e-12)

    def test_r_out_of_range(self):
        pair = canonical_pair(overlap_frame_r4())
        with pytest.raises(ValueError, match="r must"):
            worst_case_error(pair, 3, "frobenius")
        with pytest.raises(ValueError, match="r must"):
            worst_case_error(pair, 0, "frobenius")

    def test_enumeration_cap_refusal(self):
        subs = [coordinate_subspace(2, [1 + k % 2]) for k in range(40)]
        w = fusion_frame(subs)
        with pytest.raises(ValueError, match="cap"):
            worst_case_error(canonical_pair(w), 20, "frobenius")
        assert ENUMERATION_CAP == 10**6

    def test_worst_dominates_each_subset(self, rng):
        w = random_fusion_frame(rng, 4, 4)
        pair = canonical_pair(w)
        report = worst_case_error(pair, 2, "operator")
        for subset, value in report.per_subset_values:
            assert value <= report.worst_value + 1e-12

    def test_table_is_lexicographic(self, rng):
        w = random_fusion_frame(rng, 3, 4)
        report = worst_case_error(canonical_pair(w), 2, "frobenius")
        subsets = [s for s, _ in report.per_subset_values]
        assert subsets == sorted(subsets)


class TestDiscreteErasures:
    def test_all_indices_reconstruct(self):
        f = discrete_frame(ORTHOBASIS_BRIDGED)
        err = discrete_error_operator(f, f, ErasureMask(5, range(1, 6)))
        assert np.abs(err - np.eye(3)).max() < 1e-12

    def test_final_vector_erasure(self):
        f = discrete_frame(OVERCOMPLETE_BRIDGED)
        g = discrete_canonical_dual(f)
        err = discrete_error_operator(f, g, ErasureMask(7, [7]))
        expected = np.zeros((3, 3))
        expected[2, 2] = 1.0
        assert np.abs(err - expected).max() < 1e-12
        assert matrix_norm(err, "operator") == pytest.approx(1.0)

    def test_zero_vector_erasure(self):
        w = overlap_frame_r4()
        f = bridge_fusion_to_discrete(w, np.eye(4), "canonical_weighted")
        g = bridge_dual_to_discrete(canonical_pair(w).dual_candidate, np.eye(4))
        zero_rows = [k + 1 for k in range(f.count) if np.linalg.norm(f.vectors[k]) == 0]
        assert zero_rows
        err = discrete_error_operator(f, g, ErasureMask(f.count, [zero_rows[0]]))
        assert np.abs(err).max() == 0.0

    def test_worst_single_erasure_at_final_vector(self):
        f = discrete_frame(OVERCOMPLETE_BRIDGED)
        g = discrete_canonical_dual(f)
        for kind in ("operator", "frobenius"):
            report = discrete_worst_case(f, g, 1, kind)
            assert report.worst_value == pytest.approx(1.0, abs=1e-12)
            assert report.argmax_subsets == ((7,),)

    def test_orthonormal_self_dual_all_ties(self):
        f = discrete_frame(np.eye(4))
        report = discrete_worst_case(f, f, 1, "operator")
        assert report.worst_value == pytest.approx(1.0)
        assert report.argmax_subsets == ((1,), (2,), (3,), (4,))

    def test_parseval_pair_unit_worst_error(self):
        f = discrete_frame(ORTHOBASIS_BRIDGED)
        g = discrete_frame(ORTHOBASIS_ALT_DUAL_BRIDGED)
        assert discrete_worst_case(f, f, 1, "operator").worst_value == pytest.approx(1.0, abs=1e-12)
        assert discrete_worst_case(f, g, 1, "operator").worst_value == pytest.approx(1.0, abs=1e-12)


class TestPartialErasure:
    def test_empty_set(self):
        f = discrete_frame(OVERCOMPLETE_BRIDGED)
        g = discrete_canonical_dual(f)
        assert partial_erasure_error(f, g, ErasureMask(7, []), "frobenius") == 0.0

    def test_halved_dual_beats_canonical_on_fixed_set(self):
        f = discrete_frame(OVERCOMPLETE_BRIDGED)
        canonical = discrete_canonical_dual(f)
        mask = ErasureMask(7, [2, 5])
        halved = halving_dual(f, [2, 5])
        value_c = partial_erasure_error(f, canonical, mask, "frobenius")
        value_h = partial_erasure_error(f, halved, mask, "frobenius")
        assert value_c > value_h
        assert value_c == pytest.approx(2.0 * value_h, rel=1e-9)

    def test_block_erasure_matches_fusion_value(self):
        # erase the whole third block of the bridged overlap frame
        w = overlap_frame_r4()
        pair = canonical_pair(w)
        f = bridge_fusion_to_discrete(w, np.eye(4), "canonical_weighted")
        g = bridge_dual_to_discrete(pair.dual_candidate, np.eye(4))
        mask = block_mask(f, 3)
        fusion_value = fusion_partial_error(pair, ErasureMask(3, [3]), "frobenius")
        assert fusion_value == pytest.approx(1.0, abs=1e-12)
        assert partial_erasure_error(f, g, mask, "frobenius") == pytest.approx(
            fusion_value, abs=1e-12
        )


class TestErasureProperties:
    def test_bridge_consistency_per_member(self, rng):
        for _ in range(10):
            n = int(rng.integers(3, 6))
            w = random_fusion_frame(rng, n, int(rng.integers(2, 5)), weighted=True)
            v = inflated_dual(rng, w)
            pair = make_dual_pair(w, v)
            basis = random_unitary(rng, n).T
            f = bridge_fusion_to_discrete(w, basis, "canonical_weighted")
            g = bridge_dual_to_discrete(v, basis)
            for i in range(1, w.member_count + 1):
                a = fusion_partial_error(pair, ErasureMask(w.member_count, [i]), "frobenius")
                b = partial_erasure_error(f, g, block_mask(f, i), "frobenius")
                assert a == pytest.approx(b, abs=1e-9)

    def test_unitary_invariance_of_all_values(self, rng):
        for _ in range(5):
            n = int(rng.integers(3, 6))
            m = int(rng.integers(2, 5))
            w = random_fusion_frame(rng, n, m, weighted=True)
            pair = make_dual_pair(w, inflated_dual(rng, w))
            moved = transport_by_unitary(pair, random_unitary(rng, n))
            for r in range(1, m):
                for kind in ("frobenius", "operator"):
                    for subset in itertools.combinations(range(1, m + 1), r):
                        mask = ErasureMask(m, subset)
                        a = fusion_partial_error(pair, mask, kind)
                        b = fusion_partial_error(moved, mask, kind)
                        assert a == pytest.approx(b, abs=1e-9)

    def test_enumeration_matches_independent_iterator(self, rng):
        for m, r in ((5, 2), (7, 3), (12, 2)):
            ours = list(itertools.combinations(range(1, m + 1), r))
            theirs = sorted(subsets_by_bitmask(m, r))
            assert ours == theirs
        w = random_fusion_frame(rng, 3, 5)
        pair = canonical_pair(w)
        report = worst_case_error(pair, 2, "frobenius")
        oracle = max(
            fusion_partial_error(pair, ErasureMask(5, s), "frobenius")
            for s in subsets_by_bitmask(5, 2)
        )
        assert report.worst_value == pytest.approx(oracle, abs=1e-12)


def test_mask_validation():
    with pytest.raises(ValueError, match="positive"):
        ErasureMask(0, [])
    mask = ErasureMask(5, [3, 1])
    assert mask.erased == frozenset({1, 3})
