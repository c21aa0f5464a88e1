import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from buseg import (
    BUParams,
    boundary_uncertainty,
    cross,
    dilate,
    dpt_transform,
    edt,
    erode,
    iterate,
    mask_to_prob,
    signed_distance_map,
    soft_label,
    square,
)

from oracles import dilate_bf, edt_bf, erode_bf, random_mask, sdm_bf

masks = hnp.arrays(
    np.uint8,
    hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=16),
    elements=st.integers(0, 1),
)


class TestSoftLabel:
    def test_two_valued_map(self):
        out = soft_label([[0, 1]], 0.9, 0.1)
        assert out.tolist() == [[0.1, 0.9]]

    def test_hard_label_degeneracy(self):
        rng = np.random.default_rng(0)
        m = random_mask(rng, (8, 8))
        assert (soft_label(m, 1.0, 0.0) == mask_to_prob(m)).all()

    def test_uniform_half(self):
        assert (soft_label([[0, 1], [1, 0]], 0.5, 0.5) == 0.5).all()

    @pytest.mark.parametrize("pfg,pbg", [(0.1, 0.9), (1.2, 0.0), (0.9, -0.1)])
    def test_constraint_violations(self, pfg, pbg):
        with pytest.raises(ValueError):
            soft_label([[0, 1]], pfg, pbg)


class TestBUParams:
    def test_balanced_requires_sum_one(self):
        with pytest.raises(ValueError, match="alpha\\+beta=1"):
            BUParams(0.8, 0.3)

    def test_balanced_requires_alpha_ge_beta(self):
        with pytest.raises(ValueError, match="alpha >= beta"):
            BUParams(0.4, 0.6)

    def test_unbalanced_allows_any_sum_in_range(self):
        BUParams(1.0, 1.0, mode="unbalanced")
        BUParams(0.0, 0.0, mode="unbalanced")
        BUParams(0.3, 0.9, mode="unbalanced")

    def test_range_checks(self):
        with pytest.raises(ValueError):
            BUParams(1.2, -0.2)
        with pytest.raises(ValueError):
            BUParams(0.9, 0.1, n_iter=0)
        with pytest.raises(ValueError):
            BUParams(0.9, 0.1, mode="other")


class TestBoundaryUncertainty:
    def test_worked_example_5x5(self):
        m = np.zeros((5, 5), np.uint8)
        m[1:4, 1:4] = 1
        out = boundary_uncertainty(m, BUParams(0.9, 0.1, 1))
        assert out[2, 2] == 1.0
        ring = [out[r, c] for r in range(1, 4) for c in range(1, 4) if (r, c) != (2, 2)]
        assert ring == [0.9] * 8
        frame = [
            out[r, c]
            for r in range(5)
            for c in range(5)
            if r in (0, 4) or c in (0, 4)
        ]
        assert frame == [0.1] * 16

    @given(masks, st.sampled_from(["square3", "cross3"]), st.integers(1, 2))
    @settings(max_examples=100, deadline=None)
    def test_hard_label_degeneracy(self, m, se_name, n):
        se = square(3) if se_name == "square3" else cross(3)
        params = BUParams(1.0, 0.0, n, se=se)
        assert (
            np.asarray(boundary_uncertainty(m, params)) == np.asarray(mask_to_prob(m))
        ).all()

    def test_unbalanced_extremes(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            m = random_mask(rng, (14, 14))
            for se, n in ((square(3), 1), (cross(3), 2)):
                up = BUParams(1.0, 1.0, n, se=se, mode="unbalanced")
                assert (
                    np.asarray(boundary_uncertainty(m, up))
                    == np.asarray(mask_to_prob(iterate(dilate, m, se, n)))
                ).all()
                down = BUParams(0.0, 0.0, n, se=se, mode="unbalanced")
                assert (
                    np.asarray(boundary_uncertainty(m, down))
                    == np.asarray(mask_to_prob(iterate(erode, m, se, n)))
                ).all()

    def test_band_assignment_matches_bruteforce_sets(self):
        rng = np.random.default_rng(22)
        for _ in range(20):
            m = random_mask(rng, (12, 12))
            d = dilate_bf(m, square(3))
            e = erode_bf(m, square(3))
            out = np.asarray(boundary_uncertainty(m, BUParams(0.7, 0.3, 1)))
            assert (out[e == 1] == 1.0).all()
            assert (out[(m == 1) & (e == 0)] == 0.7).all()
            assert (out[(d == 1) & (m == 0)] == 0.3).all()
            assert (out[d == 0] == 0.0).all()

    def test_locality_outside_bands(self):
        # pixels outside dilation \ erosion keep their hard-label value
        rng = np.random.default_rng(23)
        for _ in range(20):
            m = random_mask(rng, (12, 12))
            d = dilate_bf(m, square(3))
            e = erode_bf(m, square(3))
            out = np.asarray(boundary_uncertainty(m, BUParams(0.6, 0.4, 1)))
            untouched = (d == m) & (m == e)
            assert (out[untouched] == m[untouched]).all()

    def test_values_within_parameter_set(self):
        rng = np.random.default_rng(24)
        m = random_mask(rng, (10, 10))
        out = np.asarray(boundary_uncertainty(m, BUParams(0.8, 0.2, 1)))
        assert set(np.unique(out)) <= {0.0, 0.2, 0.8, 1.0}

    def test_exterior_band_grows_with_n(self):
        rng = np.random.default_rng(25)
        for _ in range(10):
            m = random_mask(rng, (16, 16), density=0.3)
            prev = None
            for n in (1, 2, 3):
                out = np.asarray(boundary_uncertainty(m, BUParams(0.9, 0.1, n)))
                band = out == 0.1
                if prev is not None:
                    assert (band | ~prev).all()  # prev is a subset of band
                prev = band


class TestEdt:
    def test_1d_example(self):
        assert edt([[0, 0, 1, 0, 0]]).tolist() == [[2.0, 1.0, 0.0, 1.0, 2.0]]

    def test_diagonal_distances(self):
        m = np.zeros((3, 3), np.uint8)
        m[0, 0] = 1
        d = edt(m)
        assert d[1, 1] == pytest.approx(np.sqrt(2.0), abs=1e-12)
        assert d[2, 2] == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-12)

    def test_all_ones_is_zero(self):
        assert not edt(np.ones((4, 5), np.uint8)).any()

    def test_empty_mask_rejected(self):
        with pytest.raises(ValueError):
            edt(np.zeros((3, 3), np.uint8))

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(31)
        for _ in range(60):
            m = random_mask(rng, (24, 24), density=rng.uniform(0.05, 0.9))
            if not m.any():
                m[0, 0] = 1
            assert np.abs(np.asarray(edt(m)) - edt_bf(m)).max() <= 1e-9

    def test_narrow_grids(self):
        for shape in [(1, 1), (1, 7), (7, 1), (2, 2)]:
            m = np.zeros(shape, np.uint8)
            m[tuple(s - 1 for s in shape)] = 1
            assert np.abs(np.asarray(edt(m)) - edt_bf(m)).max() <= 1e-9


class TestSignedDistanceMap:
    def test_1d_example(self):
        out = signed_distance_map([[0, 0, 1, 0, 0]])
        assert out.tolist() == [[1.0, 0.0, 0.0, 0.0, 1.0]]

    def test_all_boundary_is_zero(self):
        assert not signed_distance_map([[1, 1], [0, 0]]).any()

    def test_degenerate_masks_rejected(self):
        with pytest.raises(ValueError):
            signed_distance_map(np.ones((3, 3), np.uint8))
        with pytest.raises(ValueError):
            signed_distance_map(np.zeros((3, 3), np.uint8))

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(32)
        for _ in range(40):
            m = random_mask(rng, (16, 16))
            if not m.any() or m.all():
                continue
            assert np.abs(np.asarray(signed_distance_map(m)) - sdm_bf(m)).max() <= 1e-9

    def test_antisymmetric_under_complement(self):
        rng = np.random.default_rng(33)
        for _ in range(40):
            m = random_mask(rng, (14, 14))
            if not m.any() or m.all():
                continue
            a = np.asarray(signed_distance_map(m))
            b = np.asarray(signed_distance_map(1 - m))
            assert (a == -b).all()

    def test_sign_convention(self):
        m = np.zeros((7, 7), np.uint8)
        m[2:5, 2:5] = 1
        out = signed_distance_map(m)
        assert out[3, 3] < 0  # deep inside
        assert out[0, 0] > 0  # far outside


class TestDptTransform:
    def test_first_element_is_hard_labels(self):
        rng = np.random.default_rng(34)
        m = random_mask(rng, (9, 9))
        m[0, 0], m[1, 1] = 1, 0
        probs, _ = dpt_transform(m)
        assert (probs == mask_to_prob(m)).all()

    def test_second_element_is_signed_map(self):
        m = np.zeros((5, 5), np.uint8)
        m[2, 2] = 1
        _, sdm = dpt_transform(m)
        assert (sdm == np.asarray(signed_distance_map(m))).all()

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            dpt_transform(np.ones((3, 3), np.uint8))
