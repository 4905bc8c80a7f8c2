"""Tests for Laplacian builders and the class-discrepancy matrix oracle."""

import itertools

import numpy as np
import pytest

from dmmd.errors import ClassAbsentError
from dmmd.laplacians import (
    build_class_set,
    build_interclass,
    class_set_discrepancy_gap,
    domain_between_laplacian,
    domain_within_laplacian,
    embed_class_laplacian,
    variance_laplacian_star,
    within_laplacian_star,
)
from dmmd.linalg import trace_quadratic
from dmmd.stats import (
    LabeledData,
    build_mc,
    pairwise_mean_outer,
    scatter_between,
    scatter_total,
    scatter_within,
)


class TestStarBuilders:
    def test_variance_star_small(self):
        assert np.array_equal(variance_laplacian_star(1), [[0.0]])
        assert np.allclose(variance_laplacian_star(2), [[0.5, -0.5], [-0.5, 0.5]])

    def test_variance_star_quadratic_form(self):
        rng = np.random.default_rng(30)
        x = rng.normal(size=(3, 6))
        got = x @ variance_laplacian_star(6) @ x.T
        assert np.allclose(got, scatter_total(x), atol=1e-12)

    def test_within_star_singletons_vanish(self):
        assert np.array_equal(within_laplacian_star(1, 1), np.zeros((2, 2)))

    def test_within_star_two_one(self):
        want = [[0.5, -0.5, 0.0], [-0.5, 0.5, 0.0], [0.0, 0.0, 0.0]]
        assert np.allclose(within_laplacian_star(2, 1), want)

    def test_within_star_quadratic_form(self):
        rng = np.random.default_rng(31)
        x = rng.normal(size=(4, 5))  # 3 source-class + 2 target-class columns
        got = x @ within_laplacian_star(3, 2) @ x.T
        want = scatter_total(x[:, :3]) + scatter_total(x[:, 3:])
        assert np.allclose(got, want, atol=1e-12)

    def test_adjacency_minus_degree_is_negated_scaled_centering(self):
        got = within_laplacian_star(2, 3, form="adjacency-minus-degree")
        want = np.zeros((5, 5))
        want[:2, :2] = -(1.0 / 2.0) * variance_laplacian_star(2)
        want[2:, 2:] = -(1.0 / 3.0) * variance_laplacian_star(3)
        assert np.allclose(got, want, atol=1e-12)

    def test_bad_args(self):
        with pytest.raises(ValueError):
            within_laplacian_star(0, 1)
        with pytest.raises(ValueError):
            within_laplacian_star(1, 1, form="nope")


class TestEmbedding:
    def test_identity_embedding(self):
        l_star = np.array([[2.0, -1.0], [-1.0, 2.0]])
        got = embed_class_laplacian(l_star, [1], [1], 1)
        assert np.array_equal(got, l_star)

    def test_index_bookkeeping(self):
        got = embed_class_laplacian(np.ones((2, 2)), [2, 1], [1], 1)
        # class-1 samples sit at global rows 1 (source) and 2 (target)
        want = np.zeros((3, 3))
        want[np.ix_([1, 2], [1, 2])] = 1.0
        assert np.array_equal(got, want)

    def test_order_mismatch_rejected(self):
        with pytest.raises(ValueError):
            embed_class_laplacian(np.ones((3, 3)), [1], [1], 1)


class TestBuildClassSet:
    def test_hand_case(self):
        cs = build_class_set([1], [1], 1)
        assert cs.weight == pytest.approx(2.0)
        assert np.allclose(cs.l_v, [[0.5, -0.5], [-0.5, 0.5]])
        assert np.array_equal(cs.l_w, np.zeros((2, 2)))
        want = np.array([[1.0, -1.0], [-1.0, 1.0]])
        assert np.allclose(cs.weight * (cs.l_v - cs.l_w), want, atol=1e-15)

    def test_matrix_identity_random_labels(self):
        rng = np.random.default_rng(32)
        for _ in range(25):
            c_total = int(rng.integers(1, 6))
            y_s = rng.integers(1, c_total + 1, size=int(rng.integers(1, 30)))
            y_t = rng.integers(1, c_total + 1, size=int(rng.integers(1, 30)))
            for c in sorted(set(y_s.tolist()) & set(y_t.tolist())):
                cs = build_class_set(y_s, y_t, c)
                mc = build_mc(y_s, y_t, c)
                assert class_set_discrepancy_gap(cs, mc) <= 1e-12

    def test_zero_row_sums_and_support(self):
        y_s = np.array([1, 2, 1, 3])
        y_t = np.array([3, 1, 1])
        cs = build_class_set(y_s, y_t, 1)
        for mat in (cs.l_v, cs.l_w):
            assert np.allclose(mat.sum(axis=1), 0.0, atol=1e-12)
            assert np.array_equal(mat, mat.T)
        # rows of non-class samples are identically zero
        outside = [1, 3, 4]  # global indices of classes 2 and 3
        assert np.allclose(cs.l_v[outside], 0.0)
        assert np.allclose(cs.l_w[outside], 0.0)

    def test_absent_class_raises(self):
        with pytest.raises(ClassAbsentError):
            build_class_set([1, 1], [2], 1)
        with pytest.raises(ClassAbsentError):
            build_class_set([2], [1, 1], 1)

    def test_uncorrected_form_breaks_identity(self):
        # The degree-difference construction cannot reproduce the class
        # discrepancy matrix; the gap is order 1 for small counts.
        y_s, y_t = [1, 1], [1]
        cs = build_class_set(y_s, y_t, 1, form="adjacency-minus-degree")
        mc = build_mc(y_s, y_t, 1)
        assert class_set_discrepancy_gap(cs, mc) > 0.1


class TestInterclass:
    def test_product_mode_matches_mean_gap(self):
        # one point per class at -1 and +1: squared mean distance is 4
        x = np.array([[-1.0, 1.0]])
        ic = build_interclass([1, 2], "source", 1, 2, n_st=2, offset=0)
        got = trace_quadratic(np.eye(1), x @ ic.l_b @ x.T)
        assert got == pytest.approx(4.0, abs=1e-12)

    def test_identical_means_give_zero_form(self):
        x = np.array([[1.0, 3.0, 2.0, 2.0]])  # class means both 2
        ic = build_interclass([1, 1, 2, 2], "source", 1, 2, n_st=4, offset=0)
        got = x @ ic.l_b @ x.T
        assert np.allclose(got, 0.0, atol=1e-12)

    def test_sum_mode_weight_is_one(self):
        ic = build_interclass(
            [1, 1, 2], "source", 1, 2, n_st=3, offset=0, weight_mode="sum"
        )
        assert ic.weight == 1.0

    def test_product_mode_random_oracle(self):
        rng = np.random.default_rng(33)
        for _ in range(10):
            c_total = 3
            n = int(rng.integers(c_total, 20))
            y = np.r_[np.arange(1, c_total + 1), rng.integers(1, c_total + 1, n - c_total)]
            x = rng.normal(size=(5, n))
            d = LabeledData(x=x, y=y, c=c_total)
            a = rng.normal(size=(5, 2))
            for i, j in itertools.combinations(range(1, c_total + 1), 2):
                ic = build_interclass(y, "source", i, j, n_st=n, offset=0)
                got = trace_quadratic(a, x @ ic.l_b @ x.T)
                want = trace_quadratic(a, pairwise_mean_outer(d, i, j))
                assert got == pytest.approx(want, rel=1e-10, abs=1e-10)

    def test_pairwise_sum_reconstructs_between_scatter(self):
        rng = np.random.default_rng(34)
        c_total, n = 4, 25
        y = np.r_[np.arange(1, c_total + 1), rng.integers(1, c_total + 1, n - c_total)]
        x = rng.normal(size=(6, n))
        d = LabeledData(x=x, y=y, c=c_total)
        a = rng.normal(size=(6, 3))
        acc = 0.0
        for i, j in itertools.combinations(range(1, c_total + 1), 2):
            n_i, n_j = d.class_count(i), d.class_count(j)
            ic = build_interclass(y, "source", i, j, n_st=n, offset=0)
            acc += n_i * n_j * trace_quadratic(a, x @ ic.l_b @ x.T) / n
        want = trace_quadratic(a, scatter_between(d))
        assert acc == pytest.approx(want, rel=1e-8, abs=1e-8)

    def test_offset_embedding_and_row_sums(self):
        ic = build_interclass([1, 2], "target", 1, 2, n_st=5, offset=3)
        assert np.allclose(ic.l_b[:3], 0.0)
        assert np.allclose(ic.l_b[:, :3], 0.0)
        assert np.allclose(ic.l_b.sum(axis=1), 0.0, atol=1e-12)
        assert ic.domain == "target"

    def test_errors(self):
        with pytest.raises(ClassAbsentError):
            build_interclass([1, 1], "source", 1, 2, n_st=2, offset=0)
        with pytest.raises(ValueError):
            build_interclass([1, 2], "source", 1, 1, n_st=2, offset=0)
        with pytest.raises(ValueError):
            build_interclass([1, 2], "elsewhere", 1, 2, n_st=2, offset=0)
        with pytest.raises(ValueError):
            # offset pushes indices past the joint order
            build_interclass([1, 2], "target", 1, 2, n_st=2, offset=1)


class TestDomainLaplacians:
    def test_within_matches_scatter_oracle(self):
        rng = np.random.default_rng(35)
        y_s = rng.integers(1, 4, size=12)
        y_t = rng.integers(1, 4, size=9)
        x = rng.normal(size=(5, 21))
        got = x @ domain_within_laplacian(y_s, y_t) @ x.T
        s = LabeledData(x=x[:, :12], y=y_s, c=3)
        t = LabeledData(x=x[:, 12:], y=y_t, c=3)
        want = scatter_within(s) + scatter_within(t)
        assert np.allclose(got, want, atol=1e-10)

    def test_between_matches_scatter_oracle(self):
        rng = np.random.default_rng(36)
        y_s = rng.integers(1, 4, size=11)
        y_t = rng.integers(1, 4, size=8)
        x = rng.normal(size=(4, 19))
        got = x @ domain_between_laplacian(y_s, y_t) @ x.T
        s = LabeledData(x=x[:, :11], y=y_s, c=3)
        t = LabeledData(x=x[:, 11:], y=y_t, c=3)
        want = scatter_between(s) + scatter_between(t)
        assert np.allclose(got, want, atol=1e-10)

    def test_zero_row_sums(self):
        y_s, y_t = [1, 2, 1], [2, 1]
        for mat in (domain_within_laplacian(y_s, y_t), domain_between_laplacian(y_s, y_t)):
            assert np.allclose(mat.sum(axis=1), 0.0, atol=1e-12)
            assert np.array_equal(mat, mat.T)
