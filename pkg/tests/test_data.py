"""Tests for CSV I/O, normalization, and the synthetic generator."""

import numpy as np
import pytest

from dmmd.data import (
    NormStats,
    SynthSpec,
    load_domain_csv,
    load_labels,
    normalize,
    save_domain_csv,
    save_labels,
    simplex_vertices,
    synth_shifted_gaussians,
)
from dmmd.errors import DataFormatError


class TestLoadDomainCsv:
    def test_two_row_file(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,0.5,0.25\n2,-0.5,0.75\n")
        x, y, info = load_domain_csv(f)
        assert x.shape == (2, 2)
        assert np.allclose(x[:, 0], [0.5, 0.25])
        assert np.allclose(x[:, 1], [-0.5, 0.75])
        assert np.array_equal(y, [1, 2])
        assert info.labeled and info.n == 2 and info.m == 2

    def test_unlabeled_sentinel(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("-1,1.0\n-1,2.0\n")
        x, y, info = load_domain_csv(f)
        assert np.array_equal(y, [-1, -1])
        assert not info.labeled

    def test_header_skipped(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("label,f1\n1,3.5\n")
        x, y, _ = load_domain_csv(f, has_header=True)
        assert x.shape == (1, 1) and y[0] == 1

    def test_ragged_row_names_row(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,0.5,0.25\n2,-0.5\n")
        with pytest.raises(DataFormatError, match="row 2"):
            load_domain_csv(f)

    def test_bad_cell_names_row_and_column(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,0.5,oops\n")
        with pytest.raises(DataFormatError, match="row 1, column 3"):
            load_domain_csv(f)

    def test_bad_labels(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1.5,0.5\n")
        with pytest.raises(DataFormatError, match="not an integer"):
            load_domain_csv(f)
        f.write_text("0,0.5\n")
        with pytest.raises(DataFormatError, match="must be >= 1"):
            load_domain_csv(f)

    def test_empty_file(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("")
        with pytest.raises(DataFormatError, match="no data rows"):
            load_domain_csv(f)

    def test_roundtrip_exact(self, tmp_path):
        rng = np.random.default_rng(80)
        x = rng.normal(size=(7, 11)) * np.exp(rng.normal(size=(7, 11)) * 5)
        y = rng.integers(1, 5, size=11)
        f = tmp_path / "d.csv"
        save_domain_csv(f, x, y)
        x2, y2, _ = load_domain_csv(f)
        assert np.array_equal(x, x2)
        assert np.array_equal(y, y2)

    def test_save_unlabeled_defaults_to_sentinel(self, tmp_path):
        f = tmp_path / "d.csv"
        save_domain_csv(f, np.ones((2, 3)))
        _, y, info = load_domain_csv(f)
        assert np.array_equal(y, [-1, -1, -1])
        assert not info.labeled


class TestLabelsIo:
    def test_roundtrip(self, tmp_path):
        f = tmp_path / "y.txt"
        save_labels(f, [3, 1, 2, 2])
        assert np.array_equal(load_labels(f), [3, 1, 2, 2])

    def test_sentinel_rejected(self, tmp_path):
        f = tmp_path / "y.txt"
        f.write_text("1\n-1\n")
        with pytest.raises(DataFormatError, match="row 2"):
            load_labels(f)

    def test_empty_rejected(self, tmp_path):
        f = tmp_path / "y.txt"
        f.write_text("\n")
        with pytest.raises(DataFormatError):
            load_labels(f)


class TestNormalize:
    def test_constant_feature_zeroed(self):
        x = np.vstack([np.full(5, 3.0), np.arange(5.0)])
        out, _ = normalize(x, mode="zscore")
        assert np.allclose(out[0], 0.0)

    def test_standardized_data_unchanged(self):
        rng = np.random.default_rng(81)
        x = rng.normal(size=(4, 200))
        once, _ = normalize(x, mode="zscore")
        twice, _ = normalize(once, mode="zscore")
        assert np.allclose(once, twice, atol=1e-10)

    def test_l2_mode_unit_columns(self):
        rng = np.random.default_rng(82)
        out, _ = normalize(rng.normal(size=(6, 9)), mode="zscore+l2")
        norms = np.linalg.norm(out, axis=0)
        assert np.allclose(norms, 1.0, atol=1e-12)

    def test_none_mode_identity(self):
        x = np.arange(6.0).reshape(2, 3)
        out, stats = normalize(x, mode="none")
        assert np.array_equal(out, x)
        assert np.allclose(stats.sigma, 1.0)

    def test_stats_reuse_consistency(self):
        rng = np.random.default_rng(83)
        x_s = rng.normal(size=(5, 12))
        x_t = rng.normal(size=(5, 8)) + 2.0
        joint = np.hstack([x_s, x_t])
        all_at_once, stats = normalize(joint, mode="zscore+l2")
        s_alone, _ = normalize(x_s, mode="zscore+l2", stats=stats)
        t_alone, _ = normalize(x_t, mode="zscore+l2", stats=stats)
        assert np.allclose(all_at_once[:, :12], s_alone, atol=1e-12)
        assert np.allclose(all_at_once[:, 12:], t_alone, atol=1e-12)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            normalize(np.ones((2, 2)), mode="minmax")


class TestSimplexVertices:
    def test_geometry(self):
        for c in (2, 3, 4, 6):
            v = simplex_vertices(c)
            assert v.shape == (c, c - 1)
            assert np.allclose(np.linalg.norm(v, axis=1), 1.0, atol=1e-12)
            assert np.allclose(v.sum(axis=0), 0.0, atol=1e-10)
            # pairwise equidistant
            dists = [
                np.linalg.norm(v[i] - v[j])
                for i in range(c)
                for j in range(i + 1, c)
            ]
            assert np.allclose(dists, dists[0], atol=1e-10)

    def test_single_class(self):
        assert simplex_vertices(1).shape == (1, 0)


class TestSynth:
    def test_default_shapes_and_labels(self):
        source, x_t, y_t = synth_shifted_gaussians(SynthSpec())
        assert source.x.shape == (20, 200)
        assert x_t.shape == (20, 200)
        assert np.array_equal(np.unique(source.y), [1, 2, 3, 4])
        assert np.array_equal(np.unique(y_t), [1, 2, 3, 4])
        assert all(np.count_nonzero(source.y == c) == 50 for c in range(1, 5))

    def test_deterministic_per_seed(self):
        a = synth_shifted_gaussians(SynthSpec(seed=3))
        b = synth_shifted_gaussians(SynthSpec(seed=3))
        assert np.array_equal(a[0].x, b[0].x)
        assert np.array_equal(a[1], b[1])
        assert np.array_equal(a[2], b[2])

    def test_seed_changes_data(self):
        a = synth_shifted_gaussians(SynthSpec(seed=1))
        b = synth_shifted_gaussians(SynthSpec(seed=2))
        assert not np.array_equal(a[0].x, b[0].x)

    def test_no_shift_keeps_class_means(self):
        spec = SynthSpec(
            c=2,
            m=2,
            n_per_class_source=200,
            n_per_class_target=200,
            domain_rotation_deg=0.0,
            domain_shift=0.0,
            seed=11,
        )
        source, x_t, y_t = synth_shifted_gaussians(spec)
        for c in (1, 2):
            mu_s = source.x[:, source.y == c].mean(axis=1)
            mu_t = x_t[:, y_t == c].mean(axis=1)
            bound = 4.0 * spec.noise_sigma / np.sqrt(200)
            assert np.linalg.norm(mu_s - mu_t) <= bound

    def test_class_means_near_specified(self):
        # per-coordinate 5-sigma band around the intended simplex means
        for seed in range(20):
            spec = SynthSpec(seed=seed)
            source, _, _ = synth_shifted_gaussians(spec)
            verts = simplex_vertices(spec.c) * spec.class_sep
            means = np.zeros((spec.c, spec.m))
            means[:, : spec.c - 1] = verts
            bound = 5.0 * spec.noise_sigma / np.sqrt(spec.n_per_class_source)
            for c in range(1, spec.c + 1):
                mu = source.x[:, source.y == c].mean(axis=1)
                assert np.abs(mu - means[c - 1]).max() <= bound

    def test_rotation_plus_shift_moves_target(self):
        source, x_t, y_t = synth_shifted_gaussians(SynthSpec())
        mu_s = source.x[:, source.y == 1].mean(axis=1)
        mu_t = x_t[:, y_t == 1].mean(axis=1)
        assert np.linalg.norm(mu_s - mu_t) > 1.0

    def test_invalid_specs(self):
        with pytest.raises(ValueError):
            SynthSpec(c=0)
        with pytest.raises(ValueError):
            SynthSpec(class_sep=0.0)
        with pytest.raises(ValueError):
            SynthSpec(c=5, m=3)
        with pytest.raises(ValueError):
            SynthSpec(n_per_class_source=0)
        with pytest.raises(ValueError):
            SynthSpec(noise_sigma=-0.1)
