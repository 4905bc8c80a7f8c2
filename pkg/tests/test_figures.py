"""Tests for PNG report rendering (files only, Agg backend)."""

import json

import numpy as np

from dmmd.cli import main
from dmmd.figures import (
    save_ablation_bars,
    save_benchmark_bars,
    save_embedding_scatter,
    save_iteration_curves,
)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def is_png(path):
    return path.is_file() and path.read_bytes()[:8] == PNG_MAGIC


def fake_iterations(with_truth=True):
    return [
        {"iteration": t, "accuracy": 0.5 + 0.1 * t if with_truth else None,
         "objective": 1.0 / t}
        for t in (1, 2, 3)
    ]


class TestRenderers:
    def test_iteration_curves(self, tmp_path):
        p = save_iteration_curves(
            fake_iterations(), tmp_path / "it.png", init_accuracy=0.4
        )
        assert is_png(p)

    def test_iteration_curves_without_truth(self, tmp_path):
        p = save_iteration_curves(fake_iterations(False), tmp_path / "it.png")
        assert is_png(p)

    def test_ablation_bars_with_missing_accuracy(self, tmp_path):
        rows = [
            {"row": "MMD", "accuracy": 0.7},
            {"row": "Our-I", "accuracy": None},
        ]
        assert is_png(save_ablation_bars(rows, tmp_path / "abl.png"))

    def test_embedding_scatter_2d(self, tmp_path):
        rng = np.random.default_rng(0)
        p = save_embedding_scatter(
            rng.normal(size=(2, 10)),
            rng.integers(1, 3, 10),
            rng.normal(size=(2, 8)),
            tmp_path / "emb.png",
            y_t=rng.integers(1, 3, 8),
        )
        assert is_png(p)

    def test_embedding_scatter_1d_padded(self, tmp_path):
        rng = np.random.default_rng(1)
        p = save_embedding_scatter(
            rng.normal(size=(1, 6)),
            rng.integers(1, 3, 6),
            rng.normal(size=(1, 5)),
            tmp_path / "emb.png",
        )
        assert is_png(p)

    def test_benchmark_bars(self, tmp_path):
        rows = [{"name": "t1", "accuracy": 0.9}, {"name": "t2", "accuracy": None}]
        assert is_png(save_benchmark_bars(rows, tmp_path / "b.png"))

    def test_creates_missing_directory(self, tmp_path):
        p = save_benchmark_bars(
            [{"name": "x", "accuracy": 0.5}], tmp_path / "deep" / "dir" / "b.png"
        )
        assert is_png(p)


class TestCliFiguresFlag:
    def test_adapt_renders_two_figures(self, tmp_path):
        src, tgt, truth = (tmp_path / n for n in ("s.csv", "t.csv", "y.csv"))
        assert main(
            ["synth", "--classes", "2", "--features", "4", "--n-source", "8",
             "--n-target", "8", "--seed", "5",
             "--out-source", str(src), "--out-target", str(tgt),
             "--out-truth", str(truth)]
        ) == 0
        figs = tmp_path / "figs"
        code = main(
            ["adapt", "--source", str(src), "--target", str(tgt),
             "--truth", str(truth), "--strategy", "s1", "--T", "1",
             "--p", "4", "--k", "2", "--out", str(tmp_path / "r.json"),
             "--figures", str(figs)]
        )
        assert code == 0
        assert is_png(figs / "adapt_iterations.png")
        assert is_png(figs / "adapt_embedding.png")
        assert json.loads((tmp_path / "r.json").read_text())["schema_version"] == 1
