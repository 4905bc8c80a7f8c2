"""End-to-end iterative adaptation: project, classify, refresh, repeat.

One run normalizes both domains jointly, seeds target pseudo-labels with
nearest-neighbor transfer, then alternates for a fixed number of
iterations between (a) learning a projection from the current pseudo
labels and (b) refreshing the pseudo labels by classifying in the
projected space.  No early stopping: the loop always runs ``t_iters``
rounds and reports per-iteration metrics.

Also here: the accuracy metric, a variant-comparison suite, and a small
exhaustive parameter search with deterministic tie-breaking.
"""

from __future__ import annotations

import dataclasses
import itertools
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .classify import (
    GRAPH_METRICS,
    argmax_labels,
    build_knn_graph,
    graph_laplacian,
    isolated_columns,
    one_hot,
    one_nn_classify,
    propagate_labels,
)
from .data import NORMALIZE_MODES, normalize
from .errors import UnusableLabelsError
from .objectives import (
    ABLATION_VARIANTS,
    assemble_ablation,
    assemble_baseline,
    assemble_strategy1,
    assemble_strategy2,
    learn_projection,
)
from .stats import LabeledData

STRATEGIES = ("baseline", "s1", "s2", "ablation")
CLASSIFIERS = ("glp", "one_nn")

# Search grids: 21 evenly spaced trade-off values and 9 balance values.
BETA_GRID = tuple(round(v / 10, 1) for v in range(-10, 11))
LAMBDA_GRID = tuple(round(v / 10, 1) for v in range(2, 11))

PRESETS = {
    "small": {"k": 20, "alpha": 0.05},
    "large": {"k": 100, "alpha": 0.1},
}


@dataclass(frozen=True)
class AdaptConfig:
    """Full configuration of one adaptation run.

    ``strategy`` picks the objective: ``baseline`` (marginal plus class
    discrepancies), ``s1`` (within-class trade-off ``beta``), ``s2``
    (inter-class balance ``lambda_``), or ``ablation`` (baseline plus
    explicit scatter terms chosen by ``ablation_variant``).
    """

    strategy: str = "s1"
    k: int = 20
    alpha: float = 0.05
    beta: float = 0.0
    lambda_: float = 0.8
    t_iters: int = 5
    p_neighbors: int = 20
    normalize: str = "zscore+l2"
    classifier: str = "glp"
    ridge: float = 0.0
    weight_mode: str = "product"
    seed: int = 0
    metric: str = "cosine"
    ablation_variant: str = "Both"
    gamma1: float = 0.01
    gamma2: float = 0.01

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(
                f"strategy must be one of {STRATEGIES}, got {self.strategy!r}"
            )
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.alpha < 0 or self.ridge < 0:
            raise ValueError("alpha and ridge must be >= 0")
        if self.t_iters < 1:
            raise ValueError(f"t_iters must be >= 1, got {self.t_iters}")
        if self.p_neighbors < 1:
            raise ValueError(f"p_neighbors must be >= 1, got {self.p_neighbors}")
        if self.normalize not in NORMALIZE_MODES:
            raise ValueError(
                f"normalize must be one of {NORMALIZE_MODES}, got "
                f"{self.normalize!r}"
            )
        if self.classifier not in CLASSIFIERS:
            raise ValueError(
                f"classifier must be one of {CLASSIFIERS}, got "
                f"{self.classifier!r}"
            )
        if self.weight_mode not in ("product", "sum"):
            raise ValueError(f"unknown weight_mode {self.weight_mode!r}")
        if self.metric not in GRAPH_METRICS:
            raise ValueError(
                f"metric must be one of {GRAPH_METRICS}, got {self.metric!r}"
            )
        if self.ablation_variant not in ABLATION_VARIANTS:
            raise ValueError(
                f"ablation_variant must be one of {ABLATION_VARIANTS}"
            )
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValueError("gamma values must be >= 0")
        if not -1.0 <= self.beta <= 1.0:
            warnings.warn(
                f"beta = {self.beta} outside the intended [-1, 1] range",
                stacklevel=3,
            )
        if not 0.0 <= self.lambda_ <= 1.0:
            warnings.warn(
                f"lambda_ = {self.lambda_} outside the intended [0, 1] range",
                stacklevel=3,
            )

    @classmethod
    def preset(cls, name: str, **overrides) -> "AdaptConfig":
        """Named defaults: ``small`` (k=20, alpha=0.05) for compact feature
        sets, ``large`` (k=100, alpha=0.1) for high-dimensional ones."""
        if name not in PRESETS:
            raise ValueError(f"preset must be one of {tuple(PRESETS)}, got {name!r}")
        merged = {**PRESETS[name], **overrides}
        return cls(**merged)


@dataclass(frozen=True)
class AdaptResult:
    """Outcome of one adaptation run.

    ``per_iteration`` has exactly ``t_iters`` records with keys
    iteration, accuracy (None without truth), objective, classes_skipped,
    implicit_weights, constraint_residual, ridge_used, isolated_targets.
    ``metadata`` carries run-level values such as the pre-adaptation
    nearest-neighbor accuracy (``init_accuracy``).  ``embedding`` is the
    unit-normalized projected joint matrix (k x (n_s + n_t)) from the
    final iteration, i.e. the coordinates the final labels came from.
    """

    final_labels: np.ndarray
    per_iteration: list[dict]
    config: AdaptConfig
    timing: float
    metadata: dict = field(default_factory=dict)
    embedding: np.ndarray | None = None


def evaluate_accuracy(pred, truth) -> float:
    """Fraction of positions where the two label vectors agree."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError(
            f"length mismatch: pred {pred.shape}, truth {truth.shape}"
        )
    return float(np.mean(pred == truth))


def _assemble(cfg: AdaptConfig, x_joint, y_s, pseudo):
    if cfg.strategy == "baseline":
        return assemble_baseline(x_joint, y_s, pseudo, cfg.alpha)
    if cfg.strategy == "s1":
        return assemble_strategy1(x_joint, y_s, pseudo, cfg.beta, cfg.alpha)
    if cfg.strategy == "s2":
        return assemble_strategy2(
            x_joint, y_s, pseudo, cfg.lambda_, cfg.alpha, cfg.weight_mode
        )
    return assemble_ablation(
        x_joint,
        y_s,
        pseudo,
        variant=cfg.ablation_variant,
        gamma1=cfg.gamma1,
        gamma2=cfg.gamma2,
        alpha=cfg.alpha,
    )


def _classify(cfg: AdaptConfig, z, y_s, c):
    n_s = y_s.size
    if cfg.classifier == "one_nn":
        labels = one_nn_classify(z[:, :n_s], y_s, z[:, n_s:], metric=cfg.metric)
        return labels, 0
    g = build_knn_graph(z, cfg.p_neighbors, metric=cfg.metric)
    l = graph_laplacian(g)
    f_t = propagate_labels(one_hot(y_s, c), l)
    labels = argmax_labels(f_t, warn_isolated=False)
    return labels, int(isolated_columns(f_t).size)


def adapt(
    source: LabeledData,
    target_x: np.ndarray,
    target_truth: np.ndarray | None,
    cfg: AdaptConfig,
) -> AdaptResult:
    """Run the full iterative adaptation loop.

    Parameters
    ----------
    source : LabeledData
        Labeled source domain; every class 1..C must be present.
    target_x : ndarray
        m x n_t unlabeled target features.
    target_truth : ndarray, optional
        When given, per-iteration accuracy is recorded (evaluation only;
        never fed back into the loop).
    cfg : AdaptConfig

    Raises
    ------
    UnusableLabelsError
        If a pseudo-label refresh leaves no class shared between domains
        (message names the iteration).
    """
    target_x = np.asarray(target_x, dtype=np.float64)
    if target_x.shape[0] != source.m:
        raise ValueError(
            f"feature dims differ: source {source.m}, target {target_x.shape[0]}"
        )
    missing = [
        c for c in range(1, source.c + 1) if not np.any(source.y == c)
    ]
    if missing:
        raise UnusableLabelsError(
            f"source labels must cover every class; missing {missing}"
        )
    if target_truth is not None:
        target_truth = np.asarray(target_truth, dtype=np.int64)
        if target_truth.size != target_x.shape[1]:
            raise ValueError("target_truth length must match target samples")

    t0 = time.perf_counter()
    n_s = source.n
    joint = np.hstack([source.x, target_x])
    joint_n, _ = normalize(joint, mode=cfg.normalize)
    x_s_n, x_t_n = joint_n[:, :n_s], joint_n[:, n_s:]

    pseudo = one_nn_classify(x_s_n, source.y, x_t_n, metric=cfg.metric)
    metadata = {
        "init_accuracy": (
            evaluate_accuracy(pseudo, target_truth)
            if target_truth is not None
            else None
        ),
        "n_classes": source.c,
    }

    per_iteration: list[dict] = []
    for t in range(1, cfg.t_iters + 1):
        try:
            asm = _assemble(cfg, joint_n, source.y, pseudo)
        except UnusableLabelsError as exc:
            raise UnusableLabelsError(
                f"iteration {t}: pseudo labels became unusable ({exc})"
            ) from exc
        proj = learn_projection(asm, cfg.k, cfg.ridge)
        z = proj.a.T @ joint_n
        z = z / np.maximum(np.linalg.norm(z, axis=0, keepdims=True), 1e-300)
        pseudo, isolated = _classify(cfg, z, source.y, source.c)
        per_iteration.append(
            {
                "iteration": t,
                "accuracy": (
                    evaluate_accuracy(pseudo, target_truth)
                    if target_truth is not None
                    else None
                ),
                "objective": float(np.sum(proj.theta)),
                "classes_skipped": list(asm.meta.get("classes_skipped", [])),
                "implicit_weights": dict(asm.meta.get("class_weights", {})),
                "constraint_residual": proj.constraint_residual,
                "ridge_used": proj.ridge_used,
                "isolated_targets": isolated,
            }
        )

    return AdaptResult(
        final_labels=pseudo,
        per_iteration=per_iteration,
        config=cfg,
        timing=time.perf_counter() - t0,
        metadata=metadata,
        embedding=z,
    )


ABLATION_ROWS = (
    ("MMD", {"strategy": "baseline"}),
    ("D_tra", {"strategy": "ablation", "ablation_variant": "Dtra"}),
    ("D_ter", {"strategy": "ablation", "ablation_variant": "Dter"}),
    ("D_tra+D_ter", {"strategy": "ablation", "ablation_variant": "Both"}),
    ("Our-I", {"strategy": "s1"}),
    ("Our-II", {"strategy": "s2"}),
)


def run_ablation_suite(
    source: LabeledData,
    target_x: np.ndarray,
    target_truth: np.ndarray | None,
    base_cfg: AdaptConfig,
) -> list[dict]:
    """Run every objective variant plus a classifier cross-comparison.

    Returns one row per configuration: the six named variants under
    ``base_cfg.classifier``, then the plain-vs-proposed strategies again
    under the other classifier.  Each row is a dict with keys ``row``,
    ``strategy``, ``classifier``, ``accuracy`` (None without truth), and
    ``result`` (the full AdaptResult).
    """
    rows = []
    for label, overrides in ABLATION_ROWS:
        cfg = dataclasses.replace(base_cfg, **overrides)
        res = adapt(source, target_x, target_truth, cfg)
        rows.append(
            {
                "row": label,
                "strategy": cfg.strategy,
                "classifier": cfg.classifier,
                "accuracy": res.per_iteration[-1]["accuracy"],
                "result": res,
            }
        )
    other = "one_nn" if base_cfg.classifier == "glp" else "glp"
    for label, overrides in (ABLATION_ROWS[0], ABLATION_ROWS[4], ABLATION_ROWS[5]):
        cfg = dataclasses.replace(base_cfg, classifier=other, **overrides)
        res = adapt(source, target_x, target_truth, cfg)
        rows.append(
            {
                "row": f"{label} ({other})",
                "strategy": cfg.strategy,
                "classifier": other,
                "accuracy": res.per_iteration[-1]["accuracy"],
                "result": res,
            }
        )
    return rows


def grid_search(
    source: LabeledData,
    target_x: np.ndarray,
    target_truth: np.ndarray,
    base_cfg: AdaptConfig,
    grid: list[tuple[str, list]],
) -> tuple[AdaptConfig, list[dict]]:
    """Exhaustive search over the cartesian product of parameter values.

    Selection needs ground truth (it ranks runs by final accuracy).  Ties
    keep the earliest grid point, so results do not depend on dict or
    float quirks.  Returns (best config, full table); table rows carry
    ``params``, ``accuracy``, and ``result``.
    """
    if target_truth is None:
        raise ValueError("grid_search requires target truth labels")
    if not grid or any(len(values) == 0 for _, values in grid):
        raise ValueError("grid must name at least one parameter with values")
    names = [name for name, _ in grid]
    table = []
    best_idx = -1
    best_acc = -1.0
    for idx, combo in enumerate(itertools.product(*(vals for _, vals in grid))):
        cfg = dataclasses.replace(base_cfg, **dict(zip(names, combo)))
        res = adapt(source, target_x, target_truth, cfg)
        acc = res.per_iteration[-1]["accuracy"]
        table.append(
            {"params": dict(zip(names, combo)), "accuracy": acc, "result": res}
        )
        if acc > best_acc:
            best_acc = acc
            best_idx = idx
    best_cfg = dataclasses.replace(base_cfg, **table[best_idx]["params"])
    return best_cfg, table
