"""Similarity graph, label propagation, and the 1-NN baseline classifier.

Target labels are produced by propagating one-hot source labels through a
p-nearest-neighbor similarity graph built over the projected joint data:
the propagated scores are the stationary point of the quadratic smoothness
objective, obtained by one linear solve against the target-target block of
the graph Laplacian.  A plain nearest-neighbor classifier is provided for
comparison and for pseudo-label initialization.

Sample ordering everywhere is [all source, all target].
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

GRAPH_METRICS = ("cosine", "euclidean-gaussian")

# Relative default for the solve regularizer; see propagate_labels.
DEFAULT_EPS_FRACTION = 1e-9


@dataclass(frozen=True)
class SimilarityGraph:
    """Symmetric nonnegative weight matrix with zero diagonal."""

    w: np.ndarray
    p: int
    metric: str


def _cosine_similarity(z: np.ndarray) -> np.ndarray:
    # (1 + cos)/2 maps into [0, 1]; zero-norm columns get norm 1e-12 so
    # they produce similarity 0.5 instead of NaN.
    norms = np.maximum(np.linalg.norm(z, axis=0), 1e-12)
    cos = (z / norms).T @ (z / norms)
    return np.clip((1.0 + cos) / 2.0, 0.0, 1.0)


def _gaussian_similarity(z: np.ndarray) -> np.ndarray:
    sq = np.sum(z * z, axis=0)
    d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (z.T @ z), 0.0)
    n = z.shape[1]
    off = d2[~np.eye(n, dtype=bool)]
    bandwidth2 = max(float(np.median(off)), 1e-24) if off.size else 1.0
    return np.exp(-d2 / (2.0 * bandwidth2))


def build_knn_graph(
    z: np.ndarray, p: int, metric: str = "cosine"
) -> SimilarityGraph:
    """p-nearest-neighbor similarity graph over the columns of z.

    An edge i-j is kept when j is among i's p most similar points or vice
    versa (symmetrization by max); kept edges carry the similarity value,
    all others 0, and the diagonal is 0.  Selection is tie-inclusive:
    every point matching the p-th best similarity is kept, so equal points
    never drop edges on index order.

    Parameters
    ----------
    z : ndarray
        k x n matrix, columns are points.
    p : int
        Neighbor count, 1 <= p < n.
    metric : str
        ``"cosine"``: similarity (1 + cos angle)/2.  ``"euclidean-gaussian"``:
        ``exp(-d^2 / (2 h^2))`` with h^2 the median squared pairwise
        distance.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 2:
        raise ValueError(f"z must be 2-D, got shape {z.shape}")
    n = z.shape[1]
    if not 1 <= p < n:
        raise ValueError(f"p must satisfy 1 <= p < n = {n}, got {p}")
    if metric == "cosine":
        sim = _cosine_similarity(z)
    elif metric == "euclidean-gaussian":
        sim = _gaussian_similarity(z)
    else:
        raise ValueError(f"metric must be one of {GRAPH_METRICS}, got {metric!r}")

    ranked = sim - np.diag(np.full(n, np.inf))  # never pick self
    # p-th largest similarity per row; everything >= it is a neighbor
    kth = np.partition(ranked, n - p, axis=1)[:, n - p]
    keep = ranked >= kth[:, None]
    keep |= keep.T
    w = np.where(keep, sim, 0.0)
    np.fill_diagonal(w, 0.0)
    return SimilarityGraph(w=w, p=p, metric=metric)


def graph_laplacian(g: SimilarityGraph) -> np.ndarray:
    """Degree-minus-weight Laplacian ``diag(column sums of W) - W``."""
    w = np.asarray(g.w, dtype=np.float64)
    return np.diag(w.sum(axis=0)) - w


def one_hot(y: np.ndarray, c: int) -> np.ndarray:
    """C x n indicator matrix with a single 1 per column at row label-1."""
    y = np.asarray(y, dtype=np.int64)
    if y.size and (y.min() < 1 or y.max() > c):
        raise ValueError(f"labels must lie in 1..{c}")
    f = np.zeros((c, y.size))
    f[y - 1, np.arange(y.size)] = 1.0
    return f


def propagate_labels(
    f_s: np.ndarray, l: np.ndarray, eps: float | None = None
) -> np.ndarray:
    """Propagate source scores to target nodes through the graph Laplacian.

    With ``l`` partitioned by the source/target ordering into blocks
    ``[[l_ss, l_st], [l_ts, l_tt]]``, the returned target scores are
    ``-f_s @ l_st @ inv(l_tt + eps I)``, the stationary point of the
    propagation objective (identically ``f_s @ w_st @ inv(l_tt + eps I)``
    since the off-diagonal Laplacian block is the negated weight block).

    Parameters
    ----------
    f_s : ndarray
        C x n_s source score matrix (usually one-hot).
    l : ndarray
        Order n_st graph Laplacian.
    eps : float, optional
        Regularizer added to the target-target block before the solve.
        Defaults to ``1e-9 * mean(diag(l_tt))``; pass 0 to solve exactly.

    Raises
    ------
    NumericalError
        If the regularized target-target block is singular or the solve
        produces non-finite values; the message advises raising eps.
    """
    f_s = np.asarray(f_s, dtype=np.float64)
    l = np.asarray(l, dtype=np.float64)
    n_s = f_s.shape[1]
    n_t = l.shape[0] - n_s
    if n_t < 1:
        raise ValueError(
            f"laplacian order {l.shape[0]} leaves no target nodes after "
            f"{n_s} source nodes"
        )
    l_st = l[:n_s, n_s:]
    l_tt = l[n_s:, n_s:]
    if eps is None:
        eps = DEFAULT_EPS_FRACTION * float(np.mean(np.diag(l_tt)))
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    system = l_tt + eps * np.eye(n_t)
    try:
        # F_t solves F_t (l_tt + eps I) = -F_s l_st; transpose to use solve.
        f_t = np.linalg.solve(system.T, -(f_s @ l_st).T).T
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            "target-target Laplacian block is singular; pass eps > 0 to "
            "regularize the propagation solve"
        ) from exc
    if not np.all(np.isfinite(f_t)):
        raise NumericalError(
            "label propagation produced non-finite scores; raise eps"
        )
    return f_t


def isolated_columns(f_t: np.ndarray) -> np.ndarray:
    """Indices of all-zero score columns (targets no label mass reaches)."""
    return np.flatnonzero(np.all(np.asarray(f_t) == 0.0, axis=0))


def argmax_labels(f_t: np.ndarray, warn_isolated: bool = True) -> np.ndarray:
    """Per-column argmax as 1-based labels; ties go to the smallest class.

    All-zero columns (isolated targets) fall back to class 1; a warning is
    emitted unless the caller records them via ``isolated_columns``.
    """
    f_t = np.asarray(f_t, dtype=np.float64)
    labels = np.argmax(f_t, axis=0).astype(np.int64) + 1
    iso = isolated_columns(f_t)
    if iso.size and warn_isolated:
        warnings.warn(
            f"{iso.size} isolated target node(s) assigned class 1 by default",
            stacklevel=2,
        )
    return labels


def one_nn_classify(
    z_s: np.ndarray,
    y_s: np.ndarray,
    z_t: np.ndarray,
    metric: str = "cosine",
) -> np.ndarray:
    """Label each target column with its nearest source column's label.

    ``metric="cosine"`` ranks by cosine similarity; ``"euclidean"`` (or
    ``"euclidean-gaussian"``, which induces the same ordering) by
    distance.  Ties go to the lowest source index.
    """
    z_s = np.asarray(z_s, dtype=np.float64)
    z_t = np.asarray(z_t, dtype=np.float64)
    y_s = np.asarray(y_s, dtype=np.int64)
    if z_s.shape[1] < 1:
        raise ValueError("need at least one source sample")
    if z_s.shape[0] != z_t.shape[0]:
        raise ValueError(
            f"feature dims differ: source {z_s.shape[0]}, target {z_t.shape[0]}"
        )
    if metric == "cosine":
        ns = np.maximum(np.linalg.norm(z_s, axis=0), 1e-12)
        nt = np.maximum(np.linalg.norm(z_t, axis=0), 1e-12)
        score = (z_s / ns).T @ (z_t / nt)  # n_s x n_t, larger is closer
        nearest = np.argmax(score, axis=0)
    elif metric in ("euclidean", "euclidean-gaussian"):
        d2 = (
            np.sum(z_s * z_s, axis=0)[:, None]
            + np.sum(z_t * z_t, axis=0)[None, :]
            - 2.0 * (z_s.T @ z_t)
        )
        nearest = np.argmin(d2, axis=0)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    return y_s[nearest]
