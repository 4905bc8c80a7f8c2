"""Mean-discrepancy matrices, scatter matrices, and identity residuals.

This module owns the second-moment building blocks of the framework:

* rank-1 coefficient matrices whose quadratic form with the joint data
  matrix measures the squared distance between domain means (marginal or
  restricted to one class),
* total / within-class / between-class scatter matrices,
* the implicit per-class weight that ties the two together,
* residual functions that evaluate three exact decomposition identities
  numerically (they should return ~1e-16 on any input; the verification
  suite and tests assert <= 1e-10).

Samples are columns: a data matrix is m features x n samples, and labels
are 1-based integers so label ``c`` indexes class ``c`` directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ClassAbsentError
from .linalg import centering_matrix, trace_quadratic


@dataclass
class LabeledData:
    """Feature matrix (m x n, columns are samples) with 1-based labels.

    ``c`` is the number of classes; every label must lie in 1..c but a
    class may be empty (callers that need nonempty classes check).
    """

    x: np.ndarray
    y: np.ndarray
    c: int

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.x.ndim != 2:
            raise ValueError(f"x must be 2-D, got shape {self.x.shape}")
        if self.y.ndim != 1 or self.y.shape[0] != self.x.shape[1]:
            raise ValueError(
                f"y must have one label per column of x ({self.x.shape[1]}), "
                f"got shape {self.y.shape}"
            )
        if self.c < 1:
            raise ValueError(f"number of classes must be >= 1, got {self.c}")
        if self.y.size and (self.y.min() < 1 or self.y.max() > self.c):
            raise ValueError(
                f"labels must lie in 1..{self.c}, got range "
                f"[{self.y.min()}, {self.y.max()}]"
            )

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @property
    def m(self) -> int:
        return self.x.shape[0]

    def class_count(self, c: int) -> int:
        return int(np.count_nonzero(self.y == c))

    def class_columns(self, c: int) -> np.ndarray:
        return self.x[:, self.y == c]

    def class_mean(self, c: int, where: str = "data") -> np.ndarray:
        cols = self.class_columns(c)
        if cols.shape[1] == 0:
            raise ClassAbsentError(c, where)
        return cols.mean(axis=1)


@dataclass(frozen=True)
class MmdMatrix:
    """Order-(n_s + n_t) coefficient matrix for a squared mean discrepancy.

    ``label`` is None for the marginal (all-samples) matrix and the class
    index for a class-restricted one; ``counts`` holds the two sample
    counts that set the entry scales.
    """

    m: np.ndarray
    counts: tuple[int, int]
    label: int | None = None

    @property
    def kind(self) -> str:
        return "marginal" if self.label is None else "class"


@dataclass(frozen=True)
class ScatterSet:
    """Total, within-class, and between-class scatter of one labeled set."""

    s_v: np.ndarray
    s_w: np.ndarray
    s_b: np.ndarray


def build_m0(n_s: int, n_t: int) -> MmdMatrix:
    """Marginal mean-discrepancy matrix for n_s source then n_t target samples.

    The result is the outer product of the vector with entries 1/n_s on
    source positions and -1/n_t on target positions, so
    ``tr(A.T @ X @ M @ X.T @ A)`` equals the squared distance between the
    projected domain means.  Entries: 1/n_s^2 on source-source, 1/n_t^2
    on target-target, -1/(n_s*n_t) across.
    """
    if n_s < 1 or n_t < 1:
        raise ValueError(f"need at least one sample per domain, got ({n_s}, {n_t})")
    e = np.r_[np.full(n_s, 1.0 / n_s), np.full(n_t, -1.0 / n_t)]
    return MmdMatrix(m=np.outer(e, e), counts=(n_s, n_t))


def build_mc(y_s: np.ndarray, y_t: np.ndarray, c: int) -> MmdMatrix:
    """Class-restricted mean-discrepancy matrix over the joint sample order.

    Joint index order is all source samples followed by all target samples.
    Entries are nonzero only at class-c positions: 1/(n_s^c)^2 within the
    source block, 1/(n_t^c)^2 within the target block, -1/(n_s^c*n_t^c)
    across.

    Raises
    ------
    ClassAbsentError
        If class c has no samples in either domain; the weights are
        undefined at zero counts, and skip policy belongs to the caller.
    """
    y_s = np.asarray(y_s, dtype=np.int64)
    y_t = np.asarray(y_t, dtype=np.int64)
    n_s_c = int(np.count_nonzero(y_s == c))
    n_t_c = int(np.count_nonzero(y_t == c))
    if n_s_c == 0:
        raise ClassAbsentError(c, "source")
    if n_t_c == 0:
        raise ClassAbsentError(c, "target")
    e = np.zeros(y_s.size + y_t.size)
    e[: y_s.size][y_s == c] = 1.0 / n_s_c
    e[y_s.size :][y_t == c] = -1.0 / n_t_c
    return MmdMatrix(m=np.outer(e, e), counts=(n_s_c, n_t_c), label=c)


def scatter_total(x: np.ndarray) -> np.ndarray:
    """Total scatter ``sum_i (x_i - mean)(x_i - mean)^T`` of the columns of x."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] < 1:
        raise ValueError(f"x must be m x n with n >= 1, got shape {x.shape}")
    xc = x - x.mean(axis=1, keepdims=True)
    return xc @ xc.T


def scatter_within(d: LabeledData) -> np.ndarray:
    """Sum over classes of each class's own total scatter."""
    s = np.zeros((d.m, d.m))
    for c in range(1, d.c + 1):
        cols = d.class_columns(c)
        if cols.shape[1]:
            s += scatter_total(cols)
    return s


def scatter_between(d: LabeledData) -> np.ndarray:
    """Count-weighted scatter of class means about the global mean."""
    if d.n < 1:
        raise ValueError("need at least one sample")
    mean = d.x.mean(axis=1)
    s = np.zeros((d.m, d.m))
    for c in range(1, d.c + 1):
        n_c = d.class_count(c)
        if n_c:
            dev = d.class_mean(c) - mean
            s += n_c * np.outer(dev, dev)
    return s


def scatter_set(d: LabeledData) -> ScatterSet:
    """All three scatters of one labeled set, each from its own definition."""
    return ScatterSet(
        s_v=scatter_total(d.x), s_w=scatter_within(d), s_b=scatter_between(d)
    )


def pairwise_mean_outer(d: LabeledData, i: int, j: int) -> np.ndarray:
    """Rank-1 outer product of the difference between class-i and class-j means."""
    if i == j:
        raise ValueError(f"need two distinct classes, got i = j = {i}")
    dev = d.class_mean(i) - d.class_mean(j)
    return np.outer(dev, dev)


def implicit_weight(n_s_c: int, n_t_c: int) -> float:
    """Weight ``(n_s_c + n_t_c) / (n_s_c * n_t_c)`` carried by one class's
    scatter difference inside the class-restricted mean discrepancy."""
    if n_s_c < 1 or n_t_c < 1:
        raise ValueError(f"counts must be >= 1, got ({n_s_c}, {n_t_c})")
    return (n_s_c + n_t_c) / (n_s_c * n_t_c)


def nonempty_classes(d: LabeledData) -> list[int]:
    """Class indices with at least one sample, ascending."""
    return [c for c in range(1, d.c + 1) if d.class_count(c)]


def between_scatter_pairwise_residual(d: LabeledData, a: np.ndarray) -> float:
    """Residual of the pairwise expansion of the between-class scatter.

    Compares ``tr(A.T S_b A)`` with
    ``(1/n) * sum_{i<j} n_i n_j tr(A.T (m_i - m_j)(m_i - m_j)^T A)``
    over nonempty class pairs.  The two agree exactly in exact arithmetic;
    the return value is ``|lhs - rhs| / max(1, |lhs|)``.
    """
    lhs = trace_quadratic(a, scatter_between(d))
    rhs = 0.0
    present = nonempty_classes(d)
    for i, j in itertools.combinations(present, 2):
        n_i, n_j = d.class_count(i), d.class_count(j)
        rhs += n_i * n_j * trace_quadratic(a, pairwise_mean_outer(d, i, j))
    rhs /= d.n
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def scatter_decomposition_residual(d: LabeledData) -> float:
    """Residual of total = within + between scatter, in Frobenius norm.

    Returns ``||S_v - S_w - S_b||_F / max(1, ||S_v||_F)``; each scatter is
    computed from its own definition, so this is a real cross-check.
    """
    ss = scatter_set(d)
    num = np.linalg.norm(ss.s_v - ss.s_w - ss.s_b)
    return float(num / max(1.0, np.linalg.norm(ss.s_v)))


def classwise_mmd_scatter_residual(
    source: LabeledData, target: LabeledData, a: np.ndarray, c: int
) -> float:
    """Residual of the scatter form of the class-restricted mean discrepancy.

    The quadratic form of the class-c discrepancy matrix with the joint
    data equals the implicit weight times (pooled class-c total scatter
    minus the sum of the two per-domain class-c scatters), traced against
    any projection A.  Returns the relative difference of the two routes.

    Raises
    ------
    ClassAbsentError
        If class c is empty in either domain.
    """
    x_s_c = source.class_columns(c)
    x_t_c = target.class_columns(c)
    if x_s_c.shape[1] == 0:
        raise ClassAbsentError(c, "source")
    if x_t_c.shape[1] == 0:
        raise ClassAbsentError(c, "target")

    x_joint = np.hstack([source.x, target.x])
    mc = build_mc(source.y, target.y, c)
    lhs = trace_quadratic(a, x_joint @ mc.m @ x_joint.T)

    pooled = np.hstack([x_s_c, x_t_c])
    s_v_c = scatter_total(pooled)
    s_w_c = scatter_total(x_s_c) + scatter_total(x_t_c)
    w = implicit_weight(x_s_c.shape[1], x_t_c.shape[1])
    rhs = w * (trace_quadratic(a, s_v_c) - trace_quadratic(a, s_w_c))
    return abs(lhs - rhs) / max(1.0, abs(lhs))
