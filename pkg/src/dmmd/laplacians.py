"""Graph-style Laplacian pieces whose data quadratic forms are scatters.

Each builder here returns a coefficient matrix L such that ``X @ L @ X.T``
equals a specific scatter of the columns of X: the pooled total scatter of
one class across both domains, the per-domain within-class scatter, or an
inter-class difference term.  Embedding helpers place the small per-class
matrices into the full joint frame (all source samples first, then all
target samples; within a class, source samples precede target samples,
each in original order).

The load-bearing invariant, checked by ``build_class_set`` and asserted in
tests, is that for every class present in both domains

    weight * (l_v - l_w) == class mean-discrepancy matrix (elementwise),

with weight = (n_s^c + n_t^c)/(n_s^c * n_t^c).  This only holds when the
within piece is built as a block centering; the degree-difference variant
kept behind ``form="adjacency-minus-degree"`` is a negatively scaled block
centering that breaks the identity and exists for inspection only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ClassAbsentError
from .linalg import centering_matrix
from .stats import MmdMatrix, build_mc, implicit_weight

WITHIN_FORMS = ("centered", "adjacency-minus-degree")
DOMAINS = ("source", "target")


@dataclass(frozen=True)
class ClassLaplacianSet:
    """Embedded variance/within Laplacian pair for one class, plus its weight.

    ``weight * (l_v - l_w)`` reproduces the class mean-discrepancy matrix
    elementwise; both members are order n_st with nonzeros only at class-c
    sample indices.
    """

    c: int
    l_v: np.ndarray
    l_w: np.ndarray
    weight: float


@dataclass(frozen=True)
class InterClassLaplacian:
    """Embedded inter-class difference Laplacian for one domain's class pair.

    With product weighting, ``X @ l_b @ X.T`` equals the outer product of
    the class-i and class-j mean difference within that domain.
    """

    domain: str
    i: int
    j: int
    l_b: np.ndarray
    weight: float


def variance_laplacian_star(n_st_c: int) -> np.ndarray:
    """Compact (unembedded) Laplacian of one class's pooled total scatter.

    This is simply the order-n centering matrix: ``X @ L @ X.T`` over the
    pooled class-c columns equals their total scatter.
    """
    return centering_matrix(n_st_c)


def within_laplacian_star(
    n_s_c: int, n_t_c: int, form: str = "centered"
) -> np.ndarray:
    """Compact Laplacian of one class's per-domain within scatter.

    Parameters
    ----------
    n_s_c, n_t_c : int
        Class-c sample counts in source and target; both >= 1.
    form : str
        ``"centered"`` (default) returns
        ``blockdiag(centering(n_s_c), centering(n_t_c))``, which satisfies
        ``X @ L @ X.T = per-domain class scatter sum`` exactly and makes
        the class discrepancy identity hold.  ``"adjacency-minus-degree"``
        builds the matrix as (constant-block adjacency with entries
        1/count^2) minus (its row-sum diagonal); this evaluates to the
        negated, 1/count-scaled block centering and does not satisfy the
        identity.  It exists so the uncorrected construction can be
        inspected; nothing in the pipeline uses it.
    """
    if n_s_c < 1 or n_t_c < 1:
        raise ValueError(f"counts must be >= 1, got ({n_s_c}, {n_t_c})")
    if form not in WITHIN_FORMS:
        raise ValueError(f"form must be one of {WITHIN_FORMS}, got {form!r}")
    if form == "centered":
        return scipy.linalg.block_diag(
            centering_matrix(n_s_c), centering_matrix(n_t_c)
        )
    n = n_s_c + n_t_c
    adjacency = np.zeros((n, n))
    adjacency[:n_s_c, :n_s_c] = 1.0 / (n_s_c * n_s_c)
    adjacency[n_s_c:, n_s_c:] = 1.0 / (n_t_c * n_t_c)
    return adjacency - np.diag(adjacency.sum(axis=1))


def embed_class_laplacian(
    l_star: np.ndarray, y_s: np.ndarray, y_t: np.ndarray, c: int
) -> np.ndarray:
    """Scatter a compact class-c matrix into the order-n_st joint frame.

    Row/column p' of ``l_star`` corresponds to the p'-th class-c sample in
    the order [source-c samples, target-c samples]; all other entries of
    the output are zero.
    """
    y_s = np.asarray(y_s, dtype=np.int64)
    y_t = np.asarray(y_t, dtype=np.int64)
    l_star = np.asarray(l_star, dtype=np.float64)
    src_idx = np.flatnonzero(y_s == c)
    tgt_idx = np.flatnonzero(y_t == c) + y_s.size
    idx = np.r_[src_idx, tgt_idx]
    if l_star.shape != (idx.size, idx.size):
        raise ValueError(
            f"l_star order {l_star.shape} does not match the {idx.size} "
            f"class-{c} samples"
        )
    out = np.zeros((y_s.size + y_t.size,) * 2)
    out[np.ix_(idx, idx)] = l_star
    return out


def build_class_set(
    y_s: np.ndarray, y_t: np.ndarray, c: int, form: str = "centered"
) -> ClassLaplacianSet:
    """Embedded variance/within pair and weight for class c.

    Raises
    ------
    ClassAbsentError
        If class c is missing from either label vector.
    """
    y_s = np.asarray(y_s, dtype=np.int64)
    y_t = np.asarray(y_t, dtype=np.int64)
    n_s_c = int(np.count_nonzero(y_s == c))
    n_t_c = int(np.count_nonzero(y_t == c))
    if n_s_c == 0:
        raise ClassAbsentError(c, "source")
    if n_t_c == 0:
        raise ClassAbsentError(c, "target")
    l_v = embed_class_laplacian(
        variance_laplacian_star(n_s_c + n_t_c), y_s, y_t, c
    )
    l_w = embed_class_laplacian(
        within_laplacian_star(n_s_c, n_t_c, form=form), y_s, y_t, c
    )
    return ClassLaplacianSet(
        c=c, l_v=l_v, l_w=l_w, weight=implicit_weight(n_s_c, n_t_c)
    )


def class_set_discrepancy_gap(cs: ClassLaplacianSet, mc: MmdMatrix) -> float:
    """Max elementwise gap between ``weight * (l_v - l_w)`` and the class
    discrepancy matrix; ~0 for the centered form."""
    return float(np.abs(cs.weight * (cs.l_v - cs.l_w) - mc.m).max())


def build_interclass(
    d_labels: np.ndarray,
    domain: str,
    i: int,
    j: int,
    n_st: int,
    offset: int,
    weight_mode: str = "product",
) -> InterClassLaplacian:
    """Embedded inter-class difference Laplacian for classes i, j of one domain.

    The compact matrix is ``centering(n_i + n_j) - blockdiag(centering(n_i),
    centering(n_j))``, scaled by the weight and embedded at the domain's
    global indices (``offset`` is 0 for source, n_s for target).

    Parameters
    ----------
    weight_mode : str
        ``"product"`` uses ``(n_i + n_j)/(n_i * n_j)``, which makes the
        data quadratic form equal the squared distance between the two
        class means.  ``"sum"`` uses the constant 1 (pooled count divided
        by the sum of counts).

    Raises
    ------
    ClassAbsentError
        If class i or j has no samples in the domain.
    """
    if domain not in DOMAINS:
        raise ValueError(f"domain must be one of {DOMAINS}, got {domain!r}")
    if i == j:
        raise ValueError(f"need two distinct classes, got i = j = {i}")
    if weight_mode not in ("product", "sum"):
        raise ValueError(f"unknown weight_mode {weight_mode!r}")
    d_labels = np.asarray(d_labels, dtype=np.int64)
    idx_i = np.flatnonzero(d_labels == i)
    idx_j = np.flatnonzero(d_labels == j)
    if idx_i.size == 0:
        raise ClassAbsentError(i, domain)
    if idx_j.size == 0:
        raise ClassAbsentError(j, domain)
    n_i, n_j = idx_i.size, idx_j.size

    pooled = centering_matrix(n_i + n_j)
    split = scipy.linalg.block_diag(centering_matrix(n_i), centering_matrix(n_j))
    weight = implicit_weight(n_i, n_j) if weight_mode == "product" else 1.0

    idx = np.r_[idx_i, idx_j] + offset
    if idx.max() >= n_st:
        raise ValueError(
            f"global index {idx.max()} exceeds joint order {n_st}; check offset"
        )
    out = np.zeros((n_st, n_st))
    out[np.ix_(idx, idx)] = weight * (pooled - split)
    return InterClassLaplacian(domain=domain, i=i, j=j, l_b=out, weight=weight)


def domain_within_laplacian(y_s: np.ndarray, y_t: np.ndarray) -> np.ndarray:
    """Order-n_st Laplacian of the combined per-domain within-class scatter.

    ``X @ L @ X.T`` equals the sum of per-class total scatters inside the
    source block plus the same inside the target block.  Empty classes
    contribute nothing.
    """
    y_s = np.asarray(y_s, dtype=np.int64)
    y_t = np.asarray(y_t, dtype=np.int64)
    n_s, n_st = y_s.size, y_s.size + y_t.size
    out = np.zeros((n_st, n_st))
    for labels, offset in ((y_s, 0), (y_t, n_s)):
        for c in np.unique(labels):
            idx = np.flatnonzero(labels == c) + offset
            out[np.ix_(idx, idx)] += centering_matrix(idx.size)
    return out


def domain_between_laplacian(y_s: np.ndarray, y_t: np.ndarray) -> np.ndarray:
    """Order-n_st Laplacian of the combined per-domain between-class scatter.

    Per domain this is (centering over the whole domain block) minus (that
    domain's within part), so the data quadratic form equals the sum of
    the two domains' between-class scatters.
    """
    y_s = np.asarray(y_s, dtype=np.int64)
    y_t = np.asarray(y_t, dtype=np.int64)
    n_s, n_st = y_s.size, y_s.size + y_t.size
    out = np.zeros((n_st, n_st))
    out[:n_s, :n_s] = centering_matrix(n_s)
    out[n_s:, n_s:] = centering_matrix(y_t.size)
    return out - domain_within_laplacian(y_s, y_t)
