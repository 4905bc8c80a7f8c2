"""Objective assembly and projection learning.

Every variant minimizes a trace of the form ``tr(A.T @ left @ A)`` subject
to ``A.T @ right @ A = I``, where ``right`` is the joint-data total
scatter (the variance constraint) and ``left`` stacks data-sandwiched
discrepancy terms plus an ``alpha * I`` scale regularizer:

baseline
    marginal discrepancy + per-class discrepancies, nothing else.
strategy I
    replaces each class discrepancy with ``weight * (L_v + beta * L_w)``,
    exposing the within-class part under a trade-off ``beta``; at
    ``beta = -1`` this is the baseline exactly.
strategy II
    keeps ``lambda`` times the class discrepancies and subtracts
    ``(1 - lambda)`` times per-domain inter-class separation terms; at
    ``lambda = 1`` this is the baseline exactly.
ablation
    baseline plus small explicit within-class (gamma1) and/or
    between-class (gamma2) scatter terms, for measuring what the implicit
    weighting already buys.

Assemblies carry a ``meta`` dict (strategy tag, parameters, per-class
weights, skipped classes/pairs) so downstream reports can echo the exact
configuration that produced a projection.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import UnusableLabelsError
from .laplacians import (
    build_class_set,
    build_interclass,
    domain_between_laplacian,
    domain_within_laplacian,
)
from .linalg import centering_matrix, solve_generalized_eig, symmetrize
from .stats import build_m0, build_mc

ABLATION_VARIANTS = ("Dtra", "Dter", "Both")


@dataclass(frozen=True)
class Assembly:
    """Left/right operand pair of one generalized eigenproblem, plus meta."""

    left: np.ndarray
    right: np.ndarray
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Projection:
    """Learned projection: columns of ``a`` are the k smallest eigenvectors.

    ``constraint_residual`` is the Frobenius distance of
    ``a.T @ (right + ridge_used * I) @ a`` from the identity, i.e. how
    well the variance constraint is met after ridging.
    """

    a: np.ndarray
    theta: np.ndarray
    constraint_residual: float
    ridge_used: float


def _prepare(x_st, y_s, y_t_pseudo):
    x = np.asarray(x_st, dtype=np.float64)
    y_s = np.asarray(y_s, dtype=np.int64)
    y_t = np.asarray(y_t_pseudo, dtype=np.int64)
    if x.ndim != 2:
        raise ValueError(f"x_st must be 2-D, got shape {x.shape}")
    if y_s.size < 1 or y_t.size < 1:
        raise ValueError("both domains need at least one sample")
    if x.shape[1] != y_s.size + y_t.size:
        raise ValueError(
            f"x_st has {x.shape[1]} columns but labels cover "
            f"{y_s.size} + {y_t.size} samples"
        )
    if y_s.min() < 1 or y_t.min() < 1:
        raise ValueError("labels must be 1-based positive integers")
    c = int(max(y_s.max(), y_t.max()))
    shared = [
        cls
        for cls in range(1, c + 1)
        if np.any(y_s == cls) and np.any(y_t == cls)
    ]
    skipped = [cls for cls in range(1, c + 1) if cls not in shared]
    if not shared:
        raise UnusableLabelsError(
            "no class is present in both domains; cannot build any "
            "class-conditional term"
        )
    return x, y_s, y_t, c, shared, skipped


def _finish(x, core, alpha, meta) -> Assembly:
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    m = x.shape[0]
    n_st = x.shape[1]
    left = symmetrize(x @ core @ x.T) + alpha * np.eye(m)
    right = symmetrize(x @ centering_matrix(n_st) @ x.T)
    return Assembly(left=left, right=right, meta=meta)


def assemble_baseline(x_st, y_s, y_t_pseudo, alpha: float) -> Assembly:
    """Marginal plus per-class discrepancy objective with variance constraint.

    Classes missing from either domain are skipped and listed in
    ``meta["classes_skipped"]``; if no class survives, raises
    UnusableLabelsError.
    """
    x, y_s, y_t, c, shared, skipped = _prepare(x_st, y_s, y_t_pseudo)
    core = build_m0(y_s.size, y_t.size).m.copy()
    weights = {}
    for cls in shared:
        mc = build_mc(y_s, y_t, cls)
        core += mc.m
        weights[cls] = (mc.counts[0] + mc.counts[1]) / (
            mc.counts[0] * mc.counts[1]
        )
    meta = {
        "strategy": "baseline",
        "alpha": alpha,
        "classes_skipped": skipped,
        "class_weights": weights,
    }
    return _finish(x, core, alpha, meta)


def assemble_strategy1(
    x_st, y_s, y_t_pseudo, beta: float, alpha: float
) -> Assembly:
    """Trade-off objective: class terms become ``weight * (L_v + beta * L_w)``.

    ``beta`` is meant to lie in [-1, 1]; values outside only warn, since
    nothing breaks mathematically.  ``beta = -1`` reproduces the baseline.
    """
    if not -1.0 <= beta <= 1.0:
        warnings.warn(
            f"beta = {beta} lies outside the intended [-1, 1] range",
            stacklevel=2,
        )
    x, y_s, y_t, c, shared, skipped = _prepare(x_st, y_s, y_t_pseudo)
    core = build_m0(y_s.size, y_t.size).m.copy()
    weights = {}
    for cls in shared:
        cs = build_class_set(y_s, y_t, cls)
        core += cs.weight * (cs.l_v + beta * cs.l_w)
        weights[cls] = cs.weight
    meta = {
        "strategy": "strategy1",
        "alpha": alpha,
        "beta": beta,
        "classes_skipped": skipped,
        "class_weights": weights,
    }
    return _finish(x, core, alpha, meta)


def assemble_strategy2(
    x_st,
    y_s,
    y_t_pseudo,
    lambda_: float,
    alpha: float,
    weight_mode: str = "product",
) -> Assembly:
    """Balance objective: ``lambda`` on class discrepancies, ``1 - lambda``
    on subtracted per-domain inter-class separation terms.

    ``lambda = 1`` reproduces the baseline.  Inter-class pairs with an
    empty class in a domain are skipped and recorded in
    ``meta["pairs_skipped"]`` as (domain, i, j).
    """
    if not 0.0 <= lambda_ <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lambda_}")
    x, y_s, y_t, c, shared, skipped = _prepare(x_st, y_s, y_t_pseudo)
    n_s, n_t = y_s.size, y_t.size
    n_st = n_s + n_t
    core = build_m0(n_s, n_t).m.copy()
    weights = {}
    for cls in shared:
        cs = build_class_set(y_s, y_t, cls)
        core += lambda_ * cs.weight * (cs.l_v - cs.l_w)
        weights[cls] = cs.weight

    pairs_skipped = []
    for domain, labels, offset in (("source", y_s, 0), ("target", y_t, n_s)):
        for i, j in itertools.combinations(range(1, c + 1), 2):
            if not (np.any(labels == i) and np.any(labels == j)):
                pairs_skipped.append((domain, i, j))
                continue
            ic = build_interclass(
                labels, domain, i, j, n_st, offset, weight_mode=weight_mode
            )
            core -= (1.0 - lambda_) * ic.l_b
    meta = {
        "strategy": "strategy2",
        "alpha": alpha,
        "lambda": lambda_,
        "weight_mode": weight_mode,
        "classes_skipped": skipped,
        "pairs_skipped": pairs_skipped,
        "class_weights": weights,
    }
    return _finish(x, core, alpha, meta)


def assemble_ablation(
    x_st,
    y_s,
    y_t_pseudo,
    variant: str,
    gamma1: float = 0.01,
    gamma2: float = 0.01,
    alpha: float = 0.0,
) -> Assembly:
    """Baseline plus explicit unweighted scatter terms.

    ``variant`` selects which extras are added: ``"Dtra"`` adds
    ``gamma1`` times the combined per-domain within-class Laplacian
    (compactness, minimized), ``"Dter"`` subtracts ``gamma2`` times the
    combined per-domain between-class Laplacian (separation, maximized),
    ``"Both"`` does both.
    """
    if variant not in ABLATION_VARIANTS:
        raise ValueError(
            f"variant must be one of {ABLATION_VARIANTS}, got {variant!r}"
        )
    if gamma1 < 0 or gamma2 < 0:
        raise ValueError(f"gamma values must be >= 0, got ({gamma1}, {gamma2})")
    x, y_s, y_t, c, shared, skipped = _prepare(x_st, y_s, y_t_pseudo)
    core = build_m0(y_s.size, y_t.size).m.copy()
    weights = {}
    for cls in shared:
        mc = build_mc(y_s, y_t, cls)
        core += mc.m
        weights[cls] = (mc.counts[0] + mc.counts[1]) / (
            mc.counts[0] * mc.counts[1]
        )
    if variant in ("Dtra", "Both"):
        core += gamma1 * domain_within_laplacian(y_s, y_t)
    if variant in ("Dter", "Both"):
        core -= gamma2 * domain_between_laplacian(y_s, y_t)
    meta = {
        "strategy": f"ablation-{variant}",
        "alpha": alpha,
        "gamma1": gamma1,
        "gamma2": gamma2,
        "classes_skipped": skipped,
        "class_weights": weights,
    }
    return _finish(x, core, alpha, meta)


def learn_projection(asm: Assembly, k: int, ridge: float = 0.0) -> Projection:
    """Solve the assembly's generalized eigenproblem for the k smallest pairs."""
    res = solve_generalized_eig(asm.left, asm.right, k, ridge=ridge)
    m = asm.right.shape[0]
    b_eff = asm.right + res.ridge_used * np.eye(m)
    gram = res.vectors.T @ b_eff @ res.vectors
    constraint_residual = float(np.linalg.norm(gram - np.eye(k)))
    return Projection(
        a=res.vectors,
        theta=res.values,
        constraint_residual=constraint_residual,
        ridge_used=res.ridge_used,
    )
