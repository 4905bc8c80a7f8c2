"""Dense symmetric-matrix utilities and the regularized generalized eigensolver.

Every subspace objective in this package reduces to the k smallest
eigenpairs of ``S a = theta * B a`` with symmetric S and positive
semidefinite B.  B is frequently rank deficient (it is a centered data
Gram matrix, rank at most n_samples - 1), so the solver ridges B and
escalates the ridge until the factorization succeeds.

Matrices are plain float64 ndarrays; builders symmetrize their output as
``(S + S.T) / 2`` so downstream consumers can rely on exact symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError

# Ridge escalation bounds, as fractions of tr(B)/m.
RIDGE_BASE_FRACTION = 1e-9
RIDGE_MAX_FRACTION = 1e-3


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Return ``(a + a.T) / 2`` as a float64 array."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return (a + a.T) / 2.0


def centering_matrix(n: int) -> np.ndarray:
    """Return the order-n centering matrix ``I - (1/n) * ones``.

    Rows sum to zero and the matrix is idempotent; ``X @ H @ X.T`` is the
    total scatter of the columns of X.
    """
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    return np.eye(n) - np.full((n, n), 1.0 / n)


def trace_quadratic(a: np.ndarray, s: np.ndarray) -> float:
    """Evaluate ``tr(A.T @ S @ A)`` for an m x k projection A and m x m symmetric S."""
    a = np.asarray(a, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    if s.shape[0] != s.shape[1] or a.shape[0] != s.shape[0]:
        raise ValueError(f"dimension mismatch: a {a.shape}, s {s.shape}")
    return float(np.einsum("ij,ij->", a, s @ a))


@dataclass(frozen=True)
class EigResult:
    """Result of a generalized symmetric eigensolve.

    vectors
        m x k matrix whose columns are generalized eigenvectors, normalized
        so ``vectors.T @ (B + ridge_used * I) @ vectors == I`` and signed so
        each column's largest-magnitude entry is positive.
    values
        The k eigenvalues, ascending.
    residual
        ``max_j ||S a_j - theta_j B' a_j||_2 / max(1, ||S a_j||_2)`` with
        B' the ridged matrix actually solved.
    ridge_used
        Ridge added to B (0 when B was factorizable as given).
    """

    vectors: np.ndarray
    values: np.ndarray
    residual: float
    ridge_used: float


def _normalize_signs(vectors: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry of each column made positive; first index wins ties.
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            out[:, j] = -col
    return out


def solve_generalized_eig(
    s: np.ndarray,
    b: np.ndarray,
    k: int,
    ridge: float = 0.0,
) -> EigResult:
    """Solve ``S a = theta (B + ridge_eff I) a`` for the k smallest eigenpairs.

    Parameters
    ----------
    s : ndarray
        Symmetric m x m matrix.
    b : ndarray
        Symmetric positive semidefinite m x m matrix.  When B is rank
        deficient the base ridge is escalated tenfold per attempt, from
        ``1e-9 * tr(B)/m`` up to ``1e-3 * tr(B)/m``, until the
        factorization succeeds.
    k : int
        Number of eigenpairs, 1 <= k <= m.
    ridge : float
        Caller-requested ridge added to B before any automatic escalation.

    Returns
    -------
    EigResult
        Eigenpairs in ascending eigenvalue order with B'-orthonormal columns.

    Raises
    ------
    ValueError
        If shapes disagree, k is out of range, ridge is negative, or b has
        an eigenvalue below ``-1e-8 * ||b||``.
    NumericalError
        If the factorization still fails at the maximum ridge.
    """
    s = symmetrize(s)
    b = symmetrize(b)
    m = s.shape[0]
    if b.shape[0] != m:
        raise ValueError(f"order mismatch: s is {m}, b is {b.shape[0]}")
    if not 1 <= k <= m:
        raise ValueError(f"k must be in [1, {m}], got {k}")
    if ridge < 0:
        raise ValueError(f"ridge must be >= 0, got {ridge}")

    b_eigs = np.linalg.eigvalsh(b)
    b_scale = max(abs(b_eigs[0]), abs(b_eigs[-1]))
    if b_eigs[0] < -1e-8 * max(b_scale, 1.0):
        raise ValueError(
            f"b is not positive semidefinite (min eigenvalue {b_eigs[0]:.3e})"
        )

    base = RIDGE_BASE_FRACTION * max(np.trace(b) / m, np.finfo(float).tiny)
    cap = RIDGE_MAX_FRACTION * max(np.trace(b) / m, np.finfo(float).tiny)
    candidates = [ridge]
    step = base
    while step <= cap * (1 + 1e-12):
        candidates.append(ridge + step)
        step *= 10.0

    last_exc: Exception | None = None
    for ridge_eff in candidates:
        b_eff = b if ridge_eff == 0.0 else b + ridge_eff * np.eye(m)
        try:
            values, vectors = scipy.linalg.eigh(s, b_eff, subset_by_index=[0, k - 1])
        except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
            last_exc = exc
            continue
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
            last_exc = NumericalError("non-finite eigensolution")
            continue
        vectors = _normalize_signs(vectors)
        num = s @ vectors - (b_eff @ vectors) * values[None, :]
        den = np.maximum(1.0, np.linalg.norm(s @ vectors, axis=0))
        residual = float(np.max(np.linalg.norm(num, axis=0) / den))
        return EigResult(
            vectors=vectors,
            values=values,
            residual=residual,
            ridge_used=float(ridge_eff),
        )

    raise NumericalError(
        f"generalized eigensolve failed up to ridge {candidates[-1]:.3e}: {last_exc}"
    )
