"""Dense eigendecomposition, SVD and linear solves.

Thin wrappers over LAPACK (via numpy/scipy) that add a deterministic sign
convention and explicit failure modes.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from .errors import ConvergenceFailure, IllConditioned, SingularSystem
from .graph import as_symmetric

RCOND_MIN = 1e-12


class EigenSystem(NamedTuple):
    values: np.ndarray  # ascending
    vectors: np.ndarray  # column i pairs with values[i]


class SvdSystem(NamedTuple):
    singular_values: np.ndarray  # descending
    left_vectors: np.ndarray
    right_vectors: np.ndarray  # columns, i.e. X = U diag(s) V^T


def sign_flips(vectors: np.ndarray) -> np.ndarray:
    """+-1 per column so that each column's largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return signs


def sym_eig(a) -> EigenSystem:
    a = as_symmetric(a)
    try:
        values, vectors = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"symmetric eigensolver failed: {exc}") from exc
    vectors = vectors * sign_flips(vectors)
    return EigenSystem(values, vectors)


def svd(x) -> SvdSystem:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("matrix has non-finite entries")
    try:
        u, s, vt = np.linalg.svd(x)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD failed: {exc}") from exc
    signs = sign_flips(u)
    return SvdSystem(s, u * signs, vt.T * signs)


def dense_solve(a, b) -> np.ndarray:
    """Solve ``a x = b`` by LU, refusing singular or badly conditioned systems."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"a must be square, got shape {a.shape}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("non-finite entries in linear system")
    lu, piv, info = lapack.dgetrf(a)
    if info > 0:
        raise SingularSystem(f"matrix is exactly singular (zero pivot at {info})")
    anorm = np.abs(a).sum(axis=0).max()
    rcond, _ = lapack.dgecon(lu, anorm, norm="1")
    if rcond < RCOND_MIN:
        raise IllConditioned(f"reciprocal condition estimate {rcond:.3e} below {RCOND_MIN:g}")
    return scipy.linalg.lu_solve((lu, piv), b)
