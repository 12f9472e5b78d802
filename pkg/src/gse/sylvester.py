"""Discrete-time Sylvester (Stein) equation ``A X B - X = C``.

For symmetric ``A`` and ``B`` the equation diagonalises in the two
eigenbases: with ``A = P diag(a) P^T`` and ``B = Q diag(b) Q^T``,

    X = P [ (P^T C Q)_ij / (a_i b_j - 1) ] Q^T,

which is unique iff no product ``a_i b_j`` equals one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import NearSingularPencil
from .graph import as_symmetric
from .linalg import EigenSystem, dense_solve, sym_eig

SOLVABILITY_TOL = 1e-8
KRONECKER_MAX_DIM = 60


@dataclass(frozen=True)
class SylvesterProblem:
    a: np.ndarray
    b: np.ndarray
    c: Optional[np.ndarray] = None
    tol: float = SOLVABILITY_TOL

    def __post_init__(self):
        a = as_symmetric(self.a, "A")
        b = as_symmetric(self.b, "B")
        if a.shape != b.shape:
            raise ValueError(f"A and B differ in shape: {a.shape} vs {b.shape}")
        c = np.eye(len(a)) if self.c is None else np.asarray(self.c, dtype=float)
        if c.shape != a.shape:
            raise ValueError(f"C has shape {c.shape}, expected {a.shape}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    @cached_property
    def eig_a(self) -> EigenSystem:
        return sym_eig(self.a)

    @cached_property
    def eig_b(self) -> EigenSystem:
        return sym_eig(self.b)

    @cached_property
    def denominators(self) -> np.ndarray:
        return np.outer(self.eig_a.values, self.eig_b.values) - 1.0

    @property
    def solvability_margin(self) -> float:
        """``min_ij |a_i b_j - 1|``; the equation is singular when this is zero."""
        return float(np.abs(self.denominators).min())

    @property
    def plus_one_margin(self) -> float:
        """``min_ij |a_i b_j + 1|``, reported for diagnostics only."""
        return float(np.abs(self.denominators + 2.0).min())

    def permuted(self, perm: Sequence[int]) -> "SylvesterProblem":
        """Problem with ``P^T A P`` and ``P^T B P``; ``perm[i]`` is the new slot of index ``i``."""
        p = permutation_matrix(perm)
        return SylvesterProblem(p.T @ self.a @ p, p.T @ self.b @ p, None, self.tol)


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """``P`` with ``(P^T M P)[perm[i], perm[j]] == M[i, j]``."""
    perm = np.asarray(perm)
    n = len(perm)
    if sorted(perm.tolist()) != list(range(n)):
        raise ValueError("not a permutation")
    p = np.zeros((n, n))
    p[np.arange(n), perm] = 1.0
    return p


def residual(p: SylvesterProblem, x: np.ndarray) -> float:
    """Frobenius norm of ``A X B - X - C``."""
    return float(np.linalg.norm(p.a @ x @ p.b - x - p.c))


def solve_analytical(p: SylvesterProblem) -> np.ndarray:
    margin = p.solvability_margin
    if not margin > p.tol:
        raise NearSingularPencil(
            f"eigenvalue product within {margin:.3e} of 1 (tolerance {p.tol:g}); solution not unique"
        )
    pa, pb = p.eig_a.vectors, p.eig_b.vectors
    c_tilde = (pa.T @ p.c @ pb) / p.denominators
    return pa @ c_tilde @ pb.T


def solve_kronecker_oracle(p: SylvesterProblem) -> np.ndarray:
    """Reference solve of ``(B^T kron A - I) vec(X) = vec(C)``, column-major vec.

    Quadratic memory in ``dim**2``; only meant for small problems.
    """
    n = p.dim
    if n > KRONECKER_MAX_DIM:
        raise ValueError(f"Kronecker oracle limited to dim <= {KRONECKER_MAX_DIM}, got {n}")
    k = np.kron(p.b.T, p.a) - np.eye(n * n)
    x = dense_solve(k, p.c.reshape(-1, order="F"))
    return x.reshape(n, n, order="F")


@dataclass(frozen=True)
class CheckReport:
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def check_permutation_equivariance(p: SylvesterProblem, perm: Sequence[int], tol: float = 1e-8) -> CheckReport:
    """Compare the solution of the permuted problem with ``P^T X P``."""
    x = solve_analytical(p)
    x_perm = solve_analytical(p.permuted(perm))
    pm = permutation_matrix(perm)
    return CheckReport(float(np.abs(x_perm - pm.T @ x @ pm).max()), tol)


def polynomial_identity_residual(p: SylvesterProblem, x: np.ndarray, k: int, form: str = "stein") -> float:
    """Max-abs residual of a k-step telescoped identity (``C = I`` assumed).

    ``form="stein"``: ``A^k X B^k - X = sum_{i<k} A^i B^i``, which follows
    from ``A X B - X = I`` by telescoping and reduces to it at ``k=1``.

    ``form="continuous"``: ``A^k X - X B^k = sum_{i<k} A^(k-1-i) B^i``,
    which instead telescopes from ``A X - X B = I``.
    """
    n = p.dim
    a_pows = [np.eye(n)]
    b_pows = [np.eye(n)]
    for _ in range(k):
        a_pows.append(a_pows[-1] @ p.a)
        b_pows.append(b_pows[-1] @ p.b)
    if form == "stein":
        lhs = a_pows[k] @ x @ b_pows[k] - x
        rhs = sum(a_pows[i] @ b_pows[i] for i in range(k))
    elif form == "continuous":
        lhs = a_pows[k] @ x - x @ b_pows[k]
        rhs = sum(a_pows[k - 1 - i] @ b_pows[i] for i in range(k))
    else:
        raise ValueError(f"unknown form {form!r}")
    return float(np.abs(lhs - rhs).max())


def check_polynomial_identity(p: SylvesterProblem, k: int, form: str = "stein") -> CheckReport:
    if not 1 <= k <= 6:
        raise ValueError("k must be in 1..6")
    if not np.array_equal(p.c, np.eye(p.dim)):
        raise ValueError("polynomial identity check assumes C = I")
    x = solve_analytical(p)
    return CheckReport(polynomial_identity_residual(p, x, k, form), 1e-7 * p.dim)
