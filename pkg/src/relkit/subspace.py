"""Subspace arithmetic over finite-dimensional complex inner-product spaces.

A :class:`Subspace` is stored as an orthonormal basis (``n x r`` complex
matrix).  Every rank decision in relkit goes through :func:`numerical_rank`,
which compares singular values against ``tau_rank`` times a reference
scale.  Subspace equality is always decided with the gap metric
:func:`subspace_distance`, never by comparing bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DimensionMismatch, InvalidInput


@dataclass(frozen=True)
class Tolerances:
    """Numerical slacks used throughout the package.

    rank:   relative singular-value cutoff.
    orth:   allowed deviation of ``B^H B`` from the identity.
    member: residual slack for membership, containment and equality tests.
    psd:    allowed negativity of eigenvalues in positivity checks.
    """

    rank: float = 1e-10
    orth: float = 1e-12
    member: float = 1e-9
    psd: float = 1e-10

    def __post_init__(self):
        for name in ("rank", "orth", "member", "psd"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"tolerance {name} must be finite and > 0, got {value!r}")

    def with_member(self, member: float) -> "Tolerances":
        return replace(self, member=member)


DEFAULT_TOL = Tolerances()


def _tol(tol: Tolerances | None) -> Tolerances:
    return DEFAULT_TOL if tol is None else tol


def as_matrix(M, rows: int | None = None) -> np.ndarray:
    """Return ``M`` as a 2-D complex array, rejecting non-finite entries."""
    A = np.asarray(M, dtype=complex)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2:
        raise InvalidInput(f"expected a matrix, got array of shape {A.shape}")
    if rows is not None and A.shape[0] != rows:
        raise InvalidInput(f"expected {rows} rows, got {A.shape[0]}")
    if not np.all(np.isfinite(A)):
        raise InvalidInput("matrix has non-finite entries")
    return A


def numerical_rank(s: np.ndarray, tol: Tolerances | None = None, scale: float | None = None) -> int:
    """Number of singular values above ``tau_rank * max(s_max, scale)``.

    ``scale`` lets callers pin the reference magnitude, e.g. to ``1`` when
    the matrix is a contraction applied to an orthonormal basis; without it
    the cutoff is purely relative to the largest singular value.
    """
    tol = _tol(tol)
    if s.size == 0:
        return 0
    ref = float(s[0]) if scale is None else max(float(s[0]), float(scale))
    if ref == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank * ref))


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of ``C^n`` held as an orthonormal basis.

    The zero subspace has a basis of shape ``(n, 0)``.
    """

    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        B = np.array(self.basis, dtype=complex, copy=True)
        if B.ndim != 2:
            raise ValueError("basis must be a 2-D array")
        if B.shape[0] < 1:
            raise ValueError("ambient dimension must be positive")
        if B.shape[1] > B.shape[0]:
            raise ValueError("more basis vectors than the ambient dimension")
        if B.shape[1]:
            # Frobenius norm bounds the spectral norm and avoids an SVD
            err = np.linalg.norm(B.conj().T @ B - np.eye(B.shape[1]))
            if err > 1e3 * DEFAULT_TOL.orth:
                raise ValueError(f"basis is not orthonormal (residual {err:.2e})")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((n, 0), dtype=complex))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def span(cls, *vectors, n: int | None = None, tol: Tolerances | None = None) -> "Subspace":
        """Span of the given vectors (``n`` is needed when no vector is given)."""
        if not vectors:
            if n is None:
                raise ValueError("ambient dimension required for an empty span")
            return cls.zero(n)
        M = np.column_stack([np.asarray(v, dtype=complex).ravel() for v in vectors])
        return orthonormalize(M, tol)

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def residual(self, v) -> np.ndarray:
        """Column-wise norms of the component of ``v`` orthogonal to the subspace."""
        V = as_matrix(v, rows=self.ambient_dim)
        R = V - self.basis @ (self.basis.conj().T @ V)
        return np.linalg.norm(R, axis=0)

    def contains_vector(self, v, tol: Tolerances | None = None) -> bool:
        V = as_matrix(v, rows=self.ambient_dim)
        scale = max(1.0, float(np.linalg.norm(V, 2))) if V.size else 1.0
        return bool(np.all(self.residual(V) <= _tol(tol).member * scale))


def _check_same(S1: Subspace, S2: Subspace) -> None:
    if S1.ambient_dim != S2.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions differ: {S1.ambient_dim} vs {S2.ambient_dim}")


def orthonormalize(M, tol: Tolerances | None = None, scale: float | None = None) -> Subspace:
    """Column space of ``M`` with rank decided by :func:`numerical_rank`."""
    A = as_matrix(M)
    if A.shape[1] == 0:
        return Subspace.zero(A.shape[0])
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    r = numerical_rank(s, tol, scale)
    return Subspace(U[:, :r])


def null_space(A, tol: Tolerances | None = None, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (as a matrix) of the numerical null space of ``A``."""
    A = as_matrix(A)
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if m == 0:
        return np.eye(n, dtype=complex)
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    r = numerical_rank(s, tol, scale)
    return Vh[r:].conj().T


def image(R, S: Subspace, tol: Tolerances | None = None, scale: float | None = 1.0) -> Subspace:
    """``R S`` for a matrix ``R``.

    The default ``scale=1`` suits contractions acting on orthonormal bases:
    images that are numerically zero are discarded even when ``R`` itself
    is tiny.  Pass ``scale=None`` for a cutoff relative to ``||R S||``.
    """
    R = as_matrix(R)
    if R.shape[1] != S.ambient_dim:
        raise DimensionMismatch(f"matrix with {R.shape[1]} columns applied to C^{S.ambient_dim}")
    if S.dim == 0:
        return Subspace.zero(R.shape[0])
    return orthonormalize(R @ S.basis, tol, scale)


def column_space(M, tol: Tolerances | None = None) -> Subspace:
    """Range of an arbitrary matrix with a purely relative rank cutoff."""
    return orthonormalize(M, tol, None)


def kernel(M, tol: Tolerances | None = None) -> Subspace:
    """Null space of an arbitrary matrix with a purely relative rank cutoff."""
    A = as_matrix(M)
    if A.shape[1] == 0:
        raise InvalidInput("matrix has no columns")
    return Subspace(null_space(A, tol, None))


def intersect(S1: Subspace, S2: Subspace, tol: Tolerances | None = None) -> Subspace:
    """``S1 ∩ S2``: the part of ``S1`` annihilated by the projector onto ``S2^⊥``.

    The singular values of ``(I - P2) B1`` are the sines of the principal
    angles, so the cutoff is applied with unit scale.
    """
    _check_same(S1, S2)
    n = S1.ambient_dim
    if S1.dim == 0 or S2.dim == 0:
        return Subspace.zero(n)
    B1 = S1.basis
    D = B1 - S2.basis @ (S2.basis.conj().T @ B1)
    C = null_space(D, tol, scale=1.0)
    if C.shape[1] == 0:
        return Subspace.zero(n)
    return orthonormalize(B1 @ C, tol, scale=1.0)


def subspace_sum(S1: Subspace, S2: Subspace, tol: Tolerances | None = None) -> Subspace:
    """``S1 + S2``: column space of the concatenated bases."""
    _check_same(S1, S2)
    return orthonormalize(np.hstack([S1.basis, S2.basis]), tol, scale=1.0)


def orthogonal_complement(S: Subspace) -> Subspace:
    n = S.ambient_dim
    if S.dim == 0:
        return Subspace.full(n)
    U, _, _ = np.linalg.svd(S.basis, full_matrices=True)
    return Subspace(U[:, S.dim:])


def contains(S1: Subspace, S2: Subspace, tol: Tolerances | None = None) -> bool:
    """True iff ``S2 ⊂ S1``, judged by the residual of each basis vector of ``S2``."""
    _check_same(S1, S2)
    if S2.dim == 0:
        return True
    return bool(np.all(S1.residual(S2.basis) <= _tol(tol).member))


def subspace_distance(S1: Subspace, S2: Subspace) -> float:
    """Gap metric ``||P1 - P2||_2``; zero exactly for equal subspaces."""
    _check_same(S1, S2)
    return float(np.linalg.norm(S1.projector() - S2.projector(), 2))


def same_subspace(S1: Subspace, S2: Subspace, tol: Tolerances | None = None) -> bool:
    return subspace_distance(S1, S2) < _tol(tol).member


def direct_product(S1: Subspace, S2: Subspace) -> Subspace:
    """Cartesian product ``S1 × S2`` inside ``C^(n1+n2)``."""
    n1, n2 = S1.ambient_dim, S2.ambient_dim
    B = np.zeros((n1 + n2, S1.dim + S2.dim), dtype=complex)
    B[:n1, : S1.dim] = S1.basis
    B[n1:, S1.dim:] = S2.basis
    return Subspace(B)
