"""Linear relations between finite-dimensional spaces.

A relation ``T`` from ``H = C^m`` to ``K = C^n`` is a subspace of ``H × K``;
the first ``m`` coordinates of each graph vector are the ``H`` component.
Only the orthonormal graph basis is stored, and ``dom``, ``ran``, ``ker``
and ``mul`` are recomputed from it on every call.

Every subspace of a finite-dimensional space is closed, so ``T** = T``
identically.  Statements about closures therefore degenerate:

* closable means ``mul T = {0}``, and ``dom T*`` dense means ``dom T* = K``;
* singular means ``T = dom T × ran T``, i.e. ``ran T ⊂ mul T``;
* the regular part ``(I - P0) T`` is always a bounded operator.

The closure is never materialised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidInput, NotClosable
from .subspace import (
    Subspace,
    Tolerances,
    as_matrix,
    contains,
    direct_product,
    intersect,
    null_space,
    orthogonal_complement,
    orthonormalize,
    same_subspace,
    subspace_distance,
)


@dataclass(frozen=True, eq=False)
class LinearRelation:
    dim_h: int
    dim_k: int
    graph: Subspace

    def __post_init__(self):
        if self.dim_h < 1 or self.dim_k < 1:
            raise InvalidInput("both component spaces must have positive dimension")
        if self.graph.ambient_dim != self.dim_h + self.dim_k:
            raise DimensionMismatch(
                f"graph lives in C^{self.graph.ambient_dim}, expected C^{self.dim_h + self.dim_k}"
            )

    def __repr__(self):
        return f"LinearRelation(dim_h={self.dim_h}, dim_k={self.dim_k}, dim={self.dim})"

    # -- construction -------------------------------------------------------

    @classmethod
    def from_graph(cls, M, dim_h: int, tol: Tolerances | None = None) -> "LinearRelation":
        """Relation spanned by the columns of a ``(dim_h + dim_k) × r`` matrix."""
        A = as_matrix(M)
        if not 0 < dim_h < A.shape[0]:
            raise DimensionMismatch(f"cannot split {A.shape[0]} rows with dim_h={dim_h}")
        return cls(dim_h, A.shape[0] - dim_h, orthonormalize(A, tol, scale=1.0))

    @classmethod
    def from_pairs(cls, F, G, tol: Tolerances | None = None) -> "LinearRelation":
        """Span of the pairs ``{F[:, j], G[:, j]}``."""
        F, G = as_matrix(F), as_matrix(G)
        if F.shape[1] != G.shape[1]:
            raise DimensionMismatch("F and G need the same number of columns")
        return cls(F.shape[0], G.shape[0], orthonormalize(np.vstack([F, G]), tol, scale=1.0))

    @classmethod
    def from_operator(cls, M, tol: Tolerances | None = None) -> "LinearRelation":
        """Graph ``{{f, M f}: f ∈ H}`` of a ``dim_k × dim_h`` matrix."""
        M = as_matrix(M)
        return cls.from_pairs(np.eye(M.shape[1]), M, tol)

    @classmethod
    def product(cls, dom: Subspace, ran: Subspace) -> "LinearRelation":
        """The Cartesian product ``dom × ran``."""
        return cls(dom.ambient_dim, ran.ambient_dim, direct_product(dom, ran))

    # -- basic data ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.graph.dim

    @property
    def F(self) -> np.ndarray:
        """H-components of the graph basis."""
        return self.graph.basis[: self.dim_h]

    @property
    def G(self) -> np.ndarray:
        """K-components of the graph basis."""
        return self.graph.basis[self.dim_h:]

    def dom(self, tol: Tolerances | None = None) -> Subspace:
        return orthonormalize(self.F, tol, scale=1.0)

    def ran(self, tol: Tolerances | None = None) -> Subspace:
        return orthonormalize(self.G, tol, scale=1.0)

    def ker(self, tol: Tolerances | None = None) -> Subspace:
        """``{f : {f, 0} ∈ T}``."""
        C = null_space(self.G, tol, scale=1.0)
        if C.shape[1] == 0:
            return Subspace.zero(self.dim_h)
        return orthonormalize(self.F @ C, tol, scale=1.0)

    def mul(self, tol: Tolerances | None = None) -> Subspace:
        """``{g : {0, g} ∈ T}``."""
        C = null_space(self.F, tol, scale=1.0)
        if C.shape[1] == 0:
            return Subspace.zero(self.dim_k)
        return orthonormalize(self.G @ C, tol, scale=1.0)

    def parts(self, tol: Tolerances | None = None) -> tuple[Subspace, Subspace, Subspace, Subspace]:
        """``(dom, ran, ker, mul)``."""
        return self.dom(tol), self.ran(tol), self.ker(tol), self.mul(tol)

    def inverse(self) -> "LinearRelation":
        """``T^{-1} = {{g, f} : {f, g} ∈ T}``."""
        B = np.vstack([self.G, self.F])
        return LinearRelation(self.dim_k, self.dim_h, Subspace(B))

    def contains_pair(self, f, g, tol: Tolerances | None = None) -> bool:
        v = np.concatenate([np.ravel(f), np.ravel(g)]).astype(complex)
        return self.graph.contains_vector(v, tol)


def distance(T1: LinearRelation, T2: LinearRelation) -> float:
    """Gap between the graphs of two relations."""
    _check_dims(T1, T2)
    return subspace_distance(T1.graph, T2.graph)


def same_relation(T1: LinearRelation, T2: LinearRelation, tol: Tolerances | None = None) -> bool:
    _check_dims(T1, T2)
    return same_subspace(T1.graph, T2.graph, tol)


def _check_dims(T1: LinearRelation, T2: LinearRelation) -> None:
    if (T1.dim_h, T1.dim_k) != (T2.dim_h, T2.dim_k):
        raise DimensionMismatch(
            f"relations act between different spaces: {(T1.dim_h, T1.dim_k)} vs {(T2.dim_h, T2.dim_k)}"
        )


def from_operator(M, tol: Tolerances | None = None) -> LinearRelation:
    return LinearRelation.from_operator(M, tol)


def parts(T: LinearRelation, tol: Tolerances | None = None):
    return T.parts(tol)


def adjoint(T: LinearRelation) -> LinearRelation:
    """``T* = (J T)^⊥`` in ``K × H`` with ``J{f, g} = {g, -f}``.

    A pair ``{k, h}`` lies in ``T*`` iff ``<g, k> = <f, h>`` for every
    ``{f, g} ∈ T``, which is orthogonality to ``{g, -f}``.
    """
    JT = Subspace(np.vstack([T.G, -T.F]))
    return LinearRelation(T.dim_k, T.dim_h, orthogonal_complement(JT))


def is_closable(T: LinearRelation, tol: Tolerances | None = None) -> bool:
    return T.mul(tol).dim == 0


def is_singular(T: LinearRelation, tol: Tolerances | None = None) -> bool:
    """``T = dom T × ran T``, tested as ``ran T ⊂ mul T``."""
    return contains(T.mul(tol), T.ran(tol), tol)


def multiply_left(R, T: LinearRelation, tol: Tolerances | None = None) -> LinearRelation:
    """``R T = {{f, R f'} : {f, f'} ∈ T}``."""
    R = as_matrix(R)
    if R.shape != (T.dim_k, T.dim_k):
        raise DimensionMismatch(f"R has shape {R.shape}, expected {(T.dim_k, T.dim_k)}")
    if T.dim == 0:
        return T
    scale = max(1.0, float(np.linalg.norm(R, 2)))
    graph = orthonormalize(np.vstack([T.F, R @ T.G]), tol, scale=scale)
    return LinearRelation(T.dim_h, T.dim_k, graph)


def add(T1: LinearRelation, T2: LinearRelation, tol: Tolerances | None = None) -> LinearRelation:
    """Operator-like sum ``{{f, f' + f''} : {f, f'} ∈ T1, {f, f''} ∈ T2}``."""
    _check_dims(T1, T2)
    C = null_space(np.hstack([T1.F, -T2.F]), tol, scale=1.0)
    if C.shape[1] == 0:
        return LinearRelation(T1.dim_h, T1.dim_k, Subspace.zero(T1.dim_h + T1.dim_k))
    a, b = C[: T1.dim], C[T1.dim:]
    f = 0.5 * (T1.F @ a + T2.F @ b)
    g = T1.G @ a + T2.G @ b
    return LinearRelation(T1.dim_h, T1.dim_k, orthonormalize(np.vstack([f, g]), tol, scale=1.0))


def is_strict_sum(T1: LinearRelation, T2: LinearRelation, tol: Tolerances | None = None) -> bool:
    _check_dims(T1, T2)
    return intersect(T1.mul(tol), T2.mul(tol), tol).dim == 0


@dataclass(frozen=True, eq=False)
class OperatorPart:
    """Single-valued action of a closable relation, extended by zero off its domain."""

    domain: Subspace
    matrix: np.ndarray

    def __call__(self, f) -> np.ndarray:
        return self.matrix @ np.asarray(f, dtype=complex)


def operator_part(T: LinearRelation, tol: Tolerances | None = None) -> OperatorPart:
    """Matrix ``M`` with ``M f = g`` for ``{f, g} ∈ T`` and ``M = 0`` on ``dom T^⊥``.

    Raises NotClosable if ``mul T ≠ {0}``.
    """
    if not is_closable(T, tol):
        raise NotClosable(f"relation has a {T.mul(tol).dim}-dimensional multivalued part")
    if T.dim == 0:
        return OperatorPart(Subspace.zero(T.dim_h), np.zeros((T.dim_k, T.dim_h), dtype=complex))
    U, s, Vh = np.linalg.svd(T.F, full_matrices=False)
    # closable: F has full column rank, so all singular values are kept
    F_pinv = Vh.conj().T @ np.diag(1.0 / s) @ U.conj().T
    return OperatorPart(T.dom(tol), T.G @ F_pinv)


def regular_singular_split(T: LinearRelation, tol: Tolerances | None = None):
    """``(T_reg, T_sing, P0)`` with ``P0`` the projection onto ``mul T``."""
    P0 = T.mul(tol).projector()
    I = np.eye(T.dim_k)
    return multiply_left(I - P0, T, tol), multiply_left(P0, T, tol), P0
