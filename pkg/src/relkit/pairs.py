"""Pairs of bounded operators ``Φ: E → H``, ``Ψ: E → K``.

A pair generates the operator range relation

    L(Φ, Ψ) = {{Φη, Ψη} : η ∈ E}

with ``dom = ran Φ``, ``ran = ran Ψ``, ``ker = Φ(ker Ψ)`` and
``mul = Ψ(ker Φ)``.  ``Ψ`` is regular with respect to ``Φ`` when
``D(Φ, Ψ) = {k : Ψ^H k ∈ ran Φ^H}`` is all of ``K`` (dense and closed
coincide here), and singular when ``ran Φ^H ∩ ran Ψ^H = {0}``.

The sequence characterisations of closable and singular operator range
relations are replaced by their algebraic equivalents: ``ker Φ ⊂ ker Ψ``
and ``ker Φ + ker Ψ = E``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complementation import ContractionPair
from .errors import DimensionMismatch, NotRegular
from .lebesgue import _contraction_for, decompose
from .relation import LinearRelation, is_closable, is_singular, operator_part
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    as_matrix,
    contains,
    image,
    intersect,
    null_space,
    numerical_rank,
    orthonormalize,
    orthogonal_complement,
    same_subspace,
    subspace_sum,
)


@dataclass(frozen=True, eq=False)
class OperatorPair:
    Phi: np.ndarray
    Psi: np.ndarray

    def __post_init__(self):
        Phi, Psi = as_matrix(self.Phi), as_matrix(self.Psi)
        if Phi.shape[1] != Psi.shape[1]:
            raise DimensionMismatch(
                f"Phi and Psi need a common domain: {Phi.shape[1]} vs {Psi.shape[1]} columns"
            )
        object.__setattr__(self, "Phi", Phi)
        object.__setattr__(self, "Psi", Psi)

    @property
    def dim_e(self) -> int:
        return self.Phi.shape[1]

    @property
    def dim_h(self) -> int:
        return self.Phi.shape[0]

    @property
    def dim_k(self) -> int:
        return self.Psi.shape[0]

    def with_psi(self, Psi) -> "OperatorPair":
        return OperatorPair(self.Phi, Psi)

    def swapped(self) -> "OperatorPair":
        return OperatorPair(self.Psi, self.Phi)


def _ran(M, tol: Tolerances | None = None) -> Subspace:
    """Column space with the rank cutoff relative to ``max(1, ||M||)``.

    Products such as ``K Ψ`` can be zero up to rounding; a purely relative
    cutoff would read that noise as full rank.
    """
    return orthonormalize(M, tol, scale=1.0)


def pinv(M, tol: Tolerances | None = None) -> np.ndarray:
    """Pseudoinverse using the same rank rule as :func:`_ran`."""
    M = as_matrix(M)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    r = numerical_rank(s, tol, scale=1.0)
    return (Vh[:r].conj().T / s[:r]) @ U[:, :r].conj().T


def relation_of_pair(p: OperatorPair, tol: Tolerances | None = None) -> LinearRelation:
    return LinearRelation.from_pairs(p.Phi, p.Psi, tol)


def kernel_of(M, tol: Tolerances | None = None) -> Subspace:
    """Null space with the cutoff relative to ``max(1, ||M||)``."""
    M = as_matrix(M)
    return Subspace(null_space(M, tol, scale=1.0))


def image_of_kernel(p: OperatorPair, tol: Tolerances | None = None) -> Subspace:
    """``Ψ(ker Φ)``, the multivalued part of ``L(Φ, Ψ)``."""
    return image(p.Psi, kernel_of(p.Phi, tol), tol)


def D_space(p: OperatorPair, tol: Tolerances | None = None) -> Subspace:
    """``{k ∈ K : Ψ^H k ∈ ran Φ^H}``."""
    tol = tol or DEFAULT_TOL
    ran_phi_h = _ran(p.Phi.conj().T, tol)
    A = p.Psi.conj().T
    A = A - ran_phi_h.basis @ (ran_phi_h.basis.conj().T @ A)
    return Subspace(null_space(A, tol, scale=max(1.0, float(np.linalg.norm(p.Psi, 2)))))


def is_regular(p: OperatorPair, tol: Tolerances | None = None) -> bool:
    return D_space(p, tol).dim == p.dim_k


def regularity_certificates(p: OperatorPair, tol: Tolerances | None = None) -> dict:
    """The three equivalent forms of regularity, evaluated independently."""
    return {
        "D_is_full": is_regular(p, tol),
        "mul_is_zero": image_of_kernel(p, tol).dim == 0,
        "ker_phi_in_ker_psi": contains(kernel_of(p.Psi, tol), kernel_of(p.Phi, tol), tol),
    }


def is_singular_pair(p: OperatorPair, tol: Tolerances | None = None) -> bool:
    """``ran Φ^H ∩ ran Ψ^H = {0}``, symmetric in ``Φ`` and ``Ψ``."""
    a = _ran(p.Phi.conj().T, tol)
    b = _ran(p.Psi.conj().T, tol)
    return intersect(a, b, tol).dim == 0


def singularity_certificates(p: OperatorPair, tol: Tolerances | None = None) -> dict:
    tol = tol or DEFAULT_TOL
    kernels = subspace_sum(kernel_of(p.Phi, tol), kernel_of(p.Psi, tol), tol)
    return {
        "ranges_disjoint": is_singular_pair(p, tol),
        "swapped": is_singular_pair(p.swapped(), tol),
        "kernels_span": kernels.dim == p.dim_e,
    }


@dataclass(frozen=True, eq=False)
class PairDecomposition:
    """``Ψ = Ψ1 + Ψ2`` with ``Ψ1 = (I - K) Ψ`` and ``Ψ2 = K Ψ``."""

    pair: OperatorPair
    Psi1: np.ndarray
    Psi2: np.ndarray
    K: np.ndarray
    regular_part: bool
    singular_part: bool
    pseudo_orthogonal: bool
    lebesgue_type: bool
    mul_direct: bool = False
    weak_b_prime: bool = True
    certificates: dict = field(default_factory=dict)


def lebesgue_pair(p: OperatorPair, tol: Tolerances | None = None) -> PairDecomposition:
    """Split ``Ψ`` with ``P0`` the projection onto ``D(Φ, Ψ)^⊥``."""
    P0 = orthogonal_complement(D_space(p, tol)).projector()
    return pair_decompose(p, P0, tol)


def radon_nikodym(p: OperatorPair, tol: Tolerances | None = None) -> np.ndarray:
    """Matrix ``R`` with ``R Φ = Ψ`` and ``R = 0`` on ``(ran Φ)^⊥``.

    This is the operator part of ``L(Φ, Ψ)``; it is computed as ``Ψ Φ^+``,
    which avoids the conditioning of a graph basis.  Raises NotRegular
    when ``Ψ(ker Φ) ≠ {0}``.
    """
    tol = tol or DEFAULT_TOL
    if not is_regular(p, tol):
        raise NotRegular("Psi is not regular with respect to Phi")
    return p.Psi @ pinv(p.Phi, tol)


def radon_nikodym_from_relation(p: OperatorPair, tol: Tolerances | None = None) -> np.ndarray:
    """Same matrix as :func:`radon_nikodym`, read off the graph of ``L(Φ, Ψ)``."""
    return operator_part(relation_of_pair(p, tol), tol).matrix


def pair_decompose(p: OperatorPair, K, tol: Tolerances | None = None) -> PairDecomposition:
    """Split ``Ψ`` along ``K`` and classify the parts with respect to ``Φ``.

    The flags are computed at pair level; ``certificates`` holds the
    corresponding relation-level verdicts for comparison.
    """
    tol = tol or DEFAULT_TOL
    T = relation_of_pair(p, tol)
    K = _contraction_for(T, K, tol)
    X = np.eye(p.dim_k) - K
    Psi1, Psi2 = X @ p.Psi, K @ p.Psi

    ker_phi = kernel_of(p.Phi, tol)
    n = image(p.Psi, ker_phi, tol)
    n1, n2 = image(Psi1, ker_phi, tol), image(Psi2, ker_phi, tol)
    direct = n1.dim + n2.dim == n.dim and same_subspace(subspace_sum(n1, n2, tol), n, tol)
    weak = contains(image(X @ K, n, tol), intersect(n1, n2, tol), tol)

    d = decompose(T, K, tol)
    reg = is_regular(p.with_psi(Psi1), tol)
    sing = is_singular_pair(p.with_psi(Psi2), tol)
    ran_psi_h_k = _ran(p.Psi.conj().T @ K, tol)
    ran_phi_h = _ran(p.Phi.conj().T, tol)
    certificates = {
        "relation_pseudo_orthogonal": d.pseudo_orthogonal,
        "relation_t1_closable": is_closable(d.T1, tol),
        "relation_t2_singular": is_singular(d.T2, tol),
        "singular_cross_check": intersect(ran_psi_h_k, ran_phi_h, tol).dim == 0,
    }
    pseudo = bool(d.pseudo_orthogonal)
    return PairDecomposition(
        pair=p,
        Psi1=Psi1,
        Psi2=Psi2,
        K=K,
        regular_part=reg,
        singular_part=sing,
        pseudo_orthogonal=pseudo,
        lebesgue_type=bool(pseudo and reg and sing),
        mul_direct=bool(direct),
        weak_b_prime=bool(weak),
        certificates=certificates,
    )


def pythagorean_pair_check(p: OperatorPair, K, eta, tol: Tolerances | None = None) -> tuple[float, float]:
    """``(||Ψη||^2, ||Ψ1 η||_X^2 + ||Ψ2 η||_Y^2)`` with ``X = I - K``, ``Y = K``.

    The identity holds for every ``η`` whenever ``K`` splits ``Ψ(ker Φ)``
    directly; the function itself does not enforce that.
    """
    tol = tol or DEFAULT_TOL
    P = ContractionPair.from_k(K, tol)
    eta = np.asarray(eta, dtype=complex).ravel()
    g = p.Psi @ eta
    lhs = float(np.real(np.vdot(g, g)))
    rhs = P.space_x.norm_sq(P.X @ g) + P.space_y.norm_sq(P.Y @ g)
    return lhs, rhs
