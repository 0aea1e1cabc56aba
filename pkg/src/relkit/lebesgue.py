"""Decompositions ``T = (I - K) T + K T`` of a linear relation.

A nonnegative contraction ``K`` on ``K``-space splits ``T`` into
``T1 = (I - K) T`` and ``T2 = K T``.  With ``X = I - K`` and ``Y = K`` the
ranges of the summands sit in the complemented range spaces of ``X`` and
``Y``, and the split is pseudo-orthogonal exactly when the multivalued part
splits directly:

    mul T = (I - K) mul T  ∔  K mul T.

In finite dimensions ``dom T* = (mul T)^⊥`` is always closed, which makes
the Lebesgue decomposition (``K = P0``) the only pseudo-orthogonal
Lebesgue type decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .complementation import ContractionPair, check_contraction, is_orthogonal_projection
from .errors import ConditionsViolated, DimensionMismatch, NotClosable, NotPseudoOrthogonal
from .relation import (
    LinearRelation,
    add,
    adjoint,
    distance,
    is_closable,
    is_singular,
    is_strict_sum,
    multiply_left,
    operator_part,
    regular_singular_split,
)
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    contains,
    image,
    intersect,
    null_space,
    orthogonal_complement,
    orthonormalize,
    same_subspace,
    subspace_distance,
    subspace_sum,
)


def _contraction_for(T: LinearRelation, K, tol: Tolerances) -> np.ndarray:
    K = check_contraction(K, tol)
    if K.shape != (T.dim_k, T.dim_k):
        raise DimensionMismatch(f"K has shape {K.shape}, expected {(T.dim_k, T.dim_k)}")
    return K


@dataclass(frozen=True, eq=False)
class Decomposition:
    """``T = T1 + T2`` with ``T1 = (I - K) T`` and ``T2 = K T``.

    ``lebesgue_type`` and ``orthogonal`` stay ``None`` until :func:`classify`
    has run.
    """

    T: LinearRelation
    T1: LinearRelation
    T2: LinearRelation
    K: np.ndarray
    strict: bool
    pseudo_orthogonal: bool
    lebesgue_type: bool | None = None
    orthogonal: bool | None = None
    direct_sum: bool = False
    mul_invariant: bool = False
    reconstruction_gap: float = float("nan")
    certificates: dict = field(default_factory=dict)

    @property
    def X(self) -> np.ndarray:
        return np.eye(self.T.dim_k) - self.K

    @property
    def Y(self) -> np.ndarray:
        return self.K


def decompose(T: LinearRelation, K, tol: Tolerances | None = None) -> Decomposition:
    """Split ``T`` along ``K`` and test the direct-sum condition on ``mul T``.

    Directness is judged by counting dimensions and checking that the two
    images span ``mul T`` again.  Failing it is not an error: the result is
    returned with ``pseudo_orthogonal=False``.
    """
    tol = tol or DEFAULT_TOL
    K = _contraction_for(T, K, tol)
    X = np.eye(T.dim_k) - K
    T1 = multiply_left(X, T, tol)
    T2 = multiply_left(K, T, tol)

    m = T.mul(tol)
    xm, km = image(X, m, tol), image(K, m, tol)
    direct = xm.dim + km.dim == m.dim and same_subspace(subspace_sum(xm, km, tol), m, tol)
    invariant = contains(m, xm, tol)
    gap = distance(add(T1, T2, tol), T)
    strict = is_strict_sum(T1, T2, tol)
    pseudo = bool(direct and invariant and gap < tol.member)
    return Decomposition(
        T, T1, T2, K,
        strict=strict,
        pseudo_orthogonal=pseudo,
        direct_sum=bool(direct),
        mul_invariant=bool(invariant),
        reconstruction_gap=gap,
    )


def classify(d: Decomposition, tol: Tolerances | None = None) -> Decomposition:
    """Fill in ``lebesgue_type`` and ``orthogonal``.

    Besides the direct predicates, the two range conditions

        ran (I - K) ⊂ dom T*                (T1 closable)
        ran K ∩ dom T* ⊂ ker T*             (T2 singular)

    are evaluated and stored in ``certificates``; ``conditions_agree``
    records whether they give the same verdict.
    """
    tol = tol or DEFAULT_TOL
    t1_closable = is_closable(d.T1, tol)
    t2_singular = is_singular(d.T2, tol)
    lebesgue = bool(d.pseudo_orthogonal and t1_closable and t2_singular)

    Ts = adjoint(d.T)
    dom_s, ker_s = Ts.dom(tol), Ts.ker(tol)
    ran_x = orthonormalize(d.X, tol, scale=1.0)
    ran_k = orthonormalize(d.K, tol, scale=1.0)
    cond_a = contains(dom_s, image(d.X, ran_x, tol), tol)
    cond_b = contains(ker_s, intersect(ran_k, dom_s, tol), tol)
    orthogonal = bool(d.pseudo_orthogonal and is_orthogonal_projection(d.K, tol))
    certificates = dict(d.certificates)
    certificates.update(
        t1_closable=t1_closable,
        t2_singular=t2_singular,
        ran_x_in_dom_adjoint=cond_a,
        ran_k_cap_dom_adjoint_in_ker_adjoint=cond_b,
        conditions_agree=(cond_a == t1_closable and cond_b == t2_singular),
    )
    return replace(d, lebesgue_type=lebesgue, orthogonal=orthogonal, certificates=certificates)


def lebesgue_decomposition(T: LinearRelation, tol: Tolerances | None = None) -> Decomposition:
    """The canonical decomposition with ``K = P0``, the projection onto ``mul T``."""
    P0 = T.mul(tol).projector()
    return classify(decompose(T, P0, tol), tol)


# -- product criteria --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProductCriterion:
    """Verdict of a range criterion for ``R T`` together with its witnesses."""

    holds: bool
    direct: bool
    subspaces: dict
    necessary: bool | None = None

    @property
    def agrees(self) -> bool:
        return self.holds == self.direct


def closable_product_criterion(T: LinearRelation, R, tol: Tolerances | None = None) -> ProductCriterion:
    """``R T`` is closable iff ``{k ∈ ran R : R k ∈ dom T*} = ran R``.

    When the criterion holds, ``mul T ⊂ ker R`` must hold as well; that is
    stored as ``necessary``.
    """
    tol = tol or DEFAULT_TOL
    R = _contraction_for(T, R, tol)
    ran_r = orthonormalize(R, tol, scale=1.0)
    dom_s = adjoint(T).dom(tol)
    if ran_r.dim:
        B = ran_r.basis
        RB = R @ B
        C = null_space(RB - dom_s.basis @ (dom_s.basis.conj().T @ RB), tol, scale=1.0)
        D = orthonormalize(B @ C, tol, scale=1.0) if C.shape[1] else Subspace.zero(T.dim_k)
    else:
        D = Subspace.zero(T.dim_k)
    holds = D.dim == ran_r.dim
    ker_r = Subspace(null_space(R, tol, scale=1.0))
    necessary = contains(ker_r, T.mul(tol), tol) if holds else None
    direct = is_closable(multiply_left(R, T, tol), tol)
    return ProductCriterion(holds, direct, {"ran_R": ran_r, "dom_adjoint": dom_s, "D": D}, necessary)


def singular_product_criterion(T: LinearRelation, R, tol: Tolerances | None = None) -> ProductCriterion:
    """``R T`` is singular iff ``ran R ∩ dom T* ⊂ ker T*``.

    If ``ran T = K`` then ``ker T* = {0}`` and the test reads
    ``ran R ∩ dom T* = {0}``; ``necessary`` then records that both forms
    agree.
    """
    tol = tol or DEFAULT_TOL
    R = _contraction_for(T, R, tol)
    Ts = adjoint(T)
    ran_r = orthonormalize(R, tol, scale=1.0)
    dom_s, ker_s = Ts.dom(tol), Ts.ker(tol)
    cap = intersect(ran_r, dom_s, tol)
    holds = contains(ker_s, cap, tol)
    necessary = None
    if T.ran(tol).dim == T.dim_k:
        necessary = (cap.dim == 0) == holds
    direct = is_singular(multiply_left(R, T, tol), tol)
    subspaces = {"ran_R": ran_r, "dom_adjoint": dom_s, "ker_adjoint": ker_s, "intersection": cap}
    return ProductCriterion(holds, direct, subspaces, necessary)


# -- admissible contractions -------------------------------------------------


def admissible_K(T: LinearRelation, G, tol: Tolerances | None = None) -> np.ndarray:
    """``K = I ⊕ G`` on ``mul T ⊕ dom T*``.

    ``G`` is given as a matrix on the whole ``K``-space and has to live on
    ``dom T*``.  Raises ConditionsViolated naming the failed condition:
    ``"support"``, ``"contraction"``, ``"closable"`` (the part of ``ran (I - G)``
    mapped into ``dom T*`` must be all of it) or ``"singular"``
    (``ran G ∩ dom T* ⊂ ker T*``).
    """
    tol = tol or DEFAULT_TOL
    G = np.asarray(G, dtype=complex)
    if G.shape != (T.dim_k, T.dim_k):
        raise DimensionMismatch(f"G has shape {G.shape}, expected {(T.dim_k, T.dim_k)}")
    Ts = adjoint(T)
    dom_s, ker_s = Ts.dom(tol), Ts.ker(tol)
    Pd = dom_s.projector()
    scale = max(1.0, float(np.linalg.norm(G, 2)))
    if np.linalg.norm(G - Pd @ G @ Pd, 2) > tol.member * scale:
        raise ConditionsViolated("support", "G does not act on dom T* alone")
    try:
        check_contraction(G, tol)
    except ValueError as exc:
        raise ConditionsViolated("contraction", str(exc)) from exc

    # I - G as an operator on dom T*
    IG = Pd - G
    ran_ig = orthonormalize(IG, tol, scale=1.0)
    if ran_ig.dim:
        B = ran_ig.basis
        M = IG @ B
        C = null_space(M - Pd @ M, tol, scale=1.0)
        if C.shape[1] != ran_ig.dim:
            raise ConditionsViolated("closable", "(I - G) does not map its range into dom T*")
    ran_g = orthonormalize(G, tol, scale=1.0)
    if not contains(ker_s, intersect(ran_g, dom_s, tol), tol):
        raise ConditionsViolated("singular", "ran G ∩ dom T* is not contained in ker T*")
    return T.mul(tol).projector() + G


# -- domination ------------------------------------------------------------


def domination_leq(
    T1: LinearRelation,
    T2: LinearRelation,
    tol: Tolerances | None = None,
    psd_slack: float | None = None,
) -> bool:
    """Contractive domination ``T1 ≺_c T2`` between operators.

    True iff ``dom T2 ⊂ dom T1`` and ``||T1 h|| ≤ ||T2 h||`` on ``dom T2``.
    The quadratic forms are compared with slack ``psd_slack`` (default
    ``tau_psd``) scaled by ``max(1, ||T2||^2)``.
    """
    tol = tol or DEFAULT_TOL
    if (T1.dim_h, T1.dim_k) != (T2.dim_h, T2.dim_k):
        raise DimensionMismatch("relations act between different spaces")
    for name, T in (("T1", T1), ("T2", T2)):
        if not is_closable(T, tol):
            raise NotClosable(f"{name} has a nontrivial multivalued part")
    d2 = T2.dom(tol)
    if not contains(T1.dom(tol), d2, tol):
        return False
    if d2.dim == 0:
        return True
    M1, M2 = operator_part(T1, tol).matrix, operator_part(T2, tol).matrix
    B = d2.basis
    A1, A2 = M1 @ B, M2 @ B
    D = A2.conj().T @ A2 - A1.conj().T @ A1
    slack = (tol.psd if psd_slack is None else psd_slack) * max(1.0, float(np.linalg.norm(A2, 2)) ** 2)
    return bool(np.linalg.eigvalsh(0.5 * (D + D.conj().T))[0] >= -slack)


# -- range overlap ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RangeOverlap:
    direct: Subspace
    via_M: Subspace
    M: Subspace
    distance: float
    full_range: bool
    clos_direct: Subspace | None = None
    clos_xy: Subspace | None = None
    clos_distance: float | None = None


def range_overlap(T: LinearRelation, K, tol: Tolerances | None = None) -> RangeOverlap:
    """``ran T1 ∩ ran T2`` computed directly and as ``XY M``.

    ``M = {η ∈ ran T : X η ∈ ran T}``.  When ``ran T = K`` the identity
    ``ran T1 ∩ ran T2 = ran XY`` is also checked (ranges are closed here).
    """
    tol = tol or DEFAULT_TOL
    d = decompose(T, K, tol)
    if not d.pseudo_orthogonal:
        raise NotPseudoOrthogonal("K does not split mul T directly")
    X, Y = d.X, d.Y
    r1, r2 = d.T1.ran(tol), d.T2.ran(tol)
    direct = intersect(r1, r2, tol)
    ran_t = T.ran(tol)
    if ran_t.dim:
        B = ran_t.basis
        XB = X @ B
        C = null_space(XB - ran_t.basis @ (ran_t.basis.conj().T @ XB), tol, scale=1.0)
        M = orthonormalize(B @ C, tol, scale=1.0) if C.shape[1] else Subspace.zero(T.dim_k)
    else:
        M = Subspace.zero(T.dim_k)
    via = image(X @ Y, M, tol)
    result = dict(direct=direct, via_M=via, M=M, distance=subspace_distance(direct, via))
    full = ran_t.dim == T.dim_k
    if full:
        xy = orthonormalize(X @ Y, tol, scale=1.0)
        result.update(clos_direct=direct, clos_xy=xy, clos_distance=subspace_distance(direct, xy))
    return RangeOverlap(full_range=full, **result)


# -- Pythagorean property and the weakened conditions ------------------------


def _split_space(T1: LinearRelation, T2: LinearRelation, tol: Tolerances) -> np.ndarray:
    """Columns ``(f, g1, g2)`` spanning all pairs ``{f, g1} ∈ T1``, ``{f, g2} ∈ T2``."""
    C = null_space(np.hstack([T1.F, -T2.F]), tol, scale=1.0)
    n = T1.dim_h + 2 * T1.dim_k
    if C.shape[1] == 0:
        return np.zeros((n, 0), dtype=complex)
    a, b = C[: T1.dim], C[T1.dim:]
    return np.vstack([T1.F @ a, T1.G @ a, T2.G @ b])


def pythagorean_property(T: LinearRelation, K, tol: Tolerances | None = None) -> tuple[bool, float]:
    """Whether ``||g1 + g2||^2 = ||g1||_X^2 + ||g2||_Y^2`` for every admissible split.

    Splits range over all ``{f, g1} ∈ (I - K) T`` and ``{f, g2} ∈ K T``;
    the norm identity is a Hermitian form on that space and must vanish.
    Returns ``(holds, residual)`` where ``residual`` is the norm of the form
    on an orthonormal basis of the split space.  Equality ``T = T1 + T2`` is
    also required for ``holds``.
    """
    tol = tol or DEFAULT_TOL
    K = _contraction_for(T, K, tol)
    P = ContractionPair.from_k(K, tol)
    T1 = multiply_left(P.X, T, tol)
    T2 = multiply_left(P.Y, T, tol)
    S = _split_space(T1, T2, tol)
    n_h, n_k = T.dim_h, T.dim_k
    residual = 0.0
    if S.shape[1]:
        S = orthonormalize(S, tol, scale=1.0).basis
        G1, G2 = S[n_h:n_h + n_k], S[n_h + n_k:]
        Gs = G1 + G2
        form = Gs.conj().T @ Gs - P.space_x.gram(G1) - P.space_y.gram(G2)
        residual = float(np.linalg.norm(form, 2))
    equal = distance(add(T1, T2, tol), T) < tol.member
    return bool(equal and residual < tol.member), residual


@dataclass(frozen=True)
class AddendumResult:
    weak_b_prime: bool
    strict_equivalence: bool
    strict: bool
    weak_conditions: bool
    definition_conditions: bool


def addendum_check(T: LinearRelation, K, tol: Tolerances | None = None) -> AddendumResult:
    """Compare the weakened decomposition conditions with the standard ones.

    ``weak_b_prime`` is ``mul T1 ∩ mul T2 ⊂ XY mul T``.  The weak conditions
    are that inclusion plus ``T = T1 + T2``; each element of ``T`` then has
    the Pythagorean split ``{f, Xg} + {f, Yg}``.  ``strict_equivalence`` is
    true unless the sum is strict and the two sets of conditions disagree.
    """
    tol = tol or DEFAULT_TOL
    d = decompose(T, K, tol)
    cap = intersect(d.T1.mul(tol), d.T2.mul(tol), tol)
    xym = image(d.X @ d.Y, T.mul(tol), tol)
    weak_b = contains(xym, cap, tol)
    weak = bool(weak_b and d.reconstruction_gap < tol.member)
    definition = d.pseudo_orthogonal
    return AddendumResult(
        weak_b_prime=bool(weak_b),
        strict_equivalence=bool((not d.strict) or weak == definition),
        strict=d.strict,
        weak_conditions=weak,
        definition_conditions=definition,
    )


# -- uniqueness --------------------------------------------------------------


def random_hermitian_on(S: Subspace, rng: np.random.Generator, lo: float = 0.0, hi: float = 0.95) -> np.ndarray:
    """Hermitian matrix supported on ``S`` with eigenvalues uniform in ``[lo, hi]``."""
    n, r = S.ambient_dim, S.dim
    if r == 0:
        return np.zeros((n, n), dtype=complex)
    Z = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
    Q, _ = np.linalg.qr(Z)
    lam = rng.uniform(lo, hi, size=r)
    B = S.basis @ Q
    return (B * lam) @ B.conj().T


@dataclass(frozen=True)
class UniquenessReport:
    trials: int
    violations: int
    max_gap_reg: float
    max_gap_sing: float
    admissible_dim: int
    minimal: bool
    minimal_same_decomposition: bool | None


def uniqueness_check(
    T: LinearRelation,
    trials: int = 20,
    rng_seed=0,
    tol: Tolerances | None = None,
    delta: float = 0.05,
) -> UniquenessReport:
    """Sample admissible ``K = P0 + G`` and compare with the Lebesgue decomposition.

    ``G`` is Hermitian with spectrum in ``[0, 1 - delta]`` and supported on
    ``ker T* ∩ dom T*``.  Every sample must reproduce ``T_reg`` and
    ``T_sing``.  For ``ran T = K`` the report also says whether two distinct
    contractions that split ``mul T`` directly gave the same ``T1``.
    """
    tol = tol or DEFAULT_TOL
    rng = np.random.default_rng(rng_seed)
    T_reg, T_sing, _ = regular_singular_split(T, tol)
    Ts = adjoint(T)
    L = intersect(Ts.ker(tol), Ts.dom(tol), tol)
    violations = 0
    g_reg = g_sing = 0.0
    for _ in range(trials):
        G = random_hermitian_on(L, rng, 0.0, 1.0 - delta)
        d = classify(decompose(T, admissible_K(T, G, tol), tol), tol)
        a, b = distance(d.T1, T_reg), distance(d.T2, T_sing)
        g_reg, g_sing = max(g_reg, a), max(g_sing, b)
        if not d.lebesgue_type or a >= tol.member or b >= tol.member:
            violations += 1

    minimal = T.ran(tol).dim == T.dim_k
    same = None
    if minimal:
        m = T.mul(tol)
        rest = orthogonal_complement(m)
        K1 = m.projector() + random_hermitian_on(rest, rng, 0.0, 1.0)
        K2 = m.projector() + random_hermitian_on(rest, rng, 0.0, 1.0)
        if np.linalg.norm(K1 - K2, 2) > tol.member:
            same = distance(multiply_left(np.eye(T.dim_k) - K1, T, tol),
                            multiply_left(np.eye(T.dim_k) - K2, T, tol)) < tol.member
    return UniquenessReport(trials, violations, g_reg, g_sing, L.dim, minimal, same)
