"""Operator range spaces and complemented pairs ``X + Y = I``.

For a nonnegative contraction ``A`` the space ``ran A^{1/2}`` carries the
inner product ``<A^{1/2} p, A^{1/2} q>_A = <π p, π q>``, with ``π`` the
projection onto ``clos ran A^{1/2}``.  In coordinates this is
``<A^{1/2}+ u, A^{1/2}+ v>`` where ``+`` is the pseudoinverse, i.e. the
unitary identification ``p ↦ A^{1/2} p`` of ``clos ran A^{1/2}`` with the
range space, read backwards.

Square roots come from one Hermitian eigendecomposition.  Eigenvalues are
clamped to ``[0, 1]`` and those at or below ``tau_rank`` are set to zero,
so ``A``, ``A^{1/2}`` and the pseudoinverse share one numerical rank.  A
complemented pair reuses the eigenvectors of ``X`` for ``Y = I - X``, which
keeps all four roots exactly commuting.

Inner products are linear in the first argument: ``<u, v> = v^H u``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned, InvalidContraction, NotInRange, NotPositive
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    as_matrix,
    contains,
    direct_product,
    intersect,
    null_space,
    orthogonal_complement,
    orthonormalize,
    subspace_distance,
    subspace_sum,
)


def _inner(u: np.ndarray, v: np.ndarray) -> complex:
    return complex(np.vdot(v, u))


def hermitian_part(A) -> np.ndarray:
    A = as_matrix(A)
    return 0.5 * (A + A.conj().T)


def check_contraction(A, tol: Tolerances | None = None) -> np.ndarray:
    """Return the Hermitian part of ``A`` after checking ``0 ≤ A ≤ I``.

    Raises InvalidContraction otherwise.
    """
    tol = tol or DEFAULT_TOL
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise InvalidContraction(f"expected a square matrix, got shape {A.shape}")
    if np.linalg.norm(A - A.conj().T, 2) > tol.member:
        raise InvalidContraction("matrix is not Hermitian")
    H = hermitian_part(A)
    lam = np.linalg.eigvalsh(H)
    if lam[0] < -tol.psd:
        raise InvalidContraction(f"smallest eigenvalue {lam[0]:.3e} is negative")
    if lam[-1] > 1 + tol.psd:
        raise InvalidContraction(f"largest eigenvalue {lam[-1]:.6g} exceeds 1")
    return H


def is_orthogonal_projection(A, tol: Tolerances | None = None) -> bool:
    tol = tol or DEFAULT_TOL
    A = as_matrix(A)
    return bool(
        np.linalg.norm(A @ A - A, 2) <= tol.member and np.linalg.norm(A - A.conj().T, 2) <= tol.member
    )


def _clamped_spectrum(lam: np.ndarray, tol: Tolerances) -> np.ndarray:
    lam = np.clip(lam, 0.0, 1.0)
    lam[lam <= tol.rank] = 0.0
    return lam


class OperatorRangeSpace:
    """``ran A^{1/2}`` with its operator range inner product.

    Attributes ``A``, ``sqrtA``, ``pinv_sqrtA`` and ``range_basis`` are
    computed once at construction.
    """

    def __init__(self, A, tol: Tolerances | None = None, *, _eigh=None):
        self.tol = tol or DEFAULT_TOL
        if _eigh is None:
            self.A = check_contraction(A, self.tol)
            lam, V = np.linalg.eigh(self.A)
        else:
            lam, V = _eigh
            self.A = as_matrix(A)
        lam = _clamped_spectrum(np.array(lam, dtype=float), self.tol)
        root = np.sqrt(lam)
        inv_root = np.zeros_like(root)
        inv_root[lam > 0] = 1.0 / root[lam > 0]
        Vh = V.conj().T
        self.eigenvalues = lam
        self.eigenvectors = V
        self.sqrtA = (V * root) @ Vh
        self.pinv_sqrtA = (V * inv_root) @ Vh
        self.range_basis = Subspace(V[:, lam > 0])
        self.n = self.A.shape[0]

    def __repr__(self):
        return f"OperatorRangeSpace(n={self.n}, rank={self.range_basis.dim})"

    def membership_residual(self, u) -> float:
        u = np.asarray(u, dtype=complex).ravel()
        return float(self.range_basis.residual(u)[0] / max(1.0, np.linalg.norm(u)))

    def check_member(self, u) -> np.ndarray:
        """Return ``u`` as a vector, raising NotInRange or IllConditioned."""
        u = np.asarray(u, dtype=complex).ravel()
        r = self.membership_residual(u)
        if r >= 10 * self.tol.member:
            raise NotInRange(f"vector is not in ran A^(1/2) (residual {r:.3e})")
        if r >= self.tol.member:
            raise IllConditioned(f"membership in ran A^(1/2) is ambiguous (residual {r:.3e})")
        return u

    def coordinates(self, u) -> np.ndarray:
        """The unique ``p ∈ clos ran A^{1/2}`` with ``A^{1/2} p = u``."""
        return self.pinv_sqrtA @ self.check_member(u)

    def element(self, p) -> np.ndarray:
        return self.sqrtA @ np.asarray(p, dtype=complex).ravel()

    def inner(self, u, v) -> complex:
        return _inner(self.coordinates(u), self.coordinates(v))

    def norm_sq(self, u) -> float:
        p = self.coordinates(u)
        return float(np.real(np.vdot(p, p)))

    def gram(self, U) -> np.ndarray:
        """Gram matrix ``[<u_j, u_i>]`` of the columns of ``U``."""
        U = as_matrix(U, rows=self.n)
        C = np.column_stack([self.coordinates(U[:, j]) for j in range(U.shape[1])]) if U.shape[1] else U
        return C.conj().T @ C


def ors_inner(S: OperatorRangeSpace, u, v) -> complex:
    return S.inner(u, v)


class ContractionPair:
    """Nonnegative contractions ``X, Y`` with ``X + Y = I``."""

    def __init__(self, X, Y=None, tol: Tolerances | None = None):
        self.tol = tol or DEFAULT_TOL
        X = check_contraction(X, self.tol)
        n = X.shape[0]
        I = np.eye(n)
        if Y is None:
            Y = I - X
        else:
            Y = check_contraction(Y, self.tol)
            if Y.shape != X.shape:
                raise InvalidContraction("X and Y have different sizes")
            if np.linalg.norm(X + Y - I, 2) > self.tol.member:
                raise InvalidContraction("X + Y differs from the identity")
        self.n = n
        self.X = X
        self.Y = Y
        lam, V = np.linalg.eigh(X)
        lam = np.clip(lam, 0.0, 1.0)
        self.space_x = OperatorRangeSpace(X, self.tol, _eigh=(lam, V))
        self.space_y = OperatorRangeSpace(Y, self.tol, _eigh=(1.0 - lam, V))
        self.sqrtX = self.space_x.sqrtA
        self.sqrtY = self.space_y.sqrtA
        self.XY = X @ Y
        self.commutator_residual = float(np.linalg.norm(X @ Y - Y @ X, 2))
        if self.commutator_residual > self.tol.member:
            raise InvalidContraction(f"X and Y do not commute ({self.commutator_residual:.2e})")

    @classmethod
    def from_k(cls, K, tol: Tolerances | None = None) -> "ContractionPair":
        """The pair ``X = I - K``, ``Y = K`` generated by a contraction ``K``."""
        K = check_contraction(K, tol)
        return cls(np.eye(K.shape[0]) - K, K, tol)

    def __repr__(self):
        return f"ContractionPair(n={self.n})"

    @property
    def sqrt_xy(self) -> np.ndarray:
        """``X^{1/2} Y^{1/2} = (XY)^{1/2}``."""
        return self.sqrtX @ self.sqrtY

    def is_projection(self) -> bool:
        return is_orthogonal_projection(self.X, self.tol)


def _ran(M, tol) -> Subspace:
    return orthonormalize(M, tol, scale=1.0)


def _ker(M, tol) -> Subspace:
    return Subspace(null_space(M, tol, scale=1.0))


# -- overlapping space -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OverlapSpace:
    """``X ∩ Y = ran X^{1/2} Y^{1/2}`` with the summed inner product."""

    pair: ContractionPair
    basis: Subspace
    intersection: Subspace
    operator_space: OperatorRangeSpace
    intersection_distance: float
    inner_product_residual: float

    def inner(self, u, v) -> complex:
        return self.pair.space_x.inner(u, v) + self.pair.space_y.inner(u, v)

    def norm_sq(self, u) -> float:
        return self.pair.space_x.norm_sq(u) + self.pair.space_y.norm_sq(u)

    def gram(self) -> np.ndarray:
        """Gram matrix of the orthonormal (in ``K``) basis under the summed inner product."""
        return self.pair.space_x.gram(self.basis.basis) + self.pair.space_y.gram(self.basis.basis)

    @property
    def dim(self) -> int:
        return self.basis.dim


def overlap_space(P: ContractionPair) -> OverlapSpace:
    """Build the overlapping space and check that it is ``ran (XY)^{1/2}``.

    Two checks are recorded: the set identity
    ``ran X^{1/2} ∩ ran Y^{1/2} = ran X^{1/2} Y^{1/2}`` (as a gap), and the
    agreement of the summed inner product with the operator range inner
    product generated by ``XY`` (as a max Gram difference).
    """
    tol = P.tol
    lam = P.space_x.eigenvalues
    V = P.space_x.eigenvectors
    op_space = OperatorRangeSpace(P.XY, tol, _eigh=(lam * (1.0 - lam), V))
    basis = _ran(P.sqrt_xy, tol)
    cap = intersect(P.space_x.range_basis, P.space_y.range_basis, tol)
    dist = subspace_distance(cap, basis)
    residual = 0.0
    if basis.dim:
        summed = P.space_x.gram(basis.basis) + P.space_y.gram(basis.basis)
        # the XY range space can drop directions whose eigenvalue product underflows tau_rank
        if op_space.range_basis.dim == basis.dim:
            residual = float(np.max(np.abs(summed - op_space.gram(basis.basis))))
        else:
            residual = float("inf")
    return OverlapSpace(P, basis, cap, op_space, dist, residual)


# -- kernel / range identities ----------------------------------------------


@dataclass(frozen=True, eq=False)
class KLemmaReport:
    ker_xy: Subspace
    ker_x_plus_ker_y: Subspace
    ran_x_cap_ran_y: Subspace
    ran_xy: Subspace
    ran_sqrt_cap: Subspace
    ran_sqrt_xy: Subspace
    clos_ran_cap: Subspace
    clos_ran_xy: Subspace
    commutator_residual: float
    kernels_orthogonal: bool
    distances: dict

    @property
    def worst_distance(self) -> float:
        return max(self.distances.values())

    def passed(self, tol: Tolerances | None = None) -> bool:
        tol = tol or DEFAULT_TOL
        return (
            self.worst_distance < tol.member
            and self.commutator_residual < tol.member
            and self.kernels_orthogonal
        )


def klemma_report(P: ContractionPair) -> KLemmaReport:
    """Compute both sides of the kernel and range identities for a pair.

    * ``ker XY = ker X ⊕ ker Y``
    * ``ran X ∩ ran Y = ran XY``
    * ``ran X^{1/2} ∩ ran Y^{1/2} = ran X^{1/2} Y^{1/2}``
    * ``clos ran X ∩ clos ran Y = clos ran XY``

    All ranges are closed in finite dimensions, so the last identity is the
    second one computed from orthogonal complements of the kernels instead
    of from the ranges directly.
    """
    tol = P.tol
    ker_x, ker_y = _ker(P.X, tol), _ker(P.Y, tol)
    ker_xy = _ker(P.XY, tol)
    ker_sum = subspace_sum(ker_x, ker_y, tol)
    cross = ker_x.basis.conj().T @ ker_y.basis
    orthogonal = bool(cross.size == 0 or np.max(np.abs(cross)) < tol.member)

    ran_x, ran_y, ran_xy = _ran(P.X, tol), _ran(P.Y, tol), _ran(P.XY, tol)
    cap = intersect(ran_x, ran_y, tol)
    sqrt_cap = intersect(P.space_x.range_basis, P.space_y.range_basis, tol)
    ran_sqrt_xy = _ran(P.sqrt_xy, tol)
    clos_cap = intersect(orthogonal_complement(ker_x), orthogonal_complement(ker_y), tol)
    clos_xy = orthogonal_complement(ker_xy)
    distances = {
        "ker": subspace_distance(ker_xy, ker_sum),
        "ran": subspace_distance(cap, ran_xy),
        "ran_sqrt": subspace_distance(sqrt_cap, ran_sqrt_xy),
        "clos_ran": subspace_distance(clos_cap, clos_xy),
    }
    return KLemmaReport(
        ker_xy, ker_sum, cap, ran_xy, sqrt_cap, ran_sqrt_xy, clos_cap, clos_xy,
        P.commutator_residual, orthogonal, distances,
    )


# -- the W model ---------------------------------------------------------------


def build_W(P: ContractionPair) -> np.ndarray:
    """Column operator ``W = col(X^{1/2}, Y^{1/2})`` of shape ``2n × n``."""
    return np.vstack([P.sqrtX, P.sqrtY])


@dataclass(frozen=True, eq=False)
class WProjectionReport:
    W: np.ndarray
    WWh: np.ndarray
    block: np.ndarray
    isometry_residual: float
    idempotent_residual: float
    hermitian_residual: float
    block_residual: float
    kernel: Subspace
    kernel_formula: Subspace
    kernel_distance: float
    surjective: bool
    x_is_projection: bool


def _w_block(P: ContractionPair) -> np.ndarray:
    s = P.sqrt_xy
    return np.block([[P.X, s], [s.conj().T, P.Y]])


def W_projection(P: ContractionPair) -> WProjectionReport:
    """``W W^H`` together with its structural checks.

    ``W`` maps onto a subspace of ``K1 × K2`` (``K1 = clos ran X``,
    ``K2 = clos ran Y``), so surjectivity and ``ker W^H`` are taken relative
    to ``K1 × K2``.
    """
    tol = P.tol
    n = P.n
    W = build_W(P)
    WWh = W @ W.conj().T
    block = _w_block(P)
    k1 = orthogonal_complement(_ker(P.X, tol))
    k2 = orthogonal_complement(_ker(P.Y, tol))
    target = direct_product(k1, k2)
    ran_w = _ran(W, tol)
    kernel = intersect(target, orthogonal_complement(ran_w), tol)
    ran_xy = _ran(P.XY, tol)
    formula = orthonormalize(np.vstack([-P.sqrtY, P.sqrtX]) @ ran_xy.basis, tol, scale=1.0) \
        if ran_xy.dim else Subspace.zero(2 * n)
    return WProjectionReport(
        W=W,
        WWh=WWh,
        block=block,
        isometry_residual=float(np.linalg.norm(W.conj().T @ W - np.eye(n), 2)),
        idempotent_residual=float(np.linalg.norm(WWh @ WWh - WWh, 2)),
        hermitian_residual=float(np.linalg.norm(WWh - WWh.conj().T, 2)),
        block_residual=float(np.linalg.norm(WWh - block, 2)),
        kernel=kernel,
        kernel_formula=formula,
        kernel_distance=subspace_distance(kernel, formula),
        surjective=contains(ran_w, target, tol),
        x_is_projection=P.is_projection(),
    )


# -- the V model ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class VModel:
    """Coordinate realisation of ``V = col(X, Y): K → X × Y``.

    ``V_ambient`` holds the vectors ``(Xh, Yh)`` themselves; ``V_coords`` is
    the same map after identifying ``X × Y`` with ``K1 × K2`` through
    ``U = diag(X^{1/2}, Y^{1/2})``.  In these coordinates ``V`` becomes
    ``W``.
    """

    V_coords: np.ndarray
    V_ambient: np.ndarray
    U: np.ndarray
    isometry_residual: float
    uw_residual: float
    unitary_residual: float
    adjoint_residual: float
    projection_residual: float
    kernel_dim: int
    ran_xy_dim: int
    surjective: bool
    x_is_projection: bool


def V_adjoint(P: ContractionPair, f, g) -> np.ndarray:
    """``V^*(f, g)`` computed through coordinates, for ``f ∈ X``, ``g ∈ Y``."""
    a = P.space_x.coordinates(f)
    b = P.space_y.coordinates(g)
    return P.sqrtX @ a + P.sqrtY @ b


def V_model(P: ContractionPair) -> VModel:
    tol = P.tol
    n = P.n
    sx, sy = P.space_x, P.space_y
    V_amb = np.vstack([P.X, P.Y])
    V_coords = np.vstack([sx.pinv_sqrtA @ P.X, sy.pinv_sqrtA @ P.Y])
    U = np.block([[P.sqrtX, np.zeros((n, n))], [np.zeros((n, n)), P.sqrtY]])
    W = build_W(P)

    # U restricted to K1 × K2 must be unitary onto X × Y
    k1, k2 = sx.range_basis, sy.range_basis
    E1, E2 = P.sqrtX @ k1.basis, P.sqrtY @ k2.basis
    gram = np.zeros((k1.dim + k2.dim,) * 2, dtype=complex)
    if k1.dim:
        gram[: k1.dim, : k1.dim] = sx.gram(E1)
    if k2.dim:
        gram[k1.dim:, k1.dim:] = sy.gram(E2)
    unitary = float(np.linalg.norm(gram - np.eye(gram.shape[0]), 2)) if gram.size else 0.0

    # V^*(f, g) = f + g on basis elements of each range space
    adj = 0.0
    for j in range(k1.dim):
        f = E1[:, j]
        adj = max(adj, float(np.linalg.norm(V_adjoint(P, f, np.zeros(n)) - f)))
    for j in range(k2.dim):
        g = E2[:, j]
        adj = max(adj, float(np.linalg.norm(V_adjoint(P, np.zeros(n), g) - g)))

    # V V^* (f, g) = (X (f + g), Y (f + g)) on X × Y, checked on U-images of a basis
    proj = 0.0
    if k1.dim + k2.dim:
        B = direct_product(k1, k2).basis
        FG = U @ B
        VVh_coords = V_coords @ V_coords.conj().T
        lhs = U @ (VVh_coords @ B)
        S = FG[:n] + FG[n:]
        rhs = np.vstack([P.X @ S, P.Y @ S])
        proj = float(np.linalg.norm(lhs - rhs, 2))

    ran_v = _ran(V_coords, tol)
    target = direct_product(orthogonal_complement(_ker(P.X, tol)), orthogonal_complement(_ker(P.Y, tol)))
    kernel = intersect(target, orthogonal_complement(ran_v), tol)
    return VModel(
        V_coords=V_coords,
        V_ambient=V_amb,
        U=U,
        isometry_residual=float(np.linalg.norm(V_coords.conj().T @ V_coords - np.eye(n), 2)),
        uw_residual=float(np.linalg.norm(U @ W - V_amb, 2)),
        unitary_residual=unitary,
        adjoint_residual=adj,
        projection_residual=proj,
        kernel_dim=kernel.dim,
        ran_xy_dim=_ran(P.XY, tol).dim,
        surjective=contains(ran_v, target, tol),
        x_is_projection=P.is_projection(),
    )


def inek(P: ContractionPair, f, g) -> tuple[float, float, bool]:
    """``(||f + g||^2, ||f||_X^2 + ||g||_Y^2, (f, g) ∈ ran V)``.

    The first value never exceeds the second; they agree exactly when
    ``(f, g) = (Xh, Yh)``, and then necessarily ``h = f + g``.
    """
    f = np.asarray(f, dtype=complex).ravel()
    g = np.asarray(g, dtype=complex).ravel()
    h = f + g
    lhs = float(np.real(np.vdot(h, h)))
    rhs = P.space_x.norm_sq(f) + P.space_y.norm_sq(g)
    scale = max(1.0, float(np.linalg.norm(f)), float(np.linalg.norm(g)))
    in_ran = bool(
        np.linalg.norm(P.X @ h - f) <= P.tol.member * scale
        and np.linalg.norm(P.Y @ h - g) <= P.tol.member * scale
    )
    return lhs, rhs, in_ran


def pythagorean_check(P: ContractionPair, h) -> tuple[float, float]:
    """``(||h||^2, ||Xh||_X^2 + ||Yh||_Y^2)``; the two agree for every ``h``."""
    h = np.asarray(h, dtype=complex).ravel()
    lhs = float(np.real(np.vdot(h, h)))
    rhs = P.space_x.norm_sq(P.X @ h) + P.space_y.norm_sq(P.Y @ h)
    return lhs, rhs


# -- parallel sum ----------------------------------------------------------------


def _check_psd(A, tol: Tolerances, name: str) -> np.ndarray:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise NotPositive(f"{name} is not square")
    scale = max(1.0, float(np.linalg.norm(A, 2)))
    if np.linalg.norm(A - A.conj().T, 2) > tol.member * scale:
        raise NotPositive(f"{name} is not Hermitian")
    if np.linalg.eigvalsh(hermitian_part(A))[0] < -tol.psd * scale:
        raise NotPositive(f"{name} has a negative eigenvalue")
    return hermitian_part(A)


def parallel_sum(A, B, tol: Tolerances | None = None) -> np.ndarray:
    """``A : B = A (A + B)^+ B`` for Hermitian positive semidefinite ``A, B``."""
    tol = tol or DEFAULT_TOL
    A = _check_psd(A, tol, "A")
    B = _check_psd(B, tol, "B")
    if A.shape != B.shape:
        raise NotPositive("A and B have different sizes")
    S = A + B
    return A @ np.linalg.pinv(S, rcond=tol.rank, hermitian=True) @ B
