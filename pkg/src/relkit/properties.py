"""Randomized property suites.

Each property draws one random instance from the generator it is given
and returns an :class:`Outcome` with a pass flag, the worst residual seen
and a dictionary of the individual measurements.  :func:`run_property`
loops over trials with one independent stream per trial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import complementation as cm
from . import generators as gen
from . import lebesgue as lb
from . import pairs as pr
from . import relation as rel
from .errors import ConditionsViolated
from .subspace import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    contains,
    image,
    intersect,
    orthogonal_complement,
    orthonormalize,
    same_subspace,
    subspace_distance,
    subspace_sum,
)


@dataclass
class Outcome:
    ok: bool
    residual: float = 0.0
    metrics: dict = field(default_factory=dict)


@dataclass
class PropertyReport:
    key: str
    trials: int
    passed: int
    worst_residual: float
    failures: list

    @property
    def ok(self) -> bool:
        return self.passed == self.trials


PROPERTIES: dict[str, Callable] = {}


def prop(key: str):
    def register(fn):
        PROPERTIES[key] = fn
        return fn
    return register


def _worst(*values) -> float:
    vals = [float(v) for v in values if v is not None and np.isfinite(v)]
    return max(vals) if vals else 0.0


def _dim(rng, max_dim: int) -> int:
    return int(rng.integers(1, max_dim + 1))


def _pair(rng, max_dim: int) -> cm.ContractionPair:
    kind = ("mixed", "uniform", "projection", "strict")[int(rng.integers(0, 4))]
    return gen.random_pair(_dim(rng, max_dim), rng, kind)


def run_property(key: str, seed: int, trials: int, max_dim: int, tol: Tolerances | None = None) -> PropertyReport:
    fn = PROPERTIES[key]
    tol = tol or DEFAULT_TOL
    passed, worst, failures = 0, 0.0, []
    for t in range(trials):
        out = fn(gen.trial_rng(seed, key, t), max_dim, tol)
        worst = max(worst, out.residual)
        if out.ok:
            passed += 1
        else:
            failures.append(t)
    return PropertyReport(key, trials, passed, worst, failures)


# -- subspace-core ---------------------------------------------------------------


@prop("subspace.orthonormalize-idempotent")
def _p_orth_idem(rng, max_dim, tol):
    n = _dim(rng, max_dim)
    r = int(rng.integers(0, n + 1))
    M = gen.complex_normal(rng, n, r) @ gen.complex_normal(rng, r, int(rng.integers(1, n + 2)))
    S = orthonormalize(M, tol)
    d = subspace_distance(S, orthonormalize(S.basis, tol))
    return Outcome(d < tol.member and S.dim == min(r, M.shape[1]), d)


@prop("subspace.dimension-formula")
def _p_dim_formula(rng, max_dim, tol):
    n = _dim(rng, max_dim)
    common = int(rng.integers(0, n + 1))
    base = gen.random_subspace(n, common, rng).basis
    a = int(rng.integers(0, n - common + 1))
    b = int(rng.integers(0, n - common - a + 1)) if rng.integers(0, 2) else int(rng.integers(0, n - common + 1))
    S1 = orthonormalize(np.hstack([base, gen.complex_normal(rng, n, a)]), tol)
    S2 = orthonormalize(np.hstack([base, gen.complex_normal(rng, n, b)]), tol)
    lhs = subspace_sum(S1, S2, tol).dim + intersect(S1, S2, tol).dim
    return Outcome(lhs == S1.dim + S2.dim)


@prop("subspace.complement-involution")
def _p_complement(rng, max_dim, tol):
    n = _dim(rng, max_dim)
    S = gen.random_subspace(n, int(rng.integers(0, n + 1)), rng)
    C = orthogonal_complement(S)
    d = subspace_distance(S, orthogonal_complement(C))
    ortho = float(np.max(np.abs(S.basis.conj().T @ C.basis))) if S.dim and C.dim else 0.0
    return Outcome(d < tol.member and ortho < tol.member and C.dim == n - S.dim, _worst(d, ortho))


@prop("subspace.containment-vs-distance")
def _p_contain(rng, max_dim, tol):
    n = _dim(rng, max_dim)
    A = gen.random_subspace(n, int(rng.integers(0, n + 1)), rng)
    mode = int(rng.integers(0, 3))
    if mode == 0:
        B = Subspace(A.basis @ gen.random_unitary(A.dim, rng)) if A.dim else A
    elif mode == 1 and A.dim:
        B = Subspace(A.basis[:, : int(rng.integers(0, A.dim + 1))])
    else:
        B = gen.random_subspace(n, int(rng.integers(0, n + 1)), rng)
    both = contains(A, B, tol) and contains(B, A, tol)
    return Outcome(both == (subspace_distance(A, B) < tol.member))


# -- relation-calculus -----------------------------------------------------------


@prop("relation.adjoint-involution")
def _p_adj_inv(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    Ts = rel.adjoint(T)
    d = rel.distance(T, rel.adjoint(Ts))
    return Outcome(d < tol.member and T.dim + Ts.dim == T.dim_h + T.dim_k, d)


@prop("relation.adjoint-duality")
def _p_adj_dual(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    Ts = rel.adjoint(T)
    d1 = subspace_distance(Ts.mul(tol), orthogonal_complement(T.dom(tol)))
    d2 = subspace_distance(Ts.dom(tol), orthogonal_complement(T.mul(tol)))
    d3 = subspace_distance(Ts.ker(tol), orthogonal_complement(T.ran(tol)))
    closable = rel.is_closable(T, tol) == (Ts.dom(tol).dim == T.dim_k)
    return Outcome(max(d1, d2, d3) < tol.member and closable, _worst(d1, d2, d3))


@prop("relation.singular-duality")
def _p_sing_dual(rng, max_dim, tol):
    if rng.integers(0, 2):
        m, n = _dim(rng, max_dim), _dim(rng, max_dim)
        T = rel.LinearRelation.product(
            gen.random_subspace(m, int(rng.integers(0, m + 1)), rng),
            gen.random_subspace(n, int(rng.integers(0, n + 1)), rng),
        )
        expect = True
    else:
        T = gen.random_relation(rng, max_dim)
        expect = None
    s = rel.is_singular(T, tol)
    also = contains(T.ker(tol), T.dom(tol), tol)
    ok = s == rel.is_singular(rel.adjoint(T), tol) and s == also and (expect is None or s == expect)
    return Outcome(ok)


@prop("relation.product-multivalued-part")
def _p_mul_product(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    R = gen.random_contraction(T.dim_k, rng)
    RT = rel.multiply_left(R, T, tol)
    d = subspace_distance(RT.mul(tol), image(R, T.mul(tol), tol))
    d2 = subspace_distance(RT.dom(tol), T.dom(tol))
    return Outcome(max(d, d2) < tol.member, _worst(d, d2))


@prop("relation.regular-singular-split")
def _p_split(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    Treg, Tsing, P0 = rel.regular_singular_split(T, tol)
    gap = rel.distance(rel.add(Treg, Tsing, tol), T)
    ok = gap < 1e-9 and rel.is_closable(Treg, tol) and rel.is_singular(Tsing, tol)
    return Outcome(ok, gap, {"gap": gap})


@prop("relation.sum-parts")
def _p_sum_parts(rng, max_dim, tol):
    m, n = _dim(rng, max_dim), _dim(rng, max_dim)
    T1 = gen.random_relation(rng, max_dim, dim_h=m, dim_k=n)
    T2 = gen.random_relation(rng, max_dim, dim_h=m, dim_k=n)
    S = rel.add(T1, T2, tol)
    d1 = subspace_distance(S.dom(tol), intersect(T1.dom(tol), T2.dom(tol), tol))
    d2 = subspace_distance(S.mul(tol), subspace_sum(T1.mul(tol), T2.mul(tol), tol))
    return Outcome(max(d1, d2) < tol.member, _worst(d1, d2))


# -- complementation -------------------------------------------------------------


@prop("complementation.kernel-range-identities")
def _p_klemma(rng, max_dim, tol):
    P = _pair(rng, max_dim)
    rep = cm.klemma_report(P)
    ok = rep.worst_distance < 1e-8 and rep.commutator_residual < tol.member and rep.kernels_orthogonal
    return Outcome(ok, rep.worst_distance, dict(rep.distances))


@prop("complementation.overlap-space")
def _p_overlap(rng, max_dim, tol):
    P = _pair(rng, max_dim)
    o = cm.overlap_space(P)
    scale = 1.0
    if o.dim:
        scale = max(1.0, float(np.max(np.abs(o.gram()))))
    rel_res = o.inner_product_residual / scale
    return Outcome(o.intersection_distance < 1e-8 and rel_res < 1e-9, _worst(o.intersection_distance, rel_res))


@prop("complementation.pythagorean-identity")
def _p_pyth(rng, max_dim, tol):
    P = _pair(rng, max_dim)
    h = gen.complex_normal(rng, P.n) * rng.uniform(0.1, 10.0)
    lhs, rhs = cm.pythagorean_check(P, h)
    err = abs(lhs - rhs) / max(lhs, np.finfo(float).tiny)
    return Outcome(abs(lhs - rhs) <= 1e-10 * lhs, err, {"relative_error": err})


@prop("complementation.w-model")
def _p_w(rng, max_dim, tol):
    P = _pair(rng, max_dim)
    w = cm.W_projection(P)
    ok = (
        w.isometry_residual < 1e-10
        and w.block_residual < 1e-9
        and w.idempotent_residual < 1e-9
        and w.hermitian_residual < 1e-9
        and w.kernel_distance < 1e-8
        and w.surjective == w.x_is_projection
    )
    m = dict(isometry=w.isometry_residual, block=w.block_residual, kernel=w.kernel_distance,
             surjective=w.surjective, projection=w.x_is_projection)
    return Outcome(ok, _worst(w.isometry_residual, w.block_residual, w.kernel_distance), m)


@prop("complementation.v-model")
def _p_v(rng, max_dim, tol):
    P = _pair(rng, max_dim)
    v = cm.V_model(P)
    res = _worst(v.isometry_residual, v.uw_residual, v.unitary_residual, v.adjoint_residual, v.projection_residual)
    ok = res < 1e-9 and v.kernel_dim == v.ran_xy_dim and v.surjective == v.x_is_projection
    # the norm inequality and its equality case
    h = gen.complex_normal(rng, P.n)
    lhs, rhs, inside = cm.inek(P, P.X @ h, P.Y @ h)
    ok = ok and inside and abs(lhs - rhs) <= 1e-9 * max(1.0, lhs)
    f = P.sqrtX @ gen.complex_normal(rng, P.n)
    g = P.sqrtY @ gen.complex_normal(rng, P.n)
    lhs, rhs, _ = cm.inek(P, f, g)
    ok = ok and lhs <= rhs + 1e-9 * max(1.0, rhs)
    if v.ran_xy_dim:
        k = P.sqrt_xy @ gen.complex_normal(rng, P.n)
        lhs, rhs, inside = cm.inek(P, k, -k)
        ok = ok and not inside and rhs - lhs > 1e-9 * max(1.0, float(np.vdot(k, k).real))
    return Outcome(bool(ok), res)


@prop("complementation.parallel-sum-projection")
def _p_parallel(rng, max_dim, tol):
    n = _dim(rng, max_dim)
    kind = ("projection", "mixed", "uniform", "strict")[int(rng.integers(0, 4))]
    K = gen.random_contraction(n, rng, kind)
    I = np.eye(n)
    ps = cm.parallel_sum(I - K, K, tol)
    norm = float(np.linalg.norm(ps, 2))
    idem = float(np.linalg.norm(K @ K - K, 2))
    sym = float(np.linalg.norm(ps - cm.parallel_sum(K, I - K, tol), 2))
    psd = float(np.linalg.eigvalsh(cm.hermitian_part(ps))[0])
    ok = (norm < 1e-8) == (idem < 1e-8) and sym < tol.member and psd > -tol.psd
    return Outcome(ok, sym, {"norm": norm, "idempotency": idem})


@prop("complementation.range-space-norms")
def _p_norms(rng, max_dim, tol):
    n = _dim(rng, max_dim)
    S = cm.OperatorRangeSpace(gen.random_contraction(n, rng), tol)
    phi, psi = gen.complex_normal(rng, n), gen.complex_normal(rng, n)
    u = S.sqrtA @ phi
    ineq = S.norm_sq(u) >= float(np.vdot(u, u).real) * (1 - 1e-12) - 1e-12
    a = S.inner(S.A @ phi, S.A @ psi)
    b = complex(np.vdot(psi, S.A @ phi))
    c = S.inner(S.sqrtA @ phi, S.A @ psi)
    d = complex(np.vdot(psi, S.sqrtA @ phi))
    err = max(abs(a - b), abs(c - d))
    # ran A sits inside ran A^(1/2) with the same closure
    ran_a = orthonormalize(S.A, tol, scale=1.0)
    same = contains(S.range_basis, ran_a, tol) and same_subspace(ran_a, S.range_basis, tol)
    return Outcome(bool(ineq and err < 1e-9 and same), err)


@prop("complementation.projection-inner-product")
def _p_proj_inner(rng, max_dim, tol):
    n = _dim(rng, max_dim)
    S = cm.OperatorRangeSpace(gen.random_contraction(n, rng, "projection"), tol)
    u, v = S.A @ gen.complex_normal(rng, n), S.A @ gen.complex_normal(rng, n)
    err = abs(S.inner(u, v) - complex(np.vdot(v, u)))
    return Outcome(err < 1e-9, err)


# -- lebesgue ----------------------------------------------------------------------


@prop("lebesgue.lebesgue-decomposition")
def _p_lebe(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    d = lb.lebesgue_decomposition(T, tol)
    Treg, Tsing, _ = rel.regular_singular_split(T, tol)
    gap = rel.distance(rel.add(Treg, Tsing, tol), T)
    ok = (
        gap < 1e-9
        and rel.is_closable(Treg, tol)
        and rel.is_singular(Tsing, tol)
        and d.strict and d.pseudo_orthogonal and d.lebesgue_type and d.orthogonal
    )
    return Outcome(bool(ok), gap, {"gap": gap})


@prop("lebesgue.product-criteria")
def _p_products(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    R = gen.random_R(T, rng)
    c = lb.closable_product_criterion(T, R, tol)
    s = lb.singular_product_criterion(T, R, tol)
    ok = c.agrees and s.agrees and c.necessary is not False and s.necessary is not False
    return Outcome(bool(ok), 0.0, {"closable": c.holds, "singular": s.holds})


def _full_range_relation(rng, max_dim):
    n = _dim(rng, max_dim)
    m = int(rng.integers(n, max(n, max_dim) + 1))
    M = gen.complex_normal(rng, n, m)
    T = rel.LinearRelation.from_operator(M)
    if rng.integers(0, 2):
        mul = gen.random_subspace(n, int(rng.integers(1, n + 1)), rng)
        T = rel.add(T, rel.LinearRelation.product(Subspace.full(m), mul))
    return T


@prop("lebesgue.range-overlap")
def _p_overlap_formula(rng, max_dim, tol):
    T = _full_range_relation(rng, max_dim) if rng.integers(0, 3) == 0 else gen.random_relation(rng, max_dim)
    K = gen.random_sum3_K(T, rng)
    ro = lb.range_overlap(T, K, tol)
    ok = ro.distance < 1e-8 and (ro.clos_distance is None or ro.clos_distance < 1e-8)
    if cm.is_orthogonal_projection(K, tol):
        ok = ok and ro.direct.dim == 0
    return Outcome(bool(ok), _worst(ro.distance, ro.clos_distance),
                   {"distance": ro.distance, "clos_distance": ro.clos_distance, "full_range": ro.full_range})


@prop("lebesgue.maximality")
def _p_max(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    Treg, _, P0 = rel.regular_singular_split(T, tol)
    G = gen.random_lebesgue_G(T, rng)
    d = lb.classify(lb.decompose(T, lb.admissible_K(T, G, tol), tol), tol)
    checked = 0
    ok = True
    if d.lebesgue_type:
        ok = lb.domination_leq(d.T1, Treg, tol, psd_slack=1e-9)
        checked += 1
    else:
        ok = False
    # wider family: any contraction on dom T* on top of P0 keeps T1 closable
    C = gen.contraction_on(orthogonal_complement(T.mul(tol)), rng)
    d2 = lb.classify(lb.decompose(T, P0 + C, tol), tol)
    if d2.lebesgue_type:
        ok = ok and lb.domination_leq(d2.T1, Treg, tol, psd_slack=1e-9)
        checked += 1
    T1 = rel.multiply_left(np.eye(T.dim_k) - P0 - C, T, tol)
    ok = ok and lb.domination_leq(T1, Treg, tol, psd_slack=1e-9)
    return Outcome(bool(ok), 0.0, {"lebesgue_type_checked": checked})


@prop("lebesgue.uniqueness")
def _p_unique(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    rep = lb.uniqueness_check(T, trials=2, rng_seed=int(rng.integers(0, 2**32)), tol=tol)
    gap = _worst(rep.max_gap_reg, rep.max_gap_sing)
    return Outcome(rep.violations == 0 and gap < 1e-9, gap, {"admissible_dim": rep.admissible_dim})


@prop("lebesgue.round-trip")
def _p_round(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    K = gen.random_sum3_K(T, rng)
    d = lb.decompose(T, K, tol)
    dom_gap = max(subspace_distance(d.T1.dom(tol), T.dom(tol)), subspace_distance(d.T2.dom(tol), T.dom(tol)))
    ok = d.pseudo_orthogonal and d.reconstruction_gap < tol.member and dom_gap < tol.member and d.strict
    return Outcome(bool(ok), _worst(d.reconstruction_gap, dom_gap))


@prop("lebesgue.pythagorean-implies-strict")
def _p_pyth_strict(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    K = gen.random_sum3_K(T, rng) if rng.integers(0, 2) else gen.random_contraction(T.dim_k, rng)
    holds, res = lb.pythagorean_property(T, K, tol)
    strict = rel.is_strict_sum(
        rel.multiply_left(np.eye(T.dim_k) - K, T, tol), rel.multiply_left(K, T, tol), tol
    )
    return Outcome((not holds) or strict, 0.0, {"pythagorean": holds, "strict": strict})


@prop("lebesgue.multivalued-intersection")
def _p_zwijn(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    K = gen.random_sum3_K(T, rng) if rng.integers(0, 2) else gen.random_contraction(T.dim_k, rng)
    d = lb.decompose(T, K, tol)
    if d.reconstruction_gap >= tol.member:
        return Outcome(True)
    m = T.mul(tol)
    X, Y = d.X, d.Y
    lhs = intersect(image(X, m, tol), image(Y, m, tol), tol)
    dist = subspace_distance(lhs, image(X @ Y, m, tol))
    return Outcome(dist < 1e-8, dist)


@prop("lebesgue.weakened-conditions")
def _p_addendum(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    K = gen.random_sum3_K(T, rng) if rng.integers(0, 2) else gen.random_contraction(T.dim_k, rng)
    a = lb.addendum_check(T, K, tol)
    ok = a.strict_equivalence and (not a.strict or a.weak_b_prime or not a.weak_conditions)
    return Outcome(bool(ok), 0.0, {"strict": a.strict, "weak_b_prime": a.weak_b_prime})


@prop("lebesgue.classification-conditions")
def _p_classify(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    mode = int(rng.integers(0, 3))
    if mode == 0:
        K = lb.admissible_K(T, gen.random_lebesgue_G(T, rng), tol)
    elif mode == 1:
        K = gen.random_sum3_K(T, rng)
    else:
        K = gen.random_contraction(T.dim_k, rng)
    d = lb.classify(lb.decompose(T, K, tol), tol)
    ok = d.certificates["conditions_agree"]
    if d.orthogonal:
        ok = ok and cm.is_orthogonal_projection(d.K, tol)
    if mode == 0:
        ok = ok and d.lebesgue_type
    return Outcome(bool(ok))


@prop("lebesgue.admissible-contractions")
def _p_admissible(rng, max_dim, tol):
    T = gen.random_relation(rng, max_dim)
    Ts = rel.adjoint(T)
    dom_s = Ts.dom(tol)
    G = gen.contraction_on(dom_s, rng)
    ran_g = orthonormalize(G, tol, scale=1.0)
    expect = contains(Ts.ker(tol), intersect(ran_g, dom_s, tol), tol)
    try:
        K = lb.admissible_K(T, G, tol)
        accepted = True
    except ConditionsViolated as exc:
        accepted = False
        if exc.condition != "singular":
            return Outcome(False)
    ok = accepted == expect
    if accepted:
        ok = ok and bool(lb.classify(lb.decompose(T, K, tol), tol).lebesgue_type)
    return Outcome(bool(ok))


# -- operator pairs ----------------------------------------------------------------


@prop("pairs.lebesgue-pair")
def _p_pair_lebe(rng, max_dim, tol):
    p = pr.OperatorPair(*gen.random_operator_pair(rng, max_dim))
    lp = pr.lebesgue_pair(p, tol)
    ok = lp.regular_part and lp.singular_part and lp.lebesgue_type and lp.pseudo_orthogonal
    recon = float(np.linalg.norm(lp.Psi1 + lp.Psi2 - p.Psi, 2))
    return Outcome(bool(ok and recon <= 1e-12 * max(1.0, np.linalg.norm(p.Psi, 2))), recon)


@prop("pairs.radon-nikodym")
def _p_rn(rng, max_dim, tol):
    p = pr.OperatorPair(*gen.random_operator_pair(rng, max_dim))
    lp = pr.lebesgue_pair(p, tol)
    reg = p.with_psi(lp.Psi1)
    R = pr.radon_nikodym(reg, tol)
    scale = max(1.0, float(np.linalg.norm(p.Psi, 2)))
    res = float(np.linalg.norm(lp.Psi1 - R @ p.Phi, 2)) / scale
    off = orthogonal_complement(orthonormalize(p.Phi, tol, scale=1.0))
    leak = float(np.linalg.norm(R @ off.basis, 2)) if off.dim else 0.0
    return Outcome(res <= 1e-10 and leak <= 1e-10 * scale, _worst(res, leak / scale), {"residual": res})


@prop("pairs.regular-part-dominates")
def _p_cor610(rng, max_dim, tol):
    p = pr.OperatorPair(*gen.random_operator_pair(rng, max_dim))
    T = pr.relation_of_pair(p, tol)
    K = lb.admissible_K(T, gen.random_lebesgue_G(T, rng), tol)
    d = pr.pair_decompose(p, K, tol)
    lp = pr.lebesgue_pair(p, tol)
    if not (d.pseudo_orthogonal and d.lebesgue_type):
        return Outcome(False)
    worst = 0.0
    for _ in range(3):
        h = gen.complex_normal(rng, p.dim_e)
        worst = max(worst, float(np.linalg.norm(d.Psi1 @ h) - np.linalg.norm(lp.Psi1 @ h)))
    return Outcome(worst <= 1e-9, max(worst, 0.0))


@prop("pairs.predicate-agreement")
def _p_pair_agree(rng, max_dim, tol):
    p = pr.OperatorPair(*gen.random_operator_pair(rng, max_dim))
    T = pr.relation_of_pair(p, tol)
    reg = pr.regularity_certificates(p, tol)
    sing = pr.singularity_certificates(p, tol)
    ok = (
        len(set(reg.values())) == 1
        and len(set(sing.values())) == 1
        and reg["D_is_full"] == rel.is_closable(T, tol)
        and sing["ranges_disjoint"] == rel.is_singular(T, tol)
    )
    d = subspace_distance(pr.D_space(p, tol), rel.adjoint(T).dom(tol))
    d2 = subspace_distance(pr.image_of_kernel(p, tol), T.mul(tol))
    return Outcome(bool(ok and d < tol.member and d2 < tol.member), _worst(d, d2))


@prop("pairs.sum-inclusion")
def _p_sum_incl(rng, max_dim, tol):
    p = pr.OperatorPair(*gen.random_operator_pair(rng, max_dim))
    K = gen.random_contraction(p.dim_k, rng)
    I = np.eye(p.dim_k)
    L = pr.relation_of_pair(p, tol)
    L1 = pr.relation_of_pair(p.with_psi((I - K) @ p.Psi), tol)
    L2 = pr.relation_of_pair(p.with_psi(K @ p.Psi), tol)
    S = rel.add(L1, L2, tol)
    incl = contains(S.graph, L.graph, tol)
    ker_phi = pr.kernel_of(p.Phi, tol)
    n = image(p.Psi, ker_phi, tol)
    n_sum = subspace_sum(image((I - K) @ p.Psi, ker_phi, tol), image(K @ p.Psi, ker_phi, tol), tol)
    eq = rel.same_relation(S, L, tol)
    return Outcome(bool(incl and eq == same_subspace(n, n_sum, tol)))


@prop("pairs.uniqueness")
def _p_pair_unique(rng, max_dim, tol):
    p = pr.OperatorPair(*gen.random_operator_pair(rng, max_dim))
    T = pr.relation_of_pair(p, tol)
    lp = pr.lebesgue_pair(p, tol)
    K = lb.admissible_K(T, gen.random_lebesgue_G(T, rng), tol)
    d = pr.pair_decompose(p, K, tol)
    scale = max(1.0, float(np.linalg.norm(p.Psi, 2)))
    diff = float(np.linalg.norm(d.Psi1 - lp.Psi1, 2)) / scale
    return Outcome(bool(d.lebesgue_type and diff < 1e-9), diff)


@prop("pairs.pythagorean")
def _p_pair_pyth(rng, max_dim, tol):
    p = pr.OperatorPair(*gen.random_operator_pair(rng, max_dim))
    T = pr.relation_of_pair(p, tol)
    K = gen.random_sum3_K(T, rng)
    eta = gen.complex_normal(rng, p.dim_e)
    lhs, rhs = pr.pythagorean_pair_check(p, K, eta, tol)
    err = abs(lhs - rhs) / max(lhs, np.finfo(float).tiny)
    return Outcome(abs(lhs - rhs) <= 1e-10 * lhs, err)
