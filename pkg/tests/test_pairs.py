import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relkit import generators as gen
from relkit import lebesgue as lb
from relkit import pairs as pr
from relkit import relation as rel
from relkit.errors import DimensionMismatch, InvalidContraction, NotRegular
from relkit.subspace import DEFAULT_TOL, contains, image, subspace_distance, subspace_sum
from strategies import rngs

SETTINGS = settings(max_examples=50, deadline=None)
TAU = DEFAULT_TOL.member


@st.composite
def operator_pairs(draw):
    rng = draw(rngs())
    return pr.OperatorPair(*gen.random_operator_pair(rng, 6)), rng


def test_common_domain_required():
    with pytest.raises(DimensionMismatch):
        pr.OperatorPair(np.eye(2), np.eye(3))


def test_radon_nikodym_needs_regularity():
    with pytest.raises(NotRegular):
        pr.radon_nikodym(pr.OperatorPair(np.diag([1.0, 0.0]), np.eye(2)))


def test_pair_decompose_rejects_bad_k():
    with pytest.raises(InvalidContraction):
        pr.pair_decompose(pr.OperatorPair(np.eye(2), np.eye(2)), -np.eye(2))


def test_graph_and_pinv_radon_nikodym_agree():
    rng = np.random.default_rng(0)
    Phi = gen.complex_normal(rng, 4, 3)
    p = pr.OperatorPair(Phi, gen.complex_normal(rng, 2, 4) @ Phi)
    assert np.linalg.norm(pr.radon_nikodym(p) - pr.radon_nikodym_from_relation(p)) < 1e-8


@SETTINGS
@given(operator_pairs())
def test_relation_parts(case):
    p, _ = case
    T = pr.relation_of_pair(p)
    assert subspace_distance(T.dom(), pr._ran(p.Phi)) < TAU
    assert subspace_distance(T.ran(), pr._ran(p.Psi)) < TAU
    assert subspace_distance(T.mul(), pr.image_of_kernel(p)) < TAU


@SETTINGS
@given(operator_pairs())
def test_predicate_agreement(case):
    p, _ = case
    T = pr.relation_of_pair(p)
    reg, sing = pr.regularity_certificates(p), pr.singularity_certificates(p)
    assert len(set(reg.values())) == 1 and len(set(sing.values())) == 1
    assert reg["D_is_full"] == rel.is_closable(T)
    assert sing["ranges_disjoint"] == rel.is_singular(T)
    assert subspace_distance(pr.D_space(p), rel.adjoint(T).dom()) < TAU


@SETTINGS
@given(operator_pairs())
def test_lebesgue_pair(case):
    p, _ = case
    lp = pr.lebesgue_pair(p)
    assert lp.regular_part and lp.singular_part and lp.lebesgue_type and lp.pseudo_orthogonal
    assert np.array_equal(lp.Psi1 + lp.Psi2, (np.eye(p.dim_k) - lp.K) @ p.Psi + lp.K @ p.Psi)
    assert np.linalg.norm(lp.Psi1 + lp.Psi2 - p.Psi) < 1e-12 * max(1.0, np.linalg.norm(p.Psi))


@SETTINGS
@given(operator_pairs())
def test_radon_nikodym_residual(case):
    p, _ = case
    lp = pr.lebesgue_pair(p)
    R = pr.radon_nikodym(p.with_psi(lp.Psi1))
    assert np.linalg.norm(lp.Psi1 - R @ p.Phi, 2) <= 1e-10 * max(1.0, np.linalg.norm(p.Psi, 2))


@SETTINGS
@given(operator_pairs())
def test_regular_part_dominates(case):
    p, rng = case
    T = pr.relation_of_pair(p)
    d = pr.pair_decompose(p, lb.admissible_K(T, gen.random_lebesgue_G(T, rng)))
    lp = pr.lebesgue_pair(p)
    assert d.pseudo_orthogonal and d.lebesgue_type
    h = gen.complex_normal(rng, p.dim_e)
    assert np.linalg.norm(d.Psi1 @ h) <= np.linalg.norm(lp.Psi1 @ h) + 1e-9
    assert np.linalg.norm(d.Psi1 - lp.Psi1) < 1e-9 * max(1.0, np.linalg.norm(p.Psi))


@SETTINGS
@given(operator_pairs())
def test_sum_inclusion(case):
    p, rng = case
    K = gen.random_contraction(p.dim_k, rng)
    d = pr.pair_decompose(p, K)
    L = pr.relation_of_pair(p)
    S = rel.add(pr.relation_of_pair(p.with_psi(d.Psi1)), pr.relation_of_pair(p.with_psi(d.Psi2)))
    assert contains(S.graph, L.graph)
    ker_phi = pr.kernel_of(p.Phi)
    n = image(p.Psi, ker_phi)
    n_sum = subspace_sum(image(d.Psi1, ker_phi), image(d.Psi2, ker_phi))
    assert (rel.distance(S, L) < TAU) == (subspace_distance(n, n_sum) < TAU)
    if d.mul_direct:
        assert rel.distance(S, L) < TAU


@SETTINGS
@given(operator_pairs())
def test_pair_pythagorean(case):
    p, rng = case
    K = gen.random_sum3_K(pr.relation_of_pair(p), rng)
    lhs, rhs = pr.pythagorean_pair_check(p, K, gen.complex_normal(rng, p.dim_e))
    assert abs(lhs - rhs) <= 1e-10 * max(lhs, 1e-300)
