import numpy as np
import pytest
from hypothesis import given, settings

from relkit import generators as gen
from relkit import relation as rel
from relkit.errors import DimensionMismatch, InvalidInput, NotClosable
from relkit.relation import LinearRelation
from relkit.subspace import (
    DEFAULT_TOL,
    Subspace,
    contains,
    image,
    intersect,
    orthogonal_complement,
    subspace_distance,
    subspace_sum,
)
from strategies import relations, rngs

SETTINGS = settings(max_examples=60, deadline=None)
TAU = DEFAULT_TOL.member


def test_components_must_be_positive():
    with pytest.raises(InvalidInput):
        LinearRelation(0, 2, Subspace.zero(2))


def test_graph_ambient_must_match():
    with pytest.raises(DimensionMismatch):
        LinearRelation(2, 2, Subspace.zero(3))


def test_multiply_left_shape():
    T = LinearRelation.from_operator(np.eye(2))
    with pytest.raises(DimensionMismatch):
        rel.multiply_left(np.eye(3), T)


def test_add_shape():
    with pytest.raises(DimensionMismatch):
        rel.add(LinearRelation.from_operator(np.eye(2)), LinearRelation.from_operator(np.ones((3, 2))))


def test_operator_part_of_multivalued_relation():
    T = LinearRelation.product(Subspace.zero(2), Subspace.full(2))
    with pytest.raises(NotClosable):
        rel.operator_part(T)


def test_operator_part_vanishes_off_the_domain():
    rng = np.random.default_rng(0)
    T = gen.random_relation(rng, 6, force_mul=False)
    op = rel.operator_part(T)
    off = orthogonal_complement(T.dom())
    if off.dim:
        assert np.linalg.norm(op.matrix @ off.basis) < TAU
    # every graph vector is reproduced
    assert np.linalg.norm(op.matrix @ T.F - T.G) < TAU


def test_closability_matches_dense_adjoint_domain():
    """Both closability criteria agree: mul T = 0 and dom T* = K."""
    for t in range(100):
        T = gen.random_relation(gen.trial_rng(1, "closable", t), 6)
        assert rel.is_closable(T) == (rel.adjoint(T).dom().dim == T.dim_k)


@SETTINGS
@given(relations())
def test_adjoint_is_an_involution(T):
    assert rel.distance(T, rel.adjoint(rel.adjoint(T))) < TAU


@SETTINGS
@given(relations())
def test_adjoint_dimension(T):
    assert T.dim + rel.adjoint(T).dim == T.dim_h + T.dim_k


@SETTINGS
@given(relations())
def test_adjoint_duality(T):
    Ts = rel.adjoint(T)
    assert subspace_distance(Ts.mul(), orthogonal_complement(T.dom())) < TAU
    assert subspace_distance(Ts.dom(), orthogonal_complement(T.mul())) < TAU


@SETTINGS
@given(relations())
def test_adjoint_pairing(T):
    Ts = rel.adjoint(T)
    # <f', k> = <f, h> for every {f, f'} in T and {k, h} in T*
    lhs = Ts.F.conj().T @ T.G
    rhs = Ts.G.conj().T @ T.F
    assert np.linalg.norm(lhs - rhs) < TAU


@SETTINGS
@given(relations())
def test_singular_duality(T):
    assert rel.is_singular(T) == rel.is_singular(rel.adjoint(T))
    # equivalently dom T ⊂ ker T
    assert rel.is_singular(T) == contains(T.ker(), T.dom())


@SETTINGS
@given(relations(), rngs())
def test_product_multivalued_part(T, rng):
    R = gen.random_contraction(T.dim_k, rng)
    RT = rel.multiply_left(R, T)
    assert subspace_distance(RT.mul(), image(R, T.mul())) < TAU
    assert subspace_distance(RT.dom(), T.dom()) < TAU


@SETTINGS
@given(relations())
def test_regular_singular_split(T):
    Treg, Tsing, P0 = rel.regular_singular_split(T)
    assert rel.is_closable(Treg) and rel.is_singular(Tsing)
    assert rel.distance(rel.add(Treg, Tsing), T) < TAU
    assert np.linalg.norm(P0 @ P0 - P0) < TAU


@SETTINGS
@given(relations(), rngs())
def test_sum_parts(T1, rng):
    T2 = gen.random_relation(rng, dim_h=T1.dim_h, dim_k=T1.dim_k)
    S = rel.add(T1, T2)
    assert subspace_distance(S.dom(), intersect(T1.dom(), T2.dom())) < TAU
    assert subspace_distance(S.mul(), subspace_sum(T1.mul(), T2.mul())) < TAU
