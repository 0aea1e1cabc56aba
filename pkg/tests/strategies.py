"""Hypothesis strategies shared by the property tests."""

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from relkit import generators as gen

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=6)


@st.composite
def small_int_matrices(draw, max_rows=5, max_cols=5):
    """Integer-valued complex matrices; small entries make rank deficiency common."""
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    re = draw(hnp.arrays(np.int8, (r, c), elements=st.integers(-2, 2)))
    im = draw(hnp.arrays(np.int8, (r, c), elements=st.integers(-1, 1)))
    return re.astype(float) + 1j * im.astype(float)


@st.composite
def rngs(draw):
    return np.random.default_rng(draw(seeds))


@st.composite
def relations(draw, max_dim=6):
    rng = draw(rngs())
    return gen.random_relation(rng, max_dim)


@st.composite
def contraction_pairs(draw, max_dim=6):
    rng = draw(rngs())
    kind = draw(st.sampled_from(["mixed", "uniform", "projection", "strict"]))
    return gen.random_pair(draw(st.integers(1, max_dim)), rng, kind), rng
