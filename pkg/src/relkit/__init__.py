"""Finite-dimensional linear relations, complemented range spaces and Lebesgue type decompositions."""

from .errors import (
    ConditionsViolated,
    DimensionMismatch,
    IllConditioned,
    InvalidContraction,
    InvalidInput,
    NotClosable,
    NotInRange,
    NotPositive,
    NotPseudoOrthogonal,
    NotRegular,
    RelkitError,
)
from .subspace import DEFAULT_TOL, Subspace, Tolerances
from .relation import LinearRelation
from .complementation import ContractionPair, OperatorRangeSpace
from .lebesgue import Decomposition
from .pairs import OperatorPair, PairDecomposition

__version__ = "0.1.0"
