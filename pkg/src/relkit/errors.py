"""Exception hierarchy shared by all relkit modules."""


class RelkitError(Exception):
    """Base class for every error raised by relkit."""


class InvalidInput(RelkitError, ValueError):
    """Non-finite entries or malformed array shapes."""


class DimensionMismatch(RelkitError, ValueError):
    """Operands live in spaces of different dimension."""


class NotInRange(RelkitError, ValueError):
    """A vector is not an element of the requested operator range space."""


class IllConditioned(RelkitError, ValueError):
    """A membership decision falls inside the ambiguous residual band."""


class NotPositive(RelkitError, ValueError):
    """A matrix expected to be Hermitian positive semidefinite is not."""


class InvalidContraction(RelkitError, ValueError):
    """A matrix expected to be a nonnegative contraction is not."""


class ConditionsViolated(RelkitError, ValueError):
    """An admissibility condition on a generating contraction failed."""

    def __init__(self, condition: str, message: str = ""):
        self.condition = condition
        super().__init__(f"{condition}: {message}" if message else condition)


class NotClosable(RelkitError, ValueError):
    """A relation with nontrivial multivalued part was given where an operator is required."""


class NotPseudoOrthogonal(RelkitError, ValueError):
    """The decomposition does not satisfy the direct-sum condition on mul T."""


class NotRegular(RelkitError, ValueError):
    """Psi is not regular with respect to Phi."""
