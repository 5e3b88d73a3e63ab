"""Exception hierarchy shared by all modules.

``InputError`` subclasses signal bad user data (CLI exit code 1),
``HypothesisWarningEscalated`` carries --strict escalation (exit code 2), and
``InternalError`` marks violated internal invariants (exit code 3).
"""


class DoubleMirrorError(Exception):
    """Base class for all package errors."""


class InputError(DoubleMirrorError):
    """Invalid user-supplied data."""


class RankDeficiencyError(InputError):
    """Rows expected to be linearly independent are not."""


class NotSaturatedError(InputError):
    """A primitive/saturated basis was required but the input has torsion."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class LowerDimensionalError(InputError):
    """Full-dimensional input required; carries the affine hull dimension."""

    def __init__(self, message, affine_dim):
        super().__init__(message)
        self.affine_dim = affine_dim


class OriginNotInteriorError(InputError):
    """The origin is not strictly interior to the polytope."""


class LatticeMismatchError(InputError):
    """Operands live in different lattices."""


class UnboundedSliceError(InputError):
    """A cone slice that should be a polytope is unbounded."""


class NefPartitionError(InputError):
    """Base class for nef-partition validation failures."""


class OriginMissingError(NefPartitionError):
    """Some part does not contain the origin."""


class SumNotFullDimensionalError(NefPartitionError):
    """The Minkowski sum of the parts is not full-dimensional."""


class SumNotReflexiveError(NefPartitionError):
    """The Minkowski sum of the parts is not a reflexive polytope."""


class DegeneratePartError(NefPartitionError):
    """A part equals {0}, which would force a zero degree summand."""


class DecompositionError(InputError):
    """A degree-element decomposition violates one of its constraints."""


class NotGorensteinError(InputError):
    """Generator data does not define a (reflexive) Gorenstein cone."""


class DegenerateCoefficientsError(InputError):
    """A determinant vanished identically for the chosen coefficients."""


class InternalError(DoubleMirrorError):
    """An internal invariant failed; indicates a bug upstream."""
