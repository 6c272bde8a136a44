"""Exception hierarchy.

InputError and its subclasses mark problems with user-supplied data
(bad files, invalid relations, unmet preconditions); the CLI turns them
into exit code 2.  RecoveryError marks a failed proof-step assertion
during canonical-form recovery, i.e. the evaluated map does not have
the structure it claims; the CLI turns it into exit code 1.
"""


class SmakitError(Exception):
    pass


class InputError(SmakitError):
    """User-supplied data is malformed or violates a precondition."""


class ParseError(InputError):
    pass


class FieldMismatchError(InputError):
    pass


class QuasiOrderError(InputError):
    pass


class MembershipError(InputError):
    """A matrix lies outside the algebra it was required to belong to."""


class SingularMatrixError(InputError):
    pass


class PreconditionError(InputError):
    """An operation refuses its input (e.g. counterexample without a
    singleton central class)."""


class SearchBudgetError(SmakitError):
    """A randomized search exceeded its draw budget.  The searched sets
    are Zariski-dense, so this is practically unreachable on valid
    input and signals a bug when it fires."""


class DiagonalizationError(SmakitError):
    """Inner diagonalization exhausted its search budget.  Existence is
    guaranteed for valid input, so this signals a bug, not bad data."""


class RecoveryError(SmakitError):
    """A recovery step's assertion failed.

    Carries which step and claim failed plus witness objects.  This is
    the structured signal that the black box does not preserve the
    claimed product or is not injective.
    """

    def __init__(self, step: int, claim: str, witnesses=()):
        self.step = step
        self.claim = claim
        self.witnesses = tuple(witnesses)
        super().__init__(f"recovery step {step}: {claim}")
