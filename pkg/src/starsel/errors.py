"""Exception hierarchy shared by every starsel module."""


class StarselError(Exception):
    """Base class for all errors raised by starsel."""


class FormatError(StarselError):
    """An instance document is malformed or violates an Instance invariant."""


class BudgetExceeded(StarselError):
    """A requested computation exceeds the configured enumeration budget."""


class UnknownReference(StarselError):
    """A predicate names a family or collection that is not declared."""

    def __init__(self, name):
        super().__init__(f"unknown reference: {name!r}")
        self.name = name


class PredicateSyntaxError(StarselError):
    """Predicate text does not conform to the grammar."""

    def __init__(self, position, expected, text=""):
        msg = f"at position {position}: expected {expected}"
        if text:
            msg += f"\n  {text}\n  {' ' * position}^"
        super().__init__(msg)
        self.position = position
        self.expected = expected


class ArityError(PredicateSyntaxError):
    """An atom received the wrong number of arguments."""


class TypeMismatch(StarselError):
    """A selection's kind does not match the principle's selector kind."""


class InvalidInputWitness(StarselError):
    """A witness handed to a theorem mapper does not replay on its instance."""


class MappedWitnessRejected(StarselError):
    """A witness produced by a theorem mapper failed replay.

    This indicates a bug in the theorem implementation; it must never be
    raised in a passing build.
    """
