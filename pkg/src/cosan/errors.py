"""Exception types shared across the package.

Every exception carries an optional ``witness`` payload (a JSON-friendly
dict) so the CLI can surface concrete counterexamples.
"""


class CosanError(Exception):
    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class CodMismatch(CosanError):
    """Composition attempted with cod(f) != dom(g)."""


class DomMismatch(CosanError):
    """Pushout attempted on a span with different domains."""


class NotEpi(CosanError):
    """A surjection was required."""


class NotInjective(CosanError):
    """An injection was required."""


class NotSurjective(CosanError):
    """A surjection was required by a covariant coefficient action."""


class NonCommuting(CosanError):
    """A square handed to a pullback test does not commute."""


class OutOfWindow(CosanError):
    """An object size exceeds the tabulation window."""


class LevelMismatch(CosanError):
    """An element index does not belong to the level it was used at."""


class LevelUnavailable(CosanError):
    """A surjection-coefficient level is not materialized."""


class IllTyped(CosanError):
    """A transformation is undefined at the level it was applied at."""


class NotNatural(CosanError):
    """A levelwise family failed the naturality check."""


class IndexOutOfRange(CosanError):
    """A point or product index is outside its carrier."""


class ResourceBound(CosanError):
    """A computed level would exceed the configured size cap."""


class NonSemicartesian(CosanError):
    """Transformation extraction met a non-bijective epi component."""


class RoundTripMismatch(CosanError):
    """An extracted transformation failed to reproduce its tabulation."""


class SchemaError(CosanError):
    """An input file does not match its JSON schema."""
