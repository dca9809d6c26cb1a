"""Exception types shared across the package."""

from __future__ import annotations


class HTGameError(Exception):
    """Base class for every error this package raises on purpose."""


class ValidationError(HTGameError):
    """A roster failed validation.  ``violations`` lists every problem found."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__(
            "invalid situation: " + "; ".join(v.message for v in self.violations)
        )


class DegenerateSituationError(HTGameError):
    """Every player has capacity equal to harvest, so the reward-side rules
    (compensated set, crop-reward split) are undefined."""


class EmptyCoalitionError(HTGameError):
    """An operation that needs at least one member got the empty coalition."""


class TooManyPlayersError(HTGameError):
    """Roster exceeds the enumeration cap for a full 2**n scan."""

    def __init__(self, n: int, cap: int):
        self.n = n
        self.cap = cap
        super().__init__(f"{n} players exceed the enumeration cap of {cap}")


class TableMismatchError(HTGameError):
    """A game table was built from a different situation than the one given."""


class LengthMismatchError(HTGameError):
    """Allocation length does not match the table's player count."""


class InvalidRangeError(HTGameError):
    """Instance-generation ranges are empty or violate the pricing assumption."""


class InvalidSimParamsError(HTGameError):
    """Cost-simulation parameters cannot produce valid draws."""


class ParamAboveHalfThresholdError(HTGameError):
    """A combined-rule parameter exceeds half its stability threshold, which
    voids the rule's stability guarantee."""

    def __init__(self, name: str, given: float, limit: float):
        self.name = name
        self.given = given
        self.limit = limit
        super().__init__(f"{name}={given!r} exceeds half the threshold ({limit!r})")


class RosterParseError(HTGameError):
    """A roster or allocation CSV could not be parsed."""

    def __init__(self, line: int, reason: str, field: str | None = None):
        self.line = line
        self.field = field
        self.reason = reason
        where = f"line {line}" + (f", column {field!r}" if field else "")
        super().__init__(f"{where}: {reason}")


class UnsupportedFormatError(HTGameError):
    """Unknown report format name."""
