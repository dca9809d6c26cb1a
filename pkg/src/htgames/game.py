"""Data model and coalition-value function for harvest/processing pooling games.

A *situation* is a roster of players, each with a season harvest (kg), a
processing capacity (kg) and a unit processing cost, plus one market price.
A coalition pools capacity and runs everything through its cheapest member
technology, so it earns ``(price - cheapest member cost) * min(total
capacity, total harvest)``.

Coalitions are plain ``int`` bitmasks over roster indices (bit ``i`` selects
``players[i]``); the full value table is a dense float array indexed by mask.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import EmptyCoalitionError, TooManyPlayersError, ValidationError

#: Relative tolerance for comparing monetary amounts.
MONEY_RTOL = 1e-9

#: Largest roster for which the dense 2**n table is built (memory guard:
#: one float64 table at n=25 is already ~268 MB).
DEFAULT_ENUM_CAP = 25

Coalition = int


def display_round(amount: float) -> int:
    """Round to whole currency units, halves away from zero (report convention)."""
    if amount >= 0:
        return int(math.floor(amount + 0.5))
    return -int(math.floor(-amount + 0.5))


@dataclass(frozen=True)
class Player:
    """One company: what it harvested, what it can process, at what unit cost."""

    id: str
    harvest_kg: float
    capacity_kg: float
    unit_cost: float


@dataclass(frozen=True)
class Situation:
    """A roster plus the market price.

    Player order defines coalition bit indices.  Build instances through
    :func:`validate` (or ``htgames.cli.parse_roster``); the dataclass itself
    does not re-check the pricing assumptions.
    """

    players: tuple[Player, ...]
    price: float

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.players)

    @cached_property
    def harvests(self) -> np.ndarray:
        return np.array([p.harvest_kg for p in self.players], dtype=np.float64)

    @cached_property
    def capacities(self) -> np.ndarray:
        return np.array([p.capacity_kg for p in self.players], dtype=np.float64)

    @cached_property
    def costs(self) -> np.ndarray:
        return np.array([p.unit_cost for p in self.players], dtype=np.float64)

    @cached_property
    def harvest_total(self) -> float:
        return float(sum(p.harvest_kg for p in self.players))

    @cached_property
    def capacity_total(self) -> float:
        return float(sum(p.capacity_kg for p in self.players))

    @property
    def min_cost(self) -> float:
        return min(p.unit_cost for p in self.players)

    @property
    def is_degenerate(self) -> bool:
        """True when every player's capacity equals its harvest (pooling
        capacity moves nothing; the reward-side rules are undefined)."""
        return all(p.capacity_kg == p.harvest_kg for p in self.players)

    def index_of(self, player_id: str) -> int:
        for i, p in enumerate(self.players):
            if p.id == player_id:
                return i
        raise KeyError(player_id)


# ---------------------------------------------------------------------------
# Coalition helpers


def coalition_of(indices: Iterable[int]) -> Coalition:
    """Bitmask selecting the given roster indices."""
    mask = 0
    for i in indices:
        if i < 0:
            raise ValueError(f"negative player index {i}")
        mask |= 1 << i
    return mask


def members(mask: Coalition) -> list[int]:
    """Roster indices selected by ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def coalition_label(mask: Coalition, ids: Sequence[str] | None = None) -> str:
    """Render a mask like ``{2,3}`` using player ids (1-based indices if absent)."""
    sel = members(mask)
    if ids is None:
        return "{" + ",".join(str(i + 1) for i in sel) + "}"
    return "{" + ",".join(ids[i] for i in sel) + "}"


def _check_mask(situation: Situation, mask: Coalition) -> None:
    if not 0 <= mask <= situation.full_mask:
        raise ValueError(f"mask {mask} out of range for {situation.n} players")


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    """One validation problem.  Codes: ``empty_roster``, ``non_positive_price``,
    ``negative_quantity``, ``cost_not_below_price``, ``degenerate``."""

    code: str
    message: str
    player_id: str | None = None


def find_violations(
    players: Iterable[Player], price: float, allow_degenerate: bool = False
) -> list[Violation]:
    """All validation problems of a raw roster, in roster order."""
    roster = tuple(players)
    out: list[Violation] = []
    if not roster:
        out.append(Violation("empty_roster", "roster has no players"))
    if not price > 0:
        out.append(Violation("non_positive_price", f"price {price!r} is not positive"))
    for p in roster:
        for field, qty in (("harvest_kg", p.harvest_kg), ("capacity_kg", p.capacity_kg)):
            if not qty >= 0:
                out.append(
                    Violation(
                        "negative_quantity",
                        f"player {p.id}: {field} {qty!r} is not a nonnegative quantity",
                        p.id,
                    )
                )
        if not p.unit_cost < price:
            out.append(
                Violation(
                    "cost_not_below_price",
                    f"player {p.id}: unit_cost {p.unit_cost!r} is not below price {price!r}",
                    p.id,
                )
            )
    if roster and not allow_degenerate and all(p.capacity_kg == p.harvest_kg for p in roster):
        out.append(
            Violation(
                "degenerate",
                "every player has capacity_kg == harvest_kg; pooling moves nothing "
                "(pass allow_degenerate to accept anyway)",
            )
        )
    return out


def validate(
    players: Iterable[Player], price: float, allow_degenerate: bool = False
) -> Situation:
    """Check the pricing and quantity assumptions and build a :class:`Situation`.

    Raises :class:`ValidationError` carrying every detected :class:`Violation`.
    With ``allow_degenerate=True`` an all-capacities-equal-harvests roster is
    accepted; callers can still warn via ``Situation.is_degenerate``.
    """
    roster = tuple(players)
    violations = find_violations(roster, price, allow_degenerate)
    if violations:
        raise ValidationError(violations)
    return Situation(roster, float(price))


# ---------------------------------------------------------------------------
# Characteristic function


class CoalitionStats(NamedTuple):
    """What a coalition pools: cheapest member cost, total capacity, total harvest."""

    min_cost: float
    capacity_kg: float
    harvest_kg: float


def coalition_stats(situation: Situation, coalition: Coalition) -> CoalitionStats:
    """Pool statistics of a nonempty coalition."""
    _check_mask(situation, coalition)
    if coalition == 0:
        raise EmptyCoalitionError("coalition statistics need at least one member")
    idx = members(coalition)
    min_cost = min(situation.players[i].unit_cost for i in idx)
    capacity = 0.0
    harvest = 0.0
    for i in idx:  # ascending, bit-identical to the table fill order
        capacity += situation.players[i].capacity_kg
        harvest += situation.players[i].harvest_kg
    return CoalitionStats(min_cost, capacity, harvest)


def value(situation: Situation, coalition: Coalition) -> float:
    """Profit a coalition secures on its own; 0.0 for the empty coalition."""
    if coalition == 0:
        _check_mask(situation, coalition)
        return 0.0
    stats = coalition_stats(situation, coalition)
    processed = min(stats.capacity_kg, stats.harvest_kg)
    return (situation.price - stats.min_cost) * processed


def subset_sums(weights: Sequence[float]) -> np.ndarray:
    """Per-mask totals: ``out[m]`` sums ``weights[i]`` over the set bits of ``m``.

    Accumulation runs in ascending bit order, so every entry is bit-identical
    to a sequential left-to-right sum over ``members(m)``.
    """
    w = np.asarray(weights, dtype=np.float64)
    out = np.zeros(1 << len(w))
    for i, wi in enumerate(w):
        out.reshape(-1, 2, 1 << i)[:, 1, :] += wi
    return out


def subset_min(weights: Sequence[float], empty: float = math.inf) -> np.ndarray:
    """Per-mask minima of ``weights`` over set bits; ``empty`` for mask 0."""
    w = np.asarray(weights, dtype=np.float64)
    out = np.full(1 << len(w), math.inf)
    for i, wi in enumerate(w):
        view = out.reshape(-1, 2, 1 << i)[:, 1, :]
        np.minimum(view, wi, out=view)
    out[0] = empty
    return out


@dataclass(frozen=True)
class GameTable:
    """Dense coalition-value table: ``values[m]`` is the worth of bitmask ``m``."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (1 << self.n,):
            raise ValueError(f"table for n={self.n} needs {1 << self.n} entries")
        if self.values[0] != 0.0:
            raise ValueError("the empty coalition must be worth exactly 0")
        self.values.setflags(write=False)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "GameTable":
        """Build a table from an explicit sequence (length must be a power of two)."""
        arr = np.array(values, dtype=np.float64)
        n = arr.size.bit_length() - 1
        return cls(n=n, values=arr)

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def grand_value(self) -> float:
        return float(self.values[-1])

    def __getitem__(self, mask: Coalition) -> float:
        return float(self.values[mask])


def enumerate_game(situation: Situation, cap: int = DEFAULT_ENUM_CAP) -> GameTable:
    """Fill the full 2**n coalition-value table.

    Deterministic; the vectorized fill is bit-identical to calling
    :func:`value` mask by mask.  Rosters above ``cap`` are refused instead of
    silently streaming, because downstream threshold scans need random access.
    """
    n = situation.n
    if n > cap:
        raise TooManyPlayersError(n, cap)
    processed = subset_sums(situation.capacities)
    harvests = subset_sums(situation.harvests)
    np.minimum(processed, harvests, out=processed)
    # margin of the empty coalition is forced to 0 so values[0] == 0 exactly
    cheapest = subset_min(situation.costs, empty=situation.price)
    values = (situation.price - cheapest) * processed
    return GameTable(n=n, values=values)


def subgame(situation: Situation, coalition: Coalition) -> Situation:
    """Restrict the roster to a coalition, keeping price and relative order.

    Coalition values inside the restriction agree exactly with the parent's
    values on the corresponding subsets.
    """
    _check_mask(situation, coalition)
    if coalition == 0:
        raise EmptyCoalitionError("cannot restrict to the empty coalition")
    roster = tuple(situation.players[i] for i in members(coalition))
    return Situation(roster, situation.price)
