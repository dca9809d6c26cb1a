"""Brute-force verification: core membership, structural game properties,
and seeded instance generation for randomized checks.

Everything here re-derives its verdicts straight from the dense value table,
so the checkers double as independent oracles for the closed-form machinery
in :mod:`htgames.allocations` and :mod:`htgames.thresholds`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidRangeError, LengthMismatchError, TooManyPlayersError
from .game import MONEY_RTOL, GameTable, Player, Situation, subset_sums

#: Default relative tolerance for core checks (scaled by max(1, grand value)).
DEFAULT_CORE_TOL = 1e-6

#: Largest roster for the pairwise (3**n-flavored) property scans.
DEFAULT_PAIRWISE_CAP = 12


@dataclass(frozen=True)
class CoreViolation:
    """One failed coalition-rationality constraint."""

    coalition: int
    coalition_value: float
    payout: float
    deficit: float


@dataclass(frozen=True)
class CoreReport:
    """Outcome of a full core-membership scan.

    ``violations`` lists offending proper coalitions, lowest mask first, up
    to the requested cap; ``violation_count`` counts all of them.
    ``max_deficit`` is the largest shortfall over proper nonempty coalitions
    (negative when every coalition has slack).
    """

    efficient: bool
    violations: tuple[CoreViolation, ...]
    violation_count: int
    max_deficit: float

    @property
    def in_core(self) -> bool:
        return self.efficient and self.violation_count == 0


def is_core(
    game_table: GameTable,
    allocation: Sequence[float],
    tolerance: float = DEFAULT_CORE_TOL,
    *,
    max_violations: int | None = 64,
) -> CoreReport:
    """Check efficiency and coalition rationality by scanning every mask.

    ``tolerance`` is relative: slack smaller than ``tolerance * max(1, grand
    value)`` counts as satisfied, matching the whole-unit rounding of the
    bundled datasets while still catching real violations.
    """
    amounts = [float(a) for a in allocation]
    if len(amounts) != game_table.n:
        raise LengthMismatchError(
            f"allocation has {len(amounts)} entries, table has {game_table.n} players"
        )
    payouts = subset_sums(amounts)
    grand = game_table.grand_value
    tol_abs = tolerance * max(1.0, grand)
    efficient = abs(float(payouts[-1]) - grand) <= tol_abs
    deficits = game_table.values - payouts
    deficits[0] = -math.inf  # the empty coalition never constrains
    if game_table.size > 1:
        deficits[-1] = -math.inf  # the grand coalition is the efficiency check
    bad = np.flatnonzero(deficits > tol_abs)
    count = int(bad.size)
    if max_violations is not None:
        bad = bad[:max_violations]
    violations = tuple(
        CoreViolation(
            int(m),
            float(game_table.values[m]),
            float(payouts[m]),
            float(deficits[m]),
        )
        for m in bad
    )
    max_deficit = float(deficits.max()) if game_table.size > 2 else 0.0
    return CoreReport(efficient, violations, count, max_deficit)


@dataclass(frozen=True)
class PropertyReport:
    """Verdict of one structural property check.

    ``witness`` is ``None`` when the property holds, otherwise a re-checkable
    counterexample whose exact shape each checker documents.
    """

    property: str
    holds: bool
    witness: tuple | None = None


def _tol_abs(table: GameTable, tolerance: float) -> float:
    return tolerance * max(1.0, float(np.max(np.abs(table.values))))


def check_nonnegativity(table: GameTable, tolerance: float = MONEY_RTOL) -> PropertyReport:
    """Every coalition value must be >= 0.  Witness: ``(mask, value)``."""
    tol = _tol_abs(table, tolerance)
    worst = int(table.values.argmin())
    if table.values[worst] >= -tol:
        return PropertyReport("nonnegative", True)
    return PropertyReport("nonnegative", False, (worst, float(table.values[worst])))


def check_monotonicity(table: GameTable, tolerance: float = MONEY_RTOL) -> PropertyReport:
    """Adding players must never lose value; checked over all one-bit
    extensions.  Witness: ``(sub_mask, super_mask, v_sub, v_super)``."""
    tol = _tol_abs(table, tolerance)
    v = table.values
    for i in range(table.n):
        block = v.reshape(-1, 2, 1 << i)
        drop = block[:, 0, :] - block[:, 1, :]
        if np.any(drop > tol):
            a, c = map(int, np.argwhere(drop > tol)[0])
            sub = a << (i + 1) | c
            sup = sub | (1 << i)
            return PropertyReport(
                "monotone", False, (sub, sup, float(v[sub]), float(v[sup]))
            )
    return PropertyReport("monotone", True)


def check_superadditivity(
    table: GameTable,
    tolerance: float = MONEY_RTOL,
    cap: int = DEFAULT_PAIRWISE_CAP,
) -> PropertyReport:
    """Merging disjoint coalitions must never lose value; checked over every
    unordered disjoint pair by submask iteration (about 3**n / 2 pairs).
    Witness: ``(s, t, v_s, v_t, v_union)``."""
    if table.n > cap:
        raise TooManyPlayersError(table.n, cap)
    tol = _tol_abs(table, tolerance)
    vals = table.values.tolist()
    for union in range(3, table.size):
        if union & (union - 1) == 0:
            continue  # singletons have no proper split
        s = (union - 1) & union
        while s:
            t = union ^ s
            if s < t and vals[s] + vals[t] - vals[union] > tol:
                return PropertyReport(
                    "superadditive", False, (s, t, vals[s], vals[t], vals[union])
                )
            s = (s - 1) & union
    return PropertyReport("superadditive", True)


def check_convexity(
    table: GameTable,
    tolerance: float = MONEY_RTOL,
    cap: int = DEFAULT_PAIRWISE_CAP,
) -> PropertyReport:
    """A player's marginal gain must never shrink when the coalition it joins
    grows; checked over all nested pairs.  Witness:
    ``(player, small_mask, big_mask, gain_small, gain_big)`` with both masks
    containing the player and ``gain_big < gain_small``."""
    if table.n > cap:
        raise TooManyPlayersError(table.n, cap)
    tol = _tol_abs(table, tolerance)
    vals = table.values.tolist()
    full = table.size - 1
    for i in range(table.n):
        bit = 1 << i
        rest = full ^ bit
        base = 0
        while True:  # ascending submasks of rest
            gain_small = vals[base | bit] - vals[base]
            rem = rest & ~base
            c = 0
            while True:  # ascending nonzero submasks of rem
                c = (c - rem) & rem
                if c == 0:
                    break
                big = base | c
                gain_big = vals[big | bit] - vals[big]
                if gain_big < gain_small - tol:
                    return PropertyReport(
                        "convex",
                        False,
                        (i, base | bit, big | bit, gain_small, gain_big),
                    )
            if base == rest:
                break
            base = (base - rest) & rest
    return PropertyReport("convex", True)


@dataclass(frozen=True)
class InstanceParams:
    """Ranges for seeded random rosters.  Defaults mirror the bundled
    case-study scale: quantities in whole kilograms, costs strictly below
    the price."""

    n: int
    capacity_range: tuple[float, float] = (10_000, 500_000)
    harvest_range: tuple[float, float] = (10_000, 500_000)
    cost_range: tuple[float, float] = (0.40, 0.60)
    price: float = 0.70
    seed: int = 0


def _int_bounds(lo: float, hi: float, what: str) -> tuple[int, int]:
    ilo, ihi = math.ceil(lo), math.floor(hi)
    if not 0 <= lo <= hi or ilo > ihi:
        raise InvalidRangeError(f"{what} range [{lo!r}, {hi!r}] is empty or negative")
    return ilo, ihi


def random_instance(params: InstanceParams) -> Situation:
    """Deterministic seeded roster within the given ranges.

    Capacities and harvests are drawn uniformly on the whole-kilogram grid of
    their ranges (keeps coalition totals exact in float64, like the bundled
    datasets); costs are continuous uniform.  Rosters where every capacity
    equals its harvest are redrawn.
    """
    if params.n < 1:
        raise InvalidRangeError(f"need at least one player, got n={params.n}")
    klo, khi = _int_bounds(*params.capacity_range, "capacity")
    qlo, qhi = _int_bounds(*params.harvest_range, "harvest")
    clo, chi = params.cost_range
    if not clo <= chi:
        raise InvalidRangeError(f"cost range [{clo!r}, {chi!r}] is empty")
    if not chi < params.price:
        raise InvalidRangeError(
            f"cost range must sit strictly below the price ({chi!r} >= {params.price!r})"
        )
    rng = np.random.default_rng(params.seed)
    for _ in range(100):
        capacities = rng.integers(klo, khi, size=params.n, endpoint=True)
        harvests = rng.integers(qlo, qhi, size=params.n, endpoint=True)
        costs = rng.uniform(clo, chi, size=params.n)
        if np.any(capacities != harvests):
            players = tuple(
                Player(str(i + 1), float(harvests[i]), float(capacities[i]), float(costs[i]))
                for i in range(params.n)
            )
            return Situation(players, float(params.price))
    raise InvalidRangeError(
        "ranges admit only capacity == harvest rosters; nothing to pool"
    )
