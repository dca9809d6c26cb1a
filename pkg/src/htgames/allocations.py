"""Profit-allocation rules for the pooled grand coalition.

Every rule distributes exactly the grand-coalition profit.  The collaborative
split pays each player the pooled margin on its own capacity when capacity is
the binding side, and on its own harvest otherwise.  Two taxed rules move
money on top of that split:

* best-technology compensation: players outside the cheapest-cost group give
  up an ``alpha`` fraction of their collaborative share, paid out equally
  inside the cheapest-cost group;
* crop-reward compensation: players on the long side of the roster imbalance
  give up a ``beta`` fraction, paid to the short-side players in proportion
  to each one's own imbalance.

The combined rule stacks both taxes; it keeps coalitional stability only up
to half of each rule's threshold (see :mod:`htgames.thresholds`), which is
why it refuses larger parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DegenerateSituationError, ParamAboveHalfThresholdError
from .game import DEFAULT_ENUM_CAP, Situation, display_round


@dataclass(frozen=True)
class Allocation:
    """Per-player payout vector, index-aligned with the roster."""

    amounts: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.amounts)

    def __iter__(self) -> Iterator[float]:
        return iter(self.amounts)

    def __getitem__(self, i: int) -> float:
        return self.amounts[i]

    @property
    def total(self) -> float:
        return float(sum(self.amounts))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.amounts, dtype=np.float64)

    def display(self) -> tuple[int, ...]:
        """Whole-currency view, halves rounded away from zero."""
        return tuple(display_round(a) for a in self.amounts)


@dataclass(frozen=True)
class PlayerSets:
    """Index sets the compensation rules operate on.

    ``m_set``      players attaining the cheapest unit cost (all argmin ties);
    ``e_set``      players whose capacity equals their harvest (never taxed,
                   never rewarded);
    ``h_set``      the rewarded side: short on capacity when capacity binds
                   roster-wide, short on harvest otherwise;
    ``taxed_set``  everyone else.

    The three sets ``e_set``, ``h_set``, ``taxed_set`` partition the roster.
    """

    m_set: frozenset[int]
    e_set: frozenset[int]
    h_set: frozenset[int]
    taxed_set: frozenset[int]


@dataclass(frozen=True)
class CompensationParams:
    """Validated pair of tax fractions for the two compensation rules."""

    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha!r}")
        if not self.beta >= 0:
            raise ValueError(f"beta must be >= 0, got {self.beta!r}")


def capacity_binds(situation: Situation) -> bool:
    """True when total capacity is the binding side of the grand coalition."""
    return situation.capacity_total <= situation.harvest_total


def co_weights(situation: Situation) -> np.ndarray:
    """Per-player quantity the collaborative split is proportional to."""
    return situation.capacities if capacity_binds(situation) else situation.harvests


def cheapest_players(situation: Situation) -> frozenset[int]:
    """Indices attaining the minimum unit cost (exact-equality ties included)."""
    cmin = situation.min_cost
    return frozenset(i for i, p in enumerate(situation.players) if p.unit_cost == cmin)


def co_allocation(situation: Situation) -> Allocation:
    """Collaborative split: pooled margin times each player's binding-side quantity."""
    margin = situation.price - situation.min_cost
    return Allocation(tuple(margin * w for w in co_weights(situation)))


def partition_sets(situation: Situation) -> PlayerSets:
    """Compute the cheapest/balanced/rewarded/taxed index sets.

    Raises :class:`DegenerateSituationError` when every player is balanced
    (capacity == harvest), because then there is no rewarded side.
    """
    n = situation.n
    e_set = frozenset(
        i for i, p in enumerate(situation.players) if p.capacity_kg == p.harvest_kg
    )
    if len(e_set) == n:
        raise DegenerateSituationError(
            "every player has capacity_kg == harvest_kg; the rewarded side is undefined"
        )
    if capacity_binds(situation):
        h_set = frozenset(
            i for i, p in enumerate(situation.players) if p.capacity_kg < p.harvest_kg
        )
    else:
        h_set = frozenset(
            i for i, p in enumerate(situation.players) if p.capacity_kg > p.harvest_kg
        )
    taxed_set = frozenset(range(n)) - e_set - h_set
    # the roster-wide imbalance direction guarantees a nonempty rewarded side
    assert h_set, "rewarded side empty despite a non-balanced roster"
    return PlayerSets(cheapest_players(situation), e_set, h_set, taxed_set)


def btc_allocation(situation: Situation, alpha: float) -> Allocation:
    """Best-technology compensation at tax rate ``alpha``.

    Players outside the cheapest-cost group pay ``alpha`` of their
    collaborative share; the pool is split equally inside the group.  Defined
    for every ``alpha >= 0``; stability is a separate check.
    """
    if not alpha >= 0:
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    gamma = co_allocation(situation)
    m_set = cheapest_players(situation)
    pool = 0.0
    for j in range(situation.n):
        if j not in m_set:
            pool += gamma[j]
    bonus = alpha * pool / len(m_set)
    amounts = tuple(
        gamma[i] + bonus if i in m_set else gamma[i] - alpha * gamma[i]
        for i in range(situation.n)
    )
    return Allocation(amounts)


def crc_allocation(situation: Situation, beta: float) -> Allocation:
    """Crop-reward compensation at tax rate ``beta``.

    The taxed side pays ``beta`` of its collaborative share; balanced players
    keep theirs; the rewarded side splits the pool in proportion to each
    member's own capacity/harvest imbalance (shares are positive and sum to
    one).  Defined for every ``beta >= 0``.
    """
    if not beta >= 0:
        raise ValueError(f"beta must be >= 0, got {beta!r}")
    sets = partition_sets(situation)
    gamma = co_allocation(situation)
    pool = 0.0
    for j in range(situation.n):
        if j in sets.taxed_set:
            pool += gamma[j]
    imbalance = 0.0  # same sign for every rewarded member, hence nonzero
    for i in range(situation.n):
        if i in sets.h_set:
            imbalance += situation.players[i].harvest_kg - situation.players[i].capacity_kg
    amounts = []
    for i, p in enumerate(situation.players):
        if i in sets.e_set:
            amounts.append(gamma[i])
        elif i in sets.h_set:
            share = (p.harvest_kg - p.capacity_kg) / imbalance
            amounts.append(gamma[i] + share * beta * pool)
        else:
            amounts.append(gamma[i] - beta * gamma[i])
    return Allocation(tuple(amounts))


def htr_allocation(
    situation: Situation,
    alpha_star: float | None = None,
    beta_star: float | None = None,
    *,
    alpha_bar: float | None = None,
    beta_bar: float | None = None,
    cap: int = DEFAULT_ENUM_CAP,
) -> Allocation:
    """Combined rule: both compensations stacked on the collaborative split.

    ``alpha_star``/``beta_star`` default to half the stability thresholds,
    which is the largest pair the combined rule's stability argument covers;
    larger values raise :class:`ParamAboveHalfThresholdError`.  Pass
    ``alpha_bar``/``beta_bar`` to reuse precomputed thresholds, otherwise the
    full table is enumerated here (subject to ``cap``).

    When one threshold is zero the corresponding compensation is a no-op and
    the rule falls back to the other one alone (or to the plain collaborative
    split when both are zero).
    """
    if alpha_bar is None or beta_bar is None:
        from .game import enumerate_game
        from .thresholds import alpha_threshold, beta_threshold

        table = enumerate_game(situation, cap)
        if alpha_bar is None:
            alpha_bar = alpha_threshold(situation, table).value
        if beta_bar is None:
            beta_bar = beta_threshold(situation, table).value
    half_alpha = alpha_bar / 2
    half_beta = beta_bar / 2
    if alpha_star is None:
        alpha_star = half_alpha
    if beta_star is None:
        beta_star = half_beta
    if not alpha_star >= 0:
        raise ValueError(f"alpha_star must be >= 0, got {alpha_star!r}")
    if not beta_star >= 0:
        raise ValueError(f"beta_star must be >= 0, got {beta_star!r}")
    # tiny slack so that passing exactly bar/2 survives float formatting
    if alpha_star > half_alpha + 1e-12 * (1.0 + half_alpha):
        raise ParamAboveHalfThresholdError("alpha_star", alpha_star, half_alpha)
    if beta_star > half_beta + 1e-12 * (1.0 + half_beta):
        raise ParamAboveHalfThresholdError("beta_star", beta_star, half_beta)

    if alpha_bar == 0 and beta_bar == 0:
        return co_allocation(situation)
    if beta_bar == 0:
        return btc_allocation(situation, alpha_star)
    if alpha_bar == 0:
        return crc_allocation(situation, beta_star)
    gamma = co_allocation(situation)
    taxed = btc_allocation(situation, alpha_star)
    rewarded = crc_allocation(situation, beta_star)
    return Allocation(
        tuple(t + r - g for t, r, g in zip(taxed, rewarded, gamma))
    )
