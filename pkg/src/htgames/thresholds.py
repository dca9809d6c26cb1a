"""Exact stability thresholds for the two compensation rules.

Each taxed rule stays coalitionally stable exactly up to a largest tax rate,
obtained as a minimum of closed-form bounds over two coalition families.  The
scan enumerates every bitmask once and classifies it:

* one-sided family ("plain"): coalitions entirely on the taxed side lose tax
  money and gain nothing back, so each caps the rate at
  ``1 - value(S) / taxed-share(S)``;
* mixed family ("lambda" for the technology rule, "pi" for the reward rule):
  coalitions straddling both sides cap the rate only when their tax outflow
  strictly exceeds their share of the redistributed pool; the bound is
  ``(collaborative share(S) - value(S)) / net outflow(S)``;
* everything else is structurally satisfied for every rate.  Coalitions whose
  constraint holds for every rate because the relevant denominator vanishes
  (zero taxed share, or net outflow <= 0) are tallied in ``skipped``.

Coalition sums of the collaborative split are evaluated as pooled margin
times the coalition's weight total.  That is algebraically identical to
summing per-player shares but keeps zero-slack coalitions at *exactly* zero
in float arithmetic, so a threshold of 0 comes out as 0.0, not noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .allocations import cheapest_players, co_weights, partition_sets
from .errors import TableMismatchError
from .game import GameTable, Situation, subset_sums, value

#: Bounds within this relative distance of the minimum count as binding ties.
TIE_RTOL = 1e-9

#: Default cap on how many tied binding coalitions a report materializes.
DEFAULT_MAX_BINDING = 64


@dataclass(frozen=True)
class BindingCoalition:
    """One coalition attaining the threshold, with the branch that bound it."""

    coalition: int
    bound: float
    branch: str  # "plain" (one-sided family) or "lambda"/"pi" (mixed family)


@dataclass(frozen=True)
class ThresholdReport:
    """Result of a threshold scan.

    ``value`` is the minimum over every admissible bound (0.0, with ``note``
    set, when no coalition constrains the rate at all).  ``binding_coalitions``
    lists ties within :data:`TIE_RTOL` of the minimum, lowest mask first, up
    to the requested cap; ``binding_total`` counts all of them.  ``skipped``
    counts coalitions excluded because their constraint is vacuous (see the
    module docstring).
    """

    value: float
    binding_coalitions: tuple[BindingCoalition, ...]
    skipped: int
    binding_total: int = 0
    note: str | None = None


def _spot_check_table(situation: Situation, table: GameTable) -> None:
    """Cheap integrity check that the table came from this situation."""
    if table.n != situation.n:
        raise TableMismatchError(
            f"table has {table.n} players, situation has {situation.n}"
        )
    for mask in [situation.full_mask] + [1 << i for i in range(situation.n)]:
        if float(table.values[mask]) != value(situation, mask):
            raise TableMismatchError(
                f"table value for mask {mask} does not match the situation"
            )


def _collect(
    bounds: np.ndarray,
    mixed_branch: np.ndarray,
    mixed_tag: str,
    skipped: int,
    max_binding: int | None,
    empty_note: str,
) -> ThresholdReport:
    """Minimize over the per-mask bound array and assemble the report."""
    raw = float(bounds.min())
    if not np.isfinite(raw):
        return ThresholdReport(0.0, (), skipped, 0, empty_note)
    # real bounds are nonnegative because the collaborative split is stable;
    # clamp the sub-ulp noise that fractional-kg rosters can introduce
    val = raw if raw > 0.0 else 0.0
    cut = raw + TIE_RTOL * max(1.0, abs(raw))
    ties = np.flatnonzero(bounds <= cut)
    total = int(ties.size)
    if max_binding is not None:
        ties = ties[:max_binding]
    binding = tuple(
        BindingCoalition(
            int(m), float(bounds[m]), mixed_tag if mixed_branch[m] else "plain"
        )
        for m in ties
    )
    return ThresholdReport(val, binding, skipped, total, None)


def alpha_threshold(
    situation: Situation,
    game_table: GameTable,
    *,
    max_binding: int | None = DEFAULT_MAX_BINDING,
) -> ThresholdReport:
    """Largest best-technology tax rate that keeps the taxed rule stable.

    One pass over the table.  The one-sided family holds the coalitions that
    avoid the cheapest-cost set and have positive collaborative share; the
    mixed family holds the straddling coalitions whose taxed-side share
    strictly exceeds their headcount share of the redistributed pool.  With
    no admissible coalition at all (for example when every player is in the
    cheapest-cost set) the rule moves no money at any rate and the report
    carries value 0 with a note.
    """
    _spot_check_table(situation, game_table)
    n = situation.n
    margin = situation.price - situation.min_cost
    weights = co_weights(situation)
    m_set = cheapest_players(situation)
    m_count = len(m_set)
    in_m = np.array([i in m_set for i in range(n)])

    member_count = subset_sums(np.ones(n))
    m_members = subset_sums(np.where(in_m, 1.0, 0.0))
    share_sum = margin * subset_sums(weights)
    outside_sum = margin * subset_sums(np.where(in_m, 0.0, weights))
    pool = float(outside_sum[-1])  # total collaborative share outside the cheapest set
    v = game_table.values

    plain = m_members == 0
    plain[0] = False
    plain_ok = plain & (share_sum > 0)
    mixed = (m_members > 0) & (member_count > m_members)
    outflow = outside_sum - (m_members / m_count) * pool
    mixed_ok = mixed & (outflow > 0)
    skipped = int(np.count_nonzero(plain & ~plain_ok)) + int(
        np.count_nonzero(mixed & ~mixed_ok)
    )

    with np.errstate(divide="ignore", invalid="ignore"):
        bounds = np.where(plain_ok, 1.0 - v / share_sum, np.inf)
        bounds = np.where(mixed_ok, (share_sum - v) / outflow, bounds)

    return _collect(
        bounds,
        mixed_ok,
        "lambda",
        skipped,
        max_binding,
        "no coalition constrains the rate (the tax moves no money)",
    )


def beta_threshold(
    situation: Situation,
    game_table: GameTable,
    *,
    max_binding: int | None = DEFAULT_MAX_BINDING,
) -> ThresholdReport:
    """Largest crop-reward tax rate that keeps the reward rule stable.

    Same scan structure as :func:`alpha_threshold` with the taxed/rewarded
    partition of the reward rule: the one-sided family holds coalitions with
    no rewarded member but at least one taxed member; the mixed family
    ("pi") holds coalitions whose taxed-side share strictly exceeds their
    imbalance share of the redistributed pool.  Raises
    :class:`htgames.errors.DegenerateSituationError` when every player is
    balanced; reports 0 with a note when the taxed side is empty.
    """
    _spot_check_table(situation, game_table)
    n = situation.n
    sets = partition_sets(situation)  # raises on the all-balanced roster
    margin = situation.price - situation.min_cost
    weights = co_weights(situation)
    in_taxed = np.array([i in sets.taxed_set for i in range(n)])
    in_h = np.array([i in sets.h_set for i in range(n)])

    taxed_members = subset_sums(np.where(in_taxed, 1.0, 0.0))
    share_sum = margin * subset_sums(weights)
    taxed_sum = margin * subset_sums(np.where(in_taxed, weights, 0.0))
    pool = float(taxed_sum[-1])
    # per-mask rewarded-side imbalance; every term shares one sign, so a mask
    # contains a rewarded member exactly when its imbalance is nonzero
    imbalance = subset_sums(
        np.where(in_h, situation.harvests - situation.capacities, 0.0)
    )
    imbalance_total = float(imbalance[-1])
    v = game_table.values

    no_h = imbalance == 0
    plain = no_h & (taxed_members > 0)
    plain_ok = plain & (taxed_sum > 0)
    mixed = ~no_h & (taxed_members > 0)
    outflow = taxed_sum - (imbalance / imbalance_total) * pool
    mixed_ok = mixed & (outflow > 0)
    skipped = int(np.count_nonzero(plain & ~plain_ok)) + int(
        np.count_nonzero(mixed & ~mixed_ok)
    )

    with np.errstate(divide="ignore", invalid="ignore"):
        bounds = np.where(plain_ok, 1.0 - v / taxed_sum, np.inf)
        bounds = np.where(mixed_ok, (share_sum - v) / outflow, bounds)

    note = (
        "no coalition constrains the rate (taxed side empty; the reward moves no money)"
        if not sets.taxed_set
        else "no coalition constrains the rate (the reward moves no money)"
    )
    return _collect(bounds, mixed_ok, "pi", skipped, max_binding, note)
