"""Cooperative profit games for harvest/processing pooling.

Players share processing technology (everyone produces at the coalition's
cheapest unit cost) and processing capacity (surplus capacity absorbs
surplus harvest).  The package evaluates the coalition-value function,
computes the collaborative split and its two compensation variants plus the
combined rule, finds the exact tax-rate thresholds below which the taxed
rules stay coalitionally stable, and verifies stability and the structural
game properties by brute force.  ``htgames.cli`` drives everything from CSV
rosters; see the README for the file formats and the ``ht`` command.
"""

from .allocations import (
    Allocation,
    CompensationParams,
    PlayerSets,
    btc_allocation,
    capacity_binds,
    cheapest_players,
    co_allocation,
    co_weights,
    crc_allocation,
    htr_allocation,
    partition_sets,
)
from .analysis import (
    CoreReport,
    CoreViolation,
    InstanceParams,
    PropertyReport,
    check_convexity,
    check_monotonicity,
    check_nonnegativity,
    check_superadditivity,
    is_core,
    random_instance,
)
from .errors import (
    DegenerateSituationError,
    EmptyCoalitionError,
    HTGameError,
    InvalidRangeError,
    InvalidSimParamsError,
    LengthMismatchError,
    ParamAboveHalfThresholdError,
    RosterParseError,
    TableMismatchError,
    TooManyPlayersError,
    UnsupportedFormatError,
    ValidationError,
)
from .game import (
    Coalition,
    CoalitionStats,
    GameTable,
    Player,
    Situation,
    Violation,
    coalition_label,
    coalition_of,
    coalition_stats,
    display_round,
    enumerate_game,
    find_violations,
    members,
    subgame,
    subset_min,
    subset_sums,
    validate,
    value,
)
from .thresholds import (
    BindingCoalition,
    ThresholdReport,
    alpha_threshold,
    beta_threshold,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
