import numpy as np
import pytest

from htgames import (
    EmptyCoalitionError,
    GameTable,
    Player,
    TooManyPlayersError,
    ValidationError,
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
from htgames.analysis import InstanceParams, random_instance

from conftest import NAPA_PLAYERS
from oracles import oracle_table

# Reference three-player game table, keyed by coalition bitmask.
NAPA_TABLE = {
    0b001: 148500,
    0b010: 170100,
    0b100: 109600,
    0b011: 348300,
    0b101: 312000,
    0b110: 356400,
    0b111: 554400,
}


# ---------------------------------------------------------------------------
# validation


def test_validate_napa_ok(napa):
    assert napa.n == 3
    assert napa.price == 1.70
    assert not napa.is_degenerate


def test_validate_degenerate_single_player():
    p = Player("1", harvest_kg=100, capacity_kg=100, unit_cost=0.5)
    with pytest.raises(ValidationError) as exc:
        validate([p], 1.0)
    assert [v.code for v in exc.value.violations] == ["degenerate"]
    situation = validate([p], 1.0, allow_degenerate=True)
    assert situation.is_degenerate


def test_validate_cost_not_below_price():
    players = list(NAPA_PLAYERS)
    players[0] = Player("1", harvest_kg=198000, capacity_kg=253000, unit_cost=1.80)
    with pytest.raises(ValidationError) as exc:
        validate(players, 1.70)
    (violation,) = exc.value.violations
    assert violation.code == "cost_not_below_price"
    assert violation.player_id == "1"


def test_validate_collects_all_violations():
    bad = [
        Player("a", harvest_kg=-5, capacity_kg=10, unit_cost=2.0),
        Player("b", harvest_kg=3, capacity_kg=-1, unit_cost=0.1),
    ]
    violations = find_violations(bad, price=0.0)
    codes = sorted(v.code for v in violations)
    assert codes == [
        "cost_not_below_price",
        "cost_not_below_price",
        "negative_quantity",
        "negative_quantity",
        "non_positive_price",
    ]


def test_validate_empty_roster():
    violations = find_violations([], price=1.0)
    assert [v.code for v in violations] == ["empty_roster"]


# ---------------------------------------------------------------------------
# coalition helpers


def test_coalition_roundtrip():
    mask = coalition_of([0, 2, 5])
    assert mask == 0b100101
    assert members(mask) == [0, 2, 5]
    assert coalition_label(mask) == "{1,3,6}"
    assert coalition_label(mask, ("a", "b", "c", "d", "e", "f")) == "{a,c,f}"


def test_coalition_stats_reference_rows(napa):
    stats = coalition_stats(napa, 0b101)  # players 1 and 3
    assert stats == (0.9, 390000, 427000)
    stats = coalition_stats(napa, 0b010)
    assert stats == (0.8, 259000, 189000)


def test_coalition_stats_singleton_identity(napa):
    for i, p in enumerate(napa.players):
        stats = coalition_stats(napa, 1 << i)
        assert stats == (p.unit_cost, p.capacity_kg, p.harvest_kg)


def test_coalition_stats_empty_rejected(napa):
    with pytest.raises(EmptyCoalitionError):
        coalition_stats(napa, 0)
    with pytest.raises(ValueError):
        coalition_stats(napa, 1 << napa.n)


# ---------------------------------------------------------------------------
# characteristic function


def test_value_napa_table(napa):
    for mask, expected in NAPA_TABLE.items():
        assert display_round(value(napa, mask)) == expected


def test_value_empty_coalition(napa):
    assert value(napa, 0) == 0.0


def test_value_singleton_uses_own_margin(napa):
    # the margin is price minus the member's own cost, whatever the roster's
    # cheapest technology is: 0.75 * 198000, not 0.77 * anything
    assert value(napa, 0b001) == pytest.approx(0.75 * 198000, rel=1e-12)


def test_enumerate_game_napa(napa):
    table = enumerate_game(napa)
    assert table.n == 3
    assert table.values[0] == 0.0
    for mask, expected in NAPA_TABLE.items():
        assert display_round(table[mask]) == expected


def test_enumerate_game_single_player():
    situation = validate([Player("1", harvest_kg=80, capacity_kg=100, unit_cost=0.5)], 1.0)
    table = enumerate_game(situation)
    assert table.values.tolist() == [0.0, 40.0]


def test_enumerate_game_cap():
    situation = random_instance(InstanceParams(n=4, seed=3))
    with pytest.raises(TooManyPlayersError):
        enumerate_game(situation, cap=3)


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_enumerate_matches_per_mask_value_bit_exactly(seed):
    situation = random_instance(InstanceParams(n=7, seed=seed))
    table = enumerate_game(situation)
    direct = [value(situation, m) for m in range(table.size)]
    assert table.values.tolist() == direct


@pytest.mark.parametrize("seed", [2, 11])
def test_enumerate_matches_oracle(seed):
    situation = random_instance(InstanceParams(n=6, seed=seed))
    table = enumerate_game(situation)
    expected = oracle_table(situation)
    assert np.allclose(table.values, expected, rtol=1e-12, atol=0)


def test_table_is_read_only(napa):
    table = enumerate_game(napa)
    with pytest.raises(ValueError):
        table.values[3] = 1.0


def test_game_table_from_values_checks_empty_coalition():
    with pytest.raises(ValueError):
        GameTable.from_values([1.0, 2.0])
    table = GameTable.from_values([0.0, 5.0, 5.0, 8.0])
    assert table.n == 2
    assert table.grand_value == 8.0


# ---------------------------------------------------------------------------
# subgames


def test_subgame_full_is_identity(napa):
    assert subgame(napa, napa.full_mask) == napa


def test_subgame_pair_value(napa):
    sub = subgame(napa, 0b011)
    assert sub.n == 2
    assert display_round(value(sub, 0b11)) == 348300


def test_subgame_empty_rejected(napa):
    with pytest.raises(EmptyCoalitionError):
        subgame(napa, 0)


@pytest.mark.parametrize("seed", [5, 9])
def test_subgame_consistency_exact(seed):
    situation = random_instance(InstanceParams(n=6, seed=seed))
    parent = enumerate_game(situation)
    mask = 0b101101
    sub = subgame(situation, mask)
    sub_table = enumerate_game(sub)
    selected = members(mask)
    for sub_mask in range(sub_table.size):
        parent_mask = coalition_of(selected[i] for i in members(sub_mask))
        assert sub_table[sub_mask] == parent[parent_mask]


# ---------------------------------------------------------------------------
# subset transforms


def test_subset_sums_small():
    out = subset_sums([1.0, 10.0, 100.0])
    assert out.tolist() == [0, 1, 10, 11, 100, 101, 110, 111]


def test_subset_min_small():
    out = subset_min([3.0, 1.0, 2.0], empty=99.0)
    assert out.tolist() == [99, 3, 1, 1, 2, 2, 1, 1]


def test_display_round_half_away_from_zero():
    assert display_round(2.5) == 3
    assert display_round(-2.5) == -3
    assert display_round(2.4999) == 2
    assert display_round(-0.4) == 0
    assert display_round(41638.56) == 41639
