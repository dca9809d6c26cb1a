"""Randomized invariants, driven by hypothesis-built rosters.

These stay independent of the seeded suite in test_acceptance.py: rosters are
built directly from drawn quantities rather than through random_instance.
"""

import math

from hypothesis import assume, given, strategies as st

from htgames import (
    InstanceParams,
    Player,
    alpha_threshold,
    beta_threshold,
    btc_allocation,
    co_allocation,
    coalition_stats,
    crc_allocation,
    enumerate_game,
    htr_allocation,
    is_core,
    members,
    random_instance,
    subgame,
    validate,
    value,
)

PRICE = 2.0

kilograms = st.integers(min_value=0, max_value=1_000_000)
costs = st.floats(min_value=0.05, max_value=1.9, allow_nan=False, allow_infinity=False)


@st.composite
def situations(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    players = [
        Player(str(i + 1), float(draw(kilograms)), float(draw(kilograms)), draw(costs))
        for i in range(n)
    ]
    assume(any(p.capacity_kg != p.harvest_kg for p in players))
    return validate(players, PRICE)


@given(situations())
def test_values_nonnegative_and_capped(situation):
    for mask in range(1, 1 << situation.n):
        worth = value(situation, mask)
        stats = coalition_stats(situation, mask)
        margin = situation.price - stats.min_cost
        assert worth >= 0
        cap_k = margin * stats.capacity_kg
        cap_q = margin * stats.harvest_kg
        slack = 1e-9 * max(1.0, cap_k, cap_q)
        assert worth <= cap_k + slack
        assert worth <= cap_q + slack
        assert math.isclose(worth, min(cap_k, cap_q), rel_tol=1e-12, abs_tol=1e-9)


@given(situations(min_n=2, max_n=6))
def test_superadditive_and_monotone_by_enumeration(situation):
    table = enumerate_game(situation)
    vals = table.values.tolist()
    size = table.size
    tol = 1e-9 * max(1.0, table.grand_value)
    for mask in range(1, size):
        comp = (size - 1) ^ mask
        sub = comp
        while sub:
            assert vals[mask | sub] >= vals[mask] + vals[sub] - tol
            sub = (sub - 1) & comp
        for i in range(situation.n):
            if not mask >> i & 1:
                assert vals[mask | 1 << i] >= vals[mask] - tol


@given(situations(min_n=2, max_n=6), st.integers(min_value=0, max_value=5))
def test_subgame_values_match_parent(situation, salt):
    mask = 1 + salt % (situation.full_mask)  # nonempty, possibly full
    parent = enumerate_game(situation)
    sub = subgame(situation, mask)
    sub_table = enumerate_game(sub)
    selected = members(mask)
    for m in range(sub_table.size):
        parent_mask = 0
        for j in members(m):
            parent_mask |= 1 << selected[j]
        assert sub_table[m] == parent[parent_mask]


@given(situations(), st.floats(min_value=0, max_value=3, allow_nan=False))
def test_btc_efficiency_and_balance(situation, alpha):
    gamma = co_allocation(situation)
    taxed = btc_allocation(situation, alpha)
    scale = max(1.0, abs(gamma.total))
    assert abs(taxed.total - gamma.total) <= 1e-9 * scale
    transfers = [taxed[i] - gamma[i] for i in range(situation.n)]
    assert abs(sum(transfers)) <= 1e-9 * scale


@given(situations(min_n=2), st.floats(min_value=0, max_value=3, allow_nan=False))
def test_crc_efficiency_and_fixed_points(situation, beta):
    from htgames import partition_sets

    gamma = co_allocation(situation)
    rewarded = crc_allocation(situation, beta)
    sets = partition_sets(situation)
    scale = max(1.0, abs(gamma.total))
    assert abs(rewarded.total - gamma.total) <= 1e-9 * scale
    for i in sets.e_set:
        assert rewarded[i] == gamma[i]
    for i in sets.h_set:
        assert rewarded[i] >= gamma[i] - 1e-9 * scale
    for i in sets.taxed_set:
        assert rewarded[i] <= gamma[i] + 1e-9 * scale


@given(situations(min_n=2, max_n=6))
def test_collaborative_split_is_stable(situation):
    table = enumerate_game(situation)
    assert is_core(table, co_allocation(situation)).in_core


@given(situations(min_n=2, max_n=6))
def test_taxed_rules_stable_exactly_up_to_their_thresholds(situation):
    table = enumerate_game(situation)
    alpha_bar = alpha_threshold(situation, table).value
    beta_bar = beta_threshold(situation, table).value
    assert is_core(table, btc_allocation(situation, alpha_bar)).in_core
    assert is_core(table, crc_allocation(situation, beta_bar)).in_core


@given(
    situations(min_n=2, max_n=6),
    st.floats(min_value=0, max_value=1, allow_nan=False),
    st.floats(min_value=0, max_value=1, allow_nan=False),
)
def test_htr_is_midpoint_of_doubled_rules(situation, fa, fb):
    table = enumerate_game(situation)
    alpha_bar = alpha_threshold(situation, table).value
    beta_bar = beta_threshold(situation, table).value
    alpha_star = fa * alpha_bar / 2
    beta_star = fb * beta_bar / 2
    combined = htr_allocation(
        situation, alpha_star, beta_star, alpha_bar=alpha_bar, beta_bar=beta_bar
    )
    gamma = co_allocation(situation)
    taxed2 = btc_allocation(situation, 2 * alpha_star)
    rewarded2 = crc_allocation(situation, 2 * beta_star)
    scale = max(1.0, abs(gamma.total))
    for i in range(situation.n):
        midpoint = 0.5 * taxed2[i] + 0.5 * rewarded2[i]
        assert abs(combined[i] - midpoint) <= 1e-9 * scale
    assert is_core(table, combined).in_core


@given(st.integers(min_value=0, max_value=2**63 - 1))
def test_random_instance_deterministic_per_seed(seed):
    params = InstanceParams(n=4, seed=seed)
    assert random_instance(params) == random_instance(params)
