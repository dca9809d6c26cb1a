"""Independent slow-path implementations used to cross-check the package.

Everything here works mask by mask with plain Python loops and stays
deliberately separate from the vectorized code paths under test.
"""

from __future__ import annotations

import math


def oracle_value(situation, mask: int) -> float:
    """Coalition value from first principles."""
    if mask == 0:
        return 0.0
    costs = []
    capacity = 0.0
    harvest = 0.0
    for i, p in enumerate(situation.players):
        if mask >> i & 1:
            costs.append(p.unit_cost)
            capacity += p.capacity_kg
            harvest += p.harvest_kg
    return (situation.price - min(costs)) * min(capacity, harvest)


def oracle_table(situation) -> list[float]:
    return [oracle_value(situation, m) for m in range(1 << situation.n)]


def oracle_core_violations(table: list[float], amounts, tol_abs: float) -> list[int]:
    """Masks of proper coalitions paid less than they can secure."""
    n = (len(table)).bit_length() - 1
    out = []
    for mask in range(1, len(table) - 1):
        paid = sum(amounts[i] for i in range(n) if mask >> i & 1)
        if table[mask] - paid > tol_abs:
            out.append(mask)
    return out


def _coalition_weight(weights, mask: int) -> float:
    return sum(w for i, w in enumerate(weights) if mask >> i & 1)


def oracle_alpha_bounds(situation, table, m_set) -> dict[int, tuple[str, float]]:
    """Per-mask admissible bound and branch for the technology-tax threshold."""
    n = situation.n
    margin = situation.price - min(p.unit_cost for p in situation.players)
    if situation.capacity_total <= situation.harvest_total:
        weights = [p.capacity_kg for p in situation.players]
    else:
        weights = [p.harvest_kg for p in situation.players]
    outside = [0.0 if i in m_set else weights[i] for i in range(n)]
    pool = margin * _coalition_weight(outside, (1 << n) - 1)
    out: dict[int, tuple[str, float]] = {}
    for mask in range(1, 1 << n):
        inside_count = sum(1 for i in m_set if mask >> i & 1)
        outside_count = bin(mask).count("1") - inside_count
        share = margin * _coalition_weight(weights, mask)
        if inside_count == 0:
            if share > 0:
                out[mask] = ("plain", 1.0 - table[mask] / share)
        elif outside_count > 0:
            outflow = margin * _coalition_weight(outside, mask) - (
                inside_count / len(m_set)
            ) * pool
            if outflow > 0:
                out[mask] = ("lambda", (share - table[mask]) / outflow)
    return out


def oracle_beta_bounds(situation, table, sets) -> dict[int, tuple[str, float]]:
    """Per-mask admissible bound and branch for the reward-tax threshold."""
    n = situation.n
    margin = situation.price - min(p.unit_cost for p in situation.players)
    if situation.capacity_total <= situation.harvest_total:
        weights = [p.capacity_kg for p in situation.players]
    else:
        weights = [p.harvest_kg for p in situation.players]
    taxed_w = [weights[i] if i in sets.taxed_set else 0.0 for i in range(n)]
    imbalance = [
        situation.players[i].harvest_kg - situation.players[i].capacity_kg
        if i in sets.h_set
        else 0.0
        for i in range(n)
    ]
    pool = margin * _coalition_weight(taxed_w, (1 << n) - 1)
    imbalance_total = _coalition_weight(imbalance, (1 << n) - 1)
    out: dict[int, tuple[str, float]] = {}
    for mask in range(1, 1 << n):
        has_h = any(mask >> i & 1 for i in sets.h_set)
        has_taxed = any(mask >> i & 1 for i in sets.taxed_set)
        if not has_taxed:
            continue
        taxed_share = margin * _coalition_weight(taxed_w, mask)
        if not has_h:
            if taxed_share > 0:
                out[mask] = ("plain", 1.0 - table[mask] / taxed_share)
        else:
            outflow = taxed_share - (
                _coalition_weight(imbalance, mask) / imbalance_total
            ) * pool
            if outflow > 0:
                share = margin * _coalition_weight(weights, mask)
                out[mask] = ("pi", (share - table[mask]) / outflow)
    return out


def oracle_threshold(bounds: dict[int, tuple[str, float]]) -> float:
    if not bounds:
        return 0.0
    return max(0.0, min(b for _, b in bounds.values()))


def bisect_stability_edge(in_core, lo: float = 0.0, hi: float = 1.0,
                          iterations: int = 64) -> float:
    """Largest rate for which ``in_core(rate)`` holds, assuming the set of
    stable rates is a prefix interval.  ``hi`` is grown until it fails."""
    assert in_core(lo)
    growth = 0
    while in_core(hi):
        lo = hi
        hi *= 2.0
        growth += 1
        if growth > 60:
            return math.inf
    for _ in range(iterations):
        mid = (lo + hi) / 2.0
        if in_core(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0
