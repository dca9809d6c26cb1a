"""CSV roster ingestion, seeded cost simulation, report rendering, and the
``ht`` command-line interface.

Roster files are UTF-8 CSV with the exact header
``id,harvest_kg,capacity_kg,unit_cost`` and one row per player; the market
price is always supplied separately.  File arguments that do not exist on
disk but match a bundled dataset name (``napa.csv``, ``korca49.csv``,
``korca_case1.csv``, ``korca_case2.csv``) resolve to the bundled copy.

Exit codes: 0 success, 1 parse/validation/usage error, 2 computation error
(for example a roster above the enumeration cap).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import data as bundled_data
from .allocations import (
    Allocation,
    PlayerSets,
    btc_allocation,
    capacity_binds,
    co_allocation,
    crc_allocation,
    htr_allocation,
    partition_sets,
)
from .analysis import (
    DEFAULT_CORE_TOL,
    DEFAULT_PAIRWISE_CAP,
    PropertyReport,
    check_convexity,
    check_monotonicity,
    check_nonnegativity,
    check_superadditivity,
    is_core,
)
from .errors import (
    DegenerateSituationError,
    HTGameError,
    InvalidSimParamsError,
    RosterParseError,
    UnsupportedFormatError,
    ValidationError,
)
from .game import (
    DEFAULT_ENUM_CAP,
    GameTable,
    Player,
    Situation,
    coalition_label,
    coalition_of,
    coalition_stats,
    display_round,
    enumerate_game,
    members,
    validate,
    value,
)
from .thresholds import ThresholdReport, alpha_threshold, beta_threshold

ROSTER_HEADER = ("id", "harvest_kg", "capacity_kg", "unit_cost")
ALLOC_HEADER = ("id", "amount")
REPORT_FORMATS = ("text", "csv", "json")

#: Game tables are rendered row by row only up to this roster size.
TABLE_RENDER_CAP = 8


@dataclass(frozen=True)
class SimParams:
    """Cost-simulation parameters: normal(mean, sd) draws kept inside
    [clip_lo, clip_hi] by rejection, priced against ``price``."""

    mean: float
    sd: float
    clip_lo: float
    clip_hi: float
    price: float = 0.70


@dataclass(frozen=True)
class RunConfig:
    """Knobs of a full solver run.  The fractions say how much of each
    stability threshold the applied rates use; the combined rule is only
    guaranteed stable up to one half."""

    price: float
    alpha_fraction: float = 0.5
    beta_fraction: float = 0.5
    tolerance: float = DEFAULT_CORE_TOL
    enum_cap: int = DEFAULT_ENUM_CAP
    seed: int = 0
    allow_degenerate: bool = False
    sim: SimParams | None = None

    def __post_init__(self):
        for name, frac in (("alpha_fraction", self.alpha_fraction),
                           ("beta_fraction", self.beta_fraction)):
            if not 0.0 <= frac <= 0.5:
                raise ValueError(f"{name} must lie in [0, 0.5], got {frac!r}")


# ---------------------------------------------------------------------------
# CSV ingestion


def _open_source(source) -> tuple[TextIO, bool]:
    if hasattr(source, "read"):
        return source, False
    return open(source, "r", encoding="utf-8", newline=""), True


def _parse_number(cell: str, line: int, column: str) -> float:
    text = cell.strip()
    try:
        out = float(text)
    except ValueError:
        raise RosterParseError(line, f"{text!r} is not a number", column) from None
    if not math.isfinite(out):
        raise RosterParseError(line, f"{text!r} is not a finite number", column)
    return out


def _read_rows(source, expected_header: Sequence[str], optional_tail: int = 0):
    stream, owned = _open_source(source)
    try:
        reader = csv.reader(stream)
        try:
            header = next(reader)
        except StopIteration:
            raise RosterParseError(1, "file is empty; expected a header row") from None
        header = [c.strip() for c in header]
        want = list(expected_header)
        minimum = len(want) - optional_tail
        if not (want[:minimum] == header[:minimum] and header == want[: len(header)]):
            raise RosterParseError(
                1, f"expected header {','.join(want)!r}, got {','.join(header)!r}"
            )
        rows = []
        for line, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue  # blank line
            if len(row) != len(header):
                raise RosterParseError(
                    line, f"expected {len(header)} columns, got {len(row)}"
                )
            rows.append((line, [c.strip() for c in row]))
        return header, rows
    finally:
        if owned:
            stream.close()


def parse_roster(source, price: float, allow_degenerate: bool = False) -> Situation:
    """Read a roster CSV (path or text stream) and validate it at ``price``.

    Players keep file order, which fixes the coalition bit indices.  Raises
    :class:`RosterParseError` for malformed input and lets
    :class:`ValidationError` propagate for pricing/quantity problems.
    """
    _, rows = _read_rows(source, ROSTER_HEADER)
    players = []
    seen: set[str] = set()
    for line, row in rows:
        pid = row[0]
        if not pid:
            raise RosterParseError(line, "empty player id", "id")
        if pid in seen:
            raise RosterParseError(line, f"duplicate player id {pid!r}", "id")
        seen.add(pid)
        players.append(
            Player(
                id=pid,
                harvest_kg=_parse_number(row[1], line, "harvest_kg"),
                capacity_kg=_parse_number(row[2], line, "capacity_kg"),
                unit_cost=_parse_number(row[3], line, "unit_cost"),
            )
        )
    return validate(players, price, allow_degenerate)


def parse_base_roster(source) -> tuple[tuple[str, float, float], ...]:
    """Read a roster whose costs are absent or about to be replaced: header
    ``id,harvest_kg,capacity_kg`` with an optional ``unit_cost`` column that
    is ignored.  Returns ``(id, harvest_kg, capacity_kg)`` rows in file order."""
    header, rows = _read_rows(source, ROSTER_HEADER, optional_tail=1)
    out = []
    seen: set[str] = set()
    for line, row in rows:
        pid = row[0]
        if not pid:
            raise RosterParseError(line, "empty player id", "id")
        if pid in seen:
            raise RosterParseError(line, f"duplicate player id {pid!r}", "id")
        seen.add(pid)
        out.append(
            (
                pid,
                _parse_number(row[1], line, "harvest_kg"),
                _parse_number(row[2], line, "capacity_kg"),
            )
        )
    return tuple(out)


def parse_allocation_file(source, situation: Situation) -> Allocation:
    """Read an ``id,amount`` CSV and align it with the roster order."""
    _, rows = _read_rows(source, ALLOC_HEADER)
    amounts: dict[str, float] = {}
    for line, row in rows:
        pid = row[0]
        if pid in amounts:
            raise RosterParseError(line, f"duplicate player id {pid!r}", "id")
        amounts[pid] = _parse_number(row[1], line, "amount")
    missing = [p.id for p in situation.players if p.id not in amounts]
    extra = sorted(set(amounts) - set(situation.ids))
    if missing or extra:
        raise RosterParseError(
            2,
            f"allocation ids do not match the roster (missing {missing}, unknown {extra})",
            "id",
        )
    return Allocation(tuple(amounts[p.id] for p in situation.players))


# ---------------------------------------------------------------------------
# Cost simulation


def truncated_normal(
    rng: np.random.Generator,
    mean: float,
    sd: float,
    lo: float,
    hi: float,
    size: int,
    max_rounds: int = 1000,
) -> np.ndarray:
    """Normal draws kept inside [lo, hi] by rejection (out-of-range draws are
    thrown away and redrawn, never clamped, so no mass piles up at the
    bounds).  Deterministic for a given generator state."""
    out = np.empty(size)
    filled = 0
    for _ in range(max_rounds):
        draws = rng.normal(mean, sd, size=size - filled)
        good = draws[(draws >= lo) & (draws <= hi)]
        out[filled : filled + good.size] = good
        filled += good.size
        if filled == size:
            return out
    raise InvalidSimParamsError(
        f"rejection sampling kept too few draws in [{lo}, {hi}] after {max_rounds} rounds"
    )


def _check_sim_params(sim: SimParams) -> None:
    if not sim.price > 0:
        raise InvalidSimParamsError(f"price {sim.price!r} is not positive")
    if not sim.sd >= 0:
        raise InvalidSimParamsError(f"sd {sim.sd!r} is negative")
    if not sim.clip_lo < sim.clip_hi:
        raise InvalidSimParamsError(
            f"clip range [{sim.clip_lo!r}, {sim.clip_hi!r}] is empty"
        )
    if not sim.clip_hi < sim.price:
        raise InvalidSimParamsError(
            f"clip bounds must sit strictly below the price "
            f"({sim.clip_hi!r} >= {sim.price!r})"
        )
    if sim.sd == 0 and not sim.clip_lo <= sim.mean <= sim.clip_hi:
        raise InvalidSimParamsError(
            f"sd=0 draws equal the mean, but {sim.mean!r} lies outside the clip range"
        )


def simulate_costs(
    base_roster: Iterable[tuple[str, float, float]], sim: SimParams, seed: int
) -> Situation:
    """Attach simulated unit costs to an ``(id, harvest, capacity)`` roster.

    Costs are truncated-normal draws (see :func:`truncated_normal`), one per
    player in roster order; the result is validated at ``sim.price``.
    Deterministic per seed."""
    _check_sim_params(sim)
    rows = tuple(base_roster)
    rng = np.random.default_rng(seed)
    costs = truncated_normal(rng, sim.mean, sim.sd, sim.clip_lo, sim.clip_hi, len(rows))
    players = tuple(
        Player(pid, harvest, capacity, float(c))
        for (pid, harvest, capacity), c in zip(rows, costs)
    )
    # a base roster with all capacities equal to harvests stays usable here;
    # callers can still inspect Situation.is_degenerate
    return validate(players, sim.price, allow_degenerate=True)


# ---------------------------------------------------------------------------
# Solving and reporting


@dataclass
class RunResult:
    """Everything a report can carry; unfilled parts stay ``None``."""

    table: GameTable | None = None
    sets: PlayerSets | None = None
    alpha_report: ThresholdReport | None = None
    beta_report: ThresholdReport | None = None
    alpha_star: float | None = None
    beta_star: float | None = None
    co: Allocation | None = None
    btc: Allocation | None = None
    crc: Allocation | None = None
    htr: Allocation | None = None
    properties: dict[str, PropertyReport | None] = field(default_factory=dict)


def solve(situation: Situation, config: RunConfig) -> RunResult:
    """Full pipeline: table, thresholds, allocations, property checks.

    Pairwise property scans are skipped (left ``None``) above their cap; the
    reward-side pieces are skipped on a degenerate roster."""
    result = RunResult()
    result.table = enumerate_game(situation, config.enum_cap)
    result.alpha_report = alpha_threshold(situation, result.table)
    result.alpha_star = config.alpha_fraction * result.alpha_report.value
    result.co = co_allocation(situation)
    result.btc = btc_allocation(situation, result.alpha_star)
    try:
        result.sets = partition_sets(situation)
        result.beta_report = beta_threshold(situation, result.table)
        result.beta_star = config.beta_fraction * result.beta_report.value
        result.crc = crc_allocation(situation, result.beta_star)
        result.htr = htr_allocation(
            situation,
            result.alpha_star,
            result.beta_star,
            alpha_bar=result.alpha_report.value,
            beta_bar=result.beta_report.value,
        )
    except DegenerateSituationError:
        pass
    result.properties["nonnegative"] = check_nonnegativity(result.table)
    result.properties["monotone"] = check_monotonicity(result.table)
    if situation.n <= DEFAULT_PAIRWISE_CAP:
        result.properties["superadditive"] = check_superadditivity(result.table)
        result.properties["convex"] = check_convexity(result.table)
    else:
        result.properties["superadditive"] = None
        result.properties["convex"] = None
    return result


def _masks_by_size(n: int) -> list[int]:
    return sorted(range(1, 1 << n), key=lambda m: (m.bit_count(), m))


def _fmt_money(x: float) -> str:
    return str(display_round(x))


def _fmt_float(x: float) -> str:
    return repr(float(x))


def _binding_text(report: ThresholdReport, ids: Sequence[str]) -> str:
    if report.note:
        return report.note
    shown = ", ".join(
        f"{coalition_label(b.coalition, ids)} [{b.branch}]"
        for b in report.binding_coalitions
    )
    more = report.binding_total - len(report.binding_coalitions)
    if more > 0:
        shown += f" (+{more} more ties)"
    return shown


def _set_label(indices: frozenset[int], ids: Sequence[str]) -> str:
    return "{" + ",".join(ids[i] for i in sorted(indices)) + "}"


def _witness_text(name: str, rep: PropertyReport | None, ids: Sequence[str]) -> str:
    if rep is None:
        return f"{name}: skipped (roster above the pairwise-check cap)"
    if rep.holds:
        return f"{name}: yes"
    w = rep.witness
    if name == "nonnegative":
        return f"{name}: no ({coalition_label(w[0], ids)} has value {_fmt_money(w[1])})"
    if name == "monotone":
        return (
            f"{name}: no ({coalition_label(w[0], ids)} -> {coalition_label(w[1], ids)} "
            f"drops {_fmt_money(w[2])} -> {_fmt_money(w[3])})"
        )
    if name == "superadditive":
        return (
            f"{name}: no ({coalition_label(w[0], ids)} + {coalition_label(w[1], ids)}: "
            f"{_fmt_money(w[2])} + {_fmt_money(w[3])} > {_fmt_money(w[4])})"
        )
    if name == "convex":
        return (
            f"{name}: no — counterexample: {_fmt_money(w[4])} < {_fmt_money(w[3])} "
            f"(player {ids[w[0]]} gains less joining {coalition_label(w[2] ^ (1 << w[0]), ids)} "
            f"than joining {coalition_label(w[1] ^ (1 << w[0]), ids)})"
        )
    return f"{name}: no (witness {rep.witness})"


def _game_table_lines(situation: Situation, table: GameTable) -> list[str]:
    ids = situation.ids
    lines = ["coalition  min_cost  margin  capacity_kg  harvest_kg  value"]
    for m in _masks_by_size(situation.n):
        stats = coalition_stats(situation, m)
        lines.append(
            f"{coalition_label(m, ids):<10} "
            f"{stats.min_cost:<9.6g} "
            f"{situation.price - stats.min_cost:<7.6g} "
            f"{stats.capacity_kg:<12.10g} "
            f"{stats.harvest_kg:<11.10g} "
            f"{_fmt_money(float(table.values[m]))}"
        )
    return lines


def _emit_text(situation: Situation, results: RunResult) -> str:
    ids = situation.ids
    out: list[str] = []
    out.append(
        f"roster: {situation.n} players, price {situation.price:.10g}"
    )
    binds = "capacity binds" if capacity_binds(situation) else "harvest binds"
    out.append(
        f"capacity total {situation.capacity_total:.10g} kg, "
        f"harvest total {situation.harvest_total:.10g} kg ({binds})"
    )
    if results.table is None:
        return "\n".join(out) + "\n"
    out.append(f"grand coalition value: {_fmt_money(results.table.grand_value)}")
    out.append("")
    if situation.n <= TABLE_RENDER_CAP:
        out.append("game table:")
        out.extend(_game_table_lines(situation, results.table))
        out.append("")
    if results.alpha_report is not None:
        out.append("thresholds:")
        out.append(
            f"alpha_bar = {results.alpha_report.value:.6f}  "
            f"(binding: {_binding_text(results.alpha_report, ids)})"
        )
        if results.beta_report is not None:
            out.append(
                f"beta_bar  = {results.beta_report.value:.6f}  "
                f"(binding: {_binding_text(results.beta_report, ids)})"
            )
        else:
            out.append("beta_bar  = undefined (degenerate roster: every player balanced)")
        stars = f"applied: alpha_star = {results.alpha_star:.6f}"
        if results.beta_star is not None:
            stars += f", beta_star = {results.beta_star:.6f}"
        out.append(stars)
        out.append("")
    if results.co is not None:
        out.append("allocations:")
        header = f"{'id':<8}{'co':>12}"
        for name, alloc in (("btc", results.btc), ("crc", results.crc), ("htr", results.htr)):
            if alloc is not None:
                header += f"{name:>12}"
        if results.htr is not None:
            header += f"{'net':>12}"
        out.append(header)
        for i, pid in enumerate(ids):
            row = f"{pid:<8}{_fmt_money(results.co[i]):>12}"
            for alloc in (results.btc, results.crc, results.htr):
                if alloc is not None:
                    row += f"{_fmt_money(alloc[i]):>12}"
            if results.htr is not None:
                net = results.htr[i] - results.co[i]
                row += f"{display_round(net):>+12}"
            out.append(row)
        totals = f"{'total':<8}{_fmt_money(results.co.total):>12}"
        for alloc in (results.btc, results.crc, results.htr):
            if alloc is not None:
                totals += f"{_fmt_money(alloc.total):>12}"
        if results.htr is not None:
            totals += f"{display_round(results.htr.total - results.co.total):>+12}"
        out.append(totals)
        out.append("")
    if results.sets is not None:
        out.append(
            "player sets: "
            f"cheapest={_set_label(results.sets.m_set, ids)} "
            f"balanced={_set_label(results.sets.e_set, ids)} "
            f"rewarded={_set_label(results.sets.h_set, ids)} "
            f"taxed={_set_label(results.sets.taxed_set, ids)}"
        )
    if results.properties:
        out.append("properties:")
        for name in ("nonnegative", "superadditive", "monotone", "convex"):
            if name in results.properties:
                out.append("  " + _witness_text(name, results.properties[name], ids))
    return "\n".join(out) + "\n"


CSV_COLUMNS = (
    "id",
    "harvest_kg",
    "capacity_kg",
    "unit_cost",
    "co",
    "btc",
    "crc",
    "htr",
    "net",
    "co_display",
    "btc_display",
    "crc_display",
    "htr_display",
    "net_display",
)


def _emit_csv(situation: Situation, results: RunResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    if results.co is None:
        return buf.getvalue()
    for i, p in enumerate(situation.players):
        row: list[str] = [p.id, _fmt_float(p.harvest_kg), _fmt_float(p.capacity_kg),
                          _fmt_float(p.unit_cost), _fmt_float(results.co[i])]
        exact: list[float | None] = []
        for alloc in (results.btc, results.crc, results.htr):
            exact.append(alloc[i] if alloc is not None else None)
        net = results.htr[i] - results.co[i] if results.htr is not None else None
        exact.append(net)
        row.extend("" if x is None else _fmt_float(x) for x in exact)
        row.append(str(display_round(results.co[i])))
        row.extend("" if x is None else str(display_round(x)) for x in exact)
        writer.writerow(row)
    return buf.getvalue()


def _threshold_json(report: ThresholdReport | None, ids: Sequence[str]):
    if report is None:
        return None
    return {
        "value": report.value,
        "skipped": report.skipped,
        "binding_total": report.binding_total,
        "note": report.note,
        "binding": [
            {
                "coalition": [ids[i] for i in members(b.coalition)],
                "mask": b.coalition,
                "bound": b.bound,
                "branch": b.branch,
            }
            for b in report.binding_coalitions
        ],
    }


def _emit_json(situation: Situation, results: RunResult) -> str:
    ids = situation.ids
    doc: dict = {
        "n": situation.n,
        "price": situation.price,
        "capacity_total_kg": situation.capacity_total,
        "harvest_total_kg": situation.harvest_total,
        "capacity_binds": capacity_binds(situation),
        "grand_value": results.table.grand_value if results.table else None,
        "grand_value_display": display_round(results.table.grand_value)
        if results.table
        else None,
        "alpha_bar": results.alpha_report.value if results.alpha_report else None,
        "beta_bar": results.beta_report.value if results.beta_report else None,
        "alpha_star": results.alpha_star,
        "beta_star": results.beta_star,
        "alpha_binding": _threshold_json(results.alpha_report, ids),
        "beta_binding": _threshold_json(results.beta_report, ids),
        "sets": None,
        "players": [],
        "properties": {
            name: (None if rep is None else rep.holds)
            for name, rep in results.properties.items()
        }
        if results.properties
        else None,
        "game_table": None,
    }
    if results.sets is not None:
        doc["sets"] = {
            "cheapest": [ids[i] for i in sorted(results.sets.m_set)],
            "balanced": [ids[i] for i in sorted(results.sets.e_set)],
            "rewarded": [ids[i] for i in sorted(results.sets.h_set)],
            "taxed": [ids[i] for i in sorted(results.sets.taxed_set)],
        }
    computed_anything = results.table is not None or results.co is not None
    for i, p in enumerate(situation.players if computed_anything else ()):
        entry: dict = {
            "id": p.id,
            "harvest_kg": p.harvest_kg,
            "capacity_kg": p.capacity_kg,
            "unit_cost": p.unit_cost,
        }
        for name, alloc in (
            ("co", results.co),
            ("btc", results.btc),
            ("crc", results.crc),
            ("htr", results.htr),
        ):
            entry[name] = alloc[i] if alloc is not None else None
            entry[f"{name}_display"] = (
                display_round(alloc[i]) if alloc is not None else None
            )
        if results.htr is not None and results.co is not None:
            net = results.htr[i] - results.co[i]
            entry["net_compensation"] = net
            entry["net_compensation_display"] = display_round(net)
        else:
            entry["net_compensation"] = None
            entry["net_compensation_display"] = None
        doc["players"].append(entry)
    if results.table is not None and situation.n <= TABLE_RENDER_CAP:
        doc["game_table"] = [
            {
                "coalition": [ids[i] for i in members(m)],
                "mask": m,
                "value": float(results.table.values[m]),
                "value_display": display_round(float(results.table.values[m])),
            }
            for m in _masks_by_size(situation.n)
        ]
    return json.dumps(doc, indent=2) + "\n"


def emit_report(situation: Situation, results: RunResult, format: str = "text") -> str:
    """Render a solver run.  ``text`` is for humans; ``csv`` and ``json``
    carry full-precision values plus whole-unit display fields and are
    byte-stable for fixed inputs."""
    if format == "text":
        return _emit_text(situation, results)
    if format == "csv":
        return _emit_csv(situation, results)
    if format == "json":
        return _emit_json(situation, results)
    raise UnsupportedFormatError(
        f"unknown report format {format!r}; expected one of {REPORT_FORMATS}"
    )


# ---------------------------------------------------------------------------
# Command-line interface


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; the contract is 1
        raise _UsageError(message)


def _resolve_file(arg: str) -> str:
    p = Path(arg)
    if not p.exists() and arg in bundled_data.BUNDLED:
        return str(bundled_data.path(arg))
    return arg


def _parse_coalition(situation: Situation, text: str) -> int:
    indices = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            indices.append(situation.index_of(token))
        except KeyError:
            raise _UsageError(
                f"--coalition: {token!r} is not a player id in this roster"
            ) from None
    if not indices:
        raise _UsageError("--coalition: no player ids given")
    return coalition_of(indices)


def _situation_from_args(args) -> Situation:
    return parse_roster(
        _resolve_file(args.file), args.price, getattr(args, "allow_degenerate", False)
    )


def _config_from_args(args) -> RunConfig:
    try:
        return RunConfig(
            price=args.price,
            alpha_fraction=getattr(args, "alpha_fraction", 0.5),
            beta_fraction=getattr(args, "beta_fraction", 0.5),
            tolerance=getattr(args, "tolerance", DEFAULT_CORE_TOL),
            enum_cap=getattr(args, "cap", DEFAULT_ENUM_CAP),
            allow_degenerate=getattr(args, "allow_degenerate", False),
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _cmd_validate(args) -> int:
    try:
        situation = _situation_from_args(args)
    except ValidationError as exc:
        for v in exc.violations:
            print(f"violation [{v.code}]: {v.message}")
        return 1
    print(f"ok: {situation.n} players, price {situation.price:.10g}")
    if situation.is_degenerate:
        print("warning: degenerate roster (every capacity equals its harvest)")
    return 0


def _cmd_value(args) -> int:
    situation = _situation_from_args(args)
    mask = _parse_coalition(situation, args.coalition)
    stats = coalition_stats(situation, mask)
    worth = value(situation, mask)
    label = coalition_label(mask, situation.ids)
    print(
        f"{label}: min_cost={stats.min_cost:.10g} "
        f"margin={situation.price - stats.min_cost:.10g} "
        f"capacity_kg={stats.capacity_kg:.10g} harvest_kg={stats.harvest_kg:.10g} "
        f"value={_fmt_money(worth)}"
    )
    return 0


def _cmd_game(args) -> int:
    situation = _situation_from_args(args)
    table = enumerate_game(situation, args.cap)
    if situation.n <= TABLE_RENDER_CAP:
        for line in _game_table_lines(situation, table):
            print(line)
    else:
        print(f"{situation.n} players, {table.size} coalitions enumerated")
    print(f"v(N) = {_fmt_money(table.grand_value)}")
    return 0


def _cmd_alloc(args) -> int:
    situation = _situation_from_args(args)
    config = _config_from_args(args)
    if args.method == "co":
        alloc = co_allocation(situation)
        params = ""
    elif args.method == "btc":
        alpha = args.alpha
        if alpha is None:
            table = enumerate_game(situation, config.enum_cap)
            alpha = config.alpha_fraction * alpha_threshold(situation, table).value
        alloc = btc_allocation(situation, alpha)
        params = f"alpha = {alpha:.6f}"
    elif args.method == "crc":
        beta = args.beta
        if beta is None:
            table = enumerate_game(situation, config.enum_cap)
            beta = config.beta_fraction * beta_threshold(situation, table).value
        alloc = crc_allocation(situation, beta)
        params = f"beta = {beta:.6f}"
    else:  # htr
        table = enumerate_game(situation, config.enum_cap)
        alpha_bar = alpha_threshold(situation, table).value
        beta_bar = beta_threshold(situation, table).value
        alpha = args.alpha if args.alpha is not None else config.alpha_fraction * alpha_bar
        beta = args.beta if args.beta is not None else config.beta_fraction * beta_bar
        alloc = htr_allocation(
            situation, alpha, beta, alpha_bar=alpha_bar, beta_bar=beta_bar
        )
        params = f"alpha_star = {alpha:.6f}, beta_star = {beta:.6f}"
    print(f"method: {args.method}" + (f" ({params})" if params else ""))
    print(f"{'id':<8}{'amount':>18}{'display':>12}")
    for pid, amount in zip(situation.ids, alloc):
        print(f"{pid:<8}{amount:>18.4f}{display_round(amount):>12}")
    print(f"{'total':<8}{alloc.total:>18.4f}{display_round(alloc.total):>12}")
    print("(" + ", ".join(str(d) for d in alloc.display()) + ")")
    return 0


def _cmd_thresholds(args) -> int:
    situation = _situation_from_args(args)
    table = enumerate_game(situation, args.cap)
    alpha_rep = alpha_threshold(situation, table)
    print(f"alpha_bar = {alpha_rep.value:.6f}")
    if args.binding:
        print(f"  binding: {_binding_text(alpha_rep, situation.ids)}")
        print(f"  skipped (vacuous): {alpha_rep.skipped}")
    try:
        beta_rep = beta_threshold(situation, table)
    except DegenerateSituationError as exc:
        print(f"beta_bar  = undefined ({exc})")
        return 0
    print(f"beta_bar  = {beta_rep.value:.6f}")
    if args.binding:
        print(f"  binding: {_binding_text(beta_rep, situation.ids)}")
        print(f"  skipped (vacuous): {beta_rep.skipped}")
    return 0


def _cmd_check_core(args) -> int:
    situation = _situation_from_args(args)
    table = enumerate_game(situation, args.cap)
    alloc = parse_allocation_file(_resolve_file(args.alloc), situation)
    report = is_core(table, alloc, args.tolerance)
    if report.in_core:
        print("in core: yes")
    else:
        print("in core: no")
        if not report.efficient:
            print(
                f"  not efficient: pays {_fmt_money(alloc.total)} "
                f"of {_fmt_money(table.grand_value)}"
            )
        for v in report.violations:
            print(
                f"  {coalition_label(v.coalition, situation.ids)}: "
                f"gets {_fmt_money(v.payout)}, can secure {_fmt_money(v.coalition_value)} "
                f"(deficit {_fmt_money(v.deficit)})"
            )
        if report.violation_count > len(report.violations):
            print(f"  ... {report.violation_count} violations in total")
    return 0


def _cmd_props(args) -> int:
    situation = _situation_from_args(args)
    table = enumerate_game(situation, args.cap)
    ids = situation.ids
    print(_witness_text("nonnegative", check_nonnegativity(table), ids))
    if situation.n <= DEFAULT_PAIRWISE_CAP:
        print(_witness_text("superadditive", check_superadditivity(table), ids))
    else:
        print(_witness_text("superadditive", None, ids))
    print(_witness_text("monotone", check_monotonicity(table), ids))
    if situation.n <= DEFAULT_PAIRWISE_CAP:
        print(_witness_text("convex", check_convexity(table), ids))
    else:
        print(_witness_text("convex", None, ids))
    return 0


def _cmd_simulate_costs(args) -> int:
    try:
        lo, hi = (float(x) for x in args.clip.split(","))
    except ValueError:
        raise _UsageError("--clip: expected LO,HI with two numbers") from None
    sim = SimParams(mean=args.mean, sd=args.sd, clip_lo=lo, clip_hi=hi, price=args.price)
    base = parse_base_roster(_resolve_file(args.file))
    situation = simulate_costs(base, sim, args.seed)
    print(",".join(ROSTER_HEADER))
    for p in situation.players:
        print(f"{p.id},{p.harvest_kg:.10g},{p.capacity_kg:.10g},{p.unit_cost!r}")
    return 0


def _cmd_report(args) -> int:
    situation = _situation_from_args(args)
    config = _config_from_args(args)
    results = solve(situation, config)
    sys.stdout.write(emit_report(situation, results, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ht",
        description="Cooperative harvest/processing pooling games: coalition values, "
        "stable allocations, compensation thresholds.",
        epilog="FILE arguments falling back to bundled datasets: "
        + ", ".join(bundled_data.BUNDLED),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, *, needs_price=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", metavar="FILE", help="roster CSV")
        if needs_price:
            p.add_argument("--price", type=float, required=True,
                           help="market price per kg")
        p.add_argument("--allow-degenerate", action="store_true",
                       help="accept rosters where every capacity equals its harvest")
        p.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP,
                       help="enumeration cap on the player count")
        p.set_defaults(func=handler)
        return p

    add("validate", _cmd_validate, "check a roster against the model assumptions")

    p = add("value", _cmd_value, "value of one coalition")
    p.add_argument("--coalition", required=True,
                   help="comma-separated player ids, e.g. 1,3")

    add("game", _cmd_game, "enumerate the full coalition-value table")

    p = add("alloc", _cmd_alloc, "compute a profit allocation")
    p.add_argument("--method", required=True, choices=("co", "btc", "crc", "htr"))
    p.add_argument("--alpha", type=float, default=None,
                   help="technology-compensation rate (default: half its threshold)")
    p.add_argument("--beta", type=float, default=None,
                   help="crop-reward rate (default: half its threshold)")
    p.add_argument("--alpha-fraction", type=float, default=0.5, dest="alpha_fraction",
                   help="fraction of the alpha threshold to apply when --alpha is omitted")
    p.add_argument("--beta-fraction", type=float, default=0.5, dest="beta_fraction",
                   help="fraction of the beta threshold to apply when --beta is omitted")

    p = add("thresholds", _cmd_thresholds, "stability thresholds of both taxed rules")
    p.add_argument("--binding", action="store_true",
                   help="also list the binding coalitions")

    p = add("check-core", _cmd_check_core, "check an allocation file for stability")
    p.add_argument("--alloc", required=True, help="CSV with header id,amount")
    p.add_argument("--tolerance", type=float, default=DEFAULT_CORE_TOL,
                   help="relative slack tolerance")

    add("props", _cmd_props, "verify the structural game properties by brute force")

    p = sub.add_parser("simulate-costs",
                       help="draw truncated-normal unit costs for a roster")
    p.add_argument("file", metavar="FILE",
                   help="roster CSV (unit_cost column optional, ignored)")
    p.add_argument("--mean", type=float, required=True)
    p.add_argument("--sd", type=float, required=True)
    p.add_argument("--clip", required=True, help="LO,HI bounds kept by rejection")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--price", type=float, default=0.70,
                   help="market price the simulated costs must stay below")
    p.set_defaults(func=_cmd_simulate_costs)

    p = add("report", _cmd_report, "full run: table, thresholds, allocations, properties")
    p.add_argument("--format", choices=REPORT_FORMATS, default="text")
    p.add_argument("--alpha-fraction", type=float, default=0.5, dest="alpha_fraction")
    p.add_argument("--beta-fraction", type=float, default=0.5, dest="beta_fraction")

    return parser


def cli_main(argv: Sequence[str] | None = None) -> int:
    """Run one CLI invocation and return the exit code (0/1/2)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"ht: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"ht: error: {exc}", file=sys.stderr)
        return 1
    except (RosterParseError, ValidationError) as exc:
        print(f"ht: error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"ht: error: {exc}", file=sys.stderr)
        return 1
    except HTGameError as exc:
        print(f"ht: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
