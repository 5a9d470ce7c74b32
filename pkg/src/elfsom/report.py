"""Emission-level tables with safety flags.

Clusters of a trained one-input network are ranked by prototype value and
named ``VeryLow`` .. ``VeryHigh``.  Each level is summarized by the range of
field values and frequencies of its members and flagged against a safety
limit (0.2 µT by default):

* ``Below``: every member is at or under the limit,
* ``Above``: every member exceeds it,
* ``Borderline``: the range straddles it.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import NotOneDimensional
from .ingest import TABLE_ORDER, AdapterSummary, EmissionDataset, MeasurementPosition
from .som import SomNetwork, classify_all

DEFAULT_LIMIT_UT = 0.2
FORMATS = ("markdown", "csv", "json")


class EmissionLevel(enum.IntEnum):
    VERY_LOW = 0
    LOW = 1
    MIDDLE = 2
    HIGH = 3
    VERY_HIGH = 4

    @property
    def title(self) -> str:
        return _FIVE_NAMES[self]


_FIVE_NAMES = ("VeryLow", "Low", "Middle", "High", "VeryHigh")


def level_name(rank: int, k: int) -> str:
    """``VeryLow`` .. ``VeryHigh`` for five levels, ``Level0`` .. otherwise."""
    if k == 5:
        return _FIVE_NAMES[rank]
    return f"Level{rank}"


class Safety(str, enum.Enum):
    BELOW = "Below"
    BORDERLINE = "Borderline"
    ABOVE = "Above"


def safety_flag(b_min: float, b_max: float, limit: float) -> Safety:
    if b_max <= limit:
        return Safety.BELOW
    if b_min > limit:
        return Safety.ABOVE
    return Safety.BORDERLINE


@dataclass(frozen=True)
class LevelRow:
    """One emission level. Range fields are ``None`` for an empty level."""

    rank: int
    level: str
    member_count: int
    b_min: Optional[float] = None
    b_max: Optional[float] = None
    f_min: Optional[float] = None
    f_max: Optional[float] = None
    safety: Optional[Safety] = None
    prototype: Optional[float] = None


@dataclass(frozen=True)
class LevelReport:
    position: MeasurementPosition
    limit: float
    rows: tuple[LevelRow, ...]
    method: str = "som"

    @property
    def member_total(self) -> int:
        return sum(r.member_count for r in self.rows)

    def row(self, level: str) -> LevelRow:
        for r in self.rows:
            if r.level == level:
                return r
        raise KeyError(level)


def order_clusters(network: SomNetwork) -> dict[int, int]:
    """Map neuron index to level rank by ascending prototype value.

    Equal prototypes rank by neuron index. For ``k == 5`` the ranks are
    :class:`EmissionLevel` members.

    Raises:
        NotOneDimensional: The network input is not a single feature.
    """
    if network.n != 1:
        raise NotOneDimensional(f"level ordering needs n == 1, network has n == {network.n}")
    w = network.prototypes[:, 0]
    order = sorted(range(network.k), key=lambda i: (w[i], i))
    wrap = EmissionLevel if network.k == 5 else int
    return {neuron: wrap(rank) for rank, neuron in enumerate(order)}


def levels_from_labels(
    dataset: EmissionDataset,
    ranks: Sequence[int],
    k: int,
    limit: float = DEFAULT_LIMIT_UT,
    prototypes: Optional[Sequence[float]] = None,
    method: str = "som",
) -> LevelReport:
    """Build the level table from a per-instance level rank in ``0..k-1``."""
    if len(ranks) != len(dataset.instances):
        raise ValueError("one rank per dataset instance required")
    rows = []
    for rank in range(k):
        members = [inst for inst, r in zip(dataset.instances, ranks) if r == rank]
        proto = None if prototypes is None else float(prototypes[rank])
        name = level_name(rank, k)
        if not members:
            rows.append(LevelRow(rank, name, 0, prototype=proto))
            continue
        b = [m.b_mean for m in members]
        f = [m.frequency for m in members]
        b_min, b_max = min(b), max(b)
        rows.append(
            LevelRow(
                rank, name, len(members),
                b_min, b_max, min(f), max(f),
                safety_flag(b_min, b_max, limit),
                proto,
            )
        )
    return LevelReport(dataset.position, limit, tuple(rows), method)


def build_level_report(
    dataset: EmissionDataset, network: SomNetwork, limit: float = DEFAULT_LIMIT_UT
) -> LevelReport:
    """Classify every instance and tabulate the ordered levels."""
    mapping = order_clusters(network)
    labels = classify_all(network, dataset)
    ranks = [int(mapping[int(c)]) for c in labels]
    protos = [0.0] * network.k
    for neuron, rank in mapping.items():
        protos[rank] = float(network.prototypes[neuron, 0])
    return levels_from_labels(dataset, ranks, network.k, limit, protos)


# -- rendering -------------------------------------------------------------

_COLUMNS = (
    "level", "rank", "b_min_ut", "b_max_ut", "f_min_hz", "f_max_hz",
    "members", "safety", "prototype_ut",
)


def _row_dict(row: LevelRow) -> dict:
    return {
        "level": row.level,
        "rank": row.rank,
        "b_min_ut": row.b_min,
        "b_max_ut": row.b_max,
        "f_min_hz": row.f_min,
        "f_max_hz": row.f_max,
        "members": row.member_count,
        "safety": None if row.safety is None else row.safety.value,
        "prototype_ut": row.prototype,
    }


def _md_field(value: Optional[float], limit: Optional[float], digits: int) -> str:
    if value is None:
        return "-"
    text = f"{value:.{digits}f}"
    if limit is not None and value > limit:
        return f"**{text}**"
    return text


def _render_markdown(report: LevelReport) -> str:
    lim = report.limit
    lines = [
        f"### {report.position.label}: emission levels ({report.method}, limit {lim:g} µT)",
        "",
        "| Level | B min [µT] | B max [µT] | f min [Hz] | f max [Hz] | Members | Safety |",
        "|---|---:|---:|---:|---:|---:|---|",
    ]
    for r in report.rows:
        lines.append(
            "| {} | {} | {} | {} | {} | {} | {} |".format(
                r.level,
                _md_field(r.b_min, lim, 3),
                _md_field(r.b_max, lim, 3),
                _md_field(r.f_min, None, 1),
                _md_field(r.f_max, None, 1),
                r.member_count,
                "-" if r.safety is None else r.safety.value,
            )
        )
    lines.append("")
    lines.append(f"Values above {lim:g} µT are in bold.")
    return "\n".join(lines) + "\n"


def _render_csv(report: LevelReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("position", "limit_ut", "method") + _COLUMNS)
    for r in report.rows:
        d = _row_dict(r)
        writer.writerow(
            [report.position.value, repr(report.limit), report.method]
            + ["" if d[c] is None else (repr(d[c]) if isinstance(d[c], float) else d[c]) for c in _COLUMNS]
        )
    return buf.getvalue()


def report_to_dict(report: LevelReport) -> dict:
    return {
        "position": report.position.value,
        "limit_ut": report.limit,
        "method": report.method,
        "rows": [_row_dict(r) for r in report.rows],
    }


def report_from_dict(data: dict) -> LevelReport:
    rows = tuple(
        LevelRow(
            rank=d["rank"],
            level=d["level"],
            member_count=d["members"],
            b_min=d["b_min_ut"],
            b_max=d["b_max_ut"],
            f_min=d["f_min_hz"],
            f_max=d["f_max_hz"],
            safety=None if d["safety"] is None else Safety(d["safety"]),
            prototype=d["prototype_ut"],
        )
        for d in data["rows"]
    )
    return LevelReport(
        MeasurementPosition(data["position"]), data["limit_ut"], rows, data.get("method", "som")
    )


def render_report(report: LevelReport, fmt: str = "markdown") -> bytes:
    """Serialize a report as ``markdown``, ``csv`` or ``json`` (UTF-8)."""
    if fmt == "markdown":
        text = _render_markdown(report)
    elif fmt == "csv":
        text = _render_csv(report)
    elif fmt == "json":
        text = json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    return text.encode("utf-8")


def render_summary(summaries: Sequence[AdapterSummary], limit: float = DEFAULT_LIMIT_UT) -> str:
    """Markdown table of per-side max (and mean) field per adapter."""
    head = ["Adapter"] + [p.label for p in TABLE_ORDER]
    lines = [
        "| " + " | ".join(head) + " |",
        "|---" + "|---:" * len(TABLE_ORDER) + "|",
    ]
    for s in summaries:
        cells = [s.adapter_id]
        for p in TABLE_ORDER:
            stat = s.sides.get(p)
            if stat is None:
                cells.append("-")
            else:
                cells.append(f"{stat.b_max:.3f} (mean {stat.b_mean:.3f})")
        lines.append("| " + " | ".join(cells) + " |")
    lines.append("")
    lines.append(f"Max [µT] over all frequencies and sweeps, mean in parentheses. Limit {limit:g} µT.")
    return "\n".join(lines) + "\n"


def check_report(report: LevelReport, n_instances: Optional[int] = None) -> list[str]:
    """Invariant violations in ``report`` (empty list when consistent)."""
    problems = []
    if n_instances is not None and report.member_total != n_instances:
        problems.append(f"member counts sum to {report.member_total}, expected {n_instances}")
    prev = None
    for r in report.rows:
        if r.member_count == 0:
            continue
        if r.b_min > r.b_max or r.f_min > r.f_max:
            problems.append(f"{r.level}: inverted range")
        if r.safety is not safety_flag(r.b_min, r.b_max, report.limit):
            problems.append(f"{r.level}: safety flag inconsistent with range")
        if prev is not None and r.prototype is not None and prev.prototype is not None:
            if not r.prototype > prev.prototype:
                problems.append(f"{r.level}: prototype not above {prev.level}")
        prev = r
    return problems

