"""Spectrum measurement files: parsing, validation and aggregation.

A measurement file is a CSV with one magnetic-induction reading per row::

    adapter_id,position,frequency_hz,timestamp_ms,b_total_ut,b_x_ut,b_y_ut,b_z_ut
    AC1,top,50,0,4.910,,,

Readings are averaged over time per (adapter, position, frequency) to
build the per-position datasets that the SOM is trained on.
"""

from __future__ import annotations

import enum
import io
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    EmptyAdapterId,
    EmptyPosition,
    MalformedRow,
    MissingHeader,
    NegativeField,
    NonNumericField,
    NonPositiveFrequency,
    UnknownPosition,
)

HEADER = (
    "adapter_id",
    "position",
    "frequency_hz",
    "timestamp_ms",
    "b_total_ut",
    "b_x_ut",
    "b_y_ut",
    "b_z_ut",
)


class MeasurementPosition(enum.Enum):
    """Where the probe sat relative to the adapter."""

    TOP = "top"
    BOTTOM = "bottom"
    LEFT30 = "left30"
    RIGHT30 = "right30"
    UP30 = "up30"
    DOWN30 = "down30"

    @classmethod
    def parse(cls, token: str) -> "MeasurementPosition":
        """Case-insensitive lookup by CSV token. Raises ValueError."""
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise ValueError(f"unknown measurement position {token!r}") from None

    @property
    def label(self) -> str:
        return _LABELS[self]

    def __str__(self) -> str:
        return self.value


_LABELS = {
    MeasurementPosition.TOP: "Top",
    MeasurementPosition.BOTTOM: "Bottom",
    MeasurementPosition.LEFT30: "Left (30 cm)",
    MeasurementPosition.RIGHT30: "Right (30 cm)",
    MeasurementPosition.UP30: "Up (30 cm)",
    MeasurementPosition.DOWN30: "Down (30 cm)",
}

# column order of the per-adapter summary table
TABLE_ORDER = (
    MeasurementPosition.TOP,
    MeasurementPosition.BOTTOM,
    MeasurementPosition.LEFT30,
    MeasurementPosition.RIGHT30,
    MeasurementPosition.UP30,
    MeasurementPosition.DOWN30,
)


@dataclass(frozen=True)
class SpectrumSample:
    """One timestamped reading.

    Attributes:
        adapter_id: Adapter identifier, e.g. ``"AC1"``.
        position: Probe position.
        frequency: Frequency in Hz (> 0).
        timestamp: Milliseconds since epoch.
        b_total: Magnitude of the magnetic induction in µT (>= 0).
        b_x, b_y, b_z: Optional vector components in µT. Stored as read,
            never checked against ``b_total`` and never used for aggregation.
    """

    adapter_id: str
    position: MeasurementPosition
    frequency: float
    timestamp: int
    b_total: float
    b_x: Optional[float] = None
    b_y: Optional[float] = None
    b_z: Optional[float] = None

    def __post_init__(self):
        if not self.frequency > 0:
            raise ValueError(f"frequency must be > 0, got {self.frequency}")
        if not self.b_total >= 0:
            raise ValueError(f"b_total must be >= 0, got {self.b_total}")


@dataclass(frozen=True)
class EmissionInstance:
    adapter_id: str
    frequency: float
    b_mean: float


@dataclass(frozen=True)
class EmissionDataset:
    """Time-averaged field values for every (adapter, frequency) at one position.

    Instances are sorted by adapter id, then by ascending frequency.
    """

    position: MeasurementPosition
    instances: tuple[EmissionInstance, ...]
    frequency_band: tuple[float, float]

    def __post_init__(self):
        keys = [(i.adapter_id, i.frequency) for i in self.instances]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (adapter_id, frequency) instances")
        if keys != sorted(keys):
            raise ValueError("instances must be sorted by (adapter_id, frequency)")
        lo, hi = self.frequency_band
        for inst in self.instances:
            if not lo <= inst.frequency <= hi:
                raise ValueError(f"frequency {inst.frequency} outside band {self.frequency_band}")

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def adapters(self) -> list[str]:
        return sorted({i.adapter_id for i in self.instances})

    def features(self) -> np.ndarray:
        """The SOM input matrix, shape ``(len(self), 1)``."""
        return np.array([[i.b_mean] for i in self.instances], dtype=float).reshape(-1, 1)

    def for_adapter(self, adapter_id: str) -> list[EmissionInstance]:
        return [i for i in self.instances if i.adapter_id == adapter_id]


@dataclass(frozen=True)
class SideStat:
    b_mean: float
    b_max: float


@dataclass(frozen=True)
class AdapterSummary:
    """Mean and max of ``b_total`` per position for one adapter.

    Positions without samples are absent from ``sides``.
    """

    adapter_id: str
    sides: dict = field(default_factory=dict)

    def __getitem__(self, position: MeasurementPosition) -> SideStat:
        return self.sides[position]


def _field(row: int, column: str, token: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise NonNumericField(row, column, token) from None
    if not math.isfinite(value):
        raise NonNumericField(row, column, token)
    return value


def _optional(row: int, column: str, token: str) -> Optional[float]:
    token = token.strip()
    if token == "":
        return None
    return _field(row, column, token)


def _timestamp(row: int, token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise NonNumericField(row, "timestamp_ms", token) from None


def parse_spectrum_csv(content: Union[bytes, str]) -> list[SpectrumSample]:
    """Parse a measurement CSV into samples, in file order.

    Parsing stops at the first invalid row. Blank lines are skipped.

    Raises:
        MissingHeader: The first line is not the expected header.
        MalformedRow, UnknownPosition, NonNumericField, NegativeField,
        NonPositiveFrequency, EmptyAdapterId: A data row is invalid; the
            exception carries the 1-based ``row`` (header = row 1).
    """
    if isinstance(content, bytes):
        content = content.decode("utf-8-sig")
    lines = content.splitlines()
    if not lines:
        raise MissingHeader()
    header = tuple(h.strip().lower() for h in lines[0].split(","))
    if header != HEADER:
        raise MissingHeader(lines[0])

    samples = []
    for row, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(HEADER):
            raise MalformedRow(row, len(parts), len(HEADER))
        adapter_id = parts[0].strip()
        if not adapter_id:
            raise EmptyAdapterId(row)
        try:
            position = MeasurementPosition.parse(parts[1])
        except ValueError:
            raise UnknownPosition(row, parts[1]) from None
        frequency = _field(row, "frequency_hz", parts[2].strip())
        if frequency <= 0:
            raise NonPositiveFrequency(row)
        timestamp = _timestamp(row, parts[3].strip())
        b_total = _field(row, "b_total_ut", parts[4].strip())
        if b_total < 0:
            raise NegativeField(row)
        b_x, b_y, b_z = (_optional(row, HEADER[c], parts[c]) for c in (5, 6, 7))
        samples.append(
            SpectrumSample(adapter_id, position, frequency, timestamp, b_total, b_x, b_y, b_z)
        )
    return samples


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return repr(float(value))


def write_spectrum_csv(samples: Iterable[SpectrumSample]) -> bytes:
    """Serialize samples in the format read by :func:`parse_spectrum_csv`.

    Floats are written with ``repr`` so a re-parse is exact.
    """
    buf = io.StringIO()
    buf.write(",".join(HEADER) + "\n")
    for s in samples:
        buf.write(
            ",".join(
                [
                    s.adapter_id,
                    s.position.value,
                    _fmt(s.frequency),
                    str(int(s.timestamp)),
                    _fmt(s.b_total),
                    _fmt(s.b_x),
                    _fmt(s.b_y),
                    _fmt(s.b_z),
                ]
            )
            + "\n"
        )
    return buf.getvalue().encode("utf-8")


def _mean(values: Sequence[float]) -> float:
    # sorted() makes the result independent of input order; the clamp guards
    # against the division overshooting the data range by an ulp
    vals = sorted(values)
    return min(max(math.fsum(vals) / len(vals), vals[0]), vals[-1])


def build_dataset(
    samples: Sequence[SpectrumSample], position: MeasurementPosition
) -> EmissionDataset:
    """Average ``b_total`` over time for each (adapter, frequency) at ``position``.

    Repeated timestamps are averaged along with everything else.
    The result does not depend on the order of ``samples``.

    Raises:
        EmptyPosition: No sample was taken at ``position``.
    """
    groups: dict[tuple[str, float], list[float]] = defaultdict(list)
    for s in samples:
        if s.position is position:
            groups[(s.adapter_id, s.frequency)].append(s.b_total)
    if not groups:
        raise EmptyPosition(position)
    instances = tuple(
        EmissionInstance(adapter, freq, _mean(vals))
        for (adapter, freq), vals in sorted(groups.items())
    )
    freqs = [i.frequency for i in instances]
    return EmissionDataset(position, instances, (min(freqs), max(freqs)))


def build_all_datasets(samples: Sequence[SpectrumSample]) -> dict:
    """Datasets for every position present in ``samples``, in table order."""
    present = {s.position for s in samples}
    return {p: build_dataset(samples, p) for p in TABLE_ORDER if p in present}


def summarize_adapters(samples: Sequence[SpectrumSample]) -> list[AdapterSummary]:
    """Per-adapter mean and max of ``b_total`` for each position.

    Aggregates over all frequencies and timestamps. Returns summaries
    sorted by adapter id; an empty input gives an empty list.
    """
    groups: dict[str, dict[MeasurementPosition, list[float]]] = defaultdict(
        lambda: defaultdict(list)
    )
    for s in samples:
        groups[s.adapter_id][s.position].append(s.b_total)
    out = []
    for adapter in sorted(groups):
        by_pos = groups[adapter]
        sides = {}
        for pos in TABLE_ORDER:
            if pos in by_pos:
                vals = by_pos[pos]
                sides[pos] = SideStat(_mean(vals), max(vals))
        out.append(AdapterSummary(adapter, sides))
    return out
