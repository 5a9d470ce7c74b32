"""Spectrum series for plotting one adapter at two positions and their difference."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .errors import EmptyPosition, GridMismatch
from .ingest import EmissionDataset, MeasurementPosition, SpectrumSample, build_dataset

Series = tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class PlotData:
    adapter_id: str
    pos_a: MeasurementPosition
    pos_b: MeasurementPosition
    series_a: Series
    series_b: Series
    difference: Series

    def series(self) -> dict[str, Series]:
        """Series keyed by output file stem."""
        a, b = self.pos_a.value, self.pos_b.value
        return {
            f"{self.adapter_id}_{a}": self.series_a,
            f"{self.adapter_id}_{b}": self.series_b,
            f"{self.adapter_id}_{a}_minus_{b}": self.difference,
        }


def _spectrum(source, adapter_id: str, position: MeasurementPosition) -> dict[float, float]:
    if isinstance(source, Mapping):
        dataset = source.get(position)
        if dataset is None:
            raise EmptyPosition(position)
    elif source and isinstance(next(iter(source)), EmissionDataset):
        matches = [d for d in source if d.position is position]
        if not matches:
            raise EmptyPosition(position)
        dataset = matches[0]
    else:
        dataset = build_dataset(source, position)
    spectrum = {i.frequency: i.b_mean for i in dataset.for_adapter(adapter_id)}
    if not spectrum:
        raise EmptyPosition(f"{position} (adapter {adapter_id})")
    return spectrum


def emit_plot_data(
    source: Union[Sequence[SpectrumSample], Sequence[EmissionDataset], Mapping],
    adapter_id: str,
    positions: tuple[MeasurementPosition, MeasurementPosition],
) -> PlotData:
    """Mean spectrum of ``adapter_id`` at two positions and the pointwise
    difference A - B.

    ``source`` is a list of samples, a list of datasets, or a mapping of
    position to dataset.

    Raises:
        EmptyPosition: The adapter has no data at one of the positions.
        GridMismatch: The two positions were measured on different frequencies.
    """
    pos_a, pos_b = positions
    a = _spectrum(source, adapter_id, pos_a)
    b = _spectrum(source, adapter_id, pos_b)
    if a.keys() != b.keys():
        raise GridMismatch(sorted(b.keys() - a.keys()), sorted(a.keys() - b.keys()))
    freqs = sorted(a)
    return PlotData(
        adapter_id,
        pos_a,
        pos_b,
        tuple((f, a[f]) for f in freqs),
        tuple((f, b[f]) for f in freqs),
        tuple((f, a[f] - b[f]) for f in freqs),
    )


def format_series(series: Series) -> str:
    lines = ["# frequency_hz value_ut"]
    lines.extend(f"{f!r} {v!r}" for f, v in series)
    return "\n".join(lines) + "\n"


def write_plot_data(plot: PlotData, out_dir) -> list[str]:
    """Write one ``<stem>.dat`` file per series; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for stem, series in plot.series().items():
        path = os.path.join(out_dir, f"{stem}.dat")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_series(series))
        paths.append(path)
    return paths


def read_series(path) -> Series:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            f, v = line.split()
            out.append((float(f), float(v)))
    return tuple(out)
