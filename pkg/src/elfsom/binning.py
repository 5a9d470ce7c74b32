"""Equal-width and equal-frequency discretization baselines.

Bins are half-open ``[b[j-1], b[j])`` with the last bin closed above, so a
value equal to a cut point belongs to the upper bin.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyInput, NonPositiveK


@dataclass(frozen=True)
class BinAssignment:
    boundaries: tuple[float, ...]
    labels: tuple[int, ...]

    @property
    def n_bins(self) -> int:
        return len(self.boundaries) + 1

    def counts(self) -> list[int]:
        out = [0] * self.n_bins
        for lab in self.labels:
            out[lab] += 1
        return out


def assign_bins(values: Sequence[float], boundaries: Sequence[float]) -> tuple[int, ...]:
    """Bin index of each value for ascending cut points."""
    return tuple(bisect.bisect_right(boundaries, v) for v in values)


def _check(values, k):
    if len(values) == 0:
        raise EmptyInput("cannot bin an empty list")
    if k < 1:
        raise NonPositiveK(f"bin count must be >= 1, got {k}")


def equal_width_bins(values: Sequence[float], k: int) -> BinAssignment:
    """Split ``[min, max]`` into ``k`` intervals of equal width.

    All-equal input gets no cut points and a single bin.
    """
    _check(values, k)
    lo, hi = min(values), max(values)
    if lo == hi:
        return BinAssignment((), (0,) * len(values))
    span = hi - lo
    cuts = []
    for j in range(1, k):
        b = lo + j * span / k
        if not cuts or b > cuts[-1]:
            cuts.append(b)
    return BinAssignment(tuple(cuts), assign_bins(values, cuts))


def equal_frequency_bins(values: Sequence[float], k: int) -> BinAssignment:
    """Cut at nearest-rank quantiles so each bin holds about ``len(values)/k`` values.

    Cut point ``j`` is the order statistic at 0-based rank ``ceil(j*N/k)``,
    i.e. the first value of bin ``j``. Repeated values can make cut points
    coincide; duplicates (and a cut equal to the minimum, which would leave
    bin 0 empty) are dropped, so fewer than ``k`` bins may result.
    """
    _check(values, k)
    ordered = sorted(values)
    n = len(ordered)
    cuts = []
    for j in range(1, k):
        rank = -(-j * n // k)
        if rank >= n:
            break
        b = ordered[rank]
        if b > ordered[0] and (not cuts or b > cuts[-1]):
            cuts.append(b)
    return BinAssignment(tuple(cuts), assign_bins(values, cuts))
