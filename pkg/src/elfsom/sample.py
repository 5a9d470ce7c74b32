"""Synthetic demonstration dataset shipped with the package.

Three adapters (AC1-AC3) measured at all six positions on a 51-point grid
from 30 Hz to 300 Hz, four sweeps each.  The data is SYNTHETIC: each
spectrum is a fast exponential drop from a 30 Hz peak onto a slowly
decaying floor, so the strongest emission sits at the lowest frequencies.
The peak readings are the published per-side values, so the per-side
maximum of every adapter reproduces the reference table exactly.

``generate_sample()`` is deterministic; ``data/table1_sample.csv`` is its
frozen output.
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from .ingest import MeasurementPosition as P, SpectrumSample, parse_spectrum_csv, write_spectrum_csv

# per-side maxima in µT (adapter -> position -> value)
TABLE1 = {
    "AC1": {P.TOP: 4.910, P.BOTTOM: 4.220, P.LEFT30: 0.350, P.RIGHT30: 0.348, P.UP30: 0.348, P.DOWN30: 0.348},
    "AC2": {P.TOP: 4.360, P.BOTTOM: 4.210, P.LEFT30: 0.350, P.RIGHT30: 0.348, P.UP30: 0.364, P.DOWN30: 0.345},
    "AC3": {P.TOP: 15.400, P.BOTTOM: 4.260, P.LEFT30: 0.460, P.RIGHT30: 0.462, P.UP30: 0.452, P.DOWN30: 0.451},
}

FREQUENCIES = tuple(round(30.0 + 5.4 * j, 1) for j in range(51))
N_SWEEPS = 4
SWEEP_INTERVAL_MS = 10_000
SEED = 2012
SAMPLE_FILE = "table1_sample.csv"

# floor level in µT at 30 Hz
_FLOOR = {
    "AC1": {P.TOP: 0.90, P.BOTTOM: 0.80, P.LEFT30: 0.22, P.RIGHT30: 0.21, P.UP30: 0.21, P.DOWN30: 0.20},
    "AC2": {P.TOP: 0.85, P.BOTTOM: 0.78, P.LEFT30: 0.21, P.RIGHT30: 0.22, P.UP30: 0.23, P.DOWN30: 0.20},
    "AC3": {P.TOP: 1.30, P.BOTTOM: 0.90, P.LEFT30: 0.26, P.RIGHT30: 0.27, P.UP30: 0.26, P.DOWN30: 0.25},
}
# e-folding width of the low-frequency peak, Hz
_PEAK_WIDTH = 12.0
# floor ~ f^-0.3
_FLOOR_SLOPE = 0.3
# max relative sweep-to-sweep drop
_JITTER = 0.03


def spectrum(peak: float, floor: float, freqs) -> np.ndarray:
    """Noise-free spectrum: ``peak`` at 30 Hz, decaying onto ``floor * (30/f)^0.3``."""
    f = np.asarray(freqs, dtype=float)
    return floor * (30.0 / f) ** _FLOOR_SLOPE + (peak - floor) * np.exp(-(f - 30.0) / _PEAK_WIDTH)


def generate_sample(seed: int = SEED) -> list[SpectrumSample]:
    """Build the synthetic sweep data.

    Every sweep reads the noise-free spectrum scaled by ``1 - u`` with
    ``u ~ U[0, 0.03]``, rounded to 0.1 nT; the first sweep at 30 Hz reads
    the peak exactly, so it is the per-side maximum.
    """
    rng = np.random.default_rng(seed)
    samples = []
    for adapter in sorted(TABLE1):
        for pos in P:
            base = spectrum(TABLE1[adapter][pos], _FLOOR[adapter][pos], FREQUENCIES)
            for sweep in range(N_SWEEPS):
                drop = rng.uniform(0.0, _JITTER, size=len(FREQUENCIES))
                if sweep == 0:
                    drop[0] = 0.0
                values = np.round(base * (1.0 - drop), 4)
                if sweep == 0:
                    values[0] = TABLE1[adapter][pos]
                for f, b in zip(FREQUENCIES, values):
                    samples.append(
                        SpectrumSample(adapter, pos, f, sweep * SWEEP_INTERVAL_MS, float(b))
                    )
    return samples


def sample_csv_bytes() -> bytes:
    return resources.files("elfsom").joinpath("data").joinpath(SAMPLE_FILE).read_bytes()


def load_sample() -> list[SpectrumSample]:
    """The bundled synthetic sample (frozen output of :func:`generate_sample`)."""
    return parse_spectrum_csv(sample_csv_bytes())


def main() -> None:
    import sys

    sys.stdout.buffer.write(write_spectrum_csv(generate_sample()))


if __name__ == "__main__":
    main()
