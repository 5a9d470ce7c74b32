"""Kohonen self-organizing map on a one-dimensional chain of output neurons.

The network holds ``k`` prototype vectors of dimension ``n``.  Training
repeatedly picks a random input, finds its best-matching unit (BMU) and
pulls every prototype within the current chain radius of the BMU toward
the input::

    w_i <- w_i + eta(t) * (x - w_i)

Both the learning rate and the radius shrink during an initial ordering
phase and stay at their floor values (``eta_floor``, radius 0) afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict, replace
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyDataset,
    IndexOutOfRange,
    InvalidConfig,
    InvalidRange,
    ModelFormatError,
)

INIT_MODES = ("range", "small")
KERNELS = ("flat", "gaussian")
# upper bound of the "small random values" initialisation
SMALL_INIT_HIGH = 0.01
MODEL_MAGIC = "som-model v1"


@dataclass(frozen=True)
class SomConfig:
    """Network shape and training schedule.

    Attributes:
        k: Number of output neurons (clusters).
        n: Input dimension.
        epochs: Total number of presentations. ``None`` means
            ``max(100 * len(data), 1000)``, resolved by :meth:`resolve`.
        ordering_steps: Presentations in the ordering phase.
        initial_radius: Neighbourhood radius, in chain steps, at t = 0.
        eta_start: Learning rate at t = 0.
        eta_floor: Learning rate from the end of the ordering phase on.
        seed: Seed for initialisation and input sampling.
        init: ``"range"`` draws prototypes uniformly over the data range,
            ``"small"`` draws them from ``[0, 0.01]``.
        kernel: ``"flat"`` gives every neighbour the full learning rate,
            ``"gaussian"`` scales it by ``exp(-d^2 / 2r^2)``.
    """

    k: int = 5
    n: int = 1
    epochs: Optional[int] = None
    ordering_steps: int = 100
    initial_radius: int = 3
    eta_start: float = 0.5
    eta_floor: float = 0.01
    seed: int = 0
    init: str = "range"
    kernel: str = "flat"

    def __post_init__(self):
        if self.k < 1:
            raise InvalidConfig(f"k must be >= 1, got {self.k}")
        if self.n < 1:
            raise InvalidConfig(f"n must be >= 1, got {self.n}")
        if self.epochs is not None and self.epochs < 1:
            raise InvalidConfig(f"epochs must be >= 1, got {self.epochs}")
        if self.ordering_steps < 0:
            raise InvalidConfig(f"ordering_steps must be >= 0, got {self.ordering_steps}")
        if self.epochs is not None and self.ordering_steps > self.epochs:
            raise InvalidConfig(
                f"ordering_steps ({self.ordering_steps}) exceeds epochs ({self.epochs})"
            )
        if not 0 <= self.initial_radius <= self.k - 1:
            raise InvalidConfig(
                f"initial_radius must be in [0, k-1] = [0, {self.k - 1}], got {self.initial_radius}"
            )
        if not 0 < self.eta_start <= 1:
            raise InvalidConfig(f"eta_start must be in (0, 1], got {self.eta_start}")
        if not 0 < self.eta_floor <= self.eta_start:
            raise InvalidConfig(
                f"eta_floor must be in (0, eta_start], got {self.eta_floor}"
            )
        if self.seed < 0:
            raise InvalidConfig(f"seed must be non-negative, got {self.seed}")
        if self.init not in INIT_MODES:
            raise InvalidConfig(f"init must be one of {INIT_MODES}, got {self.init!r}")
        if self.kernel not in KERNELS:
            raise InvalidConfig(f"kernel must be one of {KERNELS}, got {self.kernel!r}")

    def resolve(self, n_samples: int) -> "SomConfig":
        """Copy with ``epochs`` filled in for a training set of ``n_samples``."""
        if self.epochs is not None:
            return self
        return replace(self, epochs=max(100 * n_samples, 1000, self.ordering_steps))


@dataclass
class SomNetwork:
    """Prototype vectors on a chain ``0 - 1 - ... - k-1``.

    ``prototypes`` has shape ``(k, n)``.
    """

    prototypes: np.ndarray

    def __post_init__(self):
        w = np.array(self.prototypes, dtype=float)
        if w.ndim == 1:
            w = w.reshape(-1, 1)
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise ValueError(f"prototypes must have shape (k, n), got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("prototypes must be finite")
        self.prototypes = w

    @property
    def k(self) -> int:
        return self.prototypes.shape[0]

    @property
    def n(self) -> int:
        return self.prototypes.shape[1]

    def copy(self) -> "SomNetwork":
        return SomNetwork(self.prototypes.copy())

    def __eq__(self, other):
        if not isinstance(other, SomNetwork):
            return NotImplemented
        return np.array_equal(self.prototypes, other.prototypes)


@dataclass(frozen=True)
class TrainingTrace:
    qe_initial: float
    qe_final: float
    presentations: int
    config: SomConfig


def _as_input(network: SomNetwork, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != network.n:
        raise DimensionMismatch(network.n, x.shape[0])
    if not np.all(np.isfinite(x)):
        raise ValueError("input must be finite")
    return x


def _as_matrix(data, n: Optional[int] = None) -> np.ndarray:
    if hasattr(data, "features"):
        data = data.features()
    X = np.asarray(data, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyDataset()
    if n is not None and X.shape[1] != n:
        raise DimensionMismatch(n, X.shape[1])
    if not np.all(np.isfinite(X)):
        raise ValueError("features must be finite")
    return X


def init_network(
    config: SomConfig,
    data_range: tuple,
    rng: Optional[np.random.Generator] = None,
) -> SomNetwork:
    """Random initial prototypes.

    Args:
        config: Network shape; ``config.init`` picks the mode.
        data_range: ``(low, high)``, each a scalar or a length-``n`` sequence.
        rng: Random source. Defaults to ``np.random.default_rng(config.seed)``.

    Raises:
        InvalidRange: ``low > high`` in some dimension.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    low, high = data_range
    low = np.broadcast_to(np.asarray(low, dtype=float), (config.n,))
    high = np.broadcast_to(np.asarray(high, dtype=float), (config.n,))
    for d in range(config.n):
        if low[d] > high[d]:
            raise InvalidRange(d, float(low[d]), float(high[d]))
    if config.init == "small":
        low = np.zeros(config.n)
        high = np.full(config.n, SMALL_INIT_HIGH)
    u = rng.random((config.k, config.n))
    w = low + u * (high - low)
    # u < 1, but rounding can still land one ulp outside [low, high]
    return SomNetwork(np.clip(w, low, high))


def find_bmu(network: SomNetwork, x) -> int:
    """Index of the prototype closest to ``x``; lowest index wins ties."""
    x = _as_input(network, x)
    d = np.sum((network.prototypes - x) ** 2, axis=1)
    return int(np.argmin(d))


def classify(network: SomNetwork, x) -> int:
    """Cluster index of ``x`` (its BMU)."""
    return find_bmu(network, x)


def classify_all(network: SomNetwork, data) -> np.ndarray:
    """BMU index for every row of ``data``."""
    X = _as_matrix(data, network.n)
    d = ((X[:, None, :] - network.prototypes[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d, axis=1)


def grid_distance(i: int, j: int, k: Optional[int] = None) -> int:
    """Number of chain steps between neurons ``i`` and ``j``.

    If ``k`` is given, both indices must lie in ``[0, k)``.
    """
    if i < 0 or j < 0 or (k is not None and (i >= k or j >= k)):
        raise IndexOutOfRange(f"neuron indices ({i}, {j}) outside [0, {k})")
    return abs(i - j)


def learning_rate(t: int, config: SomConfig) -> float:
    """Linear decay from ``eta_start`` to ``eta_floor`` over the ordering phase."""
    if t < config.ordering_steps:
        return config.eta_start + (config.eta_floor - config.eta_start) * t / config.ordering_steps
    return config.eta_floor


def neighborhood_radius(t: int, config: SomConfig) -> int:
    """Radius shrinking by one every ``ceil(ordering_steps / (initial_radius + 1))``
    presentations; 0 once the ordering phase is over."""
    if t >= config.ordering_steps:
        return 0
    stage = math.ceil(config.ordering_steps / (config.initial_radius + 1))
    return max(config.initial_radius - t // stage, 0)


def _update(w: np.ndarray, x: np.ndarray, bmu: int, radius: int, eta: float, kernel: str):
    lo = max(bmu - radius, 0)
    hi = min(bmu + radius + 1, w.shape[0])
    if kernel == "gaussian" and radius > 0:
        d = np.arange(lo, hi) - bmu
        h = np.exp(-(d * d) / (2.0 * radius * radius))[:, None]
        w[lo:hi] += eta * h * (x - w[lo:hi])
    else:
        w[lo:hi] += eta * (x - w[lo:hi])


def train_step(
    network: SomNetwork,
    x,
    t: int,
    config: SomConfig,
    eta: Optional[float] = None,
) -> SomNetwork:
    """One presentation of ``x`` at time ``t``; returns the updated network.

    ``eta`` overrides the scheduled learning rate. The input network is
    left untouched.
    """
    x = _as_input(network, x)
    out = network.copy()
    bmu = find_bmu(network, x)
    if eta is None:
        eta = learning_rate(t, config)
    _update(out.prototypes, x, bmu, neighborhood_radius(t, config), eta, config.kernel)
    return out


def _train_flat_1d(ws: list, xs: list, picks: list, etas: list, radii: list) -> list:
    # Plain-float version of the generic loop for one input and a flat kernel.
    # Same operations in the same order, so results match bit for bit.
    k = len(ws)
    for i, eta, r in zip(picks, etas, radii):
        x = xs[i]
        bmu = 0
        d = ws[0] - x
        best = d * d
        for j in range(1, k):
            d = ws[j] - x
            d = d * d
            if d < best:
                best = d
                bmu = j
        for j in range(max(bmu - r, 0), min(bmu + r + 1, k)):
            ws[j] += eta * (x - ws[j])
    return ws


def quantization_error(network: SomNetwork, data) -> float:
    """Mean squared distance from each input to its BMU prototype."""
    X = _as_matrix(data, network.n)
    d = ((X[:, None, :] - network.prototypes[None, :, :]) ** 2).sum(axis=2)
    return float(d.min(axis=1).mean())


def train(data, config: SomConfig = SomConfig()) -> tuple[SomNetwork, TrainingTrace]:
    """Train a network on ``data``.

    Args:
        data: An ``EmissionDataset`` (its ``b_mean`` values are the single
            feature) or an array of shape ``(N, n)`` / ``(N,)``.
        config: Network shape and schedule.

    Returns:
        The trained network and a :class:`TrainingTrace`. The result is a
        pure function of the data order and the config.
    """
    X = _as_matrix(data, config.n)
    config = config.resolve(X.shape[0])
    rng = np.random.default_rng(config.seed)
    network = init_network(config, (X.min(axis=0), X.max(axis=0)), rng)
    qe_initial = quantization_error(network, X)

    picks = rng.integers(0, X.shape[0], size=config.epochs)
    etas = [learning_rate(t, config) for t in range(config.epochs)]
    radii = [neighborhood_radius(t, config) for t in range(config.epochs)]
    if config.n == 1 and config.kernel == "flat":
        network.prototypes[:, 0] = _train_flat_1d(
            network.prototypes[:, 0].tolist(), X[:, 0].tolist(), picks.tolist(), etas, radii
        )
    else:
        w = network.prototypes
        for t in range(config.epochs):
            x = X[picks[t]]
            bmu = int(np.argmin(((w - x) ** 2).sum(axis=1)))
            _update(w, x, bmu, radii[t], etas[t], config.kernel)

    trace = TrainingTrace(qe_initial, quantization_error(network, X), config.epochs, config)
    return network, trace


# -- model files -----------------------------------------------------------

_INT_KEYS = ("k", "n", "epochs", "ordering_steps", "initial_radius", "seed")
_FLOAT_KEYS = ("eta_start", "eta_floor")


def dump_model(network: SomNetwork, config: Optional[SomConfig] = None) -> str:
    """Serialize a network as ``som-model v1`` text."""
    lines = [MODEL_MAGIC]
    if config is not None:
        for key, value in asdict(config).items():
            if value is None:
                continue
            lines.append(f"# {key}={value!r}" if isinstance(value, float) else f"# {key}={value}")
    for i, row in enumerate(network.prototypes):
        lines.append(",".join([str(i)] + [repr(float(v)) for v in row]))
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> tuple[SomNetwork, Optional[SomConfig]]:
    """Inverse of :func:`dump_model`.

    Raises:
        ModelFormatError: Bad header, bad row, or inconsistent neuron indices.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    if not lines or lines[0] != MODEL_MAGIC:
        raise ModelFormatError(f"expected {MODEL_MAGIC!r} header")
    settings = {}
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if not sep:
                continue
            key = key.strip()
            value = value.strip()
            try:
                if key in _INT_KEYS:
                    settings[key] = int(value)
                elif key in _FLOAT_KEYS:
                    settings[key] = float(value)
                elif key in ("init", "kernel"):
                    settings[key] = value
            except ValueError:
                raise ModelFormatError(f"line {lineno}: bad value for {key!r}") from None
            continue
        parts = line.split(",")
        try:
            index = int(parts[0])
            values = [float(p) for p in parts[1:]]
        except ValueError:
            raise ModelFormatError(f"line {lineno}: malformed neuron row") from None
        if index != len(rows) or not values:
            raise ModelFormatError(f"line {lineno}: expected neuron {len(rows)}")
        if rows and len(values) != len(rows[0]):
            raise ModelFormatError(f"line {lineno}: inconsistent dimension")
        rows.append(values)
    if not rows:
        raise ModelFormatError("no neurons")
    try:
        network = SomNetwork(np.array(rows, dtype=float))
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
    config = None
    if settings:
        try:
            config = SomConfig(**settings)
        except (InvalidConfig, TypeError) as exc:
            raise ModelFormatError(f"bad config: {exc}") from None
        if (config.k, config.n) != (network.k, network.n):
            raise ModelFormatError("config k/n do not match the neuron rows")
    return network, config


def save_model(path, network: SomNetwork, config: Optional[SomConfig] = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_model(network, config))


def load_model(path) -> tuple[SomNetwork, Optional[SomConfig]]:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())
