import numpy as np
import pytest

from elfsom.ingest import build_all_datasets
from elfsom.sample import load_sample

CENTERS = np.array([1.0, 10.0, 20.0, 30.0, 40.0])


def separated_clusters(seed, per_cluster=100, spread=0.1):
    """Five well-separated 1-D Gaussian clusters; returns (values, labels)."""
    rng = np.random.default_rng(seed)
    labels = np.repeat(np.arange(len(CENTERS)), per_cluster)
    values = CENTERS[labels] + spread * rng.standard_normal(labels.size)
    return values, labels


def uniform_line(seed, n=200):
    return np.random.default_rng(10_000 + seed).uniform(0.0, 1.0, n)


@pytest.fixture(scope="session")
def sample():
    return load_sample()


@pytest.fixture(scope="session")
def sample_datasets(sample):
    return build_all_datasets(sample)


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line)
