"""
encprim Test Suite - Pytest Configuration

Shared fixtures and configuration for tests.
"""

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from encprim.encounters import CoordinateFrame, DrivingEncounter
from encprim.segmentation import HdpHmmConfig


def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line(
        "markers", "slow: full-length sampler and pipeline runs (use --run-slow)"
    )


def pytest_addoption(parser):
    """Add custom command line options."""
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run slow tests (200-sweep acceptance runs)",
    )


def pytest_collection_modifyitems(config, items):
    """Skip slow tests unless --run-slow is specified."""
    if config.getoption("--run-slow"):
        return

    skip_slow = pytest.mark.skip(reason="Need --run-slow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def make_encounter() -> Callable[..., DrivingEncounter]:
    """Factory for projected encounters from position/speed arrays."""

    def _make(
        p1: np.ndarray,
        p2: np.ndarray,
        v1: np.ndarray | None = None,
        v2: np.ndarray | None = None,
        rate_hz: float = 10.0,
        encounter_id: str = "enc",
    ) -> DrivingEncounter:
        p1 = np.asarray(p1, dtype=float)
        p2 = np.asarray(p2, dtype=float)
        n = p1.shape[0]
        v1 = np.zeros(n) if v1 is None else np.asarray(v1, dtype=float)
        v2 = np.zeros(n) if v2 is None else np.asarray(v2, dtype=float)
        t = np.arange(n) / rate_hz
        data = np.column_stack([t, p1, v1, p2, v2])
        return DrivingEncounter(
            id=encounter_id, data=data, rate_hz=rate_hz, frame=CoordinateFrame.LOCAL_METERS
        )

    return _make


@pytest.fixture
def straight_encounter(make_encounter) -> DrivingEncounter:
    """Two vehicles driving east side by side for 12 s at 10 Hz."""
    t = np.arange(121) / 10.0
    p1 = np.column_stack([8.0 * t, np.zeros_like(t)])
    p2 = np.column_stack([8.0 * t - 10.0, np.full_like(t, 3.5)])
    return make_encounter(p1, p2, np.full_like(t, 8.0), np.full_like(t, 8.0))


@pytest.fixture
def fast_hdphmm() -> HdpHmmConfig:
    """A short sampler run for unit tests."""
    return HdpHmmConfig(truncation_level=8, iterations=30, seed=3)


@pytest.fixture
def write_csv(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write raw CSV text into tmp_path and return the file path."""

    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
