"""Shared session fixtures: the heavyweight rasters and the certificate."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # test-local oracles

from udsets.constructions import croft_tortoise, hex_disk_packing, rasterize_report
from udsets.registry import builtin_registry
from udsets.torus import spectrum
from udsets.witness import certify_bound


@pytest.fixture(scope="session")
def registry():
    return builtin_registry()


@pytest.fixture(scope="session")
def disk128():
    """Disk packing raster at the stated acceptance parameters."""
    return rasterize_report(hex_disk_packing(), 128, 8, beta=0.01)


@pytest.fixture(scope="session")
def disk128_spectrum(disk128):
    return spectrum(disk128.grid, 11_000)


@pytest.fixture(scope="session")
def croft128():
    return rasterize_report(croft_tortoise(0.96553), 128, 8, beta=0.01)


@pytest.fixture(scope="session")
def disk38():
    """Near-faithful embedding used by the supplementary clumpiness test."""
    return rasterize_report(hex_disk_packing(), 128, 38, beta=0.006)


@pytest.fixture(scope="session")
def certified(registry):
    return certify_bound(registry)
