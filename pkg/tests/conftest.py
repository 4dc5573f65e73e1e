"""Shared fixtures.

Calibration synthesis runs a root-solve per qubit, so device snapshots
are session-scoped; tests only ever read them.
"""

import pytest

from pulseguard.core import synthesize_snapshot


@pytest.fixture(scope="session")
def cal1q():
    return synthesize_snapshot(1, seed=11)


@pytest.fixture(scope="session")
def cal2q():
    return synthesize_snapshot(2, coupling=((0, 1),), seed=7)


@pytest.fixture(scope="session")
def cal3q():
    return synthesize_snapshot(3, coupling=((0, 1), (1, 2)), seed=5)
