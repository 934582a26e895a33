"""Pytest configuration and shared fixtures."""
from __future__ import annotations

import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
SRC_PATH = PROJECT_ROOT / "src"

if str(SRC_PATH) not in sys.path:
    sys.path.insert(0, str(SRC_PATH))

from tests.mocks import data as mock_data  # noqa: E402


@pytest.fixture(autouse=True)
def _reset_structlog():
    """Undo per-test logging configuration so no logger keeps a closed capture stream."""
    yield
    import structlog

    structlog.reset_defaults()


@pytest.fixture(scope="session")
def limit_pair():
    """Symmetric minimizer for p = 2 on [-8, 8]."""
    from bvp.solver import minimize_limit
    from models.schemas import LimitProblem

    return minimize_limit(LimitProblem(p=2.0, R=8.0, n=801))


@pytest.fixture(scope="session")
def limit_pair_fine():
    from bvp.solver import minimize_limit
    from models.schemas import LimitProblem

    return minimize_limit(LimitProblem(p=2.0, R=8.0, n=1601))


@pytest.fixture(scope="session")
def perron_profile():
    from ivp.perron import perron_construct

    return perron_construct(2.0, 6.0, 601)


@pytest.fixture()
def linear_pair():
    return mock_data.make_linear_pair()


@pytest.fixture()
def lambda_params():
    return mock_data.make_lambda_params()
