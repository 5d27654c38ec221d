import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from fpcone.models import builtin_models  # noqa: E402
from oracle import Oracle  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

MODELS = builtin_models()


@pytest.fixture(scope="session")
def models():
    return MODELS


@pytest.fixture(scope="session")
def kt4():
    return MODELS["kt4"]


@pytest.fixture(scope="session")
def t4():
    return MODELS["t4"]


@pytest.fixture(scope="session")
def t6():
    return MODELS["t6"]


@pytest.fixture(scope="session")
def nil6():
    return MODELS["nil6"]


_ORACLES = {}


def oracle_of(m):
    key = m.name
    if key not in _ORACLES:
        _ORACLES[key] = Oracle.of(m)
    return _ORACLES[key]


def as_triple(x):
    """Package FilteredElement -> oracle (side, k, {index: coeff})."""
    return (x.side, x.k, dict(x.form.terms))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
