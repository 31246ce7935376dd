import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from dillmaps import dill
from dillmaps.substitution import Substitution, fibonacci, thue_morse, tribonacci

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).resolve().parents[1] / "data"

# Every DillTable built during the session, keyed by its dump, so the
# acceptance suite can check canonicalize idempotence on all of them.
PRODUCED_TABLES: dict[tuple, dill.DillTable] = {}
_original_post_init = dill.DillTable.__post_init__


def _recording_post_init(self):
    _original_post_init(self)
    key = (self.domain, self.target, self.in_radius, tuple(sorted(self.table.items())))
    PRODUCED_TABLES.setdefault(key, self)


dill.DillTable.__post_init__ = _recording_post_init


def pytest_collection_modifyitems(session, config, items):
    # acceptance criteria run last so criterion 9 sees tables from every module
    items.sort(key=lambda item: item.fspath.basename == "test_acceptance.py")


@pytest.fixture(scope="session")
def tm():
    return thue_morse("01")


@pytest.fixture(scope="session")
def fib():
    return fibonacci()


@pytest.fixture(scope="session")
def tri():
    return tribonacci()


@pytest.fixture(scope="session")
def unbalanced():
    return Substitution.from_rules({"0": "0001", "1": "110"})


@pytest.fixture(scope="session")
def data_dir():
    return DATA
