import pytest
from hypothesis import HealthCheck, settings

from htgames import Player, validate
from htgames.cli import parse_roster
from htgames.data import path as data_path

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


NAPA_PLAYERS = (
    Player("1", harvest_kg=198000, capacity_kg=253000, unit_cost=0.95),
    Player("2", harvest_kg=189000, capacity_kg=259000, unit_cost=0.80),
    Player("3", harvest_kg=229000, capacity_kg=137000, unit_cost=0.90),
)


@pytest.fixture(scope="session")
def napa():
    return validate(NAPA_PLAYERS, 1.70)


@pytest.fixture(scope="session")
def korca_case1():
    return parse_roster(data_path("korca_case1.csv"), 0.70)


@pytest.fixture(scope="session")
def korca_case2():
    return parse_roster(data_path("korca_case2.csv"), 0.70)


@pytest.fixture(scope="session")
def korca49():
    return parse_roster(data_path("korca49.csv"), 0.70)
