import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

settings.register_profile("default", max_examples=20, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=10, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("MOEBIUS_PROFILE", "default"))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running numerical checks")


@pytest.fixture(scope="session")
def unit_circle():
    from src.curves import corpus
    return corpus.unit_circle()


@pytest.fixture(scope="session")
def wobbly_circle():
    from src.curves import corpus
    return corpus.perturbed_circle(0.05, 2, max_freq=24)


@pytest.fixture(scope="session")
def spatial_curve():
    from src.curves import corpus
    return corpus.perturbed_circle(0.04, 2, dim=3, lift=0.02, max_freq=24)


@pytest.fixture(scope="session")
def corpus_curves():
    from src.curves import corpus
    return corpus.standard_corpus(count=10)
