import os
import sys
import warnings

import pytest

FIXDIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name):
    return os.path.join(FIXDIR, name)


@pytest.fixture(scope="session")
def client():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from plectic.service.app import app
    with TestClient(app) as c:
        yield c


@pytest.fixture(scope="session")
def synthetic_fixture():
    from plectic.shapiro import make_synthetic_fixture
    return make_synthetic_fixture(p=3, m_max=3, seed=7)


@pytest.fixture(scope="session")
def zero_kappa_fixture():
    from plectic.shapiro import make_synthetic_fixture
    return make_synthetic_fixture(p=3, m_max=3, seed=7, kappa_zero=True)
