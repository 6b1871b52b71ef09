import os

import pytest
from hypothesis import HealthCheck, settings

from mvbetti.simplicial import SimplicialComplex
from mvbetti.spacefile import load_example

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def octahedron():
    return load_example("octahedron")


@pytest.fixture(scope="session")
def torus():
    return load_example("torus")


@pytest.fixture(scope="session")
def rp2():
    return load_example("projective-plane")


@pytest.fixture(scope="session")
def circle():
    return load_example("circle")


@pytest.fixture(scope="session")
def two_triangles():
    return load_example("two-triangles")


@pytest.fixture()
def triangle():
    return SimplicialComplex.from_facets([("a", "b", "c")])


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
