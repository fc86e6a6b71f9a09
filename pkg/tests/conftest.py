import sys

import numpy as np
import pytest

from axipmt.families import (GeometrostaticParams, KerrNewmanParams, flat_metric, geometrostatic_metric,
                             kerr_newman_metric)


@pytest.fixture(scope="session")
def kn():
    return kerr_newman_metric(KerrNewmanParams(1.0, 0.5, 0.3))


@pytest.fixture(scope="session")
def schwarzschild():
    return kerr_newman_metric(KerrNewmanParams(1.0))


@pytest.fixture(scope="session")
def flat():
    return flat_metric()


@pytest.fixture(scope="session")
def geo():
    return geometrostatic_metric(GeometrostaticParams.single(0.5))


@pytest.fixture(scope="session")
def geo2():
    return geometrostatic_metric(GeometrostaticParams(((1.0, 0.3, 0.2), (-1.0, 0.2, 0.3))))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
