import sys

import numpy as np
import pytest
from hypothesis import settings

from ergmlimit.graphs import StepGraphon

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def random_graphon(rng: np.random.Generator, k: int, equal: bool = False) -> StepGraphon:
    masses = np.full(k, 1.0 / k) if equal else rng.dirichlet(np.ones(k))
    masses = masses / masses.sum()
    v = rng.random((k, k))
    return StepGraphon(masses, np.triu(v) + np.triu(v, 1).T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
