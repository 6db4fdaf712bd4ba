import pytest

from ocmc.gadgets import fixed_ocn
from ocmc.ocp import OneCounterProcess


@pytest.fixture(scope="session")
def fig1():
    return fixed_ocn()


@pytest.fixture
def climbing():
    return OneCounterProcess.build(["q"], {}, zero=[("q", 1, "q")], positive=[("q", 1, "q")])


@pytest.fixture
def deadlock():
    return OneCounterProcess.build(["q"], {"a": ["q"]})
