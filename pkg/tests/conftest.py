import pytest

from loopsv import GroupData, LoopAlgebra, Window


@pytest.fixture(scope="session")
def group():
    return GroupData.default()


@pytest.fixture(scope="session")
def alg(group):
    return LoopAlgebra(group)


@pytest.fixture(scope="session")
def window():
    """The default verification window used by the acceptance criteria."""
    return Window(3, 3)


@pytest.fixture(scope="session")
def small_window():
    """Cheaper window for sweeps that run many times."""
    return Window(2, 2)


@pytest.fixture(scope="session")
def root2_group():
    return GroupData.from_config(
        {"field": {"Q_sqrt": 2}, "gamma_generators": ["1", "sqrt2"], "s": "1/2"}
    )


@pytest.fixture(scope="session")
def root2_alg(root2_group):
    return LoopAlgebra(root2_group)
