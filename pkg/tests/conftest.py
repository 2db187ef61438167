import pytest

from hflab import (ExpPower, FreudMonomial, MrsSolver, WeightSpec,
                   stieltjes_recurrence)


@pytest.fixture(scope="session")
def spec_hermite():
    """Q = x^2, rho = 0; nu = 4 so derivative data covers orders 2 and 4."""
    return WeightSpec(FreudMonomial(2.0), rho=0.0, nu=4)


@pytest.fixture(scope="session")
def solver_hermite(spec_hermite):
    return MrsSolver(spec_hermite)


@pytest.fixture(scope="session")
def table_hermite(spec_hermite, solver_hermite):
    return stieltjes_recurrence(spec_hermite, 64, 30, solver_hermite)


@pytest.fixture(scope="session")
def spec_hermite_rho1():
    return WeightSpec(FreudMonomial(2.0), rho=1.0, nu=2)


@pytest.fixture(scope="session")
def solver_hermite_rho1(spec_hermite_rho1):
    return MrsSolver(spec_hermite_rho1)


@pytest.fixture(scope="session")
def table_hermite_rho1(spec_hermite_rho1, solver_hermite_rho1):
    return stieltjes_recurrence(spec_hermite_rho1, 64, 30,
                                solver_hermite_rho1)


@pytest.fixture(scope="session")
def spec_erdos():
    """Q = exp(x^2) - 1, the standard unbounded-T example."""
    return WeightSpec(ExpPower(ell=1, alpha=2.0, m=0.0), rho=0.0, nu=2)


@pytest.fixture(scope="session")
def solver_erdos(spec_erdos):
    return MrsSolver(spec_erdos)


@pytest.fixture(scope="session")
def table_erdos(spec_erdos, solver_erdos):
    return stieltjes_recurrence(spec_erdos, 64, 30, solver_erdos)
