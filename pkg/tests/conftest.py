import pytest

from aatkit.algebroid import AlgebroidCurve
from aatkit.functions import FunctionSpec
from aatkit.poly import MultiPoly


@pytest.fixture(scope="session")
def uvw():
    return tuple(MultiPoly.variable(v) for v in "UVW")


@pytest.fixture(scope="session")
def golden_cubic():
    """8u z^3 + 3(1-u) z + (1-u): pole at 0, branch points at 1 and -1."""
    u = MultiPoly.variable("u")
    z = MultiPoly.variable("z")
    return AlgebroidCurve(8 * u * z ** 3 + 3 * (1 - u) * z + (1 - u))


@pytest.fixture(scope="session")
def sqrt_curve():
    u = MultiPoly.variable("u")
    z = MultiPoly.variable("z")
    return AlgebroidCurve(z * z - u)


@pytest.fixture(scope="session")
def sin_quartic(uvw):
    U, V, W = uvw
    return (W ** 2 + U ** 2 - V ** 2) ** 2 - 4 * U ** 2 * W ** 2 * (1 - V ** 2)


@pytest.fixture(scope="session")
def tan_poly(uvw):
    U, V, W = uvw
    return W * (1 - U * V) - (U + V)


@pytest.fixture(scope="session")
def sin_spec():
    return FunctionSpec.builtin("sin")


@pytest.fixture(scope="session")
def tan_spec():
    return FunctionSpec.builtin("tan")


@pytest.fixture(scope="session")
def exp_spec():
    return FunctionSpec.builtin("exp")


@pytest.fixture(scope="session")
def inverse_spec():
    u = MultiPoly.variable("u")
    return FunctionSpec.rational(MultiPoly.constant(1, ("u",)), u)
