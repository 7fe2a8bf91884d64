import pytest

from minflow.qlinear import GeneratorBasis, decimal_generator, sqrt_generator


def make_basis():
    # s = sqrt(2) with quadratic closure, u = sqrt(3) without, g a decimal literal
    return GeneratorBasis(
        [
            sqrt_generator("s", 2),
            sqrt_generator("u", 3, quadratic_closure=False),
            decimal_generator("g", "0.5772156649"),
        ],
        id="test",
        independence_note="1, sqrt2, sqrt3, g declared independent",
    )


@pytest.fixture
def B():
    return make_basis()
