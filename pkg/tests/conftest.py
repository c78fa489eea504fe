"""Shared fixtures: the three worked example curves used across the suite."""

from fractions import Fraction

import pytest

from ckpoints.curve import HyperellipticCurve, scale_to_monic

# y^2 = x^7 - 37024 x^6 + ... - 103079215104; two rational points
EX1_COEFFS = [
    -103079215104,
    59055800320,
    -13656653824,
    1613758464,
    -101220352,
    3134464,
    -37024,
    1,
]

# monic model with 2-power denominators; one rational point plus an
# order-18 torsion pair over Q(sqrt(-3))
EX2_COEFFS = [
    Fraction(-1, 4194304),
    Fraction(-1, 65536),
    Fraction(-27, 65536),
    Fraction(-53, 8192),
    Fraction(-243, 4096),
    Fraction(-51, 256),
    Fraction(5, 64),
    Fraction(1),
]

# non-monic input model y^2 = 8x^7 - 16x^5 - 7x^4 + 4x^3 + 6x^2 + 4x + 1;
# six rational points, sharp for the mod-p point count bound
EX3_RAW_COEFFS = [1, 4, 6, 4, -7, -16, 0, 8]


@pytest.fixture(scope="session")
def ex1():
    return HyperellipticCurve(EX1_COEFFS)


@pytest.fixture(scope="session")
def ex2():
    return HyperellipticCurve(EX2_COEFFS)


@pytest.fixture(scope="session")
def ex3_monic():
    curve, point_map = scale_to_monic(EX3_RAW_COEFFS)
    return curve, point_map
