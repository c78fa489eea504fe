"""Tests for capped-precision p-adic scalars, polynomials and series."""

import random
from fractions import Fraction

import pytest

from ckpoints.errors import NotASquare, NotSimpleRoot, PrecisionExhausted, ZeroSeed
from ckpoints.padic import (
    PadicPoly,
    PadicPowerSeries,
    PadicRing,
    PadicScalar,
    formal_integrate,
    hensel_simple_root,
    hensel_sqrt,
    padic_poly_roots,
    truncated_discriminant,
)

Z7 = PadicRing(7, 18)


def test_int_roundtrip():
    a = Z7(123456)
    assert a.lift() == 123456
    b = Z7(-1)
    assert b.lift() == 7**18 - 1


def test_fraction_lift():
    a = Z7(Fraction(-1, 8))
    assert (a.lift() * 8 + 1) % 7**18 == 0


def test_negative_valuation():
    a = Z7(Fraction(3, 7))
    assert a.valuation == -1
    assert (a * Z7(7)).lift() == 3


def test_ring_axioms_randomized():
    rng = random.Random(201)
    for _ in range(300):
        a, b, c = (Z7(rng.randrange(-(7**9), 7**9)) for _ in range(3))
        lhs = (a + b) + c
        rhs = a + (b + c)
        assert lhs.congruent(rhs) is True
        lhs = a * (b + c)
        rhs = a * b + a * c
        assert lhs.congruent(rhs) is True
        lhs = (a * b) * c
        rhs = a * (b * c)
        assert lhs.congruent(rhs) is True


def test_precision_rules():
    a = Z7(3).cap(10)
    b = Z7(4)
    assert (a + b).prec == 10
    c = Z7(49)  # valuation 2
    assert (a * c).prec == 12  # valuation-adjusted min


def test_zero_to_precision_three_valued():
    small = Z7(7**17)
    z = small - small  # exact cancellation: zero to precision 18
    assert z.is_zero
    assert z.congruent(Z7.zero()) is True
    assert z.congruent(Z7.zero(), required=25) is None
    with pytest.raises(PrecisionExhausted):
        z.must_congruent(Z7.zero(), required=25)
    assert Z7(1).congruent(Z7(2)) is False


def test_division_by_zero_to_precision_raises():
    z = Z7(0)
    with pytest.raises(PrecisionExhausted):
        Z7(1) / z


# -- hensel_sqrt ------------------------------------------------------------


def test_hensel_sqrt_identity():
    assert hensel_sqrt(Z7(1), 1).lift() == 1


def test_hensel_sqrt_of_two_matches_brute_force():
    # oracle: exhaustive search over residues mod 7^4
    target = None
    for x in range(7**4):
        if x % 7 == 3 and (x * x - 2) % 7**4 == 0:
            target = x
            break
    r = hensel_sqrt(PadicScalar.from_int(2, 7, 4), 3)
    assert r.lift() == target


def test_hensel_sqrt_square_relation_randomized():
    rng = random.Random(77)
    for _ in range(1000):
        p = rng.choice([7, 11, 13])
        ring = PadicRing(p, 12)
        a = ring(rng.randrange(1, p**6))
        if a.valuation != 0:
            continue
        u = a.lift() % p
        seed = None
        for y in range(1, p):
            if y * y % p == u:
                seed = y
                break
        if seed is None:
            continue
        r = hensel_sqrt(a, seed)
        assert (r * r).congruent(a) is True
        assert r.lift() % p == seed


def test_hensel_sqrt_errors():
    with pytest.raises(NotASquare):
        hensel_sqrt(Z7(3), 3)  # 9 != 3 mod 7
    with pytest.raises(ZeroSeed):
        hensel_sqrt(Z7(1), 7)


# -- hensel_simple_root -----------------------------------------------------


def test_hensel_simple_root_linear():
    f = Z7.poly([-5, 1])  # x - 5
    assert hensel_simple_root(f, 5).lift() == 5


def test_hensel_simple_root_matches_sqrt():
    f = Z7.poly([-2, 0, 1])  # x^2 - 2
    r1 = hensel_simple_root(f, 3)
    r2 = hensel_sqrt(Z7(2), 3)
    assert r1.congruent(r2) is True


def test_hensel_simple_root_rejects_multiple():
    f = Z7.poly([0, 0, 1])  # x^2
    with pytest.raises(NotSimpleRoot):
        hensel_simple_root(f, 0)


def test_hensel_simple_root_randomized_true_root():
    rng = random.Random(13)
    for _ in range(1000):
        p = rng.choice([7, 11])
        ring = PadicRing(p, 10)
        r0 = rng.randrange(p)
        other = [rng.randrange(-50, 50) for _ in range(3)]
        # f = (x - r0 - p*k) * quadratic ensures a known simple root
        k = rng.randrange(-10, 10)
        root = r0 + p * k
        f_coeffs = [-root, 1]
        quad = [other[0] * p + 1, other[1], other[2] * p + 1]
        prod = [0] * 4
        for i, a in enumerate(f_coeffs):
            for j, b in enumerate(quad):
                prod[i + j] += a * b
        f = ring.poly(prod)
        df_at = sum(i * prod[i] * root ** (i - 1) for i in range(1, 4))
        if df_at % p == 0:
            continue
        got = hensel_simple_root(f, r0)
        val = f.evaluate(got)
        assert val.is_zero
        assert got.lift() % p == r0 % p


# -- formal integration ------------------------------------------------------


def test_formal_integrate_zero():
    s = PadicPowerSeries.zero(7, 18, 5)
    out = formal_integrate(s)
    assert all(c.is_zero for c in out.coeffs)


def test_formal_integrate_termwise_rule():
    M = 9
    s = Z7.series([1] * (M + 1), M)
    out = formal_integrate(s)
    assert out.coeffs[0].is_zero
    for n in range(M + 1):
        expect = Z7(Fraction(1, n + 1)).cap(out.coeffs[n + 1].prec)
        assert out.coeffs[n + 1].congruent(expect) is True


def test_formal_integrate_precision_loss_at_p_minus_1():
    M = 10
    s = Z7.series([1] * (M + 1), M)
    out = formal_integrate(s)
    # index n = p-1 = 6 divides by 7: exactly one digit lost
    assert out.coeffs[7].prec == 17
    assert out.coeffs[6].prec == 18


def test_integrate_then_differentiate_roundtrip():
    rng = random.Random(5)
    M = 12
    s = Z7.series([rng.randrange(-1000, 1000) for _ in range(M + 1)], M)
    back = formal_integrate(s).derivative()
    for n in range(M):
        assert back.coeffs[n].congruent(s.coeffs[n]) is True


# -- series utilities --------------------------------------------------------


def test_series_inverse_and_sqrt():
    rng = random.Random(9)
    M = 12
    u = Z7.series([1] + [rng.randrange(-30, 30) for _ in range(M)], M)
    inv = u.inverse()
    prod = u * inv
    assert prod.coeffs[0].congruent(Z7(1)) is True
    for c in prod.coeffs[1:]:
        assert c.is_zero
    sq = u * u
    root = sq.sqrt(Z7(1))
    for a, b in zip(root.coeffs, u.coeffs):
        assert a.congruent(b) is True


# -- padic_poly_roots ---------------------------------------------------------


def brute_roots_mod(coeffs, p, k):
    """Oracle: all residues mod p^k where the integer polynomial vanishes."""
    m = p**k
    out = []
    for x in range(m):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % m
        if acc == 0:
            out.append(x)
    return out


def test_roots_trivial_product():
    f = Z7.poly([0, -1, 1])  # x(x-1) = x^2 - x
    roots = sorted(r.lift() % 7 for r in padic_poly_roots(f))
    assert roots == [0, 1]


def test_roots_x2_minus_2_match_brute_force():
    oracle = brute_roots_mod([-2, 0, 1], 7, 4)
    f = PadicPoly([PadicScalar.from_int(c, 7, 4) for c in [-2, 0, 1]], 7)
    roots = sorted(r.lift() % 7**4 for r in padic_poly_roots(f))
    assert roots == sorted(oracle)


def test_roots_x2_plus_3():
    # -3 = 4 = 2^2 mod 7 is a square, so two roots exist
    oracle = brute_roots_mod([3, 0, 1], 7, 4)
    f = PadicPoly([PadicScalar.from_int(c, 7, 4) for c in [3, 0, 1]], 7)
    roots = sorted(r.lift() % 7**4 for r in padic_poly_roots(f))
    assert len(roots) == 2
    assert roots == sorted(oracle)


def test_roots_agree_with_exhaustive_search_randomized():
    rng = random.Random(31)
    done = 0
    while done < 40:
        p = rng.choice([7, 11])
        deg = rng.randrange(2, 6)
        coeffs = [rng.randrange(-40, 40) for _ in range(deg)] + [rng.randrange(1, 10)]
        # skip inputs whose root clusters exceed the precision budget; the
        # contract guarantees simple roots upstream
        f = PadicPoly([PadicScalar.from_int(c, p, 4) for c in coeffs], p)
        try:
            got = sorted(r.lift() % p**4 for r in padic_poly_roots(f))
        except PrecisionExhausted:
            continue
        oracle = brute_roots_mod(coeffs, p, 4)
        # oracle includes residues that merely vanish mod p^4 without being
        # genuine Z_p roots of a nearby factor; every certified root must be
        # among them, and every genuine simple root mod p must be found
        for r in got:
            assert r in oracle
        for r in oracle:
            fp_der = sum(i * coeffs[i] * r ** (i - 1) for i in range(1, len(coeffs))) % p
            if fp_der != 0:
                assert any(x % p == r % p for x in got)
        done += 1


def test_roots_cluster_separation():
    # roots 7 and 14 are congruent mod 7: forces the zoom-in path
    f = Z7.poly([98, -21, 1])  # (x-7)(x-14)
    roots = sorted(r.lift_centered() for r in padic_poly_roots(f))
    assert roots == [7, 14]


# -- truncated_discriminant ---------------------------------------------------


def test_discriminant_double_root():
    s = Z7.series([0, 0, 1], 5)  # t^2
    assert truncated_discriminant(s, 5).is_zero


def test_discriminant_simple():
    s = Z7.series([0, -1, 1], 5)  # t(t-1)
    assert truncated_discriminant(s, 5).congruent(Z7(1)) is True


def test_discriminant_quadratic_formula():
    s = Z7.series([-2, 0, 1], 5)  # t^2 - 2, disc = b^2 - 4ac = 8
    assert truncated_discriminant(s, 5).congruent(Z7(8)) is True
