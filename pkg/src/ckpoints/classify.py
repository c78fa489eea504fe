"""Classification of found p-adic points: rational, 2-torsion, higher torsion.

Rational coordinates are recovered by lattice (extended-Euclid) rational
reconstruction; algebraic coordinates by an integer-relation search among
1, a, ..., a^d modulo p^N (a compact LLL at dimension <= 4, no external
reduction library).  Torsion orders are computed in J(F_p) with Cantor's
composition/reduction algorithm on Mumford representatives, using the group
order #J(F_p) = P(1) from the zeta module; for odd p of good reduction the
prime-to-p torsion of J(Q_p) injects under reduction, and the possible
p-part ambiguity is surfaced as a flag rather than resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cohomology import FrobeniusAction, jacobian_order_fp
from .curve import HyperellipticCurve, Point, reduce_point
from .errors import NotTorsionConsistent
from .padic import PadicRing, PadicScalar, hensel_simple_root, hensel_sqrt


# ---------------------------------------------------------------------------
# Rational reconstruction
# ---------------------------------------------------------------------------


def rational_reconstruct(a: PadicScalar) -> Fraction | None:
    """The unique n/d with |n|, |d| <= floor(sqrt(p^N/2)) congruent to a, if any.

    Negative valuations are handled by reconstructing the unit part and
    scaling by the appropriate power of p afterwards.
    """
    if a.is_zero:
        return Fraction(0)
    if a.val < 0:
        unit = PadicScalar(a.p, 0, a.unit, a.prec - a.val)
        rec = rational_reconstruct(unit)
        if rec is None:
            return None
        return rec * Fraction(1, a.p ** (-a.val))
    m = a.p**a.prec
    bound = math.isqrt(m // 2)
    target = a.lift()
    r0, r1 = m, target
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    n, d = r1, t1
    if d == 0:
        return None
    if d < 0:
        n, d = -n, -d
    if d > bound or math.gcd(n, d) != 1 or d % a.p == 0:
        return None
    if (n - target * d) % m != 0:
        return None
    return Fraction(n, d)


# ---------------------------------------------------------------------------
# Weierstrass test
# ---------------------------------------------------------------------------


def is_two_torsion_extra(point: Point, curve: HyperellipticCurve) -> bool:
    """True iff the point is affine with y = 0 to precision (a Weierstrass point).

    Classification precedence is the caller's job: a rational Weierstrass
    point is reported as rational, not as a 2-torsion extra.
    """
    if point.at_infinity:
        return False
    return point.y.is_zero


# ---------------------------------------------------------------------------
# Integer relations (minimal polynomial recovery)
# ---------------------------------------------------------------------------


def algebraic_dependency(a: PadicScalar, max_degree: int = 2, slack: int = 3) -> list[int] | None:
    """Lowest-degree integer polynomial g with g(a) = 0 mod p^(N - slack).

    Searches degrees 1..max_degree through the relation lattice spanned by
    (m, 0, ..), (-a, 1, 0, ..), (-a^2, 0, 1, ..) and keeps a reduced vector
    only when it is decisively shorter than the covolume heuristic allows
    for random input; the accepted polynomial is content-free, irreducible,
    and has a positive leading coefficient.
    """
    if a.is_zero:
        return [0, 1]
    if a.val < 0:
        return None
    p, prec = a.p, a.prec
    m = p**prec
    lift = a.lift()
    for degree in range(1, max_degree + 1):
        dim = degree + 1
        basis = [[m] + [0] * degree]
        power = 1
        for i in range(1, dim):
            power = power * lift % m
            row = [(-power) % m] + [0] * degree
            row[i] = 1
            basis.append(row)
        reduced = _lll(basis)
        threshold = int(round(p ** (prec / dim))) // 64 + 2
        for vec in reduced:
            g = _normalize_poly(list(vec))
            if g is None:
                continue
            if max(abs(c) for c in g) > threshold:
                continue
            if _poly_eval_mod(g, lift, p ** max(prec - slack, 1)) != 0:
                continue
            g = _irreducible_or_factor(g, lift, p, prec, slack)
            if g is None:
                continue
            return g
    return None


def _normalize_poly(coeffs: list[int]) -> list[int] | None:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return None
    content = 0
    for c in coeffs:
        content = math.gcd(content, c)
    if content > 1:
        coeffs = [c // content for c in coeffs]
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    return coeffs


def _poly_eval_mod(coeffs: list[int], x: int, m: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % m
    return acc


def _irreducible_or_factor(g, lift, p, prec, slack):
    """Return g if irreducible; else its irreducible factor vanishing at a."""
    if len(g) == 2:
        return g
    if len(g) == 3:
        disc = g[1] * g[1] - 4 * g[0] * g[2]
        if disc < 0:
            return g
        s = math.isqrt(disc)
        if s * s != disc:
            return g
        # rational roots: (-b +- s) / (2c); pick the one matching a
        m = p ** max(prec - slack, 1)
        for sign in (1, -1):
            num = -g[1] + sign * s
            den = 2 * g[2]
            gg = math.gcd(num, den)
            num //= gg
            den //= gg
            if den < 0:
                num, den = -num, -den
            if den % p == 0:
                continue
            if (num - lift * den) % m == 0:
                return _normalize_poly([-num, den])
        return None
    return g


def _lll(basis: list[list[int]], delta=Fraction(3, 4)) -> list[list[int]]:
    """Textbook LLL for the tiny lattices used here (dimension <= 4)."""
    b = [list(map(int, row)) for row in basis]
    n = len(b)

    def gramschmidt():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar_sq = [Fraction(0)] * n
        bstar = [[Fraction(0)] * len(b[0]) for _ in range(n)]
        for i in range(n):
            bstar[i] = [Fraction(x) for x in b[i]]
            for j in range(i):
                if bstar_sq[j] == 0:
                    mu[i][j] = Fraction(0)
                    continue
                mu[i][j] = sum(Fraction(x) * y for x, y in zip(b[i], bstar[j])) / bstar_sq[j]
                bstar[i] = [x - mu[i][j] * y for x, y in zip(bstar[i], bstar[j])]
            bstar_sq[i] = sum(x * x for x in bstar[i])
        return mu, bstar_sq

    mu, bstar_sq = gramschmidt()
    k = 1
    guard = 0
    while k < n and guard < 10000:
        guard += 1
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                r = int(round(mu[k][j]))
                b[k] = [x - r * y for x, y in zip(b[k], b[j])]
                mu, bstar_sq = gramschmidt()
        if bstar_sq[k] >= (delta - mu[k][k - 1] ** 2) * bstar_sq[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, bstar_sq = gramschmidt()
            k = max(k - 1, 1)
    b.sort(key=lambda row: sum(x * x for x in row))
    return b


# ---------------------------------------------------------------------------
# F_p[x] helpers and Cantor's algorithm
# ---------------------------------------------------------------------------


def _fp_trim(a, p):
    a = [c % p for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_add(a, b, p):
    n = max(len(a), len(b))
    return _fp_trim(
        [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)], p
    )


def _fp_neg(a, p):
    return [(-c) % p for c in a]


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _fp_trim(out, p)


def _fp_divmod(a, b, p):
    a = _fp_trim(list(a), p)
    b = _fp_trim(list(b), p)
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        off = len(a) - len(b)
        q[off] = c
        for i in range(len(b)):
            a[off + i] = (a[off + i] - c * b[i]) % p
        a = _fp_trim(a, p)
        if not a:
            break
    return _fp_trim(q, p), a


def _fp_xgcd(a, b, p):
    """Monic gcd g and (s, t) with s*a + t*b = g."""
    r0, r1 = _fp_trim(list(a), p), _fp_trim(list(b), p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _fp_add(s0, _fp_neg(_fp_mul(q, s1, p), p), p)
        t0, t1 = t1, _fp_add(t0, _fp_neg(_fp_mul(q, t1, p), p), p)
    if not r0:
        return [], s0, t0
    inv = pow(r0[-1], -1, p)
    return (
        [c * inv % p for c in r0],
        [c * inv % p for c in s0],
        [c * inv % p for c in t0],
    )


def _fp_monic(a, p):
    a = _fp_trim(list(a), p)
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


@dataclass(frozen=True)
class MumfordDivisor:
    """Reduced divisor class (u(x), v(x)) on J(F_p): u monic, v^2 = F mod u."""

    u: tuple
    v: tuple
    p: int

    @classmethod
    def identity(cls, p: int) -> "MumfordDivisor":
        return cls((1,), (), p)

    @classmethod
    def from_point(cls, pbar: Point, p: int) -> "MumfordDivisor":
        """The class [P - infinity] of an affine F_p point."""
        return cls(((-pbar.x) % p, 1), (pbar.y % p,) if pbar.y % p else (), p)

    @property
    def is_identity(self) -> bool:
        return self.u == (1,)

    def neg(self) -> "MumfordDivisor":
        return MumfordDivisor(self.u, tuple((-c) % self.p for c in self.v), self.p)


def cantor_compose_reduce(
    d1: MumfordDivisor, d2: MumfordDivisor, curve: HyperellipticCurve, p: int
) -> MumfordDivisor:
    """Cantor's algorithm: the reduced representative of d1 + d2."""
    g = curve.genus
    fbar = curve.fp_coeffs(p)
    u1, v1 = list(d1.u), list(d1.v)
    u2, v2 = list(d2.u), list(d2.v)
    e, e1, e2 = _fp_xgcd(u1, u2, p)
    d, c1, c2 = _fp_xgcd(e, _fp_add(v1, v2, p), p)
    if not d:
        d, c1, c2 = [1], [1], []
    s1 = _fp_mul(c1, e1, p)
    s2 = _fp_mul(c1, e2, p)
    s3 = c2
    u1u2, rem = _fp_divmod(_fp_mul(u1, u2, p), _fp_mul(d, d, p), p)
    assert not rem
    # v = (s1 u1 v2 + s2 u2 v1 + s3 (v1 v2 + F)) / d mod u
    t = _fp_add(
        _fp_add(_fp_mul(_fp_mul(s1, u1, p), v2, p), _fp_mul(_fp_mul(s2, u2, p), v1, p), p),
        _fp_mul(s3, _fp_add(_fp_mul(v1, v2, p), fbar, p), p),
        p,
    )
    tq, trem = _fp_divmod(t, d, p)
    assert not trem
    _, v = _fp_divmod(tq, u1u2, p)
    u = u1u2
    # reduction: replace (u, v) by ((F - v^2)/u, -v mod new u) until deg u <= g
    while len(u) - 1 > g:
        num = _fp_add(fbar, _fp_neg(_fp_mul(v, v, p), p), p)
        u_new, rem = _fp_divmod(num, u, p)
        assert not rem
        u_new = _fp_monic(u_new, p)
        _, v_new = _fp_divmod(_fp_neg(v, p), u_new, p)
        u, v = u_new, v_new
    u = _fp_monic(u, p)
    if not u:
        u = [1]
    return MumfordDivisor(tuple(u), tuple(_fp_trim(v, p)), p)


def cantor_scalar_mul(
    n: int, d: MumfordDivisor, curve: HyperellipticCurve, p: int
) -> MumfordDivisor:
    if n < 0:
        return cantor_scalar_mul(-n, d.neg(), curve, p)
    result = MumfordDivisor.identity(p)
    base = d
    while n:
        if n & 1:
            result = cantor_compose_reduce(result, base, curve, p)
        n >>= 1
        if n:
            base = cantor_compose_reduce(base, base, curve, p)
    return result


def divisor_order(
    d: MumfordDivisor, curve: HyperellipticCurve, p: int, group_order: int
) -> int:
    """Order of d in J(F_p), by stripping primes from the group order."""
    if cantor_scalar_mul(group_order, d, curve, p).is_identity is False:
        raise NotTorsionConsistent("group order does not kill the divisor class")
    order = group_order
    for q in _prime_factors(group_order):
        while order % q == 0 and cantor_scalar_mul(order // q, d, curve, p).is_identity:
            order //= q
    return order


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def torsion_order(point: Point, curve: HyperellipticCurve, fa: FrobeniusAction) -> int:
    """Order of [Q-bar - infinity-bar] in J(F_p) for a non-rational extra Q.

    Reduction is injective on prime-to-p torsion for odd p of good reduction,
    so this is the exact torsion order whenever p does not divide #J(F_p);
    callers surface the p-part caveat via torsion_p_ambiguous.
    """
    p = fa.p
    qbar = reduce_point(point, p)
    if qbar.at_infinity:
        return 1
    d = MumfordDivisor.from_point(qbar, p)
    return divisor_order(d, curve, p, jacobian_order_fp(fa))


def torsion_p_ambiguous(fa: FrobeniusAction) -> bool:
    """True when p divides #J(F_p): the p-part of the order is not pinned."""
    return jacobian_order_fp(fa) % fa.p == 0


# ---------------------------------------------------------------------------
# Point classification
# ---------------------------------------------------------------------------


@dataclass
class ClassifiedPoint:
    """A found Q_p point with its verdict and reconstruction data.

    verdict: "rational" | "two-torsion" | "higher-torsion" (mutually
    exclusive, with the precedence rational > two-torsion > higher-torsion).
    """

    point: Point
    verdict: str
    rational: Point | None = None
    x_min_poly: list[int] | None = None
    order: int | None = None
    order_p_ambiguous: bool = False


def classify_point(
    point: Point,
    curve: HyperellipticCurve,
    fa: FrobeniusAction,
    max_degree: int = 2,
) -> ClassifiedPoint:
    """Steps 4-5 of the driver: identify or reconstruct one found point."""
    if point.at_infinity:
        return ClassifiedPoint(point, "rational", rational=INFTY_RATIONAL)
    ring = PadicRing(fa.p, fa.precision)
    rx = rational_reconstruct(point.x)
    ry = rational_reconstruct(point.y)
    if rx is not None and ry is not None and curve.f_eval(rx) == ry * ry:
        exact = Point(rx, ry)
        if _matches(point, exact, ring):
            return ClassifiedPoint(_exact_lift(exact, ring), "rational", rational=exact)
    if is_two_torsion_extra(point, curve):
        poly = algebraic_dependency(point.x, max_degree)
        refined = _refine_from_min_poly(point, poly, curve, ring)
        return ClassifiedPoint(refined, "two-torsion", x_min_poly=poly, order=2)
    poly = algebraic_dependency(point.x, max_degree)
    refined = _refine_from_min_poly(point, poly, curve, ring)
    order = torsion_order(refined, curve, fa)
    return ClassifiedPoint(
        refined,
        "higher-torsion",
        x_min_poly=poly,
        order=order,
        order_p_ambiguous=torsion_p_ambiguous(fa),
    )


INFTY_RATIONAL = Point(at_infinity=True)


def _matches(point: Point, exact: Point, ring: PadicRing) -> bool:
    return (point.x - ring(exact.x)).is_zero and (point.y - ring(exact.y)).is_zero


def _exact_lift(exact: Point, ring: PadicRing) -> Point:
    return Point(ring(exact.x), ring(exact.y))


def _refine_from_min_poly(point, poly, curve, ring) -> Point:
    """Re-lift the coordinates to full precision from the minimal polynomial."""
    if poly is None:
        return point
    p = ring.p
    try:
        x = hensel_simple_root(ring.poly(poly), point.x.lift() % p)
    except Exception:
        return point
    if not (x - point.x).is_zero:
        return point
    if point.y.is_zero:
        return Point(x, ring.zero())
    try:
        y = hensel_sqrt(curve.padic_poly(ring).evaluate(x), point.y.lift() % p)
    except Exception:
        return point
    return Point(x, y)
