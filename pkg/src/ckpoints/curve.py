"""Odd-degree hyperelliptic curve models and their local analytic data.

A curve is y^2 = F(x) with F monic, squarefree, of odd degree 2g+1 over Q.
The module covers model validation, rescaling non-monic models to monic
ones, reduction mod p, point enumeration and Hensel lifting, local charts
(power-series coordinates on residue discs), naive rational point search,
and heights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadReduction,
    EvenDegree,
    NotMonic,
    ParseError,
    PrecisionExhausted,
    SingularModel,
)
from .padic import (
    PadicPoly,
    PadicPowerSeries,
    PadicRing,
    PadicScalar,
    hensel_simple_root,
    hensel_sqrt,
)


@dataclass(frozen=True)
class Point:
    """A curve point: affine (x, y) or the point at infinity.

    Coordinates live in whatever ring the context dictates: Fraction for
    rational points, int for F_p points, PadicScalar for Z_p points.
    """

    x: object = None
    y: object = None
    at_infinity: bool = False

    def __repr__(self):
        if self.at_infinity:
            return "inf"
        return f"({self.x}, {self.y})"


INFINITY = Point(at_infinity=True)


def involution(point: Point, p: int | None = None) -> Point:
    """The hyperelliptic involution (x, y) -> (x, -y); fixes infinity."""
    if point.at_infinity:
        return INFINITY
    y = point.y
    if isinstance(y, int):
        if p is None:
            ny = -y
        else:
            ny = (-y) % p
    else:
        ny = -y
    return Point(point.x, ny)


class HyperellipticCurve:
    """Monic squarefree odd-degree model y^2 = F(x) over Q."""

    def __init__(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) % 2 != 0:
            raise EvenDegree(f"degree {len(coeffs) - 1} model; need odd degree 2g+1")
        if coeffs[-1] != 1:
            raise NotMonic(f"leading coefficient {coeffs[-1]} != 1")
        self.coeffs = tuple(coeffs)
        self.genus = (len(coeffs) - 2) // 2
        self.disc = _poly_discriminant(list(coeffs))
        if self.disc == 0:
            raise SingularModel("F(x) is not squarefree")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def f_eval(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def fp_coeffs(self, p: int) -> list[int]:
        """Coefficients of F reduced mod p; requires p-integral coefficients."""
        out = []
        for c in self.coeffs:
            if c.denominator % p == 0:
                raise BadReduction(f"coefficient denominator divisible by {p}")
            out.append(c.numerator * pow(c.denominator, -1, p) % p)
        return out

    def fp_eval(self, x: int, p: int) -> int:
        acc = 0
        for c in reversed(self.fp_coeffs(p)):
            acc = (acc * x + c) % p
        return acc

    def padic_poly(self, ring: PadicRing) -> PadicPoly:
        return ring.poly(self.coeffs)

    def has_good_reduction(self, p: int) -> bool:
        if p < 3:
            return False
        for c in self.coeffs:
            if c.denominator % p == 0:
                return False
        fbar = self.fp_coeffs(p)
        dbar = [i * fbar[i] % p for i in range(1, len(fbar))]
        return _fp_gcd_is_one(fbar, dbar, p)

    def contains(self, point: Point) -> bool:
        """Exact check for rational points; precision check for p-adic ones."""
        if point.at_infinity:
            return True
        x, y = point.x, point.y
        if isinstance(x, PadicScalar):
            ring = PadicRing(x.p, max(x.prec, 1))
            val = self.padic_poly(ring).evaluate(x) - y * y
            return val.is_zero
        return self.f_eval(Fraction(x)) == Fraction(y) ** 2

    def __repr__(self):
        return f"HyperellipticCurve(genus={self.genus}, coeffs={list(self.coeffs)})"


def validate(coeffs) -> HyperellipticCurve:
    """Check monic, odd degree, squarefree; returns the validated curve."""
    return HyperellipticCurve(coeffs)


@dataclass(frozen=True)
class PointMap:
    """Invertible coordinate change between an input model and its monic model.

    forward: (x, y) -> (a*x, a^g*y) from the input model to the monic model.
    """

    lead: Fraction
    genus: int

    def forward(self, point: Point) -> Point:
        if point.at_infinity:
            return INFINITY
        a = self.lead
        return Point(Fraction(point.x) * a, Fraction(point.y) * a**self.genus)

    def backward(self, point: Point) -> Point:
        if point.at_infinity:
            return INFINITY
        a = self.lead
        return Point(Fraction(point.x) / a, Fraction(point.y) / a**self.genus)


def scale_to_monic(coeffs) -> tuple[HyperellipticCurve, PointMap]:
    """Rescale y^2 = a*x^(2g+1) + ... to a monic model via (x,y) -> (a x, a^g y).

    Rational points on the two models correspond bijectively under the map.
    """
    coeffs = [Fraction(c) for c in coeffs]
    if len(coeffs) % 2 != 0:
        raise EvenDegree(f"degree {len(coeffs) - 1} model; need odd degree 2g+1")
    a = coeffs[-1]
    if a == 0:
        raise EvenDegree("leading coefficient vanishes")
    g = (len(coeffs) - 2) // 2
    # multiplying the equation by a^(2g) makes v^2 = u^(2g+1) + ... monic
    new = [coeffs[j] * a ** (2 * g - j) for j in range(len(coeffs) - 1)] + [Fraction(1)]
    return HyperellipticCurve(new), PointMap(lead=a, genus=g)


def good_reduction_prime(curve: HyperellipticCurve, p_min: int = 7) -> int:
    """Smallest prime p >= p_min at which the model has good reduction."""
    p = max(p_min, 3)
    while True:
        if _is_prime(p) and curve.has_good_reduction(p):
            return p
        p += 1


def enumerate_fp_points(curve: HyperellipticCurve, p: int) -> list[Point]:
    """All F_p-points of the reduction, infinity included."""
    if not curve.has_good_reduction(p):
        raise BadReduction(f"bad reduction at {p}")
    fbar = curve.fp_coeffs(p)
    sqrt_table: dict[int, int] = {}
    for y in range(p):
        sqrt_table.setdefault(y * y % p, y)
    points = [INFINITY]
    for x in range(p):
        acc = 0
        for c in reversed(fbar):
            acc = (acc * x + c) % p
        if acc == 0:
            points.append(Point(x, 0))
        elif acc in sqrt_table:
            y = sqrt_table[acc]
            points.append(Point(x, min(y, p - y)))
            points.append(Point(x, max(y, p - y)))
    return points


def fp_disc_representatives(curve: HyperellipticCurve, p: int) -> list[tuple[Point, bool]]:
    """F_p points up to involution: (representative, has-distinct-mirror).

    The representative of a mirrored pair is the one with the smaller y.
    """
    out = []
    for pt in enumerate_fp_points(curve, p):
        if pt.at_infinity:
            out.append((pt, False))
        elif pt.y == 0:
            out.append((pt, False))
        elif pt.y <= p - pt.y:
            out.append((pt, True))
    return out


def lift_point(pbar: Point, curve: HyperellipticCurve, ring: PadicRing) -> Point:
    """Deterministic Z_p lift of an F_p point.

    Weierstrass residues lift to the exact Weierstrass point (Hensel root of
    F paired with y = 0); otherwise the least nonnegative lift of x-bar is
    used and y comes from Hensel's lemma applied to y^2 = F(x0).
    """
    if pbar.at_infinity:
        return INFINITY
    f = curve.padic_poly(ring)
    if pbar.y % ring.p == 0:
        x = hensel_simple_root(f, pbar.x)
        return Point(x, ring.zero())
    x = ring(pbar.x)
    return Point(x, hensel_sqrt(f.evaluate(x), pbar.y))


def reduce_point(point: Point, p: int) -> Point:
    """Reduction of a Z_p point to F_p; negative x-valuation lands at infinity."""
    if point.at_infinity:
        return INFINITY
    x, y = point.x, point.y
    if not x.is_zero and x.val < 0:
        return INFINITY
    return Point(x.lift() % p, y.lift() % p)


# ---------------------------------------------------------------------------
# Local charts
# ---------------------------------------------------------------------------


@dataclass
class LocalChart:
    """Power-series local coordinate t on one residue disc.

    kind is one of "non-weierstrass", "weierstrass", "infinity".  The stored
    series satisfy y(t)^2 = F(x(t)) to the truncation order; at infinity the
    coordinates are Laurent: x(t) = t^-2 and y(t) = t^-(2g+1) * y_series(t).
    """

    kind: str
    center: Point
    curve: HyperellipticCurve
    ring: PadicRing
    order: int
    x_series: PadicPowerSeries
    y_series: PadicPowerSeries

    def param_of(self, point: Point) -> PadicScalar:
        """Chart parameter of a point in this disc (center maps to 0)."""
        ring = self.ring
        if self.kind == "infinity":
            if point.at_infinity:
                return ring.zero()
            w = ring.one() / point.x  # t^2 = 1/x
            if w.is_zero or w.val % 2 != 0:
                raise PrecisionExhausted("point is not in the infinity disc")
            half_val = w.val // 2
            unit = PadicScalar(ring.p, 0, w.unit, w.prec - w.val)
            seed = None
            for s in range(1, ring.p):
                if (s * s - unit.unit) % ring.p == 0:
                    seed = s
                    break
            if seed is None:
                raise PrecisionExhausted("1/x is not a square: point not in disc")
            t = hensel_sqrt(unit, seed).shift(half_val)
            # two square roots: pick the branch matching the y-coordinate
            y_t = self.y_series.evaluate(t) * t ** (-(2 * self.curve.genus + 1))
            if (y_t - point.y).is_zero:
                return t
            t = -t
            y_t = self.y_series.evaluate(t) * t ** (-(2 * self.curve.genus + 1))
            if not (y_t - point.y).is_zero:
                raise PrecisionExhausted("neither branch matches the y-coordinate")
            return t
        if point.at_infinity:
            raise PrecisionExhausted("infinity is not in a finite disc")
        if self.kind == "weierstrass":
            return point.y
        return point.x - self.center.x

    def point_at(self, t: PadicScalar) -> Point:
        ring = self.ring
        if self.kind == "infinity":
            if t.is_zero:
                return INFINITY
            x = ring.one() / (t * t)
            y = self.y_series.evaluate(t) * t ** (-(2 * self.curve.genus + 1))
            return Point(x, y)
        if self.kind == "weierstrass":
            return Point(self.x_series.evaluate(t), t)
        # x(t) = x(P) + t is exact; only the y-series is truncated
        return Point(self.center.x + t, self.y_series.evaluate(t))

    def omega_pullbacks(self) -> list[tuple[int, PadicPowerSeries]]:
        """Pullbacks of the basis x^i dx/(2y), i = 0..2g-1, as (shift, series).

        The pullback of omega_i is t^shift * series(t) dt; the shift is only
        nonzero (and then even and possibly negative) on the infinity disc.
        """
        g = self.curve.genus
        ring = self.ring
        out = []
        if self.kind == "infinity":
            inv = self.y_series.inverse()
            minus_inv = -inv
            for i in range(2 * g):
                out.append((2 * (g - 1 - i), minus_inv))
            return out
        if self.kind == "weierstrass":
            dx = self.x_series.derivative()
            if not dx.coeffs[0].is_zero:
                raise PrecisionExhausted("weierstrass chart with odd x-series")
            half = ring(Fraction(1, 2))
            base = PadicPowerSeries(dx.coeffs[1:], dx.order - 1, ring.p).scale(half)
            xs = self.x_series.truncate(base.order)
            acc = PadicPowerSeries.constant(ring.one(), base.order)
            for i in range(2 * g):
                out.append((0, acc * base))
                acc = acc * xs
            return out
        inv2y = (self.y_series + self.y_series).inverse()
        xs = self.x_series
        acc = PadicPowerSeries.constant(ring.one(), xs.order)
        for i in range(2 * g):
            out.append((0, acc * inv2y))
            acc = acc * xs
        return out


def local_chart(point: Point, curve: HyperellipticCurve, ring: PadicRing, order: int) -> LocalChart:
    """Chart on the residue disc of a Z_p point, to t-adic order `order`.

    Non-Weierstrass discs are charted at the point itself (x = x(P) + t);
    Weierstrass discs at their exact Weierstrass center (y = t); the infinity
    disc via x = t^-2, y = t^-(2g+1) * unit-series.
    """
    p = ring.p
    g = curve.genus
    f = curve.padic_poly(ring)
    if point.at_infinity or (not point.x.is_zero and point.x.val < 0):
        # V(t) = t^(2(2g+1)) * F(1/t^2) = 1 + c_{2g} t^2 + ... + c_0 t^(2(2g+1))
        coeffs = [ring.zero() for _ in range(order + 1)]
        coeffs[0] = ring.one()
        for j in range(2 * g + 1):
            e = 2 * (2 * g + 1 - j)
            if e <= order:
                coeffs[e] = ring(curve.coeffs[j])
        v = PadicPowerSeries(coeffs, order, p)
        u = v.sqrt(ring.one())
        x_series = PadicPowerSeries.constant(ring.one(), order)
        return LocalChart("infinity", INFINITY, curve, ring, order, x_series, u)
    if point.y.is_zero or point.y.val >= 1:
        # center at the exact Weierstrass point of the disc
        xbar = point.x.lift() % p
        x0 = hensel_simple_root(f, xbar)
        center = Point(x0, ring.zero())
        x_series = _solve_weierstrass_x(f, x0, ring, order)
        y_series = PadicPowerSeries(
            [ring.zero(), ring.one()] + [ring.zero()] * (order - 1), order, p
        )
        return LocalChart("weierstrass", center, curve, ring, order, x_series, y_series)
    xs = PadicPowerSeries(
        [point.x, ring.one()] + [ring.zero()] * (order - 1), order, p
    )
    fx = xs.compose_poly(f)
    y_series = fx.sqrt(point.y)
    return LocalChart("non-weierstrass", point, curve, ring, order, xs, y_series)


def _solve_weierstrass_x(f: PadicPoly, x0: PadicScalar, ring: PadicRing, order: int) -> PadicPowerSeries:
    """Series x(t) with F(x(t)) = t^2 and x(0) = x0 (F'(x0) a unit)."""
    p = ring.p
    t2 = PadicPowerSeries(
        [ring.zero(), ring.zero(), ring.one()] + [ring.zero()] * (order - 2), order, p
    )
    x = PadicPowerSeries.constant(x0, order)
    w = PadicPowerSeries.constant(ring.one() / f.derivative().evaluate(x0), order)
    two = PadicPowerSeries.constant(ring(2), order)
    known = 1
    while known <= order:
        x = x - (x.compose_poly(f) - t2) * w
        w = w * (two - x.compose_poly(f.derivative()) * w)
        known *= 2
    # final correctness check at full order
    resid = x.compose_poly(f) - t2
    for c in resid.coeffs:
        if not c.is_zero:
            raise PrecisionExhausted("weierstrass chart did not converge")
    return x


# ---------------------------------------------------------------------------
# Rational point search and heights
# ---------------------------------------------------------------------------


def search_rational_points(curve: HyperellipticCurve, height_bound: int) -> list[Point]:
    """All rational points (n/d, y) with max(|n|, |d|) <= height_bound, plus infinity.

    Plain two-loop scan with residue prefilters and an exact integer square
    test; deterministic output order (infinity first, then by (x, y)).
    """
    points = [INFINITY]
    if height_bound < 1:
        return points
    lcm = 1
    for c in curve.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ic = [int(c * lcm * lcm) for c in curve.coeffs]
    deg = curve.degree

    def g_of(n: int, d: int) -> int:
        acc = 0
        dp = 1
        npows = [1]
        for _ in range(deg):
            npows.append(npows[-1] * n)
        for j in range(deg, -1, -1):
            acc += ic[j] * npows[j] * dp
            dp *= d
        return acc

    mods = (64, 63)
    tables = []
    for m in mods:
        tab = bytearray(m * m)
        squares = {x * x % m for x in range(m)}
        for a in range(m):
            for b in range(m):
                acc = 0
                dp = 1
                ap = [1]
                for _ in range(deg):
                    ap.append(ap[-1] * a % m)
                for j in range(deg, -1, -1):
                    acc = (acc + ic[j] * ap[j] * dp) % m
                    dp = dp * b % m
                tab[a * m + b] = 1 if (acc * b % m) in squares else 0
        tables.append(tab)

    found = []
    for d in range(1, height_bound + 1):
        d4 = d**4
        for n in range(-height_bound, height_bound + 1):
            if math.gcd(n, d) != 1:
                continue
            ok = True
            for m, tab in zip(mods, tables):
                if not tab[(n % m) * m + d % m]:
                    ok = False
                    break
            if not ok:
                continue
            q = g_of(n, d) * d
            if q < 0:
                continue
            s = math.isqrt(q)
            if s * s != q:
                continue
            x = Fraction(n, d)
            y = Fraction(s, lcm * d4)
            if curve.f_eval(x) != y * y:
                continue
            if y == 0:
                found.append(Point(x, Fraction(0)))
            else:
                found.append(Point(x, y))
                found.append(Point(x, -y))
    found.sort(key=lambda pt: (pt.x, pt.y))
    return points + found


def global_height(point: Point) -> float:
    """Naive height max(log|n|, log|d|) of the x-coordinate n/d; 0 at infinity."""
    if point.at_infinity:
        return 0.0
    x = Fraction(point.x)
    n, d = abs(x.numerator), x.denominator
    if n == 0:
        return math.log(d)
    return max(math.log(n), math.log(d))


# ---------------------------------------------------------------------------
# Curve text format
# ---------------------------------------------------------------------------


def parse_curve_line(line: str) -> list[Fraction]:
    """Parse one `[c0,c1,...,c7]` line of ascending rational coefficients."""
    s = line.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError(f"expected a bracketed coefficient list, got: {line!r}")
    body = s[1:-1].strip()
    if not body:
        raise ParseError("empty coefficient list")
    out = []
    for piece in body.split(","):
        piece = piece.strip()
        try:
            out.append(Fraction(piece))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad coefficient {piece!r}: {exc}") from exc
    return out


# ---------------------------------------------------------------------------
# Small exact-arithmetic helpers
# ---------------------------------------------------------------------------


def _poly_discriminant(coeffs: list[Fraction]) -> Fraction:
    n = len(coeffs) - 1
    deriv = [coeffs[i] * i for i in range(1, n + 1)]
    res = _resultant(coeffs, deriv)
    disc = res / coeffs[-1]
    if (n * (n - 1) // 2) % 2 == 1:
        disc = -disc
    return disc


def _resultant(f: list[Fraction], g: list[Fraction]) -> Fraction:
    """Resultant over Q via the Euclidean remainder sequence."""
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]

    def deg(h):
        for i in range(len(h) - 1, -1, -1):
            if h[i] != 0:
                return i
        return -1

    def rem(a, b):
        a = list(a)
        db, lb = deg(b), b[deg(b)]
        while deg(a) >= db:
            da = deg(a)
            q = a[da] / lb
            for i in range(db + 1):
                a[da - db + i] -= q * b[i]
            a[da] = Fraction(0)
        return a

    res = Fraction(1)
    while True:
        df, dg = deg(f), deg(g)
        if dg < 0:
            return Fraction(0) if df > 0 else res
        if dg == 0:
            return res * g[0] ** df
        r = rem(f, g)
        dr = deg(r)
        res *= Fraction(-1) ** (df * dg) * g[dg] ** (df - (dr if dr >= 0 else 0))
        if dr < 0:
            return Fraction(0)
        f, g = g, r[: dr + 1]


def _fp_gcd_is_one(a: list[int], b: list[int], p: int) -> bool:
    def deg(h):
        for i in range(len(h) - 1, -1, -1):
            if h[i] % p != 0:
                return i
        return -1

    a = [c % p for c in a]
    b = [c % p for c in b]
    while True:
        da, db = deg(a), deg(b)
        if db < 0:
            return da == 0
        if db == 0:
            return True
        inv = pow(b[db], -1, p)
        while da >= db:
            q = a[da] * inv % p
            for i in range(db + 1):
                a[da - db + i] = (a[da - db + i] - q * b[i]) % p
            da = deg(a)
        a, b = b, a[: da + 1] if da >= 0 else [0]


_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    i = 41
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True
