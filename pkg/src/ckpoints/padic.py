"""Capped-precision p-adic arithmetic.

Scalars are elements of Q_p known modulo p^N: a unit part, a valuation
(possibly negative) and an absolute precision N.  Arithmetic never reports
more precision than the inputs justify: addition takes the minimum of the
absolute precisions, multiplication the valuation-adjusted minimum.  A value
indistinguishable from 0 at its precision is flagged zero-to-precision and
comparisons against it are three-valued; undecidable comparisons raise
PrecisionExhausted at decision points instead of silently passing.

On top of the scalars the module provides dense polynomials, truncated power
series, Hensel lifting (square roots and simple polynomial roots), a
guaranteed Z_p root finder, formal integration, and small-matrix linear
algebra with minimum-valuation pivoting.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    NotASquare,
    NotSimpleRoot,
    PrecisionExhausted,
    SingularSystem,
    ZeroSeed,
)


def int_valuation(n: int, p: int) -> int:
    """Largest e with p^e | n; raises on n = 0 (valuation is unbounded)."""
    if n == 0:
        raise ValueError("valuation of 0 is unbounded")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicScalar:
    """An element of Q_p known modulo p^prec.

    Stored as unit * p^val with the unit coprime to p, reduced modulo
    p^(prec - val).  unit == 0 encodes zero-to-precision, i.e. O(p^prec).
    """

    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val: int, unit: int, prec: int):
        self.p = p
        if unit == 0:
            self.val = prec
            self.unit = 0
        else:
            self.val = val
            self.unit = unit
        self.prec = prec

    # -- constructors -------------------------------------------------

    @classmethod
    def from_int(cls, n: int, p: int, prec: int) -> "PadicScalar":
        if n == 0:
            return cls(p, prec, 0, prec)
        v = int_valuation(n, p)
        if v >= prec:
            return cls(p, prec, 0, prec)
        unit = (n // p**v) % p ** (prec - v)
        return cls(p, v, unit, prec)

    @classmethod
    def from_fraction(cls, q: Fraction, p: int, prec: int) -> "PadicScalar":
        q = Fraction(q)
        if q == 0:
            return cls(p, prec, 0, prec)
        num, den = q.numerator, q.denominator
        vn = int_valuation(num, p)
        vd = int_valuation(den, p)
        v = vn - vd
        if v >= prec:
            return cls(p, prec, 0, prec)
        rel = prec - v
        m = p**rel
        unit = (num // p**vn) * pow(den // p**vd, -1, m) % m
        return cls(p, v, unit, prec)

    @classmethod
    def zero(cls, p: int, prec: int) -> "PadicScalar":
        return cls(p, prec, 0, prec)

    @classmethod
    def one(cls, p: int, prec: int) -> "PadicScalar":
        return cls(p, 0, 1, prec)

    # -- predicates ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True when the value is indistinguishable from 0 at its precision."""
        return self.unit == 0

    @property
    def valuation(self) -> int:
        """Exact valuation for nonzero values; a lower bound (= prec) for zero."""
        return self.val

    def congruent(self, other, required: int | None = None):
        """Three-valued equality: True / False / None (undecidable).

        True when the difference vanishes to precision at least `required`
        (or to the full shared precision when `required` is None); False when
        the difference is certainly nonzero below that level; None when the
        shared precision is too low to decide.
        """
        d = self - other
        level = d.prec if required is None else required
        if not d.is_zero and d.val < level:
            return False
        if d.prec >= level:
            return True
        return None

    def must_congruent(self, other, required: int | None = None) -> bool:
        """Like congruent() but undecidable comparisons raise."""
        r = self.congruent(other, required)
        if r is None:
            raise PrecisionExhausted(
                f"comparison undecidable at precision {self.prec}/{getattr(other, 'prec', '?')}"
            )
        return r

    # -- representatives ----------------------------------------------

    def lift(self) -> int:
        """Least nonnegative integer representative (valuation must be >= 0)."""
        if self.unit == 0:
            return 0
        if self.val < 0:
            raise ValueError("negative valuation has no integer lift")
        return self.unit * self.p**self.val % self.p**self.prec

    def lift_centered(self) -> int:
        m = self.p**self.prec
        r = self.lift()
        return r - m if r > m // 2 else r

    def digits(self, count: int | None = None) -> list[int]:
        """Base-p digits of the lift, least significant first."""
        n = self.lift()
        count = self.prec if count is None else count
        out = []
        for _ in range(count):
            n, r = divmod(n, self.p)
            out.append(r)
        return out

    # -- precision management -----------------------------------------

    def cap(self, prec: int) -> "PadicScalar":
        """Restrict to absolute precision prec (never increases precision)."""
        if prec >= self.prec:
            return self
        if self.unit == 0 or self.val >= prec:
            return PadicScalar(self.p, prec, 0, prec)
        return PadicScalar(self.p, self.val, self.unit % self.p ** (prec - self.val), prec)

    def shift(self, k: int) -> "PadicScalar":
        """Multiply by p^k exactly (precision shifts along)."""
        if self.unit == 0:
            return PadicScalar(self.p, self.prec + k, 0, self.prec + k)
        return PadicScalar(self.p, self.val + k, self.unit, self.prec + k)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: "PadicScalar") -> "PadicScalar":
        p = self.p
        prec = min(self.prec, other.prec)
        if self.unit == 0:
            return other.cap(prec)
        if other.unit == 0:
            return self.cap(prec)
        v = min(self.val, other.val)
        rel = prec - v
        if rel <= 0:
            return PadicScalar(p, prec, 0, prec)
        m = p**rel
        s = (self.unit * p ** (self.val - v) + other.unit * p ** (other.val - v)) % m
        if s == 0:
            return PadicScalar(p, prec, 0, prec)
        w = int_valuation(s, p)
        if v + w >= prec:
            return PadicScalar(p, prec, 0, prec)
        return PadicScalar(p, v + w, (s // p**w) % p ** (prec - v - w), prec)

    def __neg__(self) -> "PadicScalar":
        if self.unit == 0:
            return self
        m = self.p ** (self.prec - self.val)
        return PadicScalar(self.p, self.val, (-self.unit) % m, self.prec)

    def __sub__(self, other: "PadicScalar") -> "PadicScalar":
        return self + (-other)

    def __mul__(self, other: "PadicScalar") -> "PadicScalar":
        p = self.p
        if self.unit == 0 or other.unit == 0:
            prec = min(self.prec + other.val, other.prec + self.val)
            return PadicScalar(p, prec, 0, prec)
        val = self.val + other.val
        rel = min(self.prec - self.val, other.prec - other.val)
        return PadicScalar(p, val, self.unit * other.unit % p**rel, val + rel)

    def __truediv__(self, other: "PadicScalar") -> "PadicScalar":
        p = self.p
        if other.unit == 0:
            raise PrecisionExhausted("division by a value that is zero to precision")
        if self.unit == 0:
            prec = min(self.prec - other.val, other.prec - 2 * other.val + self.val)
            return PadicScalar(p, prec, 0, prec)
        val = self.val - other.val
        rel = min(self.prec - self.val, other.prec - other.val)
        m = p**rel
        return PadicScalar(p, val, self.unit * pow(other.unit, -1, m) % m, val + rel)

    def mul_int(self, n: int) -> "PadicScalar":
        """Multiply by an exact integer (no precision cost beyond valuation)."""
        if n == 0:
            return PadicScalar(self.p, self.prec + 64, 0, self.prec + 64)
        v = int_valuation(n, self.p)
        u = n // self.p**v
        if self.unit == 0:
            return PadicScalar(self.p, self.prec + v, 0, self.prec + v)
        rel = self.prec - self.val
        return PadicScalar(self.p, self.val + v, self.unit * u % self.p**rel, self.prec + v)

    def div_int(self, n: int) -> "PadicScalar":
        """Divide by an exact nonzero integer; loses v_p(n) digits of precision."""
        if n == 0:
            raise ZeroDivisionError
        v = int_valuation(n, self.p)
        u = n // self.p**v
        if self.unit == 0:
            return PadicScalar(self.p, self.prec - v, 0, self.prec - v)
        rel = self.prec - self.val
        m = self.p**rel
        return PadicScalar(self.p, self.val - v, self.unit * pow(u, -1, m) % m, self.prec - v)

    def __pow__(self, n: int) -> "PadicScalar":
        if n == 0:
            return PadicScalar.one(self.p, self.prec - self.val)
        if n < 0:
            inv = PadicScalar.one(self.p, self.prec - self.val) / self
            return inv ** (-n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, PadicScalar):
            return NotImplemented
        d = self - other
        return d.is_zero

    def __hash__(self):
        raise TypeError("PadicScalar is not hashable (equality is to precision)")

    def __repr__(self):
        return f"PadicScalar(p={self.p}, {self})"

    def __str__(self):
        if self.unit == 0:
            return f"O({self.p}^{self.prec})"
        if self.val >= 0:
            terms = []
            for i, d in enumerate(self.digits()):
                if d == 0:
                    continue
                if i == 0:
                    terms.append(str(d))
                elif i == 1:
                    terms.append(f"{d}*{self.p}")
                else:
                    terms.append(f"{d}*{self.p}^{i}")
            body = " + ".join(terms) if terms else "0"
            return f"{body} + O({self.p}^{self.prec})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.prec})"


class PadicRing:
    """Convenience factory fixing (p, prec) for scalars, polys and series."""

    def __init__(self, p: int, prec: int):
        if p < 3 or p % 2 == 0:
            raise ValueError("p must be an odd prime >= 3")
        self.p = p
        self.prec = prec

    def __call__(self, value) -> PadicScalar:
        if isinstance(value, PadicScalar):
            return value.cap(self.prec)
        if isinstance(value, Fraction):
            return PadicScalar.from_fraction(value, self.p, self.prec)
        return PadicScalar.from_int(int(value), self.p, self.prec)

    def zero(self) -> PadicScalar:
        return PadicScalar.zero(self.p, self.prec)

    def one(self) -> PadicScalar:
        return PadicScalar.one(self.p, self.prec)

    def poly(self, coeffs) -> "PadicPoly":
        return PadicPoly([self(c) for c in coeffs], self.p)

    def series(self, coeffs, order: int) -> "PadicPowerSeries":
        cs = [self(c) for c in coeffs]
        cs += [self.zero()] * (order + 1 - len(cs))
        return PadicPowerSeries(cs[: order + 1], order, self.p)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class PadicPoly:
    """Dense polynomial over PadicScalar, coefficients in ascending order."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs: list[PadicScalar], p: int, monic: bool = False):
        self.coeffs = list(coeffs)
        self.p = p
        if monic:
            lead = self.coeffs[-1]
            if lead.is_zero or lead.val != 0 or lead.unit % p != 1 % p:
                raise ValueError("polynomial marked monic has non-unit leading coefficient")

    def degree(self) -> int:
        """Largest index with a certainly-nonzero coefficient; -1 if none."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if not self.coeffs[i].is_zero:
                return i
        return -1

    def __getitem__(self, i: int) -> PadicScalar:
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)

    def evaluate(self, x: PadicScalar) -> PadicScalar:
        acc = PadicScalar.zero(self.p, self.coeffs[-1].prec + max(x.val, 0) * len(self.coeffs))
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "PadicPoly":
        if len(self.coeffs) <= 1:
            return PadicPoly([PadicScalar.zero(self.p, self.coeffs[0].prec)], self.p)
        return PadicPoly(
            [self.coeffs[i].mul_int(i) for i in range(1, len(self.coeffs))], self.p
        )

    def __add__(self, other: "PadicPoly") -> "PadicPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else None
            b = other.coeffs[i] if i < len(other.coeffs) else None
            if a is None:
                out.append(b)
            elif b is None:
                out.append(a)
            else:
                out.append(a + b)
        return PadicPoly(out, self.p)

    def __mul__(self, other: "PadicPoly") -> "PadicPoly":
        za = PadicScalar.zero(self.p, self.coeffs[0].prec + other.coeffs[0].prec)
        out = [za] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return PadicPoly(out, self.p)

    def scale(self, c: PadicScalar) -> "PadicPoly":
        return PadicPoly([a * c for a in self.coeffs], self.p)

    def __str__(self):
        return " + ".join(f"({c})*x^{i}" for i, c in enumerate(self.coeffs))


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------


class PadicPowerSeries:
    """Power series truncated at t-adic order M (coefficients a_0 .. a_M).

    Binary operations propagate the minimum truncation order of the operands.
    """

    __slots__ = ("coeffs", "order", "p")

    def __init__(self, coeffs: list[PadicScalar], order: int, p: int):
        if len(coeffs) != order + 1:
            raise ValueError("coefficient list must have length order + 1")
        self.coeffs = list(coeffs)
        self.order = order
        self.p = p

    @classmethod
    def zero(cls, p: int, prec: int, order: int) -> "PadicPowerSeries":
        z = PadicScalar.zero(p, prec)
        return cls([z] * (order + 1), order, p)

    @classmethod
    def constant(cls, c: PadicScalar, order: int) -> "PadicPowerSeries":
        z = PadicScalar.zero(c.p, c.prec)
        return cls([c] + [z] * order, order, c.p)

    def truncate(self, order: int) -> "PadicPowerSeries":
        if order >= self.order:
            return self
        return PadicPowerSeries(self.coeffs[: order + 1], order, self.p)

    def __add__(self, other: "PadicPowerSeries") -> "PadicPowerSeries":
        order = min(self.order, other.order)
        return PadicPowerSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(order + 1)], order, self.p
        )

    def __neg__(self):
        return PadicPowerSeries([-c for c in self.coeffs], self.order, self.p)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "PadicPowerSeries") -> "PadicPowerSeries":
        order = min(self.order, other.order)
        za = PadicScalar.zero(self.p, self.coeffs[0].prec + other.coeffs[0].prec)
        out = [za] * (order + 1)
        for i in range(min(len(self.coeffs), order + 1)):
            a = self.coeffs[i]
            if a.is_zero:
                continue
            for j in range(min(len(other.coeffs), order + 1 - i)):
                b = other.coeffs[j]
                if b.is_zero:
                    continue
                out[i + j] = out[i + j] + a * b
        return PadicPowerSeries(out, order, self.p)

    def scale(self, c: PadicScalar) -> "PadicPowerSeries":
        return PadicPowerSeries([a * c for a in self.coeffs], self.order, self.p)

    def shift_pow(self, k: int) -> "PadicPowerSeries":
        """Multiply by t^k (truncation order unchanged, top terms dropped)."""
        z = PadicScalar.zero(self.p, self.coeffs[0].prec)
        out = [z] * k + self.coeffs[: self.order + 1 - k]
        return PadicPowerSeries(out, self.order, self.p)

    def __pow__(self, n: int) -> "PadicPowerSeries":
        result = None
        base = self
        if n == 0:
            prec = self.coeffs[0].prec
            return PadicPowerSeries.constant(PadicScalar.one(self.p, prec), self.order)
        if n < 0:
            return self.inverse() ** (-n)
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self) -> "PadicPowerSeries":
        if self.order == 0:
            return PadicPowerSeries(
                [PadicScalar.zero(self.p, self.coeffs[0].prec)], 0, self.p
            )
        return PadicPowerSeries(
            [self.coeffs[i].mul_int(i) for i in range(1, self.order + 1)],
            self.order - 1,
            self.p,
        )

    def evaluate(self, t: PadicScalar, tail_valuation: int = 0) -> PadicScalar:
        """Horner evaluation at a disc parameter (v(t) >= 1).

        The result's precision is capped by the unknown tail: terms beyond the
        truncation order contribute O(p^((order+1)*v(t) + tail_valuation)),
        assuming tail coefficients have valuation >= tail_valuation.
        """
        if not t.is_zero and t.val < 1:
            raise ValueError("series evaluation requires a parameter with v(t) >= 1")
        acc = PadicScalar.zero(self.p, self.coeffs[0].prec + max(t.val, 0) * (self.order + 1))
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc.cap((self.order + 1) * t.val + tail_valuation)

    def inverse(self) -> "PadicPowerSeries":
        """Newton inverse; constant term must be a unit."""
        c0 = self.coeffs[0]
        if c0.is_zero or c0.val != 0:
            raise PrecisionExhausted("series inverse requires a unit constant term")
        one = PadicScalar.one(self.p, c0.prec)
        inv0 = one / c0
        z = PadicPowerSeries.constant(inv0, self.order)
        known = 1
        two = PadicScalar.from_int(2, self.p, c0.prec)
        two_s = PadicPowerSeries.constant(two, self.order)
        while known <= self.order:
            z = z * (two_s - self * z)
            known *= 2
        return z

    def sqrt(self, seed: PadicScalar) -> "PadicPowerSeries":
        """Square root with given constant term; seed^2 must equal a_0."""
        if seed.is_zero or seed.val != 0:
            raise PrecisionExhausted("series sqrt requires a unit constant term")
        half = PadicScalar.from_fraction(Fraction(1, 2), self.p, seed.prec)
        y = PadicPowerSeries.constant(seed, self.order)
        known = 1
        while known <= self.order:
            y = (y + self * y.inverse()).scale(half)  # Newton: y <- (y + u/y)/2
            known *= 2
        return y

    def compose_poly(self, poly: PadicPoly) -> "PadicPowerSeries":
        """Evaluate the polynomial at this series (Horner)."""
        acc = PadicPowerSeries.constant(
            PadicScalar.zero(self.p, poly.coeffs[-1].prec), self.order
        )
        for c in reversed(poly.coeffs):
            acc = acc * self + PadicPowerSeries.constant(c, self.order)
        return acc

    def __str__(self):
        return " + ".join(f"({c})*t^{i}" for i, c in enumerate(self.coeffs)) + f" + O(t^{self.order + 1})"


# ---------------------------------------------------------------------------
# Hensel lifting
# ---------------------------------------------------------------------------


def hensel_sqrt(a: PadicScalar, seed: int) -> PadicScalar:
    """Square root of a unit a in Z_p, pinned by its residue mod p.

    Requires v(a) = 0, seed nonzero mod p, and seed^2 = a (mod p); the result
    r satisfies r^2 = a to the full precision of a and r = seed (mod p).
    """
    p, prec = a.p, a.prec
    if a.is_zero or a.val != 0:
        raise ValueError("hensel_sqrt requires a unit argument (valuation 0)")
    seed %= p
    if seed == 0:
        raise ZeroSeed("square-root seed is 0 mod p")
    a_int = a.unit % p**prec
    if (seed * seed - a_int) % p != 0:
        raise NotASquare(f"{seed}^2 != a (mod {p})")
    x = seed
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        m = p**k
        x = (x + a_int % m * pow(x, -1, m)) * pow(2, -1, m) % m
    return PadicScalar(p, 0, x % p**prec, prec)


def hensel_simple_root(f: PadicPoly, seed: int) -> PadicScalar:
    """Lift a simple root of f mod p to a root of f to full precision.

    Requires f(seed) = 0 and f'(seed) != 0 (mod p); Newton iteration then
    converges to the unique root of f congruent to seed mod p.
    """
    p = f.p
    prec = min(c.prec for c in f.coeffs)
    for c in f.coeffs:
        if not c.is_zero and c.val < 0:
            raise ValueError("hensel_simple_root requires p-integral coefficients")
    cs = [c.cap(prec).lift() for c in f.coeffs]
    ds = [i * cs[i] for i in range(1, len(cs))]

    def ev(poly, x, m):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % m
        return acc

    seed %= p
    if ev(cs, seed, p) != 0:
        raise NotSimpleRoot(f"{seed} is not a root mod {p}")
    if ev(ds, seed, p) == 0:
        raise NotSimpleRoot(f"derivative vanishes at {seed} mod {p}")
    x = seed
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        m = p**k
        x = (x - ev(cs, x, m) * pow(ev(ds, x, m), -1, m)) % m
    return PadicScalar.from_int(x, p, prec)


# ---------------------------------------------------------------------------
# Formal integration
# ---------------------------------------------------------------------------


def formal_integrate(s: PadicPowerSeries) -> PadicPowerSeries:
    """Termwise antiderivative with zero constant term.

    The t^(n+1) coefficient is a_n/(n+1); dividing by n+1 costs exactly
    v_p(n+1) digits of absolute precision on that coefficient.
    """
    if s.order < 1:
        raise ValueError("formal_integrate requires truncation order >= 1")
    out = [PadicScalar.zero(s.p, s.coeffs[0].prec)]
    for n in range(s.order + 1):
        out.append(s.coeffs[n].div_int(n + 1))
    return PadicPowerSeries(out, s.order + 1, s.p)


def formal_derivative(s: PadicPowerSeries) -> PadicPowerSeries:
    return s.derivative()


# ---------------------------------------------------------------------------
# Z_p root finding
# ---------------------------------------------------------------------------


def _int_poly_eval(coeffs: list[int], x: int, m: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % m
    return acc


def _zp_roots_int(coeffs: list[int], p: int, budget: int, depth: int) -> list[tuple[int, int]]:
    """All Z_p roots of the integer polynomial, as (residue, known-mod-p^k)."""
    if budget < 1:
        raise PrecisionExhausted("root search ran out of p-adic precision")
    if depth > 4 * budget + 8:
        raise PrecisionExhausted("root cluster could not be separated")
    fp = [c % p for c in coeffs]
    if all(c == 0 for c in fp):
        raise PrecisionExhausted("polynomial vanishes mod p after content removal")
    dfp = [i * coeffs[i] % p for i in range(1, len(coeffs))]
    deriv = [i * coeffs[i] for i in range(1, len(coeffs))]
    out: list[tuple[int, int]] = []
    for r in range(p):
        if _int_poly_eval(fp, r, p) != 0:
            continue
        if _int_poly_eval(dfp, r, p) != 0:
            # simple root mod p: classical Hensel, unique root in this class
            m = p**budget
            x = r
            k = 1
            while k < budget:
                k = min(2 * k, budget)
                mk = p**k
                fx = _int_poly_eval(coeffs, x, mk)
                dfx = _int_poly_eval(deriv, x, mk)
                x = (x - fx * pow(dfx, -1, mk)) % mk
            out.append((x % m, budget))
        else:
            # cluster: zoom into the residue with x = r + p*u
            shifted = _taylor_shift(coeffs, r)
            g = [shifted[i] * p**i for i in range(len(shifted))]
            nonzero = [c for c in g if c != 0]
            if not nonzero:
                raise PrecisionExhausted("series indistinguishable from 0 in a residue class")
            content = min(int_valuation(c, p) for c in nonzero)
            g = [c // p**content for c in g]
            sub_budget = budget - content
            if sub_budget < 1:
                raise PrecisionExhausted("root cluster below precision floor")
            for u, k in _zp_roots_int(g, p, sub_budget, depth + 1):
                know = min(budget, 1 + k)
                out.append(((r + p * u) % p**know, know))
    return out


def _taylor_shift(coeffs: list[int], r: int) -> list[int]:
    """Coefficients of f(x + r)."""
    out = list(coeffs)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += r * out[j + 1]
    return out


def padic_poly_roots(f: PadicPoly) -> list[PadicScalar]:
    """Every Z_p root of f, certified simple, to the best available precision.

    Expects a polynomial that is nonzero to working precision with simple
    roots (the callers certify this through a truncated discriminant); root
    clusters that cannot be separated raise PrecisionExhausted.
    """
    p = f.p
    deg = f.degree()
    if deg < 0:
        raise PrecisionExhausted("polynomial is zero to working precision")
    if deg == 0:
        return []
    vals = [c.val for c in f.coeffs if not c.is_zero]
    shift = -min(min(vals), 0)
    prec = min(c.prec for c in f.coeffs) + shift
    ints = [c.shift(shift).lift() for c in f.coeffs]
    content = min(int_valuation(c, p) for c in ints if c != 0)
    if content:
        ints = [c // p**content for c in ints]
        prec -= content
    if prec < 1:
        raise PrecisionExhausted("no significant digits left after content removal")
    raw = _zp_roots_int(ints, p, prec, 0)
    deriv = [i * ints[i] for i in range(1, len(ints))]
    roots: list[PadicScalar] = []
    for x, k in raw:
        m = p**prec
        fx = _int_poly_eval(ints, x, m)
        dfx = _int_poly_eval(deriv, x, m)
        if dfx != 0 and fx != 0:
            vd = int_valuation(dfx, p)
            vf = int_valuation(fx, p)
            if vf > 2 * vd:
                # polish to the limit prec - vd allowed by the derivative
                for _ in range(prec):
                    fx = _int_poly_eval(ints, x, m)
                    if fx == 0:
                        break
                    dfx = _int_poly_eval(deriv, x, m)
                    vd = int_valuation(dfx, p)
                    x = (x - (fx // p**vd) * pow(dfx // p**vd, -1, m)) % m
                    if int_valuation(_int_poly_eval(ints, x, m) or m, p) >= prec - vd:
                        break
                k = max(k, prec - vd)
        roots.append(PadicScalar.from_int(x, p, k).cap(k))
    # distinct residues by construction; sort for determinism
    roots.sort(key=lambda r: r.lift())
    return roots


# ---------------------------------------------------------------------------
# Truncated discriminant
# ---------------------------------------------------------------------------


def truncated_discriminant(s: PadicPowerSeries, order: int) -> PadicScalar:
    """Discriminant of the degree-<=order polynomial truncation of s.

    Nonvanishing (to precision) certifies that the truncation has only
    simple roots.
    """
    if s.order < order:
        raise ValueError("series truncation order is below the requested degree")
    coeffs = s.coeffs[: order + 1]
    deg = -1
    for i in range(len(coeffs) - 1, -1, -1):
        if not coeffs[i].is_zero:
            deg = i
            break
    prec = min(c.prec for c in coeffs)
    if deg <= 0:
        return PadicScalar.zero(s.p, prec)
    if deg == 1:
        return PadicScalar.one(s.p, prec)
    f = coeffs[: deg + 1]
    df = [f[i].mul_int(i) for i in range(1, deg + 1)]
    res = _sylvester_resultant(f, df, s.p)
    disc = res / f[deg]
    if (deg * (deg - 1) // 2) % 2 == 1:
        disc = -disc
    return disc


def _sylvester_resultant(f: list[PadicScalar], g: list[PadicScalar], p: int) -> PadicScalar:
    n = len(f) - 1
    m = len(g) - 1
    size = n + m
    prec = min(min(c.prec for c in f), min(c.prec for c in g))
    zero = PadicScalar.zero(p, prec)
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(m):
        rows.append([zero] * i + fr + [zero] * (size - n - 1 - i))
    for i in range(n):
        rows.append([zero] * i + gr + [zero] * (size - m - 1 - i))
    return _determinant(rows, p)


def _determinant(rows: list[list[PadicScalar]], p: int) -> PadicScalar:
    n = len(rows)
    rows = [list(r) for r in rows]
    prec = min(c.prec for r in rows for c in r)
    det = PadicScalar.one(p, prec)
    sign = 1
    for col in range(n):
        pivot_row = None
        best_val = None
        for r in range(col, n):
            c = rows[r][col]
            if c.is_zero:
                continue
            if best_val is None or c.val < best_val:
                best_val = c.val
                pivot_row = r
        if pivot_row is None:
            return PadicScalar.zero(p, prec)
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            sign = -sign
        pivot = rows[col][col]
        det = det * pivot
        for r in range(col + 1, n):
            c = rows[r][col]
            if c.is_zero:
                continue
            factor = c / pivot
            for k in range(col, n):
                rows[r][k] = rows[r][k] - factor * rows[col][k]
    return det if sign == 1 else -det


def solve_linear_system(matrix: list[list[PadicScalar]], rhs: list[PadicScalar], p: int) -> list[PadicScalar]:
    """Solve A x = b by Gaussian elimination with minimum-valuation pivoting."""
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot_row = None
        best_val = None
        for r in range(col, n):
            c = a[r][col]
            if c.is_zero:
                continue
            if best_val is None or c.val < best_val:
                best_val = c.val
                pivot_row = r
        if pivot_row is None:
            raise SingularSystem("pivot column is zero to working precision")
        a[col], a[pivot_row] = a[pivot_row], a[col]
        pivot = a[col][col]
        for r in range(n):
            if r == col:
                continue
            c = a[r][col]
            if c.is_zero:
                continue
            factor = c / pivot
            for k in range(col, n + 1):
                a[r][k] = a[r][k] - factor * a[col][k]
    return [a[i][n] / a[i][i] for i in range(n)]
