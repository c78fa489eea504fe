"""Frobenius action on the odd cohomology of y^2 = F(x).

Computes the matrix of the p-power Frobenius lift on the 2g-dimensional
basis omega_i = x^i dx/(2y) together with the exact-form corrections f_i
(so that the pullback of omega_i equals its basis expansion plus df_i), by
expanding the lift of 1/y as a p-adically convergent binomial series and
reducing pole orders and degrees against the relations

    d(b y^(1-2s)) = [2 b' F + (1-2s) b F'] y^(-2s) dx/(2y)
    d(x^(j-2g) y) = [2(j-2g) x^(j-2g-1) F + x^(j-2g) F'] dx/(2y).

The hot loops run on plain integers modulo p^Nw with a single running
power-of-p denominator: every division by an odd integer u*p^v multiplies
the remaining state by p^v (exactly) and the divided term by the inverse of
u, so all stored integers stay exact representatives modulo p^Nw and the
final published precision Nw - e is a guaranteed lower bound.

Byproducts: the characteristic polynomial of Frobenius (numerator of the
zeta function), point counts, and the order of the Jacobian over F_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curve import HyperellipticCurve, Point
from .errors import BadReduction, PoleAtPoint, PrecisionExhausted, RoundingAmbiguous
from .padic import PadicPoly, PadicRing, PadicScalar, int_valuation


@dataclass
class FrobeniusAction:
    """Matrix of phi* on the basis omega_i plus exact-form corrections.

    matrix[j][i] is the omega_j-coefficient of the reduction of phi*omega_i;
    corrections[i] maps odd y-exponents w to the x-polynomial q_w with
    f_i = sum_w q_w(x) y^w.
    """

    curve: HyperellipticCurve
    p: int
    precision: int
    matrix: list[list[PadicScalar]]
    corrections: list[dict[int, PadicPoly]]

    @property
    def genus(self) -> int:
        return self.curve.genus


# ---------------------------------------------------------------------------
# Integer polynomial helpers (ascending coefficient lists, arithmetic mod m)
# ---------------------------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: list[int], b: list[int], m: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % m
    return _trim(out)


def _padd(a: list[int], b: list[int], m: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        s = (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
        out[i] = s % m
    return _trim(out)


def _pscale(a: list[int], c: int, m: int) -> list[int]:
    return _trim([x * c % m for x in a])


def _pdivmod_monic(a: list[int], f: list[int], m: int) -> tuple[list[int], list[int]]:
    """Divide by a monic polynomial f; exact over Z/m."""
    df = len(f) - 1
    r = list(a)
    if len(r) - 1 < df:
        return [], _trim(r)
    q = [0] * (len(r) - df)
    for i in range(len(r) - 1, df - 1, -1):
        c = r[i] % m
        if c:
            q[i - df] = c
            for k in range(df + 1):
                r[i - df + k] = (r[i - df + k] - c * f[k]) % m
    return _trim(q), _trim(r[:df])


def _fp_poly_inverse_mod(a: list[int], f: list[int], p: int) -> list[int]:
    """Inverse of a modulo the monic polynomial f over F_p (xgcd)."""

    def deg(h):
        for i in range(len(h) - 1, -1, -1):
            if h[i] % p:
                return i
        return -1

    r0, r1 = [c % p for c in f], [c % p for c in a]
    s0, s1 = [0], [1]
    while True:
        d1 = deg(r1)
        if d1 < 0:
            raise BadReduction("F' is not invertible mod (F, p): bad reduction")
        if d1 == 0:
            inv = pow(r1[0], -1, p)
            return _trim([c * inv % p for c in s1])
        d0 = deg(r0)
        inv = pow(r1[d1], -1, p)
        while d0 >= d1:
            c = r0[d0] * inv % p
            for k in range(d1 + 1):
                r0[d0 - d1 + k] = (r0[d0 - d1 + k] - c * r1[k]) % p
            shift = d0 - d1
            for k in range(len(s1)):
                idx = shift + k
                while idx >= len(s0):
                    s0.append(0)
                s0[idx] = (s0[idx] - c * s1[k]) % p
            d0 = deg(r0)
        r0, r1 = r1, _trim(r0[: d0 + 1]) if d0 >= 0 else []
        s0, s1 = s1, s0


# ---------------------------------------------------------------------------
# The reduction sweep
# ---------------------------------------------------------------------------


class _ReductionState:
    """Mutable state for one reduction: levels, corrections, running scale."""

    def __init__(self, fints, dints, sfints, p, modulus, genus):
        self.f = fints
        self.df = dints
        self.sf = sfints  # (F')^{-1} mod F
        self.p = p
        self.m = modulus
        self.g = genus
        self.e = 0  # running power-of-p denominator of everything stored
        self.levels: dict[int, list[int]] = {}
        self.level0: list[int] = []
        self.corrections: dict[int, list[int]] = {}

    def add(self, level: int, poly: list[int]):
        if level <= 0:
            extra = poly
            for _ in range(-level):
                extra = _pmul(extra, self.f, self.m)
            self.level0 = _padd(self.level0, extra, self.m)
        else:
            cur = self.levels.get(level)
            self.levels[level] = _padd(cur, poly, self.m) if cur else _trim(list(poly))

    def _bump(self, v: int):
        """Divide the global scale by p^v: multiply all stored data by p^v."""
        if v == 0:
            return
        c = self.p**v
        m = self.m
        for lvl, poly in self.levels.items():
            self.levels[lvl] = _pscale(poly, c, m)
        self.level0 = _pscale(self.level0, c, m)
        for w, poly in self.corrections.items():
            self.corrections[w] = _pscale(poly, c, m)
        self.e += v

    def sweep(self):
        """Reduce all pole levels and the level-0 degree to the basis."""
        p, m = self.p, self.m
        two_g = 2 * self.g
        while self.levels:
            s = max(self.levels)
            b_in = self.levels.pop(s)
            if not b_in:
                continue
            d = 1 - 2 * s
            v = int_valuation(d, p)
            b = _pmul(b_in, self.sf, m)
            _, b = _pdivmod_monic(b, self.f, m)
            num = _padd(b_in, _pscale(_pmul(b, self.df, m), -1, m), m)
            a, rem = _pdivmod_monic(num, self.f, m)
            if rem:
                raise PrecisionExhausted("pole reduction lost exactness (internal)")
            db = _trim([i * b[i] % m for i in range(1, len(b))])
            self._bump(v)
            u_inv = pow(d // p**v, -1, m)
            # after the bump, dividing by d means multiplying the pieces
            # built from the pre-bump data by the inverse of its unit part
            carry = _padd(_pscale(a, p**v, m), _pscale(db, -2 * u_inv % m, m), m)
            corr = _pscale(b, u_inv, m)
            if corr:
                cur = self.corrections.get(1 - 2 * s)
                self.corrections[1 - 2 * s] = _padd(cur, corr, m) if cur else corr
            self.add(s - 1, carry)
        # level 0: lower the polynomial degree below 2g via d(x^(j-2g) y)
        while len(self.level0) - 1 >= two_g:
            j = len(self.level0) - 1
            c = self.level0[j]
            if c == 0:
                self.level0.pop()
                continue
            d = 2 * j - two_g + 1
            v = int_valuation(d, p)
            self._bump(v)
            u_inv = pow(d // p**v, -1, m)
            piece = c * u_inv % m
            dj = [0] * (j + 1)
            if j > two_g:
                for k in range(len(self.f)):
                    dj[j - two_g - 1 + k] = (dj[j - two_g - 1 + k] + 2 * (j - two_g) * self.f[k]) % m
            for k in range(1, len(self.f)):
                dj[j - two_g + k - 1] = (dj[j - two_g + k - 1] + k * self.f[k]) % m
            self.level0 = _padd(self.level0, _pscale(dj, -piece % m, m), m)
            if len(self.level0) - 1 >= j and self.level0 and self.level0[-1] != 0:
                raise PrecisionExhausted("degree reduction failed to cancel (internal)")
            cur = self.corrections.get(1)
            mono = [0] * (j - two_g) + [piece]
            self.corrections[1] = _padd(cur, mono, m) if cur else mono

    def published(self, ring: PadicRing, n_target: int):
        """Basis coefficients and corrections as PadicScalars at n_target."""
        achieved = _nw_digits(self.m, self.p) - self.e
        if achieved < n_target:
            raise PrecisionExhausted(f"achieved {achieved} < requested {n_target}")
        col = []
        for j in range(2 * self.g):
            c = self.level0[j] if j < len(self.level0) else 0
            col.append(_scaled_scalar(c, self.e, self.p, self.m, n_target))
        corr = {}
        for w, poly in sorted(self.corrections.items()):
            coeffs = [_scaled_scalar(c, self.e, self.p, self.m, n_target) for c in poly]
            if coeffs:
                corr[w] = PadicPoly(coeffs, self.p)
        return col, corr


def _nw_digits(modulus: int, p: int) -> int:
    n = 0
    while modulus > 1:
        modulus //= p
        n += 1
    return n


def _scaled_scalar(value: int, e: int, p: int, modulus: int, n_target: int) -> PadicScalar:
    nw = _nw_digits(modulus, p)
    return PadicScalar.from_int(value % modulus, p, nw).shift(-e).cap(n_target)


# ---------------------------------------------------------------------------
# Frobenius action
# ---------------------------------------------------------------------------


def _ilog(p: int, n: int) -> int:
    k = 0
    while p**(k + 1) <= n:
        k += 1
    return k


def frobenius_action(curve: HyperellipticCurve, p: int, precision: int) -> FrobeniusAction:
    """Compute the action of the Frobenius lift x -> x^p on cohomology.

    The binomial series for the lift of 1/y is truncated once the dropped
    tail cannot affect the requested precision; the working modulus p^Nw is
    raised automatically when the tracked denominator would eat into the
    requested digits.
    """
    if p < 3 or p % 2 == 0:
        raise BadReduction("p must be an odd prime")
    if not curve.has_good_reduction(p):
        raise BadReduction(f"bad reduction at {p}")
    g = curve.genus
    n_target = precision

    # tail cutoff: term k carries p^(k+1); a single reduction chain divides
    # by at most one odd number per pole level and per degree step, losing
    # at most ilog_p of the largest divisor encountered
    k_max = n_target + 4
    for _ in range(3):
        s_max = p * k_max + (p - 1) // 2
        chain_loss = _ilog(p, 2 * s_max + 1) + _ilog(p, 2 * (7 * p + 50) + 1) + 1
        k_max = n_target + chain_loss + 2
    s_max = p * k_max + (p - 1) // 2

    e_sweep = sum(int_valuation(2 * s - 1, p) for s in range(1, s_max + 1))
    nw = n_target + e_sweep + chain_loss + 4

    for _attempt in range(4):
        try:
            return _frobenius_attempt(curve, p, n_target, k_max, nw)
        except PrecisionExhausted:
            nw += n_target + 8
    raise PrecisionExhausted("frobenius action: working precision kept falling short")


def _frobenius_attempt(curve, p, n_target, k_max, nw) -> FrobeniusAction:
    g = curve.genus
    deg = 2 * g + 1
    m = p**nw
    f = [int(Fraction(c).numerator * pow(Fraction(c).denominator, -1, m) % m) for c in curve.coeffs]
    df = [i * f[i] % m for i in range(1, deg + 1)]
    sf_p = _fp_poly_inverse_mod([c % p for c in df], [c % p for c in f], p)
    sf = _lift_poly_inverse(df, sf_p, f, p, nw)

    # E = (F(x^p) - F(x)^p)/p, exact mod p^nw
    m1 = p ** (nw + 1)
    f1 = [c % m1 for c in f]
    fxp = [0] * (deg * p + 1)
    for j, c in enumerate(f1):
        fxp[j * p] = c
    fp_pow = [1]
    base = f1
    k = p
    while k:
        if k & 1:
            fp_pow = _pmul(fp_pow, base, m1)
        k >>= 1
        if k:
            base = _pmul(base, base, m1)
    diff = _padd(fxp, _pscale(fp_pow, -1, m1), m1)
    e_poly = []
    for c in diff:
        if c % p != 0:
            raise PrecisionExhausted("F(x^p) != F(x)^p mod p (internal)")
        e_poly.append(c // p % m)
    e_poly = _trim(e_poly)

    e_digits = _fadic_digits(e_poly, f, m)

    # accumulate sum_k C_k p^(k+1) W^k with W = E * F^(-p), in the level
    # representation {pole level s: numerator polynomial of degree <= 2g}
    acc: dict[int, list[int]] = {}
    t_rep: dict[int, list[int]] = {0: [1]}
    for k in range(k_max + 1):
        ck = (-1) ** k * math.comb(2 * k, k)
        scalar = ck * pow(pow(4, -1, m), k, m) % m * pow(p, k + 1, m) % m
        for lvl, poly in t_rep.items():
            scaled = _pscale(poly, scalar, m)
            if scaled:
                cur = acc.get(lvl)
                acc[lvl] = _padd(cur, scaled, m) if cur else scaled
        if k == k_max:
            break
        t_rep = _mul_by_w(t_rep, e_digits, f, p, m)

    matrix = [[None] * (2 * g) for _ in range(2 * g)]
    corrections = []
    ring = PadicRing(p, n_target)
    half_shift = (p - 1) // 2
    for i in range(2 * g):
        mono = [0] * (p * i + p - 1) + [1]
        digits = _fadic_digits(mono, f, m)
        state = _ReductionState(f, df, sf, p, m, g)
        for lvl, poly in acc.items():
            for mm, dig in enumerate(digits):
                if not dig:
                    continue
                prod = _pmul(poly, dig, m)
                hi, lo = _pdivmod_monic(prod, f, m)
                target = lvl + half_shift - mm
                if lo:
                    state.add(target, lo)
                if hi:
                    state.add(target - 1, hi)
        state.sweep()
        col, corr = state.published(ring, n_target)
        for j in range(2 * g):
            matrix[j][i] = col[j]
        corrections.append(corr)
    return FrobeniusAction(curve, p, n_target, matrix, corrections)


def _fadic_digits(poly: list[int], f: list[int], m: int) -> list[list[int]]:
    """F-adic digits: poly = sum digits[k] * F^k with deg digits[k] < deg F."""
    digits = []
    cur = _trim(list(poly))
    while cur:
        cur, rem = _pdivmod_monic(cur, f, m)
        digits.append(rem)
    return digits or [[]]


def _mul_by_w(rep: dict[int, list[int]], e_digits, f, p, m) -> dict[int, list[int]]:
    """Multiply a level representation by W = E * F^(-p)."""
    out: dict[int, list[int]] = {}
    for lvl, poly in rep.items():
        for mm, dig in enumerate(e_digits):
            if not dig:
                continue
            prod = _pmul(poly, dig, m)
            hi, lo = _pdivmod_monic(prod, f, m)
            if lo:
                tgt = lvl + p - mm
                cur = out.get(tgt)
                out[tgt] = _padd(cur, lo, m) if cur else lo
            if hi:
                tgt = lvl + p - mm - 1
                cur = out.get(tgt)
                out[tgt] = _padd(cur, hi, m) if cur else hi
    return out


def _lift_poly_inverse(a: list[int], inv_p: list[int], f: list[int], p: int, nw: int) -> list[int]:
    """Newton-lift an inverse of a mod (f, p) to an inverse mod (f, p^nw)."""
    s = [c % p for c in inv_p]
    known = 1
    while known < nw:
        known = min(2 * known, nw)
        mk = p**known
        prod = _pmul(a, s, mk)
        _, prod = _pdivmod_monic(prod, f, mk)
        two_minus = _padd([2], _pscale(prod, -1, mk), mk)
        s = _pmul(s, two_minus, mk)
        _, s = _pdivmod_monic(s, f, mk)
    return s


# ---------------------------------------------------------------------------
# Standalone reduction (exposed for direct tests of the projection property)
# ---------------------------------------------------------------------------


def reduce_odd_differential(
    curve: HyperellipticCurve,
    ring: PadicRing,
    numerator: list,
    pole_level: int,
) -> tuple[list[PadicScalar], dict[int, PadicPoly]]:
    """Reduce numerator(x) * y^(-2*pole_level) dx/(2y) to the basis.

    Returns (basis coefficients, correction dict); applying it to a basis
    differential itself (pole_level 0, degree < 2g) is the identity.
    """
    p = ring.p
    nw = ring.prec + pole_level + 8
    m = p**nw
    deg = curve.degree
    f = [int(Fraction(c).numerator * pow(Fraction(c).denominator, -1, m) % m) for c in curve.coeffs]
    df = [i * f[i] % m for i in range(1, deg + 1)]
    sf_p = _fp_poly_inverse_mod([c % p for c in df], [c % p for c in f], p)
    sf = _lift_poly_inverse(df, sf_p, f, p, nw)
    state = _ReductionState(f, df, sf, p, m, curve.genus)
    num = [int(Fraction(c).numerator * pow(Fraction(c).denominator, -1, m) % m) for c in numerator]
    state.add(pole_level, _trim(num))
    state.sweep()
    return state.published(ring, ring.prec)


# ---------------------------------------------------------------------------
# Zeta byproducts
# ---------------------------------------------------------------------------


def zeta_char_poly(fa: FrobeniusAction) -> list[int]:
    """Integer coefficients (ascending) of P(T) = det(1 - T*M).

    P is the numerator of the zeta function: degree 2g, P(0) = 1, roots of
    absolute value p^(-1/2), and #C(F_p) = p + 1 - a_1 with a_1 = -P'(0).
    """
    g = fa.genus
    n = 2 * g
    p = fa.p
    prec = min(c.prec for row in fa.matrix for c in row)
    ring = PadicRing(p, prec)

    powers = [None, fa.matrix]
    for k in range(2, n + 1):
        powers.append(_mat_mul(powers[-1], fa.matrix))
    s = [None] + [_trace(powers[k]) for k in range(1, n + 1)]
    e = [ring.one()]
    for k in range(1, n + 1):
        acc = ring.zero()
        sign = 1
        for i in range(1, k + 1):
            term = e[k - i] * s[i]
            acc = acc + (term if sign > 0 else -term)
            sign = -sign
        e.append(acc.div_int(k))

    coeffs = [1]
    for k in range(1, n + 1):
        ek = e[k] if k % 2 == 0 else -e[k]
        bound = math.comb(n, k) * p ** (k / 2)
        if Fraction(p) ** ek.prec <= 2 * bound + 2:
            raise RoundingAmbiguous(f"coefficient {k} not pinned at precision {ek.prec}")
        if not ek.is_zero and ek.val < 0:
            raise RoundingAmbiguous(f"coefficient {k} is not p-integral at working precision")
        c = ek.lift_centered()
        if abs(c) > bound + 1e-9:
            raise RoundingAmbiguous(f"coefficient {k} = {c} violates its Weil bound {bound:.1f}")
        coeffs.append(c)
    for k in range(g):
        if coeffs[n - k] != p ** (g - k) * coeffs[k]:
            raise RoundingAmbiguous("functional equation fails on rounded coefficients")
    return coeffs


def _mat_mul(a, b):
    n = len(a)
    return [
        [sum((a[i][k] * b[k][j] for k in range(1, n)), a[i][0] * b[0][j]) for j in range(n)]
        for i in range(n)
    ]


def _trace(a):
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def curve_count_fp(fa: FrobeniusAction) -> int:
    """#C(F_p) = p + 1 - a_1 where a_1 is the trace of Frobenius."""
    coeffs = zeta_char_poly(fa)
    return fa.p + 1 + coeffs[1]


def jacobian_order_fp(fa: FrobeniusAction) -> int:
    """#J(F_p) = P(1)."""
    order = sum(zeta_char_poly(fa))
    if order <= 0:
        raise RoundingAmbiguous("P(1) <= 0: zeta coefficients cannot be Weil numbers")
    return order


# ---------------------------------------------------------------------------
# Correction evaluation
# ---------------------------------------------------------------------------


def evaluate_correction(correction: dict[int, PadicPoly], point: Point) -> PadicScalar:
    """Value of sum_w q_w(x) y^w at a Z_p point; poles need y a unit."""
    if point.at_infinity:
        raise PoleAtPoint("corrections are not defined at infinity")
    x, y = point.x, point.y
    has_pole = any(w < 0 for w in correction)
    if has_pole and (y.is_zero or y.val > 0):
        raise PoleAtPoint("negative y-powers evaluated at a point with v(y) > 0")
    if not correction:
        return PadicScalar.zero(x.p, x.prec)
    acc = None
    for w, poly in correction.items():
        term = poly.evaluate(x) * y**w
        acc = term if acc is None else acc + term
    return acc
