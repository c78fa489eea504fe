"""Per-disc search for the common zeros of the three integral functionals.

For a rank-0 Jacobian the holomorphic Coleman integrals from infinity vanish
on every rational point, so the rational points are among the common zeros
of three power series per residue disc.  Discs are processed up to the
hyperelliptic involution: each disc gets a local expansion of the three
functionals (a formal antiderivative plus a constant offset), a simple-root
certificate through a truncated discriminant, Z_p root extraction after the
rescaling t = p*s, and a vanishing check of the other two series at every
root.  If no series in some disc has certified simple roots, the whole run
restarts at the next prime of good reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .classify import ClassifiedPoint, classify_point
from .cohomology import FrobeniusAction, curve_count_fp, frobenius_action
from .coleman import integral_functional
from .curve import (
    INFINITY,
    HyperellipticCurve,
    LocalChart,
    Point,
    fp_disc_representatives,
    good_reduction_prime,
    involution,
    lift_point,
    local_chart,
)
from .errors import AllSeriesDegenerate, NonTorsionExtra, PrecisionExhausted
from .padic import (
    PadicPoly,
    PadicPowerSeries,
    PadicRing,
    PadicScalar,
    formal_integrate,
    padic_poly_roots,
    truncated_discriminant,
)


def precisions(p: int) -> tuple[int, int]:
    """Working precisions for the prime p: p-adic 2p+4 and t-adic 2p+1."""
    if p < 7:
        raise ValueError("the driver requires a prime p >= 7")
    return 2 * p + 4, 2 * p + 1


@dataclass
class DiscSeries:
    """The three holomorphic integral series on one residue disc."""

    disc: Point
    base: Point
    chart: LocalChart
    series: list[PadicPowerSeries]
    offsets: list[PadicScalar]
    seeded: bool

    def series_value(self, t: PadicScalar, i: int) -> PadicScalar:
        p = self.chart.ring.p
        tail = -_ilog(p, self.series[i].order + 1)
        return self.series[i].evaluate(t, tail)


@dataclass
class DiscLog:
    """Per-disc outcome for reporting: found points or 'no common roots'."""

    disc: Point
    mirrored: bool
    points: list[Point]
    chosen_series: int | None


@dataclass
class ChabautyOutput:
    """Classified common-zero set: rational points and torsion extras."""

    rational: list[ClassifiedPoint]
    two_torsion_extras: list[ClassifiedPoint]
    higher_torsion_extras: list[ClassifiedPoint]
    prime: int
    precision: int
    t_precision: int
    escalations: int
    disc_logs: list[DiscLog]
    fp_count: int

    @property
    def rational_points(self) -> list[Point]:
        return [c.rational for c in self.rational]


def _ilog(p: int, n: int) -> int:
    k = 0
    while p ** (k + 1) <= n:
        k += 1
    return k


def _reduce_rational(point: Point, p: int) -> Point:
    if point.at_infinity:
        return INFINITY
    x = Fraction(point.x)
    y = Fraction(point.y)
    if x.denominator % p == 0:
        return INFINITY
    xb = x.numerator * pow(x.denominator, -1, p) % p
    yb = y.numerator * pow(y.denominator, -1, p) % p
    return Point(xb, yb)


def disc_series(
    curve: HyperellipticCurve,
    fa: FrobeniusAction,
    disc: Point,
    known_points: list[Point],
    order: int | None = None,
) -> DiscSeries:
    """Expand the three functionals on the residue disc of an F_p point.

    If a known rational point reduces into the disc, the expansion is
    anchored there and the offsets are exactly zero (rank 0); otherwise the
    disc center is Hensel-lifted and the offsets come from a Coleman
    integral from infinity.
    """
    p = fa.p
    ring = PadicRing(p, fa.precision)
    if order is None:
        order = 2 * p + 1
    g = curve.genus
    seeded_base = None
    for kp in known_points:
        if _reduce_rational(kp, p) == disc:
            seeded_base = kp
            break
    if seeded_base is not None:
        base = (
            INFINITY
            if seeded_base.at_infinity
            else Point(ring(seeded_base.x), ring(seeded_base.y))
        )
        offsets = [ring.zero() for _ in range(g)]
        seeded = True
    else:
        base = lift_point(disc, curve, ring)
        vec = integral_functional(curve, fa, base, order)
        offsets = list(vec.values)
        seeded = False
    chart = local_chart(base, curve, ring, order)
    t_base = chart.param_of(base)
    pulls = chart.omega_pullbacks()[:g]
    series = []
    anchored_offsets = []
    for i in range(g):
        shift, pull = pulls[i]
        anti = formal_integrate(pull.shift_pow(shift) if shift > 0 else pull)
        if shift < 0:
            raise PrecisionExhausted("holomorphic pullback with a pole (internal)")
        # re-anchor so that f_i(0) is the integral from infinity to the center
        tail = -_ilog(p, anti.order + 1)
        const = offsets[i] - anti.evaluate(t_base, tail)
        f_i = anti + PadicPowerSeries.constant(const, anti.order)
        series.append(f_i)
        anchored_offsets.append(const)
    return DiscSeries(disc, base, chart, series, anchored_offsets, seeded)


def common_zeros(
    ds: DiscSeries,
    floor: int | None = None,
) -> tuple[list[Point], int]:
    """Points of the disc where all three series vanish, plus the series used.

    One series must have a squarefree truncation (nonvanishing truncated
    discriminant); its Z_p roots (after t = p*s) are checked against the
    other two at the precision floor.
    """
    ring = ds.chart.ring
    p = ring.p
    order = min(s.order for s in ds.series)
    if floor is None:
        floor = ring.prec - 3
    chosen = None
    for i, f_i in enumerate(ds.series):
        disc_val = truncated_discriminant(f_i.truncate(order), order)
        if not disc_val.is_zero:
            chosen = i
            break
    if chosen is None:
        raise AllSeriesDegenerate(f"all series have multiple roots on disc {ds.disc}")
    # rescale t = p*s so the roots of interest are the Z_p roots
    rescaled = [c.shift(n) for n, c in enumerate(ds.series[chosen].coeffs[: order + 1])]
    roots = padic_poly_roots(PadicPoly(rescaled, p))
    points = []
    for s_root in roots:
        t_root = s_root.shift(1)
        ok = True
        for j in range(len(ds.series)):
            if j == chosen:
                continue
            val = ds.series_value(t_root, j)
            r = val.congruent(PadicScalar.zero(p, floor), required=floor)
            if r is None:
                raise PrecisionExhausted(
                    f"vanishing undecidable at floor {floor} on disc {ds.disc}"
                )
            if r is False:
                ok = False
                break
        if ok:
            points.append(ds.chart.point_at(t_root))
    return points, chosen


def run_chabauty(
    curve: HyperellipticCurve,
    p: int | None = None,
    known_points: list[Point] | None = None,
    precision: int | None = None,
    t_precision: int | None = None,
    prime_cap: int = 100,
    fa_cache: dict | None = None,
) -> ChabautyOutput:
    """Provably compute the common-zero set and classify it.

    Requires a validated monic odd-degree genus-3 model whose Jacobian has
    Mordell-Weil rank 0 (the rank is a trusted input).  Known rational
    points are an optimization only: the output is identical with an empty
    seed list.  When every series in some disc has multiple roots the run
    escalates to the next prime of good reduction, up to prime_cap.
    """
    if curve.genus != 3:
        raise ValueError("the driver is specific to genus 3")
    if p is not None and p < 7:
        raise ValueError("the driver requires a starting prime p >= 7")
    known_points = list(known_points or [])
    for kp in known_points:
        if not curve.contains(kp):
            raise ValueError(f"known point {kp} is not on the curve")
    p_current = good_reduction_prime(curve, p if p is not None else 7)
    escalations = 1 if (p is not None and p_current != p) else 0
    while True:
        if p_current > prime_cap:
            raise PrecisionExhausted(
                f"no prime below the cap {prime_cap} avoided degenerate series"
            )
        try:
            return _run_at_prime(
                curve,
                p_current,
                known_points,
                precision,
                t_precision,
                escalations,
                fa_cache,
            )
        except AllSeriesDegenerate:
            p_current = good_reduction_prime(curve, p_current + 1)
            escalations += 1


def _run_at_prime(
    curve, p, known_points, precision, t_precision, escalations, fa_cache
) -> ChabautyOutput:
    n_default, m_default = precisions(p)
    n = precision if precision is not None else n_default
    order = t_precision if t_precision is not None else m_default
    key = (tuple(curve.coeffs), p, n)
    fa = None if fa_cache is None else fa_cache.get(key)
    if fa is None:
        fa = frobenius_action(curve, p, n)
        if fa_cache is not None:
            fa_cache[key] = fa
    floor = n - 3
    ring = PadicRing(p, n)

    found: list[Point] = []
    disc_logs: list[DiscLog] = []
    for disc, mirrored in fp_disc_representatives(curve, p):
        ds = disc_series(curve, fa, disc, known_points, order)
        zeros, chosen = common_zeros(ds, floor)
        local: list[Point] = []
        for z in zeros:
            _append_unique(local, z, floor)
            _append_unique(local, involution(z), floor)
        disc_logs.append(DiscLog(disc, mirrored, list(local), chosen))
        for z in local:
            _append_unique(found, z, floor)

    rational: list[ClassifiedPoint] = []
    two_torsion: list[ClassifiedPoint] = []
    higher: list[ClassifiedPoint] = []
    for pt in found:
        c = classify_point(pt, curve, fa)
        if c.verdict == "rational":
            rational.append(c)
        elif c.verdict == "two-torsion":
            two_torsion.append(c)
        else:
            higher.append(c)

    got_rational = {_rational_key(c.rational) for c in rational}
    for kp in known_points:
        if _rational_key(kp) not in got_rational:
            raise NonTorsionExtra(
                f"known rational point {kp} missing from the zero set: "
                "the rank-0 assumption or the input curve is wrong"
            )
    rational.sort(key=lambda c: _rational_sort_key(c.rational))
    return ChabautyOutput(
        rational=rational,
        two_torsion_extras=two_torsion,
        higher_torsion_extras=higher,
        prime=p,
        precision=n,
        t_precision=order,
        escalations=escalations,
        disc_logs=disc_logs,
        fp_count=curve_count_fp(fa),
    )


def _rational_key(point: Point):
    if point.at_infinity:
        return "inf"
    return (Fraction(point.x), Fraction(point.y))


def _rational_sort_key(point: Point):
    if point.at_infinity:
        return (0, Fraction(0), Fraction(0))
    return (1, Fraction(point.x), Fraction(point.y))


def _append_unique(seq: list[Point], pt: Point, floor: int):
    for existing in seq:
        if existing.at_infinity or pt.at_infinity:
            if existing.at_infinity and pt.at_infinity:
                return
            continue
        dx = existing.x - pt.x
        dy = existing.y - pt.y
        if (dx.is_zero or dx.val >= floor) and (dy.is_zero or dy.val >= floor):
            return
    seq.append(pt)
