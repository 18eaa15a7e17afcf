"""Exact piecewise-linear d_min(eta) and l_min(eta) curves.

The curve is assembled from the characteristic symbols: members of the lower
triangle ``{w_A > 0, 0 < w_A + w_B <= q-1}`` ordered by the ratio at which
they land on the static reference point ``w_S = q-1``. Between consecutive
overlap events the two symbols flanking the reference swap roles as the
l_min- and d_min-determining neighbour, meeting at a trough halfway.
"""

from __future__ import annotations

import bisect
import csv
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .constellation import as_ratio, is_exact
from .gf import ConfigurationError, check_modulus
from .ncmap import NcPair


@dataclass(frozen=True)
class CharSymbol:
    index: int
    w_a: int
    w_b: int
    eta: Fraction  # ratio at which this symbol overlaps (0, q-1)


@dataclass(frozen=True)
class TurningPoint:
    parity: str  # "even" (peak) or "odd" (trough)
    index: int
    eta: Fraction
    d_min: Fraction
    symbols: tuple  # determining characteristic symbols
    classes: tuple  # optimal NC classes at the point; two at a trough

    @property
    def m(self) -> int:
        return self.eta.numerator

    @property
    def n(self) -> int:
        return self.eta.denominator


@dataclass(frozen=True)
class Line:
    """``slope * eta + intercept``."""

    slope: int
    intercept: int

    def __call__(self, eta):
        return self.slope * eta + self.intercept


@dataclass(frozen=True)
class CurveSegment:
    segment_id: int
    lo: Fraction
    hi: Optional[Fraction]  # None for the unbounded tail
    d_line: Line
    l_line: Line
    d_symbol: Optional[tuple]
    l_symbol: Optional[tuple]
    nc_class: NcPair

    def contains(self, eta) -> bool:
        return eta >= self.lo and (self.hi is None or eta < self.hi)


def symbol_class(q: int, w_a: int, w_b: int) -> NcPair:
    """Canonical pair clustering (0, q-1) with (w_a, w_b), w_a != 0."""
    return NcPair((q - 1 - w_b) * pow(w_a, -1, q) % q, 1)


@lru_cache(maxsize=None)
def characteristic_symbols(q: int) -> tuple:
    q = check_modulus(q)
    best = {}
    for w_a in range(1, q):
        for w_b in range(0, q - w_a):
            eta = Fraction(q - 1 - w_b, w_a)
            if eta not in best or w_a < best[eta][0]:
                best[eta] = (w_a, w_b)
    return tuple(
        CharSymbol(i, *best[eta], eta) for i, eta in enumerate(sorted(best), start=1))


def _trough(q: int, s: CharSymbol, t: CharSymbol) -> Fraction:
    return Fraction(2 * (q - 1) - (s.w_b + t.w_b), s.w_a + t.w_a)


@lru_cache(maxsize=None)
def turning_points(q: int) -> tuple:
    """Even and odd turning points in increasing eta."""
    chars = characteristic_symbols(q)
    out = []
    for s, t in zip(chars[:-1], chars[1:]):
        out.append(TurningPoint("even", s.index, s.eta, Fraction(1, s.w_a),
                                ((s.w_a, s.w_b),), (symbol_class(q, s.w_a, s.w_b),)))
        out.append(TurningPoint(
            "odd", s.index, _trough(q, s, t), Fraction(1, s.w_a + t.w_a),
            ((s.w_a, s.w_b), (t.w_a, t.w_b)),
            # left neighbour is the later symbol t, right neighbour is s
            (symbol_class(q, t.w_a, t.w_b), symbol_class(q, s.w_a, s.w_b))))
    return tuple(out)


def _rise(q, s):
    # distance of a symbol that has passed the reference: eta*w_a + w_b - (q-1)
    return Line(s.w_a, s.w_b - (q - 1))


def _fall(q, s):
    # distance of a symbol still below the reference: (q-1) - eta*w_a - w_b
    return Line(-s.w_a, (q - 1) - s.w_b)


@lru_cache(maxsize=None)
def dmin_curve(q: int) -> tuple:
    """Segments covering [1, inf), each with affine d_min and l_min."""
    chars = characteristic_symbols(q)
    segs = []
    for s, t in zip(chars[:-1], chars[1:]):
        trough = _trough(q, s, t)
        segs.append(CurveSegment(len(segs), s.eta, trough, _fall(q, t), _rise(q, s),
                                 (t.w_a, t.w_b), (s.w_a, s.w_b), symbol_class(q, s.w_a, s.w_b)))
        segs.append(CurveSegment(len(segs), trough, t.eta, _rise(q, s), _fall(q, t),
                                 (s.w_a, s.w_b), (t.w_a, t.w_b), symbol_class(q, t.w_a, t.w_b)))
    tail = NcPair(q - 1, 1)
    segs.append(CurveSegment(len(segs), Fraction(q - 1), Fraction(q), Line(0, 1),
                             Line(1, -(q - 1)), None, (1, 0), tail))
    segs.append(CurveSegment(len(segs), Fraction(q), None, Line(0, 1), Line(0, 1),
                             None, None, tail))
    return tuple(segs)


@dataclass(frozen=True)
class CurvePoint:
    d_min: object
    l_min: object
    nc_class: NcPair
    segment: CurveSegment
    classes: tuple  # every optimal class recorded for this eta (two at a trough)


def eval_curve(q: int, eta) -> CurvePoint:
    q = check_modulus(q)
    eta = as_ratio(eta)
    if eta < 1:
        raise ConfigurationError(f"eta={eta} < 1; normalize gains first")
    segs = dmin_curve(q)
    starts = [float(s.lo) for s in segs] if not is_exact(eta) else [s.lo for s in segs]
    seg = segs[bisect.bisect_right(starts, eta) - 1]
    classes = (seg.nc_class,)
    if is_exact(eta) and seg.segment_id % 2 == 1 and eta == seg.lo and seg.hi != Fraction(q):
        # a trough: the reference may be clustered to either side
        classes = (seg.nc_class, segs[seg.segment_id - 1].nc_class)
    return CurvePoint(seg.d_line(eta), seg.l_line(eta), seg.nc_class, seg, classes)


@dataclass(frozen=True)
class SensitivityReport:
    q: int
    eta_first_odd: Fraction
    d_first_odd: Fraction
    eta_second_odd: Optional[Fraction]
    d_second_odd: Optional[Fraction]

    @property
    def offset_first(self) -> Fraction:
        return self.eta_first_odd - 1

    @property
    def offset_second(self) -> Optional[Fraction]:
        return None if self.eta_second_odd is None else self.eta_second_odd - 1


def sensitivity_report(q: int) -> SensitivityReport:
    """Closed-form location and depth of the first two troughs near eta = 1.

    q = 3 has a single trough, so its second-trough fields are None.
    """
    q = check_modulus(q)
    if q == 3:
        return SensitivityReport(q, Fraction(q, q - 1), Fraction(1, q - 1), None, None)
    return SensitivityReport(q, Fraction(q, q - 1), Fraction(1, q - 1),
                             Fraction(2 * q - 3, 2 * q - 5), Fraction(1, 2 * q - 5))


CURVE_HEADER = ["eta_num", "eta_den", "eta_float", "dmin_num", "dmin_den",
                "lmin_num", "lmin_den", "segment_id", "alpha", "beta"]
TURNING_HEADER = ["index", "parity", "m", "n", "dmin_num", "dmin_den", "char_wA", "char_wB"]


def curve_rows(q: int, eta_max=None) -> list:
    """Curve knots (every segment start) up to ``eta_max``, plus the endpoint."""
    eta_max = Fraction(q + 1) if eta_max is None else Fraction(as_ratio(eta_max))
    if eta_max < 1:
        raise ConfigurationError("eta_max must be >= 1")
    knots = [s.lo for s in dmin_curve(q) if s.lo <= eta_max]
    if knots[-1] != eta_max:
        knots.append(eta_max)
    rows = []
    for eta in knots:
        p = eval_curve(q, eta)
        rows.append([eta.numerator, eta.denominator, f"{float(eta):.12g}",
                     p.d_min.numerator, p.d_min.denominator,
                     p.l_min.numerator, p.l_min.denominator,
                     p.segment.segment_id, p.nc_class.alpha, p.nc_class.beta])
    return rows


def turning_rows(q: int) -> list:
    rows = []
    for tp in turning_points(q):
        w_a, w_b = tp.symbols[0]
        rows.append([tp.index, tp.parity, tp.m, tp.n, tp.d_min.numerator,
                     tp.d_min.denominator, w_a, w_b])
    return rows


def write_csv(path_or_file, header, rows):
    if hasattr(path_or_file, "write"):
        w = csv.writer(path_or_file, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    with open(path_or_file, "w", newline="") as fh:
        write_csv(fh, header, rows)
