"""Exact integer and rational arithmetic for the lattice constructions.

Python integers are already arbitrary precision, and ``fractions.Fraction``
stores every value reduced with a positive denominator, so those are the
number types used throughout.  What this module adds is the handful of
number-theoretic operations the basis construction relies on: gcd/lcm
helpers, an extended Euclidean algorithm with a pinned coefficient
convention, and the wavelength scaling diagnostics.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError

# Exact rational type used across the package. Always reduced, denominator > 0.
Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def gcd(a: int, b: int) -> int:
    """Nonnegative greatest common divisor; gcd(0, 0) == 0."""
    return math.gcd(a, b)


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b).

    Among the one-parameter family of Bezout pairs the one with
    |s| <= |b| / (2g) is returned (positive s preferred on the boundary).
    Keeping the coefficients small keeps the entries of the unimodular
    matrices built from them small, which helps float conditioning later.
    """
    if b == 0:
        if a == 0:
            return 0, 0, 0
        return abs(a), (1 if a > 0 else -1), 0
    r0, r1 = abs(a), abs(b)
    s0, s1 = 1, 0
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    g = r0
    s = s0 if a >= 0 else -s0
    # Reduce s into (-m/2, m/2], m the period of the Bezout family.
    m = abs(b) // g
    s %= m
    if 2 * s > m:
        s -= m
    t = (g - s * a) // b
    return g, s, t


def _validated_positive(ws: Iterable[Rational]) -> list[Fraction]:
    ws = [Fraction(w) for w in ws]
    if not ws:
        raise InputError("wavelength list is empty")
    for i, w in enumerate(ws):
        if w <= 0:
            raise InputError(f"wavelength #{i + 1} is not positive: {w}")
    return ws


def lcm_rationals(ws: Sequence[Rational]) -> Fraction:
    """Least common multiple of positive rationals.

    The smallest positive rational P such that P/w is an integer for every
    w; for reduced fractions n_i/d_i this is lcm(n_i) / gcd(d_i).
    """
    ws = _validated_positive(ws)
    num = math.lcm(*(w.numerator for w in ws))
    den = math.gcd(*(w.denominator for w in ws))
    return Fraction(num, den)


def minimal_integer_scale(ws: Sequence[Rational]) -> Fraction:
    """Smallest positive rational c such that c*w is an integer for all w."""
    ws = _validated_positive(ws)
    num = math.lcm(*(w.denominator for w in ws))
    den = math.gcd(*(w.numerator for w in ws))
    return Fraction(num, den)


def scaled_integers(ws: Sequence[Rational]) -> list[int]:
    """The integer set c*ws produced by the minimal common scale c."""
    ws = _validated_positive(ws)
    c = minimal_integer_scale(ws)
    out = []
    for w in ws:
        m = c * w
        assert m.denominator == 1
        out.append(m.numerator)
    return out


def scale_to_coprime_check(ws: Sequence[Rational]) -> bool:
    """Whether the minimal integer scaling of ws is pairwise relatively prime.

    Duplicate wavelengths are reported as not scalable: two equal entries
    collapse to the same integer and never form a coprime pair of distinct
    moduli.  Used for diagnostics only; the basis construction itself does
    not need this property.
    """
    scaled = scaled_integers(ws)
    n = len(scaled)
    for i in range(n):
        for j in range(i + 1, n):
            if scaled[i] == scaled[j] or math.gcd(scaled[i], scaled[j]) != 1:
                return False
    return True


def parse_rational(text: str) -> Fraction:
    """Parse the text form "p" or "p/q" (base 10) into a Rational."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise InputError(f"not a rational in p or p/q form: {text!r}")
    if "/" in s:
        p, q = s.split("/")
        if int(q) == 0:
            raise InputError(f"zero denominator: {text!r}")
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def format_rational(q: Rational) -> str:
    """Render a Rational as "p" or "p/q"."""
    return str(Fraction(q))
