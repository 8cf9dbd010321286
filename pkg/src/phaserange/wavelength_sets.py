"""Benchmark wavelength sets.

Two families with identical periods: pairwise-coprime integer sets, and
rational sets that cannot be scaled to pairwise relatively prime integers.
The second family only works with the general basis construction, and is
markedly more robust to phase noise above the threshold variance.
"""

from fractions import Fraction

# Period 210
COPRIME_INTEGER_4 = (Fraction(2), Fraction(3), Fraction(5), Fraction(7))
GENERAL_RATIONAL_4 = (
    Fraction(210, 79),
    Fraction(210, 61),
    Fraction(210, 41),
    Fraction(210, 31),
)

# Period 2310
COPRIME_INTEGER_5 = (Fraction(2), Fraction(3), Fraction(5), Fraction(7), Fraction(11))
GENERAL_RATIONAL_5 = (
    Fraction(2310, 877),
    Fraction(2310, 523),
    Fraction(2310, 277),
    Fraction(2310, 221),
    Fraction(2310, 211),
)

ALL_SETS = {
    "coprime_integer_4": COPRIME_INTEGER_4,
    "general_rational_4": GENERAL_RATIONAL_4,
    "coprime_integer_5": COPRIME_INTEGER_5,
    "general_rational_5": GENERAL_RATIONAL_5,
}
