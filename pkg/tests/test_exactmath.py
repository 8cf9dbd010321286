import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phaserange import (
    InputError,
    extended_gcd,
    format_rational,
    gcd,
    lcm_rationals,
    minimal_integer_scale,
    parse_rational,
    scale_to_coprime_check,
    scaled_integers,
)
from phaserange.wavelength_sets import (
    COPRIME_INTEGER_4,
    GENERAL_RATIONAL_4,
    GENERAL_RATIONAL_5,
)


class TestGcd:
    def test_scaled_wavelength_pair(self):
        assert gcd(77531, 100409) == 1271

    def test_zero_identity(self):
        assert gcd(0, 7) == 7
        assert gcd(7, 0) == 7
        assert gcd(0, 0) == 0

    def test_coprime_pair(self):
        assert gcd(105, 2) == 1

    def test_negative_arguments(self):
        assert gcd(-12, 18) == 6
        assert gcd(12, -18) == 6
        assert gcd(-12, -18) == 6


class TestExtendedGcd:
    def test_pinned_examples(self):
        assert extended_gcd(105, 2) == (1, 1, -52)
        assert extended_gcd(41, 31) == (1, -3, 4)
        assert extended_gcd(6, 0) == (6, 1, 0)

    def test_zero_cases(self):
        assert extended_gcd(0, 0) == (0, 0, 0)
        assert extended_gcd(0, 5) == (5, 0, 1)
        assert extended_gcd(-6, 0) == (6, -1, 0)

    @given(
        st.integers(min_value=-(2**256), max_value=2**256),
        st.integers(min_value=-(2**256), max_value=2**256),
    )
    @settings(max_examples=300)
    def test_bezout_identity_256bit(self, a, b):
        g, s, t = extended_gcd(a, b)
        assert g == math.gcd(a, b)
        assert s * a + t * b == g

    @given(
        st.integers(min_value=-(2**64), max_value=2**64),
        st.integers(min_value=-(2**64), max_value=2**64).filter(lambda b: b != 0),
    )
    @settings(max_examples=300)
    def test_minimal_magnitude_coefficient(self, a, b):
        g, s, _ = extended_gcd(a, b)
        assert 2 * abs(s) * g <= abs(b)


class TestLcmRationals:
    def test_coprime_integers(self):
        assert lcm_rationals(COPRIME_INTEGER_4) == 210

    def test_general_rationals_same_period(self):
        assert lcm_rationals(GENERAL_RATIONAL_4) == 210

    def test_singleton(self):
        assert lcm_rationals([Fraction(5)]) == 5

    def test_five_wavelength_periods(self):
        assert lcm_rationals([2, 3, 5, 7, 11]) == 2310
        assert lcm_rationals(GENERAL_RATIONAL_5) == 2310

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            lcm_rationals([])

    def test_nonpositive_rejected(self):
        with pytest.raises(InputError):
            lcm_rationals([Fraction(2), Fraction(0)])
        with pytest.raises(InputError):
            lcm_rationals([Fraction(2), Fraction(-1, 3)])

    @given(
        st.lists(
            st.fractions(min_value=Fraction(1, 30), max_value=50, max_denominator=30),
            min_size=1,
            max_size=6,
        )
    )
    @settings(max_examples=200)
    def test_all_ratios_integral(self, ws):
        p = lcm_rationals(ws)
        for w in ws:
            q = p / w
            assert q.denominator == 1
            assert q >= 1

    @given(
        st.lists(
            st.fractions(min_value=Fraction(1, 12), max_value=12, max_denominator=12),
            min_size=1,
            max_size=4,
        )
    )
    @settings(max_examples=100)
    def test_minimality_against_prime_factors(self, ws):
        p = lcm_rationals(ws)
        n = p.numerator
        # dividing P by any prime factor of its numerator must break
        # integrality of P/w for at least one w
        d = 2
        while d * d <= n:
            if n % d == 0:
                smaller = p / d
                assert any((smaller / w).denominator != 1 for w in ws)
                while n % d == 0:
                    n //= d
            d += 1
        if n > 1:
            smaller = p / n
            assert any((smaller / w).denominator != 1 for w in ws)


class TestCoprimeScaling:
    def test_integer_coprime_set(self):
        assert scale_to_coprime_check(COPRIME_INTEGER_4) is True

    def test_general_set_not_scalable(self):
        assert scale_to_coprime_check(GENERAL_RATIONAL_4) is False

    def test_duplicates_never_scalable(self):
        assert scale_to_coprime_check([Fraction(1), Fraction(1)]) is False

    def test_five_wavelength_sets(self):
        assert scale_to_coprime_check([2, 3, 5, 7, 11]) is True
        assert scale_to_coprime_check(GENERAL_RATIONAL_5) is False

    def test_minimal_scale_of_general_set(self):
        c = minimal_integer_scale(GENERAL_RATIONAL_4)
        assert c == Fraction(6124949, 210)
        assert scaled_integers(GENERAL_RATIONAL_4) == [77531, 100409, 149389, 197579]

    def test_scaled_integers_already_integral(self):
        assert scaled_integers([Fraction(2), Fraction(3)]) == [2, 3]


class TestTextForm:
    def test_parse_integer(self):
        assert parse_rational("210") == 210

    def test_parse_fraction(self):
        assert parse_rational("210/79") == Fraction(210, 79)
        assert parse_rational("  -3/4 ") == Fraction(-3, 4)

    def test_reject_garbage(self):
        for bad in ["1.5", "a", "", "3/", "/4", "1e3", "2/0"]:
            with pytest.raises(InputError):
                parse_rational(bad)

    def test_roundtrip(self):
        for text in ["210", "210/79", "-3/4", "0"]:
            assert format_rational(parse_rational(text)) == text.strip()

    @given(
        st.fractions(max_denominator=10**6),
    )
    @settings(max_examples=200)
    def test_format_parse_identity(self, q):
        assert parse_rational(format_rational(q)) == q


class TestRationalArithmetic:
    @given(
        st.fractions(max_denominator=10**9),
        st.fractions(max_denominator=10**9),
    )
    @settings(max_examples=300)
    def test_closed_and_reduced(self, a, b):
        results = [a + b, a - b, a * b]
        if b != 0:
            results.append(a / b)
        for r in results:
            assert r.denominator > 0
            assert math.gcd(abs(r.numerator), r.denominator) == 1
