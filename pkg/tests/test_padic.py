"""Core arithmetic: exact norms, precision tracking, balls, encodings."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pottsbethe.padic import (
    INF,
    Ball,
    NormCmp,
    Padic,
    PrecisionError,
    ball_contains,
    balls_disjoint,
    cmp_norm,
    from_rational,
    in_ep,
    norm_exp,
)


def vp_int(n: int, p: int) -> int:
    """Independent valuation oracle by trial division."""
    assert n != 0
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def base_digits(n: int, p: int, count: int):
    out = []
    for _ in range(count):
        n, d = divmod(n, p)
        out.append(d)
    return tuple(out)


class TestFromRational:
    def test_identity(self):
        x = from_rational(1, 1, prime=3, digits=10)
        assert x.val == 0 and x.unit == 1

    def test_coprime_parts(self):
        # oracle: neither 4 nor 121 is divisible by 3
        assert vp_int(4, 3) == 0 and vp_int(121, 3) == 0
        x = from_rational(4, 121, prime=3, digits=10)
        assert x.val == 0

    def test_norm_of_p(self):
        x = from_rational(3, 1, prime=3, digits=10)
        assert x.val == 1 and norm_exp(x) == 1

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            from_rational(1, 0, prime=3)

    def test_unit_is_modular_inverse(self):
        x = from_rational(4, 121, prime=3, digits=10)
        assert (x.unit * 121 - 4) % 3**10 == 0

    def test_negative_is_exact(self):
        x = from_rational(-1, 1, prime=3)
        assert x.is_exact and x.unit == -1


class TestArithmetic:
    def test_one_plus_minus_one_is_exact_zero(self):
        one = from_rational(1, 1, prime=3)
        assert (one + from_rational(-1, 1, prime=3)).is_exact_zero

    def test_strong_triangle_equality_case(self):
        x = from_rational(3, 1, prime=3)
        y = from_rational(9, 1, prime=3)
        assert norm_exp(x + y) == 1

    def test_square_of_four_digits(self):
        # oracle: plain integer multiplication, then base-3 digits
        assert base_digits(4 * 4, 3, 3) == (1, 2, 1)
        a = from_rational(4, 1, prime=3, digits=10)
        assert (a * a).digits(3) == (1, 2, 1)

    def test_cancellation_shrinks_precision(self):
        a = from_rational(1, 7, prime=5, digits=20)
        b = a + from_rational(5**6, 1, prime=5)
        d = b - a
        assert d.val == 6 and d.prec == 14  # 20 - 6 digits survive

    def test_full_cancellation_inexact_zero(self):
        a = from_rational(1, 7, prime=5, digits=12)
        d = a - a
        assert d.is_inexact_zero and d.val == 12
        with pytest.raises(PrecisionError):
            d.norm_exp()

    def test_division_by_exact_zero(self):
        one = from_rational(1, 1, prime=5)
        with pytest.raises(ZeroDivisionError):
            one / Padic.zero(5)

    def test_division_by_inexact_zero(self):
        a = from_rational(1, 7, prime=5, digits=12)
        with pytest.raises(PrecisionError):
            from_rational(1, 1, prime=5) / (a - a)

    def test_pow_int(self):
        x = from_rational(7, 1, prime=5, digits=30)
        assert (x.pow_int(3) - 343).is_zero_like
        assert (x.pow_int(-2) * x.pow_int(2) - 1).is_zero_like
        assert x.pow_int(0).unit == 1

    def test_mixed_int_operands(self):
        x = from_rational(1, 7, prime=5, digits=30)
        assert ((2 * x + 1) - (x + x + 1)).is_zero_like


class TestNormExp:
    def test_examples(self):
        assert norm_exp(from_rational(9, 1, prime=3)) == 2
        assert norm_exp(from_rational(1, 3, prime=3)) == -1
        assert norm_exp(from_rational(10, 1, prime=3)) == 0

    def test_exact_zero(self):
        assert norm_exp(Padic.zero(3)) == INF


class TestEp:
    def test_one(self):
        assert in_ep(from_rational(1, 1, prime=5))

    def test_one_plus_p_and_two(self):
        assert in_ep(from_rational(6, 1, prime=5))
        assert not in_ep(from_rational(2, 1, prime=5))

    def test_derived_member(self):
        p = 5
        x = from_rational(1 + 2 * p + p**3, 1, prime=p)
        assert norm_exp(x - 1) == 1
        assert in_ep(x)

    def test_undecidable(self):
        x = 1 + Padic.inexact_zero(5, 0)
        with pytest.raises(PrecisionError):
            in_ep(x)

    def test_p2_out_of_scope(self):
        x = Padic.one(5).with_cap(8)
        blocked = Padic(2, 0, 1, INF, 8)
        with pytest.raises(ValueError):
            in_ep(blocked)
        assert in_ep(x)


class TestCmpNorm:
    def test_p_vs_one(self):
        assert cmp_norm(from_rational(5, 1, prime=5),
                        from_rational(1, 1, prime=5)) is NormCmp.LT

    def test_ep_difference_vs_unit(self):
        # x in E_p, x != 1, k a unit: |x - 1| < |k|
        x = from_rational(1 + 5, 1, prime=5)
        k = from_rational(2, 1, prime=5)
        assert cmp_norm(x - 1, k) is NormCmp.LT

    def test_valuation_addition(self):
        # |q(theta-1)| < |theta-1| whenever |q| < 1
        q = from_rational(5, 1, prime=5)
        t1 = from_rational(125, 1, prime=5)
        assert cmp_norm(q * t1, t1) is NormCmp.LT

    def test_undecidable(self):
        a = from_rational(1, 7, prime=5, digits=12)
        with pytest.raises(PrecisionError):
            cmp_norm(a - a, Padic.zero(5))


class TestBalls:
    def test_center_membership(self):
        c = from_rational(7, 1, prime=5)
        assert ball_contains(Ball(c, 3), c)

    def test_equal_radius_distance_equal_radius_disjoint(self):
        # open balls: center distance exactly the radius separates them
        b1 = Ball(from_rational(1, 1, prime=5), 2)
        b2 = Ball(from_rational(1 + 25, 1, prime=5), 2)
        assert norm_exp(b1.center - b2.center) == 2
        assert balls_disjoint(b1, b2)

    def test_nested_same_center(self):
        c = from_rational(4, 1, prime=5)
        small = Ball(c, 6)
        big = Ball(c, 2)
        assert not balls_disjoint(small, big)
        assert ball_contains(big, small.center)

    def test_membership_undecidable(self):
        c = from_rational(1, 1, prime=5)
        x = 1 + Padic.inexact_zero(5, 2)
        with pytest.raises(PrecisionError):
            ball_contains(Ball(c, 4), x)


nonzero_rationals = st.fractions(
    min_value=-10**6, max_value=10**6, max_denominator=10**4
).filter(lambda f: f != 0)
rationals = st.fractions(min_value=-10**6, max_value=10**6,
                         max_denominator=10**4)
primes = st.sampled_from([3, 5, 7])


class TestInvariants:
    @given(primes, rationals, rationals)
    def test_strong_triangle(self, p, a, b):
        x = from_rational(a, 1, prime=p)
        y = from_rational(b, 1, prime=p)
        s = x + y
        lo = min(x.val_lower_bound, y.val_lower_bound)
        assert s.val_lower_bound >= lo
        if x.val_lower_bound != y.val_lower_bound:
            assert s.norm_exp() == lo

    @given(primes, nonzero_rationals, nonzero_rationals)
    def test_multiplicativity(self, p, a, b):
        x = from_rational(a, 1, prime=p)
        y = from_rational(b, 1, prime=p)
        assert norm_exp(x * y) == norm_exp(x) + norm_exp(y)

    @given(primes, nonzero_rationals, nonzero_rationals)
    def test_division_round_trip(self, p, a, b):
        lhs = from_rational(a, 1, prime=p) / from_rational(b, 1, prime=p)
        rhs = from_rational(a.numerator * b.denominator,
                            a.denominator * b.numerator, prime=p)
        assert (lhs - rhs).is_zero_like

    @given(primes, st.integers(0, 10**12), st.integers(0, 10**12),
           st.integers(1, 50))
    @settings(max_examples=60)
    def test_power_difference_small_o(self, p, na, nb, k):
        # alpha^k - beta^k = k(alpha - beta) + o[k(alpha - beta)] on E_p
        alpha = from_rational(1 + p * na, 1, prime=p)
        beta = from_rational(1 + p * nb, 1, prime=p)
        if na == nb:
            return
        lead = k * (alpha - beta)
        assert cmp_norm(alpha**k - beta**k - lead, lead) is NormCmp.LT

    @given(primes, st.integers(0, 10**12), st.integers(0, 10**12))
    def test_ep_sum_is_unit(self, p, na, nb):
        a = from_rational(1 + p * na, 1, prime=p)
        b = from_rational(1 + p * nb, 1, prime=p)
        assert norm_exp(a + b) == 0


class TestEncodings:
    @pytest.mark.parametrize("num,den", [
        (1, 1), (-1, 1), (4, 121), (-383, 2), (0, 1), (75, 4), (7, 25),
    ])
    def test_round_trip_both_forms(self, num, den):
        x = from_rational(num, den, prime=5, digits=16)
        for text in (x.to_string(), x.to_compact()):
            y = Padic.parse(text, 5)
            assert (y.val, y.unit, y.prec) == (x.val, x.unit, x.prec)

    def test_inexact_zero_round_trip(self):
        z = Padic.inexact_zero(7, 9)
        assert Padic.parse(z.to_string(), 7).val == 9
        assert Padic.parse(z.to_compact(), 7).is_inexact_zero

    def test_string_form_shape(self):
        x = from_rational(7, 1, prime=5)
        assert x.to_string() == "5^0 * (2 + 1*5)"
        y = from_rational(1, 2, prime=5, digits=3)
        assert y.to_string() == "5^0 * (3 + 2*5 + 2*5^2) + O(5^3)"

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            Padic.parse("5^0 * (7)", 5)  # digit out of range
        with pytest.raises(ValueError):
            Padic.parse("not a padic", 5)

    def test_parse_rejects_bad_units(self):
        with pytest.raises(ValueError):
            Padic.parse("0:10:3", 5)  # divisible by p
        with pytest.raises(ValueError):
            Padic.parse("0:999:3", 5)  # exceeds p**3


def test_mixed_primes_rejected():
    with pytest.raises(ValueError):
        from_rational(1, 1, prime=3) + from_rational(1, 1, prime=5)
