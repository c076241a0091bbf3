"""The map, regimes, partition geometry, and inverse branches."""

import random
from fractions import Fraction

import pytest

from pottsbethe import sampling
from pottsbethe.mapping import (
    MapParams,
    PoleHit,
    RegimeTag,
    build_partition,
    classify_fixed,
    classify_regime,
    eval_f,
    eval_g,
    inverse_branch,
    multiplier,
    parse_theta,
)
from pottsbethe.padic import (
    Padic,
    PrecisionError,
    from_rational,
    norm_exp,
)


@pytest.fixture(scope="module")
def regime_a():
    return MapParams.make(3, 3, 3, "1+p^2")


@pytest.fixture(scope="module")
def regime_b1():
    return MapParams.make(5, 3, 5, "1+p^3")


@pytest.fixture(scope="module")
def regime_b2():
    return MapParams.make(5, 2, 5, "1+p^3")


@pytest.fixture(scope="module")
def regime_b4():
    return MapParams.make(5, 4, 5, "1+p^3")


class TestThetaGrammar:
    def test_rational_forms(self):
        assert parse_theta("10", 3) == Fraction(10)
        assert parse_theta("9/4", 3) == Fraction(9, 4)

    def test_power_forms(self):
        assert parse_theta("1+p^3", 5) == Fraction(126)
        assert parse_theta("1+2*p^2", 5) == Fraction(51)
        assert parse_theta("1+-3*p^2", 5) == Fraction(-74)

    def test_rejects(self):
        with pytest.raises(ValueError):
            parse_theta("p^3", 5)
        with pytest.raises(ValueError):
            parse_theta("1+p^", 5)


class TestParamsValidation:
    def test_p_constraints(self):
        with pytest.raises(ValueError):
            MapParams.make(2, 2, 2, "1+p^3")
        with pytest.raises(ValueError):
            MapParams.make(9, 2, 9, "1+p^3")

    def test_q_divisibility(self):
        with pytest.raises(ValueError):
            MapParams.make(5, 2, 7, "1+p^3")

    def test_theta_must_be_in_ep(self):
        with pytest.raises(ValueError):
            MapParams.make(5, 2, 5, 3)

    def test_degenerate_pole_at_one(self):
        # theta = 1 - q makes q + theta - 1 vanish
        with pytest.raises(ValueError):
            MapParams.make(5, 2, 5, -4)

    def test_pole_in_ep_and_not_one(self, regime_b2):
        d = regime_b2.pole - 1
        assert d.valuation == regime_b2.v_qtheta1 >= 1


class TestEval:
    def test_fixed_point_one(self, regime_b2):
        assert (eval_f(regime_b2, 1) - 1).is_exact_zero

    def test_pole_hit(self, regime_b2):
        with pytest.raises(PoleHit):
            eval_f(regime_b2, regime_b2.pole)

    def test_rational_oracle(self):
        # p=3, q=3, k=2, theta=10, x=0: f(0) = ((q-1)/(q+theta-2))^k = 4/121
        params = MapParams.make(3, 2, 3, 10)
        oracle = from_rational(4, 121, prime=3)
        assert (eval_f(params, 0) - oracle).is_zero_like

    def test_g_rational_oracle(self):
        params = MapParams.make(3, 2, 3, 10)
        oracle = from_rational(2, 11, prime=3)
        assert (eval_g(params, 0) - oracle).is_zero_like

    def test_g_minus_one_identity(self, regime_b2):
        x = from_rational(17, 4, prime=5)
        lhs = eval_g(regime_b2, x) - 1
        rhs = ((regime_b2.theta - 1) * (x - 1)
               / (x + regime_b2.theta + (regime_b2.q - 2)))
        assert (lhs - rhs).is_zero_like

    def test_f_is_g_to_the_k(self, regime_b4):
        rng = random.Random(3)
        for _ in range(10):
            x = from_rational(rng.randrange(5**40), 1, prime=5)
            fx = eval_f(regime_b4, x)
            gk = eval_g(regime_b4, x).pow_int(regime_b4.k)
            assert (fx - gk).is_zero_like


class TestMultiplier:
    def test_attractive_at_one_both_regimes(self, regime_a, regime_b1,
                                            regime_b2):
        for params in (regime_a, regime_b1, regime_b2):
            lam = multiplier(params, 1)
            # symbolic simplification at x=1: |lambda| = |k(theta-1)/(q+theta-1)|
            expected = params.v_k + params.v_theta1 - params.v_qtheta1
            assert lam.valuation == expected > 0
            assert classify_fixed(lam) == "attractive"

    def test_not_fixed_rejected(self, regime_b2):
        with pytest.raises(ValueError):
            multiplier(regime_b2, 5)

    def test_theta_one_flagged(self):
        params = MapParams.make(3, 3, 3, 1)  # constant map, still regime A
        lam = multiplier(params, 1)
        assert lam.is_exact_zero
        with pytest.raises(ValueError):
            classify_fixed(lam)


class TestRegime:
    def test_triple_a(self, regime_a):
        r = classify_regime(regime_a)
        assert r.tag is RegimeTag.A
        assert regime_a.v_k == 1 and regime_a.v_qtheta1 == 1

    def test_triple_b1(self, regime_b1):
        r = classify_regime(regime_b1)
        assert r.tag is RegimeTag.B1 and r.kappa == 1

    def test_triple_b2(self, regime_b2):
        r = classify_regime(regime_b2)
        assert r.tag is RegimeTag.B2 and r.kappa == 2

    def test_uncovered_gap(self):
        r = classify_regime(MapParams.make(5, 2, 5, "1+p^1"))
        assert r.tag is RegimeTag.UNCLASSIFIED
        assert "q^2" in r.detail

    def test_theta_one_expanding_side(self):
        with pytest.raises(ValueError):
            classify_regime(MapParams.make(5, 2, 5, 1))


class TestPartition:
    def test_radius_and_taus(self, regime_b2):
        part = build_partition(regime_b2)
        assert part.radius_exp == 4
        assert part.taus == (2, 4)

    def test_center_oracle_k2(self, regime_b2):
        # k = 2 kills the (k-2)q^2/(6k) term:
        # center(xi=1) = 1 - q + (1 - q/2)(theta - 1) = -383/2
        part = build_partition(regime_b2)
        oracle = from_rational(Fraction(1 - 5) + (1 - Fraction(5, 2)) * 125,
                               1, prime=5)
        assert (part.balls[0].center - oracle).is_zero_like

    def test_tau_by_difference_quotients(self, regime_b2):
        part = build_partition(regime_b2)
        rng = random.Random(5)
        for entry in part.balls:
            for _ in range(4):
                off1 = rng.randrange(5**40)
                off2 = rng.randrange(5**40)
                if off1 == off2:
                    continue
                x = entry.center + off1 * 5**(part.radius_exp + 1)
                y = entry.center + off2 * 5**(part.radius_exp + 1)
                jump = (norm_exp(eval_f(regime_b2, x) - eval_f(regime_b2, y))
                        - norm_exp(x - y))
                assert jump == -entry.tau

    def test_pairwise_center_distance_nontrivial_roots(self, regime_b4):
        # |x_i - x_j| = |q(theta-1)| for xi_i, xi_j != 1
        part = build_partition(regime_b4)
        others = [b.center for b in part.balls[1:]]
        for i in range(len(others)):
            for j in range(i + 1, len(others)):
                assert norm_exp(others[i] - others[j]) == part.radius_exp

    def test_first_center_distance(self, regime_b4):
        # |x_1 - x_j| = |k(theta-1)| for xi_j != 1
        part = build_partition(regime_b4)
        expected = regime_b4.v_k + regime_b4.v_theta1
        for b in part.balls[1:]:
            assert norm_exp(part.balls[0].center - b.center) == expected

    def test_pole_outside_cover(self, regime_b2, regime_b4):
        for params in (regime_b2, regime_b4):
            part = build_partition(params)
            for b in part.balls:
                assert not b.ball.contains(params.pole)
            # for nontrivial roots the pole sits at exactly the open radius
            d = part.balls[-1].center - params.pole
            assert d.valuation == part.radius_exp

    def test_regime_a_has_no_partition(self, regime_a):
        with pytest.raises(ValueError):
            build_partition(regime_a)

    def test_json_shape(self, regime_b2):
        d = build_partition(regime_b2).to_json_dict(regime_b2)
        assert set(d) == {"p", "k", "q", "theta", "regime", "kappa",
                          "radius_exp", "balls"}
        assert d["kappa"] == 2 and len(d["balls"]) == 2
        assert set(d["balls"][0]) == {"symbol", "xi", "center", "tau"}


class TestInverseBranch:
    def test_branch_inverse_identity(self, regime_b2):
        part = build_partition(regime_b2)
        rng = random.Random(11)
        for entry in part.balls:
            for _ in range(3):
                x = entry.center + rng.randrange(5**40) * 5**(part.radius_exp + 1)
                y = eval_f(regime_b2, x)
                back = inverse_branch(regime_b2, entry.symbol, y, part)
                assert (back - x).is_zero_like

    def test_images_land_in_their_ball(self, regime_b2):
        part = build_partition(regime_b2)
        samples = []
        for b in part.balls:
            samples.append(b.center)
            for s in sampling.ball_samples(regime_b2, b.symbol, 50, seed=2):
                samples.append(s.realize(regime_b2, part))
        for entry in part.balls:
            for y in samples:
                h = inverse_branch(regime_b2, entry.symbol, y, part)
                assert entry.ball.contains(h)
                assert (eval_f(regime_b2, h) - y).is_zero_like

    def test_pole_preimages_defined(self, regime_b2):
        # the pole satisfies |pole - (1-q)| = |theta-1| < |q^2|
        assert norm_exp(regime_b2.pole - (1 - regime_b2.q)) == \
            regime_b2.v_theta1
        part = build_partition(regime_b2)
        for entry in part.balls:
            h = inverse_branch(regime_b2, entry.symbol, regime_b2.pole, part)
            assert entry.ball.contains(h)

    def test_domain_precondition(self, regime_b2):
        with pytest.raises(ValueError):
            inverse_branch(regime_b2, 1, 7)  # |7 - (1-q)| = 1 >= |q^2|


class TestRegimeAContraction:
    def test_contraction_in_k1(self, regime_a):
        # for x in B_{|q+theta-1|}(1): |f(x) - 1| < |x - 1|
        rng = random.Random(17)
        p = regime_a.p
        for _ in range(40):
            # |x - 1| < |q + theta - 1| = p^-1, x != 1
            off = rng.randrange(1, p**30)
            x = from_rational(1 + p**2 * off, 1, prime=p, digits=40)
            d0 = norm_exp(x - 1)
            d1 = norm_exp(eval_f(regime_a, x) - 1)
            assert d1 > d0


class TestScalingLaws:
    def test_expansion_constants(self, regime_b2, regime_b4):
        # |f(x)-f(y)| = |q(x-y)|/|k(theta-1)| on the ball at 1 and
        # |k(x-y)|/|q(theta-1)| on the others
        for params in (regime_b2, regime_b4):
            part = build_partition(params)
            rng = random.Random(23)
            for entry in part.balls:
                if (entry.xi - 1).is_zero_like:
                    expected = -(params.v_k + params.v_theta1 - params.v_q)
                else:
                    expected = -(params.v_q + params.v_theta1 - params.v_k)
                for _ in range(5):
                    a, b = rng.randrange(5**30), rng.randrange(5**30)
                    if a == b:
                        continue
                    x = entry.center + a * 5**(part.radius_exp + 1)
                    y = entry.center + b * 5**(part.radius_exp + 1)
                    jump = (norm_exp(eval_f(params, x) - eval_f(params, y))
                            - norm_exp(x - y))
                    assert jump == expected == -entry.tau
