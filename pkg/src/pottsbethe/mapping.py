"""The Potts-Bethe rational map over Q_p and its Markov partition.

The map is x -> ((theta*x + q - 1) / (x + theta + q - 2))**k on
Q_p minus the pole 2 - q - theta, with p | q and theta in the exponential
domain.  This module evaluates the map and its Moebius factor, classifies
the parameter regime by exact norm comparisons, builds the invariant ball
cover with its scaling exponents, and provides the inverse branches.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import hensel
from .padic import (
    DEFAULT_DIGITS,
    INF,
    Ball,
    Padic,
    PrecisionError,
    _check_prime,
    _vp,
    from_rational,
)


class PoleHit(Exception):
    """The map was evaluated at (or indistinguishably close to) its pole."""

    def __init__(self, message: str, exact: bool):
        super().__init__(message)
        self.exact = exact


class VerificationError(Exception):
    """A property the underlying theory guarantees failed to verify.

    This never indicates bad input; it would falsify the theory at the
    given parameters and is reported loudly rather than absorbed.
    """


class RegimeTag(str, Enum):
    A = "A"
    B1 = "B1"
    B2 = "B2"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True, eq=False)
class Regime:
    tag: RegimeTag
    kappa: int
    detail: str = ""


_THETA_POWER_RE = re.compile(r"^1\+(?:(-?\d+)\*)?p\^(\d+)$")
_THETA_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(-?\d+))?$")


def parse_theta(text: str, p: int) -> Fraction:
    """theta grammar: a rational ``a/b`` (or a plain integer) or the
    shorthand ``1+c*p^m`` where ``p`` is the literal letter p."""
    text = text.replace(" ", "")
    m = _THETA_POWER_RE.match(text)
    if m:
        c = int(m.group(1)) if m.group(1) else 1
        return Fraction(1 + c * p ** int(m.group(2)))
    m = _THETA_RATIONAL_RE.match(text)
    if m:
        den = int(m.group(2)) if m.group(2) else 1
        return Fraction(int(m.group(1)), den)
    raise ValueError(
        f"cannot parse theta {text!r}: expected 'a/b' or '1+c*p^m'"
    )


@dataclass(frozen=True, eq=False)
class MapParams:
    """Validated parameters (p, k, q, theta) with derived quantities.

    Immutable after construction; all evaluation functions are pure, so a
    single instance can be shared freely across a parameter sweep.
    """

    p: int
    k: int
    q: int
    theta: Padic
    digits: int
    theta_frac: Fraction | None
    pole: Padic
    v_k: int
    v_q: int
    v_theta1: int | float
    v_qtheta1: int
    kappa: int

    @classmethod
    def make(cls, p: int, k: int, q: int, theta,
             digits: int = DEFAULT_DIGITS) -> "MapParams":
        if p < 3:
            raise ValueError("p >= 3 required")
        _check_prime(p)
        if not isinstance(k, int) or k < 1:
            raise ValueError("k must be a positive integer")
        if not isinstance(q, int) or q == 0 or q % p != 0:
            raise ValueError(f"q must be a nonzero integer divisible by p={p}")
        theta_frac: Fraction | None
        if isinstance(theta, Padic):
            if theta.prime != p:
                raise ValueError("theta carries a different prime")
            theta_p, theta_frac = theta.with_cap(digits), None
        else:
            if isinstance(theta, str):
                theta_frac = parse_theta(theta, p)
            else:
                theta_frac = Fraction(theta)
            theta_p = from_rational(theta_frac, 1, prime=p, digits=digits)
        t1 = theta_p - 1
        if not t1.val_at_least(1):
            raise ValueError("theta must lie in the exponential domain "
                             "(|theta - 1|_p < 1)")
        v_theta1 = INF if t1.is_exact_zero else t1.valuation
        qt1 = t1 + q
        if qt1.is_exact_zero:
            raise ValueError("q + theta - 1 = 0 puts the pole at the fixed "
                             "point 1; the map is degenerate")
        v_qtheta1 = qt1.valuation
        pole = 2 - q - theta_p
        return cls(
            p=p, k=k, q=q, theta=theta_p, digits=digits,
            theta_frac=theta_frac, pole=pole,
            v_k=_vp(k, p), v_q=_vp(q, p), v_theta1=v_theta1,
            v_qtheta1=v_qtheta1, kappa=math.gcd(k, p - 1),
        )

    def at_digits(self, digits: int) -> "MapParams":
        """The same parameters rebuilt at a different working precision.
        Needs a rational theta source; a raw inexact theta cannot gain
        digits."""
        if self.theta_frac is not None:
            return MapParams.make(self.p, self.k, self.q, self.theta_frac,
                                  digits)
        if self.theta.is_exact or digits <= self.digits:
            return MapParams.make(self.p, self.k, self.q,
                                  self.theta.with_cap(digits), digits)
        raise PrecisionError(
            "theta was supplied as an inexact value; cannot rebuild at "
            f"{digits} digits"
        )

    def embed(self, x) -> Padic:
        if isinstance(x, Padic):
            if x.prime != self.p:
                raise ValueError("value carries a different prime")
            return x
        return from_rational(Fraction(x), 1, prime=self.p, digits=self.digits)

    def config_dict(self) -> dict:
        return {
            "p": self.p, "k": self.k, "q": self.q,
            "theta": str(self.theta_frac) if self.theta_frac is not None
            else self.theta.to_compact(),
            "digits": self.digits,
        }


def eval_g(params: MapParams, x) -> Padic:
    """The Moebius factor (theta*x + q - 1) / (x + theta + q - 2)."""
    x = params.embed(x)
    den = x + params.theta + (params.q - 2)
    if den.is_exact_zero:
        raise PoleHit("x is exactly the pole 2 - q - theta", exact=True)
    if den.is_zero_like:
        raise PoleHit(
            f"x is indistinguishable from the pole at O(p^{den.val})",
            exact=False,
        )
    num = params.theta * x + (params.q - 1)
    return num / den


def eval_f(params: MapParams, x) -> Padic:
    """One application of the full map, g(x)**k."""
    return eval_g(params, x).pow_int(params.k)


def multiplier(params: MapParams, x_fix) -> Padic:
    """Derivative of the map at a fixed point:
    k * g(x)**(k-1) * (theta-1)(q+theta-1) / (x+q+theta-2)**2."""
    x = params.embed(x_fix)
    drift = eval_f(params, x) - x
    if not drift.is_zero_like:
        raise ValueError(
            f"x is not fixed at the working precision: |f(x)-x| = "
            f"p^-{drift.val_lower_bound}"
        )
    den = x + params.theta + (params.q - 2)
    g = eval_g(params, x)
    t1 = params.theta - 1
    return (params.k * g.pow_int(params.k - 1) * t1 * (t1 + params.q)
            / (den * den))


def classify_fixed(lmbda: Padic) -> str:
    """attractive / indifferent / repelling by the exact norm of the
    multiplier.  A vanishing multiplier (theta = 1 makes the map constant)
    is flagged instead of classified."""
    if lmbda.is_exact_zero:
        raise ValueError(
            "multiplier is exactly zero (theta = 1 collapses the map to a "
            "constant); the fixed point is not classified"
        )
    if lmbda.is_zero_like:
        raise PrecisionError(
            "multiplier cancelled to the working precision; cannot separate "
            "attractive from degenerate"
        )
    v = lmbda.valuation
    if v > 0:
        return "attractive"
    if v == 0:
        return "indifferent"
    return "repelling"


def classify_regime(params: MapParams) -> Regime:
    """Exact norm comparisons decide the dynamical regime.

    A:  |k|_p <= |q+theta-1|_p  (single attracting fixed point, empty
        pole-preimage set);
    B:  |k|_p > |q+theta-1|_p and |theta-1|_p < |q^2|_p, split into B1
        (kappa = 1, one repelling fixed point) and B2 (kappa >= 2, full
        shift on kappa symbols).

    Parameters with |k|_p > |q+theta-1|_p but |theta-1|_p >= |q^2|_p fall
    in a gap the theory does not cover and are reported as unclassified,
    never guessed.
    """
    if params.v_k >= params.v_qtheta1:
        return Regime(RegimeTag.A, params.kappa,
                      f"v(k)={params.v_k} >= v(q+theta-1)={params.v_qtheta1}")
    if params.v_theta1 == INF:
        raise ValueError(
            "theta = 1 makes the map constant; the expanding regime needs "
            "theta != 1"
        )
    if params.v_theta1 >= 2 * params.v_q + 1:
        tag = RegimeTag.B1 if params.kappa == 1 else RegimeTag.B2
        return Regime(tag, params.kappa,
                      f"v(theta-1)={params.v_theta1} >= 2*v(q)+1="
                      f"{2 * params.v_q + 1}, kappa={params.kappa}")
    return Regime(
        RegimeTag.UNCLASSIFIED, params.kappa,
        f"|k|_p > |q+theta-1|_p holds but |theta-1|_p >= |q^2|_p "
        f"(v(theta-1)={params.v_theta1} < {2 * params.v_q + 1}); outside "
        "the proven regimes",
    )


@dataclass(frozen=True, eq=False)
class PartitionBall:
    symbol: int
    xi: Padic
    center: Padic
    ball: Ball
    tau: int


@dataclass(frozen=True, eq=False)
class Partition:
    """The invariant cover: kappa disjoint balls of radius |q(theta-1)|_p,
    one per k-th root of unity, each carrying its scaling exponent tau."""

    radius_exp: int
    balls: tuple[PartitionBall, ...]

    @property
    def kappa(self) -> int:
        return len(self.balls)

    @property
    def taus(self) -> tuple[int, ...]:
        return tuple(b.tau for b in self.balls)

    def locate(self, x: Padic) -> int | None:
        """Symbol of the ball containing x, or None when x is provably
        outside the cover; PrecisionError when undecidable."""
        for b in self.balls:
            if b.ball.contains(x):
                return b.symbol
        return None

    def to_json_dict(self, params: MapParams) -> dict:
        regime = classify_regime(params)
        return {
            "p": params.p,
            "k": params.k,
            "q": params.q,
            "theta": str(params.theta_frac) if params.theta_frac is not None
            else params.theta.to_compact(),
            "regime": regime.tag.value,
            "kappa": self.kappa,
            "radius_exp": self.radius_exp,
            "balls": [
                {
                    "symbol": b.symbol,
                    "xi": b.xi.to_compact(),
                    "center": b.center.to_compact(),
                    "tau": b.tau,
                }
                for b in self.balls
            ],
        }


@functools.cache
def build_partition(params: MapParams) -> Partition:
    """Centers and scaling exponents of the invariant cover (regime B).

    The ball at the root of unity 1 is centered at
    1 - q + (k-1)(1 - q/2 + (k-2)q^2/(6k))(theta-1) and scales distances
    by |q|/|k(theta-1)|; the ball at xi != 1 is centered at
    2 - q - theta + q(theta-1)/(1-xi) and scales by |k|/|q(theta-1)|.
    Disjointness and positivity of every exponent are asserted, not
    assumed.
    """
    regime = classify_regime(params)
    if regime.tag not in (RegimeTag.B1, RegimeTag.B2):
        raise ValueError(
            f"partition exists in regime B only; these parameters are "
            f"{regime.tag.value} ({regime.detail})"
        )
    p, k, q = params.p, params.k, params.q
    t1 = params.theta - 1
    s = params.v_q + int(params.v_theta1)
    tau_one = params.v_k + int(params.v_theta1) - params.v_q
    tau_other = params.v_q + int(params.v_theta1) - params.v_k
    roots = hensel.roots_of_unity(k, p, params.digits)
    balls = []
    for i, xi in enumerate(roots, start=1):
        if (xi - 1).is_zero_like:
            coeff = Fraction(k - 1) * (
                1 - Fraction(q, 2) + Fraction((k - 2) * q * q, 6 * k)
            )
            center = params.embed(1 - q) + params.embed(coeff) * t1
            tau = tau_one
        else:
            center = params.embed(2 - q) - params.theta + q * t1 / (1 - xi)
            tau = tau_other
        if tau < 1:
            raise VerificationError(
                f"scaling exponent tau={tau} is not positive; the cover "
                "would not be expanding"
            )
        balls.append(PartitionBall(i, xi, center, Ball(center, s), tau))
    for i in range(len(balls)):
        for j in range(i + 1, len(balls)):
            if not balls[i].ball.is_disjoint(balls[j].ball):
                raise VerificationError(
                    f"partition balls {i + 1} and {j + 1} are not disjoint"
                )
        if balls[i].ball.contains(params.pole):
            raise VerificationError("the pole fell inside the cover")
    return Partition(s, tuple(balls))


def inverse_branch(params: MapParams, symbol: int, y,
                   partition: Partition | None = None) -> Padic:
    """The inverse branch through the ball of the given symbol:
    h_i(y) = ((q+theta-2) * xi_i * y**(1/k) - q + 1) / (theta - xi_i * y**(1/k))
    using the principal k-th root.

    Defined wherever the principal root is, i.e. |y - 1|_p < |k|_p, which
    covers the invariant cover, its forward images, and the pole.  The
    image is guaranteed to lie in the ball of symbol i when y belongs to
    the ball of radius |q^2|_p around 1 - q (the cover and the pole both
    do); f(h_i(y)) = y holds on the whole domain.
    """
    part = partition if partition is not None else build_partition(params)
    y = params.embed(y)
    if not (y - 1).val_at_least(params.v_k + 1):
        raise ValueError(
            "y is outside the domain of the inverse branches "
            "(|y - 1|_p >= |k|_p leaves no principal root)"
        )
    entry = part.balls[symbol - 1]
    root = hensel.principal_kth_root(y, params.k)
    xr = entry.xi * root
    num = (params.theta + (params.q - 2)) * xr - (params.q - 1)
    den = params.theta - xr
    if den.is_zero_like:
        raise PrecisionError("theta - xi * y**(1/k) cancelled; retry at "
                             "higher precision")
    return num / den
