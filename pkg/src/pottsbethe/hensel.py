"""Root-finding over the p-adic integers.

Quadratic Newton refinement under the classical lifting condition
|F(x0)|_p < |F'(x0)|_p^2, the principal k-th root of elements close to 1,
k-th roots of unity via Teichmueller lifting, and the polynomial whose
root in the exponential domain produces the second fixed point of the map
in the single-symbol repelling regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .padic import (
    DEFAULT_DIGITS,
    INF,
    Padic,
    PrecisionError,
    _vp,
    from_rational,
    in_ep,
)

_MAX_NEWTON = 64
_MAX_SEED = 512


@dataclass(frozen=True, eq=False)
class PolyZp:
    """Polynomial with p-adic integer coefficients, constant term first."""

    coeffs: tuple[Padic, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) < 2:
            raise ValueError("degree must be >= 1")
        p = self.coeffs[0].prime
        for c in self.coeffs:
            if c.prime != p:
                raise ValueError("mixed primes in coefficients")
            if not c.val_at_least(0):
                raise ValueError("coefficients must be p-adic integers")
        if self.coeffs[-1].is_zero_like:
            raise ValueError("leading coefficient vanishes at this precision")

    @property
    def prime(self) -> int:
        return self.coeffs[0].prime

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_rationals(cls, values, prime: int,
                       digits: int = DEFAULT_DIGITS) -> "PolyZp":
        return cls(tuple(
            v if isinstance(v, Padic)
            else from_rational(Fraction(v), 1, prime=prime, digits=digits)
            for v in values
        ))

    def __call__(self, x: Padic) -> Padic:
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def deriv_at(self, x: Padic) -> Padic:
        acc = len(self.coeffs[1:]) * self.coeffs[-1]
        for i in range(self.degree - 1, 0, -1):
            acc = acc * x + i * self.coeffs[i]
        return acc


def hensel_lift(F: PolyZp, x0: Padic, target_prec: int | None = None) -> Padic:
    """Newton-refine an approximate root of F until |F(x)|_p <= p**-target_prec.

    Requires x0 in Z_p with |F(x0)|_p < |F'(x0)|_p^2; each step at least
    doubles the number of correct digits.  Returns x with
    |x - x0|_p <= |F(x0)/F'(x0)^2|_p.  With ``target_prec=None`` the
    iteration runs until the value of F cancels entirely at the carried
    precision, i.e. as deep as the inputs can certify.
    """
    if not x0.val_at_least(0):
        raise ValueError("x0 must be a p-adic integer")
    fpx = F.deriv_at(x0)
    vd = fpx.norm_exp()  # PrecisionError if the derivative norm is unknown
    if vd == INF:
        raise ValueError("F'(x0) = 0: lifting condition cannot hold")
    fx = F(x0)
    if not fx.val_at_least(2 * vd + 1):
        raise ValueError(
            "lifting condition |F(x0)| < |F'(x0)|^2 fails "
            f"(v(F) = {fx.val_lower_bound}, v(F') = {vd})"
        )
    x = x0
    for _ in range(_MAX_NEWTON):
        fx = F(x)
        if fx.is_exact_zero:
            return x
        if fx.is_inexact_zero:
            if target_prec is None or fx.val >= target_prec:
                return x
            raise PrecisionError(
                f"F cancels at O(p^{fx.val}) before reaching "
                f"target {target_prec}; retry at higher precision"
            )
        if target_prec is not None and fx.val >= target_prec:
            return x
        x = x - fx / F.deriv_at(x)
    raise PrecisionError("Newton iteration did not reach the target")


def lift_root_near_one(F: PolyZp, k: int,
                       target_prec: int | None = None) -> Padic:
    """The unique root of F in the exponential domain, for polynomials with
    |F(1)|_p < |k|_p and |F'| = |k|_p near 1 (k = deg F).

    Seeds with the linear iteration x <- x - F(x)/k, which gains at least
    one digit per step, until the Hensel condition |F(x)| < |k|^2 holds,
    then switches to quadratic Newton.  By default the root is refined as
    deep as the coefficient precision can certify.
    """
    p = F.prime
    vk = _vp(k, p)
    x = Padic.one(p, min(c.cap for c in F.coeffs))
    kk = from_rational(k, 1, prime=p, digits=x.cap)
    fx = F(x)
    if not fx.val_at_least(vk + 1):
        raise ValueError(
            f"|F(1)| >= |{k}|_p: no root in the exponential domain is "
            "guaranteed"
        )
    last = -1
    for _ in range(_MAX_SEED):
        if fx.is_zero_like or fx.val > 2 * vk:
            break
        if fx.val <= last:
            raise ArithmeticError("seeding iteration stalled")
        last = fx.val
        x = x - fx / kk
        fx = F(x)
    else:
        raise PrecisionError("seeding iteration exceeded its budget")
    if fx.is_exact_zero or (fx.is_inexact_zero and (
            target_prec is None or fx.val >= target_prec)):
        return x
    return hensel_lift(F, x, target_prec)


def principal_kth_root(a: Padic, k: int) -> Padic:
    """The unique k-th root of a lying in the exponential domain.

    Requires |a - 1|_p < |k|_p (so in particular a is in E_p).  The root
    is determined modulo p**(A - v(k)) when a is known modulo p**A.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError("k must be a positive integer")
    p = a.prime
    if p < 3:
        raise ValueError("p >= 3 required")
    vk = _vp(k, p)
    d = a - 1
    if d.is_exact_zero:
        return Padic.one(p, a.cap)
    if d.is_inexact_zero:
        if d.val > vk:
            return Padic.from_residue(1, d.val - vk, p, a.cap)
        raise PrecisionError(
            f"cannot certify |a-1| < |{k}|_p at this precision"
        )
    if d.val <= vk:
        raise ValueError(
            f"|a-1|_p = p^-{d.val} is not smaller than |{k}|_p = p^-{vk}: "
            "no principal root is guaranteed"
        )
    zero = Padic.zero(p, a.cap)
    coeffs = [-a] + [zero] * (k - 1) + [Padic.one(p, a.cap)]
    root = lift_root_near_one(PolyZp(tuple(coeffs)), k)
    if not in_ep(root):
        raise ArithmeticError("computed root left the exponential domain")
    return root


def roots_of_unity(k: int, p: int, digits: int = DEFAULT_DIGITS) -> list[Padic]:
    """All k-th roots of unity in Q_p: exactly gcd(k, p-1) units.

    Each residue c mod p with c**gcd(k, p-1) = 1 is lifted by iterating the
    Frobenius map x <- x**p, whose fixed point is the unique root of unity
    congruent to c.  Results are sorted by residue mod p, which fixes the
    symbol order used by the partition downstream.
    """
    if p < 3:
        raise ValueError("p >= 3 required")
    if k < 1:
        raise ValueError("k must be a positive integer")
    kappa = math.gcd(k, p - 1)
    mod = p**digits
    out = []
    for c in range(1, p):
        if pow(c, kappa, p) != 1:
            continue
        if c == 1:
            out.append(Padic.one(p, digits))
            continue
        x = c
        for _ in range(digits + 2):
            nxt = pow(x, p, mod)
            if nxt == x:
                break
            x = nxt
        else:
            raise ArithmeticError("Teichmueller iteration failed to settle")
        if pow(x, k, mod) != 1:
            raise ArithmeticError("lifted residue is not a k-th root of unity")
        out.append(Padic(p, 0, x, digits, digits))
    if len(out) != kappa:
        raise ArithmeticError(
            f"expected gcd({k}, {p - 1}) = {kappa} roots, found {len(out)}"
        )
    return out


def fixed_point_polynomial(k: int, q: int, theta: Padic,
                           digits: int | None = None) -> PolyZp:
    """x**k - 1 + q - (theta - 1) * (x**(k-1) + ... + x).

    A root x** of this polynomial in the exponential domain satisfies
    g(x**^k) = x**, so x* = x**^k is a fixed point of the full map.
    """
    p = theta.prime
    digits = digits or theta.cap
    t1 = theta - 1
    const = from_rational(q - 1, 1, prime=p, digits=digits)
    middle = [-t1] * (k - 1)
    return PolyZp(tuple([const] + middle + [Padic.one(p, digits)]))


def fixed_point_B1(params) -> Padic:
    """The repelling fixed point x* != 1 in the single-symbol regime.

    Finds the unique exponential-domain root x** of the fixed-point
    polynomial by the same seeding plus Hensel scheme as the principal
    k-th root, and returns x* = x**^k, verified to satisfy f(x*) = x* at
    the working precision and |x* - 1|_p = |q|_p.
    """
    from . import mapping  # runtime import: mapping depends on this module

    regime = mapping.classify_regime(params)
    if regime.tag != mapping.RegimeTag.B1:
        raise ValueError(f"parameters are in regime {regime.tag.value}, not B1")
    F = fixed_point_polynomial(params.k, params.q, params.theta, params.digits)
    x_star_star = lift_root_near_one(F, params.k)
    x_star = x_star_star**params.k
    residual = mapping.eval_f(params, x_star) - x_star
    if not residual.is_zero_like:
        raise ArithmeticError(
            f"candidate fixed point fails f(x) = x: residual valuation "
            f"{residual.val_lower_bound}"
        )
    if (x_star - 1).norm_exp() != params.v_q:
        raise ArithmeticError("fixed point should satisfy |x*-1|_p = |q|_p")
    return x_star
