"""Capped-precision exact arithmetic in the field Q_p.

A value is stored as ``p**val * unit`` with the unit known to ``prec``
base-p digits, so valuations and norms are exact integers, never floats.
Three flavors of value arise:

* exact values (``prec == INF``): the unit is a signed integer known in
  full, including the exact zero (``unit == 0``);
* inexact values (``1 <= prec < INF``): the unit is known modulo
  ``p**prec`` and stored in canonical complement form in ``[1, p**prec)``;
* inexact zeros (``unit == 0``, ``prec == 0``): subtraction cancelled every
  known digit, so only ``|x|_p <= p**-val`` is known.

Every operation propagates the provable precision bound, and any predicate
the carried precision cannot decide raises :class:`PrecisionError` instead
of guessing.  Callers may rebuild their inputs at doubled precision and
retry.  Values are immutable and safe to share across threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

INF = math.inf

DEFAULT_DIGITS = 64

_MAX_NEWTON = 64


class PrecisionError(ArithmeticError):
    """A predicate or operation is undecidable at the available precision."""


class NormCmp(Enum):
    LT = -1
    EQ = 0
    GT = 1


def _vp(n: int, p: int) -> int:
    """Exponent of p in a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _check_prime(p: int) -> None:
    if p < 2:
        raise ValueError(f"prime must be >= 2, got {p}")
    if p % 2 == 0 and p != 2:
        raise ValueError(f"{p} is not prime")
    d = 3
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"{p} is not prime")
        d += 2


@dataclass(frozen=True, slots=True, eq=False)
class Padic:
    """One p-adic number at a known precision.  Use the factory functions
    (:func:`from_rational`, :meth:`Padic.parse`) rather than the raw
    constructor; the raw fields are assumed normalized.

    ``cap`` is the working precision the value was created under; it bounds
    the precision of results when two exact values meet in a division that
    leaves exact arithmetic.
    """

    prime: int
    val: int
    unit: int
    prec: int | float
    cap: int

    # -- state predicates ------------------------------------------------

    @property
    def is_exact_zero(self) -> bool:
        return self.unit == 0 and self.prec == INF

    @property
    def is_inexact_zero(self) -> bool:
        return self.unit == 0 and self.prec == 0

    @property
    def is_zero_like(self) -> bool:
        """True when the value is indistinguishable from zero as stored."""
        return self.unit == 0

    @property
    def is_exact(self) -> bool:
        return self.prec == INF

    @property
    def abs_prec(self) -> int | float:
        """The value is known modulo ``p**abs_prec``."""
        if self.prec == INF:
            return INF
        return self.val + self.prec

    @property
    def val_lower_bound(self) -> int | float:
        """A valuation bound that is always available: exact for nonzero
        values, +inf for the exact zero, the cancellation depth for inexact
        zeros."""
        if self.is_exact_zero:
            return INF
        return self.val

    @property
    def valuation(self) -> int | float:
        """Exact valuation; +inf for the exact zero.  Raises
        :class:`PrecisionError` on an inexact zero, whose valuation is only
        bounded below."""
        if self.is_exact_zero:
            return INF
        if self.unit == 0:
            raise PrecisionError(
                f"valuation known only to be >= {self.val} "
                f"(value cancelled to O({self.prime}^{self.val}))"
            )
        return self.val

    def norm_exp(self) -> int | float:
        """-log_p |x|_p as an exact integer; +inf for the exact zero."""
        return self.valuation

    def val_at_least(self, m: int) -> bool:
        """Decide ``|x|_p <= p**-m``; raises PrecisionError if undecidable."""
        if self.is_exact_zero:
            return True
        if self.unit != 0:
            return self.val >= m
        if self.val >= m:
            return True
        raise PrecisionError(
            f"cannot decide valuation >= {m}: only >= {self.val} is known"
        )

    def val_at_most(self, m: int) -> bool:
        """Decide ``|x|_p >= p**-m``; raises PrecisionError if undecidable."""
        if self.is_exact_zero:
            return False
        if self.unit != 0:
            return self.val <= m
        if self.val > m:
            return False
        raise PrecisionError(
            f"cannot decide valuation <= {m}: only >= {self.val} is known"
        )

    # -- construction ----------------------------------------------------

    @staticmethod
    def _build(prime: int, val: int, unit: int, prec: int | float, cap: int) -> "Padic":
        """Normalize raw fields into a canonical instance."""
        if unit == 0:
            if prec == INF:
                return Padic(prime, 0, 0, INF, cap)
            return Padic(prime, val, 0, 0, cap)
        c = _vp(unit, prime)
        if c:
            val += c
            unit //= prime**c
        if prec == INF:
            # keep huge exact units from growing without bound; truncating
            # to the cap is always a sound inexact representation
            if abs(unit).bit_length() > (cap + 24) * math.log2(prime):
                prec = cap
            else:
                return Padic(prime, val, unit, INF, cap)
        if prec <= 0:
            return Padic(prime, val, 0, 0, cap)
        prec = int(prec)
        unit %= prime**prec
        return Padic(prime, val, unit, prec, cap)

    @classmethod
    def zero(cls, prime: int, cap: int = DEFAULT_DIGITS) -> "Padic":
        return cls(prime, 0, 0, INF, cap)

    @classmethod
    def one(cls, prime: int, cap: int = DEFAULT_DIGITS) -> "Padic":
        return cls(prime, 0, 1, INF, cap)

    @classmethod
    def inexact_zero(cls, prime: int, bound: int, cap: int = DEFAULT_DIGITS) -> "Padic":
        """The value O(p**bound): everything cancelled above p**bound."""
        return cls(prime, bound, 0, 0, cap)

    @classmethod
    def from_residue(cls, residue: int, abs_prec: int, prime: int,
                     cap: int | None = None) -> "Padic":
        """The value congruent to ``residue`` modulo ``p**abs_prec``."""
        if abs_prec < 1:
            raise ValueError("abs_prec must be >= 1")
        residue %= prime**abs_prec
        if residue == 0:
            return cls.inexact_zero(prime, abs_prec, cap or abs_prec)
        v = _vp(residue, prime)
        return cls(prime, v, residue // prime**v, abs_prec - v, cap or abs_prec)

    def with_cap(self, cap: int) -> "Padic":
        """Same value under a different working precision cap."""
        return Padic(self.prime, self.val, self.unit, self.prec, cap)

    # -- coercion and arithmetic -----------------------------------------

    def _coerce(self, other):
        if isinstance(other, Padic):
            if other.prime != self.prime:
                raise ValueError(
                    f"mixed primes: {self.prime} vs {other.prime}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return from_rational(other, 1, prime=self.prime, digits=self.cap)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.prime
        cap = min(self.cap, o.cap)
        if self.is_exact_zero:
            return o.with_cap(cap)
        if o.is_exact_zero:
            return self.with_cap(cap)
        if self.prec == INF and o.prec == INF:
            m = min(self.val, o.val)
            u = self.unit * p ** (self.val - m) + o.unit * p ** (o.val - m)
            return Padic._build(p, m, u, INF, cap)
        a = min(self.abs_prec, o.abs_prec)
        m = min(self.val, o.val)
        rel = int(a) - m
        if rel <= 0:
            return Padic.inexact_zero(p, int(a), cap)
        s = (self.unit * p ** (self.val - m) + o.unit * p ** (o.val - m)) % p**rel
        if s == 0:
            return Padic.inexact_zero(p, int(a), cap)
        c = _vp(s, p)
        return Padic(p, m + c, s // p**c, rel - c, cap)

    __radd__ = __add__

    def __neg__(self):
        if self.unit == 0:
            return self
        if self.prec == INF:
            return Padic(self.prime, self.val, -self.unit, INF, self.cap)
        return Padic(self.prime, self.val,
                     self.prime**self.prec - self.unit, self.prec, self.cap)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.prime
        cap = min(self.cap, o.cap)
        if self.is_exact_zero or o.is_exact_zero:
            return Padic.zero(p, cap)
        if self.unit == 0 or o.unit == 0:
            return Padic.inexact_zero(p, self.val + o.val, cap)
        prec = min(self.prec, o.prec)
        return Padic._build(p, self.val + o.val, self.unit * o.unit, prec, cap)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.prime
        cap = min(self.cap, o.cap)
        if o.is_exact_zero:
            raise ZeroDivisionError("division by exact p-adic zero")
        if o.unit == 0:
            raise PrecisionError(
                f"divisor is indistinguishable from zero (O({p}^{o.val}))"
            )
        if self.is_exact_zero:
            return Padic.zero(p, cap)
        if self.unit == 0:
            return Padic.inexact_zero(p, self.val - o.val, cap)
        val = self.val - o.val
        if self.prec == INF and o.prec == INF:
            if self.unit % o.unit == 0:
                return Padic._build(p, val, self.unit // o.unit, INF, cap)
            prec = cap
        else:
            prec = int(min(self.prec, o.prec))
        inv = pow(o.unit, -1, p**prec)
        return Padic._build(p, val, self.unit * inv, prec, cap)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def pow_int(self, n: int) -> "Padic":
        """Integer power by repeated squaring; n may be negative."""
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        p, cap = self.prime, self.cap
        if n == 0:
            return Padic.one(p, cap)
        if self.is_exact_zero:
            if n < 0:
                raise ZeroDivisionError("negative power of exact zero")
            return self
        if self.unit == 0:
            if n < 0:
                raise PrecisionError("negative power of an inexact zero")
            return Padic.inexact_zero(p, n * self.val, cap)
        base = self if n > 0 else Padic.one(p, cap) / self
        n = abs(n)
        out = Padic.one(p, cap)
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __pow__(self, n: int) -> "Padic":
        return self.pow_int(n)

    # -- digits and text encodings ----------------------------------------

    def digits(self, count: int) -> tuple[int, ...]:
        """First ``count`` base-p digits of the unit part (complement form
        for negative exact values)."""
        if count < 0:
            raise ValueError("count must be >= 0")
        if self.unit == 0:
            if self.is_exact_zero:
                return (0,) * count
            raise PrecisionError("no unit digits known for an inexact zero")
        if self.prec != INF and count > self.prec:
            raise PrecisionError(
                f"only {self.prec} digits known, {count} requested"
            )
        u = self.unit % self.prime**count
        out = []
        for _ in range(count):
            u, d = divmod(u, self.prime)
            out.append(d)
        return tuple(out)

    def _digit_body(self, ds: tuple[int, ...]) -> str:
        p = self.prime
        terms = []
        for j, d in enumerate(ds):
            if j == 0:
                terms.append(str(d))
            elif j == 1:
                terms.append(f"{d}*{p}")
            else:
                terms.append(f"{d}*{p}^{j}")
        return " + ".join(terms)

    def to_string(self) -> str:
        """Digit-expansion encoding, e.g. ``3^-1 * (2 + 1*3) + O(3^1)``.
        Round-trips through :meth:`parse`."""
        p = self.prime
        if self.is_exact_zero:
            return "0"
        if self.unit == 0:
            return f"O({p}^{self.val})"
        if self.prec == INF:
            u = abs(self.unit)
            n = 1
            while p**n <= u:
                n += 1
            body = self._digit_body(self.digits(n) if self.unit > 0 else
                                    _int_digits(u, p, n))
            sign = "-" if self.unit < 0 else ""
            return f"{p}^{self.val} * {sign}({body})"
        body = self._digit_body(self.digits(int(self.prec)))
        return f"{p}^{self.val} * ({body}) + O({p}^{self.val + int(self.prec)})"

    def to_compact(self) -> str:
        """Compact ``v:u:N`` encoding; ``N`` is ``inf`` for exact values."""
        if self.is_exact_zero:
            return "inf:0:inf"
        if self.unit == 0:
            return f"{self.val}:0:0"
        n = "inf" if self.prec == INF else str(int(self.prec))
        return f"{self.val}:{self.unit}:{n}"

    @classmethod
    def parse(cls, text: str, prime: int | None = None,
              cap: int | None = None) -> "Padic":
        """Parse either encoding produced by :meth:`to_string` /
        :meth:`to_compact`.  The compact form needs ``prime``."""
        text = text.strip()
        if ":" in text:
            if prime is None:
                raise ValueError("compact form needs an explicit prime")
            return _parse_compact(text, prime, cap)
        return _parse_string(text, prime, cap)

    def __repr__(self) -> str:
        return f"Padic({self.prime}, {self.to_compact()!r})"

    def __str__(self) -> str:
        return self.to_string()


def _int_digits(u: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        u, d = divmod(u, p)
        out.append(d)
    return tuple(out)


# -- module-level operations ----------------------------------------------


def from_rational(num, den=1, *, prime: int, digits: int = DEFAULT_DIGITS) -> Padic:
    """Embed the rational num/den into Q_p at ``digits`` working digits.

    The valuation is exact; the unit is exact whenever the reduced
    denominator is a power of p, otherwise it is known modulo p**digits.
    """
    _check_prime(prime)
    if digits < 1:
        raise ValueError("digits must be >= 1")
    fr = Fraction(num, den)  # raises ZeroDivisionError for den == 0
    if fr == 0:
        return Padic.zero(prime, digits)
    n, d = fr.numerator, fr.denominator
    vn = _vp(n, prime) if n % prime == 0 else 0
    vd = _vp(d, prime) if d % prime == 0 else 0
    nu = n // prime**vn
    du = d // prime**vd
    if du == 1:
        return Padic._build(prime, vn - vd, nu, INF, digits)
    unit = nu * pow(du, -1, prime**digits)
    return Padic._build(prime, vn - vd, unit, digits, digits)


def norm_exp(x: Padic) -> int | float:
    """-log_p |x|_p; +inf for the exact zero."""
    return x.norm_exp()


def cmp_norm(x: Padic, y: Padic) -> NormCmp:
    """Exact comparison of |x|_p and |y|_p.

    Raises :class:`PrecisionError` when an inexact zero leaves the order
    undetermined.  ``cmp_norm(x, y) == LT`` is the computable form of the
    small-o relation between x and y.
    """
    if x.prime != y.prime:
        raise ValueError("mixed primes")
    if x.is_exact_zero:
        if y.is_exact_zero:
            return NormCmp.EQ
        if y.unit != 0:
            return NormCmp.LT
        raise PrecisionError("cannot order |0| against an inexact zero")
    if x.unit != 0:
        if y.is_exact_zero:
            return NormCmp.GT
        if y.unit != 0:
            if x.val < y.val:
                return NormCmp.GT
            if x.val > y.val:
                return NormCmp.LT
            return NormCmp.EQ
        if y.val > x.val:
            return NormCmp.GT
        raise PrecisionError(
            f"|y| <= p^-{y.val} does not separate from |x| = p^-{x.val}"
        )
    # x is an inexact zero
    if y.unit != 0 and x.val > y.val:
        return NormCmp.LT
    raise PrecisionError("inexact zero leaves the norm order undecided")


def in_ep(x: Padic) -> bool:
    """Membership in the exponential domain E_p = {|x-1|_p < p^(-1/(p-1))}.

    For p >= 3 this is exactly |x-1|_p <= 1/p.  p = 2 is out of scope.
    """
    if x.prime < 3:
        raise ValueError("E_p membership implemented for p >= 3 only")
    return (x - 1).val_at_least(1)


@dataclass(frozen=True, slots=True, eq=False)
class Ball:
    """Open ball {x : |x - center|_p < p**-radius_exp}; membership is the
    exact valuation test v(x - center) >= radius_exp + 1."""

    center: Padic
    radius_exp: int

    @property
    def prime(self) -> int:
        return self.center.prime

    def contains(self, x: Padic) -> bool:
        if x.prime != self.prime:
            raise ValueError("mixed primes")
        return (x - self.center).val_at_least(self.radius_exp + 1)

    def is_disjoint(self, other: "Ball") -> bool:
        if other.prime != self.prime:
            raise ValueError("mixed primes")
        # ultrametric: balls either nest or are disjoint, decided by
        # whether the centers are separated at the larger radius
        s = min(self.radius_exp, other.radius_exp)
        return (self.center - other.center).val_at_most(s)


def ball_contains(ball: Ball, x: Padic) -> bool:
    return ball.contains(x)


def balls_disjoint(b1: Ball, b2: Ball) -> bool:
    return b1.is_disjoint(b2)


# -- parsing helpers -------------------------------------------------------

_COMPACT_RE = re.compile(r"^(?P<v>-?\d+|inf):(?P<u>-?\d+):(?P<n>\d+|inf)$")
_STRING_RE = re.compile(
    r"^(?P<p>\d+)\^(?P<v>-?\d+)\s*\*\s*(?P<sign>-)?\((?P<body>[^()]*)\)"
    r"(?:\s*\+?\s*O\(\s*(?P<p2>\d+)\^(?P<m>-?\d+)\s*\))?$"
)
_OZERO_RE = re.compile(r"^O\(\s*(?P<p>\d+)\^(?P<m>-?\d+)\s*\)$")
_TERM_RE = re.compile(r"^(?P<d>\d+)(?:\*(?P<p>\d+)(?:\^(?P<j>\d+))?)?$")


def _parse_compact(text: str, prime: int, cap: int | None) -> Padic:
    m = _COMPACT_RE.match(text)
    if not m:
        raise ValueError(f"not a compact p-adic encoding: {text!r}")
    v, u, n = m.group("v"), int(m.group("u")), m.group("n")
    if v == "inf":
        if u != 0 or n != "inf":
            raise ValueError(f"malformed exact zero: {text!r}")
        return Padic.zero(prime, cap or DEFAULT_DIGITS)
    val = int(v)
    if n == "inf":
        if u == 0:
            raise ValueError("exact zero must use 'inf:0:inf'")
        if u % prime == 0:
            raise ValueError("unit must be coprime to p")
        return Padic._build(prime, val, u, INF, cap or DEFAULT_DIGITS)
    prec = int(n)
    if prec == 0:
        if u != 0:
            raise ValueError(f"inexact zero must have unit 0: {text!r}")
        return Padic.inexact_zero(prime, val, cap or DEFAULT_DIGITS)
    if u <= 0 or u >= prime**prec or u % prime == 0:
        raise ValueError(f"unit {u} out of range for {prec} digits")
    return Padic(prime, val, u, prec, cap or max(prec, DEFAULT_DIGITS))


def _parse_string(text: str, prime: int | None, cap: int | None) -> Padic:
    if text == "0":
        if prime is None:
            raise ValueError("the encoding '0' needs an explicit prime")
        return Padic.zero(prime, cap or DEFAULT_DIGITS)
    m = _OZERO_RE.match(text)
    if m:
        p = int(m.group("p"))
        if prime is not None and prime != p:
            raise ValueError(f"prime mismatch: expected {prime}, found {p}")
        return Padic.inexact_zero(p, int(m.group("m")), cap or DEFAULT_DIGITS)
    m = _STRING_RE.match(text)
    if not m:
        raise ValueError(f"not a p-adic digit encoding: {text!r}")
    p = int(m.group("p"))
    if prime is not None and prime != p:
        raise ValueError(f"prime mismatch: expected {prime}, found {p}")
    val = int(m.group("v"))
    unit = 0
    count = 0
    for j, term in enumerate(t.strip() for t in m.group("body").split("+")):
        tm = _TERM_RE.match(term)
        if not tm:
            raise ValueError(f"bad digit term {term!r} in {text!r}")
        d = int(tm.group("d"))
        if not 0 <= d < p:
            raise ValueError(f"digit {d} out of range for base {p}")
        if tm.group("p") is not None:
            if int(tm.group("p")) != p:
                raise ValueError(f"prime mismatch inside digits: {term!r}")
            jj = int(tm.group("j")) if tm.group("j") else 1
        else:
            jj = 0
        if jj != j:
            raise ValueError(f"digit terms must ascend from p^0: {text!r}")
        unit += d * p**j
        count += 1
    if m.group("m") is None:
        if m.group("sign"):
            unit = -unit
        return Padic._build(p, val, unit, INF, cap or DEFAULT_DIGITS)
    if m.group("sign"):
        raise ValueError("inexact values carry complement digits, not a sign")
    if int(m.group("p2")) != p:
        raise ValueError("prime mismatch in the O(...) tail")
    abs_prec = int(m.group("m"))
    if abs_prec - val != count:
        raise ValueError(
            f"digit count {count} inconsistent with O({p}^{abs_prec})"
        )
    return Padic._build(p, val, unit, count, cap or max(count, DEFAULT_DIGITS))
