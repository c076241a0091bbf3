"""A tour of the exact p-adic arithmetic layer.

Norms are exact integer exponents, addition obeys the strong triangle
inequality, cancellation is tracked digit by digit, and undecidable
questions raise instead of guessing.
"""

from pottsbethe import (
    Ball,
    Padic,
    PrecisionError,
    ball_contains,
    balls_disjoint,
    cmp_norm,
    from_rational,
    in_ep,
    norm_exp,
)

p = 5

print("== embedding rationals ==")
for num, den in [(1, 1), (75, 4), (-383, 2), (7, 25)]:
    x = from_rational(num, den, prime=p, digits=8)
    print(f"{num}/{den} as a {p}-adic: {x}")
    print(f"   norm exponent -log_p |x|_p = {norm_exp(x)}")

print()
print("== the strong triangle inequality ==")
x = from_rational(5, 1, prime=p)
y = from_rational(25, 1, prime=p)
print(f"|x|=5^-1, |y|=5^-2, so |x+y| = 5^-{norm_exp(x + y)} (the max)")

print()
print("== exact cancellation vs precision loss ==")
one = from_rational(1, 1, prime=p)
print("1 + (-1) is the exact zero:", (one - one).is_exact_zero)
a = from_rational(1, 7, prime=p, digits=12)          # inexact unit
b = a + 5**4
d = b - a
print(f"(a + 5^4) - a = {d}   <- 4 leading digits cancelled, 8 survive")
z = a - a
print(f"a - a = {z}   <- nothing survives, only a bound remains")
try:
    norm_exp(z)
except PrecisionError as exc:
    print("asking for its exact norm raises:", exc)

print()
print("== ultrametric balls ==")
b1 = Ball(from_rational(1, 1, prime=p), 2)
b2 = Ball(from_rational(1 + 25, 1, prime=p), 2)
print("centers at distance 5^-2, open radius 5^-2 -> disjoint:",
      balls_disjoint(b1, b2))
print("a ball contains its center:", ball_contains(b1, b1.center))

print()
print("== norm comparison as a calculus ==")
q = from_rational(5, 1, prime=p)
t1 = from_rational(125, 1, prime=p)
print("|q(theta-1)| vs |theta-1| with |q|<1:", cmp_norm(q * t1, t1).name)

print()
print("== the exponential domain ==")
for n in (1, 6, 2):
    x = from_rational(n, 1, prime=p)
    print(f"{n} in E_{p}?", in_ep(x))

print()
print("== both text encodings round-trip ==")
x = from_rational(-383, 2, prime=p, digits=6)
print("digit form:  ", x.to_string())
print("compact form:", x.to_compact())
print("parse(digit) == parse(compact):",
      Padic.parse(x.to_string(), p).to_compact()
      == Padic.parse(x.to_compact(), p).to_compact())
