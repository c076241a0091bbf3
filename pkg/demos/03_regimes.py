"""The three dynamical regimes of the map, decided by exact norms.

Regime A: one attracting fixed point whose basin is the whole domain.
Regime B1: a single repelling fixed point besides 1.
Regime B2: a Julia set on which the map is a full shift.
A parameter gap the theory does not cover is reported as unclassified.
"""

from pottsbethe import (
    MapParams,
    classify_fixed,
    classify_regime,
    eval_f,
    fixed_point_B1,
    multiplier,
    orbit,
    pole_preimage_tree,
)
from pottsbethe.sampling import spanning_samples

TRIPLES = [
    dict(p=3, k=3, q=3, theta="1+p^2"),
    dict(p=5, k=3, q=5, theta="1+p^3"),
    dict(p=5, k=2, q=5, theta="1+p^3"),
    dict(p=5, k=2, q=5, theta="1+p^1"),
]

print("== classification by exact norm comparisons ==")
for combo in TRIPLES:
    params = MapParams.make(combo["p"], combo["k"], combo["q"], combo["theta"])
    regime = classify_regime(params)
    print(f"p={combo['p']} k={combo['k']} q={combo['q']} theta={combo['theta']}"
          f"  ->  {regime.tag.value} ({regime.detail})")

print()
print("== regime A: everything falls into the basin of 1 ==")
pa = MapParams.make(3, 3, 3, "1+p^2")
lam = multiplier(pa, 1)
print("multiplier at 1 has norm exponent", lam.valuation,
      "->", classify_fixed(lam))
outcomes = {}
for s in spanning_samples(pa, 120, seed=1):
    res = orbit(pa, s.realize(pa))
    outcomes[res.status.value] = outcomes.get(res.status.value, 0) + 1
print("120 seeded orbits:", outcomes)
print("backward orbit of the pole (depth 5):",
      pole_preimage_tree(pa, 5), "(empty, as the norms force)")

print()
print("== regime B1: a second, repelling fixed point appears ==")
pb1 = MapParams.make(5, 3, 5, "1+p^3")
x_star = fixed_point_B1(pb1)
print("x* =", x_star.to_compact()[:40], "...")
print("f(x*) - x* cancels to:",
      (eval_f(pb1, x_star) - x_star).val_lower_bound, "digits")
print("|x* - 1| has exponent", (x_star - 1).norm_exp(), "= v(q)")
for point, label in [(1, "x=1"), (x_star, "x=x*")]:
    lam = multiplier(pb1, point)
    print(f"multiplier at {label}: exponent {lam.valuation} ->",
          classify_fixed(lam))
