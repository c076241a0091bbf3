"""Orbits, basins, Julia-set candidates, and the symbolic dynamics.

Forward iteration with convergence certificates, the exact basin /
pole-preimage / Julia trichotomy up to a depth, itineraries against the
invariant cover, cylinder and periodic points built from the inverse
branches, the verified incidence matrix, the dynamical metric on words,
and the backward tree of the pole.

Julia-set membership is an infinite intersection, so it is only ever
certified to a finite depth here; the API says "candidate" and carries the
depth, never more.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .mapping import (
    MapParams,
    Partition,
    PoleHit,
    RegimeTag,
    VerificationError,
    build_partition,
    classify_regime,
    eval_f,
    eval_g,
    inverse_branch,
)
from .padic import INF, Ball, Padic, PrecisionError
from . import sampling

DEFAULT_MAX_ITER = 200
DEFAULT_TOL = 20
POLE_TREE_BUDGET = 10**5


class OrbitStatus(Enum):
    CONVERGED_TO_1 = "converged_to_1"
    STAYED_IN_X = "stayed_in_x"
    POLE_HIT = "pole_hit"
    UNDECIDED = "undecided"


@dataclass(frozen=True, eq=False)
class Itinerary:
    """Finite word over the symbols 1..kappa."""

    word: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.word)

    def is_admissible(self, matrix: "IncidenceMatrix") -> bool:
        return all(
            matrix.entries[a - 1][b - 1] == 1
            for a, b in zip(self.word, self.word[1:])
        )


@dataclass(frozen=True, eq=False)
class OrbitResult:
    status: OrbitStatus
    steps: int | None = None
    itinerary: Itinerary | None = None
    reason: str | None = None
    trajectory: tuple[Padic, ...] = field(default=())


@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    entries: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def all_ones(self) -> bool:
        return all(all(e == 1 for e in row) for row in self.entries)

    def is_irreducible(self) -> bool:
        n = self.size
        for start in range(n):
            seen = {start}
            frontier = [start]
            while frontier:
                i = frontier.pop()
                for j in range(n):
                    if self.entries[i][j] and j not in seen:
                        seen.add(j)
                        frontier.append(j)
            if len(seen) != n:
                return False
        return True


def _partition_for(params: MapParams, partition: Partition | None,
                   regime) -> Partition | None:
    if partition is not None:
        return partition
    if regime.tag in (RegimeTag.B1, RegimeTag.B2):
        return build_partition(params)
    return None


def orbit(params: MapParams, x0, max_iter: int = DEFAULT_MAX_ITER,
          tol: int = DEFAULT_TOL,
          partition: Partition | None = None) -> OrbitResult:
    """Iterate the map from x0, certifying the outcome.

    Convergence means entering the open ball of radius p**-tol around 1
    and, unless the distance vanished outright, one further verified
    strictly-contracting step.  An orbit that stays inside the invariant
    cover for the whole budget reports its symbol itinerary instead.
    Precision exhaustion is reported, never guessed over.
    """
    regime = classify_regime(params)
    part = _partition_for(params, partition, regime)
    x = params.embed(x0)
    traj = [x]
    symbols: list[int] = []
    always_in_x = part is not None
    try:
        for t in range(max_iter + 1):
            d = x - 1
            if d.is_exact_zero:
                return OrbitResult(OrbitStatus.CONVERGED_TO_1, t,
                                   trajectory=tuple(traj))
            if d.is_inexact_zero:
                if d.val >= tol + 1:
                    return OrbitResult(OrbitStatus.CONVERGED_TO_1, t,
                                       trajectory=tuple(traj))
                return OrbitResult(OrbitStatus.UNDECIDED, t,
                                   reason="precision",
                                   trajectory=tuple(traj))
            if d.val >= tol + 1:
                nxt = eval_f(params, x)
                d2 = nxt - 1
                if d2.val_lower_bound > d.val:
                    return OrbitResult(OrbitStatus.CONVERGED_TO_1, t,
                                       trajectory=tuple(traj))
                raise VerificationError(
                    "no contraction inside the convergence ball: "
                    f"v(x-1)={d.val}, v(f(x)-1)>={d2.val_lower_bound}"
                )
            if always_in_x:
                sym = part.locate(x)
                if sym is None:
                    always_in_x = False
                else:
                    symbols.append(sym)
            if t == max_iter:
                break
            x = eval_f(params, x)
            traj.append(x)
    except PoleHit:
        return OrbitResult(OrbitStatus.POLE_HIT, len(traj) - 1,
                           trajectory=tuple(traj))
    except PrecisionError:
        return OrbitResult(OrbitStatus.UNDECIDED, len(traj) - 1,
                           reason="precision", trajectory=tuple(traj))
    if always_in_x:
        return OrbitResult(OrbitStatus.STAYED_IN_X, max_iter,
                           itinerary=Itinerary(tuple(symbols)),
                           trajectory=tuple(traj))
    return OrbitResult(OrbitStatus.UNDECIDED, max_iter, reason="budget",
                       trajectory=tuple(traj))


class ClassifyKind(Enum):
    BASIN = "basin"
    JULIA_CANDIDATE = "julia_candidate"
    POLE_PREIMAGE = "pole_preimage"
    UNDECIDED = "undecided"


@dataclass(frozen=True, eq=False)
class ClassifyResult:
    kind: ClassifyKind
    step: int | None = None
    depth: int | None = None
    itinerary: Itinerary | None = None
    reason: str | None = None


def basin_classify(params: MapParams, x0, depth: int,
                   partition: Partition | None = None) -> ClassifyResult:
    """Exact trichotomy up to ``depth`` iterations.

    Leaving the invariant cover certifies membership in the basin of 1;
    landing on the pole certifies membership in its backward orbit (with
    the hitting time); staying inside the cover for every step yields a
    Julia candidate together with its itinerary, certified to this depth
    only.  In the contracting regime every point is basin outright.
    """
    regime = classify_regime(params)
    x = params.embed(x0)
    if (x - params.pole).is_zero_like:
        raise ValueError("x0 is the pole; it lies outside the domain")
    if regime.tag == RegimeTag.A:
        return ClassifyResult(ClassifyKind.BASIN, step=0, depth=depth)
    if regime.tag == RegimeTag.UNCLASSIFIED:
        raise ValueError(f"parameters are unclassified: {regime.detail}")
    part = _partition_for(params, partition, regime)
    symbols: list[int] = []
    try:
        for t in range(depth):
            sym = part.locate(x)
            if sym is None:
                return ClassifyResult(ClassifyKind.BASIN, step=t, depth=depth)
            symbols.append(sym)
            x = eval_f(params, x)
            if (x - params.pole).is_zero_like:
                return ClassifyResult(ClassifyKind.POLE_PREIMAGE, step=t + 1,
                                      depth=depth)
    except PrecisionError:
        return ClassifyResult(ClassifyKind.UNDECIDED, step=len(symbols),
                              depth=depth, reason="precision")
    return ClassifyResult(ClassifyKind.JULIA_CANDIDATE, step=depth,
                          depth=depth, itinerary=Itinerary(tuple(symbols)))


def itinerary_of(params: MapParams, x0, n: int,
                 partition: Partition | None = None) -> Itinerary:
    """Symbol word of the first n iterates; errors if the orbit escapes."""
    part = partition if partition is not None else build_partition(params)
    x = params.embed(x0)
    word = []
    for t in range(n):
        sym = part.locate(x)
        if sym is None:
            raise ValueError(f"orbit leaves the cover at step {t}")
        word.append(sym)
        if t < n - 1:
            x = eval_f(params, x)
    return Itinerary(tuple(word))


def cylinder_point(params: MapParams, word,
                   partition: Partition | None = None) -> tuple[Padic, Ball]:
    """A point realizing the given word, with its shrinking-ball
    certificate.

    The point is the image of the canonical anchor (the first partition
    center) under the inverse branches taken right to left; the returned
    ball has radius exponent radius_exp + sum of the word's scaling
    exponents, so its diameter is at most p**-(tau_w0 + ... ) times the
    cover radius.
    """
    part = partition if partition is not None else build_partition(params)
    word = tuple(word.word if isinstance(word, Itinerary) else word)
    if not word:
        raise ValueError("word must be nonempty")
    for s in word:
        if not 1 <= s <= part.kappa:
            raise ValueError(f"symbol {s} out of range 1..{part.kappa}")
    z = part.balls[0].center
    for s in reversed(word):
        z = inverse_branch(params, s, z, part)
    cert_exp = part.radius_exp + sum(part.balls[s - 1].tau for s in word)
    if z.abs_prec <= cert_exp:
        raise PrecisionError(
            f"certificate ball O(p^{cert_exp}) is below the working "
            f"precision O(p^{z.abs_prec}); retry with more digits"
        )
    return z, Ball(z, cert_exp)


def periodic_point(params: MapParams, word,
                   partition: Partition | None = None) -> Padic:
    """The periodic point whose itinerary repeats the given word.

    Iterates the contraction h_{w_0} o ... o h_{w_m-1} from the anchor to
    its fixed point, then the forward map returns to it after m steps.
    """
    part = partition if partition is not None else build_partition(params)
    word = tuple(word.word if isinstance(word, Itinerary) else word)
    if not word:
        raise ValueError("word must be nonempty")
    z = part.balls[0].center
    prev = None
    for _ in range(params.digits + 8):
        nxt = z
        for s in reversed(word):
            nxt = inverse_branch(params, s, nxt, part)
        gap = nxt - z
        z = nxt
        if gap.is_zero_like:
            return z
        if prev is not None and gap.val <= prev:
            raise PrecisionError("branch cycle stopped contracting at the "
                                 "working precision")
        prev = gap.val
    raise PrecisionError("branch cycle did not settle within its budget")


def derivative_at(params: MapParams, x: Padic) -> Padic:
    """f'(x) = k * g(x)**(k-1) * (theta-1)(q+theta-1) / (x+q+theta-2)**2."""
    den = x + params.theta + (params.q - 2)
    t1 = params.theta - 1
    return (params.k * eval_g(params, x).pow_int(params.k - 1) * t1
            * (t1 + params.q) / (den * den))


def cycle_multiplier(params: MapParams, x: Padic, period: int) -> Padic:
    """Product of the map's derivative along a periodic cycle."""
    out = params.embed(1)
    z = x
    for _ in range(period):
        out = out * derivative_at(params, z)
        z = eval_f(params, z)
    return out


def incidence_matrix(params: MapParams, partition: Partition | None = None,
                     samples_per_ball: int = 3, seed: int = 0) -> IncidenceMatrix:
    """Transition structure of the cover, verified rather than assumed.

    Entry (i, j) is set after checking, on the center of ball j plus
    sampled points, that the branch through ball i sends the point into
    ball i and that the forward map returns it exactly.  The theory makes
    every entry 1; a failed check is raised loudly because it would
    falsify that conclusion at these parameters.
    """
    part = partition if partition is not None else build_partition(params)
    kappa = part.kappa
    rows = []
    for i in range(1, kappa + 1):
        row = []
        for j in range(1, kappa + 1):
            targets = [part.balls[j - 1].center] + [
                s.realize(params, part)
                for s in sampling.ball_samples(params, j, samples_per_ball,
                                               seed, tag="incidence")
            ]
            for y in targets:
                x = inverse_branch(params, i, y, part)
                if not part.balls[i - 1].ball.contains(x):
                    raise VerificationError(
                        f"branch {i} left its ball on a point of ball {j}"
                    )
                if not (eval_f(params, x) - y).is_zero_like:
                    raise VerificationError(
                        f"f(h_{i}(y)) != y on a point of ball {j}"
                    )
            row.append(1)
        rows.append(tuple(row))
    return IncidenceMatrix(tuple(rows))


def df_metric(params: MapParams, wx, wy,
              partition: Partition | None = None) -> Fraction:
    """The dynamical metric between two words: p**-(tau_{x_0}+...+tau_{x_{n-1}}
    + kappa(x_n, y_n)) where n is the first disagreement and kappa(i, j)
    is the exact exponent of the center distance."""
    part = partition if partition is not None else build_partition(params)
    ax = tuple(wx.word if isinstance(wx, Itinerary) else wx)
    ay = tuple(wy.word if isinstance(wy, Itinerary) else wy)
    n = None
    for t, (a, b) in enumerate(zip(ax, ay)):
        if a != b:
            n = t
            break
    if n is None:
        raise ValueError(
            "words agree on their common prefix; the metric is undefined "
            "for this pair at this length"
        )
    exp = sum(part.balls[s - 1].tau for s in ax[:n])
    ci = part.balls[ax[n] - 1].center
    cj = part.balls[ay[n] - 1].center
    exp += (ci - cj).norm_exp()
    return Fraction(1, params.p**exp) if exp >= 0 else Fraction(params.p**-exp)


def norm_fraction(x: Padic) -> Fraction:
    """|x|_p as an exact rational; 0 for the exact zero."""
    v = x.norm_exp()
    if v == INF:
        return Fraction(0)
    return Fraction(1, x.prime**v) if v >= 0 else Fraction(x.prime**-v)


def pole_preimage_tree(params: MapParams, depth: int,
                       partition: Partition | None = None,
                       budget: int = POLE_TREE_BUDGET) -> list[list[Padic]]:
    """Backward orbit of the pole, level by level.

    In the contracting regime the backward orbit is empty: the pole stays
    at norm-distance at least |q+theta-1|_p from every forward image, so
    nothing ever maps onto it; the certified empty answer is returned
    without search.  In the expanding regime each level applies all kappa
    inverse branches and every point is verified by running it forward
    into the pole.
    """
    regime = classify_regime(params)
    if regime.tag == RegimeTag.A:
        return []
    if regime.tag == RegimeTag.UNCLASSIFIED:
        raise ValueError(f"parameters are unclassified: {regime.detail}")
    part = _partition_for(params, partition, regime)
    total = sum(part.kappa**n for n in range(1, depth + 1))
    if total > budget:
        raise ValueError(
            f"kappa**depth sweep would visit {total} points; budget is "
            f"{budget}"
        )
    levels: list[list[Padic]] = []
    current = [params.pole]
    for n in range(1, depth + 1):
        nxt = []
        for y in current:
            for i in range(1, part.kappa + 1):
                x = inverse_branch(params, i, y, part)
                nxt.append(x)
        for x in nxt:
            z = x
            try:
                for _ in range(n):
                    z = eval_f(params, z)
            except PoleHit as exc:
                raise VerificationError(
                    f"level-{n} preimage hit the pole early"
                ) from exc
            if not (z - params.pole).is_zero_like:
                raise VerificationError(
                    f"level-{n} preimage failed to run forward into the pole"
                )
        levels.append(nxt)
        current = nxt
    return levels
