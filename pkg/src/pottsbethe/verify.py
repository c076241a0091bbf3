"""Deterministic verification reports over the library.

Every report is a plain dict of ints, strings, bools, lists and dicts,
serialized canonically (sorted keys, no timestamps), so identical
configurations produce byte-identical output.  Precision failures are
retried at doubled precision on the same exact sample payloads and are
recorded per record with a machine-readable reason code, never fatal to a
batch.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

from . import __version__
from . import dynamics, hensel, sampling
from .dynamics import ClassifyKind, OrbitStatus
from .mapping import (
    MapParams,
    RegimeTag,
    VerificationError,
    build_partition,
    classify_fixed,
    classify_regime,
    eval_f,
    multiplier,
)
from .padic import INF, Padic, PrecisionError

RETRY_LADDER = (1, 2, 4)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True) + "\n"


def _norm_exp_field(x: Padic):
    """Lower bound on -log_p |x|_p plus whether the bound is exact."""
    if x.is_exact_zero:
        return "inf", True
    if x.unit == 0:
        return x.val, False
    return x.val, True


def _params_ladder(params: MapParams):
    for factor in RETRY_LADDER:
        yield factor, (params if factor == 1
                       else params.at_digits(params.digits * factor))


def classify_report(params: MapParams) -> dict:
    """Regime, kappa, pole, multiplier at 1, and the partition when the
    expanding regime applies."""
    regime = classify_regime(params)
    lam = multiplier(params, 1)
    report = {
        "version": __version__,
        "command": "classify",
        "config": params.config_dict(),
        "regime": regime.tag.value,
        "regime_detail": regime.detail,
        "kappa": regime.kappa,
        "pole": params.pole.to_compact(),
        "multiplier_at_1": {
            "value": lam.to_compact(),
            "norm_exp": lam.valuation,
            "class": classify_fixed(lam),
        },
    }
    if regime.tag in (RegimeTag.B1, RegimeTag.B2):
        part = build_partition(params)
        report["partition"] = part.to_json_dict(params)
    return report


def _orbit_record(params, part, x0: Padic, max_iter: int, tol: int,
                  classify_depth: int | None) -> dict:
    rec: dict = {}
    res = dynamics.orbit(params, x0, max_iter=max_iter, tol=tol,
                         partition=part)
    if res.status is OrbitStatus.UNDECIDED and res.reason == "precision":
        raise PrecisionError("orbit undecided")
    rec["status"] = res.status.value
    rec["steps"] = res.steps
    rec["reason"] = res.reason
    final = res.trajectory[-1] - 1
    bound, exact = _norm_exp_field(final)
    rec["final_norm_exp_to_1"] = bound
    rec["final_norm_exp_exact"] = exact
    rec["itinerary"] = list(res.itinerary.word) if res.itinerary else None
    if classify_depth is not None:
        cls = dynamics.basin_classify(params, x0, classify_depth,
                                      partition=part)
        rec["classification"] = cls.kind.value
        rec["classification_step"] = cls.step
        if cls.itinerary is not None:
            rec["classification_itinerary"] = list(cls.itinerary.word)
        _check_consistency(params, part, x0, cls, max_iter)
    return rec


def _check_consistency(params, part, x0: Padic, cls, max_iter: int) -> None:
    """Desk-scale coherence of a classification.

    A basin point must never re-enter the cover after leaving it, and a
    pole preimage must run forward into the pole at exactly the predicted
    step.  Either failure would falsify the trichotomy and is raised
    loudly.
    """
    if part is None:
        return
    if cls.kind is ClassifyKind.BASIN:
        x = x0
        left = False
        for t in range(min(max_iter, cls.step + 40)):
            inside = part.locate(x) is not None
            if not inside:
                left = True
            elif left:
                raise VerificationError(
                    f"basin point re-entered the cover at step {t}"
                )
            try:
                x = eval_f(params, x)
            except PrecisionError:
                return
            if (x - 1).is_zero_like:
                return
    elif cls.kind is ClassifyKind.POLE_PREIMAGE:
        z = x0
        for _ in range(cls.step):
            z = eval_f(params, z)
        if not (z - params.pole).is_zero_like:
            raise VerificationError(
                "pole preimage did not run forward into the pole at the "
                f"predicted step {cls.step}"
            )


def sweep_report(params: MapParams, samples: int, seed: int,
                 max_iter: int = dynamics.DEFAULT_MAX_ITER,
                 tol: int = dynamics.DEFAULT_TOL,
                 classify_depth: int | None = None,
                 pole_tree_depth: int = 0) -> dict:
    """Seeded batch of orbits (and optionally classifications), one record
    per sample, assembled in sample order.

    ``pole_tree_depth > 0`` appends the backward tree of the pole to the
    seed list (expanding regime only); those records come out as pole hits
    at their predicted level.
    """
    regime = classify_regime(params)
    descriptors = sampling.spanning_samples(params, samples, seed)
    plan: list = [(desc.category, str(desc.payload), desc) for desc
                  in descriptors]
    if pole_tree_depth > 0 and regime.tag in (RegimeTag.B1, RegimeTag.B2):
        levels = dynamics.pole_preimage_tree(params, pole_tree_depth)
        for n, level in enumerate(levels, start=1):
            for i in range(len(level)):
                plan.append((f"pole_tree:{n}", f"level{n}#{i}", (n, i)))
    records = []
    histogram: dict[str, int] = {}
    for idx, (category, label, desc) in enumerate(plan):
        rec = {"index": idx, "category": category, "input": label,
               "retries": 0}
        outcome = None
        for factor, pd in _params_ladder(params):
            part = (build_partition(pd)
                    if regime.tag in (RegimeTag.B1, RegimeTag.B2) else None)
            if isinstance(desc, sampling.Sample):
                x0 = desc.realize(pd, part)
            else:
                n, i = desc
                x0 = dynamics.pole_preimage_tree(pd, n, part)[n - 1][i]
            try:
                outcome = _orbit_record(pd, part, x0, max_iter, tol,
                                        classify_depth)
                break
            except PrecisionError:
                rec["retries"] += 1
                continue
        if outcome is None:
            outcome = {"status": "undecided", "reason": "precision",
                       "steps": None, "final_norm_exp_to_1": None,
                       "final_norm_exp_exact": False, "itinerary": None}
            if classify_depth is not None:
                outcome["classification"] = "undecided"
                outcome["classification_step"] = None
        rec.update(outcome)
        records.append(rec)
        key = rec["status"]
        histogram[key] = histogram.get(key, 0) + 1
    report = {
        "version": __version__,
        "command": "sweep",
        "config": {**params.config_dict(), "samples": samples, "seed": seed,
                   "max_iter": max_iter, "tol": tol,
                   "classify_depth": classify_depth,
                   "pole_tree_depth": pole_tree_depth},
        "regime": regime.tag.value,
        "records": records,
        "histogram": dict(sorted(histogram.items())),
    }
    if classify_depth is not None:
        chist: dict[str, int] = {}
        for rec in records:
            key = rec.get("classification", "undecided")
            chist[key] = chist.get(key, 0) + 1
        report["classification_histogram"] = dict(sorted(chist.items()))
    return report


def orbit_report(params: MapParams, x0: Fraction, max_iter: int,
                 tol: int) -> dict:
    regime = classify_regime(params)
    part = (build_partition(params)
            if regime.tag in (RegimeTag.B1, RegimeTag.B2) else None)
    record = None
    retries = 0
    for factor, pd in _params_ladder(params):
        pp = (build_partition(pd)
              if regime.tag in (RegimeTag.B1, RegimeTag.B2) else None)
        try:
            record = _orbit_record(pd, pp, pd.embed(x0), max_iter, tol, None)
            break
        except PrecisionError:
            retries += 1
    if record is None:
        record = {"status": "undecided", "reason": "precision",
                  "steps": None, "final_norm_exp_to_1": None,
                  "final_norm_exp_exact": False, "itinerary": None}
    record["retries"] = retries
    return {
        "version": __version__,
        "command": "orbit",
        "config": {**params.config_dict(), "x0": str(x0),
                   "max_iter": max_iter, "tol": tol},
        "regime": regime.tag.value,
        "record": record,
    }


def _check(checks: list, name: str, passed: bool, detail) -> bool:
    checks.append({"name": name, "pass": bool(passed), "detail": detail})
    return bool(passed)


def julia_report(params: MapParams, depth: int, seed: int = 0,
                 pairs_per_ball: int = 50,
                 fixed_point_digits: int = 40,
                 periodic_digits: int = 30,
                 max_period: int = 4) -> dict:
    """Verify the expanding-regime structure up to ``depth``.

    Covers the partition geometry, the verified incidence matrix, word
    realization with round-trip itineraries, periodic points and their
    cycle multipliers, exact agreement of cylinder-point distances with
    the word metric, the two expansion laws, shift equivariance, and the
    first levels of the pole tree.  ``falsified`` is true if any check
    fails.
    """
    regime = classify_regime(params)
    checks: list[dict] = []
    ok = _check(checks, "regime_is_B", regime.tag in (RegimeTag.B1,
                                                      RegimeTag.B2),
                regime.tag.value)
    report = {
        "version": __version__,
        "command": "julia-verify",
        "config": {**params.config_dict(), "depth": depth, "seed": seed,
                   "pairs_per_ball": pairs_per_ball},
        "regime": regime.tag.value,
        "kappa": regime.kappa,
        "checks": checks,
    }
    if not ok:
        report["falsified"] = True
        return report

    part = build_partition(params)
    _check(checks, "taus_positive", all(t >= 1 for t in part.taus),
           list(part.taus))
    _check(checks, "pole_outside_cover",
           all(not b.ball.contains(params.pole) for b in part.balls), None)

    lam1 = multiplier(params, 1)
    _check(checks, "fixed_point_1_attractive",
           classify_fixed(lam1) == "attractive", int(lam1.valuation))

    if regime.tag is RegimeTag.B1:
        x_star = hensel.fixed_point_B1(params)
        resid = eval_f(params, x_star) - x_star
        bound, _ = _norm_exp_field(resid)
        _check(checks, "b1_fixed_point_residual",
               resid.is_zero_like and resid.val_lower_bound >=
               fixed_point_digits, bound)
        lam = multiplier(params, x_star)
        _check(checks, "b1_fixed_point_repelling",
               classify_fixed(lam) == "repelling", int(lam.valuation))

    try:
        matrix = dynamics.incidence_matrix(params, part, seed=seed)
        _check(checks, "incidence_all_ones",
               matrix.all_ones and matrix.is_irreducible(),
               [list(r) for r in matrix.entries])
    except VerificationError as exc:
        _check(checks, "incidence_all_ones", False, str(exc))
        matrix = None

    realized = 0
    roundtrip_ok = True
    words_total = 0
    for n in range(1, depth + 1):
        for word in itertools.product(range(1, part.kappa + 1), repeat=n):
            words_total += 1
            pt, _ = dynamics.cylinder_point(params, word, part)
            back = dynamics.itinerary_of(params, pt, n, part)
            if back.word == word:
                realized += 1
            else:
                roundtrip_ok = False
    _check(checks, "words_realized_roundtrip",
           roundtrip_ok and realized == words_total,
           {"realized": realized, "total": words_total})

    periodic_ok = True
    periodic_detail = []
    for m in range(1, min(max_period, max(depth, 1)) + 1):
        for word in itertools.product(range(1, part.kappa + 1), repeat=m):
            x = dynamics.periodic_point(params, word, part)
            z = x
            for _ in range(m):
                z = eval_f(params, z)
            drift = z - x
            good = drift.is_zero_like and drift.val_lower_bound >= \
                periodic_digits
            lam = dynamics.cycle_multiplier(params, x, m)
            tau_sum = sum(part.balls[s - 1].tau for s in word)
            good = good and lam.valuation == -tau_sum
            periodic_ok = periodic_ok and good
            periodic_detail.append({"word": list(word),
                                    "residual_exp": drift.val_lower_bound
                                    if drift.val_lower_bound != INF
                                    else "inf",
                                    "multiplier_exp": int(lam.valuation)})
    _check(checks, "periodic_points", periodic_ok, periodic_detail[:8])

    if depth >= 1:
        pts = {}
        for word in itertools.product(range(1, part.kappa + 1), repeat=depth):
            pts[word], _ = dynamics.cylinder_point(params, word, part)
        iso_ok = True
        mism = 0
        for wa, wb in itertools.combinations(pts, 2):
            dist = dynamics.norm_fraction(pts[wa] - pts[wb])
            metric = dynamics.df_metric(params, wa, wb, part)
            if dist != metric:
                iso_ok = False
                mism += 1
        _check(checks, "isometry_cylinder_vs_word_metric", iso_ok,
               {"pairs": len(pts) * (len(pts) - 1) // 2, "mismatches": mism})
    else:
        _check(checks, "isometry_cylinder_vs_word_metric", True,
               {"pairs": 0, "mismatches": 0})

    expansion = expansion_law_report(params, pairs_per_ball, seed, part)
    _check(checks, "expansion_laws", expansion["pass"], expansion["detail"])

    if depth >= 2:
        word = tuple((t % part.kappa) + 1 for t in range(depth))
        x, _ = dynamics.cylinder_point(params, word, part)
        full = dynamics.itinerary_of(params, x, depth, part)
        shifted = dynamics.itinerary_of(params, eval_f(params, x), depth - 1,
                                        part)
        _check(checks, "shift_equivariance",
               shifted.word == full.word[1:], list(full.word))
    else:
        _check(checks, "shift_equivariance", True, None)

    tree_depth = min(depth, 3) if part.kappa > 1 else min(depth, 5)
    levels = dynamics.pole_preimage_tree(params, tree_depth, part)
    _check(checks, "pole_tree_levels",
           [len(l) for l in levels] ==
           [part.kappa**n for n in range(1, tree_depth + 1)],
           [len(l) for l in levels])

    report["falsified"] = not all(c["pass"] for c in checks)
    return report


def expansion_law_report(params: MapParams, pairs_per_ball: int, seed: int,
                         partition=None) -> dict:
    """Sample pairs inside each partition ball and compare the exact jump
    of norm exponents under the map with the predicted constant:
    v(k)+v(theta-1)-v(q) on the ball at 1, v(q)+v(theta-1)-v(k) elsewhere."""
    part = partition if partition is not None else build_partition(params)
    detail = []
    all_ok = True
    for entry in part.balls:
        plan = sampling.ball_samples(params, entry.symbol, 2 * pairs_per_ball,
                                     seed, tag="expansion")
        failures = 0
        tested = 0
        for a, b in zip(plan[0::2], plan[1::2]):
            x = a.realize(params, part)
            y = b.realize(params, part)
            d = x - y
            if d.is_zero_like:
                continue
            tested += 1
            jump = (eval_f(params, x) - eval_f(params, y)).norm_exp() \
                - d.norm_exp()
            if jump != -entry.tau:
                failures += 1
        ok = failures == 0 and tested > 0
        all_ok = all_ok and ok
        detail.append({"symbol": entry.symbol, "tau": entry.tau,
                       "pairs": tested, "failures": failures})
    return {"pass": all_ok, "detail": detail}
