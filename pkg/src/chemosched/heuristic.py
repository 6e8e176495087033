"""Threshold policy and the condition certifying its optimality.

The policy treats at the start of period k exactly when the current size
exceeds the threshold at which one period of untreated growth would leave the
tolerated band.  When growing-then-treating never ends above treating-then-
growing (which for this family of dynamics reduces to ``beta <= 1``), the
policy is provably cost-optimal for single-treatment instances without
spacing or forced-period constraints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    GrowthLaw,
    InfeasibleInstanceError,
    InternalConsistencyError,
    LogDynamics,
    ProblemSpec,
    Schedule,
    SpecError,
    Trajectory,
    band_tol,
    ensure_valid,
    grow,
    simulate,
    treat,
)

COMMUTATION_SAMPLES = 100
COMMUTATION_RTOL = 1e-9


@dataclass(frozen=True)
class HeuristicResult:
    threshold: float
    schedule: Schedule
    trajectory: Trajectory
    cost: float
    optimality_certified: bool


def threshold(spec: ProblemSpec) -> float:
    """Size at which one untreated period lands exactly on s_tol.

    Unique solution of ``grow(s) = s_tol``: ``(s_tol / alpha) ** (1 / beta)``.
    """
    return math.exp(log_threshold(spec))


def log_threshold(spec: ProblemSpec) -> float:
    return (spec.log_s_tol - spec.growth.log_alpha) / spec.growth.beta


def commutation_check(law: GrowthLaw, rf: float) -> bool:
    """Whether treating later never gives a larger size than treating earlier.

    Analytically this is ``(1 - rf) <= (1 - rf) ** beta``, which holds exactly
    when ``beta <= 1``; beta values above 1 flip the inequality.  Accepts the
    raw coefficients so the flipped case can be probed even though GrowthLaw
    construction rejects it.
    """
    if not 0.0 < rf < 1.0:
        raise ValueError(f"reduction factor must lie in (0, 1), got {rf}")
    log_retention = math.log1p(-rf)
    return log_retention <= law.beta * log_retention


def commutation_holds(spec: ProblemSpec) -> dict[int, bool]:
    """Per-treatment flag for the optimality condition of the threshold policy.

    The analytic verdict is spot-checked numerically at sizes spanning the
    band; a disagreement means the two computations of the same inequality
    have diverged and is raised as an internal error.
    """
    law = spec.growth
    out: dict[int, bool] = {}
    for t in spec.treatments:
        analytic = commutation_check(law, t.reduction)
        lo, hi = math.log(spec.s_min), math.log(spec.s_tol)
        for i in range(COMMUTATION_SAMPLES):
            s = math.exp(lo + (hi - lo) * i / (COMMUTATION_SAMPLES - 1))
            late = treat(grow(s, law), law, t.reduction)
            early = grow(treat(s, law, t.reduction), law)
            scale = max(abs(late), abs(early), 1.0)
            numeric = late <= early + COMMUTATION_RTOL * scale
            if numeric != analytic:
                raise InternalConsistencyError(
                    f"commutation check disagrees at s={s!r} for treatment {t.id}: "
                    f"analytic={analytic}, numeric ordering {late!r} vs {early!r}"
                )
        out[t.id] = analytic
    return out


def heuristic_schedule(spec: ProblemSpec) -> HeuristicResult:
    """Run the threshold policy forward and price the resulting schedule.

    Only defined for a single-treatment menu with no spacing constraint and
    no forced periods; the optimality proof does not cover the extensions, so
    they are refused rather than guessed at.
    """
    ensure_valid(spec)
    if spec.n_treatments != 1:
        raise SpecError(
            f"threshold policy requires a single-treatment menu, got {spec.n_treatments}"
        )
    if spec.spacing_delta != 0:
        raise SpecError("threshold policy does not support spacing constraints")
    if spec.forced_periods:
        raise SpecError("threshold policy does not support forced periods")

    t = spec.treatments[0]
    dyn = LogDynamics(spec)
    ls_bar = log_threshold(spec)
    tol = band_tol(ls_bar)

    choices: list[int | None] = []
    ls = spec.log_s_init
    for k in range(1, spec.K + 1):
        # Strict policy: a size exactly on the threshold is left untreated.
        if ls > ls_bar + tol:
            nxt = dyn.step(ls, t.id)
            if dyn.above_ceiling(nxt):
                raise InfeasibleInstanceError(
                    f"treating at period {k} still leaves the next size above "
                    f"s_tol ({math.exp(nxt):.6g} > {spec.s_tol})",
                    period=k,
                )
            if dyn.below_floor(nxt):
                raise InfeasibleInstanceError(
                    f"treatment required at period {k} would undershoot s_min "
                    f"({math.exp(nxt):.6g} < {spec.s_min})",
                    period=k,
                )
            choices.append(t.id)
            ls = nxt
        else:
            choices.append(None)
            ls = dyn.step(ls, None)

    schedule = Schedule(choices=tuple(choices))
    trajectory, feas = simulate(spec, schedule)
    if not feas.feasible:
        first = feas.violations[0]
        raise InfeasibleInstanceError(
            f"threshold policy produced a band violation at period {first.period}",
            period=first.period,
        )
    certified = all(commutation_holds(spec).values())
    return HeuristicResult(
        threshold=threshold(spec),
        schedule=schedule,
        trajectory=trajectory,
        cost=t.cost * len(schedule.treated_periods),
        optimality_certified=certified,
    )
