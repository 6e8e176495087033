"""Exact solver for all program variants at full horizon length.

The log size at any period is a deterministic function of the decisions taken
so far, so the search space is a layered graph swept forward one period at a
time.  Each partial schedule is compressed into a label

    (cost so far, current log size, running max log size, spacing cooldown)

and a label is discarded when another label in the same period is at least as
good in every component: a larger current size can never help later (the
dynamics and the cost-to-go are monotone in size), so the pruned label has no
completion beating the keeper's.  The running max component participates only
under the min-max objective.  Terminal labels then carry provably optimal
values for both objectives.

Minimum-cost instances usually admit several optimal schedules.  The one
returned is the one whose reconstruction path survived pruning, with ties
broken lexicographically by the per-period decision order (no treatment
first, then treatments in menu order); reports carry the count of
undominated terminal labels so alternates are never hidden.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Optional

from .core import (
    InternalConsistencyError,
    LogDynamics,
    MinCost,
    MinMaxSize,
    ProblemSpec,
    Schedule,
    SolveReport,
    SpecError,
    ensure_valid,
    infeasible_report,
    report_from_schedule,
    round_sig,
)

LS_TOL = 1e-9  # dominance tolerance on log-size components

PROGRAMS = ("p1", "p2", "p3")


@dataclass(frozen=True)
class Label:
    """Search state after deciding periods 1..period-1."""

    period: int
    cost: float
    ls: float
    ls_max: float
    cooldown: int
    parent: Optional["Label"] = None
    decision: Optional[int] = None  # decision that produced this label

    def sort_key(self) -> tuple:
        return (self.cost, self.ls, self.ls_max, self.cooldown)


def _cost_tol(cost: float) -> float:
    return 1e-9 * max(1.0, abs(cost))


def dominates(a: Label, b: Label, tracking_max: bool) -> bool:
    """Componentwise 'at least as good, strictly better somewhere' test.

    Log-size components compare with an absolute 1e-9 tolerance; differences
    inside the tolerance count as equal.
    """
    if a.period != b.period:
        raise InternalConsistencyError(
            f"cannot compare labels of periods {a.period} and {b.period}"
        )
    ct = _cost_tol(max(abs(a.cost), abs(b.cost)))
    le_cost = a.cost <= b.cost + ct
    le_ls = a.ls <= b.ls + LS_TOL
    le_cd = a.cooldown <= b.cooldown
    le_max = (not tracking_max) or a.ls_max <= b.ls_max + LS_TOL
    if not (le_cost and le_ls and le_cd and le_max):
        return False
    strict = (
        a.cost < b.cost - ct
        or a.ls < b.ls - LS_TOL
        or a.cooldown < b.cooldown
        or (tracking_max and a.ls_max < b.ls_max - LS_TOL)
    )
    return strict


def _weakly_dominates(a: Label, b: Label, tracking_max: bool) -> bool:
    """Like dominates() but without the strictness requirement.

    Used inside the sweep so that of two labels equal within tolerance only
    the first-processed representative is kept.
    """
    ct = _cost_tol(max(abs(a.cost), abs(b.cost)))
    return (
        a.cost <= b.cost + ct
        and a.ls <= b.ls + LS_TOL
        and a.cooldown <= b.cooldown
        and ((not tracking_max) or a.ls_max <= b.ls_max + LS_TOL)
    )


def _prune(candidates: list[Label], tracking_max: bool) -> tuple[list[Label], int]:
    """Deduplicate, then keep the Pareto-undominated labels.

    Candidates arrive in preference order (cheaper parents first, preferred
    decisions first); deduplication at 12 significant digits keeps the first
    representative of each state, which fixes the schedule returned among
    equal-objective optima.  Returns the kept labels sorted by
    (cost, ls, ls_max, cooldown) and the number pruned.
    """
    seen: dict[tuple, Label] = {}
    for lab in candidates:
        key = (
            round_sig(lab.cost),
            round_sig(lab.ls),
            round_sig(lab.ls_max) if tracking_max else 0.0,
            lab.cooldown,
        )
        if key not in seen:
            seen[key] = lab
    unique = sorted(seen.values(), key=Label.sort_key)

    kept: list[Label] = []
    # Grouped by cooldown so most comparisons stay within short lists.
    by_cd: dict[int, list[Label]] = {}
    for lab in unique:
        dominated = False
        for cd, group in by_cd.items():
            if cd > lab.cooldown:
                continue
            for other in group:
                if other.cost > lab.cost + _cost_tol(lab.cost):
                    break  # groups stay cost-sorted; nothing later can dominate
                if _weakly_dominates(other, lab, tracking_max):
                    dominated = True
                    break
            if dominated:
                break
        if not dominated:
            kept.append(lab)
            by_cd.setdefault(lab.cooldown, []).append(lab)
    return kept, len(candidates) - len(kept)


def check_program(spec: ProblemSpec, program: str) -> None:
    """Validate that the instance fits the selected program family."""
    if program not in PROGRAMS:
        raise SpecError(f"unknown program {program!r}, expected one of {PROGRAMS}")
    if program == "p1":
        if spec.n_treatments != 1:
            raise SpecError("p1 requires a single-treatment menu")
        if spec.spacing_delta != 0:
            raise SpecError("p1 does not take a spacing constraint; use p3")
    elif program == "p2":
        if spec.spacing_delta != 0:
            raise SpecError("p2 does not take a spacing constraint")
    elif program == "p3":
        if spec.n_treatments != 1:
            raise SpecError("p3 requires a single-treatment menu")
        if spec.spacing_delta < 1:
            raise SpecError("p3 requires a spacing constraint delta >= 1")


def solve(
    spec: ProblemSpec,
    program: str,
    objective,
    *,
    keep_dominated: bool = False,
) -> SolveReport:
    """Provably optimal schedule for the given program and objective.

    ``keep_dominated`` disables pruning and deduplication (labels grow
    exponentially; only sensible on small instances, where it serves as a
    soundness check on the dominance rule).
    """
    ensure_valid(spec)
    check_program(spec, program)
    tracking_max = isinstance(objective, MinMaxSize)
    if not tracking_max and not isinstance(objective, MinCost):
        raise SpecError(f"unknown objective {objective!r}")

    dyn = LogDynamics(spec)
    start = time.perf_counter()
    explored = 0
    pruned = 0

    ls_init = spec.log_s_init
    if not dyn.within_band(ls_init):
        return infeasible_report(0, 0, time.perf_counter() - start, "dp")

    budget = objective.budget if tracking_max else None
    budget_tol = _cost_tol(budget) if budget is not None else 0.0
    costs = {t.id: t.cost for t in spec.treatments}
    treatment_ids = [t.id for t in spec.treatments]

    layer = [
        Label(period=1, cost=0.0, ls=ls_init, ls_max=ls_init if tracking_max else 0.0, cooldown=0)
    ]
    for k in range(1, spec.K + 1):
        candidates: list[Label] = []
        forced = k in spec.forced_periods
        checked = k + 1 <= spec.n_tracked
        for lab in layer:
            decisions: list[Optional[int]] = []
            if not forced:
                decisions.append(None)
            if lab.cooldown == 0:
                decisions.extend(treatment_ids)
            for choice in decisions:
                nxt = dyn.step(lab.ls, choice)
                if checked and (dyn.below_floor(nxt) or dyn.above_ceiling(nxt)):
                    continue
                cost = lab.cost + costs[choice] if choice is not None else lab.cost
                if budget is not None and cost > budget + budget_tol:
                    continue
                ls_max = lab.ls_max
                if tracking_max and checked:
                    ls_max = max(ls_max, nxt)
                cooldown = spec.spacing_delta if choice is not None else max(lab.cooldown - 1, 0)
                candidates.append(
                    Label(
                        period=k + 1,
                        cost=cost,
                        ls=nxt,
                        ls_max=ls_max,
                        cooldown=cooldown,
                        parent=lab,
                        decision=choice,
                    )
                )
        explored += len(candidates)
        if keep_dominated:
            layer = candidates
        else:
            layer, cut = _prune(candidates, tracking_max)
            pruned += cut
        if not layer:
            return infeasible_report(explored, pruned, time.perf_counter() - start, "dp")

    if tracking_max:
        best = min(lab.ls_max for lab in layer)
        optimal = [lab for lab in layer if lab.ls_max <= best + LS_TOL]
        winner = min(optimal, key=lambda lab: (lab.ls_max, lab.cost, lab.ls))
    else:
        best = min(lab.cost for lab in layer)
        optimal = [lab for lab in layer if lab.cost <= best + _cost_tol(best)]
        winner = min(optimal, key=lambda lab: (lab.cost, lab.ls))

    schedule = _reconstruct(winner, spec.K)
    elapsed = time.perf_counter() - start

    if tracking_max:
        value = math.exp(winner.ls_max)
    else:
        value = schedule.cost(spec)
        if abs(value - winner.cost) > _cost_tol(value):
            raise InternalConsistencyError(
                f"label cost {winner.cost!r} disagrees with schedule cost {value!r}"
            )
    report = report_from_schedule(
        spec,
        schedule,
        objective_value=value,
        alternates=len(optimal),
        labels_explored=explored,
        labels_pruned=pruned,
        wall_time_s=elapsed,
        engine="dp",
    )
    if tracking_max:
        resim = report.trajectory.max_log_size(spec.include_terminal)
        if abs(resim - winner.ls_max) > LS_TOL * max(1.0, abs(resim)):
            raise InternalConsistencyError(
                f"label max {winner.ls_max!r} disagrees with re-simulated max {resim!r}"
            )
        # Report the re-simulated value so the objective matches the
        # trajectory bit for bit.
        report = _with_objective(report, math.exp(resim))
    return report


def _with_objective(report: SolveReport, value: float) -> SolveReport:
    return replace(report, objective_value=value)


def _reconstruct(label: Label, K: int) -> Schedule:
    choices: list[Optional[int]] = []
    lab: Optional[Label] = label
    while lab is not None and lab.parent is not None:
        choices.append(lab.decision)
        lab = lab.parent
    choices.reverse()
    if len(choices) != K:
        raise InternalConsistencyError(
            f"reconstructed schedule has length {len(choices)}, expected {K}"
        )
    return Schedule(choices=tuple(choices))


@dataclass(frozen=True)
class SweepEntry:
    budget: float
    status: str
    max_size: Optional[float]


def sweep_budget(
    spec: ProblemSpec, program: str, budgets: list[float]
) -> list[SweepEntry]:
    """Solve the min-max objective for each budget in ascending order.

    Budgets are independent solves; an infeasible budget yields an infeasible
    entry without aborting the rest.  Because a larger budget only enlarges
    the feasible set, the returned max sizes are nonincreasing.
    """
    if list(budgets) != sorted(budgets):
        raise SpecError("budgets must be sorted ascending")
    out: list[SweepEntry] = []
    for c in budgets:
        report = solve(spec, program, MinMaxSize(budget=c))
        out.append(
            SweepEntry(budget=c, status=report.status, max_size=report.max_size)
        )
    return out
