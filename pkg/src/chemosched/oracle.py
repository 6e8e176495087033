"""Reference solvers for small instances.

``brute_force`` walks every feasible schedule (depth-first, cutting branches
only when no completion can repair them), so its optimum is ground truth for
property tests.  ``bellman_solve`` runs the cost-to-go recursion

    C_k[S] = min( C_{k+1}[grow(S)], p + C_{k+1}[treat(S)] )

exactly over the forward-reachable set of log sizes, with no discretization;
states are whatever compositions of the two transitions produce from s_init.
Both are deliberately independent of the production solver.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

from .core import (
    DEDUP_DIGITS,
    InfeasibleInstanceError,
    LogDynamics,
    MinCost,
    MinMaxSize,
    ProblemSpec,
    Schedule,
    SizeGuardError,
    SolveReport,
    SpecError,
    band_tol,
    ensure_valid,
    infeasible_report,
    report_from_schedule,
    round_sig,
)

BRUTE_FORCE_GUARD = 2**24
BELLMAN_STATE_GUARD = 2**22

_INF = math.inf


def _value_tol(value: float) -> float:
    return 1e-9 * max(1.0, abs(value))


def brute_force(spec: ProblemSpec, objective) -> SolveReport:
    """Enumerate all schedules and return the optimum plus the optimum count.

    Branches are cut only when provably unrepairable: a band violation at an
    already-tracked index, a blown budget, or a cost/max already worse than
    the incumbent beyond tolerance (ties are always kept so the count of
    optima stays exact).
    """
    ensure_valid(spec)
    n_choices = spec.n_treatments + 1
    if n_choices**spec.K > BRUTE_FORCE_GUARD:
        raise SizeGuardError(
            f"{n_choices}**{spec.K} schedules exceed the enumeration guard {BRUTE_FORCE_GUARD}"
        )
    tracking_max = isinstance(objective, MinMaxSize)
    if not tracking_max and not isinstance(objective, MinCost):
        raise SpecError(f"unknown objective {objective!r}")

    dyn = LogDynamics(spec)
    start = time.perf_counter()
    nodes = 0

    ls_init = spec.log_s_init
    if not dyn.within_band(ls_init):
        return infeasible_report(1, 0, time.perf_counter() - start, "brute-force")

    budget = objective.budget if tracking_max else None
    budget_tol = _value_tol(budget) if budget is not None else 0.0

    best_value = _INF
    best_schedule: Optional[tuple[Optional[int], ...]] = None
    optima = 0
    prefix: list[Optional[int]] = []

    treatment_ids = [t.id for t in spec.treatments]
    costs = {t.id: t.cost for t in spec.treatments}

    def record(cost: float, max_ls: float) -> None:
        nonlocal best_value, best_schedule, optima
        value = cost if not tracking_max else max_ls
        if value < best_value - _value_tol(best_value if best_value < _INF else value):
            best_value = value
            best_schedule = tuple(prefix)
            optima = 1
        elif best_value < _INF and abs(value - best_value) <= _value_tol(best_value):
            optima += 1

    def recurse(k: int, ls: float, cost: float, max_ls: float, cooldown: int) -> None:
        nonlocal nodes
        nodes += 1
        if k > spec.K:
            record(cost, max_ls)
            return
        # Incumbent cut: both objectives only worsen along a branch.
        if not tracking_max and best_value < _INF and cost > best_value + _value_tol(best_value):
            return
        if tracking_max and best_value < _INF and max_ls > best_value + band_tol(best_value):
            return

        decisions: list[Optional[int]] = []
        if k not in spec.forced_periods:
            decisions.append(None)
        if cooldown == 0:
            decisions.extend(treatment_ids)
        for choice in decisions:
            nxt = dyn.step(ls, choice)
            checked = k + 1 <= spec.n_tracked
            if checked and (dyn.below_floor(nxt) or dyn.above_ceiling(nxt)):
                continue
            new_cost = cost + costs[choice] if choice is not None else cost
            if budget is not None and new_cost > budget + budget_tol:
                continue
            new_max = max(max_ls, nxt) if checked else max_ls
            new_cd = spec.spacing_delta if choice is not None else max(cooldown - 1, 0)
            prefix.append(choice)
            recurse(k + 1, nxt, new_cost, new_max, new_cd)
            prefix.pop()

    recurse(1, ls_init, 0.0, ls_init, 0)
    elapsed = time.perf_counter() - start

    if best_schedule is None:
        return infeasible_report(nodes, 0, elapsed, "brute-force")

    schedule = Schedule(choices=best_schedule)
    value = (
        schedule.cost(spec)
        if not tracking_max
        else math.exp(best_value)
    )
    return report_from_schedule(
        spec,
        schedule,
        objective_value=value,
        alternates=optima,
        labels_explored=nodes,
        labels_pruned=0,
        wall_time_s=elapsed,
        engine="brute-force",
    )


# ---------------------------------------------------------------------------
# Cost-to-go recursion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValueTable:
    """Per period, the reachable log sizes with their minimum remaining cost."""

    periods: tuple[tuple[tuple[float, float], ...], ...]  # periods[k-1] = ((ls, cost), ...)

    def entries(self, k: int) -> tuple[tuple[float, float], ...]:
        return self.periods[k - 1]

    @property
    def state_count(self) -> int:
        return sum(len(p) for p in self.periods)


def bellman_solve(spec: ProblemSpec, objective=MinCost()) -> tuple[SolveReport, ValueTable]:
    """Minimum-cost recursion over the exact forward-reachable state set.

    Single-treatment instances without a spacing constraint only; states are
    deduplicated on the log size rounded to 12 significant digits because
    different action orders can produce bitwise-unequal floats for the same
    mathematical size.
    """
    ensure_valid(spec)
    if not isinstance(objective, MinCost):
        raise SpecError("the cost-to-go recursion only supports the min-cost objective")
    if spec.n_treatments != 1:
        raise SpecError("the cost-to-go recursion requires a single-treatment menu")
    if spec.spacing_delta != 0:
        raise SpecError("the cost-to-go recursion does not support spacing constraints")

    t = spec.treatments[0]
    dyn = LogDynamics(spec)
    start = time.perf_counter()

    ls_init = spec.log_s_init
    if not dyn.within_band(ls_init):
        return (
            infeasible_report(1, 0, time.perf_counter() - start, "bellman"),
            ValueTable(periods=((),)),
        )

    # Forward reachability: states[k] maps rounded log size -> exact log size
    # of the first path that reached it.
    states: list[dict[float, float]] = [dict() for _ in range(spec.K + 1)]
    states[0][round_sig(ls_init)] = ls_init
    total_states = 1
    for k in range(1, spec.K + 1):
        for ls in states[k - 1].values():
            for choice in _allowed(spec, k):
                nxt = dyn.step(ls, choice)
                if k + 1 <= spec.n_tracked and (
                    dyn.below_floor(nxt) or dyn.above_ceiling(nxt)
                ):
                    continue
                key = round_sig(nxt)
                if key not in states[k]:
                    states[k][key] = nxt
                    total_states += 1
                    if total_states > BELLMAN_STATE_GUARD:
                        raise SizeGuardError(
                            f"reachable state set exceeds {BELLMAN_STATE_GUARD} states"
                        )

    # Backward pass.  value[k] maps the rounded state key at the start of
    # period k+1 (0-based layer k) to the minimum remaining cost.
    value: list[dict[float, float]] = [dict() for _ in range(spec.K + 1)]
    for key in states[spec.K]:
        value[spec.K][key] = 0.0
    for k in range(spec.K, 0, -1):
        layer = value[k - 1]
        for key, ls in states[k - 1].items():
            best = _INF
            for choice in _allowed(spec, k):
                nxt = dyn.step(ls, choice)
                if k + 1 <= spec.n_tracked and (
                    dyn.below_floor(nxt) or dyn.above_ceiling(nxt)
                ):
                    continue
                child_value = value[k].get(round_sig(nxt))
                if child_value is None:
                    continue
                cand = child_value + (t.cost if choice is not None else 0.0)
                if cand < best:
                    best = cand
            layer[key] = best

    table = ValueTable(
        periods=tuple(
            tuple(sorted((ls, value[k][key]) for key, ls in states[k].items()))
            for k in range(spec.K)
        )
    )

    optimal = value[0][round_sig(ls_init)]
    elapsed = time.perf_counter() - start
    if not math.isfinite(optimal):
        return infeasible_report(total_states, 0, elapsed, "bellman"), table

    # Greedy forward reconstruction, preferring no treatment on ties.
    _UNSET = object()
    choices: list[Optional[int]] = []
    ls = ls_init
    for k in range(1, spec.K + 1):
        here = value[k - 1][round_sig(ls)]
        picked: object = _UNSET
        for choice in _allowed(spec, k):
            nxt = dyn.step(ls, choice)
            if k + 1 <= spec.n_tracked and (
                dyn.below_floor(nxt) or dyn.above_ceiling(nxt)
            ):
                continue
            child_value = value[k].get(round_sig(nxt))
            if child_value is None or not math.isfinite(child_value):
                continue
            step_cost = t.cost if choice is not None else 0.0
            if child_value + step_cost <= here + _value_tol(here):
                picked = choice
                break
        if picked is _UNSET:
            raise InfeasibleInstanceError(
                f"reconstruction dead-ends at period {k}", period=k
            )
        choices.append(picked)  # type: ignore[arg-type]
        ls = dyn.step(ls, picked)  # type: ignore[arg-type]

    schedule = Schedule(choices=tuple(choices))
    report = report_from_schedule(
        spec,
        schedule,
        objective_value=schedule.cost(spec),
        alternates=1,
        labels_explored=total_states,
        labels_pruned=0,
        wall_time_s=elapsed,
        engine="bellman",
    )
    return report, table


def _allowed(spec: ProblemSpec, k: int) -> list[Optional[int]]:
    out: list[Optional[int]] = []
    if k not in spec.forced_periods:
        out.append(None)
    out.extend(t.id for t in spec.treatments)
    return out
