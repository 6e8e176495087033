"""Explicit mixed-integer linear models for every program variant.

Builders turn an instance into a variable/constraint/objective structure that
mirrors the log-linear recurrence exactly: one binary per period (or per
period and treatment), one bounded continuous log-size variable per tracked
index, the fixing constraint for the initial size, and one recurrence row per
later index.  The structures exist for export: ``export_lp`` writes the
industry-standard LP text format so any external MILP solver can cross-check
the built-in optimizer, and ``parse_lp`` reads that text back for structural
round-trip checks.  No external solver is invoked at runtime.

In floor mode the recurrence becomes an equality with a max on the right-hand
side.  The in-memory constraint keeps the max form (flagged nonlinear);
export linearizes it with one auxiliary binary per period and big-M equal to
the band width in log space.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from typing import Optional

from .core import (
    Diagnostic,
    ProblemSpec,
    Schedule,
    SpecError,
    band_tol,
    ensure_valid,
    validate_schedule,
)


class ModelBuildError(SpecError):
    """Instance handed to a builder it is not compatible with."""


@dataclass(frozen=True)
class VarDef:
    name: str
    kind: str  # "binary" or "continuous"
    lb: float = -math.inf
    ub: float = math.inf


@dataclass(frozen=True)
class Constraint:
    """One linear row: sum of coef*var terms, comparator, constant.

    ``floor`` marks the max-equality form used in floor mode: the row then
    reads  (terms) = max-free-part  with the left side clamped from below at
    ``floor`` after moving everything but the defined variable to the right.
    """

    name: str
    terms: tuple[tuple[float, str], ...]
    sense: str  # "=", "<=" or ">="
    rhs: float
    kind: str  # "init", "recurrence", "choice", "spacing", "forced", "budget", "maxlink"
    floor: Optional[float] = None

    @property
    def is_max_equality(self) -> bool:
        return self.floor is not None


@dataclass(frozen=True)
class MilpModel:
    name: str
    program: str
    K: int
    include_terminal: bool
    treatment_ids: tuple[int, ...]
    variables: tuple[VarDef, ...]
    constraints: tuple[Constraint, ...]
    objective: tuple[tuple[float, str], ...]
    sense: str = "min"
    budget: Optional[float] = None
    diagnostics: tuple[Diagnostic, ...] = ()

    @property
    def binaries(self) -> tuple[VarDef, ...]:
        return tuple(v for v in self.variables if v.kind == "binary")

    @property
    def continuous(self) -> tuple[VarDef, ...]:
        return tuple(v for v in self.variables if v.kind == "continuous")

    def constraints_of(self, kind: str) -> tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if c.kind == kind)

    def variable(self, name: str) -> VarDef:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    def recurrence_coefficients(self, k: int) -> dict:
        """Defining-form coefficients of the recurrence for LS_k.

        Returns the constant (log alpha), the coefficient on the previous log
        size (beta), and the coefficient on each binary (log retention), i.e.
        the row rewritten as  LS_k = const + prev*LS_{k-1} + sum coef*X.
        """
        row = next(c for c in self.constraints if c.name == f"rec_{k}")
        const = row.rhs
        prev = None
        binaries = {}
        for coef, var in row.terms:
            if var == f"LS_{k}":
                continue
            if var == f"LS_{k - 1}":
                prev = -coef
            else:
                binaries[var] = -coef
        return {"const": const, "prev": prev, "binaries": binaries}


def _binary_name(k: int, treatment_id: Optional[int], multi: bool) -> str:
    return f"X_{k}_{treatment_id}" if multi else f"X_{k}"


def _base_model(spec: ProblemSpec, program: str, multi: bool) -> MilpModel:
    ensure_valid(spec)
    K = spec.K
    n_ls = spec.n_tracked
    lb, ub = spec.log_s_min, spec.log_s_tol
    log_alpha = spec.growth.log_alpha
    beta = spec.growth.beta
    floor = lb if spec.floor_mode else None

    variables: list[VarDef] = []
    for k in range(1, K + 1):
        if multi:
            variables.extend(
                VarDef(_binary_name(k, t.id, True), "binary", 0.0, 1.0)
                for t in spec.treatments
            )
        else:
            variables.append(VarDef(_binary_name(k, None, False), "binary", 0.0, 1.0))
    for k in range(1, n_ls + 1):
        variables.append(VarDef(f"LS_{k}", "continuous", lb, ub))

    constraints: list[Constraint] = [
        Constraint("init", ((1.0, "LS_1"),), "=", spec.log_s_init, "init")
    ]
    for k in range(2, n_ls + 1):
        terms: list[tuple[float, str]] = [(1.0, f"LS_{k}"), (-beta, f"LS_{k - 1}")]
        for t in spec.treatments:
            terms.append((-t.log_retention, _binary_name(k - 1, t.id if multi else None, multi)))
        constraints.append(
            Constraint(f"rec_{k}", tuple(terms), "=", log_alpha, "recurrence", floor=floor)
        )

    if multi:
        # The per-treatment linearization of the recurrence is valid only when
        # at most one dose is given per period, so the choice rows are emitted
        # unconditionally.
        for k in range(1, K + 1):
            terms = tuple((1.0, _binary_name(k, t.id, True)) for t in spec.treatments)
            constraints.append(Constraint(f"choice_{k}", terms, "<=", 1.0, "choice"))

    for k in sorted(spec.forced_periods):
        if multi:
            terms = tuple((1.0, _binary_name(k, t.id, True)) for t in spec.treatments)
        else:
            terms = ((1.0, _binary_name(k, None, False)),)
        constraints.append(Constraint(f"forced_{k}", terms, "=", 1.0, "forced"))

    if multi:
        objective = tuple(
            (t.cost, _binary_name(k, t.id, True))
            for k in range(1, K + 1)
            for t in spec.treatments
        )
    else:
        cost = spec.treatments[0].cost
        objective = tuple((cost, _binary_name(k, None, False)) for k in range(1, K + 1))

    diagnostics: list[Diagnostic] = []
    if spec.floor_mode:
        # Export uses big-M equal to the band width; flag data for which a
        # clamped-from-far-below treated size would need a larger constant.
        min_retention = min(t.log_retention for t in spec.treatments)
        needed = (1.0 - beta) * lb - log_alpha - min_retention
        if needed > ub - lb:
            diagnostics.append(
                Diagnostic(
                    "warning",
                    "floor-big-m",
                    f"band-width big-M {ub - lb:.6g} is smaller than the "
                    f"{needed:.6g} required by the strongest treatment; the "
                    f"exported linearization may cut clamped solutions",
                )
            )

    return MilpModel(
        name=f"{program}_{'gompertz' if beta < 1.0 else 'exponential'}_K{K}",
        program=program,
        K=K,
        include_terminal=spec.include_terminal,
        treatment_ids=tuple(t.id for t in spec.treatments),
        variables=tuple(variables),
        constraints=tuple(constraints),
        objective=objective,
        diagnostics=tuple(diagnostics),
    )


def build_p1(spec: ProblemSpec) -> MilpModel:
    """Min-cost model with a single treatment and no spacing constraint."""
    if spec.n_treatments != 1:
        raise ModelBuildError("p1 takes a single-treatment menu; use build_p2")
    if spec.spacing_delta != 0:
        raise ModelBuildError("p1 takes no spacing constraint; use build_p3")
    return _base_model(spec, "p1", multi=False)


def build_p2(spec: ProblemSpec) -> MilpModel:
    """Min-cost model with a treatment menu and at most one dose per period."""
    if spec.spacing_delta != 0:
        raise ModelBuildError("p2 takes no spacing constraint")
    return _base_model(spec, "p2", multi=True)


def build_p3(spec: ProblemSpec) -> MilpModel:
    """Min-cost model with a single treatment and mandatory spacing.

    After a treated period k the next ``delta`` periods are treatment-free:
    X_{k+1} + ... + X_{k+delta} <= delta * (1 - X_k) for k = 1..K-delta.
    """
    if spec.n_treatments != 1:
        raise ModelBuildError("p3 takes a single-treatment menu")
    if spec.spacing_delta < 1:
        raise ModelBuildError("p3 requires spacing_delta >= 1")
    base = _base_model(spec, "p3", multi=False)

    delta = spec.spacing_delta
    constraints = list(base.constraints)
    for k in range(1, spec.K - delta + 1):
        terms = [(1.0, f"X_{j}") for j in range(k + 1, k + delta + 1)]
        terms.append((float(delta), f"X_{k}"))
        constraints.append(
            Constraint(f"spacing_{k}", tuple(terms), "<=", float(delta), "spacing")
        )

    diagnostics = list(base.diagnostics)
    if delta >= spec.K:
        diagnostics.append(
            Diagnostic(
                "warning",
                "spacing-saturates",
                f"delta={delta} >= K={spec.K}: at most one treatment is possible",
            )
        )
    return _replace_model(base, constraints=tuple(constraints), diagnostics=tuple(diagnostics))


def build_pi(spec: ProblemSpec, base: str, budget: float) -> MilpModel:
    """Min-max-size variant of a base program under a treatment budget.

    Replaces the cost objective by a single continuous variable bounding
    every tracked log size from above, and adds the budget row; the optimal
    maximum size is e to the optimal objective value.
    """
    if not (budget >= 0.0 and math.isfinite(budget)):
        raise ModelBuildError(f"budget must be nonnegative, got {budget}")
    builder = {"p1": build_p1, "p2": build_p2, "p3": build_p3}.get(base)
    if builder is None:
        raise ModelBuildError(f"unknown base program {base!r}")
    model = builder(spec)

    variables = list(model.variables) + [VarDef("LSmax", "continuous")]
    constraints = list(model.constraints)
    n_ls = spec.n_tracked
    for k in range(1, n_ls + 1):
        constraints.append(
            Constraint(
                f"maxlink_{k}", ((1.0, "LSmax"), (-1.0, f"LS_{k}")), ">=", 0.0, "maxlink"
            )
        )
    constraints.append(Constraint("budget", model.objective, "<=", budget, "budget"))

    return MilpModel(
        name=f"pi_{model.name}",
        program=f"pi_{base}",
        K=model.K,
        include_terminal=model.include_terminal,
        treatment_ids=model.treatment_ids,
        variables=tuple(variables),
        constraints=tuple(constraints),
        objective=((1.0, "LSmax"),),
        budget=budget,
        diagnostics=model.diagnostics,
    )


def _replace_model(model: MilpModel, **kwargs) -> MilpModel:
    return replace(model, **kwargs)


# ---------------------------------------------------------------------------
# LP text format
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _fmt_terms(terms: tuple[tuple[float, str], ...]) -> str:
    parts: list[str] = []
    for i, (coef, var) in enumerate(terms):
        if i == 0:
            parts.append(f"{_fmt(coef)} {var}" if coef >= 0 else f"- {_fmt(-coef)} {var}")
        elif coef >= 0:
            parts.append(f"+ {_fmt(coef)} {var}")
        else:
            parts.append(f"- {_fmt(-coef)} {var}")
    return " ".join(parts)


def export_lp(model: MilpModel) -> str:
    """Write the model in LP text format.

    Sections: objective, Subject To, Bounds, Binaries.  Coefficients carry 17
    significant digits so a round trip through an external solver preserves
    the exact doubles.  Max-equality recurrences (floor mode) are linearized
    here with one auxiliary binary per affected row.
    """
    lines = [f"\\ {model.name}", "Minimize"]
    lines.append(f" obj: {_fmt_terms(model.objective)}")
    lines.append("Subject To")

    aux_binaries: list[str] = []
    band_m = None
    if any(c.is_max_equality for c in model.constraints):
        ls1 = model.variable("LS_1")
        band_m = ls1.ub - ls1.lb

    for c in model.constraints:
        if not c.is_max_equality:
            lines.append(f" {c.name}: {_fmt_terms(c.terms)} {c.sense} {_fmt(c.rhs)}")
            continue
        # LS_k = max(expr, floor) with expr carried by the canonical terms:
        #   LS_k >= expr
        #   LS_k <= expr + M z      (z = 1 when the floor clamps)
        #   LS_k <= floor + M (1-z)
        # LS_k >= floor is already the variable's lower bound.
        z = f"Z_{c.name}"
        aux_binaries.append(z)
        lines.append(f" {c.name}_ge: {_fmt_terms(c.terms)} >= {_fmt(c.rhs)}")
        lines.append(
            f" {c.name}_ub_expr: {_fmt_terms(c.terms + ((-band_m, z),))} <= {_fmt(c.rhs)}"
        )
        defined = c.terms[0][1]
        lines.append(
            f" {c.name}_ub_floor: {_fmt_terms(((1.0, defined), (band_m, z)))} <= "
            f"{_fmt(c.floor + band_m)}"
        )

    lines.append("Bounds")
    for v in model.continuous:
        if math.isinf(v.lb) and math.isinf(v.ub):
            lines.append(f" {v.name} free")
        else:
            lines.append(f" {_fmt(v.lb)} <= {v.name} <= {_fmt(v.ub)}")

    lines.append("Binaries")
    names = [v.name for v in model.binaries] + aux_binaries
    for i in range(0, len(names), 8):
        lines.append(" " + " ".join(names[i : i + 8]))
    lines.append("End")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ParsedLp:
    objective: dict[str, float]
    constraints: tuple[tuple[str, dict[str, float], str, float], ...]
    bounds: dict[str, tuple[float, float]]
    binaries: frozenset[str]

    @property
    def constraint_count(self) -> int:
        return len(self.constraints)

    @property
    def binary_count(self) -> int:
        return len(self.binaries)

    @property
    def bounded_continuous_count(self) -> int:
        return sum(1 for lo, hi in self.bounds.values() if math.isfinite(lo) or math.isfinite(hi))


_TERM_RE = re.compile(r"([+-])?\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z][A-Za-z0-9_]*)")


def _parse_terms(expr: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for sign, number, var in _TERM_RE.findall(expr):
        coef = float(number) if number else 1.0
        if sign == "-":
            coef = -coef
        out[var] = out.get(var, 0.0) + coef
    return out


def parse_lp(text: str) -> ParsedLp:
    """Read back the LP subset emitted by export_lp."""
    section = None
    objective: dict[str, float] = {}
    constraints: list[tuple[str, dict[str, float], str, float]] = []
    bounds: dict[str, tuple[float, float]] = {}
    binaries: set[str] = set()

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        lowered = line.lower()
        if lowered in ("minimize", "maximize"):
            section = "objective"
            continue
        if lowered in ("subject to", "st", "s.t."):
            section = "constraints"
            continue
        if lowered == "bounds":
            section = "bounds"
            continue
        if lowered in ("binaries", "binary"):
            section = "binaries"
            continue
        if lowered == "end":
            break

        if section == "objective":
            expr = line.split(":", 1)[1] if ":" in line else line
            for var, coef in _parse_terms(expr).items():
                objective[var] = objective.get(var, 0.0) + coef
        elif section == "constraints":
            name, expr = line.split(":", 1)
            m = re.search(r"(<=|>=|=)", expr)
            if m is None:
                raise ValueError(f"constraint without comparator: {line!r}")
            sense = m.group(1)
            lhs, rhs = expr.split(sense, 1)
            constraints.append((name.strip(), _parse_terms(lhs), sense, float(rhs)))
        elif section == "bounds":
            if line.endswith(" free"):
                bounds[line[: -len(" free")].strip()] = (-math.inf, math.inf)
            else:
                lo, var, hi = re.split(r"\s*<=\s*", line)
                bounds[var.strip()] = (float(lo), float(hi))
        elif section == "binaries":
            binaries.update(line.split())

    return ParsedLp(
        objective=objective,
        constraints=tuple(constraints),
        bounds=bounds,
        binaries=frozenset(binaries),
    )


# ---------------------------------------------------------------------------
# Model evaluation (test support: substitute binaries, check feasibility)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AssignmentCheck:
    feasible: bool
    log_sizes: dict[str, float]
    violations: tuple[str, ...]


def assignment_from_schedule(model: MilpModel, schedule: Schedule) -> dict[str, int]:
    """Binary assignment encoding a schedule for this model's variables."""
    multi = model.program.endswith("p2")
    out: dict[str, int] = {}
    for k, choice in enumerate(schedule.choices, start=1):
        if multi:
            for tid in model.treatment_ids:
                out[f"X_{k}_{tid}"] = 1 if choice == tid else 0
        else:
            out[f"X_{k}"] = 1 if choice is not None else 0
    return out


def check_assignment(model: MilpModel, assignment: dict[str, int]) -> AssignmentCheck:
    """Propagate the recurrence for a binary assignment and check every row.

    The init and recurrence rows are triangular, so the log sizes are solved
    forward; all remaining rows and the variable bounds are then evaluated
    with the band tolerance used everywhere else.
    """
    values: dict[str, float] = {name: float(v) for name, v in assignment.items()}
    violations: list[str] = []

    for c in model.constraints:
        if c.kind == "init":
            values[c.terms[0][1]] = c.rhs
        elif c.kind == "recurrence":
            defined = c.terms[0][1]
            acc = c.rhs
            for coef, var in c.terms[1:]:
                acc -= coef * values[var]
            if c.is_max_equality:
                acc = max(acc, c.floor)
            values[defined] = acc

    ls = {v.name: values[v.name] for v in model.continuous if v.name in values}
    if any(v.name == "LSmax" for v in model.continuous):
        linked = []
        k = 1
        while f"LS_{k}" in values:
            linked.append(values[f"LS_{k}"])
            k += 1
        values["LSmax"] = max(linked)

    for v in model.continuous:
        if v.name not in values:
            continue
        x = values[v.name]
        if math.isfinite(v.lb) and x < v.lb - band_tol(v.lb):
            violations.append(f"bound:{v.name}:lower")
        if math.isfinite(v.ub) and x > v.ub + band_tol(v.ub):
            violations.append(f"bound:{v.name}:upper")

    for c in model.constraints:
        if c.kind in ("init", "recurrence"):
            continue
        lhs = sum(coef * values[var] for coef, var in c.terms)
        tol = 1e-9 * max(1.0, abs(c.rhs))
        ok = (
            (c.sense == "=" and abs(lhs - c.rhs) <= tol)
            or (c.sense == "<=" and lhs <= c.rhs + tol)
            or (c.sense == ">=" and lhs >= c.rhs - tol)
        )
        if not ok:
            violations.append(c.name)

    return AssignmentCheck(
        feasible=not violations, log_sizes=ls, violations=tuple(violations)
    )


def check_schedule(model: MilpModel, spec: ProblemSpec, schedule: Schedule) -> AssignmentCheck:
    validate_schedule(spec, schedule)
    return check_assignment(model, assignment_from_schedule(model, schedule))
