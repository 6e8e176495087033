"""Domain types and tumor-size dynamics.

Tumor size evolves between period starts by a power-law recurrence: untreated,
``S' = alpha * S**beta``; treated, the grown size is additionally multiplied by
``1 - reduction``.  Everything downstream (simulator, exact solver, model
builders) works on the logarithm of the size, where the same recurrence is
linear:

    LS' = log(alpha) + beta * LS + [log(1 - reduction) if treated]

Log space is the source of truth; plain sizes are materialized by
exponentiation.  A trajectory is feasible when every tracked log size stays
inside [log(s_min), log(s_tol)] up to a small boundary tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from typing import Optional, Sequence

# Tolerance applied to log sizes at band boundaries; sizes within tolerance of
# a bound count as feasible so the simulator and solvers agree on
# boundary-touching optima.
BAND_LOG_TOL = 1e-9

# Required relative agreement between the log-linear and the multiplicative
# recurrence when both are evaluated.
AGREEMENT_RTOL = 1e-9

# Significant digits used when deduplicating dynamic-programming states.
DEDUP_DIGITS = 12


class ChemoschedError(Exception):
    """Base class for all package errors."""


class GrowthModelError(ChemoschedError):
    """Growth-law parameters describe a tumor that would not grow."""


class SpecError(ChemoschedError):
    """Problem instance is structurally invalid."""


class ScheduleError(ChemoschedError):
    """Schedule does not fit the instance it is applied to."""


class InfeasibleInstanceError(ChemoschedError):
    """An operation hit a state from which no feasible continuation exists."""

    def __init__(self, message: str, period: Optional[int] = None):
        super().__init__(message)
        self.period = period


class SizeGuardError(ChemoschedError):
    """Instance exceeds the size guard of an enumeration-based solver."""


class InternalConsistencyError(ChemoschedError):
    """Two redundant computations of the same quantity disagree."""


def round_sig(x: float, digits: int = DEDUP_DIGITS) -> float:
    """Round ``x`` to ``digits`` significant digits (0.0 stays 0.0)."""
    if x == 0.0 or not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


def band_tol(bound: float) -> float:
    """Feasibility tolerance for a log-space bound (relative, floored at 1e-9)."""
    return BAND_LOG_TOL * max(1.0, abs(bound))


# ---------------------------------------------------------------------------
# Growth laws
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthLaw:
    """Per-period growth recurrence ``S' = alpha * S**beta``.

    ``beta = 1`` is exponential growth (then ``alpha`` must exceed 1 so the
    tumor actually grows); ``0 < beta < 1`` gives saturating growth with the
    stationary size ``alpha ** (1 / (1 - beta))``.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise GrowthModelError(f"alpha must be positive, got {self.alpha}")
        if not (0.0 < self.beta <= 1.0):
            raise GrowthModelError(f"beta must lie in (0, 1], got {self.beta}")
        if self.beta == 1.0 and self.alpha <= 1.0:
            raise GrowthModelError(
                f"alpha must exceed 1 when beta = 1, got alpha={self.alpha}"
            )

    @property
    def log_alpha(self) -> float:
        return math.log(self.alpha)

    @property
    def stationary_size(self) -> Optional[float]:
        """Fixed point of the untreated recurrence, or None for beta = 1."""
        if self.beta == 1.0:
            return None
        return self.alpha ** (1.0 / (1.0 - self.beta))


@dataclass(frozen=True)
class ExponentialParams:
    """Continuous-time exponential curve ``phi(t) = phi0 * e**(b*t)``."""

    phi0: float
    b: float

    def __post_init__(self):
        if not self.phi0 > 0.0:
            raise GrowthModelError(f"phi0 must be positive, got {self.phi0}")
        if not self.b > 0.0:
            raise GrowthModelError(f"b must be positive, got {self.b}")


@dataclass(frozen=True)
class GompertzParams:
    """Continuous-time Gompertz curve ``phi(t) = phi0 * e**((a/b)(1 - e**(-b*t)))``."""

    phi0: float
    a: float
    b: float

    def __post_init__(self):
        for name in ("phi0", "a", "b"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise GrowthModelError(f"{name} must be positive, got {value}")


def exponential_coefficients(params: ExponentialParams) -> GrowthLaw:
    """Per-period recurrence coefficients for an exponential curve.

    The per-period multiplier is ``log(b)``; the curve only describes a
    growing tumor when that multiplier exceeds 1.
    """
    if params.b <= 1.0:
        raise GrowthModelError(
            f"b must exceed 1 for a growing exponential curve, got {params.b}"
        )
    alpha = math.log(params.b)
    if alpha <= 1.0:
        raise GrowthModelError(
            f"derived per-period multiplier log(b) = {alpha} does not exceed 1"
        )
    return GrowthLaw(alpha=alpha, beta=1.0)


def gompertz_coefficients(params: GompertzParams) -> GrowthLaw:
    """Per-period recurrence coefficients for a Gompertz curve.

    alpha = (phi0 * e**(a/b)) ** (1 - e**(-b)), beta = e**(-b); the stationary
    size of the recurrence is the curve's asymptote phi0 * e**(a/b).
    """
    beta = math.exp(-params.b)
    asymptote_log = math.log(params.phi0) + params.a / params.b
    alpha = math.exp((1.0 - beta) * asymptote_log)
    return GrowthLaw(alpha=alpha, beta=beta)


# ---------------------------------------------------------------------------
# Instance description
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Treatment:
    """One therapy option: fixed cost per dose and multiplicative shrink."""

    id: int
    cost: float
    reduction: float

    def __post_init__(self):
        if not isinstance(self.id, int) or self.id < 0:
            raise SpecError(f"treatment id must be a nonnegative integer, got {self.id}")
        if not (self.cost > 0.0 and math.isfinite(self.cost)):
            raise SpecError(f"treatment cost must be positive, got {self.cost}")
        if not (0.0 < self.reduction < 1.0):
            raise SpecError(
                f"treatment reduction must lie in (0, 1), got {self.reduction}"
            )

    @property
    def log_retention(self) -> float:
        """log(1 - reduction): the log-space effect of one dose."""
        return math.log1p(-self.reduction)


@dataclass(frozen=True)
class ProblemSpec:
    """Full scheduling instance over a horizon of K decision periods.

    Decisions are made at the starts of periods 1..K; the trajectory carries
    sizes S_1..S_{K+1}.  ``include_terminal`` controls whether S_{K+1} is
    band-constrained and counted in the max-size objective (default: yes; this
    is the convention under which the bundled benchmark results hold).
    ``floor_mode`` switches the lower bound from "treatments that would
    undershoot s_min are forbidden" to "the treated size clamps at s_min".
    """

    K: int
    s_init: float
    s_min: float
    s_tol: float
    growth: GrowthLaw
    treatments: tuple[Treatment, ...]
    spacing_delta: int = 0
    forced_periods: frozenset[int] = frozenset()
    floor_mode: bool = False
    include_terminal: bool = True

    def __post_init__(self):
        if not isinstance(self.K, int) or self.K < 1:
            raise SpecError(f"horizon must have at least one period, got K={self.K}")
        for name in ("s_init", "s_min", "s_tol"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise SpecError(f"{name} must be positive, got {value}")
        if not isinstance(self.treatments, tuple):
            object.__setattr__(self, "treatments", tuple(self.treatments))
        if not self.treatments:
            raise SpecError("at least one treatment is required")
        ids = [t.id for t in self.treatments]
        if len(set(ids)) != len(ids):
            raise SpecError(f"treatment ids must be unique, got {ids}")
        if not isinstance(self.spacing_delta, int) or self.spacing_delta < 0:
            raise SpecError(
                f"spacing_delta must be a nonnegative integer, got {self.spacing_delta}"
            )
        if not isinstance(self.forced_periods, frozenset):
            object.__setattr__(self, "forced_periods", frozenset(self.forced_periods))

    @property
    def n_treatments(self) -> int:
        return len(self.treatments)

    @property
    def log_s_init(self) -> float:
        return math.log(self.s_init)

    @property
    def log_s_min(self) -> float:
        return math.log(self.s_min)

    @property
    def log_s_tol(self) -> float:
        return math.log(self.s_tol)

    @property
    def n_tracked(self) -> int:
        """Number of trajectory indices subject to the band and max-size objective."""
        return self.K + 1 if self.include_terminal else self.K

    def treatment_by_id(self, treatment_id: int) -> Treatment:
        for t in self.treatments:
            if t.id == treatment_id:
                return t
        raise ScheduleError(f"unknown treatment id {treatment_id}")


@dataclass(frozen=True)
class Schedule:
    """Per-period decision: a treatment id, or None for no treatment."""

    choices: tuple[Optional[int], ...]

    def __post_init__(self):
        if not isinstance(self.choices, tuple):
            object.__setattr__(self, "choices", tuple(self.choices))

    @staticmethod
    def untreated(K: int) -> "Schedule":
        return Schedule(choices=(None,) * K)

    @staticmethod
    def from_periods(
        K: int, periods: Sequence[int], treatment_id: int = 1
    ) -> "Schedule":
        """Schedule treating at the given periods, all with one treatment type."""
        chosen = set(periods)
        bad = [p for p in chosen if not 1 <= p <= K]
        if bad:
            raise ScheduleError(f"treatment periods out of range 1..{K}: {sorted(bad)}")
        return Schedule(
            choices=tuple(treatment_id if k in chosen else None for k in range(1, K + 1))
        )

    def __len__(self) -> int:
        return len(self.choices)

    @property
    def treated_periods(self) -> tuple[int, ...]:
        return tuple(k for k, c in enumerate(self.choices, start=1) if c is not None)

    def counts_by_id(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for c in self.choices:
            if c is not None:
                counts[c] = counts.get(c, 0) + 1
        return counts

    def cost(self, spec: ProblemSpec) -> float:
        total = 0.0
        for c in self.choices:
            if c is not None:
                total += spec.treatment_by_id(c).cost
        return total

    def spacing_stats(self) -> tuple[Optional[int], Optional[int]]:
        """(min, max) count of untreated periods between consecutive treatments."""
        treated = self.treated_periods
        if len(treated) < 2:
            return None, None
        gaps = [b - a - 1 for a, b in zip(treated, treated[1:])]
        return min(gaps), max(gaps)


def validate_schedule(spec: ProblemSpec, schedule: Schedule) -> None:
    """Raise ScheduleError if the schedule does not fit the instance."""
    if len(schedule) != spec.K:
        raise ScheduleError(
            f"schedule length {len(schedule)} does not match horizon K={spec.K}"
        )
    known = {t.id for t in spec.treatments}
    for k, c in enumerate(schedule.choices, start=1):
        if c is not None and c not in known:
            raise ScheduleError(f"period {k} uses unknown treatment id {c}")


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------


def grow(s: float, law: GrowthLaw) -> float:
    """Untreated size after one period."""
    if not s > 0.0:
        raise ValueError(f"size must be positive, got {s}")
    return law.alpha * s**law.beta

def treat(s: float, law: GrowthLaw, rf: float) -> float:
    """Treated size after one period: the grown size shrunk by factor 1 - rf.

    Callers running in floor mode clamp the result at s_min themselves.
    """
    if not 0.0 < rf < 1.0:
        raise ValueError(f"reduction factor must lie in (0, 1), got {rf}")
    return (1.0 - rf) * grow(s, law)


class LogDynamics:
    """Log-space transition kernel and band bookkeeping for one instance."""

    def __init__(self, spec: ProblemSpec):
        self.spec = spec
        self.log_alpha = spec.growth.log_alpha
        self.beta = spec.growth.beta
        self.log_retention = {t.id: t.log_retention for t in spec.treatments}
        self.lb = spec.log_s_min
        self.ub = spec.log_s_tol
        self.lb_tol = band_tol(self.lb)
        self.ub_tol = band_tol(self.ub)

    def step(self, ls: float, choice: Optional[int]) -> float:
        """Log size at the next period start given this period's decision."""
        nxt = self.log_alpha + self.beta * ls
        if choice is not None:
            nxt += self.log_retention[choice]
        if self.spec.floor_mode:
            nxt = max(nxt, self.lb)
        return nxt

    def is_tracked(self, index: int) -> bool:
        """Whether trajectory index (1-based) is subject to the band."""
        return 2 <= index <= self.spec.n_tracked or index == 1

    def within_band(self, ls: float) -> bool:
        return self.lb - self.lb_tol <= ls <= self.ub + self.ub_tol

    def below_floor(self, ls: float) -> bool:
        return ls < self.lb - self.lb_tol

    def above_ceiling(self, ls: float) -> bool:
        return ls > self.ub + self.ub_tol


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    """Sizes S_1..S_{K+1} with their logs and the per-period treatment flags."""

    sizes: tuple[float, ...]
    log_sizes: tuple[float, ...]
    treated: tuple[bool, ...]
    choices: tuple[Optional[int], ...]

    def max_size(self, include_terminal: bool = True) -> float:
        tracked = self.sizes if include_terminal else self.sizes[:-1]
        return max(tracked)

    def max_log_size(self, include_terminal: bool = True) -> float:
        tracked = self.log_sizes if include_terminal else self.log_sizes[:-1]
        return max(tracked)


@dataclass(frozen=True)
class BandViolation:
    period: int
    size: float
    bound: str  # "lower" or "upper"
    limit: float


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[BandViolation, ...]
    band_enforced: bool
    terminal_checked: bool

    @property
    def feasible(self) -> bool:
        return not self.violations


def simulate(
    spec: ProblemSpec, schedule: Schedule, enforce_band: bool = True
) -> tuple[Trajectory, FeasibilityReport]:
    """Run a schedule forward and report every band violation.

    The log-linear recurrence is the source of truth; the multiplicative
    recurrence is evaluated alongside it and the two must agree to relative
    1e-9 at every index.  Infeasibility is reported, never raised.  With
    ``enforce_band`` off no violations are collected (unconstrained growth
    studies).
    """
    validate_schedule(spec, schedule)
    dyn = LogDynamics(spec)

    log_sizes = [spec.log_s_init]
    mult_sizes = [spec.s_init]
    for choice in schedule.choices:
        ls_next = dyn.step(log_sizes[-1], choice)
        log_sizes.append(ls_next)

        s = grow(mult_sizes[-1], spec.growth)
        if choice is not None:
            s *= 1.0 - spec.treatment_by_id(choice).reduction
        if spec.floor_mode:
            s = max(s, spec.s_min)
        mult_sizes.append(s)

    sizes = [math.exp(ls) for ls in log_sizes]
    for idx, (a, b) in enumerate(zip(sizes, mult_sizes), start=1):
        if abs(a - b) > AGREEMENT_RTOL * max(abs(a), abs(b)):
            raise InternalConsistencyError(
                f"log-linear and multiplicative recurrences disagree at index "
                f"{idx}: {a!r} vs {b!r}"
            )

    violations: list[BandViolation] = []
    if enforce_band:
        for idx in range(1, spec.n_tracked + 1):
            ls = log_sizes[idx - 1]
            if dyn.below_floor(ls):
                violations.append(
                    BandViolation(period=idx, size=sizes[idx - 1], bound="lower", limit=spec.s_min)
                )
            elif dyn.above_ceiling(ls):
                violations.append(
                    BandViolation(period=idx, size=sizes[idx - 1], bound="upper", limit=spec.s_tol)
                )

    trajectory = Trajectory(
        sizes=tuple(sizes),
        log_sizes=tuple(log_sizes),
        treated=tuple(c is not None for c in schedule.choices),
        choices=tuple(schedule.choices),
    )
    report = FeasibilityReport(
        violations=tuple(violations),
        band_enforced=enforce_band,
        terminal_checked=spec.include_terminal and enforce_band,
    )
    return trajectory, report


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    code: str
    message: str


def validate_spec(spec: ProblemSpec) -> list[Diagnostic]:
    """Check instance invariants and return machine-readable diagnostics."""
    out: list[Diagnostic] = []

    if not spec.s_min < spec.s_init:
        out.append(
            Diagnostic("error", "band-order", f"s_init {spec.s_init} must exceed s_min {spec.s_min}")
        )
    if spec.s_init > spec.s_tol * (1.0 + BAND_LOG_TOL):
        out.append(
            Diagnostic("error", "band-order", f"s_init {spec.s_init} exceeds s_tol {spec.s_tol}")
        )
    if not spec.s_min < spec.s_tol:
        out.append(
            Diagnostic("error", "band-order", f"s_min {spec.s_min} must be below s_tol {spec.s_tol}")
        )

    # Growth must be strict over the whole band.  alpha * S**(beta-1) is
    # nonincreasing in S, so checking the top of the band suffices.
    if spec.s_min < spec.s_tol:
        top = grow(spec.s_tol, spec.growth)
        if not top > spec.s_tol:
            out.append(
                Diagnostic(
                    "error",
                    "growth-property",
                    f"growth law does not grow at s_tol: f({spec.s_tol}) = {top}",
                )
            )

    bad_forced = sorted(p for p in spec.forced_periods if not 1 <= p <= spec.K)
    if bad_forced:
        out.append(
            Diagnostic(
                "error",
                "forced-range",
                f"forced periods outside 1..{spec.K}: {bad_forced}",
            )
        )

    if spec.spacing_delta > 0:
        forced = sorted(p for p in spec.forced_periods if 1 <= p <= spec.K)
        for a, b in zip(forced, forced[1:]):
            if b - a <= spec.spacing_delta:
                out.append(
                    Diagnostic(
                        "error",
                        "forced-spacing",
                        f"forced periods {a} and {b} are closer than the spacing "
                        f"constraint delta={spec.spacing_delta} allows",
                    )
                )

    if spec.spacing_delta >= spec.K:
        out.append(
            Diagnostic(
                "warning",
                "spacing-saturates",
                f"delta={spec.spacing_delta} >= K={spec.K}: at most one treatment is possible",
            )
        )

    if not spec.floor_mode:
        for t in spec.treatments:
            treated = treat(spec.s_init, spec.growth, t.reduction)
            if treated < spec.s_min:
                out.append(
                    Diagnostic(
                        "warning",
                        "may-undershoot-floor",
                        f"treatment {t.id} applied at s_init lands at {treated:.6g}, "
                        f"below s_min {spec.s_min}; the instance may be vacuously infeasible",
                    )
                )

    return out


def ensure_valid(spec: ProblemSpec) -> None:
    """Raise SpecError when validate_spec reports any error-level diagnostic."""
    errors = [d for d in validate_spec(spec) if d.severity == "error"]
    if errors:
        raise SpecError("; ".join(f"[{d.code}] {d.message}" for d in errors))


# ---------------------------------------------------------------------------
# Objectives and solver report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinCost:
    """Minimize total treatment cost subject to the size band."""


@dataclass(frozen=True)
class MinMaxSize:
    """Minimize the largest tracked size subject to a treatment budget."""

    budget: float

    def __post_init__(self):
        if not (self.budget >= 0.0 and math.isfinite(self.budget)):
            raise SpecError(f"budget must be nonnegative, got {self.budget}")


Objective = object  # MinCost | MinMaxSize


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one solve: status, optimum, schedule, and run statistics.

    ``max_size`` is the largest size over the tracked indices of the returned
    schedule.  Minimum-cost instances routinely have several optimal
    schedules whose max sizes differ; ``alternates`` counts the undominated
    terminal states seen by the solver so nonuniqueness is surfaced.
    """

    status: str  # "optimal" or "infeasible"
    objective_value: Optional[float]
    schedule: Optional[Schedule]
    trajectory: Optional[Trajectory]
    max_size: Optional[float]
    treatment_counts: dict[int, int]
    min_spacing: Optional[int]
    max_spacing: Optional[int]
    alternates: int
    labels_explored: int
    labels_pruned: int
    wall_time_s: float
    engine: str

    def to_dict(self) -> dict:
        """JSON-ready form.  Wall time is excluded so artifacts are reproducible."""
        d = {
            "status": self.status,
            "objective_value": self.objective_value,
            "schedule": list(self.schedule.choices) if self.schedule else None,
            "treated_periods": list(self.schedule.treated_periods) if self.schedule else None,
            "max_size": self.max_size,
            "treatment_counts": {str(k): v for k, v in sorted(self.treatment_counts.items())},
            "min_spacing": self.min_spacing,
            "max_spacing": self.max_spacing,
            "alternates": self.alternates,
            "labels_explored": self.labels_explored,
            "labels_pruned": self.labels_pruned,
            "engine": self.engine,
        }
        if self.max_size is not None:
            d["display"] = {
                "objective_value": round(self.objective_value, 2),
                "max_size": round(self.max_size, 2),
            }
        return d


def report_from_schedule(
    spec: ProblemSpec,
    schedule: Schedule,
    objective_value: float,
    alternates: int,
    labels_explored: int,
    labels_pruned: int,
    wall_time_s: float,
    engine: str,
) -> SolveReport:
    """Assemble an optimal report, re-simulating the schedule for integrity."""
    trajectory, feas = simulate(spec, schedule)
    if not feas.feasible:
        raise InternalConsistencyError(
            f"engine {engine} returned an infeasible schedule: {feas.violations[:3]}"
        )
    mn, mx = schedule.spacing_stats()
    return SolveReport(
        status="optimal",
        objective_value=objective_value,
        schedule=schedule,
        trajectory=trajectory,
        max_size=trajectory.max_size(spec.include_terminal),
        treatment_counts=schedule.counts_by_id(),
        min_spacing=mn,
        max_spacing=mx,
        alternates=alternates,
        labels_explored=labels_explored,
        labels_pruned=labels_pruned,
        wall_time_s=wall_time_s,
        engine=engine,
    )


def infeasible_report(
    labels_explored: int, labels_pruned: int, wall_time_s: float, engine: str
) -> SolveReport:
    return SolveReport(
        status="infeasible",
        objective_value=None,
        schedule=None,
        trajectory=None,
        max_size=None,
        treatment_counts={},
        min_spacing=None,
        max_spacing=None,
        alternates=0,
        labels_explored=labels_explored,
        labels_pruned=labels_pruned,
        wall_time_s=wall_time_s,
        engine=engine,
    )


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------


def spec_to_dict(spec: ProblemSpec) -> dict:
    return {
        "K": spec.K,
        "s_init": spec.s_init,
        "s_min": spec.s_min,
        "s_tol": spec.s_tol,
        "growth": {"alpha": spec.growth.alpha, "beta": spec.growth.beta},
        "treatments": [
            {"id": t.id, "cost": t.cost, "reduction": t.reduction}
            for t in spec.treatments
        ],
        "spacing_delta": spec.spacing_delta,
        "forced_periods": sorted(spec.forced_periods),
        "floor_mode": spec.floor_mode,
        "include_terminal": spec.include_terminal,
    }


def _growth_from_dict(raw: dict) -> GrowthLaw:
    if "alpha" in raw and "beta" in raw:
        return GrowthLaw(alpha=float(raw["alpha"]), beta=float(raw["beta"]))
    if "exponential" in raw:
        p = raw["exponential"]
        return exponential_coefficients(
            ExponentialParams(phi0=float(p["phi0"]), b=float(p["b"]))
        )
    if "gompertz" in raw:
        p = raw["gompertz"]
        return gompertz_coefficients(
            GompertzParams(phi0=float(p["phi0"]), a=float(p["a"]), b=float(p["b"]))
        )
    raise SpecError(
        "growth must give raw {alpha, beta} or an {exponential}/{gompertz} parameter block"
    )


def spec_from_dict(raw: dict) -> ProblemSpec:
    try:
        treatments = tuple(
            Treatment(
                id=int(t["id"]), cost=float(t["cost"]), reduction=float(t["reduction"])
            )
            for t in raw["treatments"]
        )
        return ProblemSpec(
            K=int(raw["K"]),
            s_init=float(raw["s_init"]),
            s_min=float(raw["s_min"]),
            s_tol=float(raw["s_tol"]),
            growth=_growth_from_dict(raw["growth"]),
            treatments=treatments,
            spacing_delta=int(raw.get("spacing_delta", 0)),
            forced_periods=frozenset(int(p) for p in raw.get("forced_periods", [])),
            floor_mode=bool(raw.get("floor_mode", False)),
            include_terminal=bool(raw.get("include_terminal", True)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed instance description: {exc}") from exc


def spec_to_json(spec: ProblemSpec, indent: int = 2) -> str:
    return json.dumps(spec_to_dict(spec), indent=indent, sort_keys=True)


def spec_from_json(text: str) -> ProblemSpec:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SpecError("instance description must be a JSON object")
    return spec_from_dict(raw)
