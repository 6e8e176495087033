"""Built-in benchmark instances and their reference results.

Two 52-period instances are bundled: one with exponential growth and one with
Gompertz growth.  For each, the reference grid covers the three cost-minimal
programs and the min-max variants at the budgets of interest, with the values
an exact solver must reproduce.  Values marked as max sizes of cost-minimal
runs depend on which optimum a solver returns and are compared only where the
reference pins them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .core import (
    ExponentialParams,
    GompertzParams,
    ProblemSpec,
    Treatment,
    exponential_coefficients,
    gompertz_coefficients,
)

HORIZON = 52
MAX_SIZE_ATOL = 0.01

CASES = ("exponential", "gompertz")


def exponential_growth_law():
    """Exponential benchmark growth: doubling parameter chosen so the
    per-period multiplier is exactly 1.5."""
    return exponential_coefficients(ExponentialParams(phi0=50.0, b=math.exp(1.5)))


def gompertz_growth_law():
    """Gompertz benchmark growth with asymptote 50 * e**4 (about 2729.91)."""
    return gompertz_coefficients(GompertzParams(phi0=50.0, a=0.72, b=0.18))


def benchmark_spec(case: str, program: str) -> ProblemSpec:
    """Benchmark instance for one program family.

    p1 and p3 use the single-treatment menu (p3 adds the one-period spacing
    constraint); p2 uses the two-treatment menu.
    """
    if case == "exponential":
        growth = exponential_growth_law()
        s_init, s_min, s_tol = 50.0, 10.0, 500.0
    elif case == "gompertz":
        growth = gompertz_growth_law()
        s_init, s_min, s_tol = 150.0, 60.0, 500.0
    else:
        raise ValueError(f"unknown benchmark case {case!r}, expected one of {CASES}")

    if program == "p2":
        treatments = (
            Treatment(id=1, cost=10.0, reduction=0.6),
            Treatment(id=2, cost=13.0, reduction=0.7),
        )
    elif program in ("p1", "p3"):
        treatments = (Treatment(id=1, cost=10.0, reduction=0.6),)
    else:
        raise ValueError(f"unknown program {program!r}")

    return ProblemSpec(
        K=HORIZON,
        s_init=s_init,
        s_min=s_min,
        s_tol=s_tol,
        growth=growth,
        treatments=treatments,
        spacing_delta=1 if program == "p3" else 0,
    )


@dataclass(frozen=True)
class ReferenceCell:
    """One benchmark run and the values it must reproduce.

    ``budget`` None means the min-cost objective.  ``max_size`` is asserted
    within MAX_SIZE_ATOL when set; for min-cost cells it is only set where the
    reference fixes which optimum is reported.  ``counts`` asserts the number
    of doses per treatment id.  ``time_limit_s`` bounds the cell's wall time.
    """

    case: str
    program: str
    budget: Optional[float]
    cost: Optional[float] = None
    max_size: Optional[float] = None
    counts: Optional[dict[int, int]] = None
    time_limit_s: float = 5.0

    @property
    def name(self) -> str:
        if self.budget is None:
            return f"{self.case}:{self.program}:min-cost"
        return f"{self.case}:{self.program}:min-max({self.budget:g})"


REFERENCE_GRID: tuple[ReferenceCell, ...] = (
    # Exponential case: every cell solves well under a second.
    ReferenceCell("exponential", "p1", None, cost=210.0, max_size=496.46),
    ReferenceCell("exponential", "p2", None, cost=204.0, counts={1: 10, 2: 8}),
    ReferenceCell("exponential", "p3", None, cost=210.0),
    ReferenceCell("exponential", "p1", 210.0, max_size=315.48),
    ReferenceCell("exponential", "p1", 220.0, max_size=126.19),
    ReferenceCell("exponential", "p2", 204.0, max_size=493.50),
    ReferenceCell("exponential", "p2", 217.0, max_size=148.05),
    ReferenceCell("exponential", "p3", 210.0, max_size=315.48),
    ReferenceCell("exponential", "p3", 220.0, max_size=126.19),
    # Gompertz case: the two-treatment min-max cells are the slow ones.
    ReferenceCell("gompertz", "p1", None, cost=200.0, max_size=499.09, time_limit_s=60.0),
    ReferenceCell("gompertz", "p2", None, cost=191.0, counts={1: 10, 2: 7}, time_limit_s=60.0),
    ReferenceCell("gompertz", "p3", None, cost=200.0, max_size=498.87, time_limit_s=60.0),
    ReferenceCell("gompertz", "p1", 200.0, max_size=438.42, time_limit_s=60.0),
    ReferenceCell("gompertz", "p1", 210.0, max_size=418.02, time_limit_s=60.0),
    ReferenceCell("gompertz", "p2", 191.0, max_size=493.41, time_limit_s=60.0),
    ReferenceCell("gompertz", "p2", 204.0, max_size=435.78, counts={1: 19, 2: 1}, time_limit_s=60.0),
    ReferenceCell("gompertz", "p3", 200.0, max_size=438.42, time_limit_s=60.0),
    ReferenceCell("gompertz", "p3", 210.0, max_size=418.02, time_limit_s=60.0),
)


def grid_for(case: str) -> tuple[ReferenceCell, ...]:
    if case not in CASES:
        raise ValueError(f"unknown benchmark case {case!r}, expected one of {CASES}")
    return tuple(cell for cell in REFERENCE_GRID if cell.case == case)
