"""Common solver result container."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .brackets import AnyBracket


class Status(enum.Enum):
    CONVERGED = "converged"
    BUDGET_EXHAUSTED = "budget_exhausted"
    #: The bracket is still wider than the tolerance but the minimum point
    #: separation leaves no room for a new trial.
    STALLED = "stalled"


@dataclass
class SolverResult:
    """Outcome of one solver run.

    ``trace`` holds one ``(iteration, inner_length, f_at_incumbent)`` row
    per iteration, starting with row 0 for the initial bracket.  Both the
    length column and the value column are non-increasing.

    ``branches`` (bracket-update index per iteration), ``alphas``
    (adjustment constant per iteration, dynamic solver only) and
    ``bracket_trace`` (full bracket per iteration, opt-in) exist for
    diagnostics and invariant checks.
    """

    bracket: AnyBracket
    iterations: int
    evaluations: int
    trace: list[tuple[int, float, float]]
    status: Status
    branches: list[int] | None = None
    alphas: list[float] | None = None
    bracket_trace: list | None = None

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED
