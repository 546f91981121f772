"""Dynamic solver: escalate the curvature adjustment as evidence arrives.

The fixed-constant solver needs its adjustment constant chosen in advance;
too small and the models stop underestimating, too large and every step
degrades to the slow closed-form limit.  This solver raises the constant on
the fly, never lowering it, using two triggers per iteration:

* a floor derived from the requirement that neither model may sit above
  the incumbent's value at the incumbent (a necessary condition for the
  models to underestimate their pieces), and
* enough to make the max-model minimizer an intersection of the two
  models rather than the interior vertex of a convex one, located by
  bisection between the current constant and the concavity threshold.

Independently, if the same flank's inner point was replaced three
iterations running, the next trial is forced to the closed-form extremal
step, which guarantees both flanks keep moving.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

from .brackets import ExtendedBracket7, inner5, inner_length
from .eupm import eupm_step
from .models import build_model, divided_diff2, scaling_h
from .result import SolverResult, Status
from .supm import (
    BracketTooSmallError,
    _min_separation,
    _raw_supm_step,
    apply_update,
    classify_branch,
    default_delta,
)

SideFlag = Literal["L", "R"]

#: Relative tolerance for deciding that the two models agree at the step.
INTERSECTION_RTOL = 1e-10


class ChiConditionError(RuntimeError):
    """The intersection condition failed even above the concavity
    threshold; the bracket is numerically degenerate."""


@dataclass(frozen=True)
class DupmConfig:
    """Settings for the dynamic solver.

    ``alpha0`` seeds the adjustment constant (zero lets the escalation
    rules take over immediately).  ``chi_tol`` is the bisection width for
    the escalation search; ``None`` picks 1e-3 relative to the concavity
    threshold.  ``same_side_count`` consecutive same-flank updates trigger
    one closed-form step.
    """

    alpha0: float = 0.0
    eps: float = 1e-8
    delta: float | None = None
    budget: int = 500
    chi_tol: float | None = None
    same_side_count: int = 3

    def __post_init__(self):
        if not self.eps > 0.0:
            raise ValueError("eps must be > 0")
        if self.alpha0 < 0.0:
            raise ValueError("alpha0 must be >= 0")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.delta is not None and not 0.0 < self.delta < self.eps:
            raise ValueError("delta must satisfy 0 < delta < eps")
        if self.same_side_count < 1:
            raise ValueError("same_side_count must be >= 1")


@dataclass(frozen=True)
class DupmState:
    """Bracket plus the solver's dynamic extras.

    ``alpha`` never decreases over a run.  ``u`` holds which flank's inner
    point the last few updates replaced, newest first; it starts as
    ("L", "R", "L") so the closed-form override cannot fire before three
    real updates have happened.
    """

    bracket: ExtendedBracket7
    alpha: float
    u: tuple[SideFlag, ...]


def _side_dd2(b: ExtendedBracket7, side: str) -> float:
    x, fv = b.x, b.fv
    if side == "L":
        i1, i2, i3 = 2, 1, 0
    else:
        i1, i2, i3 = 4, 5, 6
    return divided_diff2(fv[i1], fv[i2], fv[i3], x[i1], x[i2], x[i3])


def _centre_dd2(b: ExtendedBracket7, side: str) -> float:
    x, fv = b.x, b.fv
    if side == "L":
        i1, i2 = 2, 1
    else:
        i1, i2 = 4, 5
    return divided_diff2(fv[3], fv[i1], fv[i2], x[3], x[i1], x[i2])


def alpha_floor(b: ExtendedBracket7) -> float:
    """Smallest constant keeping both models at or below the incumbent value.

    May be negative; the caller clamps with the running maximum.
    """
    h = scaling_h(b)
    return max(_side_dd2(b, k) - _centre_dd2(b, k) for k in ("L", "R")) / h


def alpha_plus(b: ExtendedBracket7) -> float:
    """Concavity threshold: above it both models curve downward, so their
    minimizer over the inner interval is an intersection point."""
    return max(_side_dd2(b, "L"), _side_dd2(b, "R")) / scaling_h(b)


def intersection_condition(b: ExtendedBracket7, alpha: float) -> bool:
    """Do the two models agree at the max-model minimizer?

    Checked with a relative tolerance: the minimizer lands on an
    intersection only up to rounding, and the incumbent value sets the
    scale when both model values are near zero.
    """
    g = _raw_supm_step(b, alpha)
    ql = build_model("L", b, alpha)
    qr = build_model("R", b, alpha)
    vl, vr = ql(g), qr(g)
    return abs(vl - vr) <= INTERSECTION_RTOL * (abs(vl) + abs(vr) + abs(b.fm))


def chi(b: ExtendedBracket7, alpha_lo: float, tol: float) -> float:
    """Bisect for the smallest constant granting the intersection condition.

    Returns ``alpha_lo`` unchanged when the condition already holds there.
    Otherwise searches (alpha_lo, threshold]; the returned value is the
    upper end of the final bisection interval, where the condition was
    checked to hold.  Raises :class:`ChiConditionError` if it fails even
    just above the threshold.
    """
    if not tol > 0.0:
        raise ValueError("tol must be > 0")
    if intersection_condition(b, alpha_lo):
        return alpha_lo
    ap = alpha_plus(b)
    hi = max(ap, alpha_lo) + max(tol, 1e-12 * max(1.0, abs(ap)))
    if not intersection_condition(b, hi):
        raise ChiConditionError(
            f"models fail to intersect even at alpha={hi!r} (threshold {ap!r})"
        )
    lo = alpha_lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if intersection_condition(b, mid):
            hi = mid
        else:
            lo = mid
    return hi


def escalate_alpha(
    b: ExtendedBracket7, alpha: float, chi_tol: float | None = None
) -> float:
    """Raise ``alpha`` to cover the necessary-condition floor and the
    intersection condition; never lowers it.

    Falls back to one past the concavity threshold when the bisection
    cannot certify the condition (degenerate bracket).
    """
    alpha = max(alpha, alpha_floor(b))
    if chi_tol is None:
        chi_tol = 1e-3 * max(1.0, abs(alpha_plus(b)))
    try:
        return chi(b, alpha, chi_tol)
    except ChiConditionError:
        return max(alpha, alpha_plus(b) + 1.0)


def dupm_step(state: DupmState, delta: float) -> float:
    """Trial point: closed-form step after a same-flank streak, otherwise
    the max-model step at the current constant.  ``state.alpha`` must
    already be escalated for this iteration."""
    b = state.bracket
    if len(set(state.u)) == 1:
        g = eupm_step(inner5(b))
    else:
        g = _raw_supm_step(b, state.alpha)
    if delta == 0.0:
        return g
    return _min_separation(g, b.xl1, b.xm, b.xr1, delta)


def dupm_update(xtrial: float, ftrial: float, state: DupmState) -> DupmState:
    """Insert the trial and push the flank flag of the replaced inner point.

    Updates 1 and 3 replace the right inner point, 2 and 4 the left one.
    """
    b = state.bracket
    br = classify_branch(xtrial, ftrial, b)
    flag: SideFlag = "R" if br in (1, 3) else "L"
    nb = apply_update(br, xtrial, ftrial, b)
    return DupmState(nb, state.alpha, (flag,) + state.u[: len(state.u) - 1])




def dupm_minimize(
    oracle: Callable[[float], float],
    b0: ExtendedBracket7,
    cfg: DupmConfig,
    record_brackets: bool = False,
) -> SolverResult:
    """Run the dynamic solver from ``b0``.

    Each iteration escalates the constant, picks the trial point, calls
    the oracle once and updates the bracket and flank history.  The
    per-iteration constants are returned in ``alphas`` (one entry per
    completed iteration).
    """
    init_u: tuple[SideFlag, ...] = tuple(
        ("L", "R")[i % 2] for i in range(cfg.same_side_count)
    )
    state = DupmState(b0, cfg.alpha0, init_u)
    delta = cfg.delta if cfg.delta is not None else default_delta(cfg.eps, b0.xl1, b0.xr1)
    trace = [(0, inner_length(b0), b0.fm)]
    branches: list[int] = []
    alphas: list[float] = []
    hist = [b0] if record_brackets else None
    evals = 0
    i = 0
    status = Status.CONVERGED
    while inner_length(state.bracket) > 2.0 * cfg.eps:
        if i >= cfg.budget:
            status = Status.BUDGET_EXHAUSTED
            break
        b = state.bracket
        state = DupmState(b, escalate_alpha(b, state.alpha, cfg.chi_tol), state.u)
        try:
            xt = dupm_step(state, delta)
        except BracketTooSmallError:
            status = Status.STALLED
            break
        ft = oracle(xt)
        evals += 1
        br = classify_branch(xt, ft, state.bracket)
        flag: SideFlag = "R" if br in (1, 3) else "L"
        nb = apply_update(br, xt, ft, state.bracket)
        state = DupmState(nb, state.alpha, (flag,) + state.u[: len(state.u) - 1])
        i += 1
        trace.append((i, inner_length(nb), nb.fm))
        branches.append(br)
        alphas.append(state.alpha)
        if hist is not None:
            hist.append(state.bracket)
    return SolverResult(
        bracket=state.bracket,
        iterations=i,
        evaluations=evals,
        trace=trace,
        status=status,
        branches=branches,
        alphas=alphas,
        bracket_trace=hist,
    )
