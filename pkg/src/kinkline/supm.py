"""Static-constant solver: minimize the max of the two side quadratics.

Each iteration builds the left and right adjusted quadratics with a fixed
constant ``alpha``, takes the minimizer of their pointwise maximum over the
inner interval as the next trial point, evaluates the oracle there and
shuffles the seven-point bracket by one of four update rules depending on
which side the trial fell and whether it improved on the incumbent.

A minimum point separation ``delta`` keeps the trial away from the
incumbent and the inner endpoints, which guarantees the bracket strictly
shrinks even when the models misbehave.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable

from .brackets import ExtendedBracket5, ExtendedBracket7, BracketError, inner_length
from .models import QuadModel, build_model
from .result import SolverResult, Status

_EPS = sys.float_info.epsilon


class BracketTooSmallError(RuntimeError):
    """No room left for a trial point respecting the minimum separation."""


class TrialAtCenterError(ValueError):
    """A trial point coincided with the incumbent; the separation rule
    should have prevented this."""


class InvariantBrokenError(RuntimeError):
    """A bracket update produced an invalid bracket; indicates a bug."""


@dataclass(frozen=True)
class SupmConfig:
    """Settings for the fixed-constant solver.

    Terminates when the inner length drops to ``2 * eps`` or after
    ``budget`` iterations.  ``delta`` is the minimum distance kept between
    a trial point and the incumbent or inner endpoints; ``None`` derives it
    from ``eps`` and the bracket position at solve start.
    """

    alpha: float = 0.0
    eps: float = 1e-8
    delta: float | None = None
    budget: int = 500

    def __post_init__(self):
        if not self.eps > 0.0:
            raise ValueError("eps must be > 0")
        if self.alpha < 0.0:
            raise ValueError("alpha must be >= 0")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.delta is not None and not 0.0 < self.delta < self.eps:
            raise ValueError("delta must satisfy 0 < delta < eps")


def default_delta(eps: float, xl1: float, xr1: float) -> float:
    """Separation floor: below the termination scale, above rounding noise."""
    return max(eps / 4.0, 64.0 * _EPS * (abs(xl1) + abs(xr1)))


def _difference_coeffs(ql: QuadModel, qr: QuadModel, shift: float):
    """Monomial coefficients of ql - qr in the shifted variable u = x - shift."""
    a1l, a2l = ql.x1 - shift, ql.x2 - shift
    a1r, a2r = qr.x1 - shift, qr.x2 - shift
    a = ql.c2adj - qr.c2adj
    b = (ql.c1 - ql.c2adj * (a1l + a2l)) - (qr.c1 - qr.c2adj * (a1r + a2r))
    c = (ql.c0 - ql.c1 * a1l + ql.c2adj * a1l * a2l) - (
        qr.c0 - qr.c1 * a1r + qr.c2adj * a1r * a2r
    )
    return a, b, c


def _real_roots(a: float, b: float, c: float) -> tuple[float, ...]:
    """Real roots of a*u^2 + b*u + c, via the cancellation-safe formula.

    A discriminant within a few rounding units of zero is treated as zero
    so grazing intersections are kept.
    """
    if a == 0.0:
        if b == 0.0:
            return ()
        return (-c / b,)
    disc = b * b - 4.0 * a * c
    scale = b * b + abs(4.0 * a * c)
    if disc < 0.0:
        if disc >= -4.0 * _EPS * scale:
            disc = 0.0
        else:
            return ()
    sq = math.sqrt(disc)
    if b == 0.0:
        r = sq / (2.0 * abs(a))
        return (-r, r) if r != 0.0 else (0.0,)
    q = -0.5 * (b + math.copysign(sq, b))
    return (q / a, c / q)


def minimize_max_quadratics(
    ql: QuadModel, qr: QuadModel, left: float, right: float, centre: float
) -> float:
    """Minimizer over [left, right] of the pointwise max of two quadratics.

    The minimum is attained at an intersection of the two, at the vertex
    of a convex one, or at an endpoint; those are exactly the candidates
    scored here.  Ties go to the candidate nearest ``centre``, then
    leftward.  ``centre`` also anchors the shifted coordinates used for
    the root solve.
    """
    s = centre
    lo, hi = left - s, right - s

    if (
        ql.c1 == 0.0
        and ql.c2adj == 0.0
        and qr.c1 == 0.0
        and qr.c2adj == 0.0
        and ql.c0 == qr.c0
    ):
        # both models one flat constant: every point is a minimizer
        return s + 0.5 * (lo + hi)

    cands = [lo, hi]
    da, db, dc = _difference_coeffs(ql, qr, s)
    for u in _real_roots(da, db, dc):
        if lo <= u <= hi:
            cands.append(u)
    for q in (ql, qr):
        if q.c2adj > 0.0:
            u = q.vertex() - s
            if lo <= u <= hi:
                cands.append(u)

    best = min(cands, key=lambda u: (max(ql(s + u), qr(s + u)), abs(u), u))
    return s + best


def _raw_supm_step(b: ExtendedBracket7, alpha: float) -> float:
    """Max-model minimizer over the inner interval, before the separation
    projection."""
    ql = build_model("L", b, alpha)
    qr = build_model("R", b, alpha)
    return minimize_max_quadratics(ql, qr, b.xl1, b.xr1, b.xm)


def _min_separation(g: float, lo: float, mid: float, hi: float, delta: float) -> float:
    """Project ``g`` onto [lo+delta, hi-delta] minus the delta-ball at mid.

    An exact tie at the incumbent resolves to the left, ``mid - delta``.
    Raises :class:`BracketTooSmallError` when both side slots are empty.
    """
    left_ok = mid - delta >= lo + delta
    right_ok = hi - delta >= mid + delta
    if not left_ok and not right_ok:
        raise BracketTooSmallError(
            f"no admissible trial point in ({lo}, {hi}) with separation {delta}"
        )
    if g == mid:
        return mid - delta if left_ok else mid + delta
    proj = []
    if left_ok:
        proj.append(min(max(g, lo + delta), mid - delta))
    if right_ok:
        proj.append(min(max(g, mid + delta), hi - delta))
    return min(proj, key=lambda x: (abs(x - g), x))


def supm_step(b: ExtendedBracket7, alpha: float, delta: float) -> float:
    """Next trial point: the max-model minimizer, kept ``delta`` away from
    the incumbent and the inner endpoints."""
    g = _raw_supm_step(b, alpha)
    if delta == 0.0:
        return g
    return _min_separation(g, b.xl1, b.xm, b.xr1, delta)


def classify_branch(xtrial: float, ftrial: float, b) -> int:
    """Which of the four update rules applies to this trial.

    1: left of the incumbent and improving; 2: right, improving;
    3: right, not improving; 4: left, not improving.  A value tie counts
    as not improving, keeping the incumbent in place.
    """
    if xtrial == b.xm:
        raise TrialAtCenterError(f"trial coincides with incumbent at {xtrial!r}")
    if xtrial < b.xm:
        return 1 if ftrial < b.fm else 4
    return 2 if ftrial < b.fm else 3


def apply_update(branch: int, xtrial: float, ftrial: float, b):
    """Insert the trial into the bracket by update rule ``branch``.

    Works on both seven- and five-point brackets: the trial slots in next
    to the incumbent and the far point on the opposite side drops off.
    Cached values travel with their points; only the trial's value is new.
    The result is re-validated, so a rule inconsistent with the trial's
    position surfaces as :class:`InvariantBrokenError`.
    """
    x, fv = b.x, b.fv
    c = b._CENTRE
    n = len(x)
    t, ft = (xtrial,), (ftrial,)
    if branch == 1:
        nx, nf = x[:c] + t + x[c : n - 1], fv[:c] + ft + fv[c : n - 1]
    elif branch == 2:
        nx, nf = x[1 : c + 1] + t + x[c + 1 :], fv[1 : c + 1] + ft + fv[c + 1 :]
    elif branch == 3:
        nx, nf = x[: c + 1] + t + x[c + 1 : n - 1], fv[: c + 1] + ft + fv[c + 1 : n - 1]
    elif branch == 4:
        nx, nf = x[1:c] + t + x[c:], fv[1:c] + ft + fv[c:]
    else:
        raise ValueError(f"branch must be 1..4, got {branch!r}")
    try:
        return type(b)(nx, nf)
    except BracketError as exc:
        raise InvariantBrokenError(
            f"update {branch} with trial {xtrial!r} broke the bracket: {exc}"
        ) from exc


def supm_minimize(
    oracle: Callable[[float], float],
    b0: ExtendedBracket7,
    cfg: SupmConfig,
    record_brackets: bool = False,
) -> SolverResult:
    """Run the fixed-constant solver from ``b0`` until the inner length
    reaches ``2 * cfg.eps`` or the iteration budget runs out."""
    b = b0
    delta = cfg.delta if cfg.delta is not None else default_delta(cfg.eps, b0.xl1, b0.xr1)
    trace = [(0, inner_length(b), b.fm)]
    branches: list[int] = []
    hist = [b] if record_brackets else None
    evals = 0
    i = 0
    status = Status.CONVERGED
    while inner_length(b) > 2.0 * cfg.eps:
        if i >= cfg.budget:
            status = Status.BUDGET_EXHAUSTED
            break
        try:
            xt = supm_step(b, cfg.alpha, delta)
        except BracketTooSmallError:
            status = Status.STALLED
            break
        ft = oracle(xt)
        evals += 1
        br = classify_branch(xt, ft, b)
        b = apply_update(br, xt, ft, b)
        i += 1
        trace.append((i, inner_length(b), b.fm))
        branches.append(br)
        if hist is not None:
            hist.append(b)
    return SolverResult(
        bracket=b,
        iterations=i,
        evaluations=evals,
        trace=trace,
        status=status,
        branches=branches,
        bracket_trace=hist,
    )
