"""Reference solvers: golden section, Brent's method, Mifflin-Strodiot.

These are the standards the underestimator solvers are measured against.
All three share the solver contract: terminate when the bracketing
interval's inner length reaches ``2 * eps``, count oracle calls, and leave
a per-iteration trace of interval length and incumbent value.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable

from .brackets import Bracket3, ExtendedBracket5, inner_length
from .models import QuadModel, divided_diff1
from .result import SolverResult, Status
from .supm import (
    BracketTooSmallError,
    _min_separation,
    apply_update,
    classify_branch,
    default_delta,
    minimize_max_quadratics,
)

_EPS = sys.float_info.epsilon

#: (sqrt(5) - 1) / 2, the golden interval reduction ratio.
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
#: 1 - INVPHI, the golden fraction used for Brent's fallback steps.
CGOLD = 1.0 - INVPHI


@dataclass(frozen=True)
class BaselineConfig:
    eps: float = 1e-8
    budget: int = 500

    def __post_init__(self):
        if not self.eps > 0.0:
            raise ValueError("eps must be > 0")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")


def golden_section_minimize(
    oracle: Callable[[float], float],
    b0: Bracket3,
    cfg: BaselineConfig,
    record_brackets: bool = False,
) -> SolverResult:
    """Classic golden section search on the interval of ``b0``.

    The interior point of ``b0`` is discarded and two fresh probes are
    placed at the golden positions (two oracle calls up front), after which
    every iteration costs one call and multiplies the retained interval by
    INVPHI exactly, by construction.

    The incumbent value in the trace is the best value seen so far; on a
    multimodal objective the final interval need not contain it, so the
    returned bracket is positional only.
    """
    a, b = b0.xl, b0.xr
    fa, fb = b0.fl, b0.fr
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1 = oracle(x1)
    f2 = oracle(x2)
    evals = 2
    best = min(b0.fm, f1, f2)

    def snapshot():
        if f1 <= f2:
            return Bracket3.unchecked(a, x1, b, fa, f1, fb)
        return Bracket3.unchecked(a, x2, b, fa, f2, fb)

    trace = [(0, b - a, b0.fm)]
    hist = [b0] if record_brackets else None
    i = 0
    status = Status.CONVERGED
    while b - a > 2.0 * cfg.eps:
        if i >= cfg.budget:
            status = Status.BUDGET_EXHAUSTED
            break
        if f1 < f2:
            b, fb = x2, f2
            x2, f2 = x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = oracle(x1)
        else:
            a, fa = x1, f1
            x1, f1 = x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = oracle(x2)
        evals += 1
        i += 1
        best = min(best, f1, f2)
        trace.append((i, b - a, best))
        if hist is not None:
            hist.append(snapshot())
    return SolverResult(
        bracket=snapshot(),
        iterations=i,
        evaluations=evals,
        trace=trace,
        status=status,
        bracket_trace=hist,
    )


def brent_minimize(
    oracle: Callable[[float], float],
    b0: Bracket3,
    cfg: BaselineConfig,
    record_brackets: bool = False,
) -> SolverResult:
    """Brent's parabolic-interpolation search with golden-section fallback.

    Seeded with the incumbent of ``b0`` as best, second-best and third-best
    point (its cached value is reused, so the first oracle call happens at
    the first probe).  A parabolic step is accepted only if it falls inside
    the interval and moves less than half the step taken two iterations
    ago; otherwise a golden step into the larger sub-interval is taken.
    Probes never leave the current interval, and a minimum spacing keeps
    the parabola denominators alive.
    """
    a, b = b0.xl, b0.xr
    fa, fb = b0.fl, b0.fr
    x = w = v = b0.xm
    fx = fw = fv = b0.fm
    d = e = 0.0
    trace = [(0, b - a, fx)]
    hist = [b0] if record_brackets else None
    evals = 0
    i = 0
    status = Status.CONVERGED
    while b - a > 2.0 * cfg.eps:
        if i >= cfg.budget:
            status = Status.BUDGET_EXHAUSTED
            break
        mid = 0.5 * (a + b)
        tol1 = 0.25 * cfg.eps + 64.0 * _EPS * abs(x)
        use_golden = True
        if abs(e) > tol1:
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            q = abs(q)
            etemp = e
            e = d
            if not (
                abs(p) >= abs(0.5 * q * etemp)
                or p <= q * (a - x)
                or p >= q * (b - x)
                or q == 0.0
            ):
                d = p / q
                u = x + d
                if u - a < 2.0 * tol1 or b - u < 2.0 * tol1:
                    d = tol1 if x < mid else -tol1
                use_golden = False
        if use_golden:
            e = (b - x) if x < mid else (a - x)
            d = CGOLD * e
        u = x + d if abs(d) >= tol1 else x + (tol1 if d > 0.0 else -tol1)
        fu = oracle(u)
        evals += 1
        if fu <= fx:
            if u >= x:
                a, fa = x, fx
            else:
                b, fb = x, fx
            v, fv = w, fw
            w, fw = x, fx
            x, fx = u, fu
        else:
            if u < x:
                a, fa = u, fu
            else:
                b, fb = u, fu
            if fu <= fw or w == x:
                v, fv = w, fw
                w, fw = u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
        i += 1
        trace.append((i, b - a, fx))
        if hist is not None:
            hist.append(Bracket3.unchecked(a, x, b, fa, fx, fb))
    return SolverResult(
        bracket=Bracket3.unchecked(a, x, b, fa, fx, fb),
        iterations=i,
        evaluations=evals,
        trace=trace,
        status=status,
        bracket_trace=hist,
    )


def mifflin_strodiot_minimize(
    oracle: Callable[[float], float],
    b0: ExtendedBracket5,
    cfg: BaselineConfig,
    record_brackets: bool = False,
) -> SolverResult:
    """Five-point method stepping to the crossing of the flank secants.

    After the rapidly-convergent five-point scheme of Mifflin and Strodiot
    (1993): one secant line per flank through that flank's two points, the
    next trial at the minimizer of their pointwise max over the inner
    interval, and the bracket updated by the same four insertion rules the
    five-point extremal solver uses.  The polyhedral model is exact for a
    max of affine pieces and superlinear when both pieces are convex, but
    a concave piece breaks the underestimation it relies on, so the method
    creeps at the minimum separation and exhausts its budget on non-convex
    (in particular multimodal) objectives.
    """
    b = b0
    delta = default_delta(cfg.eps, b0.xl1, b0.xr1)
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
        x, fv = b.x, b.fv
        ql = QuadModel(fv[1], divided_diff1(fv[1], fv[0], x[1], x[0]), 0.0, x[1], x[0], "L")
        qr = QuadModel(fv[3], divided_diff1(fv[3], fv[4], x[3], x[4]), 0.0, x[3], x[4], "R")
        g = minimize_max_quadratics(ql, qr, b.xl1, b.xr1, b.xm)
        try:
            xt = _min_separation(g, b.xl1, b.xm, b.xr1, delta)
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
