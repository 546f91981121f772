"""Command-line front end.

Subcommands: ``minimize`` (one seeded run with optional trace dump),
``bench`` (the rate tables), ``seqexp`` (the oracle-free bit-pattern
experiment), ``verify`` (contraction and symmetry checks) and
``list-functions``.  Every subcommand is deterministic for a given
``--seed``; the ``KINKLINE_SEED`` environment variable supplies a
fallback seed.  Exit codes: 0 success, 1 solver or check failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .brackets import reflect
from .eupm import (
    MINIMAL_SEQUENCES,
    all_branch_sequences,
    bracket_check,
    eupm_step,
    gap_sequence_ratios,
)
from .supm import apply_update
from .harness import (
    PAPER_ALGORITHMS,
    SUITES,
    TrialConfig,
    minimize_once,
    random_bracket5,
    run_benchmark,
    run_sequence_experiment,
    sample_simplex,
    write_benchmark_csv,
    write_sequence_csv,
    write_trace_csv,
)
from .testfuncs import list_functions


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    return int(os.environ.get("KINKLINE_SEED", "0"))


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w"), True


def _cmd_list_functions(args) -> int:
    for f in list_functions():
        a, b = f.domain
        print(f"{f.fid}  {f.category.value}  [{a:g}, {b:g}]  {f.formula}")
    return 0


def _cmd_minimize(args) -> int:
    seed = _resolve_seed(args.seed)
    points = None
    if args.bracket:
        points = [float(tok) for tok in args.bracket.split(",")]
    result, bracket = minimize_once(
        args.function,
        args.algorithm,
        seed=seed,
        eps=args.eps,
        budget=args.budget,
        bracket_points=points,
    )
    if args.trace:
        out, close = _open_out(args.trace)
        try:
            write_trace_csv(
                result,
                out,
                header=f"kinkline minimize function={args.function} "
                f"algorithm={args.algorithm} seed={seed} eps={args.eps:g} "
                f"budget={args.budget}",
            )
        finally:
            if close:
                out.close()
    d = result.trace[-1][1]
    fm = result.trace[-1][2]
    print(
        f"{args.function} {args.algorithm}: {result.status.value} "
        f"iterations={result.iterations} evaluations={result.evaluations} "
        f"d={d:.3e} f={fm:.10g}"
    )
    return 0 if result.converged else 1


def _cmd_bench(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.functions:
        functions = tuple(tok.strip().upper() for tok in args.functions.split(","))
    else:
        functions = SUITES[args.suite]
    algorithms = tuple(s for s in PAPER_ALGORITHMS if s not in (args.skip or ()))
    cfg = TrialConfig(
        functions=functions,
        algorithms=algorithms,
        trials=args.trials,
        eps=args.eps,
        budget=args.budget,
        seed=seed,
    )
    report = run_benchmark(cfg, jobs=args.jobs)
    out, close = _open_out(args.out)
    try:
        write_benchmark_csv(report, out, latex_labels=args.latex_labels)
    finally:
        if close:
            out.close()
    return 0


def _cmd_seqexp(args) -> int:
    seed = _resolve_seed(args.seed)
    rows = run_sequence_experiment(bits=args.bits, samples=args.samples, seed=seed)
    out, close = _open_out(args.out)
    try:
        write_sequence_csv(rows, out, seed=seed, samples=args.samples)
    finally:
        if close:
            out.close()
    return 0


def _verify_sequences(samples: int, seed: int) -> bool:
    """Per-sequence contraction bound over random feasible gap vectors."""
    rng = np.random.default_rng([seed, 4])
    ok = True
    print("sequence   feasible      max ratio")
    for seq in MINIMAL_SEQUENCES:
        got = 0
        worst = -math.inf
        tries = 0
        while got < samples and tries < 200:
            p = sample_simplex(rng, samples)
            ratios, feas = gap_sequence_ratios(p, seq)
            if feas.any():
                worst = max(worst, float(np.max(ratios[feas])))
                got += int(feas.sum())
            tries += 1
        label = "".join(map(str, seq))
        good = worst < 0.5
        ok &= good
        print(f"{label:<10} {got:>8}  {worst:.12f}  {'ok' if good else 'FAIL'}")
    return ok


def _verify_contraction(samples: int, seed: int) -> bool:
    """Exhaustive five-step bound over all update sequences."""
    rng = np.random.default_rng([seed, 5])
    worst = -math.inf
    worst_seq = None
    for seq in all_branch_sequences(5):
        p = sample_simplex(rng, samples)
        ratios, feas = gap_sequence_ratios(p, seq)
        if feas.any():
            m = float(np.max(ratios[feas]))
            if m > worst:
                worst, worst_seq = m, seq
    good = worst <= 0.5 + 1e-12
    print(
        f"five-step contraction: max ratio {worst:.12f} "
        f"at {''.join(map(str, worst_seq))}  {'ok' if good else 'FAIL'}"
    )
    return good


def _verify_symmetry(samples: int, seed: int) -> bool:
    """Mirror identities of the closed-form step and updates."""
    rng = np.random.default_rng([seed, 6])
    eps = sys.float_info.epsilon
    worst = 0.0
    for _ in range(samples):
        b = random_bracket5(rng)
        span = b.x[-1] - b.x[0]
        rb = reflect(b)
        err = abs(eupm_step(rb) + eupm_step(b))
        err = max(err, max(abs(u - v) for u, v in zip(reflect(rb).x, b.x)))
        if bracket_check(b) > 0.0:
            b, rb = rb, b
        if bracket_check(b) < 0.0:
            for br, mirrored in ((1, 2), (4, 3)):
                improving = br == 1
                ft = b.fm - 1.0 if improving else b.fm + 1.0
                direct = apply_update(br, eupm_step(b), ft, b)
                ft_m = rb.fm - 1.0 if improving else rb.fm + 1.0
                mirror = reflect(apply_update(mirrored, eupm_step(rb), ft_m, rb))
                err = max(err, max(abs(u - v) for u, v in zip(direct.x, mirror.x)))
        worst = max(worst, err / (4.0 * eps * span))
    good = worst <= 1.0
    print(f"reflection identities: worst deviation {worst:.3f} of tolerance  "
          f"{'ok' if good else 'FAIL'}")
    return good


def _cmd_verify(args) -> int:
    seed = _resolve_seed(args.seed)
    run_all = not (args.sequences or args.contraction or args.symmetry)
    ok = True
    if args.sequences or run_all:
        ok &= _verify_sequences(args.samples, seed)
    if args.contraction or run_all:
        ok &= _verify_contraction(args.samples, seed)
    if args.symmetry or run_all:
        ok &= _verify_symmetry(min(args.samples, 20000), seed)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kinkline",
        description="Derivative-free univariate minimization of piecewise-smooth functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list-functions", help="print the test-function registry")
    p.set_defaults(func=_cmd_list_functions)

    p = sub.add_parser("minimize", help="one seeded run of one algorithm")
    p.add_argument("--function", required=True, help="test function id, e.g. NU3")
    p.add_argument(
        "--algorithm",
        default="dupm",
        help="dupm, eupm, brent, golden, mifflin or supm:<alpha>",
    )
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--budget", type=int, default=500)
    p.add_argument("--trace", help="write the per-iteration trace CSV here")
    p.add_argument(
        "--bracket",
        help="comma-separated list of 7 starting abscissae (sorted before use)",
    )
    p.set_defaults(func=_cmd_minimize)

    p = sub.add_parser("bench", help="average convergence-rate tables")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.add_argument("--functions", help="comma-separated function ids (overrides --suite)")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--budget", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.add_argument(
        "--skip",
        action="append",
        choices=["mifflin"],
        help="drop an algorithm column",
    )
    p.add_argument("--latex-labels", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers over functions")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("seqexp", help="bit-pattern contraction experiment")
    p.add_argument("--bits", type=int, default=10)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(func=_cmd_seqexp)

    p = sub.add_parser("verify", help="contraction and symmetry checks")
    p.add_argument("--sequences", action="store_true", help="per-sequence ratio bounds")
    p.add_argument("--contraction", action="store_true", help="exhaustive five-step bound")
    p.add_argument("--symmetry", action="store_true", help="reflection identities")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
