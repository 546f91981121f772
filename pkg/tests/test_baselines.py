import math
import sys

import numpy as np
import pytest

from kinkline.baselines import (
    INVPHI,
    BaselineConfig,
    brent_minimize,
    golden_section_minimize,
    mifflin_strodiot_minimize,
)
from kinkline.brackets import Bracket3, inner3, inner5, make_extended5, make_extended7
from kinkline.harness import convergence_rate, generate_bracket
from kinkline.result import Status
from kinkline.testfuncs import get_function, oracle_for

EPS = sys.float_info.epsilon


def bracket3(f, xl, xm, xr):
    return Bracket3(xl, xm, xr, f(xl), f(xm), f(xr))


class TestGoldenSection:
    def test_interval_ratio_exact_every_iteration(self):
        f = lambda x: x * x
        res = golden_section_minimize(f, bracket3(f, -1.0, 0.3, 2.0), BaselineConfig())
        ds = [row[1] for row in res.trace]
        for d1, d2 in zip(ds, ds[1:]):
            assert abs(d2 / d1 - INVPHI) <= 4.0 * EPS

    def test_measured_rate_is_the_golden_ratio(self):
        f = lambda x: x * x
        res = golden_section_minimize(f, bracket3(f, -1.0, 0.3, 2.0), BaselineConfig())
        assert res.status is Status.CONVERGED
        assert convergence_rate(res) == pytest.approx(INVPHI, abs=0.005)

    def test_interval_strictly_decreasing(self):
        f = math.cosh
        res = golden_section_minimize(f, bracket3(f, -2.0, 0.5, 1.0), BaselineConfig())
        ds = [row[1] for row in res.trace]
        assert all(d2 < d1 for d1, d2 in zip(ds, ds[1:]))

    def test_incumbent_value_never_increases(self):
        func = get_function("SM7")
        rng = np.random.default_rng(29)
        for _ in range(20):
            b = generate_bracket(func, rng)
            res = golden_section_minimize(oracle_for(func), inner3(b), BaselineConfig())
            fs = [row[2] for row in res.trace]
            assert all(f2 <= f1 for f1, f2 in zip(fs, fs[1:]))

    def test_budget_exhaustion(self):
        f = lambda x: x * x
        res = golden_section_minimize(f, bracket3(f, -1.0, 0.3, 2.0), BaselineConfig(budget=5))
        assert res.status is Status.BUDGET_EXHAUSTED and res.iterations == 5


class TestBrent:
    def test_exact_quadratic_hits_minimum_fast(self):
        f = lambda x: (x - 0.3) ** 2
        res = brent_minimize(f, bracket3(f, -1.0, 0.1, 2.0), BaselineConfig(), record_brackets=True)
        assert res.status is Status.CONVERGED
        assert res.evaluations <= 10
        # the first parabolic interpolation lands on the minimum to rounding
        hits = [abs(b.xm - 0.3) for b in res.bracket_trace[:5]]
        assert min(hits) <= 1e-10

    def test_probes_stay_inside_and_interval_shrinks(self):
        func = get_function("SM6")
        rng = np.random.default_rng(30)
        for _ in range(20):
            b = generate_bracket(func, rng)
            t = inner3(b)
            seen = []
            oracle = oracle_for(func)
            probe = lambda x: (seen.append(x), oracle(x))[1]
            res = brent_minimize(probe, t, BaselineConfig())
            assert all(t.xl <= x <= t.xr for x in seen)
            ds = [row[1] for row in res.trace]
            assert all(d2 <= d1 for d1, d2 in zip(ds, ds[1:]))

    def test_beats_golden_on_smooth_gaussian(self):
        func = get_function("SU1")
        rng = np.random.default_rng(31)
        br, gr = [], []
        for _ in range(20):
            b = generate_bracket(func, rng)
            br.append(brent_minimize(oracle_for(func), inner3(b), BaselineConfig()).evaluations)
            gr.append(
                golden_section_minimize(oracle_for(func), inner3(b), BaselineConfig()).evaluations
            )
        assert sum(br) * 2 <= sum(gr)

    def test_kinked_minimum_converges_but_slowly(self):
        func = get_function("NU1")
        rng = np.random.default_rng(32)
        rates = []
        for _ in range(20):
            b = generate_bracket(func, rng)
            res = brent_minimize(oracle_for(func), inner3(b), BaselineConfig())
            assert res.status is Status.CONVERGED
            rates.append(convergence_rate(res))
        assert sum(rates) / len(rates) >= 0.3  # nowhere near its smooth-case speed


class TestMifflinStrodiot:
    def test_convex_kink_converges(self):
        func = get_function("NU5")
        rng = np.random.default_rng(33)
        for _ in range(20):
            b = generate_bracket(func, rng)
            res = mifflin_strodiot_minimize(oracle_for(func), inner5(b), BaselineConfig())
            assert res.status is Status.CONVERGED

    def test_smooth_convex_converges(self):
        f = lambda x: (x - 0.4) ** 2
        pts = (-3.0, -2.0, -1.0, 0.5, 1.0, 2.0, 3.0)
        b = make_extended7(pts, tuple(f(p) for p in pts))
        res = mifflin_strodiot_minimize(f, inner5(b), BaselineConfig())
        assert res.status is Status.CONVERGED

    def test_multimodal_exhausts_budget(self):
        func = get_function("SM5")
        rng = np.random.default_rng(34)
        exhausted = 0
        for _ in range(10):
            b = generate_bracket(func, rng)
            res = mifflin_strodiot_minimize(oracle_for(func), inner5(b), BaselineConfig())
            exhausted += res.status is Status.BUDGET_EXHAUSTED
        assert exhausted == 10

    def test_incumbent_value_never_increases(self):
        func = get_function("NU3")
        rng = np.random.default_rng(35)
        for _ in range(10):
            b = generate_bracket(func, rng)
            res = mifflin_strodiot_minimize(oracle_for(func), inner5(b), BaselineConfig())
            fs = [row[2] for row in res.trace]
            assert all(f2 <= f1 for f1, f2 in zip(fs, fs[1:]))


class TestConfig:
    def test_rejects_bad_settings(self):
        with pytest.raises(ValueError):
            BaselineConfig(eps=0.0)
        with pytest.raises(ValueError):
            BaselineConfig(budget=0)
