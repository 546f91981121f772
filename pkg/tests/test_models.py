import math
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import kink_bracket, kink_objective
from kinkline.brackets import make_extended7
from kinkline.models import (
    CoincidentPointsError,
    build_model,
    divided_diff1,
    divided_diff2,
    eval_model,
    scaling_h,
)
from kinkline.supm import _raw_supm_step

EPS = sys.float_info.epsilon


class TestDividedDifferences:
    def test_square_slopes(self):
        assert divided_diff1(0.0, 1.0, 0.0, 1.0) == 1.0
        assert divided_diff1(4.0, 1.0, 2.0, 1.0) == 3.0

    def test_symmetry_first(self):
        assert divided_diff1(3.0, 7.0, 1.0, 2.5) == divided_diff1(7.0, 3.0, 2.5, 1.0)

    def test_coincident_rejected(self):
        with pytest.raises(CoincidentPointsError):
            divided_diff1(1.0, 2.0, 3.0, 3.0)
        with pytest.raises(CoincidentPointsError):
            divided_diff2(1.0, 2.0, 3.0, 0.0, 1.0, 0.0)

    def test_square_curvature(self):
        assert divided_diff2(0.0, 1.0, 4.0, 0.0, 1.0, 2.0) == 1.0

    def test_affine_curvature_zero(self):
        f = lambda x: 3.0 * x - 2.0
        assert divided_diff2(f(0.3), f(1.7), f(-2.0), 0.3, 1.7, -2.0) == pytest.approx(
            0.0, abs=1e-15
        )

    def test_cubic_curvature(self):
        f = lambda x: x**3
        assert divided_diff2(f(0.0), f(1.0), f(2.0), 0.0, 1.0, 2.0) == pytest.approx(3.0)

    @given(st.permutations([0.4, 1.3, -2.2]))
    @settings(max_examples=20, deadline=None)
    def test_full_symmetry_second(self, pts):
        f = lambda x: math.sin(x)
        a, b, c = pts
        ref = divided_diff2(f(0.4), f(1.3), f(-2.2), 0.4, 1.3, -2.2)
        got = divided_diff2(f(a), f(b), f(c), a, b, c)
        assert got == pytest.approx(ref, rel=1e-12)


class TestScaling:
    def test_symmetric(self):
        b = make_extended7(
            (-3, -2, -1, 0, 1, 2, 3), tuple(v * v for v in (-3, -2, -1, 0, 1, 2, 3))
        )
        assert scaling_h(b) == 4.0

    def test_uneven(self):
        b = make_extended7((-1, -0.9, -0.75, 0, 0.6, 0.8, 0.95), (1, 1, 1, 0, 1, 1, 1))
        assert scaling_h(b) == pytest.approx(1.7, abs=0)

    def test_bounded_by_outer_length(self):
        from kinkline.brackets import outer_length
        from kinkline.harness import random_bracket7

        rng = np.random.default_rng(5)
        for _ in range(300):
            b = random_bracket7(rng)
            assert scaling_h(b) <= outer_length(b)


def fig1_bracket():
    # piecewise sine/cosine objective with a kink minimum at the origin;
    # the printed example's sign works out so that the decreasing piece is
    # -sin(pi x/2) (see the notes ledger for the discrepancy analysis)
    f = lambda x: max(-math.sin(0.5 * math.pi * x), 1.0 - math.cos(0.5 * math.pi * x))
    pts = (-1.0, -0.9, -0.75, 0.0, 0.6, 0.8, 0.95)
    return make_extended7(pts, tuple(f(p) for p in pts)), f


class TestModels:
    def test_exact_interpolation_at_all_side_points(self):
        b, f = fig1_bracket()
        for side, idx in (("L", (0, 1, 2)), ("R", (4, 5, 6))):
            m = build_model(side, b, 0.0)
            for i in idx:
                got = eval_model(m, b.x[i])
                assert abs(got - b.fv[i]) <= 8.0 * EPS * max(1.0, abs(b.fv[i]))

    def test_fig1_models_cross_near_half_percent(self):
        b, _ = fig1_bracket()
        g = _raw_supm_step(b, 0.0)
        assert abs(g - 0.005) <= 1e-3

    def test_large_alpha_makes_models_concave(self):
        b, _ = fig1_bracket()
        for side in ("L", "R"):
            assert build_model(side, b, 100.0).c2adj < 0.0

    def test_eval_at_anchors(self):
        b, _ = fig1_bracket()
        m = build_model("L", b, 0.7)
        assert eval_model(m, m.x1) == m.c0
        assert eval_model(m, m.x2) == pytest.approx(m.c0 + m.c1 * (m.x2 - m.x1), rel=1e-14)

    def test_zero_curvature_is_affine(self):
        from kinkline.models import QuadModel

        m = QuadModel(1.0, 2.0, 0.0, 0.5, 1.5, "L")
        # affine through (x1, c0) with slope c1, checked away from anchors
        assert eval_model(m, 10.0) == pytest.approx(1.0 + 2.0 * 9.5)


class TestUnderestimation:
    def test_adjusted_models_sit_below_their_pieces(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            f, fl, fr, k, radius = kink_objective(rng)
            b = kink_bracket(rng, f, k, radius)
            alpha = 0.5  # both pieces quadratic: second derivatives constant
            ql = build_model("L", b, alpha)
            qr = build_model("R", b, alpha)
            # right model strictly below the right piece on [xl1, xr1)
            xs = b.xl1 + (b.xr1 - b.xl1) * np.arange(200) / 200.0
            assert np.all(qr(xs) < fr(xs))
            # left model strictly below the left piece on (xl1, xr1]
            xs = b.xl1 + (b.xr1 - b.xl1) * np.arange(1, 201) / 200.0
            assert np.all(ql(xs) < fl(xs))
