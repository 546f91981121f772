"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np

from kinkline.brackets import make_extended7


def kink_objective(rng: np.random.Generator):
    """Random max-of-two-quadratics with a kink minimum.

    Returns (f, f_left, f_right, kink, radius): within ``radius`` of the
    kink the left piece is active below it and the right piece above it,
    f decreases then increases, and both pieces have constant second
    derivative (so any positive curvature adjustment underestimates them).
    """
    k = rng.uniform(-0.3, 0.3)
    al, ar = rng.uniform(0.0, 2.0, 2)
    sl, sr = rng.uniform(0.2, 2.0, 2)

    def f_left(x):
        return al * (x - k) ** 2 - sl * (x - k)

    def f_right(x):
        return ar * (x - k) ** 2 + sr * (x - k)

    def f(x):
        return np.maximum(f_left(x), f_right(x))

    radius = min(1.0, 0.9 * (sl + sr) / (abs(al - ar) + 1e-9))
    return f, f_left, f_right, k, radius


def kink_bracket(rng: np.random.Generator, f, k: float, radius: float):
    """Seven-point bracket around the kink with flanks on their own pieces."""
    while True:
        lefts = np.sort(rng.uniform(k - radius, k - radius / 50.0, 3))
        rights = np.sort(rng.uniform(k + radius / 50.0, k + radius, 3))
        xm = rng.uniform(k - radius / 100.0, k + radius / 100.0)
        pts = (*lefts, xm, *rights)
        try:
            return make_extended7(pts, tuple(float(f(p)) for p in pts))
        except Exception:
            continue
