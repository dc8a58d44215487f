import numpy as np
import pytest
from hypothesis import given, strategies as st

from dbarkoszul.grid import (build_domain, bump, cutoff_from_distance, integrate, integrate_box,
                             level_cutoff, refine, smooth_step, window, STEP_SLOPE)


def test_disc_shape_and_mask():
    d = build_domain("disc", 1.0, 1 / 8)
    assert d.shape == (17, 17)
    assert d.n == 1
    assert not d.inside_mask[0, 8]           # node on the circle is outside
    assert d.inside_mask[8, 8]


def test_polydisc_shape():
    d = build_domain("polydisc", (1.0, 0.5), 1 / 16)
    assert d.shape == (33, 33, 17, 17)
    assert d.points.shape == (*d.shape, 2)


@pytest.mark.parametrize("kind,radii,h", [("disc", 1.0, 0.0), ("disc", 1.0, 0.5),
                                          ("polydisc", (1.0,), 0.1), ("annulus", 1.0, 0.1)])
def test_invalid_domains(kind, radii, h):
    with pytest.raises(ValueError):
        build_domain(kind, radii, h)


def test_area_is_exact():
    for h in (1 / 8, 1 / 16, 1 / 32):
        d = build_domain("disc", 1.0, h)
        assert abs(integrate(d, np.ones(d.shape)) - np.pi) < 1e-12


def test_second_moment_converges():
    # int |z|^2 = pi/2; error shrinks at order >= 1.5 under refinement
    errs = []
    for h in (1 / 16, 1 / 32, 1 / 64):
        d = build_domain("disc", 1.0, h)
        errs.append(abs(integrate(d, np.abs(d.z(0)) ** 2) - np.pi / 2))
    assert errs[-1] < 1e-3
    assert np.log2(errs[0] / errs[2]) / 2 >= 1.5


def test_polydisc_volume():
    d = build_domain("polydisc", (1.0, 1.0), 1 / 8)
    assert abs(integrate(d, np.ones(d.shape)) - np.pi ** 2) < 1e-10


def test_box_trapezoid_exact_for_affine():
    d = build_domain("disc", 1.0, 1 / 8)
    x = d.z(0).real
    assert abs(integrate_box(d, 3 + 2 * x) - 3 * 4) < 1e-12


def test_refine_and_window_share_nodes():
    d = build_domain("disc", 1.0, 1 / 8)
    f = refine(d)
    assert f.h == d.h / 2
    assert np.allclose(f.points[::2, ::2], d.points)
    w = window(d, (3, 4), 5)
    assert np.allclose(w.points, d.points[3:8, 4:9])
    with pytest.raises(ValueError):
        window(d, (15, 0), 5)


@given(st.floats(-2, 3, allow_nan=False))
def test_smooth_step_range(t):
    v = float(smooth_step(np.array([t]))[0])
    assert 0.0 <= v <= 1.0
    if t <= 0:
        assert v == 1.0
    if t >= 1:
        assert v == 0.0


@given(st.floats(0, 1), st.floats(0, 1))
def test_smooth_step_monotone(a, b):
    lo, hi = min(a, b), max(a, b)
    assert smooth_step(np.array([lo]))[0] >= smooth_step(np.array([hi]))[0]


def test_smooth_step_slope_bound():
    t = np.linspace(0, 1, 20001)
    slope = np.abs(np.diff(smooth_step(t)) / np.diff(t)).max()
    assert slope <= STEP_SLOPE + 1e-6


def test_cutoff_regions():
    d = build_domain("disc", 1.0, 1 / 32)
    dist = np.abs(d.z(0))
    chi = cutoff_from_distance(d, dist, 0.2, 0.5)
    inside = d.inside_mask
    assert np.all(chi.values[inside & (dist <= 0.2)] == 1.0)
    assert np.all(chi.values[inside & (dist >= 0.5)] == 0.0)
    assert chi.grad_bound <= STEP_SLOPE / 0.3 * 1.1
    with pytest.raises(ValueError):
        cutoff_from_distance(d, dist, 0.5, 0.2)


def test_compact_bump_rejects_escape():
    d = build_domain("disc", 1.0, 1 / 16)
    with pytest.raises(ValueError):
        bump(d, [0.8], 0.1, 0.3, compact=True)
    b = bump(d, [0.0], 0.1, 0.3, compact=True)
    assert b.values[8 * 2, 8 * 2] == 1.0


def test_level_cutoff_orientation():
    d = build_domain("disc", 1.0, 1 / 16)
    r = np.abs(d.z(0))
    c = level_cutoff(d, r, 0.3, 0.6)
    inside = d.inside_mask
    assert np.all(c.values[inside & (r <= 0.3)] == 0.0)
    assert np.all(c.values[inside & (r >= 0.6)] == 1.0)
