import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import offset_betti_profile
from topoteach.shapes import (
    BarbellAnnulus,
    Circle,
    ReachProfile,
    Torus,
    contains,
    derive_rng,
    hole_fill_scale,
    make_shape,
    reach_profile,
    sample_uniform,
    target_betti,
)


def test_empty_sample():
    assert len(sample_uniform(Circle(1.0), 0, 7)) == 0


def test_circle_samples_on_manifold():
    pts = sample_uniform(Circle(1.0), 1000, 1)
    assert np.max(np.abs(np.linalg.norm(pts, axis=1) - 1)) < 1e-12


def test_barbell_left_right_balance():
    pts = sample_uniform(BarbellAnnulus(), 500, 3)
    frac = np.mean(pts[:, 0] < 0)
    assert abs(frac - 0.5) <= 0.06


@pytest.mark.parametrize("shape", [Circle(1.0), Circle(2.0, (1.0, -3.0)), Torus(1.0, 2.5), BarbellAnnulus()])
def test_samples_pass_membership(shape):
    pts = sample_uniform(shape, 300, 11)
    assert pts.shape == (300, shape.dim)
    assert all(contains(shape, p) for p in pts)


@pytest.mark.parametrize("shape", [Circle(1.0), Torus(1.0, 2.5), BarbellAnnulus()])
def test_sampling_is_deterministic(shape):
    a = sample_uniform(shape, 200, 5)
    b = sample_uniform(shape, 200, 5)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, sample_uniform(shape, 200, 6))


def test_derived_streams_are_independent_of_order():
    a = derive_rng(42, 500, 3).random(4)
    derive_rng(42, 100, 0).random(10)
    assert np.array_equal(a, derive_rng(42, 500, 3).random(4))
    assert not np.array_equal(a, derive_rng(42, 500, 4).random(4))


def test_contains_examples():
    assert contains(Circle(1.0), (1.0, 0.0))
    assert not contains(Circle(1.0), (0.0, 0.0))
    assert not contains(BarbellAnnulus(), (0.0, 0.0))
    assert contains(Torus(1.0, 2.5), (3.5, 0.0, 0.0))
    assert not contains(Torus(1.0, 2.5), (2.5, 0.0, 0.0))


def test_contains_dimension_mismatch():
    with pytest.raises(ValueError):
        contains(Circle(1.0), (1.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        contains(Torus(1.0, 2.5), (1.0, 0.0))


def test_torus_area_weighting():
    # outer half (cos theta > 0) carries (pi*r2 + 2*r1)/(2*pi*r2) of the area
    r1, r2 = 1.0, 2.5
    pts = sample_uniform(Torus(r1, r2), 20000, 9)
    rho = np.hypot(pts[:, 0], pts[:, 1])
    frac = np.mean(rho > r2)
    want = (math.pi * r2 + 2 * r1) / (2 * math.pi * r2)
    assert abs(frac - want) < 3 * math.sqrt(want * (1 - want) / 20000)


def test_barbell_mirror_symmetry():
    pts = sample_uniform(BarbellAnnulus(), 20000, 4)
    n = len(pts)
    for col in (0, 1):
        sd = np.std(pts[:, col]) / math.sqrt(n)
        assert abs(np.mean(pts[:, col])) < 3 * sd


@pytest.mark.parametrize("bad", [
    lambda: Circle(0.0),
    lambda: Torus(1.0, 1.0),
    lambda: Torus(2.0, 1.0),
    lambda: BarbellAnnulus(hole_neck_halfwidth=1.2),
    lambda: BarbellAnnulus(outer_neck_halfwidth=0.2),
])
def test_invalid_shapes_rejected(bad):
    with pytest.raises(ValueError):
        bad()


def test_make_shape():
    assert make_shape("torus", tube_radius=0.5, core_radius=2.0) == Torus(0.5, 2.0)
    with pytest.raises(ValueError):
        make_shape("sphere")
    with pytest.raises(ValueError):
        make_shape("circle", bogus=1)


def test_target_betti():
    assert target_betti(Circle()) == (1, 1, 0)
    assert target_betti(Torus()) == (1, 2, 1)
    assert target_betti(BarbellAnnulus()) == (1, 1, 0)


def test_reach_values():
    assert reach_profile(Circle(1.0)) == ReachProfile(1.0, 1.0)
    assert reach_profile(Circle(3.0)).reach == 3.0
    rp = reach_profile(Torus(1.0, 2.5))
    assert (rp.reach, rp.topological_reach) == (1.0, 1.0)
    rp = reach_profile(BarbellAnnulus())
    assert rp.reach == pytest.approx(0.26)
    assert rp.reach <= rp.topological_reach


@given(w=st.floats(0.05, 0.3), gap=st.floats(0.02, 0.2))
@settings(max_examples=40, deadline=None)
def test_reach_below_topological_reach(w, gap):
    shape = BarbellAnnulus(hole_neck_halfwidth=w, outer_neck_halfwidth=w + gap,
                           lobe_hole_radius=1.0, lobe_outer_radius=1.1)
    rp = reach_profile(shape)
    assert rp.reach <= rp.topological_reach
    assert rp.topological_reach <= hole_fill_scale(shape)


def test_barbell_offset_homotopy_scales():
    """Pixel oracle on the eps-offset: one hole up to the neck gap, two lobe holes up to the hole radius."""
    shape = BarbellAnnulus()
    tau = reach_profile(shape).topological_reach
    rho = hole_fill_scale(shape)
    eps = [0.05, 0.15, tau - 0.02, tau + 0.02, 0.6, rho - 0.03, rho + 0.03]
    prof = offset_betti_profile(shape.mask, shape.bbox, 0.004, eps)
    assert prof[0.05] == (1, 1)
    assert prof[0.15] == (1, 1)
    assert prof[tau - 0.02] == (1, 1)
    assert prof[tau + 0.02] == (1, 2)  # neck closed: each lobe keeps its own hole
    assert prof[0.6] == (1, 2)
    assert prof[rho - 0.03] == (1, 2)
    assert prof[rho + 0.03] == (1, 0)


def test_torus_tube_fills_at_tube_radius():
    """Dense-sample Cech oracle: the enclosed void dies close to r1."""
    from topoteach.complex import delaunay_cech_filtration
    from topoteach.homology import persistence

    pts = sample_uniform(Torus(1.0, 2.5), 1500, 0)
    bc = persistence(delaunay_cech_filtration(pts, max_radius=3.0))
    h2 = [bar for bar in bc.of_dim(2) if bar[1] - bar[0] > 0.3]
    assert len(h2) == 1
    assert h2[0][1] == pytest.approx(1.0, abs=0.05)
