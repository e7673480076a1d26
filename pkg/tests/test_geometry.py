import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lavascoop.errors import ContractViolation, DegenerateGeometryError
from lavascoop.geometry import (
    BowlModel,
    Subregion,
    Vec2,
    alignment_angle,
    centroid_distance,
    classify_subregion,
    clamp_to_disc,
    point_segment_distance,
    polyline_distance,
    push_vector,
    rotate_about,
    wrap_angle,
)

BOWL = BowlModel()
finite = st.floats(-10, 10, allow_nan=False)


def quadrant_heading(dx, dy):
    """Heading of (dx, dy) built from atan and explicit quadrant cases."""
    if dx > 0:
        return math.atan(dy / dx)
    if dx < 0:
        return math.atan(dy / dx) + (math.pi if dy >= 0 else -math.pi)
    return math.copysign(math.pi / 2, dy)


def brute_force_subregion(target, pts, bowl, wall=0.75, center=0.3):
    fracs = [math.hypot(p[0] - bowl.center.x, p[1] - bowl.center.y) / bowl.radius for p in pts]
    i = pts.index(target)
    if fracs[i] <= center:
        return "R2"
    if fracs[i] < wall:
        return "R3"
    wall_pts = sorted(p for p, f in zip(pts, fracs) if f >= wall)
    return "R1" if tuple(wall_pts[-1]) == tuple(target) else "R3"


class TestAlignmentAngle:
    @pytest.mark.parametrize("k", range(8))
    def test_compass_points_match_quadrant_oracle(self, k):
        a = k * math.pi / 4
        target = (0.03 * math.cos(a), 0.03 * math.sin(a))
        expected = wrap_angle(quadrant_heading(-target[0], -target[1]))
        assert alignment_angle(target, (0.0, 0.0)) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize(
        "d, expected",
        [
            ((1, 0), 0.0),
            ((1, 1), math.pi / 4),
            ((0, 1), math.pi / 2),
            ((-1, 1), 3 * math.pi / 4),
            ((-1, 0), math.pi),
            ((-1, -1), -3 * math.pi / 4),
            ((0, -1), -math.pi / 2),
            ((1, -1), -math.pi / 4),
        ],
    )
    def test_compass_headings_exact(self, d, expected):
        # target sits opposite the heading it must travel to reach the center
        assert alignment_angle((-d[0], -d[1]), (0.0, 0.0)) == expected

    def test_target_east_points_west(self):
        assert alignment_angle((0.03, 0.0), (0.0, 0.0)) == pytest.approx(math.pi)

    def test_coincident_raises(self):
        with pytest.raises(DegenerateGeometryError):
            alignment_angle((0.0, 0.0), (0.0, 0.0))


class TestPushVector:
    def test_postcondition_on_random_targets(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            r = rng.uniform(0.005, BOWL.radius)
            a = rng.uniform(-math.pi, math.pi)
            t = Vec2(r * math.cos(a), r * math.sin(a))
            margin = rng.uniform(0.0, r * 0.99)
            end = t + push_vector(t, BOWL, margin)
            assert abs(centroid_distance(end, BOWL) - margin) < 1e-9

    def test_target_at_center_is_degenerate(self):
        with pytest.raises(DegenerateGeometryError):
            push_vector((0.0, 0.0), BOWL, 0.0)

    def test_margin_beyond_distance_is_degenerate(self):
        with pytest.raises(DegenerateGeometryError):
            push_vector((0.01, 0.0), BOWL, 0.02)


class TestClassifySubregion:
    def test_matches_brute_force_on_random_layouts(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            n = int(rng.integers(1, 7))
            r = BOWL.radius * np.sqrt(rng.uniform(0, 1, n))
            a = rng.uniform(-math.pi, math.pi, n)
            pts = [(float(x), float(y)) for x, y in zip(r * np.cos(a), r * np.sin(a))]
            for p in pts:
                got = classify_subregion(p, pts, BOWL)
                assert got.value == brute_force_subregion(p, pts, BOWL)

    def test_single_wall_item_is_r1(self):
        assert classify_subregion((0.035, 0.0), [(0.035, 0.0)], BOWL) == Subregion.R1

    def test_center_item_is_r2(self):
        assert classify_subregion((0.0, 0.001), [(0.0, 0.001)], BOWL) == Subregion.R2

    def test_only_rightmost_wall_item_is_r1(self):
        pts = [(0.035, 0.0), (-0.035, 0.0)]
        assert classify_subregion(pts[1], pts, BOWL) == Subregion.R3

    def test_missing_target_raises(self):
        with pytest.raises(ContractViolation):
            classify_subregion((0.01, 0.0), [(0.02, 0.0)], BOWL)

    def test_bad_bands_raise(self):
        with pytest.raises(ContractViolation):
            classify_subregion((0.01, 0.0), [(0.01, 0.0)], BOWL, wall_band=0.2, center_band=0.3)


@given(st.floats(-1e3, 1e3, allow_nan=False))
def test_wrap_angle_range_and_equivalence(a):
    w = wrap_angle(a)
    assert -math.pi < w <= math.pi
    assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-9)
    assert math.isclose(math.sin(w), math.sin(a), abs_tol=1e-9)


@given(finite, finite, st.floats(-7, 7))
def test_rotate_about_preserves_distance(x, y, ang):
    p = rotate_about((x, y), (1.0, -2.0), ang)
    assert math.hypot(p.x - 1.0, p.y + 2.0) == pytest.approx(math.hypot(x - 1.0, y + 2.0), abs=1e-9)


def test_quarter_turn():
    p = rotate_about((0.02, 0.0), (0.0, 0.0), math.pi / 2)
    assert p.x == pytest.approx(0.0, abs=1e-15) and p.y == pytest.approx(0.02)


@given(finite, finite, st.floats(0.0, 5.0))
def test_clamp_to_disc(x, y, r):
    p = clamp_to_disc((x, y), (0.0, 0.0), r)
    assert math.hypot(*p) <= r + 1e-9
    if math.hypot(x, y) <= r:
        assert p == (x, y)


@given(finite, finite, finite, finite, finite, finite)
def test_point_segment_distance_against_sampling(px, py, ax, ay, bx, by):
    s = np.linspace(0, 1, 2001)[:, None]
    pts = np.array([ax, ay]) + s * np.array([bx - ax, by - ay])
    sampled = np.min(np.hypot(pts[:, 0] - px, pts[:, 1] - py))
    d = point_segment_distance((px, py), (ax, ay), (bx, by))
    assert d <= sampled + 1e-9
    step = math.hypot(bx - ax, by - ay) / 2000
    assert sampled - d <= step + 1e-9


def test_polyline_single_point():
    assert polyline_distance((3.0, 4.0), [(0.0, 0.0)]) == 5.0


def test_vec2_arithmetic():
    a, b = Vec2(1.0, 2.0), Vec2(0.5, -1.0)
    assert a + b == Vec2(1.5, 1.0)
    assert a - b == Vec2(0.5, 3.0)
    assert a * 2 == Vec2(2.0, 4.0)
    assert -a == Vec2(-1.0, -2.0)
    assert Vec2(3.0, 4.0).norm() == 5.0


def test_bowl_validation():
    with pytest.raises(ContractViolation):
        BowlModel(radius=-1.0)


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(1e-3, 0.5))
def test_clamp_to_disc_never_overshoots(x, y, r):
    from lavascoop.geometry import clamp_to_disc

    q = clamp_to_disc((x, y), (0.0, 0.0), r)
    assert math.hypot(*q) <= r
