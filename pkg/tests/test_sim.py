import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from lavascoop.errors import ContractViolation, InvalidActionError, MissingTargetError
from lavascoop.geometry import BowlModel, Vec2, centroid_distance
from lavascoop.primitives import DirectScoop, WallGuidedScoop, ideal_insertion
from lavascoop.sim import (
    DEFAULT_PARAMS,
    BowlState,
    BulkFood,
    Chunk,
    apply_push,
    apply_scoop,
    chunks_inside,
    depth_at_volume,
    drift_step,
    is_cleared,
    rotate_bowl,
    volume_at_depth,
)
from lavascoop.trajectory import Trajectory, adapt_trajectory, default_library

BOWL = BowlModel()
LIB = default_library()
rng = np.random.default_rng


def direct(h):
    return adapt_trajectory(LIB.template("direct"), DirectScoop(h), BOWL)


def paraboloid_volume_oracle(h_cm, bowl):
    """Integrate the horizontal cross-sections of r(z)^2 = R^2 z / d."""
    R, d = bowl.radius * 100, bowl.inner_depth * 100
    return quad(lambda z: math.pi * R * R * z / d, 0.0, h_cm)[0]


class TestVolume:
    @pytest.mark.parametrize("h", [0.5, 2.0, 4.0, 5.5, 7.0])
    def test_matches_integration(self, h):
        assert volume_at_depth(h, BOWL) == pytest.approx(paraboloid_volume_oracle(h, BOWL), rel=1e-12)

    @given(st.floats(0, 7))
    def test_depth_inverts_volume(self, h):
        assert depth_at_volume(volume_at_depth(h, BOWL), BOWL) == pytest.approx(h, abs=1e-9)

    def test_bulk_invariants(self):
        with pytest.raises(ContractViolation):
            BulkFood("liquid", 1.0, 0.0, 1.0)
        with pytest.raises(ContractViolation):
            BulkFood("gravy", 1.0, 1.0, 1.0)
        with pytest.raises(ContractViolation):
            BulkFood("liquid", 1.0, 1.0, 1.5)
        assert BulkFood.from_volume("liquid", 0.0, BOWL).depth_h == 0.0


class TestScoop:
    def test_perfect_water_scoop(self):
        bulk = BulkFood.from_volume("liquid", 100.0, BOWL)
        state = BowlState(BOWL, bulk)
        tr = direct(5.5)
        tr = Trajectory(
            np.column_stack([tr.waypoints[:, :4], tr.waypoints[:, 4] - tr.insertion + ideal_insertion(bulk.depth_h, BOWL)]),
            tr.duration,
            "direct",
        )
        new, out = apply_scoop(state, tr, 10.0, rng(0))
        assert out.scooped_volume == pytest.approx(10.0) and out.spilled == 0.0
        assert new.bulk.volume == pytest.approx(90.0)
        assert new.bulk.depth_h == pytest.approx(depth_at_volume(90.0, BOWL))
        assert out.duration == tr.duration

    def test_empty_bowl(self):
        state = BowlState(BOWL)
        new, out = apply_scoop(state, direct(2.0), 10.0, rng(0))
        assert out.scooped_volume == 0.0 and out.spilled == 0.0
        assert new == replace(state, attempts=1)

    def test_depth_error_spills_liquid_not_granular(self):
        for kind, expect_spill in (("liquid", True), ("granular", False)):
            state = BowlState(BOWL, BulkFood.from_depth(kind, 5.5, BOWL))
            _, out = apply_scoop(state, direct(2.0), 10.0, rng(0))
            assert (out.spilled > 0) == expect_spill

    def test_sweep_breaks_chunk_on_path(self):
        r = BOWL.radius
        target = Chunk(0, Vec2(0.9 * r, 0.0), 0.006)
        other = Chunk(1, Vec2(0.7 * r, 0.0), 0.006)
        state = BowlState(BOWL, None, (target, other))
        tr = adapt_trajectory(LIB.template("wall-guided"), WallGuidedScoop(0.7 * r, 0, 0.0), BOWL)
        # independent check: sample the contact path densely and measure clearance
        w = tr.waypoints[tr.waypoints[:, 4] > 0]
        s = np.linspace(0, 1, 200)[:, None]
        pts = np.concatenate([w[i, :2] + s * (w[i + 1, :2] - w[i, :2]) for i in range(len(w) - 1)])
        clearance = np.min(np.hypot(pts[:, 0] - other.pos.x, pts[:, 1] - other.pos.y))
        assert clearance < other.radius + DEFAULT_PARAMS.footprint
        new, out = apply_scoop(state, tr, 10.0, rng(0), replace(DEFAULT_PARAMS, breakage_p=1.0))
        assert out.scooped_chunks == (0,) and out.broken == (1,)
        assert new.chunk(1).intact is False

    def test_empty_trajectory_rejected(self):
        with pytest.raises(InvalidActionError):
            apply_scoop(BowlState(BOWL), None, 10.0, rng(0))

    def test_bad_capacity(self):
        with pytest.raises(ContractViolation):
            apply_scoop(BowlState(BOWL), direct(2.0), 0.0, rng(0))

    @settings(max_examples=100, deadline=None)
    @given(
        st.sampled_from(["granular", "liquid", "semisolid"]),
        st.floats(0.0, 7.0),
        st.sampled_from([5.5, 4.0, 2.0]),
        st.floats(1.0, 20.0),
    )
    def test_mass_conservation(self, kind, h, cls, cap):
        state = BowlState(BOWL, BulkFood.from_depth(kind, h, BOWL))
        new, out = apply_scoop(state, direct(cls), cap, rng(1))
        before, after = state.bulk_volume, new.bulk_volume
        assert abs(before - (after + out.scooped_volume + out.spilled)) <= 1e-9
        assert out.scooped_volume >= 0 and out.spilled >= 0 and after <= before


class TestPush:
    def test_push_to_margin(self):
        c = Chunk(0, Vec2(0.03, 0.01), 0.006)
        state = BowlState(BOWL, None, (c,))
        disp = Vec2(-0.03, -0.01) * (1 - 0.006 / math.hypot(0.03, 0.01))
        new, out = apply_push(state, 0, disp, rng(0))
        assert centroid_distance(new.chunk(0).pos, BOWL) == pytest.approx(0.006, abs=1e-12)
        assert out.duration == pytest.approx(disp.norm() / DEFAULT_PARAMS.push_speed)

    def test_zero_push_is_identity(self):
        state = BowlState(BOWL, None, (Chunk(0, Vec2(0.01, 0.0), 0.006),))
        new, out = apply_push(state, 0, Vec2(0.0, 0.0), rng(0))
        assert new is state and out.duration == 0.0

    def test_collision_breaks_exactly_one(self):
        a = Chunk(0, Vec2(-0.02, 0.0), 0.006)
        b = Chunk(1, Vec2(0.0, 0.003), 0.006)
        state = BowlState(BOWL, None, (a, b))
        start, end = a.pos, a.pos + Vec2(0.04, 0.0)
        # independent oracle: closest approach of b's centre to the sweep segment
        t = np.linspace(0, 1, 10001)
        gap = np.min(np.hypot(start.x + t * (end.x - start.x) - b.pos.x, start.y - b.pos.y))
        assert gap < a.radius + b.radius
        new, out = apply_push(state, 0, Vec2(0.04, 0.0), rng(0), replace(DEFAULT_PARAMS, breakage_p=1.0))
        assert out.broken == (1,) and new.broken_total == 1
        assert chunks_inside(new)

    def test_unknown_and_broken_targets(self):
        state = BowlState(BOWL, None, (Chunk(0, Vec2(0.0, 0.0), 0.006, intact=False),))
        with pytest.raises(MissingTargetError):
            apply_push(state, 7, Vec2(0.01, 0.0), rng(0))
        with pytest.raises(InvalidActionError):
            apply_push(state, 0, Vec2(0.01, 0.0), rng(0))

    def test_push_clamped_inside(self):
        state = BowlState(BOWL, None, (Chunk(0, Vec2(0.0, 0.0), 0.006),))
        new, _ = apply_push(state, 0, Vec2(1.0, 0.0), rng(0))
        assert centroid_distance(new.chunk(0).pos, BOWL) == pytest.approx(BOWL.radius - 0.006)


class TestDrift:
    def chunks(self):
        return tuple(Chunk(i, Vec2(0.01 * i - 0.01, 0.005), 0.006) for i in range(3))

    def test_granular_is_still(self):
        state = BowlState(BOWL, BulkFood.from_depth("granular", 4.0, BOWL), self.chunks())
        assert drift_step(state, rng(0)).chunks == state.chunks

    def test_liquid_step_bound(self):
        state = BowlState(BOWL, BulkFood.from_depth("liquid", 4.0, BOWL), self.chunks())
        g = rng(5)
        for _ in range(10_000):
            new = drift_step(state, g)
            for a, b in zip(state.chunks, new.chunks):
                assert math.hypot(b.pos.x - a.pos.x, b.pos.y - a.pos.y) <= 0.02 + 1e-15
            assert chunks_inside(new)
            state = new

    def test_deterministic(self):
        state = BowlState(BOWL, BulkFood.from_depth("liquid", 4.0, BOWL), self.chunks())
        assert drift_step(state, rng(3)) == drift_step(state, rng(3))


class TestRotate:
    def test_full_turn(self):
        state = BowlState(BOWL, None, (Chunk(0, Vec2(0.02, 0.01), 0.006),))
        p = rotate_bowl(state, 2 * math.pi).chunk(0).pos
        assert abs(p.x - 0.02) < 1e-9 and abs(p.y - 0.01) < 1e-9

    def test_quarter_turn(self):
        state = BowlState(BOWL, None, (Chunk(0, Vec2(BOWL.radius / 2, 0.0), 0.006),))
        p = rotate_bowl(state, math.pi / 2).chunk(0).pos
        assert p.x == pytest.approx(0.0, abs=1e-12) and p.y == pytest.approx(BOWL.radius / 2)

    def test_eight_eighths_compose_to_identity(self):
        state = BowlState(BOWL, None, (Chunk(0, Vec2(0.011, -0.027), 0.006),))
        s = state
        for _ in range(8):
            s = rotate_bowl(s, math.pi / 4)
        p = s.chunk(0).pos
        assert abs(p.x - 0.011) < 1e-9 and abs(p.y + 0.027) < 1e-9
        assert s.bowl.rotation == pytest.approx(2 * math.pi)


class TestCleared:
    def test_cases(self):
        assert is_cleared(BowlState(BOWL), 5.0)
        assert not is_cleared(BowlState(BOWL, None, (Chunk(0, Vec2(0.0, 0.0), 0.006),)), 5.0)
        state = BowlState(BOWL, BulkFood.from_volume("liquid", 5.0, BOWL))
        assert is_cleared(state, 5.0)
        assert not is_cleared(state, 4.999)
        broken = BowlState(BOWL, None, (Chunk(0, Vec2(0.0, 0.0), 0.006, intact=False),))
        assert is_cleared(broken, 0.0)

    def test_negative_threshold(self):
        with pytest.raises(ContractViolation):
            is_cleared(BowlState(BOWL), -1.0)


def test_duplicate_ids_rejected():
    c = Chunk(0, Vec2(0.0, 0.0), 0.006)
    with pytest.raises(ContractViolation):
        BowlState(BOWL, None, (c, c))
