"""Tests for angle and pose helpers."""

import math

import pytest
from vexplore.geometry import Pose, bearing, distance, normalize_angle


class TestNormalizeAngle:
    @pytest.mark.parametrize(
        ("angle", "expected"),
        [
            (0.0, 0.0),
            (math.pi, math.pi),
            (-math.pi, math.pi),
            (3 * math.pi, math.pi),
            (2 * math.pi + 0.25, 0.25),
            (-math.pi / 2, -math.pi / 2),
        ],
    )
    def test_wraps_into_half_open_interval(self, angle, expected):
        assert normalize_angle(angle) == pytest.approx(expected)

    def test_result_is_never_below_minus_pi(self):
        for k in range(-20, 21):
            a = normalize_angle(k * 0.7)
            assert -math.pi < a <= math.pi


class TestPose:
    def test_heading_is_normalized(self):
        assert Pose(0.0, 0.0, 3 * math.pi).heading == pytest.approx(math.pi)

    def test_advanced_moves_along_heading(self):
        pose = Pose(1.0, 2.0, math.pi / 2).advanced(0.5)
        assert pose.x == pytest.approx(1.0)
        assert pose.y == pytest.approx(2.5)
        assert pose.heading == pytest.approx(math.pi / 2)

    def test_rotated_keeps_position(self):
        pose = Pose(1.0, 2.0, 0.0).rotated(-math.radians(10))
        assert pose.position == (1.0, 2.0)
        assert pose.heading == pytest.approx(-math.radians(10))

    def test_dict_round_trip(self):
        pose = Pose(0.25, -1.5, 1.0)
        assert Pose.from_dict(pose.to_dict()) == pose

    def test_from_dict_defaults_heading(self):
        assert Pose.from_dict({"x": 1, "y": 2}).heading == 0.0


def test_distance_and_bearing():
    assert distance((0.0, 0.0), (3.0, 4.0)) == pytest.approx(5.0)
    assert bearing((0.0, 0.0), (0.0, -1.0)) == pytest.approx(-math.pi / 2)
