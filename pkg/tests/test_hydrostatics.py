"""
Hydrostatics Test Suite

Tests for the analytic floating-cuboid statics: buoyancy, metacentric
height, the righting moment curve and the stable heel angle search.

To run tests:
    pytest tests/test_hydrostatics.py -v
"""

import math

import numpy as np
import pytest

from floatforge.errors import ValidityError
from floatforge.hydrostatics import (
    FloatingCuboid,
    analytic_buoyancy,
    clip_polygon_below,
    cuboid_GM,
    equilibrium_heel_oracle,
    heeled_rectangle,
    immersed_section,
    polygon_area,
    polygon_centroid,
    scribanti_B0M,
    stability_curve,
    wall_sided_limit,
    wall_sided_limits,
)


# FIXTURES

@pytest.fixture
def box():
    """6 x 4 section at half density, the usual stable reference."""
    return FloatingCuboid(width=6.0, height=4.0, length=1.0, density=0.5)


# POLYGON TESTS

class TestPolygons:
    """Tests for clipping, area and centroid."""

    def test_square(self):
        """Area and centroid of a square."""
        square = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)]
        assert polygon_area(square) == 4.0
        assert polygon_centroid(square) == pytest.approx((1.0, 1.0))
        assert polygon_area(square[::-1]) == 4.0

    def test_clip(self):
        """Clipping keeps the part below the line."""
        square = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)]
        assert polygon_area(clip_polygon_below(square, 0.5)) == pytest.approx(1.0)
        assert clip_polygon_below(square, -1.0) == []
        assert polygon_area(clip_polygon_below(square, 3.0)) == 4.0

    def test_degenerate(self):
        """A polygon without area has no centroid."""
        with pytest.raises(ValueError, match="degenerate"):
            polygon_centroid([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])

    def test_heeled_rectangle_keeps_area(self):
        """Rotation preserves the area and the centroid."""
        corners = heeled_rectangle(6.0, 4.0, 23.0)
        assert polygon_area(corners) == pytest.approx(24.0)
        np.testing.assert_allclose(polygon_centroid(corners), (0.0, 0.0), atol=1e-12)


# CUBOID STATICS TESTS

class TestFloatingCuboid:
    """Tests for buoyancy, GM and validity limits."""

    def test_draft_and_displacement(self, box):
        """Draft rho_s h and displacement b l d."""
        assert box.draft == 2.0
        assert box.displacement == 12.0
        assert box.waterplane_inertia == 18.0
        assert box.buoyancy == 12.0

    @pytest.mark.parametrize(
        "kwargs, match",
        [
            ({"width": 0.0, "height": 1.0}, "width"),
            ({"width": 1.0, "height": -1.0}, "height"),
            ({"width": 1.0, "height": 1.0, "density": 1.0}, "float"),
            ({"width": 1.0, "height": 1.0, "g": -1.0}, "g must"),
        ],
    )
    def test_invalid(self, kwargs, match):
        """Non-physical boxes are rejected."""
        with pytest.raises(ValueError, match=match):
            FloatingCuboid(**kwargs)

    def test_buoyancy_is_linear(self, box):
        """Buoyancy grows linearly with the draft."""
        values = [analytic_buoyancy(box, d) for d in (0.0, 1.0, 2.0, 4.0)]
        assert values == [0.0, 6.0, 12.0, 24.0]
        with pytest.raises(ValueError, match="draft"):
            analytic_buoyancy(box, 4.5)

    def test_gm_of_cube(self):
        """A cube at half density has GM = -s/12."""
        for side in (1.0, 2.0, 12.0):
            cube = FloatingCuboid(side, side, side, 0.5)
            assert cuboid_GM(cube) == pytest.approx(-side / 12.0)

    def test_gm_of_box(self, box):
        """The 6:4 box is stable upright with GM = 0.5."""
        assert cuboid_GM(box) == pytest.approx(0.5)
        assert cuboid_GM(box, 10.0) > cuboid_GM(box)

    def test_scribanti(self):
        """B0M at 30 degrees for b = 6, d = 2."""
        assert round(scribanti_B0M(6.0 ** 3 / 12.0, 12.0, 30.0), 12) == 1.75
        assert scribanti_B0M(18.0, 12.0, 0.0) == 1.5

    def test_scribanti_range(self):
        """Angles at or beyond the limit are rejected."""
        with pytest.raises(ValidityError, match="wall-sided"):
            scribanti_B0M(18.0, 12.0, 90.0)
        with pytest.raises(ValidityError, match="wall-sided"):
            scribanti_B0M(18.0, 12.0, -20.0, alpha_limit=15.0)
        with pytest.raises(ValueError, match="volume"):
            scribanti_B0M(18.0, 0.0, 10.0)

    def test_wall_sided_limits(self, box):
        """Deck edge and bilge limits of the 6:4 box coincide."""
        deck, bilge = wall_sided_limits(box)
        assert deck == pytest.approx(math.degrees(math.atan(4.0 / 6.0)))
        assert bilge == pytest.approx(deck)
        assert wall_sided_limit(box) == min(deck, bilge)
        with pytest.raises(ValidityError):
            cuboid_GM(box, 34.0)


class TestStabilityCurve:
    """Tests for the righting moment curve."""

    def test_curve_is_odd(self, box):
        """m_s(-a) = -m_s(a) and m_s(0) = 0."""
        curve = stability_curve(box, [-10.0, 0.0, 10.0])
        assert len(curve) == 3
        assert curve.moment[1] == 0.0
        assert curve.moment[0] == pytest.approx(-curve.moment[2])

    def test_curve_value(self, box):
        """m_s = rho g V GM sin(a)."""
        curve = stability_curve(box, [10.0])
        expected = 12.0 * cuboid_GM(box, 10.0) * math.sin(math.radians(10.0))
        assert curve.moment[0] == pytest.approx(expected)
        assert list(curve) == [(10.0, curve.moment[0])]

    def test_frame(self, box):
        """The curve converts to a two-column frame."""
        frame = stability_curve(box, np.arange(0.0, 31.0, 5.0)).to_frame()
        assert list(frame.columns) == ["alpha_deg", "m_s"]
        assert len(frame) == 7
        assert (frame["m_s"].iloc[1:] > 0).all()


# HEEL ORACLE TESTS

class TestHeelOracle:
    """Tests for the exact section geometry and the stable angle search."""

    def test_upright_section(self):
        """Upright the draft is rho_s h and the offset vanishes."""
        section = immersed_section(6.0, 4.0, 0.5, 0.0)
        assert section.draft == pytest.approx(2.0)
        assert section.area == pytest.approx(12.0)
        assert section.offset == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("alpha", [5.0, 10.0, 20.0, 30.0])
    def test_agrees_with_scribanti(self, box, alpha):
        """Inside the wall-sided range the exact righting arm is GM sin(a)."""
        section = immersed_section(box.width, box.height, box.density, alpha)
        expected = -cuboid_GM(box, alpha) * math.sin(math.radians(alpha))
        assert section.offset == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize(
        "density, expected",
        [
            (0.25, [26.565, 63.435]),
            (0.5, [45.0]),
            (0.75, [26.565, 63.435]),
        ],
    )
    def test_square_section(self, density, expected):
        """Stable heel angles of a square section."""
        roots = equilibrium_heel_oracle(1.0, 1.0, density, step=0.25)
        assert [round(angle, 3) for angle, _ in roots] == expected

    def test_stable_box_floats_upright(self):
        """The 6:4 box has a stable upright pose."""
        roots = equilibrium_heel_oracle(6.0, 4.0, 0.5, step=0.25)
        assert roots[0][0] == 0.0
        assert roots[0][1] == pytest.approx(2.0)

    def test_unrefined_is_close(self):
        """Without refinement roots sit at grid midpoints."""
        roots = equilibrium_heel_oracle(1.0, 1.0, 0.25, step=0.5, refine=False)
        assert abs(roots[0][0] - 26.565) < 0.5

    def test_invalid_step(self):
        """The grid spacing must be positive."""
        with pytest.raises(ValueError, match="step"):
            equilibrium_heel_oracle(1.0, 1.0, 0.5, step=0.0)
