"""
Bodies Test Suite

Tests for body shapes, mass properties and the rigid body integrator.

To run tests:
    pytest tests/test_bodies.py -v
"""

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from floatforge.bodies import (
    SHAPES,
    BodyState,
    Constraints,
    Cuboid,
    MassProps,
    RigidBody,
    Sphere,
    inertia_tensor,
    integrate_body,
)
from floatforge.errors import DivergenceError


# FIXTURES

@pytest.fixture
def box():
    """A 4 x 2 x 2 box of density 0.5 at (10, 10, 10)."""
    return RigidBody("box", Cuboid(4.0, 2.0, 2.0), 0.5, BodyState([10.0, 10.0, 10.0]))


@pytest.fixture
def tumbling():
    """An asymmetric box spinning about a non-principal axis."""
    orientation = Rotation.from_euler("xyz", [20.0, -35.0, 50.0], degrees=True).as_quat()
    state = BodyState(
        [20.0, 20.0, 20.0], orientation, angular_velocity=[1e-3, 2e-3, -5e-4]
    )
    return RigidBody("tumbler", Cuboid(2.0, 3.0, 4.0), 0.7, state)


# SHAPE TESTS

class TestShapes:
    """Tests for membership, volume and closest points."""

    def test_registry(self):
        """Shapes are looked up by name."""
        assert SHAPES["sphere"] is Sphere
        assert SHAPES["cuboid"] is Cuboid

    def test_sphere_interior_is_strict(self):
        """A point on the surface is outside."""
        ball = Sphere(2.0)
        assert ball.contains([1.9, 0.0, 0.0])
        assert not ball.contains([2.0, 0.0, 0.0])
        np.testing.assert_array_equal(ball.contains(np.zeros((2, 3))), [True, True])

    def test_sphere_volume_and_inertia(self):
        """Volume and moments of a solid sphere."""
        ball = Sphere(3.0)
        assert ball.volume == pytest.approx(36.0 * np.pi)
        np.testing.assert_allclose(ball.inertia_diagonal(2.0), 0.4 * 2.0 * 9.0)

    def test_sphere_closest_point(self):
        """Points are projected radially; the center maps to the top."""
        ball = Sphere(2.0)
        np.testing.assert_allclose(ball.closest_point([0.0, 4.0, 0.0]), [0.0, 2.0, 0.0])
        np.testing.assert_allclose(ball.closest_point([0.0, 0.0, 0.0]), [0.0, 0.0, 2.0])

    def test_cuboid_extents(self):
        """Length, width and height map to the body x, y and z axes."""
        shape = Cuboid(1.0, 2.0, 3.0)
        assert (shape.length, shape.width, shape.height) == (1.0, 2.0, 3.0)
        assert shape.volume == 6.0
        assert shape.contains([0.4, 0.9, 1.4])
        assert not shape.contains([0.4, 1.0, 1.4])

    def test_cuboid_closest_point(self):
        """Outside points are clamped, inside points go to the nearest face."""
        shape = Cuboid(1.0, 2.0, 2.0)
        np.testing.assert_allclose(shape.closest_point([2.0, 0.5, 0.0]), [0.5, 0.5, 0.0])
        np.testing.assert_allclose(shape.closest_point([0.4, 0.0, 0.0]), [0.5, 0.0, 0.0])
        np.testing.assert_allclose(shape.closest_point([0.0, -0.9, 0.0]), [0.0, -1.0, 0.0])

    @pytest.mark.parametrize("factory", [lambda: Sphere(0.0), lambda: Cuboid(1.0, -1.0, 1.0)])
    def test_invalid_dimensions(self, factory):
        """Dimensions must be positive."""
        with pytest.raises(ValueError, match="positive"):
            factory()

    def test_repr(self):
        """repr lists the parameters."""
        assert repr(Sphere(1.5)) == "Sphere(radius=1.5)"


# MASS PROPERTY TESTS

class TestMassProps:
    """Tests for mass and inertia."""

    def test_unit_cube(self):
        """A unit cube of unit density has I = 1/6."""
        props = inertia_tensor(Cuboid(1.0, 1.0, 1.0), 1.0)
        assert props.mass == 1.0
        np.testing.assert_allclose(np.diag(props.inertia), 1.0 / 6.0)

    def test_box_moments(self, box):
        """Moments of a 4 x 2 x 2 box."""
        assert box.mass == pytest.approx(8.0)
        np.testing.assert_allclose(
            np.diag(box.mass_props.inertia), 8.0 / 12.0 * np.array([8.0, 20.0, 20.0])
        )

    def test_invalid(self):
        """Mass and density must be positive."""
        with pytest.raises(ValueError, match="mass"):
            MassProps(0.0, np.eye(3))
        with pytest.raises(ValueError, match="density"):
            inertia_tensor(Sphere(1.0), 0.0)
        with pytest.raises(ValueError, match="positive definite"):
            MassProps(1.0, np.diag([1.0, 0.0, 1.0]))


# STATE AND QUERY TESTS

class TestRigidBody:
    """Tests for poses, queries and derived quantities."""

    def test_state_normalizes_orientation(self):
        """Quaternions are normalized; zero is rejected."""
        state = BodyState([0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 2.0])
        np.testing.assert_array_equal(state.orientation, [0.0, 0.0, 0.0, 1.0])
        with pytest.raises(ValueError, match="non-zero"):
            BodyState([0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0])

    def test_contains_point(self, box):
        """World points are tested in the body frame."""
        assert box.contains_point([11.9, 10.0, 10.0])
        assert not box.contains_point([10.0, 11.5, 10.0])
        inside = box.contains_point(np.array([[10.0, 10.0, 10.0], [13.0, 10.0, 10.0]]))
        np.testing.assert_array_equal(inside, [True, False])

    def test_rotated_aabb(self, box):
        """A quarter turn about z swaps the x and y extents."""
        box.state.orientation = Rotation.from_euler("z", 90.0, degrees=True).as_quat()
        lower, upper = box.aabb()
        np.testing.assert_allclose(upper - lower, [2.0, 4.0, 2.0], atol=1e-12)
        assert box.contains_point([10.0, 11.9, 10.0])

    def test_heel_angle_sign(self, box):
        """A positive rotation about x raises the +y side."""
        box.state.orientation = Rotation.from_euler("x", 10.0, degrees=True).as_quat()
        assert box.heel_angle(0) == pytest.approx(10.0)
        side = box.rotation.apply([0.0, 1.0, 0.0])
        assert side[2] > 0.0

    def test_surface_velocity(self):
        """v + ω × (x - o)."""
        state = BodyState([0.0, 0.0, 0.0], velocity=[1.0, 0.0, 0.0], angular_velocity=[0.0, 0.0, 1.0])
        body = RigidBody("b", Sphere(1.0), 1.0, state)
        np.testing.assert_allclose(
            body.surface_velocity(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])),
            [[1.0, 1.0, 0.0], [0.0, 0.0, 0.0]],
        )
        np.testing.assert_allclose(body.surface_velocity([1.0, 0.0, 0.0]), [1.0, 1.0, 0.0])

    def test_max_surface_speed(self, box):
        """|v| plus |ω| times the distance to the farthest corner."""
        box.state.velocity = np.array([0.01, 0.0, 0.0])
        box.state.angular_velocity = np.array([0.0, 0.0, 1e-3])
        assert box.max_surface_speed() == pytest.approx(0.01 + 1e-3 * np.sqrt(6.0))
        ball = RigidBody("b", Sphere(2.0), 1.0, BodyState([5.0, 5.0, 5.0], angular_velocity=[0.1, 0.0, 0.0]))
        assert ball.max_surface_speed() == pytest.approx(0.2)

    def test_closest_surface_point(self, box):
        """The closest point is returned in world coordinates."""
        np.testing.assert_allclose(box.closest_surface_point([15.0, 10.0, 10.0]), [12.0, 10.0, 10.0])

    def test_energy_and_momentum(self, box):
        """Translational energy and momentum."""
        box.state.velocity = np.array([0.01, 0.0, 0.0])
        assert box.kinetic_energy() == pytest.approx(0.5 * 8.0 * 1e-4)
        np.testing.assert_allclose(box.momentum(), [0.08, 0.0, 0.0])


# INTEGRATOR TESTS

class TestIntegrator:
    """Tests for the semi-implicit Euler step."""

    def test_free_fall(self, box):
        """Velocity is updated before position."""
        box.step(np.zeros(3), np.zeros(3), (0.0, 0.0, -1e-3))
        np.testing.assert_allclose(box.state.velocity, [0.0, 0.0, -1e-3])
        np.testing.assert_allclose(box.state.position, [10.0, 10.0, 10.0 - 1e-3])

    def test_force_over_mass(self, box):
        """A force accelerates the body by F/m."""
        box.step([0.08, 0.0, 0.0], np.zeros(3), (0.0, 0.0, 0.0))
        np.testing.assert_allclose(box.state.velocity, [0.01, 0.0, 0.0])

    def test_constraints(self):
        """Frozen axes keep their components."""
        constraints = Constraints.from_axes("xy", "yz")
        assert constraints.translation == (True, True, False)
        assert constraints.rotation == (False, True, True)
        body = RigidBody("c", Cuboid(2.0, 2.0, 2.0), 0.5, BodyState([5.0, 5.0, 5.0]), constraints)
        body.step([1.0, 1.0, 1.0], [1.0, 1.0, 1.0], (0.0, 0.0, 0.0))
        assert body.state.velocity[0] == 0.0 and body.state.velocity[1] == 0.0
        assert body.state.velocity[2] > 0.0
        assert body.state.angular_velocity[0] > 0.0
        assert body.state.angular_velocity[1] == 0.0 and body.state.angular_velocity[2] == 0.0

    def test_fixed_body(self, box):
        """A fully constrained body does not move."""
        box.constraints = Constraints.fixed()
        before = box.state.copy()
        box.step([1.0, 1.0, 1.0], [1.0, 1.0, 1.0], (0.0, 0.0, -1.0))
        np.testing.assert_array_equal(box.state.position, before.position)
        np.testing.assert_array_equal(box.state.orientation, before.orientation)

    def test_torque_free_angular_momentum(self, tumbling):
        """Without torque the magnitude of the angular momentum is kept."""
        start = np.linalg.norm(tumbling.angular_momentum())
        for _ in range(10000):
            tumbling.step(np.zeros(3), np.zeros(3), (0.0, 0.0, 0.0))
        assert np.linalg.norm(tumbling.angular_momentum()) == pytest.approx(start, rel=5e-3)
        np.testing.assert_allclose(tumbling.state.angular_velocity, [1e-3, 2e-3, -5e-4])
        assert np.linalg.norm(tumbling.state.orientation) == pytest.approx(1.0, abs=1e-14)

    def test_rotation_angle(self):
        """A constant spin turns the body by ω dt per step."""
        state = BodyState([0.0, 0.0, 0.0], angular_velocity=[0.01, 0.0, 0.0])
        props = inertia_tensor(Sphere(1.0), 1.0)
        for _ in range(10):
            state = integrate_body(state, np.zeros(3), np.zeros(3), props)
        assert Rotation.from_quat(state.orientation).magnitude() == pytest.approx(0.1)

    def test_non_finite_force(self, box):
        """NaN forces are a divergence."""
        with pytest.raises(DivergenceError, match="non-finite"):
            box.step([np.nan, 0.0, 0.0], np.zeros(3), (0.0, 0.0, 0.0))
        with pytest.raises(DivergenceError, match="non-finite coupling stiffness"):
            box.step(np.zeros(3), np.zeros(3), (0.0, 0.0, 0.0), stiffness=np.full((6, 6), np.nan))


class TestImplicitCoupling:
    """Tests for the integrator with a velocity-dependent load."""

    def test_zero_stiffness_is_explicit(self, box):
        """Without stiffness the implicit step reduces to F/m."""
        box.step([0.08, 0.0, 0.0], np.zeros(3), (0.0, 0.0, -1e-3), stiffness=np.zeros((6, 6)))
        np.testing.assert_allclose(box.state.velocity, [0.01, 0.0, -1e-3])
        np.testing.assert_allclose(box.state.position, [10.01, 10.0, 10.0 - 1e-3])

    def test_drag_uses_new_velocity(self, box):
        """A stiffness equal to the mass halves the velocity in one step."""
        box.state.velocity = np.array([0.01, 0.0, 0.0])
        box.step(np.zeros(3), np.zeros(3), (0.0, 0.0, 0.0), stiffness=8.0 * np.eye(6))
        np.testing.assert_allclose(box.state.velocity, [0.005, 0.0, 0.0])

    def test_stiff_drag_never_reverses(self, box):
        """However stiff the coupling, the velocity decays without changing sign."""
        box.state.velocity = np.array([0.01, 0.0, 0.0])
        speeds = []
        for _ in range(5):
            box.step(np.zeros(3), np.zeros(3), (0.0, 0.0, 0.0), stiffness=1e4 * np.eye(6))
            speeds.append(box.state.velocity[0])
        assert all(v > 0.0 for v in speeds)
        assert speeds == sorted(speeds, reverse=True)

    def test_frozen_axes_with_stiffness(self):
        """Frozen axes stay put; the free ones see m + K."""
        body = RigidBody(
            "c", Cuboid(4.0, 2.0, 2.0), 0.5, BodyState([5.0, 5.0, 5.0]), Constraints.from_axes("xy", "")
        )
        body.step([1.0, 1.0, 1.0], np.zeros(3), (0.0, 0.0, 0.0), stiffness=4.0 * np.eye(6))
        np.testing.assert_allclose(body.state.velocity, [0.0, 0.0, 1.0 / 12.0])
        np.testing.assert_allclose(body.state.angular_velocity, 0.0)
        np.testing.assert_allclose(body.state.position, [5.0, 5.0, 5.0 + 1.0 / 12.0])
