"""
Rigid Body Dynamics Module

Pose, velocities and mass properties of a rigid body, point membership and
surface velocity queries, and the semi-implicit Euler integrator that
advances a body under the fluid force and torque.

Orientation is a unit quaternion in scalar-last (x, y, z, w) order, as used
by :class:`scipy.spatial.transform.Rotation`.

Author: FloatForge Developers
License: MIT
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.transform import Rotation

from floatforge.bodies.base import Shape
from floatforge.errors import DivergenceError

logger = logging.getLogger(__name__)

AXES = "xyz"


def _vec(values: Sequence[float]) -> np.ndarray:
    return np.asarray(values, dtype=np.float64).reshape(3).copy()


@dataclass
class BodyState:
    """
    Kinematic state of a rigid body.

    Attributes:
        position: Center of gravity o in lattice coordinates.
        orientation: Unit quaternion (x, y, z, w), body to world.
        velocity: Linear velocity v.
        angular_velocity: Angular velocity ω in the world frame.
    """

    position: np.ndarray
    orientation: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 0.0, 1.0]))
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    angular_velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self) -> None:
        self.position = _vec(self.position)
        self.velocity = _vec(self.velocity)
        self.angular_velocity = _vec(self.angular_velocity)
        q = np.asarray(self.orientation, dtype=np.float64).reshape(4).copy()
        norm = np.linalg.norm(q)
        if norm == 0.0:
            raise ValueError("Orientation quaternion must be non-zero")
        # Already-normalized quaternions are kept bit for bit.
        if abs(norm - 1.0) > 1e-12:
            q = q / norm
        self.orientation = q

    @property
    def rotation(self) -> Rotation:
        return Rotation.from_quat(self.orientation)

    def copy(self) -> "BodyState":
        return BodyState(
            self.position.copy(),
            self.orientation.copy(),
            self.velocity.copy(),
            self.angular_velocity.copy(),
        )

    def is_finite(self) -> bool:
        return all(
            np.all(np.isfinite(v))
            for v in (self.position, self.orientation, self.velocity, self.angular_velocity)
        )


@dataclass(frozen=True)
class MassProps:
    """Mass and body-frame inertia tensor."""

    mass: float
    inertia: np.ndarray

    def __post_init__(self) -> None:
        if not self.mass > 0:
            raise ValueError(f"Body mass must be positive, got {self.mass}")
        if np.any(np.linalg.eigvalsh(self.inertia) <= 0):
            raise ValueError("Inertia tensor must be positive definite")


@dataclass(frozen=True)
class Constraints:
    """
    Frozen world axes.

    Attributes:
        translation: Per-axis flags; a frozen axis keeps its velocity and
            position component.
        rotation: Per-axis flags for the angular velocity.
    """

    translation: Tuple[bool, bool, bool] = (False, False, False)
    rotation: Tuple[bool, bool, bool] = (False, False, False)

    @classmethod
    def from_axes(cls, translation: str = "", rotation: str = "") -> "Constraints":
        """Build from axis strings such as 'xy'."""
        return cls(
            tuple(a in translation for a in AXES),
            tuple(a in rotation for a in AXES),
        )

    @classmethod
    def fixed(cls) -> "Constraints":
        return cls((True, True, True), (True, True, True))

    @property
    def fully_fixed(self) -> bool:
        return all(self.translation) and all(self.rotation)


def inertia_tensor(shape: Shape, density: float) -> MassProps:
    """
    Mass properties of a homogeneous body.

    Example:
        >>> from floatforge.bodies.shapes import Cuboid
        >>> inertia_tensor(Cuboid(1, 1, 1), 1.0).inertia[0, 0]
        0.16666666666666666
    """
    if not density > 0:
        raise ValueError(f"Body density must be positive, got {density}")
    mass = density * shape.volume
    return MassProps(mass=mass, inertia=np.diag(shape.inertia_diagonal(mass)))


def integrate_body(
    state: BodyState,
    force: Sequence[float],
    torque: Sequence[float],
    mass_props: MassProps,
    gravity: Sequence[float] = (0.0, 0.0, 0.0),
    dt: float = 1.0,
    constraints: Optional[Constraints] = None,
    stiffness: Optional[np.ndarray] = None,
    virtual_mass: float = 0.0,
    previous_change: Optional[np.ndarray] = None,
) -> BodyState:
    """
    Advance a body by one semi-implicit Euler step.

        v <- v + (F/m + a) dt,        o <- o + v dt
        ω <- ω + I_w⁻¹ T dt,          q <- exp(ω dt) q

    with I_w = R I_b Rᵀ the world-frame inertia. The gyroscopic term
    ω × I ω is not included. Frozen axes keep their velocity and position
    components; a fully constrained body is returned unchanged.

    If ``stiffness`` is given, ``force`` and ``torque`` are the parts of the
    load that do not depend on the body's own motion, and the 6 x 6 matrix
    K adds the load -K (v, ω) evaluated with the new velocities:

        (M + K dt) Δ(v, ω) = (F + m a, T) dt - K (v, ω) dt

    solved over the free axes only, M = diag(m, m, m, I_w).

    A ``virtual_mass`` ratio c adds c M to both sides, with the velocity
    change of the previous step standing in for the new one on the right:

        ((1 + c) M + K dt) Δ(v, ω) = ... + c M Δ(v, ω)_previous

    The two terms cancel once the motion is steady.

    Raises:
        DivergenceError: If the inputs or the new state are not finite.
    """
    constraints = constraints or Constraints()
    force = np.asarray(force, dtype=np.float64)
    torque = np.asarray(torque, dtype=np.float64)
    if not (np.all(np.isfinite(force)) and np.all(np.isfinite(torque))):
        raise DivergenceError("non-finite force or torque on body")
    if constraints.fully_fixed:
        return state.copy()

    free_t = ~np.asarray(constraints.translation)
    free_r = ~np.asarray(constraints.rotation)
    gravity = np.asarray(gravity, dtype=np.float64)
    r = state.rotation.as_matrix()
    inertia_world = r @ mass_props.inertia @ r.T

    velocity = state.velocity.copy()
    omega = state.angular_velocity.copy()
    if stiffness is None and virtual_mass == 0.0:
        dv = (force / mass_props.mass + gravity) * dt
        velocity[free_t] += dv[free_t]
        if free_r.any():
            domega = np.linalg.solve(inertia_world, torque) * dt
            omega[free_r] += domega[free_r]
    else:
        stiffness = np.zeros((6, 6)) if stiffness is None else np.asarray(stiffness, dtype=np.float64)
        stiffness = stiffness.reshape(6, 6)
        if not np.all(np.isfinite(stiffness)):
            raise DivergenceError("non-finite coupling stiffness on body")
        inertia = np.zeros((6, 6))
        inertia[:3, :3] = mass_props.mass * np.eye(3)
        inertia[3:, 3:] = inertia_world
        system = (1.0 + virtual_mass) * inertia + stiffness * dt
        current = np.concatenate([velocity, omega])
        load = np.concatenate([force + mass_props.mass * gravity, torque]) - stiffness @ current
        rhs = load * dt
        if virtual_mass and previous_change is not None:
            rhs = rhs + virtual_mass * inertia @ np.asarray(previous_change, dtype=np.float64)
        free = np.concatenate([free_t, free_r])
        delta = np.zeros(6)
        delta[free] = np.linalg.solve(system[np.ix_(free, free)], rhs[free])
        velocity += delta[:3]
        omega += delta[3:]

    position = state.position.copy()
    position[free_t] += velocity[free_t] * dt
    orientation = state.orientation.copy()
    if np.any(omega != 0.0):
        new_rot = Rotation.from_rotvec(omega * dt) * state.rotation
        orientation = new_rot.as_quat()
        orientation = orientation / np.linalg.norm(orientation)

    new_state = BodyState(position, orientation, velocity, omega)
    if not new_state.is_finite():
        raise DivergenceError("non-finite rigid body state")
    return new_state


class RigidBody:
    """
    A named rigid body: shape, density, state and constraints.

    Attributes:
        name (str): Identifier used in diagnostics.
        shape (Shape): Body-frame geometry.
        density (float): Material density rho_s.
        state (BodyState): Current pose and velocities.
        constraints (Constraints): Frozen axes.
        mass_props (MassProps): Mass and body-frame inertia.
        last_change (np.ndarray): Change of (v, ω) in the last step.

    Example:
        >>> from floatforge.bodies.shapes import Sphere
        >>> body = RigidBody("ball", Sphere(6.0), 0.5, BodyState([30.0, 20.0, 15.0]))
        >>> body.contains_point([30.0, 20.0, 15.0])
        True
    """

    def __init__(
        self,
        name: str,
        shape: Shape,
        density: float,
        state: BodyState,
        constraints: Optional[Constraints] = None,
    ) -> None:
        self.name = name
        self.shape = shape
        self.density = float(density)
        self.state = state
        self.constraints = constraints or Constraints()
        self.mass_props = inertia_tensor(shape, density)
        self.last_change = np.zeros(6)

    @property
    def mass(self) -> float:
        return self.mass_props.mass

    @property
    def rotation(self) -> Rotation:
        return self.state.rotation

    def to_body_frame(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return self.rotation.inv().apply(pts - self.state.position)

    def contains_point(self, points: np.ndarray):
        """Strict-interior membership of world-frame point(s)."""
        pts = np.asarray(points, dtype=np.float64)
        inside = self.shape.contains(self.to_body_frame(pts))
        return bool(np.asarray(inside).reshape(-1)[0]) if pts.ndim == 1 else inside

    def surface_velocity(self, points: np.ndarray) -> np.ndarray:
        """v + ω × (x - o) for one point (3,) or many (N, 3)."""
        pts = np.asarray(points, dtype=np.float64)
        arm = pts - self.state.position
        return self.state.velocity + np.cross(self.state.angular_velocity, arm)

    def closest_surface_point(self, point: Sequence[float]) -> np.ndarray:
        local = self.to_body_frame(point)[0]
        return self.rotation.apply(self.shape.closest_point(local)) + self.state.position

    def aabb(self) -> Tuple[np.ndarray, np.ndarray]:
        """World-frame axis-aligned bounding box (lower, upper)."""
        half = np.abs(self.rotation.as_matrix()) @ self.shape.half_extents()
        return self.state.position - half, self.state.position + half

    def heel_angle(self, axis: int = 0) -> float:
        """
        Rotation about a world axis in degrees, in (-180, 180].

        Measured as the angle the body's axis (axis + 1) mod 3 has turned in
        the plane perpendicular to ``axis``.
        """
        r = self.rotation.as_matrix()
        a, b = (axis + 1) % 3, (axis + 2) % 3
        return float(np.degrees(np.arctan2(r[b, a], r[a, a])))

    def kinetic_energy(self) -> float:
        r = self.rotation.as_matrix()
        inertia_world = r @ self.mass_props.inertia @ r.T
        w = self.state.angular_velocity
        v = self.state.velocity
        return 0.5 * self.mass * float(v @ v) + 0.5 * float(w @ inertia_world @ w)

    def momentum(self) -> np.ndarray:
        return self.mass * self.state.velocity

    def angular_momentum(self) -> np.ndarray:
        r = self.rotation.as_matrix()
        return r @ self.mass_props.inertia @ r.T @ self.state.angular_velocity

    def max_surface_speed(self) -> float:
        """Upper bound of |v + ω × (x - o)| over the body: |v| + |ω| R."""
        radius = self.shape.bounding_radius()
        return float(
            np.linalg.norm(self.state.velocity)
            + np.linalg.norm(self.state.angular_velocity) * radius
        )

    def step(
        self, force, torque, gravity, dt: float = 1.0, stiffness=None, virtual_mass: float = 0.0
    ) -> None:
        """Integrate one step and remember the velocity change for the virtual mass term."""
        before = np.concatenate([self.state.velocity, self.state.angular_velocity])
        self.state = integrate_body(
            self.state,
            force,
            torque,
            self.mass_props,
            gravity,
            dt,
            self.constraints,
            stiffness,
            virtual_mass,
            self.last_change,
        )
        self.last_change = np.concatenate([self.state.velocity, self.state.angular_velocity]) - before

    def __repr__(self) -> str:
        return (
            f"RigidBody(name='{self.name}', shape={self.shape!r}, density={self.density}, "
            f"position={np.round(self.state.position, 4).tolist()})"
        )
