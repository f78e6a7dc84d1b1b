"""
Bodies Module

Rigid bodies: shapes, mass properties, membership and surface velocity
queries, and time integration.
"""

from floatforge.bodies.base import Shape
from floatforge.bodies.shapes import SHAPES, Cuboid, Sphere
from floatforge.bodies.dynamics import (
    BodyState,
    Constraints,
    MassProps,
    RigidBody,
    inertia_tensor,
    integrate_body,
)

__all__ = [
    "Shape",
    "SHAPES",
    "Cuboid",
    "Sphere",
    "BodyState",
    "Constraints",
    "MassProps",
    "RigidBody",
    "inertia_tensor",
    "integrate_body",
]
