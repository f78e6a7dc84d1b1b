"""
Shapes Module

Sphere and cuboid, the two body shapes used by the validation scenarios.
Cuboid extents follow the naming of floating-body statics: length l along
the body x axis, width b along y and height h along z.
"""

from typing import Any, Dict

import numpy as np

from floatforge.bodies.base import Shape


class Sphere(Shape):
    """Sphere of radius ``radius``."""

    kind = "sphere"

    def __init__(self, radius: float) -> None:
        if not radius > 0:
            raise ValueError(f"Sphere radius must be positive, got {radius}")
        self.radius = float(radius)

    def _contains(self, points: np.ndarray) -> np.ndarray:
        return np.einsum("na,na->n", points, points) < self.radius ** 2

    @property
    def volume(self) -> float:
        return 4.0 / 3.0 * np.pi * self.radius ** 3

    def inertia_diagonal(self, mass: float) -> np.ndarray:
        return np.full(3, 0.4 * mass * self.radius ** 2)

    def closest_point(self, point: np.ndarray) -> np.ndarray:
        p = np.asarray(point, dtype=np.float64)
        norm = np.linalg.norm(p)
        if norm == 0.0:
            return np.array([0.0, 0.0, self.radius])
        return p * (self.radius / norm)

    def half_extents(self) -> np.ndarray:
        return np.full(3, self.radius)

    def bounding_radius(self) -> float:
        return float(self.radius)

    def get_params(self) -> Dict[str, Any]:
        params = super().get_params()
        params.update({"radius": self.radius})
        return params


class Cuboid(Shape):
    """
    Rectangular box.

    Args:
        length: Extent along the body x axis (l).
        width: Extent along the body y axis (b).
        height: Extent along the body z axis (h).
    """

    kind = "cuboid"

    def __init__(self, length: float, width: float, height: float) -> None:
        extents = np.array([length, width, height], dtype=np.float64)
        if not np.all(extents > 0):
            raise ValueError(f"Cuboid extents must be positive, got {tuple(extents)}")
        self.extents = extents

    @property
    def length(self) -> float:
        return float(self.extents[0])

    @property
    def width(self) -> float:
        return float(self.extents[1])

    @property
    def height(self) -> float:
        return float(self.extents[2])

    def _contains(self, points: np.ndarray) -> np.ndarray:
        return np.all(np.abs(points) < 0.5 * self.extents, axis=1)

    @property
    def volume(self) -> float:
        return float(np.prod(self.extents))

    def inertia_diagonal(self, mass: float) -> np.ndarray:
        l, b, h = self.extents
        return mass / 12.0 * np.array([b * b + h * h, l * l + h * h, l * l + b * b])

    def closest_point(self, point: np.ndarray) -> np.ndarray:
        p = np.asarray(point, dtype=np.float64)
        half = 0.5 * self.extents
        clamped = np.clip(p, -half, half)
        if np.any(clamped != p):
            return clamped
        # Inside: project onto the nearest face.
        gaps = half - np.abs(p)
        axis = int(np.argmin(gaps))
        out = p.copy()
        out[axis] = half[axis] if p[axis] >= 0 else -half[axis]
        return out

    def half_extents(self) -> np.ndarray:
        return 0.5 * self.extents

    def get_params(self) -> Dict[str, Any]:
        params = super().get_params()
        params.update({"length": self.length, "width": self.width, "height": self.height})
        return params


SHAPES = {"sphere": Sphere, "cuboid": Cuboid}
