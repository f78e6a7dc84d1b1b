"""
Base Shape Module
-----------------

Abstract base class for rigid-body shapes. Shapes live in their own body
frame, centered at the center of gravity; the rigid body applies the pose.

Design Pattern: Template Method
    The public :meth:`Shape.contains` validates and reshapes its input, then
    delegates the actual membership test to the subclass hook
    :meth:`Shape._contains`.

Author: FloatForge Developers
License: MIT
"""

from abc import ABC, abstractmethod
from typing import Any, Dict

import numpy as np


class Shape(ABC):
    """
    Abstract base class for body shapes.

    All subclasses must implement:
        - _contains(): strict-interior test for body-frame points (N, 3)
        - volume: enclosed volume
        - inertia_diagonal(): principal moments for a given mass
        - closest_point(): nearest surface point to a body-frame point
        - half_extents(): bounding half-widths along the body axes
    """

    kind: str = "shape"

    def contains(self, points: np.ndarray) -> np.ndarray:
        """
        Strict-interior membership of body-frame points.

        Points exactly on the surface are outside.

        Args:
            points: Array of shape (3,) or (N, 3).

        Returns:
            bool or bool array of shape (N,).
        """
        pts = np.asarray(points, dtype=np.float64)
        single = pts.ndim == 1
        pts = pts.reshape(-1, 3)
        inside = self._contains(pts)
        return bool(inside[0]) if single else inside

    @abstractmethod
    def _contains(self, points: np.ndarray) -> np.ndarray:
        """Membership test for an (N, 3) array of body-frame points."""

    @property
    @abstractmethod
    def volume(self) -> float:
        """Enclosed volume."""

    @abstractmethod
    def inertia_diagonal(self, mass: float) -> np.ndarray:
        """Principal moments of inertia about the body axes."""

    @abstractmethod
    def closest_point(self, point: np.ndarray) -> np.ndarray:
        """Point on the surface closest to a body-frame point."""

    @abstractmethod
    def half_extents(self) -> np.ndarray:
        """Half-widths of the body-frame bounding box."""

    def bounding_radius(self) -> float:
        """Largest distance of a body point from the center."""
        return float(np.linalg.norm(self.half_extents()))

    def get_params(self) -> Dict[str, Any]:
        return {"kind": self.kind}

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.get_params().items() if k != "kind")
        return f"{self.__class__.__name__}({params})"
