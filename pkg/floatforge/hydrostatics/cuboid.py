"""
Floating Cuboid Hydrostatics Module

Closed-form statics of a homogeneous floating cuboid heeled about its
longitudinal axis, used as the reference the simulated floating bodies are
validated against:

- buoyancy, draft and the wall-sided validity range
- the metacentric height from the Scribanti formula
- the righting moment (stability) curve
- a brute-force search for stable heel angles by exact polygon clipping

All angles are in degrees. Cross-section coordinates are (y, z) with the
section centred on its centre of gravity and z pointing up.

Author: FloatForge Developers
License: MIT
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from floatforge.errors import ValidityError
from floatforge.hydrostatics.polygon import (
    Point,
    clip_polygon_below,
    polygon_area,
    polygon_centroid,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FloatingCuboid:
    """
    A homogeneous cuboid floating upright in a liquid.

    Attributes:
        width (float): Breadth b across the heel axis.
        height (float): Height h.
        length (float): Length l along the heel axis.
        density (float): Material density rho_s relative to the liquid, in (0, 1).
        rho (float): Liquid density.
        g (float): Magnitude of gravity.

    Example:
        >>> box = FloatingCuboid(width=6, height=4, length=1, density=0.5)
        >>> box.draft
        2.0
    """

    width: float
    height: float
    length: float = 1.0
    density: float = 0.5
    rho: float = 1.0
    g: float = 1.0

    def __post_init__(self) -> None:
        for name in ("width", "height", "length", "rho"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value}")
        if not 0.0 < self.density < 1.0:
            raise ValueError(f"density must lie in (0, 1) to float, got {self.density}")
        if not (np.isfinite(self.g) and self.g >= 0):
            raise ValueError(f"g must be non-negative, got {self.g}")

    @property
    def draft(self) -> float:
        """Upright draft d = rho_s h."""
        return self.density * self.height

    @property
    def displacement(self) -> float:
        """Immersed volume b l d."""
        return self.width * self.length * self.draft

    @property
    def waterplane_inertia(self) -> float:
        """Second moment of the upright waterplane about the heel axis, l b³ / 12."""
        return self.length * self.width ** 3 / 12.0

    @property
    def buoyancy(self) -> float:
        return analytic_buoyancy(self, self.draft)


def wall_sided_limits(cuboid: FloatingCuboid) -> Tuple[float, float]:
    """
    Heel angles at which the deck edge immerses and the bilge emerges.

    Returns:
        (deck_edge, bilge) in degrees; the wall-sided range ends at the
        smaller of the two.
    """
    b, h, d = cuboid.width, cuboid.height, cuboid.draft
    deck = math.degrees(math.atan(2.0 * (h - d) / b))
    bilge = math.degrees(math.atan(2.0 * d / b))
    return deck, bilge


def wall_sided_limit(cuboid: FloatingCuboid) -> float:
    return min(wall_sided_limits(cuboid))


def scribanti_B0M(
    inertia: float, volume: float, alpha: float, alpha_limit: Optional[float] = None
) -> float:
    """
    Distance from the upright centre of buoyancy to the metacentre.

        B0M = (I / V) (1 + tan²(alpha) / 2)

    Args:
        inertia: Waterplane second moment I.
        volume: Immersed volume V.
        alpha: Heel angle in degrees.
        alpha_limit: End of the wall-sided range in degrees, if known.

    Raises:
        ValidityError: If |alpha| reaches the wall-sided limit (or 90).

    Example:
        >>> round(scribanti_B0M(6 ** 3 / 12, 6 * 2, 30.0), 12)
        1.75
    """
    if not volume > 0:
        raise ValueError(f"Immersed volume must be positive, got {volume}")
    limit = 90.0 if alpha_limit is None else alpha_limit
    if abs(alpha) >= limit:
        raise ValidityError(
            f"heel angle {alpha} deg is outside the wall-sided range (limit {limit:.4f} deg)"
        )
    tan = math.tan(math.radians(alpha))
    return inertia / volume * (1.0 + 0.5 * tan * tan)


def cuboid_GM(cuboid: FloatingCuboid, alpha: float = 0.0) -> float:
    """
    Metacentric height GM = KB0 + B0M - KG of a heeled cuboid.

    KB0 = d/2 and KG = h/2 for a homogeneous body. Positive GM means the
    body rights itself.

    Example:
        >>> cuboid_GM(FloatingCuboid(width=6, height=4, density=0.5))
        0.5
    """
    b0m = scribanti_B0M(
        cuboid.waterplane_inertia, cuboid.displacement, alpha, wall_sided_limit(cuboid)
    )
    return cuboid.draft / 2.0 + b0m - cuboid.height / 2.0


@dataclass
class StabilityCurve:
    """Righting moment m_s per heel angle."""

    alpha: np.ndarray
    moment: np.ndarray

    def __len__(self) -> int:
        return len(self.alpha)

    def __iter__(self) -> Iterator[Tuple[float, float]]:
        return iter(zip(self.alpha.tolist(), self.moment.tolist()))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"alpha_deg": self.alpha, "m_s": self.moment})


def stability_curve(cuboid: FloatingCuboid, alphas: Sequence[float]) -> StabilityCurve:
    """
    Righting moment m_s(alpha) = rho g V GM(alpha) sin(alpha).

    The curve is odd in alpha. Every angle must lie inside the wall-sided
    range.
    """
    alphas = np.asarray(alphas, dtype=np.float64).reshape(-1)
    force = cuboid.rho * cuboid.g * cuboid.displacement
    moments = np.array(
        [force * cuboid_GM(cuboid, abs(a)) * math.sin(math.radians(a)) for a in alphas]
    )
    return StabilityCurve(alphas, moments)


def analytic_buoyancy(cuboid: FloatingCuboid, draft: float) -> float:
    """
    Vertical buoyancy rho g b l d of the cuboid immersed to ``draft``.

    Raises:
        ValueError: If the draft is outside [0, h].
    """
    if not 0.0 <= draft <= cuboid.height:
        raise ValueError(f"draft must lie in [0, {cuboid.height}], got {draft}")
    return cuboid.rho * cuboid.g * cuboid.width * cuboid.length * draft


# ----------------------------------------------------------------------
# Exact cross-section geometry
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ImmersedSection:
    """
    Immersed part of a heeled rectangular section in vertical equilibrium.

    Attributes:
        alpha: Heel angle in degrees.
        waterline: z of the free surface.
        draft: Depth of the lowest corner below the waterline.
        polygon: Immersed polygon.
        area: Immersed area.
        centroid: Centre of buoyancy (y, z).
    """

    alpha: float
    waterline: float
    draft: float
    polygon: Tuple[Point, ...]
    area: float
    centroid: Point

    @property
    def offset(self) -> float:
        """Horizontal distance from the centre of gravity to the centre of buoyancy."""
        return self.centroid[0]


def heeled_rectangle(width: float, height: float, alpha: float) -> List[Point]:
    """Corners of a b x h rectangle centred at the origin, rotated by alpha degrees."""
    t = math.radians(alpha)
    cos, sin = math.cos(t), math.sin(t)
    corners = [
        (-width / 2, -height / 2),
        (width / 2, -height / 2),
        (width / 2, height / 2),
        (-width / 2, height / 2),
    ]
    return [(y * cos - z * sin, y * sin + z * cos) for y, z in corners]


def immersed_section(width: float, height: float, density: float, alpha: float) -> ImmersedSection:
    """
    Solve the waterline of a heeled section so that the immersed area is rho_s b h.

    Example:
        >>> round(immersed_section(4.0, 4.0, 0.5, 0.0).draft, 12)
        2.0
    """
    if not 0.0 < density < 1.0:
        raise ValueError(f"density must lie in (0, 1), got {density}")
    polygon = heeled_rectangle(width, height, alpha)
    target = density * width * height
    zs = [p[1] for p in polygon]
    low, high = min(zs), max(zs)

    def excess(level: float) -> float:
        clipped = clip_polygon_below(polygon, level)
        return (polygon_area(clipped) if len(clipped) >= 3 else 0.0) - target

    waterline = brentq(excess, low, high, xtol=1e-14 * (high - low), rtol=4 * np.finfo(float).eps)
    clipped = clip_polygon_below(polygon, waterline)
    return ImmersedSection(
        alpha=float(alpha),
        waterline=float(waterline),
        draft=float(waterline - low),
        polygon=tuple(clipped),
        area=polygon_area(clipped),
        centroid=polygon_centroid(clipped),
    )


def equilibrium_heel_oracle(
    width: float,
    height: float,
    density: float,
    step: float = 0.01,
    refine: bool = True,
) -> List[Tuple[float, float]]:
    """
    Stable heel angles of a floating rectangular section by brute force.

    For each angle on a grid over [0, 90] degrees the waterline is solved
    for vertical equilibrium; a stable angle is one where the horizontal
    offset of the centre of buoyancy from the centre of gravity changes
    sign from positive to negative, so that a small extra heel produces a
    restoring moment.

    Args:
        width: Breadth b of the section.
        height: Height h of the section.
        density: rho_s in (0, 1).
        step: Grid spacing in degrees.
        refine: Polish each crossing with a root finder.

    Returns:
        List of (heel angle, draft), ascending in angle.

    Example:
        >>> [round(a, 3) for a, _ in equilibrium_heel_oracle(1, 1, 0.25, step=0.5)]
        [26.565, 63.435]
    """
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    angles = np.linspace(0.0, 90.0, int(round(90.0 / step)) + 1)

    def offset(alpha: float) -> float:
        return immersed_section(width, height, density, alpha).offset

    dx = np.array([offset(a) for a in angles])
    # The upright and the 90 degree poses are symmetric.
    dx[0] = 0.0
    dx[-1] = 0.0

    roots: List[float] = []
    if dx[1] < 0:
        roots.append(0.0)
    for k in range(1, len(angles) - 1):
        if dx[k] > 0 and dx[k + 1] < 0:
            a, b = angles[k], angles[k + 1]
            roots.append(brentq(offset, a, b, xtol=1e-10) if refine else 0.5 * (a + b))
        elif dx[k] == 0 and dx[k - 1] > 0 and dx[k + 1] < 0:
            roots.append(float(angles[k]))
    if width != height and dx[-2] > 0:
        roots.append(90.0)

    result = []
    for alpha in sorted(roots):
        if result and abs(alpha - result[-1][0]) < 1e-6:
            continue
        result.append((float(alpha), immersed_section(width, height, density, alpha).draft))
    logger.debug("Stable heel angles for %gx%g, rho_s=%g: %s", width, height, density, result)
    return result
