"""
Hydrostatics Module

Analytic statics of floating cuboids: buoyancy, metacentric height,
righting moment curves and a brute-force search for stable heel angles.
"""

from floatforge.hydrostatics.cuboid import (
    FloatingCuboid,
    ImmersedSection,
    StabilityCurve,
    analytic_buoyancy,
    cuboid_GM,
    equilibrium_heel_oracle,
    heeled_rectangle,
    immersed_section,
    scribanti_B0M,
    stability_curve,
    wall_sided_limit,
    wall_sided_limits,
)
from floatforge.hydrostatics.polygon import clip_polygon_below, polygon_area, polygon_centroid

__all__ = [
    "FloatingCuboid",
    "ImmersedSection",
    "StabilityCurve",
    "analytic_buoyancy",
    "cuboid_GM",
    "equilibrium_heel_oracle",
    "heeled_rectangle",
    "immersed_section",
    "scribanti_B0M",
    "stability_curve",
    "wall_sided_limit",
    "wall_sided_limits",
    "clip_polygon_below",
    "polygon_area",
    "polygon_centroid",
]
