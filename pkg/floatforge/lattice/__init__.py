"""
Lattice Module

D3Q19 BGK lattice: stencil, pointwise operators, domain topology and the
double-buffered PDF field.
"""

from floatforge.lattice.stencil import D3Q19, Stencil
from floatforge.lattice.operators import (
    MacroState,
    SimParams,
    StabilityReport,
    apply_noslip,
    check_stability,
    equilibrium,
    force_term,
    moments,
    momentum_flux,
    shear_stress,
)
from floatforge.lattice.topology import DomainBoundaries, DomainTopology, FaceSpec
from floatforge.lattice.field import PdfField, SlabExecutor, collide, stream

__all__ = [
    "D3Q19",
    "Stencil",
    "MacroState",
    "SimParams",
    "StabilityReport",
    "apply_noslip",
    "check_stability",
    "equilibrium",
    "force_term",
    "moments",
    "momentum_flux",
    "shear_stress",
    "DomainBoundaries",
    "DomainTopology",
    "FaceSpec",
    "PdfField",
    "SlabExecutor",
    "collide",
    "stream",
]
