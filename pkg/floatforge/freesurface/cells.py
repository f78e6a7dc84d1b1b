"""
Cell State Module

Per-cell state tags, fill levels and liquid mass of the volume-of-fluid
free surface, together with the generation of initial fill configurations.

Author: FloatForge Developers
License: MIT
"""

import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, List, Tuple

import numpy as np

from floatforge.errors import ConfigError
from floatforge.lattice.stencil import CS2
from floatforge.lattice.topology import DomainTopology
from floatforge.utils import deterministic_sum

logger = logging.getLogger(__name__)


class CellState(IntEnum):
    """State tag of a lattice cell."""

    GAS = 0
    INTERFACE = 1
    LIQUID = 2
    OBSTACLE = 3


FILL_KINDS = ("all", "none", "below")


@dataclass(frozen=True)
class FillSpec:
    """
    Initial liquid distribution.

    Attributes:
        kind (str): 'all' (domain full of liquid), 'none' (gas only) or
            'below' (liquid under a plane).
        level (float): Height of the plane at the domain center, for 'below'.
        slope (tuple): (dz/dx, dz/dy) of the plane.
        hydrostatic (bool): Initialize density with the hydrostatic profile.
        velocity (tuple): Initial liquid velocity.
    """

    kind: str = "all"
    level: float = 0.0
    slope: Tuple[float, float] = (0.0, 0.0)
    hydrostatic: bool = True
    velocity: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        if self.kind not in FILL_KINDS:
            raise ConfigError(f"Unknown fill kind '{self.kind}', expected one of {FILL_KINDS}")


class CellStateField:
    """
    State tags, fill levels and mass of every cell.

    Liquid cells have phi = 1 and mass equal to their density, gas and
    obstacle cells have phi = 0 and no mass, interface cells carry a fill
    level in (-epsilon, 1 + epsilon) with mass = phi * rho.

    Attributes:
        state (np.ndarray): int8 tags, values of :class:`CellState`.
        phi (np.ndarray): Fill levels.
        mass (np.ndarray): Liquid mass per cell.
    """

    def __init__(self, shape: Tuple[int, int, int]) -> None:
        self.shape = tuple(int(n) for n in shape)
        self.state = np.full(self.shape, CellState.GAS, dtype=np.int8)
        self.phi = np.zeros(self.shape, dtype=np.float64)
        self.mass = np.zeros(self.shape, dtype=np.float64)

    # masks --------------------------------------------------------------

    def mask(self, kind: CellState) -> np.ndarray:
        return self.state == kind

    @property
    def liquid(self) -> np.ndarray:
        return self.state == CellState.LIQUID

    @property
    def interface(self) -> np.ndarray:
        return self.state == CellState.INTERFACE

    @property
    def gas(self) -> np.ndarray:
        return self.state == CellState.GAS

    @property
    def obstacle(self) -> np.ndarray:
        return self.state == CellState.OBSTACLE

    @property
    def fluid(self) -> np.ndarray:
        """Cells that carry PDFs: liquid and interface."""
        return (self.state == CellState.LIQUID) | (self.state == CellState.INTERFACE)

    # diagnostics --------------------------------------------------------

    def counts(self) -> Dict[str, int]:
        return {kind.name.lower(): int(np.count_nonzero(self.state == kind)) for kind in CellState}

    def total_mass(self) -> float:
        """Σ m over liquid and interface cells (correctly rounded)."""
        return deterministic_sum(self.mass[self.fluid])

    def liquid_gas_contacts(self, topology: DomainTopology) -> List[Tuple[int, int, int]]:
        """Liquid cells with a gas neighbour on any of the 18 links."""
        bad = self.liquid & topology.any_neighbor(self.gas)
        return [tuple(int(v) for v in c) for c in np.argwhere(bad)]

    def copy(self) -> "CellStateField":
        other = CellStateField(self.shape)
        other.state[...] = self.state
        other.phi[...] = self.phi
        other.mass[...] = self.mass
        return other

    def __repr__(self) -> str:
        counts = ", ".join(f"{k}={v}" for k, v in self.counts().items())
        return f"CellStateField(shape={self.shape}, {counts})"


def fill_fraction(shape: Tuple[int, int, int], fill: FillSpec, samples: int = 4) -> np.ndarray:
    """
    Fraction of each cell below the fill plane, from samples³ sub-points.

    The plane passes through height ``fill.level`` at the horizontal domain
    center and rises with ``fill.slope``.
    """
    if fill.kind == "all":
        return np.ones(shape)
    if fill.kind == "none":
        return np.zeros(shape)
    nx, ny, _ = shape
    x, y, z = np.indices(shape).astype(np.float64)
    offsets = (np.arange(samples) + 0.5) / samples
    count = np.zeros(shape)
    sx, sy = fill.slope
    for ox in offsets:
        for oy in offsets:
            surface = fill.level + sx * (x + ox - nx / 2.0) + sy * (y + oy - ny / 2.0)
            for oz in offsets:
                count += (z + oz) < surface
    return count / samples ** 3


def surface_height(shape: Tuple[int, int, int], fill: FillSpec) -> np.ndarray:
    """Height of the fill plane above every cell center."""
    nx, ny, nz = shape
    if fill.kind == "all":
        return np.full(shape, float(nz))
    if fill.kind == "none":
        return np.zeros(shape)
    x, y, _ = np.indices(shape).astype(np.float64) + 0.5
    sx, sy = fill.slope
    return fill.level + sx * (x - nx / 2.0) + sy * (y - ny / 2.0)


def initialize_cells(
    topology: DomainTopology,
    fill: FillSpec,
    gravity: Tuple[float, float, float],
    rho_gas: float,
) -> Tuple[CellStateField, np.ndarray, np.ndarray]:
    """
    Build the initial cell states, density and velocity.

    Cells completely below the plane are liquid, cells completely above it
    are gas, the rest are interface cells with their sub-sampled fill level.
    Liquid cells touching gas are demoted to interface cells with phi = 1 so
    that the interface layer is closed. With ``fill.hydrostatic`` the liquid
    density follows rho_G exp(|a_z| depth / cs²) below the plane.

    Returns:
        (cells, rho, u) with rho of shape (nx, ny, nz) and u of shape
        (3, nx, ny, nz).
    """
    shape = topology.shape
    cells = CellStateField(shape)
    phi = np.clip(fill_fraction(shape, fill), 0.0, 1.0)

    cells.state[phi >= 1.0] = CellState.LIQUID
    cells.state[(phi > 0.0) & (phi < 1.0)] = CellState.INTERFACE
    cells.state[phi <= 0.0] = CellState.GAS
    demote = cells.liquid & topology.any_neighbor(cells.gas)
    cells.state[demote] = CellState.INTERFACE
    if np.any(demote):
        logger.debug("Demoted %d liquid cells to close the interface layer", int(demote.sum()))

    rho = np.full(shape, float(rho_gas))
    if fill.hydrostatic and gravity[2] != 0.0 and fill.kind != "none":
        z_center = np.indices(shape)[2] + 0.5
        depth = np.clip(surface_height(shape, fill) - z_center, 0.0, None)
        # Pressure grows downwards when gravity points to -z.
        rho = rho_gas * np.exp(-gravity[2] * depth / CS2)
    rho = np.where(cells.fluid, rho, rho_gas)

    cells.phi[...] = np.where(cells.liquid, 1.0, np.where(cells.interface, phi, 0.0))
    cells.phi[demote] = 1.0
    cells.mass[...] = np.where(cells.fluid, cells.phi * rho, 0.0)

    u = np.zeros((3,) + shape)
    fluid = cells.fluid
    for axis in range(3):
        u[axis][fluid] = fill.velocity[axis]
    return cells, rho, u
