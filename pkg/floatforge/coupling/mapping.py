"""
Obstacle Mapping Module

Voxelization of rigid bodies onto the lattice and the rules for cells a
moving body leaves behind. A cell is an obstacle cell of a body exactly
when its center lies strictly inside the body.

Author: FloatForge Developers
License: MIT
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from floatforge.bodies.dynamics import RigidBody
from floatforge.errors import ConfigError
from floatforge.freesurface.cells import CellState, CellStateField
from floatforge.lattice.operators import equilibrium
from floatforge.lattice.topology import DomainTopology

logger = logging.getLogger(__name__)

Cell = Tuple[int, int, int]
NO_BODY = -1


def body_inside_domain(body: RigidBody, topology: DomainTopology) -> bool:
    """True if the body's bounding box lies within the domain."""
    lower, upper = body.aabb()
    return bool(np.all(lower >= 0.0) and np.all(upper <= np.asarray(topology.shape)))


def map_body_to_grid(body: RigidBody, topology: DomainTopology) -> np.ndarray:
    """
    Cells whose centers lie strictly inside ``body``.

    Raises:
        ConfigError: If the body's bounding box leaves the domain.

    Returns:
        Bool mask of shape (nx, ny, nz).
    """
    shape = np.asarray(topology.shape)
    lower, upper = body.aabb()
    if not body_inside_domain(body, topology):
        raise ConfigError(
            f"Body '{body.name}' overlaps the domain boundary "
            f"(bounding box {np.round(lower, 3).tolist()} .. {np.round(upper, 3).tolist()}, "
            f"domain {shape.tolist()})"
        )
    lo = np.clip(np.floor(lower - 0.5).astype(int), 0, shape - 1)
    hi = np.clip(np.ceil(upper - 0.5).astype(int) + 1, 0, shape)
    mask = np.zeros(topology.shape, dtype=bool)
    grids = np.meshgrid(*(np.arange(a, b) for a, b in zip(lo, hi)), indexing="ij")
    if grids[0].size == 0:
        return mask
    centers = np.stack([g.ravel() for g in grids], axis=1) + 0.5
    inside = np.asarray(body.contains_point(centers)).reshape(grids[0].shape)
    mask[lo[0]:hi[0], lo[1]:hi[1], lo[2]:hi[2]] = inside
    return mask


@dataclass
class MapDelta:
    """Cells that changed obstacle membership during one re-map."""

    covered: List[Cell] = field(default_factory=list)
    uncovered: List[Cell] = field(default_factory=list)
    previous_owner: List[int] = field(default_factory=list)


class ObstacleMap:
    """
    Body id of every cell (-1 for no body).

    Attributes:
        body_id (np.ndarray): int16 array of body indices.
    """

    def __init__(self, topology: DomainTopology) -> None:
        self.topology = topology
        self.body_id = np.full(topology.shape, NO_BODY, dtype=np.int16)

    def voxelize(self, bodies: Sequence[RigidBody]) -> np.ndarray:
        """Body ids for the current poses; later bodies win on overlap."""
        ids = np.full(self.topology.shape, NO_BODY, dtype=np.int16)
        for index, body in enumerate(bodies):
            ids[map_body_to_grid(body, self.topology)] = index
        return ids

    def update(self, bodies: Sequence[RigidBody]) -> MapDelta:
        """Re-map all bodies and report covered and uncovered cells in C order."""
        new_ids = self.voxelize(bodies)
        old = self.body_id >= 0
        new = new_ids >= 0
        delta = MapDelta()
        delta.covered = [tuple(int(v) for v in c) for c in np.argwhere(new & ~old)]
        uncovered = np.argwhere(old & ~new)
        delta.uncovered = [tuple(int(v) for v in c) for c in uncovered]
        delta.previous_owner = [int(self.body_id[tuple(c)]) for c in uncovered]

        old_neighbors = self.topology.any_neighbor(old)
        stray = [c for c in delta.covered if not old_neighbors[c]]
        if stray:
            logger.warning(
                "%d newly covered cells are not adjacent to the previous obstacle set "
                "(body moved more than one cell per step?)", len(stray)
            )
        self.body_id = new_ids
        return delta

    def covered_count(self, index: int) -> int:
        return int(np.count_nonzero(self.body_id == index))

    def __repr__(self) -> str:
        return f"ObstacleMap(shape={self.topology.shape}, obstacle_cells={int((self.body_id >= 0).sum())})"


def refill_uncovered_cell(
    cell: Cell,
    cells: CellStateField,
    f: np.ndarray,
    rho: np.ndarray,
    u: np.ndarray,
    body: RigidBody,
    topology: DomainTopology,
    rho_gas: float,
    include_gas_density: bool = False,
) -> Optional[Tuple[CellState, float]]:
    """
    Re-initialize a cell a body has just left.

    B(x) is the set of non-obstacle neighbours of the cell:

    * no liquid (or interface) cell in B: the cell becomes gas;
    * no gas cell in B: it becomes liquid with the mean density of B and
      PDFs f_eq(rho, u_w), u_w being the body velocity at the closest
      surface point;
    * otherwise it becomes an interface cell with the mean density of the
      non-gas cells of B (optionally counting gas cells as rho_G), the same
      PDFs, and the mean fill level of the interface cells in B (0.5 if
      there are none).

    Returns:
        (new state, mass injected), or None when B is empty so the caller
        can retry after other uncovered neighbours have been filled.
    """
    neighbors = [nb for _, nb in topology.neighbors_of(cell) if cells.state[nb] != CellState.OBSTACLE]
    if not neighbors:
        return None
    states = [int(cells.state[nb]) for nb in neighbors]
    has_gas = CellState.GAS in states
    has_liquid = CellState.LIQUID in states or CellState.INTERFACE in states
    index = (slice(None),) + cell

    if not has_liquid:
        cells.state[cell] = CellState.GAS
        cells.phi[cell] = 0.0
        cells.mass[cell] = 0.0
        rho[cell] = rho_gas
        u[index] = 0.0
        f[index] = equilibrium(rho_gas, np.zeros(3))
        return CellState.GAS, 0.0

    u_wall = body.surface_velocity(body.closest_surface_point(np.asarray(cell) + 0.5))
    densities = [
        float(rho[nb]) for nb, s in zip(neighbors, states) if s != CellState.GAS
    ]
    if include_gas_density and has_gas:
        densities += [rho_gas] * states.count(CellState.GAS)
    density = float(np.mean(densities))

    rho[cell] = density
    u[index] = u_wall
    f[index] = equilibrium(density, u_wall)
    if not has_gas:
        cells.state[cell] = CellState.LIQUID
        cells.phi[cell] = 1.0
        cells.mass[cell] = density
        return CellState.LIQUID, density

    fills = [float(cells.phi[nb]) for nb, s in zip(neighbors, states) if s == CellState.INTERFACE]
    phi = float(np.mean(fills)) if fills else 0.5
    cells.state[cell] = CellState.INTERFACE
    cells.phi[cell] = phi
    cells.mass[cell] = phi * density
    return CellState.INTERFACE, phi * density
