"""
Cell Conversion Module

Converts interface cells that became full or empty, keeps the interface
layer closed around them and redistributes the mass that does not fit the
new state. The pass runs in three phases (mark, resolve, apply) over cells
in C order, so its outcome does not depend on how the lattice sweeps were
parallelized.

Author: FloatForge Developers
License: MIT
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from floatforge.errors import ConsistencyError
from floatforge.freesurface.cells import CellState, CellStateField
from floatforge.lattice.operators import equilibrium
from floatforge.lattice.stencil import C
from floatforge.lattice.topology import DomainTopology

logger = logging.getLogger(__name__)

Cell = Tuple[int, int, int]
_CF = C.astype(np.float64)


@dataclass
class ConversionLog:
    """
    What one conversion pass did.

    Attributes:
        filled: Interface cells that became liquid.
        emptied: Interface cells that became gas.
        from_gas: Gas cells that became interface cells.
        from_liquid: Liquid cells that became interface cells.
        residue: Mass that found no interface neighbour.
    """

    filled: List[Cell] = field(default_factory=list)
    emptied: List[Cell] = field(default_factory=list)
    from_gas: List[Cell] = field(default_factory=list)
    from_liquid: List[Cell] = field(default_factory=list)
    residue: float = 0.0

    @property
    def n_conversions(self) -> int:
        return len(self.filled) + len(self.emptied) + len(self.from_gas) + len(self.from_liquid)

    def __repr__(self) -> str:
        return (
            f"ConversionLog(filled={len(self.filled)}, emptied={len(self.emptied)}, "
            f"from_gas={len(self.from_gas)}, from_liquid={len(self.from_liquid)}, "
            f"residue={self.residue:.3g})"
        )


def distribute_excess_mass(
    cell: Cell,
    excess: float,
    normal: Optional[Sequence[float]],
    cells: CellStateField,
    topology: DomainTopology,
    toward_gas: bool = True,
    rho: Optional[np.ndarray] = None,
) -> float:
    """
    Hand a converted cell's surplus (or deficit) mass to interface neighbours.

    Neighbours are weighted by max(0, n · c_i) when ``toward_gas`` (a cell
    that filled pushes its surplus outwards) and by max(0, -n · c_i)
    otherwise. If no neighbour has a positive weight the excess is shared
    uniformly among interface neighbours.

    Args:
        cell: The converted cell.
        excess: Mass to distribute; may be negative.
        normal: Surface normal of the cell before conversion, or None for
            uniform distribution.
        cells: Cell state field, updated in place.
        topology: Domain topology.
        toward_gas: Direction of the weighting, see above.
        rho: Density field; fill levels of receivers are refreshed if given.

    Returns:
        The part of ``excess`` that could not be placed (to be booked in the
        global residue).
    """
    if excess == 0.0:
        return 0.0
    receivers: List[Cell] = []
    weights: List[float] = []
    for i, nb in topology.neighbors_of(cell):
        if cells.state[nb] != CellState.INTERFACE:
            continue
        receivers.append(nb)
        if normal is None:
            weights.append(1.0)
        else:
            cn = float(_CF[i] @ np.asarray(normal, dtype=np.float64))
            weights.append(max(0.0, cn if toward_gas else -cn))
    if not receivers:
        return excess
    total = sum(weights)
    if total <= 0.0:
        weights = [1.0] * len(receivers)
        total = float(len(receivers))
    for nb, weight in zip(receivers, weights):
        cells.mass[nb] += excess * weight / total
        if rho is not None and rho[nb] > 0:
            cells.phi[nb] = cells.mass[nb] / rho[nb]
    return 0.0


def _mean_velocity(cell: Cell, cells: CellStateField, u: np.ndarray, topology: DomainTopology):
    total = np.zeros(3)
    count = 0
    for _, nb in topology.neighbors_of(cell):
        if cells.state[nb] in (CellState.LIQUID, CellState.INTERFACE):
            total += u[(slice(None),) + nb]
            count += 1
    return total / count if count else total


def convert_cells(
    cells: CellStateField,
    f: np.ndarray,
    rho: np.ndarray,
    u: np.ndarray,
    normals: np.ndarray,
    topology: DomainTopology,
    rho_gas: float,
    epsilon: float,
) -> ConversionLog:
    """
    Apply the interface conversion rules.

    Interface cells with phi >= 1 + epsilon become liquid and those with
    phi <= -epsilon become gas. Gas neighbours of filled cells become
    interface cells with phi = 0 and PDFs f_eq(rho_G, ū), ū being the mean
    velocity of their fluid neighbours. Liquid neighbours of emptied cells
    become interface cells with phi = 1. An emptied cell next to a filled
    one stays an interface cell. Surplus mass (m - rho for filled cells, m
    for emptied cells) is handed to interface neighbours.

    Args:
        cells: Cell states, updated in place.
        f: Post-collision PDFs, updated in place for new interface cells.
        rho: Density field, updated in place for new cells.
        u: Velocity field, updated in place for new cells.
        normals: Surface normals, shape (3, nx, ny, nz).
        topology: Domain topology.
        rho_gas: Gas density.
        epsilon: Conversion hysteresis.

    Returns:
        ConversionLog of everything that changed.
    """
    log = ConversionLog()
    iface = cells.interface
    with np.errstate(divide="ignore", invalid="ignore"):
        fill = np.where(rho > 0, cells.mass / rho, 0.0)
    # STEP 1: mark
    filled = [tuple(int(v) for v in c) for c in np.argwhere(iface & (fill >= 1.0 + epsilon))]
    emptied = [tuple(int(v) for v in c) for c in np.argwhere(iface & (fill <= -epsilon))]
    if not filled and not emptied:
        return log

    # STEP 2: resolve; filled cells win over emptied neighbours
    filled_set = set(filled)
    kept = []
    for cell in emptied:
        if any(nb in filled_set for _, nb in topology.neighbors_of(cell)):
            continue
        kept.append(cell)
    emptied = kept

    # STEP 3: apply
    for cell in filled:
        for _, nb in topology.neighbors_of(cell):
            if cells.state[nb] != CellState.GAS:
                continue
            cells.state[nb] = CellState.INTERFACE
            ubar = _mean_velocity(nb, cells, u, topology)
            cells.phi[nb] = 0.0
            cells.mass[nb] = 0.0
            rho[nb] = rho_gas
            u[(slice(None),) + nb] = ubar
            f[(slice(None),) + nb] = equilibrium(rho_gas, ubar)
            log.from_gas.append(nb)
        cells.state[cell] = CellState.LIQUID

    for cell in emptied:
        for _, nb in topology.neighbors_of(cell):
            if cells.state[nb] != CellState.LIQUID:
                continue
            cells.state[nb] = CellState.INTERFACE
            cells.phi[nb] = 1.0
            cells.mass[nb] = rho[nb]
            log.from_liquid.append(nb)
        cells.state[cell] = CellState.GAS

    for cell in filled:
        excess = float(cells.mass[cell] - rho[cell])
        cells.mass[cell] = rho[cell]
        cells.phi[cell] = 1.0
        normal = normals[(slice(None),) + cell]
        log.residue += distribute_excess_mass(
            cell, excess, normal, cells, topology, toward_gas=True, rho=rho
        )
    for cell in emptied:
        excess = float(cells.mass[cell])
        cells.mass[cell] = 0.0
        cells.phi[cell] = 0.0
        normal = normals[(slice(None),) + cell]
        log.residue += distribute_excess_mass(
            cell, excess, normal, cells, topology, toward_gas=False, rho=rho
        )
        rho[cell] = rho_gas
        u[(slice(None),) + cell] = 0.0

    log.filled = filled
    log.emptied = emptied
    if log.residue:
        logger.debug("Conversion left %.3e mass without interface neighbours", log.residue)
    return log


def check_closed_layer(
    cells: CellStateField, topology: DomainTopology, step: Optional[int] = None
) -> None:
    """
    Verify that no liquid cell touches a gas cell.

    Raises:
        ConsistencyError: With the coordinates of the offending liquid cells.
    """
    contacts = cells.liquid_gas_contacts(topology)
    if contacts:
        raise ConsistencyError("interface layer has a hole: liquid cell touches gas", step, contacts)


def close_interface_layer(
    cells: CellStateField,
    f: np.ndarray,
    rho: np.ndarray,
    u: np.ndarray,
    topology: DomainTopology,
    rho_gas: float,
) -> List[Cell]:
    """
    Turn gas cells that touch liquid into empty interface cells.

    Used after obstacle motion, which can expose liquid to gas. Returns the
    repaired cells.
    """
    repair = cells.gas & topology.any_neighbor(cells.liquid)
    repaired = [tuple(int(v) for v in c) for c in np.argwhere(repair)]
    for cell in repaired:
        cells.state[cell] = CellState.INTERFACE
    for cell in repaired:
        ubar = _mean_velocity(cell, cells, u, topology)
        cells.phi[cell] = 0.0
        cells.mass[cell] = 0.0
        rho[cell] = rho_gas
        u[(slice(None),) + cell] = ubar
        f[(slice(None),) + cell] = equilibrium(rho_gas, ubar)
    if repaired:
        logger.debug("Closed the interface layer at %d cells", len(repaired))
    return repaired
