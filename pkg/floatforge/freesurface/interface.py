"""
Interface Module

Operations on interface cells: the per-link mass exchange between a cell
and its neighbour, surface normals from the fill-level gradient, and the
reconstruction of populations that stream in from the gas side.

The single-cell functions state the rules; the ``*_field`` variants apply
the same rules to whole arrays and are what the time step uses.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from floatforge.freesurface.cells import CellState
from floatforge.lattice.operators import equilibrium
from floatforge.lattice.stencil import C, OPPOSITE, Q, W
from floatforge.lattice.topology import DomainTopology

logger = logging.getLogger(__name__)

_CF = C.astype(np.float64)
DEFAULT_UP = (0.0, 0.0, 1.0)


def exchange_weight(neighbor_state: int, phi_cell: float, phi_neighbor: float) -> float:
    """Weight of the population difference for one link."""
    if neighbor_state == CellState.LIQUID:
        return 1.0
    if neighbor_state == CellState.INTERFACE:
        return 0.5 * (phi_cell + phi_neighbor)
    # Gas, obstacle and wall neighbours carry no mass flux.
    return 0.0


def mass_exchange(
    neighbor_state: int,
    phi_cell: float,
    phi_neighbor: float,
    f_in: float,
    f_out: float,
) -> float:
    """
    Mass gained by a cell through one link.

    Args:
        neighbor_state: State of the cell x + c_i.
        phi_cell: Fill level of x.
        phi_neighbor: Fill level of x + c_i.
        f_in: f_ī(x + c_i), the population the neighbour sends to x.
        f_out: f_i(x), the population x sends to the neighbour.

    Returns:
        Δm_i; swapping the roles of the two cells negates it.

    Example:
        >>> mass_exchange(CellState.INTERFACE, 1.0, 1.0, 0.06, 0.05)  # doctest: +ELLIPSIS
        0.0099999...
    """
    return exchange_weight(neighbor_state, phi_cell, phi_neighbor) * (f_in - f_out)


def mass_exchange_field(
    f: np.ndarray,
    f_pulled: np.ndarray,
    state: np.ndarray,
    phi: np.ndarray,
    topology: DomainTopology,
) -> np.ndarray:
    """
    Net mass change of every interface cell over all 18 links.

    Args:
        f: Post-collision populations of the previous step.
        f_pulled: Plain streamed populations, f_pulled[i, x] = f[i, x - c_i].
        state: Cell states.
        phi: Fill levels.
        topology: Domain topology.

    Returns:
        Δm per cell (zero outside interface cells).
    """
    dm = np.zeros(state.shape)
    iface = state == CellState.INTERFACE
    if not iface.any():
        return dm
    for i in range(1, Q):
        inv = int(OPPOSITE[i])
        nb_state = topology.neighbor(state, i, fill=CellState.OBSTACLE)
        nb_phi = topology.neighbor(phi, i, fill=0.0)
        weight = np.where(
            nb_state == CellState.LIQUID,
            1.0,
            np.where(nb_state == CellState.INTERFACE, 0.5 * (phi + nb_phi), 0.0),
        )
        # f_pulled[ī, x] is f[ī, x + c_i], the neighbour's population towards x.
        dm += np.where(iface, weight * (f_pulled[inv] - f[i]), 0.0)
    return dm


def _fallback_normal(gravity: Optional[Sequence[float]]) -> np.ndarray:
    if gravity is not None:
        g = np.asarray(gravity, dtype=np.float64)
        norm = np.linalg.norm(g)
        if norm > 0:
            return -g / norm
    return np.asarray(DEFAULT_UP)


def surface_normal(
    fills: np.ndarray,
    obstacle: Optional[np.ndarray] = None,
    gravity: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """
    Unit normal of an interface cell from its 3x3x3 fill neighbourhood.

    The normal is -∇phi / |∇phi| with central differences, so it points out
    of the liquid. Obstacle neighbours take the fill level of the center.
    A vanishing gradient falls back to the direction opposite to gravity,
    or +z without gravity.

    Args:
        fills: Fill levels, shape (3, 3, 3), center at [1, 1, 1].
        obstacle: Optional bool mask of obstacle neighbours, same shape.
        gravity: Gravity vector for the fallback.
    """
    fills = np.asarray(fills, dtype=np.float64).copy()
    if fills.shape != (3, 3, 3):
        raise ValueError(f"Expected a 3x3x3 neighbourhood, got {fills.shape}")
    if obstacle is not None:
        fills[np.asarray(obstacle, dtype=bool)] = fills[1, 1, 1]
    grad = 0.5 * np.array(
        [
            fills[2, 1, 1] - fills[0, 1, 1],
            fills[1, 2, 1] - fills[1, 0, 1],
            fills[1, 1, 2] - fills[1, 1, 0],
        ]
    )
    norm = np.linalg.norm(grad)
    if norm == 0.0:
        return _fallback_normal(gravity)
    return -grad / norm


def effective_fill(state: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Fill levels used for normals: 1 in liquid, 0 in gas, clipped phi in interface."""
    return np.where(
        state == CellState.LIQUID,
        1.0,
        np.where(state == CellState.INTERFACE, np.clip(phi, 0.0, 1.0), 0.0),
    )


def surface_normals(
    state: np.ndarray,
    phi: np.ndarray,
    topology: DomainTopology,
    gravity: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """
    Normals of every cell, shape (3, nx, ny, nz).

    Only interface entries are meaningful. Obstacle and out-of-domain
    neighbours take the value of the center cell.
    """
    fill = effective_fill(state, phi)
    blocked = state == CellState.OBSTACLE
    grad = np.zeros((3,) + state.shape)
    for axis in range(3):
        plus = Q_AXIS[axis][0]
        minus = Q_AXIS[axis][1]
        hi = topology.neighbor(fill, plus, fill=np.nan)
        lo = topology.neighbor(fill, minus, fill=np.nan)
        hi_blocked = topology.neighbor(blocked, plus, fill=True) | np.isnan(hi)
        lo_blocked = topology.neighbor(blocked, minus, fill=True) | np.isnan(lo)
        hi = np.where(hi_blocked, fill, hi)
        lo = np.where(lo_blocked, fill, lo)
        grad[axis] = 0.5 * (hi - lo)
    norm = np.sqrt(np.sum(grad * grad, axis=0))
    fallback = _fallback_normal(gravity)
    with np.errstate(divide="ignore", invalid="ignore"):
        normals = np.where(norm > 0.0, -grad / norm, fallback[:, None, None, None])
    return normals


# Direction indices of +axis and -axis for x, y, z.
Q_AXIS: Tuple[Tuple[int, int], ...] = tuple(
    (
        int(np.nonzero((C == np.eye(3, dtype=int)[a]).all(axis=1))[0][0]),
        int(np.nonzero((C == -np.eye(3, dtype=int)[a]).all(axis=1))[0][0]),
    )
    for a in range(3)
)


def reconstruction_links(normal: Sequence[float]) -> np.ndarray:
    """Directions i != 0 with c_i · n <= 0, the ones arriving from the gas side."""
    cn = _CF @ np.asarray(normal, dtype=np.float64)
    links = cn <= 0.0
    links[0] = False
    return links


def reconstruct_interface_pdfs(
    f_out: Sequence[float],
    f_in: Sequence[float],
    rho_gas: float,
    u: Sequence[float],
    normal: Sequence[float],
    from_gas: Optional[Sequence[bool]] = None,
) -> np.ndarray:
    """
    Incoming populations of an interface cell with the gas side rebuilt.

    Every link in :func:`reconstruction_links` and every link whose source
    cell is gas gets

        f'_i = f_eq,i(rho_G, u) + f_eq,ī(rho_G, u) - f_ī

    where f_ī is the cell's own post-collision population leaving in the
    opposite direction. The remaining links keep their streamed value.

    Args:
        f_out: Post-collision populations of the cell (19 values).
        f_in: Streamed incoming populations (19 values).
        rho_gas: Gas density.
        u: Cell velocity of the previous step.
        normal: Surface normal.
        from_gas: Optional mask of links whose source is a gas cell.

    Returns:
        np.ndarray: The 19 incoming populations.
    """
    f_out = np.asarray(f_out, dtype=np.float64)
    result = np.array(f_in, dtype=np.float64)
    links = reconstruction_links(normal)
    if from_gas is not None:
        links = links | np.asarray(from_gas, dtype=bool)
    feq = equilibrium(rho_gas, np.asarray(u, dtype=np.float64))
    rebuilt = feq + feq[OPPOSITE] - f_out[OPPOSITE]
    result[links] = rebuilt[links]
    return result


def gas_pressure_pair(rho_gas: float, u: np.ndarray) -> np.ndarray:
    """
    f_eq,i(rho_G, u) + f_eq,ī(rho_G, u) for all directions and cells.

    The odd velocity terms cancel in the sum, leaving
    2 w_i rho_G (1 + 4.5 (c_i · u)² - 1.5 |u|²).
    """
    u = np.asarray(u, dtype=np.float64)
    shape = (-1,) + (1,) * (u.ndim - 1)
    cu = (
        _CF[:, 0].reshape(shape) * u[0]
        + _CF[:, 1].reshape(shape) * u[1]
        + _CF[:, 2].reshape(shape) * u[2]
    )
    usq = u[0] * u[0] + u[1] * u[1] + u[2] * u[2]
    return 2.0 * W.reshape(shape) * rho_gas * (1.0 + 4.5 * cu * cu - 1.5 * usq)
