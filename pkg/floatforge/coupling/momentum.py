"""
Momentum Exchange Module

Force and torque on bodies from the populations reflected at their
surface. For a link pointing from a fluid cell x into a body along c_k the
body receives

    Δj = 2 c_k ( f~_k - w_k rho~ (c_k · u_w) / cs² )

with f~_k = phi f_k + (1 - phi) f_eq,k(rho_G, 0) and rho~ = phi rho. phi is
1 for liquid cells, the clipped fill level for interface cells and 0 for
gas cells, so gas cells only transmit the gas pressure.
"""

import logging
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from floatforge.bodies.dynamics import RigidBody
from floatforge.freesurface.cells import CellState
from floatforge.lattice.stencil import C, CS2, Q, W
from floatforge.lattice.topology import DomainTopology
from floatforge.utils import deterministic_vector_sum

logger = logging.getLogger(__name__)

_CF = C.astype(np.float64)


def momentum_exchange_link(f_toward: float, k: int, u_wall: Sequence[float], rho: float) -> np.ndarray:
    """
    Momentum a liquid cell transfers to a body through one link.

    Args:
        f_toward: Post-collision population f_k of the fluid cell heading
            into the body.
        k: Direction index pointing from the fluid cell into the body.
        u_wall: Body surface velocity at the link.
        rho: Density of the fluid cell.

    Example:
        >>> momentum_exchange_link(0.06, 5, (0, 0, 0), 1.0)  # c_5 = (0, 0, 1)
        array([0.  , 0.  , 0.12])
    """
    cu = float(_CF[k] @ np.asarray(u_wall, dtype=np.float64))
    return 2.0 * _CF[k] * (f_toward - W[k] * rho * cu / CS2)


def momentum_exchange_interface(
    phi: float,
    f_toward: float,
    k: int,
    rho_gas: float,
    u_wall: Sequence[float],
    rho: float = 1.0,
) -> np.ndarray:
    """
    Momentum transfer through a link from an interface or gas cell.

    The population is blended with the gas equilibrium according to the
    fill level; phi = 1 gives :func:`momentum_exchange_link`, phi = 0 leaves
    only 2 c_k f_eq,k(rho_G, 0).
    """
    phi = float(np.clip(phi, 0.0, 1.0))
    blended = phi * f_toward + (1.0 - phi) * W[k] * rho_gas
    cu = float(_CF[k] @ np.asarray(u_wall, dtype=np.float64))
    return 2.0 * _CF[k] * (blended - W[k] * phi * rho * cu / CS2)


class LinkForceAccumulator:
    """
    Collects per-link momentum transfers and their lever arms.

    Contributions are stored in the order they are added and summed with
    compensated summation, so the totals do not depend on how the links
    were gathered.
    """

    def __init__(self) -> None:
        self._dj: List[np.ndarray] = []
        self._arms: List[np.ndarray] = []
        self.n_links = 0

    def add(self, dj: np.ndarray, arms: np.ndarray) -> None:
        dj = np.asarray(dj, dtype=np.float64).reshape(-1, 3)
        arms = np.asarray(arms, dtype=np.float64).reshape(-1, 3)
        self._dj.append(dj)
        self._arms.append(arms)
        self.n_links += dj.shape[0]

    def force(self) -> np.ndarray:
        if not self._dj:
            return np.zeros(3)
        return deterministic_vector_sum(np.concatenate(self._dj))

    def torque(self) -> np.ndarray:
        if not self._dj:
            return np.zeros(3)
        return deterministic_vector_sum(np.cross(np.concatenate(self._arms), np.concatenate(self._dj)))

    def result(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.force(), self.torque()

    def __repr__(self) -> str:
        return f"LinkForceAccumulator(n_links={self.n_links})"


def _body_links(
    index: int,
    state: np.ndarray,
    phi: np.ndarray,
    body_id: np.ndarray,
    topology: DomainTopology,
) -> Iterator[Tuple[int, Tuple[np.ndarray, ...], np.ndarray, np.ndarray]]:
    """Yield (k, cell index, cell centers, fill weight) for links into body ``index``."""
    open_cell = state != CellState.OBSTACLE
    weight = np.where(
        state == CellState.LIQUID,
        1.0,
        np.where(state == CellState.INTERFACE, np.clip(phi, 0.0, 1.0), 0.0),
    )
    for k in range(1, Q):
        links = open_cell & (topology.neighbor(body_id, k, fill=-1) == index)
        if not links.any():
            continue
        idx = np.nonzero(links)
        centers = np.stack(idx, axis=1).astype(np.float64) + 0.5
        yield k, idx, centers, weight[idx]


def net_force_torque(
    index: int,
    body: RigidBody,
    state: np.ndarray,
    phi: np.ndarray,
    f: np.ndarray,
    rho: np.ndarray,
    body_id: np.ndarray,
    topology: DomainTopology,
    rho_gas: float,
) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Net hydrodynamic force and torque on one body.

    Sums the momentum exchange over every link from a non-obstacle cell
    into a cell of body ``index``. The torque arm is the fluid cell center
    minus the body's center of gravity.

    Args:
        index: Body index in ``body_id``.
        body: The body (for its surface velocity and center).
        state: Cell states.
        phi: Fill levels.
        f: Post-collision populations.
        rho: Densities.
        body_id: Obstacle map.
        topology: Domain topology.
        rho_gas: Gas density.

    Returns:
        (force, torque, number of links).
    """
    acc = LinkForceAccumulator()
    for k, idx, centers, p in _body_links(index, state, phi, body_id, topology):
        u_wall = body.surface_velocity(centers + 0.5 * _CF[k])
        cu = u_wall @ _CF[k]
        blended = p * f[k][idx] + (1.0 - p) * W[k] * rho_gas
        magnitude = 2.0 * (blended - W[k] * p * rho[idx] * cu / CS2)
        acc.add(magnitude[:, None] * _CF[k][None, :], centers - body.state.position)
    force, torque = acc.result()
    return force, torque, acc.n_links


def coupling_stiffness(
    index: int,
    body: RigidBody,
    state: np.ndarray,
    phi: np.ndarray,
    rho: np.ndarray,
    body_id: np.ndarray,
    topology: DomainTopology,
) -> np.ndarray:
    """
    Linear response of the force and torque to the body's own motion.

    The moving-wall part of every link is -a c_k (c_k · v + g_k · ω) with
    a = 2 w_k phi rho / cs² and g_k = (x - o) × c_k, so the load on the body
    is -K (v, ω) with

        K = Σ a (c_k, g_k)(c_k, g_k)ᵀ

    a symmetric positive semi-definite 6 x 6 matrix. The integrator takes
    this part implicitly.
    """
    stiffness = np.zeros((6, 6))
    for k, idx, centers, p in _body_links(index, state, phi, body_id, topology):
        a = 2.0 * W[k] * p * rho[idx] / CS2
        arms = np.cross(centers - body.state.position, _CF[k])
        rows = np.concatenate([np.broadcast_to(_CF[k], arms.shape), arms], axis=1)
        stiffness += (rows * a[:, None]).T @ rows
    return stiffness
