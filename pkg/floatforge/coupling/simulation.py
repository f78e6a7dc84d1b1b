"""
Coupled Simulation Module

The Simulation owns the lattice, the cell states and the rigid bodies and
advances them together. One call to :meth:`Simulation.step` runs, in this
order:

    1. momentum exchange on the bodies and their coupling stiffness
    2. streaming with wall and body bounce-back and gas-side reconstruction
    3. mass exchange and fill level update
    4. BGK collision with gravity
    5. interface cell conversions and the closed-layer check
    6. implicit body integration with the loads from (1)
    7. body speed and domain checks, re-mapping, covering and refilling

The moving-wall part of the load enters the body update implicitly and
the body carries a virtual mass of ``virtual_mass`` times its volume
(liquid density 1). With ``average_forces`` the velocity-independent part
of the load is averaged over two steps; off by default, so the reported
forces keep their step-to-step staircase.

State transitions of cells happen only in (5) and (7).

Author: FloatForge Developers
License: MIT
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from floatforge.bodies.dynamics import RigidBody
from floatforge.coupling.mapping import ObstacleMap, body_inside_domain, refill_uncovered_cell
from floatforge.coupling.momentum import coupling_stiffness, net_force_torque
from floatforge.errors import ConsistencyError, DivergenceError
from floatforge.freesurface.cells import CellState, CellStateField
from floatforge.freesurface.conversion import (
    ConversionLog,
    check_closed_layer,
    close_interface_layer,
    convert_cells,
    distribute_excess_mass,
)
from floatforge.freesurface.interface import (
    gas_pressure_pair,
    mass_exchange_field,
    surface_normals,
)
from floatforge.lattice.operators import SimParams, equilibrium
from floatforge.lattice.field import PdfField
from floatforge.lattice.stencil import C, CS2, OPPOSITE, Q, W
from floatforge.lattice.topology import DomainTopology
from floatforge.utils import deterministic_sum, deterministic_vector_sum

logger = logging.getLogger(__name__)

_CF = C.astype(np.float64)

L, I, G, O = (CellState.LIQUID, CellState.INTERFACE, CellState.GAS, CellState.OBSTACLE)

# The ten admissible state changes between two consecutive steps.
ALLOWED_TRANSITIONS = frozenset(
    {(L, I), (I, L), (I, G), (G, I), (L, O), (I, O), (G, O), (O, L), (O, I), (O, G)}
)


@dataclass
class TransitionAuditor:
    """
    Records cell state changes between consecutive steps.

    Attributes:
        counts: Number of cells per (old, new) state pair.
        violations: (step, old, new, cell) for every inadmissible change.
        contacts: (step, number of liquid-gas contacts) whenever non-zero.
    """

    counts: Counter = field(default_factory=Counter)
    violations: List[Tuple[int, str, str, Tuple[int, int, int]]] = field(default_factory=list)
    contacts: List[Tuple[int, int]] = field(default_factory=list)

    def record(
        self,
        before: np.ndarray,
        after: np.ndarray,
        step: int,
        cells: Optional[CellStateField] = None,
        topology: Optional[DomainTopology] = None,
    ) -> None:
        changed = np.argwhere(before != after)
        for cell in changed:
            cell = tuple(int(v) for v in cell)
            pair = (CellState(int(before[cell])), CellState(int(after[cell])))
            self.counts[pair] += 1
            if pair not in ALLOWED_TRANSITIONS:
                self.violations.append((step, pair[0].name, pair[1].name, cell))
        if cells is not None and topology is not None:
            n = len(cells.liquid_gas_contacts(topology))
            if n:
                self.contacts.append((step, n))

    @property
    def clean(self) -> bool:
        return not self.violations and not self.contacts

    def observed(self) -> Dict[str, int]:
        return {f"{a.name}->{b.name}": n for (a, b), n in sorted(self.counts.items())}

    def assert_clean(self) -> None:
        if self.violations:
            step, a, b, cell = self.violations[0]
            raise ConsistencyError(
                f"inadmissible transition {a}->{b} ({len(self.violations)} in total)",
                step,
                [v[3] for v in self.violations],
            )
        if self.contacts:
            raise ConsistencyError(
                f"liquid-gas contacts observed at {len(self.contacts)} steps", self.contacts[0][0]
            )


class Simulation:
    """
    Free-surface lattice Boltzmann flow coupled to rigid bodies.

    Attributes:
        params (SimParams): Physical parameters.
        topology (DomainTopology): Domain and boundary conditions.
        cells (CellStateField): States, fill levels and mass.
        rho (np.ndarray): Density of every cell (rho_G outside the fluid).
        u (np.ndarray): Velocity of every cell, shape (3, nx, ny, nz).
        field (PdfField): Populations.
        bodies (list): Rigid bodies.
        obstacles (ObstacleMap): Body id of every cell.
        time (int): Number of completed steps.
        residue (float): Mass removed from the cells that could not be
            placed elsewhere, minus mass injected by refills and by the
            moving-wall term.
        wall_mass (float): Mass the moving-wall term added to liquid cells.
        forces (list): Hydrodynamic (force, torque) per body from the last
            step, evaluated with the new body velocities.

    Example:
        >>> sim = Simulation(params, topology, cells, rho, u, bodies=[ball])
        >>> sim.run(1000)
        >>> sim.mass_report()["balance"]
    """

    def __init__(
        self,
        params: SimParams,
        topology: DomainTopology,
        cells: CellStateField,
        rho: np.ndarray,
        u: np.ndarray,
        bodies: Sequence[RigidBody] = (),
        workers: int = 1,
        check_interval: int = 100,
        mach_warn: float = 0.1,
        audit: bool = False,
        include_gas_density: bool = False,
        average_forces: bool = False,
        virtual_mass: float = 0.5,
    ) -> None:
        if tuple(params.size) != topology.shape:
            raise ValueError(f"params.size {params.size} does not match domain {topology.shape}")
        if check_interval < 1:
            raise ValueError(f"check_interval must be >= 1, got {check_interval}")
        if virtual_mass < 0:
            raise ValueError(f"virtual_mass must be >= 0, got {virtual_mass}")
        self.params = params
        self.topology = topology
        self.cells = cells
        self.rho = np.array(rho, dtype=np.float64)
        self.u = np.array(u, dtype=np.float64)
        self.bodies: List[RigidBody] = list(bodies)
        self.check_interval = int(check_interval)
        self.mach_warn = float(mach_warn)
        self.include_gas_density = include_gas_density
        self.average_forces = average_forces
        self.virtual_mass = float(virtual_mass)
        self.auditor = TransitionAuditor() if audit else None
        self.time = 0
        self.residue = 0.0
        self.injected = 0.0
        self.wall_mass = 0.0
        self.last_conversions = ConversionLog()
        self.forces: List[Tuple[np.ndarray, np.ndarray]] = [
            (np.zeros(3), np.zeros(3)) for _ in self.bodies
        ]
        self._previous_loads: List[Optional[np.ndarray]] = [None for _ in self.bodies]

        self.field = PdfField(topology.shape, workers)
        self.field.f[...] = equilibrium(self.rho, self.u)
        self.obstacles = ObstacleMap(topology)
        self._place_bodies()
        self._fill_inactive()
        self.initial_mass = self.total_mass()

    # ------------------------------------------------------------------
    # Setup
    # ------------------------------------------------------------------

    def _place_bodies(self) -> None:
        if not self.bodies:
            return
        ids = self.obstacles.voxelize(self.bodies)
        self.obstacles.body_id = ids
        covered = ids >= 0
        self.cells.state[covered] = CellState.OBSTACLE
        self.cells.phi[covered] = 0.0
        self.cells.mass[covered] = 0.0
        close_interface_layer(
            self.cells, self.field.f, self.rho, self.u, self.topology, self.params.rho_gas
        )
        check_closed_layer(self.cells, self.topology, step=0)

    def _fill_inactive(self) -> None:
        """Gas and obstacle cells hold f_eq(rho_G, 0) so every cell has a positive density."""
        inactive = ~self.cells.fluid
        self.rho[inactive] = self.params.rho_gas
        self.u[:, inactive] = 0.0
        filler = equilibrium(self.params.rho_gas, np.zeros(3))
        self.field.f[:, inactive] = filler[:, None]

    # ------------------------------------------------------------------
    # Time step
    # ------------------------------------------------------------------

    def step(self) -> "Simulation":
        """Advance the coupled system by one time step."""
        before = self.cells.state.copy() if self.auditor is not None else None
        step_no = self.time + 1
        try:
            loads = [self._body_load(index, body) for index, body in enumerate(self.bodies)]
            self._stream()
            self._collide_and_update_mass()
            self._convert()
            check_closed_layer(self.cells, self.topology)
            for index, (body, (force, torque, stiffness)) in enumerate(zip(self.bodies, loads)):
                body.step(
                    force,
                    torque,
                    self.params.gravity,
                    stiffness=stiffness,
                    virtual_mass=self.virtual_mass / body.density,
                )
                motion = np.concatenate([body.state.velocity, body.state.angular_velocity])
                hydro = np.concatenate([force, torque]) - stiffness @ motion
                self.forces[index] = (hydro[:3], hydro[3:])
            if self.bodies:
                self._check_bodies()
                self._remap()
        except DivergenceError as exc:
            if exc.step is None:
                raise DivergenceError(exc.detail, step_no) from exc
            raise
        except ConsistencyError as exc:
            if exc.step is None:
                raise ConsistencyError(exc.detail, step_no, exc.cells) from exc
            raise
        self.time = step_no
        if self.auditor is not None:
            self.auditor.record(before, self.cells.state, self.time, self.cells, self.topology)
        if self.time % self.check_interval == 0:
            self.check_health()
        return self

    def run(
        self,
        steps: int,
        callback: Optional[Callable[["Simulation"], Optional[bool]]] = None,
        progress: bool = False,
    ) -> "Simulation":
        """
        Run ``steps`` time steps.

        ``callback`` is called after every step; returning True stops the run.
        """
        iterator = range(int(steps))
        if progress:
            iterator = tqdm(iterator, desc="steps", unit="step", leave=False)
        for _ in iterator:
            self.step()
            if callback is not None and callback(self):
                break
        return self

    def _body_load(self, index: int, body: RigidBody) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Hydrodynamic load on a body split for the implicit body update.

        Returns the force and torque without their dependence on the body's
        own velocity, averaged over this and the previous step when
        ``average_forces`` is set, and the coupling stiffness K.
        """
        force, torque, _ = net_force_torque(
            index,
            body,
            self.cells.state,
            self.cells.phi,
            self.field.f,
            self.rho,
            self.obstacles.body_id,
            self.topology,
            self.params.rho_gas,
        )
        stiffness = coupling_stiffness(
            index,
            body,
            self.cells.state,
            self.cells.phi,
            self.rho,
            self.obstacles.body_id,
            self.topology,
        )
        motion = np.concatenate([body.state.velocity, body.state.angular_velocity])
        load = np.concatenate([force, torque]) + stiffness @ motion
        if self.average_forces:
            previous = self._previous_loads[index]
            self._previous_loads[index] = load
            if previous is not None:
                load = 0.5 * (load + previous)
        return load[:3], load[3:], stiffness

    def _check_bodies(self) -> None:
        """Bodies must stay inside the domain and slower than the speed of sound."""
        cs = float(np.sqrt(CS2))
        for body in self.bodies:
            speed = body.max_surface_speed()
            if speed >= cs:
                raise DivergenceError(
                    f"surface speed {speed:.4g} of body '{body.name}' reaches the speed of sound"
                )
            if not body_inside_domain(body, self.topology):
                raise DivergenceError(
                    f"body '{body.name}' left the domain at {np.round(body.state.position, 3).tolist()}"
                )

    def _stream(self) -> None:
        cells, topo = self.cells, self.topology
        f_old = self.field.f
        self.field.gather()
        f_new = self.field.f_next
        # Mass exchange needs the plain streamed values, before links are rewritten.
        self._dm = mass_exchange_field(f_old, f_new, cells.state, cells.phi, topo)

        state = cells.state
        fluid = cells.fluid
        liquid = cells.liquid
        iface = cells.interface
        rho = self.rho
        normals = surface_normals(state, cells.phi, topo, self.params.gravity)
        cn = (
            _CF[:, 0, None, None, None] * normals[0]
            + _CF[:, 1, None, None, None] * normals[1]
            + _CF[:, 2, None, None, None] * normals[2]
        )
        pair = gas_pressure_pair(self.params.rho_gas, self.u) if iface.any() else None
        body_id = self.obstacles.body_id
        # Mass the moving-wall term adds to liquid cells.
        wall_sources: List[np.ndarray] = []

        for i in range(1, Q):
            inv = int(OPPOSITE[i])
            from_wall = topo.outside[i]
            src_state = topo.pull(state, i, fill=CellState.OBSTACLE)

            wall = fluid & from_wall
            if wall.any():
                f_new[i][wall] = f_old[inv][wall] + topo.wall_term[i][wall] * rho[wall]
                wall_sources.append((topo.wall_term[i] * rho)[wall & liquid])

            from_body = fluid & ~from_wall & (src_state == CellState.OBSTACLE)
            if from_body.any():
                idx = np.nonzero(from_body)
                owners = topo.pull(body_id, i, fill=-1)[idx]
                mid = np.stack(idx, axis=1).astype(np.float64) + 0.5 - 0.5 * _CF[i]
                u_wall = np.zeros_like(mid)
                for b, body in enumerate(self.bodies):
                    sel = owners == b
                    if sel.any():
                        u_wall[sel] = body.surface_velocity(mid[sel])
                term = 2.0 / CS2 * W[i] * (u_wall @ _CF[i]) * rho[idx]
                f_new[i][idx] = f_old[inv][idx] + term
                wall_sources.append(term[liquid[idx]])

            from_gas = ~from_wall & (src_state == CellState.GAS)
            if (liquid & from_gas).any():
                raise ConsistencyError(
                    "liquid cell receives populations from a gas cell",
                    None,
                    np.argwhere(liquid & from_gas),
                )
            if pair is not None:
                rebuild = iface & ~from_wall & (src_state != CellState.OBSTACLE) & (
                    from_gas | (cn[i] <= 0.0)
                )
                if rebuild.any():
                    f_new[i][rebuild] = pair[i][rebuild] - f_old[inv][rebuild]
        self.field.swap()
        if wall_sources:
            added = deterministic_sum(np.concatenate(wall_sources))
            self.wall_mass += added
            self.residue -= added

    def _collide_and_update_mass(self) -> None:
        cells = self.cells
        fluid = cells.fluid
        self.field.collide(self.params, fluid, self.rho, self.u)
        iface = cells.interface
        cells.mass[iface] += self._dm[iface]
        liquid = cells.liquid
        cells.mass[liquid] = self.rho[liquid]
        cells.phi[iface] = cells.mass[iface] / self.rho[iface]

    def _convert(self) -> None:
        cells = self.cells
        if not cells.interface.any():
            self.last_conversions = ConversionLog()
            return
        normals = surface_normals(cells.state, cells.phi, self.topology, self.params.gravity)
        log = convert_cells(
            cells,
            self.field.f,
            self.rho,
            self.u,
            normals,
            self.topology,
            self.params.rho_gas,
            self.params.epsilon,
        )
        self.residue += log.residue
        self.last_conversions = log

    def _remap(self) -> None:
        cells, topo = self.cells, self.topology
        delta = self.obstacles.update(self.bodies)
        rho_gas = self.params.rho_gas
        filler = equilibrium(rho_gas, np.zeros(3))

        # Covered cells: take their liquid mass out of the cell field.
        removed = []
        for cell in delta.covered:
            state = cells.state[cell]
            if state == CellState.LIQUID:
                removed.append(float(self.rho[cell]))
            elif state == CellState.INTERFACE:
                removed.append(float(cells.mass[cell]))
            else:
                removed.append(0.0)
            cells.state[cell] = CellState.OBSTACLE
            cells.phi[cell] = 0.0
            cells.mass[cell] = 0.0
            self.rho[cell] = rho_gas
            self.u[(slice(None),) + cell] = 0.0
            self.field.f[(slice(None),) + cell] = filler
        for cell, mass in zip(delta.covered, removed):
            self.residue += distribute_excess_mass(cell, mass, None, cells, topo, rho=self.rho)

        # Uncovered cells: refill in C order, retrying cells whose neighbours were all obstacles.
        owners = dict(zip(delta.uncovered, delta.previous_owner))
        pending = list(delta.uncovered)
        while pending:
            waiting = []
            for cell in pending:
                result = refill_uncovered_cell(
                    cell,
                    cells,
                    self.field.f,
                    self.rho,
                    self.u,
                    self.bodies[owners[cell]],
                    topo,
                    rho_gas,
                    self.include_gas_density,
                )
                if result is None:
                    waiting.append(cell)
                    continue
                _, mass = result
                self.injected += mass
                self.residue -= mass
            if len(waiting) == len(pending):
                raise ConsistencyError("uncovered cell has no non-obstacle neighbour", None, waiting)
            pending = waiting

        close_interface_layer(cells, self.field.f, self.rho, self.u, topo, rho_gas)
        check_closed_layer(cells, topo)

    # ------------------------------------------------------------------
    # Diagnostics
    # ------------------------------------------------------------------

    def check_health(self) -> None:
        """
        Check for non-finite populations and corrupted densities.

        Raises:
            DivergenceError: On non-finite values.
            ConsistencyError: On non-positive density in a fluid cell.
        """
        fluid = self.cells.fluid
        if not self.field.is_finite(fluid):
            bad = np.argwhere(fluid & ~np.all(np.isfinite(self.field.f), axis=0))
            raise DivergenceError(
                f"non-finite populations in {len(bad)} cells, first {tuple(bad[0])}", self.time
            )
        if np.any(self.rho[fluid] <= 0):
            raise ConsistencyError(
                "non-positive density", self.time, np.argwhere(fluid & (self.rho <= 0))
            )
        if fluid.any():
            speed = np.sqrt(np.max(np.sum(self.u[:, fluid] ** 2, axis=0)))
            mach = speed / np.sqrt(CS2)
            if mach > self.mach_warn:
                logger.warning("step %d: Mach number %.3g exceeds %.3g", self.time, mach, self.mach_warn)

    def total_mass(self) -> float:
        """Liquid mass in liquid and interface cells."""
        return self.cells.total_mass()

    def mass_report(self) -> Dict[str, float]:
        """Cell mass, residue, mass injected by refills and by moving walls, and the balance."""
        total = self.total_mass()
        return {
            "mass": total,
            "residue": self.residue,
            "injected": self.injected,
            "moving_wall": self.wall_mass,
            "balance": total + self.residue,
            "initial": self.initial_mass,
        }

    def fluid_momentum(self) -> np.ndarray:
        fluid = self.cells.fluid
        momentum = (self.rho * self.u)[:, fluid].T
        return deterministic_vector_sum(momentum)

    def total_momentum(self) -> np.ndarray:
        """Momentum of the fluid plus the momentum of all bodies."""
        total = self.fluid_momentum()
        for body in self.bodies:
            total = total + body.momentum()
        return total

    def covered_cells(self, index: int) -> int:
        return self.obstacles.covered_count(index)

    def max_interface_speed_deviation(self, reference: Sequence[float]) -> float:
        """Largest |u - reference| over interface cells (0 if there are none)."""
        iface = self.cells.interface
        if not iface.any():
            return 0.0
        diff = self.u[:, iface] - np.asarray(reference, dtype=np.float64)[:, None]
        return float(np.sqrt(np.max(np.sum(diff * diff, axis=0))))

    def pressure(self) -> np.ndarray:
        return CS2 * self.rho

    def close(self) -> None:
        self.field.close()

    def __repr__(self) -> str:
        return (
            f"Simulation(shape={self.topology.shape}, time={self.time}, "
            f"bodies={len(self.bodies)}, tau={self.params.tau})"
        )


def step_coupled(sim: Simulation) -> Simulation:
    """Advance ``sim`` by one full coupled time step."""
    return sim.step()
