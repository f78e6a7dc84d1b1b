"""
Simulation setup from a scenario configuration.
"""

import logging
from typing import List, Optional, Sequence

from floatforge.bodies.dynamics import RigidBody
from floatforge.coupling.mapping import map_body_to_grid
from floatforge.coupling.simulation import Simulation
from floatforge.freesurface.cells import initialize_cells
from floatforge.lattice.operators import StabilityReport, check_stability
from floatforge.scenarios.config import ScenarioConfig

logger = logging.getLogger(__name__)


def build_simulation(
    config: ScenarioConfig,
    bodies: Optional[Sequence[RigidBody]] = None,
    audit: bool = False,
) -> Simulation:
    """
    Create the initial fluid state and the simulation for ``config``.

    Args:
        config: Validated scenario configuration.
        bodies: Bodies to place instead of the configured ones.
        audit: Record cell state transitions.

    Raises:
        ConfigError: If a body does not fit inside the domain.
    """
    params = config.to_params()
    topology = config.to_topology()
    cells, rho, u = initialize_cells(
        topology, config.fill.to_spec(), params.gravity, params.rho_gas
    )
    bodies = config.build_bodies() if bodies is None else list(bodies)
    sim = Simulation(
        params,
        topology,
        cells,
        rho,
        u,
        bodies=bodies,
        workers=config.lattice.workers,
        check_interval=config.lattice.check_interval,
        mach_warn=config.lattice.mach_warn,
        audit=audit,
        average_forces=config.lattice.average_forces,
        virtual_mass=config.lattice.virtual_mass,
    )
    logger.debug("Built %r with cells %s", sim, cells.counts())
    return sim


def check_config(config: ScenarioConfig) -> StabilityReport:
    """
    Validate a configuration without running it.

    Builds the parameters, the topology and the bodies, checks that every
    body lies inside the domain and runs the advisory stability check.
    """
    params = config.to_params()
    topology = config.to_topology()
    bodies: List[RigidBody] = config.build_bodies()
    for body in bodies:
        map_body_to_grid(body, topology)
    return check_stability(
        params,
        config.expected_velocities(),
        warn_ratio=config.lattice.stability_warn,
        mach_warn=config.lattice.mach_warn,
    )
