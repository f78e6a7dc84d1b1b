"""
Coupling Module

Fluid-structure coupling: obstacle mapping, momentum exchange and the
coupled time step.
"""

from floatforge.coupling.mapping import (
    MapDelta,
    ObstacleMap,
    body_inside_domain,
    map_body_to_grid,
    refill_uncovered_cell,
)
from floatforge.coupling.momentum import (
    LinkForceAccumulator,
    coupling_stiffness,
    momentum_exchange_interface,
    momentum_exchange_link,
    net_force_torque,
)
from floatforge.coupling.simulation import (
    ALLOWED_TRANSITIONS,
    Simulation,
    TransitionAuditor,
    step_coupled,
)

__all__ = [
    "MapDelta",
    "ObstacleMap",
    "body_inside_domain",
    "map_body_to_grid",
    "refill_uncovered_cell",
    "LinkForceAccumulator",
    "coupling_stiffness",
    "momentum_exchange_interface",
    "momentum_exchange_link",
    "net_force_torque",
    "ALLOWED_TRANSITIONS",
    "Simulation",
    "TransitionAuditor",
    "step_coupled",
]
