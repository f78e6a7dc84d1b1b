"""
FloatForge: Free-Surface Lattice Boltzmann with Floating Rigid Bodies

FloatForge simulates liquids with a free surface on a D3Q19 lattice,
coupled to rigid bodies that float, drift and heel in the flow, and ships
a hydrostatics oracle to validate the results.

Basic Usage
-----------
>>> from floatforge import FloatForge
>>>
>>> forge = FloatForge.from_file("examples/channel.cfg")
>>> result = forge.run("out/channel")
>>> result.summary["terminal_vx"]

Hydrostatics
------------
>>> from floatforge import FloatingCuboid, cuboid_GM
>>> cuboid_GM(FloatingCuboid(width=6, height=4, density=0.5))
0.5

License: MIT
"""

# VERSION INFORMATION
__version__ = "0.1.0"
__license__ = "MIT"

# PUBLIC API IMPORTS

# Main class
from floatforge.forge import AVAILABLE_SCENARIOS, FloatForge

# Errors
from floatforge.errors import (
    ConfigError,
    ConsistencyError,
    DivergenceError,
    FloatForgeError,
    ValidityError,
)

# Lattice
from floatforge.lattice import D3Q19, DomainBoundaries, DomainTopology, PdfField, SimParams

# Free surface and bodies
from floatforge.freesurface import CellState, CellStateField, FillSpec, initialize_cells
from floatforge.bodies import BodyState, Constraints, Cuboid, RigidBody, Sphere

# Coupling
from floatforge.coupling import Simulation, TransitionAuditor, step_coupled

# Hydrostatics
from floatforge.hydrostatics import (
    FloatingCuboid,
    StabilityCurve,
    analytic_buoyancy,
    cuboid_GM,
    equilibrium_heel_oracle,
    scribanti_B0M,
    stability_curve,
)

# Scenarios
from floatforge.scenarios import ScenarioConfig, ScenarioResult, load_config, parse_config

__all__ = [
    "__version__",
    "__license__",
    "FloatForge",
    "AVAILABLE_SCENARIOS",
    "FloatForgeError",
    "ConfigError",
    "ConsistencyError",
    "DivergenceError",
    "ValidityError",
    "D3Q19",
    "DomainBoundaries",
    "DomainTopology",
    "PdfField",
    "SimParams",
    "CellState",
    "CellStateField",
    "FillSpec",
    "initialize_cells",
    "BodyState",
    "Constraints",
    "Cuboid",
    "RigidBody",
    "Sphere",
    "Simulation",
    "TransitionAuditor",
    "step_coupled",
    "FloatingCuboid",
    "StabilityCurve",
    "analytic_buoyancy",
    "cuboid_GM",
    "equilibrium_heel_oracle",
    "scribanti_B0M",
    "stability_curve",
    "ScenarioConfig",
    "ScenarioResult",
    "load_config",
    "parse_config",
]

# PACKAGE INITIALISATION LOGGING
import logging

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())
logger.debug(f"FloatForge v{__version__} initialized")
