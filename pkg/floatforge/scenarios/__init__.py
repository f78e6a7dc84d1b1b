"""
Scenarios Module

Configuration parsing, the runnable experiments and the output writers.

Available scenarios:
    - FreeRunScenario: run the configured system for a number of steps
    - AdvectionScenario: body in a moving-wall channel flow, in stages
    - EquilibriumScenario: floating body released until it comes to rest
    - StabilitySweepScenario: measured versus analytic righting moments
"""

from floatforge.scenarios.advection import AdvectionScenario, run_free_advection, stage_config
from floatforge.scenarios.base import BaseScenario, ScenarioResult
from floatforge.scenarios.config import ScenarioConfig, load_config, parse_config
from floatforge.scenarios.diagnostics import (
    COLUMNS,
    BodyDiagnostics,
    read_diagnostics,
    sweep_voxel_volume,
    voxel_volume_summary,
    write_diagnostics,
    write_outputs,
    write_vtk_snapshot,
)
from floatforge.scenarios.equilibrium import EquilibriumScenario, run_equilibrium_box
from floatforge.scenarios.free_run import FreeRunScenario
from floatforge.scenarios.setup import build_simulation, check_config
from floatforge.scenarios.stability import StabilitySweepScenario, run_stability_sweep

__all__ = [
    "AdvectionScenario",
    "EquilibriumScenario",
    "FreeRunScenario",
    "StabilitySweepScenario",
    "BaseScenario",
    "ScenarioResult",
    "ScenarioConfig",
    "parse_config",
    "load_config",
    "build_simulation",
    "check_config",
    "stage_config",
    "run_free_advection",
    "run_equilibrium_box",
    "run_stability_sweep",
    "COLUMNS",
    "BodyDiagnostics",
    "read_diagnostics",
    "write_diagnostics",
    "write_outputs",
    "write_vtk_snapshot",
    "sweep_voxel_volume",
    "voxel_volume_summary",
]
