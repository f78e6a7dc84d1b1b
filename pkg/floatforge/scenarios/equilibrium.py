"""
Floating Equilibrium Scenario
-----------------------------

A freely floating box released with a small heel in a basin, run until
all motion has ceased. The final heel angle and draft are compared with
the hydrostatic oracle.

Motion has ceased when the kinetic energy of every body stays below
``[equilibrium] stall_energy`` for ``stall_steps`` consecutive steps.

Author: FloatForge Developers
License: MIT
"""

import logging
from typing import Any, Dict, Optional

import numpy as np

from floatforge.bodies.shapes import Cuboid
from floatforge.coupling.simulation import Simulation
from floatforge.scenarios.base import NOT_CONVERGED, OK, BaseScenario, ScenarioResult
from floatforge.scenarios.config import ScenarioConfig
from floatforge.scenarios.diagnostics import BodyDiagnostics, heel_axis
from floatforge.scenarios.setup import build_simulation

logger = logging.getLogger(__name__)


def free_surface_level(sim: Simulation) -> float:
    """
    Mean liquid height of the columns that contain no obstacle cell.

    A column's height is the sum of the fill levels of its fluid cells.
    """
    cells = sim.cells
    fill = np.where(cells.fluid, cells.phi, 0.0)
    heights = np.clip(fill, 0.0, 1.0).sum(axis=2)
    open_columns = ~cells.obstacle.any(axis=2)
    if not open_columns.any():
        return float("nan")
    return float(heights[open_columns].mean())


def fold_heel(angle: float, square: bool) -> float:
    """
    Heel angle reduced by the symmetry of the section.

    A square section repeats every 90 degrees and is mirror symmetric, so
    its heel folds into [0, 45]; a rectangle folds into [0, 90].
    """
    period = 90.0 if square else 180.0
    folded = abs(angle) % period
    return min(folded, period - folded)


def square_section(body) -> bool:
    """True if a cuboid's section across its heel axis is square."""
    if not isinstance(body.shape, Cuboid):
        return False
    axis = heel_axis(body)
    # Body axis closest to the world heel axis.
    along = int(np.argmax(np.abs(body.rotation.as_matrix()[axis])))
    extents = np.asarray(body.shape.extents, dtype=float)
    others = [extents[k] for k in range(3) if k != along]
    return bool(np.isclose(others[0], others[1]))


class StallDetector:
    """Counts consecutive steps in which every body is nearly at rest."""

    def __init__(self, energy: float, steps: int) -> None:
        self.energy = energy
        self.steps = steps
        self.count = 0

    def __call__(self, sim: Simulation) -> bool:
        if all(body.kinetic_energy() < self.energy for body in sim.bodies):
            self.count += 1
        else:
            self.count = 0
        return self.count >= self.steps


class EquilibriumScenario(BaseScenario):
    """
    Release floating bodies and report their resting heel and draft.

    Summary keys per body (``<name>_heel_deg``, ``<name>_heel_folded_deg``,
    ``<name>_draft``) plus ``converged``, ``steps``, the mass balance and,
    with auditing, the observed state transitions.
    """

    name = "equilibrium"

    def _run(self) -> ScenarioResult:
        settings = self.config.equilibrium
        sim = build_simulation(self.config, audit=self.audit)
        if not sim.bodies:
            logger.warning("Equilibrium scenario without bodies: only the fluid is relaxed")
        diagnostics = BodyDiagnostics()
        stall = StallDetector(settings.stall_energy, settings.stall_steps)
        try:
            status = self._advance(sim, settings.max_steps, diagnostics, stop=stall)
            converged = stall.count >= stall.steps
            if status == OK and not converged:
                status = NOT_CONVERGED
                logger.warning(
                    "No equilibrium after %d steps (kinetic energy stalled for %d of %d steps)",
                    sim.time, stall.count, stall.steps,
                )
            summary: Dict[str, Any] = {"converged": converged, "steps": sim.time}
            summary.update(sim.mass_report())
            level = free_surface_level(sim)
            summary["surface_level"] = level
            for body in sim.bodies:
                heel = body.heel_angle(heel_axis(body))
                square = square_section(body)
                summary[f"{body.name}_heel_deg"] = heel
                summary[f"{body.name}_heel_folded_deg"] = fold_heel(heel, square)
                summary[f"{body.name}_draft"] = level - float(body.aabb()[0][2])
            if sim.auditor is not None:
                summary["transitions"] = sim.auditor.observed()
                summary["audit_clean"] = sim.auditor.clean
        finally:
            sim.close()
        return ScenarioResult(self.name, status, diagnostics, summary)


def run_equilibrium_box(
    config: ScenarioConfig, out_dir: Optional[str] = None, verbose: bool = False, audit: bool = False
) -> ScenarioResult:
    """Release the configured bodies and run until they come to rest."""
    return EquilibriumScenario(config, verbose=verbose, audit=audit).run(out_dir)
