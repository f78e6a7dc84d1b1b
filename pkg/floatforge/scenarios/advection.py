"""
Free Advection Scenario
-----------------------

A body in a homogeneous channel flow along x. The channel is driven by
moving no-slip walls: every no-slip face moves with the channel velocity
(u, 0, 0) and the liquid starts with that velocity. Since the gas must
not hinder the body, its terminal velocity has to match u.

The experiment is run in stages of increasing complexity:

    1  all liquid, no gravity
    2  all liquid with gravity, body density set to 1
    3  configured free surface with gravity, bodies removed
    4  the full configuration: free surface, gravity and bodies

Author: FloatForge Developers
License: MIT
"""

import logging
from dataclasses import replace
from typing import Any, Dict, Optional

import numpy as np

from floatforge.lattice.topology import FACES, NOSLIP
from floatforge.scenarios.base import BaseScenario, ScenarioResult
from floatforge.scenarios.config import ScenarioConfig
from floatforge.scenarios.diagnostics import BodyDiagnostics
from floatforge.scenarios.setup import build_simulation

logger = logging.getLogger(__name__)


def stage_config(config: ScenarioConfig, stage: int) -> ScenarioConfig:
    """The configuration actually simulated for an advection stage."""
    if stage not in (1, 2, 3, 4):
        raise ValueError(f"stage must be 1, 2, 3 or 4, got {stage}")
    u = (float(config.advection.channel_velocity), 0.0, 0.0)
    walls = {
        f"{face}_velocity": u for face in FACES if getattr(config.boundary, face) == NOSLIP
    }
    boundary = replace(config.boundary, **walls)
    fill = replace(config.fill, velocity=u)
    lattice = config.lattice
    bodies = config.bodies

    if stage in (1, 2):
        fill = replace(fill, kind="all")
    if stage == 1:
        lattice = replace(lattice, gravity=(0.0, 0.0, 0.0))
    if stage == 2:
        bodies = tuple(replace(body, density=1.0) for body in bodies)
    if stage == 3:
        bodies = ()
    return replace(config, boundary=boundary, fill=fill, lattice=lattice, bodies=bodies)


class AdvectionScenario(BaseScenario):
    """
    Free advection of a body in a channel flow.

    Summary keys: ``terminal_vx``/``vy``/``vz`` and ``velocity_error`` of
    the first body, ``vz_min``/``vz_max`` over the second half of the run,
    and for stage 3 the interface velocity deviation from the channel flow.
    """

    name = "advection"

    def _run(self) -> ScenarioResult:
        stage = self.config.advection.stage
        config = stage_config(self.config, stage)
        u = np.array([config.advection.channel_velocity, 0.0, 0.0])
        sim = build_simulation(config, audit=self.audit)
        diagnostics = BodyDiagnostics()
        steps = self.config.run.steps
        deviation = {"max": 0.0}

        def track(s) -> bool:
            if stage == 3 and s.time % self.config.run.sample_every == 0:
                deviation["max"] = max(deviation["max"], s.max_interface_speed_deviation(u))
            return False

        try:
            status = self._advance(sim, steps, diagnostics, stop=track)
            summary: Dict[str, Any] = {"stage": stage, "steps": sim.time, **sim.mass_report()}
            if stage == 3:
                summary["interface_deviation"] = sim.max_interface_speed_deviation(u)
                summary["interface_deviation_max"] = deviation["max"]
        finally:
            sim.close()

        frame = diagnostics.to_frame()
        if len(frame):
            first = frame[frame["body"] == frame["body"].iloc[0]]
            last = first.iloc[-1]
            late = first[first["step"] > sim.time // 2]
            summary.update(
                terminal_vx=float(last["vx"]),
                terminal_vy=float(last["vy"]),
                terminal_vz=float(last["vz"]),
                velocity_error=float(abs(last["vx"] - u[0])),
                vz_min=float(late["vz"].min()) if len(late) else float("nan"),
                vz_max=float(late["vz"].max()) if len(late) else float("nan"),
            )
        if self.verbose:
            logger.info("Advection stage %d summary: %s", stage, summary)
        return ScenarioResult(self.name, status, diagnostics, summary)


def run_free_advection(
    config: ScenarioConfig, out_dir: Optional[str] = None, verbose: bool = False, audit: bool = False
) -> ScenarioResult:
    """Run the advection stage selected by ``[advection] stage``."""
    return AdvectionScenario(config, verbose=verbose, audit=audit).run(out_dir)
