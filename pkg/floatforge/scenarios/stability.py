"""
Stability Sweep Scenario
------------------------

Measures the righting moment of a fixed, heeled box and compares it with
the Scribanti curve of the hydrostatics oracle.

For every heel angle a fresh simulation is built with the box held fixed
(all translations and rotations frozen), a warm-up is discarded, and
the torque about the box's longitudinal (x) axis is averaged over the
averaging window. The righting moment is m_s = -T_x. A row is flagged as
non-stationary when the means of the two halves of the window differ by
more than 5 % of the oracle moment (absolute floor 1e-9).

Author: FloatForge Developers
License: MIT
"""

import logging
from dataclasses import replace
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from floatforge.errors import ValidityError
from floatforge.hydrostatics.cuboid import FloatingCuboid, stability_curve
from floatforge.scenarios.base import DIVERGED, FLAGGED, OK, BaseScenario, ScenarioResult
from floatforge.scenarios.config import BodyConfig, ScenarioConfig
from floatforge.scenarios.diagnostics import BodyDiagnostics
from floatforge.scenarios.setup import build_simulation

logger = logging.getLogger(__name__)

STATIONARY_TOLERANCE = 0.05
STATIONARY_FLOOR = 1e-9


def sweep_body(config: ScenarioConfig, alpha: float) -> BodyConfig:
    """
    The fixed box of the sweep, heeled by ``alpha`` degrees about x.

    The box is centred in the horizontal plane and its upright draft
    rho_s h reaches down from the configured fill level.
    """
    s = config.stability
    nx, ny, _ = config.domain.size
    z = config.fill.level - s.density * s.height + 0.5 * s.height
    return BodyConfig(
        name="box",
        shape="cuboid",
        size=(s.length, s.width, s.height),
        density=s.density,
        position=(nx / 2.0, ny / 2.0, z),
        rotation=(float(alpha), 0.0, 0.0),
        fix_translation="xyz",
        fix_rotation="xyz",
    )


def oracle_moments(config: ScenarioConfig) -> np.ndarray:
    """Scribanti righting moments for the configured angles (NaN outside the valid range)."""
    s = config.stability
    g = float(np.linalg.norm(config.lattice.gravity))
    box = FloatingCuboid(s.width, s.height, s.length, s.density, rho=1.0, g=g)
    values = []
    for alpha in s.alphas:
        try:
            values.append(stability_curve(box, [alpha]).moment[0])
        except ValidityError as exc:
            logger.warning("No oracle moment at %g deg: %s", alpha, exc)
            values.append(float("nan"))
    return np.asarray(values)


def stationary(first: float, second: float, reference: float) -> bool:
    tolerance = max(STATIONARY_TOLERANCE * abs(reference), STATIONARY_FLOOR)
    if not np.isfinite(reference):
        tolerance = STATIONARY_FLOOR
    return abs(first - second) <= tolerance


def rms_relative_error(measured: np.ndarray, oracle: np.ndarray) -> float:
    """RMS of (measured - oracle) / oracle over the angles with a non-zero oracle."""
    measured = np.asarray(measured, dtype=float)
    oracle = np.asarray(oracle, dtype=float)
    use = np.isfinite(oracle) & np.isfinite(measured) & (oracle != 0.0)
    if not use.any():
        return float("nan")
    rel = (measured[use] - oracle[use]) / oracle[use]
    return float(np.sqrt(np.mean(rel * rel)))


class StabilitySweepScenario(BaseScenario):
    """
    Measured versus analytic stability curve of a half-immersed box.

    Tables: ``stability_curve`` with columns alpha_deg, m_s, m_s_oracle,
    relative_error, first_half, second_half, stationary.
    """

    name = "stability"

    def _run(self) -> ScenarioResult:
        s = self.config.stability
        oracle = oracle_moments(self.config)
        diagnostics = BodyDiagnostics()
        rows: List[Dict[str, Any]] = []
        status = OK
        offset = 0

        for alpha, reference in zip(s.alphas, oracle):
            config = replace(self.config, bodies=(sweep_body(self.config, alpha),))
            sim = build_simulation(config, audit=self.audit)
            torques: List[float] = []

            def collect(current) -> bool:
                if current.time > s.warmup:
                    torques.append(float(current.forces[0][1][0]))
                return False

            try:
                run_status = self._advance(
                    sim, s.warmup + s.average, diagnostics, stop=collect, offset=offset,
                    snapshots=False,
                )
                offset += sim.time
            finally:
                sim.close()

            row: Dict[str, Any] = {"alpha_deg": float(alpha), "m_s_oracle": float(reference)}
            if run_status != OK or len(torques) < 2:
                status = DIVERGED
                row.update(m_s=float("nan"), first_half=float("nan"), second_half=float("nan"))
                row.update(relative_error=float("nan"), stationary=False)
                rows.append(row)
                logger.error("Stability run at %g deg did not complete", alpha)
                break

            moments = -np.asarray(torques)
            half = len(moments) // 2
            first, second = float(moments[:half].mean()), float(moments[half:].mean())
            measured = float(moments.mean())
            is_stationary = stationary(first, second, reference)
            rel = (measured - reference) / reference if reference else float("nan")
            row.update(
                m_s=measured,
                relative_error=float(rel),
                first_half=first,
                second_half=second,
                stationary=is_stationary,
            )
            rows.append(row)
            if not is_stationary:
                logger.warning("Torque at %g deg is not stationary (%.4g vs %.4g)", alpha, first, second)
                if status == OK:
                    status = FLAGGED
            if self.verbose:
                logger.info("alpha=%g deg: m_s=%.6g, oracle=%.6g", alpha, measured, reference)

        columns = ["alpha_deg", "m_s", "m_s_oracle", "relative_error", "first_half", "second_half", "stationary"]
        table = pd.DataFrame(rows, columns=columns)
        summary = {
            "angles": len(rows),
            "rms_relative_error": rms_relative_error(table["m_s"].to_numpy(), table["m_s_oracle"].to_numpy()),
            "all_stationary": bool(table["stationary"].all()) if len(table) else False,
        }
        return ScenarioResult(self.name, status, diagnostics, summary, {"stability_curve": table})


def run_stability_sweep(
    config: ScenarioConfig, out_dir: Optional[str] = None, verbose: bool = False, audit: bool = False
) -> ScenarioResult:
    """Measure the righting moment at every configured heel angle."""
    return StabilitySweepScenario(config, verbose=verbose, audit=audit).run(out_dir)
