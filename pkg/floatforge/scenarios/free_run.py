"""
Free run: step the configured system for ``[run] steps`` steps.
"""

import logging

from floatforge.scenarios.base import BaseScenario, ScenarioResult
from floatforge.scenarios.diagnostics import BodyDiagnostics
from floatforge.scenarios.setup import build_simulation

logger = logging.getLogger(__name__)


class FreeRunScenario(BaseScenario):
    """Run the configuration as given and report mass and momentum balances."""

    name = "free_run"

    def _run(self) -> ScenarioResult:
        sim = build_simulation(self.config, audit=self.audit)
        diagnostics = BodyDiagnostics()
        try:
            status = self._advance(sim, self.config.run.steps, diagnostics)
            summary = {"steps": sim.time, **sim.mass_report()}
            summary["momentum"] = sim.total_momentum().tolist()
            summary["cells"] = sim.cells.counts()
            if sim.auditor is not None:
                summary["transitions"] = sim.auditor.observed()
                summary["audit_clean"] = sim.auditor.clean
        finally:
            sim.close()
        return ScenarioResult(self.name, status, diagnostics, summary)
