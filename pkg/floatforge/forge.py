"""
FloatForge Main Class

This module contains the FloatForge class, the primary interface for
running free-surface floating-body experiments from a configuration. It
parses and validates the configuration, selects the scenario and writes
the outputs.

Example Usage:
    >>> from floatforge import FloatForge
    >>>
    >>> forge = FloatForge.from_file("basin.cfg")
    >>> forge.check()
    >>> result = forge.run("out/basin")
    >>> result.summary

Author: FloatForge Developers
License: MIT
"""

# IMPORTS
# Standard library imports
import logging
from typing import Dict, Optional, Union

# Local imports
from floatforge.coupling.simulation import Simulation
from floatforge.lattice.operators import StabilityReport
from floatforge.scenarios.advection import AdvectionScenario
from floatforge.scenarios.base import BaseScenario, ScenarioResult
from floatforge.scenarios.config import ScenarioConfig, load_config, parse_config
from floatforge.scenarios.equilibrium import EquilibriumScenario
from floatforge.scenarios.free_run import FreeRunScenario
from floatforge.scenarios.setup import build_simulation, check_config
from floatforge.scenarios.stability import StabilitySweepScenario

# LOGGER SETUP
logger = logging.getLogger(__name__)


# SCENARIO REGISTRY
# Maps the `[run] scenario` names to their implementations.
AVAILABLE_SCENARIOS: Dict[str, type] = {
    "free_run": FreeRunScenario,
    "advection": AdvectionScenario,
    "equilibrium": EquilibriumScenario,
    "stability": StabilitySweepScenario,
}


class FloatForge:
    """
    FloatForge: free-surface lattice Boltzmann with floating rigid bodies.

    Attributes:
        config (ScenarioConfig): The validated configuration.
        verbose (bool): Log progress messages and show progress bars.
        audit (bool): Record cell state transitions during the run.

    Example:
        >>> forge = FloatForge(config_text)
        >>> report = forge.check()
        >>> result = forge.run()
    """

    def __init__(
        self,
        config: Union[str, ScenarioConfig],
        verbose: bool = True,
        audit: bool = False,
    ) -> None:
        """
        Initialize FloatForge.

        Args:
            config (str or ScenarioConfig): Configuration text or an already
                parsed configuration.
            verbose (bool): Whether to log progress.
            audit (bool): Record cell state transitions.

        Raises:
            ConfigError: If the configuration text is invalid.
            TypeError: If config is neither a string nor a ScenarioConfig.
        """
        # INPUT VALIDATION
        if isinstance(config, str):
            config = parse_config(config)
        if not isinstance(config, ScenarioConfig):
            raise TypeError(
                f"config must be configuration text or a ScenarioConfig, got {type(config).__name__}"
            )
        self.config = config
        self.verbose = verbose
        self.audit = audit

        if self.verbose:
            logger.info(
                "Initializing FloatForge: domain %s, scenario '%s', %d bodies",
                config.domain.size, config.run.scenario, len(config.bodies),
            )

    @classmethod
    def from_file(cls, path: str, verbose: bool = True, audit: bool = False) -> "FloatForge":
        """Load the configuration from a file."""
        return cls(load_config(path), verbose=verbose, audit=audit)

    def check(self) -> StabilityReport:
        """
        Validate the setup without running it.

        Returns:
            StabilityReport: Advisory incompressibility and Mach number check.
        """
        report = check_config(self.config)
        if self.verbose:
            logger.info("Stability check: %s", report.status)
        return report

    def scenario(self) -> BaseScenario:
        """The configured scenario instance."""
        cls = AVAILABLE_SCENARIOS[self.config.run.scenario]
        return cls(self.config, verbose=self.verbose, audit=self.audit)

    def build_simulation(self) -> Simulation:
        """The initial simulation of the configuration, for interactive use."""
        return build_simulation(self.config, audit=self.audit)

    def run(self, out_dir: Optional[str] = None) -> ScenarioResult:
        """
        Run the configured scenario.

        Args:
            out_dir (str, optional): Output directory; defaults to
                ``[run] output_dir``. Pass an empty string to skip writing.

        Returns:
            ScenarioResult: Status, diagnostics and summary.
        """
        self.check()
        if out_dir is None:
            out_dir = self.config.run.output_dir
        return self.scenario().run(out_dir or None)

    def __repr__(self) -> str:
        return (
            f"FloatForge(scenario='{self.config.run.scenario}', "
            f"domain={self.config.domain.size}, bodies={len(self.config.bodies)})"
        )
