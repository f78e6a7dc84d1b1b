"""
Base Scenario Module
--------------------

Abstract base class of the runnable experiments. The public ``run()``
writes the config echo, delegates the experiment to ``_run()`` and writes
the outputs, so every scenario produces the same files:

    config.echo          written first, reproduces the run exactly
    diagnostics.csv      body diagnostics
    <table>.csv          scenario specific tables (e.g. the stability curve)
    snapshot_NNNNNN.vtk  grid snapshots at the configured cadence

Design Pattern: Template Method, as in the rest of the package.

Author: FloatForge Developers
License: MIT
"""

# IMPORTS

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import pandas as pd
from tqdm import tqdm

from floatforge.coupling.simulation import Simulation
from floatforge.errors import DivergenceError
from floatforge.scenarios.config import ScenarioConfig
from floatforge.scenarios.diagnostics import (
    BodyDiagnostics,
    SnapshotWriter,
    write_config_echo,
    write_outputs,
)

logger = logging.getLogger(__name__)

OK = "ok"
DIVERGED = "diverged"
NOT_CONVERGED = "not_converged"
FLAGGED = "flagged"


@dataclass
class ScenarioResult:
    """
    Outcome of a scenario run.

    Attributes:
        name (str): Scenario name.
        status (str): 'ok', 'diverged', 'not_converged' or 'flagged'.
        diagnostics (BodyDiagnostics): Sampled body diagnostics.
        summary (dict): Scalar results of the experiment.
        tables (dict): Extra tables written as ``<name>.csv``.
        files (list): Paths written by ``run()``.
    """

    name: str
    status: str = OK
    diagnostics: BodyDiagnostics = field(default_factory=BodyDiagnostics)
    summary: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    files: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == OK


class BaseScenario(ABC):
    """
    Abstract base class for all scenarios.

    Subclasses implement ``_run()``; they use ``_advance()`` to step a
    simulation with sampling, snapshots and divergence handling.

    Attributes:
        config (ScenarioConfig): The validated configuration.
        verbose (bool): Log progress and show progress bars.
        audit (bool): Record cell state transitions.

    Example:
        >>> from floatforge.scenarios import AdvectionScenario
        >>> result = AdvectionScenario(config).run("out")
        >>> result.summary["terminal_vx"]
    """

    name = "base"

    def __init__(self, config: ScenarioConfig, verbose: bool = True, audit: bool = False) -> None:
        self.config = config
        self.verbose = verbose
        self.audit = audit
        self._out_dir: Optional[str] = None
        self._snapshots: Optional[SnapshotWriter] = None

    def run(self, out_dir: Optional[str] = None) -> ScenarioResult:
        """
        Run the scenario and write its outputs to ``out_dir`` if given.

        Returns:
            ScenarioResult: Status, diagnostics, summary and tables.

        Raises:
            ConfigError: If the configuration cannot be set up.
            ConsistencyError: If the cell-state invariants break.
        """
        # ECHO THE CONFIGURATION FIRST
        files: List[str] = []
        self._out_dir = out_dir
        if out_dir is not None:
            files.append(write_config_echo(self.config.echo(), out_dir))
            self._snapshots = SnapshotWriter(out_dir, self.config.run.output_every)

        if self.verbose:
            logger.info("Running scenario '%s'", self.name)

        # DELEGATE TO SUBCLASS IMPLEMENTATION
        result = self._run()

        # WRITE OUTPUTS
        if out_dir is not None:
            files.extend(write_outputs(out_dir, None, result.diagnostics, result.tables))
            if self._snapshots is not None:
                files.extend(self._snapshots.written)
        result.files = files
        if self.verbose:
            logger.info("Scenario '%s' finished with status '%s'", self.name, result.status)
        return result

    @abstractmethod
    def _run(self) -> ScenarioResult:
        """Scenario-specific experiment."""

    def _advance(
        self,
        sim: Simulation,
        steps: int,
        diagnostics: BodyDiagnostics,
        stop: Optional[Callable[[Simulation], bool]] = None,
        offset: int = 0,
        snapshots: bool = True,
    ) -> str:
        """
        Step ``sim`` up to ``steps`` times.

        Samples diagnostics every ``run.sample_every`` steps and writes
        snapshots at the configured cadence. Stops early when ``stop``
        returns True.

        Returns:
            'ok', or 'diverged' if the lattice or a body blew up; the
            diagnostics gathered so far are kept.
        """
        sample_every = self.config.run.sample_every
        iterator = range(int(steps))
        if self.verbose:
            iterator = tqdm(iterator, desc=self.name, unit="step", leave=False)
        try:
            for _ in iterator:
                if snapshots and self._snapshots is not None:
                    self._snapshots(sim)
                sim.step()
                if sim.time % sample_every == 0:
                    diagnostics.record(sim, offset)
                if stop is not None and stop(sim):
                    break
        except DivergenceError as exc:
            logger.error("Scenario '%s' diverged: %s", self.name, exc)
            return DIVERGED
        return OK

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(domain={self.config.domain.size}, verbose={self.verbose})"
