"""
Lattice Operators Module

Pointwise lattice Boltzmann operators: equilibrium, moments, momentum flux,
the gravity force term and moving-wall bounce-back, plus the parameter
container and the advisory stability check.

All operators accept either a single cell (19 values, scalar density,
3-vector velocity) or whole fields with the direction index first
(19, nx, ny, nz) and velocity components first (3, nx, ny, nz).

Author: FloatForge Developers
License: MIT
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from floatforge.errors import ConfigError, ConsistencyError
from floatforge.lattice.stencil import C, CS2, OPPOSITE, W

logger = logging.getLogger(__name__)

_CF = C.astype(np.float64)


@dataclass(frozen=True)
class SimParams:
    """
    Physical parameters of a simulation in lattice units.

    Attributes:
        tau (float): BGK relaxation time, must exceed 1/2.
        gravity (tuple): Acceleration vector a.
        rho_gas (float): Gas reference density rho_G.
        epsilon (float): Hysteresis of interface cell conversions.
        size (tuple): Domain size (lx, ly, lz) in cells.
    """

    tau: float = 1.0
    gravity: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    rho_gas: float = 1.0
    epsilon: float = 0.01
    size: Tuple[int, int, int] = (1, 1, 1)

    def __post_init__(self) -> None:
        if not np.isfinite(self.tau) or self.tau <= 0.5:
            raise ConfigError(f"tau must be a finite value > 1/2, got {self.tau}")
        if self.rho_gas <= 0 or not np.isfinite(self.rho_gas):
            raise ConfigError(f"rho_gas must be positive, got {self.rho_gas}")
        if not 0.0 <= self.epsilon < 0.5:
            raise ConfigError(f"epsilon must lie in [0, 0.5), got {self.epsilon}")
        if len(self.gravity) != 3 or not np.all(np.isfinite(self.gravity)):
            raise ConfigError(f"gravity must be a finite 3-vector, got {self.gravity}")

    @property
    def viscosity(self) -> float:
        """Kinematic viscosity nu = cs² (tau - 1/2)."""
        return CS2 * (self.tau - 0.5)

    @property
    def omega(self) -> float:
        return 1.0 / self.tau


@dataclass(frozen=True)
class MacroState:
    """Macroscopic state of one cell."""

    rho: float
    u: np.ndarray

    @property
    def pressure(self) -> float:
        """Ideal-gas pressure law p = cs² rho."""
        return CS2 * self.rho


def _velocity_dot(u: np.ndarray) -> np.ndarray:
    """c_i · u for all directions; u has its component axis first."""
    # Explicit per-component products keep every cell independent of array layout.
    shape = (-1,) + (1,) * (u.ndim - 1)
    return (
        _CF[:, 0].reshape(shape) * u[0]
        + _CF[:, 1].reshape(shape) * u[1]
        + _CF[:, 2].reshape(shape) * u[2]
    )


def equilibrium(rho, u) -> np.ndarray:
    """
    Second-order equilibrium distribution.

    Args:
        rho: Density, scalar or field (nx, ny, nz).
        u: Velocity, 3-vector or field (3, nx, ny, nz).

    Returns:
        np.ndarray: f_eq with the direction index first.

    Raises:
        ValueError: If rho or u contain non-finite values.

    Example:
        >>> equilibrium(1.0, (0.0, 0.0, 0.0))[0]
        0.3333333333333333
    """
    rho = np.asarray(rho, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(u))):
        raise ValueError("equilibrium() received non-finite density or velocity")
    cu = _velocity_dot(u)
    usq = np.sum(u * u, axis=0)
    w = W.reshape((-1,) + (1,) * rho.ndim)
    return w * rho * (1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * usq)


def density_velocity(pdfs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Zeroth and first moment, rho and u = (Σ c_i f_i) / rho, without checks."""
    pdfs = np.asarray(pdfs, dtype=np.float64)
    rho = pdfs[0].copy()
    momentum = np.zeros((3,) + pdfs.shape[1:])
    for i in range(1, pdfs.shape[0]):
        rho = rho + pdfs[i]
        for axis in range(3):
            if C[i, axis]:
                momentum[axis] = momentum[axis] + C[i, axis] * pdfs[i]
    with np.errstate(divide="ignore", invalid="ignore"):
        u = momentum / rho
    return rho, u


def moments(pdfs: Sequence[float]) -> MacroState:
    """
    Density and velocity of a single cell.

    Raises:
        ValueError: If the input is not 19 finite values.
        ConsistencyError: If the density is not positive.
    """
    pdfs = np.asarray(pdfs, dtype=np.float64)
    if pdfs.shape != (19,):
        raise ValueError(f"Expected 19 PDF values, got shape {pdfs.shape}")
    if not np.all(np.isfinite(pdfs)):
        raise ValueError("moments() received non-finite PDFs")
    rho, u = density_velocity(pdfs)
    if rho <= 0:
        raise ConsistencyError(f"Non-positive density {rho} in cell")
    return MacroState(rho=float(rho), u=u)


def momentum_flux(pdfs: Sequence[float]) -> np.ndarray:
    """Second moment Σ c_i c_iᵀ f_i of a single cell, a symmetric 3x3 tensor."""
    pdfs = np.asarray(pdfs, dtype=np.float64)
    moments(pdfs)
    return np.einsum("ia,ib,i->ab", _CF, _CF, pdfs)


def shear_stress(pdfs: Sequence[float]) -> np.ndarray:
    """Momentum flux minus its equilibrium part, rho u uᵀ + p 1."""
    state = moments(pdfs)
    return momentum_flux(pdfs) - state.rho * np.outer(state.u, state.u) - state.pressure * np.eye(3)


def force_term(rho, u, a) -> np.ndarray:
    """
    Body-force source term for a constant acceleration.

    F_i = w_i rho [ (c_i - u) / cs² + (c_i · u) c_i / cs⁴ ] · a

    The term has zero mass and adds rho a to the momentum of the cell for
    any velocity.

    Args:
        rho: Density, scalar or field.
        u: Velocity, 3-vector or field with components first.
        a: Acceleration 3-vector.
    """
    rho = np.asarray(rho, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    ca = _CF @ a
    cu = _velocity_dot(u)
    ua = a[0] * u[0] + a[1] * u[1] + a[2] * u[2]
    ca = ca.reshape((-1,) + (1,) * rho.ndim)
    w = W.reshape((-1,) + (1,) * rho.ndim)
    return w * rho * (3.0 * (ca - ua) + 9.0 * cu * ca)


def apply_noslip(f_opposite, i: int, u_wall, rho) -> np.ndarray:
    """
    Bounce-back from a moving wall.

    Returns f'_i = f_ī + (2/cs²) w_i (c_i · u_wall) rho, the population that
    re-enters the fluid cell in direction i after its partner f_ī hit the
    wall.

    Example:
        >>> round(float(apply_noslip(1/18, 1, (0.01, 0, 0), 1.0)), 7)
        0.0588889
    """
    cu = float(_CF[i] @ np.asarray(u_wall, dtype=np.float64))
    return np.asarray(f_opposite, dtype=np.float64) + 2.0 / CS2 * W[i] * cu * np.asarray(rho)


def bgk_collide(pdfs: np.ndarray, params: SimParams) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    BGK relaxation with gravity forcing.

    f <- f - (f - f_eq(rho, u)) / tau + F(rho, u, a)

    Returns:
        (post-collision PDFs, rho, u) where rho and u are the moments of the
        input.
    """
    rho, u = density_velocity(pdfs)
    feq = equilibrium(rho, u)
    out = pdfs - (pdfs - feq) / params.tau
    if any(params.gravity):
        out = out + force_term(rho, u, params.gravity)
    return out, rho, u


@dataclass
class StabilityReport:
    """
    Advisory stability assessment.

    Attributes:
        density_variation (float): Σ_k l_k |a_k|, the hydrostatic density variation.
        variation_ratio (float): density_variation / cs².
        mach (float): Largest expected Mach number |u| / cs.
        status (str): 'pass', 'warn' or 'hard_warn'.
        messages (list): Human readable warnings.
    """

    density_variation: float
    variation_ratio: float
    mach: float
    status: str
    messages: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def __str__(self) -> str:
        lines = [
            f"status: {self.status}",
            f"gravity x size: {self.density_variation:.6g} ({self.variation_ratio:.4g} cs^2)",
            f"expected Mach number: {self.mach:.4g}",
        ]
        return "\n".join(lines + self.messages)


def check_stability(
    params: SimParams,
    velocities: Optional[Iterable[Sequence[float]]] = None,
    warn_ratio: float = 0.1,
    mach_warn: float = 0.1,
) -> StabilityReport:
    """
    Check the incompressibility and low-Mach conditions.

    The product of domain extent and acceleration must stay well below cs²
    or the density varies too much across the domain. Velocities (walls,
    bodies, initial flow) must stay well below the speed of sound.

    Args:
        params: Simulation parameters.
        velocities: Velocities expected in the run.
        warn_ratio: Warn if the projected value exceeds warn_ratio·cs².
        mach_warn: Warn if |u|/cs exceeds this value.

    Returns:
        StabilityReport; warnings are also logged.
    """
    value = float(np.sum(np.asarray(params.size, dtype=np.float64) * np.abs(params.gravity)))
    ratio = value / CS2
    messages: List[str] = []
    status = "pass"
    if ratio > 1.0:
        status = "hard_warn"
        messages.append(
            f"size x gravity = {value:.4g} exceeds cs^2: density variation is not small"
        )
    elif ratio > warn_ratio:
        status = "warn"
        messages.append(
            f"size x gravity = {value:.4g} exceeds {warn_ratio} cs^2"
        )

    speeds = [float(np.linalg.norm(v)) for v in (velocities or [])]
    mach = max(speeds, default=0.0) / np.sqrt(CS2)
    if mach > mach_warn:
        if status == "pass":
            status = "warn"
        messages.append(f"expected Mach number {mach:.4g} exceeds {mach_warn}")

    for message in messages:
        logger.warning(message)
    return StabilityReport(value, ratio, mach, status, messages)


__all__ = [
    "SimParams",
    "MacroState",
    "StabilityReport",
    "equilibrium",
    "density_velocity",
    "moments",
    "momentum_flux",
    "shear_stress",
    "force_term",
    "apply_noslip",
    "bgk_collide",
    "check_stability",
    "OPPOSITE",
]
