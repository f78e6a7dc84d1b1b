"""
D3Q19 Stencil Module

Discrete velocity set of the 19-speed three-dimensional lattice: one rest
velocity, six axis velocities and twelve face diagonals. Directions are
stored so that every odd/even pair after the rest velocity are opposites,
which keeps the opposite map trivial to read.

Author: FloatForge Developers
License: MIT
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

import numpy as np

# Rest, six axis directions, twelve diagonals (opposites adjacent).
_VELOCITIES = (
    (0, 0, 0),
    (1, 0, 0), (-1, 0, 0),
    (0, 1, 0), (0, -1, 0),
    (0, 0, 1), (0, 0, -1),
    (1, 1, 0), (-1, -1, 0),
    (1, -1, 0), (-1, 1, 0),
    (1, 0, 1), (-1, 0, -1),
    (1, 0, -1), (-1, 0, 1),
    (0, 1, 1), (0, -1, -1),
    (0, 1, -1), (0, -1, 1),
)

_EXACT_WEIGHTS = (
    (Fraction(1, 3),)
    + (Fraction(1, 18),) * 6
    + (Fraction(1, 36),) * 12
)


@dataclass(frozen=True)
class Stencil:
    """
    Velocity set of a lattice Boltzmann model.

    Attributes:
        c (np.ndarray): Integer velocities, shape (Q, 3).
        w (np.ndarray): Weights, shape (Q,).
        opposite (np.ndarray): Index map i -> ī with c[ī] = -c[i].
        exact_weights (tuple): The weights as fractions.
        cs2 (float): Squared lattice speed of sound.
    """

    c: np.ndarray
    w: np.ndarray
    opposite: np.ndarray
    exact_weights: Tuple[Fraction, ...] = field(default=())
    cs2: float = 1.0 / 3.0

    @property
    def q(self) -> int:
        """Number of discrete velocities."""
        return int(self.c.shape[0])

    @property
    def cs(self) -> float:
        """Lattice speed of sound."""
        return float(np.sqrt(self.cs2))

    def index(self, direction: Tuple[int, int, int]) -> int:
        """Return the index of an integer velocity vector."""
        matches = np.nonzero((self.c == np.asarray(direction)).all(axis=1))[0]
        if matches.size == 0:
            raise ValueError(f"{direction} is not a velocity of this stencil")
        return int(matches[0])

    def __repr__(self) -> str:
        return f"Stencil(q={self.q}, cs2={self.cs2:.6g})"


def _build_d3q19() -> Stencil:
    c = np.array(_VELOCITIES, dtype=np.int64)
    opposite = np.array(
        [int(np.nonzero((c == -ci).all(axis=1))[0][0]) for ci in c], dtype=np.int64
    )
    w = np.array([float(x) for x in _EXACT_WEIGHTS])
    c.setflags(write=False)
    w.setflags(write=False)
    opposite.setflags(write=False)
    return Stencil(c=c, w=w, opposite=opposite, exact_weights=_EXACT_WEIGHTS)


D3Q19 = _build_d3q19()

# Module level aliases used by the kernels.
C = D3Q19.c
W = D3Q19.w
OPPOSITE = D3Q19.opposite
CS2 = D3Q19.cs2
Q = D3Q19.q
