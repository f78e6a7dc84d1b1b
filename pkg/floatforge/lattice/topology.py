"""
Domain Topology Module

Describes the box of cells, which faces are periodic and which are no-slip
walls (with their wall velocity), and provides the neighbour lookups that
every other module uses. Arrays are indexed [x, y, z]; per-direction data is
indexed [i, x, y, z].

Cell (x, y, z) covers [x, x+1] x [y, y+1] x [z, z+1], so its center is
(x + 0.5, y + 0.5, z + 0.5).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from floatforge.errors import ConfigError
from floatforge.lattice.stencil import C, CS2, OPPOSITE, Q, W

logger = logging.getLogger(__name__)

FACES = ("x_min", "x_max", "y_min", "y_max", "z_min", "z_max")
PERIODIC = "periodic"
NOSLIP = "noslip"


@dataclass(frozen=True)
class FaceSpec:
    """Boundary condition of one domain face."""

    kind: str = PERIODIC
    velocity: Tuple[float, float, float] = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class DomainBoundaries:
    """
    Boundary conditions of all six faces.

    Opposite faces must either both be periodic or both be walls.
    """

    faces: Dict[str, FaceSpec] = field(
        default_factory=lambda: {name: FaceSpec() for name in FACES}
    )

    def __post_init__(self) -> None:
        unknown = set(self.faces) - set(FACES)
        if unknown:
            raise ConfigError(f"Unknown boundary faces: {sorted(unknown)}")
        for name in FACES:
            self.faces.setdefault(name, FaceSpec())
            if self.faces[name].kind not in (PERIODIC, NOSLIP):
                raise ConfigError(
                    f"Boundary '{name}' must be '{PERIODIC}' or '{NOSLIP}', "
                    f"got '{self.faces[name].kind}'"
                )
        for axis in "xyz":
            lo, hi = self.faces[f"{axis}_min"].kind, self.faces[f"{axis}_max"].kind
            if (lo == PERIODIC) != (hi == PERIODIC):
                raise ConfigError(
                    f"Periodic boundaries must be paired: {axis}_min is '{lo}', "
                    f"{axis}_max is '{hi}'"
                )

    @property
    def periodic(self) -> Tuple[bool, bool, bool]:
        return tuple(self.faces[f"{a}_min"].kind == PERIODIC for a in "xyz")

    @classmethod
    def all_periodic(cls) -> "DomainBoundaries":
        return cls({name: FaceSpec() for name in FACES})

    @classmethod
    def closed_box(cls, velocities: Optional[Dict[str, Tuple[float, float, float]]] = None):
        """All faces no-slip, optionally with per-face wall velocities."""
        velocities = velocities or {}
        return cls(
            {
                name: FaceSpec(NOSLIP, tuple(velocities.get(name, (0.0, 0.0, 0.0))))
                for name in FACES
            }
        )


class DomainTopology:
    """
    Neighbour lookups on a box of cells with mixed periodic/wall faces.

    Attributes:
        shape (tuple): Number of cells (nx, ny, nz).
        boundaries (DomainBoundaries): Face conditions.
        outside (np.ndarray): Bool [i, x, y, z]; True where the upstream cell
            x - c_i lies beyond a wall face (the link comes from the wall).
        wall_term (np.ndarray): Float [i, x, y, z]; bounce-back correction
            (2/cs²) w_i (c_i · u_wall) per unit density for wall links.
    """

    def __init__(self, shape: Tuple[int, int, int], boundaries: Optional[DomainBoundaries] = None):
        if len(shape) != 3 or any(int(n) < 1 for n in shape):
            raise ConfigError(f"Domain size must be three positive integers, got {shape}")
        self.shape = tuple(int(n) for n in shape)
        self.boundaries = boundaries or DomainBoundaries.all_periodic()
        self.periodic = self.boundaries.periodic
        self.outside, self.wall_term = self._build_wall_links()

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    def _build_wall_links(self) -> Tuple[np.ndarray, np.ndarray]:
        outside = np.zeros((Q,) + self.shape, dtype=bool)
        wall_term = np.zeros((Q,) + self.shape, dtype=np.float64)
        coords = np.indices(self.shape)
        for i in range(1, Q):
            u_sum = np.zeros((3,) + self.shape)
            count = np.zeros(self.shape)
            for axis, name in enumerate("xyz"):
                if self.periodic[axis] or C[i, axis] == 0:
                    continue
                src = coords[axis] - C[i, axis]
                below = src < 0
                above = src > self.shape[axis] - 1
                for mask, face in ((below, f"{name}_min"), (above, f"{name}_max")):
                    vel = np.asarray(self.boundaries.faces[face].velocity, dtype=np.float64)
                    u_sum += vel[:, None, None, None] * mask
                    count += mask
            crossed = count > 0
            outside[i] = crossed
            u_mean = np.divide(u_sum, count, out=np.zeros_like(u_sum), where=crossed)
            cu = np.einsum("a,a...->...", C[i].astype(np.float64), u_mean)
            wall_term[i] = np.where(crossed, 2.0 / CS2 * W[i] * cu, 0.0)
        return outside, wall_term

    # ------------------------------------------------------------------
    # Lookups
    # ------------------------------------------------------------------

    def pull(self, arr: np.ndarray, i: int, fill=0) -> np.ndarray:
        """
        Value of ``arr`` at the upstream cell x - c_i for every cell x.

        Cells whose upstream neighbour lies beyond a wall get ``fill``.
        """
        shifted = np.roll(arr, shift=tuple(int(v) for v in C[i]), axis=(0, 1, 2))
        if self.outside[i].any():
            shifted = np.where(self.outside[i], fill, shifted)
        return shifted

    def neighbor(self, arr: np.ndarray, i: int, fill=0) -> np.ndarray:
        """Value of ``arr`` at the downstream cell x + c_i for every cell x."""
        return self.pull(arr, int(OPPOSITE[i]), fill)

    def has_neighbor(self, i: int) -> np.ndarray:
        """True where x + c_i is a cell of the domain."""
        return ~self.outside[int(OPPOSITE[i])]

    def neighbors_of(self, cell: Tuple[int, int, int]) -> Iterator[Tuple[int, Tuple[int, int, int]]]:
        """Yield (i, neighbour) for the 18 links of ``cell`` that stay in the domain."""
        for i in range(1, Q):
            nb = []
            for axis in range(3):
                v = cell[axis] + int(C[i, axis])
                n = self.shape[axis]
                if self.periodic[axis]:
                    v %= n
                elif v < 0 or v >= n:
                    break
                nb.append(v)
            else:
                yield i, (nb[0], nb[1], nb[2])

    def any_neighbor(self, mask: np.ndarray) -> np.ndarray:
        """True where at least one of the 18 neighbours satisfies ``mask``."""
        out = np.zeros(self.shape, dtype=bool)
        for i in range(1, Q):
            out |= self.neighbor(mask, i, fill=False)
        return out

    def cell_centers(self) -> np.ndarray:
        """Cell-center coordinates, shape (3, nx, ny, nz)."""
        return np.indices(self.shape).astype(np.float64) + 0.5

    def wall_velocities(self) -> np.ndarray:
        """Velocities of all no-slip faces, shape (k, 3)."""
        vels = [
            spec.velocity for spec in self.boundaries.faces.values() if spec.kind == NOSLIP
        ]
        return np.array(vels, dtype=np.float64).reshape(-1, 3)

    def __repr__(self) -> str:
        kinds = "".join("p" if p else "w" for p in self.periodic)
        return f"DomainTopology(shape={self.shape}, periodic='{kinds}')"
