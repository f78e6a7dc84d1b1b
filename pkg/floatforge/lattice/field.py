"""
PDF Field Module

Double-buffered storage of the 19 particle distribution functions per cell
and the two lattice sweeps that touch every cell: the streaming gather and
the BGK collision. Both sweeps can be split into x-slabs and run on a
thread pool; each cell is computed by exactly the same arithmetic either
way, so the serial and parallel paths are bit-identical.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np

from floatforge.lattice.operators import SimParams, bgk_collide, equilibrium
from floatforge.lattice.stencil import C, Q
from floatforge.utils import deterministic_sum

logger = logging.getLogger(__name__)


class SlabExecutor:
    """
    Runs a kernel over disjoint x-slabs of the domain.

    With ``workers == 1`` the slabs are processed in order on the calling
    thread; otherwise they are submitted to a thread pool and the call
    returns once every slab is done.
    """

    def __init__(self, nx: int, workers: int = 1) -> None:
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = int(workers)
        n_slabs = min(self.workers, nx)
        bounds = np.linspace(0, nx, n_slabs + 1).round().astype(int)
        self.slabs: List[slice] = [
            slice(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo
        ]
        self._pool: Optional[ThreadPoolExecutor] = None
        if self.workers > 1:
            self._pool = ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix="slab")

    def map(self, kernel: Callable[[slice], None]) -> None:
        if self._pool is None:
            for slab in self.slabs:
                kernel(slab)
            return
        futures = [self._pool.submit(kernel, slab) for slab in self.slabs]
        for future in futures:
            future.result()

    def shutdown(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __repr__(self) -> str:
        return f"SlabExecutor(workers={self.workers}, slabs={len(self.slabs)})"


class PdfField:
    """
    Double-buffered PDF storage.

    ``f`` holds the current (post-collision) populations, ``f_next`` is the
    streaming destination. :meth:`swap` exchanges the two roles.

    Attributes:
        shape (tuple): Number of cells (nx, ny, nz).
        f (np.ndarray): Current populations, shape (19, nx, ny, nz).
        f_next (np.ndarray): Streaming destination, same shape.
        swaps (int): Number of buffer swaps performed so far.
    """

    def __init__(self, shape: Tuple[int, int, int], workers: int = 1) -> None:
        self.shape = tuple(int(n) for n in shape)
        self.f = np.zeros((Q,) + self.shape, dtype=np.float64)
        self.f_next = np.zeros_like(self.f)
        self.swaps = 0
        self.executor = SlabExecutor(self.shape[0], workers)
        # Upstream index vectors per direction, wrapped.
        self._src_index = [
            tuple(
                (np.arange(n) - int(C[i, axis])) % n for axis, n in enumerate(self.shape)
            )
            for i in range(Q)
        ]

    @classmethod
    def from_equilibrium(cls, rho, u, shape=None, workers: int = 1) -> "PdfField":
        """Field initialized to f_eq(rho, u); scalars are broadcast over ``shape``."""
        rho = np.asarray(rho, dtype=np.float64)
        if shape is None:
            shape = rho.shape
        field = cls(shape, workers)
        rho = np.broadcast_to(rho, field.shape)
        u = np.asarray(u, dtype=np.float64)
        if u.shape == (3,):
            u = np.broadcast_to(u[:, None, None, None], (3,) + field.shape)
        field.f[...] = equilibrium(rho, u)
        return field

    def gather(self) -> None:
        """Plain pull streaming f_next[i, x] = f[i, x - c_i] with wrap-around."""

        def kernel(slab: slice) -> None:
            for i in range(Q):
                ix, iy, iz = self._src_index[i]
                self.f_next[i, slab] = self.f[i][np.ix_(ix[slab], iy, iz)]

        self.executor.map(kernel)

    def swap(self) -> None:
        self.f, self.f_next = self.f_next, self.f
        self.swaps += 1

    def collide(
        self,
        params: SimParams,
        mask: Optional[np.ndarray] = None,
        rho_out: Optional[np.ndarray] = None,
        u_out: Optional[np.ndarray] = None,
    ) -> None:
        """
        BGK collision in place on ``f``, restricted to ``mask`` if given.

        Pre-collision density and velocity are written to ``rho_out`` and
        ``u_out`` where the mask is set.
        """

        def kernel(slab: slice) -> None:
            block = self.f[:, slab]
            with np.errstate(divide="ignore", invalid="ignore"):
                post, rho, u = bgk_collide(block, params)
            if mask is None:
                self.f[:, slab] = post
                sel = np.ones(rho.shape, dtype=bool)
            else:
                sel = mask[slab]
                self.f[:, slab] = np.where(sel, post, block)
            if rho_out is not None:
                rho_out[slab] = np.where(sel, rho, rho_out[slab])
            if u_out is not None:
                u_out[:, slab] = np.where(sel, u, u_out[:, slab])

        self.executor.map(kernel)

    def total_mass(self, mask: Optional[np.ndarray] = None) -> float:
        rho = self.f.sum(axis=0)
        return deterministic_sum(rho if mask is None else rho[mask])

    def is_finite(self, mask: Optional[np.ndarray] = None) -> bool:
        data = self.f if mask is None else self.f[:, mask]
        return bool(np.all(np.isfinite(data)))

    def close(self) -> None:
        self.executor.shutdown()

    def __repr__(self) -> str:
        return f"PdfField(shape={self.shape}, swaps={self.swaps}, {self.executor!r})"


def stream(field: PdfField) -> PdfField:
    """
    Propagate every population one link along its velocity.

    This is the bare fully periodic propagation; wall, obstacle and free
    surface links are handled by the coupled time step.
    """
    field.gather()
    field.swap()
    return field


def collide(field: PdfField, params: SimParams, mask: Optional[np.ndarray] = None) -> PdfField:
    """BGK collision of ``field`` (every cell, or those in ``mask``)."""
    field.collide(params, mask)
    return field
