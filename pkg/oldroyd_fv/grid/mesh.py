# Uniform structured 1D/2D mesh

from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from ..errors import ParameterError

PERIODIC = "periodic"
NOSLIP = "noslip_box"
BOUNDARY_KINDS = (PERIODIC, NOSLIP)


@dataclass(frozen=True)
class Grid:
    """
    Cell-centered rectangle of nx * ny cells; ny = 1 selects a 1D grid.

    Scalar fields have shape (ny, nx), vector fields (dim, ny, nx). On a 1D
    grid the y extent only sets the cell volume.
    """

    nx: int
    ny: int = 1
    bc: str = PERIODIC
    origin: Tuple[float, float] = (0.0, 0.0)
    extent: Tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        if self.nx < 4:
            raise ParameterError(f"nx must be at least 4, got {self.nx}")
        if self.ny != 1 and self.ny < 4:
            raise ParameterError(f"ny must be 1 (1D) or at least 4, got {self.ny}")
        if self.bc not in BOUNDARY_KINDS:
            raise ParameterError(f"unknown boundary kind '{self.bc}', expected one of {BOUNDARY_KINDS}")
        if min(self.extent) <= 0:
            raise ParameterError(f"extent must be positive, got {self.extent}")

    @property
    def dim(self) -> int:
        return 1 if self.ny == 1 else 2

    @property
    def dx(self) -> float:
        return self.extent[0] / self.nx

    @property
    def dy(self) -> float:
        return self.extent[1] / self.ny

    @property
    def spacings(self) -> Tuple[float, ...]:
        return (self.dx,) if self.dim == 1 else (self.dx, self.dy)

    @property
    def cell_volume(self) -> float:
        return self.dx * self.dy

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def vector_shape(self) -> Tuple[int, int, int]:
        return (self.dim, self.ny, self.nx)

    @property
    def volume(self) -> float:
        return self.extent[0] * self.extent[1]

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        """Cell-center coordinates along x and y."""
        x = self.origin[0] + (np.arange(self.nx) + 0.5) * self.dx
        y = self.origin[1] + (np.arange(self.ny) + 0.5) * self.dy
        return x, y

    def cell_centers(self) -> Tuple[np.ndarray, np.ndarray]:
        x, y = self.axes()
        X, Y = np.meshgrid(x, y, indexing="xy")
        return X, Y

    def zeros(self) -> np.ndarray:
        return np.zeros(self.shape)

    def zeros_vector(self) -> np.ndarray:
        return np.zeros(self.vector_shape)

    def refined(self, factor: int = 2) -> "Grid":
        ny = self.ny if self.dim == 1 else self.ny * factor
        return replace(self, nx=self.nx * factor, ny=ny)

    def describe(self) -> str:
        if self.dim == 1:
            return f"{self.nx} cells, {self.bc}"
        return f"{self.nx}x{self.ny} cells, {self.bc}"
