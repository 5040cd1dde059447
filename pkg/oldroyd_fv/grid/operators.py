"""
Discrete differential operators on a Grid.

Ghost layers are one cell wide. Periodic grids wrap; no-slip boxes mirror,
with velocity ghosts negated so that the face average vanishes on the wall
and scalar ghosts copied so that the normal difference vanishes.
"""

from typing import Optional, Tuple

import numpy as np

from ..errors import IntegrityError
from .mesh import NOSLIP, PERIODIC, Grid

SCALAR = "scalar"
VELOCITY = "velocity"
FIELD_KINDS = (SCALAR, VELOCITY)


def _check_kind(kind: str):
    if kind not in FIELD_KINDS:
        raise ValueError(f"unknown field kind '{kind}', expected one of {FIELD_KINDS}")


def _rows(g: Grid) -> slice:
    # 1D grids carry no ghost rows
    return slice(1, -1) if g.dim == 2 else slice(None)


def padded_shape(g: Grid) -> Tuple[int, int]:
    return (g.ny + 2, g.nx + 2) if g.dim == 2 else (1, g.nx + 2)


def fill_ghosts(padded: np.ndarray, g: Grid, kind: str = SCALAR) -> np.ndarray:
    """Fill the ghost layer of an already padded array in place. Idempotent."""
    _check_kind(kind)
    if padded.ndim == 3:
        for component in padded:
            fill_ghosts(component, g, kind)
        return padded

    sign = -1.0 if (kind == VELOCITY and g.bc == NOSLIP) else 1.0
    if g.bc == PERIODIC:
        padded[:, 0] = padded[:, -2]
        padded[:, -1] = padded[:, 1]
    else:
        padded[:, 0] = sign * padded[:, 1]
        padded[:, -1] = sign * padded[:, -2]

    if g.dim == 2:
        if g.bc == PERIODIC:
            padded[0, :] = padded[-2, :]
            padded[-1, :] = padded[1, :]
        else:
            padded[0, :] = sign * padded[1, :]
            padded[-1, :] = sign * padded[-2, :]
    return padded


def apply_bc(f: np.ndarray, g: Grid, kind: str = SCALAR) -> np.ndarray:
    """Return a padded copy of f with ghosts filled for g.bc."""
    f = np.asarray(f, dtype=float)
    if f.ndim == 3:
        return np.stack([apply_bc(component, g, kind) for component in f])
    if f.shape != g.shape:
        raise IntegrityError(f"field shape {f.shape} does not match grid {g.shape}")

    padded = np.zeros(padded_shape(g))
    padded[_rows(g), 1:-1] = f
    return fill_ghosts(padded, g, kind)


def gradient(f: np.ndarray, g: Grid, kind: str = SCALAR) -> np.ndarray:
    """
    Central differences, shape (dim, ny, nx).

    Scalars on a no-slip box use one-sided differences in the wall cells;
    velocities use the odd ghosts, i.e. the wall value u = 0.
    """
    f = np.asarray(f, dtype=float)
    fp = apply_bc(f, g, kind)
    rows = _rows(g)
    one_sided = g.bc == NOSLIP and kind == SCALAR

    gx = (fp[rows, 2:] - fp[rows, :-2]) / (2.0 * g.dx)
    if one_sided:
        gx[:, 0] = (f[:, 1] - f[:, 0]) / g.dx
        gx[:, -1] = (f[:, -1] - f[:, -2]) / g.dx
    if g.dim == 1:
        return gx[None]

    gy = (fp[2:, 1:-1] - fp[:-2, 1:-1]) / (2.0 * g.dy)
    if one_sided:
        gy[0, :] = (f[1, :] - f[0, :]) / g.dy
        gy[-1, :] = (f[-1, :] - f[-2, :]) / g.dy
    return np.stack([gx, gy])


def velocity_gradient(u: np.ndarray, g: Grid) -> np.ndarray:
    """Tensor field G[..., i, j] = du_i/dx_j, shape (ny, nx, dim, dim)."""
    rows = [gradient(component, g, VELOCITY) for component in u]
    return np.moveaxis(np.stack(rows), (0, 1), (-2, -1))


def divergence(v: np.ndarray, g: Grid, kind: str = VELOCITY) -> np.ndarray:
    """Central differences; on periodic grids the negative adjoint of gradient."""
    vp = apply_bc(v, g, kind)
    rows = _rows(g)
    out = (vp[0][rows, 2:] - vp[0][rows, :-2]) / (2.0 * g.dx)
    if g.dim == 2:
        out = out + (vp[1][2:, 1:-1] - vp[1][:-2, 1:-1]) / (2.0 * g.dy)
    return out


def laplacian(f: np.ndarray, g: Grid, kind: str = SCALAR) -> np.ndarray:
    fp = apply_bc(f, g, kind)
    rows = _rows(g)
    centre = fp[rows, 1:-1]
    out = (fp[rows, 2:] - 2.0 * centre + fp[rows, :-2]) / g.dx ** 2
    if g.dim == 2:
        out = out + (fp[2:, 1:-1] - 2.0 * centre + fp[:-2, 1:-1]) / g.dy ** 2
    return out


# ── donor-cell fluxes ─────────────────────────────────────────────────────

def face_velocities(u: np.ndarray, g: Grid) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Face-normal velocities by averaging neighbouring cells.

    x faces have shape (ny, nx + 1), y faces (ny + 1, nx). Their difference
    quotient reproduces the central divergence.
    """
    up = apply_bc(u, g, VELOCITY)
    rows = _rows(g)
    fx = 0.5 * (up[0][rows, :-1] + up[0][rows, 1:])
    fy = None
    if g.dim == 2:
        fy = 0.5 * (up[1][:-1, 1:-1] + up[1][1:, 1:-1])
    return fx, fy


def flux_divergence(f: np.ndarray, faces: Tuple[np.ndarray, Optional[np.ndarray]],
                    g: Grid, kind: str = SCALAR) -> np.ndarray:
    """div(f u) with donor-cell face values."""
    fp = apply_bc(f, g, kind)
    rows = _rows(g)
    fx, fy = faces

    flux = np.maximum(fx, 0.0) * fp[rows, :-1] + np.minimum(fx, 0.0) * fp[rows, 1:]
    out = (flux[:, 1:] - flux[:, :-1]) / g.dx
    if g.dim == 2:
        flux = np.maximum(fy, 0.0) * fp[:-1, 1:-1] + np.minimum(fy, 0.0) * fp[1:, 1:-1]
        out = out + (flux[1:, :] - flux[:-1, :]) / g.dy
    return out


def outflow_number(faces: Tuple[np.ndarray, Optional[np.ndarray]], dt: float, g: Grid) -> float:
    """
    Largest fraction of a cell's content leaving it in one step. The donor-cell
    update is monotone iff this is at most 1.
    """
    fx, fy = faces
    out = dt * (np.maximum(fx[:, 1:], 0.0) - np.minimum(fx[:, :-1], 0.0)) / g.dx
    if g.dim == 2:
        out = out + dt * (np.maximum(fy[1:, :], 0.0) - np.minimum(fy[:-1, :], 0.0)) / g.dy
    return float(np.max(out))
