"""
Semi-Lagrangian reference solutions.

Characteristics dX/dt = u(t, X) are integrated with classical RK4 through a
velocity history that is interpolated linearly in time and bilinearly in
space. Along them the ratio variables are transported (and s_tau damped)
exactly, and the densities pick up exp(-int div u), which gives an Eulerian-
independent check of the finite-volume solver.
"""

import logging
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate
from scipy.interpolate import RegularGridInterpolator

from ..errors import IntegrityError
from ..grid import NOSLIP, PERIODIC, SCALAR, VELOCITY, Grid, apply_bc, divergence
from ..model import ModelParams

logger = logging.getLogger(__name__)

InitialField = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]

_SPAN_SLACK = 1e-12


def _padded_axes(g: Grid) -> Tuple[np.ndarray, ...]:
    xs = g.origin[0] + (np.arange(g.nx + 2) - 0.5) * g.dx
    if g.dim == 1:
        return (xs,)
    ys = g.origin[1] + (np.arange(g.ny + 2) - 0.5) * g.dy
    return (ys, xs)


def _interpolator(f: np.ndarray, g: Grid, kind: str) -> RegularGridInterpolator:
    """Bilinear interpolant of a cell field (scalar or vector) including its ghosts."""
    padded = apply_bc(f, g, kind)
    if padded.ndim == 3:
        values = np.moveaxis(padded, 0, -1)
    else:
        values = padded
    if g.dim == 1:
        values = values[0]
    return RegularGridInterpolator(_padded_axes(g), values, method="linear")


def _query(points: np.ndarray, g: Grid) -> np.ndarray:
    # interpolators index (y, x); positions are stored (x, y)
    return points if g.dim == 1 else points[:, ::-1]


def sample_field(f: np.ndarray, g: Grid, points: np.ndarray, kind: str = SCALAR) -> np.ndarray:
    return _interpolator(f, g, kind)(_query(points, g))


class VelocityHistory:
    """
    Read-only sequence of (time, velocity) snapshots on one grid.

    A single snapshot is a steady field valid at every time.
    """

    def __init__(self, grid: Grid, times: Sequence[float], fields: Sequence[np.ndarray]):
        if len(times) == 0 or len(times) != len(fields):
            raise IntegrityError("velocity history needs matching, non-empty times and fields")
        times = np.asarray(times, dtype=float)
        if np.any(np.diff(times) <= 0):
            raise IntegrityError("velocity history times must be strictly increasing")
        for u in fields:
            if np.shape(u) != grid.vector_shape:
                raise IntegrityError(f"velocity shape {np.shape(u)} does not match {grid.vector_shape}")

        self.grid = grid
        self.times = times
        self.fields = [np.asarray(u, dtype=float) for u in fields]
        self._velocity = [_interpolator(u, grid, VELOCITY) for u in self.fields]
        divs = [divergence(u, grid) for u in self.fields]
        self._divergence = [_interpolator(d, grid, SCALAR) for d in divs]
        # sup norm of the discrete divergence over cell centres, per snapshot
        self.div_max = np.array([float(np.max(np.abs(d))) for d in divs])
        self.cell_rate = max(
            float(np.max(np.abs(u[i]))) / h for u in self.fields for i, h in enumerate(grid.spacings)
        )

    @classmethod
    def steady(cls, grid: Grid, u: np.ndarray, t0: float = 0.0) -> "VelocityHistory":
        return cls(grid, [t0], [u])

    @property
    def is_steady(self) -> bool:
        return len(self.times) == 1

    @property
    def t_start(self) -> float:
        return float(self.times[0])

    @property
    def t_end(self) -> float:
        return np.inf if self.is_steady else float(self.times[-1])

    def check_span(self, t: float):
        if t < self.t_start - _SPAN_SLACK or t > self.t_end + _SPAN_SLACK:
            raise IntegrityError(f"time {t:g} outside history span [{self.t_start:g}, {self.t_end:g}]")

    def _weights(self, t: float):
        if self.is_steady:
            return 0, 0, 0.0
        k = int(np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, len(self.times) - 2))
        w = (t - self.times[k]) / (self.times[k + 1] - self.times[k])
        return k, k + 1, float(np.clip(w, 0.0, 1.0))

    def field_at(self, t: float) -> np.ndarray:
        """Cell velocity field at time t, linear between snapshots."""
        k0, k1, w = self._weights(t)
        if w == 0.0:
            return self.fields[k0]
        return (1.0 - w) * self.fields[k0] + w * self.fields[k1]

    def velocity(self, t: float, points: np.ndarray) -> np.ndarray:
        """u(t, x) for points of shape (n, dim)."""
        k0, k1, w = self._weights(t)
        q = _query(points, self.grid)
        u0 = self._velocity[k0](q).reshape(len(points), self.grid.dim)
        if w == 0.0:
            return u0
        u1 = self._velocity[k1](q).reshape(len(points), self.grid.dim)
        return (1.0 - w) * u0 + w * u1

    def divergence_at(self, t: float, points: np.ndarray) -> np.ndarray:
        k0, k1, w = self._weights(t)
        q = _query(points, self.grid)
        d0 = self._divergence[k0](q)
        if w == 0.0:
            return d0
        return (1.0 - w) * d0 + w * self._divergence[k1](q)

    def divergence_integral(self, t: float) -> float:
        """int_{t_start}^t of the max-norm of div u, linear between snapshots."""
        self.check_span(t)
        if self.is_steady:
            return float(self.div_max[0] * (t - self.t_start))
        inside = self.times < t
        nodes = np.append(self.times[inside], t)
        values = np.interp(nodes, self.times, self.div_max)
        if len(nodes) < 2:
            return 0.0
        return float(integrate.trapezoid(values, nodes))

    def wrap(self, points: np.ndarray) -> np.ndarray:
        """Periodic wrap or wall clamp of positions, per grid boundary kind."""
        g = self.grid
        lo = np.asarray(g.origin[:g.dim])
        ext = np.asarray(g.extent[:g.dim])
        if g.bc == PERIODIC:
            return lo + np.mod(points - lo, ext)
        return np.clip(points, lo, lo + ext)


def _march(points: np.ndarray, t0: float, t1: float, vh: VelocityHistory,
           cfl: float, with_divergence: bool):
    vh.check_span(t0)
    vh.check_span(t1)
    pts = vh.wrap(points.copy())
    div_integral = np.zeros(len(pts))
    span = t1 - t0
    if span == 0:
        return pts, div_integral

    n_sub = max(1, int(np.ceil(abs(span) * vh.cell_rate / cfl)))
    h = span / n_sub
    clamped = 0
    for i in range(n_sub):
        t = t0 + i * h
        k1 = vh.velocity(t, pts)
        mid = vh.wrap(pts + 0.5 * h * k1)
        k2 = vh.velocity(t + 0.5 * h, mid)
        k3 = vh.velocity(t + 0.5 * h, vh.wrap(pts + 0.5 * h * k2))
        k4 = vh.velocity(t + h, vh.wrap(pts + h * k3))
        raw = pts + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        nxt = vh.wrap(raw)
        if vh.grid.bc == NOSLIP:
            clamped += int(np.count_nonzero(np.any(nxt != raw, axis=1)))
        if with_divergence:
            # Simpson along the substep, positive weights summing to h
            div_integral += h / 6.0 * (vh.divergence_at(t, pts)
                                       + 4.0 * vh.divergence_at(t + 0.5 * h, mid)
                                       + vh.divergence_at(t + h, nxt))
        pts = nxt
    if clamped:
        logger.warning("%d characteristic substeps were clamped to a wall", clamped)
    logger.debug("traced %d points over [%g, %g] in %d substeps", len(pts), t0, t1, n_sub)
    return pts, div_integral


def trace(x0: np.ndarray, t0: float, t1: float, vh: VelocityHistory, cfl: float = 0.5) -> np.ndarray:
    """
    Position at t1 of the characteristic through x0 at t0.

    x0 is one point of shape (dim,) or many of shape (n, dim); t1 < t0 traces
    backwards. Substeps move at most cfl cells each.
    """
    x0 = np.asarray(x0, dtype=float)
    pts, _ = _march(np.atleast_2d(x0), t0, t1, vh, cfl, with_divergence=False)
    return pts.reshape(x0.shape)


def _cell_points(g: Grid) -> np.ndarray:
    X, Y = g.cell_centers()
    if g.dim == 1:
        return X.reshape(-1, 1)
    return np.column_stack([X.ravel(), Y.ravel()])


def _evaluate_initial(f0: InitialField, g: Grid, feet: np.ndarray) -> np.ndarray:
    if callable(f0):
        return np.asarray(f0(feet), dtype=float)
    f0 = np.asarray(f0, dtype=float)
    values = sample_field(f0, g, feet)
    # convex combination of cell values; clip away roundoff
    return np.clip(values, f0.min(), f0.max())


def ratio_oracle(s0_field: InitialField, vh: VelocityHistory, t: float, damped: bool,
                 p: ModelParams, cfl: float = 0.5) -> np.ndarray:
    """
    s(t, x) = s0(X^{-1}(t, x)), times exp(-(t - t0)/(2 lambda)) for the damped
    stress ratio. Stays within the range of s0 (scaled by the decay factor).
    """
    g = vh.grid
    feet, _ = _march(_cell_points(g), t, vh.t_start, vh, cfl, with_divergence=False)
    values = _evaluate_initial(s0_field, g, feet)
    if damped:
        values = values * np.exp(-(t - vh.t_start) / (2.0 * p.lam))
    return values.reshape(g.shape)


def density_oracle(f0: InitialField, vh: VelocityHistory, t: float, damped: bool,
                   p: ModelParams, cfl: float = 0.5) -> np.ndarray:
    """Lagrangian solution of df/dt + div(f u) = -[damped] f/(2 lambda) at the cell centres."""
    g = vh.grid
    feet, backward = _march(_cell_points(g), t, vh.t_start, vh, cfl, with_divergence=True)
    # the backward march accumulates -int_{t0}^{t} div u along the path
    values = _evaluate_initial(f0, g, feet) * np.exp(backward)
    if damped:
        values = values * np.exp(-(t - vh.t_start) / (2.0 * p.lam))
    return values.reshape(g.shape)
