"""Schiffer variation of punctured spheres and the holomorphy test harness.

Regluing a parametric disk by z -> z + eps/z is realized globally: the
deformation is the normalized quasiconformal map whose dilatation equals
eps * conj(zeta')/zeta' on the cell and zero elsewhere (for a round cell
with chart zeta = e^{i gamma}(z - c)/rho this is the constant
eps * e^{-2i gamma}).  New punctures are the Mobius-normalized images of
the old ones; at n = 4 the remaining cross-ratio coordinate is the local
coordinate the variation moves.

Holomorphy is tested numerically with a four-point Cauchy-Riemann
estimator: the returned residual approximates |2 dF/d(conj eps)| and is
exactly 2 on conj(eps), which calibrates the thresholds of every
downstream holomorphy assertion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beltrami import BeltramiCoefficient, DiskBump, solve_beltrami
from .grid import ComplexGrid, make_grid
from .mobius import INF, cross_ratio_points, is_inf, mobius_to_zero_one_inf
from .surfaces import PuncturedSphere, RiggedSphere

EPSILON_MAX = 0.5           # keeps z + eps/z injective near the cell rim
PLACEMENT_MARGIN = 0.1      # clearance from punctures and caps


class SchifferError(ValueError):
    """Invalid cell placement or epsilon outside the admissible polydisc."""


@dataclass(frozen=True)
class SchifferCell:
    """Round parametric disk |z - center| < radius with affine chart
    zeta = e^{i rotation}(z - center)/radius."""

    center: complex
    radius: float
    rotation: float = 0.0
    epsilon_max: float = EPSILON_MAX

    def __post_init__(self):
        if self.radius <= 0:
            raise SchifferError("cell radius must be positive")
        if not 0 < self.epsilon_max <= EPSILON_MAX:
            raise SchifferError(f"epsilon_max must lie in (0, {EPSILON_MAX}]")

    def dilatation_phase(self) -> complex:
        """conj(zeta')/zeta' for the affine chart."""
        return np.exp(-2j * self.rotation)


@dataclass(frozen=True)
class SchifferParams:
    cells: tuple
    epsilon: tuple

    def __post_init__(self):
        cells = tuple(self.cells)
        eps = tuple(complex(e) for e in self.epsilon)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "epsilon", eps)
        if len(cells) != len(eps):
            raise SchifferError("one epsilon per cell required")
        for c, e in zip(cells, eps):
            if abs(e) >= c.epsilon_max:
                raise SchifferError(
                    f"|epsilon| = {abs(e):.3f} outside the admissible disc "
                    f"(< {c.epsilon_max})")
        for i in range(len(cells)):
            for j in range(i + 1, len(cells)):
                gap = abs(cells[i].center - cells[j].center) \
                    - cells[i].radius - cells[j].radius
                if gap <= 0:
                    raise SchifferError(f"cells {i} and {j} overlap")

    @property
    def d(self) -> int:
        return len(self.cells)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.epsilon)

    def scaled(self, factor: complex) -> "SchifferParams":
        return SchifferParams(self.cells, tuple(factor * e for e in self.epsilon))

    def with_epsilon(self, epsilon) -> "SchifferParams":
        eps = (epsilon,) if np.ndim(epsilon) == 0 else tuple(epsilon)
        return SchifferParams(self.cells, eps)


def check_cell_placement(cells, sphere: PuncturedSphere,
                         rigging: RiggedSphere | None = None,
                         margin: float = PLACEMENT_MARGIN) -> None:
    """Cells must keep ``margin`` clearance from every puncture, and from
    every cap closure when a rigging is present."""
    for i, cell in enumerate(cells):
        for p in sphere.punctures:
            if is_inf(p):
                continue
            if abs(p - cell.center) < cell.radius + margin:
                raise SchifferError(f"cell {i} too close to puncture {p}")
    if rigging is not None:
        for i, cell in enumerate(cells):
            th = np.exp(2j * np.pi * np.arange(64) / 64)
            rim = cell.center + cell.radius * th
            for j, cap in enumerate(rigging.caps):
                bnd = cap.boundary(128)
                bnd = bnd[np.isfinite(bnd.real) & (np.abs(bnd) < 1e6)]
                if len(bnd) == 0:
                    continue
                gap = float(np.abs(rim[:, None] - bnd[None, :]).min())
                if gap < margin:
                    raise SchifferError(f"cell {i} within margin of cap {j}")


def schiffer_beltrami(params: SchifferParams, grid: ComplexGrid) -> BeltramiCoefficient:
    """The variation dilatation: eps_i * conj(zeta')/zeta' on each cell."""
    bumps = []
    for cell, eps in zip(params.cells, params.epsilon):
        reach = abs(cell.center - grid.center) + cell.radius
        if reach >= grid.half_width:
            raise SchifferError("cell leaves the grid")
        if eps != 0:
            bumps.append(DiskBump(cell.center, cell.radius,
                                  eps * cell.dilatation_phase()))
    return BeltramiCoefficient.from_bumps(grid, bumps)


def default_cell_grid(params: SchifferParams, n: int = 256) -> ComplexGrid:
    centers = np.array([c.center for c in params.cells])
    radii = np.array([c.radius for c in params.cells])
    mid = complex(centers.mean())
    reach = float((np.abs(centers - mid) + radii).max())
    return make_grid(mid, 2.0 * reach, n)


def schiffer_variation(base: PuncturedSphere, params: SchifferParams,
                       grid_n: int = 256, tol: float = 1e-8,
                       rigging: RiggedSphere | None = None):
    """Deform the sphere; returns (new sphere, weld map or None).

    epsilon = 0 short-circuits the solver and returns the base exactly.
    The number of cells must equal the dimension count n - 3.
    """
    base.require_normalized()
    if params.d != base.n - 3:
        raise SchifferError(
            f"{params.d} cells for {base.n} punctures; need n - 3 = {base.n - 3}")
    check_cell_placement(params.cells, base, rigging)
    if params.is_zero():
        return base, None
    grid = default_cell_grid(params, grid_n)
    mu = schiffer_beltrami(params, grid)
    w = solve_beltrami(mu, tol=tol)
    images = []
    for p in base.punctures:
        images.append(INF if is_inf(p) else w.evaluate(p))
    norm = mobius_to_zero_one_inf(images[0], images[1], images[2])
    new_pts = [norm(q) for q in images]
    new_pts[0], new_pts[1], new_pts[2] = 0.0 + 0j, 1.0 + 0j, INF
    return PuncturedSphere(tuple(new_pts)), w


def cross_ratio(s: PuncturedSphere) -> complex:
    """The (0, 1, inf, z) -> z cross-ratio coordinate of a 4-punctured sphere."""
    if s.n != 4:
        raise SchifferError("cross-ratio coordinate requires exactly 4 punctures")
    lam = cross_ratio_points(*s.punctures)
    if lam == 0 or lam == 1:
        raise SchifferError("degenerate cross-ratio (coincident punctures)")
    return lam


def holomorphy_residual(func, e0: complex, h: float) -> float:
    """Four-point Cauchy-Riemann residual of func at e0 with stencil h.

    Returns max over components of |(F(e0+h) - F(e0-h))/(2h)
    + i (F(e0+ih) - F(e0-ih))/(2h)|, a centered estimate of |2 dF/debar|;
    exactly 2 for F = conj, O(h^2 |F'''|) for holomorphic F.
    """
    if h <= 0:
        raise ValueError("stencil step must be positive")
    vals = []
    for point in (e0 + h, e0 - h, e0 + 1j * h, e0 - 1j * h):
        vals.append(np.atleast_1d(np.asarray(func(point), dtype=complex)))
    shapes = {v.shape for v in vals}
    if len(shapes) != 1:
        raise RuntimeError("stencil evaluations returned inconsistent shapes")
    fp, fm, fip, fim = vals
    est = (fp - fm) / (2 * h) + 1j * (fip - fim) / (2 * h)
    return float(np.abs(est).max())
