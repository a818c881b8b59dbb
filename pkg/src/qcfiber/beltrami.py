"""Beltrami equation solver with the 0, 1, infinity normalization.

The equation dbar w = mu dw for compactly supported mu is solved with the
classical singular-integral ansatz w = z + C[g]: substituting gives the
fixed point g = mu (1 + S[g]), iterated as a Neumann series

    g_{k+1} = mu * S[g_k] + mu,

which converges geometrically at rate ||mu||_inf.  The raw solution is
conformal near infinity and asymptotic to z there; post-composing the
affine map that fixes 0 and 1 yields the normalized solution (the affine
factor is the unique Mobius fixing infinity that repairs the other two
normalization points, and post-composition by a conformal map leaves the
dilatation unchanged).

Dilatations built from analytic bump primitives keep their description:
the Cauchy transform of a radial profile rho(|w - c|) has the closed form

    C[rho](z) = conj(z - c)/|z - c|^2 * 2 * int_0^{|z-c|} rho(r) r dr,

so map evaluation splits g into (analytic bumps) + (small remainder) and
only the remainder goes through numerical quadrature.  This keeps point
evaluation accurate even on the bump boundaries where g jumps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .grid import (ComplexField, ComplexGrid, SupportError, beurling_transform,
                   cauchy_eval, cauchy_transform, wirtinger_fd)
from .mobius import INF, Mobius, is_inf

MAX_SUP_NORM = 0.9          # practical convergence bound on grids
MAX_ITERATIONS = 200


class ConvergenceError(RuntimeError):
    """Neumann iteration failed to reach tolerance (mu too rough or grid
    too coarse)."""


class DilatationError(ValueError):
    """Invalid dilatation data (sup-norm >= 1, orientation, support)."""


# ---------------------------------------------------------------------------
# bump primitives
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskBump:
    """amplitude * indicator(|z - center| < radius)."""

    center: complex
    radius: float
    amplitude: complex

    def profile(self, z: np.ndarray) -> np.ndarray:
        return self.amplitude * (np.abs(np.asarray(z) - self.center) < self.radius)

    def _mass_within(self, d: np.ndarray) -> np.ndarray:
        return np.minimum(d, self.radius) ** 2

    def cauchy_exact(self, z: np.ndarray) -> np.ndarray:
        return _radial_cauchy(self, z)

    def sup(self) -> float:
        return abs(self.amplitude)


@dataclass(frozen=True)
class GaussianBump:
    """amplitude * exp(-|z-c|^2 / (2 sigma^2)) truncated at radius = 3 sigma."""

    center: complex
    radius: float
    amplitude: complex

    @property
    def sigma(self) -> float:
        return self.radius / 3.0

    def profile(self, z: np.ndarray) -> np.ndarray:
        d = np.abs(np.asarray(z) - self.center)
        return self.amplitude * np.exp(-d**2 / (2 * self.sigma**2)) * (d < self.radius)

    def _mass_within(self, d: np.ndarray) -> np.ndarray:
        m = np.minimum(d, self.radius)
        return 2 * self.sigma**2 * (1.0 - np.exp(-m**2 / (2 * self.sigma**2)))

    def cauchy_exact(self, z: np.ndarray) -> np.ndarray:
        return _radial_cauchy(self, z)

    def sup(self) -> float:
        return abs(self.amplitude)


def _radial_cauchy(bump, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    d = z - bump.center
    r = np.abs(d)
    out = np.zeros(z.shape, dtype=complex)
    nz = r > 0
    out[nz] = bump.amplitude * np.conj(d[nz]) / r[nz] ** 2 * bump._mass_within(r[nz])
    return out


def _antialiased_samples(grid: ComplexGrid, bumps, subsamples: int = 8) -> np.ndarray:
    """Node samples of the summed bump profiles, with cell-average
    antialiasing in a one-cell band around each bump rim."""
    nodes = grid.nodes()
    h = grid.spacing
    vals = np.zeros(nodes.shape, dtype=complex)
    offs = ((np.arange(subsamples) + 0.5) / subsamples - 0.5) * h
    ox, oy = np.meshgrid(offs, offs)
    sub = (ox + 1j * oy).ravel()
    for b in bumps:
        d = np.abs(nodes - b.center)
        vals += b.profile(nodes)
        rim = np.abs(d - b.radius) <= h
        if rim.any():
            acc = np.zeros(int(rim.sum()), dtype=complex)
            pts = nodes[rim]
            for s in sub:
                acc += b.profile(pts + s)
            vals[rim] += acc / len(sub) - b.profile(pts)
    return vals


class BeltramiCoefficient:
    """Measurable dilatation with sup-norm < 1 and compact support."""

    def __init__(self, field: ComplexField, bumps: tuple = ()):
        if field.support_radius is None or field.support_radius >= field.grid.half_width:
            raise SupportError("dilatation must be compactly supported inside the grid")
        self.field = field
        self.bumps = tuple(bumps)
        self.sup_norm = field.sup_norm()
        if self.sup_norm >= 1.0:
            raise DilatationError(f"||mu||_inf = {self.sup_norm:.4f} >= 1")

    @property
    def grid(self) -> ComplexGrid:
        return self.field.grid

    @staticmethod
    def from_bumps(grid: ComplexGrid, bumps) -> "BeltramiCoefficient":
        bumps = tuple(bumps)
        vals = _antialiased_samples(grid, bumps)
        radius = 0.0
        for b in bumps:
            radius = max(radius, abs(b.center - grid.center) + b.radius + grid.spacing)
        field = ComplexField(grid, vals, support_radius=radius if bumps else 0.0)
        return BeltramiCoefficient(field, bumps)

    @staticmethod
    def from_field(field: ComplexField) -> "BeltramiCoefficient":
        return BeltramiCoefficient(field)

    @staticmethod
    def from_json(grid: ComplexGrid, text: str) -> "BeltramiCoefficient":
        """Parse {"bumps": [{"kind", "center", "radius", "amplitude"}, ...]}."""
        obj = json.loads(text) if isinstance(text, str) else text
        bumps = []
        for spec in obj["bumps"]:
            center = complex(*spec["center"])
            amp = complex(*spec["amplitude"])
            kind = spec["kind"]
            if kind == "disk":
                bumps.append(DiskBump(center, float(spec["radius"]), amp))
            elif kind == "gaussian":
                bumps.append(GaussianBump(center, float(spec["radius"]), amp))
            else:
                raise ValueError(f"unknown bump kind {kind!r}")
        return BeltramiCoefficient.from_bumps(grid, bumps)


# ---------------------------------------------------------------------------
# the solver
# ---------------------------------------------------------------------------

class NormalizedQCMap:
    """Quasiconformal solution of dbar w = mu dw fixing 0, 1, infinity.

    Evaluable at arbitrary finite points and at INF.  ``correction`` holds
    the solved density g with w = z + C[g] before normalization; ``moebius``
    holds the three coefficients (a, b, c) of the post-composed map
    zeta -> (a zeta + b)/(c zeta + 1), affine in practice (c = 0).
    """

    def __init__(self, mu: BeltramiCoefficient, correction: ComplexField,
                 s_field: ComplexField, moebius: tuple[complex, complex, complex],
                 residual: float, iterations: int, tol: float):
        self.mu = mu
        self.correction = correction
        self.s_field = s_field
        self.moebius = moebius
        self.residual = residual
        self.iterations = iterations
        self.tol = tol

    # -- evaluation --------------------------------------------------------

    def raw_evaluate(self, points) -> np.ndarray:
        """w_tilde = z + C[g] before normalization (finite points)."""
        p = np.asarray(points, dtype=complex)
        if self.mu.bumps:
            exact = np.zeros(p.shape, dtype=complex)
            for b in self.mu.bumps:
                exact = exact + b.cauchy_exact(p)
            rest = cauchy_eval(self._remainder_field(), p)
            return p + exact + rest
        return p + cauchy_eval(self.correction, p)

    def _remainder_field(self) -> ComplexField:
        if not hasattr(self, "_remainder"):
            rem = self.correction.values - self.mu.field.values
            self._remainder = self.correction.copy_with(
                rem, support_radius=self.mu.field.support_radius)
        return self._remainder

    def evaluate(self, points) -> np.ndarray:
        a, b, c = self.moebius
        scalar = np.isscalar(points) or isinstance(points, complex)
        p = np.atleast_1d(np.asarray(points, dtype=complex))
        fin = np.isfinite(p.real) & np.isfinite(p.imag)
        out = np.empty(p.shape, dtype=complex)
        if fin.any():
            w = self.raw_evaluate(p[fin])
            out[fin] = (a * w + b) / (c * w + 1.0)
        out[~fin] = a / c if c != 0 else INF
        return out[0] if scalar else out.reshape(np.shape(points))

    def __call__(self, points):
        return self.evaluate(points)

    # -- diagnostics ---------------------------------------------------------

    def grid_map_field(self) -> ComplexField:
        """w sampled on the solver grid (normalized)."""
        grid = self.mu.grid
        nodes = grid.nodes()
        a, b, c = self.moebius
        base = nodes + cauchy_transform(self.correction).values
        return ComplexField(grid, (a * base + b) / (c * base + 1.0))

    def winding_number(self, center: complex, radius: float,
                       target: complex, samples: int = 1024) -> float:
        """Winding of w(circle) around a target value."""
        th = 2 * np.pi * np.arange(samples + 1) / samples
        vals = self.evaluate(center + radius * np.exp(1j * th))
        ang = np.unwrap(np.angle(vals - target))
        return (ang[-1] - ang[0]) / (2 * np.pi)


def solve_beltrami(mu: BeltramiCoefficient, tol: float = 1e-8,
                   max_iterations: int = MAX_ITERATIONS) -> NormalizedQCMap:
    """Solve dbar w = mu dw, normalized to fix 0, 1, infinity.

    Raises ConvergenceError if the Neumann iteration does not reach ``tol``
    (area-weighted L2 increment) within the iteration cap, and rejects
    ||mu||_inf > 0.9 up front.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if mu.sup_norm > MAX_SUP_NORM:
        raise DilatationError(
            f"||mu||_inf = {mu.sup_norm:.3f} > {MAX_SUP_NORM} (desk-scale cap)")
    grid = mu.grid
    muv = mu.field.values
    if mu.sup_norm == 0.0:
        zero = mu.field.copy_with(np.zeros_like(muv), support_radius=0.0)
        return NormalizedQCMap(mu, zero, zero, (1.0 + 0j, 0j, 0j),
                               residual=0.0, iterations=0, tol=tol)

    g = mu.field
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        sg = beurling_transform(g)
        g_next = mu.field.copy_with(muv * sg.values + muv,
                                    support_radius=mu.field.support_radius)
        delta = np.linalg.norm(g_next.values - g.values) * grid.spacing
        g = g_next
        if delta < tol:
            break
    else:
        raise ConvergenceError(
            f"no convergence in {max_iterations} iterations (last delta {delta:.2e})")

    s_final = beurling_transform(g)
    denom = 1.0 + np.abs(1.0 + s_final.values)
    resid_field = g.values - muv * (1.0 + s_final.values)
    residual = float((np.abs(resid_field) / denom).max())

    # normalization: w_tilde fixes infinity already (C[g] -> 0), post-compose
    # the affine map sending w_tilde(0), w_tilde(1) to 0, 1.
    draft = NormalizedQCMap(mu, g, s_final, (1.0 + 0j, 0j, 0j),
                            residual=residual, iterations=iterations, tol=tol)
    w0, w1 = draft.raw_evaluate(np.array([0.0 + 0j, 1.0 + 0j]))
    if w1 == w0:
        raise ConvergenceError("degenerate normalization values")
    a = 1.0 / (w1 - w0)
    return NormalizedQCMap(mu, g, s_final, (a, -w0 * a, 0j),
                           residual=residual, iterations=iterations, tol=tol)


# ---------------------------------------------------------------------------
# dilatation algebra
# ---------------------------------------------------------------------------

def dilatation(map_field: ComplexField, jacobian_floor: float = 0.0) -> ComplexField:
    """mu = dbar(w) / d(w) of a sampled map by centered differences.

    Raises DilatationError if the finite-difference Jacobian is not
    positive at every interior node (orientation-reversing or folded map).
    """
    wz, wzb = wirtinger_fd(map_field)
    jac = np.abs(wz) ** 2 - np.abs(wzb) ** 2
    interior = jac[1:-1, 1:-1]
    if np.any(interior <= jacobian_floor):
        raise DilatationError("non-positive Jacobian at an interior node")
    return map_field.copy_with(wzb / wz)


def compose_dilatation(mu_inner: BeltramiCoefficient, inner_map: NormalizedQCMap,
                       mu_outer_pullback: ComplexField) -> ComplexField:
    """Dilatation of g o f from mu_f, f, and (mu_g o f).

    Chain rule: mu_{g o f} = (mu_f + (mu_g o f) theta) / (1 + conj(mu_f)
    (mu_g o f) theta) with theta = conj(df)/df, df taken by centered
    differences of the inner map sampled on the grid of mu_inner.
    """
    grid = mu_inner.grid
    if mu_outer_pullback.grid != grid:
        raise DilatationError("fields must share a grid")
    samples = ComplexField(grid, inner_map.evaluate(grid.nodes()))
    wz, wzb = wirtinger_fd(samples)
    jac = np.abs(wz) ** 2 - np.abs(wzb) ** 2
    if np.any(jac[1:-1, 1:-1] <= 0):
        raise DilatationError("inner map is not orientation-preserving on the grid")
    theta = np.conj(wz) / wz
    outer = mu_outer_pullback.values
    denom = 1.0 + np.conj(mu_inner.field.values) * outer * theta
    if np.any(np.abs(denom) < 1e-12):
        raise DilatationError("composition denominator vanishes")
    return ComplexField(grid, (mu_inner.field.values + outer * theta) / denom)
