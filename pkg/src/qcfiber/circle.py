"""Circle homeomorphisms and quasiconformal extensions to the disk.

A circle map is stored through its lift sigma: R -> R with
sigma(theta + 2pi) = sigma(theta) + 2pi, represented as theta + (Fourier
series of the periodic part).  Smooth lifts evaluate and invert (Newton on
the lift) to spectral accuracy.

Two extension operators to the closed disk are provided:

* Douady-Earle: w = E(z) is the conformal barycenter, the unique w with
  int mob_w(beta(xi)) P(z, xi) |dxi| = 0 where mob_w(u) = (u-w)/(1-conj(w)u)
  and P is the Poisson kernel.  Solved pointwise by a damped Newton
  iteration on the barycenter equation (batched over evaluation points).
  Conformally natural; DE of a Mobius circle map is that Mobius map.

* Beurling-Ahlfors: in log coordinates z = exp(i(x + iy)) the lift extends
  to the half-plane strip by the classical average formula
  F = (P_y+ + P_y-)/2 + i (P_y+ - P_y-)/2 with P_y+- the forward/backward
  running means of sigma over [x, x +- y]; periodicity of sigma - id makes
  this well-defined on the disk, with the center fixed.
"""

from __future__ import annotations

import numpy as np


class CircleMapError(ValueError):
    """Degenerate circle map data (non-monotone or orientation-reversing)."""


class CircleMap:
    """Orientation-preserving circle homeomorphism via its lift."""

    def __init__(self, mean_shift: float, fourier: np.ndarray, samples: int = 512):
        """lift(theta) = theta + mean_shift + Sum_k 2 Re(fourier[k-1] e^{ik theta})."""
        self.mean_shift = float(mean_shift)
        fourier = np.asarray(fourier, dtype=complex)
        # drop the negligible tail so evaluation cost tracks smoothness
        mags = np.abs(fourier)
        if len(fourier) and mags.max() > 0:
            keep = np.flatnonzero(mags > 1e-13 * max(1.0, mags.max()))
            fourier = fourier[:keep.max() + 1] if len(keep) else fourier[:0]
        self.fourier = fourier
        self.samples = samples
        th = self.grid_angles()
        d = self.dlift(th)
        if d.min() <= 0:
            raise CircleMapError("lift is not strictly increasing")

    # -- construction ------------------------------------------------------

    @staticmethod
    def identity(samples: int = 512) -> "CircleMap":
        return CircleMap(0.0, np.zeros(0), samples)

    @staticmethod
    def twist(amplitude: float, harmonic: int = 1, samples: int = 512) -> "CircleMap":
        """theta -> theta + amplitude * sin(harmonic * theta)."""
        four = np.zeros(harmonic, dtype=complex)
        # amplitude*sin(k t) = 2 Re( (amplitude/(2i)) e^{ikt} )
        four[harmonic - 1] = amplitude / 2j
        return CircleMap(0.0, four, samples)

    @staticmethod
    def from_boundary_values(values: np.ndarray) -> "CircleMap":
        """Fit a circle map to values beta(e^{i theta_j}) on the uniform
        angle grid (values must lie on the unit circle up to rounding)."""
        values = np.asarray(values, dtype=complex)
        k = len(values)
        th = 2 * np.pi * np.arange(k) / k
        lift = np.unwrap(np.angle(values))
        wind = (lift[-1] - lift[0]) * k / (k - 1) / (2 * np.pi)
        if wind < 0.5:
            raise CircleMapError("boundary values do not wind positively")
        periodic = lift - th
        coeffs = np.fft.fft(periodic) / k
        mean = coeffs[0].real
        four = coeffs[1:k // 2]
        return CircleMap(mean, four, samples=k)

    # -- evaluation ----------------------------------------------------------

    def grid_angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.samples) / self.samples

    def _harmonic_sum(self, theta: np.ndarray, weights: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if len(weights) == 0:
            return np.zeros(theta.shape)
        ks = np.arange(1, len(weights) + 1)
        phases = np.exp(1j * theta.reshape(-1, 1) * ks)
        return 2 * (phases @ weights).real.reshape(theta.shape)

    def periodic_part(self, theta: np.ndarray) -> np.ndarray:
        return self.mean_shift + self._harmonic_sum(theta, self.fourier)

    def lift(self, theta: np.ndarray) -> np.ndarray:
        return np.asarray(theta, dtype=float) + self.periodic_part(theta)

    def dlift(self, theta: np.ndarray) -> np.ndarray:
        ks = np.arange(1, len(self.fourier) + 1)
        return 1.0 + self._harmonic_sum(theta, 1j * ks * self.fourier)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        """Values on the circle: beta(e^{i arg z})."""
        return np.exp(1j * self.lift(np.angle(np.asarray(z, dtype=complex))))

    def boundary_values(self, count: int | None = None) -> np.ndarray:
        th = (self.grid_angles() if count is None
              else 2 * np.pi * np.arange(count) / count)
        return np.exp(1j * self.lift(th))

    def inverse_lift(self, target: np.ndarray, tol: float = 1e-14) -> np.ndarray:
        """Newton solve of lift(x) = target (monotone, global convergence
        with bisection fallback folded into damping)."""
        target = np.asarray(target, dtype=float)
        x = target - self.mean_shift
        for _ in range(100):
            step = (self.lift(x) - target) / self.dlift(x)
            x = x - np.clip(step, -0.5, 0.5)
            if np.abs(step).max() < tol:
                break
        return x

    def inverse(self) -> "CircleMap":
        """Circle map with lift = inverse of this lift (re-fit on the grid)."""
        th = self.grid_angles()
        inv = self.inverse_lift(th)
        return CircleMap.from_boundary_values(np.exp(1j * inv))

    def compose(self, other: "CircleMap") -> "CircleMap":
        th = self.grid_angles()
        vals = np.exp(1j * self.lift(other.lift(th)))
        return CircleMap.from_boundary_values(vals)

    def is_identity(self, tol: float = 1e-13) -> bool:
        return (abs(self.mean_shift) < tol
                and (len(self.fourier) == 0 or np.abs(self.fourier).max() < tol))


# ---------------------------------------------------------------------------
# Douady-Earle extension
# ---------------------------------------------------------------------------

def douady_earle(points: np.ndarray, beta: CircleMap,
                 quadrature: int = 512, max_iter: int = 60,
                 chunk: int = 2048) -> np.ndarray:
    """Conformal-barycenter extension of beta at points with |z| < 1.

    Batched damped Newton on the barycenter integral, discretized by the
    trapezoid rule on ``quadrature`` boundary samples; points are processed
    in chunks to keep the (points x samples) temporaries cache-sized.
    """
    z = np.atleast_1d(np.asarray(points, dtype=complex)).ravel()
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("Douady-Earle evaluation requires |z| < 1")
    th = 2 * np.pi * np.arange(quadrature) / quadrature
    u = np.exp(1j * beta.lift(th))[None, :]
    xi = np.exp(1j * th)[None, :]
    out = np.empty(len(z), dtype=complex)
    for lo in range(0, len(z), chunk):
        out[lo:lo + chunk] = _de_chunk(z[lo:lo + chunk], u, xi, max_iter)
    shape = np.shape(points)
    return out.reshape(shape) if shape else out[0]


def _de_chunk(z: np.ndarray, u: np.ndarray, xi: np.ndarray,
              max_iter: int) -> np.ndarray:
    p = (1.0 - np.abs(z[:, None]) ** 2) / np.abs(xi - z[:, None]) ** 2
    p = p / p.sum(axis=1, keepdims=True)
    w = (p * u).sum(axis=1)
    big = np.abs(w) > 0.999
    w[big] = 0.999 * w[big] / np.abs(w[big])
    active = np.ones(len(z), dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        wa = w[active][:, None]
        den = 1.0 - np.conj(wa) * u
        mob = (u - wa) / den
        pa = p[active]
        g = (pa * mob).sum(axis=1)
        da = (pa * (-1.0 / den)).sum(axis=1)           # dG/dw
        db = (pa * (mob * u / den)).sum(axis=1)        # dG/dconj(w)
        ar, ai, br, bi = da.real, da.imag, db.real, db.imag
        det = (ar + br) * (ar - br) - (bi - ai) * (bi + ai)
        det = np.where(np.abs(det) < 1e-300, 1e-300, det)
        dx = (-g.real * (ar - br) - (bi - ai) * (-g.imag)) / det
        dy = ((ar + br) * (-g.imag) - (ai + bi) * (-g.real)) / det
        step = dx + 1j * dy
        wn = w[active] + step
        over = np.abs(wn) >= 1.0
        wn[over] = 0.999 * wn[over] / np.abs(wn[over])
        done = np.abs(wn - w[active]) < 5e-15
        w[active] = wn
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return w


# ---------------------------------------------------------------------------
# Beurling-Ahlfors extension (log coordinates)
# ---------------------------------------------------------------------------

def beurling_ahlfors(points: np.ndarray, beta: CircleMap,
                     quadrature: int = 4096) -> np.ndarray:
    """BA extension of beta at points with 0 < |z| < 1; fixes the center.

    Computed on the strip via running means of the lift (trapezoid from a
    dense cumulative table), then mapped back by exp(i(u + iv))."""
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    r = np.abs(z)
    if np.any(r >= 1.0):
        raise ValueError("BA evaluation requires |z| < 1")
    x = np.angle(z)
    y = -np.log(np.maximum(r, 1e-300))

    def mean_sigma(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Average of lift over [a, b] via sigma(t) = t + periodic."""
        n = quadrature
        t = np.linspace(0.0, 1.0, n)
        vals = beta.periodic_part(a[:, None] + (b - a)[:, None] * t[None, :])
        return (a + b) / 2.0 + np.trapezoid(vals, t, axis=1)

    fwd = mean_sigma(x, x + y)
    bwd = mean_sigma(x - y, x)
    uu = (fwd + bwd) / 2.0
    vv = (fwd - bwd) / 2.0
    out = np.exp(1j * uu - vv)
    out[r < 1e-300] = 0.0
    return out.reshape(np.shape(points)) if np.ndim(points) else out[0]


# ---------------------------------------------------------------------------
# dilatation of an extension on an interior lattice
# ---------------------------------------------------------------------------

def extension_dilatation(ext, lattice_radius: float = 0.92,
                         lattice_n: int = 17, step: float = 1e-4) -> float:
    """sup |dbar E / d E| over a square lattice inside the disk, centered
    finite differences with the given step."""
    ax = np.linspace(-lattice_radius, lattice_radius, lattice_n)
    xx, yy = np.meshgrid(ax, ax)
    pts = (xx + 1j * yy).ravel()
    pts = pts[np.abs(pts) < lattice_radius]
    stencil = np.concatenate([pts + step, pts - step, pts + 1j * step, pts - 1j * step])
    vals = ext(stencil)
    n = len(pts)
    fx = (vals[:n] - vals[n:2 * n]) / (2 * step)
    fy = (vals[2 * n:3 * n] - vals[3 * n:]) / (2 * step)
    fz = (fx - 1j * fy) / 2.0
    fzb = (fx + 1j * fy) / 2.0
    jac = np.abs(fz) ** 2 - np.abs(fzb) ** 2
    if np.any(jac <= 0):
        raise CircleMapError("extension is not orientation-preserving on the lattice")
    return float(np.abs(fzb / fz).max())
