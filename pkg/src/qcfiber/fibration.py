"""Fiber maps over the moduli of punctured spheres.

A bordered point carries a bordered sphere plus a sewn target; the maps

    sewing_map      : bordered point -> punctured sphere      (forgets rigging)
    rigged_sewing   : bordered point -> rigged point          (keeps rigging)
    forget_rigging  : rigged point -> punctured sphere
    attach_rigging  : (punctured sphere, rigging) -> rigged point
    recover_rigging : bordered point in a fiber -> its rigging

satisfy forget_rigging o rigged_sewing = sewing_map by construction, and
recover_rigging inverts attach_rigging on the fiber: the rigging of a
bordered point built from caps phi comes back as phi (up to the welding
solver's tolerance).  The Schiffer section transports a fixed rigging
along the variation, so sewing the section output reproduces the varied
sphere; together the two directions give the product chart
(eps, phi) -> bordered point, transverse to the fibers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mobius import INF, Mobius, is_inf, mobius_to_zero_one_inf
from .oqc import DiskFunction, PowerSeries
from .schiffer import SchifferParams, check_cell_placement, schiffer_variation
from .surfaces import (BOUNDARY_SAMPLES, BorderedSphereData, ChartedCap,
                       PunctureChart, PuncturedSphere, RiggedSphere,
                       RiggingError, SewOptions, bordered_from_rigging,
                       sew_caps_with_report, validate_rigging)

FIBER_TOLERANCE = 1e-6      # sewn punctures must match this closely


class FiberError(ValueError):
    """Bordered point does not lie in the requested fiber."""


@dataclass(frozen=True)
class FiberPoint:
    """A point of the base: a normalized punctured sphere."""

    sphere: PuncturedSphere

    def __post_init__(self):
        self.sphere.require_normalized()


@dataclass(frozen=True)
class RiggedPoint:
    """A punctured sphere together with a rigging of it."""

    base_point: PuncturedSphere
    rigging: tuple

    @property
    def rigged_sphere(self) -> RiggedSphere:
        return RiggedSphere(self.base_point, self.rigging)


@dataclass(frozen=True)
class BorderedPoint:
    """Desk-scale representative of a marked bordered sphere: the bordered
    data plus its sewn target (cap maps restrict to the boundary data)."""

    bordered: BorderedSphereData
    target: RiggedSphere
    options: SewOptions = SewOptions()


def bordered_point(bordered: BorderedSphereData,
                   options: SewOptions = SewOptions()) -> BorderedPoint:
    sewn, _ = sew_caps_with_report(bordered, options)
    return BorderedPoint(bordered, sewn, options)


def bordered_point_from_rigging(r: RiggedSphere, premaps=None,
                                count: int = BOUNDARY_SAMPLES,
                                extension_method: str = "douady-earle",
                                options: SewOptions = SewOptions()) -> BorderedPoint:
    """The bordered point whose boundary data is the rigging's (optionally
    twisted) boundary restriction."""
    validate_rigging(r, raise_on_failure=True)
    data = bordered_from_rigging(r, premaps, count, extension_method)
    return bordered_point(data, options)


# ---------------------------------------------------------------------------
# the fiber maps
# ---------------------------------------------------------------------------

def sewing_map(b: BorderedPoint) -> FiberPoint:
    """Sew caps along the boundary data and forget the rigging."""
    sewn, _ = sew_caps_with_report(b.bordered, b.options)
    return FiberPoint(sewn.base)


def rigged_sewing_map(b: BorderedPoint) -> RiggedPoint:
    """Sew caps and keep them as the rigging of the sewn sphere."""
    sewn, _ = sew_caps_with_report(b.bordered, b.options)
    return RiggedPoint(sewn.base, sewn.caps)


def forget_rigging(r: RiggedPoint) -> FiberPoint:
    return FiberPoint(r.base_point)


def attach_rigging(fid: FiberPoint, rigging) -> RiggedPoint:
    """Pair a fiber point with a rigging of its sphere (injective in the
    rigging: distinct boundary data give distinct points)."""
    rigged = RiggedSphere(fid.sphere, tuple(rigging))
    validate_rigging(rigged, raise_on_failure=True)
    return RiggedPoint(fid.sphere, tuple(rigging))


def fiber_distance(a: PuncturedSphere, b: PuncturedSphere) -> float:
    """Max puncture distance between two normalized spheres (1/z chart
    beyond the unit scale so infinity compares finitely)."""
    if a.n != b.n:
        return np.inf
    worst = 0.0
    for p, q in zip(a.punctures, b.punctures):
        if is_inf(p) or is_inf(q):
            if not (is_inf(p) and is_inf(q)):
                return np.inf
            continue
        d = abs(p - q)
        if max(abs(p), abs(q)) > 1.0:
            d = min(d, abs(1 / p - 1 / q)) if p != 0 and q != 0 else d
        worst = max(worst, d)
    return worst


def recover_rigging(b: BorderedPoint, fid: FiberPoint,
                    tolerance: float = FIBER_TOLERANCE) -> tuple:
    """The fiber coordinate: the rigging the sewn structure induces.

    Requires the bordered point to lie in the fiber over ``fid`` (sewn
    normalized punctures match within ``tolerance``)."""
    sewn, _ = sew_caps_with_report(b.bordered, b.options)
    gap = fiber_distance(sewn.base, fid.sphere)
    if gap > tolerance:
        raise FiberError(
            f"bordered point is outside the fiber (puncture gap {gap:.2e})")
    return sewn.caps


# ---------------------------------------------------------------------------
# rigging transport along a Schiffer deformation
# ---------------------------------------------------------------------------

def _transport_rigging(rigging: RiggedSphere, weld, norm: Mobius,
                       new_sphere: PuncturedSphere,
                       count: int = BOUNDARY_SAMPLES,
                       truncation: int = 64) -> RiggedSphere:
    """Carry caps along a conformal-off-the-cells deformation: sample
    m o w o phi_i on the boundary circle and refit the series in the chart
    at the transported puncture."""
    caps = []
    for i, cap in enumerate(rigging.caps):
        trace = cap.boundary(count)
        fin = np.isfinite(trace.real)
        if not fin.all():
            raise RiggingError("cap boundary passes through infinity")
        moved = norm(weld.evaluate(trace)) if weld is not None else norm(trace)
        chart = PunctureChart(new_sphere.punctures[i])
        charted = chart.forward(moved)
        modes = np.fft.fft(charted) / count
        m = min(truncation, count // 2 - 1)
        coeffs = modes[:m + 1].copy()
        coeffs[0] = 0.0
        caps.append(ChartedCap(chart, DiskFunction(PowerSeries(coeffs),
                                                   cap.psi.extension)))
    return RiggedSphere(new_sphere, tuple(caps))


def schiffer_section(base_rigging: RiggedSphere, params_at, grid_n: int = 256,
                     tol: float = 1e-8):
    """Local section of the sewing map through the bordered point of
    ``base_rigging``: eps -> bordered point over the varied sphere.

    ``params_at`` maps an epsilon vector (or scalar for d = 1) to
    SchifferParams on the base sphere; cells must clear the caps.  Sewing
    the returned bordered point reproduces the varied sphere, which is the
    section property."""
    base_rigging.base.require_normalized()

    def eta(eps):
        params = params_at(eps)
        check_cell_placement(params.cells, base_rigging.base, base_rigging)
        sphere, weld = schiffer_variation(base_rigging.base, params,
                                          grid_n=grid_n, tol=tol,
                                          rigging=base_rigging)
        if weld is None:
            return bordered_point_from_rigging(base_rigging)
        norm = _variation_normalizer(base_rigging.base, weld)
        moved = _transport_rigging(base_rigging, weld, norm, sphere)
        return bordered_point_from_rigging(moved)

    return eta


def _variation_normalizer(base: PuncturedSphere, weld) -> Mobius:
    images = [INF if is_inf(p) else weld.evaluate(p) for p in base.punctures[:3]]
    return mobius_to_zero_one_inf(*images)


def product_chart(params: SchifferParams, rigging: RiggedSphere,
                  base: FiberPoint, grid_n: int = 256,
                  tol: float = 1e-8) -> BorderedPoint:
    """(eps, phi) -> bordered point: attach the rigging over the base and
    push it through the Schiffer deformation (cells disjoint from caps)."""
    if fiber_distance(rigging.base, base.sphere) > FIBER_TOLERANCE:
        raise FiberError("rigging is not based at the chart's base point")
    check_cell_placement(params.cells, base.sphere, rigging)
    if params.is_zero():
        return bordered_point_from_rigging(rigging)
    sphere, weld = schiffer_variation(base.sphere, params, grid_n=grid_n,
                                      tol=tol, rigging=rigging)
    norm = _variation_normalizer(base.sphere, weld)
    moved = _transport_rigging(rigging, weld, norm, sphere)
    return bordered_point_from_rigging(moved)


# ---------------------------------------------------------------------------
# small rigging corpus helpers (experiments and tests)
# ---------------------------------------------------------------------------

def standard_rigging(sphere: PuncturedSphere, scale: float = 0.1) -> RiggedSphere:
    """Affine caps of a common chart scale at every puncture."""
    from .surfaces import affine_cap
    caps = []
    for p in sphere.punctures:
        caps.append(affine_cap(p, scale))
    return RiggedSphere(sphere, tuple(caps))


def perturbed_rigging(sphere: PuncturedSphere, seed: int, scale: float = 0.1,
                      wobble: float = 0.15, truncation: int = 12) -> RiggedSphere:
    """Seeded rigging with small random higher-order cap coefficients."""
    rng = np.random.default_rng(seed)
    caps = []
    for p in sphere.punctures:
        coeffs = np.zeros(truncation + 1, dtype=complex)
        coeffs[1] = scale
        noise = (rng.standard_normal(truncation - 1)
                 + 1j * rng.standard_normal(truncation - 1))
        coeffs[2:] = scale * wobble * noise * (0.5 ** np.arange(1, truncation))
        caps.append(ChartedCap(PunctureChart(p), DiskFunction(PowerSeries(coeffs))))
    rigged = RiggedSphere(sphere, tuple(caps))
    validate_rigging(rigged, raise_on_failure=True)
    return rigged
