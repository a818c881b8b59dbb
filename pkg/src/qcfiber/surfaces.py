"""Punctured spheres, riggings, quasisymmetric boundary data, cap sewing.

A punctured sphere is an ordered configuration of n >= 3 distinct points
on the Riemann sphere, normalized when the first three are (0, 1, inf).
A rigging attaches to each puncture p_i a univalent cap map phi_i from the
unit disk with phi_i(0) = p_i, conformal, with pairwise disjoint closed
images; caps are stored through local puncture charts (z - p, or 1/z at
infinity) as normalized disk functions.

Sewing: given the bordered data (sphere minus the cap interiors together
with boundary parametrizations tau_i of the cap curves) the sewn sphere is
realized by a global quasiconformal map W solving dbar W = mu dW where mu
on cap i is the dilatation of an extension E_i of tau_i^{-1} into the cap,
so that W o E_i^{-1} is conformal.  The recovered cap maps are read off
the boundary: trace_i = W(tau_i samples) extends holomorphically into the
disk exactly when the welding succeeded, so a Fourier fit of the trace
yields the cap series, the fitted constant term is the new puncture, and
the negative-frequency mass is the conformality residual.  The sewn
punctures are then Mobius-normalized to (0, 1, inf, ...).

The extension E_i never needs to be inverted: it is built as
T o cap_i^{-1} where T extends the inverse premap circle homeomorphism
(Douady-Earle by default, Beurling-Ahlfors optional) and cap_i^{-1} is a
Newton inversion of the cap series, so E_i and its dilatation evaluate
directly at grid nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beltrami import BeltramiCoefficient, NormalizedQCMap, solve_beltrami
from .circle import (CircleMap, beurling_ahlfors, douady_earle,
                     extension_dilatation)
from .grid import ComplexField, make_grid
from .mobius import INF, Mobius, is_inf, mobius_to_zero_one_inf
from .oqc import DiskFunction, PowerSeries

BOUNDARY_SAMPLES = 512      # default K for tau sampling
SEWN_CAP_TRUNCATION = 128   # Fourier modes kept when refitting sewn caps
EXTENSION_METHODS = ("analytic", "beurling-ahlfors", "douady-earle")


class RiggingError(ValueError):
    """Rigging violates one of its defining conditions."""


class SewingError(RuntimeError):
    """Cap sewing failed (solver, support, or collision trouble)."""


# ---------------------------------------------------------------------------
# spheres and charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PuncturedSphere:
    """Ordered distinct punctures; normalized means (p1, p2, p3) = (0, 1, inf)."""

    punctures: tuple

    def __post_init__(self):
        pts = tuple(complex(p) if not is_inf(p) else INF for p in self.punctures)
        object.__setattr__(self, "punctures", pts)
        if len(pts) < 3:
            raise RiggingError("need at least three punctures (2g - 2 + n > 0)")
        keys = [repr(p) for p in pts]
        if len(set(keys)) != len(keys):
            raise RiggingError("punctures must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.punctures)

    @property
    def normalized(self) -> bool:
        p = self.punctures
        return p[0] == 0 and p[1] == 1 and is_inf(p[2])

    def require_normalized(self) -> "PuncturedSphere":
        if not self.normalized:
            raise RiggingError("sphere is not normalized to (0, 1, inf, ...)")
        return self


@dataclass(frozen=True)
class PunctureChart:
    """Local coordinate vanishing at the puncture: z - p, or 1/z at infinity."""

    puncture: complex

    @property
    def at_infinity(self) -> bool:
        return is_inf(self.puncture)

    def forward(self, z):
        z = np.asarray(z, dtype=complex)
        if self.at_infinity:
            out = np.zeros(z.shape, dtype=complex)
            fin = np.isfinite(z.real) & np.isfinite(z.imag)
            zero = fin & (z == 0)
            out[fin & ~zero] = 1.0 / z[fin & ~zero]
            out[zero] = INF
            return out if z.shape else out[()]
        return z - self.puncture

    def inverse(self, w):
        w = np.asarray(w, dtype=complex)
        if self.at_infinity:
            out = np.empty(w.shape, dtype=complex)
            zero = w == 0
            out[zero] = INF
            out[~zero] = 1.0 / w[~zero]
            return out if w.shape else out[()]
        return w + self.puncture

    def dforward(self, z):
        """Derivative of the chart at finite z != puncture."""
        if self.at_infinity:
            z = np.asarray(z, dtype=complex)
            return -1.0 / z**2
        return np.ones(np.shape(z), dtype=complex)


@dataclass(frozen=True)
class ChartedCap:
    """Cap map phi = chart^{-1} o psi with psi a normalized disk function."""

    chart: PunctureChart
    psi: DiskFunction

    @property
    def puncture(self) -> complex:
        return self.chart.puncture

    def evaluate(self, z):
        return self.chart.inverse(self.psi.series(np.asarray(z, dtype=complex)))

    def boundary(self, count: int = BOUNDARY_SAMPLES) -> np.ndarray:
        th = 2 * np.pi * np.arange(count) / count
        return self.evaluate(np.exp(1j * th))

    def image_radius_bound(self) -> float:
        """Max |chart o phi| over the closed disk (sampled on the boundary)."""
        return float(np.abs(self.psi.boundary_samples()).max())


def affine_cap(puncture: complex, scale: complex) -> ChartedCap:
    """phi(z) = p + scale z (finite p) or (1/scale)/z at infinity."""
    chart = PunctureChart(puncture)
    return ChartedCap(chart, DiskFunction(PowerSeries([0.0, scale])))


@dataclass(frozen=True)
class RiggedSphere:
    base: PuncturedSphere
    caps: tuple

    def __post_init__(self):
        if len(self.caps) != self.base.n:
            raise RiggingError("one cap per puncture required")

    @property
    def n(self) -> int:
        return self.base.n


@dataclass
class RiggingReport:
    cap_centered: bool
    univalent: bool
    disjoint: bool
    disjointness_margin: float
    conformality_residuals: tuple
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_rigging(r: RiggedSphere, boundary_count: int = 256,
                     raise_on_failure: bool = False) -> RiggingReport:
    """Check the defining conditions of a rigging with margins.

    Condition 1: phi_i(0) = p_i exactly (chart normalization makes this the
    statement a_0 = 0, which the disk-function type enforces; re-checked).
    Condition 2: conformality is structural for series caps; the residual
    reported is the finite-difference dbar of the series on an interior
    lattice (machine-level for honest series).  Condition 4: pairwise
    distance of sampled closed-disk images must be positive.
    """
    violations = []
    centered = True
    for i, cap in enumerate(r.caps):
        value = cap.evaluate(np.array([0.0 + 0j]))[0]
        p = r.base.punctures[i]
        same = (is_inf(value) and is_inf(p)) or \
            (not is_inf(value) and not is_inf(p) and value == p)
        if not same:
            centered = False
            violations.append(f"cap {i} has phi(0) = {value}, puncture {p}")

    univalent = True
    for i, cap in enumerate(r.caps):
        try:
            cap.psi.check_univalent()
        except Exception as exc:  # noqa: BLE001 - report, don't crash
            univalent = False
            violations.append(f"cap {i} univalence: {exc}")

    residuals = []
    for cap in r.caps:
        h = 1e-5
        pts = 0.4 * np.exp(2j * np.pi * np.arange(8) / 8)
        fx = (cap.psi.series(pts + h) - cap.psi.series(pts - h)) / (2 * h)
        fy = (cap.psi.series(pts + 1j * h) - cap.psi.series(pts - 1j * h)) / (2 * h)
        residuals.append(float(np.abs((fx + 1j * fy) / 2).max()))

    margin = np.inf
    disjoint = True
    bnds = [np.asarray(cap.boundary(boundary_count)) for cap in r.caps]
    for i in range(len(bnds)):
        for j in range(i + 1, len(bnds)):
            d = _curve_distance(bnds[i], bnds[j])
            margin = min(margin, d)
            if d <= 0:
                disjoint = False
                violations.append(f"caps {i} and {j} closed images touch")

    report = RiggingReport(centered, univalent, disjoint, float(margin),
                           tuple(residuals), tuple(violations))
    if raise_on_failure and not report.ok:
        raise RiggingError("; ".join(report.violations))
    return report


def _curve_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Distance between two sampled closed curves on the sphere.

    Curves staying in a moderate region are compared in the plane; when
    either reaches far out (or infinity) both are compared in the 1/z
    chart instead, which is an equally valid disjointness margin."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    fa = np.isfinite(a.real) & np.isfinite(a.imag)
    fb = np.isfinite(b.real) & np.isfinite(b.imag)
    moderate = (fa.all() and fb.all()
                and max(np.abs(a).max(), np.abs(b).max()) < 1e3)
    if moderate:
        return float(np.abs(a[:, None] - b[None, :]).min())
    ai = np.where(a[fa] == 0, np.inf, 1.0 / a[fa])
    bi = np.where(b[fb] == 0, np.inf, 1.0 / b[fb])
    ai = ai[np.isfinite(ai)]
    bi = bi[np.isfinite(bi)]
    if len(ai) == 0 or len(bi) == 0:
        return np.inf
    return float(np.abs(ai[:, None] - bi[None, :]).min())


def charted_rigging(r: RiggedSphere, chart_radii: tuple | None = None) -> tuple:
    """The rigging in chart coordinates: (zeta_1 o phi_1, ...).

    Each cap's closed-disk image must stay inside its chart domain, taken
    as the disk of radius min distance to the other punctures (chart
    radius) around its own puncture.
    """
    out = []
    for i, cap in enumerate(r.caps):
        reach = cap.image_radius_bound()
        others = [p for j, p in enumerate(r.base.punctures) if j != i]
        limit = _chart_domain_radius(r.base.punctures[i], others) \
            if chart_radii is None else chart_radii[i]
        if reach >= limit:
            raise RiggingError(
                f"cap {i} image (chart radius {reach:.3g}) escapes its chart "
                f"domain (radius {limit:.3g})")
        out.append(cap.psi)
    return tuple(out)


def _chart_domain_radius(p: complex, others) -> float:
    if is_inf(p):
        vals = [abs(1 / q) for q in others if q != 0]
        return min(vals) if vals else np.inf
    vals = [abs(q - p) if not is_inf(q) else np.inf for q in others]
    return min(vals)


def rigging_from_charted(sphere: PuncturedSphere, psis) -> RiggedSphere:
    """Inverse of charted_rigging."""
    caps = tuple(ChartedCap(PunctureChart(p), psi)
                 for p, psi in zip(sphere.punctures, psis))
    return RiggedSphere(sphere, caps)


# ---------------------------------------------------------------------------
# boundary parametrizations and bordered data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryParametrization:
    """tau_i: boundary circle -> cap boundary curve.

    Stored as uniform-angle samples plus, when available, the analytic
    pieces tau = cap o premap with ``cap`` the reference conformal cap and
    ``premap`` a circle homeomorphism (identity premap = analytic tau).
    """

    samples: np.ndarray
    cap: ChartedCap | None = None
    premap: CircleMap | None = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if len(s) < 256:
            raise RiggingError("tau must be sampled at K >= 256 points")
        object.__setattr__(self, "samples", s)

    @property
    def count(self) -> int:
        return len(self.samples)

    @property
    def analytic(self) -> bool:
        return self.cap is not None and (self.premap is None
                                         or self.premap.is_identity())

    def check_orientation(self) -> None:
        center = self.cap.puncture if self.cap is not None else _interior_point(self.samples)
        chart = PunctureChart(center)
        vals = chart.forward(self.samples)
        ang = np.unwrap(np.angle(vals))
        k = len(ang)
        wind = (ang[-1] - ang[0]) * k / (k - 1) / (2 * np.pi)
        if wind < 0.5:
            raise RiggingError("tau does not wind positively around its cap")


def _interior_point(samples: np.ndarray) -> complex:
    fin = samples[np.isfinite(samples.real)]
    return complex(fin.mean())


def tau_from_cap(cap: ChartedCap, count: int = BOUNDARY_SAMPLES) -> BoundaryParametrization:
    """Analytic parametrization: the boundary restriction of the cap."""
    return BoundaryParametrization(cap.boundary(count), cap, None)


def tau_twisted(cap: ChartedCap, premap: CircleMap,
                count: int = BOUNDARY_SAMPLES) -> BoundaryParametrization:
    """tau(e^{i t}) = cap(e^{i premap_lift(t)})."""
    th = 2 * np.pi * np.arange(count) / count
    vals = cap.evaluate(np.exp(1j * premap.lift(th)))
    return BoundaryParametrization(vals, cap, premap)


def premap_from_samples(cap: ChartedCap, samples: np.ndarray) -> CircleMap:
    """Recover the circle premap beta = cap^{-1} o tau from raw samples by
    Newton inversion of the cap series along the boundary."""
    charted = cap.chart.forward(np.asarray(samples, dtype=complex))
    w = _invert_series_on_circle(cap.psi.series, charted)
    return CircleMap.from_boundary_values(w)


def _invert_series_on_circle(series: PowerSeries, targets: np.ndarray,
                             tol: float = 5e-15) -> np.ndarray:
    deriv = series.derivative()
    a1 = series.coeffs[1]
    w = np.asarray(targets, dtype=complex) / a1
    for _ in range(80):
        step = (series(w) - targets) / deriv(w)
        w = w - step
        if np.abs(step).max() < tol:
            break
    return w


@dataclass(frozen=True)
class BorderedSphereData:
    """Sphere with n cap regions removed and boundary parametrizations.

    ``ambient`` is the sewn target when known (analytic data); the caps
    define the removed regions; ``taus`` give the boundary identification.
    """

    ambient: PuncturedSphere
    caps: tuple
    taus: tuple
    extension_method: str = "douady-earle"

    def __post_init__(self):
        if self.extension_method not in EXTENSION_METHODS:
            raise RiggingError(f"unknown extension method {self.extension_method!r}")
        if len(self.caps) != self.ambient.n or len(self.taus) != self.ambient.n:
            raise RiggingError("need one cap and one tau per puncture")
        counts = {t.count for t in self.taus}
        if len(counts) != 1:
            raise RiggingError("all taus must share the sample count")
        for t in self.taus:
            t.check_orientation()
        bnds = [np.asarray(t.samples) for t in self.taus]
        for i in range(len(bnds)):
            for j in range(i + 1, len(bnds)):
                if _curve_distance(bnds[i], bnds[j]) <= 0:
                    raise RiggingError(f"boundary curves {i} and {j} intersect")

    @property
    def n(self) -> int:
        return self.ambient.n


def bordered_from_rigging(r: RiggedSphere, premaps=None,
                          count: int = BOUNDARY_SAMPLES,
                          extension_method: str = "douady-earle") -> BorderedSphereData:
    """Remove the rigging caps from the sphere; optional circle premaps
    twist the boundary parametrizations."""
    taus = []
    for i, cap in enumerate(r.caps):
        pre = premaps[i] if premaps is not None else None
        if pre is None or pre.is_identity():
            taus.append(tau_from_cap(cap, count))
        else:
            taus.append(tau_twisted(cap, pre, count))
    return BorderedSphereData(r.base, r.caps, tuple(taus), extension_method)


# ---------------------------------------------------------------------------
# quasisymmetric extension (forward direction, the public operation)
# ---------------------------------------------------------------------------

class QCExtension:
    """Homeomorphic extension of tau to the closed disk, evaluable inside,
    with its measured dilatation sup-norm."""

    def __init__(self, tau: BoundaryParametrization, method: str):
        if method not in EXTENSION_METHODS:
            raise RiggingError(f"unknown extension method {method!r}")
        if tau.cap is None:
            raise RiggingError("extension requires a reference cap for the curve")
        self.tau = tau
        self.method = method
        self.cap = tau.cap
        if method == "analytic":
            if not tau.analytic:
                raise RiggingError("analytic extension requires analytic tau")
            self.premap = None
            self.dilatation_sup = 0.0
            return
        self.premap = tau.premap if tau.premap is not None \
            else premap_from_samples(tau.cap, tau.samples)
        inner = (douady_earle if method == "douady-earle" else beurling_ahlfors)
        self._inner = lambda pts: inner(pts, self.premap)
        self.dilatation_sup = extension_dilatation(self._inner)
        if self.dilatation_sup >= 0.95:
            raise RiggingError(
                f"extension dilatation {self.dilatation_sup:.3f} >= 0.95")

    def evaluate(self, z) -> np.ndarray:
        """tau_hat on |z| <= 1 (boundary points use tau directly)."""
        scalar = np.ndim(z) == 0
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty(z.shape, dtype=complex)
        rim = np.abs(z) >= 1.0 - 1e-12
        if rim.any():
            if np.any(np.abs(z[rim]) > 1.0 + 1e-9):
                raise ValueError("extension evaluated outside the closed disk")
            if self.method == "analytic" or self.premap is None:
                out[rim] = self.cap.evaluate(z[rim] / np.abs(z[rim]))
            else:
                ang = self.premap.lift(np.angle(z[rim]))
                out[rim] = self.cap.evaluate(np.exp(1j * ang))
        inside = ~rim
        if inside.any():
            if self.method == "analytic":
                out[inside] = self.cap.evaluate(z[inside])
            else:
                out[inside] = self.cap.evaluate(self._inner(z[inside]))
        return out[0] if scalar else out

    def __call__(self, z):
        return self.evaluate(z)


def extend_quasisymmetric(tau: BoundaryParametrization,
                          method: str = "douady-earle") -> QCExtension:
    """Extension of tau to a qc map of the closed disk onto the cap closure."""
    return QCExtension(tau, method)


# ---------------------------------------------------------------------------
# sewing
# ---------------------------------------------------------------------------

@dataclass
class SewReport:
    punctures: tuple
    neg_mode_mass: tuple
    boundary_fit_errors: tuple
    center_shifts: tuple
    mu_sup: float
    iterations: int
    grid_n: int
    normalization: Mobius
    weld: NormalizedQCMap | None = None


@dataclass(frozen=True)
class SewOptions:
    grid_n: int = 256
    tol: float = 1e-8
    truncation: int = SEWN_CAP_TRUNCATION
    residual_cap: float = 1e-3


def sew_caps(b: BorderedSphereData, options: SewOptions = SewOptions()) -> RiggedSphere:
    sphere, _ = sew_caps_with_report(b, options)
    return sphere


def sew_caps_with_report(b: BorderedSphereData,
                         options: SewOptions = SewOptions()):
    """Sew caps onto the bordered sphere; see the module docstring.

    Returns (RiggedSphere, SewReport).  Raises SewingError if the weld
    residual (negative-frequency mass of a recovered trace) exceeds
    options.residual_cap, or if the sewn punctures collide.
    """
    nontrivial = [i for i, t in enumerate(b.taus) if not t.analytic]
    weld = None
    mu_sup = 0.0
    iterations = 0
    grid_n = 0
    if nontrivial:
        for i in nontrivial:
            if b.taus[i].cap is None:
                raise SewingError(f"tau {i} has no reference cap to extend against")
            if is_inf(b.taus[i].cap.puncture):
                raise SewingError("twisted boundary at the infinite cap is not "
                                  "representable on a finite grid")
        mu = _welding_dilatation(b, nontrivial, options)
        weld = solve_beltrami(mu, tol=options.tol)
        mu_sup = mu.sup_norm
        iterations = weld.iterations
        grid_n = mu.grid.n

    k = b.taus[0].count
    w_of = (lambda pts: weld.evaluate(pts)) if weld is not None else (lambda pts: pts)

    # provisional punctures: constant Fourier coefficient of each charted trace
    traces = []
    provisional = []
    for i, tau in enumerate(b.taus):
        trace = w_of(tau.samples)
        traces.append(trace)
        chart = PunctureChart(_trace_center(b, i, w_of))
        modes = np.fft.fft(chart.forward(trace)) / k
        provisional.append(chart.inverse(np.array([modes[0]]))[0])

    norm = mobius_to_zero_one_inf(provisional[0], provisional[1], provisional[2])
    new_punctures = [norm(q) for q in provisional]
    new_punctures[0], new_punctures[1], new_punctures[2] = 0.0 + 0j, 1.0 + 0j, INF
    sewn = PuncturedSphere(tuple(new_punctures))

    caps = []
    neg_masses = []
    fit_errors = []
    shifts = []
    th = 2 * np.pi * np.arange(k) / k
    circle = np.exp(1j * th)
    for i, trace in enumerate(traces):
        chart = PunctureChart(new_punctures[i])
        charted = chart.forward(norm(trace))
        modes = np.fft.fft(charted) / k
        m = min(options.truncation, k // 2 - 1)
        neg = float(np.abs(modes[k // 2:]).max())
        neg_masses.append(neg)
        coeffs = modes[:m + 1].copy()
        shifts.append(abs(coeffs[0]))
        coeffs[0] = 0.0
        psi = DiskFunction(PowerSeries(coeffs), ("explicit", {"origin": "sewn"}))
        fit_errors.append(float(np.abs(psi.series(circle) - charted).max()))
        caps.append(ChartedCap(chart, psi))

    if max(neg_masses) > options.residual_cap:
        raise SewingError(
            f"weld conformality residual {max(neg_masses):.2e} exceeds "
            f"{options.residual_cap:.0e}")
    rigged = RiggedSphere(sewn, tuple(caps))
    validate_rigging(rigged, raise_on_failure=True)
    report = SewReport(tuple(new_punctures), tuple(neg_masses), tuple(fit_errors),
                       tuple(shifts), mu_sup, iterations, grid_n, norm, weld)
    return rigged, report


def _trace_center(b: BorderedSphereData, i: int, w_of) -> complex:
    """A point near the sewn cap i (for the provisional chart)."""
    p = b.ambient.punctures[i]
    if is_inf(p):
        return INF
    return complex(w_of(np.array([p], dtype=complex))[0])


def _extension_mu_lattice(premap_inverse: CircleMap, method: str,
                          nlat: int = 160):
    """Dilatation of the extension T of the inverse premap, sampled on a
    Cartesian lattice in the unit disk and wrapped in bicubic splines.

    Returns (query(u) -> mu_T(u), inner truncation radius): queries must
    stay inside the returned radius; the thin outer ring where the lattice
    cannot resolve T is treated as conformal (the Douady-Earle extension
    of a smooth circle map is asymptotically conformal, so the discarded
    dilatation is negligible; rougher data shows up in the weld residual).
    """
    from scipy.interpolate import RectBivariateSpline

    inner = douady_earle if method == "douady-earle" else beurling_ahlfors
    ax = np.linspace(-1.0, 1.0, nlat)
    delta = ax[1] - ax[0]
    xx, yy = np.meshgrid(ax, ax, indexing="xy")
    upts = xx + 1j * yy
    usable = np.abs(upts) <= 1.0 - 2.0 * delta
    tvals = np.zeros(upts.shape, dtype=complex)
    tvals[usable] = inner(upts[usable], premap_inverse)
    ty, tx = np.gradient(tvals, delta, edge_order=1)
    tz = (tx - 1j * ty) / 2.0
    tzb = (tx + 1j * ty) / 2.0
    # FD valid only where the full neighborhood was evaluated
    valid = np.abs(upts) <= 1.0 - 3.0 * delta
    mu = np.zeros(upts.shape, dtype=complex)
    good = valid & (np.abs(tz) > 0)
    mu[good] = tzb[good] / tz[good]
    if np.any(np.abs(mu) >= 0.95):
        raise SewingError("extension dilatation reaches 0.95 on the lattice")
    sr = RectBivariateSpline(ax, ax, mu.real.T, kx=3, ky=3)
    si = RectBivariateSpline(ax, ax, mu.imag.T, kx=3, ky=3)
    radius = 1.0 - 5.0 * delta

    def query(u: np.ndarray) -> np.ndarray:
        return sr(u.real, u.imag, grid=False) + 1j * si(u.real, u.imag, grid=False)

    return query, radius


def _welding_dilatation(b: BorderedSphereData, nontrivial,
                        options: SewOptions) -> BeltramiCoefficient:
    """Assemble mu_W at grid nodes: on cap i it is the dilatation of
    E_i = T_i o cap_i^{-1} with T_i the extension of the inverse premap."""
    # grid around the nontrivial caps
    pts = np.concatenate([np.asarray(b.taus[i].samples) for i in nontrivial])
    center = complex(pts.mean())
    reach = float(np.abs(pts - center).max())
    grid = make_grid(center, 1.6 * reach, options.grid_n)
    nodes = grid.nodes()
    mu_vals = np.zeros(nodes.shape, dtype=complex)
    h = grid.spacing
    method = b.extension_method

    for i in nontrivial:
        tau = b.taus[i]
        cap = tau.cap
        premap = tau.premap if tau.premap is not None \
            else premap_from_samples(cap, tau.samples)
        mu_query, u_radius = _extension_mu_lattice(premap.inverse(), method)

        # candidate nodes: inside the cap, pulled back through the cap series
        charted = cap.chart.forward(nodes)
        box = np.abs(charted) <= cap.image_radius_bound() * 1.05
        cand = np.flatnonzero(box.ravel())
        if len(cand) == 0:
            continue
        u = _invert_series_on_circle(cap.psi.series, charted.ravel()[cand])
        margin = 2.0 * h / abs(cap.psi.derivative_at_zero())
        keep = np.abs(u) < min(1.0 - margin, u_radius)
        cand = cand[keep]
        if len(cand) == 0:
            continue
        upts = u[keep]
        mu_t = mu_query(upts)
        # transport through the conformal cap^{-1}: precomposition by a
        # conformal map rotates mu by conj(c')/c' with c' = 1/cap'(u)
        cap_prime = cap.psi.series.derivative()(upts)
        phase = cap_prime / np.conj(cap_prime)
        mu_vals.ravel()[cand] = mu_t * phase

    support = float(np.abs(nodes - grid.center)[np.abs(mu_vals) > 0].max()) + h \
        if np.any(mu_vals != 0) else 0.0
    field = ComplexField(grid, mu_vals, support_radius=support)
    try:
        return BeltramiCoefficient(field)
    except Exception as exc:
        raise SewingError(f"invalid welding dilatation: {exc}") from exc


# ---------------------------------------------------------------------------
# scene serialization
# ---------------------------------------------------------------------------

def scene_to_json(b: BorderedSphereData) -> dict:
    punctures = [("inf" if is_inf(p) else [p.real, p.imag])
                 for p in b.ambient.punctures]
    caps = []
    for cap in b.caps:
        caps.append({
            "chart": "inversion" if cap.chart.at_infinity else "translation",
            "oqc": cap.psi.to_json(),
        })
    taus = []
    for t in b.taus:
        if t.analytic:
            taus.append({"kind": "analytic"})
        else:
            taus.append({"kind": "samples",
                         "values": [[v.real, v.imag] for v in t.samples]})
    return {"punctures": punctures, "caps": caps, "tau": taus,
            "extension_method": b.extension_method}


def scene_from_json(obj) -> BorderedSphereData:
    punctures = tuple(INF if p == "inf" else complex(*p) for p in obj["punctures"])
    sphere = PuncturedSphere(punctures)
    caps = []
    for p, spec in zip(punctures, obj["caps"]):
        want_inf = spec["chart"] == "inversion"
        if want_inf != is_inf(p):
            raise RiggingError("chart kind inconsistent with puncture")
        caps.append(ChartedCap(PunctureChart(p), DiskFunction.from_json(spec["oqc"])))
    taus = []
    for cap, spec in zip(caps, obj["tau"]):
        if spec["kind"] == "analytic":
            taus.append(tau_from_cap(cap))
        elif spec["kind"] == "samples":
            vals = np.array([complex(a, bb) for a, bb in spec["values"]])
            pre = premap_from_samples(cap, vals)
            taus.append(BoundaryParametrization(vals, cap, pre))
        elif spec["kind"] == "twist":
            pre = CircleMap.twist(spec["amplitude"], spec.get("harmonic", 1))
            taus.append(tau_twisted(cap, pre))
        else:
            raise RiggingError(f"unknown tau kind {spec['kind']!r}")
    return BorderedSphereData(sphere, tuple(caps), tuple(taus),
                              obj.get("extension_method", "douady-earle"))
