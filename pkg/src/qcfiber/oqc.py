"""Normalized univalent disk functions and their pre-Schwarzian coordinates.

A disk function f (f(0) = 0, f'(0) != 0, univalent with a quasiconformal
extension recipe carried as data) is stored as a truncated power series
a_1 z + ... + a_M z^M.  Its coordinates are

    (v, c) = (f''/f', f'(0))

in the Banach space of holomorphic v with finite hyperbolic sup-norm
sup (1-|z|^2)|v(z)|, paired with c in C under the direct-sum norm
||v|| + |c|.  The inverse reconstruction integrates the coordinate back:

    f(z) = c * int_0^z exp(int_0^xi v(w) dw) dxi,

computed by formal exponentiation and term-wise integration, so that the
roundtrip is exact on truncated series up to floating-point rounding.

Truncated series are trusted only where the dropped tail is negligible:
univalence witnesses (argument-principle winding checks) and derivative
nonvanishing checks clip their probe radii to a trust radius estimated
from the decay of the trailing coefficients.  Evaluating a degree-40
truncation of a bounded univalent function at |z| = 0.99 can be wildly
non-univalent even though the underlying function is fine, so checks at
the raw radii would reject valid data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TRUNCATION = 40
WITNESS_RADII = (0.5, 0.9, 0.99)
TRUST_TOLERANCE = 1e-3
BLOWUP_BOUND = 1e8

# sup-norm probe lattice (see hyperbolic_norm)
NORM_RADII = 64
NORM_ANGLES = 128


class SeriesError(ValueError):
    """Malformed series data."""


class UnivalenceError(ValueError):
    """Univalence witness or derivative nonvanishing check failed."""


class BlowupError(ArithmeticError):
    """Series reconstruction left the local chart (coefficient blow-up)."""


class NormDivergenceError(ArithmeticError):
    """Hyperbolic sup-norm still growing at the finest probe radius."""


class PowerSeries:
    """Truncated power series sum c[k] z^k with vectorized evaluation."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 1 or len(c) == 0:
            raise SeriesError("coefficients must be a nonempty 1-d sequence")
        self.coeffs = c

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out

    def derivative(self) -> "PowerSeries":
        if len(self.coeffs) == 1:
            return PowerSeries([0.0])
        k = np.arange(1, len(self.coeffs))
        return PowerSeries(self.coeffs[1:] * k)

    def integral(self) -> "PowerSeries":
        """Antiderivative vanishing at 0."""
        k = np.arange(1, len(self.coeffs) + 1)
        return PowerSeries(np.concatenate(([0.0], self.coeffs / k)))

    def truncated(self, degree: int) -> "PowerSeries":
        c = self.coeffs[:degree + 1]
        if len(c) < degree + 1:
            c = np.concatenate([c, np.zeros(degree + 1 - len(c))])
        return PowerSeries(c)

    def multiply(self, other: "PowerSeries", degree: int) -> "PowerSeries":
        out = np.convolve(self.coeffs, other.coeffs)[:degree + 1]
        return PowerSeries(out).truncated(degree)

    def divide(self, other: "PowerSeries", degree: int) -> "PowerSeries":
        """Formal quotient self/other; other must have nonzero constant term."""
        b = other.truncated(degree).coeffs
        if b[0] == 0:
            raise SeriesError("division by series with vanishing constant term")
        a = self.truncated(degree).coeffs
        q = np.zeros(degree + 1, dtype=complex)
        for n in range(degree + 1):
            acc = a[n] - np.dot(q[:n], b[n:0:-1]) if n else a[0]
            q[n] = acc / b[0]
        return PowerSeries(q)

    def exp(self, degree: int) -> "PowerSeries":
        """exp(self); requires zero constant term."""
        a = self.truncated(degree).coeffs
        if a[0] != 0:
            raise SeriesError("exp requires zero constant term")
        e = np.zeros(degree + 1, dtype=complex)
        e[0] = 1.0
        ka = np.arange(degree + 1) * a
        for n in range(1, degree + 1):
            e[n] = np.dot(ka[1:n + 1], e[n - 1::-1]) / n
        return PowerSeries(e)

    def scale(self, factor: complex) -> "PowerSeries":
        return PowerSeries(self.coeffs * factor)

    def trust_radius(self, tol: float = TRUST_TOLERANCE) -> float:
        """Largest radius where the trailing terms stay below tol relative
        to the series scale (1 if the tail is negligible)."""
        c = self.coeffs
        scale = max(1.0, float(abs(c[1])) if len(c) > 1 else float(abs(c[0])))
        r = 1.0
        tail = c[-5:] if len(c) > 5 else c[1:]
        offset = len(c) - len(tail)
        for i, ck in enumerate(tail):
            k = offset + i
            if k == 0 or abs(ck) <= tol * scale:
                continue
            r = min(r, float((tol * scale / abs(ck)) ** (1.0 / k)))
        return r


def geometric_series(ratio: complex, degree: int) -> PowerSeries:
    """1/(1 - ratio z) truncated."""
    return PowerSeries(ratio ** np.arange(degree + 1))


def padded_series(coeffs, min_degree: int = 8) -> PowerSeries:
    """Series with trailing zeros appended up to min_degree (same function,
    long enough truncation for the operations that require M >= 8)."""
    c = np.asarray(coeffs, dtype=complex)
    if len(c) < min_degree + 1:
        c = np.concatenate([c, np.zeros(min_degree + 1 - len(c))])
    return PowerSeries(c)


def _winding(values: np.ndarray, target: complex) -> float:
    ang = np.unwrap(np.angle(values - target))
    return (ang[-1] - ang[0]) / (2 * np.pi)


# ---------------------------------------------------------------------------
# disk functions
# ---------------------------------------------------------------------------

@dataclass
class DiskFunction:
    """Univalent normalized disk map as a truncated series plus extension
    recipe.

    ``extension`` is a (tag, params) pair naming how the map extends
    quasiconformally past the closed disk: ("none", {}), ("reflection", {})
    or ("explicit", {...}).  The recipe is carried as data and only tested
    through the maps that consume it.
    """

    series: PowerSeries
    extension: tuple = ("none", {})
    _boundary_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        c = self.series.coeffs
        if c[0] != 0:
            raise SeriesError("disk functions are normalized with f(0) = 0")
        if len(c) < 2 or c[1] == 0:
            raise SeriesError("f'(0) must be nonzero")

    @property
    def coeffs(self) -> np.ndarray:
        return self.series.coeffs

    @property
    def truncation(self) -> int:
        return self.series.degree

    def __call__(self, z):
        return self.series(z)

    def derivative_at_zero(self) -> complex:
        return complex(self.series.coeffs[1])

    def trust_radius(self) -> float:
        return self.series.trust_radius()

    def boundary_samples(self, count: int = 512, radius: float = 1.0) -> np.ndarray:
        key = (count, radius)
        if key not in self._boundary_cache:
            th = 2 * np.pi * np.arange(count) / count
            self._boundary_cache[key] = self.series(radius * np.exp(1j * th))
        return self._boundary_cache[key]

    def univalence_witness(self, radii=WITNESS_RADII, angles: int = 6,
                           samples: int = 2048) -> list:
        """Argument-principle winding checks on circles |z| = r (clipped to
        the trust radius).  Returns a list of (radius, ok) pairs."""
        trust = self.trust_radius()
        th = np.linspace(0.0, 2 * np.pi, samples + 1)
        report = []
        for r in radii:
            r_eff = min(r, trust)
            circle = self.series(r_eff * np.exp(1j * th))
            ok = True
            for rho in (0.0, 0.35, 0.7):
                for a in 2 * np.pi * np.arange(angles) / angles:
                    target = self.series(rho * r_eff * np.exp(1j * a))
                    if abs(_winding(circle, target) - 1.0) > 0.3:
                        ok = False
            report.append((r_eff, ok))
        return report

    def check_univalent(self) -> None:
        bad = [r for r, ok in self.univalence_witness() if not ok]
        if bad:
            raise UnivalenceError(f"winding witness failed on radii {bad}")

    def scaled(self, factor: complex) -> "DiskFunction":
        return DiskFunction(self.series.scale(factor), self.extension)

    def to_json(self) -> dict:
        return {
            "coeffs": [[c.real, c.imag] for c in self.series.coeffs],
            "extension": [self.extension[0], self.extension[1]],
        }

    @staticmethod
    def from_json(obj) -> "DiskFunction":
        coeffs = [complex(a, b) for a, b in obj["coeffs"]]
        ext = tuple(obj.get("extension", ("none", {})))
        return DiskFunction(PowerSeries(coeffs), ext)


def named_disk_function(name: str, truncation: int = DEFAULT_TRUNCATION) -> DiskFunction:
    """CLI built-ins: "koebe", "affine:c", "quadratic:a"."""
    if name == "koebe":
        coeffs = np.concatenate(([0.0], np.arange(1, truncation + 1)))
        return DiskFunction(PowerSeries(coeffs), ("explicit", {"name": "koebe"}))
    if name.startswith("affine:"):
        c = complex(name.split(":", 1)[1])
        return DiskFunction(PowerSeries([0.0, c]), ("reflection", {}))
    if name.startswith("quadratic:"):
        a = complex(name.split(":", 1)[1])
        if abs(a) >= 0.5:
            raise UnivalenceError("quadratic:a requires |a| < 1/2")
        return DiskFunction(PowerSeries([0.0, 1.0, a]), ("reflection", {}))
    raise ValueError(f"unknown named disk function {name!r}")


# ---------------------------------------------------------------------------
# coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PreSchwarzianCoords:
    """(v, c) in A^1_inf + C with the cached direct-sum norm."""

    v: PowerSeries
    c: complex
    norm: float

    def direct_sum_norm(self) -> float:
        return self.norm + abs(self.c)


def pre_schwarzian(f: DiskFunction) -> PowerSeries:
    """f''/f' as a series truncated at M - 2.

    Requires the univalence witness to pass and f' to be nonvanishing at
    probe points inside the trusted part of |z| <= 0.99.
    """
    if f.truncation < 8:
        raise SeriesError("series truncation must be at least 8")
    f.check_univalent()
    fp = f.series.derivative()
    r_max = min(0.99, f.trust_radius())
    rr, tt = np.meshgrid(np.linspace(0.05, r_max, 24),
                         2 * np.pi * np.arange(64) / 64)
    probe = rr * np.exp(1j * tt)
    scale = abs(f.derivative_at_zero())
    if np.abs(fp(probe)).min() < 1e-9 * scale:
        raise UnivalenceError("f' vanishes at a probe point inside the disk")
    return fp.derivative().divide(fp, max(f.truncation - 2, 0))


def hyperbolic_norm(v, bound: float = 1e6) -> float:
    """sup over the unit disk of (1 - |z|^2)|v(z)|.

    ``v`` may be a PowerSeries or any callable on complex arrays.  The sup
    is estimated on a radial-angular lattice (radii accumulating
    geometrically at 1) and refined by Richardson extrapolation of the
    radial profile at the maximizing angle; the result is a lower estimate
    of the true sup.  Raises NormDivergenceError when the profile is still
    growing beyond ``bound`` at the finest radius.
    """
    radii = 1.0 - np.geomspace(1.0, 1e-6, NORM_RADII)
    angles = np.exp(2j * np.pi * np.arange(NORM_ANGLES) / NORM_ANGLES)
    rr, aa = np.meshgrid(radii, angles)
    z = rr * aa
    g = (1.0 - np.abs(z) ** 2) * np.abs(v(z))
    finest = g[:, -1]
    if finest.max() > bound and (g[:, -1] > g[:, -2]).any():
        raise NormDivergenceError("norm profile exceeds bound at finest radius")
    best = float(g.max())
    i_ang = int(np.unravel_index(np.argmax(g), g.shape)[0])
    prof = g[i_ang]
    # two-point Richardson toward r = 1 along the maximizing angle
    r1, r2 = radii[-2], radii[-1]
    g1, g2 = prof[-2], prof[-1]
    if g2 >= g1 and r2 > r1:
        extrap = g2 + (g2 - g1) * (1.0 - r2) / (r2 - r1)
        if np.isfinite(extrap):
            best = max(best, float(extrap))
    return best


def embed_coords(f: DiskFunction) -> PreSchwarzianCoords:
    """Coordinates (pre-Schwarzian, f'(0)) of a disk function."""
    v = pre_schwarzian(f)
    return PreSchwarzianCoords(v, f.derivative_at_zero(), hyperbolic_norm(v))


def reconstruct(coords: PreSchwarzianCoords,
                truncation: int = DEFAULT_TRUNCATION,
                extension: tuple = ("none", {})) -> DiskFunction:
    """Inverse of embed_coords: f = c int exp(int v).

    Solves f''/f' = v with f(0) = 0, f'(0) = c by formal exponentiation
    and term-wise integration.  Coefficient magnitudes above 1e8 signal
    coordinates outside the local chart and raise BlowupError.
    """
    if coords.c == 0:
        raise SeriesError("coordinate c = f'(0) must be nonzero")
    if not np.isfinite(coords.norm):
        raise SeriesError("coordinate norm must be finite")
    inner = coords.v.integral().truncated(truncation)
    fprime = inner.exp(truncation).scale(coords.c)
    f = fprime.integral().truncated(truncation)
    if np.abs(f.coeffs).max() > BLOWUP_BOUND:
        raise BlowupError("series blow-up: coordinates outside the local chart")
    return DiskFunction(f, extension)


def coords_on_line(base: PreSchwarzianCoords, direction_v: PowerSeries,
                   direction_c: complex, t: complex) -> PreSchwarzianCoords:
    """base + t * (direction_v, direction_c) with the norm recomputed."""
    deg = max(base.v.degree, direction_v.degree)
    v = PowerSeries(base.v.truncated(deg).coeffs
                    + t * direction_v.truncated(deg).coeffs)
    return PreSchwarzianCoords(v, base.c + t * direction_c, hyperbolic_norm(v))


def point_evaluation(f: DiskFunction, z: complex) -> complex:
    """f(z) for |z| < 1 by series evaluation."""
    if abs(z) >= 1:
        raise ValueError("point evaluation requires |z| < 1")
    return complex(f.series(np.asarray(z, dtype=complex)))


# ---------------------------------------------------------------------------
# Schwarz-lemma bounds for disk-valued members
# ---------------------------------------------------------------------------

class DiskWitnessError(ValueError):
    """Map is not disk-valued on the probe circle."""


def disk_schwarz_check(psi: DiskFunction, tol_deriv: float = 1e-9,
                       tol_norm: float = 1e-3) -> tuple[float, float]:
    """(|psi'(0)|, hyperbolic norm of psi''/psi') for a disk-valued psi.

    Asserts the Schwarz bound |psi'(0)| <= 1 + tol_deriv and the univalent
    pre-Schwarzian bound <= 6 + tol_norm, returning the measured pair.
    """
    boundary = np.abs(psi.series(0.999 * np.exp(2j * np.pi * np.arange(256) / 256)))
    if boundary.max() > 1.0 + 1e-12:
        raise DiskWitnessError(f"|psi| reaches {boundary.max():.6f} on |z| = 0.999")
    deriv = abs(psi.derivative_at_zero())
    norm = hyperbolic_norm(pre_schwarzian(psi))
    if deriv > 1.0 + tol_deriv:
        raise AssertionError(f"Schwarz bound violated: |psi'(0)| = {deriv}")
    if norm > 6.0 + tol_norm:
        raise AssertionError(f"pre-Schwarzian bound violated: {norm}")
    return deriv, norm


def pointwise_schwarz_margin(psi: DiskFunction) -> float:
    """max over the probe lattice of |(1-|z|^2) A(psi) - 2 conj(z)|.

    For univalent psi this is bounded by 4 (sharp elementary estimate)."""
    v = pre_schwarzian(psi)
    radii = 1.0 - np.geomspace(1.0, 1e-4, 48)
    angles = np.exp(2j * np.pi * np.arange(96) / 96)
    rr, aa = np.meshgrid(radii, angles)
    z = rr * aa
    return float(np.abs((1 - np.abs(z) ** 2) * v(z) - 2 * np.conj(z)).max())


def seeded_disk_corpus(seed: int, count: int,
                       truncation: int = DEFAULT_TRUNCATION) -> list[DiskFunction]:
    """Seeded corpus of univalent maps of the disk into the disk fixing 0.

    Generator: random pre-Schwarzian directions of controlled hyperbolic
    norm, reconstructed through the coordinate chart, accepted only when
    the Becker criterion sup (1-|z|^2)|z A(f)| <= 0.95 certifies univalence
    of the truncation, then scaled to land in the unit disk.  A few
    deterministic extremals (identity, z/2, half-Koebe rescaled) are
    prepended; the identity attains the Schwarz bound.
    """
    rng = np.random.default_rng(seed)
    out = [
        DiskFunction(PowerSeries([0, 1.0])),
        DiskFunction(PowerSeries([0, 0.5])),
        DiskFunction(PowerSeries([0, 1 / 1.5 * 0.99, -0.5 / 1.5 * 0.99])),
    ]
    angles = np.exp(2j * np.pi * np.arange(4096) / 4096)
    while len(out) < count:
        decay = rng.uniform(0.3, 0.7)
        ncoef = truncation - 2
        v = PowerSeries((rng.standard_normal(ncoef) + 1j * rng.standard_normal(ncoef))
                        * decay ** np.arange(ncoef))
        target = rng.uniform(0.2, 0.9)
        v = v.scale(target / max(hyperbolic_norm(v), 1e-12))
        try:
            f = reconstruct(PreSchwarzianCoords(v, 1.0, target), truncation)
            becker = hyperbolic_norm(lambda z, s=pre_schwarzian(f): z * s(z))
        except (BlowupError, UnivalenceError):
            continue
        if becker > 0.95:
            continue
        sup_boundary = np.abs(f.series(angles)).max()
        out.append(f.scaled(0.99 / sup_boundary))
    return out[:count]
