"""Mobius transformations on the Riemann sphere and the cross-ratio.

Points at infinity are represented by ``INF`` (complex infinity); all
helpers guard the infinite cases explicitly so arithmetic never produces
nan by accident.
"""

from __future__ import annotations

import numpy as np

INF = complex(np.inf, 0.0)


def is_inf(z) -> bool:
    return np.isinf(np.asarray(z).real) or np.isinf(np.asarray(z).imag)


class Mobius:
    """z -> (a z + b) / (c z + d), det != 0."""

    def __init__(self, a: complex, b: complex, c: complex, d: complex):
        det = a * d - b * c
        if det == 0:
            raise ValueError("singular Mobius coefficients")
        self.a, self.b, self.c, self.d = (complex(a), complex(b),
                                          complex(c), complex(d))

    @staticmethod
    def identity() -> "Mobius":
        return Mobius(1, 0, 0, 1)

    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def __call__(self, z):
        if np.isscalar(z) or isinstance(z, complex):
            if is_inf(z):
                return self.a / self.c if self.c != 0 else INF
            num = self.a * z + self.b
            den = self.c * z + self.d
            return INF if den == 0 else num / den
        z = np.asarray(z, dtype=complex)
        out = np.empty(z.shape, dtype=complex)
        fin = np.isfinite(z.real) & np.isfinite(z.imag)
        num = self.a * z[fin] + self.b
        den = self.c * z[fin] + self.d
        vals = np.where(den == 0, INF, num / np.where(den == 0, 1, den))
        out[fin] = vals
        out[~fin] = self.a / self.c if self.c != 0 else INF
        return out

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "Mobius") -> "Mobius":
        """self after other."""
        return Mobius(self.a * other.a + self.b * other.c,
                      self.a * other.b + self.b * other.d,
                      self.c * other.a + self.d * other.c,
                      self.c * other.b + self.d * other.d)

    def derivative(self, z):
        """dm/dz at finite z (finite value required)."""
        det = self.a * self.d - self.b * self.c
        den = self.c * np.asarray(z, dtype=complex) + self.d
        return det / den**2


def mobius_to_zero_one_inf(q1: complex, q2: complex, q3: complex) -> Mobius:
    """The unique Mobius map sending (q1, q2, q3) to (0, 1, inf).

    Exact identity coefficients come out when (q1, q2, q3) = (0, 1, inf).
    """
    if len({_key(q1), _key(q2), _key(q3)}) != 3:
        raise ValueError("normalization points must be distinct")
    if is_inf(q3):
        # z -> (z - q1)/(q2 - q1)
        return Mobius(1, -q1, 0, q2 - q1)
    if is_inf(q1):
        # z -> (q2 - q3)/(z - q3)
        return Mobius(0, q2 - q3, 1, -q3)
    if is_inf(q2):
        # z -> (z - q1)/(z - q3)
        return Mobius(1, -q1, 1, -q3)
    return Mobius(q2 - q3, -q1 * (q2 - q3), q2 - q1, -q3 * (q2 - q1))


def _key(z) -> complex:
    return INF if is_inf(z) else complex(z)


def cross_ratio_points(p1, p2, p3, p4) -> complex:
    """Cross-ratio with the convention cr(0, 1, inf, z) = z.

    Formula (p4-p1)(p2-p3) / ((p4-p3)(p2-p1)), with the two factors
    containing an infinite point cancelled in the limit.
    """
    pts = [p1, p2, p3, p4]
    n_inf = sum(is_inf(p) for p in pts)
    if n_inf > 1:
        raise ValueError("at most one point may be infinite")
    if len({_key(p) for p in pts}) != 4:
        raise ValueError("cross-ratio requires distinct points")
    if n_inf == 1:
        if is_inf(p1):
            return (p2 - p3) / (p2 - p4)
        if is_inf(p2):
            return (p4 - p1) / (p4 - p3)
        if is_inf(p3):
            return (p4 - p1) / (p2 - p1)
        return (p2 - p3) / (p2 - p1)
    return ((p4 - p1) * (p2 - p3)) / ((p4 - p3) * (p2 - p1))


def random_mobius(rng: np.random.Generator, coeff_bound: float = 10.0) -> Mobius:
    """Random nondegenerate Mobius map with coefficients of moderate size."""
    while True:
        a, b, c, d = (rng.uniform(-coeff_bound, coeff_bound, 8)
                      .view(complex).tolist())
        if abs(a * d - b * c) > 1e-2:
            return Mobius(a, b, c, d)
