"""Turning-point variable for the large-order Bessel asymptotics.

zeta(z) is the smooth solution of (dzeta/dz)^2 = (1 - z^2)/(zeta z^2) that
vanishes at z = 1, is positive on (0, 1) (evanescent side) and negative on
(1, oo) (oscillatory side). Closed forms exist on both sides; near z = 1
they lose precision like (1-z)^(-1/2), so a Taylor series generated from
the defining ODE bridges the turning point. The module also carries the
glancing amplitude Phi built from zeta, which plays the role of an
effective coupling for modes tangent to the boundary circle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .potential import PotentialSpec

TWO_THIRD_ROOT = 2.0 ** (1.0 / 3.0)

# Seam between the closed forms and the turning-point series.
SEAM_RADIUS = 0.05
_N_SERIES = 10

RE_MIN = 0.05
IM_MAX = 0.5


class LangerDomainError(ValueError):
    """Argument outside the strip where zeta is evaluated."""


class LangerConvergenceError(RuntimeError):
    """Newton inversion failed; argument outside the validity disk."""


def _series_coefficients(n: int) -> list[float]:
    # zeta = 2^(1/3) * sum d_m t^m, t = 1 - z.  Plugging the expansion into
    # (D')^2 * D = sum (k+1)/2 t^k (the ODE written in t) gives a triangular
    # system; the d_m coefficient enters order t^m linearly as (2m+1) d_m.
    d = [Fraction(0), Fraction(1)]
    for m in range(2, n + 1):
        dp = [k * d[k] for k in range(len(d))]  # coefficients of D', index k-1
        # convolution A2 = (D')^2 up to order t^(m-1), with d_m treated as 0
        a2 = [Fraction(0)] * m
        for i in range(1, len(d)):
            for j in range(1, len(d)):
                k = (i - 1) + (j - 1)
                if k < m:
                    a2[k] += dp[i] * dp[j]
        # known part of [t^m] (D')^2 D
        known = Fraction(0)
        for k in range(m):
            j = m - k
            if j < len(d):
                known += a2[k] * d[j]
        rhs = Fraction(m + 1, 2)
        d.append((rhs - known) / (2 * m + 1))
    return [float(x) for x in d]


_D = _series_coefficients(_N_SERIES)  # _D[m] multiplies t^m
_E2 = -_D[2]
_E3 = 2.0 * _D[2] * _D[2] - _D[3]


@dataclass(frozen=True)
class ZetaValue:
    z: complex
    zeta: complex
    dzeta_dz: complex
    branch: str  # oscillatory | evanescent | turning


@dataclass(frozen=True)
class PhiValue:
    phi: complex
    n: int
    h: float
    pot: PotentialSpec
    zeta_arg: complex


def _check_domain(z: complex) -> None:
    if z.real <= RE_MIN or abs(z.imag) > IM_MAX:
        raise LangerDomainError(
            f"zeta is only evaluated for Re z > {RE_MIN}, |Im z| <= {IM_MAX}; got {z}"
        )


def _series_eval(t: complex) -> tuple[complex, complex]:
    # returns (zeta, dzeta/dz) from the turning-point series; t = 1 - z
    acc = 0.0 + 0.0j
    dacc = 0.0 + 0.0j
    for m in range(_N_SERIES, 0, -1):
        acc = acc * t + _D[m]
        dacc = dacc * t + m * _D[m]
    zeta = TWO_THIRD_ROOT * t * acc
    dzeta = -TWO_THIRD_ROOT * dacc
    return zeta, dzeta


def zeta_of(z: complex) -> ZetaValue:
    """Langer variable and derivative at a point near the positive real axis."""
    z = complex(z)
    _check_domain(z)
    t = 1.0 - z
    if abs(t) <= SEAM_RADIUS:
        zeta, dzeta = _series_eval(t)
        return ZetaValue(z, zeta, dzeta, "turning")
    if z.real >= 1.0:
        s = cmath.sqrt(z * z - 1.0)
        x = s - cmath.acos(1.0 / z)
        mzeta_half = (1.5 * x) ** (1.0 / 3.0)
        zeta = -(mzeta_half * mzeta_half)
        dzeta = -s / (z * mzeta_half)
        return ZetaValue(z, zeta, dzeta, "oscillatory")
    s = cmath.sqrt(1.0 - z * z)
    y = cmath.log((1.0 + s) / z) - s
    zeta_half = (1.5 * y) ** (1.0 / 3.0)
    zeta = zeta_half * zeta_half
    dzeta = -s / (z * zeta_half)
    return ZetaValue(z, zeta, dzeta, "evanescent")


def zeta_ratio(z: complex) -> complex:
    """zeta / (1 - z^2), analytic through the turning point (limit 2^(-2/3))."""
    z = complex(z)
    _check_domain(z)
    t = 1.0 - z
    if abs(t) <= SEAM_RADIUS:
        acc = 0.0 + 0.0j
        for m in range(_N_SERIES, 0, -1):
            acc = acc * t + _D[m]
        return TWO_THIRD_ROOT * acc / (2.0 - t)
    return zeta_of(z).zeta / (1.0 - z * z)


def olver_weight(z: complex) -> tuple[complex, complex]:
    """g = 4 zeta/(1 - z^2) and d(log g)/dz, both analytic at z = 1.

    g^(1/4) is the amplitude prefactor of the uniform large-order Bessel
    forms; the log-derivative feeds their z-derivatives.
    """
    z = complex(z)
    _check_domain(z)
    t = 1.0 - z
    if abs(t) <= SEAM_RADIUS:
        num = 0.0 + 0.0j
        dnum = 0.0 + 0.0j
        for m in range(_N_SERIES, 0, -1):
            num = num * t + _D[m]
            if m >= 2:
                dnum = dnum * t + (m - 1) * _D[m]
        g = 4.0 * TWO_THIRD_ROOT * num / (2.0 - t)
        # d/dz = -d/dt;   g'/g = -(num'/num + 1/(2 - t))
        dlog = -(dnum / num + 1.0 / (2.0 - t))
        return g, dlog
    zv = zeta_of(z)
    g = 4.0 * zv.zeta / (1.0 - z * z)
    dlog = zv.dzeta_dz / zv.zeta + 2.0 * z / (1.0 - z * z)
    return g, dlog


def z_of_zeta(zeta: complex) -> complex:
    """Local inverse of zeta_of near the turning point (|zeta| <= 1.05)."""
    zeta = complex(zeta)
    if abs(zeta) > 1.05:
        raise LangerDomainError(f"inverse only valid for |zeta| <= 1.05, got {zeta}")
    y = zeta / TWO_THIRD_ROOT
    t = y + _E2 * y * y + _E3 * y**3
    if abs(t) > 0.95:
        t *= 0.95 / abs(t)
    w = 1.0 - t
    for _ in range(50):
        zv = zeta_of(w)
        delta = zv.zeta - zeta
        if abs(delta) <= 1e-13 * (1.0 + abs(zeta)):
            return w
        w = w - delta / zv.dzeta_dz
    raise LangerConvergenceError(f"Newton inversion did not converge for zeta={zeta}")


def phi(n: int, h: float, pot: PotentialSpec, z: complex) -> PhiValue:
    """Glancing amplitude Phi for mode n at semiclassical parameter h.

    z is the rescaled frequency (close to m = n*h near glancing); the
    amplitude is evaluated at w = z/m and stays analytic through w = 1.
    """
    if n < 1 or h <= 0:
        raise ValueError("need n >= 1 and h > 0")
    m = n * h
    if not 0.5 <= m <= 2.0:
        raise LangerDomainError(f"n*h = {m} outside [0.5, 2]")
    w = complex(z) / m
    ratio = zeta_ratio(w)
    h1 = 1.0 / n
    value = h1 ** (2.0 / 3.0) * h ** (-pot.alpha) * pot.V0 * cmath.sqrt(ratio)
    return PhiValue(value, n, h, pot, zeta_of(w).zeta)


def phi_at_zeta(n: int, h: float, pot: PotentialSpec, zeta: complex) -> PhiValue:
    """Phi as a function of the zeta variable (inverts zeta first)."""
    w = z_of_zeta(zeta)
    m = n * h
    return phi(n, h, pot, m * w)


def expected_phi_scale(n: int, h: float, pot: PotentialSpec) -> float:
    """Magnitude scale h1^(2/3) h^(-alpha) V0 2^(-1/3) of Phi near glancing."""
    return (1.0 / n) ** (2.0 / 3.0) * h ** (-pot.alpha) * pot.V0 * 2.0 ** (-1.0 / 3.0)
