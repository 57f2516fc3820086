"""Per-mode secular function whose zeros are the disk resonances.

For mode n the outgoing/interior matching on the unit circle reduces to

    F_n(lambda) = 1 - (pi V / 2i) J_n(lambda) H1_n(lambda) = 0

with the frequency-dependent coupling V = V0 * |frequency|^alpha frozen to
a constant v_eff on each search window, which keeps F_n holomorphic there
and the argument principle applicable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun
from .potential import PotentialSpec

__all__ = ["PotentialSpec", "Window", "SecularValue", "window_for",
           "secular_eval", "interior_coefficient"]

IM_TOP_MARGIN = 0.05


@dataclass(frozen=True)
class Window:
    """Axis-aligned search rectangle in the lambda plane.

    v_eff is the coupling frozen on this window; h_eff the inverse of the
    window's center frequency. Plain rectangles for generic root finding
    can leave the defaults in place.
    """

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    v_eff: float = 1.0
    h_eff: float = 1.0

    def __post_init__(self) -> None:
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate window {self}")
        if self.v_eff <= 0:
            raise ValueError("v_eff must be positive")

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (self.re_min - pad <= z.real <= self.re_max + pad
                and self.im_min - pad <= z.imag <= self.im_max + pad)


@dataclass(frozen=True)
class SecularValue:
    f: complex
    df: complex
    n: int
    lam: complex
    v_eff: float


def window_for(center_re_lambda: float, pot: PotentialSpec,
               half_width_c: float = 1.0, depth_M: float = 2.0) -> Window:
    """Search window at a center frequency, following the h^{3/4} width law.

    Width is center * (1 +- c h^{3/4}) with h = 1/center; depth reaches
    M log(1/h) below the axis plus a small positive margin on top to catch
    real-axis grazing.
    """
    if center_re_lambda < 5.0:
        raise ValueError("window centers below 5 are not supported")
    if half_width_c <= 0 or depth_M <= 0:
        raise ValueError("half_width_c and depth_M must be positive")
    c = center_re_lambda
    h_eff = 1.0 / c
    half = half_width_c * h_eff**0.75
    return Window(
        re_min=c * (1.0 - half),
        re_max=c * (1.0 + half),
        im_min=-depth_M * math.log(c),
        im_max=IM_TOP_MARGIN,
        v_eff=pot.v_eff(c),
        h_eff=h_eff,
    )


def secular_eval(n: int, lam: complex, v_eff: float) -> SecularValue:
    """F_n(lambda) and d F_n / d lambda at frozen coupling v_eff."""
    if v_eff < 0:
        raise ValueError("v_eff must be nonnegative")
    lam = complex(lam)
    if v_eff == 0.0:
        return SecularValue(1.0 + 0j, 0j, n, lam, v_eff)
    p, dp = specfun.bessel_product(n, lam)
    c = 0.5j * math.pi * v_eff  # -(pi v)/(2i)
    return SecularValue(1.0 + c * p, c * dp, n, lam, v_eff)


def secular_fdf(n: int, v_eff: float):
    """Handle z -> (F_n(z), F_n'(z)) for the root-finding machinery."""

    def fdf(z: complex) -> tuple[complex, complex]:
        v = secular_eval(n, z, v_eff)
        return v.f, v.df

    return fdf


def interior_coefficient(n: int, lam: complex) -> complex:
    """Outgoing-component coefficient C_n = J_n(lambda)/H1_n(lambda).

    With K_n = 1 the resonant state is J_n(lambda r) e^{i n theta} inside
    and C_n H1_n(lambda r) e^{i n theta} outside.
    """
    pair = specfun.bessel_eval(n, lam)
    if abs(pair.h1) < 1e-280:
        raise ZeroDivisionError(f"H1_{n}({lam}) underflows; coefficient undefined")
    return pair.j / pair.h1
