"""Zero location and certification for holomorphic functions on rectangles.

Functions are passed as handles z -> (f(z), f'(z)). Counting uses the
argument principle with adaptive Gauss-Kronrod quadrature on each edge and
an integer rounding gate; localization bisects rectangles (alternating
axis) until each box holds exactly one zero; refinement is full Newton;
certification checks the contraction-mapping inequality

    a + d eps^2 < eps b,   d eps / b <= 1/2

with a = |f(z0)|, b = |f'(z0)| and d an empirical (sampled, safety factor
2) bound for |f''| on the eps-disk. A passed certificate asserts a unique
zero within eps of z0, up to the empirical nature of d.
"""

from __future__ import annotations

import cmath
import math
import random
import warnings
from dataclasses import dataclass

from scipy.integrate import quad

from .secular import Window

__all__ = [
    "Certificate",
    "CertifiedRoot",
    "LocalizedBox",
    "BoundaryZeroError",
    "NonIntegerCountError",
    "SubdivisionLimitError",
    "NewtonError",
    "count_zeros",
    "localize_all",
    "newton_refine",
    "certify",
]

_NUDGE_SEED = 0x1EAD15C

CONTRACTION_C = 0.5
SECOND_DIFF_SAFETY = 2.0


class BoundaryZeroError(RuntimeError):
    """|f| vanishes on the contour even after the allowed nudges."""


class NonIntegerCountError(RuntimeError):
    """Contour integral failed the integer rounding gate."""


class SubdivisionLimitError(RuntimeError):
    """Bisection hit the depth limit (near-multiple zero suspected)."""


class NewtonError(RuntimeError):
    """Newton iteration diverged or started at a critical point."""


@dataclass(frozen=True)
class Certificate:
    a: float
    b: float
    d: float
    eps: float
    passed: bool

    @staticmethod
    def from_bounds(a: float, b: float, d: float, eps: float) -> "Certificate":
        ok = b > 0 and (a + d * eps * eps < eps * b) and (d * eps / b <= CONTRACTION_C)
        return Certificate(a, b, d, eps, ok)


@dataclass(frozen=True)
class CertifiedRoot:
    lam: complex
    n: int
    residual: float
    certificate: Certificate
    init_kind: str  # contour_scan | normal_lattice | glancing_band | away_glancing


@dataclass(frozen=True)
class LocalizedBox:
    box: Window
    count: int
    flagged: bool = False  # depth limit hit; near-multiple zero suspected


def _boundary_min(fdf, rect: Window, samples_per_edge: int = 24):
    corners = [
        complex(rect.re_min, rect.im_min),
        complex(rect.re_max, rect.im_min),
        complex(rect.re_max, rect.im_max),
        complex(rect.re_min, rect.im_max),
    ]
    vals = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        for i in range(samples_per_edge):
            z = a + (b - a) * (i + 0.5) / samples_per_edge
            vals.append(abs(fdf(z)[0]))
    vals.sort()
    return vals[0], vals[len(vals) // 2]


def _contour_integral(fdf, rect: Window, epsabs: float) -> complex:
    corners = [
        complex(rect.re_min, rect.im_min),
        complex(rect.re_max, rect.im_min),
        complex(rect.re_max, rect.im_max),
        complex(rect.re_min, rect.im_max),
    ]
    total = 0.0 + 0.0j
    with warnings.catch_warnings():
        # peaked-but-integrable edges trip QUADPACK's tolerance warnings;
        # the integer rounding gate downstream validates the result
        warnings.simplefilter("ignore")
        for a, b in zip(corners, corners[1:] + corners[:1]):
            seg = b - a

            def integrand(t, a=a, seg=seg):
                f, df = fdf(a + t * seg)
                if f == 0:
                    raise BoundaryZeroError(f"f vanishes on the contour of {rect}")
                return df / f * seg

            val, _ = quad(integrand, 0.0, 1.0, complex_func=True,
                          epsabs=epsabs, epsrel=epsabs, limit=200)
            total += val
    return total / (2.0j * math.pi)


def count_zeros(fdf, rect: Window) -> int:
    """Number of zeros of f inside the rectangle by the argument principle.

    A zero (numerically) on the contour triggers a deterministic outward
    nudge of the rectangle by ~1e-3 of its size, retried at most 5 times.
    """
    rng = random.Random(f"{_NUDGE_SEED}/{rect.re_min:.9e}/{rect.im_min:.9e}/"
                        f"{rect.re_max:.9e}/{rect.im_max:.9e}")
    width = rect.re_max - rect.re_min
    height = rect.im_max - rect.im_min
    raw = None
    for attempt in range(6):
        lo, typical = _boundary_min(fdf, rect)
        if typical > 0 and lo >= 1e-8 * typical:
            try:
                raw = _contour_integral(fdf, rect, epsabs=1e-3)
                break
            except (BoundaryZeroError, ZeroDivisionError):
                pass  # a zero sat exactly on a quadrature node; nudge
        if attempt == 5:
            raise BoundaryZeroError(f"|f| vanishes on the boundary of {rect}")
        rect = Window(
            rect.re_min - (0.5 + rng.random()) * 1e-3 * width,
            rect.re_max + (0.5 + rng.random()) * 1e-3 * width,
            rect.im_min - (0.5 + rng.random()) * 1e-3 * height,
            rect.im_max + (0.5 + rng.random()) * 1e-3 * height,
            rect.v_eff,
            rect.h_eff,
        )
    if raw is None:
        raise BoundaryZeroError(f"|f| vanishes on the boundary of {rect}")
    nearest = round(raw.real)
    if abs(raw - nearest) > 0.25:
        raw = _contour_integral(fdf, rect, epsabs=1e-5)
        nearest = round(raw.real)
        if abs(raw - nearest) > 0.25:
            raise NonIntegerCountError(
                f"contour integral {raw} not near an integer on {rect}"
            )
    return int(nearest)


def _split(fdf, rect: Window, axis: int) -> tuple[Window, Window]:
    # place the cut where |f| is largest along it, so no zero sits on the
    # shared edge of the children
    best_mid, best_val = None, -1.0
    for frac in (0.5, 0.44, 0.56, 0.38, 0.62):
        if axis == 0:
            mid = rect.re_min + frac * (rect.re_max - rect.re_min)
            pts = [complex(mid, rect.im_min + (rect.im_max - rect.im_min) * (i + 0.5) / 9)
                   for i in range(9)]
        else:
            mid = rect.im_min + frac * (rect.im_max - rect.im_min)
            pts = [complex(rect.re_min + (rect.re_max - rect.re_min) * (i + 0.5) / 9, mid)
                   for i in range(9)]
        val = min(abs(fdf(p)[0]) for p in pts)
        if val > best_val:
            best_mid, best_val = mid, val
    mid = best_mid
    if axis == 0:
        return (
            Window(rect.re_min, mid, rect.im_min, rect.im_max, rect.v_eff, rect.h_eff),
            Window(mid, rect.re_max, rect.im_min, rect.im_max, rect.v_eff, rect.h_eff),
        )
    return (
        Window(rect.re_min, rect.re_max, rect.im_min, mid, rect.v_eff, rect.h_eff),
        Window(rect.re_min, rect.re_max, mid, rect.im_max, rect.v_eff, rect.h_eff),
    )


def localize_all(fdf, rect: Window, max_per_box: int = 1) -> list[LocalizedBox]:
    """Boxes isolating every zero of f in the rectangle (count per box 1).

    Bisection alternates axes until each box has unit count and diameter
    at most 1e-2 (1 + |center|); 60 levels without separation flags the
    box instead (near-multiple zero).
    """
    total = count_zeros(fdf, rect)
    if total == 0:
        return []
    out: list[LocalizedBox] = []

    def recurse(box: Window, count: int, axis: int, depth: int) -> None:
        diam = math.hypot(box.re_max - box.re_min, box.im_max - box.im_min)
        if count <= max_per_box and diam <= 1e-2 * (1.0 + abs(box.center)):
            out.append(LocalizedBox(box, count))
            return
        if depth >= 60:
            out.append(LocalizedBox(box, count, flagged=True))
            return
        left, right = _split(fdf, box, axis)
        cl = count_zeros(fdf, left)
        cr = count_zeros(fdf, right)
        if cl + cr != count:
            # a zero slipped through the cut-placement heuristic; retry the
            # split on the other axis
            left, right = _split(fdf, box, 1 - axis)
            cl = count_zeros(fdf, left)
            cr = count_zeros(fdf, right)
            if cl + cr != count:
                raise NonIntegerCountError(
                    f"count not conserved under subdivision of {box}"
                )
        for sub, c in ((left, cl), (right, cr)):
            if c > 0:
                recurse(sub, c, 1 - axis, depth + 1)

    recurse(rect, total, 0, 0)
    return out


def newton_refine(fdf, z0: complex, tol: float = 1e-12, max_iter: int = 100) -> complex:
    z, _, _ = newton_refine_full(fdf, z0, tol, max_iter)
    return z


def newton_refine_full(fdf, z0: complex, tol: float = 1e-12,
                       max_iter: int = 100) -> tuple[complex, float, int]:
    """Full Newton iteration; returns (root, last step size, iterations)."""
    z = complex(z0)
    escape = 10.0 * (1.0 + abs(z0))
    f, df = fdf(z)
    if df == 0:
        raise NewtonError(f"derivative vanishes at the starting point {z0}")
    last = math.inf
    for it in range(1, max_iter + 1):
        step = f / df
        z = z - step
        last = abs(step)
        if abs(z - z0) > escape:
            raise NewtonError(f"Newton diverged from {z0}")
        f, df = fdf(z)
        if abs(f) <= tol * (1.0 + abs(df) * abs(z)):
            return z, last, it
        if df == 0:
            raise NewtonError(f"derivative vanished at iterate {z}")
    raise NewtonError(f"Newton did not converge from {z0} in {max_iter} iterations")


def certify(fdf, z: complex, eps: float) -> Certificate:
    """Contraction-mapping certificate on the eps-disk around z.

    The |f''| bound is an empirical maximum of central second differences
    over the disk center and 16 boundary points (two directions each),
    inflated by a factor of 2; it is not a rigorous supremum.
    """
    z = complex(z)
    if eps <= 0 or eps > 0.1 * (1.0 + abs(z)):
        raise ValueError(f"eps={eps} outside (0, 0.1 (1+|z|)]")
    a = abs(fdf(z)[0])
    b = abs(fdf(z)[1])
    delta = max(1e-7 * (1.0 + abs(z)), 0.25 * eps)
    d2max = 0.0
    # |f''| is direction independent for holomorphic f, so one stencil
    # direction per sample point suffices
    points = [z] + [z + eps * cmath.exp(2j * math.pi * k / 16.0) for k in range(16)]
    for w in points:
        fp = fdf(w + delta)[0]
        f0 = fdf(w)[0]
        fm = fdf(w - delta)[0]
        d2 = abs(fp - 2.0 * f0 + fm) / (delta * delta)
        d2max = max(d2max, d2)
    return Certificate.from_bounds(a, b, SECOND_DIFF_SAFETY * d2max, eps)


def certify_root(fdf, z: complex, n: int, init_kind: str,
                 last_step: float = 0.0) -> CertifiedRoot | None:
    """Certificate wrapper used by the spectrum pipelines.

    eps grows from the final Newton step but stays well below the
    perturbation scale a fake root would carry.
    """
    eps = min(max(200.0 * last_step, 1e-8 * (1.0 + abs(z))), 1e-4 * (1.0 + abs(z)))
    cert = certify(fdf, z, eps)
    if not cert.passed:
        # one retry with a larger disk; helps when the step underestimates
        cert = certify(fdf, z, min(1e-3, 0.1 * (1.0 + abs(z))))
        if not cert.passed:
            return None
    residual = abs(fdf(z)[0])
    return CertifiedRoot(z, n, residual, cert, init_kind)
