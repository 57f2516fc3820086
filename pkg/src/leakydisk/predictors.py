"""Asymptotic predictions for resonance locations and resonance-free bounds.

Three families of initializers seed the Newton search and classify the
computed spectra:

  normal       modes concentrating normal to the boundary; quarter-wave
               lattice Re lambda ~ pi(4k + 2n + 1)/4 with a logarithmic
               depth shift,
  glancing     bands indexed by Airy zeros for modes with n ~ Re lambda,
  away         modes a polynomial distance from glancing, a one-parameter
               family per mode indexed by k.

The band-depth constant C(V0, N) and the resonance-free boundary curves
(logarithmic for weak frequency dependence, polynomial bands for strong)
are exposed as numeric curves for overlays and verification.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from . import langer, specfun
from .potential import PotentialSpec
from .secular import Window

__all__ = [
    "PredictedResonance",
    "BandConstant",
    "band_constant",
    "free_region_bound",
    "normal_lattice",
    "glancing_band",
    "away_glancing",
    "band_condition_residual",
]

N_BANDS_TRACKED = 20

_B_COEFF = 2.0 * math.pi * cmath.exp(-5j * math.pi / 6.0)
_ROT = cmath.exp(-5j * math.pi / 6.0)


@dataclass(frozen=True)
class PredictedResonance:
    lambda0: complex
    kind: str  # normal | glancing_band | away_glancing
    n: int
    k_or_N: int
    expected_error: float
    valid: bool = True


@dataclass(frozen=True)
class BandConstant:
    V0: float
    N: int
    value: float


@lru_cache(maxsize=4)
def _zero_table(K: int = 100):
    return specfun.airy_zeros(K)


@lru_cache(maxsize=256)
def _airy_at_zero(N: int):
    table = _zero_table()
    zN = table.zeros[N - 1]
    pair = specfun.airy_eval(complex(-zN))
    return zN, pair.ai_prime.real, pair.a_minus, pair.a_minus_prime


def band_constant(V0: float, N: int, radius: float = 1.0) -> BandConstant:
    """Band-depth constant for the N-th glancing band.

    For a disk of radius R the constant is the unit-disk one with V0
    replaced by R^{2/3} V0 (depth scales with curvature^{4/3}).
    """
    if V0 <= 0 or radius <= 0:
        raise ValueError("V0 and radius must be positive")
    if not 1 <= N <= 100:
        raise ValueError("band index must lie in [1, 100]")
    v_equiv = radius ** (2.0 / 3.0) * V0
    zN, aip, am, _ = _airy_at_zero(N)
    value = 2.0 ** (1.0 / 3.0) / (8.0 * math.pi**2 * v_equiv**2 * abs(am**3 * aip))
    return BandConstant(V0, N, value)


def free_region_bound(pot: PotentialSpec, re_lambda: float) -> tuple[float, list[float]]:
    """Resonance-free depth curves at a given frequency, in -Im lambda.

    Returns the logarithmic bound ((1-alpha)/2) log(Re) - (1/2) log(V0/2)
    and the band depths C(V0,N) Re^{5/3 - 2 alpha} for the tracked bands.
    """
    if re_lambda < 5.0:
        raise ValueError("bound curves are emitted for Re lambda >= 5")
    log_bound = 0.5 * (1.0 - pot.alpha) * math.log(re_lambda) - 0.5 * math.log(pot.V0 / 2.0)
    expo = 5.0 / 3.0 - 2.0 * pot.alpha
    bands = [
        band_constant(pot.V0, N).value * re_lambda**expo
        for N in range(1, N_BANDS_TRACKED + 1)
    ]
    return log_bound, bands


def normal_lattice(pot: PotentialSpec, window: Window, n: int) -> list[PredictedResonance]:
    """Quarter-wave lattice initializers for mode n inside the window."""
    if n < 0:
        raise ValueError("mode index must be nonnegative")
    if n * window.h_eff > 0.9:
        raise ValueError(f"mode n={n} too close to glancing for the normal family")
    out = []
    qw = math.pi / 4.0
    k_lo = int(math.floor((window.re_min / qw - 2 * n - 1) / 4.0)) - 1
    k_hi = int(math.ceil((window.re_max / qw - 2 * n - 1) / 4.0)) + 1
    for k in range(max(k_lo, 0), k_hi + 1):
        m4 = 4 * k + 2 * n + 1
        lat = qw * m4
        if not window.re_min <= lat <= window.re_max:
            continue
        eps0 = -0.5j * cmath.log(1j * math.pi * m4 / (2.0 * window.v_eff) - 1.0)
        lam0 = lat + eps0
        out.append(
            PredictedResonance(lam0, "normal", n, k, expected_error=5.0 / lam0.real)
        )
    return out


def glancing_band(pot: PotentialSpec, window: Window, n: int, N: int) -> PredictedResonance:
    """Band-N initializer for a mode tangent to the boundary (n ~ Re lambda).

    Valid as a band when alpha > 2/3; outside that range the prediction is
    still produced but marked invalid.
    """
    h = window.h_eff
    if abs(n * h - 1.0) > 0.1:
        raise ValueError(f"mode n={n} is not near glancing for this window")
    h1 = 1.0 / n
    zN, aip, am, amp = _airy_at_zero(N)
    h123 = h1 ** (2.0 / 3.0)
    phi_hat = langer.phi_at_zeta(n, h, pot, -h123 * zN).phi
    eps0 = h123 / (_B_COEFF * phi_hat * am * aip)
    eps1 = -(eps0 * eps0 / h123) * (amp / am)
    zeta_pred = -h123 * zN + eps0 + eps1
    valid = pot.alpha > 2.0 / 3.0
    if abs(eps0 + eps1) > 0.5 * h123 * zN or abs(zeta_pred) > 1.0:
        # corrections exceed the leading term (happens for weak frequency
        # dependence); fall back to the leading band location, flagged
        zeta_pred = -h123 * zN
        valid = False
    w = langer.z_of_zeta(zeta_pred)
    lam0 = n * w
    # dominant remainder: next order of the eps-expansion, scale
    # |eps0| du^2 with du = |eps0|/h123 the Airy-argument shift
    du = abs(eps0) / h123
    err = 3.0 * n * abs(eps0) * du * du + 10.0 * n ** (-5.0 / 3.0)
    return PredictedResonance(
        lam0,
        "glancing_band",
        n,
        N,
        expected_error=err,
        valid=valid,
    )


def away_glancing(pot: PotentialSpec, window: Window, n: int, k: int) -> PredictedResonance:
    """Initializer for the k-th mode concentrating near (not at) glancing.

    The construction is quantitatively accurate when the distance exponent
    delta = 1 - log m / log h1 exceeds (3 alpha - 2)/4; outside that range
    the prediction is returned with valid=False.
    """
    if k < 1:
        raise ValueError("branch index k starts at 1")
    h = window.h_eff
    h1 = 1.0 / n
    m = 0.375 * math.pi * h1 * (4 * k - 1)
    zeta_m = -m ** (2.0 / 3.0)
    if abs(zeta_m) > 1.05:
        raise langer.LangerDomainError(
            f"branch k={k} leaves the inversion disk (|zeta|={abs(zeta_m):.3f})"
        )
    phi_m = langer.phi_at_zeta(n, h, pot, zeta_m).phi
    q = 2.0 * m ** (1.0 / 3.0) / (h1 ** (1.0 / 3.0) * phi_m)
    # phase from the oscillatory Airy product: e^{(4i/3h1) eps} = 1 - iQ
    eps0 = -0.75j * h1 * cmath.log(1.0 - 1j * q)
    zeta0 = -((m + eps0) ** (2.0 / 3.0))
    w = langer.z_of_zeta(zeta0)
    lam0 = n * w
    delta = 1.0 - math.log(m) / math.log(h1)
    err = 2.0 * n * m ** (-1.0 / 3.0) * abs(eps0) * (h1 / m + abs(eps0) / m) + 5.0 / n
    return PredictedResonance(
        lam0,
        "away_glancing",
        n,
        k,
        expected_error=err,
        valid=delta > (3.0 * pot.alpha - 2.0) / 4.0,
    )


def band_center_im_zeta(pot: PotentialSpec, n: int, h: float, N: int) -> float:
    """Im zeta of the N-th glancing band center for mode n at parameter h."""
    h1 = 1.0 / n
    zN, aip, am, _ = _airy_at_zero(N)
    h123 = h1 ** (2.0 / 3.0)
    phi_hat = langer.phi_at_zeta(n, h, pot, -h123 * zN).phi
    v = (_ROT * am).real
    return h123 / (8.0 * math.pi**2 * abs(phi_hat) ** 2 * v**3 * aip)


def band_condition_residual(pot: PotentialSpec, n: int, lam: complex) -> float:
    """Dimensionless distance from lambda to the nearest glancing band.

    min over the tracked bands of |Im zeta - center_N| / h^{2 alpha - 2/3}
    with h = 1/Re lambda; small values classify a root into a band.
    """
    lam = complex(lam)
    if lam.real <= 0 or n < 0:
        raise ValueError("need Re lambda > 0 and n >= 0")
    if n == 0:
        return math.inf  # the radial mode is never glancing
    h = 1.0 / lam.real
    w = lam / n
    im_zeta = langer.zeta_of(w).zeta.imag
    scale = h ** (2.0 * pot.alpha - 2.0 / 3.0)
    best = math.inf
    for N in range(1, N_BANDS_TRACKED + 1):
        try:
            center = band_center_im_zeta(pot, n, h, N)
        except langer.LangerDomainError:
            break
        best = min(best, abs(im_zeta - center) / scale)
    return best
