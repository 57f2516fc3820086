"""Complex Airy and integer-order Bessel functions, built from scratch.

Everything the resonance search needs reduces to (J_n, H1_n) pairs with
derivatives on a strip around the positive real axis, and to the Airy pair
(Ai, A_-) with A_-(z) = Ai(e^{2 pi i/3} z). Evaluation regimes:

Airy
    |z| <= 9          Maclaurin series in compensated (double-double)
                      arithmetic; the intrinsic cancellation e^{2|eta|}
                      stays below the extended precision.
    |z| > 9           asymptotic series in eta = (2/3) z^{3/2}, truncated
                      at the smallest term; for |arg z| > 2 pi/3 the value
                      is assembled from two rotated evaluations through the
                      three-solution connection identity.

Bessel (order n >= 0, complex z in the documented strip)
    |z| <= 20                     J by compensated power series; Y_0, Y_1 by
                                  compensated series, lifted by forward
                                  recurrence; H1 = J + iY assembled before
                                  rounding so the upper half plane keeps
                                  relative accuracy.
    |z| > 20, n^2 <= |z|, |z|>=40 both Hankel exponential series directly
                                  ("hankel_asymptotic").
    n >= 50, 0.5 <= |z|/n <= 1.25 "olver_uniform": the uniform large-order
                                  (Airy-type) form is evaluated and cross
                                  checked against the recurrence path; the
                                  recurrence values are returned as the more
                                  accurate of the two.
    otherwise                     J by Miller backward recurrence normalized
                                  against e^{-+ iz} sums (sign chosen per
                                  half plane), H1 by forward recurrence from
                                  Hankel-series seeds at orders 0, 1. Both
                                  recurrences preserve the Wronskian pairing
                                  of the seeds ("recurrence").

H1 is never formed as J + iY outside the small-|z| region: in the upper
half plane that difference cancels like e^{2 Im z}, while the forward
recurrence on H1 itself keeps relative accuracy for the recessive solution.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from . import ddarith as dd
from . import langer

__all__ = [
    "AiryPair",
    "BesselPair",
    "AiryZeroTable",
    "SpecfunDomainError",
    "SpecfunRangeError",
    "airy_eval",
    "airy_zeros",
    "bessel_eval",
    "bessel_product",
    "olver_leading",
]


class SpecfunDomainError(ValueError):
    """Argument outside the documented domain (z = 0, outside the strip)."""


class SpecfunRangeError(OverflowError):
    """Values not representable in double precision at this argument."""


# Airy function and slope at the origin, split to double-double precision:
# Ai(0) = 3^(-2/3)/Gamma(2/3), Ai'(0) = -3^(-1/3)/Gamma(1/3).
_AI0 = (0.3550280538878172, 2.05233632436212e-17)
_AIP0 = (-0.2588194037928068, 2.522243111610832e-17)

_SQRT_PI = math.sqrt(math.pi)
_ROT_P = complex(-0.5, 0.8660254037844386467637231707529362)  # e^{2 pi i/3}
_ROT_M = _ROT_P.conjugate()
_EXP_M_PI3 = cmath.exp(-1j * math.pi / 3.0)
_WRONSKIAN_AIRY = cmath.exp(-1j * math.pi / 6.0) / (2.0 * math.pi)
_EULER_GAMMA = 0.5772156649015329

_AIRY_SERIES_RADIUS = 9.0
_BESSEL_SERIES_RADIUS = 20.0
_SWITCH_BAND = 1e-3

# Asymptotic coefficients u_k (for Ai) and v_k (for Ai'), DLMF 9.7.2.
_N_ASY = 40
_U_ASY = [1.0]
for _k in range(1, _N_ASY + 1):
    _U_ASY.append(_U_ASY[-1] * (6 * _k - 5) * (6 * _k - 1) / (72.0 * _k))
_V_ASY = [1.0] + [
    _U_ASY[_k] * (6 * _k + 1) / (1.0 - 6 * _k) for _k in range(1, _N_ASY + 1)
]


@dataclass(frozen=True)
class AiryPair:
    """Ai, A_- and derivatives at one point, with evaluation metadata."""

    ai: complex
    ai_prime: complex
    a_minus: complex
    a_minus_prime: complex
    regime: str  # series | asymptotic
    accuracy_warning: bool = False

    @property
    def wronskian_residual(self) -> float:
        w = self.ai * self.a_minus_prime - self.ai_prime * self.a_minus
        return abs(w - _WRONSKIAN_AIRY)


@dataclass(frozen=True)
class BesselPair:
    """J_n, H1_n and derivatives at one point, with evaluation metadata."""

    j: complex
    j_prime: complex
    h1: complex
    h1_prime: complex
    n: int
    z: complex
    regime: str  # series | recurrence | hankel_asymptotic | olver_uniform
    accuracy_warning: bool = False

    @property
    def wronskian_residual(self) -> float:
        w = self.j * self.h1_prime - self.j_prime * self.h1
        return abs(w - 2j / (math.pi * self.z))


@dataclass(frozen=True)
class AiryZeroTable:
    """First K zeros -zeta_k of Ai on the negative axis, with Ai' there."""

    zeros: list[float] = field(default_factory=list)
    ai_prime_at_zeros: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.zeros)


# --------------------------------------------------------------------------
# Airy internals
# --------------------------------------------------------------------------


def _airy_series(z: complex) -> tuple[complex, complex]:
    # Ai = Ai(0) f + Ai'(0) g with f, g the standard Airy-equation basis;
    # all four sums run in complex double-double. The derivative sums carry
    # exact integer weights and are divided by z only after the (heavily
    # cancelling) constant combination is formed.
    z3 = dd.cdd_mul(dd.cdd_mul(dd.cdd_from(z), dd.cdd_from(z)), dd.cdd_from(z))
    tf = dd.cdd_from(1.0 + 0.0j)
    tg = dd.cdd_from(z)
    f = tf
    g = tg
    fp_num = dd.CDD_ZERO  # sum 3k * tf_k            (= z * f')
    gp_num = dd.cdd_from(z)  # sum (3k+1) * tg_k     (= z * g')
    if z != 0.0:
        for k in range(1, 200):
            tf = dd.cdd_div_f(dd.cdd_mul(tf, z3), (3 * k) * (3 * k - 1))
            tg = dd.cdd_div_f(dd.cdd_mul(tg, z3), (3 * k + 1) * (3 * k))
            f = dd.cdd_add(f, tf)
            g = dd.cdd_add(g, tg)
            fp_num = dd.cdd_add(fp_num, dd.cdd_mul_f(tf, float(3 * k)))
            gp_num = dd.cdd_add(gp_num, dd.cdd_mul_f(tg, float(3 * k + 1)))
            if dd.cdd_abs(tf) + dd.cdd_abs(tg) <= 1e-34 * (
                dd.cdd_abs(f) + dd.cdd_abs(g)
            ):
                break
    ai = dd.cdd_add(dd.cdd_mul_dd(f, _AI0), dd.cdd_mul_dd(g, _AIP0))
    aip_num = dd.cdd_add(dd.cdd_mul_dd(fp_num, _AI0), dd.cdd_mul_dd(gp_num, _AIP0))
    if z == 0.0:
        return dd.cdd_to(ai), complex(_AIP0[0] + _AIP0[1])
    return dd.cdd_to(ai), dd.cdd_to(aip_num) / z


def _airy_asym_scaled(z: complex) -> tuple[complex, complex, complex]:
    # Scaled asymptotics for |arg z| <= 2 pi/3: returns (s, sp, eta) with
    # Ai = s e^{-eta}, Ai' = sp e^{-eta}, eta = (2/3) z^{3/2}.
    rz = cmath.sqrt(z)
    eta = (2.0 / 3.0) * rz * z
    qrz = cmath.sqrt(rz)  # z^{1/4}
    inv_eta = 1.0 / eta
    s = 1.0 + 0.0j
    sp = 1.0 + 0.0j
    term = 1.0 + 0.0j
    prev = abs(term)
    sign = 1.0
    for k in range(1, _N_ASY):
        term = term * inv_eta
        sign = -sign
        tu = sign * _U_ASY[k] * term
        size = abs(tu)
        if size > prev:
            break
        s += tu
        sp += sign * _V_ASY[k] * term
        prev = size
        if size < 1e-18:
            break
    pref = 1.0 / (2.0 * _SQRT_PI)
    return pref * s / qrz, -pref * qrz * sp, eta


def _airy_asym(z: complex) -> tuple[complex, complex]:
    s, sp, eta = _airy_asym_scaled(z)
    if eta.real < -700.0 or eta.real > 730.0:
        raise SpecfunRangeError(f"Airy value overflows double range at z={z}")
    e = cmath.exp(-eta)
    return s * e, sp * e


def _ai_large(z: complex) -> tuple[complex, complex]:
    # asymptotic evaluation for |z| > series radius, any argument
    if abs(cmath.phase(z)) <= 2.0 * math.pi / 3.0 + 1e-14:
        return _airy_asym(z)
    # connection: Ai(z) = -[e^{2 pi i/3} Ai(z e^{2 pi i/3})
    #                       + e^{-2 pi i/3} Ai(z e^{-2 pi i/3})]
    a_p, ap_p = _airy_asym(z * _ROT_P)
    a_m, ap_m = _airy_asym(z * _ROT_M)
    ai = -(_ROT_P * a_p + _ROT_M * a_m)
    aip = -(_ROT_M * ap_p + _ROT_P * ap_m)
    return ai, aip


def _ai_any(z: complex) -> tuple[complex, complex]:
    # (Ai(z), Ai'(z)) anywhere in |z| <= 1e6.
    if abs(z) <= _AIRY_SERIES_RADIUS:
        return _airy_series(z)
    return _ai_large(z)


def airy_eval(z: complex) -> AiryPair:
    """Ai, Ai', A_-, A_-' at a complex point (working range |z| <= 1e6)."""
    z = complex(z)
    if abs(z) > 1e6:
        raise SpecfunRangeError(f"|z| = {abs(z)} beyond the working range 1e6")
    ai, aip = _ai_any(z)
    w = z * _ROT_P
    am, amp = _ai_any(w)
    regime = "series" if abs(z) <= _AIRY_SERIES_RADIUS else "asymptotic"
    warn = False
    if abs(abs(z) - _AIRY_SERIES_RADIUS) <= _SWITCH_BAND and abs(z) > 0:
        # near the switchover both branches are evaluated and compared
        alt = _ai_large(z) if regime == "series" else _airy_series(z)
        scale = abs(ai) + abs(aip) + 1e-300
        warn = abs(alt[0] - ai) + abs(alt[1] - aip) > 1e-8 * scale
    return AiryPair(ai, aip, am, _ROT_P * amp, regime, warn)


def airy_zeros(K: int) -> AiryZeroTable:
    """Table of the first K zeros of Ai (as positive numbers zeta_k)."""
    if not 1 <= K <= 100:
        raise ValueError("K must be between 1 and 100")
    zeros: list[float] = []
    aips: list[float] = []
    for k in range(1, K + 1):
        t = (3.0 * math.pi * (4 * k - 1) / 8.0) ** (2.0 / 3.0)
        # bracket around the asymptotic guess, narrower than the local zero
        # spacing pi/sqrt(t), then bisect + Newton polish
        hw = min(0.5, 0.3 * math.pi / math.sqrt(t))
        lo, hi = t - hw, t + hw
        flo = _ai_any(complex(-lo))[0].real
        fhi = _ai_any(complex(-hi))[0].real
        while flo * fhi > 0.0:
            lo -= 0.1 * hw
            hi += 0.1 * hw
            flo = _ai_any(complex(-lo))[0].real
            fhi = _ai_any(complex(-hi))[0].real
        for _ in range(12):
            mid = 0.5 * (lo + hi)
            fm = _ai_any(complex(-mid))[0].real
            if flo * fm <= 0.0:
                hi, fhi = mid, fm
            else:
                lo, flo = mid, fm
        x = 0.5 * (lo + hi)
        for _ in range(30):
            a, ap = _ai_any(complex(-x))
            step = a.real / ap.real
            x += step
            if abs(step) < 1e-15 * (1.0 + x):
                break
        a, ap = _ai_any(complex(-x))
        zeros.append(x)
        aips.append(ap.real)
    return AiryZeroTable(zeros, aips)


# --------------------------------------------------------------------------
# Bessel internals
# --------------------------------------------------------------------------


def _strip_check(n: int, z: complex) -> None:
    if z == 0:
        raise SpecfunDomainError("H1_n is singular at z = 0")
    if abs(z) > 1e6 or n > 1_000_000:
        raise SpecfunRangeError(f"(n={n}, |z|={abs(z)}) beyond the working range")
    if abs(z.imag) > 50.0 + 10.0 * math.log(1.0 + abs(z.real)):
        raise SpecfunDomainError(f"z={z} outside the documented strip")


def _j_series_cdd(n: int, z: complex):
    # leading term (z/2)^n / n!, interleaving the division to avoid overflow
    half = dd.cdd_mul_f(dd.cdd_from(z), 0.5)
    lead_log = 0.0
    if n > 0:
        lead_log = n * math.log(abs(z) / 2.0) - math.lgamma(n + 1.0)
        if lead_log < -650.0:
            raise SpecfunRangeError(f"J_{n}({z}) underflows double precision")
    term = dd.cdd_from(1.0 + 0.0j)
    for i in range(1, n + 1):
        term = dd.cdd_div_f(dd.cdd_mul(term, half), float(i))
    z2q = dd.cdd_mul(half, half)
    jj = term
    # derivative: J' = (1/z) sum term_k * (n + 2k); the integer weights are
    # exact, the single division by z costs one rounding of the final value
    jp_num = dd.cdd_mul_f(term, float(n))
    for k in range(1, 250):
        term = dd.cdd_div_f(dd.cdd_mul(term, z2q), -float(k * (n + k)))
        jj = dd.cdd_add(jj, term)
        jp_num = dd.cdd_add(jp_num, dd.cdd_mul_f(term, float(n + 2 * k)))
        if dd.cdd_abs(term) <= 1e-34 * dd.cdd_abs(jj):
            break
    jp = dd.cdd_mul(jp_num, dd.cdd_from(1.0 / z))
    return jj, jp


def _y01_series_cdd(z: complex):
    # Y_0 and Y_1 power series (with the log term) in compensated arithmetic
    j0, _ = _j_series_cdd(0, z)
    j1, _ = _j_series_cdd(1, z)
    c = (2.0 / math.pi) * (cmath.log(z / 2.0) + _EULER_GAMMA)
    z2q = dd.cdd_mul(dd.cdd_mul_f(dd.cdd_from(z), 0.5), dd.cdd_mul_f(dd.cdd_from(z), 0.5))
    # sum for Y_0: (2/pi) sum (-1)^{k+1} h_k (z^2/4)^k / (k!)^2; the huge
    # oscillating terms make even the harmonic weights need dd precision
    term = dd.cdd_from(1.0 + 0.0j)
    s0 = dd.CDD_ZERO
    h = (0.0, 0.0)
    for k in range(1, 250):
        term = dd.cdd_div_f(dd.cdd_mul(term, z2q), -float(k * k))
        h = dd.dd_add(h, dd.dd_div_f((1.0, 0.0), float(k)))
        s0 = dd.cdd_add(s0, dd.cdd_mul_dd(term, dd.dd_neg(h)))
        if dd.cdd_abs(term) <= 1e-34 * dd.cdd_abs(s0):
            break
    y0 = dd.cdd_add(dd.cdd_mul(j0, dd.cdd_from(c)), dd.cdd_mul_f(s0, 2.0 / math.pi))
    # sum for Y_1: -(z/2pi) sum (-1)^k (h_k + h_{k+1}) (z^2/4)^k / (k!(k+1)!)
    term = dd.cdd_mul_f(dd.cdd_from(z), 0.5)
    s1 = dd.cdd_mul_f(term, 1.0)  # k = 0: h_0 + h_1 = 1
    hsum = (1.0, 0.0)
    for k in range(1, 250):
        term = dd.cdd_div_f(dd.cdd_mul(term, z2q), -float(k * (k + 1)))
        hsum = dd.dd_add(hsum, dd.dd_div_f((1.0, 0.0), float(k)))
        hsum = dd.dd_add(hsum, dd.dd_div_f((1.0, 0.0), float(k + 1)))
        s1 = dd.cdd_add(s1, dd.cdd_mul_dd(term, hsum))
        if dd.cdd_abs(term) <= 1e-34 * dd.cdd_abs(s1):
            break
    y1 = dd.cdd_add(dd.cdd_mul(j1, dd.cdd_from(c)), dd.cdd_from(-2.0 / (math.pi * z)))
    y1 = dd.cdd_add(y1, dd.cdd_mul_f(s1, -1.0 / math.pi))
    return y0, y1


def _j_series_plain(n: int, z: complex) -> tuple[complex, complex]:
    if n > 0:
        lead_log = n * math.log(abs(z) / 2.0) - math.lgamma(n + 1.0)
        if lead_log < -650.0:
            raise SpecfunRangeError(f"J_{n}({z}) underflows double precision")
    term = 1.0 + 0.0j
    half = 0.5 * z
    for i in range(1, n + 1):
        term *= half / i
    z2q = half * half
    jj = term
    jp_num = term * n
    for k in range(1, 250):
        term *= -z2q / (k * (n + k))
        jj += term
        jp_num += term * (n + 2 * k)
        if abs(term) <= 1e-17 * abs(jj):
            break
    return jj, jp_num / z


def _y01_series_plain(z: complex) -> tuple[complex, complex]:
    j0, _ = _j_series_plain(0, z)
    j1, _ = _j_series_plain(1, z)
    c = (2.0 / math.pi) * (cmath.log(z / 2.0) + _EULER_GAMMA)
    z2q = 0.25 * z * z
    term = 1.0 + 0.0j
    s0 = 0.0 + 0.0j
    h = 0.0
    for k in range(1, 250):
        term *= -z2q / (k * k)
        h += 1.0 / k
        s0 -= term * h
        if abs(term) <= 1e-17 * abs(s0):
            break
    y0 = c * j0 + (2.0 / math.pi) * s0
    term = 0.5 * z
    s1 = term
    hsum = 1.0
    for k in range(1, 250):
        term *= -z2q / (k * (k + 1))
        hsum += 1.0 / k + 1.0 / (k + 1)
        s1 += term * hsum
        if abs(term) <= 1e-17 * abs(s1):
            break
    y1 = c * j1 - 2.0 / (math.pi * z) - s1 / math.pi
    return y0, y1


def _pair_series_plain(n: int, z: complex) -> tuple[complex, complex, complex, complex]:
    # native complex twin of the compensated path, used where the intrinsic
    # cancellation e^{|Re z| + 2 max(Im z, 0)} stays below the 1e-9 targets
    jj, jp = _j_series_plain(n, z)
    y0, y1 = _y01_series_plain(z)
    if n == 0:
        yn, ynp = y0, -y1
    else:
        ykm, yk = y0, y1
        for k in range(1, n):
            ykm, yk = yk, (2.0 * k / z) * yk - ykm
            if abs(yk.real) + abs(yk.imag) > 1e290:
                raise SpecfunRangeError(f"Y_{n}({z}) overflows double precision")
        yn = yk
        ynp = ykm - (n / z) * yk
    return jj, jp, jj + 1j * yn, jp + 1j * ynp


def _pair_series(n: int, z: complex) -> tuple[complex, complex, complex, complex]:
    if abs(z.real) + 2.0 * max(z.imag, 0.0) <= 14.0:
        return _pair_series_plain(n, z)
    jj, jp = _j_series_cdd(n, z)
    y0, y1 = _y01_series_cdd(z)
    # forward recurrence on Y in compensated arithmetic
    if n == 0:
        yn = y0
        ynp = dd.cdd_add(dd.cdd_mul_f(y1, -1.0), dd.CDD_ZERO)  # Y_0' = -Y_1
    else:
        ykm, yk = y0, y1
        for k in range(1, n):
            ykp = dd.cdd_add(dd.cdd_mul(yk, dd.cdd_from(2.0 * k / z)), dd.cdd_mul_f(ykm, -1.0))
            ykm, yk = yk, ykp
            if dd.cdd_abs(yk) > 1e290:
                raise SpecfunRangeError(f"Y_{n}({z}) overflows double precision")
        yn = yk
        ynp = dd.cdd_add(ykm, dd.cdd_mul(yk, dd.cdd_from(-n / z)))
    h1 = dd.cdd_add(jj, _cdd_mul_i(yn))
    h1p = dd.cdd_add(jp, _cdd_mul_i(ynp))
    return dd.cdd_to(jj), dd.cdd_to(jp), dd.cdd_to(h1), dd.cdd_to(h1p)


def _cdd_mul_i(x):
    # multiply a complex double-double by i
    return (-x[2], -x[3], x[0], x[1])


def _hankel_series(n: int, z: complex, kind: int) -> complex:
    # single-exponential Hankel expansion; intrinsic representation of the
    # recessive solution, so relative accuracy holds in both half planes
    sgn = 1.0 if kind == 1 else -1.0
    omega = z - (0.5 * n + 0.25) * math.pi
    pref = cmath.sqrt(2.0 / (math.pi * z)) * cmath.exp(sgn * 1j * omega)
    s = 1.0 + 0.0j
    term = 1.0 + 0.0j
    prev = 1.0
    ratio_base = sgn * 1j / (8.0 * z)
    four_n2 = 4.0 * n * n
    for k in range(1, 60):
        term = term * ratio_base * ((four_n2 - (2 * k - 1) ** 2) / k)
        size = abs(term)
        if size > prev:
            break
        s += term
        prev = size
        if size < 1e-18 * abs(s):
            break
    return pref * s


def _miller_j(n: int, z: complex) -> tuple[complex, complex]:
    # backward recurrence, normalized by e^{-iz} (upper half plane) or
    # e^{iz} (lower); returns (J_n, J_{n+1})
    n0 = max(n, int(abs(z)) + 1)
    start = n0 + int(14.0 * n0 ** (1.0 / 3.0)) + 16
    if z.imag >= 0.0:
        wgt = -1j
        norm_target = cmath.exp(-1j * z)
    else:
        wgt = 1j
        norm_target = cmath.exp(1j * z)
    pkp = 0.0 + 0.0j
    pk = 1e-280 + 0.0j
    ssum = 0.0 + 0.0j
    jn = jnp1 = 0.0 + 0.0j
    wk = wgt**start
    inv_wgt = 1.0 / wgt
    two_over_z = 2.0 / z
    for k in range(start, 0, -1):
        if k == n + 1:
            jnp1 = pk
        if k == n:
            jn = pk
        ssum += wk * pk
        wk *= inv_wgt
        pkm = (k * two_over_z) * pk - pkp
        pkp, pk = pk, pkm
        if abs(pk.real) + abs(pk.imag) > 1e250:
            pk *= 1e-250
            pkp *= 1e-250
            ssum *= 1e-250
            jn *= 1e-250
            jnp1 *= 1e-250
    if n == 0:
        jn = pk
    ssum = 2.0 * ssum + pk  # k = 0 term has weight 1
    scale = norm_target / ssum
    return jn * scale, jnp1 * scale


def bessel_sequence(n_max: int, z: complex) -> tuple[list, list]:
    """(J_k, H1_k) for k = 0..n_max+1 in one Miller/forward pass each.

    For |z| > 20 in the right half plane only; entries are None from the
    first unrepresentable order onward (deep elliptic under/overflow).
    One call costs about as much as two single-order evaluations, so the
    spectrum scans share it across all modes of a window.
    """
    z = complex(z)
    if abs(z) <= _BESSEL_SERIES_RADIUS or z.real < 0.0:
        raise ValueError("sequence path serves |z| > 20, Re z >= 0 only")
    _strip_check(0, z)
    kmax = n_max + 1
    n0 = max(kmax, int(abs(z)) + 1)
    start = n0 + int(14.0 * n0 ** (1.0 / 3.0)) + 16
    if z.imag >= 0.0:
        wgt = -1j
        norm_target = cmath.exp(-1j * z)
    else:
        wgt = 1j
        norm_target = cmath.exp(1j * z)
    raw: list = [None] * (kmax + 1)
    scales = [0] * (kmax + 1)  # number of 1e-250 rescales at capture time
    pkp = 0.0 + 0.0j
    pk = 1e-280 + 0.0j
    ssum = 0.0 + 0.0j
    wk = wgt**start
    inv_wgt = 1.0 / wgt
    two_over_z = 2.0 / z
    nscale = 0
    for k in range(start, 0, -1):
        if k <= kmax:
            raw[k] = pk
            scales[k] = nscale
        ssum += wk * pk
        wk *= inv_wgt
        pkm = (k * two_over_z) * pk - pkp
        pkp, pk = pk, pkm
        if abs(pk.real) + abs(pk.imag) > 1e250:
            pk *= 1e-250
            pkp *= 1e-250
            ssum *= 1e-250
            nscale += 1
    raw[0] = pk
    scales[0] = nscale
    ssum = 2.0 * ssum + pk
    scale = norm_target / ssum
    js: list = [None] * (kmax + 1)
    for k in range(kmax + 1):
        if raw[k] is None:
            continue
        val = raw[k] * scale
        ok = True
        for _ in range(nscale - scales[k]):  # rescales applied after capture
            val *= 1e-250
            if abs(val.real) + abs(val.imag) < 1e-290:
                ok = False
                break
        js[k] = val if ok and abs(val) > 1e-290 else None
    # Hankel side: forward recurrence on the recessive solution
    kind = 1 if z.imag >= 0.0 else 2
    hs_raw: list = [_hankel_series(0, z, kind), _hankel_series(1, z, kind)]
    for k in range(1, kmax):
        hn = (2.0 * k / z) * hs_raw[k] - hs_raw[k - 1]
        if abs(hn.real) + abs(hn.imag) > 1e290:
            hs_raw.append(None)
            break
        hs_raw.append(hn)
    hs: list = [None] * (kmax + 1)
    for k in range(min(len(hs_raw), kmax + 1)):
        if hs_raw[k] is None:
            break
        if kind == 1:
            hs[k] = hs_raw[k]
        else:
            hs[k] = 2.0 * js[k] - hs_raw[k] if js[k] is not None else None
    return js, hs


def _hankel_forward(n: int, z: complex, kind: int) -> tuple[complex, complex]:
    # (H_n, H_{n+1}) by forward recurrence from Hankel seeds at orders 0, 1.
    # Only stable for the solution that is recessive on the oscillatory
    # plateau: H1 in the upper half plane, H2 in the lower.
    h0 = _hankel_series(0, z, kind)
    h1 = _hankel_series(1, z, kind)
    if n == 0:
        return h0, h1
    hkm, hk = h0, h1
    for k in range(1, n + 1):
        hkp = (2.0 * k / z) * hk - hkm
        hkm, hk = hk, hkp
        if abs(hk.real) + abs(hk.imag) > 1e290:
            raise SpecfunRangeError(f"H_{n}({z}) overflows double precision")
    return hkm, hk


def _pair_recurrence(n: int, z: complex) -> tuple[complex, complex, complex, complex]:
    jn, jnp1 = _miller_j(n, z)
    nz = n / z
    jpn = nz * jn - jnp1
    if z.imag >= 0.0:
        h1n, h1np1 = _hankel_forward(n, z, 1)
        return jn, jpn, h1n, nz * h1n - h1np1
    h2n, h2np1 = _hankel_forward(n, z, 2)
    h2pn = nz * h2n - h2np1
    return jn, jpn, 2.0 * jn - h2n, 2.0 * jpn - h2pn


def _pair_hankel(n: int, z: complex) -> tuple[complex, complex, complex, complex]:
    h1n = _hankel_series(n, z, 1)
    h1np1 = _hankel_series(n + 1, z, 1)
    h2n = _hankel_series(n, z, 2)
    h2np1 = _hankel_series(n + 1, z, 2)
    jn = 0.5 * (h1n + h2n)
    jnp1 = 0.5 * (h1np1 + h2np1)
    nz = n / z
    return jn, nz * jn - jnp1, h1n, nz * h1n - h1np1


def _pair_olver(n: int, z: complex) -> tuple[complex, complex, complex, complex]:
    # leading term of the uniform large-order form, for all four values
    w = z / n
    zv = langer.zeta_of(w)
    g, dlog = langer.olver_weight(w)
    p4 = g**0.25
    u = n ** (2.0 / 3.0) * zv.zeta
    ai, aip = _ai_any(u)
    am_raw, amp_raw = _ai_any(u * _ROT_P)
    am, amp = am_raw, _ROT_P * amp_raw
    ninv13 = n ** (-1.0 / 3.0)
    cj = p4 * ninv13
    ch = 2.0 * _EXP_M_PI3 * p4 * ninv13
    dz = zv.dzeta_dz
    jn = cj * ai
    h1n = ch * am
    jp = cj * (0.25 * dlog * ai / n + aip * dz * ninv13)
    h1p = ch * (0.25 * dlog * am / n + amp * dz * ninv13)
    return jn, jp, h1n, h1p


def olver_leading(n: int, z: complex) -> complex:
    """Leading uniform large-order approximation to J_n(z) (z near n)."""
    w = complex(z) / n
    zv = langer.zeta_of(w)
    g, _ = langer.olver_weight(w)
    u = n ** (2.0 / 3.0) * zv.zeta
    ai, _ = _ai_any(u)
    return g**0.25 * ai * n ** (-1.0 / 3.0)


def _pair_left_half(n: int, z: complex) -> tuple[complex, complex, complex, complex]:
    # Left half plane via half-circuit continuation *through the upper half*
    # (the branch on which resonances continue; it makes the secular
    # function satisfy F(-conj z) = conj F(z) exactly):
    #   Im z >= 0:  H1_n(z) = -(-1)^n H2_n(-z)          (-z in the lower half)
    #   Im z <  0:  H1_n(z) = -(-1)^n conj(H1_n(-conj z))
    # In the third quadrant this is NOT the principal branch (which would
    # continue from below); the search never consumes that region.
    sgn = -1.0 if n % 2 else 1.0
    w = -z
    jw, jwp1 = _miller_j(n, w)
    nw = n / w
    jpw = nw * jw - jwp1
    h2, h2p1 = _hankel_forward(n, w, 2)
    h2p = nw * h2 - h2p1
    return sgn * jw, -sgn * jpw, -sgn * h2, sgn * h2p


def bessel_eval(n: int, z: complex, validate: bool = False) -> BesselPair:
    """J_n, H1_n and derivatives; negative orders fold via (-1)^n symmetry."""
    z = complex(z)
    sign = 1.0
    if n < 0:
        n = -n
        if n % 2:
            sign = -1.0
    _strip_check(n, z)
    if z.real < 0.0 and z.imag == 0.0:
        raise SpecfunDomainError("H1_n has its branch cut on the negative real axis")
    if z.real < 0.0 and z.imag < 0.0:
        # third quadrant: continuation through the upper half, by conjugate
        # reflection of the first-quadrant pair (any evaluation regime)
        inner = bessel_eval(n, -z.conjugate())
        s = sign * (-1.0 if n % 2 else 1.0)
        return BesselPair(
            s * inner.j.conjugate(),
            -s * inner.j_prime.conjugate(),
            -s * inner.h1.conjugate(),
            s * inner.h1_prime.conjugate(),
            n, z, inner.regime, inner.accuracy_warning,
        )
    az = abs(z)
    warn = False
    if z.real < 0.0 and az > _BESSEL_SERIES_RADIUS:
        vals = _pair_left_half(n, z)
        regime = "recurrence"
    elif az <= _BESSEL_SERIES_RADIUS:
        vals = _pair_series(n, z)
        regime = "series"
        if abs(az - _BESSEL_SERIES_RADIUS) <= _SWITCH_BAND:
            alt = _pair_recurrence(n, z)
            scale = sum(abs(v) for v in vals) + 1e-300
            warn = sum(abs(a - b) for a, b in zip(alt, vals)) > 1e-7 * scale
    elif n >= 50 and 0.5 <= az / n <= 1.25:
        vals = _pair_recurrence(n, z)
        regime = "olver_uniform"
        try:
            alt = _pair_olver(n, z)
            scale = sum(abs(v) for v in vals) + 1e-300
            # leading-order form: agreement degrades like 1/n
            warn = sum(abs(a - b) for a, b in zip(alt, vals)) > 50.0 / n * scale
        except (SpecfunRangeError, langer.LangerDomainError):
            warn = True
    elif n * n <= az and az >= 40.0:
        vals = _pair_hankel(n, z)
        regime = "hankel_asymptotic"
    else:
        vals = _pair_recurrence(n, z)
        regime = "recurrence"
    j, jp, h1, h1p = (sign * v for v in vals)
    for v in (j, jp, h1, h1p):
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise SpecfunRangeError(f"non-finite Bessel value at (n={n}, z={z})")
    pair = BesselPair(j, jp, h1, h1p, n, z, regime, warn)
    if validate:
        res = pair.wronskian_residual
        tol = 1e-9 * (2.0 / (math.pi * az) + abs(j * h1p))
        if res > tol:
            raise SpecfunRangeError(
                f"Wronskian residual {res:.3e} exceeds tolerance at (n={n}, z={z})"
            )
    return pair


def _product_elliptic(n: int, z: complex) -> tuple[complex, complex]:
    # deep elliptic limit n >> |z|: J_n H1_n = -i/(pi n sqrt(1-w^2)),
    # Debye 1/n corrections cancel in the product
    w = z / n
    root = cmath.sqrt(1.0 - w * w)
    p = -1j / (math.pi * n * root)
    dp = -1j * z / (math.pi * n**3 * root**3)
    return p, dp


def _product_olver_scaled(n: int, z: complex) -> tuple[complex, complex]:
    # product Airy form with both factors kept in scaled (exponent-free)
    # representation; used when J and H1 under/overflow individually
    w = z / n
    zv = langer.zeta_of(w)
    g, dlog = langer.olver_weight(w)
    u = n ** (2.0 / 3.0) * zv.zeta
    v = u * _ROT_P
    if abs(u) <= _AIRY_SERIES_RADIUS:
        ai, aip = _airy_series(u)
        am, amp_raw = _airy_series(v)
        prod = ai * am
        dprod = aip * am + ai * _ROT_P * amp_raw
    else:
        sa, sap, eta_u = _airy_asym_scaled(u)
        sb, sbp, eta_v = _airy_asym_scaled(v)
        expo = cmath.exp(-(eta_u + eta_v))
        prod = sa * sb * expo
        dprod = (sap * sb + sa * _ROT_P * sbp) * expo
    c = 2.0 * _EXP_M_PI3 * g**0.5 / n ** (2.0 / 3.0)
    p = c * prod
    dp = c * (0.5 * dlog * prod / n + dprod * zv.dzeta_dz * n ** (-1.0 / 3.0))
    return p, dp


def bessel_product(n: int, z: complex) -> tuple[complex, complex]:
    """p = J_n(z) H1_n(z) and dp/dz, valid even where the factors overflow."""
    z = complex(z)
    n = abs(n)  # the product is exactly even in the order
    if n >= 1 and abs(z) <= 0.05 * n:
        _strip_check(n, z)
        return _product_elliptic(n, z)
    try:
        pair = bessel_eval(n, z)
    except SpecfunRangeError:
        if n >= 20:
            return _product_olver_scaled(n, z)
        raise
    p = pair.j * pair.h1
    dp = pair.j_prime * pair.h1 + pair.j * pair.h1_prime
    return p, dp
