"""Double-double (compensated) arithmetic for cancellation-heavy series.

A double-double value is a pair of floats (hi, lo) with hi + lo representing
the number to ~31 significant digits. Complex double-doubles are 4-tuples
(re_hi, re_lo, im_hi, im_lo). Only the operations needed by the Maclaurin
series in ``specfun`` are provided: add, multiply, and division by an exact
float. Algorithms are the classical error-free transformations of Dekker
and Knuth.
"""

from __future__ import annotations

import math

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ta = _SPLITTER * a
    ahi = ta - (ta - a)
    alo = a - ahi
    tb = _SPLITTER * b
    bhi = tb - (tb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def dd_add(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    s, e = two_sum(x[0], y[0])
    e += x[1] + y[1]
    return quick_two_sum(s, e)


def dd_neg(x: tuple[float, float]) -> tuple[float, float]:
    return -x[0], -x[1]


def dd_mul(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    p, e = two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    return quick_two_sum(p, e)


def dd_mul_f(x: tuple[float, float], f: float) -> tuple[float, float]:
    p, e = two_prod(x[0], f)
    e += x[1] * f
    return quick_two_sum(p, e)


def dd_div_f(x: tuple[float, float], f: float) -> tuple[float, float]:
    q0 = x[0] / f
    p, pe = two_prod(q0, f)
    q1 = ((x[0] - p) - pe + x[1]) / f
    return quick_two_sum(q0, q1)


# -- complex double-double -------------------------------------------------

CDD_ZERO = (0.0, 0.0, 0.0, 0.0)


def cdd_from(z: complex) -> tuple[float, float, float, float]:
    return z.real, 0.0, z.imag, 0.0


def cdd_to(z: tuple[float, float, float, float]) -> complex:
    return complex(z[0] + z[1], z[2] + z[3])


def cdd_add(x, y):
    re = dd_add((x[0], x[1]), (y[0], y[1]))
    im = dd_add((x[2], x[3]), (y[2], y[3]))
    return re[0], re[1], im[0], im[1]


def cdd_mul(x, y):
    a = (x[0], x[1])
    b = (x[2], x[3])
    c = (y[0], y[1])
    d = (y[2], y[3])
    re = dd_add(dd_mul(a, c), dd_neg(dd_mul(b, d)))
    im = dd_add(dd_mul(a, d), dd_mul(b, c))
    return re[0], re[1], im[0], im[1]


def cdd_mul_f(x, f: float):
    re = dd_mul_f((x[0], x[1]), f)
    im = dd_mul_f((x[2], x[3]), f)
    return re[0], re[1], im[0], im[1]


def cdd_div_f(x, f: float):
    re = dd_div_f((x[0], x[1]), f)
    im = dd_div_f((x[2], x[3]), f)
    return re[0], re[1], im[0], im[1]


def cdd_mul_dd(x, d: tuple[float, float]):
    re = dd_mul((x[0], x[1]), d)
    im = dd_mul((x[2], x[3]), d)
    return re[0], re[1], im[0], im[1]


def cdd_abs(x) -> float:
    # magnitude of the hi part; hypot avoids underflow of squared tiny values
    return math.hypot(x[0], x[2])
