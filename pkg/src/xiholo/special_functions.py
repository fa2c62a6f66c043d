"""Building blocks: theta sums, log-gamma, zeta, E_z(a), F(x) and Bessel kernels.

Complex arguments are plain Python ``complex`` values (or numpy arrays of them);
:func:`as_point` validates that they are finite.  The ``*_array`` helpers are
vectorised versions used inside the quadrature layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, NonConvergence, PoleError
from .quadrature import gk15

PI = math.pi
LOG_PI = math.log(PI)
LOG_2PI = math.log(2 * PI)
LN2 = math.log(2.0)

PSI_TERM_CAP = 10_000


@dataclass(frozen=True)
class SeriesEvaluation:
    value: float | complex
    terms_used: int
    tail_bound: float


def as_point(z, name: str = "argument") -> complex:
    """Coerce ``z`` to ``complex``, rejecting NaN and infinities."""
    w = complex(z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError(f"{name} must be finite, got {z!r}")
    return w


# ---------------------------------------------------------------------------
# theta sums
# ---------------------------------------------------------------------------

def _theta_moment(y: float, power: int, scale: float, tol: float,
                  terms: int | None = None) -> SeriesEvaluation:
    """Sum ``scale * sum_n n**power * exp(-pi n^2 y)`` with a geometric tail bound."""
    if not y > 0:
        raise DomainError(f"theta sums need a positive argument, got {y!r}")
    if not tol > 0:
        raise DomainError("tol must be positive")

    def term(n):
        return float(n) ** power * math.exp(-PI * n * n * y)

    def tail_after(n):
        # ratio of consecutive terms beyond n is at most r (it decreases in n)
        r = ((n + 2) / (n + 1)) ** power * math.exp(-PI * (2 * n + 3) * y)
        if r >= 1.0:
            return math.inf
        return scale * term(n + 1) / (1.0 - r)

    vals = []
    n = 0
    while True:
        n += 1
        vals.append(term(n))
        if terms is not None:
            if n >= terms:
                break
        elif tail_after(n) <= tol:
            break
        if n >= PSI_TERM_CAP:
            raise NonConvergence(
                f"theta sum at x={y!r} needs more than {PSI_TERM_CAP} terms; "
                "apply the Jacobi transformation instead")
    return SeriesEvaluation(scale * math.fsum(vals), n, tail_after(n))


def psi(x: float, tol: float = 1e-16, terms: int | None = None) -> SeriesEvaluation:
    """psi(x) = sum_{n>=1} exp(-pi n^2 x), i.e. (theta_3(0, e^{-pi x}) - 1) / 2."""
    return _theta_moment(float(x), 0, 1.0, tol, terms)


def psi_derivative(x: float, order: int, tol: float = 1e-16,
                   terms: int | None = None) -> SeriesEvaluation:
    """Term-wise derivative sum_n (-pi n^2)^k exp(-pi n^2 x) for k in {1, 2}."""
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, got {order!r}")
    res = _theta_moment(float(x), 2 * order, PI ** order, tol, terms)
    sign = -1.0 if order == 1 else 1.0
    return SeriesEvaluation(sign * res.value, res.terms_used, res.tail_bound)


def psi_array(x, order: int = 0) -> np.ndarray:
    """Vectorised psi and its derivatives, accurate to rounding for x >= 0.05."""
    x = np.asarray(x, dtype=float)
    xmin = float(np.min(x)) if x.size else 1.0
    if xmin <= 0:
        raise DomainError("psi_array needs positive arguments")
    nmax = int(math.ceil(math.sqrt(45.0 / (PI * xmin)))) + 2
    if nmax > PSI_TERM_CAP:
        raise NonConvergence(f"psi_array: x={xmin!r} too small for direct summation")
    n2 = np.arange(1, nmax + 1, dtype=float) ** 2
    e = np.exp(-PI * x[..., None] * n2)
    if order:
        e = e * (-PI * n2) ** order
    return e.sum(axis=-1)


def F_mellin(x: float, tol: float = 1e-15) -> SeriesEvaluation:
    """F(x) = 4 pi^2 x^4 sum n^4 e^{-pi n^2 x^2} - 6 pi x^2 sum n^2 e^{-pi n^2 x^2}.

    This is the inverse Mellin transform of xi along a line Re t = c > 1.
    """
    x = float(x)
    if not x > 0:
        raise DomainError(f"F_mellin needs x > 0, got {x!r}")
    y = x * x
    s4 = _theta_moment(y, 4, 4 * PI ** 2 * y * y, tol / 2)
    s2 = _theta_moment(y, 2, 6 * PI * y, tol / 2)
    return SeriesEvaluation(s4.value - s2.value, max(s4.terms_used, s2.terms_used),
                            s4.tail_bound + s2.tail_bound)


# ---------------------------------------------------------------------------
# log-gamma (Lanczos g=7, n=9) with reflection
# ---------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])


def _lanczos_log_gamma(z: np.ndarray) -> np.ndarray:
    # valid for Re z >= 1/2
    zm = z - 1.0
    acc = np.full_like(zm, _LANCZOS[0])
    for i in range(1, 9):
        acc = acc + _LANCZOS[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return 0.5 * LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def _sinpi(z: np.ndarray) -> np.ndarray:
    # reduce the real part first so large Re z keeps full precision
    x = np.real(z)
    r = x - 2.0 * np.round(x / 2.0)
    return np.sin(PI * (r + 1j * np.imag(z)))


def log_gamma_array(z) -> np.ndarray:
    """Principal-branch log Gamma for arrays of complex arguments."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = _lanczos_log_gamma(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        if np.any((zl.imag == 0) & (zl.real == np.round(zl.real))):
            raise PoleError("log_gamma has poles at the non-positive integers")
        # branch correction keeps the imaginary part continuous off the negative axis
        corr = np.copysign(2 * PI, zl.imag) * np.floor(0.5 * zl.real + 0.25)
        out[left] = (LOG_PI + 1j * corr) - np.log(_sinpi(zl)) - _lanczos_log_gamma(1.0 - zl)
    return out


def log_gamma(z) -> complex:
    """Principal branch of log Gamma(z); reflection handles Re z < 1/2."""
    z = as_point(z)
    if z.imag == 0 and z.real <= 0 and z.real == round(z.real):
        raise PoleError(f"log_gamma pole at {z.real:g}")
    return complex(log_gamma_array(np.array([z]))[0])


# ---------------------------------------------------------------------------
# zeta via the alternating (eta) series with Borwein acceleration
# ---------------------------------------------------------------------------

_LOG_BORWEIN = math.log(3 + math.sqrt(8))


@lru_cache(maxsize=64)
def _borwein_weights(n: int) -> np.ndarray:
    """(-1)^k (d_n - d_k) / d_n for k = 0..n-1, computed in exact rationals."""
    d = []
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction(n * math.factorial(n + i - 1) * 4 ** i,
                        math.factorial(n - i) * math.factorial(2 * i))
        d.append(acc)
    dn = d[n]
    return np.array([(-1) ** k * float((dn - d[k]) / dn) for k in range(n)])


def eta_terms_needed(t_abs: float) -> int:
    """Terms giving ~1e-16 relative error at height |Im s| = t_abs."""
    t_abs = abs(t_abs)
    need = (PI * t_abs / 2 + math.log(3 * (1 + 2 * t_abs)) + 37.0) / _LOG_BORWEIN
    return max(24, int(math.ceil(need)) + 2)


def eta_array(s, chunk: int = 2048) -> np.ndarray:
    """Dirichlet eta(s) = sum (-1)^{k} (k+1)^{-s}, accelerated; needs Re s > 0."""
    s = np.asarray(s, dtype=complex)
    flat = s.ravel()
    out = np.empty_like(flat)
    if flat.size == 0:
        return out.reshape(s.shape)
    if np.any(flat.real <= 0):
        raise DomainError("eta/zeta series requires Re s > 0")
    n = eta_terms_needed(float(np.max(np.abs(flat.imag))))
    w = _borwein_weights(n)
    logk = np.log(np.arange(1, n + 1, dtype=float))
    for lo in range(0, flat.size, chunk):
        part = flat[lo:lo + chunk]
        out[lo:lo + chunk] = np.exp(-part[:, None] * logk[None, :]) @ w
    return out.reshape(s.shape)


def _one_minus_pow2(s: np.ndarray) -> np.ndarray:
    # 1 - 2^{1-s} = -expm1(u) with u = (1-s) ln 2, written via sinh to keep digits near s=1
    u = (1.0 - s) * LN2
    return -2.0 * np.exp(u / 2) * np.sinh(u / 2)


def zeta_pole_factor(s) -> np.ndarray:
    """(s - 1) / (1 - 2^{1-s}), finite at s = 1 where it equals 1/ln 2."""
    s = np.asarray(s, dtype=complex)
    at_pole = s == 1
    denom = _one_minus_pow2(np.where(at_pole, 2.0, s))
    return np.where(at_pole, 1.0 / LN2, (s - 1.0) / denom)


def zeta(s) -> complex:
    """Riemann zeta for Re s > 0, s != 1."""
    s = as_point(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s.real <= 0:
        raise DomainError("zeta is implemented for Re s > 0 only")
    arr = np.array([s])
    return complex((eta_array(arr) / _one_minus_pow2(arr))[0])


# ---------------------------------------------------------------------------
# generalised exponential integral E_z(a) = int_1^inf t^{-z} e^{-a t} dt
# ---------------------------------------------------------------------------

def _E_tail_bound(re_z: float, a: float, T: float) -> float:
    p = -re_z
    if p <= 0:
        return T ** (-re_z) * math.exp(-a * T) / a
    if a <= p / T:
        return math.inf
    return T ** p * math.exp(-a * T) / (a - p / T)


def exp_integral_E(z, a: float, tol: float = 1e-15) -> complex:
    """E_z(a) for complex order z and a > 0, to absolute accuracy ``tol``.

    Integrates on [1, T] in the variable v = ln t (which makes the oscillation
    from Im z uniform) and bounds the discarded tail analytically.
    """
    z = as_point(z, "order")
    a = float(a)
    if not a > 0:
        raise DomainError(f"exp_integral_E needs a > 0, got {a!r}")
    if z == 0:
        return complex(math.exp(-a) / a)
    T = 1.0 + 60.0 / a
    while _E_tail_bound(z.real, a, T) > 0.1 * tol:
        T *= 1.5
        if T > 1e6:
            raise NonConvergence("exp_integral_E: tail bound does not close")
    one_minus_z = 1.0 - z

    def f(v):
        return np.exp(one_minus_z * v - a * np.exp(v))

    width = PI / abs(z.imag) if z.imag else None
    res = gk15(f, 0.0, math.log(T), tol=0.9 * tol, initial_panels=4, max_width=width)
    return res.value


# ---------------------------------------------------------------------------
# Bessel kernels J0 (real) and I0 (complex)
# ---------------------------------------------------------------------------

_SERIES_RADIUS = 8.0


def _bessel0_series(w: np.ndarray, sign: float) -> np.ndarray:
    # sum (sign w^2/4)^k / (k!)^2 ; 40 terms are ample for |w| <= 8
    q = sign * w * w / 4.0
    term = np.ones_like(w)
    total = np.ones_like(w)
    for k in range(1, 40):
        term = term * q / (k * k)
        total = total + term
    return total


def _bessel0_trapezoid(w: np.ndarray, kind: str) -> np.ndarray:
    # periodic trapezoid rule on the integral representation; converges geometrically
    m = int(2 * np.max(np.abs(w))) + 40
    theta = 2 * PI * np.arange(m) / m
    if kind == "J":
        return np.cos(w[..., None] * np.sin(theta)).mean(axis=-1)
    return np.exp(w[..., None] * np.cos(theta)).mean(axis=-1)


def bessel_J0_array(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) <= _SERIES_RADIUS
    out[small] = _bessel0_series(x[small], -1.0)
    if np.any(~small):
        out[~small] = _bessel0_trapezoid(x[~small], "J")
    return out


def bessel_I0_array(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.size and np.max(np.abs(z.real)) > 700:
        raise OverflowError("bessel_I0 magnitude exceeds the double range")
    out = np.empty_like(z)
    small = np.abs(z) <= _SERIES_RADIUS
    out[small] = _bessel0_series(z[small], 1.0)
    if np.any(~small):
        out[~small] = _bessel0_trapezoid(z[~small], "I")
    return out


def bessel_J0(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("bessel_J0 needs a finite argument")
    return float(bessel_J0_array(np.array([x]))[0])


def bessel_I0(z) -> complex:
    z = as_point(z)
    return complex(bessel_I0_array(np.array([z]))[0])
