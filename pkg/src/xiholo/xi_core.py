"""Independent evaluators of xi(s), Xi(tau) and the Mellin integral J(rho).

``xi_reference`` is the closed form (s-1) pi^{-s/2} Gamma(1+s/2) zeta(s).  The
other evaluators go through theta-series integrals and never call zeta, so they
act as oracles for each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import special_functions as sf
from .errors import DomainError, ToleranceNotMet
from .quadrature import gk15

PI = math.pi
_THETA_CONST = PI ** 0.25 / math.exp(sf.log_gamma(0.75).real)  # theta_3(0, e^{-pi})


class Method(str, Enum):
    reference = "reference"
    eq12 = "eq12"
    eq13 = "eq13"
    eq18 = "eq18"
    reconstruction = "reconstruction"


@dataclass(frozen=True)
class XiValue:
    at: complex
    value: complex
    method: Method
    est_error: float


@dataclass(frozen=True)
class StripPoint:
    sigma: float
    tau: float

    def __post_init__(self):
        if not (0.0 < self.sigma < 1.0):
            raise DomainError(f"sigma must lie in (0, 1), got {self.sigma!r}")
        if not math.isfinite(self.tau):
            raise DomainError("tau must be finite")

    @classmethod
    def from_complex(cls, rho) -> "StripPoint":
        rho = sf.as_point(rho, "rho")
        return cls(rho.real, rho.imag)

    @property
    def rho(self) -> complex:
        return complex(self.sigma, self.tau)

    @property
    def alpha(self) -> float:
        return self.sigma * (1 - self.sigma) + self.tau ** 2

    @property
    def beta(self) -> float:
        return (1 - 2 * self.sigma) * self.tau


# ---------------------------------------------------------------------------
# reference closed form
# ---------------------------------------------------------------------------

def xi_array(s) -> np.ndarray:
    """Vectorised xi(s); points with Re s < 1/2 go through xi(1 - s)."""
    s = np.asarray(s, dtype=complex)
    w = np.where(s.real < 0.5, 1.0 - s, s)
    # (s-1) zeta(s) = eta(s) * (s-1)/(1-2^{1-s}); no cancellation at s = 1
    log_pref = -0.5 * w * sf.LOG_PI + sf.log_gamma_array(1.0 + 0.5 * w)
    return np.exp(log_pref) * sf.zeta_pole_factor(w) * sf.eta_array(w)


def xi_reference(s) -> XiValue:
    s = sf.as_point(s, "s")
    w = 1 - s if s.real < 0.5 else s
    value = complex(xi_array(np.array([s]))[0])
    # rounding in the eta sum and the log-gamma phase dominate
    scale = abs(math.exp(-0.5 * w.real * sf.LOG_PI + sf.log_gamma(1 + w / 2).real)
                * complex(sf.zeta_pole_factor(np.array([w]))[0]))
    err = 1e-14 * max(abs(value), scale) * (1 + abs(w.imag)) ** 0.5
    return XiValue(s, value, Method.reference, err)


def Xi(tau) -> XiValue:
    """Xi(tau) = xi(1/2 + i tau)."""
    tau = sf.as_point(tau, "tau")
    res = xi_reference(0.5 + 1j * tau)
    return XiValue(tau, res.value, Method.reference, res.est_error)


def Xi_array(tau) -> np.ndarray:
    return xi_array(0.5 + 1j * np.asarray(tau, dtype=complex))


# ---------------------------------------------------------------------------
# theta-series representations
# ---------------------------------------------------------------------------

def _n_tail_bound(n: int, powers, p: float) -> float:
    # envelope for sum_{m>n} of |coefficient| * |E_z(pi m^2)| with Re z >= -p
    total = 0.0
    m = n + 1
    while True:
        a = PI * m * m
        env = sum(c * m ** k for k, c in powers) * math.exp(-a) / (a - p)
        total += env
        if env < 1e-30 * max(total, 1e-300) or env == 0.0:
            break
        m += 1
    return total


def xi_via_eq12(s, tol: float = 1e-12, n_cap: int = 40) -> XiValue:
    """xi(s) = 2 pi^2 sum_n int_1^inf (t^{s/2} + t^{(1-s)/2})(n^4 t - 3n^2/(2 pi)) e^{-pi n^2 t} dt.

    Each inner integral is an E-function:  int t^w e^{-at} = E_{-w}(a).
    """
    s = sf.as_point(s, "s")
    w1, w2 = s / 2, (1 - s) / 2
    p = max(0.0, w1.real + 1, w2.real + 1)
    parts = []
    tail = math.inf
    for n in range(1, n_cap + 1):
        a = PI * n * n
        etol = tol / (20 * n ** 4)
        lin = sf.exp_integral_E(-w1 - 1, a, etol) + sf.exp_integral_E(-w2 - 1, a, etol)
        const = sf.exp_integral_E(-w1, a, etol) + sf.exp_integral_E(-w2, a, etol)
        parts.append(2 * PI ** 2 * (n ** 4 * lin - 3 * n * n / (2 * PI) * const))
        if a > p + 1:
            tail = _n_tail_bound(n, [(4 * PI ** 2, 4), (6 * PI, 2)], p)
            if tail <= tol / 2:
                break
    else:
        raise ToleranceNotMet(f"xi_via_eq12: n-series tail {tail:.3g} after {n_cap} terms")
    value = complex(math.fsum(z.real for z in parts), math.fsum(z.imag for z in parts))
    return XiValue(s, value, Method.eq12, tail + tol / 2)


def xi_via_eq13(s, tol: float = 1e-12, n_cap: int = 40) -> XiValue:
    """Evaluate the stated E-function series

        pi^{1/4} / (2 Gamma(3/4)) - pi sum n^2 [s E_{(1-s)/2}(pi n^2) + (1-s) E_{-s/2}(pi n^2)]

    exactly as written.  Whether it reproduces xi is decided by the verification
    layer, not assumed here.
    """
    s = sf.as_point(s, "s")
    z1, z2 = (1 - s) / 2, -s / 2
    p = max(0.0, -z1.real, -z2.real)
    coef = max(abs(s), abs(1 - s))
    parts = []
    tail = math.inf
    for n in range(1, n_cap + 1):
        a = PI * n * n
        etol = tol / (10 * n * n * max(coef, 1.0))
        parts.append(-PI * n * n * (s * sf.exp_integral_E(z1, a, etol)
                                    + (1 - s) * sf.exp_integral_E(z2, a, etol)))
        if a > p + 1:
            tail = _n_tail_bound(n, [(2 * PI * coef, 2)], p)
            if tail <= tol / 2:
                break
    else:
        raise ToleranceNotMet(f"xi_via_eq13: n-series tail {tail:.3g} after {n_cap} terms")
    total = complex(math.fsum(z.real for z in parts), math.fsum(z.imag for z in parts))
    return XiValue(s, _THETA_CONST / 2 + total, Method.eq13, tail + tol / 2)


def _psi_tail_upper(X: float, exponent: float) -> float:
    # bound on int_X^inf t^e psi(t) dt, using psi(t) <= e^{-pi t} / (1 - e^{-3 pi X})
    # and, for e > 0, t^e <= X^e exp(e (t - X) / X)
    rate = PI - max(exponent, 0.0) / X
    if rate <= 0:
        return math.inf
    return X ** exponent * math.exp(-PI * X) / (rate * (1 - math.exp(-3 * PI * X)))


def _log_upper_limit(weight: float, tol: float, exponent: float) -> float:
    X = 2.0
    while weight * _psi_tail_upper(X, exponent) > tol:
        X *= 1.25
    return math.log(X)


def Xi_via_eq18(tau, tol: float = 1e-13) -> XiValue:
    """Xi(tau) = 1/2 - (tau^2 + 1/4) int_1^inf t^{-3/4} cos(tau ln t / 2) psi(t) dt.

    Integrated in u = ln t with panels no wider than half a cosine period.
    Complex tau is accepted (the integral is entire in tau).
    """
    tau = sf.as_point(tau, "tau")
    weight = abs(tau * tau + 0.25)
    growth = abs(tau.imag) / 2
    U = _log_upper_limit(max(weight, 1.0), tol / 10, growth - 0.75)

    def f(u):
        return np.exp(0.25 * u) * np.cos(0.5 * tau * u) * psi_of_exp(u)

    width = 2 * PI / abs(tau.real) if tau.real else None
    res = gk15(f, 0.0, U, tol=tol / (2 * max(weight, 1.0)), initial_panels=4, max_width=width)
    value = 0.5 - (tau * tau + 0.25) * res.value
    return XiValue(tau, value, Method.eq18, weight * res.error + tol / 10)


def psi_of_exp(u: np.ndarray) -> np.ndarray:
    """psi(e^u) for u >= 0, vectorised."""
    return sf.psi_array(np.exp(u))


def _check_strip(rho: complex):
    if not (0.0 < rho.real < 1.0):
        raise DomainError(f"rho must lie in the open critical strip, got {rho!r}")


def _mellin_psi(exponents, tol: float):
    """sum_k (1/2) int_0^inf e^{v * e_k} psi(e^v) dv for the given exponents e_k."""
    exponents = [complex(e) for e in exponents]
    growth = max(e.real for e in exponents)
    freq = max(abs(e.imag) for e in exponents)
    U = _log_upper_limit(1.0, tol / 10, growth - 1.0)

    def f(v):
        acc = np.zeros_like(v, dtype=complex)
        for e in exponents:
            acc = acc + np.exp(e * v)
        return 0.5 * acc * psi_of_exp(v)

    width = PI / freq if freq else None
    return gk15(f, 0.0, U, tol=tol, initial_panels=4, max_width=width)


def J_integral(rho, tol: float = 1e-14) -> complex:
    """J(rho) = int_0^1 [t^{rho-2} + t^{-1-rho}] psi(1/t^2) dt, 0 < Re rho < 1.

    With u = 1/t^2 and then u = e^v this is
    (1/2) int_0^inf [e^{v(1-rho)/2} + e^{v rho/2}] psi(e^v) dv.
    """
    rho = sf.as_point(rho, "rho")
    _check_strip(rho)
    return _mellin_psi([(1 - rho) / 2, rho / 2], tol).value


def J_half(rho, tol: float = 1e-15) -> complex:
    """First half of J: int_0^1 t^{rho-2} psi(1/t^2) dt."""
    rho = sf.as_point(rho, "rho")
    _check_strip(rho)
    return _mellin_psi([(1 - rho) / 2], tol).value


def xi_via_J(rho, tol: float = 1e-14) -> complex:
    """xi(rho) = 1/2 - rho(1 - rho) J(rho)."""
    rho = sf.as_point(rho, "rho")
    return 0.5 - rho * (1 - rho) * J_integral(rho, tol)


DEFAULT_METHOD_POINTS = (0.5, 0.2, 0.8, complex(0.5, 5), complex(0.3, 7), complex(0.7, 11),
                         complex(0.1, 14), complex(0.9, 20), complex(0.25, 25), complex(0.6, 30))


def compare_methods(points=DEFAULT_METHOD_POINTS, tol: float = 1e-12):
    """Each theta-series evaluator against the closed form at every strip point.

    eq13 is flagged suspect: its stated E-function subscripts do not reproduce xi.
    """
    from .identity import compare

    out = []
    for s in points:
        s = complex(s)
        ref = xi_reference(s).value
        p = {"s": s}
        out.append(compare(f"xi-eq12[s={s}]", xi_via_eq12(s, tol).value, ref, p))
        out.append(compare(f"xi-eq18[s={s}]", Xi_via_eq18((s - 0.5) / 1j, tol).value, ref, p))
        out.append(compare(f"xi-J[s={s}]", xi_via_J(s), ref, p))
        out.append(compare(f"xi-eq13[s={s}]", xi_via_eq13(s, tol).value, ref, p,
                           note="series evaluated as stated", suspect=True))
    return out
