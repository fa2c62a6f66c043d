"""Critical-line zeros, Riemann's Mellin criterion, the Gamma-phase zero
approximation, and off-line scans of the split real/imaginary system."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import special_functions as sf
from .errors import DomainError, NonConvergence, XiError
from .identity import IdentityReport, compare
from .xi_core import J_half, J_integral, StripPoint, Xi_array, xi_reference

PI = math.pi
LOG_SQRT_PI = 0.5 * math.log(PI)
DEFAULT_STEP = 0.05
BRACKET_WIDTH = 1e-10


@dataclass(frozen=True)
class ZeroRecord:
    n: int
    tau: float
    bracket_width: float
    eq20_residual: float
    eq20_truncated_residual: float
    tau_asymptotic: float
    asymptotic_error: float


@dataclass(frozen=True)
class StripScanCell:
    sigma: float
    tau: float
    residual_eq25: float
    residual_system: float
    # Eq-25-type residual with the alpha^2 + beta^2 denominator
    residual_eq25_plus: float = float("nan")
    kind: str = "system"

    def __post_init__(self):
        if not (0.0 < self.sigma < 0.5):
            raise DomainError(f"scan cells need 0 < sigma < 1/2, got {self.sigma}")


# ---------------------------------------------------------------------------
# zero location
# ---------------------------------------------------------------------------

def _sign_changes(tau_max: float, step: float) -> tuple[np.ndarray, np.ndarray]:
    n = int(math.ceil(tau_max / step))
    grid = np.arange(n + 1) * step
    vals = Xi_array(grid).real
    idx = np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]
    return grid[idx], grid[idx + 1]


def count_sign_changes(tau_max: float, step: float = DEFAULT_STEP) -> int:
    """Number of sign changes of Xi sampled on [0, tau_max] with the given step."""
    return len(_sign_changes(tau_max, step)[0])


def _bisect(lo: np.ndarray, hi: np.ndarray, width: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised bisection of every bracket until hi - lo <= width."""
    flo = Xi_array(lo).real
    for _ in range(200):
        if np.all(hi - lo <= width):
            return lo, hi
        mid = 0.5 * (lo + hi)
        fm = Xi_array(mid).real
        left = np.signbit(fm) != np.signbit(flo)
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        flo = np.where(left, flo, fm)
    raise NonConvergence("bisection did not shrink the brackets")


def locate_zeros(count: int, step: float = DEFAULT_STEP) -> tuple[np.ndarray, np.ndarray]:
    """Ordinates of the first ``count`` sign changes of Xi and their bracket widths.

    The scan range grows until enough sign changes are seen; the same range is
    then rescanned with half the step and a warning is issued if the two
    counts disagree.
    """
    if count < 1:
        raise DomainError("count must be positive")
    if count > 500:
        raise DomainError("count is capped at 500")
    if not step > 0:
        raise DomainError("step must be positive")
    tau_max = 50.0
    while True:
        lo, hi = _sign_changes(tau_max, step)
        if len(lo) >= count + 1:
            break
        tau_max *= 1.5
    fine = count_sign_changes(tau_max, step / 2)
    if fine != len(lo):
        warnings.warn(f"possible missed zero: {len(lo)} sign changes at step {step}, "
                      f"{fine} at step {step / 2} on [0, {tau_max:g}]",
                      RuntimeWarning, stacklevel=2)
    lo, hi = _bisect(lo[:count], hi[:count], BRACKET_WIDTH)
    return 0.5 * (lo + hi), hi - lo


@lru_cache(maxsize=1)
def first_zero() -> float:
    return float(locate_zeros(1)[0][0])


# ---------------------------------------------------------------------------
# Riemann's criterion
# ---------------------------------------------------------------------------

def _strip(rho) -> complex:
    return StripPoint.from_complex(rho).rho


def eq20_residual(rho) -> float:
    """|Re int_0^1 t^{rho-2} psi(1/t^2) dt - 1/(4|rho|^2)|; zero exactly at critical zeros."""
    rho = _strip(rho)
    return abs(J_half(rho).real - 1 / (4 * abs(rho) ** 2))


def eq20_truncated_residual(rho, terms: int = 1, tol: float = 1e-16) -> float:
    """Same criterion with psi cut to its first ``terms`` exponentials.

    Under u = 1/t^2 each kept term contributes (1/2) E_{(rho+1)/2}(pi n^2).
    """
    rho = _strip(rho)
    z = (rho + 1) / 2
    parts = [sf.exp_integral_E(z, PI * n * n, tol).real for n in range(1, terms + 1)]
    return abs(0.5 * math.fsum(parts) - 1 / (4 * abs(rho) ** 2))


# ---------------------------------------------------------------------------
# Gamma-phase approximation to the zeros
# ---------------------------------------------------------------------------

def phase(tau: float) -> float:
    """Phi(tau) = Im log Gamma(1/2 + i tau/2) - tau ln sqrt(pi) (continuous branch)."""
    return sf.log_gamma(complex(0.5, 0.5 * tau)).imag - tau * LOG_SQRT_PI


def _phase_derivative(tau: float, h: float = 1e-5) -> float:
    return (phase(tau + h) - phase(tau - h)) / (2 * h)


def _solve_phase(target: float, max_newton: int = 50) -> float:
    # Stirling: Phi ~ (tau/2)(ln(tau/2pi) - 1), inverted by fixed point
    tau = 20.0
    for _ in range(5):
        tau = max((2 * target + tau) / math.log(tau / (2 * PI)), 8.0)
    for _ in range(max_newton):
        step = (phase(tau) - target) / _phase_derivative(tau)
        new = tau - step
        if new < 8.0:
            new = 0.5 * (tau + 8.0)
        if abs(new - tau) <= 1e-12 * max(1.0, tau):
            return new
        tau = new
    raise NonConvergence(f"phase equation Phi = {target:.6g} did not converge")


@lru_cache(maxsize=8)
def calibrate_offset(tau_1: float) -> int:
    """Integer k with (k + 1/2) pi the phase branch whose root lies nearest tau_1."""
    k0 = math.floor(phase(tau_1) / PI - 0.5)
    cands = [k for k in range(k0 - 1, k0 + 3) if (k + 0.5) * PI > phase(8.0)]
    return min(cands, key=lambda k: abs(_solve_phase((k + 0.5) * PI) - tau_1))


def asymptotic_zero(n: int, tau_1: float | None = None) -> float:
    """n-th root of Re[e^{-i tau ln sqrt(pi)} Gamma(1/2 + i tau/2)] = 0."""
    if n < 1:
        raise DomainError("n must be >= 1")
    k1 = calibrate_offset(first_zero() if tau_1 is None else float(tau_1))
    return _solve_phase((k1 + n - 1 + 0.5) * PI)


def hyp1f1_a_a1(a: complex, x: float, tol: float = 1e-17, cap: int = 500) -> complex:
    """1F1(a; a+1; x) = sum_k a/(a+k) x^k/k!."""
    total = 0j
    term = 1.0
    for k in range(cap):
        if k:
            term *= x / k
        total += a / (a + k) * term
        if k > abs(x) and abs(term) < tol * max(abs(total), 1e-300):
            return total
    raise NonConvergence("1F1 series hit its term cap")


def hyp1f1_via_E(a: complex, x: float) -> complex:
    """Same function through the incomplete gamma: a x^{-a} Gamma(a) - a E_{1-a}(x), x > 0."""
    return a * (x ** -a) * np.exp(sf.log_gamma(a)) - a * sf.exp_integral_E(1 - a, x)


def g_correction(rho) -> complex:
    """g(rho) = (rho+1/2)/|rho+1/2|^2 1F1(rho+1/2; rho+3/2; -pi) - 1/(4|rho|^2)."""
    rho = _strip(rho)
    a = rho + 0.5
    return a / abs(a) ** 2 * hyp1f1_a_a1(a, -PI) - 1 / (4 * abs(rho) ** 2)


def find_critical_zeros(count: int, step: float = DEFAULT_STEP) -> list[ZeroRecord]:
    taus, widths = locate_zeros(count, step)
    k1 = calibrate_offset(float(taus[0]))
    out = []
    for n, (tau, w) in enumerate(zip(taus, widths), start=1):
        tau = float(tau)
        rho = complex(0.5, tau)
        t_asym = _solve_phase((k1 + n - 1 + 0.5) * PI)
        out.append(ZeroRecord(n, tau, float(w), eq20_residual(rho),
                              eq20_truncated_residual(rho), t_asym, abs(t_asym - tau)))
    return out


# ---------------------------------------------------------------------------
# off-line scans
# ---------------------------------------------------------------------------

def default_sigma_grid(n: int = 40) -> np.ndarray:
    return np.linspace(0.02, 0.48, n)


def default_tau_grid(n: int = 60) -> np.ndarray:
    return np.linspace(0.1, 60.0, n)


def _check_grid(sigmas, taus, tau_range):
    sigmas = np.asarray(sigmas, dtype=float)
    taus = np.asarray(taus, dtype=float)
    if np.any(sigmas <= 0) or np.any(sigmas >= 0.5):
        raise DomainError("sigma grid must lie inside (0, 1/2)")
    lo, hi = tau_range
    if np.any(np.abs(taus) < lo) or np.any(np.abs(taus) > hi):
        raise DomainError(f"|tau| grid must lie inside [{lo}, {hi}]")
    return sigmas, taus


def system_cell(sigma: float, tau: float) -> StripScanCell:
    """Residuals of alpha ReJ - beta ImJ = 1/2, beta ReJ + alpha ImJ = 0 and of
    ReJ = alpha / (2(alpha^2 -/+ beta^2)) at one strip point."""
    p = StripPoint(sigma, tau)
    J = J_integral(p.rho)
    a, b = p.alpha, p.beta
    joint = math.hypot(a * J.real - b * J.imag - 0.5, b * J.real + a * J.imag)
    minus = abs(J.real - a / (2 * (a * a - b * b)))
    plus = abs(J.real - a / (2 * (a * a + b * b)))
    return StripScanCell(sigma, tau, minus, joint, plus)


def rh_scan(sigma_grid=None, tau_grid=None) -> list[StripScanCell]:
    sigmas, taus = _check_grid(default_sigma_grid() if sigma_grid is None else sigma_grid,
                               default_tau_grid() if tau_grid is None else tau_grid,
                               (0.1, 60.0))
    out = []
    for s in sigmas:
        for t in taus:
            try:
                out.append(system_cell(float(s), float(t)))
            except XiError as exc:
                warnings.warn(f"scan cell ({s}, {t}) failed: {exc}", RuntimeWarning)
    return out


def conjecture_value(s: float, t: float) -> float:
    """(q + t^2)/((q + t^2)^2 - (1-2s)^2 t^2) - Re[E_{1-s/2-it/2}(pi) + E_{(s+it+1)/2}(pi)],
    q = s(1 - s), as displayed with the one-exponential psi."""
    a = s * (1 - s) + t * t
    rational = a / (a * a - (1 - 2 * s) ** 2 * t * t)
    e = sf.exp_integral_E(complex(1 - s / 2, -t / 2), PI) + \
        sf.exp_integral_E(complex((s + 1) / 2, t / 2), PI)
    return rational - e.real


def final_conjecture_scan(s_grid=None, t_grid=None) -> list[StripScanCell]:
    """The signed expression goes in ``residual_system``; the Eq-25 slots are NaN."""
    s_grid = np.linspace(0.05, 0.45, 9) if s_grid is None else s_grid
    t_grid = np.linspace(10.0, 100.0, 91) if t_grid is None else t_grid
    sigmas, ts = _check_grid(s_grid, t_grid, (10.0, 100.0))
    out = []
    for s in sigmas:
        for t in ts:
            try:
                v = conjecture_value(float(s), float(t))
            except XiError as exc:
                warnings.warn(f"conjecture cell ({s}, {t}) failed: {exc}", RuntimeWarning)
                continue
            out.append(StripScanCell(float(s), float(t), float("nan"), v,
                                     float("nan"), kind="conjecture"))
    return out


def summarize_scan(cells: list[StripScanCell]) -> dict:
    system = [c for c in cells if c.kind == "system"]
    conj = [c for c in cells if c.kind == "conjecture"]
    out = {}
    if system:
        m = min(system, key=lambda c: c.residual_system)
        out["system"] = {"cells": len(system), "min_joint_residual": m.residual_system,
                         "argmin": [m.sigma, m.tau],
                         "min_eq25_minus": min(c.residual_eq25 for c in system),
                         "min_eq25_plus": min(c.residual_eq25_plus for c in system)}
    if conj:
        m = min(conj, key=lambda c: abs(c.residual_system))
        signs = {math.copysign(1.0, c.residual_system) for c in conj}
        out["conjecture"] = {"cells": len(conj), "min_abs_value": abs(m.residual_system),
                             "argmin": [m.sigma, m.tau], "sign_change": len(signs) > 1}
    return out


def adjudicate_eq25(points=((0.3, 5.0), (0.1, 20.0), (0.45, 40.0))) -> list[IdentityReport]:
    """Test both denominators against the exact consequence of xi = 1/2 - rho(1-rho) J:

        Re J - alpha/(2 D) = -Re[(alpha - i beta) xi(rho)] / (alpha^2 + beta^2)

    holds at every strip point for D = alpha^2 + beta^2 only.  J is quadrature,
    xi is the closed form, so the check is two-oracle.
    """
    out = []
    for sigma, tau in points:
        p = StripPoint(sigma, tau)
        a, b = p.alpha, p.beta
        J = J_integral(p.rho)
        xi = xi_reference(p.rho).value
        exact = -((a - 1j * b) * xi).real / (a * a + b * b)
        params = {"sigma": sigma, "tau": tau}
        out.append(compare(f"eq25[denominator=alpha^2+beta^2,sigma={sigma},tau={tau}]",
                           J.real - a / (2 * (a * a + b * b)), exact, params))
        out.append(compare(f"eq25[denominator=alpha^2-beta^2,sigma={sigma},tau={tau}]",
                           J.real - a / (2 * (a * a - b * b)), exact, params,
                           note="denominator as stated", suspect=True))
    return out
