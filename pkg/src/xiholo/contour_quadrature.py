"""Integrals (1/2 pi i) int_{c-iT}^{c+iT} f(t) dt along vertical lines, and the
closed-form contour integrals of xi checked against them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import special_functions as sf
from .errors import DomainError, ToleranceNotMet
from .identity import IdentityReport, compare
from .quadrature import gk15
from .xi_core import Xi, xi_array

PI = math.pi


@dataclass(frozen=True)
class VerticalLineSpec:
    c: float = 1.5
    T: float = 60.0
    tol: float = 1e-10
    max_nodes: int = 300_000

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise DomainError("line abscissa must be finite")
        if not self.T > 0 or not self.tol > 0 or self.max_nodes < 15:
            raise DomainError("need T > 0, tol > 0 and max_nodes >= 15")

    def check_reconstruction_line(self):
        """Lines used to reconstruct xi must sit in 1 < c < 2 and reach T >= 30."""
        if not (1.0 < self.c < 2.0):
            raise DomainError(f"reconstruction line needs 1 < c < 2, got c={self.c}")
        if self.T < 30:
            raise DomainError(f"truncation height T={self.T} is below 30")

    def mirrored(self) -> "VerticalLineSpec":
        return VerticalLineSpec(1.0 - self.c, self.T, self.tol, self.max_nodes)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    est_error: float
    nodes: int
    truncation_bound: float


def truncation_envelope(g, T: float, step: float = 2.0) -> float:
    """Bound int_{|y|>T} |g(y)| dy from samples at |y| = T and T - step.

    The local decay rate is measured on each side and halved before use, so
    an exponential envelope calibrated at the cut-off stays conservative.
    """
    ys = np.array([T - step, T, -(T - step), -T])
    mags = np.abs(np.asarray(g(ys), dtype=complex))
    bound = 0.0
    for inner, outer in ((mags[0], mags[1]), (mags[2], mags[3])):
        if outer == 0.0:
            continue
        if inner <= outer:
            return math.inf
        rate = 0.5 * math.log(inner / outer) / step
        bound += outer / rate
    return bound


def line_integral(spec: VerticalLineSpec, integrand) -> QuadratureResult:
    """(1/2 pi i) int_{c-iT}^{c+iT} integrand(t) dt for a vectorised integrand."""
    c = spec.c

    def g(y):
        return integrand(c + 1j * np.asarray(y, dtype=float))

    res = gk15(g, -spec.T, spec.T, tol=spec.tol / 2, initial_panels=int(spec.T),
               max_panels=spec.max_nodes // 15)
    trunc = truncation_envelope(g, spec.T) / (2 * PI)
    err = res.error / (2 * PI)
    if err + trunc > spec.tol:
        raise ToleranceNotMet(
            f"line integral on Re t = {c}: quadrature {err:.3g} + truncation "
            f"{trunc:.3g} exceeds tol {spec.tol:.3g}")
    return QuadratureResult(res.value / (2 * PI), err, res.nodes, trunc)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def gamma(x: float) -> float:
    return math.exp(sf.log_gamma(x).real)


def eq6_closed_form() -> float:
    return 0.5 - gamma(1.25) / (math.sqrt(2) * PI ** 0.75)


def eq8c_theta_sums() -> float:
    """pi^2 sum_{n in Z} n^4 e^{-pi n^2} - (3 pi / 2) sum_{n in Z} n^2 e^{-pi n^2}."""
    s4 = sf._theta_moment(1.0, 4, 1.0, 1e-18).value
    s2 = sf._theta_moment(1.0, 2, 1.0, 1e-18).value
    return 2 * PI ** 2 * s4 - 3 * PI * s2


def eq8d_closed_form() -> float:
    return gamma(1.25) / (128 * math.sqrt(2) * PI ** 4.75) * (gamma(0.25) ** 8 - 96 * PI ** 4)


def eq9_closed_form() -> float:
    return 0.5 * (1 - PI ** 0.25 / gamma(0.75))


def verify_constant_integrals(spec: VerticalLineSpec | None = None,
                              tau_1: float | None = None) -> list[IdentityReport]:
    """Evaluate the closed-form and odd-kernel contour integrals of xi."""
    spec = spec or VerticalLineSpec()
    if tau_1 is None:
        from .zeros import first_zero
        tau_1 = first_zero()
    base = {"c": spec.c, "T": spec.T}

    def li(f, s=spec):
        return line_integral(s, f).value

    reports = []
    reports.append(compare("eq6", li(lambda t: xi_array(t) / t), eq6_closed_form(), base))

    for label, tau in (("tau_1", tau_1), ("10", 10.0)):
        lhs = li(lambda t, tau=tau: xi_array(t) * (1 - 2 * t) / (4 * tau ** 2 + (1 - 2 * t) ** 2))
        residue = -Xi(tau).value / 4
        reports.append(compare(
            f"eq7[tau={label}]", lhs, 0.0, {**base, "tau": tau},
            note=f"kernel poles at 1/2 +- i tau contribute -Xi(tau)/4 = {residue.real:.6e}"))

    for n in (0, 1):
        lhs = li(lambda t, n=n: xi_array(t) * (2 * t - 1) ** (2 * n + 1))
        reports.append(compare(f"eq8a[n={n}]", lhs, 0.0, {**base, "n": n}))

    int_t_xi = li(lambda t: t * xi_array(t))
    int_xi = li(xi_array)
    theta = eq8c_theta_sums()
    reports.append(compare("eq8b", int_t_xi, 0.5 * int_xi, base))
    reports.append(compare("eq8c", int_t_xi, theta, base))
    reports.append(compare("eq8d", theta, eq8d_closed_form(), {},
                           note="theta sums against the Gamma(1/4) closed form"))

    def k9(t):
        return xi_array(t) / (t * (1 - t))

    on_c = li(k9)
    reports.append(compare("eq9", on_c, eq9_closed_form(), base))
    mirror = spec.mirrored()
    reports.append(compare("eq9-mirror", on_c, li(k9, mirror),
                           {**base, "mirror_c": mirror.c}))
    return reports
