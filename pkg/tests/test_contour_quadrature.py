import math

import mpmath
import numpy as np
import pytest

from xiholo.contour_quadrature import (VerticalLineSpec, eq6_closed_form, eq8d_closed_form,
                                       eq9_closed_form, gamma, line_integral,
                                       truncation_envelope, verify_constant_integrals)
from xiholo.errors import DomainError, ToleranceNotMet
from xiholo.xi_core import xi_array


def test_closed_forms_against_mpmath():
    g34 = mpmath.gamma(0.75)
    assert eq6_closed_form() == pytest.approx(float(0.5 - mpmath.pi ** 0.25 / (4 * g34)), abs=1e-15)
    assert eq6_closed_form() == pytest.approx(0.228391297196673, abs=1e-15)
    assert eq8d_closed_form() == pytest.approx(0.446696900467123, abs=5e-15)
    assert eq9_closed_form() == pytest.approx(-0.043217405606654, abs=1e-15)
    assert gamma(0.25) == pytest.approx(float(mpmath.gamma(0.25)), rel=1e-14)


def test_spec_validation():
    with pytest.raises(DomainError):
        VerticalLineSpec(c=float("nan"))
    with pytest.raises(DomainError):
        VerticalLineSpec(T=-1)
    with pytest.raises(DomainError):
        VerticalLineSpec(c=2.5).check_reconstruction_line()
    with pytest.raises(DomainError):
        VerticalLineSpec(T=10).check_reconstruction_line()
    assert VerticalLineSpec(c=1.5).mirrored().c == pytest.approx(-0.5)


def test_line_integral_of_xi_over_t():
    res = line_integral(VerticalLineSpec(), lambda t: xi_array(t) / t)
    assert abs(res.value - eq6_closed_form()) <= 1e-12
    assert res.truncation_bound < 1e-12
    assert res.nodes > 0


def test_truncation_envelope_decays():
    g = lambda y: np.abs(xi_array(1.5 + 1j * np.asarray(y)))  # noqa: E731
    assert truncation_envelope(g, 60.0) < truncation_envelope(g, 30.0) < 1e-6


def test_line_integral_reports_unmet_tolerance():
    spec = VerticalLineSpec(T=5.0, tol=1e-12)
    with pytest.raises(ToleranceNotMet):
        line_integral(spec, lambda t: xi_array(t) / t)


def test_constant_suite_ids_and_values():
    reps = {r.id: r for r in verify_constant_integrals(tau_1=14.134725141734693)}
    assert {"eq6", "eq8b", "eq8c", "eq8d", "eq9", "eq9-mirror", "eq8a[n=0]", "eq8a[n=1]",
            "eq7[tau=tau_1]", "eq7[tau=10]"} <= set(reps)
    for k in ("eq6", "eq8b", "eq8c", "eq8d", "eq9", "eq9-mirror", "eq7[tau=tau_1]"):
        assert reps[k].abs_residual <= 1e-10, k


def test_odd_kernel_picks_up_minus_quarter_Xi():
    # the kernel poles at 1/2 +- i tau leave -Xi(tau)/4 away from zeros
    rep = {r.id: r for r in verify_constant_integrals(tau_1=14.134725141734693)}["eq7[tau=10]"]
    expected = -complex(xi_array(0.5 + 10j)).real / 4
    assert abs(rep.lhs - expected) <= 1e-12
    assert math.isclose(rep.lhs.real, -0.0094919625777339, abs_tol=1e-12)
