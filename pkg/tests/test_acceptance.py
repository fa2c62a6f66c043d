"""Acceptance criteria.  Each test prints one PASS/FAIL line, then asserts it.

Several criteria are known to fail as stated; they are kept as separate tests so
a failure points at exactly one claim (see the notes printed with each line).
"""

import itertools
import math
import time

import mpmath
import numpy as np
import pytest

from xiholo import special_functions as sf
from xiholo.contour_quadrature import VerticalLineSpec, verify_constant_integrals
from xiholo.holography import (AdditionalIntegralConfig, Xi_reconstruct_eq17, reconstruction_grid,
                               verify_additional_integrals, xi_reconstruct_eq10)
from xiholo.reporting import ensure_zeros, findings_for
from xiholo.xi_core import (Xi_via_eq18, xi_array, xi_reference, xi_via_eq12,
                            xi_via_eq13)
from xiholo.zeros import (adjudicate_eq25, asymptotic_zero, count_sign_changes, g_correction,
                          locate_zeros)


@pytest.fixture
def line(capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok
    return emit


@pytest.fixture(scope="module")
def constant_reports():
    t0 = time.perf_counter()
    reps = {r.id: r for r in verify_constant_integrals(VerticalLineSpec(c=1.5, T=60.0))}
    return reps, time.perf_counter() - t0


def test_criterion_1_closed_form_contour_integrals(constant_reports, line):
    reps, elapsed = constant_reports
    ids = ["eq6", "eq8b", "eq8c", "eq8d", "eq9"]
    worst = max(reps[i].abs_residual for i in ids)
    mirror = reps["eq9-mirror"].abs_residual
    ok = worst <= 1e-8 and mirror <= 1e-9 and elapsed <= 10
    line("criterion 1 closed-form contour integrals", ok,
         f"max residual {worst:.2e} (<=1e-8), mirror line {mirror:.2e} (<=1e-9), {elapsed:.2f}s")
    assert ok


def test_criterion_2_odd_kernels_at_zero_and_8a(constant_reports, line):
    reps, _ = constant_reports
    ids = ["eq7[tau=tau_1]", "eq8a[n=0]", "eq8a[n=1]"]
    vals = {i: abs(reps[i].lhs) for i in ids}
    ok = all(v <= 1e-9 for v in vals.values())
    line("criterion 2 odd kernel at tau_1 and n in {0,1}", ok,
         ", ".join(f"{k} {v:.2e}" for k, v in vals.items()))
    assert ok


def test_criterion_2_odd_kernel_at_tau_10(constant_reports, line):
    r = constant_reports[0]["eq7[tau=10]"]
    ok = abs(r.lhs) <= 1e-9
    line("criterion 2 odd kernel at tau=10", ok,
         f"|value| {abs(r.lhs):.6e} (<=1e-9); expected -Xi(10)/4 = "
         f"{-xi_reference(0.5 + 10j).value.real / 4:.6e} from the kernel poles")
    assert ok


def test_criterion_3_holographic_reconstruction(line):
    t0 = time.perf_counter()
    sigmas = [0.1, 0.3, 0.5, 0.7, 0.9]
    taus = [0.0, 5.0, 14.134725, 25.0, 40.0]
    grid = reconstruction_grid(sigmas, taus, cs=(1.5,))
    worst = max(r.abs_residual for r in grid)
    by_c = {}
    for c in (1.1, 1.5, 1.9):
        spec = VerticalLineSpec(c=c)
        by_c[c] = np.array([xi_reconstruct_eq10(complex(s, t), spec).value
                            for s in sigmas for t in taus])
    spread = max(np.max(np.abs(by_c[a] - by_c[b])) for a, b in itertools.combinations(by_c, 2))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and spread <= 1e-7 and elapsed <= 60
    line("criterion 3 holographic reconstruction", ok,
         f"25-point max residual {worst:.2e} (<=1e-6), c-spread {spread:.2e} (<=1e-7), "
         f"{elapsed:.2f}s")
    assert ok


def test_criterion_4_horizontal_line_reconstruction(line):
    res = {}
    for tau in (0.0, 5 + 0.2j, 20.0):
        rec = Xi_reconstruct_eq17(tau).value
        res[tau] = abs(rec - xi_reference(0.5 + 1j * tau).value)
    ok = all(v <= 1e-7 for v in res.values())
    line("criterion 4 horizontal-line reconstruction", ok,
         ", ".join(f"tau={k}: {v:.2e}" for k, v in res.items()))
    assert ok


STRIP10 = [0.5, 0.2, 0.8, 0.5 + 5j, 0.3 + 7j, 0.7 + 11j, 0.1 + 14j, 0.9 + 20j, 0.25 + 25j,
           0.6 + 30j]


def test_criterion_5_cross_method_agreement(line):
    worst = 0.0
    for s in STRIP10:
        vals = [xi_reference(s).value, xi_via_eq12(s).value, Xi_via_eq18((s - 0.5) / 1j).value]
        worst = max(worst, max(abs(a - b) for a, b in itertools.combinations(vals, 2)))
    ok = worst <= 1e-8
    line("criterion 5 reference/eq12/eq18 pairwise", ok, f"max difference {worst:.2e} (<=1e-8)")
    assert ok


def test_criterion_5_E_function_series(line):
    diffs = np.array([xi_via_eq13(s).value - xi_reference(s).value for s in STRIP10])
    worst = np.max(np.abs(diffs))
    offset_spread = np.max(np.abs(diffs - diffs[0]))
    ok = worst <= 1e-6 or offset_spread <= 1e-6
    line("criterion 5 E-function series (residual <=1e-6 or a constant offset)", ok,
         f"max residual {worst:.3e}; offset varies by {offset_spread:.3e} across the grid, "
         f"so it is not a constant offset")
    assert ok


@pytest.fixture(scope="module")
def zeros100(tmp_path_factory):
    t0 = time.perf_counter()
    recs, _ = ensure_zeros(tmp_path_factory.mktemp("cache") / "z.json", 100)
    return recs, time.perf_counter() - t0


def test_criterion_6_zeros(zeros100, line):
    recs, _ = zeros100
    coarse = count_sign_changes(100.0, 0.05)
    fine = count_sign_changes(100.0, 0.01)
    taus_fine, _ = locate_zeros(29, step=0.01)
    same = np.max(np.abs(taus_fine - np.array([r.tau for r in recs[:29]])))
    widest = max(r.bracket_width for r in recs)
    oracle = float(mpmath.zetazero(1).imag)
    err1 = abs(recs[0].tau - 14.134725)
    ok = (coarse == fine == 29 and same <= 1e-9 and widest <= 1e-10 and err1 <= 1e-6
          and abs(recs[0].tau - oracle) <= 1e-9)
    line("criterion 6 zeros on [0,100]", ok,
         f"{coarse}/{fine} zeros at step 0.05/0.01, max bracket {widest:.2e}, "
         f"tau_1 = {recs[0].tau:.12f} (|d| from 14.134725 = {err1:.1e}, from mpmath "
         f"{abs(recs[0].tau - oracle):.1e})")
    assert ok


def test_criterion_7_riemann_criterion_at_zeros(zeros100, line):
    recs, elapsed = zeros100
    worst = max(r.eq20_residual for r in recs)
    ok = len(recs) == 100 and worst <= 1e-8 and elapsed <= 120
    line("criterion 7 Mellin criterion residual at 100 zeros", ok,
         f"max residual {worst:.2e} (<=1e-8), located + certified in {elapsed:.2f}s")
    assert ok


def test_criterion_7_riemann_criterion_at_midpoints(zeros100, line):
    from xiholo.zeros import eq20_residual
    recs, _ = zeros100
    mids = [eq20_residual(complex(0.5, 0.5 * (a.tau + b.tau))) for a, b in zip(recs, recs[1:])]
    ok = min(mids) >= 1e-5
    line("criterion 7 Mellin criterion residual at midpoints", ok,
         f"min {min(mids):.2e} (>=1e-5); residual equals |Xi|/(2|rho|^2), already "
         f"{mids[0]:.2e} between zeros 1 and 2 and {mids[9]:.2e} between 10 and 11")
    assert ok


def test_criterion_8_truncated_criterion(zeros100, line):
    recs, _ = zeros100
    early = np.mean([r.eq20_truncated_residual for r in recs[0:20]])
    late = np.mean([r.eq20_truncated_residual for r in recs[59:80]])
    ok = late < early
    line("criterion 8 one-exponential criterion improves", ok,
         f"mean residual n in [1,20] {early:.3e} -> n in [60,80] {late:.3e}")
    assert ok


def test_criterion_9_asymptotic_within_two(zeros100, line):
    recs, _ = zeros100
    tau1 = recs[0].tau
    errs = [abs(asymptotic_zero(r.n, tau1) - r.tau) for r in recs[:80]]
    ok = max(errs) <= 2.0
    line("criterion 9 asymptotic zeros within 2.0 (n<=80)", ok, f"max error {max(errs):.3f}")
    assert ok


def test_criterion_9_asymptotic_error_trend(zeros100, line):
    recs, _ = zeros100
    errs = np.array([r.asymptotic_error for r in recs[9:80]])
    means = [w.mean() for w in np.array_split(errs, 4)]
    ok = all(b <= a for a, b in zip(means, means[1:]))
    line("criterion 9 windowed asymptotic error non-increasing (n=10..80, 4 windows)", ok,
         "window means " + ", ".join(f"{m:.4f}" for m in means))
    assert ok


def test_criterion_9_g_monotone(line):
    taus = np.linspace(10, 100, 46)
    re_g = np.array([g_correction(complex(0.5, t)).real for t in taus])
    d = np.diff(re_g)
    monotone = bool(np.all(d > 0) or np.all(d < 0))
    mag_decreasing = bool(np.all(np.diff(np.abs(re_g)) < 0))
    ok = monotone and mag_decreasing and np.all(re_g < 0)
    line("criterion 9 Re g non-oscillatory, magnitude decreasing on [10,100]", ok,
         f"Re g from {re_g[0]:.3e} to {re_g[-1]:.3e} (signed values rise toward 0; "
         f"|Re g| strictly decreasing: {mag_decreasing})")
    assert ok


@pytest.fixture(scope="module")
def additional():
    return {r.id: r for r in verify_additional_integrals(AdditionalIntegralConfig())}


def _worst(reports, prefix):
    sel = [r for k, r in reports.items() if k == prefix or k.startswith(prefix + "[")]
    assert sel, prefix
    return max(r.abs_residual for r in sel)


def test_criterion_10_valid_identities(additional, line):
    worst = {p: _worst(additional, p) for p in ("i", "iii", "viii", "ix")}
    ok = all(v <= 1e-7 for v in worst.values())
    line("criterion 10 identities (i), (iii), (viii), (ix)", ok,
         ", ".join(f"({k}) {v:.2e}" for k, v in worst.items()))
    assert ok


@pytest.mark.parametrize("ident", ["i-ii-chain", "v", "vi"])
def test_criterion_10_stated_identity(additional, line, ident):
    w = _worst(additional, ident)
    ok = w <= 1e-7
    line(f"criterion 10 identity {ident} as stated", ok, f"max residual {w:.3e} (<=1e-7)")
    assert ok


def test_criterion_10_findings(additional, line):
    reports = list(additional.values()) + adjudicate_eq25()
    findings = findings_for(reports)
    vii = [f for f in findings if f.startswith("vii[")]
    eq25 = [f for f in findings if f.startswith("eq25 denominator:")]
    ok = bool(vii) and len(eq25) == 1 and "alpha^2+beta^2 is consistent" in eq25[0]
    line("criterion 10 findings for (vii) and the split-system denominator", ok,
         f"{len(vii)} (vii) entries; {eq25[0] if eq25 else 'no eq25 entry'}")
    assert ok


def test_criterion_11_property_suites(tmp_path, line):
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    # Jacobi: 2 psi(1/x) + 1 = sqrt(x) (2 psi(x) + 1)
    xs = rng.uniform(0.05, 5.0, 20)
    jac = max(abs(2 * sf.psi(1 / x).value + 1 - math.sqrt(x) * (2 * sf.psi(x).value + 1))
              for x in xs)
    # a E_z(a) = e^{-a} - z E_{z+1}(a)
    zs = rng.uniform(-2, 2, 20) + 1j * rng.uniform(-30, 30, 20)
    as_ = rng.uniform(0.5, 10, 20)
    rec = max(abs(a * sf.exp_integral_E(z, a) + z * sf.exp_integral_E(z + 1, a) - math.exp(-a))
              for z, a in zip(zs, as_))
    # xi(s) = xi(1 - s), with both sides built from zeta and log-gamma directly
    s = rng.uniform(0.05, 0.95, 100) + 1j * rng.uniform(-40, 40, 100)
    fe = float(np.max(np.abs(_xi_direct(s) - _xi_direct(1 - s))))
    conj = bool(np.all(xi_array(np.conj(s)) == np.conj(xi_array(s))))
    path = tmp_path / "zeros.json"
    ensure_zeros(path, 5)
    first = path.read_bytes()
    from xiholo.reporting import load_zero_cache, save_zero_cache
    save_zero_cache(path, load_zero_cache(path))
    same = path.read_bytes() == first
    elapsed = time.perf_counter() - t0
    ok = jac <= 1e-10 and rec <= 1e-10 and fe <= 1e-10 and conj and same and elapsed <= 30
    line("criterion 11 property suites", ok,
         f"Jacobi {jac:.1e}, E-recurrence {rec:.1e}, functional eq. {fe:.1e}, "
         f"conjugate symmetry {conj}, cache byte-identical {same}, {elapsed:.2f}s")
    assert ok


def _xi_direct(s):
    """(s-1) pi^{-s/2} Gamma(1+s/2) zeta(s) from the package's zeta and log-gamma,
    without the reflection that xi_array applies for Re s < 1/2."""
    s = np.asarray(s, dtype=complex)
    zeta = np.array([sf.zeta(z) for z in s])
    return (s - 1) * np.exp(-0.5 * s * sf.LOG_PI + sf.log_gamma_array(1 + 0.5 * s)) * zeta
