"""Physical-parameter layer: coefficient derivation, applicability, full runs.

Three reference configurations are used throughout (all quantities kN, m):

* span-150: L=150, EI=4.557e8, EcAc=4121730, Lc=163.2, n=0.2,   H=16542
* span-100: L=100, EI=4.557e8, EcAc=4121700, Lc=103.2, n=1/9,   H=19850.4
* span-460: L=460, EI=5.7e7,   EcAc=3.6e7,   Lc=472,   n=0.1,   H=97750
"""

import warnings

import numpy as np
import pytest

from melan import (
    BridgeParams,
    Constant,
    LinearProblem,
    LoadSpec,
    applicability,
    cable_length,
    check_sine_conditions,
    derive_coefficients,
    load_envelope,
    solve_bridge,
    solve_linear,
)
from melan.errors import (
    ConfigError,
    EnvelopeViolation,
    MissingCableLength,
    NotApplicable,
)
from melan.quadrature import integrate, uniform_grid


def span_150():
    return BridgeParams(L=150.0, EI=4.557e8, EcAc=4121730.0, Lc=163.2, n=0.2,
                        H=16542.0)


def span_100():
    return BridgeParams(L=100.0, EI=4.557e8, EcAc=4121700.0, Lc=103.2,
                        n=1.0 / 9.0, H=19850.4)


def span_460():
    return BridgeParams(L=460.0, EI=5.7e7, EcAc=3.6e7, Lc=472.0, n=0.1,
                        H=97750.0)


# ---------------------------------------------------------------------------
# coefficient derivation


def test_coefficients_span_150():
    a, b, c = derive_coefficients(span_150())
    assert a == pytest.approx(3.630019749835418e-05, rel=1e-12)
    assert b == pytest.approx(5.911654984574476e-07, rel=1e-12)
    assert c == pytest.approx(6.305765316879442e-09, rel=1e-12)


def test_coefficients_span_100():
    a, b, c = derive_coefficients(span_100())
    assert a == pytest.approx(4.356023699802502e-05, rel=1e-12)
    assert b == pytest.approx(7.7904963769287e-07, rel=1e-12)
    assert c == pytest.approx(6.9248856683810665e-09, rel=1e-12)


def test_coefficients_span_460():
    a, b, c = derive_coefficients(span_460())
    assert a == pytest.approx(0.0017149122807017545, rel=1e-12)
    assert b == pytest.approx(2.327114765543187e-06, rel=1e-12)
    assert c == pytest.approx(4.047156113988152e-09, rel=1e-12)


def test_coefficient_structure():
    # a = H/EI; b = (q/H)(EcAc/EI)/Lc; c = (q/H) b, with q/H = 8n/L
    bp = span_100()
    a, b, c = derive_coefficients(bp)
    qh = 8.0 * bp.n / bp.L
    assert a == pytest.approx(bp.H / bp.EI, rel=1e-14)
    assert b == pytest.approx(qh * (bp.EcAc / bp.EI) / bp.Lc, rel=1e-14)
    assert c == pytest.approx(qh * b, rel=1e-14)


def test_tension_resolved_from_dead_load_and_sag():
    bp = BridgeParams(L=100.0, EI=1e8, EcAc=1e7, Lc=103.0, n=0.125, q=100.0)
    rep = applicability(bp)
    assert rep.H == pytest.approx(100.0 * 100.0 / (8.0 * 0.125), rel=1e-14)
    assert rep.qh == pytest.approx(8.0 * 0.125 / 100.0, rel=1e-14)


# ---------------------------------------------------------------------------
# cable length


def test_cable_length_golden():
    assert cable_length(100.0, 0.008888) == pytest.approx(103.20029917657345,
                                                          rel=1e-12)


def test_cable_length_flat_limit():
    assert cable_length(100.0, 1e-9) == pytest.approx(100.0, rel=1e-12)


def test_cable_length_matches_arc_quadrature():
    qh = 0.008888
    xs = uniform_grid(100.0, 4001)
    slope = qh * (50.0 - xs)
    arc = integrate(np.sqrt(1.0 + slope ** 2), xs[1] - xs[0])
    assert cable_length(100.0, qh) == pytest.approx(arc, rel=1e-12)


def test_cable_length_rejects_nonpositive_ratio():
    with pytest.raises(ValueError):
        cable_length(100.0, 0.0)
    with pytest.raises(ValueError):
        cable_length(-1.0, 0.01)


# ---------------------------------------------------------------------------
# applicability reports


def test_applicability_span_150_not_applicable():
    rep = applicability(span_150())
    assert rep.verdict == "not-applicable"
    assert rep.M == pytest.approx(0.00012097841763675248, rel=1e-12)
    assert rep.N == pytest.approx(6.694736623902629e-09, rel=1e-12)
    assert rep.positivity.rhs == pytest.approx(9.457578018438466e-10, rel=1e-10)
    assert not rep.positivity.satisfied
    assert not rep.necessary_b.satisfied
    assert not rep.necessary_c.satisfied
    assert rep.sag_ratio.satisfied


def test_applicability_span_100_certified():
    rep = applicability(span_100())
    assert rep.verdict == "certified-unique"
    assert np.sqrt(rep.M) * 100.0 == pytest.approx(0.9651739599633486, rel=1e-12)
    assert rep.N == pytest.approx(7.693776841665128e-09, rel=1e-12)
    assert rep.positivity.rhs == pytest.approx(7.70977593395008e-09, rel=1e-10)
    assert rep.positivity.satisfied
    assert rep.necessary_b.satisfied and rep.necessary_c.satisfied
    assert rep.uniqueness_sine.satisfied
    assert rep.sag_ratio.satisfied


def test_applicability_span_460_not_applicable():
    rep = applicability(span_460())
    assert rep.verdict == "not-applicable"
    assert np.sqrt(rep.M) * 460.0 == pytest.approx(32.03443219772737, rel=1e-12)
    assert rep.N == pytest.approx(4.546453986419566e-09, rel=1e-12)
    assert rep.positivity.rhs == pytest.approx(2.6690666924501385e-21, rel=1e-9)
    assert not rep.positivity.satisfied


def test_positivity_two_forms_agree_on_reference_configs():
    for bp in (span_150(), span_100(), span_460()):
        rep = applicability(bp)
        assert rep.positivity.satisfied == rep.positivity_b_form.satisfied


def test_positivity_two_forms_agree_randomized():
    # the verdict stated through N and through b must never disagree
    rng = np.random.default_rng(41)
    agree = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _ in range(100):
            L = float(rng.uniform(50.0, 500.0))
            bp = BridgeParams(
                L=L,
                EI=float(10 ** rng.uniform(7.0, 9.0)),
                EcAc=float(10 ** rng.uniform(6.0, 8.0)),
                Lc=L * 1.03,
                n=float(rng.uniform(0.05, 0.25)),
                q=float(rng.uniform(50.0, 500.0)),
            )
            rep = applicability(bp)
            if rep.positivity.satisfied == rep.positivity_b_form.satisfied:
                agree += 1
    assert agree == 100


# ---------------------------------------------------------------------------
# load envelopes


def test_envelope_span_100():
    A, B = load_envelope(span_100())
    assert A == pytest.approx(485.79090698382237, rel=1e-12)
    assert B == pytest.approx(200.89621711302212, rel=1e-12)


def test_envelope_span_460():
    A, B = load_envelope(span_460())
    assert A == pytest.approx(59.88141721411616, rel=1e-12)
    assert B == pytest.approx(310.75677024044654, rel=1e-12)


def test_envelope_is_scaled_sine_condition_envelope():
    # the physical envelope is the model-scale sine envelope times EI
    bp = span_100()
    a, b, c = derive_coefficients(bp)
    rep = applicability(bp)
    sc = check_sine_conditions(a, b, c, bp.L, rep.lam)
    A, B = load_envelope(bp)
    assert A == pytest.approx(sc.envelope_sine * bp.EI, rel=1e-12)
    assert B == pytest.approx(sc.envelope_const * bp.EI, rel=1e-12)


# ---------------------------------------------------------------------------
# full runs


@pytest.fixture(scope="module")
def run_100():
    return solve_bridge(span_100(), LoadSpec((Constant(200.0),)), grid_points=1001)


def test_full_run_span_100_certified(run_100):
    v = run_100.monotone
    assert v.status == "converged"
    assert v.certified
    assert v.iterations == 6
    assert run_100.report.verdict == "certified-unique"


def test_full_run_span_100_deflection_and_tension(run_100):
    assert np.max(run_100.deflection.y) == pytest.approx(0.3486213224031954,
                                                         rel=1e-9)
    assert run_100.h_w == pytest.approx(7923.248010976623, rel=1e-9)
    # deflections stay in the physically sensible band [0, L/100]
    assert np.min(run_100.deflection.y) >= -1e-12
    assert np.max(run_100.deflection.y) <= 100.0 / 100.0


def test_full_run_span_100_iterate_maxima(run_100):
    al = run_100.monotone.lower.iterates
    be = run_100.monotone.upper.iterates
    assert np.max(np.abs(al[1].y)) == pytest.approx(0.3291537272856484, rel=1e-9)
    assert np.max(np.abs(be[1].y)) == pytest.approx(0.36586443935919355, rel=1e-9)
    assert np.max(np.abs(al[2].y)) == pytest.approx(0.34772389756857236, rel=1e-9)
    assert np.max(np.abs(be[2].y)) == pytest.approx(0.3494013490408171, rel=1e-9)


def test_full_run_span_100_solves_the_nonlinear_equation(run_100):
    # reduce with the converged integral frozen, solve in closed form, and
    # compare — an end-to-end consistency check of the physical scaling
    bp = span_100()
    a, b, c = derive_coefficients(bp)
    w = run_100.deflection
    i_star = w.integral_y
    reduced = LinearProblem(
        M=a + b * i_star,
        N=0.0,
        L=100.0,
        load=LoadSpec((Constant(200.0 / bp.EI - c * i_star),)),
    )
    hat = solve_linear(reduced, grid_points=1001)
    assert np.max(np.abs(hat.y - w.y)) < 1e-6
    assert abs(hat.integral_y - i_star) < 1e-4


def test_additional_tension_formula(run_100):
    # h(w) = (EcAc/Lc) * (q/H) * integral of w
    bp = span_100()
    qh = 8.0 * bp.n / bp.L
    want = (bp.EcAc / bp.Lc) * qh * run_100.deflection.integral_y
    assert run_100.h_w == pytest.approx(want, rel=1e-12)


def test_forced_run_span_460_reports_violation():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = solve_bridge(span_460(), LoadSpec((Constant(20.0),)),
                              grid_points=1001, max_iter=8, force=True)
    v = result.monotone
    assert v.status == "monotonicity-violation"
    assert not v.certified
    assert v.rho == pytest.approx(50.480858854971856, rel=1e-6)
    assert len(v.warnings) > 0
    assert np.max(np.abs(v.lower.iterates[1].y)) == pytest.approx(
        0.22283716440817525, rel=1e-9)
    assert np.max(np.abs(v.upper.iterates[1].y)) == pytest.approx(
        0.6499946144328224, rel=1e-9)
    assert result.h_w == pytest.approx(10853.681073572872, rel=1e-9)
    assert np.max(np.abs(result.deflection.y)) == pytest.approx(
        0.2687192436334864, rel=1e-9)


# ---------------------------------------------------------------------------
# refusals and configuration errors


def test_uncertified_configuration_is_refused():
    with pytest.raises(NotApplicable):
        solve_bridge(span_150(), LoadSpec((Constant(1.0),)), grid_points=201)


def test_excessive_load_is_refused():
    with pytest.raises(EnvelopeViolation):
        solve_bridge(span_100(), LoadSpec((Constant(600.0),)), grid_points=201)


def test_negative_load_is_refused():
    with pytest.raises(EnvelopeViolation):
        solve_bridge(span_100(), LoadSpec((Constant(-5.0),)), grid_points=201)


def test_forced_excessive_load_runs_uncertified():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = solve_bridge(span_100(), LoadSpec((Constant(600.0),)),
                              grid_points=201, force=True, max_iter=200)
    assert any("admissible band" in str(w.message) for w in caught)
    assert not result.monotone.certified


def test_amplitude_override_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = solve_bridge(span_100(), LoadSpec((Constant(50.0),)),
                              grid_points=201, lam=0.9)
    assert any("amplitude" in str(w.message) for w in caught)
    assert result.monotone.status == "converged"


def test_missing_cable_length_detected():
    # q = 0 gives a flat cable: no length can be derived, and the sag
    # ratio n = 0 also draws the out-of-range warning
    with pytest.warns(UserWarning, match="sag-span"):
        bp = BridgeParams(L=100.0, EI=1e8, EcAc=1e7, H=1000.0, q=0.0)
    with pytest.raises(MissingCableLength):
        derive_coefficients(bp)


def test_underdetermined_parameters_rejected():
    with pytest.raises(ConfigError):
        BridgeParams(L=100.0, EI=1e8, EcAc=1e7, Lc=103.0)
    with pytest.raises(ConfigError):
        BridgeParams(L=100.0, EI=1e8, EcAc=1e7, Lc=103.0, n=0.2, H=10000.0,
                     q=5.0)  # 8n/L and q/H disagree
    with pytest.raises(ConfigError):
        BridgeParams(L=-5.0, EI=1e8, EcAc=1e7, Lc=103.0, n=0.2)


def test_atypical_sag_ratio_warns():
    with pytest.warns(UserWarning, match="sag-span"):
        BridgeParams(L=100.0, EI=1e8, EcAc=1e7, Lc=103.0, n=0.5, H=10000.0)
