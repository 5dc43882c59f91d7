"""Monotone two-sided iteration: ordering, bounds, convergence, failure modes.

The standard instance used throughout is a = b = c = 0.1, L = 2 with a
constant load p = 0.1 and a sine bracket of amplitude pi/4.
"""

import numpy as np
import pytest

from melan import (
    Constant,
    FdConfig,
    Iterate,
    LinearProblem,
    LoadSpec,
    MelanProblem,
    SineShape,
    ZeroShape,
    error_bounds,
    fd_solve_nonlinear,
    iterate_melan,
    iterate_once,
    make_sine_pair,
    run_monotone,
    solve_linear,
    verify_lower,
    verify_upper,
)
from melan.errors import (
    BoundUnavailable,
    InvalidPair,
    NotApplicable,
    NotConverged,
)

SINE_N = (16.0 + np.pi ** 3) / 160.0
LAM = np.pi / 4.0


def standard_problem():
    return MelanProblem(a=0.1, b=0.1, c=0.1, L=2.0, load=LoadSpec((Constant(0.1),)))


@pytest.fixture(scope="module")
def standard_run():
    return iterate_melan(standard_problem(), lam=LAM, grid_points=1001)


@pytest.fixture(scope="module")
def standard_pair():
    return make_sine_pair(standard_problem(), LAM, 1001)


# ---------------------------------------------------------------------------
# pair construction and verification


def test_sine_pair_frozen_coefficients(standard_pair):
    assert standard_pair.M == pytest.approx(0.2, rel=1e-14)
    assert standard_pair.N == pytest.approx(SINE_N, rel=1e-14)
    assert standard_pair.lam == LAM
    # alpha_0 = 0, beta_0 = lam * sin(pi x / L)
    assert np.all(standard_pair.alpha.y == 0.0)
    assert np.max(standard_pair.beta.y) == pytest.approx(LAM, rel=1e-9)


def test_insufficient_amplitude_rejected_at_run_time():
    # the default-sized amplitude L/100 leaves the sine envelope below the
    # constant load near the endpoints, so the upper-solution check fails
    with pytest.raises(InvalidPair, match="upper-solution"):
        iterate_melan(standard_problem(), lam=2.0 / 100.0, grid_points=1001)


def test_verify_shapes_against_load_sign():
    p_up = standard_problem()
    p_down = MelanProblem(a=0.1, b=0.1, c=0.1, L=2.0, load=LoadSpec((Constant(-0.1),)))
    assert verify_lower(ZeroShape(), p_up).satisfied
    assert not verify_lower(ZeroShape(), p_down).satisfied
    assert verify_upper(SineShape(LAM), p_up).satisfied
    assert not verify_upper(ZeroShape(), p_up).satisfied


# ---------------------------------------------------------------------------
# the standard run


def test_standard_run_converges_certified(standard_run):
    v = standard_run
    assert v.status == "converged"
    assert v.certified
    assert v.iterations == 7
    assert v.warnings == () or list(v.warnings) == []
    assert v.rho == pytest.approx(0.45747891806452123, rel=1e-12)
    assert v.final_gap < 1e-8


def test_standard_run_iterate_maxima(standard_run):
    al = standard_run.lower.iterates
    be = standard_run.upper.iterates
    assert np.max(np.abs(al[1].y)) == pytest.approx(0.017964007135697395, rel=1e-10)
    assert np.max(np.abs(be[1].y)) == pytest.approx(0.05277631810671728, rel=1e-10)
    assert np.max(np.abs(al[2].y)) == pytest.approx(0.019380731868379887, rel=1e-10)
    assert np.max(np.abs(be[2].y)) == pytest.approx(0.022043626961588063, rel=1e-10)


def test_ordering_chain(standard_run):
    # alpha_{k-1} <= alpha_k <= beta_k <= beta_{k-1}, pointwise
    v = standard_run
    al, be = v.lower.iterates, v.upper.iterates
    scale = 1e-9 * max(1.0, float(np.max(np.abs(be[0].y))))
    for k in range(1, len(al)):
        assert np.max(al[k - 1].y - al[k].y) <= scale
        assert np.max(al[k].y - be[k].y) <= scale
        assert np.max(be[k].y - be[k - 1].y) <= scale


def test_gap_bound_holds_at_every_iteration(standard_run):
    v = standard_run
    al, be = v.lower.iterates, v.upper.iterates
    for n in range(min(len(al), len(be))):
        gap = float(np.max(np.abs(be[n].y - al[n].y)))
        assert gap <= v.gap_bounds[n] + 1e-12


def test_extremal_iterates_stay_nonnegative_concave(standard_run):
    for trace in (standard_run.lower, standard_run.upper):
        final = trace.iterates[-1]
        assert np.min(final.y) >= -1e-12
        assert np.max(final.ypp) <= 1e-12


def test_converged_limit_is_grid_independent():
    vals = []
    for gp in (501, 2001):
        v = iterate_melan(standard_problem(), lam=LAM, grid_points=gp)
        vals.append(np.max(np.abs(v.lower.iterates[-1].y)))
    assert vals[0] == pytest.approx(vals[1], abs=1e-6)


# ---------------------------------------------------------------------------
# the limit solves the nonlinear equation


def test_limit_satisfies_nonlinear_equation(standard_run):
    # freeze the converged integral I*; the nonlinear equation then reduces
    # to the linear problem (M = a + b I*, N = 0, load = p - c I*), whose
    # closed-form solution must reproduce the limit and its integral
    conv = standard_run.lower.iterates[-1]
    i_star = conv.integral
    reduced = LinearProblem(
        M=0.1 + 0.1 * i_star,
        N=0.0,
        L=2.0,
        load=LoadSpec((Constant(0.1 - 0.1 * i_star),)),
    )
    hat = solve_linear(reduced, grid_points=1001)
    assert np.max(np.abs(hat.y - conv.y)) < 1e-8
    assert abs(hat.integral_y - i_star) < 1e-8


def test_reference_solver_limit_is_a_fixed_point(standard_pair):
    # one sweep applied to the independently computed solution moves it by
    # no more than the combined solver tolerances
    nl = fd_solve_nonlinear(standard_problem(), FdConfig(points=2001, newton_tol=5e-5))
    prev = Iterate(
        y=np.interp(standard_pair.grid, nl.grid, nl.y),
        ypp=np.interp(standard_pair.grid, nl.grid, nl.ypp),
        integral=nl.integral_y,
    )
    nxt = iterate_once(prev, standard_pair, standard_problem())
    assert np.max(np.abs(nxt.y - prev.y)) < 1e-5


def test_iteration_converges_from_arbitrary_admissible_starts(standard_pair, standard_run):
    # the limit must not depend on the starting curve within the bracket
    problem = standard_problem()
    limit = 0.5 * (
        standard_run.lower.iterates[-1].y + standard_run.upper.iterates[-1].y
    )
    for factor in (0.25, 0.6, 0.95):
        start = solve_linear(
            LinearProblem(
                M=standard_pair.M,
                N=standard_pair.N,
                L=2.0,
                load=problem.load.scaled(factor),
            ),
            grid_points=1001,
        )
        cur = Iterate(y=start.y, ypp=start.ypp, integral=start.integral_y)
        for _ in range(60):
            nxt = iterate_once(cur, standard_pair, problem)
            drift = np.max(np.abs(nxt.y - cur.y))
            cur = nxt
            if drift < 1e-10:
                break
        assert np.max(np.abs(cur.y - limit)) < 1e-7


# ---------------------------------------------------------------------------
# error bounds


def test_error_bounds_identities(standard_run, standard_pair):
    v = standard_run
    ap, gap = error_bounds(v.lower, standard_pair, 3)
    assert gap == pytest.approx(v.gap_bounds[3], rel=1e-12)
    # a_priori = gap / (1 - rho), exactly
    assert ap * (1.0 - v.rho) == pytest.approx(gap, rel=1e-12)


def test_error_bounds_initial_gap(standard_run, standard_pair):
    _, gap0 = error_bounds(standard_run.lower, standard_pair, 0)
    want = (2.0 ** 2 / 4.0) * np.max(
        np.abs(standard_pair.alpha.ypp - standard_pair.beta.ypp)
    )
    assert gap0 == pytest.approx(want, rel=1e-12)


def test_error_bounds_refuse_expansive_factor():
    # a configuration whose frozen coefficients give rho >= 1 cannot carry
    # a geometric a-priori bound
    p_big = MelanProblem(
        a=0.0017149122807017545,
        b=2.327114765543187e-06,
        c=4.047156113988152e-09,
        L=460.0,
        load=LoadSpec((Constant(20.0 / 5.7e7),)),
    )
    pair = make_sine_pair(p_big, 4.6, 501)
    trace = run_monotone(p_big, pair, max_iter=3, strict=False).lower
    with pytest.raises(BoundUnavailable):
        error_bounds(trace, pair, 2)


# ---------------------------------------------------------------------------
# strictness and failure modes


def test_non_convergence_raises_with_traces(standard_pair):
    with pytest.raises(NotConverged) as exc:
        run_monotone(standard_problem(), standard_pair, max_iter=2)
    assert exc.value.lower is not None
    assert exc.value.upper is not None


def test_non_convergence_tolerated_when_not_strict(standard_pair):
    v = run_monotone(standard_problem(), standard_pair, max_iter=2, strict=False)
    assert v.status == "max-iters"
    assert not v.certified


def test_uncertifiable_configuration_refused_when_strict():
    p_big = MelanProblem(
        a=0.0017149122807017545,
        b=2.327114765543187e-06,
        c=4.047156113988152e-09,
        L=460.0,
        load=LoadSpec((Constant(20.0 / 5.7e7),)),
    )
    pair = make_sine_pair(p_big, 4.6, 501)
    with pytest.raises(NotApplicable):
        run_monotone(p_big, pair, max_iter=8)


def test_uncertifiable_run_reports_violation_when_forced():
    p_big = MelanProblem(
        a=0.0017149122807017545,
        b=2.327114765543187e-06,
        c=4.047156113988152e-09,
        L=460.0,
        load=LoadSpec((Constant(20.0 / 5.7e7),)),
    )
    pair = make_sine_pair(p_big, 4.6, 501)
    v = run_monotone(p_big, pair, max_iter=8, strict=False)
    assert v.status == "monotonicity-violation"
    assert not v.certified
    assert v.rho > 1.0
    assert len(v.warnings) > 0


def test_default_amplitude_is_span_over_hundred():
    # a gentle enough load admits the default bracket; its recorded
    # amplitude is L/100
    gentle = MelanProblem(a=0.1, b=0.1, c=0.1, L=2.0, load=LoadSpec((Constant(0.001),)))
    v = iterate_melan(gentle, grid_points=501)
    assert v.lam == pytest.approx(0.02, rel=1e-13)
    assert v.status == "converged"
