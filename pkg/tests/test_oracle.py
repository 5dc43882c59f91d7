"""Finite-difference reference solvers vs the closed-form implementation."""

import numpy as np
import pytest

from melan import (
    Affine,
    Constant,
    FdConfig,
    LinearProblem,
    LoadSpec,
    MelanProblem,
    SineHalfWave,
    fd_solve_linear,
    fd_solve_nonlinear,
    solve_linear,
)
from melan.errors import NewtonDiverged

C0 = 2.75 - 6.0 * np.tanh(0.5)


def problem_a():
    return LinearProblem(M=1.0, N=1.0, L=1.0, load=LoadSpec((Affine(C0, -6.0),)))


def problem_b():
    return LinearProblem(M=1.0, N=1.0, L=2.0, load=LoadSpec((Constant(-5.0),)))


# ---------------------------------------------------------------------------
# linear reference solver


def test_fd_linear_matches_closed_form_benchmarks():
    for pr, peak in ((problem_a(), 0.035530618781420185),
                     (problem_b(), 0.6221525998101097)):
        fd = fd_solve_linear(pr, FdConfig(points=2001))
        ref = solve_linear(pr, grid_points=2001)
        scale = np.max(np.abs(ref.y))
        assert np.max(np.abs(fd.y - ref.y)) < 5e-4 * scale
        assert np.max(np.abs(fd.y)) == pytest.approx(peak, rel=5e-4)


def test_fd_linear_second_order_convergence():
    # halving the step divides the defect by about four
    p_mix = LinearProblem(M=4.0, N=0.3, L=3.0,
                          load=LoadSpec((SineHalfWave(2.0), Constant(1.0))))
    for pr in (problem_a(), problem_b(), p_mix):
        errs = []
        for pts in (251, 501, 1001):
            fd = fd_solve_linear(pr, FdConfig(points=pts))
            ref = solve_linear(pr, grid_points=pts)
            errs.append(np.max(np.abs(fd.y - ref.y)))
        assert errs[0] / errs[1] > 3.0
        assert errs[1] / errs[2] > 3.0


def test_fd_linear_randomized_agreement():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(50):
        M = float(rng.uniform(0.01, 10.0))
        L = float(rng.uniform(0.5, 10.0))
        N = float(rng.uniform(0.0, 0.5 * 8.0 * M / L ** 3))
        terms = [Constant(float(rng.uniform(-3, 3)))]
        if rng.random() < 0.5:
            terms.append(SineHalfWave(float(rng.uniform(-3, 3))))
        if rng.random() < 0.5:
            terms.append(Affine(float(rng.uniform(-1, 1)),
                                float(rng.uniform(-1, 1))))
        pr = LinearProblem(M=M, N=N, L=L, load=LoadSpec(tuple(terms)))
        fd = fd_solve_linear(pr, FdConfig(points=2001))
        ref = solve_linear(pr, grid_points=2001)
        scale = np.max(np.abs(ref.y))
        if scale < 1e-14:
            continue
        worst = max(worst, np.max(np.abs(fd.y - ref.y)) / scale)
    assert worst < 5e-4


def test_fd_linear_boundary_conditions():
    # the banded solve pivots, so the Dirichlet rows carry roundoff at the
    # 1/h^4 conditioning level rather than exact zeros
    fd = fd_solve_linear(problem_b(), FdConfig(points=501))
    scale = np.max(np.abs(fd.y))
    assert abs(fd.y[0]) <= 1e-6 * scale
    assert abs(fd.y[-1]) <= 1e-6 * scale


# ---------------------------------------------------------------------------
# nonlinear reference solver


def test_fd_nonlinear_zero_load_gives_zero():
    pr = MelanProblem(a=0.1, b=0.1, c=0.1, L=2.0, load=LoadSpec((Constant(0.0),)))
    sol = fd_solve_nonlinear(pr)
    assert np.max(np.abs(sol.y)) == 0.0


def test_fd_nonlinear_standard_instance():
    pr = MelanProblem(a=0.1, b=0.1, c=0.1, L=2.0, load=LoadSpec((Constant(0.1),)))
    sol = fd_solve_nonlinear(pr, FdConfig(points=2001, newton_tol=5e-5))
    scale = np.max(np.abs(sol.y))
    assert scale == pytest.approx(0.0195, abs=2e-4)
    assert abs(sol.y[0]) <= 1e-6 * scale and abs(sol.y[-1]) <= 1e-6 * scale
    # nonnegative load, nonnegative deflection (up to solver roundoff)
    assert np.min(sol.y) >= -1e-6 * scale


def test_fd_nonlinear_reduces_to_linear_when_uncoupled():
    # vanishing coupling collapses the nonlinear model onto the linear one
    # with M = a and no nonlocal term (the model requires b, c > 0, so use
    # values far below every other scale in the problem)
    pr_nl = MelanProblem(a=0.7, b=1e-30, c=1e-30, L=2.0,
                         load=LoadSpec((Constant(1.0),)))
    pr_li = LinearProblem(M=0.7, N=0.0, L=2.0, load=LoadSpec((Constant(1.0),)))
    nl = fd_solve_nonlinear(pr_nl, FdConfig(points=1001))
    li = fd_solve_linear(pr_li, FdConfig(points=1001))
    assert np.max(np.abs(nl.y - li.y)) < 1e-10 * np.max(np.abs(li.y))


def test_fd_nonlinear_long_span_instance():
    # bridge-scale coefficients need the explicitly tighter Newton target;
    # the deflection peak is pinned as a regression value
    pr = MelanProblem(
        a=4.356023699802502e-05,
        b=7.7904963769287e-07,
        c=6.9248856683810665e-09,
        L=100.0,
        load=LoadSpec((Constant(200.0 / 4.557e8),)),
    )
    sol = fd_solve_nonlinear(pr, FdConfig(points=2001, newton_tol=1e-9,
                                          damping=1.0))
    assert np.max(np.abs(sol.y)) == pytest.approx(0.3486213224031954, rel=5e-4)


def test_fd_nonlinear_unreachable_tolerance_raises():
    # the discrete residual cannot be evaluated below the stencil's
    # double-precision floor, so an absurd target must fail loudly
    pr = MelanProblem(a=0.1, b=0.1, c=0.1, L=2.0, load=LoadSpec((Constant(0.1),)))
    with pytest.raises(NewtonDiverged):
        fd_solve_nonlinear(pr, FdConfig(points=1001, newton_tol=1e-16,
                                        newton_max=5))
