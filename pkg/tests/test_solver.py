import math
from dataclasses import replace

import numpy as np
import pytest

from zenger import (
    CompositeNorm,
    DimensionMismatch,
    Example1TailNorm,
    Example2Norm,
    NonConvergence,
    NotPolyhedral,
    SupNorm,
    Tolerances,
    TooLarge,
    ZengerProblem,
    brute_force_zenger,
    certify,
    dual_norm_lmo,
    eval_norm,
    geometric_alpha,
    line_search,
    log_utility,
    solve_zenger,
)


def random_composite(rng, n, max_blocks=3):
    blocks = []
    for _ in range(int(rng.integers(1, max_blocks + 1))):
        rows = int(rng.integers(n, n + 4))
        M = rng.normal(size=(rows, n))
        M += np.sign(M) * 0.3
        blocks.append((float(rng.uniform(0.3, 2.0)), M))
    return CompositeNorm(tuple(blocks))


def random_alpha(rng, n):
    a = rng.uniform(0.1, 1.0, size=n)
    return a / a.sum()


def scan_step(x, s, alpha, points=2_000_001):
    # dense oracle for the 1-d step problem, same zero-crossing guard
    x, s, alpha = map(np.asarray, (x, s, alpha))
    with np.errstate(divide="ignore", invalid="ignore"):
        roots = x / (x - s)
    roots = roots[np.isfinite(roots) & (roots > 0.0)]
    hi = 1.0 - 1e-12
    if roots.size:
        hi = min(hi, 0.99 * float(np.min(roots)))
    grid = np.linspace(0.0, hi, points)
    blends = (1.0 - grid)[:, None] * x[None, :] + grid[:, None] * s[None, :]
    values = np.log(np.abs(blends)) @ alpha
    return float(grid[int(np.argmax(values))])


def test_line_search_stationary_segment():
    x = np.array([0.5, 0.25])
    step = line_search(x, x, np.array([0.5, 0.5]))
    h0 = log_utility(np.array([0.5, 0.5]), x)
    blend = (1.0 - step) * x + step * x
    assert log_utility(np.array([0.5, 0.5]), blend) == pytest.approx(h0, abs=1e-15)


def test_line_search_monotone_reaches_cap():
    step = line_search(np.array([0.5]), np.array([1.0]), np.array([1.0]))
    assert step == pytest.approx(1.0 - 1e-12, abs=1e-9)


def test_line_search_sign_flip_target_stays_put():
    # blending toward (1, -1) only shrinks the second coordinate before its
    # sign flips, so the best admissible step is zero
    x = np.array([0.5, 0.5])
    s = np.array([1.0, -1.0])
    alpha = np.array([0.5, 0.5])
    got = line_search(x, s, alpha)
    oracle = scan_step(x, s, alpha)
    assert oracle == 0.0
    assert got == 0.0


def test_line_search_interior_optimum_matches_scan():
    x = np.array([0.9, 0.1])
    s = np.array([0.05, 0.95])
    alpha = np.array([0.5, 0.5])
    got = line_search(x, s, alpha)
    # h is flat to machine precision within ~sqrt(eps) of the maximizer, so
    # the step matches the stationary point 8/17 only to that scale; the
    # h-value itself is tight
    assert abs(got - 8.0 / 17.0) <= 1e-7
    assert abs(got - scan_step(x, s, alpha)) <= 1e-6

    def h(g):
        return log_utility(alpha, (1.0 - g) * x + g * s)

    assert h(got) >= h(8.0 / 17.0) - 1e-15


def test_line_search_never_loses_ground():
    rng = np.random.default_rng(41)
    for _ in range(200):
        n = int(rng.integers(1, 7))
        x = rng.normal(size=n)
        x[x == 0.0] = 0.5
        s = rng.normal(size=n)
        alpha = random_alpha(rng, n)
        step = line_search(x, s, alpha)
        assert 0.0 <= step < 1.0
        blend = (1.0 - step) * x + step * s
        assert log_utility(alpha, blend) >= log_utility(alpha, x) - 1e-12


def test_problem_validation():
    with pytest.raises(DimensionMismatch):
        ZengerProblem(spec=SupNorm(3), alpha=(0.5, 0.5))
    with pytest.raises(NotPolyhedral):
        ZengerProblem(spec=Example1TailNorm(), alpha=(1.0,))
    with pytest.raises(ValueError):
        ZengerProblem(spec=SupNorm(1), alpha=(1.0,), max_iterations=0)


def test_sup_norm_closed_form():
    problem = ZengerProblem(spec=SupNorm(3), alpha=(0.5, 0.3, 0.2))
    pair = solve_zenger(problem)
    assert np.max(np.abs(pair.w - 1.0)) <= 1e-10
    assert np.max(np.abs(pair.phi - np.array([0.5, 0.3, 0.2]))) <= 1e-10
    assert pair.gap <= 1e-9
    cert = certify(pair, problem)
    assert cert.ok
    assert max(cert.norm_residual, cert.dual_residual,
               cert.pairing_residual, cert.factor_residual) <= 1e-10


def test_weighted_sup_closed_form():
    spec = CompositeNorm(((1.0, np.diag([1.0, 2.0, 3.0, 4.0])),))
    pair = solve_zenger(ZengerProblem(spec=spec, alpha=(0.25,) * 4))
    assert np.max(np.abs(pair.w - np.array([1, 1 / 2, 1 / 3, 1 / 4]))) <= 1e-10
    assert np.max(np.abs(pair.phi - np.array([0.25, 0.5, 0.75, 1.0]))) <= 1e-10


def test_cascade_truncation_certifies_and_matches_oracle():
    problem = ZengerProblem(spec=Example2Norm(12), alpha=geometric_alpha(0.25, 12))
    pair = solve_zenger(problem)
    cert = certify(pair, problem)
    assert cert.ok
    small = ZengerProblem(spec=Example2Norm(3), alpha=(16 / 21, 4 / 21, 1 / 21))
    fast = solve_zenger(small)
    slow = brute_force_zenger(small)
    assert abs(fast.objective - slow.objective) <= 1e-6


def test_pair_invariants():
    rng = np.random.default_rng(42)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        problem = ZengerProblem(spec=random_composite(rng, n),
                                alpha=random_alpha(rng, n))
        pair = solve_zenger(problem)
        assert np.all(pair.w != 0.0)
        assert eval_norm(problem.spec, pair.w) <= 1.0 + problem.tol.certificate
        # prices are the exact elementwise quotient
        assert np.array_equal(pair.phi, problem.alpha / pair.w)


def test_monotone_ascent_along_trace():
    rng = np.random.default_rng(43)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        problem = ZengerProblem(spec=random_composite(rng, n),
                                alpha=random_alpha(rng, n))
        pair = solve_zenger(problem)
        objectives = [f for f, _ in pair.trace]
        assert all(b >= a for a, b in zip(objectives, objectives[1:]))


def test_coordinate_floor():
    # monotone ascent keeps every coordinate of the returned point above
    # exp(F(x0)/alpha_k)/2: one small coordinate would sink F below its
    # starting value
    rng = np.random.default_rng(44)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        spec = random_composite(rng, n)
        alpha = random_alpha(rng, n)
        pair = solve_zenger(ZengerProblem(spec=spec, alpha=alpha))
        ones = np.ones(n)
        f0 = log_utility(alpha, ones / (2.0 * eval_norm(spec, ones)))
        floors = np.exp(f0 / alpha) / 2.0
        assert np.all(np.abs(pair.w) >= floors)


def test_stationarity_brackets_dual_norm():
    rng = np.random.default_rng(45)
    problems = [
        ZengerProblem(spec=Example2Norm(12), alpha=geometric_alpha(0.25, 12)),
        ZengerProblem(spec=random_composite(rng, 4), alpha=random_alpha(rng, 4)),
    ]
    for problem in problems:
        pair = solve_zenger(problem)
        value, _ = dual_norm_lmo(problem.spec, pair.phi)
        lo = 1.0 - 10.0 * problem.tol.gap / float(np.min(problem.alpha))
        assert lo <= value <= 1.0 + problem.tol.certificate
        assert abs(float(pair.phi @ pair.w) - 1.0) <= problem.tol.certificate


def test_factorization_exactness():
    # named cases divide exactly; random cases are correctly rounded
    # quotients, so the product lands within an ulp of alpha
    pair = solve_zenger(ZengerProblem(spec=SupNorm(3), alpha=(0.5, 0.3, 0.2)))
    assert np.array_equal(pair.w * pair.phi, np.array([0.5, 0.3, 0.2]))
    rng = np.random.default_rng(46)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        alpha = random_alpha(rng, n)
        pair = solve_zenger(ZengerProblem(spec=random_composite(rng, n),
                                          alpha=alpha))
        assert np.max(np.abs(pair.w * pair.phi - alpha)) <= 4e-16


def test_certify_flags_scaled_bundle():
    problem = ZengerProblem(spec=SupNorm(3), alpha=(0.5, 0.3, 0.2))
    pair = solve_zenger(problem)
    broken = replace(pair, w=pair.w * 1.01)
    cert = certify(broken, problem)
    assert not cert.ok
    assert cert.norm_residual == pytest.approx(0.01, abs=1e-9)
    assert cert.pairing_residual == pytest.approx(0.01, abs=1e-9)
    assert cert.factor_residual == pytest.approx(0.005, abs=1e-9)


def test_scale_invariance():
    M = np.array([[1.0, 0.4], [0.2, 1.3], [-0.7, 0.9]])
    base = solve_zenger(
        ZengerProblem(spec=CompositeNorm(((1.0, M),)), alpha=(0.6, 0.4))
    )
    scaled = solve_zenger(
        ZengerProblem(spec=CompositeNorm(((2.5, M),)), alpha=(0.6, 0.4))
    )
    assert np.max(np.abs(scaled.w - base.w / 2.5)) <= 1e-9
    assert np.max(np.abs(scaled.phi - base.phi * 2.5)) <= 1e-9
    assert len(scaled.trace) == len(base.trace)
    for (_, g1), (_, g2) in zip(base.trace, scaled.trace):
        assert abs(g1 - g2) <= 1e-9


def test_nonconvergence_is_raised():
    # an unreachable gap tolerance turns finite termination into the error;
    # one iteration is not enough here because the optimum sits in a
    # different orthant than the starting point, so the gap stays positive
    rng = np.random.default_rng(0)
    problem = ZengerProblem(
        spec=random_composite(rng, 4),
        alpha=random_alpha(rng, 4),
        tol=Tolerances(gap=1e-300),
        max_iterations=1,
    )
    with pytest.raises(NonConvergence) as exc:
        solve_zenger(problem)
    assert exc.value.gap > 0.0


def test_brute_force_closed_forms():
    pair = brute_force_zenger(ZengerProblem(spec=SupNorm(2), alpha=(0.5, 0.5)))
    assert np.max(np.abs(pair.w - 1.0)) <= 1e-6

    spec = CompositeNorm(((1.0, np.diag([1.0, 2.0])),))
    pair = brute_force_zenger(ZengerProblem(spec=spec, alpha=(0.5, 0.5)))
    assert np.max(np.abs(pair.w - np.array([1.0, 0.5]))) <= 1e-6


def test_brute_force_rejects_large_problems():
    with pytest.raises(TooLarge):
        brute_force_zenger(ZengerProblem(spec=SupNorm(4), alpha=(0.25,) * 4))


def test_solver_agrees_with_grid_oracle():
    rng = np.random.default_rng(47)
    for _ in range(8):
        n = int(rng.integers(1, 4))
        problem = ZengerProblem(spec=random_composite(rng, n, max_blocks=2),
                                alpha=random_alpha(rng, n))
        fast = solve_zenger(problem)
        slow = brute_force_zenger(problem)
        assert abs(fast.objective - slow.objective) <= 1e-6


def test_log_utility_values():
    assert log_utility(np.array([1.0]), np.array([math.e])) == pytest.approx(1.0)
    assert log_utility(np.array([0.5, 0.5]), np.array([2.0, -2.0])) == (
        pytest.approx(math.log(2.0))
    )
