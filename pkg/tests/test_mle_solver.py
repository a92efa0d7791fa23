import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degseq import (
    FitConfig,
    FitStatus,
    InfeasibleDegreesError,
    contraction_theta,
    expected_degrees,
    fit_mle,
    jacobian_phi,
    phi,
    posterior_mode,
    sample_graph,
)
from degseq.mle_solver import (
    hull_certificate,
    in_matrix_class,
    l1_lipschitz_check,
    matrix_class_product_bound_check,
    pseudo_degrees,
    two_step_ratio,
)
from oracles import central_difference


def _phi_direct(x, d):
    n = len(x)
    out = []
    for i in range(n):
        s = sum(1.0 / (math.exp(-x[j]) + math.exp(x[i])) for j in range(n) if j != i)
        out.append(math.log(d[i]) - math.log(s))
    return np.array(out)


def test_phi_symmetric_fixed_point():
    n = 7
    assert np.allclose(phi(np.zeros(n), np.full(n, (n - 1) / 2)), 0.0, atol=1e-15)


def test_phi_matches_direct_formula():
    x, d = np.array([1.0, 0.0, -1.0]), np.array([1.5, 1.0, 0.5])
    assert np.allclose(phi(x, d), _phi_direct(x, d), atol=1e-14)


def test_phi_fixes_mle():
    rng = np.random.default_rng(0)
    beta = rng.uniform(-1, 1, 12)
    d = expected_degrees(beta)
    assert np.allclose(phi(beta, d), beta, atol=1e-12)


def test_phi_rejects_nonpositive_degrees():
    with pytest.raises(InfeasibleDegreesError):
        phi(np.zeros(3), [1.0, 0.0, 1.0])


def test_phi_stable_for_large_arguments():
    x = np.array([300.0, -300.0, 0.0, 10.0])
    assert np.all(np.isfinite(phi(x, np.array([2.0, 1.0, 1.5, 1.0]))))


def test_regular_sequence_closed_form():
    rep = fit_mle(np.full(50, 20.0))
    assert rep.status is FitStatus.CONVERGED
    assert np.max(np.abs(rep.beta_hat - 0.5 * math.log(20 / 29))) <= 1e-8
    assert rep.iterations < 200


@pytest.mark.parametrize("d", [(1, 1), (5, 1, 1, 1, 1, 1)])
def test_nonexistent_mle_diverges(d):
    assert fit_mle(np.array(d, dtype=float)).status is FitStatus.DIVERGED


def test_infeasible_inputs():
    assert fit_mle(np.array([0.0, 1.0, 1.0])).status is FitStatus.INFEASIBLE
    assert fit_mle(np.array([3.0, 1.0, 1.0])).status is FitStatus.INFEASIBLE  # 3 > n - 1
    assert fit_mle(np.array([2.0, 2.0, 0.5, 0.5])).status is FitStatus.INFEASIBLE  # E(2) < 0


def test_hull_certificate_classes():
    assert hull_certificate(np.array([1.0, 1.0, 1.0]))[0] == "open"
    assert hull_certificate(np.array([2.0, 1.0, 1.0]))[0] == "boundary"
    assert hull_certificate(np.array([2.5, 1.0, 1.0]))[0] == "outside"


def test_sampled_null_graph_converges_near_zero():
    rng = np.random.default_rng(17)
    d = sample_graph(np.zeros(200), rng).degrees.astype(float)
    rep = fit_mle(d)
    assert rep.status is FitStatus.CONVERGED
    assert np.max(np.abs(rep.beta_hat)) <= 5 * math.sqrt(math.log(200) / 200)
    assert np.max(np.abs(expected_degrees(rep.beta_hat) - d)) <= 10 * rep.config.tol * 200


def test_fit_report_fields_and_json():
    rep = fit_mle(np.full(10, 4.0))
    assert rep.residual_linf <= rep.config.tol
    assert 0 <= rep.theta_hat < 1
    assert rep.error_bound >= 0
    js = rep.to_dict()
    assert js["status"] == "Converged" and len(js["beta_hat"]) == 10
    assert js["config"] == {"tol": 1e-10, "max_iter": 5000, "divergence_bound": 50.0}
    div = fit_mle(np.array([1.0, 1.0])).to_dict()
    assert div["beta_hat"] is None and div["error_bound"] is None


def test_max_iter_reported():
    rng = np.random.default_rng(4)
    d = expected_degrees(rng.uniform(-2, 2, 30))
    rep = fit_mle(d, FitConfig(max_iter=3))
    assert rep.status is FitStatus.MAX_ITER
    assert rep.iterations == 3 and rep.beta_hat is not None


def test_fit_config_validation():
    for bad in (dict(tol=0), dict(max_iter=0), dict(divergence_bound=-1)):
        with pytest.raises(ValueError):
            FitConfig(**bad)


@pytest.mark.parametrize("n, deg", [(10, 3.0), (30, 20.0), (50, 20.0)])
def test_error_bound_from_first_iterate_covers_true_error(n, deg):
    rep = fit_mle(np.full(n, deg))
    truth = 0.5 * math.log(deg / (n - 1 - deg))
    assert abs(0.0 - truth) <= rep.initial_error_bound


def test_permutation_equivariance():
    rng = np.random.default_rng(8)
    for _ in range(10):
        n = int(rng.integers(3, 40))
        d = expected_degrees(rng.uniform(-1.5, 1.5, n))
        perm = rng.permutation(n)
        a, b = fit_mle(d), fit_mle(d[perm])
        assert np.allclose(b.beta_hat, a.beta_hat[perm], atol=1e-8)


def test_uniqueness_from_random_starts():
    rng = np.random.default_rng(9)
    n = 25
    d = expected_degrees(rng.uniform(-1, 1, n))
    tol = 1e-10
    sols = []
    for _ in range(10):
        x0 = rng.uniform(-3, 3, n)
        rep = fit_mle(d, FitConfig(tol=tol, x0=x0))
        assert rep.status is FitStatus.CONVERGED
        sols.append(rep.beta_hat)
    spread = np.max(np.abs(np.array(sols) - sols[0]))
    assert spread <= 100 * tol


def test_empirical_theta_below_certified():
    rng = np.random.default_rng(10)
    for _ in range(20):
        n = int(rng.integers(3, 40))
        d = expected_degrees(rng.uniform(-1, 1, n))
        rep = fit_mle(d)
        assert rep.theta_hat <= contraction_theta(rep.max_iterate_norm, n) + 1e-9


def test_contraction_theta():
    assert contraction_theta(0, 3) == pytest.approx(0.75)
    vals = [contraction_theta(K, 10) for K in np.linspace(0, 3, 50)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1
    with pytest.raises(ValueError):
        contraction_theta(1.0, 2)


def test_jacobian_row_sums_bounds_and_finite_differences():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(3, 41))
        K = float(rng.uniform(0.1, 2.0))
        x = rng.uniform(-K, K, n)
        d = rng.uniform(0.5, n - 1.5, n)
        J = jacobian_phi(x, d)
        assert np.allclose(np.abs(J).sum(axis=1), 1.0, atol=1e-12)
        off = J[~np.eye(n, dtype=bool)]
        assert np.all(off >= -math.exp(2 * K) / (n - 1) - 1e-15)
        assert np.all(off <= -math.exp(-4 * K) / (2 * (n - 1)) + 1e-15)
        diag = np.diag(J)
        assert np.all(diag >= 0.5 * math.exp(-4 * K)) and np.all(diag <= math.exp(2 * K))
        if n <= 12:
            assert np.max(np.abs(central_difference(lambda z: phi(z, d), x) - J)) <= 1e-5


def test_matrix_class_examples():
    n, delta = 3, 0.5
    A = np.array([[0.5, -0.25, -0.25], [-0.25, 0.5, -0.25], [-0.25, -0.25, 0.5]])
    assert in_matrix_class(A, delta)
    assert matrix_class_product_bound_check(A, A, delta)
    # the 3x3 product sits exactly on the bound 1 - 2(n-2)δ²/(n-1) = 3/4
    assert np.abs(A @ A).sum(axis=1) == pytest.approx([1 - 2 * (n - 2) * delta**2 / (n - 1)] * 3)
    with pytest.raises(ValueError):
        matrix_class_product_bound_check(np.eye(3), A, delta)


def _random_class_member(rng, n, delta):
    off = -rng.uniform(delta / (n - 1), 1.0, (n, n))
    np.fill_diagonal(off, 0)
    A = off.copy()
    for i in range(n):
        row_off = -A[i].sum()
        diag = rng.uniform(delta, 1.0)
        total = row_off + diag
        if total > 1:
            # shrink toward the class floor while keeping every bound
            lo_off = delta  # n-1 entries at −δ/(n−1)
            scale = (1 - delta - lo_off) / max(total - delta - lo_off, 1e-12)
            A[i] = -(delta / (n - 1)) + (A[i] + delta / (n - 1)) * scale
            A[i, i] = delta + (diag - delta) * scale
        else:
            A[i, i] = diag
    return A


def test_matrix_class_products_random():
    rng = np.random.default_rng(12)
    for _ in range(500):
        n = int(rng.integers(3, 21))
        delta = float(rng.uniform(0.01, 0.5))
        A, B = _random_class_member(rng, n, delta), _random_class_member(rng, n, delta)
        assert in_matrix_class(A, delta) and in_matrix_class(B, delta)
        assert matrix_class_product_bound_check(A, B, delta)


def test_l1_lipschitz():
    rng = np.random.default_rng(13)
    x = rng.uniform(-1, 1, 5)
    d = np.full(5, 2.0)
    assert l1_lipschitz_check(x, x, d)
    y = x.copy()
    y[2] += 1e-6
    assert l1_lipschitz_check(x, y, d)
    for _ in range(200):
        n = int(rng.integers(2, 51))
        K = float(rng.uniform(0, 2))
        x, y = rng.uniform(-K, K, n), rng.uniform(-K, K, n)
        assert l1_lipschitz_check(x, y, rng.uniform(0.5, max(n - 1.5, 0.6), n))


@given(st.integers(3, 30), st.floats(0.05, 1.5), st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_two_step_contraction_and_one_step_nonexpansion(n, K, seed):
    rng = np.random.default_rng(seed)
    beta = rng.uniform(-K / 2, K / 2, n)
    d = expected_degrees(beta)
    x, y = rng.uniform(-K, K, n), rng.uniform(-K, K, n)
    ratio, Kp = two_step_ratio(x, y, d)
    assert ratio <= contraction_theta(Kp, n) + 1e-9
    assert np.max(np.abs(phi(x, d) - phi(y, d))) <= np.max(np.abs(x - y)) + 1e-12


def test_posterior_mode_examples():
    rep = posterior_mode([1, 1], 1.0, [0.5, 0.5])
    assert rep.status is FitStatus.CONVERGED
    assert np.allclose(rep.beta_hat, 0.5 * math.log(3), atol=1e-8)
    d0 = np.array([2.5, 1.5, 1.5, 1.0, 1.0, 1.5])
    a, b = posterior_mode(d0, 2.0, d0), fit_mle(d0)
    assert np.allclose(a.beta_hat, b.beta_hat, atol=1e-12)
    star = np.array([5.0, 1, 1, 1, 1, 1])
    assert fit_mle(star).status is FitStatus.DIVERGED
    assert posterior_mode(star, 1.0, np.full(6, 2.5)).status is FitStatus.CONVERGED


def test_pseudo_degree_validation():
    assert np.allclose(pseudo_degrees([1, 1], 1.0, [0.5, 0.5]), 0.75)
    with pytest.raises(ValueError):
        pseudo_degrees([1, 1], 0.0, [0.5, 0.5])
    with pytest.raises(ValueError):
        pseudo_degrees([1, 1], 1.0, [1.0, 0.5])
