import numpy as np
import pytest

from wlmf import (
    CovariancePair,
    DegenerateWindowError,
    DimensionMismatchError,
    InvalidImproprietyError,
    NotPositiveDefiniteError,
    SingularAtOneError,
    analytic_covariances,
    approx_snr_gain,
    aut_decompose,
    demo_model,
    design_matched_sequence,
    g_derivative,
    g_of_rho,
    impropriety_profile,
    lower_bound_rho,
    normalized_snr_bias,
    rotated_input,
    snr_gain,
)

from helpers import jointly_diagonalizable_pair, random_improper_pair

DEMO_LAMBDA_R = np.array([0.98217, 0.93223, 0.86005, 0.77995, 0.70777, 0.65783])
DEMO_LAMBDA_C = np.array([0.4081, 0.4081, 0.4039, 0.4039, 0.4005, 0.4005])
DEMO_RHO = np.array([0.4155, 0.4378, 0.4696, 0.5179, 0.5659, 0.6088])
DESIGNED_SEQUENCE = np.array(
    [
        0.77 + 0.13j,
        0.71 + 0.25j,
        -0.91 - 0.33j,
        -0.87 - 0.07j,
        -1.65 - 0.62j,
        0.74 + 0.27j,
    ]
)


def demo_aut():
    return aut_decompose(analytic_covariances(demo_model(0.5), 6))


def random_window(rng, dim):
    return rng.standard_normal(dim) + 1j * rng.standard_normal(dim)


def test_aut_demo_spectra():
    aut = demo_aut()
    assert np.allclose(aut.lambda_r, DEMO_LAMBDA_R, atol=1e-4)
    assert np.allclose(aut.lambda_c, DEMO_LAMBDA_C, atol=1e-4)
    profile = impropriety_profile(aut, rotated_input(aut, DESIGNED_SEQUENCE))
    assert np.allclose(profile.rho, DEMO_RHO, atol=1e-3)
    assert np.all(np.diff(aut.lambda_r) <= 0)
    assert np.all(np.diff(aut.lambda_c) <= 1e-15)


def test_aut_proper_noise_is_exact():
    rng = np.random.default_rng(51)
    r = random_improper_pair(rng, 5).r
    cov = CovariancePair(r=r, c=np.zeros((5, 5)))
    aut = aut_decompose(cov)
    assert np.all(aut.lambda_c == 0.0)
    assert aut.offdiag_residual < 1e-10
    rotated = aut.q.conj().T @ cov.r @ aut.q
    assert np.allclose(rotated, np.diag(aut.lambda_r), atol=1e-10)


def test_aut_jointly_diagonalizable_is_exact():
    rng = np.random.default_rng(52)
    for _ in range(10):
        cov = jointly_diagonalizable_pair(rng, int(rng.integers(2, 7)))
        aut = aut_decompose(cov)
        assert aut.offdiag_residual < 1e-8


def test_aut_rejects_indefinite_covariance():
    with pytest.raises(NotPositiveDefiniteError):
        aut_decompose(CovariancePair(r=-np.eye(3), c=np.zeros((3, 3))))


def test_rotated_input_preserves_norm_and_roundtrips():
    rng = np.random.default_rng(53)
    aut = demo_aut()
    x = random_window(rng, 6)
    xt = rotated_input(aut, x)
    assert np.isclose(np.linalg.norm(xt), np.linalg.norm(x), rtol=1e-12)
    assert np.allclose(aut.q @ xt, x, atol=1e-12)


def test_rotated_diag_diagnostic():
    aut = demo_aut()
    cov = analytic_covariances(demo_model(0.5), 6)
    trace_share = np.real(np.trace(cov.r)) / 6.0
    assert np.isclose(np.mean(aut.rotated_diag), trace_share, rtol=1e-12)
    assert np.all(np.abs(aut.rotated_diag - trace_share) < 0.05)


def test_profile_epsilon_extremes():
    cov = CovariancePair(r=np.eye(4), c=np.zeros((4, 4)))
    aut = aut_decompose(cov)
    rotated = np.array([2.0 + 0j, 3.0j, (1.0 + 1.0j) / np.sqrt(2.0), 0.0])
    profile = impropriety_profile(aut, rotated)
    assert np.allclose(profile.epsilon, [1.0, -1.0, 0.0, 0.0], atol=1e-12)
    assert np.array_equal(profile.zero_mask, [False, False, False, True])
    assert np.all(profile.rho == 0.0)


def test_profile_rejects_batch_input():
    aut = demo_aut()
    with pytest.raises(DimensionMismatchError):
        impropriety_profile(aut, np.ones((6, 2), dtype=complex))


def test_g_trivial_values():
    assert g_of_rho(0.0, 0.7) == 1.0
    assert g_of_rho(0.0, -0.3) == 1.0
    rho = np.linspace(0.0, 0.95, 50)
    circular = g_of_rho(rho, np.zeros_like(rho))
    assert np.allclose(circular, (1 + rho**2) / (1 - rho**2), rtol=1e-12)
    assert np.all(np.diff(circular) > 0)


def test_g_validation():
    with pytest.raises(SingularAtOneError):
        g_of_rho(1.0, 0.5)
    with pytest.raises(InvalidImproprietyError):
        g_of_rho(0.5, 1.5)
    with pytest.raises(InvalidImproprietyError):
        g_of_rho(-0.2, 0.5)
    with pytest.raises(SingularAtOneError):
        g_derivative(1.0, 0.0)


def test_g_value_at_minimizer():
    for eps in (-0.8, -0.3, 0.0, 0.2, 0.5, 0.6, 0.8, 0.95):
        root = lower_bound_rho(eps)
        floor = np.sqrt(1 - eps**2) if eps > 0 else 1.0
        assert abs(g_of_rho(root, eps) - floor) <= 1e-10


def test_g_derivative_closed_form_matches_finite_differences():
    rng = np.random.default_rng(54)
    for _ in range(200):
        rho = float(rng.uniform(0.01, 0.9))
        eps = float(rng.uniform(-0.99, 0.99))
        h = 1e-6
        numeric = (g_of_rho(rho + h, eps) - g_of_rho(rho - h, eps)) / (2 * h)
        analytic = g_derivative(rho, eps)
        assert abs(analytic - numeric) <= 1e-5 * max(abs(analytic), 1.0)


def test_g_derivative_signs_and_root():
    assert g_derivative(0.0, 0.4) == -0.8
    assert g_derivative(0.0, -0.5) == 1.0
    rho = np.linspace(0.0, 0.95, 100)
    for eps in (-0.9, -0.2, 0.0):
        assert np.all(g_derivative(rho, np.full_like(rho, eps)) >= 0.0)
    root = lower_bound_rho(0.6)
    assert np.isclose(root, 1.0 / 3.0, rtol=1e-12)
    assert abs(g_derivative(root, 0.6)) <= 1e-12
    assert np.isclose(g_of_rho(root, 0.6), 0.8, rtol=1e-12)


def test_lower_bound_rho_branches_and_inverse():
    assert lower_bound_rho(-0.7) == 0.0
    assert lower_bound_rho(0.0) == 0.0
    assert lower_bound_rho(1.0) == 1.0
    for rho in np.linspace(0.0, 0.99, 40):
        eps = 2 * rho / (1 + rho**2)
        assert abs(lower_bound_rho(eps) - rho) <= 1e-9
    with pytest.raises(InvalidImproprietyError):
        lower_bound_rho(1.2)


def test_g_stays_above_lower_bound_on_grid():
    rho = np.arange(0.0, 0.999, 1e-3)
    for eps in (-0.8, -0.3, 0.0, 0.2, 0.5, 0.6, 0.8, 0.95):
        values = g_of_rho(rho, np.full_like(rho, eps))
        floor = np.sqrt(1 - eps**2)
        assert np.all(values >= floor - 1e-12)
        minimizer = lower_bound_rho(eps)
        assert abs(rho[int(np.argmin(values))] - minimizer) <= 1e-3 + 1e-12


def test_g_is_midpoint_convex():
    rng = np.random.default_rng(55)
    for eps in (0.2, 0.5, 0.8):
        a = rng.uniform(0.0, 0.95, size=300)
        b = rng.uniform(0.0, 0.95, size=300)
        eps_arr = np.full_like(a, eps)
        lhs = g_of_rho((a + b) / 2, eps_arr)
        rhs = (g_of_rho(a, eps_arr) + g_of_rho(b, eps_arr)) / 2
        assert np.all(lhs <= rhs + 1e-12)


def test_approx_gain_exact_for_proper_noise():
    rng = np.random.default_rng(56)
    for _ in range(50):
        dim = int(rng.integers(1, 8))
        r = random_improper_pair(rng, dim).r
        cov = CovariancePair(r=r, c=np.zeros((dim, dim)))
        x = random_window(rng, dim)
        exact = snr_gain(x, cov)
        approx = approx_snr_gain(x, aut_decompose(cov))
        assert abs(approx - exact) <= 1e-9 * max(exact, 1.0)


def test_approx_gain_exact_when_jointly_diagonalizable():
    rng = np.random.default_rng(57)
    for _ in range(20):
        dim = int(rng.integers(2, 7))
        cov = jointly_diagonalizable_pair(rng, dim)
        x = random_window(rng, dim)
        exact = snr_gain(x, cov)
        approx = approx_snr_gain(x, aut_decompose(cov))
        assert abs(approx - exact) <= 1e-8 * max(exact, 1.0)


def test_approx_gain_nonnegative_and_batch_consistent():
    rng = np.random.default_rng(58)
    aut = demo_aut()
    windows = rng.standard_normal((6, 9)) + 1j * rng.standard_normal((6, 9))
    batch = approx_snr_gain(windows, aut)
    assert batch.shape == (9,)
    assert np.all(batch >= 0.0)
    singles = np.array([approx_snr_gain(windows[:, k], aut) for k in range(9)])
    assert np.allclose(batch, singles, rtol=1e-12)


def test_approx_gain_tracks_exact_for_demo_noise():
    # The basis only approximately diagonalizes R, so per-window agreement is
    # loose while the deviation averages out across windows of a circular
    # Gaussian signal.
    rng = np.random.default_rng(59)
    cov = analytic_covariances(demo_model(0.5), 6)
    aut = aut_decompose(cov)
    for _ in range(20):
        x = random_window(rng, 6)
        exact = snr_gain(x, cov)
        approx = approx_snr_gain(x, aut)
        assert 0.5 * exact < approx < 2.0 * exact
    signal = random_window(rng, 4000)
    low_cov = analytic_covariances(demo_model(0.2), 6)
    assert abs(normalized_snr_bias(signal, low_cov)) < 0.03


def test_normalized_bias_zero_when_decomposition_exact():
    rng = np.random.default_rng(60)
    cov = jointly_diagonalizable_pair(rng, 4)
    signal = random_window(rng, 200)
    assert abs(normalized_snr_bias(signal, cov)) <= 1e-8


def test_normalized_bias_grows_with_impropriety():
    rng = np.random.default_rng(61)
    signal = random_window(rng, 4000)

    def bias_at(rho_u):
        cov = analytic_covariances(demo_model(rho_u), 8)
        return normalized_snr_bias(signal, cov)

    low, mid, high = bias_at(0.04), bias_at(0.1), bias_at(0.8)
    assert abs(low) < 0.02
    assert high > mid


def test_normalized_bias_rejects_degenerate_windows():
    cov = analytic_covariances(demo_model(0.5), 6)
    with pytest.raises(DegenerateWindowError):
        normalized_snr_bias(np.zeros(80, dtype=complex), cov)


def test_designed_sequence_hits_target_epsilon():
    # Rejection keeps only pairs whose circularity quotients stay below one;
    # the designer is singular beyond that by construction.
    rng = np.random.default_rng(62)
    done = 0
    while done < 25:
        dim = int(rng.integers(1, 8))
        cov = random_improper_pair(rng, dim)
        aut = aut_decompose(cov)
        try:
            x = design_matched_sequence(aut, magnitudes=np.ones(dim))
        except SingularAtOneError:
            continue
        profile = impropriety_profile(aut, rotated_input(aut, x))
        target = 2 * profile.rho / (1 + profile.rho**2)
        assert np.max(np.abs(profile.epsilon - target)) <= 1e-10
        done += 1


def test_designed_sequence_proper_noise_balances_parts():
    rng = np.random.default_rng(63)
    r = random_improper_pair(rng, 5).r
    aut = aut_decompose(CovariancePair(r=r, c=np.zeros((5, 5))))
    x = design_matched_sequence(aut, magnitudes=np.ones(5))
    xt = rotated_input(aut, x)
    assert np.allclose(np.abs(xt.real), np.abs(xt.imag), atol=1e-12)


def test_designed_sequence_magnitude_validation():
    aut = demo_aut()
    with pytest.raises(DimensionMismatchError):
        design_matched_sequence(aut, magnitudes=np.ones(4))
    with pytest.raises(ValueError):
        design_matched_sequence(aut, magnitudes=np.zeros(6))
    first = design_matched_sequence(aut, rng=7)
    second = design_matched_sequence(aut, rng=7)
    assert np.array_equal(first, second)


def test_frozen_design_matches_targets_up_to_basis_rotation():
    # The Takagi values come in equal pairs, so the uncorrelating basis is
    # only fixed up to a real rotation inside each pair. The frozen reference
    # design must hit the per-component epsilon targets in some such gauge.
    aut = demo_aut()
    xt = rotated_input(aut, DESIGNED_SEQUENCE)
    rho = impropriety_profile(aut, xt).rho
    target = 2 * rho / (1 + rho**2)
    angles = np.linspace(0.0, 2 * np.pi, 20001)
    cos, sin = np.cos(angles), np.sin(angles)
    for block in ([0, 1], [2, 3], [4, 5]):
        assert np.isclose(aut.lambda_c[block[0]], aut.lambda_c[block[1]], rtol=1e-8)
        v0, v1 = xt[block[0]], xt[block[1]]
        rotated0 = cos * v0 + sin * v1
        rotated1 = -sin * v0 + cos * v1
        dev0 = np.abs(np.real(rotated0**2) / np.abs(rotated0) ** 2 - target[block[0]])
        dev1 = np.abs(np.real(rotated1**2) / np.abs(rotated1) ** 2 - target[block[1]])
        assert float(np.min(np.maximum(dev0, dev1))) <= 0.05


def test_rho_clamp_and_singularity():
    dim = 3
    slightly_over = CovariancePair(r=np.eye(dim), c=(1 + 5e-10) * np.eye(dim))
    profile = impropriety_profile(
        aut_decompose(slightly_over), np.ones(dim, dtype=complex)
    )
    assert np.all(profile.rho <= 1.0 - 1e-9)
    assert np.isfinite(approx_snr_gain(np.ones(dim, dtype=complex), aut_decompose(slightly_over)))
    far_over = CovariancePair(r=np.eye(dim), c=(1 + 2e-5) * np.eye(dim))
    with pytest.raises(SingularAtOneError):
        impropriety_profile(aut_decompose(far_over), np.ones(dim, dtype=complex))
