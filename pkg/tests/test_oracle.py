import math

import numpy as np
import pytest

from squeeze_dyn import (
    ChannelKind,
    LindbladParams,
    apply_channel,
    apply_field_rotation,
    build_oat_state,
    collective_moments,
    integrate_single_qubit_generator,
    kraus_operators,
    validate_density_matrix,
    xi2_from_moments,
    xi2_from_state,
    xi2_oat,
    xi2_prime_from_moments,
    xi2_prime_from_state,
)
from squeeze_dyn.errors import (
    DegenerateDenominator,
    InvalidKappa,
    NTooLarge,
    StepInstability,
    ValidationError,
)
from squeeze_dyn.kappa import ReservoirConfig, kappa_lorentzian
from squeeze_dyn.oracle import SIGMA_X, SIGMA_Y, SIGMA_Z


def random_density(rng, dim=2):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def test_single_particle_state_is_plus():
    psi = build_oat_state(1, 0.7)
    np.testing.assert_allclose(psi, [1 / math.sqrt(2)] * 2, atol=1e-15)


def test_zero_angle_state_is_uniform():
    psi = build_oat_state(4, 0.0)
    np.testing.assert_allclose(psi, np.full(16, 0.25), atol=1e-15)


def test_state_norm_and_cap():
    assert np.linalg.norm(build_oat_state(6, 0.37)) == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(NTooLarge):
        build_oat_state(13, 0.1)


def test_two_particle_squeezing_matches_closed_form():
    psi = build_oat_state(2, math.pi / 6)
    assert xi2_from_state(psi).value == pytest.approx(2.0 / 3.0, abs=1e-12)


@pytest.mark.parametrize("n", [3, 5])
@pytest.mark.parametrize("alpha", [0.2, 0.7, 1.1])
def test_mean_spin_magnitude(n, alpha):
    m = collective_moments(build_oat_state(n, alpha))
    expected = (n / 2) * math.cos(alpha) ** (n - 1)
    assert np.linalg.norm(m.mean_spin) == pytest.approx(abs(expected), abs=1e-12)


def test_field_rotation_identity_and_period():
    psi = build_oat_state(3, 0.4)
    np.testing.assert_allclose(apply_field_rotation(psi, 0.7, 0.0), psi)
    rotated = apply_field_rotation(psi, 1.0, 2 * math.pi)
    m0 = collective_moments(psi)
    m1 = collective_moments(rotated)
    np.testing.assert_allclose(m0.mean_spin, m1.mean_spin, atol=1e-12)
    np.testing.assert_allclose(m0.corr, m1.corr, atol=1e-12)


def test_field_rotation_moves_css_to_y():
    psi = build_oat_state(4, 0.0)  # coherent state along +x
    rotated = apply_field_rotation(psi, 1.0, math.pi / 2)
    m = collective_moments(rotated)
    np.testing.assert_allclose(m.mean_spin, [0.0, 2.0, 0.0], atol=1e-12)


@pytest.mark.parametrize("delta_t", [0.7, 2.1])
def test_field_rotation_leaves_squeezing_invariant(delta_t):
    psi = build_oat_state(4, 0.3)
    rotated = apply_field_rotation(psi, 1.0, delta_t)
    assert xi2_from_state(rotated).value == pytest.approx(
        xi2_from_state(psi).value, abs=1e-12
    )
    assert xi2_prime_from_state(rotated).value == pytest.approx(
        xi2_prime_from_state(psi).value, abs=1e-12
    )


@pytest.mark.parametrize("kind", list(ChannelKind))
def test_kraus_completeness(kind):
    for kappa in (1.0, 0.6, 0.0, -0.8):
        ops = kraus_operators(kind, kappa)
        total = sum(e.conj().T @ e for e in ops)
        np.testing.assert_allclose(total, np.eye(2), atol=1e-15)


@pytest.mark.parametrize("kind", list(ChannelKind))
def test_identity_channel_at_kappa_one(kind):
    rng = np.random.default_rng(3)
    rho = np.kron(random_density(rng), random_density(rng))
    out = apply_channel(rho, kind, 1.0)
    assert np.max(np.abs(out - rho)) <= 1e-14


def test_depolarizing_kappa_zero_gives_maximally_mixed():
    psi = build_oat_state(3, 0.5)
    out = apply_channel(np.outer(psi, psi.conj()), ChannelKind.DEPOLARIZING, 0.0)
    np.testing.assert_allclose(out, np.eye(8) / 8, atol=1e-14)


def test_damping_kappa_zero_decays_to_ground():
    psi = build_oat_state(3, 0.5)
    out = apply_channel(np.outer(psi, psi.conj()), ChannelKind.DAMPING, 0.0)
    expected = np.zeros((8, 8), dtype=complex)
    expected[0, 0] = 1.0  # index 0 is |down...down>
    np.testing.assert_allclose(out, expected, atol=1e-14)


def test_invalid_kappa_rejected():
    with pytest.raises(InvalidKappa):
        kraus_operators(ChannelKind.DEPHASING, 1.2)


@pytest.mark.parametrize("kind", list(ChannelKind))
def test_channel_outputs_completely_positive(kind):
    rng = np.random.default_rng(11)
    for _ in range(200):
        rho = random_density(rng)
        kappa = float(rng.uniform(-1.0, 1.0))
        out = apply_channel(rho, kind, kappa)
        assert np.linalg.eigvalsh(out)[0] >= -1e-10
        validate_density_matrix(out, herm_tol=1e-12, trace_tol=1e-12)


def test_css_moments():
    m = collective_moments(build_oat_state(5, 0.0))
    np.testing.assert_allclose(m.mean_spin, [2.5, 0, 0], atol=1e-13)
    cov = m.cov
    assert cov[1, 1] == pytest.approx(5 / 4, abs=1e-13)
    assert cov[2, 2] == pytest.approx(5 / 4, abs=1e-13)


def test_maximally_mixed_moments():
    n = 3
    rho = np.eye(2**n, dtype=complex) / 2**n
    m = collective_moments(rho)
    np.testing.assert_allclose(m.mean_spin, 0.0, atol=1e-14)
    np.testing.assert_allclose(m.corr, (n / 4) * np.eye(3), atol=1e-14)
    assert math.isinf(xi2_from_moments(m).value)
    assert xi2_prime_from_moments(m).value == pytest.approx(n, rel=1e-12)


def test_moments_reproduce_closed_form():
    m = collective_moments(build_oat_state(3, 0.4))
    assert xi2_from_moments(m).value == pytest.approx(xi2_oat(3, 0.4).value, abs=1e-12)


def test_vector_and_matrix_moment_paths_agree():
    psi = build_oat_state(4, 0.3)
    mv = collective_moments(psi)
    mm = collective_moments(np.outer(psi, psi.conj()))
    np.testing.assert_allclose(mv.mean_spin, mm.mean_spin, atol=1e-13)
    np.testing.assert_allclose(mv.corr, mm.corr, atol=1e-13)


def test_css_prime_parameter_is_one():
    m = collective_moments(build_oat_state(4, 0.0))
    assert xi2_prime_from_moments(m).value == pytest.approx(1.0, abs=1e-12)


def test_prime_denominator_degenerate_for_singlet():
    psi = np.zeros(4, dtype=complex)
    psi[1], psi[2] = -1 / math.sqrt(2), 1 / math.sqrt(2)
    with pytest.raises(DegenerateDenominator):
        xi2_prime_from_state(psi)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_permutation_symmetry_of_decohered_state(n):
    psi = build_oat_state(n, 0.4)
    rho = apply_channel(np.outer(psi, psi.conj()), ChannelKind.DAMPING, 0.7)
    dim = 2**n
    for q1 in range(n):
        for q2 in range(q1 + 1, n):
            perm = np.arange(dim)
            b1, b2 = n - 1 - q1, n - 1 - q2
            v1 = (perm >> b1) & 1
            v2 = (perm >> b2) & 1
            swapped = perm & ~(1 << b1) & ~(1 << b2) | (v2 << b1) | (v1 << b2)
            assert np.max(np.abs(rho[np.ix_(swapped, swapped)] - rho)) <= 1e-12


def test_density_matrix_validation_raises():
    with pytest.raises(ValidationError):
        validate_density_matrix(np.array([[1.0, 0.5], [0.0, 0.0]]))
    with pytest.raises(ValidationError):
        validate_density_matrix(np.array([[2.0, 0.0], [0.0, -1.0]]))


# --- single-qubit generator ---

PLUS = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
UP = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


def test_generator_identity_at_zero_time():
    chi = integrate_single_qubit_generator(LindbladParams.dephasing(0.1), PLUS, 0.0)
    np.testing.assert_allclose(chi, PLUS)


def test_generator_dephasing_coherence_decay():
    gamma, t = 0.05, 30.0
    chi = integrate_single_qubit_generator(LindbladParams.dephasing(gamma), PLUS, t)
    assert abs(chi[0, 1]) == pytest.approx(0.5 * math.exp(-gamma * t), abs=1e-9)
    np.testing.assert_allclose(np.diag(chi).real, [0.5, 0.5], atol=1e-10)


def test_generator_damping_population_decay():
    gamma, t = 0.08, 25.0
    chi = integrate_single_qubit_generator(LindbladParams.damping(gamma), UP, t)
    assert chi[1, 1].real == pytest.approx(math.exp(-gamma * t), abs=1e-9)


def test_generator_depolarizing_bloch_decay():
    gamma, t = 0.06, 20.0
    params = LindbladParams.depolarizing(gamma)
    chi = integrate_single_qubit_generator(params, PLUS, t)
    bloch = [float(np.trace(chi @ s).real) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)]
    assert np.linalg.norm(bloch) == pytest.approx(math.exp(-gamma * t), abs=1e-9)


def test_generator_field_rotation_direction():
    # coherent part alone rotates +x toward +y, matching the mean-spin
    # direction convention
    chi = integrate_single_qubit_generator(
        LindbladParams.dephasing(0.0), PLUS, math.pi / 2, delta=1.0
    )
    assert float(np.trace(chi @ SIGMA_Y).real) == pytest.approx(1.0, abs=1e-9)


def test_generator_negative_rate_interval_regrows_coherence():
    # time-local dephasing driven by the strong-coupling decoherence
    # function on a window where |kappa| grows: the rate is negative and
    # the physically evolved coherence tracks kappa(t)^2
    res = ReservoirConfig(gamma=0.01, eta0=10.0)
    d = math.sqrt(res.discriminant)
    t0, t1 = 8.0, 14.0

    def kdot(t):
        return -math.exp(-res.gamma * t / 2) * math.sin(d * t / 2) * (
            res.eta0 * res.gamma / d
        )

    def rate(tau):
        t = t0 + tau
        return -2.0 * kdot(t) / kappa_lorentzian(res, t)

    assert rate(1.0) < 0  # backflow window
    k0 = kappa_lorentzian(res, t0)
    chi0 = np.array([[0.5, 0.5 * k0**2], [0.5 * k0**2, 0.5]], dtype=complex)
    params = LindbladParams.dephasing(1.0)
    chi = integrate_single_qubit_generator(params, chi0, t1 - t0, rate_scale=rate, step=1e-3)
    expected = 0.5 * kappa_lorentzian(res, t1) ** 2
    assert abs(chi[0, 1]) == pytest.approx(expected, abs=1e-8)
    assert abs(chi[0, 1]) > abs(chi0[0, 1])  # coherence grew back


def test_generator_instability_detected():
    # step far beyond the stability boundary: the populations blow up and
    # float cancellation drives the trace off 1
    with pytest.raises(StepInstability):
        integrate_single_qubit_generator(LindbladParams.damping(1.0), UP, 240.0, step=6.0)
