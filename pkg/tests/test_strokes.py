import math

import numpy as np
import pytest

from otto_monitor.strokes import (
    SIGMA_X,
    SIGMA_Z,
    BathSpec,
    Direction,
    Occupation,
    Parametric,
    PerfectReset,
    Protocol,
    StrokeHamiltonian,
    effective_rate,
    effective_transition_params,
    gibbs_state,
    occupation_number,
    parametric_unitary,
    protocol_step_error,
    protocol_unitary,
    thermal_channel,
)

from conftest import random_density_matrix

H1 = StrokeHamiltonian.tls(1.0)
H2 = StrokeHamiltonian.tls(3.2)


def ket(h, m):
    return h.vectors[:, m]


def outer(a, b):
    return np.outer(a, b.conj())


def test_tls_constructor():
    assert np.allclose(H2.energies, [-1.6, 1.6])
    assert np.abs(H2.matrix - 1.6 * SIGMA_Z).max() < 1e-15
    with pytest.raises(ValueError):
        StrokeHamiltonian(np.array([0.0, 1.0]), np.array([[1, 1], [0, 1]]))


def test_parametric_quasistatic():
    for phi in (0.0, 1.0, 4.0):
        u = parametric_unitary(Parametric(0.0, phi), H1, H2)
        expected = outer(ket(H2, 1), ket(H1, 1)) + outer(ket(H2, 0), ket(H1, 0))
        assert np.abs(u - expected).max() < 1e-15


def test_parametric_full_flip():
    u = parametric_unitary(Parametric(1.0, 0.0), H1, H2)
    expected = -outer(ket(H2, 1), ket(H1, 0)) + outer(ket(H2, 0), ket(H1, 1))
    assert np.abs(u - expected).max() < 1e-15


def test_parametric_unitarity_and_reversal():
    h1 = StrokeHamiltonian.from_matrix(0.5 * SIGMA_Z + 0.5 * SIGMA_X)
    h2 = StrokeHamiltonian.from_matrix(1.6 * SIGMA_Z + 0.5 * SIGMA_X)
    spec = Parametric(0.3, math.pi / 5)
    u1 = parametric_unitary(spec, h1, h2)
    u2 = parametric_unitary(spec, h1, h2, Direction.EXPANSION)
    assert np.abs(u1.conj().T @ u1 - np.eye(2)).max() < 1e-12
    assert np.abs(u2.conj().T @ u2 - np.eye(2)).max() < 1e-12
    # real eigenvectors: motion reversal is the transpose
    assert np.abs(u2 - u1.T).max() < 1e-14
    q1 = parametric_unitary(Parametric(0.0, 2.0), h1, h2)
    q2 = parametric_unitary(Parametric(0.0, 2.0), h1, h2, Direction.EXPANSION)
    assert np.abs(q2 @ q1 - np.eye(2)).max() < 1e-14


def test_parametric_requires_tls():
    h3 = StrokeHamiltonian.from_matrix(np.diag([0.0, 1.0, 2.0]))
    with pytest.raises(ValueError):
        parametric_unitary(Parametric(0.5), h3, h3)
    with pytest.raises(ValueError):
        Parametric(1.5)


def test_protocol_sudden_limit():
    proto = Protocol(1.0, 3.2, 1e-12, steps=4)
    h1, h2 = proto.endpoints()
    u = protocol_unitary(proto)
    assert np.abs(u - np.eye(2)).max() < 1e-10
    assert abs(effective_transition_params(u, h1, h2).r - 0.5) < 1e-10
    assert abs(abs(ket(h2, 1).conj() @ ket(h1, 0)) ** 2 - 0.5) < 1e-15


def test_protocol_step_halving():
    assert protocol_step_error(Protocol(1.0, 3.2, 3.5, steps=10_000)) < 1e-8


def test_protocol_adiabatic_suppression():
    proto = Protocol(1.0, 3.2, 200.0)
    h1, h2 = proto.endpoints()
    assert effective_transition_params(protocol_unitary(proto), h1, h2).r < 1e-2


def test_protocol_endpoint_hamiltonians():
    proto = Protocol(1.0, 3.2, 3.5)
    assert np.abs(proto.hamiltonian(0.0) - 0.5 * SIGMA_X).max() < 1e-15
    assert np.abs(proto.hamiltonian(3.5) - 1.6 * SIGMA_Z).max() < 1e-15
    assert np.abs(proto.hamiltonian(0.0, Direction.EXPANSION) - 1.6 * SIGMA_Z).max() < 1e-15
    assert np.abs(proto.hamiltonian(3.5, Direction.EXPANSION) - 0.5 * SIGMA_X).max() < 1e-15


def test_protocol_time_reversal_symmetry():
    proto = Protocol(1.0, 3.2, 3.5)
    u1 = protocol_unitary(proto)
    u2 = protocol_unitary(proto, Direction.EXPANSION)
    # Theta = complex conjugation in the sigma_z basis: Theta U^dagger Theta^dagger = U^T
    assert np.abs(u2 - np.conj(u1.conj().T)).max() < 1e-8
    assert np.abs(u1.conj().T @ u1 - np.eye(2)).max() < 1e-10


def test_effective_params_round_trip():
    tp = effective_transition_params(parametric_unitary(Parametric(0.3, math.pi / 5), H1, H2), H1, H2)
    assert abs(tp.r - 0.3) < 1e-12
    assert abs(tp.phi - math.pi / 5) < 1e-12
    assert not tp.not_two_parameter and not tp.phase_undefined


def test_effective_params_undefined_phase():
    tp = effective_transition_params(np.eye(2), H1, H1)
    assert tp.r == 0 and tp.phi == 0 and tp.phase_undefined


def test_effective_params_protocol():
    proto = Protocol(1.0, 3.2, 3.5)
    h1, h2 = proto.endpoints()
    tp = effective_transition_params(protocol_unitary(proto), h1, h2)
    assert 0 < tp.r < 1
    assert tp.residual < 1e-6 or tp.not_two_parameter


def test_effective_params_rejects_non_unitary():
    with pytest.raises(ValueError):
        effective_transition_params(2 * np.eye(2), H1, H2)


def test_gibbs_state():
    assert np.abs(gibbs_state(H1, 1e4) - H1.projector(0)).max() < 1e-12
    assert np.abs(gibbs_state(H1, 0.0) - np.eye(2) / 2).max() < 1e-15
    excited = H1.to_eigenbasis(gibbs_state(H1, 3.0))[1, 1].real
    assert abs(excited - 0.04742587317756678) < 1e-15
    # large energies must not overflow
    big = StrokeHamiltonian.tls(1e4)
    assert np.isfinite(gibbs_state(big, 10.0)).all()


def test_thermal_channel_zero_duration():
    c = thermal_channel(H2, BathSpec(0.2, 0.05, 0.0))
    assert np.abs(c.liouville - np.eye(4)).max() < 1e-15


def test_thermal_channel_detailed_balance():
    for tau in (0.5, 7.0, 40.0):
        c = thermal_channel(H2, BathSpec(0.2, 0.05, tau))
        g = gibbs_state(H2, 0.2)
        assert np.abs(c(g) - g).max() < 1e-12


def test_as_printed_occupation_is_not_gibbs_stationary():
    c = thermal_channel(H2, BathSpec(0.2, 0.05, 5000.0, Occupation.AS_PRINTED))
    g = gibbs_state(H2, 0.2)
    assert np.abs(c(g) - g).max() > 1e-3


def test_thermal_channel_cptp():
    for occ in Occupation:
        for beta, gamma, tau in ((0.2, 0.05, 22.0), (3.0, 1.0, 0.3), (10.0, 0.0, 4.0)):
            c = thermal_channel(H1, BathSpec(beta, gamma, tau, occ))
            assert c.is_trace_preserving() and c.is_completely_positive()


def test_perfect_reset(rng):
    c = thermal_channel(H1, PerfectReset(3.0))
    g = gibbs_state(H1, 3.0)
    for _ in range(3):
        assert np.abs(c(random_density_matrix(rng)) - g).max() < 1e-15


def rk4_master_equation(h, bath, rho, tau, dt=1e-4):
    """Integrate the GKSL equation for a TLS written out with sigma_+ and sigma_-."""
    n = occupation_number(bath.beta, h.gap, bath.occupation)
    sm = np.outer(h.vectors[:, 0], h.vectors[:, 1].conj())
    sp = sm.conj().T
    hm = h.matrix
    g_down, g_up = bath.gamma * (n + 1), bath.gamma * n

    def rhs(r):
        out = -1j * (hm @ r - r @ hm)
        out += g_down * (sm @ r @ sp - 0.5 * (sp @ sm @ r + r @ sp @ sm))
        out += g_up * (sp @ r @ sm - 0.5 * (sm @ sp @ r + r @ sm @ sp))
        return out

    steps = int(round(tau / dt))
    for _ in range(steps):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return rho


def test_thermal_channel_against_ode(rng):
    bath = BathSpec(beta=0.7, gamma=0.3, tau_b=2.0)
    h = StrokeHamiltonian.from_matrix(0.5 * SIGMA_X)
    rho0 = random_density_matrix(rng)
    expected = rk4_master_equation(h, bath, rho0, bath.tau_b)
    got = thermal_channel(h, bath)(rho0)
    assert np.abs(got - expected).max() < 1e-10
    n = occupation_number(bath.beta, h.gap)
    rate = bath.gamma * (2 * n + 1)
    assert abs(rate - effective_rate(h, bath)) < 1e-15
    a0, a1 = h.to_eigenbasis(rho0), h.to_eigenbasis(expected)
    assert abs(abs(a1[0, 1]) / abs(a0[0, 1]) - math.exp(-rate * bath.tau_b / 2)) < 1e-10
    p_inf = n / (2 * n + 1)
    assert abs((a1[1, 1].real - p_inf) / (a0[1, 1].real - p_inf) - math.exp(-rate * bath.tau_b)) < 1e-9
