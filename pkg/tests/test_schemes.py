import math

import numpy as np
import pytest

from otto_monitor.linops import channel_from_kraus, fixed_point, fixed_point_power, frobenius_distance, vec
from otto_monitor.schemes import (
    CycleSpec,
    Scheme,
    SchemeConfig,
    WorkUnitaries,
    conditional_block,
    cycle_channel,
    nondegeneracy_check,
    steady_state_for_scheme,
    suppression_weights,
    unmonitored_channel,
)
from otto_monitor.strokes import BathSpec, Parametric, PerfectReset, StrokeHamiltonian, gibbs_state

from conftest import BETA_C, fig2_cycle, parametric_cycle, random_density_matrix, random_kraus

POINTER_SCHEMES = ("S1", "S2", "S3")


def chain(cycle, m, mp, rho):
    """Dense evaluation of the sandwiched product for one pair of index vectors."""
    u1, u2 = cycle.unitaries
    p = [h.projectors() for h in cycle.point_hamiltonians]
    x = p[1][m[1]] @ u1 @ p[0][m[0]] @ rho @ p[0][mp[0]] @ u1.conj().T @ p[1][mp[1]]
    x = cycle.hot_channel(x)
    x = p[3][m[3]] @ u2 @ p[2][m[2]] @ x @ p[2][mp[2]] @ u2.conj().T @ p[3][mp[3]]
    return cycle.cold_channel(x)


def test_scheme_config_validation():
    with pytest.raises(ValueError):
        SchemeConfig(Scheme.S1, (1.0, 1.0))
    with pytest.raises(ValueError):
        Scheme.parse("S4")
    cfg = SchemeConfig("s2", (1.0, 2.0, 3.0))
    assert cfg.scheme is Scheme.S2 and not cfg.is_uniform
    assert SchemeConfig.uniform("S3", 0.5).widths == (0.5, 0.5)
    with pytest.raises(ValueError):
        SchemeConfig.uniform("S3")


def test_engine_ordering_enforced():
    h = StrokeHamiltonian.tls(1.0)
    with pytest.raises(ValueError):
        CycleSpec(h, h, Parametric(0.1), BathSpec(3.0, 0.1, 1.0), BathSpec(0.2, 0.1, 1.0))


def test_blocks_match_dense_chain(rng):
    cycle = fig2_cycle(tau_b=7.3)
    rho = random_density_matrix(rng)
    for _ in range(20):
        m = tuple(rng.integers(0, 2, size=4))
        mp = tuple(rng.integers(0, 2, size=4))
        got = conditional_block(cycle, m, mp)(rho)
        assert np.abs(got - chain(cycle, m, mp, rho)).max() < 1e-12
        assert abs(np.trace(got) - np.trace(chain(cycle, m, mp, rho))) < 1e-12
    with pytest.raises(IndexError):
        conditional_block(cycle, (0, 0, 0, 2), (0, 0, 0, 0))


def test_blocks_resolve_unmonitored_cycle(rng):
    cycle = fig2_cycle(tau_b=7.3)
    total = cycle.blocks.sum(axis=(0, 1))
    assert np.abs(total - unmonitored_channel(cycle).liouville).max() < 1e-12
    rho = random_density_matrix(rng)
    diag_trace = sum(np.trace(conditional_block(cycle, m, m)(rho)) for m in cycle.index_vectors)
    assert abs(diag_trace - 1) < 1e-12


def test_limits_of_pointer_schemes():
    cycle = fig2_cycle()
    um = cycle_channel(cycle, SchemeConfig.uniform("UM"))
    tpm = cycle_channel(cycle, SchemeConfig.uniform("TPM"))
    for s in POINTER_SCHEMES:
        assert frobenius_distance(cycle_channel(cycle, SchemeConfig.uniform(s, math.inf)), um) < 1e-12
    assert frobenius_distance(cycle_channel(cycle, SchemeConfig.uniform("S1", 0.0)), tpm) < 1e-12
    assert frobenius_distance(cycle_channel(cycle, SchemeConfig.uniform("S2", 0.0)), tpm) < 1e-12


def test_s3_differs_from_tpm_at_zero_width():
    cycle = fig2_cycle(work=Parametric(0.4, 0.0))
    tpm = cycle_channel(cycle, SchemeConfig.uniform("TPM"))
    s3 = cycle_channel(cycle, SchemeConfig.uniform("S3", 0.0))
    # computed distance is about 0.13; 0.01 leaves a wide margin
    assert frobenius_distance(s3, tpm) > 0.01


def test_all_scheme_channels_cptp():
    for cycle in (fig2_cycle(), fig2_cycle(tau_b=3.0, cold="reset"), parametric_cycle(0.3, 0.6, 5.0, cold="bath")):
        for s in ("UM", "TPM"):
            ch = cycle_channel(cycle, SchemeConfig.uniform(s))
            assert ch.is_trace_preserving() and ch.is_completely_positive()
        for s in POINTER_SCHEMES:
            for sigma in (0.0, 0.3, 1.0, 5.0, math.inf):
                ch = cycle_channel(cycle, SchemeConfig.uniform(s, sigma))
                assert ch.is_trace_preserving() and ch.is_completely_positive()
        ch = cycle_channel(cycle, SchemeConfig("S1", (0.1, 0.7, 2.0, math.inf)))
        assert ch.is_completely_positive()


def test_s1_distance_to_tpm_monotone():
    cycle = fig2_cycle()
    tpm = cycle_channel(cycle, SchemeConfig.uniform("TPM"))
    sigmas = [10.0, 5.0, 3.0, 2.0, 1.5, 1.0, 0.7, 0.5, 0.3, 0.2, 0.1, 0.05, 0.0]
    dist = [frobenius_distance(cycle_channel(cycle, SchemeConfig.uniform("S1", s)), tpm) for s in sigmas]
    assert all(b <= a + 1e-15 for a, b in zip(dist, dist[1:]))
    assert dist[-1] < 1e-12


def test_perfect_reset_steady_state_is_gibbs():
    cycle = parametric_cycle(0.3, 0.7, 4.0)
    gibbs = gibbs_state(cycle.h1, BETA_C)
    configs = [SchemeConfig.uniform("UM"), SchemeConfig.uniform("TPM")]
    configs += [SchemeConfig.uniform(s, x) for s in POINTER_SCHEMES for x in (0.0, 0.4, 3.0, math.inf)]
    for cfg in configs:
        assert np.abs(steady_state_for_scheme(cycle, cfg) - gibbs).max() < 1e-13


def test_tpm_steady_state_diagonal():
    for tau_b in (0.0, 3.0, 22.0):
        rho = steady_state_for_scheme(fig2_cycle(tau_b), SchemeConfig.uniform("TPM"))
        off = fig2_cycle(tau_b).h1.to_eigenbasis(rho)[0, 1]
        assert abs(off) < 1e-12


def test_steady_state_solvers_agree():
    cycle = fig2_cycle()
    for cfg in (SchemeConfig.uniform("UM"), SchemeConfig.uniform("S3", 0.5), SchemeConfig.uniform("S1", 1.5)):
        ch = cycle_channel(cycle, cfg)
        rho = fixed_point(ch)
        assert np.linalg.norm(ch(rho) - rho) <= 1e-10
        assert np.linalg.norm(fixed_point_power(ch) - rho) <= 1e-9


def test_suppression_weights_shape_and_symmetry():
    cycle = fig2_cycle()
    for s in POINTER_SCHEMES:
        lam = suppression_weights(cycle, SchemeConfig.uniform(s, 0.8))
        assert lam.shape == (16, 16)
        assert np.array_equal(lam, lam.T)
        assert np.all(np.diag(lam) == 1)


def test_nondegeneracy_tls():
    report = nondegeneracy_check(fig2_cycle())
    assert report.s2_tpm_limit
    assert not report.s3_tpm_limit
    assert report.zero_work_collisions
    zero = report.zero_work_collisions[0]
    assert zero[0] != zero[1]


def test_nondegeneracy_equal_frequencies():
    cycle = parametric_cycle(0.3, 0.0, 5.0, omega2=1.0)
    report = nondegeneracy_check(cycle)
    assert not report.s2_tpm_limit


def test_generic_qutrit_cycle(rng):
    h1 = StrokeHamiltonian.from_matrix(np.diag([0.0, 1.0, 2.3]))
    h2 = StrokeHamiltonian.from_matrix(np.diag([0.0, 1.7, 4.1]))
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    u1, _ = np.linalg.qr(g)
    hot = channel_from_kraus(random_kraus(rng, dim=3, count=3))
    cold = channel_from_kraus(random_kraus(rng, dim=3, count=3))
    cycle = CycleSpec(h1, h2, WorkUnitaries(u1, u1.T), hot, cold)
    total = cycle.blocks.sum(axis=(0, 1))
    assert np.abs(total - unmonitored_channel(cycle).liouville).max() < 1e-12
    for s in POINTER_SCHEMES:
        ch = cycle_channel(cycle, SchemeConfig.uniform(s, 0.6))
        rho = fixed_point(ch)
        assert np.linalg.norm(ch(rho) - rho) < 1e-10
    report = nondegeneracy_check(cycle)
    assert not report.s3_tpm_limit
