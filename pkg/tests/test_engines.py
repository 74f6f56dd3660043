import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rehdct.channels import KINDS, compose_f, identical_noise, identity_channel, make_channel
from rehdct.engines import (
    coherence_l1,
    efficiency,
    perfect_basis_check,
    teleport_brute,
    teleport_cjks,
)
from rehdct.errors import DegenerateOutcomeError, UndefinedEfficiencyError, UnsupportedDimensionError
from rehdct.states import engineer_phases, hs_matrices, noisy_singlet, sample_haar_pure, uniform_superposition

from conftest import random_reference


def test_coherence_l1_counts_off_diagonal_moduli():
    rho = np.array([[0.5, 0.3j], [-0.3j, 0.5]])
    assert coherence_l1(rho) == pytest.approx(0.6)
    assert coherence_l1(np.eye(3) / 3) == 0
    assert np.allclose(coherence_l1(np.stack([rho, np.eye(2) / 2])), [0.6, 0.0])


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.sampled_from(KINDS), st.floats(0, 1), st.data(), st.integers(0, 2**31 - 1))
def test_engines_agree_on_arbitrary_states(d, kind, p, data, seed):
    x = data.draw(st.integers(0, d - 1))
    y = data.draw(st.integers(0, d - 1))
    rho = hs_matrices(d, np.random.default_rng(seed))
    chan = make_channel(kind, d, p)
    b = teleport_brute(rho, chan_a=chan, chan_b=chan, x=x, y=y)
    c = teleport_cjks(rho, compose_f(chan, chan), x=x, y=y)
    assert np.allclose(b.bob_state, c.bob_state, atol=1e-10)
    assert b.probability == pytest.approx(c.probability, abs=1e-12)


def test_engines_agree_with_different_channels_on_each_half(rng):
    d = 3
    rho = hs_matrices(d, rng)
    ca, cb = make_channel("AD", d, 0.3), make_channel("PF", d, 0.6)
    b = teleport_brute(rho, chan_a=ca, chan_b=cb, x=1, y=2)
    c = teleport_cjks(rho, compose_f(cb, ca), x=1, y=2)
    assert np.allclose(b.bob_state, c.bob_state, atol=1e-12)


def _phase_pattern_state(mags, x, y, q):
    d = mags.shape[0]
    out = np.eye(d, dtype=complex) / d
    for j1 in range(d):
        for j2 in range(d):
            if j1 == j2:
                continue
            s = sum(mags[(j1 - l) % d, (j2 - l) % d] for l in range(d))
            phase = np.exp(1j * np.pi * (j2 - j1) * (x * (j1 + j2 - d) + 2 * y) / d)
            out[j1, j2] = phase * q / d * s
    return out


@pytest.mark.parametrize("d", [3, 4, 5])
def test_bob_state_of_engineered_target_follows_phase_pattern(d, rng):
    ref = random_reference(d, rng, pure=False)
    p = 0.3
    pf_q = (1 - d * p / (d - 1)) ** 2
    for x in range(d):
        target = engineer_phases(ref, x)
        for y in range(d):
            expect_noiseless = _phase_pattern_state(ref, x, y, 1.0)
            assert np.allclose(teleport_cjks(target, x=x, y=y).bob_state, expect_noiseless, atol=1e-12)
            for kind, q in (("DP", (1 - p) ** 2), ("PF", pf_q)):
                out = teleport_cjks(target, identical_noise(kind, d, p), x=x, y=y)
                assert np.allclose(out.bob_state, _phase_pattern_state(ref, x, y, q), atol=1e-12)
            if x == 0 or math.gcd(x, d) == 1:
                q = 1.0 if x == 0 else pf_q
                out = teleport_cjks(target, identical_noise("DF", d, p), x=x, y=y)
                assert np.allclose(out.bob_state, _phase_pattern_state(ref, x, y, q), atol=1e-12)


def _ad_bob_state(rho, p, x, y):
    d = rho.shape[0]
    out = np.zeros((d, d), dtype=complex)
    out[0, 0] = 1 + p * (d - 1)
    for j in range(1, d):
        out[j, j] = 1 - p
    for j1 in range(d):
        for j2 in range(d):
            if j1 == j2:
                continue
            c = (1 - p) if 0 in (j1, j2) else (1 - p) ** 2
            out[j1, j2] = sum(
                c * np.exp(2j * np.pi * (j2 - j1) * ((x * l + y) % d) / d) * rho[(j1 - l) % d, (j2 - l) % d]
                for l in range(d)
            )
    return out / d


@pytest.mark.parametrize("d", [2, 3, 4])
def test_amplitude_damping_bob_state_formula(d, rng):
    rho = hs_matrices(d, rng)
    for p in (0.0, 0.4, 1.0):
        noise = identical_noise("AD", d, p)
        for x, y in ((0, 0), (1, d - 1)):
            out = teleport_cjks(rho, noise, x=x, y=y)
            assert out.probability == pytest.approx(1 / d, abs=1e-12)
            assert np.allclose(out.bob_state, _ad_bob_state(rho, p, x, y), atol=1e-12)


@pytest.mark.parametrize("d", [3, 4])
def test_noisy_singlet_scales_coherence_by_r(d, rng):
    target = engineer_phases(random_reference(d, rng), 0)
    for r in (0.0, 0.25, 0.8):
        out = teleport_brute(target, pair=noisy_singlet(d, r))
        assert out.efficiency == pytest.approx(r, abs=1e-12)


def test_incoherent_target_has_no_efficiency():
    out = teleport_cjks(np.eye(3) / 3, identical_noise("DP", 3, 0.2))
    assert out.efficiency is None
    assert out.coherence_in == 0
    with pytest.raises(UndefinedEfficiencyError):
        efficiency(out)


def test_efficiency_helper_matches_field():
    out = teleport_cjks(engineer_phases(uniform_superposition(3), 1), identical_noise("PF", 3, 0.1), x=1)
    assert efficiency(out) == out.efficiency


def test_brute_engine_is_capped():
    with pytest.raises(UnsupportedDimensionError):
        teleport_brute(np.eye(7) / 7)
    assert teleport_cjks(np.eye(7) / 7).probability == pytest.approx(1 / 7)


def test_zero_probability_outcome_is_reported():
    # |-> on T with A in |+> never yields outcome (0, 0) for d = 2
    minus = np.array([1, -1]) / np.sqrt(2)
    plus = np.array([1, 1]) / np.sqrt(2)
    pair = np.kron(np.outer(plus, plus), np.diag([1.0, 0.0]))
    with pytest.raises(DegenerateOutcomeError):
        teleport_brute(np.outer(minus, minus), pair=pair, x=0, y=0)


def test_outcome_state_is_read_only(rng):
    out = teleport_cjks(sample_haar_pure(3, rng))
    with pytest.raises(ValueError):
        out.bob_state[0, 0] = 0


def test_perfect_basis_report():
    d = 4
    eye = identity_channel(d)
    for x in range(d):
        assert perfect_basis_check(compose_f(eye, eye), x).holds
    assert perfect_basis_check(identical_noise("DF", d, 0.4), 0).holds
    rep = perfect_basis_check(identical_noise("DF", d, 0.4), 1)
    assert not rep.holds and rep.max_deviation > 1e-3
    assert not perfect_basis_check(identical_noise("PF", d, 0.4), 0).holds


def test_perfect_basis_edge_case_full_strength_qubit_flip():
    # for d = 2 and p = 1 the flip X.X^T = I on both sides cancels exactly
    assert perfect_basis_check(identical_noise("DF", 2, 1.0), 1).holds
