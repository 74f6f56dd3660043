import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rehdct.channels import (
    KINDS,
    cjks_g,
    clock,
    compose_f,
    custom_channel,
    identical_noise,
    identity_channel,
    kraus_ad,
    kraus_df,
    kraus_dp,
    kraus_pf,
    make_channel,
    shift,
    verify_transpose_identity,
)
from rehdct.errors import InvalidChannelError, InvalidDimensionError
from rehdct.measurement import measurement_map
from rehdct.states import hs_matrices


def ket(d, j):
    v = np.zeros(d)
    v[j % d] = 1
    return v


def op(d, i, j):
    return np.outer(ket(d, i), ket(d, j))


def _w(d):
    return np.exp(2j * np.pi / d)


# F_ab case tables for identical noise on both halves, written out entry by entry


def f_table_ad(d, p, a, b):
    if a == 0 and b == 0:
        return op(d, 0, 0) + (1 - p) * sum(op(d, j, j) for j in range(1, d))
    if a == 0:
        return np.sqrt(p * (1 - p)) * op(d, b, 0)
    if b == 0:
        return np.sqrt(p * (1 - p)) * op(d, 0, a)
    if a == b:
        return p * op(d, 0, 0)
    return np.zeros((d, d))


def f_table_pf(d, p, a, b):
    c = [np.sqrt(1 - p)] + [np.sqrt(p / (d - 1))] * (d - 1)
    return c[a] * c[b] * sum(_w(d) ** ((a + b) * j) * op(d, j, j) for j in range(d))


def f_table_df(d, p, a, b):
    c = [np.sqrt(1 - p)] + [np.sqrt(p / (d - 1))] * (d - 1)
    if a == 0 and b == 0:
        return c[0] ** 2 * np.eye(d)
    if a == 0:
        return c[0] * c[b] * sum(op(d, j + b, j) for j in range(d))
    if b == 0:
        return c[0] * c[a] * sum(op(d, j, j + a) for j in range(d))
    return c[a] * c[b] * sum(op(d, j + b - a, j) for j in range(d))


def f_table_dp(d, p, a, b, a2, b2):
    def coef(m, n):
        return np.sqrt(1 - (d * d - 1) * p / d**2) if m == n == 0 else np.sqrt(p) / d

    w = _w(d)
    k = coef(a, b) * coef(a2, b2)
    if a == b == 0 and a2 == b2 == 0:
        return k * np.eye(d)
    if a == b == 0:
        return k * sum(w ** (j * a2) * op(d, j + b2, j) for j in range(d))
    if a2 == b2 == 0:
        return k * sum(w ** (j * a) * op(d, j, j + b) for j in range(d))
    return k * sum(w ** (j * (a2 + a) + a2 * (b - b2)) * op(d, j, j + b - b2) for j in range(d))


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_composed_operators_match_case_tables(d, p):
    for kind, table in (("AD", f_table_ad), ("PF", f_table_pf), ("DF", f_table_df)):
        f = identical_noise(kind, d, p).operators
        n = len(make_channel(kind, d, p))
        for a in range(n):
            for b in range(n):
                assert np.allclose(f[a * n + b], table(d, p, a, b), atol=1e-12), (kind, a, b)
    f = identical_noise("DP", d, p).operators
    for a, b, a2, b2 in np.ndindex(d, d, d, d):
        idx = (a * d + b) * d * d + a2 * d + b2
        assert np.allclose(f[idx], f_table_dp(d, p, a, b, a2, b2), atol=1e-12)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_kraus_completeness(kind, d):
    for p in (0.0, 0.25, 1.0):
        assert make_channel(kind, d, p).completeness_deviation() < 1e-12


def test_ad_operators_written_out():
    chan = kraus_ad(3, 0.36)
    assert np.allclose(chan.operators[0], np.diag([1, 0.8, 0.8]))
    assert np.allclose(chan.operators[2], 0.6 * op(3, 0, 2))
    assert chan.unitality_deviation() > 0.1


def test_pauli_helpers():
    d = 5
    z, x = clock(d), shift(d)
    assert np.allclose(x @ ket(d, 3), ket(d, 2))
    assert np.allclose(z @ x, _w(d) ** -1 * x @ z)
    assert np.allclose(np.linalg.matrix_power(z, d), np.eye(d))


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.floats(0, 1), st.integers(0, 2**31 - 1))
def test_depolarizing_twirl(d, p, seed):
    rho = hs_matrices(d, np.random.default_rng(seed))
    out = kraus_dp(d, p)(rho)
    assert np.allclose(out, (1 - p) * rho + p * np.eye(d) / d, atol=1e-12)


def test_phase_flip_full_strength_scales_coherences():
    d = 4
    rho = hs_matrices(d, np.random.default_rng(0))
    out = kraus_pf(d, 1.0)(rho)
    off = ~np.eye(d, dtype=bool)
    assert np.allclose(out[off], -rho[off] / (d - 1))
    assert np.allclose(np.diag(out), np.diag(rho))


def test_dit_flip_fixed_point_is_uniform_superposition():
    d = 5
    v = np.ones(d) / np.sqrt(d)
    plus = np.outer(v, v)
    assert np.allclose(kraus_df(d, 0.7)(plus), plus)


def test_channel_parameter_validation():
    with pytest.raises(InvalidChannelError):
        kraus_pf(3, 1.5)
    with pytest.raises(InvalidChannelError):
        make_channel("XX", 3, 0.1)
    with pytest.raises(InvalidDimensionError):
        kraus_ad(1, 0.1)
    with pytest.raises(InvalidChannelError):
        custom_channel([np.eye(2), np.eye(2)])
    assert len(custom_channel([np.eye(2) / np.sqrt(2), np.eye(2) / np.sqrt(2)])) == 2


@pytest.mark.parametrize("kind", ["PF", "DP", "DF"])
def test_composed_noise_complete_for_unital_channels(kind):
    for d in (2, 3, 4):
        assert identical_noise(kind, d, 0.4).completeness_deviation() < 1e-12


def test_composed_noise_for_amplitude_damping_is_not_trace_preserving():
    # sum F^dag F = conj(sum_b E_b E_b^dag), which is not I for a non-unital channel
    noise = identical_noise("AD", 3, 0.4)
    assert noise.completeness_deviation() > 0.1


@pytest.mark.parametrize("kind", KINDS)
def test_g_map_has_trace_one_over_d_on_measured_states(kind):
    d = 4
    rho = hs_matrices(d, np.random.default_rng(3))
    noise = identical_noise(kind, d, 0.35)
    for x, y in ((0, 0), (1, 2), (3, 1)):
        out = cjks_g(noise, measurement_map(d, x, y, rho))
        assert np.isclose(np.trace(out), 1 / d, atol=1e-12)


def test_g_map_noiseless_and_identity_agree():
    d = 3
    rho = hs_matrices(d, np.random.default_rng(4))
    eye = identity_channel(d)
    assert np.allclose(cjks_g(compose_f(eye, eye), rho), cjks_g(None, rho))
    assert np.allclose(cjks_g(None, rho), rho / d)
    with pytest.raises(InvalidDimensionError):
        cjks_g(identical_noise("PF", 4, 0.1), rho)


def test_g_map_chunking_matches_direct_sum():
    d = 5
    noise = identical_noise("DP", d, 0.3)
    rho = hs_matrices(d, np.random.default_rng(5))
    direct = sum(f @ rho @ f.conj().T for f in noise.operators) / d
    assert np.allclose(cjks_g(noise, rho), direct)


@pytest.mark.parametrize("kind", KINDS)
def test_transpose_identity_on_maximally_entangled_pair(kind):
    for d in (2, 3, 5):
        assert verify_transpose_identity(make_channel(kind, d, 0.3)) < 1e-12


def test_transpose_identity_holds_for_any_operator_but_needs_the_transpose():
    d = 3
    g = np.random.default_rng(1).standard_normal((d, d)) + 1j * np.random.default_rng(2).standard_normal((d, d))
    assert verify_transpose_identity(custom_channel([g], tol=None)) < 1e-12
    phi = np.eye(d).reshape(-1) / np.sqrt(d)
    left = np.kron(g, np.eye(d)) @ phi
    assert np.allclose(left, np.kron(np.eye(d), g.T) @ phi)
    assert not np.allclose(left, np.kron(np.eye(d), g) @ phi)
