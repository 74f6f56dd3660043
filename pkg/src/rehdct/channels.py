"""Kraus models for amplitude damping (AD), phase flip (PF), depolarizing (DP)
and dit flip (DF) noise, the composed operators ``F_ab = E_a E_b^T`` and the
single-qudit noise map ``G`` that replaces noise on the shared pair.

Transposes are plain transposes in the computational basis.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidChannelError, InvalidDimensionError
from .linalg import apply_kraus, as_matrix, frozen
from .states import max_entangled

KINDS = ("AD", "PF", "DP", "DF")

# loader tolerance for user-supplied channels
COMPLETENESS_TOL = 1e-8


@dataclass(frozen=True)
class KrausChannel:
    """A labeled Kraus set; ``operators`` has shape ``(n, d, d)``."""

    d: int
    kind: str
    p: float
    operators: np.ndarray

    def __post_init__(self):
        ops = np.asarray(self.operators, dtype=complex)
        if ops.ndim != 3 or ops.shape[1:] != (self.d, self.d):
            raise InvalidChannelError(f"operators must have shape (n, {self.d}, {self.d}), got {ops.shape}")
        object.__setattr__(self, "operators", frozen(ops))

    def __len__(self):
        return len(self.operators)

    def __call__(self, rho):
        return apply_kraus(self.operators, as_matrix(rho))

    def transpose(self):
        """The channel with Kraus operators ``E_k^T``."""
        return KrausChannel(self.d, self.kind + "^T", self.p, np.swapaxes(self.operators, 1, 2))

    def completeness_deviation(self):
        """``max |sum_k E_k^dagger E_k - I|``."""
        ops = self.operators
        s = np.einsum("kji,kjl->il", ops.conj(), ops)
        return float(np.max(np.abs(s - np.eye(self.d))))

    def unitality_deviation(self):
        """``max |sum_k E_k E_k^dagger - I|``; zero for unital channels."""
        ops = self.operators
        s = np.einsum("kij,klj->il", ops, ops.conj())
        return float(np.max(np.abs(s - np.eye(self.d))))


def _check(d, p):
    if int(d) != d or d < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {d!r}")
    if not 0.0 <= p <= 1.0:
        raise InvalidChannelError(f"noise strength p must lie in [0, 1], got {p}")
    return int(d), float(p)


def identity_channel(d):
    d = int(d)
    return KrausChannel(d, "I", 0.0, np.eye(d, dtype=complex)[None])


def kraus_ad(d, p):
    """Every excited level decays to ``|0>`` with probability ``p``."""
    d, p = _check(d, p)
    ops = np.zeros((d, d, d), dtype=complex)
    ops[0] = np.diag([1.0] + [np.sqrt(1 - p)] * (d - 1))
    for j in range(1, d):
        ops[j, 0, j] = np.sqrt(p)
    return KrausChannel(d, "AD", p, ops)


def clock(d, m=1):
    """Generalized Pauli ``Z^m = sum_j w^{jm}|j><j|``, ``w = e^{2 pi i/d}``."""
    return np.diag(np.exp(2j * np.pi * np.arange(d) * m / d))


def shift(d, m=1):
    """``sum_j |j><j+m|`` (indices mod d)."""
    s = np.zeros((d, d), dtype=complex)
    j = np.arange(d)
    s[j, (j + m) % d] = 1.0
    return s


def kraus_pf(d, p):
    d, p = _check(d, p)
    ops = [np.sqrt(1 - p) * np.eye(d)]
    ops += [np.sqrt(p / (d - 1)) * clock(d, m) for m in range(1, d)]
    return KrausChannel(d, "PF", p, np.array(ops))


def kraus_dp(d, p):
    """``d^2`` operators: ``E_00 ~ I`` and ``E_mn = sqrt(p)/d Z^m X_n`` for ``(m, n) != (0, 0)``.

    Operator ``k`` corresponds to ``(m, n) = divmod(k, d)``.
    """
    d, p = _check(d, p)
    ops = np.empty((d * d, d, d), dtype=complex)
    for m in range(d):
        for n in range(d):
            if m == n == 0:
                ops[0] = np.sqrt(1 - (d * d - 1) * p / d**2) * np.eye(d)
            else:
                ops[m * d + n] = np.sqrt(p) / d * clock(d, m) @ shift(d, n)
    return KrausChannel(d, "DP", p, ops)


def kraus_df(d, p):
    d, p = _check(d, p)
    ops = [np.sqrt(1 - p) * np.eye(d)]
    ops += [np.sqrt(p / (d - 1)) * shift(d, m) for m in range(1, d)]
    return KrausChannel(d, "DF", p, np.array(ops))


_BUILDERS = {"AD": kraus_ad, "PF": kraus_pf, "DP": kraus_dp, "DF": kraus_df}


def make_channel(kind, d, p):
    try:
        builder = _BUILDERS[kind.upper()]
    except KeyError:
        raise InvalidChannelError(f"unknown noise kind {kind!r}; expected one of {KINDS}") from None
    return builder(d, p)


def custom_channel(operators, tol=COMPLETENESS_TOL, label="custom"):
    """Wrap user Kraus operators, enforcing completeness within ``tol``."""
    ops = np.asarray(operators, dtype=complex)
    if ops.ndim != 3 or ops.shape[1] != ops.shape[2] or len(ops) == 0:
        raise InvalidChannelError(f"expected a stack of square operators, got shape {ops.shape}")
    chan = KrausChannel(ops.shape[1], label, float("nan"), ops)
    if tol is not None:
        dev = chan.completeness_deviation()
        if dev > tol:
            raise InvalidChannelError(f"Kraus completeness violated by {dev:.3e} (tol {tol:g})")
    return chan


@dataclass(frozen=True)
class ComposedNoise:
    """``F_ab = E_a E_b^T`` with ``a`` from Bob's channel and ``b`` from Alice's.

    ``operators[a * len(chan_a) + b]`` is ``F_ab``. Zero products are kept so
    the index layout matches the channel tables.
    """

    d: int
    operators: np.ndarray
    kinds: tuple

    def __post_init__(self):
        object.__setattr__(self, "operators", frozen(np.asarray(self.operators, dtype=complex)))

    def __len__(self):
        return len(self.operators)

    def completeness_deviation(self):
        """``max |sum F^dagger F - I|``.

        Zero whenever Alice's channel is unital; for AD on Alice's side the
        sum is ``conj(sum_b E_b E_b^dagger)``, which is not the identity.
        """
        ops = self.operators
        s = np.einsum("kji,kjl->il", ops.conj(), ops)
        return float(np.max(np.abs(s - np.eye(self.d))))


def compose_f(chan_b, chan_a):
    """All products ``E_a E_b^T`` (``E_a`` from ``chan_b``, ``E_b`` from ``chan_a``)."""
    if chan_b.d != chan_a.d:
        raise InvalidDimensionError(f"channels act on different dimensions: {chan_b.d} vs {chan_a.d}")
    eb = chan_b.operators
    ea_t = np.swapaxes(chan_a.operators, 1, 2)
    f = eb[:, None] @ ea_t[None, :]
    return ComposedNoise(chan_b.d, f.reshape(-1, chan_b.d, chan_b.d), (chan_b.kind, chan_a.kind))


def identical_noise(kind, d, p):
    """Composed operators for the same channel acting on both halves of the pair."""
    chan = make_channel(kind, d, p)
    return compose_f(chan, chan)


def cjks_g(noise, rho):
    """Noise map ``G(rho) = (1/d) sum_ab F_ab rho F_ab^dagger``.

    ``noise=None`` is the noiseless map ``rho / d``. Operators are applied in
    fixed-size chunks so large composed sets (DP, ``d^4`` terms) stay within
    memory; the chunking does not depend on the input.
    """
    rho = as_matrix(rho)
    if noise is None:
        return rho / rho.shape[0]
    d = noise.d
    if rho.shape != (d, d):
        raise InvalidDimensionError(f"state has shape {rho.shape}, expected ({d}, {d})")
    ops = noise.operators
    chunk = max(1, 2**20 // (d * d))
    out = np.zeros((d, d), dtype=complex)
    for start in range(0, len(ops), chunk):
        out += apply_kraus(ops[start : start + chunk], rho)
    return out / d


def verify_transpose_identity(chan):
    """``max |(E (x) I)(|Phi><Phi|) - (I (x) E^T)(|Phi><Phi|)|`` built by brute force."""
    d = chan.d
    phi = max_entangled(d).rho_ab
    eye = np.eye(d)
    left = np.array([np.kron(e, eye) for e in chan.operators])
    right = np.array([np.kron(eye, e.T) for e in chan.operators])
    lhs = apply_kraus(left, phi)
    rhs = apply_kraus(right, phi)
    return float(np.max(np.abs(lhs - rhs)))
