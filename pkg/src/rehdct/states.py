"""Target qudits, the shared entangled pair, noisy singlets and random ensembles.

All samplers draw complex Gaussians in a fixed order: row-major over entries,
real part then imaginary part for each entry. A batch of ``n`` draws from one
generator is therefore identical to ``n`` sequential single draws.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidDimensionError, InvalidStateError, RejectedSampleError
from .linalg import ATOL, as_matrix, check_density, frozen, require_density


@dataclass(frozen=True)
class TargetState:
    """A single-qudit state handed to the protocol.

    ``phases`` is the per-level profile the state was engineered with (for
    basis ``basis``), and ``delta_phi`` the uniform deviation applied on top,
    when the state came out of :func:`perturbed_state`.
    """

    d: int
    rho: np.ndarray
    phases: Optional[np.ndarray] = None
    basis: Optional[int] = None
    delta_phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "rho", frozen(as_matrix(self.rho)))
        if self.phases is not None:
            object.__setattr__(self, "phases", frozen(np.asarray(self.phases, dtype=float)))
        if self.rho.shape != (self.d, self.d):
            raise InvalidDimensionError(f"rho has shape {self.rho.shape}, expected ({self.d}, {self.d})")

    @property
    def magnitudes(self):
        return np.abs(self.rho)


@dataclass(frozen=True)
class EntangledPair:
    d: int
    rho_ab: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rho_ab", frozen(as_matrix(self.rho_ab)))


@dataclass(frozen=True)
class NoisySinglet:
    """``r |Phi><Phi| + (1 - r) I / d^2``; separable iff ``r <= 1/(d+1)``."""

    d: int
    r: float
    rho_ab: np.ndarray
    separable: bool

    def __post_init__(self):
        object.__setattr__(self, "rho_ab", frozen(as_matrix(self.rho_ab)))


def _check_d(d):
    if int(d) != d or d < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {d!r}")
    return int(d)


def max_entangled_vector(d):
    d = _check_d(d)
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    return v


def max_entangled(d):
    """The pair ``|Phi> = sum_k |kk> / sqrt(d)`` as a density matrix."""
    v = max_entangled_vector(d)
    return EntangledPair(int(d), np.outer(v, v.conj()))


def noisy_singlet(d, r):
    d = _check_d(d)
    if not 0.0 <= r <= 1.0:
        raise InvalidStateError(f"purity parameter r must lie in [0, 1], got {r}")
    phi = max_entangled(d).rho_ab
    rho = r * phi + (1 - r) * np.eye(d * d) / d**2
    return NoisySinglet(d, float(r), rho, bool(r <= 1 / (d + 1)))


def phase_profile(d, x):
    """Engineering phases ``phi_j = pi x j (d - j) / d`` (radians, not reduced mod 2 pi)."""
    d = _check_d(d)
    if not 0 <= x < d:
        raise InvalidDimensionError(f"basis index x={x} out of range for d={d}")
    j = np.arange(d)
    return np.pi * x * j * (d - j) / d


def phase_gate(d, j, phi):
    """``I + (e^{i phi} - 1)|j><j|``."""
    u = np.eye(d, dtype=complex)
    u[j, j] = np.exp(1j * phi)
    return u


def _reference(magnitudes, validate):
    ref = np.asarray(magnitudes)
    if np.iscomplexobj(ref):
        if np.max(np.abs(ref.imag)) > ATOL:
            raise InvalidStateError("reference magnitudes must be real")
        ref = ref.real
    ref = np.asarray(ref, dtype=float)
    if ref.ndim != 2 or ref.shape[0] != ref.shape[1]:
        raise InvalidDimensionError(f"magnitudes must be a square matrix, got shape {ref.shape}")
    if np.any(ref < -ATOL):
        raise InvalidStateError("reference magnitudes must be nonnegative")
    if validate:
        require_density(ref)
    return ref


def engineer_phases(magnitudes, x, validate=True):
    """Imprint the phase profile for POVM family ``x`` on a real reference state.

    The reference ``rho_R`` is conjugated by the product of the ``d`` phase
    gates, which leaves every ``|rho_jj'|`` unchanged and sets
    ``arg rho_jj' = phi_j - phi_j'``.
    """
    ref = _reference(magnitudes, validate)
    d = ref.shape[0]
    phases = phase_profile(d, x)
    u = np.eye(d, dtype=complex)
    for j in range(d):
        u = u @ phase_gate(d, j, phases[j])
    rho = u @ ref @ u.conj().T
    return TargetState(d, rho, phases=phases, basis=int(x))


def deviation_kernel(d, delta_phi):
    """Hermitian matrix of ``exp(i delta sgn(j' - j))`` (ones on the diagonal).

    The deviated state is the elementwise product of this kernel with the
    engineered state. For ``d >= 3`` and ``delta_phi != 0`` the kernel is
    indefinite, so the product is generally not positive semidefinite.
    """
    j = np.arange(d)
    sgn = np.sign(j[None, :] - j[:, None])
    return np.exp(1j * delta_phi * sgn)


def perturbed_state(magnitudes, x, delta_phi, validate=True):
    """Engineered state whose upper-triangle phases are shifted by ``delta_phi``.

    Raises :class:`RejectedSampleError` when ``validate`` is set and the result
    is not a density matrix. With ``validate=False`` the Hermitian, unit-trace
    but possibly indefinite matrix is returned as-is; the teleportation maps
    are linear, so it can still be pushed through either engine.
    """
    if not np.isfinite(delta_phi):
        raise InvalidStateError(f"delta_phi must be finite, got {delta_phi}")
    ref = _reference(magnitudes, validate)
    ideal = engineer_phases(ref, x, validate=False)
    rho = ideal.rho * deviation_kernel(ideal.d, delta_phi)
    if validate:
        report = check_density(rho)
        if not report.valid:
            raise RejectedSampleError(f"perturbed state rejected: {report.describe()}", report)
    return TargetState(ideal.d, rho, phases=ideal.phases, basis=int(x), delta_phi=float(delta_phi))


def uniform_superposition(d):
    """Magnitudes of the maximally coherent state: every entry ``1/d``."""
    d = _check_d(d)
    return np.full((d, d), 1.0 / d)


def _complex_normal(rng, shape):
    z = rng.standard_normal(tuple(shape) + (2,))
    return z[..., 0] + 1j * z[..., 1]


def haar_vectors(d, rng, size=None):
    """Haar-random unit vectors, shape ``(d,)`` or ``(size, d)``."""
    shape = (d,) if size is None else (size, d)
    z = _complex_normal(rng, shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def hs_matrices(d, rng, size=None):
    """Hilbert-Schmidt random density matrices ``G G^dagger / Tr(G G^dagger)``."""
    shape = (d, d) if size is None else (size, d, d)
    g = _complex_normal(rng, shape)
    w = g @ np.conj(np.swapaxes(g, -1, -2))
    tr = np.real(np.trace(w, axis1=-2, axis2=-1))
    w = w / tr[..., None, None]
    # exact Hermiticity despite rounding in the product
    return 0.5 * (w + np.conj(np.swapaxes(w, -1, -2)))


def sample_haar_pure(d, rng):
    d = _check_d(d)
    psi = haar_vectors(d, rng)
    return TargetState(d, np.outer(psi, psi.conj()))


def sample_hs_mixed(d, rng):
    d = _check_d(d)
    return TargetState(d, hs_matrices(d, rng))


def child_rng(seed, *keys):
    """Independent generator for the stream ``(seed, *keys)``.

    Streams depend only on the key tuple, never on which worker draws them.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, keys)]))
