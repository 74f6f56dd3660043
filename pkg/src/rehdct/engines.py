"""Two independent implementations of the teleportation protocol.

``teleport_brute`` builds the full (T, A, B) state, applies the POVM element
tensored with the identity on B and traces out T and A. ``teleport_cjks``
works in the single-qudit space: Bob's state is ``G(J(rho_T))`` normalized.
The two share no code beyond the Kraus sum helper.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channels import ComposedNoise, KrausChannel, cjks_g
from .errors import (
    DegenerateOutcomeError,
    InvalidDimensionError,
    UndefinedEfficiencyError,
    UnsupportedDimensionError,
)
from .linalg import apply_kraus, as_matrix, frozen, partial_trace, superoperator
from .measurement import measurement_map, povm_element, w_family
from .states import EntangledPair, NoisySinglet, TargetState, max_entangled

BRUTE_MAX_D = 6
PROB_FLOOR = 1e-14
COHERENCE_FLOOR = 1e-14


@dataclass(frozen=True)
class TeleportOutcome:
    """Result of one measurement outcome ``(x, y)``.

    ``efficiency`` is ``None`` when the input carries no coherence.
    """

    d: int
    x: int
    y: int
    probability: float
    bob_state: np.ndarray
    coherence_in: float
    coherence_out: float
    efficiency: Optional[float]

    def __post_init__(self):
        object.__setattr__(self, "bob_state", frozen(self.bob_state))


def coherence_l1(rho):
    """Sum of the moduli of the off-diagonal entries.

    Accepts stacks of matrices; the last two axes are the matrix.
    """
    rho = np.asarray(rho)
    a = np.abs(rho)
    return np.sum(a, axis=(-2, -1)) - np.sum(np.abs(np.diagonal(rho, axis1=-2, axis2=-1)), axis=-1)


def efficiency(outcome):
    """``coherence_out / coherence_in`` of an outcome; raises when undefined."""
    if outcome.coherence_in <= COHERENCE_FLOOR:
        raise UndefinedEfficiencyError("input state has no l1 coherence; efficiency is undefined")
    return outcome.coherence_out / outcome.coherence_in


def _target(target):
    if isinstance(target, TargetState):
        return target.rho
    return as_matrix(target)


def _outcome(d, x, y, unnormalized, rho_t):
    prob = float(np.real(np.trace(unnormalized)))
    if prob < PROB_FLOOR:
        raise DegenerateOutcomeError(f"outcome (x={x}, y={y}) has probability {prob:.3e}")
    bob = unnormalized / prob
    c_in = float(coherence_l1(rho_t))
    c_out = float(coherence_l1(bob))
    eta = c_out / c_in if c_in > COHERENCE_FLOOR else None
    return TeleportOutcome(d, int(x), int(y), prob, bob, c_in, c_out, eta)


def _pair_matrix(pair, d):
    if pair is None:
        return max_entangled(d).rho_ab
    if isinstance(pair, (EntangledPair, NoisySinglet)):
        return pair.rho_ab
    return as_matrix(pair)


def teleport_brute(target, pair=None, chan_a=None, chan_b=None, x=0, y=0):
    """Reference engine on the full three-qudit space (``d <= 6``).

    ``pair`` is any two-qudit state on (A, B), the ideal ``|Phi>`` by default;
    ``chan_a`` and ``chan_b`` are applied to it locally before the measurement.
    """
    rho_t = _target(target)
    d = rho_t.shape[0]
    if d > BRUTE_MAX_D:
        raise UnsupportedDimensionError(f"brute-force engine is capped at d <= {BRUTE_MAX_D}, got d={d}")
    rho_ab = _pair_matrix(pair, d)
    if rho_ab.shape != (d * d, d * d):
        raise InvalidDimensionError(f"pair has shape {rho_ab.shape}, expected ({d * d}, {d * d})")
    eye = np.eye(d)
    if chan_a is not None:
        rho_ab = apply_kraus(np.array([np.kron(e, eye) for e in chan_a.operators]), rho_ab)
    if chan_b is not None:
        rho_ab = apply_kraus(np.array([np.kron(eye, e) for e in chan_b.operators]), rho_ab)

    joint = np.kron(rho_t, rho_ab)
    proj = np.kron(povm_element(d, x, y), eye)
    post = proj @ joint @ proj.conj().T
    bob = partial_trace(post, [d, d, d], keep=[2])
    return _outcome(d, x, y, bob, rho_t)


def teleport_cjks(target, noise=None, x=0, y=0):
    """Fast engine: Bob's state is ``G(J(rho_T)) / Tr G(J(rho_T))``.

    ``noise`` is a :class:`ComposedNoise` (see ``channels.identical_noise``),
    or ``None`` for the noiseless protocol.
    """
    rho_t = _target(target)
    d = rho_t.shape[0]
    if noise is not None and noise.d != d:
        raise InvalidDimensionError(f"noise acts on d={noise.d}, target has d={d}")
    bob = cjks_g(noise, measurement_map(d, x, y, rho_t))
    return _outcome(d, x, y, bob, rho_t)


@dataclass(frozen=True)
class PerfectBasisReport:
    holds: bool
    max_deviation: float
    tol: float


def perfect_basis_check(noise, x, tol=1e-10):
    """Does noise leave measurement family ``x`` untouched, ``G o J = J / d``?

    Both sides are compared as superoperators, i.e. on every matrix unit
    ``|i><j|``, for every outcome ``y``.
    """
    d = noise.d
    g = superoperator(noise.operators) / d
    worst = 0.0
    for y in range(d):
        j = superoperator(w_family(d, x, y))
        worst = max(worst, float(np.max(np.abs(g @ j - j / d))))
    return PerfectBasisReport(worst <= tol, worst, tol)
