"""Closed-form efficiencies, noise thresholds, the classical bound and the
phase-deviation efficiency, all without simulating the protocol.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    InvalidChannelError,
    InvalidDimensionError,
    StateDependentError,
    UndefinedEfficiencyError,
    UnsupportedDimensionError,
)

THRESHOLD_TOL = 1e-9


def _check_d(d, minimum=2):
    if int(d) != d or d < minimum:
        raise InvalidDimensionError(f"dimension must be an integer >= {minimum}, got {d!r}")
    return int(d)


def eta_classical(d):
    """Best coherence-teleportation efficiency without entanglement, ``1/(d+1)``."""
    return 1.0 / (_check_d(d) + 1)


def _pf_factor(d, p):
    return (1 - d * p / (d - 1)) ** 2


def eta_closed_form(kind, d, p, x=None):
    """Efficiency of an engineered target under identical noise on both halves.

    ``x`` (the POVM family) only matters for DF noise, where ``x = 0`` is
    immune to the noise.
    """
    d = _check_d(d)
    if not 0.0 <= p <= 1.0:
        raise InvalidChannelError(f"noise strength p must lie in [0, 1], got {p}")
    kind = kind.upper()
    if kind == "AD":
        return (2 * (1 - p) + (d - 2) * (1 - p) ** 2) / d
    if kind == "PF":
        return _pf_factor(d, p)
    if kind == "DP":
        return (1 - p) ** 2
    if kind == "DF":
        if x is None:
            raise ValueError("DF efficiency depends on the POVM family; pass x")
        if x == 0:
            return 1.0
        if math.gcd(x, d) != 1:
            raise StateDependentError(
                f"DF efficiency for x={x}, d={d} depends on the target (gcd(x, d) > 1); use eta_df"
            )
        return _pf_factor(d, p)
    raise InvalidChannelError(f"unknown noise kind {kind!r}")


def eta_df(magnitudes, p, x):
    """Exact DF efficiency of an engineered target, valid for every family ``x``.

    Under DF noise the coherence at offset ``k = j' - j`` is scaled by
    ``|1 - p + p/(d-1) sum_b w^{x b k}|^2``: by 1 when ``x k = 0 mod d`` and by
    ``(1 - d p/(d-1))^2`` otherwise. When ``gcd(x, d) = 1`` only ``k = 0``
    escapes, which gives the target-independent closed form.
    """
    r = np.asarray(magnitudes, dtype=float)
    d = r.shape[-1]
    per_offset = np.array(
        [np.trace(r, offset=k) + np.trace(r, offset=k - d) for k in range(1, d)]
    )
    factor = np.array([1.0 if (x * k) % d == 0 else _pf_factor(d, p) for k in range(1, d)])
    c_in = per_offset.sum()
    if c_in <= 0:
        raise UndefinedEfficiencyError("target has no l1 coherence")
    return float((factor * per_offset).sum() / c_in)


@dataclass(frozen=True)
class ThresholdResult:
    """Noise strength at which the efficiency drops to the classical bound.

    ``consistency`` is ``|eta(p_th) - 1/(d+1)|``; it is ``None`` for DF with
    ``x = 0``, where no crossing exists and ``p_th`` is reported as 1.
    """

    d: int
    kind: str
    p_th: float
    classical_bound: float
    consistency: Optional[float]


def threshold(kind, d, x=None):
    kind = kind.upper()
    d = _check_d(d)
    if kind == "AD":
        if d < 3:
            raise UnsupportedDimensionError("the AD threshold formula needs d >= 3 (its denominator vanishes at d = 2)")
        p_th = (d * d - 1 - math.sqrt(d**3 + 1)) / (d * d - d - 2)
    elif kind in ("PF", "DF"):
        if kind == "DF" and x is None:
            raise ValueError("DF threshold depends on the POVM family; pass x")
        if kind == "DF" and x == 0:
            return ThresholdResult(d, kind, 1.0, eta_classical(d), None)
        if kind == "DF" and math.gcd(x, d) != 1:
            raise StateDependentError(f"DF threshold for x={x}, d={d} depends on the target (gcd(x, d) > 1)")
        p_th = (d - 1) / d * (1 - 1 / math.sqrt(d + 1))
    elif kind == "DP":
        p_th = 1 - 1 / math.sqrt(d + 1)
    else:
        raise InvalidChannelError(f"unknown noise kind {kind!r}")

    bound = eta_classical(d)
    dev = abs(eta_closed_form(kind, d, p_th, x) - bound)
    if dev > THRESHOLD_TOL:
        raise ArithmeticError(f"{kind} threshold for d={d} fails consistency: |eta(p_th) - 1/(d+1)| = {dev:.3e}")
    return ThresholdResult(d, kind, p_th, bound, dev)


def advantage_window(kind, d, p, x=None):
    """True iff the efficiency strictly beats the classical bound."""
    return eta_closed_form(kind, d, p, x) > eta_classical(d)


def eta_deviation(magnitudes, delta_phi):
    """Efficiency of an engineered state whose upper-triangle phases are off by ``delta_phi``.

    Works on a single ``(d, d)`` magnitude matrix or a stack ``(..., d, d)``.
    Received coherence is ``sum_{j != j'} (1/d) |sum_l R[j-l, j'-l] e^{i delta sgn}|``
    with indices mod d. For a fixed offset ``k = j' - j`` the inner sum runs
    over the same ``d`` entries whatever ``j`` is, namely ``U_k`` on the ``k``-th
    superdiagonal (phase ``+delta``) and the wrapped entries of the ``(d-k)``-th
    subdiagonal (phase ``-delta``), so the total collapses to
    ``sum_k |e^{i delta} U_k + e^{-i delta} L_k|``.

    Inputs without coherence return ``nan``.
    """
    r = np.asarray(magnitudes, dtype=float)
    d = r.shape[-1]
    upper = np.stack([np.trace(r, offset=k, axis1=-2, axis2=-1) for k in range(1, d)], axis=-1)
    lower = np.stack([np.trace(r, offset=k - d, axis1=-2, axis2=-1) for k in range(1, d)], axis=-1)
    c_out = np.abs(np.exp(1j * delta_phi) * upper + np.exp(-1j * delta_phi) * lower).sum(axis=-1)
    c_in = upper.sum(axis=-1) + lower.sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        eta = np.where(c_in > 0, c_out / np.where(c_in > 0, c_in, 1.0), np.nan)
    return float(eta) if eta.ndim == 0 else eta


@dataclass(frozen=True)
class ResourceSummary:
    d: int
    outcomes_standard: int
    outcomes_rehdct: int
    cbits_standard: float
    cbits_rehdct: int


def resource_summary(d):
    """Measurement outcomes and classical bits: full Bell measurement vs one POVM family."""
    d = _check_d(d)
    return ResourceSummary(d, d * d, d, 2 * math.log2(d), math.ceil(math.log2(d)))
