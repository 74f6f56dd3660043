"""Dense complex matrix primitives: Kronecker products, partial traces and
density-matrix checks.

Subsystems are ordered left to right, so in ``tensor(a, b)`` the factor ``a``
owns the slow (most significant) index. The teleportation engines use the
global ordering (T, A, B) = (0, 1, 2).
"""

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import InvalidDimensionError, InvalidStateError

ATOL = 1e-10


def as_matrix(m):
    """Return ``m`` as a 2-d complex128 array, checking that it is finite."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidDimensionError(f"expected a non-empty 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidStateError("matrix has non-finite entries")
    return arr


def dag(m):
    return np.conj(np.swapaxes(m, -1, -2))


def frozen(arr):
    """Read-only view, so shared values can't be mutated by accident."""
    arr = np.asarray(arr)
    view = arr.view()
    view.setflags(write=False)
    return view


def tensor(*ops):
    """Kronecker product of one or more matrices, leftmost factor slowest.

    >>> tensor(np.eye(2), np.eye(3)).shape
    (6, 6)
    """
    if not ops:
        raise InvalidDimensionError("tensor needs at least one operand")
    return reduce(np.kron, (as_matrix(o) for o in ops))


def partial_trace(m, dims, keep):
    """Trace out every subsystem not listed in ``keep``.

    Parameters
    ----------
    m : (D, D) array
        Operator on the composite space, ``D = prod(dims)``.
    dims : sequence of int
        Subsystem dimensions in tensor order.
    keep : iterable of int
        Indices of the subsystems that survive. An empty set is allowed and
        gives the 1x1 matrix holding the full trace.

    Returns
    -------
    (K, K) array with ``K`` the product of the kept dimensions, subsystems in
    their original order.
    """
    m = as_matrix(m)
    dims = [int(x) for x in dims]
    if any(x < 1 for x in dims):
        raise InvalidDimensionError(f"subsystem dimensions must be positive: {dims}")
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise InvalidDimensionError(
            f"matrix shape {m.shape} does not match subsystem dims {dims} (product {total})"
        )
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise InvalidDimensionError(f"keep={keep} out of range for {len(dims)} subsystems")

    n = len(dims)
    t = m.reshape(dims + dims)
    # einsum labels: row index i, column index n + i; traced subsystems share a label
    row = list(range(n))
    col = [n + i if i in keep else i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(t, row + col, out)
    k = int(np.prod([dims[i] for i in keep])) if keep else 1
    return reduced.reshape(k, k)


@dataclass(frozen=True)
class DensityReport:
    """Outcome of :func:`check_density`.

    ``hermiticity`` is ``max |m - m^dagger|``, ``trace`` is ``|Tr m - 1|`` and
    ``positivity`` is ``max(0, -lambda_min)`` of the Hermitian part.
    """

    hermiticity: float
    trace: float
    positivity: float
    min_eigenvalue: float
    tol: float
    failures: tuple = field(default=())

    @property
    def valid(self):
        return not self.failures

    def describe(self):
        if self.valid:
            return "valid density matrix"
        parts = [f"{name} violation {getattr(self, name):.3e}" for name in self.failures]
        return "; ".join(parts) + f" (tol {self.tol:g})"


def check_density(m, tol=ATOL):
    """Check the three density-matrix invariants and report deviations.

    Never raises for a square finite matrix; see :func:`require_density`.

    >>> check_density(np.eye(3) / 3).valid
    True
    >>> r = check_density(np.eye(2) * 0.75)
    >>> r.failures, round(r.trace, 12)
    (('trace',), 0.5)
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise InvalidDimensionError(f"density matrix must be square, got {m.shape}")
    herm = float(np.max(np.abs(m - dag(m))))
    tr = float(abs(np.trace(m) - 1.0))
    lam = float(np.linalg.eigvalsh(0.5 * (m + dag(m)))[0])
    pos = max(0.0, -lam)
    failures = tuple(
        name for name, dev in (("hermiticity", herm), ("trace", tr), ("positivity", pos)) if dev > tol
    )
    return DensityReport(herm, tr, pos, lam, tol, failures)


def require_density(m, tol=ATOL):
    """Return ``m`` as a complex array if it is a density matrix, else raise."""
    m = as_matrix(m)
    report = check_density(m, tol)
    if not report.valid:
        raise InvalidStateError(report.describe(), report)
    return m


def purity(rho):
    rho = as_matrix(rho)
    return float(np.real(np.vdot(rho.conj().T, rho)))


def apply_kraus(ops, rho):
    """``sum_k K_k rho K_k^dagger`` for a stack of operators of shape (n, d_out, d_in).

    The sum is evaluated as one matrix product over the concatenated terms,
    which keeps the result independent of any parallel split.
    """
    ops = np.asarray(ops, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    n, d_out, d_in = ops.shape
    if rho.shape != (d_in, d_in):
        raise InvalidDimensionError(f"operator acts on dimension {d_in}, state has shape {rho.shape}")
    left = (ops @ rho).transpose(1, 0, 2).reshape(d_out, n * d_in)
    right = np.conj(ops).transpose(0, 2, 1).reshape(n * d_in, d_out)
    return left @ right


def superoperator(ops):
    """Row-major superoperator ``sum_k K_k (x) conj(K_k)`` of a Kraus sum.

    With ``vec`` the row-major flattening, ``vec(sum K rho K^dagger) = S @ vec(rho)``.
    Column ``i * d + j`` of ``S`` is the image of the matrix unit ``|i><j|``.
    """
    ops = np.asarray(ops, dtype=complex)
    n, d_out, d_in = ops.shape
    s = np.einsum("kab,kcd->acbd", ops, np.conj(ops))
    return s.reshape(d_out * d_out, d_in * d_in)
