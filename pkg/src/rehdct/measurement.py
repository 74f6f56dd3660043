"""High-dimensional Bell states, the d-outcome POVM families and the
single-qudit measurement map.

Family ``x`` groups the ``d^2`` Bell projectors into ``d`` outcomes:
outcome ``y`` collects ``|Psi_{x l + y, l}>`` for ``l = 0..d-1`` (indices mod d).
"""

from functools import lru_cache

import numpy as np

from .errors import InvalidDimensionError
from .linalg import apply_kraus, as_matrix, frozen

# dense POVM elements are d^2 x d^2; larger d goes through the W operators only
MAX_DENSE_D = 16


def _check(d, *idx):
    if int(d) != d or d < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {d!r}")
    for i in idx:
        if not 0 <= i < d:
            raise InvalidDimensionError(f"index {i} out of range [0, {d})")


def family_indices(d, x, y):
    """Bell labels ``(n, m) = (x l + y mod d, l)`` grouped into outcome ``y``."""
    _check(d, x, y)
    return [((x * l + y) % d, l) for l in range(d)]


@lru_cache(maxsize=256)
def _bell(d, n, m):
    j = np.arange(d)
    vec = np.zeros(d * d, dtype=complex)
    vec[j * d + (j + m) % d] = np.exp(2j * np.pi * j * n / d) / np.sqrt(d)
    return frozen(vec)


def bell_state(d, n, m):
    """``|Psi_nm> = sum_j e^{2 pi i j n/d} |j>|j+m> / sqrt(d)`` as a length ``d^2`` vector."""
    _check(d, n, m)
    return _bell(int(d), int(n), int(m))


def bell_basis(d):
    """All ``d^2`` Bell vectors as columns, column index ``n * d + m``."""
    _check(d)
    return np.stack([bell_state(d, n, m) for n in range(d) for m in range(d)], axis=1)


@lru_cache(maxsize=64)
def _povm(d, x):
    elements = []
    for y in range(d):
        vecs = np.stack([_bell(d, n, m) for n, m in family_indices(d, x, y)], axis=1)
        elements.append(frozen(vecs @ vecs.conj().T))
    return tuple(elements)


def povm_set(d, x):
    """The ``d`` elements of family ``x``, each a rank-``d`` projector on the (T, A) space."""
    _check(d, x)
    if d > MAX_DENSE_D:
        raise InvalidDimensionError(
            f"dense POVM elements are only built for d <= {MAX_DENSE_D}; use the W-operator map"
        )
    return list(_povm(int(d), int(x)))


def povm_element(d, x, y):
    _check(d, x, y)
    return povm_set(d, x)[y]


@lru_cache(maxsize=1024)
def _w(d, n, m):
    w = np.zeros((d, d), dtype=complex)
    j = np.arange(d)
    w[(j + m) % d, j] = np.exp(-2j * np.pi * j * n / d) / np.sqrt(d)
    return frozen(w)


def w_operator(d, n, m):
    """``W_nm = sum_j e^{-2 pi i j n/d} |j+m><j| / sqrt(d)``; ``W^dagger W = I/d``."""
    _check(d, n, m)
    return _w(int(d), int(n), int(m))


def w_family(d, x, y):
    """The ``d`` operators ``W_{x l + y, l}`` as a stack of shape ``(d, d, d)``."""
    return np.stack([_w(int(d), n, m) for n, m in family_indices(d, x, y)])


def measurement_map(d, x, y, rho):
    """``J(rho) = sum_l W_{xl+y,l} rho W_{xl+y,l}^dagger`` (trace preserving)."""
    rho = as_matrix(rho)
    if rho.shape != (d, d):
        raise InvalidDimensionError(f"state has shape {rho.shape}, expected ({d}, {d})")
    return apply_kraus(w_family(d, x, y), rho)
