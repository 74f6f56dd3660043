"""Adaptive Monte Carlo estimate of the average efficiency under a phase deviation.

Batch ``b`` of a run draws from its own stream ``(seed, b)``, and batches are
reduced in index order, so a report depends only on its parameters and never
on the number of workers.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .analytics import eta_deviation
from .engines import teleport_cjks
from .states import child_rng, deviation_kernel, haar_vectors, hs_matrices, perturbed_state

BATCH_SIZE = 1000
SPOT_CHECK_EVERY = 1000
SPOT_CHECK_TOL = 1e-9
DEFAULT_SEM_TARGET = 1e-5
DEFAULT_MAX_SAMPLES = 10_000_000
ENSEMBLES = ("pure-haar", "mixed-hs")

TABLE_DIMS = (3, 4, 8, 16)
TABLE_DELTAS = (0.01, 0.05, 0.1)


@dataclass(frozen=True)
class EstimatorReport:
    """Summary of one Monte Carlo run.

    ``nonpositive`` counts samples whose perturbed state has a negative
    eigenvalue; ``rejected`` counts samples dropped for that reason, which
    only happens with ``reject_nonpositive=True``. ``spot_check_max_dev`` is
    the largest gap between the closed-form and the simulated efficiency over
    the spot-checked samples.
    """

    d: int
    ensemble: str
    delta_phi: float
    mean_eta: float
    sem: float
    samples: int
    converged: bool
    rejected: int
    nonpositive: int
    spot_checks: int
    spot_check_max_dev: float
    sem_target: float
    seed: int

    def as_dict(self):
        return asdict(self)


def _draw(d, ensemble, rng, size):
    if ensemble == "pure-haar":
        psi = haar_vectors(d, rng, size)
        return psi[:, :, None] * psi[:, None, :].conj()
    if ensemble == "mixed-hs":
        return hs_matrices(d, rng, size)
    raise ValueError(f"unknown ensemble {ensemble!r}; expected one of {ENSEMBLES}")


def _nonpositive_mask(states, delta_phi, tol=1e-10):
    if delta_phi == 0:
        # engineering is a unitary conjugation of |rho|; only |rho| itself can fail
        mats = np.abs(states)
    else:
        mats = np.abs(states) * deviation_kernel(states.shape[-1], delta_phi)
    return np.linalg.eigvalsh(mats)[:, 0] < -tol


def _run_batch(d, ensemble, delta_phi, seed, index, size, spot_every, reject, x):
    rng = child_rng(seed, index)
    states = _draw(d, ensemble, rng, size)
    mags = np.abs(states)
    eta = np.asarray(eta_deviation(mags, delta_phi))
    bad = _nonpositive_mask(states, delta_phi)

    spot_dev, spots = 0.0, 0
    offset = index * size
    for i in range(size):
        if (offset + i) % spot_every:
            continue
        target = perturbed_state(mags[i], x, delta_phi, validate=False)
        sim = teleport_cjks(target, None, x=x, y=0).efficiency
        spot_dev = max(spot_dev, abs(sim - eta[i]))
        spots += 1

    keep = ~bad if reject else np.ones(size, dtype=bool)
    kept = eta[keep]
    n = kept.size
    mean = float(kept.mean()) if n else 0.0
    m2 = float(((kept - mean) ** 2).sum()) if n else 0.0
    return n, mean, m2, int(bad.sum()), int(size - n), spot_dev, spots


def _merge(n_a, mean_a, m2_a, n_b, mean_b, m2_b):
    """Chan et al. pairwise update of count, mean and sum of squared deviations."""
    n = n_a + n_b
    if n == 0:
        return 0, 0.0, 0.0
    delta = mean_b - mean_a
    mean = mean_a + delta * n_b / n
    m2 = m2_a + m2_b + delta * delta * n_a * n_b / n
    return n, mean, m2


def estimate_avg_efficiency(
    d,
    ensemble="pure-haar",
    delta_phi=0.1,
    sem_target=DEFAULT_SEM_TARGET,
    max_samples=DEFAULT_MAX_SAMPLES,
    seed=42,
    *,
    batch_size=BATCH_SIZE,
    spot_check_every=SPOT_CHECK_EVERY,
    reject_nonpositive=False,
    workers=1,
    x=0,
):
    """Average efficiency over Haar pure or Hilbert-Schmidt mixed targets.

    Each sample's magnitudes are phase-engineered for family ``x``, perturbed
    by ``delta_phi`` and scored with :func:`analytics.eta_deviation`; one
    sample in ``spot_check_every`` is also pushed through the CJKS engine.
    Batches are added until the standard error of the mean drops below
    ``sem_target`` (checked after every batch) or ``max_samples`` draws have
    been made; in the latter case ``converged`` is False.

    With ``workers > 1`` up to that many batches are evaluated concurrently;
    the result is bit-identical to ``workers=1``.
    """
    if sem_target <= 0:
        raise ValueError("sem_target must be positive")
    if max_samples < batch_size:
        raise ValueError("max_samples must be at least one batch")
    if ensemble not in ENSEMBLES:
        raise ValueError(f"unknown ensemble {ensemble!r}; expected one of {ENSEMBLES}")

    n, mean, m2 = 0, 0.0, 0.0
    nonpos = rejected = spots = 0
    spot_dev = 0.0
    sem = float("inf")
    converged = False
    max_batches = max_samples // batch_size
    args = (d, ensemble, delta_phi, seed)
    extra = (batch_size, spot_check_every, reject_nonpositive, x)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        index = 0
        while index < max_batches and not converged:
            wave = range(index, min(index + max(1, workers), max_batches))
            results = list(pool.map(lambda b: _run_batch(*args, b, *extra), wave))
            for res in results:
                bn, bmean, bm2, bbad, brej, bdev, bspots = res
                n, mean, m2 = _merge(n, mean, m2, bn, bmean, bm2)
                nonpos += bbad
                rejected += brej
                spots += bspots
                spot_dev = max(spot_dev, bdev)
                index += 1
                sem = float(np.sqrt(m2 / (n - 1) / n)) if n > 1 else float("inf")
                if sem < sem_target:
                    converged = True
                    break

    return EstimatorReport(
        d=int(d),
        ensemble=ensemble,
        delta_phi=float(delta_phi),
        mean_eta=float(mean),
        sem=sem,
        samples=int(n),
        converged=converged,
        rejected=int(rejected),
        nonpositive=int(nonpos),
        spot_checks=int(spots),
        spot_check_max_dev=float(spot_dev),
        sem_target=float(sem_target),
        seed=int(seed),
    )


def table1_report(
    d_list=TABLE_DIMS,
    delta_list=TABLE_DELTAS,
    ensembles=ENSEMBLES,
    seed=42,
    sem_target=DEFAULT_SEM_TARGET,
    max_samples=DEFAULT_MAX_SAMPLES,
    **kwargs,
):
    """One :class:`EstimatorReport` per ``(d, delta, ensemble)`` cell, in that nesting order.

    Every cell runs from the same ``seed``; cells differ in their parameters,
    not in their streams.
    """
    return [
        estimate_avg_efficiency(d, ens, delta, sem_target, max_samples, seed, **kwargs)
        for d in d_list
        for delta in delta_list
        for ens in ensembles
    ]
