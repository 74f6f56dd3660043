"""Cross-module invariant checks, run by ``rehdct validate``."""

from dataclasses import dataclass

import numpy as np

from . import analytics
from .channels import KINDS, compose_f, make_channel, verify_transpose_identity
from .engines import teleport_brute, teleport_cjks
from .measurement import povm_set
from .states import child_rng, engineer_phases, haar_vectors


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    tol: float
    detail: str = ""

    @property
    def passed(self):
        return bool(self.max_deviation <= self.tol)


def check_povm(dims=range(2, 7), tol=1e-10):
    worst = 0.0
    for d in dims:
        eye = np.eye(d * d)
        for x in range(d):
            elems = povm_set(d, x)
            worst = max(worst, np.max(np.abs(sum(elems) - eye)))
            for y, a in enumerate(elems):
                worst = max(worst, np.max(np.abs(a @ a - a)))
                for b in elems[y + 1 :]:
                    worst = max(worst, np.max(np.abs(a @ b)))
    return CheckResult("povm-completeness", float(worst), tol, f"d in {list(dims)}")


def check_channel_completeness(dims=range(2, 7), ps=(0.0, 0.3, 1.0), tol=1e-10):
    worst = 0.0
    for d in dims:
        for kind in KINDS:
            for p in ps:
                worst = max(worst, make_channel(kind, d, p).completeness_deviation())
    return CheckResult("channel-completeness", worst, tol, f"{', '.join(KINDS)}; d in {list(dims)}")


def check_custom_channel(chan, tol=1e-8):
    return CheckResult("custom-channel-completeness", chan.completeness_deviation(), tol, f"d={chan.d}, {len(chan)} operators")


def check_transpose_identity(dims=range(2, 7), ps=(0.1, 0.9), tol=1e-10):
    worst = max(
        verify_transpose_identity(make_channel(kind, d, p)) for d in dims for kind in KINDS for p in ps
    )
    return CheckResult("transpose-identity", worst, tol, f"d in {list(dims)}, p in {list(ps)}")


def check_engine_equivalence(dims=(2, 3, 4), ps=(0.1, 0.5), seed=42, tol=1e-9):
    rng = child_rng(seed, 0)
    worst = 0.0
    for d in dims:
        for kind in KINDS:
            for p in ps:
                chan = make_channel(kind, d, p)
                noise = compose_f(chan, chan)
                psi = haar_vectors(d, rng)
                for x, y in ((0, 0), (1, 1)):
                    target = engineer_phases(np.abs(np.outer(psi, psi.conj())), x)
                    b = teleport_brute(target, chan_a=chan, chan_b=chan, x=x, y=y)
                    c = teleport_cjks(target, noise, x=x, y=y)
                    worst = max(worst, float(np.max(np.abs(b.bob_state - c.bob_state))))
    return CheckResult("engine-equivalence", worst, tol, f"d in {list(dims)}, all kinds, p in {list(ps)}")


def check_thresholds(dims=range(3, 33), tol=1e-9):
    worst = 0.0
    for d in dims:
        for kind in ("AD", "PF", "DP"):
            worst = max(worst, analytics.threshold(kind, d).consistency)
    return CheckResult("threshold-consistency", worst, tol, f"AD, PF, DP; d in 3..{max(dims)}")


def run_all(extra_channels=()):
    results = [
        check_povm(),
        check_channel_completeness(),
        check_transpose_identity(),
        check_engine_equivalence(),
        check_thresholds(),
    ]
    results += [check_custom_channel(c) for c in extra_channels]
    return results
