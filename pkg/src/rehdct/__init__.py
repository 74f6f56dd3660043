"""Simulation of resource-efficient qudit coherence teleportation.

A target qudit is teleported with one of ``d`` POVM families, each built from
``d`` grouped Bell projectors, so Alice needs ``d`` outcomes and
``ceil(log2 d)`` classical bits. Phase-engineered targets arrive with all
their l1 coherence; the package covers noisy pairs (AD, PF, DP, DF), phase
deviations and the classical benchmark as well.
"""

__version__ = "0.1.0"

from .analytics import (
    advantage_window,
    eta_classical,
    eta_closed_form,
    eta_deviation,
    eta_df,
    resource_summary,
    threshold,
)
from .channels import (
    ComposedNoise,
    KrausChannel,
    cjks_g,
    compose_f,
    identical_noise,
    kraus_ad,
    kraus_df,
    kraus_dp,
    kraus_pf,
    make_channel,
    verify_transpose_identity,
)
from .engines import (
    TeleportOutcome,
    coherence_l1,
    efficiency,
    perfect_basis_check,
    teleport_brute,
    teleport_cjks,
)
from .linalg import check_density, partial_trace, tensor
from .measurement import bell_state, measurement_map, povm_set, w_operator
from .montecarlo import EstimatorReport, estimate_avg_efficiency, table1_report
from .states import (
    TargetState,
    engineer_phases,
    max_entangled,
    noisy_singlet,
    perturbed_state,
    sample_haar_pure,
    sample_hs_mixed,
)
