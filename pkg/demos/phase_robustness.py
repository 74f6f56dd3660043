"""
How much does a phase error cost?
=================================

If every engineered phase difference is off by ``delta``, the coherence of
offset ``k`` arrives as ``|e^{i delta} U_k + e^{-i delta} L_k|`` instead of
``U_k + L_k``. Averaged over random targets the loss is tiny.
"""

import numpy as np

from rehdct import estimate_avg_efficiency, eta_deviation, perturbed_state, teleport_cjks
from rehdct.states import uniform_superposition

d, delta = 3, 0.1
ref = uniform_superposition(d)
target = perturbed_state(ref, x=0, delta_phi=delta, validate=False)
print("closed form:", eta_deviation(ref, delta))
print("engine:     ", teleport_cjks(target).efficiency)
# the perturbed matrix is not positive semidefinite, yet the maps are linear
print("min eigenvalue:", np.linalg.eigvalsh(target.rho).min())

print(" d  delta  pure     mixed")
for dim in (3, 4, 8, 16):
    for dp in (0.01, 0.05, 0.1):
        pure = estimate_avg_efficiency(dim, "pure-haar", dp, sem_target=1e-4)
        mixed = estimate_avg_efficiency(dim, "mixed-hs", dp, sem_target=1e-4)
        print(f"{dim:>2}  {dp:<5}  {pure.mean_eta:.5f}  {mixed.mean_eta:.5f}")
