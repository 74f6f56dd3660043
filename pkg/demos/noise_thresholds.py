"""
Noisy pairs and the classical bound
===================================

Noise on the shared pair scales the teleported coherence by a factor that
does not depend on the target. The classical strategy reaches at most
``1/(d+1)``, and each noise model has a strength where the two meet.
"""

import numpy as np

from rehdct import engineer_phases, eta_classical, eta_closed_form, identical_noise, teleport_cjks, threshold
from rehdct.states import uniform_superposition

d = 4
target = engineer_phases(uniform_superposition(d), x=1)

print(f"d={d}, classical bound {eta_classical(d):.4f}")
print(" p     AD      PF      DP")
for p in np.linspace(0, 1, 6):
    sims = [teleport_cjks(target, identical_noise(k, d, p), x=1).efficiency for k in ("AD", "PF", "DP")]
    print(f"{p:.1f}  " + "  ".join(f"{e:.4f}" for e in sims))

# the simulated curves match the closed forms
p = 0.37
for kind in ("AD", "PF", "DP"):
    sim = teleport_cjks(target, identical_noise(kind, d, p), x=1).efficiency
    print(f"{kind}: simulated {sim:.12f}, closed form {eta_closed_form(kind, d, p):.12f}")

# thresholds grow toward 1 with the dimension
for dim in (3, 4, 8, 16, 32):
    row = [threshold(kind, dim).p_th for kind in ("AD", "PF", "DP")]
    print(f"d={dim:<2} p_th: AD {row[0]:.4f}  PF {row[1]:.4f}  DP {row[2]:.4f}")

# phase flip recovers at full strength, to 1/(d-1)^2
for dim in (3, 4, 5):
    print(f"PF at p=1, d={dim}: eta={eta_closed_form('PF', dim, 1.0):.4f}, bound {eta_classical(dim):.4f}")
