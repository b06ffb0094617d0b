"""
The detector as a quantum channel
=================================

Evolving four probe states is enough to reconstruct the single-dot map at a
fixed time as a Choi matrix, from which an operator-sum (Kraus) form follows.
"""

# %%
import numpy as np

from ddqpc.channels import apply_one_sided, choi_to_kraus, kraus_completeness_deviation, tomograph, verify_cptp
from ddqpc.dynamics import GeneratorParams, TimeGrid, evolve_pair_one_sided
from ddqpc.linalg import singlet

g = GeneratorParams.normalized(alpha=5.0)
for tau in (0.0, 0.5, 2.0, 10.0):
    j = tomograph(g, tau)
    kraus = choi_to_kraus(j)
    rep = verify_cptp(j)
    print(f"tau={tau:5.1f}  Kraus rank={len(kraus)}  min eig={rep.min_eigenvalue:+.2e}  "
          f"completeness={kraus_completeness_deviation(kraus):.1e}")

# %%
# The channel acting on one half of the singlet reproduces the direct
# integration of the 4x4 state.
j = tomograph(g, 2.0)
direct = evolve_pair_one_sided(singlet(), g, TimeGrid(2.0)).states[-1]
print("max |difference| =", np.abs(apply_one_sided(j, singlet()) - direct).max())
