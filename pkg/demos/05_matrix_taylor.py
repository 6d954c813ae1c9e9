"""The non-commutative Taylor formula, checked on finite matrices.

For square matrices A and B, the alternating family
    C_m(A, B) = sum_k C(m, k) A^k (-B)^(m-k)
drives the expansion e^(tB) ~ sum_m (-1)^m t^m/m! e^(tA) C_m(A, B); the
degree-N truncation error decays like t^(N+1).  This script measures those
decay rates on random symmetric matrices and verifies that the same family
built from a discretized Schrodinger pair (H0, H) satisfies the operator
recurrence exactly.
"""

import numpy as np

from heatinv import (discretized_schrodinger_1d, nc_taylor_matrix_check,
                     taylor_family_matches_operator_family)

print("Remainder decay rates (log-log slopes over t in [1e-3, 1e-2])")
print("-------------------------------------------------------------")
for N in range(4):
    for seed in (0, 1, 2):
        rep = nc_taylor_matrix_check(dim=6, N=N, seed=seed)
        print(f"  N={N} seed={seed}: slope {rep.slope:.3f} (expected ~{N + 1})")

print()
print("Family identity C_m(-H0, -H) = V_m on a discretized operator pair")
print("-----------------------------------------------------------------")
grid = np.linspace(-3.0, 3.0, 7)
h0, h = discretized_schrodinger_1d(np.exp(-grid ** 2), 1.0)
for m in range(7):
    dev = taylor_family_matches_operator_family(h0, h, m)
    print(f"  m={m}: max relative deviation {dev:.2e}")
