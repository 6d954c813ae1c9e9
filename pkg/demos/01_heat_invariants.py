"""Local heat invariants of H = -Laplacian + V, computed exactly.

The diagonal of the heat kernel of H admits a small-time expansion

    e^(-tH)(x, x) ~ (4 pi t)^(-n/2) * sum_j a_j(x) t^j,

where each a_j(x) is a universal polynomial in V and its derivatives at x.
This script prints the first few a_j in dimensions 1 and 2, and shows that
two structurally different derivations produce identical polynomials.
"""

from heatinv import heat_invariant_binomial, heat_invariant_operator_sum

print("Heat invariants in one dimension")
print("--------------------------------")
for j in range(1, 5):
    inv = heat_invariant_binomial(j, 1)
    print(f"  a_{j} = {inv.density.to_text()}")

print()
print("The same invariants in two dimensions (note the split Laplacian)")
print("----------------------------------------------------------------")
for j in (1, 2):
    inv = heat_invariant_binomial(j, 2)
    print(f"  a_{j} = {inv.density.to_text()}")

print()
print("Cross-checking two independent derivation routes")
print("------------------------------------------------")
for n in (1, 2, 3):
    for j in (1, 2, 3):
        binomial_route = heat_invariant_binomial(j, n).density
        operator_route = heat_invariant_operator_sum(j, n).density
        verdict = "identical" if binomial_route == operator_route else "DIFFER"
        print(f"  n={n} j={j}: binomial sum vs operator family -> {verdict}")
