"""
Atoms that make the maximal operator almost an isometry
=======================================================

With geometrically growing atoms, the point indicator at 0 has a maximal
function that decays like t**-i, and the L^p ratio tends to 1 as t grows.
"""

from maxlab import maximal_at, ratio
from maxlab.bounds import discrete_atoms_ratio_power, discrete_atoms_tail_bound, example_discrete_atoms

mu, f = example_discrete_atoms(3, 10)
print([str(maximal_at(mu, f, i).value) for i in range(1, 6)])

p = 2
for t in (2, 10, 100, 1000):
    mu, f = example_discrete_atoms(t, 40)
    r = ratio(mu, f, p)
    exact = discrete_atoms_ratio_power(t, p) ** (1 / p)
    print(f"t={t:>5}: ratio {r.value:.12f}  infinite-N value {exact:.12f}  "
          f"tail bound {discrete_atoms_tail_bound(t, p, 40):.2e}")
