"""
Searching for step functions with a small maximal ratio
=======================================================

A seeded Nelder-Mead search over k-piece step functions. On Lebesgue
measure nothing gets below (p/(p-1))**(1/p). On the truncated discrete-atoms
measure the heaviest atoms dominate and the ratio comes down to about 1.
"""

from maxlab import Measure, search_min_ratio
from maxlab.bounds import example_discrete_atoms, lerner_constant

for p in (2, 4):
    res = search_min_ratio(Measure.lebesgue(), p, k_pieces=4, budget=400, seed=1, restarts=4)
    print(f"p={p}: best {res.best_ratio:.6f}  floor {lerner_constant(p):.6f}  after {res.evaluations} evaluations")
    print("  best f values:", [str(v) for v in res.best_f.values])

mu, _ = example_discrete_atoms(1000, 30)
res = search_min_ratio(mu, 2, k_pieces=4, budget=200, seed=1, restarts=2)
lo, hi = res.best_f.support_hull
print(f"discrete atoms: best {res.best_ratio:.9f}, supported on [{float(lo):.3f}, {float(hi):.3f}]")
