"""
The maximal function of an indicator
====================================

Exact values, witnesses, and the L^p ratio for f = 1 on (0, 1).
"""

from fractions import Fraction

import numpy as np

from maxlab import Measure, StepFunction, maximal_at, one_sided_plus_at, ratio
from maxlab.maximal import MaximalProfile

mu = Measure.lebesgue()
f = StepFunction.indicator(0, 1)

# every value is an exact rational, with the interval that attains it
for x in (Fraction(-1), Fraction(1, 2), Fraction(3)):
    v = maximal_at(mu, f, x)
    print(f"Mf({x}) = {v.value}  via {v.witness}")

# the one-sided version only looks to the right
print("M+f(-1) =", one_sided_plus_at(mu, f, -1).value)

# floats on a mesh come from the cell-by-cell profile
prof = MaximalProfile(mu, f)
xs = np.linspace(-3, 4, 8)
print(np.round(prof.evaluate(xs), 4))

# Mf = 1/(1-x) on the left and 1/x on the right, so the ratio is sqrt(1 + 2/(p-1))
for p in (1.5, 2, 4):
    r = ratio(mu, f, p)
    print(f"p={p}: ratio {r.value:.10f}, closed form {(1 + 2 / (p - 1)) ** (1 / p):.10f}")
