"""
Average-t coverings of superlevel sets
======================================

Balls of average exactly t that cover {f > t}, checked with exact arithmetic,
and the level-set identity for the one-sided maximal function.
"""

from fractions import Fraction

from maxlab import (Measure, StepFunction, covering_selection, sunrise_check, unimodal_covering,
                    verify_covering)

f = StepFunction.indicator_sum([(3, 0, 1), (1, 2, 4), (2, 6, 7)])
t = Fraction(1, 2)

for mu in (Measure.lebesgue(), Measure(((5, 2),), (), (1,))):
    fam = covering_selection(mu, f, t)
    rep = verify_covering(fam, mu, f, t)
    print("atoms", mu.atoms or "none")
    for ball, avg, side in zip(fam.balls, fam.averages, fam.side_labels):
        print(f"  {ball}  average {avg}  swept {side}")
    print("  verified:", rep.ok)

# a unimodal f needs a single ball, grown by equal mass on both sides
bump = StepFunction((-2, -1, 1, 2), (1, 2, 1), (0, 1, 1, 0))
print("unimodal ball", *unimodal_covering(Measure.lebesgue(), bump, t).balls)

# t * mu({M+f > t}) equals the integral of f over that set
rep = sunrise_check(Measure((), (0,), (1, 2)), f, Fraction(2, 3))
print("level set", [str(iv) for iv in rep.level_set], "lhs", rep.lhs, "rhs", rep.rhs)
