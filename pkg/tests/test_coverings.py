from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxlab import (CoveringFamily, Interval, Measure, NoSolution, PreconditionViolated, StepFunction, average,
                    covering_selection, maximal_at, overlap_count, solve_average_equation, sunrise_check,
                    unimodal_covering, verify_covering)
from maxlab.coverings import solve_interval
from instances import (levels, one_atom_measure, random_atomless_left_infinite, random_function,
                       two_atom_gap_measure)

LEB = Measure.lebesgue()
IND = StepFunction.indicator(0, 1)


def family(balls, t, mu, f):
    return CoveringFamily(tuple(balls), F(t), tuple(average(mu, f, b) for b in balls), ("",) * len(balls))


# -- solver ---------------------------------------------------------------------------


def test_solver_examples():
    assert solve_average_equation(LEB, IND, 1, F(1, 2)) == -1
    assert solve_average_equation(LEB, IND, 1, 1) == 0
    assert solve_average_equation(LEB, IND, 0, F(1, 2), "right") == 2
    ball = solve_interval(LEB, IND, 1, F(1, 2))
    assert average(LEB, IND, ball) == F(1, 2)


def test_solver_without_reachable_crossing():
    gap = Measure((), (0, 5), (0, 0, 0))
    with pytest.raises(NoSolution):
        solve_average_equation(gap, IND, 3, 7)
    with pytest.raises(ValueError):
        solve_average_equation(LEB, IND, 1, 1, "up")


def test_solver_lands_closed_on_an_atom():
    # average over [-1, 1) with the atom at -1 is 1/(1 + 1 + 1) on top of mass 1
    mu = Measure(((-1, 1),), (), (1,))
    ball = solve_interval(mu, IND, 1, F(1, 3))
    assert ball.lo == -1 and ball.lo_closed
    assert average(mu, IND, ball) == F(1, 3)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=10))
def test_solver_hits_level_exactly(seed, frac):
    rng = np.random.default_rng(seed)
    f = random_function(rng)
    # anchor at the right end of the last positive region, so the average next to it exceeds t
    i = max(i for i, v in enumerate(f.values) if v > 0)
    a, t = f.breakpoints[i + 1], frac * f.values[i]
    ball = solve_interval(LEB, f, a, t)
    assert average(LEB, f, ball) == t


# -- coverings ------------------------------------------------------------------------


def test_single_indicator_covering():
    fam = covering_selection(LEB, IND, F(1, 2))
    assert fam.balls == (Interval.open(-1, 1),)
    assert verify_covering(fam, LEB, IND, F(1, 2)).ok


def test_two_bumps_covering():
    f = StepFunction.indicator_sum([(1, 0, 1), (1, 2, 3)])
    fam = covering_selection(LEB, f, F(1, 2))
    assert verify_covering(fam, LEB, f, F(1, 2)).ok
    assert all(a == F(1, 2) for a in fam.averages)


def test_atom_barrier_keeps_balls_on_one_side():
    mu = Measure(((0, 1),), (), (1,))
    f = StepFunction.indicator(1, 2)
    fam = covering_selection(mu, f, F(1, 2))
    assert verify_covering(fam, mu, f, F(1, 2)).ok
    assert all(b.lo >= 0 for b in fam.balls)
    assert not any(b.contains(0) for b in fam.balls)


def test_covering_preconditions():
    with pytest.raises(PreconditionViolated):
        covering_selection(Measure((), (0,), (0, 1)), IND, F(1, 2))
    three = Measure(((0, 1), (5, 1), (9, 1)), (), (1,))
    with pytest.raises(PreconditionViolated):
        covering_selection(three, IND, F(1, 2))
    apart = Measure(((0, 1), (5, 1)), (), (1,))
    with pytest.raises(PreconditionViolated):
        covering_selection(apart, IND, F(1, 2))


def test_empty_family_above_max():
    fam = covering_selection(LEB, IND, 2)
    assert len(fam) == 0 and verify_covering(fam, LEB, IND, 2).ok


def test_verify_flags_perturbed_ball():
    bad = family([Interval.open(-1 + F(1, 10 ** 6), 1)], F(1, 2), LEB, IND)
    rep = verify_covering(bad, LEB, IND, F(1, 2))
    assert not rep.ok and not rep.averages_ok


def test_verify_flags_overlap_and_gaps():
    f = StepFunction.indicator_sum([(1, 0, 1), (1, 2, 3)])
    overlapping = family([Interval.open(-1, 1), Interval.open(0, 2)], F(1, 2), LEB, f)
    rep = verify_covering(overlapping, LEB, f, F(1, 2))
    assert not rep.overlap_ok and rep.max_overlap == 2
    assert verify_covering(overlapping, LEB, f, F(1, 2), L=2).overlap_ok
    short = family([Interval.open(-1, 1)], F(1, 2), LEB, f)
    assert not verify_covering(short, LEB, f, F(1, 2)).coverage_ok


def test_hand_built_family_passes():
    f = StepFunction.indicator_sum([(1, 0, 1), (1, 5, 6)])
    fam = family([Interval.open(-1, 1), Interval.open(5, 7)], F(1, 2), LEB, f)
    assert verify_covering(fam, LEB, f, F(1, 2)).ok


def test_family_json_round_trip():
    fam = covering_selection(LEB, IND, F(1, 3))
    assert CoveringFamily.from_json(fam.to_json()) == fam


def test_overlap_count_properties():
    f = StepFunction.indicator_sum([(2, 0, 1), (1, 3, 4)])
    t = F(1, 2)
    fam = covering_selection(LEB, f, t)
    assert overlap_count(fam, 100) == 0
    for x in (F(-50), F(1, 2), F(7, 2), F(5, 2), F(10)):
        if maximal_at(LEB, f, x).value < t:
            assert overlap_count(fam, x) == 0
        if f(x) > t:
            assert overlap_count(fam, x) >= 1


_MEASURES = {"lebesgue": lambda rng: LEB, "one_atom": one_atom_measure, "two_atom_gap": two_atom_gap_measure}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(sorted(_MEASURES)))
def test_random_coverings_verify(seed, kind):
    rng = np.random.default_rng(seed)
    f = random_function(rng)
    mu = _MEASURES[kind](rng)
    for t in levels(rng, f, 3):
        fam = covering_selection(mu, f, t)
        rep = verify_covering(fam, mu, f, t)
        assert rep.ok, rep.problems
        for x in (np.arange(-12, 12) / 2):
            x = F(x)
            if maximal_at(mu, f, x).value < t:
                assert overlap_count(fam, x) == 0


# -- unimodal ---------------------------------------------------------------------------


def test_unimodal_examples():
    f = StepFunction((-2, -1, 1, 2), (1, 2, 1), (0, 1, 1, 0))
    fam = unimodal_covering(LEB, f, F(1, 2))
    assert fam.balls == (Interval.open(-6, 6),)
    fam = unimodal_covering(LEB, f, F(3, 2))
    assert fam.balls == (Interval.open(-2, 2),)
    assert verify_covering(fam, LEB, f, F(3, 2)).ok
    assert len(unimodal_covering(LEB, f, 2)) == 0
    assert len(unimodal_covering(LEB, f, 3)) == 0


def test_unimodal_preconditions():
    two_bumps = StepFunction.indicator_sum([(1, 0, 1), (1, 2, 3)])
    with pytest.raises(PreconditionViolated):
        unimodal_covering(LEB, two_bumps, F(1, 2))
    with pytest.raises(PreconditionViolated):
        unimodal_covering(Measure(((0, 1),), (), (1,)), IND, F(1, 2))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(min_value=F(1, 4), max_value=4, max_denominator=4), min_size=1, max_size=4),
       st.lists(st.fractions(min_value=F(1, 4), max_value=2, max_denominator=4), min_size=1, max_size=4),
       st.fractions(min_value=F(1, 8), max_value=F(7, 8), max_denominator=8))
def test_unimodal_ball_is_exact(heights, widths, frac):
    # nested symmetric-ish plateaus make a unimodal function
    terms, lo, hi = [], F(0), F(0)
    for h, w in zip(heights, widths):
        lo, hi = lo - w, hi + w / 2
        terms.append((h, lo, hi))
    f = StepFunction.indicator_sum(terms)
    mu = Measure((), (-3, 2), (1, 2, F(1, 2)))
    t = frac * f.max_value
    fam = unimodal_covering(mu, f, t)
    rep = verify_covering(fam, mu, f, t)
    assert rep.ok, rep.problems
    assert len(fam) <= 1


# -- sunrise ----------------------------------------------------------------------------


def test_sunrise_examples():
    f = StepFunction.indicator(0, 1, lo_closed=True)
    rep = sunrise_check(LEB, f, F(1, 2))
    assert rep.level_set == (Interval.open(-1, 1),)
    assert rep.lhs == 1 and rep.rhs == 1 and rep.residual <= 1e-9
    rep = sunrise_check(LEB, f, 5)
    assert rep.level_set == () and rep.lhs == rep.rhs == 0


def test_sunrise_above_max_on_varied_density():
    mu = Measure((), (-1, 2), (1, 3, F(1, 2)))
    f = StepFunction((0, 1), (4,))
    rep = sunrise_check(mu, f, 3)
    assert rep.exact_residual == 0 and rep.level_set


def test_sunrise_preconditions():
    with pytest.raises(PreconditionViolated):
        sunrise_check(Measure(((0, 1),), (), (1,)), IND, F(1, 2))
    with pytest.raises(PreconditionViolated):
        sunrise_check(Measure((), (0,), (0, 1)), IND, F(1, 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.fractions(min_value=F(1, 20), max_value=6, max_denominator=20))
def test_sunrise_identity_random(seed, t):
    rng = np.random.default_rng(seed)
    mu, f = random_atomless_left_infinite(rng), random_function(rng)
    assert sunrise_check(mu, f, t).exact_residual == 0
