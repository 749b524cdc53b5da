import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from maxlab import Interval, Measure, StepFunction, average, candidate_points, integral_of, measure_of, support_of
from maxlab.bounds import example_discrete_atoms, example_one_atom
from strategies import functions, measures, positive, small, split_intervals

LEB = Measure.lebesgue()


def test_interval_validation():
    with pytest.raises(ValueError):
        Interval(1, 0)
    with pytest.raises(ValueError):
        Interval(1, 1, True, False)
    assert Interval.point(3).is_point
    assert not Interval.open(0, 1).contains(0)
    assert Interval.closed(0, 1).contains(1)


def test_measure_validation():
    with pytest.raises(ValueError):
        Measure((), (0,), (1,))
    with pytest.raises(ValueError):
        Measure(((0, -1),), (), (0,))
    with pytest.raises(ValueError):
        Measure((), (1, 0), (1, 1, 1))
    with pytest.raises(ValueError):
        Measure(((0, 1), (0, 2)), (), (0,))


def test_step_function_validation():
    with pytest.raises(ValueError):
        StepFunction((0, 1), (1, 2))
    with pytest.raises(ValueError):
        StepFunction((0, 1), (-1,))
    with pytest.raises(ValueError):
        StepFunction((0, 1), (1,), (1,))


def test_measure_of_examples():
    assert measure_of(LEB, Interval.open(0, 1)) == 1
    mu, _ = example_one_atom(2)
    assert measure_of(mu, Interval(1, 3, True, False)) == 4
    half_line = Measure((), (0,), (0, 1))
    assert measure_of(half_line, Interval.open(0, math.inf)) == math.inf
    assert measure_of(half_line, Interval.open(-math.inf, 0)) == 0


def test_integral_of_examples():
    ind = StepFunction.indicator(0, 1)
    assert integral_of(LEB, ind, Interval.open(-5, 5)) == 1
    mu, f = example_one_atom(3)
    assert integral_of(mu, f, Interval(0, 2, False, True)) == 1
    two_step = StepFunction((0, 1, 2), (2, 1))
    assert integral_of(LEB, two_step, Interval.open(F(1, 2), F(3, 2))) == F(3, 2)


def test_average_examples():
    assert average(LEB, StepFunction.indicator(0, 1), Interval.open(0, 2)) == F(1, 2)
    null = Measure((), (0, 1), (1, 0, 1))
    assert average(null, StepFunction.indicator(0, 1), Interval.open(F(1, 4), F(3, 4))) == 0
    mu, f = example_discrete_atoms(2, 5)
    assert average(mu, f, Interval.closed(0, 3)) == F(1, 8)


def test_candidate_points_examples():
    assert candidate_points(LEB, StepFunction.indicator(0, 1)) == [0, 1]
    mu, f = example_one_atom(3)
    assert candidate_points(mu, f) == [0, 1]
    mu = Measure(((1, 1), (2, 1)), (0,), (0, 1))
    f = StepFunction((F(1, 2), 3), (1,))
    assert candidate_points(mu, f) == [0, F(1, 2), 1, 2, 3]


def test_support_examples():
    assert support_of(LEB) == [Interval.open(-math.inf, math.inf)]
    assert support_of(Measure(((0, 1), (1, 1)))) == [Interval.point(0), Interval.point(1)]
    mu = Measure(((2, 1),), (0, 1), (0, 1, 0))
    assert support_of(mu) == [Interval.closed(0, 1), Interval.point(2)]


def test_indicator_sum_point_values():
    f = StepFunction.indicator_sum([(2, -1, 1), (1, -2, 2)])
    assert f(0) == 3 and f(1) == 1 and f(-2) == 0
    assert f(F(3, 2)) == 1


def test_point_value_default_and_override():
    f = StepFunction((0, 1), (5,))
    assert f(0) == 5 and f(1) == 0
    g = StepFunction((0, 1), (5,), (7, 2))
    assert g(0) == 7 and g(1) == 2 and g(F(1, 2)) == 5


# -- properties -------------------------------------------------------------------

@given(measures(), functions(), split_intervals())
def test_additivity(mu, f, parts):
    whole, left, right = parts
    assert measure_of(mu, whole) == measure_of(mu, left) + measure_of(mu, right)
    assert integral_of(mu, f, whole) == integral_of(mu, f, left) + integral_of(mu, f, right)


@given(measures(), functions(), split_intervals())
def test_monotone_in_interval(mu, f, parts):
    whole, left, right = parts
    assert measure_of(mu, left) <= measure_of(mu, whole)
    assert integral_of(mu, f, right) <= integral_of(mu, f, whole)


@given(measures(), small, small)
def test_endpoint_flags_only_see_atoms(mu, a, b):
    a, b = min(a, b), max(a, b) + 1
    closed, opened = Interval.closed(a, b), Interval.open(a, b)
    assert measure_of(mu, closed) - measure_of(mu, opened) == mu.atom_weight(a) + mu.atom_weight(b)


@given(measures(), functions(), split_intervals(), positive)
def test_average_scale_invariance(mu, f, parts, c):
    whole = parts[0]
    assert average(mu.scaled(c), f, whole) == average(mu, f, whole)
    assert average(mu, f.scaled(c), whole) == c * average(mu, f, whole)


@given(measures(), functions(), split_intervals())
def test_reflection(mu, f, parts):
    iv = parts[0]
    ref = Interval(-iv.hi, -iv.lo, iv.hi_closed, iv.lo_closed)
    assert integral_of(mu.reflected(), f.reflected(), ref) == integral_of(mu, f, iv)
    assert measure_of(mu.reflected(), ref) == measure_of(mu, iv)


@settings(max_examples=50)
@given(functions(), functions(), small)
def test_sum_of_step_functions(f, g, x):
    assert (f + g)(x) == f(x) + g(x)
