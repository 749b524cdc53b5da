import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxlab import Measure, UnsupportedDimension, constants, hadwiger_strict, maximal_at, search_min_ratio
from maxlab.bounds import (besicovitch_constant, discrete_atoms_ratio_power, discrete_atoms_tail_bound,
                           example_discrete_atoms, example_one_atom, holder_experiment, lerner_constant,
                           one_atom_norm_power, one_atom_upper_bound)


def test_constants_examples():
    c = constants(2)
    assert c.lerner == pytest.approx(math.sqrt(2), rel=1e-15)
    assert c.besicovitch == pytest.approx(math.sqrt(2), rel=1e-15)
    assert constants(2, 5).besicovitch == pytest.approx(math.sqrt(1.2), rel=1e-15)
    with pytest.raises(ValueError):
        constants(1)
    with pytest.raises(ValueError):
        constants(2, 0)


@given(st.floats(min_value=1.0001, max_value=50))
def test_besicovitch_with_single_overlap_is_lerner(p):
    a, b = besicovitch_constant(p, 1), lerner_constant(p)
    assert abs(a - b) <= math.ulp(b)


@given(st.floats(min_value=1.01, max_value=20), st.integers(1, 20))
def test_besicovitch_decreases_with_overlap(p, L):
    assert besicovitch_constant(p, L + 1) <= besicovitch_constant(p, L)
    assert besicovitch_constant(p, L) > 1


def test_hadwiger():
    assert (hadwiger_strict(1), hadwiger_strict(2)) == (2, 5)
    with pytest.raises(UnsupportedDimension):
        hadwiger_strict(3)


def test_discrete_atoms_example():
    mu, f = example_discrete_atoms(2, 20)
    assert maximal_at(mu, f, 7).value == F(1, 128)
    assert discrete_atoms_ratio_power(2, 2) == pytest.approx(1.5, rel=1e-15)
    assert abs(discrete_atoms_ratio_power(2, 2, 20) - 1.5) < 1e-5
    assert discrete_atoms_ratio_power(1000, 2) <= 1.01 ** 2
    with pytest.raises(ValueError):
        example_discrete_atoms(1, 5)


@pytest.mark.parametrize("t,p,N", [(2, 2, 10), (4, 1.5, 30), (8, 3, 5)])
def test_discrete_atoms_tail_bound_is_the_gap(t, p, N):
    gap = discrete_atoms_ratio_power(t, p) - discrete_atoms_ratio_power(t, p, N)
    assert gap == pytest.approx(discrete_atoms_tail_bound(t, p, N), rel=1e-9)


def test_one_atom_example():
    mu, f = example_one_atom(3)
    assert maximal_at(mu, f, F(1, 2)).value == 1
    assert maximal_at(mu, f, 5).value == F(1, 8)
    assert one_atom_norm_power(3, 2) == pytest.approx(23 / 16)
    norms = [one_atom_norm_power(t, 2) for t in (3, 10, 100)]
    assert norms == sorted(norms, reverse=True) and norms[-1] > 1
    for t in (3, 10, 100):
        assert one_atom_norm_power(t, 2) <= one_atom_upper_bound(t, 2)


def test_search_respects_floor_and_is_reproducible():
    a = search_min_ratio(Measure.lebesgue(), 2, k_pieces=3, budget=120, seed=7, restarts=3)
    b = search_min_ratio(Measure.lebesgue(), 2, k_pieces=3, budget=120, seed=7, restarts=3)
    assert a.best_ratio >= math.sqrt(2) - 1e-3
    assert a.history == b.history and a.best_f == b.best_f
    assert a.evaluations <= 120


def test_search_result_does_not_depend_on_threads(monkeypatch):
    one = search_min_ratio(Measure.lebesgue(), 3, k_pieces=2, budget=60, seed=1, restarts=4)
    monkeypatch.setenv("MAXLAB_THREADS", "3")
    many = search_min_ratio(Measure.lebesgue(), 3, k_pieces=2, budget=60, seed=1, restarts=4)
    assert one.history == many.history and one.best_ratio == many.best_ratio


def test_search_finds_discrete_collapse():
    mu, _ = example_discrete_atoms(1000, 30)
    res = search_min_ratio(mu, 2, k_pieces=2, budget=60, seed=0, restarts=2)
    assert res.best_ratio <= 1.01


def test_search_rejects_bad_arguments():
    with pytest.raises(ValueError):
        search_min_ratio(Measure.lebesgue(), 2, budget=0)


def test_holder_report():
    assert holder_experiment(Measure.lebesgue(), [], [3]) == []
    rows = holder_experiment(Measure.lebesgue(), [2], [3], k_pieces=2, budget=40, restarts=2)
    assert len(rows) == 1
    row = rows[0]
    assert row.est_p_power == pytest.approx(row.est_p ** (2 / 3))
    assert row.est_p >= lerner_constant(2) - 1e-3 and row.est_r >= lerner_constant(3) - 1e-3
