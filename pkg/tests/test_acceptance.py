"""Acceptance criteria, each at its stated tolerance; one PASS/FAIL line per criterion in the summary."""

import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from maxlab import (Measure, covering_selection, grid_oracle_at, hadwiger_strict, lp_norm_step, maximal_at,
                    ratio, search_min_ratio, sunrise_check, verify_covering)
from maxlab.bounds import (besicovitch_constant, discrete_atoms_ratio_power, discrete_atoms_tail_bound,
                           example_discrete_atoms, example_one_atom, lerner_constant, one_atom_norm_power,
                           one_atom_upper_bound)
from maxlab.quadrature import maximal_norm
from instances import (levels, one_atom_measure, random_atomless_left_infinite, random_function, random_mixed_measure,
                       rational, two_atom_gap_measure)


def test_criterion_1_discrete_atoms_ratio(criterion):
    worst, truncated, failures = -math.inf, 0.0, []
    for t in (2, 4, 8):
        for p in (1.5, 2, 3):
            mu, f = example_discrete_atoms(t, 40)
            power = ratio(mu, f, p).value ** p
            allowed = 1e-9 + discrete_atoms_tail_bound(t, p, 40)
            excess = abs(power - discrete_atoms_ratio_power(t, p)) - allowed
            worst = max(worst, excess)
            truncated = max(truncated, abs(power - discrete_atoms_ratio_power(t, p, 40)))
            if excess > 0:
                failures.append((t, p, excess))
    mu, f = example_discrete_atoms(1000, 40)
    big = ratio(mu, f, 2).value
    ok = not failures and big <= 1.01
    criterion(1, ok, f"9 (t, p) cases within 1e-9 + tail bound (worst slack {-worst:.3g}, gap to the "
              f"truncated closed form {truncated:.3g}); t=1000 ratio {big:.9f} <= 1.01")
    assert ok, failures


def test_criterion_2_one_atom_example(criterion):
    norms, problems = [], []
    rng = random.Random(2)
    for t in (3, 10, 100):
        mu, f = example_one_atom(t)
        inside = [F(rng.randint(1, 999), 1000) for _ in range(20)]
        outside = [1 + F(rng.randint(0, 10 ** 6), 10 ** 4) for _ in range(50)]
        if any(maximal_at(mu, f, x).value != 1 for x in inside):
            problems.append(f"t={t}: Mf != 1 on (0, 1)")
        if any(maximal_at(mu, f, x).value != 1 / (t + x) for x in outside):
            problems.append(f"t={t}: Mf != 1/(t+x)")
        power = maximal_norm(mu, f, 2).value ** 2
        if abs(power - one_atom_norm_power(t, 2)) > 1e-6:
            problems.append(f"t={t}: norm^p off by {power - one_atom_norm_power(t, 2):.3g}")
        if power > one_atom_upper_bound(t, 2):
            problems.append(f"t={t}: above the upper bound")
        norms.append(math.sqrt(power))
    if not (norms[0] > norms[1] > norms[2] > 1):
        problems.append(f"norms not decreasing to 1: {norms}")
    ok = not problems
    criterion(2, ok, f"pointwise exact at 70 points per t, norms {', '.join(f'{n:.9f}' for n in norms)}"
              + ("" if ok else f"; {problems}"))
    assert ok, problems


def test_criterion_3_sunrise_identity(criterion):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(100):
        mu, f = random_atomless_left_infinite(rng), random_function(rng)
        t = levels(rng, f, 1)[0]
        worst = max(worst, sunrise_check(mu, f, t).residual)
    ok = worst <= 1e-9
    criterion(3, ok, f"100 atomless instances, worst residual {worst:.3g} <= 1e-9")
    assert ok


@pytest.mark.slow
def test_criterion_4_covering_construction(criterion):
    rng = np.random.default_rng(4)
    makers = {"lebesgue": lambda r: Measure.lebesgue(), "one atom": one_atom_measure,
              "two atoms, null gap": two_atom_gap_measure}
    floor = lerner_constant(2) - 1e-6
    checked, ratios, worst, problems = 0, 0, math.inf, []
    for _ in range(100):
        f = random_function(rng)
        for name, make in makers.items():
            mu = make(rng)
            for t in levels(rng, f, 5):
                rep = verify_covering(covering_selection(mu, f, t), mu, f, t, L=1)
                checked += 1
                if not rep.ok:
                    problems.append((name, f, t, rep.problems[:2]))
            if lp_norm_step(f, mu, 2).value == 0:
                continue  # f vanishes mu-almost everywhere
            r = ratio(mu, f, 2).value
            ratios += 1
            worst = min(worst, r)
            if r < floor:
                problems.append((name, f, "ratio", r))
    ok = not problems
    criterion(4, ok, f"{checked} coverings verified exactly (L=1); {ratios} ratios, smallest {worst:.6f} "
              f">= {floor:.6f}")
    assert ok, problems[:5]


@pytest.mark.slow
def test_criterion_5_engine_against_grid_oracle(criterion):
    rng = np.random.default_rng(5)
    below, worst_gap, mismatched, points = 0, 0.0, 0, 0
    for _ in range(50):
        mu, f = random_mixed_measure(rng), random_function(rng)
        lo, hi = f.support_hull
        for _ in range(20):
            x = rational(rng, math.floor(lo) - 2, math.ceil(hi) + 2, 8)
            full = maximal_at(mu, f, x).value
            for n in (10 ** 2, 10 ** 3, 10 ** 4, 10 ** 5):
                g = grid_oracle_at(mu, f, x, n)
                below += g > full
            worst_gap = max(worst_gap, float(full - g))
            mismatched += maximal_at(mu, f, x, "open").value != full
            mismatched += maximal_at(mu, f, x, "closed").value != full
            points += 1
    ok = below == 0 and worst_gap <= 1e-3 and mismatched == 0
    criterion(5, ok, f"{points} points: oracle above engine {below} times, worst gap at n=1e5 {worst_gap:.3g} "
              f"<= 1e-3, open/closed mismatches {mismatched}")
    assert ok


@pytest.mark.slow
def test_criterion_6_search_never_beats_the_floor(criterion):
    found = {}
    for p in (1.5, 2, 4):
        found[p] = search_min_ratio(Measure.lebesgue(), p, k_pieces=6, budget=2000, seed=0, restarts=8).best_ratio
    mu, _ = example_discrete_atoms(1000, 30)
    collapse = search_min_ratio(mu, 2, k_pieces=6, budget=2000, seed=0, restarts=8).best_ratio
    floors_ok = all(v >= lerner_constant(p) - 1e-3 for p, v in found.items())
    ok = floors_ok and collapse <= 1.01
    summary = ", ".join(f"p={p}: {v:.6f} >= {lerner_constant(p) - 1e-3:.6f}" for p, v in found.items())
    criterion(6, ok, f"{summary}; discrete atoms best {collapse:.9f} <= 1.01")
    assert ok


def test_criterion_7_constants(criterion):
    rng = random.Random(7)
    ps = [1 + rng.uniform(1e-3, 20) for _ in range(100)]
    off = [p for p in ps if abs(besicovitch_constant(p, 1) - lerner_constant(p)) > math.ulp(lerner_constant(p))]
    h = (hadwiger_strict(1), hadwiger_strict(2))
    ok = not off and h == (2, 5)
    criterion(7, ok, f"single-overlap constant equals the sharp one to 1 ulp for 100 p ({len(off)} off); "
              f"strict Hadwiger numbers {h}")
    assert ok


def test_criterion_8_covered_by_property_suites(criterion):
    """General-space and higher-dimensional statements are not computable here; 3-6 cover their 1D cases."""
    earlier = {n: ok for n, ok, _ in criterion.results if n in (3, 4, 5, 6)}
    if len(earlier) < 4:
        pytest.skip("run together with criteria 3-6")
    ok = all(earlier.values())
    criterion(8, ok, "not computable as stated; its one-dimensional cases are criteria 3-6, "
              f"which {'all passed' if ok else 'did not all pass'}")
    assert ok
