"""Lower-bound constants, the two extremal examples, and the ratio-minimizing search.

The search looks for step functions g with small ``||Mg||_p / ||g||_p``.
Step functions are dense in L^p, so the infimum over them is the true
infimum; what the search finds is an upper estimate of it. For the proven
floors below, a search result under the floor would indicate a bug.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import MaxLabError, UnsupportedDimension
from .measure import Measure, StepFunction, as_rational, candidate_points
from .quadrature import ratio


@dataclass(frozen=True)
class BoundConstants:
    p: float
    L: int
    lerner: float
    besicovitch: float


def lerner_constant(p: float) -> float:
    """Sharp one-dimensional lower bound ``(p/(p-1))**(1/p)`` for continuous measures of infinite mass."""
    p = float(p)
    return (p / (p - 1)) ** (1 / p)


def besicovitch_constant(p: float, L: int) -> float:
    """Lower bound ``(1 + 1/((p-1) L))**(1/p)`` under a covering property with overlap L."""
    p = float(p)
    return (1 + 1 / ((p - 1) * L)) ** (1 / p)


def constants(p: float, L: int = 1) -> BoundConstants:
    p = float(p)
    if not p > 1:
        raise ValueError("p must exceed 1")
    if int(L) != L or L < 1:
        raise ValueError("L must be a positive integer")
    return BoundConstants(p, int(L), lerner_constant(p), besicovitch_constant(p, int(L)))


_HADWIGER_STRICT = {1: 2, 2: 5}


def hadwiger_strict(d: int) -> int:
    """Strict Hadwiger number of Euclidean space, known here for d = 1, 2 only."""
    try:
        return _HADWIGER_STRICT[d]
    except KeyError:
        raise UnsupportedDimension(f"strict Hadwiger number tabulated only for d in (1, 2), got {d}") from None


# -- examples ---------------------------------------------------------------------


def example_discrete_atoms(t, N: int):
    """Atom ``1/(t-1)`` at 0 and atoms ``t**(i-1)`` at i = 1..N, with f the point indicator of 0.

    The measure lives on a line, and balls in any norm meet a line in an
    interval, so the one-dimensional engine sees the same maximal function.
    At x = i the best ball is ``[0, i]`` and ``Mf(i) = t**-i``.
    """
    t = as_rational(t)
    if t <= 1:
        raise ValueError("t must exceed 1")
    if N < 1:
        raise ValueError("N must be at least 1")
    atoms = [(Fraction(0), 1 / (t - 1))] + [(Fraction(i), t ** (i - 1)) for i in range(1, N + 1)]
    return Measure(tuple(atoms)), StepFunction.point_indicator(0)


def discrete_atoms_ratio_power(t, p: float, N: Optional[int] = None) -> float:
    """Closed form of ``ratio**p`` for the discrete-atoms example, truncated at N atoms or infinite."""
    t, p = float(t), float(p)
    if N is None:
        return 1 + (t - 1) / (t ** p - t)
    i = np.arange(1, N + 1)
    return 1 + (t - 1) * math.fsum(t ** ((1 - p) * i - 1))


def discrete_atoms_tail_bound(t, p: float, N: int) -> float:
    """``(t-1) * sum_{i>N} t**((1-p) i - 1)``: gap between the truncated and infinite ratio**p."""
    t, p = float(t), float(p)
    q = t ** (1 - p)
    return (t - 1) / t * q ** (N + 1) / (1 - q)


def example_one_atom(t):
    """Atom of weight t at 1 on top of Lebesgue measure on (0, inf); f = 1 on (0, 1), 0 at 1.

    Then ``Mf = 1`` on (0, 1) and ``Mf(x) = 1/(t+x)`` for x >= 1.
    """
    t = as_rational(t)
    if t <= 1:
        raise ValueError("t must exceed 1")
    mu = Measure(((Fraction(1), t),), (Fraction(0),), (Fraction(0), Fraction(1)))
    return mu, StepFunction.indicator(0, 1)


def one_atom_norm_power(t, p: float) -> float:
    """``||Mf||_p**p = 1 + (t+1)**(1-p)/(p-1) + t/(t+1)**p`` for :func:`example_one_atom`."""
    t, p = float(t), float(p)
    return 1 + (t + 1) ** (1 - p) / (p - 1) + t / (t + 1) ** p


def one_atom_upper_bound(t, p: float) -> float:
    t, p = float(t), float(p)
    return 1 + p / (p - 1) * (t + 1) ** (1 - p)


# -- search ------------------------------------------------------------------------


@dataclass
class SearchResult:
    best_f: StepFunction
    best_ratio: float
    evaluations: int
    seed: int
    history: list = field(default_factory=list)
    error_bound: float = 0.0


class _Budget(Exception):
    pass


def _decode(theta: np.ndarray, k: int) -> StepFunction:
    """offset, k log-heights, k log-gaps -> k-piece step function with rational data."""
    theta = np.clip(theta, -30, 30)
    offset = theta[0]
    heights = np.exp(np.clip(theta[1:k + 1], -8, 8))
    gaps = np.exp(np.clip(theta[k + 1:], -8, 8))
    edges = offset + np.concatenate([[0.0], np.cumsum(gaps)])
    bps = [Fraction(float(e)).limit_denominator(10 ** 6) for e in edges]
    vals = [Fraction(float(h)).limit_denominator(10 ** 6) for h in heights]
    for i in range(1, len(bps)):
        if bps[i] <= bps[i - 1]:
            bps[i] = bps[i - 1] + Fraction(1, 10 ** 6)
    return StepFunction(tuple(bps), tuple(vals))


def _scale(mu: Measure):
    pts = candidate_points(mu, StepFunction())
    if len(pts) >= 2:
        return float(pts[0]), float(pts[-1])
    if pts:
        return float(pts[0]) - 1, float(pts[0]) + 1
    return -1.0, 1.0


def _objective(mu, p, tol):
    def value(f: StepFunction):
        try:
            r = ratio(mu, f, p, tol)
        except (MaxLabError, ValueError, ZeroDivisionError, OverflowError):
            return math.inf, 0.0
        return r.value, r.error_bound
    return value


def _restart(mu, p, k, budget, seed_seq, tol):
    """One Nelder-Mead run from a random start; returns (best_f, best, err, calls, trace)."""
    rng = np.random.default_rng(seed_seq)
    lo, hi = _scale(mu)
    span = max(hi - lo, 1.0)
    x0 = np.concatenate([[rng.uniform(lo - 0.1 * span, hi)],
                         rng.normal(0, 1, k),
                         np.log(span / k) + rng.normal(0, 1, k)])
    evaluate = _objective(mu, p, tol)
    state = {"calls": 0, "best": math.inf, "f": None, "err": 0.0, "trace": []}

    def fun(theta):
        if state["calls"] >= budget:
            raise _Budget
        state["calls"] += 1
        f = _decode(theta, k)
        v, e = evaluate(f)
        if v < state["best"]:
            state.update(best=v, f=f, err=e)
            state["trace"].append((state["calls"], v))
        return v if math.isfinite(v) else 1e300

    while state["calls"] < budget:
        try:
            res = minimize(fun, x0, method="Nelder-Mead",
                           options={"maxfev": budget - state["calls"], "xatol": 1e-6, "fatol": 1e-10,
                                    "adaptive": True})
        except _Budget:
            break
        if res.nfev <= 2 * len(x0) + 2:
            break
        # restart the simplex around the incumbent; collapsed simplices stall otherwise
        x0 = res.x + rng.normal(0, 0.3, len(x0))
    return state["f"], state["best"], state["err"], state["calls"], state["trace"]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MAXLAB_THREADS", "1")))
    except ValueError:
        return 1


def search_min_ratio(mu: Measure, p: float, k_pieces: int = 6, budget: int = 2000, seed: int = 0,
                     restarts: int = 8, tol: float = 1e-8) -> SearchResult:
    """Derivative-free search for a k-piece step function minimizing ``||Mg||_p / ||g||_p``.

    Every evaluation, including the point indicators tried first at the atoms
    of mu, counts against ``budget``. The remaining budget is split evenly
    across ``restarts`` Nelder-Mead runs, each seeded from its own child of
    ``SeedSequence(seed)``, so the outcome does not depend on ``MAXLAB_THREADS``.
    """
    if budget < 1 or k_pieces < 1 or restarts < 1:
        raise ValueError("budget, k_pieces and restarts must be positive")
    p = float(p)
    evaluate = _objective(mu, p, tol)
    best_f, best, best_err, calls, history = None, math.inf, 0.0, 0, []
    for x in mu.atom_positions[: budget // 4]:
        f = StepFunction.point_indicator(x)
        v, e = evaluate(f)
        calls += 1
        if v < best:
            best_f, best, best_err = f, v, e
            history.append((calls, v))
    left = budget - calls
    shares = [left // restarts + (1 if i < left % restarts else 0) for i in range(restarts)]
    children = np.random.SeedSequence(seed).spawn(restarts)
    jobs = [(mu, p, k_pieces, share, child, tol) for share, child in zip(shares, children) if share > 0]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(lambda a: _restart(*a), jobs))
    running = best
    for f, v, e, n, trace in results:
        for i, tv in trace:
            if tv < running:
                running = tv
                history.append((calls + i, tv))
        if v < best:
            best_f, best, best_err = f, v, e
        calls += n
    return SearchResult(best_f, best, calls, seed, history, best_err)


@dataclass
class HolderRow:
    p: float
    r: float
    est_p: float
    est_r: float
    est_p_power: float


def holder_experiment(mu: Measure, p_list: Sequence[float], r_list: Sequence[float], k_pieces: int = 4,
                      budget: int = 400, seed: int = 0, restarts: int = 4) -> list:
    """Report-only table comparing search estimates ``est_r`` with ``est_p ** (p/r)`` for p < r.

    The estimates are upper bounds of infima, so no inequality between them
    is asserted.
    """
    exps = sorted({float(p) for p in p_list} | {float(r) for r in r_list}) if p_list else []
    est = {q: search_min_ratio(mu, q, k_pieces, budget, seed, restarts).best_ratio for q in exps}
    rows = []
    for p in p_list:
        for r in r_list:
            p, r = float(p), float(r)
            if p < r:
                rows.append(HolderRow(p, r, est[p], est[r], est[p] ** (p / r)))
    return rows
