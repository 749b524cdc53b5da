"""Exact evaluation of uncentered and one-sided maximal functions.

The sup over intervals is a finite maximum. Fix one endpoint and move the
other inside a cell where both the density and f are constant (no atom in its
interior): the integral and the measure are both affine in the moving endpoint,
so the average is linear-fractional and therefore monotone there. The sup is
reached at a cell boundary, approached from one side or the other, i.e. at a
candidate point with one of the two inclusion flags, or at x itself. Applying
this to each endpoint in turn reduces the sup to the finite enumeration below.

Two evaluators are provided. :func:`maximal_at` enumerates every candidate
interval directly and is the reference. :class:`MaximalProfile` groups the same
candidates per cell: inside cell ``(p_{r-1}, p_r)`` the maximal function is the
max of a constant and of linear-fractional pieces in the distance from x to the
cell edges. The profile gives fast vectorized float evaluation and exact
superlevel sets; the test suite checks it against the reference.
"""

from __future__ import annotations

import bisect
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import WindowTooSmall
from .measure import (INF, Interval, Measure, StepFunction, as_rational, average, candidate_points, integral_of,
                      measure_of)

KINDS = ("two_sided", "one_sided_plus", "one_sided_minus")


@dataclass(frozen=True)
class MaximalValue:
    value: Fraction
    witness: Optional[Interval] = None
    supremum_only: bool = False

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class EvaluatedMaximal:
    mesh: tuple
    values: tuple
    kind: str = "two_sided"

    def floats(self) -> np.ndarray:
        return np.array([float(v.value) for v in self.values])


class _Grid:
    """Prefix sums of mu-mass and f-mass over a sorted point set.

    Endpoint keys: a lower endpoint at ``p_a`` closed (open) starts before (after)
    the atom at ``p_a``; an upper endpoint closed (open) stops after (before) it.
    The mass of an interval is then ``upper - lower``.
    """

    def __init__(self, mu: Measure, f: StepFunction, points: Sequence[Fraction]):
        self.points = list(points)
        n = self.n = len(self.points)
        self.dens, self.vals = [], []
        for a, b in zip(self.points, self.points[1:]):
            mid = (a + b) / 2
            self.dens.append(mu.density_at(mid))
            self.vals.append(f(mid))
        self.dL, self.dR = mu.left_tail_density, mu.right_tail_density
        self.atom_m = [mu.atom_weight(x) for x in self.points]
        self.atom_i = [w * f(x) if w else Fraction(0) for w, x in zip(self.atom_m, self.points)]
        self.before_m, self.after_m, self.before_i, self.after_i = [], [], [], []
        am = ai = Fraction(0)
        for k in range(n):
            if k:
                length = self.points[k] - self.points[k - 1]
                am += self.dens[k - 1] * length
                ai += self.dens[k - 1] * self.vals[k - 1] * length
            self.before_m.append(am)
            self.before_i.append(ai)
            am += self.atom_m[k]
            ai += self.atom_i[k]
            self.after_m.append(am)
            self.after_i.append(ai)

    def lower(self, a, closed):
        return (self.before_m[a], self.before_i[a]) if closed else (self.after_m[a], self.after_i[a])

    def upper(self, b, closed):
        return (self.after_m[b], self.after_i[b]) if closed else (self.before_m[b], self.before_i[b])

    def left_cell(self, k):
        """(density, f-value) just left of p_k."""
        return (self.dens[k - 1], self.vals[k - 1]) if k else (self.dL, Fraction(0))

    def right_cell(self, k):
        return (self.dens[k], self.vals[k]) if k < self.n - 1 else (self.dR, Fraction(0))


def _better(val, key, best_val, best_key):
    return best_val is None or val > best_val or (val == best_val and key < best_key)


def _check_kind(kind):
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")


def _brute(mu, f, x, lo_choices, hi_choices) -> MaximalValue:
    """Shared enumeration over explicit endpoint choices ``(index, closed)``."""
    pts = sorted(set(candidate_points(mu, f)) | {x})
    grid = _Grid(mu, f, pts)
    ix = pts.index(x)
    best_val = best_key = best_iv = None
    for a, lc in lo_choices(grid, ix):
        lm, li = grid.lower(a, lc)
        for b, hc in hi_choices(grid, ix):
            if b < a or (a == b and not (lc and hc)):
                continue
            hm, hi_ = grid.upper(b, hc)
            m = hm - lm
            if m <= 0:
                continue
            val = (hi_ - li) / m
            key = (pts[a], pts[b], lc, hc)
            if _better(val, key, best_val, best_key):
                best_val, best_key = val, key
                best_iv = Interval(pts[a], pts[b], lc, hc)
    if best_val is None:
        return MaximalValue(Fraction(0), None, True)
    return MaximalValue(best_val, best_iv)


def _two_sided_lo(grid, ix):
    for a in range(ix + 1):
        for lc in (False, True):
            if a < ix or lc:
                yield a, lc


def _two_sided_hi(grid, ix):
    for b in range(ix, grid.n):
        for hc in (False, True):
            if b > ix or hc:
                yield b, hc


def _limit_value(grid, ix, lo_opts, hi_opts):
    """Sup of averages over families of intervals given as limits ``value + eps * slope``."""
    best = None
    for lm, li, slm, sli in lo_opts:
        for hm, hi_, shm, shi in hi_opts:
            m0, m1 = hm - lm, shm - slm
            i0, i1 = hi_ - li, shi - sli
            if m0 > 0:
                val = i0 / m0
            elif m0 == 0 and m1 > 0:
                val = i1 / m1
            else:
                continue
            if best is None or val > best:
                best = val
    return best


def _restricted_sup(mu, f, x, balls) -> MaximalValue:
    """Sup over open-only or closed-only intervals, with limits taken exactly.

    An endpoint that only a limit of the restricted family can realize (e.g. a
    closed endpoint for open balls) is written ``p -/+ eps`` and the average is
    taken to the eps -> 0+ limit symbolically.
    """
    pts = sorted(set(candidate_points(mu, f)) | {x})
    grid = _Grid(mu, f, pts)
    ix = pts.index(x)
    lo_opts, hi_opts = [], []
    for a in range(ix + 1):
        dl, vl = grid.left_cell(a)
        dr, vr = grid.right_cell(a)
        bm, bi = grid.lower(a, True)
        am, ai = grid.lower(a, False)
        if balls == "open":
            if a < ix:
                lo_opts.append((am, ai, 0, 0))
            lo_opts.append((bm, bi, -dl, -dl * vl))
        else:
            lo_opts.append((bm, bi, 0, 0))
            if a < ix:
                lo_opts.append((am, ai, dr, dr * vr))
    for b in range(ix, grid.n):
        dl, vl = grid.left_cell(b)
        dr, vr = grid.right_cell(b)
        bm, bi = grid.upper(b, False)
        am, ai = grid.upper(b, True)
        if balls == "open":
            if b > ix:
                hi_opts.append((bm, bi, 0, 0))
            hi_opts.append((am, ai, dr, dr * vr))
        else:
            hi_opts.append((am, ai, 0, 0))
            if b > ix:
                hi_opts.append((bm, bi, -dl, -dl * vl))
    best = _limit_value(grid, ix, lo_opts, hi_opts)
    if best is None:
        return MaximalValue(Fraction(0), None, True)
    return MaximalValue(best, None, True)


def maximal_at(mu: Measure, f: StepFunction, x, balls: str = "all") -> MaximalValue:
    """Uncentered maximal function of f at x.

    ``balls="all"`` enumerates every candidate interval with all inclusion flags
    and returns the lexicographically smallest witness among the maximizers.
    ``"open"`` / ``"closed"`` compute the sup over open-only / closed-only
    intervals; these sups may only be approached, so no witness is returned.
    """
    x = as_rational(x)
    if balls in ("open", "closed"):
        return _restricted_sup(mu, f, x, balls)
    if balls != "all":
        raise ValueError(f"balls must be 'all', 'open' or 'closed', not {balls!r}")
    return _brute(mu, f, x, _two_sided_lo, _two_sided_hi)


def one_sided_plus_at(mu: Measure, f: StepFunction, x) -> MaximalValue:
    """sup over b > x of the average over [x, b)."""
    x = as_rational(x)

    def lo(grid, ix):
        yield ix, True

    return _brute(mu, f, x, lo, _two_sided_hi)


def one_sided_minus_at(mu: Measure, f: StepFunction, x) -> MaximalValue:
    """sup over a < x of the average over (a, x]."""
    x = as_rational(x)

    def hi(grid, ix):
        yield ix, True

    return _brute(mu, f, x, _two_sided_lo, hi)


_EVALUATORS = {"two_sided": maximal_at, "one_sided_plus": one_sided_plus_at, "one_sided_minus": one_sided_minus_at}


def evaluate_on_mesh(mu: Measure, f: StepFunction, mesh, kind: str = "two_sided") -> EvaluatedMaximal:
    _check_kind(kind)
    mesh = tuple(as_rational(x) for x in mesh)
    if any(a >= b for a, b in zip(mesh, mesh[1:])):
        raise ValueError("mesh must be strictly increasing")
    evaluator = _EVALUATORS[kind]
    return EvaluatedMaximal(mesh, tuple(evaluator(mu, f, x) for x in mesh), kind)


# -- per-cell profile -----------------------------------------------------------


@dataclass
class _Piece:
    # average = (num + rate_i * u) / (den + rate_m * u), u = distance from x to the anchor edge
    num: Fraction
    den: Fraction
    other: Fraction
    other_closed: bool


class MaximalProfile:
    """Cell-by-cell description of a maximal function of f.

    Cell ``r`` is ``(p_{r-1}, p_r)`` with ``p_{-1} = -inf`` and ``p_n = +inf``.
    Inside cell ``r`` the value is the max of ``const[r]`` (intervals with both
    endpoints at candidates on either side of the cell), *right pieces*
    ``[x, p_b>`` and *left pieces* ``<p_a, x]``.
    """

    def __init__(self, mu: Measure, f: StepFunction, kind: str = "two_sided"):
        _check_kind(kind)
        self.mu, self.f, self.kind = mu, f, kind
        pts = candidate_points(mu, f)
        self.points = pts
        self.grid = g = _Grid(mu, f, pts)
        n = self.n = len(pts)
        self._fpts = np.array([float(p) for p in pts])
        # l-key 2a + (0 closed / 1 open) orders lower endpoints; h-key 2b + (0 open / 1 closed) upper ones.
        self.lo_keys = [(a, lc) for a in range(n) for lc in (True, False)]
        self.hi_keys = [(b, hc) for b in range(n) for hc in (False, True)]
        self.cell_density = [g.dL] + g.dens + [g.dR] if n else [g.dL]
        self.cell_value = [Fraction(0)] + g.vals + [Fraction(0)] if n else [Fraction(0)]
        self._build_floats()

    def _build_floats(self):
        """Float copy of the structure, used by :meth:`evaluate`.

        Both key orders walk the same event sequence (before p_0, after p_0,
        before p_1, ...), so an interval's mass is a sum of consecutive
        nonnegative increments. Summing those directly avoids the cancellation
        a difference of prefix sums would suffer next to a heavy atom.
        """
        g, n = self.grid, self.n
        K = 2 * n
        inc_m, inc_i = np.zeros(max(K - 1, 0)), np.zeros(max(K - 1, 0))
        for k in range(n):
            if 2 * k < K - 1:
                inc_m[2 * k], inc_i[2 * k] = float(g.atom_m[k]), float(g.atom_i[k])
            if 2 * k + 1 < K - 1:
                length = self.points[k + 1] - self.points[k]
                inc_m[2 * k + 1] = float(g.dens[k] * length)
                inc_i[2 * k + 1] = float(g.dens[k] * g.vals[k] * length)
        M, I = np.zeros((K, K)), np.zeros((K, K))
        for l in range(K - 1):
            M[l, l + 1:] = np.cumsum(inc_m[l:])
            I[l, l + 1:] = np.cumsum(inc_i[l:])
        avg = np.where(M > 0, I / np.where(M > 0, M, 1.0), 0.0)
        suffix = np.maximum.accumulate(avg[:, ::-1], axis=1)[:, ::-1] if K else avg
        best = np.maximum.accumulate(suffix, axis=0) if K else avg
        prefix = np.maximum.accumulate(avg, axis=0) if K else avg
        k = np.arange(n)
        source = {"two_sided": best, "one_sided_plus": suffix, "one_sided_minus": prefix}[self.kind]
        self._fpoint = source[2 * k, 2 * k + 1] if n else np.zeros(0)
        self._fcells = []
        for r in range(n + 1):
            const = best[2 * r - 1, 2 * r] if self.kind == "two_sided" and 1 <= r <= n - 1 else 0.0
            right = left = None
            if self.kind in ("two_sided", "one_sided_plus") and r <= n - 1:
                right = np.stack([I[2 * r, 2 * r:], M[2 * r, 2 * r:]], axis=1)
            if self.kind in ("two_sided", "one_sided_minus") and r >= 1:
                left = np.stack([I[:2 * r, 2 * r - 1], M[:2 * r, 2 * r - 1]], axis=1)
            self._fcells.append((float(self.cell_density[r]), float(self.cell_value[r]), const, right, left,
                                 float(self.points[r - 1]) if r >= 1 else -math.inf,
                                 float(self.points[r]) if r <= n - 1 else math.inf))

    @functools.cached_property
    def point_values(self) -> list:
        """Exact value at each candidate point."""
        self._build_table()
        return [self._point_value(k) for k in range(self.n)]

    @functools.cached_property
    def cells(self) -> list:
        """Exact per-cell pieces."""
        self._build_table()
        return [self._cell(r) for r in range(self.n + 1)]

    # table[l][h] = (average, interval) for lo key l, hi key h, or None when mass is 0
    def _build_table(self):
        if hasattr(self, "_table"):
            return
        g, pts = self.grid, self.points
        K = len(self.lo_keys)
        table = [[None] * K for _ in range(K)]
        for l, (a, lc) in enumerate(self.lo_keys):
            lm, li = g.lower(a, lc)
            for h in range(l, K):
                b, hc = self.hi_keys[h]
                if b < a or (a == b and not (lc and hc)):
                    continue
                hm, hi_ = g.upper(b, hc)
                m = hm - lm
                if m > 0:
                    table[l][h] = ((hi_ - li) / m, (pts[a], pts[b], lc, hc))
        self._table = table
        # suffix max over h, then prefix max over l: best[l][h] = max over l' <= l, h' >= h
        suffix = [[None] * (K + 1) for _ in range(K)]
        for l in range(K):
            for h in range(K - 1, -1, -1):
                suffix[l][h] = _max_entry(suffix[l][h + 1], table[l][h])
        best = [[None] * (K + 1) for _ in range(K)]
        for l in range(K):
            for h in range(K):
                best[l][h] = _max_entry(best[l - 1][h] if l else None, suffix[l][h])
        self._suffix, self._best = suffix, best

    def _entry_to_value(self, entry) -> MaximalValue:
        if entry is None:
            return MaximalValue(Fraction(0), None, True)
        val, (lo, hi, lc, hc) = entry
        return MaximalValue(val, Interval(lo, hi, lc, hc))

    def _point_value(self, k) -> MaximalValue:
        if self.kind == "two_sided":
            return self._entry_to_value(self._best[2 * k][2 * k + 1])
        if self.kind == "one_sided_plus":
            return self._entry_to_value(self._suffix[2 * k][2 * k + 1])
        entry = None
        for l in range(2 * k + 1):
            entry = _max_entry(entry, self._table[l][2 * k + 1])
        return self._entry_to_value(entry)

    def _cell(self, r):
        g, n = self.grid, self.n
        d, v = self.cell_density[r], self.cell_value[r]
        const = None
        if self.kind == "two_sided" and 1 <= r <= n - 1:
            const = self._best[2 * r - 1][2 * r]
        right, left = [], []
        if self.kind in ("two_sided", "one_sided_plus") and r <= n - 1:
            base_m, base_i = g.before_m[r], g.before_i[r]
            for b in range(r, n):
                for hc in (False, True):
                    hm, hi_ = g.upper(b, hc)
                    right.append(_Piece(hi_ - base_i, hm - base_m, self.points[b], hc))
        if self.kind in ("two_sided", "one_sided_minus") and r >= 1:
            base_m, base_i = g.after_m[r - 1], g.after_i[r - 1]
            for a in range(r):
                for lc in (True, False):
                    lm, li = g.lower(a, lc)
                    left.append(_Piece(base_i - li, base_m - lm, self.points[a], lc))
        return {
            "d": d, "v": v, "const": const, "right": right, "left": left,
            "lo": self.points[r - 1] if r >= 1 else -INF,
            "hi": self.points[r] if r <= n - 1 else INF,
        }

    def cell_index(self, x):
        return bisect.bisect_left(self.points, x)

    def value_at(self, x) -> MaximalValue:
        """Exact value at x, with a witness interval."""
        x = as_rational(x)
        if not self.n:
            return MaximalValue(Fraction(0), None, True)
        r = self.cell_index(x)
        if r < self.n and self.points[r] == x:
            return self.point_values[r]
        cell = self.cells[r]
        d, v = cell["d"], cell["v"]
        best = cell["const"]
        for pc in cell["right"]:
            u = cell["hi"] - x
            m = pc.den + d * u
            if m > 0:
                best = _max_entry(best, ((pc.num + d * v * u) / m, (x, pc.other, True, pc.other_closed)))
        for pc in cell["left"]:
            u = x - cell["lo"]
            m = pc.den + d * u
            if m > 0:
                best = _max_entry(best, ((pc.num + d * v * u) / m, (pc.other, x, pc.other_closed, True)))
        return self._entry_to_value(best)

    def evaluate(self, xs) -> np.ndarray:
        """Float values at an array of points (vectorized per cell)."""
        xs = np.asarray(xs, dtype=float)
        if not self.n:
            return np.zeros(xs.shape)
        flat = xs.ravel()
        res = np.zeros(flat.shape)
        idx = np.searchsorted(self._fpts, flat, side="left")
        on_point = (idx < self.n) & (self._fpts[np.minimum(idx, self.n - 1)] == flat)
        res[on_point] = self._fpoint[idx[on_point]]
        for r in np.unique(idx[~on_point]):
            sel = (~on_point) & (idx == r)
            res[sel] = self._eval_cell(int(r), flat[sel])
        return res.reshape(xs.shape)

    def _eval_cell(self, r, x):
        d, v, const, right, left, lo, hi = self._fcells[r]
        val = np.full(x.shape, const)
        for arr, u in ((right, hi - x), (left, x - lo)):
            if arr is None:
                continue
            num = arr[:, :1] + d * v * u[None, :]
            den = arr[:, 1:2] + d * u[None, :]
            pos = den > 0
            q = np.where(pos, num / np.where(pos, den, 1.0), 0.0)
            val = np.maximum(val, q.max(axis=0))
        return val

    # -- exact superlevel sets --------------------------------------------------

    def superlevel(self, t) -> list:
        """Exact ``{x : value(x) > t}`` as a sorted list of disjoint intervals."""
        t = as_rational(t)
        pieces = []
        for k, pv in enumerate(self.point_values):
            if pv.value > t:
                pieces.append(Interval.point(self.points[k]))
        for cell in self.cells:
            lo, hi = cell["lo"], cell["hi"]
            if lo == hi:
                continue
            if cell["const"] is not None and cell["const"][0] > t:
                pieces.append(Interval(lo, hi))
                continue
            d, v = cell["d"], cell["v"]
            length = hi - lo
            for side in ("right", "left"):
                for pc in cell[side]:
                    span = _solve_piece(pc.num - t * pc.den, (v - t) * d, pc.den, d, length)
                    if span is None:
                        continue
                    u0, u1 = span
                    if side == "right":
                        a, b = (hi - u1 if math.isfinite(u1) else -INF), hi - u0
                    else:
                        a, b = lo + u0, (lo + u1 if math.isfinite(u1) else INF)
                    if a < b:
                        pieces.append(Interval(a, b))
        return merge_intervals(pieces)


def _solve_piece(A, B, den, d, length):
    """Open u-range inside (0, length) where A + B*u > 0 and den + d*u > 0."""
    lo, hi = Fraction(0), length
    if den == 0 and d == 0:
        return None
    if B == 0:
        if A <= 0:
            return None
    elif B > 0:
        lo = max(lo, -A / B)
    else:
        hi = min(hi, A / -B)
    if lo >= hi:
        return None
    return lo, hi


def _max_entry(e1, e2):
    if e1 is None:
        return e2
    if e2 is None:
        return e1
    if e2[0] > e1[0] or (e2[0] == e1[0] and e2[1] < e1[1]):
        return e2
    return e1


def merge_intervals(pieces) -> list:
    """Union of intervals, merging overlaps and touching ends where the shared point is covered."""
    pieces = sorted(pieces, key=Interval.sort_key)
    out = []
    for iv in pieces:
        if out:
            last = out[-1]
            touches = iv.lo < last.hi or (iv.lo == last.hi and (iv.lo_closed or last.hi_closed))
            if touches:
                if iv.hi > last.hi or (iv.hi == last.hi and iv.hi_closed and not last.hi_closed):
                    out[-1] = Interval(last.lo, iv.hi, last.lo_closed, iv.hi_closed)
                continue
        out.append(iv)
    return out


# -- level sets -------------------------------------------------------------------


def _function_superlevel(f: StepFunction, t) -> list:
    pieces = []
    bps = f.breakpoints
    for i, (a, b) in enumerate(zip(bps, bps[1:])):
        if f.values[i] > t:
            pieces.append(Interval(a, b))
    for x, pv in zip(bps, f.point_values):
        if pv > t:
            pieces.append(Interval.point(x))
    return merge_intervals(pieces)


def _tail_window(mu, f, t):
    """Bounded window outside of which the maximal function is below t, from the L1 tail bound."""
    pts = candidate_points(mu, f)
    if not pts:
        return Interval.closed(-1, 1)
    mass = integral_of(mu, f, Interval.real_line())
    lo, hi = pts[0], pts[-1]
    if mass == 0:
        return Interval.closed(lo - 1, hi + 1)
    dL, dR = mu.left_tail_density, mu.right_tail_density
    if dL == 0 or dR == 0:
        raise WindowTooSmall("a tail without mass keeps the maximal function from decaying; give a window")
    return Interval.closed(lo - mass / (dL * t) - 1, hi + mass / (dR * t) + 1)


def superlevel_set(mu: Measure, f: StepFunction, t, kind: str = "two_sided",
                   window: Optional[Interval] = None, tol: float = 1e-12, method: str = "exact") -> list:
    """Strict superlevel set ``{x : g(x) > t}`` where g is f itself or one of its maximal functions.

    ``method="exact"`` solves each linear-fractional piece of the profile
    exactly. ``method="bisection"`` scans candidate points (refined twice between
    neighbours) and bisects membership changes to width ``tol``; components that
    fall between two scan points are missed by construction.
    """
    t = as_rational(t)
    if t <= 0:
        raise ValueError("level t must be positive")
    if kind == "function_itself":
        result = _function_superlevel(f, t)
        return _clip(result, window, lambda x: f(x) > t)
    _check_kind(kind)
    evaluator = _EVALUATORS[kind]
    if method == "exact":
        result = MaximalProfile(mu, f, kind).superlevel(t)
        return _clip(result, window, lambda x: evaluator(mu, f, x).value > t)
    if method != "bisection":
        raise ValueError(f"unknown method {method!r}")
    if window is None:
        window = _tail_window(mu, f, t)
    if not window.bounded:
        raise ValueError("bisection needs a bounded window")
    return _bisection_superlevel(mu, f, t, evaluator, window, Fraction(tol))


def _clip(result, window, inside):
    if window is None:
        return result
    for edge in (window.lo, window.hi):
        if math.isfinite(edge) and inside(edge):
            raise WindowTooSmall(f"superlevel set reaches the window edge at {edge}")
    out = []
    for iv in result:
        lo, lc = (iv.lo, iv.lo_closed) if iv.lo > window.lo else (window.lo, window.lo_closed)
        hi, hc = (iv.hi, iv.hi_closed) if iv.hi < window.hi else (window.hi, window.hi_closed)
        if lo < hi or (lo == hi and lc and hc):
            out.append(Interval(lo, hi, lc, hc))
    return out


def _bisection_superlevel(mu, f, t, evaluator, window, tol):
    pts = [p for p in candidate_points(mu, f) if window.lo < p < window.hi]
    coarse = [window.lo, *pts, window.hi]
    mesh = []
    for a, b in zip(coarse, coarse[1:]):
        mesh += [a, a + (b - a) / 3, a + 2 * (b - a) / 3]
    mesh.append(coarse[-1])
    inside = [evaluator(mu, f, x).value > t for x in mesh]
    if inside[0] or inside[-1]:
        raise WindowTooSmall("superlevel set reaches the window edge")

    def boundary(a, b, a_in):
        while b - a > tol:
            m = (a + b) / 2
            if (evaluator(mu, f, m).value > t) == a_in:
                a = m
            else:
                b = m
        return (a + b) / 2

    out, start = [], None
    for i in range(1, len(mesh)):
        if inside[i] and not inside[i - 1]:
            start = boundary(mesh[i - 1], mesh[i], False)
        elif not inside[i] and inside[i - 1]:
            out.append(Interval(start, boundary(mesh[i - 1], mesh[i], True)))
    return out


# -- brute-force oracle ----------------------------------------------------------


@functools.lru_cache(maxsize=32)
def _oracle_grid(mu: Measure, f: StepFunction, n: int):
    lo, hi = f.support_hull
    lo, hi = lo - 1, hi + 1
    step = (hi - lo) / (n - 1)
    xs = np.linspace(float(lo), float(hi), n)
    # cumulative mass and f-mass from lo are piecewise linear between these knots
    knots = sorted({lo, hi} | {b for b in mu.density_breakpoints + f.breakpoints if lo < b < hi})
    cum_m, cum_i = [0.0], [0.0]
    for a, b in zip(knots, knots[1:]):
        mid = (a + b) / 2
        d, v = mu.density_at(mid), f(mid)
        cum_m.append(cum_m[-1] + float(d * (b - a)))
        cum_i.append(cum_i[-1] + float(d * v * (b - a)))
    fk = [float(k) for k in knots]
    before_m, before_i = np.interp(xs, fk, cum_m), np.interp(xs, fk, cum_i)
    at_m, at_i = np.zeros(n), np.zeros(n)
    for x, w in mu.atoms:
        if not lo <= x <= hi:
            continue
        pos = (x - lo) / step
        k = math.ceil(pos)
        fw, fi = float(w), float(w * f(x))
        if pos == k:
            at_m[k] += fw
            at_i[k] += fi
            k += 1
        before_m[k:] += fw
        before_i[k:] += fi
    return lo, step, before_m, before_i, before_m + at_m, before_i + at_i


def _signed_prefix(mu, f, lo, x):
    """(mass, f-mass) of [lo, x), negated as [x, lo) when x < lo."""
    if x == lo:
        return Fraction(0), Fraction(0)
    if x > lo:
        iv = Interval(lo, x, True, False)
        return measure_of(mu, iv), integral_of(mu, f, iv)
    iv = Interval(x, lo, True, False)
    return -measure_of(mu, iv), -integral_of(mu, f, iv)


def grid_oracle_at(mu: Measure, f: StepFunction, x, n: int) -> Fraction:
    """Best average over intervals containing x with endpoints on a uniform n-point grid plus x.

    The grid spans one unit beyond the support hull of f. The optimal pair is
    found by Dinkelbach iteration on float prefix sums, then its average is
    recomputed exactly, so the result is the exact average of a genuine
    interval containing x.
    """
    if n < 2:
        raise ValueError("grid needs at least two points")
    x = as_rational(x)
    if f.support_hull is None:
        return Fraction(0)
    n = int(n)
    lo, step, bm, bi, am, ai = _oracle_grid(mu, f, n)
    pos = (x - lo) / step
    L = min(max(math.ceil(pos), 0), n)       # grid points strictly left of x
    R = min(max(math.floor(pos) + 1, 0), n)  # first grid point strictly right of x
    xm, xi = _signed_prefix(mu, f, lo, x)
    w = mu.atom_weight(x)
    xm_b, xi_b = float(xm), float(xi)
    xm_a, xi_a = float(xm + w), float(xi + w * f(x))
    lo_m = np.concatenate([bm[:L], am[:L], [xm_b]])
    lo_i = np.concatenate([bi[:L], ai[:L], [xi_b]])
    hi_m = np.concatenate([bm[R:], am[R:], [xm_a]])
    hi_i = np.concatenate([bi[R:], ai[R:], [xi_a]])
    lam, best = 0.0, None
    for _ in range(100):
        j = int(np.argmax(hi_i - lam * hi_m))
        i = int(np.argmin(lo_i - lam * lo_m))
        mass = hi_m[j] - lo_m[i]
        if mass <= 0:
            break
        new = (hi_i[j] - lo_i[i]) / mass
        if best is not None and new <= lam:
            break
        best, lam = (i, j), new
    if best is None:
        return Fraction(0)
    i, j = best
    if i == 2 * L:
        a, lc = x, True
    else:
        a, lc = lo + (i % L) * step, i < L
    if j == 2 * (n - R):
        b, hc = x, True
    else:
        b, hc = lo + (R + j % (n - R)) * step, j >= n - R
    if a == b and not (lc and hc):
        return Fraction(0)
    return average(mu, f, Interval(a, b, lc, hc))
