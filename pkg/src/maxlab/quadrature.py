"""L^p norms against piecewise-constant measures, and the ratio ||Mf||_p / ||f||_p.

Norms of step functions are closed-form sums. Norms of a general nonnegative
function g (in practice the maximal function, which is only piecewise smooth)
use adaptive Gauss-Kronrod panels that never straddle a breakpoint. Outside a
bounded window the integrand is controlled by an envelope ``g(x) <= F / mu((x, edge))``
(F = L1 mass of the underlying f), which lets the tail be truncated with a
certified remainder and integrated on geometrically growing panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import TailNotCertified
from .maximal import MaximalProfile
from .measure import Interval, Measure, StepFunction, candidate_points, integral_of

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])

MAX_PANELS = 200_000


@dataclass(frozen=True)
class NormResult:
    value: float
    error_bound: float
    pieces_used: int

    @property
    def pth_power(self) -> float:
        return self.value


@dataclass(frozen=True)
class RatioResult:
    value: float
    error_bound: float
    mf_norm: NormResult
    f_norm: NormResult


def _root(total: float, err: float, p: float, pieces: int) -> NormResult:
    value = total ** (1.0 / p) if total > 0 else 0.0
    lo = max(total - err, 0.0) ** (1.0 / p)
    hi = (total + err) ** (1.0 / p)
    return NormResult(float(value), float(max(hi - value, value - lo)), pieces)


def lp_norm_step(f: StepFunction, mu: Measure, p: float) -> NormResult:
    """Exact-rational masses combined with binary64 powers."""
    if p <= 1:
        raise ValueError("p must exceed 1")
    p = float(p)
    pts = candidate_points(mu, f)
    total = 0.0
    pieces = 0
    for a, b in zip(pts, pts[1:]):
        mid = (a + b) / 2
        d, v = mu.density_at(mid), f(mid)
        if d and v:
            total += float(d * (b - a)) * float(v) ** p
            pieces += 1
    for x, w in mu.atoms:
        v = f(x)
        if v:
            total += float(w) * float(v) ** p
            pieces += 1
    err = 8 * np.finfo(float).eps * total * max(pieces, 1)
    return _root(total, err, p, pieces)


def gauss_kronrod(g: Callable, a: np.ndarray, b: np.ndarray):
    """Kronrod-15 estimates and |K15 - G7| error estimates on panels [a_i, b_i]."""
    half = (b - a) / 2
    mid = (a + b) / 2
    x = mid[:, None] + half[:, None] * NODES[None, :]
    y = g(x)
    k = half * (y @ KRONROD_WEIGHTS)
    gs = half * (y @ GAUSS_WEIGHTS)
    return k, np.abs(k - gs)


def adaptive_integrate(g: Callable, edges: Sequence[float], tol: float, max_panels: int = MAX_PANELS):
    """Integrate a vectorized g over consecutive panels ``edges[i], edges[i+1]``.

    Panels are bisected (all marked panels at once) until the summed error
    estimate is below ``tol``. Returns (value, error_estimate, panels_used).
    Summation order is fixed by panel position, so results are reproducible.
    """
    edges = np.asarray(edges, dtype=float)
    if len(edges) < 2:
        return 0.0, 0.0, 0
    a, b = edges[:-1], edges[1:]
    keep = b > a
    a, b = a[keep], b[keep]
    val, err = gauss_kronrod(g, a, b)
    for _ in range(200):
        total_err = err.sum()
        if total_err <= tol or len(a) >= max_panels:
            break
        mark = err > tol / (4 * len(a))
        mark &= (b - a) > 4 * np.finfo(float).eps * np.maximum(np.abs(a), np.abs(b))
        if not mark.any():
            break
        mid = (a[mark] + b[mark]) / 2
        na = np.concatenate([a[mark], mid])
        nb = np.concatenate([mid, b[mark]])
        nv, ne = gauss_kronrod(g, na, nb)
        a = np.concatenate([a[~mark], na])
        b = np.concatenate([b[~mark], nb])
        val = np.concatenate([val[~mark], nv])
        err = np.concatenate([err[~mark], ne])
        order = np.argsort(a, kind="stable")
        a, b, val, err = a[order], b[order], val[order], err[order]
    return float(math.fsum(val)), float(err.sum()), len(a)


def _tail_edges(R: float, h: float):
    """Geometric panel edges 0, h, 2h, 4h, ... covering [0, R]."""
    edges = [0.0, h]
    while edges[-1] < R:
        edges.append(min(edges[-1] * 2, R))
    return edges


def lp_norm_evaluable(g: Callable, mu: Measure, p: float, tail_window: Interval, tol: float = 1e-10,
                      l1_mass: Optional[float] = None, breakpoints: Sequence = ()) -> NormResult:
    """L^p(mu) norm of a nonnegative vectorized function g.

    ``tol`` bounds the error of the p-th power integral. It is absolute while
    that integral is below 1 and relative above, since binary64 cannot do better.

    Atoms contribute ``w * g(x)**p``. The density part is integrated on
    ``tail_window`` (widened to contain every density breakpoint and atom) with
    panels split at all ``breakpoints``; outside it, the tails are integrated
    up to a truncation point where the envelope bound ``g(x) <= l1_mass / mu((x, edge))``
    certifies the remainder below ``tol / 4`` per side.
    """
    if p <= 1:
        raise ValueError("p must exceed 1")
    p = float(p)
    gp = lambda x: np.asarray(g(x), dtype=float) ** p
    total, err, pieces = 0.0, 0.0, 0
    for x, w in mu.atoms:
        gx = float(np.asarray(g(np.array([float(x)])))[0])
        total += float(w) * gx ** p
        pieces += 1
    marks = sorted(set(mu.density_breakpoints) | set(mu.atom_positions) | set(breakpoints))
    lo, hi = tail_window.lo, tail_window.hi
    if not tail_window.bounded:
        raise ValueError("tail_window must be bounded")
    if marks:
        lo, hi = min(lo, marks[0]), max(hi, marks[-1])
    inner = [lo] + [m for m in marks if lo < m < hi] + [hi]
    segments = []
    for a, b in zip(inner, inner[1:]):
        d = mu.density_at((a + b) / 2)
        if d and a != b:
            segments.append((float(d), float(a), float(b)))
    # a one-panel pilot sets the scale: tol is absolute up to 1 and relative beyond
    pilot = total + sum(gauss_kronrod(lambda x, df=df: df * gp(x), np.array([a]), np.array([b]))[0][0]
                        for df, a, b in segments)
    tol = tol * max(1.0, pilot)
    for df, a, b in segments:
        v, e, n = adaptive_integrate(lambda x: df * gp(x), [a, b], tol / (2 * len(segments)))
        total += v
        err += e
        pieces += n
    for side, d, edge in (("left", mu.left_tail_density, lo), ("right", mu.right_tail_density, hi)):
        if d == 0:
            continue
        if l1_mass is None:
            raise TailNotCertified(f"{side} tail has positive density but no L1 envelope was given")
        df, F, fe = float(d), float(l1_mass), float(edge)
        if F == 0:
            continue
        sign = -1.0 if side == "left" else 1.0
        # remainder beyond distance R: d * int_R^inf (F / (d u))^p du
        R = (4 * F ** p * df ** (1 - p) / ((p - 1) * tol)) ** (1 / (p - 1))
        if not math.isfinite(R) or R > 1e150:
            raise TailNotCertified(f"{side} tail truncation point is not finite for p={p}")
        remainder = F ** p * df ** (1 - p) * R ** (1 - p) / (p - 1)
        probe = fe + sign * np.geomspace(1e-3, R, 25)
        bound = F / (df * np.abs(probe - fe))
        if np.any(np.asarray(g(probe), dtype=float) > bound * (1 + 1e-9) + 1e-300):
            raise TailNotCertified(f"{side} tail exceeds the envelope F/mu((x, edge))")
        h = max(1.0, hi - lo if isinstance(hi - lo, float) else float(hi - lo))
        v, e, n = adaptive_integrate(lambda u: df * gp(fe + sign * u), _tail_edges(R, h), tol / 8)
        total += v
        err += e + remainder
        pieces += n
    err += 16 * np.finfo(float).eps * total
    return _root(total, err, p, pieces)


def maximal_norm(mu: Measure, f: StepFunction, p: float, tol: float = 1e-10,
                 profile: Optional[MaximalProfile] = None) -> NormResult:
    """||Mf||_p against mu."""
    profile = profile or MaximalProfile(mu, f)
    pts = profile.points
    if not pts:
        return NormResult(0.0, 0.0, 0)
    window = Interval.closed(pts[0], pts[-1])
    l1 = float(integral_of(mu, f, Interval.real_line()))
    return lp_norm_evaluable(profile.evaluate, mu, p, window, tol, l1_mass=l1, breakpoints=pts)


def ratio(mu: Measure, f: StepFunction, p: float, tol: float = 1e-10) -> RatioResult:
    """||Mf||_p / ||f||_p with a combined error bound."""
    fn = lp_norm_step(f, mu, p)
    if fn.value <= 0:
        raise ValueError("f has zero norm")
    mn = maximal_norm(mu, f, p, tol)
    value = mn.value / fn.value
    err = (mn.error_bound + value * fn.error_bound) / max(fn.value - fn.error_bound, np.finfo(float).tiny)
    return RatioResult(float(value), float(err), mn, fn)
