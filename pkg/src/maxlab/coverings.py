"""Sunrise identity, exact average-t ball coverings, and their verification.

All of this is exact rational arithmetic. A "ball" is an Interval; a covering
at level t is a list of balls on each of which f averages exactly t and whose
union contains the strict superlevel set ``{f > t}`` inside the support of mu.

The basic tool is :func:`solve_average_equation`. Fix the right end of an
interval and slide the left end leftward: the quantity
``g = t * mu(I) - integral_I f`` is piecewise linear in the left end, with
jumps of ``w * (t - f(a))`` at atoms. A ball of average t is a zero of g with
positive mass, found by walking cells and solving one affine equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import NoSolution, PreconditionViolated
from .maximal import merge_intervals, superlevel_set
from .measure import INF, Interval, Measure, StepFunction, as_rational, average, candidate_points, integral_of, measure_of


@dataclass(frozen=True)
class CoveringFamily:
    balls: tuple
    t: Fraction
    averages: tuple
    side_labels: tuple

    def __len__(self):
        return len(self.balls)

    def to_json(self) -> dict:
        return {
            "t": str(self.t),
            "balls": [
                {"lo": str(b.lo), "hi": str(b.hi), "lo_closed": b.lo_closed, "hi_closed": b.hi_closed,
                 "average": str(a), "side": s}
                for b, a, s in zip(self.balls, self.averages, self.side_labels)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoveringFamily":
        balls, avgs, sides = [], [], []
        for item in data["balls"]:
            balls.append(Interval(item["lo"], item["hi"], bool(item["lo_closed"]), bool(item["hi_closed"])))
            avgs.append(as_rational(item["average"]))
            sides.append(item.get("side", ""))
        return cls(tuple(balls), as_rational(data["t"]), tuple(avgs), tuple(sides))


@dataclass(frozen=True)
class SunriseReport:
    t: Fraction
    level_set: tuple
    lhs: float
    rhs: float
    residual: float
    exact_residual: Fraction = Fraction(0)


@dataclass
class CoveringReport:
    ok: bool
    averages_ok: bool
    coverage_ok: bool
    overlap_ok: bool
    identity_ok: bool
    max_overlap: int
    problems: list = field(default_factory=list)


# -- sunrise identity ------------------------------------------------------------


def sunrise_check(mu: Measure, f: StepFunction, t, method: str = "exact", tol: float = 1e-12) -> SunriseReport:
    """Compare ``t * mu({M+ f > t})`` with the integral of f over the same set."""
    t = as_rational(t)
    if t <= 0:
        raise ValueError("level t must be positive")
    if not mu.is_atomless:
        raise PreconditionViolated("the sunrise identity needs an atomless measure")
    if mu.left_tail_density == 0:
        raise PreconditionViolated("the sunrise identity needs infinite mass on the left tail")
    level = superlevel_set(mu, f, t, "one_sided_plus", tol=tol, method=method)
    lhs = t * sum((measure_of(mu, iv) for iv in level), Fraction(0))
    rhs = sum((integral_of(mu, f, iv) for iv in level), Fraction(0))
    res = abs(lhs - rhs)
    return SunriseReport(t, tuple(level), float(lhs), float(rhs), float(res), res)


# -- solving average = t ----------------------------------------------------------


def _walk_left(mu: Measure, f: StepFunction, anchor: Fraction, t: Fraction, anchor_closed: bool):
    """First lower endpoint s < anchor with average over ``<s, anchor>`` equal to t.

    Returns ``(s, s_closed)``. When the average equals t on a whole stretch
    next to the anchor, the far end of that stretch is returned.
    """
    w0 = mu.atom_weight(anchor) if anchor_closed else Fraction(0)
    g, m = w0 * (t - f(anchor)), w0
    if g > 0:
        raise NoSolution(f"average at the anchor {anchor} is already below t")
    flat = g == 0
    best = (anchor, True) if flat and m > 0 else None
    pts = [p for p in candidate_points(mu, f) if p < anchor]
    edges = [*reversed(pts), -INF]
    right = anchor
    for left in edges:
        if math.isfinite(left):
            d, v = mu.density_at((left + right) / 2), f.region_value(left, right)
        else:
            d, v = mu.left_tail_density, Fraction(0)
        rate = d * (t - v)
        if flat:
            if d == 0 or rate == 0:
                if d > 0:
                    m += d * (right - left) if math.isfinite(left) else INF
                    if m == INF:
                        raise NoSolution("average stays at t on an infinite tail")
                    best = (left, False)
            elif rate < 0:
                if best is not None:
                    return best
                flat = False
            else:
                if best is not None:
                    return best
                raise NoSolution(f"average next to the anchor {anchor} is below t")
        if not flat and rate != 0:
            if rate > 0 and (not math.isfinite(left) or g + rate * (right - left) >= 0):
                return right + g / rate, False
            g += rate * (right - left)
            m += d * (right - left)
        elif not flat and d > 0:
            m += d * (right - left)
        if not math.isfinite(left):
            break
        w = mu.atom_weight(left)
        if w:
            jump = w * (t - f(left))
            if flat:
                if jump == 0:
                    m += w
                    best = (left, True)
                elif jump < 0:
                    if best is not None:
                        return best
                    flat = False
                    g += jump
                    m += w
                else:
                    if best is not None:
                        return best
                    raise NoSolution(f"average next to the anchor {anchor} is below t")
            else:
                if g + jump == 0:
                    return left, True
                if g + jump > 0:
                    raise NoSolution(f"average jumps across t at the atom {left}")
                g += jump
                m += w
        right = left
    if flat and best is not None:
        return best
    raise NoSolution("average never comes back down to t on the left")


def solve_interval(mu: Measure, f: StepFunction, anchor, t, direction: str = "left",
                   anchor_closed: bool = False) -> Interval:
    """The ball of average t with one end at ``anchor``, found by walking in ``direction``."""
    anchor, t = as_rational(anchor), as_rational(t)
    if t <= 0:
        raise ValueError("level t must be positive")
    if direction == "left":
        s, sc = _walk_left(mu, f, anchor, t, anchor_closed)
        return Interval(s, anchor, sc, anchor_closed)
    if direction == "right":
        s, sc = _walk_left(mu.reflected(), f.reflected(), -anchor, t, anchor_closed)
        return Interval(anchor, -s, anchor_closed, sc)
    raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")


def solve_average_equation(mu: Measure, f: StepFunction, anchor, t, direction: str = "left",
                           anchor_closed: bool = False) -> Fraction:
    """Exact s with average of f over ``(s, anchor)`` (or ``(anchor, s)``) equal to t."""
    ball = solve_interval(mu, f, anchor, t, direction, anchor_closed)
    return ball.lo if direction == "left" else ball.hi


# -- covering construction ---------------------------------------------------------


def strict_superlevel_in_support(mu: Measure, f: StepFunction, t) -> list:
    """``{f > t}`` intersected with the support of mu, as disjoint intervals.

    Cells of zero density are dropped, so the result may differ from the true
    set by finitely many points (closure endpoints of density regions).
    """
    t = as_rational(t)
    pts = candidate_points(mu, f)
    pieces = []
    for a, b in zip(pts, pts[1:]):
        if mu.density_at((a + b) / 2) > 0 and f.region_value(a, b) > t:
            pieces.append(Interval(a, b))
    for x in mu.atom_positions:
        if f(x) > t:
            pieces.append(Interval.point(x))
    return merge_intervals(pieces)


def _components(mu: Measure, pieces: list) -> list:
    """Merge superlevel pieces separated only by mu-null gaps."""
    out = []
    for iv in pieces:
        if out:
            last = out[-1]
            gap = Interval(last.hi, iv.lo, not last.hi_closed, not iv.lo_closed) if last.hi < iv.lo else None
            if gap is None or measure_of(mu, gap) == 0:
                out[-1] = Interval(last.lo, iv.hi, last.lo_closed, iv.hi_closed)
                continue
        out.append(iv)
    return out


def _check_atoms(mu: Measure):
    atoms = mu.atom_positions
    if len(atoms) > 2:
        raise PreconditionViolated(f"at most two atoms are supported, got {len(atoms)}")
    if len(atoms) == 2 and measure_of(mu, Interval.open(*atoms)) > 0:
        raise PreconditionViolated("two atoms with positive mass between them")


def _left_remainder(c: Interval, ball: Interval) -> Optional[Interval]:
    """Part of component c not covered by ``ball``, assuming c lies left of ball's right end."""
    s = ball.lo
    if c.hi < s or (c.hi == s and not (c.hi_closed and ball.lo_closed)):
        return c
    if c.lo > s:
        return None
    if c.lo == s:
        return Interval.point(s) if c.lo_closed and not ball.lo_closed else None
    return Interval(c.lo, s, c.lo_closed, not ball.lo_closed)


def _sweep_left(mu, f, t, comps, max_chain):
    """Balls covering the components, built right to left."""
    balls = []
    comps = list(comps)
    chained = 0
    while comps:
        comp = comps.pop()
        ball = solve_interval(mu, f, comp.hi, t, "left", comp.hi_closed)
        prev = balls[-1] if balls else None
        if prev is not None and prev.lo == ball.hi and prev.lo_closed != ball.hi_closed:
            chained += 1
            if chained > max_chain:
                raise NoSolution(f"ball chaining did not stop after {max_chain} steps")
            balls[-1] = Interval(ball.lo, prev.hi, ball.lo_closed, prev.hi_closed)
        else:
            chained = 0
            balls.append(ball)
        rest = (_left_remainder(c, ball) for c in comps)
        comps = [c for c in rest if c is not None and measure_of(mu, c) > 0]
    return balls[::-1]


def covering_selection(mu: Measure, f: StepFunction, t) -> CoveringFamily:
    """Disjoint balls of average exactly t covering ``{f > t}`` in the support of mu.

    Atoms outside the superlevel set act as barriers: components to their left
    are swept leftward and components to their right rightward, so no ball
    crosses them. Within a sweep each ball is anchored at the outer end of the
    nearest uncovered component. If its free end lands inside a component, the
    ball is extended by another average-t ball starting there; the union of
    adjacent average-t balls still averages t.
    """
    t = as_rational(t)
    if t <= 0:
        raise ValueError("level t must be positive")
    if mu.left_tail_density == 0 or mu.right_tail_density == 0:
        raise PreconditionViolated("both tails of the measure must have infinite mass")
    _check_atoms(mu)
    comps = _components(mu, strict_superlevel_in_support(mu, f, t))
    if not comps:
        return CoveringFamily((), t, (), ())
    barriers = [x for x in mu.atom_positions if f(x) <= t]
    cap = len(comps) + 1
    if barriers:
        left = [c for c in comps if c.hi <= barriers[0]]
        right = [c for c in comps if c.lo >= barriers[-1]]
    else:
        left, right = comps, []
    balls = _sweep_left(mu, f, t, left, cap)
    labels = ["left"] * len(balls)
    if right:
        refl = [Interval(-c.hi, -c.lo, c.hi_closed, c.lo_closed) for c in reversed(right)]
        rballs = _sweep_left(mu.reflected(), f.reflected(), t, refl, cap)
        rballs = [Interval(-b.hi, -b.lo, b.hi_closed, b.lo_closed) for b in reversed(rballs)]
        balls += rballs
        labels += ["right"] * len(rballs)
    avgs = tuple(average(mu, f, b) for b in balls)
    return CoveringFamily(tuple(balls), t, avgs, tuple(labels))


def _is_unimodal(f: StepFunction) -> bool:
    seq = []
    for i, pv in enumerate(f.point_values):
        seq.append(pv)
        if i < len(f.values):
            seq.append(f.values[i])
    k = 0
    while k + 1 < len(seq) and seq[k + 1] >= seq[k]:
        k += 1
    return all(seq[j + 1] <= seq[j] for j in range(k, len(seq) - 1))


def _side_profile(mu: Measure, f: StepFunction, start, direction: str):
    """Breakpoints of the integral of f as a function of mass, moving away from ``start``.

    Returns a list of (mass_so_far, position, slope) triples, one per
    positive-density cell, where slope is the f value on the cell.
    """
    if direction == "right":
        return [(m, -x, v, d) for m, x, v, d in _side_profile(mu.reflected(), f.reflected(), -start, "left")]
    pts = [p for p in candidate_points(mu, f) if p < start]
    edges = [*reversed(pts), -INF]
    out, m, right = [], Fraction(0), start
    for left in edges:
        if math.isfinite(left):
            d, v = mu.density_at((left + right) / 2), f.region_value(left, right)
        else:
            d, v = mu.left_tail_density, Fraction(0)
        if d > 0:
            out.append((m, right, v, d))
            m += d * (right - left) if math.isfinite(left) else 0
        if not math.isfinite(left):
            break
        right = left
    return [(m, x, v, d) for m, x, v, d in out]


def unimodal_covering(mu: Measure, f: StepFunction, t) -> CoveringFamily:
    """One ball of average t around the superlevel interval of a unimodal f.

    The ball grows from the hull J of ``{f > t}`` by equal mu-mass on both
    sides. Along that path the integral is piecewise linear in the added mass,
    so the first crossing of average t is solved exactly.
    """
    t = as_rational(t)
    if t <= 0:
        raise ValueError("level t must be positive")
    if not mu.is_atomless:
        raise PreconditionViolated("the unimodal covering needs an atomless measure")
    if mu.left_tail_density == 0 or mu.right_tail_density == 0:
        raise PreconditionViolated("both tails of the measure must have infinite mass")
    if not _is_unimodal(f):
        raise PreconditionViolated("f is not unimodal")
    pieces = strict_superlevel_in_support(mu, f, t)
    if not pieces:
        return CoveringFamily((), t, (), ())
    J = Interval.open(pieces[0].lo, pieces[-1].hi)
    g0 = t * measure_of(mu, J) - integral_of(mu, f, J)
    left = _side_profile(mu, f, J.lo, "left")
    right = _side_profile(mu, f, J.hi, "right")
    # the added mass r at which each side enters a new cell
    cuts = sorted({m for m, *_ in left} | {m for m, *_ in right})

    def cell_at(side, r):
        cur = side[0]
        for item in side:
            if item[0] <= r:
                cur = item
        return cur

    g, r = g0, Fraction(0)
    for i, r0 in enumerate(cuts):
        r1 = cuts[i + 1] if i + 1 < len(cuts) else None
        vl, vr = cell_at(left, r0)[2], cell_at(right, r0)[2]
        slope = 2 * t - vl - vr
        if slope > 0 and (r1 is None or g + slope * (r1 - r0) >= 0):
            r = r0 - g / slope
            break
        if r1 is None:
            raise NoSolution("the average never comes down to t")
        g += slope * (r1 - r0)
    lm, lx, _, ld = cell_at(left, r)
    rm, rx, _, rd = cell_at(right, r)
    ball = Interval.open(lx - (r - lm) / ld, rx + (r - rm) / rd)
    return CoveringFamily((ball,), t, (average(mu, f, ball),), ("unimodal",))


# -- verification -------------------------------------------------------------------


def overlap_count(family, x) -> int:
    """Number of balls of the family containing x."""
    balls = family.balls if isinstance(family, CoveringFamily) else family
    return sum(1 for b in balls if b.contains(x))


def verify_covering(family: CoveringFamily, mu: Measure, f: StepFunction, t, L: int = 1) -> CoveringReport:
    """Exact check of averages, coverage of ``{f > t}`` and overlap at most L.

    The overlap count is piecewise constant between ball endpoints, so sampling
    one interior point per cell of the arrangement plus every atom checks it
    mu-almost everywhere. Coverage is checked the same way, which tolerates
    missing finitely many non-atom points.
    """
    t = as_rational(t)
    problems = []
    averages_ok = True
    for b in family.balls:
        m = measure_of(mu, b)
        if m == 0 or m == INF:
            averages_ok = False
            problems.append(f"ball {b} has measure {m}")
        elif average(mu, f, b) != t:
            averages_ok = False
            problems.append(f"ball {b} averages {average(mu, f, b)} instead of {t}")
    lhs = sum((t * measure_of(mu, b) for b in family.balls), Fraction(0))
    rhs = sum((integral_of(mu, f, b) for b in family.balls), Fraction(0))
    identity_ok = lhs == rhs
    if not identity_ok:
        problems.append(f"level identity fails: {lhs} != {rhs}")

    pts = sorted(set(candidate_points(mu, f)) | {b.lo for b in family.balls} | {b.hi for b in family.balls})
    pts = [p for p in pts if math.isfinite(p)]
    samples = []
    if pts:
        samples.append((pts[0] - 1, None))
        samples += [((a + b) / 2, None) for a, b in zip(pts, pts[1:])]
        samples.append((pts[-1] + 1, None))
    samples += [(x, w) for x, w in mu.atoms]
    coverage_ok, overlap_ok, worst = True, True, 0
    for x, w in samples:
        if w is None and mu.density_at(x) == 0:
            continue
        n = overlap_count(family, x)
        worst = max(worst, n)
        if n > L:
            overlap_ok = False
            problems.append(f"{n} balls overlap at {x}")
        if f(x) > t and n == 0:
            coverage_ok = False
            problems.append(f"{x} lies in the superlevel set but is not covered")
    ok = averages_ok and coverage_ok and overlap_ok and identity_ok
    return CoveringReport(ok, averages_ok, coverage_ok, overlap_ok, identity_ok, worst, problems)
