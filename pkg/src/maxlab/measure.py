"""Exact intervals, measures and step functions on the real line.

Everything here is rational. A measure is a finite list of weighted atoms
plus a piecewise-constant density whose two outer regions may carry positive
density (and therefore infinite mass). Step functions are compactly supported
and take explicit values at their own breakpoints, because an atom sitting on
a breakpoint sees that value.

Infinite quantities (endpoints, measures) are represented by ``math.inf``,
which absorbs addition and compares correctly against ``Fraction``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, str, float, Fraction]
INF = math.inf


def as_rational(value: Rational) -> Fraction:
    """Convert ints, fraction strings ("3/7"), decimal strings and floats exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"not a finite rational: {value!r}")
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def _as_endpoint(value) -> Union[Fraction, float]:
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "-inf", "infinity", "-infinity"):
        return -INF if value.strip().startswith("-") else INF
    if isinstance(value, float) and math.isinf(value):
        return value
    return as_rational(value)


@dataclass(frozen=True)
class Interval:
    """An interval of the extended real line with per-endpoint inclusion flags."""

    lo: Union[Fraction, float]
    hi: Union[Fraction, float]
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        lo, hi = _as_endpoint(self.lo), _as_endpoint(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo > hi:
            raise ValueError(f"empty interval: lo={lo} > hi={hi}")
        if (self.lo_closed and lo == -INF) or (self.hi_closed and hi == INF) or lo == INF or hi == -INF:
            raise ValueError("infinite endpoints must be open")
        if lo == hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("degenerate interval must be a closed singleton")

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(lo, hi, False, False)

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(lo, hi, True, True)

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x, True, True)

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(-INF, INF)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def length(self):
        return self.hi - self.lo

    def contains(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    __contains__ = contains

    def sort_key(self):
        return (self.lo, self.hi, self.lo_closed, self.hi_closed)

    def __str__(self) -> str:
        if self.is_point:
            return "{%s}" % self.lo
        return "%s%s, %s%s" % ("[" if self.lo_closed else "(", self.lo, self.hi, "]" if self.hi_closed else ")")


@dataclass(frozen=True)
class Measure:
    """Finitely many atoms plus a piecewise-constant density.

    ``density_values[0]`` is the density on ``(-inf, b_0)``, ``density_values[k]``
    on ``(b_{k-1}, b_k)`` and ``density_values[-1]`` on ``(b_last, +inf)``.
    """

    atoms: tuple = ()
    density_breakpoints: tuple = ()
    density_values: tuple = (Fraction(0),)

    def __post_init__(self):
        atoms = tuple(sorted((as_rational(x), as_rational(w)) for x, w in self.atoms))
        bps = tuple(as_rational(b) for b in self.density_breakpoints)
        vals = tuple(as_rational(v) for v in self.density_values)
        if len(vals) != len(bps) + 1:
            raise ValueError("density_values must be exactly one longer than density_breakpoints")
        if any(b1 >= b2 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("density breakpoints must be strictly increasing")
        if any(v < 0 for v in vals):
            raise ValueError("density values must be nonnegative")
        if any(w <= 0 for _, w in atoms):
            raise ValueError("atom weights must be strictly positive")
        if any(a[0] == b[0] for a, b in zip(atoms, atoms[1:])):
            raise ValueError("atom positions must be distinct")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "density_breakpoints", bps)
        object.__setattr__(self, "density_values", vals)

    @classmethod
    def lebesgue(cls) -> "Measure":
        return cls((), (), (1,))

    @classmethod
    def from_density(cls, breakpoints: Sequence[Rational], values: Sequence[Rational], atoms=()) -> "Measure":
        return cls(tuple(atoms), tuple(breakpoints), tuple(values))

    @property
    def atom_positions(self) -> tuple:
        return tuple(x for x, _ in self.atoms)

    @property
    def left_tail_density(self) -> Fraction:
        return self.density_values[0]

    @property
    def right_tail_density(self) -> Fraction:
        return self.density_values[-1]

    @property
    def is_atomless(self) -> bool:
        return not self.atoms

    def atom_weight(self, x) -> Fraction:
        i = bisect.bisect_left(self.atom_positions, x)
        if i < len(self.atoms) and self.atoms[i][0] == x:
            return self.atoms[i][1]
        return Fraction(0)

    def density_at(self, x) -> Fraction:
        """Density of the region containing ``x``; at a breakpoint, the region to its right."""
        return self.density_values[bisect.bisect_right(self.density_breakpoints, x)]

    def scaled(self, c: Rational) -> "Measure":
        c = as_rational(c)
        return Measure(tuple((x, c * w) for x, w in self.atoms), self.density_breakpoints,
                       tuple(c * v for v in self.density_values))

    def reflected(self) -> "Measure":
        """Image under x -> -x."""
        return Measure(tuple((-x, w) for x, w in self.atoms),
                       tuple(-b for b in reversed(self.density_breakpoints)),
                       tuple(reversed(self.density_values)))


@dataclass(frozen=True)
class StepFunction:
    """Nonnegative, compactly supported, piecewise-constant function.

    ``values[i]`` is the value on ``(breakpoints[i], breakpoints[i+1])``.
    ``point_values[i]`` is the value at ``breakpoints[i]``; by default the value
    of the region to the right (zero at the last breakpoint). No breakpoints
    means the zero function.
    """

    breakpoints: tuple = ()
    values: tuple = ()
    point_values: tuple = field(default=None)

    def __post_init__(self):
        bps = tuple(as_rational(b) for b in self.breakpoints)
        vals = tuple(as_rational(v) for v in self.values)
        if bps and len(vals) != len(bps) - 1:
            raise ValueError("need exactly one value per region between consecutive breakpoints")
        if not bps and vals:
            raise ValueError("values given without breakpoints")
        if any(b1 >= b2 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if self.point_values is None:
            pvals = vals + (Fraction(0),) if bps else ()
        else:
            pvals = tuple(as_rational(v) for v in self.point_values)
            if len(pvals) != len(bps):
                raise ValueError("point_values must have one entry per breakpoint")
        if any(v < 0 for v in vals + pvals):
            raise ValueError("step function values must be nonnegative")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "point_values", pvals)

    @classmethod
    def zero(cls) -> "StepFunction":
        return cls()

    @classmethod
    def indicator(cls, lo, hi, height: Rational = 1, lo_closed=False, hi_closed=False) -> "StepFunction":
        h = as_rational(height)
        return cls((lo, hi), (h,), (h if lo_closed else 0, h if hi_closed else 0))

    @classmethod
    def point_indicator(cls, x, height: Rational = 1) -> "StepFunction":
        return cls((x,), (), (height,))

    @classmethod
    def indicator_sum(cls, terms: Iterable[tuple]) -> "StepFunction":
        """Sum of ``beta * 1_(lo, hi)`` over open intervals; breakpoint values are the exact sum."""
        terms = [(as_rational(b), as_rational(lo), as_rational(hi)) for b, lo, hi in terms]
        bps = sorted({lo for _, lo, _ in terms} | {hi for _, _, hi in terms})
        vals = [sum((b for b, lo, hi in terms if lo <= u and v <= hi), Fraction(0)) for u, v in zip(bps, bps[1:])]
        pvals = [sum((b for b, lo, hi in terms if lo < x < hi), Fraction(0)) for x in bps]
        return cls(tuple(bps), tuple(vals), tuple(pvals))

    @property
    def support_hull(self):
        if not self.breakpoints:
            return None
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def max_value(self) -> Fraction:
        return max(self.values + self.point_values, default=Fraction(0))

    def __call__(self, x) -> Fraction:
        bps = self.breakpoints
        if not bps or x < bps[0] or x > bps[-1]:
            return Fraction(0)
        i = bisect.bisect_left(bps, x)
        if bps[i] == x:
            return self.point_values[i]
        return self.values[i - 1]

    def region_value(self, a, b) -> Fraction:
        """Value on the open interval (a, b), which must not straddle a breakpoint."""
        bps = self.breakpoints
        if not bps or b <= bps[0] or a >= bps[-1]:
            return Fraction(0)
        i = bisect.bisect_right(bps, a)
        return self.values[i - 1]

    def scaled(self, c: Rational) -> "StepFunction":
        c = as_rational(c)
        return StepFunction(self.breakpoints, tuple(c * v for v in self.values), tuple(c * v for v in self.point_values))

    def reflected(self) -> "StepFunction":
        return StepFunction(tuple(-b for b in reversed(self.breakpoints)), tuple(reversed(self.values)),
                            tuple(reversed(self.point_values)))

    def __add__(self, other: "StepFunction") -> "StepFunction":
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        if not bps:
            return StepFunction()
        vals = [self.region_value(u, v) + other.region_value(u, v) for u, v in zip(bps, bps[1:])]
        pvals = [self(x) + other(x) for x in bps]
        return StepFunction(tuple(bps), tuple(vals), tuple(pvals))


# -- exact evaluation ---------------------------------------------------------


def _cells(mu: Measure, f: StepFunction, lo, hi):
    """Open cells of (lo, hi) on which both density and f are constant: (a, b, density, value)."""
    cuts = sorted({b for b in mu.density_breakpoints + f.breakpoints if lo < b < hi})
    edges = [lo] + cuts + [hi]
    for a, b in zip(edges, edges[1:]):
        if a == b:
            continue
        if a == -INF and b == INF:
            probe = Fraction(0)
        elif a == -INF:
            probe = b - 1
        elif b == INF:
            probe = a + 1
        else:
            probe = (a + b) / 2
        yield a, b, mu.density_at(probe), f(probe)


def _atoms_in(mu: Measure, interval: Interval):
    return [(x, w) for x, w in mu.atoms if interval.contains(x)]


def measure_of(mu: Measure, interval: Interval):
    """Exact measure of ``interval``; ``math.inf`` when an unbounded region of positive density is hit."""
    total = Fraction(0)
    if not interval.is_point:
        for a, b, d, _ in _cells(mu, StepFunction(), interval.lo, interval.hi):
            if d == 0:
                continue
            if not (math.isfinite(a) and math.isfinite(b)):
                return INF
            total += d * (b - a)
    return total + sum((w for _, w in _atoms_in(mu, interval)), Fraction(0))


def integral_of(mu: Measure, f: StepFunction, interval: Interval) -> Fraction:
    """Exact value of the integral of f over ``interval`` against mu."""
    total = Fraction(0)
    if not interval.is_point:
        for a, b, d, v in _cells(mu, f, interval.lo, interval.hi):
            if d and v:
                total += d * v * (b - a)
    return total + sum((w * f(x) for x, w in _atoms_in(mu, interval)), Fraction(0))


def average(mu: Measure, f: StepFunction, interval: Interval) -> Fraction:
    """Integral average of f over ``interval``.

    Zero-measure and infinite-measure intervals both average to zero; the latter
    is the limit of averages over expanding intervals for integrable f.
    """
    m = measure_of(mu, interval)
    if m == 0 or m == INF:
        return Fraction(0)
    return integral_of(mu, f, interval) / m


def candidate_points(mu: Measure, f: StepFunction) -> list:
    """Sorted union of atom positions, density breakpoints and f breakpoints."""
    return sorted(set(mu.atom_positions) | set(mu.density_breakpoints) | set(f.breakpoints))


def support_of(mu: Measure) -> list:
    """Closed support of mu as a sorted list of disjoint intervals and singletons."""
    bps = mu.density_breakpoints
    edges = [-INF, *bps, INF]
    pieces = []
    for (a, b), d in zip(zip(edges, edges[1:]), mu.density_values):
        if d == 0:
            continue
        if pieces and pieces[-1][1] == a:
            pieces[-1][1] = b
        else:
            pieces.append([a, b])
    out = [Interval(a, b, math.isfinite(a), math.isfinite(b)) for a, b in pieces]
    for x in mu.atom_positions:
        if not any(iv.contains(x) for iv in out):
            out.append(Interval.point(x))
    return sorted(out, key=Interval.sort_key)
