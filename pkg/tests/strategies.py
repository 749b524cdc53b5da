"""Hypothesis strategies for small rational measures and step functions."""

from fractions import Fraction as F

from hypothesis import strategies as st

from maxlab import Interval, Measure, StepFunction

small = st.fractions(min_value=-6, max_value=6, max_denominator=6)
positive = st.fractions(min_value=F(1, 6), max_value=4, max_denominator=6)


@st.composite
def measures(draw, max_atoms=3):
    bps = sorted(set(draw(st.lists(small, max_size=4))))
    vals = [draw(st.fractions(min_value=0, max_value=3, max_denominator=4)) for _ in range(len(bps) + 1)]
    xs = sorted(set(draw(st.lists(small, max_size=max_atoms))))
    atoms = [(x, draw(positive)) for x in xs]
    return Measure(tuple(atoms), tuple(bps), tuple(vals))


@st.composite
def functions(draw, max_pieces=5):
    bps = sorted(set(draw(st.lists(small, min_size=2, max_size=max_pieces + 1))))
    vals = [draw(st.fractions(min_value=0, max_value=5, max_denominator=4)) for _ in range(len(bps) - 1)]
    pvals = [draw(st.fractions(min_value=0, max_value=5, max_denominator=4)) for _ in bps]
    return StepFunction(tuple(bps), tuple(vals), tuple(pvals))


@st.composite
def split_intervals(draw):
    """Interval I and its two halves at a cut point inside it, with flags."""
    a, c, b = sorted(draw(st.lists(small, min_size=3, max_size=3, unique=True)))
    lo_c, hi_c, mid_left = draw(st.booleans()), draw(st.booleans()), draw(st.booleans())
    return Interval(a, b, lo_c, hi_c), Interval(a, c, lo_c, mid_left), Interval(c, b, not mid_left, hi_c)
