from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import exact_integral
from tightproj import IntervalSet
from tightproj import polynomial as poly


def from_roots(roots):
    """Ascending coefficients of prod (x - r)."""
    c = np.array([1.0])
    for r in roots:
        c = np.convolve(c, [-r, 1.0])
    return tuple(c)


class TestRoots:
    def test_quadratic(self):
        assert poly.real_roots((-0.25, 0.0, 1.0), 0.0, 1.0) == pytest.approx([0.5], abs=1e-15)

    def test_no_roots(self):
        assert poly.real_roots((1.0, 0.0, 1.0), -5.0, 5.0) == []

    def test_constant(self):
        assert poly.real_roots((3.0,), 0.0, 1.0) == []

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.floats(0.02, 0.98), min_size=1, max_size=5))
    def test_recovers_separated_roots(self, roots):
        roots = sorted(roots)
        assume(all(b - a > 0.02 for a, b in zip(roots, roots[1:])))
        found = poly.real_roots(from_roots(roots), 0.0, 1.0)
        assert len(found) == len(roots)
        np.testing.assert_allclose(found, roots, atol=1e-9)

    def test_extrema_interior(self):
        lo, hi = poly.extrema((0.0, 1.0, -1.0), 0.0, 1.0)
        assert lo == 0.0 and hi == pytest.approx(0.25, abs=1e-15)


class TestIntegrate:
    @settings(max_examples=80, deadline=None)
    @given(
        st.lists(st.integers(-8, 8), min_size=1, max_size=9),
        st.fractions(0, 1, max_denominator=64),
        st.fractions(0, 1, max_denominator=64),
    )
    def test_matches_rational(self, coeffs, u, v):
        u, v = min(u, v), max(u, v)
        got = poly.integrate([float(c) for c in coeffs], float(u), float(v))
        want = exact_integral(coeffs, u, v)
        scale = sum(abs(c) for c in coeffs) * float(v - u) + 1e-300
        assert abs(got - float(want)) <= 1e-14 * scale

    def test_tiny_span_near_one(self):
        u, v = 1 - 2.0**-20, 1 - 2.0**-21
        got = poly.integrate((0.0, 1.0), u, v)
        want = float(exact_integral([0, 1], Fraction(u), Fraction(v)))
        assert abs(got - want) <= 4 * np.spacing(want)


spans = st.lists(
    st.tuples(st.integers(0, 40), st.integers(1, 10)).map(lambda t: (t[0] / 4, (t[0] + t[1]) / 4)),
    max_size=6,
)


class TestIntervalSet:
    def test_normalizes(self):
        s = IntervalSet(((2.0, 3.0), (0.0, 1.0), (1.0, 1.5), (0.5, 0.75)))
        assert list(s) == [(0.0, 1.5), (2.0, 3.0)]
        assert s.measure == 2.5

    def test_half_open(self):
        s = IntervalSet.interval(0.0, 1.0)
        assert 0.0 in s and 1.0 not in s

    def test_empty(self):
        assert IntervalSet().empty and IntervalSet().measure == 0.0

    @given(spans, spans)
    def test_inclusion_exclusion(self, a, b):
        a, b = IntervalSet(tuple(a)), IntervalSet(tuple(b))
        assert (a | b).measure == pytest.approx(a.measure + b.measure - (a & b).measure, abs=1e-12)
        assert (a - b).measure == pytest.approx(a.measure - (a & b).measure, abs=1e-12)
        assert ((a - b) & b).empty
