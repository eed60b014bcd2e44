from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from puiseux_cone_solver.algebra.blowup import (
    MonomialMap,
    elementary,
    inverse,
)
from puiseux_cone_solver.algebra.lattice import add_vectors
from puiseux_cone_solver.algebra.series import (
    Series,
    ZPolynomial,
    apply_map,
    format_series,
    format_zpolynomial,
    invert_unit,
    newton_diagram,
    substitute_root,
    support_in_cone,
)
from puiseux_cone_solver.exceptions import (
    DimensionMismatchError,
    NotAUnitError,
)

HALF = Fraction(1, 2)

exponents = st.tuples(
    st.fractions(min_value=-3, max_value=3, max_denominator=2),
    st.fractions(min_value=-3, max_value=3, max_denominator=2),
)
nonnegative_exponents = st.tuples(
    st.fractions(min_value=0, max_value=3, max_denominator=2),
    st.fractions(min_value=0, max_value=3, max_denominator=2),
)
coefficients = st.fractions(
    min_value=-3, max_value=3, max_denominator=3
).filter(bool)
series = st.dictionaries(exponents, coefficients, max_size=4).map(
    lambda terms: Series(2, terms)
)
nonnegative_series = st.dictionaries(
    nonnegative_exponents, coefficients, max_size=4
).map(lambda terms: Series(2, terms))


@st.composite
def maps(draw):
    return MonomialMap.from_rows([[1, draw(st.integers(-3, 3))], [0, 1]])


def x(*exponent, coefficient=1):
    return Series.monomial(exponent, coefficient)


class TestConstruction:
    def test_zero_coefficients_are_dropped(self):
        f = Series(2, {(0, 0): 1, (1, 0): 0})
        assert f.terms == {(0, 0): 1}
        assert f.is_one()

    def test_terms_at_precision_are_clipped(self):
        f = Series(1, {(0,): 1, (2,): 5}, precision=2)
        assert f.terms == {(0,): 1}
        assert f.precision == 2

    def test_denominator(self):
        assert (x(HALF, 0) + x(0, Fraction(1, 3))).denominator == 6
        assert Series.one(2).denominator == 1

    def test_dimension_check(self):
        with pytest.raises(DimensionMismatchError):
            Series(2, {(1,): 1})
        with pytest.raises(DimensionMismatchError):
            x(1, 0) + x(1)

    def test_order(self):
        assert (x(2, 1) + x(0, 1)).order() == 1
        assert Series.zero(2).order() is None
        assert Series.zero(2, precision=3).order() == 3


class TestArithmetic:
    def test_add_zero(self):
        f = x(1, 0) + x(0, HALF, coefficient=3)
        assert f + Series.zero(2) == f

    def test_half_powers_multiply(self):
        assert x(HALF) * x(HALF) == x(1)

    def test_difference_of_squares(self):
        one = Series.one(1)
        product = (one + x(1)) * (one - x(1))
        assert product == one - x(2)
        truncated = (one + x(1)).truncate(3) * (one - x(1)).truncate(3)
        assert truncated.terms == {(0,): 1, (2,): -1}
        assert truncated.precision == 3

    def test_precision_propagates_through_products(self):
        f = (Series.one(1) + x(1)).truncate(4)
        g = x(2)
        assert (f * g).precision == 6
        assert (f + g).precision == 4

    def test_scalar_multiplication(self):
        assert x(1) * 2 == x(1, coefficient=2)
        assert 3 - x(1) == Series.constant(1, 3) - x(1)


class TestInvertUnit:
    def test_one(self):
        assert invert_unit(Series.one(2)) == Series.one(2)

    def test_geometric_series(self):
        inverse = (Series.one(1) - x(1)).invert_unit(5)
        assert inverse.terms == {(k,): 1 for k in range(5)}
        assert inverse.precision == 5

    def test_half_power_unit(self):
        f = Series.constant(2, 2) + x(0, HALF)
        inverse = f.invert_unit(3)
        assert inverse.terms == {
            (0, Fraction(k, 2)): Fraction((-1) ** k, 2 ** (k + 1))
            for k in range(6)
        }

    def test_not_a_unit(self):
        with pytest.raises(NotAUnitError):
            x(1).invert_unit(3)
        with pytest.raises(NotAUnitError):
            (Series.one(2) + x(1, -1)).invert_unit(3)

    def test_exact_input_needs_precision(self):
        with pytest.raises(ValueError):
            (Series.one(1) + x(1)).invert_unit()

    @settings(max_examples=200)
    @given(
        nonnegative_series,
        st.fractions(min_value=1, max_value=5, max_denominator=4),
    )
    def test_product_is_one_below_precision(self, f, precision):
        unit = f + (3 - f.constant_term())
        product = unit * unit.invert_unit(precision) - 1
        assert all(
            sum(a) >= precision for a in product.terms
        ), format_series(product)


class TestApplyMap:
    def test_identity(self):
        f = x(1, 2) + x(HALF, 0)
        assert apply_map(f, MonomialMap.identity(2)) == f

    def test_blowup(self):
        phi = elementary(2, 1, 2, 1)
        assert x(1, 0).apply_map(phi) == x(1, 1)
        assert x(1, -1).apply_map(phi) == x(1, 0)

    def test_precision_under_blow_down(self):
        f = (Series.one(2) + x(0, 1)).truncate(4)
        down = inverse(MonomialMap.from_rows([[1, 2], [0, 1]]))
        assert f.apply_map(down).precision == -4
        up = MonomialMap.from_rows([[1, 2], [0, 1]])
        assert f.apply_map(up).precision == 4

    @settings(max_examples=300)
    @given(series, maps())
    def test_automorphism_round_trip(self, f, m):
        assert f.apply_map(m).apply_map(inverse(m)) == f

    @settings(max_examples=300)
    @given(series, series, maps())
    def test_multiplicative(self, f, g, m):
        assert (f * g).apply_map(m) == f.apply_map(m) * g.apply_map(m)
        assert (f + g).apply_map(m) == f.apply_map(m) + g.apply_map(m)


class TestDiagrams:
    def test_newton_diagram(self):
        assert newton_diagram(Series.zero(2)) == frozenset()
        assert newton_diagram(x(1, 0) + x(0, 2)) == {(1, 0), (0, 2)}

    def test_support_in_cone(self):
        identity = MonomialMap.identity(2)
        assert support_in_cone(x(1, 0) + x(0, 2), identity)
        assert not support_in_cone(x(-1, 0), identity)
        cone = MonomialMap.from_rows([[1, -1], [0, 1]])
        assert support_in_cone(x(1, -1) + x(0, 1), cone)

    @settings(max_examples=200)
    @given(nonnegative_series, nonnegative_series)
    def test_minkowski_sum(self, f, g):
        product = newton_diagram(f * g)
        sums = {
            add_vectors(a, b)
            for a in newton_diagram(f)
            for b in newton_diagram(g)
        }
        assert product <= sums
        if product:
            assert min(product) == add_vectors(
                min(newton_diagram(f)), min(newton_diagram(g))
            )


class TestZPolynomial:
    def test_substitute_root(self):
        p = ZPolynomial([-x(1), Series.one(1)])
        assert substitute_root(p, x(1)).is_exactly_zero()
        q = ZPolynomial([-x(1, 1), Series.zero(2), Series.one(2)])
        assert q.substitute_root(x(HALF, HALF)).is_exactly_zero()

    def test_truncated_root_residual(self):
        p = ZPolynomial([-x(1, 0) - x(0, 1), Series.zero(2), Series.one(2)])
        prepared = p.apply_map(elementary(2, 1, 2, 1))
        # x2^(1/2) (1 + x1)^(1/2) in prepared coordinates, four terms
        root = Series(
            2,
            {
                (0, HALF): 1,
                (1, HALF): HALF,
                (2, HALF): Fraction(-1, 8),
                (3, HALF): Fraction(1, 16),
            },
            precision=4,
        )
        residual = prepared.substitute_root(root)
        assert residual.order() >= 4

    def test_from_roots(self):
        p = ZPolynomial.from_roots([x(HALF, HALF), -x(HALF, HALF)])
        assert p == ZPolynomial([-x(1, 1), Series.zero(2), Series.one(2)])
        assert p.is_monic()
        assert p.degree == 2
        assert p.w(2) == -x(1, 1)

    def test_substitute_linear(self):
        p = ZPolynomial([-x(1), Series.zero(1), Series.one(1)])
        shifted = p.substitute_linear(Series.one(1), x(1))
        # (1 + x z)^2 - x = 1 - x + 2x z + x^2 z^2
        assert shifted == ZPolynomial(
            [Series.one(1) - x(1), x(1, coefficient=2), x(2)]
        )

    def test_trailing_zero_coefficients(self):
        p = ZPolynomial([Series.one(1), Series.zero(1)])
        assert p.degree == 0

    def test_format(self):
        p = ZPolynomial([-x(1, 0) - x(0, 1), Series.zero(2), Series.one(2)])
        assert format_zpolynomial(p) == "z^2 - x1 - x2"
        assert format_series(x(2, -1, coefficient=Fraction(-3, 2))) == (
            "-3/2*x1^2*x2^(-1)"
        )
        assert format_series(Series.zero(1)) == "0"
