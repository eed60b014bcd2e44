from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from puiseux_cone_solver.algebra.blowup import (
    MonomialMap,
    inverse,
)
from puiseux_cone_solver.algebra.series import (
    Series,
    ZPolynomial,
    support_in_cone,
)
from puiseux_cone_solver.exceptions import (
    DimensionMismatchError,
    NotInConeError,
    ZetaResidueError,
)
from puiseux_cone_solver.solver.closure import (
    ConeRingElement,
    ConjugateCharacter,
    PlantedInstance,
    cone_ring_coefficients,
    conjugate,
    conjugate_orbit,
    divide_by_leading,
    integrality_witness,
    is_integral_over_formal,
    minimal_polynomial,
    normalize_monic,
    recovered,
    solve_over_cone_ring,
)
from puiseux_cone_solver.solver.newton import solve
from puiseux_cone_solver.solver.solver_utils import SolverConfig

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)

half_exponents = st.tuples(
    st.sampled_from([0, HALF, 1, Fraction(3, 2)]),
    st.sampled_from([0, HALF, 1, Fraction(3, 2)]),
)
coefficients = st.fractions(
    min_value=-3, max_value=3, max_denominator=3
).filter(bool)
half_series = st.dictionaries(
    half_exponents, coefficients, min_size=1, max_size=3
).map(lambda terms: Series(2, terms))


def x(*exponent, coefficient=1):
    return Series.monomial(exponent, coefficient)


def z_squared_minus(f):
    return ZPolynomial([-f, Series.zero(f.n), Series.one(f.n)])


class TestConeRingElement:
    def test_of_defaults_to_the_quadrant(self):
        element = ConeRingElement.of(x(HALF, 1))
        assert element.cone.is_identity()
        assert element.d == 2

    def test_outside_the_cone(self):
        with pytest.raises(NotInConeError):
            ConeRingElement.of(x(1, -1))
        cone = MonomialMap.from_rows([[1, -1], [0, 1]])
        assert ConeRingElement.of(x(1, -1), cone).cone == cone

    def test_denominator_must_divide_d(self):
        with pytest.raises(ValueError):
            ConeRingElement(
                series=x(HALF), cone=MonomialMap.identity(1), d=3
            )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            ConeRingElement(
                series=x(1), cone=MonomialMap.identity(2), d=1
            )


class TestConjugates:
    def test_twist(self):
        chi = ConjugateCharacter(c=(1, 2), d=3)
        assert chi.twist((THIRD, THIRD)) == 0
        assert chi.twist((Fraction(2, 3), 0)) == 2
        with pytest.raises(ValueError):
            chi.twist((HALF, 0))

    def test_residues_are_checked(self):
        with pytest.raises(ValueError):
            ConjugateCharacter(c=(2,), d=2)

    def test_square_root_conjugate(self):
        f = x(HALF, 1) + x(0, HALF)
        sigma = conjugate(f, ConjugateCharacter(c=(1, 0), d=2))
        assert sigma.to_series() == -x(HALF, 1) + x(0, HALF)

    def test_cube_root_conjugate_is_not_rational(self):
        f = x(THIRD)
        identity = conjugate(f, ConjugateCharacter(c=(0,), d=3))
        assert identity.to_series() == f
        with pytest.raises(ZetaResidueError):
            conjugate(f, ConjugateCharacter(c=(1,), d=3)).to_series()

    def test_orbit_size(self):
        assert len(conjugate_orbit(x(HALF, HALF))) == 2
        assert len(conjugate_orbit(x(HALF, 0) + x(0, HALF))) == 4
        assert len(conjugate_orbit(x(1, 2))) == 1


class TestMinimalPolynomial:
    def test_square_root_of_a_monomial(self):
        assert minimal_polynomial(x(HALF, HALF)) == z_squared_minus(x(1, 1))

    def test_cube_root(self):
        minpoly = minimal_polynomial(ConeRingElement.of(x(THIRD)))
        assert minpoly == ZPolynomial(
            [-x(1), Series.zero(1), Series.zero(1), Series.one(1)]
        )

    def test_two_square_roots(self):
        minpoly = minimal_polynomial(x(HALF, 0) + x(0, HALF))
        # z^4 - 2 (x1 + x2) z^2 + (x1 - x2)^2
        assert minpoly == ZPolynomial(
            [
                x(2, 0) - x(1, 1, coefficient=2) + x(0, 2),
                Series.zero(2),
                x(1, 0, coefficient=-2) + x(0, 1, coefficient=-2),
                Series.zero(2),
                Series.one(2),
            ]
        )

    @settings(max_examples=50)
    @given(half_series)
    def test_denominator_two_series(self, f):
        minpoly = minimal_polynomial(f)
        assert minpoly.is_monic()
        assert minpoly.degree == len(conjugate_orbit(f))
        assert all(
            e.denominator == 1
            for c in minpoly.coefficients
            for a in c.terms
            for e in a
        )
        assert minpoly.substitute_root(f).is_exactly_zero()
        assert is_integral_over_formal(minpoly)


class TestIntegrality:
    def test_integral(self):
        assert is_integral_over_formal(z_squared_minus(x(1, 1)))
        assert integrality_witness(z_squared_minus(x(1, 1))) is None

    def test_negative_exponent_witness(self):
        minpoly = z_squared_minus(x(1, 0) - x(2, -1))
        assert integrality_witness(minpoly) == (2, -1)
        assert not is_integral_over_formal(minpoly)

    def test_series_outside_the_quadrant(self):
        minpoly = minimal_polynomial(x(HALF, -HALF))
        assert minpoly == z_squared_minus(x(1, -1))
        assert integrality_witness(minpoly) == (1, -1)


class TestConeRingSolve:
    cone = MonomialMap.from_rows([[1, -1], [0, 1]])
    germs = (Series.one(2) + x(1, 0), x(0, 1) - 2)

    def instance(self):
        roots = tuple(g.apply_map(self.cone) for g in self.germs)
        return PlantedInstance(
            polynomial=ZPolynomial.from_roots(roots),
            certificate=self.cone,
            germs=self.germs,
            roots=roots,
        )

    def test_cone_ring_coefficients(self):
        instance = self.instance()
        elements = cone_ring_coefficients(instance.polynomial, self.cone)
        assert [e.series for e in elements] == list(
            instance.polynomial.coefficients
        )
        with pytest.raises(NotInConeError):
            cone_ring_coefficients(
                instance.polynomial, MonomialMap.identity(2)
            )

    def test_recovers_planted_roots(self):
        instance = self.instance()
        roots = solve_over_cone_ring(
            instance.coefficients(), SolverConfig(precision=6)
        )
        assert len(roots) == 2
        assert recovered(instance, roots, 6)
        for root in roots:
            assert root.accumulated_map.rows[0][0] == 1
            assert support_in_cone(root.external(), root.certificate)

    def test_pullback_leads_every_accumulated_map(self):
        roots = solve_over_cone_ring(self.instance().coefficients())
        # the germ -2 + x2 is found without further blowing-up
        assert roots[1].accumulated_map == inverse(self.cone)
        assert roots[1].series == self.germs[1]

    def test_quadrant_coefficients_match_plain_solve(self):
        p = z_squared_minus(x(1, 1))
        elements = cone_ring_coefficients(p, MonomialMap.identity(2))
        assert [r.series for r in solve_over_cone_ring(elements)] == [
            r.series for r in solve(p)
        ]

    def test_recovered_rejects_wrong_roots(self):
        instance = self.instance()
        roots = solve_over_cone_ring(
            instance.coefficients(), SolverConfig(precision=6)
        )
        assert not recovered(instance, roots[:1], 6)


class TestNormalizeMonic:
    def test_normalize_and_divide(self):
        # x1 z^2 - x1^3 has the roots x1 and -x1
        p = ZPolynomial([-x(3), Series.zero(1), x(1)])
        normalized, leading = normalize_monic(p)
        assert normalized == z_squared_minus(x(4))
        assert leading == x(1)
        roots = [
            divide_by_leading(root, leading, 8)
            for root in solve(normalized)
        ]
        assert [r.series for r in roots] == [x(1), -x(1)]

    def test_monic_is_unchanged(self):
        p = z_squared_minus(x(1, 1))
        normalized, leading = normalize_monic(p)
        assert normalized == p
        assert leading.is_one()

