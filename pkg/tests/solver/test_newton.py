from fractions import Fraction

import pytest

from puiseux_cone_solver.algebra.blowup import MonomialMap
from puiseux_cone_solver.algebra.series import Series, ZPolynomial
from puiseux_cone_solver.algebra.series import support_in_cone
from puiseux_cone_solver.exceptions import (
    MaxStepsExceeded,
    MultipleRootError,
    NotMonicError,
    ResidualBelowPrecision,
    SupportOutsideQuadrantError,
    UnsplittableError,
    ZeroConstantTermError,
)
from puiseux_cone_solver.solver.newton import (
    PuiseuxRoot,
    SegmentKind,
    admissible_segments,
    characteristic_equation,
    detect_regular,
    e1_diagram,
    merge_certificates,
    prepare_segment,
    regular_iterate,
    solve,
    solve_characteristic,
    step_substitute,
    verify,
)
from puiseux_cone_solver.solver.solver_utils import SolverConfig

HALF = Fraction(1, 2)


def x(*exponent, coefficient=1):
    return Series.monomial(exponent, coefficient)


def monic(*coefficients):
    """Coefficients constant term first; the leading 1 is appended."""
    n = coefficients[0].n
    return ZPolynomial([*coefficients, Series.one(n)], n)


def binomial_half(k):
    result = Fraction(1)
    for i in range(k):
        result *= (HALF - i) / (i + 1)
    return result


GOLDEN_A = monic(-x(1, 1), Series.zero(2))
GOLDEN_B = monic(-x(1, 0) - x(0, 1), Series.zero(2))


class TestDiagram:
    def test_e1_diagram(self):
        diagram = e1_diagram(GOLDEN_B)
        assert diagram.points == {(0, 2), (1, 0), (0, 0)}
        assert diagram.axis() == [0, 2]
        assert diagram.lowest_points() == {2: 0, 0: 0}

    def test_sloped_segment(self):
        segments = admissible_segments(e1_diagram(GOLDEN_A), first_step=True)
        assert len(segments) == 1
        segment = segments[0]
        assert segment.kind is SegmentKind.SEGMENT
        assert segment.gamma == HALF
        assert segment.beta == 1
        assert segment.points == ((0, 2), (1, 0))
        assert segment.height == 2

    def test_vertical_segment(self):
        segments = admissible_segments(e1_diagram(GOLDEN_B), first_step=True)
        assert [s.kind for s in segments] == [SegmentKind.VERTICAL]
        assert segments[0].points == ((0, 2), (0, 0))
        assert admissible_segments(e1_diagram(GOLDEN_B), False) == []

    def test_segments_by_decreasing_gamma(self):
        # points (0, 3), (1, 2), (3, 1), (6, 0)
        p = monic(x(6), x(3), x(1))
        gammas = [s.gamma for s in admissible_segments(e1_diagram(p), True)]
        assert gammas == [3, 2, 1]


class TestSteps:
    def test_characteristic_equation(self):
        segment = admissible_segments(e1_diagram(GOLDEN_A), True)[0]
        characteristic = characteristic_equation(GOLDEN_A, segment)
        assert characteristic == ZPolynomial(
            [-x(1), Series.zero(1), Series.one(1)]
        )

    def test_solve_characteristic(self):
        characteristic = ZPolynomial([-x(1), Series.zero(1), Series.one(1)])
        roots = solve_characteristic(characteristic, 4)
        assert [r.alpha for r in roots] == [x(HALF), -x(HALF)]
        assert all(r.simple and r.map.is_identity() for r in roots)

    def test_step_substitute(self):
        segment = admissible_segments(e1_diagram(GOLDEN_A), True)[0]
        substituted = step_substitute(GOLDEN_A, segment, x(HALF))
        assert substituted == ZPolynomial(
            [Series.zero(2), x(0, HALF, coefficient=2), Series.one(2)]
        )

    def test_prepare_segment_spreads_apexes(self):
        # after the vertical step of z^2 - x1 - x2
        p = monic(-x(1, 0), x(0, HALF, coefficient=2))
        segment = admissible_segments(e1_diagram(p), False)[0]
        assert segment.gamma == 1
        preparation = prepare_segment(p, segment)
        assert preparation.exponent == 1
        assert preparation.blowups == ((1, 2, 1),)
        assert preparation.map == MonomialMap.from_rows([[1, 1], [0, 1]])

    def test_prepare_segment_needs_slope(self):
        segment = admissible_segments(e1_diagram(GOLDEN_B), True)[0]
        with pytest.raises(ValueError):
            prepare_segment(GOLDEN_B, segment)


class TestRegular:
    def test_detect_regular(self):
        p = ZPolynomial([-x(1), Series.one(1), x(1)])
        assert detect_regular(p)
        assert not detect_regular(GOLDEN_B)

    def test_fixed_point(self):
        p = ZPolynomial([-x(1), Series.one(1), x(1)])
        fragment = regular_iterate(p, 8)
        assert fragment.root.terms == {
            (1,): 1,
            (3,): -1,
            (5,): 2,
            (7,): -5,
        }
        assert not fragment.exact
        assert fragment.map.is_identity()

    def test_exact_fixed_point(self):
        # (z - x1) (x1 z + 1) = x1 z^2 + (1 - x1^2) z - x1
        p = ZPolynomial([-x(1), Series.one(1) - x(2), x(1)])
        fragment = regular_iterate(p, 8)
        assert fragment.exact
        assert fragment.root == x(1)

    def test_not_regular(self):
        with pytest.raises(ValueError):
            regular_iterate(GOLDEN_B, 4)

    def test_leading_coefficient_must_vanish(self):
        one = Series.one(2)
        p = ZPolynomial([-x(1, 0), one + x(0, 1), one])
        assert not detect_regular(p)

    def test_unit_beta_in_two_variables(self):
        one = Series.one(2)
        p = ZPolynomial([-x(1, 1), one + x(0, 1), x(1, 0)])
        assert detect_regular(p)

    def test_beta_becomes_monomial_times_unit(self):
        # beta = x2 + x3
        p = ZPolynomial([-x(1, 0, 0), x(0, 1, 0) + x(0, 0, 1), x(1, 0, 0)])
        assert detect_regular(p)
        fragment = regular_iterate(p, 6)
        assert fragment.map == MonomialMap.from_rows(
            [[1, 0, 1], [0, 1, 1], [0, 0, 1]]
        )
        apex = (0, 0, 1)
        prepared = p.apply_map(fragment.map).divide_monomial(apex)
        beta = prepared.coefficient(1).layer(0)
        assert beta.constant_term() == 1
        assert beta.has_nonnegative_support()
        assert fragment.root.coefficient((1, 0, 0)) == 1
        assert prepared.substitute_root(fragment.root).order() >= 6


class TestSolve:
    def test_golden_a(self):
        roots = solve(GOLDEN_A)
        assert [r.series for r in roots] == [x(HALF, HALF), -x(HALF, HALF)]
        for root in roots:
            assert root.is_exact()
            assert root.residual_floor is None
            assert root.denominator == 2
            assert root.certificate.is_identity()

    def test_golden_b(self):
        roots = solve(GOLDEN_B, SolverConfig(precision=6))
        prepared = MonomialMap.from_rows([[1, 2], [0, 1]])
        oracle = Series(
            2,
            {
                (k, HALF - k): binomial_half(k)
                for k in range(4)
            },
        ).apply_map(prepared)
        expected = {a: c for a, c in oracle.terms.items() if sum(a) < 6}
        assert expected == {
            (0, HALF): 1,
            (1, Fraction(3, 2)): HALF,
            (2, Fraction(5, 2)): Fraction(-1, 8),
        }
        assert len(roots) == 2
        for root, sign in zip(roots, (1, -1)):
            assert root.accumulated_map == prepared
            assert root.series.terms == {
                a: sign * c for a, c in expected.items()
            }
            assert root.precision == 6
            assert root.residual_floor >= 6
            kinds = [step.kind for step in root.steps]
            assert kinds == [
                SegmentKind.VERTICAL,
                SegmentKind.SEGMENT,
                SegmentKind.REGULAR,
            ]
            segment_step = root.steps[1]
            assert segment_step.exponent == 1
            assert (1, 2, 1) in segment_step.blowups
            assert root.steps[0].alpha == sign * x(HALF)
            assert support_in_cone(root.external(), root.certificate)

    def test_rational_roots_in_one_variable(self):
        # (z - x1) (z - 1)
        p = monic(x(1), -Series.one(1) - x(1))
        roots = solve(p)
        assert [r.series for r in roots] == [x(1), Series.one(1)]
        assert all(r.is_exact() for r in roots)

    def test_positive_order_roots_only(self):
        p = monic(x(1), -Series.one(1) - x(1))
        roots = solve(p, SolverConfig(first_vertical=False))
        assert [r.series for r in roots] == [x(1)]
        assert solve(GOLDEN_B, SolverConfig(first_vertical=False)) == []

    def test_linear_polynomial(self):
        roots = solve(ZPolynomial([x(1, 2), Series.one(2)]))
        assert [r.series for r in roots] == [-x(1, 2)]

    def test_not_monic(self):
        with pytest.raises(NotMonicError):
            solve(ZPolynomial([-x(1), Series.zero(1), x(0, coefficient=2)]))

    def test_zero_constant_term(self):
        with pytest.raises(ZeroConstantTermError):
            solve(monic(Series.zero(1), x(1)))

    def test_support_outside_quadrant(self):
        with pytest.raises(SupportOutsideQuadrantError):
            solve(monic(x(1, -1), Series.zero(2)))

    def test_unsplittable(self):
        with pytest.raises(UnsplittableError):
            solve(monic(x(2, coefficient=-2), Series.zero(1)))

    def test_multiple_root(self):
        # (z - x1)^2
        with pytest.raises(MultipleRootError):
            solve(monic(x(2), x(1, coefficient=-2)))

    def test_max_steps(self):
        with pytest.raises(MaxStepsExceeded):
            solve(GOLDEN_B, SolverConfig(precision=6, max_steps=1))


class TestVerify:
    def test_exact_root(self):
        root = PuiseuxRoot(
            series=x(HALF, HALF),
            accumulated_map=MonomialMap.identity(2),
            precision=None,
        )
        assert verify(GOLDEN_A, root) is None

    def test_wrong_root(self):
        root = PuiseuxRoot(
            series=x(HALF, 0),
            accumulated_map=MonomialMap.identity(2),
            precision=None,
        )
        with pytest.raises(ResidualBelowPrecision):
            verify(GOLDEN_A, root)

    def test_truncated_root(self):
        root = PuiseuxRoot(
            series=Series(2, {(0, HALF): 1, (1, HALF): HALF}, precision=3),
            accumulated_map=MonomialMap.from_rows([[1, 1], [0, 1]]),
            precision=Fraction(3),
        )
        assert verify(GOLDEN_B, root) == 3
        with pytest.raises(ResidualBelowPrecision):
            verify(GOLDEN_B, root, 5)


class TestCertificates:
    def test_merge_certificates(self):
        roots = solve(GOLDEN_B, SolverConfig(precision=6))
        merged = merge_certificates(roots)
        for root in roots:
            assert support_in_cone(root.external(), merged)

    def test_identity_certificates(self):
        roots = solve(GOLDEN_A)
        assert merge_certificates(roots).is_identity()
