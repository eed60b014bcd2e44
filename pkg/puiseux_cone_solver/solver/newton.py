"""
Newton solver
=============

Roots of monic polynomials

    P(x, z) = z^m + w_1(x) z^(m-1) + ... + w_m(x),  w_m != 0

over k[[x1, ..., xn]] as Puiseux series, each with a blow-down certificate.

Every branch of the search carries

    . a polynomial Q in a new unknown z_Q,
    . a partial sum and an exponent vector mu, so that z = partial + x^mu z_Q,
    . the accumulated order-preserving blowing-up Phi (P is read through Phi).

A step picks an admissible segment of the (x1, z) diagram of Q, makes the
on-segment coefficients monomial-times-unit with blowing-ups, solves the
characteristic equation in one variable less and substitutes
z_Q = x1^gamma (alpha + z'). Branches in regular shape finish with a fixed
point iteration.

Precision is the total degree in prepared coordinates. ``solve`` works at the
requested precision plus a guard, verifies every root against P and
escalates the guard when a residual falls short.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from puiseux_cone_solver.algebra.blowup import (
    MonomialMap,
    compose,
    inverse,
    lift_map,
    principalize,
)
from puiseux_cone_solver.algebra.cone import merge_cones
from puiseux_cone_solver.algebra.field import UnivariatePoly, univariate_roots
from puiseux_cone_solver.algebra.lattice import (
    LatticeSet,
    add_vectors,
    minimal_elements,
    product_le,
    total_degree,
    unit_vector,
    zero_vector,
)
from puiseux_cone_solver.algebra.series import (
    Series,
    ZPolynomial,
    format_series,
    min_precision,
)
from puiseux_cone_solver.exceptions import (
    DimensionMismatchError,
    ExactnessViolation,
    MaxStepsExceeded,
    MultipleRootError,
    NotMonicError,
    ResidualBelowPrecision,
    SupportOutsideQuadrantError,
    ZeroConstantTermError,
)
from puiseux_cone_solver.solver.solver_utils import SolverConfig
from puiseux_cone_solver.typing import (
    ElementaryStep,
    ExponentVector,
    Precision,
    Rational,
)

logger = logging.getLogger(__name__)


class SegmentKind(str, Enum):
    VERTICAL = "vertical"
    SEGMENT = "segment"
    REGULAR = "regular"


@dataclass(frozen=True)
class Diagram1:
    """(x1-exponent, z-degree) pairs of a z-polynomial."""

    points: frozenset[tuple[Fraction, int]]
    degree: int

    def axis(self) -> list[int]:
        return sorted(b for nu, b in self.points if nu == 0)

    def lowest_points(self) -> dict[int, Fraction]:
        lowest: dict[int, Fraction] = {}
        for nu, b in self.points:
            if b not in lowest or nu < lowest[b]:
                lowest[b] = nu
        return lowest


@dataclass(frozen=True)
class AdmissibleSegment:
    """
    The minimum ``beta`` of L(u, v) = u + gamma v over the diagram and the
    points attaining it, highest z-degree first. Vertical segments have
    gamma = beta = 0 and hold the points of the u = 0 axis.
    """

    kind: SegmentKind
    gamma: Fraction
    beta: Fraction
    points: tuple[tuple[Fraction, int], ...]

    @property
    def is_vertical(self) -> bool:
        return self.kind is SegmentKind.VERTICAL

    @property
    def height(self) -> int:
        degrees = [b for _, b in self.points]
        return max(degrees) - min(degrees)


@dataclass(frozen=True)
class StepRecord:
    kind: SegmentKind
    depth: int
    accumulated_map: MonomialMap
    gamma: Fraction | None = None
    beta: Fraction | None = None
    alpha: Series | None = None
    blowups: tuple[ElementaryStep, ...] = ()
    recursion_map: MonomialMap | None = None
    exponent: int = 0


@dataclass(frozen=True)
class PuiseuxRoot:
    """
    A root in prepared coordinates: ``series`` solves P read through
    ``accumulated_map`` and has first-quadrant support. The root of P itself
    is ``external()``, the series read through the certificate.
    """

    series: Series
    accumulated_map: MonomialMap
    precision: Precision
    residual_floor: Precision = None
    steps: tuple[StepRecord, ...] = ()

    @property
    def certificate(self) -> MonomialMap:
        return inverse(self.accumulated_map)

    @property
    def denominator(self) -> int:
        return self.series.denominator

    def is_exact(self) -> bool:
        return self.precision is None

    def external(self) -> Series:
        return self.series.apply_map(self.certificate)


@dataclass(frozen=True)
class SegmentPreparation:
    map: MonomialMap
    polynomial: ZPolynomial
    exponent: int
    blowups: tuple[ElementaryStep, ...]


@dataclass(frozen=True)
class CharacteristicRoot:
    alpha: Series
    simple: bool
    map: MonomialMap
    blowups: tuple[ElementaryStep, ...] = ()


@dataclass(frozen=True)
class RegularFragment:
    root: Series
    map: MonomialMap
    blowups: tuple[ElementaryStep, ...]
    exact: bool = False


@dataclass(frozen=True)
class _RegularPreparation:
    map: MonomialMap
    polynomial: ZPolynomial
    blowups: tuple[ElementaryStep, ...]


@dataclass(frozen=True)
class _Finished:
    series: Series
    accumulated_map: MonomialMap
    steps: tuple[StepRecord, ...]
    exact: bool


@dataclass(frozen=True)
class _Branch:
    polynomial: ZPolynomial
    partial: Series
    exponent: ExponentVector
    accumulated_map: MonomialMap
    steps: tuple[StepRecord, ...] = field(default=())
    depth: int = 0

    @classmethod
    def start(cls, polynomial: ZPolynomial) -> _Branch:
        n = polynomial.n
        return cls(
            polynomial=polynomial,
            partial=Series.zero(n),
            exponent=zero_vector(n),
            accumulated_map=MonomialMap.identity(n),
        )

    def apply_map(
        self, m: MonomialMap, polynomial: ZPolynomial | None = None
    ) -> _Branch:
        if polynomial is None:
            polynomial = self.polynomial.apply_map(m)
        if m.is_identity():
            return replace(self, polynomial=polynomial)
        return replace(
            self,
            polynomial=polynomial,
            partial=self.partial.apply_map(m),
            exponent=m.apply(self.exponent),
            accumulated_map=compose(self.accumulated_map, m),
        )

    def substitute(self, segment: AdmissibleSegment, alpha: Series) -> _Branch:
        lifted = alpha.embed()
        shift = add_vectors(
            self.exponent,
            tuple(segment.gamma * e for e in unit_vector(lifted.n, 0)),
        )
        return replace(
            self,
            polynomial=step_substitute(self.polynomial, segment, alpha),
            partial=self.partial + lifted.multiply_monomial(shift),
            exponent=shift,
            depth=self.depth + 1,
        )

    def record(self, step: StepRecord) -> _Branch:
        return replace(self, steps=self.steps + (step,))

    def finish(self, target: Fraction, exact: bool = False) -> _Finished:
        exact = exact and self.partial.is_exact()
        return _Finished(
            series=self.partial if exact else self.partial.truncate(target),
            accumulated_map=self.accumulated_map,
            steps=self.steps,
            exact=exact,
        )


def e1_diagram(polynomial: ZPolynomial) -> Diagram1:
    points = frozenset(
        (nu, b)
        for b, coefficient in enumerate(polynomial.coefficients)
        for nu in coefficient.x1_exponents()
    )
    return Diagram1(points=points, degree=polynomial.degree)


def admissible_segments(
    diagram: Diagram1, first_step: bool
) -> list[AdmissibleSegment]:
    """
    The edges of positive slope of the lower hull, walked from the lowest
    axis point (0, v0) downwards, by decreasing gamma; then the vertical
    segment if ``first_step`` and the axis holds a point below (0, m).

    Only points with z-degree <= v0 take part: they carry the v0 roots of
    positive x1-order.
    """
    axis = diagram.axis()
    if not axis:
        return []
    v0 = axis[0]
    lowest = diagram.lowest_points()
    below = [(lowest[b], b) for b in sorted(lowest, reverse=True) if b < v0]
    current = (Fraction(0), v0)
    segments: list[AdmissibleSegment] = []
    while below:
        slopes = [
            ((nu - current[0]) / (current[1] - b), (nu, b)) for nu, b in below
        ]
        gamma = min(slope for slope, _ in slopes)
        on_line = [point for slope, point in slopes if slope == gamma]
        segments.append(
            AdmissibleSegment(
                kind=SegmentKind.SEGMENT,
                gamma=gamma,
                beta=current[0] + gamma * current[1],
                points=(current, *on_line),
            )
        )
        current = on_line[-1]
        below = [p for p in below if p[1] < current[1]]
    segments.sort(key=lambda s: s.gamma, reverse=True)

    if first_step and any(b != diagram.degree for b in axis):
        segments.append(
            AdmissibleSegment(
                kind=SegmentKind.VERTICAL,
                gamma=Fraction(0),
                beta=Fraction(0),
                points=tuple((Fraction(0), b) for b in reversed(axis)),
            )
        )
    return segments


def _principalize_layers(
    layers: Sequence[Series], config: SolverConfig
) -> tuple[MonomialMap, list[ExponentVector], tuple[ElementaryStep, ...]]:
    """
    Principalize the supports of series in x2, ..., xn. Exponents are
    scaled to integers first; the map is returned lifted to x1, ..., xn.
    """
    scale = math.lcm(*(layer.denominator for layer in layers))
    sets = [
        LatticeSet.of(
            tuple(c * scale for c in exponent) for exponent in layer.terms
        )
        for layer in layers
    ]
    result = principalize(sets, config.iteration_cap)
    apexes = [tuple(c / scale for c in apex) for apex in result.apexes]
    steps = tuple((i + 1, j + 1, k) for i, j, k in result.steps)
    return lift_map(result.map), apexes, steps


def _spread_map(n: int, exponents: Sequence[int]) -> MonomialMap:
    """phi_12^a_2 ... phi_1n^a_n as one matrix."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    rows[0][1:] = list(exponents)
    return MonomialMap.from_rows(rows)


def prepare_segment(
    polynomial: ZPolynomial,
    segment: AdmissibleSegment,
    config: SolverConfig | None = None,
) -> SegmentPreparation:
    """
    Make the on-segment coefficients monomial-times-unit with product-ordered
    monomials, top z-degree smallest.

    The x1^nu layers of the on-segment coefficients are principalized in
    x2, ..., xn. If the apexes c_t are not yet ordered, phi_1j^e is applied
    for every j >= 2, with e the least positive integer such that
    e min(Omega1) > max(Omega2), where Omega1 holds the x1-exponent gaps
    between on-segment points and Omega2 the coordinate gaps between apexes.
    The x1-exponents of every term are left unchanged.
    """
    config = config or SolverConfig()
    n = polynomial.n
    if segment.is_vertical or n < 2:
        raise ValueError("Preparation needs a sloped segment and n >= 2")
    layers = [polynomial.coefficient(b).layer(nu) for nu, b in segment.points]
    principal_map, apexes, blowups = _principalize_layers(layers, config)
    prepared = polynomial.apply_map(principal_map)

    pairs = [
        (t, u)
        for t in range(len(segment.points))
        for u in range(t + 1, len(segment.points))
    ]
    if all(product_le(apexes[t], apexes[u]) for t, u in pairs):
        return SegmentPreparation(principal_map, prepared, 0, blowups)

    omega1 = [segment.points[u][0] - segment.points[t][0] for t, u in pairs]
    omega2 = [
        apexes[t][j] - apexes[u][j] for t, u in pairs for j in range(n - 1)
    ]
    exponent = math.floor(max(omega2) / min(omega1)) + 1
    spread = _spread_map(n, [exponent] * (n - 1))
    logger.debug("segment preparation: e = %d", exponent)
    return SegmentPreparation(
        map=compose(principal_map, spread),
        polynomial=prepared.apply_map(spread),
        exponent=exponent,
        blowups=blowups + tuple((1, j, exponent) for j in range(2, n + 1)),
    )


def _normalize(
    coefficients: list[Series], precision: Precision
) -> list[Series]:
    top = coefficients[-1]
    if top.is_one():
        return coefficients
    if top.n == 0:
        scale = 1 / top.constant_term()
        return [c * scale for c in coefficients[:-1]] + [Series.one(0)]
    minima = minimal_elements(top.terms)
    if len(minima) != 1:
        raise ExactnessViolation(
            f"Leading coefficient {format_series(top)} is not a monomial"
            " times a unit"
        )
    apex = minima[0]
    inverse_unit = top.divide_monomial(apex).invert_unit(precision)
    normalized = []
    for c in coefficients[:-1]:
        quotient = (c.divide_monomial(apex) * inverse_unit).truncate(precision)
        if not quotient.has_nonnegative_support():
            raise ExactnessViolation(
                f"{format_series(c)} is not divisible by the leading"
                " coefficient"
            )
        normalized.append(quotient)
    return normalized + [Series.one(top.n)]


def characteristic_equation(
    polynomial: ZPolynomial,
    segment: AdmissibleSegment,
    precision: Rational | None = None,
    normalize: bool = True,
) -> ZPolynomial:
    """
    C(alpha) = sum over on-segment points (nu, b) of the x1^nu layer of the
    z^b coefficient times alpha^(b - b_min), a polynomial over x2, ..., xn.
    With ``normalize`` it is divided by its leading coefficient.
    """
    layers = {
        b: polynomial.coefficient(b).layer(nu) for nu, b in segment.points
    }
    low, high = min(layers), max(layers)
    coefficients = [
        layers.get(b, Series.zero(polynomial.n - 1))
        for b in range(low, high + 1)
    ]
    if normalize:
        precision = None if precision is None else Fraction(precision)
        coefficients = _normalize(coefficients, precision)
    return ZPolynomial(coefficients, polynomial.n - 1)


def solve_characteristic(
    characteristic: ZPolynomial,
    precision: Rational,
    config: SolverConfig | None = None,
) -> list[CharacteristicRoot]:
    """
    Roots of a monic characteristic equation, all of them non-zero. Over no
    variables the field oracle answers; otherwise the solver recurses on
    x2, ..., xn and the blowing-ups it applies come back lifted, fixing x1.
    """
    config = config or SolverConfig()
    if characteristic.n == 0:
        poly = UnivariatePoly.of(
            c.constant_term() for c in characteristic.coefficients
        )
        return [
            CharacteristicRoot(
                alpha=Series.constant(0, root),
                simple=multiplicity == 1,
                map=MonomialMap.identity(1),
            )
            for root, multiplicity in univariate_roots(poly)
        ]
    finished = _expand(
        characteristic, Fraction(precision), config, allow_vertical=True
    )
    return [
        CharacteristicRoot(
            alpha=f.series,
            simple=True,
            map=lift_map(f.accumulated_map),
            blowups=tuple(
                (i + 1, j + 1, k)
                for record in f.steps
                for i, j, k in record.blowups
            ),
        )
        for f in finished
    ]


def step_substitute(
    polynomial: ZPolynomial, segment: AdmissibleSegment, alpha: Series
) -> ZPolynomial:
    """
    Q(x, x1^gamma (alpha + z')) / x1^beta, ``alpha`` a series in
    x2, ..., xn.
    """
    n = polynomial.n
    x1_power = Series.monomial(
        tuple(segment.gamma * e for e in unit_vector(n, 0))
    )
    substituted = polynomial.substitute_linear(
        x1_power * alpha.embed(), x1_power
    ).divide_monomial(tuple(segment.beta * e for e in unit_vector(n, 0)))
    for coefficient in substituted.coefficients:
        if any(a[0] < 0 for a in coefficient.terms):
            raise ExactnessViolation(
                f"Term below x1^{segment.beta} survived the step"
            )
    return substituted


def detect_regular(polynomial: ZPolynomial) -> bool:
    """
    True iff at x1 = 0 every coefficient w_i vanishes except
    w_(m-1), the coefficient of z.
    """
    m = polynomial.degree
    if m < 1:
        return False
    if not all(
        polynomial.w(i).layer(0).is_zero()
        for i in (*range(m - 1), m)
    ):
        return False
    return not polynomial.w(m - 1).layer(0).is_zero()


def _regular_preparation(
    polynomial: ZPolynomial, config: SolverConfig
) -> _RegularPreparation:
    """
    Make the x1-free part beta of the z coefficient a monomial x'^b times a
    unit, then blow up with phi_1j^(a_j) so that x'^b divides every
    x1-divisible term, and divide. a_j is the least exponent lifting every
    such term above b_j.
    """
    n = polynomial.n
    if n == 1:
        return _RegularPreparation(MonomialMap.identity(1), polynomial, ())
    beta = polynomial.coefficient(1).layer(0)
    principal_map, apexes, blowups = _principalize_layers([beta], config)
    prepared = polynomial.apply_map(principal_map)
    apex = (Fraction(0), *apexes[0])

    exponents = [0] * (n - 1)
    for coefficient in prepared.coefficients:
        for a in coefficient.terms:
            if a[0] <= 0:
                continue
            for j in range(1, n):
                exponents[j - 1] = max(
                    exponents[j - 1], math.ceil((apex[j] - a[j]) / a[0])
                )
    spread = _spread_map(n, exponents)
    blowups += tuple(
        (1, j + 2, k) for j, k in enumerate(exponents) if k > 0
    )
    return _RegularPreparation(
        map=compose(principal_map, spread),
        polynomial=prepared.apply_map(spread).divide_monomial(apex),
        blowups=blowups,
    )


def _fixed_point(
    polynomial: ZPolynomial, precision: Fraction
) -> tuple[Series, bool]:
    """
    The root of positive x1-order of c0 + U z + sum_k c_k z^k, U a unit,
    as the limit of z <- -U^-1 (c0 + sum_{k>=2} c_k z^k).

    z = 0 is correct below the order of c0 and every pass gains at least
    the least order delta of the c_k, k >= 2, so each pass runs only at the
    precision it can reach. A finite result whose top band of width delta
    is empty is checked for being an exact root.
    """
    n = polynomial.n
    constant = polynomial.coefficient(0)
    inverse_unit = polynomial.coefficient(1).invert_unit(precision)
    higher = [
        (k, polynomial.coefficient(k))
        for k in range(2, polynomial.degree + 1)
    ]
    orders = [
        order
        for _, c in higher
        if (order := c.order()) is not None and order > 0
    ]
    delta = min(orders) if orders else precision
    accuracy = min_precision(constant.order(), precision)

    z = Series.zero(n)
    while accuracy < precision:
        accuracy = min(accuracy + delta, precision)
        total = constant
        for k, c in higher:
            total = total + c * z**k
        z = (-(inverse_unit * total)).truncate(accuracy)

    candidate = Series(n, z.terms)
    if (
        all(c.is_exact() for c in polynomial.coefficients)
        and all(total_degree(a) < precision - delta for a in z.terms)
        and polynomial.substitute_root(candidate).is_exactly_zero()
    ):
        return candidate, True
    return z.truncate(precision), False


def regular_iterate(
    polynomial: ZPolynomial,
    precision: Rational,
    config: SolverConfig | None = None,
) -> RegularFragment:
    """
    The unique root of positive x1-order of a polynomial in regular shape,
    up to ``precision``, in the coordinates of the returned map.
    """
    config = config or SolverConfig()
    if not detect_regular(polynomial):
        raise ValueError("Polynomial is not in regular shape")
    preparation = _regular_preparation(polynomial, config)
    root, exact = _fixed_point(preparation.polynomial, Fraction(precision))
    return RegularFragment(
        root=root,
        map=preparation.map,
        blowups=preparation.blowups,
        exact=exact,
    )


def _x1_order(f: Series) -> Fraction | None:
    exponents = f.x1_exponents()
    return exponents[0] if exponents else None


def _finish_regular(
    branch: _Branch, target: Fraction, config: SolverConfig
) -> _Finished:
    preparation = _regular_preparation(branch.polynomial, config)
    prepared = branch.apply_map(preparation.map, preparation.polynomial)
    budget = target - total_degree(prepared.exponent)
    if budget <= 0:
        return prepared.finish(target)
    root, exact = _fixed_point(prepared.polynomial, budget)
    prepared = replace(
        prepared,
        partial=prepared.partial + root.multiply_monomial(prepared.exponent),
    ).record(
        StepRecord(
            kind=SegmentKind.REGULAR,
            depth=branch.depth + 1,
            accumulated_map=prepared.accumulated_map,
            gamma=_x1_order(branch.polynomial.coefficient(0)),
            alpha=root,
            blowups=preparation.blowups,
        )
    )
    logger.debug("regular finish at depth %d", branch.depth)
    return prepared.finish(target, exact=exact)


def _segment_children(
    branch: _Branch,
    segment: AdmissibleSegment,
    target: Fraction,
    config: SolverConfig,
) -> list[_Branch | _Finished]:
    prepared, preparation = branch, None
    if not segment.is_vertical and branch.polynomial.n >= 2:
        preparation = prepare_segment(branch.polynomial, segment, config)
        prepared = branch.apply_map(preparation.map, preparation.polynomial)
    budget = target - total_degree(prepared.exponent) - segment.gamma
    if budget <= 0:
        return [prepared.finish(target)] * segment.height

    characteristic = characteristic_equation(
        prepared.polynomial, segment, budget
    )
    logger.debug(
        "depth %d: %s gamma=%s C=%s",
        branch.depth,
        segment.kind.value,
        segment.gamma,
        characteristic,
    )
    children: list[_Branch | _Finished] = []
    for root in solve_characteristic(characteristic, budget, config):
        if not root.simple:
            raise MultipleRootError(
                f"Characteristic equation {characteristic} has the repeated"
                f" root {format_series(root.alpha)}"
            )
        child = prepared.apply_map(root.map).substitute(segment, root.alpha)
        children.append(
            child.record(
                StepRecord(
                    kind=segment.kind,
                    depth=child.depth,
                    accumulated_map=child.accumulated_map,
                    gamma=segment.gamma,
                    beta=segment.beta,
                    alpha=root.alpha,
                    blowups=(preparation.blowups if preparation else ())
                    + root.blowups,
                    recursion_map=None
                    if root.map.is_identity()
                    else root.map,
                    exponent=preparation.exponent if preparation else 0,
                )
            )
        )
    return children


def _advance(
    branch: _Branch,
    target: Fraction,
    config: SolverConfig,
    allow_vertical: bool,
) -> list[_Branch | _Finished]:
    constant = branch.polynomial.coefficient(0)
    if constant.is_exactly_zero():
        return [branch.finish(target, exact=True)]
    if constant.is_zero() or total_degree(branch.exponent) >= target:
        return [branch.finish(target)]
    if branch.depth > 0 and detect_regular(branch.polynomial):
        return [_finish_regular(branch, target, config)]

    segments = admissible_segments(
        e1_diagram(branch.polynomial),
        first_step=branch.depth == 0 and allow_vertical,
    )
    if not segments:
        return [] if branch.depth == 0 else [branch.finish(target)]
    items: list[_Branch | _Finished] = []
    for segment in segments:
        items.extend(_segment_children(branch, segment, target, config))
    return items


def _expand(
    polynomial: ZPolynomial,
    target: Fraction,
    config: SolverConfig,
    allow_vertical: bool,
) -> list[_Finished]:
    """Depth-first walk of the branch tree, roots in branch order."""
    n = polynomial.n
    if polynomial.degree == 1 and polynomial.is_monic():
        root = -polynomial.coefficient(0)
        return [
            _Finished(
                series=root if root.is_exact() else root.truncate(target),
                accumulated_map=MonomialMap.identity(n),
                steps=(),
                exact=root.is_exact(),
            )
        ]
    finished: list[_Finished] = []
    stack: list[_Branch | _Finished] = [_Branch.start(polynomial)]
    while stack:
        item = stack.pop()
        if isinstance(item, _Finished):
            finished.append(item)
            continue
        if item.depth > config.max_steps:
            raise MaxStepsExceeded(
                f"Branch still open after {config.max_steps} steps"
            )
        stack.extend(reversed(_advance(item, target, config, allow_vertical)))
    logger.debug("%d branches finished in %d variables", len(finished), n)
    return finished


def _check_input(polynomial: ZPolynomial) -> None:
    if polynomial.n < 1:
        raise DimensionMismatchError("The solver needs at least x1")
    if polynomial.degree < 1 or not polynomial.is_monic():
        raise NotMonicError("Expected a monic polynomial of degree >= 1")
    if polynomial.coefficient(0).is_zero():
        raise ZeroConstantTermError("The coefficient w_m is zero")
    for coefficient in polynomial.coefficients:
        if not coefficient.has_nonnegative_support():
            raise SupportOutsideQuadrantError(
                f"Coefficient {format_series(coefficient)} is not a power"
                " series"
            )


def verify(
    polynomial: ZPolynomial,
    root: PuiseuxRoot,
    precision: Rational | None = None,
) -> Precision:
    """
    Substitute the prepared root into P read through the accumulated map.

    Returns:
        The least total degree of the residual, None when it is exactly 0.

    Raises:
        ResidualBelowPrecision: when the residual has a term below
            ``precision`` (default: the root's own precision), or an exact
            root leaves a non-zero residual.
    """
    residual = polynomial.apply_map(root.accumulated_map).substitute_root(
        root.series
    )
    if root.series.is_exact():
        if not residual.is_exactly_zero():
            raise ResidualBelowPrecision(
                f"Exact root {format_series(root.series)} leaves the residual"
                f" {format_series(residual)}"
            )
        return None
    floor = residual.order()
    bound = root.precision if precision is None else Fraction(precision)
    if floor is not None and bound is not None and floor < bound:
        raise ResidualBelowPrecision(
            f"Residual order {floor} is below {bound}"
        )
    return floor


def _as_root(finished: _Finished, precision: Fraction) -> PuiseuxRoot:
    series = (
        finished.series
        if finished.exact
        else finished.series.truncate(precision)
    )
    return PuiseuxRoot(
        series=series,
        accumulated_map=finished.accumulated_map,
        precision=series.precision,
        steps=finished.steps,
    )


def _expected_count(polynomial: ZPolynomial, config: SolverConfig) -> int:
    if config.first_vertical:
        return polynomial.degree
    return e1_diagram(polynomial).axis()[0]


def _check_denominators(
    polynomial: ZPolynomial, roots: Iterable[PuiseuxRoot]
) -> None:
    bound = math.factorial(polynomial.degree) * math.lcm(
        *(c.denominator for c in polynomial.coefficients)
    )
    for root in roots:
        if bound % root.denominator:
            logger.warning(
                "root denominator %d does not divide m! lcm = %d",
                root.denominator,
                bound,
            )


def solve(
    polynomial: ZPolynomial, config: SolverConfig | None = None
) -> list[PuiseuxRoot]:
    """
    All roots of a monic P with power series coefficients and w_m != 0.

    With ``first_vertical`` off, only the roots of positive x1-order are
    returned.

    Raises:
        NotMonicError, ZeroConstantTermError, SupportOutsideQuadrantError:
            on invalid input
        UnsplittableError: a characteristic equation does not split
        MultipleRootError: a characteristic equation has a repeated root
        MaxStepsExceeded: a branch exceeds ``max_steps``
        ResidualBelowPrecision: verification still fails after the last
            precision escalation
    """
    config = config or SolverConfig()
    _check_input(polynomial)
    expected = _expected_count(polynomial, config)
    guard = config.guard_precision
    failure = ""
    for attempt in range(config.max_escalations + 1):
        working = config.precision + guard
        finished = _expand(
            polynomial, working, config, allow_vertical=config.first_vertical
        )
        try:
            roots = [
                replace(
                    root,
                    residual_floor=verify(polynomial, root, config.precision),
                )
                for root in (
                    _as_root(f, config.precision) for f in finished
                )
            ]
        except ResidualBelowPrecision as e:
            failure = str(e)
        else:
            if len(roots) == expected:
                _check_denominators(polynomial, roots)
                logger.info(
                    "%d roots verified at precision %s",
                    len(roots),
                    config.precision,
                )
                return roots
            failure = f"found {len(roots)} of {expected} roots"
        logger.info(
            "attempt %d at guard %s failed: %s", attempt, guard, failure
        )
        guard = guard * 2 if guard else Fraction(1)

    logger.warning("precision escalation exhausted: %s", failure)
    raise ResidualBelowPrecision(
        f"Precision {config.precision} not reached: {failure}"
    )


def merge_certificates(
    roots: Iterable[PuiseuxRoot], iteration_cap: int | None = None
) -> MonomialMap:
    """One blow-down whose cone holds the external support of every root."""
    maps = [root.certificate for root in roots]
    if iteration_cap is None:
        return merge_cones(maps)
    return merge_cones(maps, iteration_cap)
