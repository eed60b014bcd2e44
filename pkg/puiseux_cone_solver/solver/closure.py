"""
Cone rings and integral closure
===============================

Elements of k[[Gamma, d]] (Puiseux series of denominator d supported in the
cone of a blow-down), their Galois conjugates, minimal polynomials and
integrality over k[[x]], and the solver run over cone-ring coefficients.

Conjugates x_i^(1/d) -> zeta^(c_i) x_i^(1/d) are computed in the group
algebra of Z/d: a term carries its power of the primitive root zeta next to
its exponent. Orbit products are reduced by the d-th cyclotomic polynomial
at the end; a surviving zeta is a bug and raises ``ZetaResidueError``.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from puiseux_cone_solver.algebra.blowup import (
    MonomialMap,
    compose,
    compose_all,
    elementary,
    inverse,
)
from puiseux_cone_solver.algebra.cone import merge_cones
from puiseux_cone_solver.algebra.field import from_sympy
from puiseux_cone_solver.algebra.lattice import (
    add_vectors,
    unit_vector,
    zero_vector,
)
from puiseux_cone_solver.algebra.series import (
    Series,
    ZPolynomial,
    format_series,
    support_in_cone,
)
from puiseux_cone_solver.exceptions import (
    DimensionMismatchError,
    NotInConeError,
    ZetaResidueError,
)
from puiseux_cone_solver.solver.newton import PuiseuxRoot, solve
from puiseux_cone_solver.solver.solver_utils import SolverConfig
from puiseux_cone_solver.typing import ExponentVector, Rational

logger = logging.getLogger(__name__)

_ZETA = sympy.Symbol("zeta")

# coefficient pool of planted instances
PLANTED_COEFFICIENTS = tuple(
    Fraction(sign * p, q)
    for p, q in ((1, 1), (1, 2), (2, 1), (1, 3), (3, 2))
    for sign in (1, -1)
)

GroupKey = tuple[ExponentVector, int]


@dataclass(frozen=True)
class ConeRingElement:
    series: Series
    cone: MonomialMap
    d: int

    def __post_init__(self):
        if self.cone.n != self.series.n:
            raise DimensionMismatchError("Cone and series dimensions differ")
        if self.d % self.series.denominator:
            raise ValueError(
                f"Denominator {self.series.denominator} does not divide"
                f" {self.d}"
            )
        if not support_in_cone(self.series, self.cone):
            raise NotInConeError(
                f"{format_series(self.series)} is not supported in the cone"
                f" {self.cone.to_lists()}"
            )

    @classmethod
    def of(cls, series: Series, cone: MonomialMap | None = None):
        cone = cone or MonomialMap.identity(series.n)
        return cls(series=series, cone=cone, d=series.denominator)


@dataclass(frozen=True)
class ConjugateCharacter:
    c: tuple[int, ...]
    d: int

    def __post_init__(self):
        if self.d < 1 or any(not 0 <= c < self.d for c in self.c):
            raise ValueError(f"Residues {self.c} are not taken mod {self.d}")

    def twist(self, exponent: ExponentVector) -> int:
        """Power of zeta picked up by x^exponent."""
        scaled = [a * self.d for a in exponent]
        if any(s.denominator != 1 for s in scaled):
            raise ValueError(f"{exponent} is not in the 1/{self.d} lattice")
        return sum(int(s) * c for s, c in zip(scaled, self.c)) % self.d


@dataclass(frozen=True)
class ConjugateSeries:
    """A finite series over k[zeta], keyed by (exponent, power of zeta)."""

    n: int
    d: int
    terms: dict[GroupKey, Fraction]

    def to_series(self) -> Series:
        if all(k == 0 for _, k in self.terms):
            return Series(self.n, {a: c for (a, _), c in self.terms.items()})
        if self.d == 2:
            return Series(
                self.n,
                [(a, c if k == 0 else -c) for (a, k), c in self.terms.items()],
            )
        raise ZetaResidueError(
            f"A conjugate with a primitive {self.d}-th root of unity is not"
            " a rational series"
        )


def conjugate(f: Series, chi: ConjugateCharacter) -> ConjugateSeries:
    if chi.d % f.denominator:
        raise ValueError(
            f"Series of denominator {f.denominator} needs d = multiple of it"
        )
    if len(chi.c) != f.n:
        raise DimensionMismatchError("Character and series dimensions differ")
    return ConjugateSeries(
        n=f.n,
        d=chi.d,
        terms={(a, chi.twist(a)): c for a, c in f.terms.items()},
    )


def conjugate_orbit(f: Series, d: int | None = None) -> list[ConjugateSeries]:
    """
    The distinct conjugates of f. Two characters give the same conjugate
    iff they twist every term of the support alike.
    """
    d = d or f.denominator
    support = sorted(f.terms)
    seen: set[tuple[int, ...]] = set()
    orbit = []
    for c in itertools.product(range(d), repeat=f.n):
        chi = ConjugateCharacter(c=c, d=d)
        pattern = tuple(chi.twist(a) for a in support)
        if pattern not in seen:
            seen.add(pattern)
            orbit.append(conjugate(f, chi))
    return orbit


def _group_product(
    p: dict[GroupKey, Fraction], q: dict[GroupKey, Fraction], d: int
) -> dict[GroupKey, Fraction]:
    product: dict[GroupKey, Fraction] = {}
    for (a, k), c in p.items():
        for (b, l), e in q.items():
            key = (add_vectors(a, b), (k + l) % d)
            product[key] = product.get(key, Fraction(0)) + c * e
    return {key: c for key, c in product.items() if c != 0}


def _group_sum(
    p: dict[GroupKey, Fraction], q: dict[GroupKey, Fraction]
) -> dict[GroupKey, Fraction]:
    total = dict(p)
    for key, c in q.items():
        total[key] = total.get(key, Fraction(0)) + c
    return {key: c for key, c in total.items() if c != 0}


def _reduce_zeta(powers: dict[int, Fraction], d: int) -> Fraction:
    if set(powers) <= {0}:
        return powers.get(0, Fraction(0))
    expression = sum(
        sympy.Rational(c.numerator, c.denominator) * _ZETA**k
        for k, c in powers.items()
    )
    remainder = sympy.Poly(expression, _ZETA, domain="QQ").rem(
        sympy.Poly(sympy.cyclotomic_poly(d, _ZETA), _ZETA, domain="QQ")
    )
    if remainder.degree() > 0:
        raise ZetaResidueError(
            f"Orbit product keeps {remainder.as_expr()} mod Phi_{d}"
        )
    return from_sympy(remainder.as_expr())


def minimal_polynomial(element: ConeRingElement | Series) -> ZPolynomial:
    """
    The product of z - sigma(f) over the distinct conjugates of a finite f.
    Its coefficients are zeta-free with integer exponents.
    """
    if isinstance(element, ConeRingElement):
        f, d = element.series, element.d
    else:
        f, d = element, element.denominator
    n = f.n
    one: dict[GroupKey, Fraction] = {(zero_vector(n), 0): Fraction(1)}
    polynomial: list[dict[GroupKey, Fraction]] = [one]
    orbit = conjugate_orbit(f, d)
    for sigma in orbit:
        negated = {key: -c for key, c in sigma.terms.items()}
        shifted = [{}] + polynomial
        polynomial = [
            _group_sum(shifted[k], _group_product(polynomial[k], negated, d))
            if k < len(polynomial)
            else shifted[k]
            for k in range(len(shifted))
        ]

    coefficients = []
    for group_terms in polynomial:
        by_exponent: dict[ExponentVector, dict[int, Fraction]] = {}
        for (a, k), c in group_terms.items():
            by_exponent.setdefault(a, {})[k] = c
        coefficients.append(
            Series(
                n,
                {
                    a: _reduce_zeta(powers, d)
                    for a, powers in by_exponent.items()
                },
            )
        )
    logger.debug("minimal polynomial of degree %d", len(orbit))
    return ZPolynomial(coefficients, n)


def integrality_witness(minpoly: ZPolynomial) -> ExponentVector | None:
    """The lex-smallest coefficient exponent outside Z_{>=0}^n, if any."""
    offending = [
        a
        for c in minpoly.coefficients
        for a in c.terms
        if any(e < 0 or e.denominator != 1 for e in a)
    ]
    return min(offending) if offending else None


def is_integral_over_formal(minpoly: ZPolynomial) -> bool:
    return integrality_witness(minpoly) is None


def cone_ring_coefficients(
    polynomial: ZPolynomial, cone: MonomialMap
) -> list[ConeRingElement]:
    return [
        ConeRingElement(series=c, cone=cone, d=c.denominator)
        for c in polynomial.coefficients
    ]


def solve_over_cone_ring(
    coefficients: Sequence[ConeRingElement],
    config: SolverConfig | None = None,
) -> list[PuiseuxRoot]:
    """
    Roots of z^m + ... with cone-ring coefficients, constant term first.

    The coefficient cones are merged into one blow-down Phi, P is pulled
    back by Phi^-1 to power series coefficients and solved there. Each root's
    accumulated map starts with Phi^-1, so its certificate maps into
    Phi's cone.
    """
    config = config or SolverConfig()
    merged = merge_cones(
        (c.cone for c in coefficients), config.iteration_cap
    )
    pullback = inverse(merged)
    polynomial = ZPolynomial(
        [c.series for c in coefficients], coefficients[0].series.n
    ).apply_map(pullback)
    logger.info("cone ring pullback %s", pullback.to_lists())
    return [
        replace(
            root,
            accumulated_map=compose(pullback, root.accumulated_map),
        )
        for root in solve(polynomial, config)
    ]


def normalize_monic(polynomial: ZPolynomial) -> tuple[ZPolynomial, Series]:
    """
    v0 z^m + w_1 z^(m-1) + ... + w_m  ->  y^m + w_1 y^(m-1) + w_2 v0 y^(m-2)
    + ... + w_m v0^(m-1), with y = v0 z. Returns the monic polynomial and v0.
    """
    m = polynomial.degree
    leading = polynomial.leading
    powers = [Series.one(polynomial.n)]
    for _ in range(m):
        powers.append(powers[-1] * leading)
    coefficients = [
        polynomial.coefficient(k) * powers[m - 1 - k] for k in range(m)
    ]
    return (
        ZPolynomial(coefficients + [Series.one(polynomial.n)], polynomial.n),
        leading,
    )


def divide_by_leading(
    root: PuiseuxRoot, leading: Series, precision: Rational
) -> PuiseuxRoot:
    """z = y / v0 for a root y of the normalized polynomial."""
    prepared = leading.apply_map(root.accumulated_map)
    apex = min(prepared.terms)
    unit = prepared.divide_monomial(apex)
    series = root.series.divide_monomial(apex) * unit.invert_unit(precision)
    return replace(root, series=series, precision=series.precision)


def random_blowdown(rng: random.Random, n: int, length: int) -> MonomialMap:
    """A word of ``length`` random order-preserving blowing-downs."""
    if n < 2:
        return MonomialMap.identity(n)
    word = []
    for _ in range(length):
        i, j = sorted(rng.sample(range(1, n + 1), 2))
        word.append(elementary(n, i, j, -1))
    return compose_all(n, word)


@dataclass(frozen=True)
class PlantedInstance:
    polynomial: ZPolynomial
    certificate: MonomialMap
    germs: tuple[Series, ...]
    roots: tuple[Series, ...]

    def coefficients(self) -> list[ConeRingElement]:
        return cone_ring_coefficients(self.polynomial, self.certificate)


def _planted_germ(
    rng: random.Random,
    n: int,
    constant: Fraction,
    denominator: int,
    max_terms: int,
) -> Series:
    terms = {zero_vector(n): constant}
    for _ in range(rng.randint(0, max_terms - 1)):
        exponent = _random_exponent(rng, n, denominator)
        if any(exponent):
            terms[exponent] = rng.choice(PLANTED_COEFFICIENTS)
    return Series(n, terms)


def _random_exponent(
    rng: random.Random, n: int, denominator: int
) -> ExponentVector:
    return tuple(
        Fraction(rng.randint(0, denominator), denominator) for _ in range(n)
    )


def _leading_terms(
    rng: random.Random, n: int, m: int, denominator: int
) -> list[tuple[ExponentVector, Fraction]]:
    """m distinct non-constant monomials c x^e."""
    leading: list[tuple[ExponentVector, Fraction]] = []
    while len(leading) < m:
        term = (
            _random_exponent(rng, n, denominator),
            rng.choice(PLANTED_COEFFICIENTS),
        )
        if any(term[0]) and term not in leading:
            leading.append(term)
    return leading


def _planted_vanishing_germ(
    rng: random.Random,
    n: int,
    leading: tuple[ExponentVector, Fraction],
    denominator: int,
    max_terms: int,
) -> Series:
    """
    x^e (c + x1 h) for the leading term c x^e: at every level of the
    branch tree the characteristic roots are the distinct monomials left
    over from the leading terms, hence simple.
    """
    exponent, coefficient = leading
    shift = add_vectors(exponent, unit_vector(n, 0))
    terms = {exponent: coefficient}
    for _ in range(rng.randint(0, max_terms - 1)):
        a = add_vectors(shift, _random_exponent(rng, n, denominator))
        terms[a] = rng.choice(PLANTED_COEFFICIENTS)
    return Series(n, terms)


def planted_instance(
    rng: random.Random,
    n: int,
    m: int,
    max_terms: int = 4,
    max_denominator: int = 3,
    max_blowdowns: int = 3,
    vanishing: bool = False,
) -> PlantedInstance:
    """
    m germs with non-negative support pushed by one random blow-down into
    lex-positive Puiseux series f_i; the instance is prod (z - f_i).

    By default the germs have distinct non-zero constant terms. With
    ``vanishing`` they have no constant term and distinct leading terms
    c x^e, with every other term divisible by x1 x^e.
    """
    denominator = rng.randint(1, max_denominator)
    if vanishing:
        germs = tuple(
            _planted_vanishing_germ(rng, n, leading, denominator, max_terms)
            for leading in _leading_terms(rng, n, m, denominator)
        )
    else:
        constants = rng.sample(PLANTED_COEFFICIENTS, m)
        germs = tuple(
            _planted_germ(rng, n, c, denominator, max_terms)
            for c in constants
        )
    certificate = random_blowdown(rng, n, rng.randint(0, max_blowdowns))
    roots = tuple(g.apply_map(certificate) for g in germs)
    return PlantedInstance(
        polynomial=ZPolynomial.from_roots(roots),
        certificate=certificate,
        germs=germs,
        roots=roots,
    )


def recovered(
    instance: PlantedInstance,
    roots: Iterable[PuiseuxRoot],
    precision: Rational,
) -> bool:
    """Every planted root matches one computed root below ``precision``."""
    remaining = list(roots)
    for planted in instance.roots:
        match = next(
            (
                root
                for root in remaining
                if root.series.truncate(precision).terms
                == planted.apply_map(root.accumulated_map)
                .truncate(precision)
                .terms
            ),
            None,
        )
        if match is None:
            return False
        remaining.remove(match)
    return not remaining


__all__ = [
    "ConeRingElement",
    "ConjugateCharacter",
    "ConjugateSeries",
    "PlantedInstance",
    "conjugate",
    "conjugate_orbit",
    "cone_ring_coefficients",
    "divide_by_leading",
    "integrality_witness",
    "is_integral_over_formal",
    "minimal_polynomial",
    "normalize_monic",
    "planted_instance",
    "random_blowdown",
    "recovered",
    "solve_over_cone_ring",
]
