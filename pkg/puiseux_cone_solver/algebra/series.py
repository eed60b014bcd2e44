"""
Truncated Puiseux series
========================

Sparse exact arithmetic on multivariate Puiseux series and on polynomials in
the distinguished unknown z whose coefficients are such series.

A ``TruncatedPuiseuxSeries`` is a finite map from exponent vectors to nonzero
rationals plus a precision T:

    . T is None: the series is exact, the map is the whole series.
    . T is a rational: every term of total degree < T is present and exact,
      and nothing is claimed about total degree >= T.

Arithmetic drops every term at or above the propagated precision. Only
``apply_map`` keeps terms above its (recomputed) precision, because a
blowing-down can move the cut-off frontier below known terms.

Total degree is meaningful as a truncation bound in prepared coordinates,
where supports lie in the first quadrant; the solver therefore computes there
and maps results out only at the end.
"""

from __future__ import annotations

import math
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from puiseux_cone_solver.algebra.blowup import MonomialMap
from puiseux_cone_solver.algebra.cone import contains
from puiseux_cone_solver.algebra.lattice import (
    add_vectors,
    as_exponent_vector,
    common_denominator,
    is_nonnegative,
    total_degree,
    zero_vector,
)
from puiseux_cone_solver.exceptions import (
    DimensionMismatchError,
    NotAUnitError,
)
from puiseux_cone_solver.typing import ExponentVector, Precision, Rational

TermItems = Mapping[ExponentVector, Rational] | Iterable[tuple]


def min_precision(*values: Precision) -> Precision:
    """Minimum of precisions, None standing for +infinity."""
    finite = [v for v in values if v is not None]
    return min(finite) if finite else None


def _as_precision(value: Rational | None) -> Precision:
    return None if value is None else Fraction(value)


class TruncatedPuiseuxSeries:
    __slots__ = ("_n", "_terms", "_precision")

    def __init__(
        self,
        n: int,
        terms: TermItems = (),
        precision: Rational | None = None,
        clip: bool = True,
    ):
        self._n = n
        self._precision = _as_precision(precision)
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: dict[ExponentVector, Fraction] = {}
        for exponent, coefficient in items:
            exponent = as_exponent_vector(exponent)
            if len(exponent) != n:
                raise DimensionMismatchError(
                    f"Exponent {exponent} does not have {n} coordinates"
                )
            collected[exponent] = collected.get(
                exponent, Fraction(0)
            ) + Fraction(coefficient)
        self._terms = {
            a: c
            for a, c in sorted(collected.items())
            if c != 0
            and not (
                clip
                and self._precision is not None
                and total_degree(a) >= self._precision
            )
        }

    # constructors

    @classmethod
    def zero(cls, n: int, precision: Rational | None = None):
        return cls(n, precision=precision)

    @classmethod
    def constant(
        cls, n: int, value: Rational, precision: Rational | None = None
    ):
        return cls(n, {zero_vector(n): value}, precision)

    @classmethod
    def one(cls, n: int) -> TruncatedPuiseuxSeries:
        return cls.constant(n, 1)

    @classmethod
    def monomial(
        cls, exponent: Iterable[Rational], coefficient: Rational = 1
    ) -> TruncatedPuiseuxSeries:
        exponent = as_exponent_vector(exponent)
        return cls(len(exponent), {exponent: coefficient})

    # accessors

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[ExponentVector, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def precision(self) -> Precision:
        return self._precision

    @property
    def denominator(self) -> int:
        return common_denominator(self._terms)

    def is_exact(self) -> bool:
        return self._precision is None

    def is_zero(self) -> bool:
        """No known term; zero up to the precision."""
        return not self._terms

    def is_exactly_zero(self) -> bool:
        return not self._terms and self._precision is None

    def is_one(self) -> bool:
        return self.is_exact() and self._terms == {zero_vector(self._n): 1}

    def has_nonnegative_support(self) -> bool:
        return all(is_nonnegative(a) for a in self._terms)

    def support(self) -> frozenset[ExponentVector]:
        return frozenset(self._terms)

    def coefficient(self, exponent: Iterable[Rational]) -> Fraction:
        return self._terms.get(as_exponent_vector(exponent), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get(zero_vector(self._n), Fraction(0))

    def order(self) -> Precision:
        """
        Lowest total degree that may carry a nonzero term: the least degree
        of a known term, capped by the precision. None for the exact zero.
        """
        degrees = [total_degree(a) for a in self._terms]
        return min_precision(
            min(degrees) if degrees else None, self._precision
        )

    def __iter__(self) -> Iterator[tuple[ExponentVector, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedPuiseuxSeries):
            return NotImplemented
        return (
            self._n == other._n
            and self._precision == other._precision
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self._n, self._precision, tuple(self._terms.items())))

    def __repr__(self) -> str:
        suffix = "" if self._precision is None else f" + O({self._precision})"
        return f"TruncatedPuiseuxSeries({format_series(self)}{suffix})"

    # arithmetic

    def _check_dimension(self, other: TruncatedPuiseuxSeries) -> None:
        if self._n != other._n:
            raise DimensionMismatchError(
                f"Series in {self._n} and {other._n} variables"
            )

    def _coerce(self, other) -> TruncatedPuiseuxSeries:
        if isinstance(other, TruncatedPuiseuxSeries):
            self._check_dimension(other)
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedPuiseuxSeries.constant(self._n, other)
        return NotImplemented

    def __add__(self, other) -> TruncatedPuiseuxSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for a, c in other._terms.items():
            terms[a] = terms.get(a, Fraction(0)) + c
        return TruncatedPuiseuxSeries(
            self._n, terms, min_precision(self._precision, other._precision)
        )

    __radd__ = __add__

    def __neg__(self) -> TruncatedPuiseuxSeries:
        return TruncatedPuiseuxSeries(
            self._n, {a: -c for a, c in self._terms.items()}, self._precision
        )

    def __sub__(self, other) -> TruncatedPuiseuxSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> TruncatedPuiseuxSeries:
        return (-self) + other

    def __mul__(self, other) -> TruncatedPuiseuxSeries:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return TruncatedPuiseuxSeries.zero(self._n)
            return TruncatedPuiseuxSeries(
                self._n,
                {a: c * other for a, c in self._terms.items()},
                self._precision,
            )
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        own_order, other_order = self.order(), other.order()
        if own_order is None or other_order is None:
            return TruncatedPuiseuxSeries.zero(self._n)
        bounds = []
        if self._precision is not None:
            bounds.append(self._precision + other_order)
        if other._precision is not None:
            bounds.append(other._precision + own_order)
        precision = min(bounds) if bounds else None

        terms: dict[ExponentVector, Fraction] = {}
        for a, c in self._terms.items():
            degree_a = total_degree(a)
            for b, e in other._terms.items():
                if (
                    precision is not None
                    and degree_a + total_degree(b) >= precision
                ):
                    continue
                key = add_vectors(a, b)
                terms[key] = terms.get(key, Fraction(0)) + c * e
        return TruncatedPuiseuxSeries(self._n, terms, precision)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> TruncatedPuiseuxSeries:
        if exponent < 0:
            raise ValueError("Use invert_unit for negative powers")
        result = TruncatedPuiseuxSeries.one(self._n)
        for _ in range(exponent):
            result = result * self
        return result

    def truncate(self, precision: Rational | None = None):
        """Lower the precision to ``precision`` and drop terms above it."""
        return TruncatedPuiseuxSeries(
            self._n,
            self._terms,
            min_precision(self._precision, _as_precision(precision)),
        )

    def invert_unit(
        self, precision: Rational | None = None
    ) -> TruncatedPuiseuxSeries:
        """
        The inverse of a unit of k[[x^(1/d)]] (non-negative support, nonzero
        constant term) up to ``precision``.

        Newton's iteration g <- g (2 - f g) doubles the degree up to which
        g is correct, starting from 1 / c0, correct below the least degree
        of a non-constant term.
        """
        c0 = self.constant_term()
        if c0 == 0 or not self.has_nonnegative_support():
            raise NotAUnitError(f"{format_series(self)} is not a unit")
        rest = [total_degree(a) for a in self._terms if any(a)]
        if not rest:
            return TruncatedPuiseuxSeries.constant(
                self._n, 1 / c0, self._precision
            )
        target = min_precision(self._precision, _as_precision(precision))
        if target is None:
            raise ValueError(
                "Inverting an exact non-constant unit needs a precision"
            )
        inverse = TruncatedPuiseuxSeries.constant(self._n, 1 / c0)
        accuracy = min(rest)
        while accuracy < target:
            accuracy = min(2 * accuracy, target)
            approximation = self.truncate(accuracy)
            step = inverse * (2 - approximation * inverse)
            # terms below ``accuracy`` are now exact
            inverse = TruncatedPuiseuxSeries(
                self._n, step.truncate(accuracy).terms
            )
        return TruncatedPuiseuxSeries(self._n, inverse.terms, target)

    # monomial operations

    def multiply_monomial(self, exponent: ExponentVector):
        shift = total_degree(exponent)
        return TruncatedPuiseuxSeries(
            self._n,
            {add_vectors(a, exponent): c for a, c in self._terms.items()},
            None if self._precision is None else self._precision + shift,
        )

    def divide_monomial(self, exponent: ExponentVector):
        return self.multiply_monomial(tuple(-e for e in exponent))

    def apply_map(self, m: MonomialMap) -> TruncatedPuiseuxSeries:
        """
        Substitute the monomial map: each exponent a becomes a M. Known terms
        are never dropped. The new precision is the lowest image degree of
        the cut-off frontier {a >= 0, |a| = T}, i.e. T times the least row
        sum; for blowing-ups it equals T.
        """
        if m.n != self._n:
            raise DimensionMismatchError(
                f"A {m.n}-variable map cannot act on {self._n} variables"
            )
        if self._n == 0:
            return self
        precision = self._precision
        if precision is not None:
            precision = min(precision * r for r in m.row_sums())
        return TruncatedPuiseuxSeries(
            self._n,
            {m.apply(a): c for a, c in self._terms.items()},
            precision,
            clip=False,
        )

    # variable splitting

    def layer(self, nu: Rational) -> TruncatedPuiseuxSeries:
        """
        The coefficient of x1^nu as a series in x2, ..., xn. It is complete
        below T - nu.
        """
        nu = Fraction(nu)
        return TruncatedPuiseuxSeries(
            self._n - 1,
            {a[1:]: c for a, c in self._terms.items() if a[0] == nu},
            None if self._precision is None else self._precision - nu,
        )

    def x1_exponents(self) -> list[Fraction]:
        return sorted({a[0] for a in self._terms})

    def embed(self, leading: int = 1) -> TruncatedPuiseuxSeries:
        """Read a series in x_{leading+1}, ..., x_n as one in all of x."""
        pad = zero_vector(leading)
        return TruncatedPuiseuxSeries(
            self._n + leading,
            {pad + a: c for a, c in self._terms.items()},
            self._precision,
        )


Series = TruncatedPuiseuxSeries


def apply_map(f: Series, m: MonomialMap) -> Series:
    return f.apply_map(m)


def newton_diagram(f: Series) -> frozenset[ExponentVector]:
    return f.support()


def support_in_cone(f: Series, certificate: MonomialMap) -> bool:
    return all(contains(certificate, a) for a in f.terms)


def invert_unit(f: Series, precision: Rational | None = None) -> Series:
    return f.invert_unit(precision)


class ZPolynomial:
    """
    A polynomial in z with series coefficients, stored by z-degree:
    ``coefficient(k)`` multiplies z^k. ``w(i)`` is the coefficient of
    z^(m - i), the indexing of z^m + w_1 z^(m-1) + ... + w_m.
    """

    __slots__ = ("_coefficients", "_n")

    def __init__(self, coefficients: Sequence[Series], n: int | None = None):
        coefficients = list(coefficients)
        if n is None:
            if not coefficients:
                raise ValueError("Cannot infer the variable count")
            n = coefficients[0].n
        if any(c.n != n for c in coefficients):
            raise DimensionMismatchError("Coefficients in different rings")
        while coefficients and coefficients[-1].is_exactly_zero():
            coefficients.pop()
        self._coefficients = tuple(coefficients)
        self._n = n

    @classmethod
    def from_roots(cls, roots: Sequence[Series]) -> ZPolynomial:
        n = roots[0].n
        result = cls([Series.one(n)])
        for root in roots:
            result = result * cls([-root, Series.one(n)])
        return result

    @property
    def n(self) -> int:
        return self._n

    @property
    def degree(self) -> int:
        return len(self._coefficients) - 1

    @property
    def coefficients(self) -> tuple[Series, ...]:
        return self._coefficients

    def coefficient(self, k: int) -> Series:
        if 0 <= k < len(self._coefficients):
            return self._coefficients[k]
        return Series.zero(self._n)

    def w(self, i: int) -> Series:
        return self.coefficient(self.degree - i)

    @property
    def leading(self) -> Series:
        return self._coefficients[-1]

    def is_monic(self) -> bool:
        return bool(self._coefficients) and self.leading.is_one()

    def precision(self) -> Precision:
        return min_precision(*(c.precision for c in self._coefficients))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZPolynomial):
            return NotImplemented
        return (
            self._n == other._n
            and self._coefficients == other._coefficients
        )

    def __hash__(self) -> int:
        return hash((self._n, self._coefficients))

    def __repr__(self) -> str:
        return f"ZPolynomial({format_zpolynomial(self)})"

    def __add__(self, other: ZPolynomial) -> ZPolynomial:
        size = max(len(self._coefficients), len(other._coefficients))
        return ZPolynomial(
            [self.coefficient(k) + other.coefficient(k) for k in range(size)],
            self._n,
        )

    def __mul__(self, other: ZPolynomial | Series) -> ZPolynomial:
        if isinstance(other, Series):
            return ZPolynomial(
                [c * other for c in self._coefficients], self._n
            )
        if not self._coefficients or not other._coefficients:
            return ZPolynomial([], self._n)
        products = [Series.zero(self._n)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self._coefficients):
            for j, b in enumerate(other._coefficients):
                products[i + j] = products[i + j] + a * b
        return ZPolynomial(products, self._n)

    def map_coefficients(self, function) -> ZPolynomial:
        return ZPolynomial([function(c) for c in self._coefficients], self._n)

    def apply_map(self, m: MonomialMap) -> ZPolynomial:
        return self.map_coefficients(lambda c: c.apply_map(m))

    def truncate(self, precision: Rational | None = None) -> ZPolynomial:
        return self.map_coefficients(lambda c: c.truncate(precision))

    def divide_monomial(self, exponent: ExponentVector) -> ZPolynomial:
        return self.map_coefficients(lambda c: c.divide_monomial(exponent))

    def layer(self, nu: Rational) -> ZPolynomial:
        return ZPolynomial(
            [c.layer(nu) for c in self._coefficients], self._n - 1
        )

    def substitute_root(self, f: Series) -> Series:
        """P(f) by Horner's rule."""
        if f.n != self._n:
            raise DimensionMismatchError(
                f"Cannot substitute a series in {f.n} variables"
            )
        result = Series.zero(self._n)
        for c in reversed(self._coefficients):
            result = result * f + c
        return result

    def substitute_linear(self, shift: Series, scale: Series) -> ZPolynomial:
        """
        P(shift + scale z'), expanded by the binomial theorem:
        the z'^j coefficient is scale^j sum_k binom(k, j) c_k shift^(k-j).
        """
        m = self.degree
        shift_powers = [Series.one(self._n)]
        for _ in range(m):
            shift_powers.append(shift_powers[-1] * shift)
        coefficients = []
        scale_power = Series.one(self._n)
        for j in range(m + 1):
            total = Series.zero(self._n)
            for k in range(j, m + 1):
                total = total + (
                    self._coefficients[k]
                    * shift_powers[k - j]
                    * math.comb(k, j)
                )
            coefficients.append(total * scale_power)
            scale_power = scale_power * scale
        return ZPolynomial(coefficients, self._n)


def substitute_root(p: ZPolynomial, f: Series) -> Series:
    return p.substitute_root(f)


# text syntax


def _format_rational(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else str(value)


def format_monomial(exponent: ExponentVector, variable: str = "x") -> str:
    factors = []
    for index, e in enumerate(exponent, start=1):
        if e == 0:
            continue
        name = f"{variable}{index}"
        if e == 1:
            factors.append(name)
        elif e.denominator == 1 and e > 0:
            factors.append(f"{name}^{e.numerator}")
        else:
            factors.append(f"{name}^({_format_rational(e)})")
    return "*".join(factors)


def display_order(f: Series) -> list[tuple[ExponentVector, Fraction]]:
    """Terms by increasing total degree, higher x1 powers first."""
    return sorted(
        f.terms.items(),
        key=lambda t: (total_degree(t[0]), tuple(-c for c in t[0])),
    )


def format_series(f: Series, variable: str = "x") -> str:
    """
    Render terms by increasing total degree, e.g.
    ``x2^(1/2) + 1/2*x1*x2^(-1/2)``. The output parses back with the
    equation parser.
    """
    pieces: list[str] = []
    for exponent, coefficient in display_order(f):
        monomial = format_monomial(exponent, variable)
        magnitude = abs(coefficient)
        if not monomial:
            body = _format_rational(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{_format_rational(magnitude)}*{monomial}"
        if not pieces:
            pieces.append(body if coefficient > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coefficient > 0 else f"- {body}")
    return " ".join(pieces) if pieces else "0"


def format_zpolynomial(p: ZPolynomial, unknown: str = "z") -> str:
    pieces: list[str] = []
    for k in reversed(range(p.degree + 1)):
        c = p.coefficient(k)
        if c.is_zero():
            continue
        power = "" if k == 0 else unknown if k == 1 else f"{unknown}^{k}"
        text = format_series(c)
        if not power:
            body = text
        elif c.is_one():
            body = power
        elif len(c) == 1 and not text.startswith("-"):
            body = f"{text}*{power}"
        else:
            body = f"({text})*{power}"
        pieces.append(body)
    return " + ".join(pieces).replace("+ -", "- ") if pieces else "0"


