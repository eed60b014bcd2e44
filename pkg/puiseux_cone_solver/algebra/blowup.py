"""
Monomial blowing-ups
====================

A monomial blowing-up phi_ij (i != j) is the substitution x_i -> x_i x_j. On
exponent row vectors it acts as a -> a E_ij(1), adding a_i to a_j. It
preserves the lexicographic order iff i < j, and compositions of such maps are
exactly the unipotent upper triangular integer matrices with non-negative
entries.

Every map in this module acts on the right of row vectors, so composing
``compose(m1, m2)`` means "apply m1 first, then m2" and is the matrix product
m1 m2.

Indices in the public API (``elementary``, recorded steps) are 1-based, as in
x1, ..., xn.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from puiseux_cone_solver.algebra.lattice import (
    LatticeSet,
    is_nonnegative,
    minimal_elements,
    sub_vectors,
)
from puiseux_cone_solver.exceptions import (
    DimensionMismatchError,
    IterationCapExceeded,
    NotUnitriangularError,
    SupportOutsideQuadrantError,
)
from puiseux_cone_solver.solver.solver_utils import DEFAULT_ITERATION_CAP
from puiseux_cone_solver.typing import (
    ElementaryStep,
    ExponentVector,
    MatrixRows,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class MonomialMap:
    rows: MatrixRows

    def __post_init__(self):
        n = len(self.rows)
        if n == 0:
            # the map of the empty variable set
            return
        for i, row in enumerate(self.rows):
            if len(row) != n:
                raise NotUnitriangularError(
                    f"Row {i + 1} has {len(row)} entries, expected {n}"
                )
            if any(not isinstance(entry, int) for entry in row):
                raise NotUnitriangularError(
                    f"Row {i + 1} has non-integer entries: {row}"
                )
            if row[i] != 1 or any(row[j] for j in range(i)):
                raise NotUnitriangularError(
                    f"Matrix is not unit upper triangular at row {i + 1}"
                )
        assert self.determinant() == 1

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> MonomialMap:
        return cls(rows=tuple(tuple(int(e) for e in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> MonomialMap:
        return cls(
            rows=tuple(
                tuple(int(i == j) for j in range(n)) for i in range(n)
            )
        )

    @property
    def n(self) -> int:
        return len(self.rows)

    def determinant(self) -> int:
        return math.prod(self.rows[i][i] for i in range(self.n))

    def is_identity(self) -> bool:
        return self == MonomialMap.identity(self.n)

    def apply(self, a: ExponentVector) -> ExponentVector:
        """The image a M of a row vector."""
        if len(a) != self.n:
            raise DimensionMismatchError(
                f"Cannot apply a {self.n}-variable map to {a}"
            )
        return tuple(
            sum((a[i] * self.rows[i][j] for i in range(j + 1)), 0 * a[j])
            for j in range(self.n)
        )

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.rows)

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.rows]


def elementary(n: int, i: int, j: int, sign: int = 1) -> MonomialMap:
    """
    The matrix E_ij(sign): the blowing-up phi_ij for sign +1 and the
    blowing-down phi_ij^-1 for sign -1.

    Args:
        n: number of variables
        i: source index, 1-based
        j: target index, 1-based
        sign: +1 or -1

    Returns:
        The elementary map adding sign * a_i to a_j.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return elementary_power(n, i, j, sign)


def preserves_lex_order(i: int, j: int) -> bool:
    return i < j


def elementary_power(n: int, i: int, j: int, exponent: int) -> MonomialMap:
    """phi_ij applied ``exponent`` times (blowing-down when negative)."""
    if i == j:
        raise ValueError("A monomial blowing-up needs two distinct indices")
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"Indices ({i}, {j}) out of range for n = {n}")
    if not preserves_lex_order(i, j):
        raise NotUnitriangularError(
            f"phi_{i}{j} does not preserve the lexicographic order"
        )
    rows = [[int(r == c) for c in range(n)] for r in range(n)]
    rows[i - 1][j - 1] = exponent
    return MonomialMap.from_rows(rows)


def compose(m1: MonomialMap, m2: MonomialMap) -> MonomialMap:
    if m1.n != m2.n:
        raise DimensionMismatchError(
            f"Cannot compose maps on {m1.n} and {m2.n} variables"
        )
    n = m1.n
    return MonomialMap.from_rows(
        [
            [
                sum(m1.rows[i][k] * m2.rows[k][j] for k in range(n))
                for j in range(n)
            ]
            for i in range(n)
        ]
    )


def compose_all(n: int, maps: Iterable[MonomialMap]) -> MonomialMap:
    result = MonomialMap.identity(n)
    for m in maps:
        result = compose(result, m)
    return result


def inverse(m: MonomialMap) -> MonomialMap:
    n = m.n
    inv = [[int(i == j) for j in range(n)] for i in range(n)]
    # back substitution on the strictly upper part, bottom row first
    for i in reversed(range(n)):
        for j in range(i + 1, n):
            inv[i][j] = -sum(
                m.rows[i][k] * inv[k][j] for k in range(i + 1, j + 1)
            )
    return MonomialMap.from_rows(inv)


def is_blowup_composition(m: MonomialMap) -> bool:
    return all(entry >= 0 for row in m.rows for entry in row)


def lift_map(m: MonomialMap, leading: int = 1) -> MonomialMap:
    """
    Embed a map on x_{leading+1}, ..., x_n into all n variables, leaving the
    first ``leading`` coordinates invariant.
    """
    n = m.n + leading
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for i, row in enumerate(m.rows):
        for j, entry in enumerate(row):
            rows[leading + i][leading + j] = entry
    return MonomialMap.from_rows(rows)


def steps_to_map(n: int, steps: Iterable[ElementaryStep]) -> MonomialMap:
    return compose_all(n, (elementary_power(n, *step) for step in steps))


@dataclass(frozen=True)
class PrincipalizationResult:
    map: MonomialMap
    apexes: tuple[ExponentVector, ...]
    steps: tuple[ElementaryStep, ...] = field(default=())


def _as_lattice_sets(
    sets: Sequence[LatticeSet | Iterable[Iterable[int]]],
) -> list[LatticeSet]:
    lattice_sets = [
        s if isinstance(s, LatticeSet) else LatticeSet.of(s) for s in sets
    ]
    if not lattice_sets:
        raise ValueError("Nothing to principalize")
    n = lattice_sets[0].n
    for s in lattice_sets:
        if not s.elements:
            raise ValueError("Cannot principalize an empty set")
        if s.n != n:
            raise DimensionMismatchError(
                "All sets must live in the same dimension"
            )
        if not all(is_nonnegative(a) for a in s.elements):
            raise SupportOutsideQuadrantError(
                "Principalization input must lie in the first quadrant"
            )
    return lattice_sets


def principalize(
    sets: Sequence[LatticeSet | Iterable[Iterable[int]]],
    iteration_cap: int = DEFAULT_ITERATION_CAP,
) -> PrincipalizationResult:
    """
    Find an order-preserving composition of blowing-ups making every set
    principal, i.e. contained in apex + Z_{>=0}^n with the apex in the set.

    While some image has two product-minimal elements, take its two
    lex-smallest minimal elements u < v. For each negative coordinate j of
    delta = v - u, pick the largest positive coordinate i < j and apply
    phi_ij ceil(|delta_j| / delta_i) times. Once delta >= 0 the pair stays
    comparable under any further blowing-up, so the number of minimal
    elements strictly decreases.

    Args:
        sets: finite non-empty subsets of Z_{>=0}^n
        iteration_cap: maximal number of elementary bursts

    Returns:
        The map, one apex per set, and the bursts applied as (i, j, k)
        triples meaning phi_ij^k.
    """
    lattice_sets = _as_lattice_sets(sets)
    n = lattice_sets[0].n
    images = [s.sorted() for s in lattice_sets]
    current = MonomialMap.identity(n)
    steps: list[ElementaryStep] = []

    while True:
        minima = [minimal_elements(image) for image in images]
        pending = next((m for m in minima if len(m) > 1), None)
        if pending is None:
            break
        u, v = pending[0], pending[1]
        delta = sub_vectors(v, u)
        for j in range(n):
            if delta[j] >= 0:
                continue
            i = max(range(j), key=lambda k: delta[k])
            exponent = math.ceil(-delta[j] / delta[i])
            if len(steps) >= iteration_cap:
                raise IterationCapExceeded(
                    f"Principalization did not finish after {iteration_cap}"
                    " bursts"
                )
            burst = elementary_power(n, i + 1, j + 1, exponent)
            steps.append((i + 1, j + 1, exponent))
            logger.debug("principalize: phi_%d%d^%d", i + 1, j + 1, exponent)
            images = [[burst.apply(a) for a in image] for image in images]
            current = compose(current, burst)
            delta = burst.apply(delta)

    return PrincipalizationResult(
        map=current,
        apexes=tuple(m[0] for m in minima),
        steps=tuple(steps),
    )


def principalize_sequential(
    sets: Sequence[LatticeSet | Iterable[Iterable[int]]],
    iteration_cap: int = DEFAULT_ITERATION_CAP,
) -> PrincipalizationResult:
    """
    Principalize the sets one at a time: the first set, then the image of
    each later one under the map found so far. Kept as an independent
    oracle for ``principalize``.
    """
    lattice_sets = _as_lattice_sets(sets)
    first = principalize(lattice_sets[:1], iteration_cap)
    result = first
    for s in lattice_sets[1:]:
        pushed = LatticeSet(
            elements=frozenset(result.map.apply(a) for a in s.elements),
            n=s.n,
        )
        last = principalize([pushed], iteration_cap)
        result = PrincipalizationResult(
            map=compose(result.map, last.map),
            apexes=tuple(last.map.apply(b) for b in result.apexes)
            + last.apexes,
            steps=result.steps + last.steps,
        )
    return result
