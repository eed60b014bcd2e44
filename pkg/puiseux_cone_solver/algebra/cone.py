"""
Polyhedral cones and S-cones
============================

A cone is the set of non-negative rational combinations of its generators. An
S-cone is a cone that finitely many order-preserving blowing-ups bring into the
first quadrant; equivalently, every generator is lexicographically positive.

Blow-down compositions Phi double as simplicial cones: Phi(R_{>=0}^n) is
generated by the rows of Phi's matrix, and membership of a is decided exactly
by the sign of a Phi^-1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable

from puiseux_cone_solver.algebra.blowup import (
    MonomialMap,
    compose,
    elementary_power,
    inverse,
)
from puiseux_cone_solver.algebra.lattice import (
    as_exponent_vector,
    first_nonzero_index,
    first_nonzero_sign,
    is_lex_positive,
    is_nonnegative,
)
from puiseux_cone_solver.exceptions import (
    DimensionMismatchError,
    IterationCapExceeded,
    NotSConeError,
    ZeroGeneratorError,
)
from puiseux_cone_solver.solver.solver_utils import DEFAULT_ITERATION_CAP
from puiseux_cone_solver.typing import ElementaryStep, ExponentVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cone:
    generators: tuple[ExponentVector, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("A cone needs at least one generator")
        n = len(self.generators[0])
        if any(len(g) != n for g in self.generators):
            raise DimensionMismatchError("Generators of different lengths")
        if all(first_nonzero_sign(g) == 0 for g in self.generators):
            raise ZeroGeneratorError("All generators are zero")

    @classmethod
    def of(cls, generators: Iterable[Iterable]) -> Cone:
        return cls(
            generators=tuple(as_exponent_vector(g) for g in generators)
        )

    @classmethod
    def from_map(cls, m: MonomialMap) -> Cone:
        return cls.of(m.rows)

    @property
    def n(self) -> int:
        return len(self.generators[0])


@dataclass(frozen=True)
class SConeCertificate:
    reduction: MonomialMap
    steps: tuple[ElementaryStep, ...] = field(default=())

    def images(self, cone: Cone) -> tuple[ExponentVector, ...]:
        return tuple(self.reduction.apply(g) for g in cone.generators)


def is_s_cone(cone: Cone) -> bool:
    if any(first_nonzero_sign(g) == 0 for g in cone.generators):
        raise ZeroGeneratorError("S-cone test needs non-zero generators")
    return all(is_lex_positive(g) for g in cone.generators)


def s_cone_witness(cone: Cone) -> ExponentVector | None:
    """The first generator that is not lex-positive, if any."""
    return next((g for g in cone.generators if not is_lex_positive(g)), None)


def bring_to_first_quadrant(
    cone: Cone, iteration_cap: int = DEFAULT_ITERATION_CAP
) -> SConeCertificate:
    """
    Find an order-preserving blowing-up composition moving every generator
    into the first quadrant.

    Repeatedly take the generator with a negative entry whose first non-zero
    index i0 is smallest, let j be its first negative index and apply
    phi_{i0 j} ceil(|v_j| / v_i0) times. No entry of any generator decreases,
    so every burst removes at least one negative entry.

    Args:
        cone: an S-cone, zero generators are ignored
        iteration_cap: maximal number of bursts

    Returns:
        The reduction map and the bursts as (i, j, k) triples.
    """
    generators = [g for g in cone.generators if first_nonzero_sign(g)]
    if not all(is_lex_positive(g) for g in generators):
        raise NotSConeError(
            f"Generator {s_cone_witness(cone)} is not lexicographically"
            " positive"
        )
    n = cone.n
    reduction = MonomialMap.identity(n)
    steps: list[ElementaryStep] = []

    while True:
        offending = [g for g in generators if not is_nonnegative(g)]
        if not offending:
            break
        v = min(offending, key=first_nonzero_index)
        i0 = first_nonzero_index(v)
        j = next(k for k, v_k in enumerate(v) if v_k < 0)
        exponent = math.ceil(-v[j] / v[i0])
        if len(steps) >= iteration_cap:
            raise IterationCapExceeded(
                f"No first-quadrant reduction after {iteration_cap} bursts"
            )
        burst = elementary_power(n, i0 + 1, j + 1, exponent)
        steps.append((i0 + 1, j + 1, exponent))
        logger.debug("first quadrant: phi_%d%d^%d", i0 + 1, j + 1, exponent)
        generators = [burst.apply(g) for g in generators]
        reduction = compose(reduction, burst)

    return SConeCertificate(reduction=reduction, steps=tuple(steps))


def common_enclosing(
    m1: MonomialMap,
    m2: MonomialMap,
    iteration_cap: int = DEFAULT_ITERATION_CAP,
) -> MonomialMap:
    """
    A blow-down Phi whose cone contains the cones of both blow-downs: bring
    the rows of both matrices into the first quadrant with a blowing-up B,
    then Phi = B^-1.
    """
    if m1.n != m2.n:
        raise DimensionMismatchError("Cones live in different dimensions")
    union = Cone.of(m1.rows + m2.rows)
    certificate = bring_to_first_quadrant(union, iteration_cap)
    return inverse(certificate.reduction)


def merge_cones(
    maps: Iterable[MonomialMap], iteration_cap: int = DEFAULT_ITERATION_CAP
) -> MonomialMap:
    """Fold ``common_enclosing`` over a non-empty family of blow-downs."""
    maps = list(maps)
    if not maps:
        raise ValueError("Nothing to merge")
    merged = maps[0]
    for m in maps[1:]:
        if m != merged:
            merged = common_enclosing(merged, m, iteration_cap)
    return merged


def contains(m: MonomialMap, a: ExponentVector) -> bool:
    return is_nonnegative(inverse(m).apply(a))
