"""
Monomial ideals.

A MonomialIdeal is determined by its minimal generators, so every operation
reduces its result eagerly and equality is set equality of generators.
"""

import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from django.db import models
from django.utils.translation import gettext_lazy as _

from .exceptions import InvalidArgumentError
from .poly_core import Monomial, VarSet, _check_same_ring

logger = logging.getLogger(__name__)


def _canonical(gens: Iterable[Monomial]) -> List[Monomial]:
    # highest x1 power first, as the generators are listed when read off by hand
    return sorted(gens, key=lambda m: m.exponents, reverse=True)


def _minimalize(gens: Iterable[Monomial]) -> FrozenSet[Monomial]:
    kept: List[Monomial] = []
    for m in sorted(set(gens), key=lambda m: (m.degree, m.exponents)):
        if not any(g.divides(m) for g in kept):
            kept.append(m)
    return frozenset(kept)


@dataclass(frozen=True)
class MonomialIdeal:
    """Ideal generated by monomials; no generator divides another."""

    ring: VarSet
    gens: FrozenSet[Monomial] = frozenset()

    def __post_init__(self):
        for g in self.gens:
            _check_same_ring(self.ring, g.ring)
        object.__setattr__(self, 'gens', _minimalize(self.gens))

    @classmethod
    def zero(cls, ring: VarSet) -> 'MonomialIdeal':
        return cls(ring, frozenset())

    @classmethod
    def unit(cls, ring: VarSet) -> 'MonomialIdeal':
        return cls(ring, frozenset({Monomial.one(ring)}))

    @classmethod
    def from_exponents(cls, ring: VarSet, *exponents: Sequence[int]) -> 'MonomialIdeal':
        return cls(ring, frozenset(Monomial(ring, tuple(e)) for e in exponents))

    @classmethod
    def from_variables(cls, ring: VarSet, *names: str) -> 'MonomialIdeal':
        """The ideal (x_a, x_b, ...) of a coordinate subspace."""
        return cls(ring, frozenset(Monomial.variable(ring, n) for n in names))

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return any(g.is_one for g in self.gens)

    def sorted_gens(self) -> List[Monomial]:
        return _canonical(self.gens)

    def __contains__(self, m: Monomial) -> bool:
        return contains_monomial(self, m)

    def __add__(self, other: 'MonomialIdeal') -> 'MonomialIdeal':
        return combine(self, other, CombineOp.SUM)

    def __mul__(self, other: 'MonomialIdeal') -> 'MonomialIdeal':
        return combine(self, other, CombineOp.PRODUCT)

    def __pow__(self, n: int) -> 'MonomialIdeal':
        return power(self, n)

    def __and__(self, other: 'MonomialIdeal') -> 'MonomialIdeal':
        return intersect(self, other)

    def format(self, separator: str = '*') -> str:
        if self.is_zero:
            return '(0)'
        return '(' + ', '.join(g.format(separator) for g in self.sorted_gens()) + ')'

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"<MonomialIdeal: {self.format()}>"

    def to_poly_ideal(self):
        from .groebner import PolyIdeal

        return PolyIdeal(self.ring, [g.to_polynomial() for g in self.sorted_gens()])


class CombineOp(models.TextChoices):
    SUM = 'sum', _('Sum')
    PRODUCT = 'product', _('Product')


# ============================================================================
# OPERATIONS
# ============================================================================

def minimal_generators(gens: Iterable[Monomial]) -> MonomialIdeal:
    gens = list(gens)
    if not gens:
        raise InvalidArgumentError("cannot infer the ring of an empty generator set; use MonomialIdeal.zero")
    return MonomialIdeal(gens[0].ring, frozenset(gens))


def contains_monomial(ideal: MonomialIdeal, m: Monomial) -> bool:
    _check_same_ring(ideal.ring, m.ring)
    return any(g.divides(m) for g in ideal.gens)


def membership_witness(ideal: MonomialIdeal, m: Monomial) -> Optional[Monomial]:
    """The first generator (canonical order) dividing m, or None."""
    _check_same_ring(ideal.ring, m.ring)
    for g in ideal.sorted_gens():
        if g.divides(m):
            return g
    return None


def combine(left: MonomialIdeal, right: MonomialIdeal, op: str) -> MonomialIdeal:
    _check_same_ring(left.ring, right.ring)
    if CombineOp(op) == CombineOp.SUM:
        return MonomialIdeal(left.ring, left.gens | right.gens)
    return MonomialIdeal(left.ring, frozenset(a * b for a in left.gens for b in right.gens))


def power(ideal: MonomialIdeal, n: int) -> MonomialIdeal:
    if not isinstance(n, int) or n < 1:
        raise InvalidArgumentError(f"ideal power must be a positive integer, got {n!r}")
    result = ideal
    for _step in range(n - 1):
        result = combine(result, ideal, CombineOp.PRODUCT)
    return result


def intersect(left: MonomialIdeal, right: MonomialIdeal) -> MonomialIdeal:
    _check_same_ring(left.ring, right.ring)
    return MonomialIdeal(left.ring, frozenset(a.lcm(b) for a in left.gens for b in right.gens))


def intersect_all(ideals: Sequence[MonomialIdeal]) -> MonomialIdeal:
    if not ideals:
        raise InvalidArgumentError("intersection of no ideals")
    result = ideals[0]
    for ideal in ideals[1:]:
        result = intersect(result, ideal)
    return result


def equals(left: MonomialIdeal, right: MonomialIdeal) -> bool:
    _check_same_ring(left.ring, right.ring)
    return left.gens == right.gens


def saturate_variable(ideal: MonomialIdeal, name: str) -> MonomialIdeal:
    """(I : x^inf), by erasing x from every generator."""
    i = ideal.ring.index(name)
    return MonomialIdeal(ideal.ring, frozenset(
        Monomial(ideal.ring, g.exponents[:i] + (0,) + g.exponents[i + 1:]) for g in ideal.gens
    ))


def quotient(ideal: MonomialIdeal, m: Monomial) -> MonomialIdeal:
    """(I : m) for a single monomial m."""
    _check_same_ring(ideal.ring, m.ring)
    return MonomialIdeal(ideal.ring, frozenset(
        Monomial(ideal.ring, tuple(max(a - b, 0) for a, b in zip(g.exponents, m.exponents)))
        for g in ideal.gens
    ))


# ============================================================================
# EXPANSION TABLE
# ============================================================================

@dataclass(frozen=True)
class ExpansionRow:
    monomial: Monomial
    choices: Tuple[Tuple[Monomial, ...], ...]
    witness: str


def _format_piece(m: Monomial) -> str:
    support = m.support()
    if len(support) == 1:
        return m.format('.')
    return f"({m.format('.')})"


def _format_choice(chosen: Tuple[Monomial, ...]) -> str:
    if len(set(chosen)) == 1 and len(chosen) > 1:
        base = _format_piece(chosen[0])
        if '^' in base and not base.startswith('('):
            base = f"({base})"
        return f"{base}^{len(chosen)}"
    merged = chosen[0]
    for m in chosen[1:]:
        merged = merged * m
    return _format_piece(merged)


def expansion_report(factors: Sequence[Tuple[MonomialIdeal, int]]) -> List[ExpansionRow]:
    """
    Every product obtained by choosing generators from the factors of a product
    of ideal powers, before minimalization.

    A factor (I, e) contributes an unordered choice of e generators of I, so
    (x2, x1.x3)^2 offers x2^2, (x1.x2.x3) and (x1.x3)^2. Each row carries the
    dotted factorization it came from.

    Args:
        factors: nonempty sequence of (ideal, exponent) pairs over one ring

    Returns:
        list of ExpansionRow, in the order the choices are enumerated
    """
    if not factors:
        raise InvalidArgumentError("expansion_report needs at least one factor")
    ring = factors[0][0].ring
    per_factor = []
    for ideal, exponent in factors:
        _check_same_ring(ring, ideal.ring)
        if exponent < 1:
            raise InvalidArgumentError(f"factor exponent must be positive, got {exponent}")
        per_factor.append(list(combinations_with_replacement(ideal.sorted_gens(), exponent)))

    rows = []
    for selection in product(*per_factor):
        monomial = Monomial.one(ring)
        for chosen in selection:
            for m in chosen:
                monomial = monomial * m
        pieces = [_format_choice(chosen) for chosen in selection]
        if len(pieces) == 1 and not pieces[0].startswith('('):
            pieces[0] = f"({pieces[0]})"
        rows.append(ExpansionRow(monomial, tuple(selection), '.'.join(pieces)))
    logger.debug(f"expansion_report: {len(rows)} rows over {len(factors)} factors")
    return rows
