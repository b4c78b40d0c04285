"""
Buchberger's algorithm and the ideal operations built on it.

Bases are reduced (monic, interreduced) and sorted by descending leading
monomial, so a reduced basis is a canonical form of its ideal under a fixed
order. Intersection, saturation and radical membership go through one fresh
auxiliary variable and block elimination.
"""

import logging
import threading
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

import sympy

from .exceptions import (
    DimensionMismatchError,
    InvalidArgumentError,
    NotOnVarietyError,
    ZeroPolynomialError,
)
from .poly_core import (
    GREVLEX,
    Exponents,
    MonomialOrder,
    Polynomial,
    Scalar,
    VarSet,
    _check_same_ring,
    divide,
    normal_form,
)

logger = logging.getLogger(__name__)


# ============================================================================
# ENGINE STATISTICS
# ============================================================================

@dataclass
class EngineStats:
    bases: int = 0
    s_pairs: int = 0
    reductions: int = 0
    zero_reductions: int = 0

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)


_active_stats: ContextVar[Optional[EngineStats]] = ContextVar('engine_stats', default=None)


@contextmanager
def collect_engine_stats() -> Iterator[EngineStats]:
    """Count Buchberger work done inside the block."""
    stats = EngineStats()
    token = _active_stats.set(stats)
    try:
        yield stats
    finally:
        _active_stats.reset(token)


def _record(**counts: int) -> None:
    stats = _active_stats.get()
    if stats is not None:
        for name, value in counts.items():
            setattr(stats, name, getattr(stats, name) + value)


# ============================================================================
# TYPES
# ============================================================================

@dataclass(frozen=True)
class PointQ:
    """A rational point, one coordinate per ring variable."""

    ring: VarSet
    coordinates: Tuple[Fraction, ...]

    def __post_init__(self):
        coordinates = tuple(Fraction(c) for c in self.coordinates)
        if len(coordinates) != len(self.ring):
            raise DimensionMismatchError(
                f"point has {len(coordinates)} coordinates, ring {self.ring} needs {len(self.ring)}"
            )
        object.__setattr__(self, 'coordinates', coordinates)

    @classmethod
    def origin(cls, ring: VarSet) -> 'PointQ':
        return cls(ring, (0,) * len(ring))

    @classmethod
    def from_mapping(cls, ring: VarSet, values: Mapping[str, Scalar]) -> 'PointQ':
        for name in values:
            ring.index(name)
        return cls(ring, tuple(values.get(name, 0) for name in ring.names))

    def __str__(self) -> str:
        return '(' + ', '.join(str(c) for c in self.coordinates) + ')'


class PolyIdeal:
    """
    Ideal of Q[ring] given by generators, with a per-order basis cache.

    The cache is filled at most once per order; readers either miss or see
    the finished basis.
    """

    def __init__(self, ring: VarSet, gens: Iterable[Polynomial] = ()):
        gens = tuple(gens)
        for g in gens:
            _check_same_ring(ring, g.ring)
        self.ring = ring
        self.gens: Tuple[Polynomial, ...] = tuple(g for g in gens if g)
        self._gb_cache: Dict[MonomialOrder, Tuple[Polynomial, ...]] = {}
        self._lock = threading.Lock()

    @classmethod
    def principal(cls, f: Polynomial) -> 'PolyIdeal':
        return cls(f.ring, [f])

    @classmethod
    def from_variables(cls, ring: VarSet, *names: str) -> 'PolyIdeal':
        return cls(ring, [Polynomial.variable(ring, n) for n in names])

    @property
    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return groebner_basis(self) == [Polynomial.constant(self.ring, 1)]

    def basis(self, order: MonomialOrder = GREVLEX) -> List[Polynomial]:
        return groebner_basis(self, order)

    def __contains__(self, f: Polynomial) -> bool:
        return ideal_member(f, self)

    def __add__(self, other: 'PolyIdeal') -> 'PolyIdeal':
        return ideal_sum(self, other)

    def __mul__(self, other: 'PolyIdeal') -> 'PolyIdeal':
        return ideal_product(self, other)

    def __pow__(self, n: int) -> 'PolyIdeal':
        return ideal_power(self, n)

    def __and__(self, other: 'PolyIdeal') -> 'PolyIdeal':
        return intersect(self, other)

    def __str__(self) -> str:
        if not self.gens:
            return '(0)'
        return '(' + ', '.join(str(g) for g in self.gens) + ')'

    def __repr__(self) -> str:
        return f"<PolyIdeal over {self.ring}: {self}>"


# ============================================================================
# BUCHBERGER
# ============================================================================

def _lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _spoly(f: Polynomial, g: Polynomial, lmf: Exponents, lmg: Exponents) -> Polynomial:
    # f and g are monic
    lcm = _lcm(lmf, lmg)
    return (
        f.mul_term(tuple(a - b for a, b in zip(lcm, lmf)))
        - g.mul_term(tuple(a - b for a, b in zip(lcm, lmg)))
    )


def _update(
    basis: List[Polynomial],
    leads: List[Exponents],
    pairs: Set[Tuple[int, int]],
    f: Polynomial,
    lmf: Exponents,
    order: MonomialOrder,
) -> Set[Tuple[int, int]]:
    """Add f to the basis and return the pair set after the Gebauer-Moeller criteria."""
    n = len(basis)
    kept = set()
    for i, j in pairs:
        lcm_ij = _lcm(leads[i], leads[j])
        if (not _divides(lmf, lcm_ij)
                or lcm_ij == _lcm(leads[i], lmf)
                or lcm_ij == _lcm(leads[j], lmf)):
            kept.add((i, j))

    by_lcm: Dict[Exponents, List[int]] = {}
    for i in range(n):
        by_lcm.setdefault(_lcm(leads[i], lmf), []).append(i)
    minimal: List[Exponents] = []
    for lcm in sorted(by_lcm, key=order.key):
        if not any(_divides(other, lcm) for other in minimal):
            minimal.append(lcm)
    for lcm in minimal:
        coprime = any(
            lcm == tuple(a + b for a, b in zip(leads[i], lmf)) for i in by_lcm[lcm]
        )
        if not coprime:
            kept.add((min(by_lcm[lcm]), n))

    basis.append(f)
    leads.append(lmf)
    return kept


def _minimalize(basis: List[Polynomial], order: MonomialOrder) -> List[Polynomial]:
    kept: List[Polynomial] = []
    kept_leads: List[Exponents] = []
    for f in sorted(basis, key=lambda h: order.key(h.leading_exponents(order))):
        lm = f.leading_exponents(order)
        if not any(_divides(other, lm) for other in kept_leads):
            kept.append(f)
            kept_leads.append(lm)
    return kept


def _interreduce(basis: List[Polynomial], order: MonomialOrder) -> List[Polynomial]:
    reduced = []
    for i, f in enumerate(basis):
        others = basis[:i] + basis[i + 1:]
        reduced.append(normal_form(f, others, order).monic(order))
    return reduced


def _canonical_basis(basis: Iterable[Polynomial], order: MonomialOrder) -> Tuple[Polynomial, ...]:
    return tuple(sorted(basis, key=lambda h: order.key(h.leading_exponents(order)), reverse=True))


def _buchberger(gens: Sequence[Polynomial], order: MonomialOrder) -> Tuple[Polynomial, ...]:
    basis: List[Polynomial] = []
    leads: List[Exponents] = []
    pairs: Set[Tuple[int, int]] = set()
    for f in _canonical_basis(gens, order):
        f = f.monic(order)
        pairs = _update(basis, leads, pairs, f, f.leading_exponents(order), order)

    while pairs:
        i, j = min(pairs, key=lambda p: (order.key(_lcm(leads[p[0]], leads[p[1]])), p[1], p[0]))
        pairs.remove((i, j))
        s = _spoly(basis[i], basis[j], leads[i], leads[j])
        r = normal_form(s, basis, order)
        _record(s_pairs=1, reductions=1)
        if r:
            r = r.monic(order)
            pairs = _update(basis, leads, pairs, r, r.leading_exponents(order), order)
        else:
            _record(zero_reductions=1)

    return _canonical_basis(_interreduce(_minimalize(basis, order), order), order)


def groebner_basis(ideal: PolyIdeal, order: MonomialOrder = GREVLEX) -> List[Polynomial]:
    """Reduced Groebner basis of the ideal under order (empty for the zero ideal)."""
    cached = ideal._gb_cache.get(order)
    if cached is not None:
        return list(cached)
    with ideal._lock:
        cached = ideal._gb_cache.get(order)
        if cached is None:
            if any(g.is_constant for g in ideal.gens):
                cached = (Polynomial.constant(ideal.ring, 1),)
            else:
                cached = _buchberger(ideal.gens, order)
            _record(bases=1)
            logger.debug(
                f"groebner_basis: {len(ideal.gens)} generators -> {len(cached)} basis elements "
                f"over {ideal.ring} ({order})"
            )
            ideal._gb_cache[order] = cached
    return list(cached)


def _with_basis(ring: VarSet, basis: Sequence[Polynomial], order: MonomialOrder) -> PolyIdeal:
    ideal = PolyIdeal(ring, basis)
    ideal._gb_cache[order] = _canonical_basis(basis, order)
    return ideal


# ============================================================================
# MEMBERSHIP AND EQUALITY
# ============================================================================

def ideal_member(f: Polynomial, ideal: PolyIdeal, order: MonomialOrder = GREVLEX) -> bool:
    _check_same_ring(f.ring, ideal.ring)
    if not f:
        return True
    basis = groebner_basis(ideal, order)
    if not basis:
        return False
    return not normal_form(f, basis, order)


def member_cofactors(
    f: Polynomial,
    ideal: PolyIdeal,
    order: MonomialOrder = GREVLEX,
) -> Optional[List[Tuple[Polynomial, Polynomial]]]:
    """
    Cofactors expressing f over the reduced basis.

    Returns:
        list of (cofactor, basis element) pairs summing to f, or None when f is
        not a member
    """
    _check_same_ring(f.ring, ideal.ring)
    basis = groebner_basis(ideal, order)
    if not basis:
        return [] if not f else None
    quotients, remainder = divide(f, basis, order)
    if remainder:
        return None
    return list(zip(quotients, basis))


def ideal_equal(left: PolyIdeal, right: PolyIdeal) -> bool:
    _check_same_ring(left.ring, right.ring)
    return groebner_basis(left) == groebner_basis(right)


def ideal_contains(big: PolyIdeal, small: PolyIdeal) -> bool:
    """True iff every generator of small lies in big."""
    _check_same_ring(big.ring, small.ring)
    return all(ideal_member(g, big) for g in small.gens)


# ============================================================================
# IDEAL ARITHMETIC
# ============================================================================

def ideal_sum(left: PolyIdeal, right: PolyIdeal) -> PolyIdeal:
    _check_same_ring(left.ring, right.ring)
    return PolyIdeal(left.ring, left.gens + right.gens)


def ideal_product(left: PolyIdeal, right: PolyIdeal) -> PolyIdeal:
    _check_same_ring(left.ring, right.ring)
    return PolyIdeal(left.ring, [f * g for f in left.gens for g in right.gens])


def ideal_power(ideal: PolyIdeal, n: int) -> PolyIdeal:
    if not isinstance(n, int) or n < 1:
        raise InvalidArgumentError(f"ideal power must be a positive integer, got {n!r}")
    result = ideal
    for _step in range(n - 1):
        result = ideal_product(result, ideal)
    return result


def eliminate(ideal: PolyIdeal, names: Iterable[str]) -> PolyIdeal:
    """The elimination ideal I intersected with Q[remaining variables]."""
    ring = ideal.ring
    names = set(names)
    for name in names:
        ring.index(name)
    dropped = [n for n in ring.names if n in names]
    if not dropped:
        return PolyIdeal(ring, ideal.gens)
    if len(dropped) == len(ring):
        raise InvalidArgumentError(f"cannot eliminate every variable of {ring}")

    kept = ring.without(dropped)
    reordered = VarSet(tuple(dropped) + kept.names)
    lifted = PolyIdeal(reordered, [g.embed(reordered) for g in ideal.gens])
    basis = groebner_basis(lifted, MonomialOrder.block(len(dropped)))
    survivors = [b.restrict(kept) for b in basis if not set(b.support()) & set(dropped)]
    logger.debug(f"eliminate {dropped}: {len(basis)} -> {len(survivors)} generators")
    # a block-order basis restricted to the second block is a reduced grevlex basis there
    return _with_basis(kept, survivors, GREVLEX)


def _with_fresh_variable(ring: VarSet, base: str) -> Tuple[VarSet, Polynomial, str]:
    name = ring.fresh_name(base)
    extended = ring.prepend([name])
    return extended, Polynomial.variable(extended, name), name


def intersect(left: PolyIdeal, right: PolyIdeal) -> PolyIdeal:
    """I cap J = (t*I + (1 - t)*J) cap Q[ring]."""
    _check_same_ring(left.ring, right.ring)
    extended, t, name = _with_fresh_variable(left.ring, 't')
    gens = [t * f.embed(extended) for f in left.gens]
    gens += [(1 - t) * g.embed(extended) for g in right.gens]
    return eliminate(PolyIdeal(extended, gens), [name])


def intersect_all(ideals: Sequence[PolyIdeal]) -> PolyIdeal:
    if not ideals:
        raise InvalidArgumentError("intersection of no ideals")
    result = ideals[0]
    for ideal in ideals[1:]:
        result = intersect(result, ideal)
    return result


def quotient_by_poly(ideal: PolyIdeal, f: Polynomial) -> PolyIdeal:
    """(I : f), from I cap (f) divided through by f."""
    _check_same_ring(ideal.ring, f.ring)
    if not f:
        raise ZeroPolynomialError("cannot take the ideal quotient by zero")
    meet = intersect(ideal, PolyIdeal.principal(f))
    return PolyIdeal(ideal.ring, [g.exact_divide(f) for g in meet.gens])


def saturate_by_poly(ideal: PolyIdeal, f: Polynomial) -> PolyIdeal:
    """(I : f^inf) = (I + (w*f - 1)) cap Q[ring]."""
    _check_same_ring(ideal.ring, f.ring)
    if not f:
        raise ZeroPolynomialError("cannot saturate by zero")
    if f.is_constant:
        return PolyIdeal(ideal.ring, ideal.gens)
    extended, w, name = _with_fresh_variable(ideal.ring, 'w')
    gens = [g.embed(extended) for g in ideal.gens] + [w * f.embed(extended) - 1]
    return eliminate(PolyIdeal(extended, gens), [name])


def radical_member(f: Polynomial, ideal: PolyIdeal) -> bool:
    """f lies in rad(I) iff 1 lies in I + (w*f - 1)."""
    _check_same_ring(f.ring, ideal.ring)
    extended, w, _name = _with_fresh_variable(ideal.ring, 'w')
    gens = [g.embed(extended) for g in ideal.gens] + [w * f.embed(extended) - 1]
    return PolyIdeal(extended, gens).is_unit()


def specialize(ideal: PolyIdeal, assignments: Mapping[str, Scalar]) -> PolyIdeal:
    """Substitute rational values and drop the assigned variables from the ring."""
    for name in assignments:
        ideal.ring.index(name)
    if not assignments:
        return PolyIdeal(ideal.ring, ideal.gens)
    smaller = ideal.ring.without(assignments)
    return PolyIdeal(smaller, [g.substitute(assignments).restrict(smaller) for g in ideal.gens])


# ============================================================================
# TANGENT SPACE
# ============================================================================

def jacobian_matrix(polys: Sequence[Polynomial], ring: VarSet) -> List[List[Polynomial]]:
    return [[f.diff(name) for name in ring.names] for f in polys]


def zariski_tangent_dim(ideal: PolyIdeal, point: Union[PointQ, Sequence[Scalar]]) -> int:
    """Dimension of the Zariski tangent space of V(I) at a rational point."""
    if not isinstance(point, PointQ):
        point = PointQ(ideal.ring, tuple(point))
    _check_same_ring(ideal.ring, point.ring)
    for g in ideal.gens:
        value = g.evaluate(point.coordinates)
        if value:
            raise NotOnVarietyError(f"{g} takes the value {value} at {point}")
    if not ideal.gens:
        return len(ideal.ring)
    rows = [
        [sympy.Rational(v.numerator, v.denominator) for v in (d.evaluate(point.coordinates) for d in row)]
        for row in jacobian_matrix(ideal.gens, ideal.ring)
    ]
    rank = sympy.Matrix(rows).rank()
    logger.debug(f"zariski_tangent_dim at {point}: jacobian rank {rank} in {len(ideal.ring)} variables")
    return len(ideal.ring) - rank
