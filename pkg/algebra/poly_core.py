"""
Exact multivariate polynomial arithmetic over the rationals.

Coefficients are fractions.Fraction over Python integers, so every result is
exact. A polynomial is a sparse map from exponent tuples to nonzero
coefficients, always tied to the VarSet it was built over.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

import sympy
from django.db import models
from django.utils.translation import gettext_lazy as _

from .exceptions import (
    InvalidArgumentError,
    RingMismatchError,
    UnknownVariableError,
    ZeroPolynomialError,
)

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


# ============================================================================
# VARIABLES AND MONOMIALS
# ============================================================================

@dataclass(frozen=True)
class VarSet:
    """Ordered sequence of distinct variable names; the ring Q[names]."""

    names: Tuple[str, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise InvalidArgumentError(f"variable names must be distinct: {names}")
        for name in names:
            if not isinstance(name, str) or not name:
                raise InvalidArgumentError(f"invalid variable name: {name!r}")
        object.__setattr__(self, 'names', names)
        object.__setattr__(self, '_index', {name: i for i, name in enumerate(names)})

    @classmethod
    def of(cls, *names: str) -> 'VarSet':
        """Build a VarSet from names or from one comma separated string."""
        if len(names) == 1 and ',' in names[0]:
            names = tuple(n.strip() for n in names[0].split(',') if n.strip())
        return cls(tuple(names))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self._index

    def __str__(self) -> str:
        return f"Q[{', '.join(self.names)}]"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(name, self) from None

    def prepend(self, names: Sequence[str]) -> 'VarSet':
        return VarSet(tuple(names) + self.names)

    def extend(self, names: Sequence[str]) -> 'VarSet':
        return VarSet(self.names + tuple(names))

    def without(self, names: Iterable[str]) -> 'VarSet':
        dropped = set(names)
        for name in dropped:
            self.index(name)
        return VarSet(tuple(n for n in self.names if n not in dropped))

    def fresh_name(self, base: str) -> str:
        """A variable name not yet used in this ring."""
        candidate, suffix = base, 0
        while candidate in self._index:
            suffix += 1
            candidate = f"{base}_{suffix}"
        return candidate

    def gens(self) -> Tuple['Polynomial', ...]:
        return tuple(Polynomial.variable(self, name) for name in self.names)

    def symbols(self) -> Tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(name) for name in self.names)


def _check_same_ring(left: VarSet, right: VarSet) -> None:
    if left != right:
        raise RingMismatchError(left, right)


@dataclass(frozen=True)
class Monomial:
    """A power product x^e over a VarSet."""

    ring: VarSet
    exponents: Exponents

    def __post_init__(self):
        exponents = tuple(int(e) for e in self.exponents)
        if len(exponents) != len(self.ring):
            raise InvalidArgumentError(
                f"monomial has {len(exponents)} exponents, ring {self.ring} needs {len(self.ring)}"
            )
        if any(e < 0 for e in exponents):
            raise InvalidArgumentError(f"negative exponent in {exponents}")
        object.__setattr__(self, 'exponents', exponents)

    @classmethod
    def one(cls, ring: VarSet) -> 'Monomial':
        return cls(ring, (0,) * len(ring))

    @classmethod
    def variable(cls, ring: VarSet, name: str, power: int = 1) -> 'Monomial':
        exponents = [0] * len(ring)
        exponents[ring.index(name)] = power
        return cls(ring, tuple(exponents))

    @classmethod
    def from_powers(cls, ring: VarSet, **powers: int) -> 'Monomial':
        exponents = [0] * len(ring)
        for name, power in powers.items():
            exponents[ring.index(name)] = power
        return cls(ring, tuple(exponents))

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def is_one(self) -> bool:
        return not any(self.exponents)

    def support(self) -> Tuple[str, ...]:
        return tuple(name for name, e in zip(self.ring.names, self.exponents) if e)

    def __mul__(self, other: 'Monomial') -> 'Monomial':
        _check_same_ring(self.ring, other.ring)
        return Monomial(self.ring, tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __pow__(self, n: int) -> 'Monomial':
        return Monomial(self.ring, tuple(e * n for e in self.exponents))

    def __truediv__(self, other: 'Monomial') -> 'Monomial':
        if not mono_divides(other, self):
            raise InvalidArgumentError(f"{other} does not divide {self}")
        return Monomial(self.ring, tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def divides(self, other: 'Monomial') -> bool:
        return mono_divides(self, other)

    def lcm(self, other: 'Monomial') -> 'Monomial':
        return mono_lcm(self, other)

    def gcd(self, other: 'Monomial') -> 'Monomial':
        _check_same_ring(self.ring, other.ring)
        return Monomial(self.ring, tuple(min(a, b) for a, b in zip(self.exponents, other.exponents)))

    def to_polynomial(self, coefficient: Scalar = 1) -> 'Polynomial':
        return Polynomial(self.ring, {self.exponents: coefficient})

    def format(self, separator: str = '*') -> str:
        """Render as x1^2*x2; dotted form with separator='.'."""
        factors = []
        for name, e in zip(self.ring.names, self.exponents):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        return separator.join(factors) if factors else '1'

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"<Monomial: {self.format()}>"


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True iff every exponent of a is at most the matching exponent of b."""
    _check_same_ring(a.ring, b.ring)
    return all(x <= y for x, y in zip(a.exponents, b.exponents))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    _check_same_ring(a.ring, b.ring)
    return Monomial(a.ring, tuple(max(x, y) for x, y in zip(a.exponents, b.exponents)))


# ============================================================================
# MONOMIAL ORDERS
# ============================================================================

def _grevlex_key(exponents: Exponents) -> tuple:
    # larger key = larger monomial; ties broken by the smallest last exponent
    return (sum(exponents), tuple(-e for e in reversed(exponents)))


@dataclass(frozen=True)
class MonomialOrder:
    """
    A multiplicative well-order on monomials.

    BLOCK compares the first block_size variables lexicographically and breaks
    ties with grevlex on the rest, which makes it an elimination order for the
    first block.
    """

    class Kind(models.TextChoices):
        LEX = 'lex', _('Lexicographic')
        GREVLEX = 'grevlex', _('Graded reverse lexicographic')
        BLOCK = 'block', _('Block elimination (lex, then grevlex)')

    kind: str = Kind.GREVLEX
    block_size: int = 0

    def __post_init__(self):
        kind = MonomialOrder.Kind(self.kind)
        object.__setattr__(self, 'kind', kind)
        if kind == MonomialOrder.Kind.BLOCK and self.block_size < 1:
            raise InvalidArgumentError("block order needs block_size >= 1")
        if kind != MonomialOrder.Kind.BLOCK and self.block_size:
            raise InvalidArgumentError(f"{kind.value} order takes no block_size")

    @classmethod
    def lex(cls) -> 'MonomialOrder':
        return cls(cls.Kind.LEX)

    @classmethod
    def grevlex(cls) -> 'MonomialOrder':
        return cls(cls.Kind.GREVLEX)

    @classmethod
    def block(cls, size: int) -> 'MonomialOrder':
        return cls(cls.Kind.BLOCK, size)

    @classmethod
    def from_name(cls, name: str) -> 'MonomialOrder':
        if name == cls.Kind.LEX:
            return cls.lex()
        if name == cls.Kind.GREVLEX:
            return cls.grevlex()
        raise InvalidArgumentError(f"unknown monomial order {name!r}")

    def key(self, exponents: Exponents) -> tuple:
        if self.kind == MonomialOrder.Kind.LEX:
            return exponents
        if self.kind == MonomialOrder.Kind.GREVLEX:
            return _grevlex_key(exponents)
        k = self.block_size
        return (exponents[:k], _grevlex_key(exponents[k:]))

    def __str__(self) -> str:
        if self.kind == MonomialOrder.Kind.BLOCK:
            return f"block({self.block_size})"
        return self.kind.value


GREVLEX = MonomialOrder.grevlex()
LEX = MonomialOrder.lex()


# ============================================================================
# POLYNOMIALS
# ============================================================================

def _format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Polynomial:
    """
    Immutable sparse polynomial with exact rational coefficients.

    Terms live in a dictionary keyed by exponent tuples. The descending
    arrangement of the keys is computed once per monomial order and cached,
    so sorted_terms and leading_term under a fixed order cost one sort per
    polynomial.
    """

    __slots__ = ('ring', '_terms', '_hash', '_ordered')

    def __init__(self, ring: VarSet, terms: Mapping = None):
        clean: Dict[Exponents, Fraction] = {}
        for key, coefficient in (terms or {}).items():
            if isinstance(key, Monomial):
                _check_same_ring(ring, key.ring)
                exponents = key.exponents
            else:
                exponents = Monomial(ring, key).exponents
            value = clean.get(exponents, Fraction(0)) + Fraction(coefficient)
            if value:
                clean[exponents] = value
            else:
                clean.pop(exponents, None)
        self.ring = ring
        self._terms = clean
        self._hash = None
        self._ordered = {}

    @classmethod
    def _from_terms(cls, ring: VarSet, terms: Dict[Exponents, Fraction]) -> 'Polynomial':
        poly = cls.__new__(cls)
        poly.ring = ring
        poly._terms = {e: c for e, c in terms.items() if c}
        poly._hash = None
        poly._ordered = {}
        return poly

    @classmethod
    def zero(cls, ring: VarSet) -> 'Polynomial':
        return cls._from_terms(ring, {})

    @classmethod
    def constant(cls, ring: VarSet, value: Scalar) -> 'Polynomial':
        return cls._from_terms(ring, {(0,) * len(ring): Fraction(value)})

    @classmethod
    def variable(cls, ring: VarSet, name: str) -> 'Polynomial':
        return Monomial.variable(ring, name).to_polynomial()

    # ------------------------------------------------------------------
    # inspection
    # ------------------------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return {Monomial(self.ring, e): c for e, c in self._terms.items()}

    def term_items(self) -> Iterator[Tuple[Exponents, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    @property
    def constant_value(self) -> Fraction:
        return self._terms.get((0,) * len(self.ring), Fraction(0))

    @property
    def is_monomial(self) -> bool:
        """A single term with coefficient 1."""
        return len(self._terms) == 1 and next(iter(self._terms.values())) == 1

    def as_monomial(self) -> Monomial:
        if not self.is_monomial:
            raise InvalidArgumentError(f"{self} is not a monomial")
        return Monomial(self.ring, next(iter(self._terms)))

    @property
    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def support(self) -> Tuple[str, ...]:
        used = [False] * len(self.ring)
        for exponents in self._terms:
            for i, e in enumerate(exponents):
                if e:
                    used[i] = True
        return tuple(name for name, flag in zip(self.ring.names, used) if flag)

    def ordered_exponents(self, order: MonomialOrder = GREVLEX) -> Tuple[Exponents, ...]:
        """Exponent tuples of the terms, descending in the given order."""
        keys = self._ordered.get(order)
        if keys is None:
            keys = tuple(sorted(self._terms, key=order.key, reverse=True))
            self._ordered[order] = keys
        return keys

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> List[Tuple[Monomial, Fraction]]:
        """Terms in descending order."""
        return [(Monomial(self.ring, e), self._terms[e]) for e in self.ordered_exponents(order)]

    def leading_exponents(self, order: MonomialOrder) -> Exponents:
        if not self._terms:
            raise ZeroPolynomialError("the zero polynomial has no leading term")
        return self.ordered_exponents(order)[0]

    def leading_term(self, order: MonomialOrder) -> Tuple[Monomial, Fraction]:
        exponents = self.leading_exponents(order)
        return Monomial(self.ring, exponents), self._terms[exponents]

    def monic(self, order: MonomialOrder) -> 'Polynomial':
        _, lc = self.leading_term(order)
        if lc == 1:
            return self
        return Polynomial._from_terms(self.ring, {e: c / lc for e, c in self._terms.items()})

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def _coerce(self, other) -> 'Polynomial':
        if isinstance(other, Polynomial):
            _check_same_ring(self.ring, other.ring)
            return other
        if isinstance(other, Monomial):
            _check_same_ring(self.ring, other.ring)
            return other.to_polynomial()
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.ring, other)
        return NotImplemented

    def __add__(self, other) -> 'Polynomial':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            value = terms.get(e, 0) + c
            if value:
                terms[e] = value
            else:
                terms.pop(e, None)
        return Polynomial._from_terms(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> 'Polynomial':
        return Polynomial._from_terms(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> 'Polynomial':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> 'Polynomial':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def mul_term(self, exponents: Exponents, coefficient: Scalar = 1) -> 'Polynomial':
        coefficient = Fraction(coefficient)
        if not coefficient:
            return Polynomial.zero(self.ring)
        return Polynomial._from_terms(self.ring, {
            tuple(a + b for a, b in zip(e, exponents)): c * coefficient
            for e, c in self._terms.items()
        })

    def __mul__(self, other) -> 'Polynomial':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                value = terms.get(e, 0) + c1 * c2
                if value:
                    terms[e] = value
                else:
                    terms.pop(e, None)
        return Polynomial._from_terms(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> 'Polynomial':
        if not isinstance(n, int) or n < 0:
            raise InvalidArgumentError(f"polynomial exponent must be a nonnegative integer, got {n!r}")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_divide(self, divisor: 'Polynomial', order: MonomialOrder = GREVLEX) -> 'Polynomial':
        """Quotient self / divisor; raises unless the division is exact."""
        (quotient,), remainder = divide(self, [divisor], order)
        if remainder:
            raise InvalidArgumentError(f"{divisor} does not divide {self}")
        return quotient

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # ------------------------------------------------------------------
    # calculus and evaluation
    # ------------------------------------------------------------------

    def diff(self, name: str) -> 'Polynomial':
        i = self.ring.index(name)
        terms = {}
        for e, c in self._terms.items():
            if e[i]:
                shifted = e[:i] + (e[i] - 1,) + e[i + 1:]
                terms[shifted] = c * e[i]
        return Polynomial._from_terms(self.ring, terms)

    def evaluate(self, point) -> Fraction:
        """Value at a point given as a sequence (ring order) or a name -> value mapping."""
        if isinstance(point, Mapping):
            values = [Fraction(point[name]) for name in self.ring.names]
        else:
            values = [Fraction(v) for v in point]
            if len(values) != len(self.ring):
                raise InvalidArgumentError(
                    f"point has {len(values)} coordinates, ring {self.ring} needs {len(self.ring)}"
                )
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for value, power in zip(values, e):
                if power:
                    term *= value ** power
            total += term
        return total

    def substitute(self, assignments: Mapping[str, Scalar]) -> 'Polynomial':
        """Replace the named variables by rational values; the ring is unchanged."""
        positions = {self.ring.index(name): Fraction(value) for name, value in assignments.items()}
        terms: Dict[Exponents, Fraction] = {}
        for e, c in self._terms.items():
            value = c
            reduced = list(e)
            for i, v in positions.items():
                if e[i]:
                    value *= v ** e[i]
                    reduced[i] = 0
            key = tuple(reduced)
            terms[key] = terms.get(key, 0) + value
        return Polynomial._from_terms(self.ring, terms)

    def embed(self, ring: VarSet) -> 'Polynomial':
        """The same polynomial viewed in a ring that contains every variable of ours."""
        if ring == self.ring:
            return self
        positions = [ring.index(name) for name in self.ring.names]
        terms = {}
        for e, c in self._terms.items():
            target = [0] * len(ring)
            for i, power in zip(positions, e):
                target[i] = power
            terms[tuple(target)] = c
        return Polynomial._from_terms(ring, terms)

    def restrict(self, ring: VarSet) -> 'Polynomial':
        """Move into a ring missing some variables; those variables must not occur."""
        if ring == self.ring:
            return self
        missing = [i for i, name in enumerate(self.ring.names) if name not in ring]
        for e in self._terms:
            if any(e[i] for i in missing):
                raise InvalidArgumentError(f"{self} involves variables outside {ring}")
        positions = [self.ring.index(name) for name in ring.names]
        return Polynomial._from_terms(ring, {
            tuple(e[i] for i in positions): c for e, c in self._terms.items()
        })

    # ------------------------------------------------------------------
    # sympy bridge
    # ------------------------------------------------------------------

    def to_sympy(self) -> sympy.Expr:
        symbols = self.ring.symbols()
        return sympy.Add(*[
            sympy.Rational(c.numerator, c.denominator)
            * sympy.Mul(*[s ** p for s, p in zip(symbols, e) if p])
            for e, c in self._terms.items()
        ])

    @classmethod
    def from_sympy(cls, expr, ring: VarSet) -> 'Polynomial':
        expr = sympy.expand(sympy.sympify(expr))
        if not len(ring):
            value = sympy.Rational(expr)
            return cls.constant(ring, Fraction(int(value.p), int(value.q)))
        poly = sympy.Poly(expr, *ring.symbols())
        terms = {}
        for exponents, coefficient in poly.terms():
            value = sympy.Rational(coefficient)
            terms[tuple(exponents)] = Fraction(int(value.p), int(value.q))
        return cls(ring, terms)

    # ------------------------------------------------------------------
    # display
    # ------------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return '0'
        pieces = []
        for monomial, c in self.sorted_terms(GREVLEX):
            magnitude = abs(c)
            if monomial.is_one:
                body = _format_coefficient(magnitude)
            elif magnitude == 1:
                body = monomial.format()
            else:
                body = f"{_format_coefficient(magnitude)}*{monomial.format()}"
            if not pieces:
                pieces.append(f"-{body}" if c < 0 else body)
            else:
                pieces.append(f" - {body}" if c < 0 else f" + {body}")
        return ''.join(pieces)

    def __repr__(self) -> str:
        return f"<Polynomial: {self}>"


# ============================================================================
# DIVISION
# ============================================================================

def leading_term(f: Polynomial, order: MonomialOrder) -> Tuple[Monomial, Fraction]:
    return f.leading_term(order)


def divide(
    f: Polynomial,
    divisors: Sequence[Polynomial],
    order: MonomialOrder,
) -> Tuple[List[Polynomial], Polynomial]:
    """
    Multivariate division with remainder.

    Returns quotients q and remainder r with f = sum(q[i] * divisors[i]) + r and
    no term of r divisible by a leading monomial of the divisors. When several
    divisors apply, the earliest in the sequence wins.
    """
    leads = []
    for g in divisors:
        _check_same_ring(f.ring, g.ring)
        exponents = g.leading_exponents(order)
        leads.append((exponents, g._terms[exponents], g._terms))

    key = order.key
    pending = dict(f._terms)
    remainder: Dict[Exponents, Fraction] = {}
    quotients: List[Dict[Exponents, Fraction]] = [{} for _ in divisors]
    while pending:
        lm = max(pending, key=key)
        c = pending[lm]
        for index, (glm, glc, gterms) in enumerate(leads):
            if all(a >= b for a, b in zip(lm, glm)):
                shift = tuple(a - b for a, b in zip(lm, glm))
                factor = c / glc
                quotient = quotients[index]
                quotient[shift] = quotient.get(shift, 0) + factor
                for e, gc in gterms.items():
                    target = tuple(a + b for a, b in zip(e, shift))
                    value = pending.get(target, 0) - factor * gc
                    if value:
                        pending[target] = value
                    else:
                        pending.pop(target, None)
                break
        else:
            remainder[lm] = c
            del pending[lm]
    return (
        [Polynomial._from_terms(f.ring, q) for q in quotients],
        Polynomial._from_terms(f.ring, remainder),
    )


def normal_form(f: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    return divide(f, divisors, order)[1]
