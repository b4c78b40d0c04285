"""
Curve classes modulo linear relations.

A CycleGroup is the free abelian group on named classes divided by the row
lattice of its relations. Canonical forms come from the Hermite normal form
of that lattice, so two cycles are equivalent iff they reduce to the same
vector.
"""

import logging
import re
from bisect import bisect_left
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from django.conf import settings
from django.db import models
from django.utils.translation import gettext_lazy as _

from .exceptions import (
    DimensionMismatchError,
    InvalidArgumentError,
    LimitExceededError,
    UnknownVariableError,
)

logger = logging.getLogger(__name__)

DEFAULT_SCENARIO_DIR = Path(__file__).resolve().parent / 'data' / 'cycles'
SEARCH_CHUNK = 1 << 16
DEFAULT_MAX_SEARCH_CANDIDATES = 10_000_000
INT64_SAFE = 1 << 62


# ============================================================================
# INTEGER LATTICE
# ============================================================================

def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    # x*a + y*b == g
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


class _RowLattice:
    """Echelon basis of an integer row lattice, brought to Hermite normal form."""

    __slots__ = ('n', 'basis', 'pivots')

    def __init__(self, n: int):
        self.n = n
        self.basis: List[List[int]] = []
        self.pivots: List[int] = []

    def add_vector(self, vector: Sequence[int]) -> None:
        vec = list(vector)
        basis, pivots = self.basis, self.pivots
        for j in range(self.n):
            if not vec[j]:
                continue
            where = bisect_left(pivots, j)
            if where == len(pivots) or pivots[where] != j:
                basis.insert(where, vec)
                pivots.insert(where, j)
                return
            row = basis[where]
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                for jj in range(j, self.n):
                    vec[jj] -= q * row[jj]
            else:
                x, y, g = _xgcd(a, b)
                ag, mbg = a // g, -b // g
                for jj in range(j, self.n):
                    aa, bb = row[jj], vec[jj]
                    row[jj] = x * aa + y * bb
                    vec[jj] = mbg * aa + ag * bb

    def normalize(self) -> None:
        """Positive pivots, entries above each pivot reduced into [0, pivot)."""
        basis, pivots = self.basis, self.pivots
        for row, p in zip(basis, pivots):
            if row[p] < 0:
                row[:] = [-a for a in row]
        for k, p in enumerate(pivots):
            for i in range(k):
                q = basis[i][p] // basis[k][p]
                if q:
                    basis[i] = [a - q * b for a, b in zip(basis[i], basis[k])]

    def reduce(self, vector: Sequence[int]) -> Tuple[int, ...]:
        vec = list(vector)
        for row, p in zip(self.basis, self.pivots):
            q = vec[p] // row[p]
            if q:
                vec = [a - q * b for a, b in zip(vec, row)]
        return tuple(vec)


# ============================================================================
# CYCLES
# ============================================================================

@dataclass(frozen=True)
class Cycle:
    """Integer combination of classes, positionally matched to a group's class names."""

    coefficients: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coefficients', tuple(int(c) for c in self.coefficients))

    @classmethod
    def zero(cls, n: int) -> 'Cycle':
        return cls((0,) * n)

    def _check(self, other: 'Cycle') -> None:
        if len(self.coefficients) != len(other.coefficients):
            raise DimensionMismatchError(
                f"cycles of length {len(self.coefficients)} and {len(other.coefficients)}"
            )

    def __add__(self, other: 'Cycle') -> 'Cycle':
        self._check(other)
        return Cycle(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: 'Cycle') -> 'Cycle':
        self._check(other)
        return Cycle(tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> 'Cycle':
        return Cycle(tuple(-a for a in self.coefficients))

    def __mul__(self, k: int) -> 'Cycle':
        return Cycle(tuple(k * a for a in self.coefficients))

    __rmul__ = __mul__

    def __len__(self) -> int:
        return len(self.coefficients)

    @property
    def is_zero_vector(self) -> bool:
        return not any(self.coefficients)

    @property
    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coefficients) and any(self.coefficients)


_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z][\w']*)|(?P<op>[+\-*]))")


@dataclass(frozen=True)
class CycleGroup:
    """
    Named classes modulo integer relations.

    Each relation row sums to zero in the quotient. aliases maps alternative
    spellings of a class to its canonical name.
    """

    class_names: Tuple[str, ...]
    relations: Tuple[Tuple[int, ...], ...] = ()
    aliases: Mapping[str, str] = field(default_factory=dict, hash=False, compare=False)
    _lattice: _RowLattice = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.class_names)
        if len(set(names)) != len(names):
            raise InvalidArgumentError(f"class names must be distinct: {names}")
        relations = tuple(tuple(int(a) for a in row) for row in self.relations)
        for row in relations:
            if len(row) != len(names):
                raise DimensionMismatchError(f"relation {row} has {len(row)} entries, expected {len(names)}")
        for alias, target in self.aliases.items():
            if target not in names:
                raise UnknownVariableError(target)
        lattice = _RowLattice(len(names))
        for row in relations:
            lattice.add_vector(row)
        lattice.normalize()
        object.__setattr__(self, 'class_names', names)
        object.__setattr__(self, 'relations', relations)
        object.__setattr__(self, 'aliases', dict(self.aliases))
        object.__setattr__(self, '_lattice', lattice)

    @property
    def rank(self) -> int:
        return len(self._lattice.basis)

    def hermite_basis(self) -> List[Tuple[int, ...]]:
        return [tuple(row) for row in self._lattice.basis]

    def index(self, name: str) -> int:
        name = self.aliases.get(name, name)
        try:
            return self.class_names.index(name)
        except ValueError:
            raise UnknownVariableError(name) from None

    def zero(self) -> Cycle:
        return Cycle.zero(len(self.class_names))

    def cycle(self, terms: Mapping[str, int]) -> Cycle:
        coefficients = [0] * len(self.class_names)
        for name, k in terms.items():
            coefficients[self.index(name)] += k
        return Cycle(tuple(coefficients))

    def parse_cycle(self, text: str) -> Cycle:
        """Parse a linear combination such as "L1' + 2 L23 - L13" (or "0")."""
        return Cycle(tuple(self._parse_combination(text)))

    def _parse_combination(self, text: str) -> List[int]:
        coefficients = [0] * len(self.class_names)
        text = text.strip()
        if text == '0':
            return coefficients
        sign, number, expecting_term = 1, None, True
        pos = 0
        while pos < len(text):
            match = _TOKEN.match(text, pos)
            if not match or match.end() == pos:
                raise InvalidArgumentError(f"cannot parse cycle {text!r} at column {pos}")
            pos = match.end()
            if match.group('op') in ('+', '-'):
                if not expecting_term and number is None:
                    sign = 1 if match.group('op') == '+' else -1
                    expecting_term = True
                elif expecting_term and number is None and match.group('op') == '-':
                    sign = -sign
                else:
                    raise InvalidArgumentError(f"misplaced {match.group('op')!r} in {text!r}")
            elif match.group('op') == '*':
                if number is None:
                    raise InvalidArgumentError(f"'*' without a coefficient in {text!r}")
            elif match.group('number') is not None:
                if not expecting_term or number is not None:
                    raise InvalidArgumentError(f"misplaced coefficient in {text!r}")
                number = int(match.group('number'))
            else:
                if not expecting_term:
                    raise InvalidArgumentError(f"missing '+' before {match.group('name')!r} in {text!r}")
                coefficients[self.index(match.group('name'))] += sign * (1 if number is None else number)
                sign, number, expecting_term = 1, None, False
        if expecting_term:
            raise InvalidArgumentError(f"incomplete cycle {text!r}")
        return coefficients

    def format(self, cycle: Cycle) -> str:
        self._check(cycle)
        pieces = []
        for name, k in zip(self.class_names, cycle.coefficients):
            if not k:
                continue
            body = name if abs(k) == 1 else f"{abs(k)} {name}"
            if not pieces:
                pieces.append(f"-{body}" if k < 0 else body)
            else:
                pieces.append(f" - {body}" if k < 0 else f" + {body}")
        return ''.join(pieces) if pieces else '0'

    def _check(self, cycle: Cycle) -> None:
        if len(cycle) != len(self.class_names):
            raise DimensionMismatchError(
                f"cycle has {len(cycle)} coefficients, group has {len(self.class_names)} classes"
            )


# ============================================================================
# OPERATIONS
# ============================================================================

def reduce(group: CycleGroup, cycle: Cycle) -> Cycle:
    """Canonical representative of the cycle modulo the relations."""
    group._check(cycle)
    return Cycle(group._lattice.reduce(cycle.coefficients))


def is_zero(group: CycleGroup, cycle: Cycle) -> bool:
    return reduce(group, cycle).is_zero_vector


def max_search_candidates() -> int:
    return int(getattr(settings, 'VERIFIER', {}).get('MAX_SEARCH_CANDIDATES', DEFAULT_MAX_SEARCH_CANDIDATES))


def search_size(group: CycleGroup, bound: int) -> int:
    """Number of nonzero candidates search_effective_zero enumerates."""
    return (bound + 1) ** len(group.class_names) - 1


def check_search_limits(group: CycleGroup, bound: int) -> None:
    """
    Raises:
        LimitExceededError: the candidate count is over MAX_SEARCH_CANDIDATES,
            or the reduction could leave the int64 range
    """
    size = search_size(group, bound)
    limit = max_search_candidates()
    if size > limit:
        raise LimitExceededError(
            f"effective-zero search over {len(group.class_names)} classes at bound {bound}", size, limit
        )
    # each reduction step multiplies the largest residue entry by at most (1 + largest lattice entry)
    largest = max((abs(a) for row in group._lattice.basis for a in row), default=0)
    growth = bound * (1 + largest) ** group.rank
    if growth >= INT64_SAFE or size >= INT64_SAFE:
        raise LimitExceededError("int64 range of the effective-zero search", growth, INT64_SAFE - 1)


def search_effective_zero(group: CycleGroup, bound: int) -> Optional[Cycle]:
    """
    First nonzero vector of [0, bound]^n, in lexicographic order, that vanishes
    in the quotient; None when there is none.

    Raises:
        LimitExceededError: see check_search_limits
    """
    if not isinstance(bound, int) or bound < 1:
        raise InvalidArgumentError(f"search bound must be a positive integer, got {bound!r}")
    n = len(group.class_names)
    if not group.rank or not n:
        return None
    check_search_limits(group, bound)

    base = bound + 1
    total = base ** n
    weights = np.array([base ** (n - 1 - j) for j in range(n)], dtype=np.int64)
    basis = [np.array(row, dtype=np.int64) for row in group._lattice.basis]
    pivots = group._lattice.pivots
    # index 0 is the zero vector
    for start in range(1, total, SEARCH_CHUNK):
        stop = min(start + SEARCH_CHUNK, total)
        candidates = (np.arange(start, stop, dtype=np.int64)[:, None] // weights) % base
        residue = candidates.copy()
        for row, p in zip(basis, pivots):
            residue -= np.floor_divide(residue[:, p], row[p])[:, None] * row
        hits = np.flatnonzero(~residue.any(axis=1))
        if hits.size:
            found = Cycle(tuple(int(c) for c in candidates[hits[0]]))
            logger.debug(f"search_effective_zero: found {group.format(found)} after {start + int(hits[0])} candidates")
            return found
    logger.debug(f"search_effective_zero: no effective zero among {total - 1} candidates (bound {bound})")
    return None


# ============================================================================
# SCENARIO FILES
# ============================================================================

class Expectation(models.TextChoices):
    EFFECTIVE_ZERO = 'effective-zero', _('An effective cycle is homologous to zero')
    NONE = 'none', _('No effective cycle is homologous to zero')


@dataclass(frozen=True)
class Scenario:
    name: str
    group: CycleGroup
    certificate: Optional[Cycle] = None
    expect: Optional[str] = None
    source: str = ''


def parse_scenario(text: str, name: str = '') -> Scenario:
    """
    Read a scenario definition.

    Lines are `key: value` directives (name, classes, alias, certificate,
    expect) or relation chains "A = B + C = D"; '#' starts a comment.
    """
    class_names: Optional[Tuple[str, ...]] = None
    aliases: Dict[str, str] = {}
    chains: List[Tuple[int, str]] = []
    certificate_text = expect = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(':')
        key = key.strip().lower()
        if sep and key in ('name', 'classes', 'alias', 'certificate', 'expect'):
            value = value.strip()
            if key == 'name':
                name = value
            elif key == 'classes':
                class_names = tuple(n.strip() for n in value.split(',') if n.strip())
            elif key == 'alias':
                alias, arrow, target = value.partition('->')
                if not arrow:
                    raise InvalidArgumentError(f"line {lineno}: alias needs 'name -> class'")
                aliases[alias.strip()] = target.strip()
            elif key == 'certificate':
                certificate_text = value
            else:
                expect = Expectation(value).value if value in Expectation.values else None
                if expect is None:
                    raise InvalidArgumentError(f"line {lineno}: expect must be one of {Expectation.values}")
        elif '=' in line:
            chains.append((lineno, line))
        else:
            raise InvalidArgumentError(f"line {lineno}: cannot read {line!r}")

    if class_names is None:
        raise InvalidArgumentError("scenario has no 'classes:' line")
    naming = CycleGroup(class_names, (), aliases)
    relations = []
    for lineno, line in chains:
        sides = [side.strip() for side in line.split('=')]
        if any(not side for side in sides):
            raise InvalidArgumentError(f"line {lineno}: empty side in {line!r}")
        vectors = [naming._parse_combination(side) for side in sides]
        for left, right in zip(vectors, vectors[1:]):
            relations.append(tuple(a - b for a, b in zip(left, right)))

    group = CycleGroup(class_names, tuple(relations), aliases)
    certificate = group.parse_cycle(certificate_text) if certificate_text else None
    return Scenario(name=name, group=group, certificate=certificate, expect=expect, source=text)


def scenario_dir() -> Path:
    return Path(getattr(settings, 'VERIFIER', {}).get('SCENARIO_DIR', DEFAULT_SCENARIO_DIR))


def available_scenarios() -> List[str]:
    return sorted(path.stem for path in scenario_dir().glob('*.txt'))


def load_scenario(name_or_path: str) -> Scenario:
    """Load a shipped scenario by name, or any scenario file by path."""
    path = Path(name_or_path)
    if not path.is_file():
        path = scenario_dir() / f"{name_or_path}.txt"
    if not path.is_file():
        raise InvalidArgumentError(
            f"unknown scenario {name_or_path!r}; available: {', '.join(available_scenarios())}"
        )
    scenario = parse_scenario(path.read_text(encoding='utf-8'), name=path.stem)
    logger.debug(f"load_scenario: {path} ({len(scenario.group.class_names)} classes, rank {scenario.group.rank})")
    return scenario
