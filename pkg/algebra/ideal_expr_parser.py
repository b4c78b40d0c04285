"""
Textual ideal expressions.

Grammar (whitespace is insignificant):

    expr    ::= chain (':' poly)*
    chain   ::= product (('&' | '∩' | '+') product)*
    product ::= power (('*' | '.') power)*
    power   ::= atom ('^' INT)?
    atom    ::= '(' poly (',' poly)* ')' | 'sat' '(' expr ',' VAR ')' | '[' expr ']'

    poly    ::= term (('+' | '-') term)*
    term    ::= unary (('*' | '.') unary)*
    unary   ::= '-' unary | factor
    factor  ::= primary ('^' INT)?
    primary ::= INT | VAR | '(' poly ')'

'&' and '∩' are intersection, '+' between ideals is the ideal sum, ':' is
the quotient by a polynomial. Chains of one operator collapse into a single
n-ary node; a chain that switches operator nests to the left. Square brackets
group ideal expressions. Juxtaposition ("x1 x2") is a syntax error.
"""

import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, List, NamedTuple, Optional, Set, Tuple, Union

from django.conf import settings
from django.db import models
from django.utils.translation import gettext_lazy as _

from . import groebner
from . import monomial_ideal as mi
from .exceptions import InvalidArgumentError, ParseError
from .monomial_ideal import CombineOp, MonomialIdeal
from .poly_core import Polynomial, VarSet, _check_same_ring
from .groebner import PolyIdeal

logger = logging.getLogger(__name__)

DEFAULT_MAX_EXPONENT = 64
DEFAULT_MAX_TERMS = 2000
DEFAULT_MAX_GENERATORS = 2000
MAX_DEPTH = 100
MAX_INT_DIGITS = 1000

_SYMBOLS = set('()[],+-*.^&:') | {'∩'}


def _verifier_limit(key: str, default: int) -> int:
    return int(getattr(settings, 'VERIFIER', {}).get(key, default))


def max_exponent() -> int:
    return _verifier_limit('MAX_PARSE_EXPONENT', DEFAULT_MAX_EXPONENT)


def max_terms() -> int:
    return _verifier_limit('MAX_PARSE_TERMS', DEFAULT_MAX_TERMS)


def max_generators() -> int:
    return _verifier_limit('MAX_PARSE_GENERATORS', DEFAULT_MAX_GENERATORS)


# ============================================================================
# AST
# ============================================================================

@dataclass(frozen=True)
class IdealLiteral:
    gens: Tuple[Polynomial, ...]


@dataclass(frozen=True)
class Product:
    factors: Tuple['IdealExpr', ...]


@dataclass(frozen=True)
class Power:
    base: 'IdealExpr'
    exponent: int


@dataclass(frozen=True)
class Intersection:
    operands: Tuple['IdealExpr', ...]


@dataclass(frozen=True)
class Sum:
    operands: Tuple['IdealExpr', ...]


@dataclass(frozen=True)
class Quotient:
    ideal: 'IdealExpr'
    poly: Polynomial


@dataclass(frozen=True)
class SaturateVar:
    ideal: 'IdealExpr'
    var: str


IdealExpr = Union[IdealLiteral, Product, Power, Intersection, Sum, Quotient, SaturateVar]


# ============================================================================
# SIZE ESTIMATES
# ============================================================================

class ExprSize(NamedTuple):
    """Upper bounds once an expression is expanded."""
    degree: int       # total degree of any generator
    generators: int   # number of generators before minimalization
    terms: int        # terms of any single generator


def _monomials_up_to(ring: VarSet, degree: int) -> int:
    return comb(max(degree, 0) + len(ring), len(ring))


def _multisets(count: int, size: int) -> int:
    if count <= 1 or size == 0:
        return min(count, 1) if size else 1
    return comb(count + size - 1, size)


def polynomial_product_terms(left: Polynomial, right: Polynomial) -> int:
    degree = left.total_degree + right.total_degree
    return min(len(left) * len(right), _monomials_up_to(left.ring, degree))


def polynomial_power_terms(poly: Polynomial, exponent: int) -> int:
    return min(_multisets(len(poly), exponent), _monomials_up_to(poly.ring, poly.total_degree * exponent))


def _literal_size(node: IdealLiteral) -> ExprSize:
    return ExprSize(
        degree=max((g.total_degree for g in node.gens), default=0),
        generators=len(node.gens),
        terms=max((len(g) for g in node.gens), default=1),
    )


def _product_size(left: ExprSize, right: ExprSize, ring: VarSet) -> ExprSize:
    degree = left.degree + right.degree
    cap = _monomials_up_to(ring, degree)
    return ExprSize(degree, min(left.generators * right.generators, cap), min(left.terms * right.terms, cap))


def _power_size(base: ExprSize, exponent: int, ring: VarSet) -> ExprSize:
    degree = base.degree * exponent
    cap = _monomials_up_to(ring, degree)
    return ExprSize(degree, min(_multisets(base.generators, exponent), cap), min(_multisets(base.terms, exponent), cap))


def _sum_size(left: ExprSize, right: ExprSize) -> ExprSize:
    return ExprSize(max(left.degree, right.degree), left.generators + right.generators, max(left.terms, right.terms))


def _intersection_size(left: ExprSize, right: ExprSize, ring: VarSet) -> ExprSize:
    # generators of a monomial intersection are pairwise lcms
    degree = left.degree + right.degree
    cap = _monomials_up_to(ring, degree)
    terms = 1 if left.terms == right.terms == 1 else cap
    return ExprSize(degree, min(left.generators * right.generators, cap), terms)


def estimate_size(node: IdealExpr, ring: VarSet) -> ExprSize:
    if isinstance(node, IdealLiteral):
        return _literal_size(node)
    if isinstance(node, Product):
        size = estimate_size(node.factors[0], ring)
        for factor in node.factors[1:]:
            size = _product_size(size, estimate_size(factor, ring), ring)
        return size
    if isinstance(node, (Sum, Intersection)):
        size = estimate_size(node.operands[0], ring)
        for operand in node.operands[1:]:
            other = estimate_size(operand, ring)
            size = _sum_size(size, other) if isinstance(node, Sum) else _intersection_size(size, other, ring)
        return size
    if isinstance(node, Power):
        return _power_size(estimate_size(node.base, ring), node.exponent, ring)
    if isinstance(node, (Quotient, SaturateVar)):
        return estimate_size(node.ideal, ring)
    raise InvalidArgumentError(f"not an ideal expression: {node!r}")


# ============================================================================
# TOKENIZER
# ============================================================================

class Token(NamedTuple):
    kind: str     # 'int', 'name', 'eof' or the symbol itself
    text: str
    offset: int   # byte offset in the UTF-8 source


def _describe(kind: str) -> str:
    return {'int': 'integer', 'name': 'variable', 'eof': 'end of input'}.get(kind, f"'{kind}'")


def tokenize(src: Union[str, bytes]) -> List[Token]:
    if isinstance(src, (bytes, bytearray)):
        try:
            src = bytes(src).decode('utf-8')
        except UnicodeDecodeError as exc:
            raise ParseError('invalid UTF-8', exc.start) from None
    tokens: List[Token] = []
    offset = 0
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        width = len(c.encode('utf-8', 'surrogatepass'))
        if c.isspace():
            i += 1
            offset += width
            continue
        if c.isascii() and c.isdigit():
            j = i
            while j < n and src[j].isascii() and src[j].isdigit():
                j += 1
            if j - i > MAX_INT_DIGITS:
                raise ParseError('integer literal too long', offset)
            tokens.append(Token('int', src[i:j], offset))
            offset += j - i
            i = j
            continue
        if c.isascii() and (c.isalpha() or c == '_'):
            j = i
            while j < n and src[j].isascii() and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            tokens.append(Token('name', src[i:j], offset))
            offset += j - i
            i = j
            continue
        if c in _SYMBOLS:
            tokens.append(Token(c, c, offset))
            i += 1
            offset += width
            continue
        raise ParseError(f"unexpected character {c!r}", offset)
    tokens.append(Token('eof', '', offset))
    return tokens


# ============================================================================
# PARSER
# ============================================================================

class _Parser:
    def __init__(self, src: Union[str, bytes], ring: VarSet):
        self.tokens = tokenize(src)
        self.ring = ring
        self.pos = 0
        self.depth = 0
        self.limit = max_exponent()
        self.term_limit = max_terms()
        self.generator_limit = max_generators()
        self._sizes: Dict[int, Tuple[IdealExpr, ExprSize]] = {}
        self.expected: Set[str] = set()

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        self.expected = set()
        return token

    def _accept(self, *kinds: str) -> Optional[Token]:
        if self.current.kind in kinds:
            return self._advance()
        self.expected.update(_describe(k) for k in kinds)
        return None

    def _expect(self, *kinds: str) -> Token:
        token = self._accept(*kinds)
        if token is None:
            self._fail()
        return token

    def _fail(self, message: Optional[str] = None, expected: Optional[Set[str]] = None):
        token = self.current
        if message is None:
            message = 'unexpected end of input' if token.kind == 'eof' else f"unexpected {token.text!r}"
        raise ParseError(message, token.offset, self.expected if expected is None else expected)

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self._fail('expression nested too deeply', set())

    def _exponent(self, minimum: int) -> int:
        if self.current.kind == '-':
            self._fail('negative exponent', {'integer'})
        token = self._expect('int')
        value = int(token.text)
        if value < minimum:
            raise ParseError(f"exponent must be at least {minimum}, got {value}", token.offset)
        if value > self.limit:
            raise ParseError(f"exponent {value} exceeds the limit {self.limit}", token.offset)
        return value

    # size limits --------------------------------------------------------

    def _check_terms(self, terms: int, token: Token) -> None:
        if terms > self.term_limit:
            raise ParseError(f"polynomial would expand to up to {terms} terms, over the limit {self.term_limit}",
                             token.offset)

    def _check_size(self, size: ExprSize, token: Token) -> None:
        if size.generators > self.generator_limit:
            raise ParseError(
                f"ideal would expand to up to {size.generators} generators, over the limit {self.generator_limit}",
                token.offset,
            )
        self._check_terms(size.terms, token)

    def _sized(self, node: IdealExpr, size: ExprSize) -> IdealExpr:
        # the node is kept alive with its entry so its id cannot be reused
        self._sizes[id(node)] = (node, size)
        return node

    def _size(self, node: IdealExpr) -> ExprSize:
        entry = self._sizes.get(id(node))
        if entry is None:
            size = estimate_size(node, self.ring)
            self._sized(node, size)
            return size
        return entry[1]

    # ideal level ------------------------------------------------------

    def parse(self) -> IdealExpr:
        node = self._expr()
        self._expect('eof')
        return node

    def _expr(self) -> IdealExpr:
        self._enter()
        node = self._chain()
        while self._accept(':'):
            node = self._sized(Quotient(node, self._poly()), self._size(node))
        self.depth -= 1
        return node

    def _chain(self) -> IdealExpr:
        node = self._product()
        size = self._size(node)
        current_op = None
        operands: List[IdealExpr] = [node]
        while True:
            token = self._accept('&', '∩', '+')
            if token is None:
                break
            op = Sum if token.kind == '+' else Intersection
            if current_op is not None and op is not current_op:
                operands = [self._sized(current_op(tuple(operands)), size)]
            current_op = op
            operand = self._product()
            other = self._size(operand)
            size = _sum_size(size, other) if op is Sum else _intersection_size(size, other, self.ring)
            self._check_size(size, token)
            operands.append(operand)
        return node if current_op is None else self._sized(current_op(tuple(operands)), size)

    def _product(self) -> IdealExpr:
        factors = [self._power()]
        size = self._size(factors[0])
        while True:
            token = self._accept('*', '.')
            if token is None:
                break
            factor = self._power()
            size = _product_size(size, self._size(factor), self.ring)
            self._check_size(size, token)
            factors.append(factor)
        return factors[0] if len(factors) == 1 else self._sized(Product(tuple(factors)), size)

    def _power(self) -> IdealExpr:
        node = self._atom()
        token = self._accept('^')
        if token is not None:
            exponent = self._exponent(1)
            size = _power_size(self._size(node), exponent, self.ring)
            self._check_size(size, token)
            node = self._sized(Power(node, exponent), size)
        return node

    def _atom(self) -> IdealExpr:
        if self._accept('('):
            gens = [self._poly()]
            while self._accept(','):
                gens.append(self._poly())
            self._expect(')')
            return IdealLiteral(tuple(gens))
        if self._accept('['):
            node = self._expr()
            self._expect(']')
            return node
        if self.current.kind == 'name' and self.current.text == 'sat':
            self._advance()
            self._expect('(')
            inner = self._expr()
            self._expect(',')
            name = self._expect('name')
            if name.text not in self.ring:
                raise ParseError(f"unknown variable {name.text!r}", name.offset, self.ring.names)
            self._expect(')')
            return self._sized(SaturateVar(inner, name.text), self._size(inner))
        self.expected.add("'sat'")
        self._fail(expected=self.expected | {'ideal'})

    # polynomial level -------------------------------------------------

    def _poly(self) -> Polynomial:
        self._enter()
        value = self._term()
        while True:
            token = self._accept('+', '-')
            if token is None:
                break
            rhs = self._term()
            value = value + rhs if token.kind == '+' else value - rhs
        self.depth -= 1
        return value

    def _term(self) -> Polynomial:
        value = self._unary()
        while True:
            token = self._accept('*', '.')
            if token is None:
                break
            rhs = self._unary()
            self._check_terms(polynomial_product_terms(value, rhs), token)
            value = value * rhs
        return value

    def _unary(self) -> Polynomial:
        if self.current.kind == '-':
            self._advance()
            self._enter()
            value = -self._unary()
            self.depth -= 1
            return value
        return self._factor()

    def _factor(self) -> Polynomial:
        value = self._primary()
        token = self._accept('^')
        if token is not None:
            exponent = self._exponent(0)
            self._check_terms(polynomial_power_terms(value, exponent), token)
            value = value ** exponent
        return value

    def _primary(self) -> Polynomial:
        token = self.current
        if token.kind == 'int':
            self._advance()
            return Polynomial.constant(self.ring, int(token.text))
        if token.kind == 'name':
            if token.text not in self.ring:
                raise ParseError(f"unknown variable {token.text!r}", token.offset, self.ring.names)
            self._advance()
            return Polynomial.variable(self.ring, token.text)
        if token.kind == '(':
            self._advance()
            value = self._poly()
            self._expect(')')
            return value
        self._fail(expected={'polynomial'})


def parse(src: Union[str, bytes], ring: VarSet) -> IdealExpr:
    """Parse an ideal expression over ring; raises ParseError with a byte offset."""
    return _Parser(src, ring).parse()


def parse_polynomial(src: Union[str, bytes], ring: VarSet) -> Polynomial:
    parser = _Parser(src, ring)
    value = parser._poly()
    parser._expect('eof')
    return value


# ============================================================================
# PRETTY PRINTING
# ============================================================================

def to_source(node: IdealExpr) -> str:
    """Source text that parses back to the same tree."""
    if isinstance(node, IdealLiteral):
        return '(' + ', '.join(str(g) for g in node.gens) + ')'
    if isinstance(node, SaturateVar):
        return f"sat({to_source(node.ideal)}, {node.var})"
    if isinstance(node, Power):
        base = to_source(node.base)
        if not isinstance(node.base, (IdealLiteral, SaturateVar)):
            base = f"[{base}]"
        return f"{base}^{node.exponent}"
    if isinstance(node, Product):
        return ' * '.join(
            f"[{to_source(f)}]" if isinstance(f, (Product, Sum, Intersection, Quotient)) else to_source(f)
            for f in node.factors
        )
    if isinstance(node, (Sum, Intersection)):
        op = ' + ' if isinstance(node, Sum) else ' & '
        pieces = []
        for i, operand in enumerate(node.operands):
            text = to_source(operand)
            nested_left = i == 0 and isinstance(operand, (Sum, Intersection)) and type(operand) is not type(node)
            if isinstance(operand, Quotient) or (isinstance(operand, (Sum, Intersection)) and not nested_left):
                text = f"[{text}]"
            pieces.append(text)
        return op.join(pieces)
    if isinstance(node, Quotient):
        return f"{to_source(node.ideal)} : {_poly_source(node.poly)}"
    raise InvalidArgumentError(f"not an ideal expression: {node!r}")


def _poly_source(poly: Polynomial) -> str:
    text = str(poly)
    return text if len(poly) <= 1 and not text.startswith('-') else f"({text})"


# ============================================================================
# EVALUATION
# ============================================================================

class Engine(models.TextChoices):
    AUTO = 'auto', _('Pick the monomial engine when it applies')
    MONOMIAL = 'monomial', _('Monomial ideal engine')
    GROEBNER = 'groebner', _('Groebner basis engine')


def is_monomial_expr(node: IdealExpr) -> bool:
    """True when every literal generator and quotient divisor is a monomial."""
    if isinstance(node, IdealLiteral):
        return all(g.is_monomial for g in node.gens)
    if isinstance(node, Product):
        return all(is_monomial_expr(f) for f in node.factors)
    if isinstance(node, (Sum, Intersection)):
        return all(is_monomial_expr(o) for o in node.operands)
    if isinstance(node, Power):
        return is_monomial_expr(node.base)
    if isinstance(node, Quotient):
        return node.poly.is_monomial and is_monomial_expr(node.ideal)
    if isinstance(node, SaturateVar):
        return is_monomial_expr(node.ideal)
    raise InvalidArgumentError(f"not an ideal expression: {node!r}")


def _eval_monomial(node: IdealExpr, ring: VarSet) -> MonomialIdeal:
    if isinstance(node, IdealLiteral):
        monomials = []
        for g in node.gens:
            _check_same_ring(ring, g.ring)
            monomials.append(g.as_monomial())
        return MonomialIdeal(ring, frozenset(monomials))
    if isinstance(node, Product):
        result = _eval_monomial(node.factors[0], ring)
        for factor in node.factors[1:]:
            result = mi.combine(result, _eval_monomial(factor, ring), CombineOp.PRODUCT)
        return result
    if isinstance(node, Sum):
        result = _eval_monomial(node.operands[0], ring)
        for operand in node.operands[1:]:
            result = mi.combine(result, _eval_monomial(operand, ring), CombineOp.SUM)
        return result
    if isinstance(node, Intersection):
        return mi.intersect_all([_eval_monomial(o, ring) for o in node.operands])
    if isinstance(node, Power):
        return mi.power(_eval_monomial(node.base, ring), node.exponent)
    if isinstance(node, Quotient):
        _check_same_ring(ring, node.poly.ring)
        return mi.quotient(_eval_monomial(node.ideal, ring), node.poly.as_monomial())
    return mi.saturate_variable(_eval_monomial(node.ideal, ring), node.var)


def _eval_groebner(node: IdealExpr, ring: VarSet) -> PolyIdeal:
    if isinstance(node, IdealLiteral):
        for g in node.gens:
            _check_same_ring(ring, g.ring)
        return PolyIdeal(ring, node.gens)
    if isinstance(node, Product):
        result = _eval_groebner(node.factors[0], ring)
        for factor in node.factors[1:]:
            result = groebner.ideal_product(result, _eval_groebner(factor, ring))
        return result
    if isinstance(node, Sum):
        result = _eval_groebner(node.operands[0], ring)
        for operand in node.operands[1:]:
            result = groebner.ideal_sum(result, _eval_groebner(operand, ring))
        return result
    if isinstance(node, Intersection):
        return groebner.intersect_all([_eval_groebner(o, ring) for o in node.operands])
    if isinstance(node, Power):
        return groebner.ideal_power(_eval_groebner(node.base, ring), node.exponent)
    if isinstance(node, Quotient):
        _check_same_ring(ring, node.poly.ring)
        return groebner.quotient_by_poly(_eval_groebner(node.ideal, ring), node.poly)
    return groebner.saturate_by_poly(_eval_groebner(node.ideal, ring), Polynomial.variable(ring, node.var))


def evaluate(node: IdealExpr, ring: VarSet, engine: str = Engine.AUTO) -> Union[MonomialIdeal, PolyIdeal]:
    engine = Engine(engine)
    monomial = is_monomial_expr(node)
    if engine == Engine.MONOMIAL and not monomial:
        raise InvalidArgumentError("the monomial engine needs monomial generators and divisors")
    if engine == Engine.MONOMIAL or (engine == Engine.AUTO and monomial):
        logger.debug("evaluate: monomial engine")
        return _eval_monomial(node, ring)
    logger.debug("evaluate: groebner engine")
    return _eval_groebner(node, ring)


def parse_ideal(src: Union[str, bytes], ring: VarSet, engine: str = Engine.AUTO) -> Union[MonomialIdeal, PolyIdeal]:
    return evaluate(parse(src, ring), ring, engine)
