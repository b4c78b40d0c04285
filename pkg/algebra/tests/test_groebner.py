from fractions import Fraction

import numpy as np
import sympy
from django.test import SimpleTestCase

from algebra import monomial_ideal as mi
from algebra.exceptions import InvalidArgumentError, NotOnVarietyError, ZeroPolynomialError
from algebra.groebner import (
    PointQ,
    PolyIdeal,
    collect_engine_stats,
    eliminate,
    groebner_basis,
    ideal_contains,
    ideal_equal,
    ideal_member,
    intersect,
    intersect_all,
    member_cofactors,
    quotient_by_poly,
    radical_member,
    saturate_by_poly,
    specialize,
    zariski_tangent_dim,
)
from algebra.monomial_ideal import MonomialIdeal
from algebra.poly_core import GREVLEX, LEX, Monomial, Polynomial, VarSet

R3 = VarSet.of('x1', 'x2', 'x3')
S_RING = VarSet.of('x', 'y', 'u', 'v')
CURVES = VarSet.of('s', 'x', 'y', 'z')


def ideal(ring, *polys):
    return PolyIdeal(ring, polys)


def random_poly(rng, ring, terms=3, degree=3):
    coefficients = {}
    for _ in range(int(rng.integers(1, terms + 1))):
        exponents = [0] * len(ring)
        for _ in range(int(rng.integers(0, degree + 1))):
            exponents[int(rng.integers(0, len(ring)))] += 1
        coefficients[tuple(exponents)] = int(rng.integers(-3, 4)) or 1
    return Polynomial(ring, coefficients)


def random_ideal(rng, ring, size=None):
    size = size or int(rng.integers(1, 4))
    gens = [random_poly(rng, ring) for _ in range(size)]
    return [g for g in gens if g] or [Polynomial.variable(ring, ring.names[0])]


def sympy_basis(gens, ring, order='grevlex'):
    result = sympy.groebner([g.to_sympy() for g in gens], *ring.symbols(), order=order, domain=sympy.QQ)
    return {Polynomial.from_sympy(expr, ring) for expr in result.exprs}


class BasisTests(SimpleTestCase):

    def test_matches_sympy(self):
        rng = np.random.default_rng(0)
        for _ in range(60):
            gens = random_ideal(rng, R3)
            self.assertEqual(set(groebner_basis(PolyIdeal(R3, gens))), sympy_basis(gens, R3), gens)

    def test_matches_sympy_lex(self):
        ring = VarSet.of('x', 'y')
        rng = np.random.default_rng(1)
        for _ in range(40):
            gens = random_ideal(rng, ring)
            self.assertEqual(set(groebner_basis(PolyIdeal(ring, gens), LEX)), sympy_basis(gens, ring, 'lex'))

    def test_input_order_invariance(self):
        rng = np.random.default_rng(2)
        cases = 0
        for _ in range(200):
            ring = R3 if rng.integers(0, 2) else VarSet.of('x', 'y')
            gens = random_ideal(rng, ring)
            permuted = [gens[i] for i in rng.permutation(len(gens))]
            scaled = [g * int(rng.integers(1, 5)) for g in permuted]
            self.assertEqual(groebner_basis(PolyIdeal(ring, gens)), groebner_basis(PolyIdeal(ring, scaled)))
            cases += 1
        self.assertEqual(cases, 200)

    def test_invariant_under_recombining_generators(self):
        rng = np.random.default_rng(3)
        for _ in range(60):
            gens = random_ideal(rng, R3, size=3)
            if len(gens) < 2:
                continue
            mixed = list(gens)
            for _ in range(3):
                i, j = (int(k) for k in rng.choice(len(mixed), size=2, replace=False))
                mixed[i] = mixed[i] + random_poly(rng, R3, terms=2, degree=1) * mixed[j]
                mixed[j] = mixed[j] * Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5)))
            mixed = [g for g in mixed if g]
            self.assertEqual(groebner_basis(PolyIdeal(R3, gens)), groebner_basis(PolyIdeal(R3, mixed)), gens)

    def test_reduced_and_monic(self):
        x1, x2, x3 = R3.gens()
        basis = groebner_basis(ideal(R3, x1 ** 2 - x2, x1 * x2 - x3))
        for g in basis:
            self.assertEqual(g.leading_term(GREVLEX)[1], 1)
        leads = [g.leading_term(GREVLEX)[0] for g in basis]
        for i, g in enumerate(basis):
            for m in g.terms:
                self.assertFalse(any(lead.divides(m) for j, lead in enumerate(leads) if j != i))

    def test_unit_and_zero(self):
        x1, _, _ = R3.gens()
        self.assertTrue(ideal(R3, x1, x1 + 1).is_unit())
        self.assertEqual(groebner_basis(PolyIdeal(R3)), [])
        self.assertTrue(PolyIdeal(R3, [Polynomial.zero(R3)]).is_zero)

    def test_cached_per_order(self):
        x1, x2, _ = R3.gens()
        i = ideal(R3, x1 * x2 - 1, x1 ** 2 - x2)
        with collect_engine_stats() as stats:
            i.basis(GREVLEX)
            i.basis(GREVLEX)
            i.basis(LEX)
        self.assertEqual(stats.bases, 2)
        self.assertGreater(stats.s_pairs, 0)


class MembershipTests(SimpleTestCase):

    def test_monomial_membership_agrees(self):
        rng = np.random.default_rng(3)
        checked = 0
        for _ in range(250):
            gens = [Monomial(R3, tuple(int(e) for e in rng.integers(0, 4, size=3))) for _ in range(int(rng.integers(1, 5)))]
            monomial = MonomialIdeal(R3, frozenset(gens))
            poly = monomial.to_poly_ideal()
            for _ in range(4):
                m = Monomial(R3, tuple(int(e) for e in rng.integers(0, 5, size=3)))
                self.assertEqual(mi.contains_monomial(monomial, m), ideal_member(m.to_polynomial(), poly))
                checked += 1
        self.assertGreaterEqual(checked, 1000)

    def test_cofactors_are_sound(self):
        rng = np.random.default_rng(4)
        for _ in range(40):
            gens = random_ideal(rng, R3)
            i = PolyIdeal(R3, gens)
            f = sum((random_poly(rng, R3) * g for g in gens), Polynomial.zero(R3))
            cofactors = member_cofactors(f, i)
            self.assertIsNotNone(cofactors)
            total = Polynomial.zero(R3)
            for q, b in cofactors:
                total = total + q * b
            self.assertEqual(total, f)

    def test_non_member_has_no_cofactors(self):
        x1, x2, _ = R3.gens()
        self.assertIsNone(member_cofactors(x1, ideal(R3, x1 ** 2, x2)))

    def test_surface_products_agree(self):
        x, y, u, v = S_RING.gens()
        surface = ideal(S_RING, x * u - y * v, x * v - y * u, y * u - y * v)
        for product in (x * v, y * u, y * v):
            self.assertIn(product - x * u, surface)
        self.assertNotIn(x * u, surface)

    def test_equality_ignores_generators(self):
        x1, x2, _ = R3.gens()
        self.assertTrue(ideal_equal(ideal(R3, x1, x2), ideal(R3, x1 + x2, x1 - x2)))
        self.assertFalse(ideal_equal(ideal(R3, x1), ideal(R3, x1 ** 2)))
        self.assertTrue(ideal_contains(ideal(R3, x1), ideal(R3, x1 ** 2, x1 * x2)))


class IntersectionTests(SimpleTestCase):

    def test_surface_is_three_planes(self):
        x, y, u, v = S_RING.gens()
        surface = ideal(S_RING, x * u - y * v, x * v - y * u, y * u - y * v)
        planes = intersect_all([ideal(S_RING, u, v), ideal(S_RING, x, y), ideal(S_RING, x - y, u - v)])
        self.assertTrue(ideal_equal(surface, planes))
        a, b = sympy.symbols('a b')
        for param in ({'x': a, 'y': b, 'u': 0, 'v': 0}, {'x': 0, 'y': 0, 'u': a, 'v': b},
                      {'x': a, 'y': a, 'u': b, 'v': b}):
            for g in surface.gens:
                self.assertEqual(sympy.expand(g.to_sympy().subs(dict(zip(S_RING.symbols(), param.values())))), 0)

    def test_two_curves(self):
        s, x, y, z = CURVES.gens()
        family = intersect(ideal(CURVES, x, y), ideal(CURVES, x - s, z))
        self.assertTrue(ideal_equal(family, ideal(CURVES, x * (x - s), x * z, y * (x - s), y * z)))

    def test_agrees_with_monomial_intersection(self):
        left = MonomialIdeal.from_variables(R3, 'x2', 'x3') ** 5
        right = MonomialIdeal.from_variables(R3, 'x1', 'x3') ** 4
        meet = intersect(left.to_poly_ideal(), right.to_poly_ideal())
        self.assertTrue(ideal_equal(meet, (left & right).to_poly_ideal()))

    def test_no_ideals(self):
        with self.assertRaises(InvalidArgumentError):
            intersect_all([])


def random_monomial_ideal(rng, degree=3):
    size = int(rng.integers(1, 4))
    return MonomialIdeal.from_exponents(R3, *(tuple(int(e) for e in rng.integers(0, degree + 1, size=3))
                                             for _ in range(size)))


def random_monomial(rng):
    return Monomial(R3, tuple(int(e) for e in rng.integers(0, 3, size=3)))


class MonomialAgreementTests(SimpleTestCase):
    """On monomial input the Groebner operations match the divisibility ones."""

    def test_intersection(self):
        rng = np.random.default_rng(6)
        for _ in range(40):
            left, right = random_monomial_ideal(rng), random_monomial_ideal(rng)
            meet = intersect(left.to_poly_ideal(), right.to_poly_ideal())
            self.assertTrue(ideal_equal(meet, mi.intersect(left, right).to_poly_ideal()), (left, right))

    def test_quotient(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            i, m = random_monomial_ideal(rng), random_monomial(rng)
            q = quotient_by_poly(i.to_poly_ideal(), m.to_polynomial())
            self.assertTrue(ideal_equal(q, mi.quotient(i, m).to_poly_ideal()), (i, m))

    def test_saturation(self):
        rng = np.random.default_rng(8)
        for _ in range(40):
            i = random_monomial_ideal(rng)
            name = R3.names[int(rng.integers(0, 3))]
            sat = saturate_by_poly(i.to_poly_ideal(), Polynomial.variable(R3, name))
            self.assertTrue(ideal_equal(sat, mi.saturate_variable(i, name).to_poly_ideal()), (i, name))


class QuotientAndSaturationTests(SimpleTestCase):

    def test_no_s_torsion(self):
        s, x, y, z = CURVES.gens()
        two = ideal(CURVES, x * (x - s), x * z, y * (x - s), y * z)
        three = ideal(CURVES, y * (x - s), x * z, y * z)
        self.assertTrue(ideal_equal(quotient_by_poly(two, s), two))
        self.assertTrue(ideal_equal(quotient_by_poly(three, s), three))

    def test_quotient_removes_a_component(self):
        x1, x2, _ = R3.gens()
        self.assertTrue(ideal_equal(quotient_by_poly(ideal(R3, x1 * x2), x1), ideal(R3, x2)))

    def test_saturation_contains_quotient_contains_ideal(self):
        rng = np.random.default_rng(5)
        for _ in range(15):
            i = PolyIdeal(R3, random_ideal(rng, R3, size=2))
            f = random_poly(rng, R3, terms=2, degree=2)
            if not f or f.is_constant:
                continue
            q = quotient_by_poly(i, f)
            sat = saturate_by_poly(i, f)
            self.assertTrue(ideal_contains(q, i))
            self.assertTrue(ideal_contains(sat, q))

    def test_saturation_of_monomial_ideal(self):
        h = mi.intersect_all([
            MonomialIdeal.from_variables(R3, 'x2', 'x3') ** 5,
            MonomialIdeal.from_variables(R3, 'x1', 'x3') ** 4,
        ])
        x1 = Polynomial.variable(R3, 'x1')
        self.assertTrue(ideal_equal(saturate_by_poly(h.to_poly_ideal(), x1),
                                    mi.saturate_variable(h, 'x1').to_poly_ideal()))

    def test_zero_divisor_rejected(self):
        with self.assertRaises(ZeroPolynomialError):
            quotient_by_poly(ideal(R3, Polynomial.variable(R3, 'x1')), Polynomial.zero(R3))
        with self.assertRaises(ZeroPolynomialError):
            saturate_by_poly(ideal(R3, Polynomial.variable(R3, 'x1')), Polynomial.zero(R3))


class EliminationTests(SimpleTestCase):

    def test_chart_hypersurface(self):
        ring = VarSet.of('x1', 'x2', 'x3', 'u', 'v')
        x1, x2, x3, u, v = ring.gens()
        result = eliminate(ideal(ring, x3 - u * x1, x3 - v * x2), ['x3'])
        self.assertEqual(result.ring.names, ('x1', 'x2', 'u', 'v'))
        a1, a2, au, av = result.ring.gens()
        self.assertTrue(ideal_equal(result, ideal(result.ring, a2 * av - a1 * au)))

    def test_twisted_cubic(self):
        ring = VarSet.of('t', 'x', 'y', 'z')
        t, x, y, z = ring.gens()
        result = eliminate(ideal(ring, x - t, y - t ** 2, z - t ** 3), ['t'])
        _, x, y, z = ring.gens()
        expected = PolyIdeal(result.ring, [
            (y - x ** 2).restrict(result.ring),
            (z - x * y).restrict(result.ring),
            (y ** 2 - x * z).restrict(result.ring),
        ])
        self.assertTrue(ideal_equal(result, expected))

    def test_cannot_eliminate_everything(self):
        with self.assertRaises(InvalidArgumentError):
            eliminate(ideal(R3, Polynomial.variable(R3, 'x1')), R3.names)


class RadicalAndFiberTests(SimpleTestCase):

    def two_curves(self):
        s, x, y, z = CURVES.gens()
        return ideal(CURVES, x * (x - s), x * z, y * (x - s), y * z)

    def test_fiber(self):
        fiber = specialize(self.two_curves(), {'s': 0})
        x, y, z = fiber.ring.gens()
        self.assertEqual(fiber.ring.names, ('x', 'y', 'z'))
        self.assertTrue(ideal_equal(fiber, ideal(fiber.ring, x ** 2, x * y, x * z, y * z)))
        self.assertFalse(ideal_member(x, fiber))
        self.assertTrue(radical_member(x, fiber))
        self.assertFalse(radical_member(y, fiber))

    def test_three_curve_fiber(self):
        s, x, y, z = CURVES.gens()
        fiber = specialize(ideal(CURVES, y * (x - s), x * z, y * z), {'s': 0})
        fx, fy, fz = fiber.ring.gens()
        self.assertTrue(ideal_equal(fiber, ideal(fiber.ring, fx * fy, fx * fz, fy * fz)))
        axes = intersect_all([ideal(fiber.ring, fx, fy), ideal(fiber.ring, fy, fz), ideal(fiber.ring, fx, fz)])
        self.assertTrue(ideal_equal(fiber, axes))

    def test_empty_specialization(self):
        family = self.two_curves()
        self.assertTrue(ideal_equal(specialize(family, {}), family))

    def test_tangent_dimension(self):
        self.assertEqual(zariski_tangent_dim(self.two_curves(), PointQ.origin(CURVES)), 4)
        ring = VarSet.of('x', 'y', 'z')
        x, y, z = ring.gens()
        self.assertEqual(zariski_tangent_dim(ideal(ring, x, y * z), (0, 0, 0)), 2)
        self.assertEqual(zariski_tangent_dim(ideal(ring, x, y * z), (0, 1, 0)), 1)

    def test_tangent_off_variety(self):
        ring = VarSet.of('x', 'y')
        x, y = ring.gens()
        with self.assertRaises(NotOnVarietyError):
            zariski_tangent_dim(ideal(ring, x - 1), PointQ.from_mapping(ring, {'y': Fraction(1, 2)}))


class IdealArithmeticTests(SimpleTestCase):

    def test_product_principal_on_surface(self):
        x, y, u, v = S_RING.gens()
        surface = ideal(S_RING, x * u - y * v, x * v - y * u, y * u - y * v)
        product = ideal(S_RING, x, y) * ideal(S_RING, u, v)
        self.assertTrue(ideal_equal(product + surface, PolyIdeal.principal(x * u) + surface))

    def test_power(self):
        x1, x2, _ = R3.gens()
        self.assertTrue(ideal_equal(ideal(R3, x1, x2) ** 2, ideal(R3, x1 ** 2, x1 * x2, x2 ** 2)))
        with self.assertRaises(InvalidArgumentError):
            ideal(R3, x1) ** 0
