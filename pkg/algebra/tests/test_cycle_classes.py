import itertools
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase, override_settings

from algebra.cycle_classes import (
    Cycle,
    CycleGroup,
    Expectation,
    available_scenarios,
    is_zero,
    load_scenario,
    parse_scenario,
    reduce,
    search_effective_zero,
    search_size,
)
from algebra.exceptions import (
    DimensionMismatchError,
    InvalidArgumentError,
    LimitExceededError,
    UnknownVariableError,
)


def two_point():
    return CycleGroup(
        ('L1', 'L2', 'A', 'B', 'C', 'D'),
        ((1, 0, -1, -1, 0, 0), (0, 1, 0, -1, 0, 0), (0, 1, 0, 0, -1, -1), (1, 0, 0, 0, 0, -1)),
    )


class LatticeTests(SimpleTestCase):

    def test_hermite_basis(self):
        group = CycleGroup(('a', 'b'), ((4, 6), (2, 2)))
        self.assertEqual(group.rank, 2)
        self.assertEqual(group.hermite_basis(), [(2, 0), (0, 2)])

    def test_reduce_is_canonical(self):
        group = two_point()
        a_plus_d = group.parse_cycle('A + D')
        self.assertEqual(reduce(group, a_plus_d), reduce(group, group.parse_cycle('2 L1 - L2')))

    def test_dependent_relations(self):
        group = CycleGroup(('a', 'b', 'c'), ((1, -1, 0), (0, 1, -1), (1, 0, -1)))
        self.assertEqual(group.rank, 2)
        self.assertTrue(is_zero(group, group.parse_cycle('a - c')))
        self.assertFalse(is_zero(group, group.parse_cycle('a')))

    def test_duplicate_classes(self):
        with self.assertRaises(InvalidArgumentError):
            CycleGroup(('a', 'a'))

    def test_relation_length(self):
        with self.assertRaises(DimensionMismatchError):
            CycleGroup(('a', 'b'), ((1, 0, 0),))


def random_group(rng, classes, relations, spread=3):
    rows = tuple(tuple(int(a) for a in rng.integers(-spread, spread + 1, size=classes)) for _ in range(relations))
    return CycleGroup(tuple(f'c{i}' for i in range(classes)), rows)


def random_cycle(rng, n, spread=5):
    return Cycle(tuple(int(a) for a in rng.integers(-spread, spread + 1, size=n)))


def first_effective_zero(group, bound):
    for coefficients in itertools.product(range(bound + 1), repeat=len(group.class_names)):
        cycle = Cycle(coefficients)
        if not cycle.is_zero_vector and is_zero(group, cycle):
            return cycle
    return None


class RandomLatticeTests(SimpleTestCase):

    def test_reduce_is_idempotent_and_linear(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            n = int(rng.integers(2, 7))
            group = random_group(rng, n, int(rng.integers(0, n + 1)))
            a, b = random_cycle(rng, n), random_cycle(rng, n)
            k = int(rng.integers(-4, 5))
            self.assertEqual(reduce(group, reduce(group, a)), reduce(group, a))
            self.assertEqual(reduce(group, a + b), reduce(group, reduce(group, a) + reduce(group, b)))
            self.assertEqual(reduce(group, k * a), reduce(group, k * reduce(group, a)))
            self.assertTrue(is_zero(group, reduce(group, a) - a))

    def test_relation_rows_vanish(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            n = int(rng.integers(2, 7))
            group = random_group(rng, n, int(rng.integers(1, n + 1)))
            a = random_cycle(rng, n)
            for row in group.relations:
                relation = Cycle(row)
                self.assertTrue(is_zero(group, relation), (group.relations, row))
                self.assertTrue(is_zero(group, int(rng.integers(-3, 4)) * relation))
                self.assertEqual(reduce(group, a + relation), reduce(group, a))

    def test_shipped_relations_vanish(self):
        for name in available_scenarios():
            group = load_scenario(name).group
            for row in group.relations:
                with self.subTest(scenario=name, row=row):
                    self.assertTrue(is_zero(group, Cycle(row)))

    def test_search_agrees_with_plain_enumeration(self):
        rng = np.random.default_rng(2)
        for _ in range(150):
            n = int(rng.integers(1, 5))
            group = random_group(rng, n, int(rng.integers(0, 3)), spread=2)
            bound = int(rng.integers(1, 4))
            with self.subTest(relations=group.relations, bound=bound):
                self.assertEqual(search_effective_zero(group, bound), first_effective_zero(group, bound))


class CycleTests(SimpleTestCase):

    def test_arithmetic(self):
        a, b = Cycle((1, 0, 2)), Cycle((0, 1, -1))
        self.assertEqual(a + b, Cycle((1, 1, 1)))
        self.assertEqual(a - a, Cycle.zero(3))
        self.assertEqual(2 * b, Cycle((0, 2, -2)))
        self.assertTrue(a.is_effective)
        self.assertFalse(b.is_effective)
        self.assertFalse(Cycle.zero(3).is_effective)

    def test_length_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            Cycle((1, 0)) + Cycle((1, 0, 0))


class ParseCycleTests(SimpleTestCase):

    def setUp(self):
        self.group = load_scenario('v0').group

    def test_combination(self):
        cycle = self.group.parse_cycle("L1' + 2 L23 - L13")
        self.assertEqual(cycle.coefficients, (0, 0, 0, 1, 0, 2, -1, 0, 0, 0))
        self.assertEqual(self.group.format(cycle), "L1' + 2 L23 - L13")

    def test_alias_and_star(self):
        self.assertEqual(self.group.parse_cycle('2*L31'), self.group.parse_cycle('2 L13'))

    def test_leading_minus_and_zero(self):
        self.assertEqual(self.group.format(self.group.parse_cycle('-L1 + L2')), '-L1 + L2')
        self.assertEqual(self.group.parse_cycle('0'), self.group.zero())
        self.assertEqual(self.group.format(self.group.zero()), '0')

    def test_malformed(self):
        for text in ('L1 +', 'L1 L2', '2 3 L1', '* L1', '+', 'L1 + + L2'):
            with self.subTest(text=text), self.assertRaises(InvalidArgumentError):
                self.group.parse_cycle(text)

    def test_unknown_class(self):
        with self.assertRaises(UnknownVariableError):
            self.group.parse_cycle('L1 + Q')


class SearchTests(SimpleTestCase):

    def test_central_fiber(self):
        scenario = load_scenario('v0')
        group = scenario.group
        self.assertTrue(is_zero(group, scenario.certificate))
        self.assertTrue(scenario.certificate.is_effective)
        found = search_effective_zero(group, 3)
        self.assertEqual(found.coefficients, (0, 0, 0, 1, 0, 2, 0, 0, 0, 1))
        self.assertEqual(group.format(found), "L1' + 2 L23 + L03")
        self.assertEqual(search_effective_zero(group, 2), found)
        self.assertIsNone(search_effective_zero(group, 1))

    def test_deformed_fiber(self):
        scenario = load_scenario('v0-deformed')
        self.assertTrue(is_zero(scenario.group, scenario.certificate))
        self.assertFalse(scenario.certificate.is_effective)
        self.assertIsNone(search_effective_zero(scenario.group, 3))
        self.assertEqual(scenario.expect, Expectation.NONE)

    def test_small_scenarios(self):
        simple = load_scenario('simple')
        self.assertEqual(simple.group.format(search_effective_zero(simple.group, 1)), "A'")
        self.assertEqual(simple.group.rank, 3)
        self.assertEqual(two_point().format(search_effective_zero(two_point(), 1)), 'A + C')

    def test_no_relations(self):
        self.assertIsNone(search_effective_zero(CycleGroup(('a', 'b')), 2))

    def test_bound_must_be_positive(self):
        with self.assertRaises(InvalidArgumentError):
            search_effective_zero(two_point(), 0)

    def test_candidate_count_over_the_limit(self):
        group = CycleGroup(tuple(f'c{i}' for i in range(20)), ((1,) * 20,))
        self.assertEqual(search_size(group, 10), 11 ** 20 - 1)
        with self.assertRaises(LimitExceededError) as ctx:
            search_effective_zero(group, 10)
        self.assertEqual(ctx.exception.size, 11 ** 20 - 1)
        self.assertEqual(ctx.exception.limit, 10_000_000)

    def test_deformed_fiber_bounds(self):
        group = load_scenario('v0-deformed').group
        self.assertEqual(search_size(group, 4), 5 ** 10 - 1)
        with self.assertRaises(LimitExceededError):
            search_effective_zero(group, 5)

    def test_search_limit_setting(self):
        group = load_scenario('v0').group
        with override_settings(VERIFIER={'MAX_SEARCH_CANDIDATES': 1000}):
            with self.assertRaises(LimitExceededError):
                search_effective_zero(group, 2)
            self.assertEqual(two_point().format(search_effective_zero(two_point(), 1)), 'A + C')

    def test_int64_range(self):
        with self.assertRaises(LimitExceededError):
            search_effective_zero(CycleGroup(('a', 'b'), ((1 << 62, 1),)), 1)
        self.assertIsNone(search_effective_zero(CycleGroup(('a', 'b'), ((1 << 20, 1),)), 1))


class ScenarioFileTests(SimpleTestCase):

    def test_shipped_scenarios(self):
        self.assertEqual(available_scenarios(), ['simple', 'two-point', 'v0', 'v0-deformed'])
        self.assertEqual(load_scenario('two-point').expect, Expectation.EFFECTIVE_ZERO)

    def test_relation_chains(self):
        scenario = parse_scenario('classes: a, b, c\na = b = c  # chain\n', name='chain')
        self.assertEqual(scenario.name, 'chain')
        self.assertEqual(scenario.group.relations, ((1, -1, 0), (0, 1, -1)))
        self.assertIsNone(scenario.certificate)

    def test_load_by_path(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'custom.txt'
            path.write_text('classes: p, q\np = q\ncertificate: p - q\n', encoding='utf-8')
            scenario = load_scenario(str(path))
        self.assertEqual(scenario.name, 'custom')
        self.assertTrue(is_zero(scenario.group, scenario.certificate))

    def test_scenario_dir_setting(self):
        with tempfile.TemporaryDirectory() as tmp:
            Path(tmp, 'only.txt').write_text('classes: a\n', encoding='utf-8')
            with override_settings(VERIFIER={'SCENARIO_DIR': tmp}):
                self.assertEqual(available_scenarios(), ['only'])
                self.assertEqual(load_scenario('only').group.class_names, ('a',))

    def test_unknown_scenario(self):
        with self.assertRaises(InvalidArgumentError):
            load_scenario('no-such-scenario')

    def test_malformed_files(self):
        cases = [
            'a = b\n',
            'classes: a, b\nalias: c\n',
            'classes: a\nexpect: maybe\n',
            'classes: a\nnonsense\n',
            'classes: a, b\na = \n',
        ]
        for text in cases:
            with self.subTest(text=text), self.assertRaises(InvalidArgumentError):
                parse_scenario(text)

    def test_relation_with_unknown_class(self):
        with self.assertRaises(UnknownVariableError):
            parse_scenario('classes: a\na = z\n')

    def test_alias_to_unknown_class(self):
        with self.assertRaises(UnknownVariableError):
            parse_scenario('classes: a\nalias: b -> z\n')
