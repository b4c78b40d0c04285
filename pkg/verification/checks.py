"""
Scripted verification checks.

Each check rebuilds one group of claims about the non-Kähler Moishezon
deformation example from scratch and records every comparison as a step of
a VerificationReport. Checks share no state, so any subset can run in any
order.
"""

import logging
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
from django.conf import settings

from algebra import monomial_ideal as mi
from algebra.blowup import (
    SmoothnessVerdict,
    chart_ideal,
    ideal_equal_in_chart,
    is_principal_in_chart,
    jacobian_det_at,
    smoothness_verdict,
    strict_transform,
)
from algebra.cycle_classes import (
    Expectation,
    available_scenarios,
    is_zero,
    load_scenario,
    search_effective_zero,
)
from algebra.exceptions import LimitExceededError
from algebra.groebner import (
    PointQ,
    PolyIdeal,
    collect_engine_stats,
    eliminate,
    ideal_member,
    intersect_all,
    member_cofactors,
    quotient_by_poly,
    radical_member,
    saturate_by_poly,
    specialize,
    zariski_tangent_dim,
)
from algebra.ideal_expr_parser import parse_ideal, parse_polynomial
from algebra.monomial_ideal import MonomialIdeal
from algebra.poly_core import Monomial, MonomialOrder, Polynomial, VarSet

from .reports import VerificationReport

logger = logging.getLogger(__name__)

CheckFunction = Callable[[VerificationReport, 'CheckOptions'], None]

CHECKS: Dict[str, CheckFunction] = {}
SCENARIO_CHECKS = set()


class CheckUsageError(Exception):
    """Unknown check id, missing or unknown scenario, or a bad option."""


def register(check_id: str, needs_scenario: bool = False):
    def decorator(func: CheckFunction) -> CheckFunction:
        CHECKS[check_id] = func
        if needs_scenario:
            SCENARIO_CHECKS.add(check_id)
        return func
    return decorator


@dataclass(frozen=True)
class CheckOptions:
    order: str = MonomialOrder.Kind.GREVLEX.value
    bound: int = 3
    seed: int = 0
    scenario: Optional[str] = None

    @classmethod
    def from_settings(cls, **overrides) -> 'CheckOptions':
        """Defaults from settings.VERIFIER, overridden by any non-None keyword."""
        config = getattr(settings, 'VERIFIER', {})
        values = {
            'order': config.get('DEFAULT_ORDER', cls.order),
            'bound': config.get('DEFAULT_BOUND', cls.bound),
            'seed': config.get('DEFAULT_SEED', cls.seed),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    @property
    def monomial_order(self) -> MonomialOrder:
        return MonomialOrder.from_name(self.order)

    def as_dict(self) -> Dict[str, object]:
        options = {'order': self.order, 'bound': self.bound, 'seed': self.seed}
        if self.scenario is not None:
            options['scenario'] = self.scenario
        return options


# ============================================================================
# RUNNING
# ============================================================================

def check_label(check_id: str, options: CheckOptions) -> str:
    if check_id in SCENARIO_CHECKS and options.scenario:
        return f"{check_id} {options.scenario}"
    return check_id


def _validate(check_id: str, options: CheckOptions) -> None:
    if check_id not in CHECKS:
        known = ', '.join(sorted(CHECKS) + ['all'])
        raise CheckUsageError(f"unknown check {check_id!r}; available: {known}")
    if check_id in SCENARIO_CHECKS:
        if not options.scenario:
            raise CheckUsageError(
                f"{check_id} needs a scenario: one of {', '.join(available_scenarios())} or a file path"
            )
        if options.scenario not in available_scenarios() and not Path(options.scenario).is_file():
            raise CheckUsageError(
                f"unknown scenario {options.scenario!r}; available: {', '.join(available_scenarios())}"
            )
    elif options.scenario:
        raise CheckUsageError(f"{check_id} takes no scenario argument")
    try:
        MonomialOrder.from_name(options.order)
    except ValueError as e:
        raise CheckUsageError(str(e)) from e
    if options.bound < 1:
        raise CheckUsageError(f"--bound must be positive, got {options.bound}")


def run_verification(check_id: str, options: Optional[CheckOptions] = None) -> VerificationReport:
    """
    Run one check and return its report.

    An exception escaping the check becomes a failed 'error' step, so a broken
    check never takes other checks down with it.

    Raises:
        CheckUsageError: unknown check id or unusable options, including a
            bound whose effective-zero search is over the configured limit
    """
    options = options or CheckOptions.from_settings()
    _validate(check_id, options)
    label = check_label(check_id, options)
    report = VerificationReport(check_id=label, options=options.as_dict())

    logger.info(f"Running check {label}")
    started = time.perf_counter()
    with collect_engine_stats() as stats:
        try:
            CHECKS[check_id](report, options)
        except LimitExceededError as e:
            raise CheckUsageError(str(e)) from e
        except Exception as e:
            logger.error(f"❌ Check {label} raised: {e}", exc_info=True)
            report.add_step(
                'error', label,
                expected='no exception',
                outcome=f"{type(e).__name__}: {e}",
                passed=False,
            )
    report.elapsed_ms = (time.perf_counter() - started) * 1000
    report.engine_stats = stats.as_dict()

    if report.passed:
        logger.info(f"✅ {label}: pass ({len(report.steps)} steps, {report.elapsed_ms:.1f} ms)")
    else:
        failed = sum(1 for s in report.steps if not s.passed)
        logger.error(f"❌ {label}: fail ({failed} of {len(report.steps)} steps failed)")
    return report


def run_checks(check_id: str, options: Optional[CheckOptions] = None) -> List[VerificationReport]:
    """Run a check, or every check (each scenario separately) for 'all'."""
    options = options or CheckOptions.from_settings()
    if check_id != 'all':
        return [run_verification(check_id, options)]
    if options.scenario:
        raise CheckUsageError("'all' takes no scenario argument")
    reports = []
    for name in CHECKS:
        if name in SCENARIO_CHECKS:
            for scenario in available_scenarios():
                reports.append(run_verification(name, replace(options, scenario=scenario)))
        else:
            reports.append(run_verification(name, options))
    return reports


# ============================================================================
# HELPERS
# ============================================================================

R3 = VarSet.of('x1', 'x2', 'x3')


def _ideal(ring: VarSet, *sources: str) -> PolyIdeal:
    return PolyIdeal(ring, [parse_polynomial(s, ring) for s in sources])


def _same_ideal(left: PolyIdeal, right: PolyIdeal, order: MonomialOrder) -> bool:
    """Mutual containment, tested with reduced bases under order."""
    return (all(ideal_member(g, right, order) for g in left.gens)
            and all(ideal_member(g, left, order) for g in right.gens))


def _same_radical(left: PolyIdeal, right: PolyIdeal) -> bool:
    return (all(radical_member(g, right) for g in left.gens)
            and all(radical_member(g, left) for g in right.gens))


def _vanishes(ideal: PolyIdeal, point: PointQ) -> bool:
    return all(not g.evaluate(point.coordinates) for g in ideal.gens)


def _nonzero(rng: np.random.Generator) -> int:
    value = int(rng.integers(1, 10))
    return value if rng.integers(0, 2) else -value


# ============================================================================
# MONOMIAL IDEALS
# ============================================================================

H_PRODUCT = '(x1.x2, x2.x3, x1.x3).(x1, x2.x3).(x2, x1.x3)^2.(x3, x1.x2)^2'
H_INTERSECTION = '(x2, x3)^5 & (x1, x3)^4 & (x1, x2)^4 & (x1, x2, x3)^7'

H_GENERATORS = {
    (0, 4, 4): 'm0',
    (1, 3, 3): 'm1',
    (2, 3, 2): 'm2',
    (2, 2, 3): "m2'",
    (3, 4, 1): 'm3',
    (3, 1, 4): "m3'",
    (4, 5, 0): 'm4',
    (4, 0, 5): "m4'",
}

H_FACTORS = (
    ('(x1.x2, x2.x3, x1.x3)', 1),
    ('(x1, x2.x3)', 1),
    ('(x2, x1.x3)', 2),
    ('(x3, x1.x2)', 2),
)


def in_h_by_inequalities(a: int, b: int, c: int) -> bool:
    return a + b + c >= 7 and a + b >= 4 and a + c >= 4 and b + c >= 5


@register('lemma-h1')
def check_lemma_h1(report: VerificationReport, options: CheckOptions) -> None:
    h = parse_ideal(H_PRODUCT, R3)
    rhs = parse_ideal(H_INTERSECTION, R3)

    report.expect("product ideal lies in the intersection", f"{H_PRODUCT} ⊆ {H_INTERSECTION}",
                  all(g in rhs for g in h.gens))
    report.expect("intersection lies in the product ideal", f"{H_INTERSECTION} ⊆ {H_PRODUCT}",
                  all(g in h for g in rhs.gens))
    report.expect("the two ideals are equal", f"{H_PRODUCT} = {H_INTERSECTION}", mi.equals(h, rhs))

    expected = MonomialIdeal.from_exponents(R3, *H_GENERATORS)
    report.expect("number of minimal generators", f"len(mingens({H_INTERSECTION}))", len(rhs.gens), 8)
    report.expect("minimal generators m0 ... m4'", f"mingens({H_INTERSECTION})",
                  rhs.format('.'), expected.format('.'))

    mismatches = 0
    for a in range(10):
        for b in range(10):
            for c in range(10):
                member = Monomial(R3, (a, b, c)) in rhs
                if member != in_h_by_inequalities(a, b, c):
                    mismatches += 1
    report.expect("membership matches a+b+c>=7, a+b>=4, a+c>=4, b+c>=5 for exponents <= 9",
                  "x1^a.x2^b.x3^c in RHS, 0 <= a, b, c <= 9", mismatches, 0)

    factors = [(parse_ideal(src, R3), e) for src, e in H_FACTORS]
    rows = mi.expansion_report(factors)
    report.expect("monomials in the expansion of the product", "len(expansion_report(factors))", len(rows), 54)
    for number, row in enumerate(rows, start=1):
        witness = mi.membership_witness(rhs, row.monomial)
        name = H_GENERATORS.get(witness.exponents, witness.format('.')) if witness else None
        report.add_step(
            f"expansion row {number}",
            f"{row.witness} = {row.monomial.format('.')}",
            expected='in (m_i) for some i',
            outcome=f"in ({name})" if name else 'not contained',
            passed=witness is not None,
        )
    produced = {row.monomial.exponents for row in rows}
    report.expect("each m_i occurs among the expansion monomials", "{m0, ..., m4'} ⊆ rows",
                  all(e in produced for e in H_GENERATORS))


H_BIS_LEFT = '(x2, x3)^5 & (x1, x3)^4'
H_BIS_RIGHT = '(x1.x2, x3)^4.(x2, x3)'


@register('lemma-h1bis')
def check_lemma_h1bis(report: VerificationReport, options: CheckOptions) -> None:
    left = parse_ideal(H_BIS_LEFT, R3)
    right = parse_ideal(H_BIS_RIGHT, R3)

    report.expect("the two ideals are equal", f"{H_BIS_LEFT} = {H_BIS_RIGHT}", mi.equals(left, right))
    expected = MonomialIdeal.from_exponents(R3, (4, 5, 0), (3, 4, 1), (2, 3, 2), (1, 2, 3), (0, 1, 4), (0, 0, 5))
    report.expect("minimal generators", f"mingens({H_BIS_LEFT})", left.format('.'), expected.format('.'))

    for a in range(5):
        b = 4 - a
        for exponents in ((a, a + 1, b), (a, a, b + 1)):
            m = Monomial(R3, exponents)
            witness = mi.membership_witness(left, m)
            report.add_step(
                f"case a={a}, b={b}",
                f"{m.format('.')} in {H_BIS_LEFT}",
                expected='divisible by a generator',
                outcome=f"divisible by {witness.format('.')}" if witness else 'not contained',
                passed=witness is not None,
            )
    for g in left.sorted_gens():
        witness = mi.membership_witness(right, g)
        report.add_step(
            "left-hand generator lies in the right-hand side",
            f"{g.format('.')} in {H_BIS_RIGHT}",
            expected='divisible by a generator',
            outcome=f"divisible by {witness.format('.')}" if witness else 'not contained',
            passed=witness is not None,
        )

    meet = parse_ideal(H_BIS_LEFT, R3, engine='groebner')
    report.expect("intersection recomputed with Groebner bases", f"groebner({H_BIS_LEFT}) = {H_BIS_RIGHT}",
                  _same_ideal(meet, right.to_poly_ideal(), options.monomial_order))


@register('localization')
def check_localization(report: VerificationReport, options: CheckOptions) -> None:
    h = parse_ideal(H_PRODUCT, R3)
    rhs_poly = parse_ideal(H_INTERSECTION, R3).to_poly_ideal()
    for var, expected_src in (('x1', '(x2, x3)^5'), ('x2', '(x1, x3)^4'), ('x3', '(x1, x2)^4')):
        expected = parse_ideal(expected_src, R3)
        saturated = mi.saturate_variable(h, var)
        report.expect(f"away from {var} = 0", f"(H : {var}^inf) = {expected_src}",
                      mi.equals(saturated, expected))
        via_groebner = saturate_by_poly(rhs_poly, Polynomial.variable(R3, var))
        report.expect(f"away from {var} = 0, Groebner saturation", f"sat(RHS, {var}) = {expected_src}",
                      _same_ideal(via_groebner, expected.to_poly_ideal(), options.monomial_order))


# ============================================================================
# BLOW-UP CHARTS
# ============================================================================

X_TILDE_1 = '(1 + u*x1)*(x1 + x2 + x3 + x1*x2) + x1*x3'


@register('blowup-charts')
def check_blowup_charts(report: VerificationReport, options: CheckOptions) -> None:
    order = options.monomial_order
    x1, x2, x3 = R3.gens()

    # X': blow-up of (x1.x2, x2.x3, x3.x1), chart x1.x2 != 0
    first = chart_ideal(PolyIdeal(R3), [x1 * x2, x2 * x3, x3 * x1], 0, ['u', 'v'])
    amb1 = first.ambient
    graph = _ideal(amb1, 'x3 - u*x1', 'x3 - v*x2')
    report.expect("first chart ideal", "chart(x1.x2, x2.x3, x3.x1; 0)", _same_ideal(first.chart_ideal, graph, order))

    hypersurface = eliminate(first.chart_ideal, ['x3'])
    expected = _ideal(hypersurface.ring, 'x2*v - x1*u')
    report.expect("first chart is the hypersurface x2.v = x1.u", "eliminate(chart, x3)",
                  _same_ideal(hypersurface, expected, order))
    certificate = [Polynomial.variable(hypersurface.ring, n) for n in ('x1', 'x2', 'u', 'v')]
    report.expect("hypersurface singular only at the origin (Morse point)", "sing(x2.v - x1.u) ~ (x1, x2, u, v)",
                  smoothness_verdict(expected, 1, certificate), SmoothnessVerdict.SINGULAR_LOCUS_CERTIFIED)
    report.expect("tangent space at the Morse point", "tangent_dim(x2.v - x1.u, 0)",
                  zariski_tangent_dim(expected, PointQ.origin(hypersurface.ring)), 4)
    report.expect("chart singular locus in five variables", "sing(x3 - u.x1, x3 - v.x2) ~ (x1, x2, x3, u, v)",
                  smoothness_verdict(graph, 2, list(amb1.gens())), SmoothnessVerdict.SINGULAR_LOCUS_CERTIFIED)

    report.expect("(x1, x2.x3) is principal on X'", "(x1, x2.x3) = (x1)",
                  is_principal_in_chart(first, PolyIdeal(R3, [x1, x2 * x3]), x1.embed(amb1)))
    report.expect("(x2, x1.x3) is principal on X'", "(x2, x1.x3) = (x2)",
                  is_principal_in_chart(first, PolyIdeal(R3, [x2, x1 * x3]), x2.embed(amb1)))
    report.expect("(x3, x1.x2) is x1.(u, x2) on X'", "(x3, x1.x2) = x1.(u, x2)",
                  ideal_equal_in_chart(first, PolyIdeal(R3, [x3, x1 * x2]), _ideal(amb1, 'x1*u', 'x1*x2')))
    report.expect("maximal ideal of the origin on X'", "(x1, x2, x3) = (x1, x2)",
                  ideal_equal_in_chart(first, PolyIdeal.from_variables(R3, 'x1', 'x2', 'x3'),
                                       PolyIdeal.from_variables(amb1, 'x1', 'x2')))

    # planes of X' over the curves: P1 = (x2, u), P2 = (x1, v), P3 = (x1, x2)
    planes = {name: PolyIdeal.from_variables(amb1, *gens)
              for name, gens in (('P1', ('x2', 'u')), ('P2', ('x1', 'v')), ('P3', ('x1', 'x2')))}
    report.expect("P1 and P2 meet only at the origin of X'", "P1 + P2 = (x1, x2, x3, u, v)",
                  ideal_equal_in_chart(first, planes['P1'] + planes['P2'], PolyIdeal(amb1, list(amb1.gens()))))
    for curve, pieces in ((('x2', 'x3'), ('P1', 'P3')), (('x1', 'x3'), ('P2', 'P3')), (('x1', 'x2'), ('P3',))):
        union = ' | '.join(pieces)
        report.expect(f"pull-back of ({', '.join(curve)}) to X' is {union}",
                      f"({', '.join(curve)}) = {' & '.join(pieces)}",
                      ideal_equal_in_chart(first, PolyIdeal.from_variables(R3, *curve),
                                           intersect_all([planes[p] for p in pieces])))

    # X'': blow-up of (u, x2) on X'
    u, x2_1 = Polynomial.variable(amb1, 'u'), Polynomial.variable(amb1, 'x2')
    second = chart_ideal(first.chart_ideal, [u, x2_1], 0, ['z'])
    amb2 = second.ambient
    affine = _ideal(amb2, 'x1 - v*z', 'x2 - u*z', 'x3 - u*v*z')
    report.expect("second chart is affine 3-space in u, v, z", "chart(u, x2; 0)",
                  _same_ideal(second.chart_ideal, affine, order))
    report.expect("second chart is smooth", "sing(x1 - v.z, x2 - u.z, x3 - u.v.z)",
                  smoothness_verdict(affine, 3), SmoothnessVerdict.SMOOTH)
    report.expect("(u, x2) becomes principal", "(u, x2) = (u)", is_principal_in_chart(second, PolyIdeal(amb1, [u, x2_1]), u))
    report.expect("exceptional ideal is z.(u, v)", "(x1, x2, x3) = (u.z, v.z)",
                  ideal_equal_in_chart(second, PolyIdeal.from_variables(R3, 'x1', 'x2', 'x3'),
                                       _ideal(amb2, 'u*z', 'v*z')))
    z = Polynomial.variable(amb2, 'z')
    for curve, trace in (('x2, x3', 'z, u'), ('x1, x3', 'z, v')):
        strict = strict_transform(second, _ideal(R3, *curve.split(', ')), divisor=z)
        report.expect(f"strict transform of ({curve}) meets z = 0", f"strict({curve}) + (z) = ({trace})",
                      ideal_equal_in_chart(second, strict + PolyIdeal.principal(z), _ideal(amb2, *trace.split(', '))))

    other = chart_ideal(first.chart_ideal, [u, x2_1], 1, ['w'])
    other_affine = _ideal(other.ambient, 'u - w*x2', 'v - w*x1', 'x3 - w*x1*x2')
    report.expect("other chart of the second blow-up", "chart(u, x2; 1)",
                  _same_ideal(other.chart_ideal, other_affine, order))
    report.expect("other chart is smooth", "sing(u - w.x2, v - w.x1, x3 - w.x1.x2)",
                  smoothness_verdict(other_affine, 3), SmoothnessVerdict.SMOOTH)

    rng = np.random.default_rng(options.seed)
    lifted_first = lifted_second = 0
    for _sample in range(5):
        base = PointQ(R3, (_nonzero(rng), _nonzero(rng), _nonzero(rng)))
        lifted_first += _vanishes(first.chart_ideal, first.lift(base))
        a, b, c = _nonzero(rng), _nonzero(rng), _nonzero(rng)
        on_x_prime = PointQ(amb1, (a, b, c * a, c, Fraction(c * a, b)))
        lifted_second += (_vanishes(second.chart_ideal, second.lift(on_x_prime))
                          and _vanishes(other.chart_ideal, other.lift(on_x_prime)))
    report.expect("generic points lift into the first chart", f"5 random points, seed {options.seed}", lifted_first, 5)
    report.expect("generic points of X' lift into both second charts", f"5 random points, seed {options.seed}",
                  lifted_second, 5)

    r4 = VarSet.of('x1', 'x2', 'x3', 'u')
    change = [parse_polynomial(X_TILDE_1, r4)] + [Polynomial.variable(r4, n) for n in ('x2', 'x3', 'u')]
    report.expect("coordinate change is invertible at the origin", f"det J({X_TILDE_1}, x2, x3, u)(0)",
                  jacobian_det_at(change, PointQ.origin(r4)), Fraction(1))


# ============================================================================
# SURFACE AND CURVE FAMILIES
# ============================================================================

S_RING = VarSet.of('x', 'y', 'u', 'v')
S_GENERATORS = ('x*u - y*v', 'x*v - y*u', 'y*u - y*v')


@register('surface-example')
def check_surface_example(report: VerificationReport, options: CheckOptions) -> None:
    order = options.monomial_order
    surface = _ideal(S_RING, *S_GENERATORS)
    planes = [
        PolyIdeal.from_variables(S_RING, 'u', 'v'),
        PolyIdeal.from_variables(S_RING, 'x', 'y'),
        _ideal(S_RING, 'x - y', 'u - v'),
    ]
    report.expect("S is the union of three planes", "I_S = (u, v) & (x, y) & (x - y, u - v)",
                  _same_ideal(surface, intersect_all(planes), order))

    xu = parse_polynomial('x*u', S_RING)
    for product in ('x*v', 'y*u', 'y*v'):
        difference = parse_polynomial(product, S_RING) - xu
        report.expect(f"{product} = x*u on S", f"{difference} in I_S", ideal_member(difference, surface, order))
    target = parse_polynomial('x*v - x*u', S_RING)
    cofactors = member_cofactors(target, surface, order)
    report.expect("x*v - x*u has a cofactor expression over the basis", "member_cofactors(x*v - x*u, I_S)",
                  cofactors is not None)
    rebuilt = sum((c * g for c, g in cofactors or ()), Polynomial.zero(S_RING))
    report.expect("the cofactors rebuild x*v - x*u", "sum(c_i * g_i) = x*v - x*u",
                  cofactors is not None and rebuilt == target)
    report.expect("every cofactor pairs with an element of I_S", "g_i in I_S",
                  all(ideal_member(g, surface, order) for _, g in cofactors or ()))

    product = PolyIdeal.from_variables(S_RING, 'x', 'y') * PolyIdeal.from_variables(S_RING, 'u', 'v')
    report.expect("(x, y).(u, v) is principal on S", "(x, y).(u, v) + I_S = (x*u) + I_S",
                  _same_ideal(product + surface, PolyIdeal.principal(xu) + surface, order))


CURVE_RING = VarSet.of('s', 'x', 'y', 'z')


@register('two-curves')
def check_two_curves(report: VerificationReport, options: CheckOptions) -> None:
    order = options.monomial_order
    family = intersect_all([
        PolyIdeal.from_variables(CURVE_RING, 'x', 'y'),
        _ideal(CURVE_RING, 'x - s', 'z'),
    ])
    expected = _ideal(CURVE_RING, 'x*(x - s)', 'x*z', 'y*(x - s)', 'y*z')
    report.expect("ideal of the two-curve family", "I_X = (x, y) & (x - s, z)", _same_ideal(family, expected, order))
    s = Polynomial.variable(CURVE_RING, 's')
    report.expect("X has no s-torsion", "(I_X : s) = I_X", _same_ideal(quotient_by_poly(family, s), family, order))

    fiber = specialize(family, {'s': 0})
    ring = fiber.ring
    report.expect("fiber at s = 0", "I_X|s=0 = (x^2, x*y, x*z, y*z)",
                  _same_ideal(fiber, _ideal(ring, 'x^2', 'x*y', 'x*z', 'y*z'), order))
    x = Polynomial.variable(ring, 'x')
    report.expect("x is not in the fiber ideal", "x in I_X|s=0", ideal_member(x, fiber, order), False)
    report.expect("x is nilpotent on the fiber", "x in rad(I_X|s=0)", radical_member(x, fiber))
    report.expect("Zariski tangent space of X at the origin", "tangent_dim(I_X, 0)",
                  zariski_tangent_dim(family, PointQ.origin(CURVE_RING)), 4)

    reduced = _ideal(ring, 'x', 'y*z')
    report.expect("reduced fiber", "rad(I_X|s=0) = (x, y*z)", _same_radical(fiber, reduced))
    report.expect("tangent space of the reduced fiber", "tangent_dim((x, y*z), 0)",
                  zariski_tangent_dim(reduced, PointQ.origin(ring)), 2)


@register('three-curves')
def check_three_curves(report: VerificationReport, options: CheckOptions) -> None:
    order = options.monomial_order
    family = _ideal(CURVE_RING, 'y*(x - s)', 'x*z', 'y*z')
    s = Polynomial.variable(CURVE_RING, 's')
    report.expect("Y has no s-torsion", "(I_Y : s) = I_Y", _same_ideal(quotient_by_poly(family, s), family, order))
    report.expect("Y is the union of three curves", "I_Y = (x, y) & (y, z) & (x - s, z)",
                  _same_ideal(family, intersect_all([
                      PolyIdeal.from_variables(CURVE_RING, 'x', 'y'),
                      PolyIdeal.from_variables(CURVE_RING, 'y', 'z'),
                      _ideal(CURVE_RING, 'x - s', 'z'),
                  ]), order))

    fiber = specialize(family, {'s': 0})
    ring = fiber.ring
    report.expect("fiber at s = 0", "I_Y|s=0 = (x*y, x*z, y*z)",
                  _same_ideal(fiber, _ideal(ring, 'x*y', 'x*z', 'y*z'), order))
    axes = intersect_all([
        PolyIdeal.from_variables(ring, 'x', 'y'),
        PolyIdeal.from_variables(ring, 'y', 'z'),
        PolyIdeal.from_variables(ring, 'x', 'z'),
    ])
    report.expect("fiber is reduced: the three coordinate axes", "I_Y|s=0 = (x, y) & (y, z) & (x, z)",
                  _same_ideal(fiber, axes, order))


CONFIG_RING = VarSet.of('x1', 'x2', 'x3', 'u')


@register('curve-configuration')
def check_curve_configuration(report: VerificationReport, options: CheckOptions) -> None:
    order = options.monomial_order
    f1 = _ideal(CONFIG_RING, 'x2', 'x3')
    f2 = _ideal(CONFIG_RING, 'x1 + x2 + x1*x2', 'x3')
    f3 = _ideal(CONFIG_RING, '(x1 + x3)*(1 + u*x1) + x1*x3', 'x2')

    report.expect("the three curves meet only at P", "F1 + F2 + F3 = (x1, x2, x3)",
                  _same_ideal(f1 + f2 + f3, PolyIdeal.from_variables(CONFIG_RING, 'x1', 'x2', 'x3'), order))
    report.expect("F1 and F3 meet at P and Q(u)", "F1 + F3 = (x2, x3, x1 + u*x1^2)",
                  _same_ideal(f1 + f3, _ideal(CONFIG_RING, 'x2', 'x3', 'x1 + u*x1^2'), order))

    q = PointQ.from_mapping(CONFIG_RING, {'x1': Fraction(-1, 2), 'u': 2})
    report.expect("Q(2) lies on F1", "F1(-1/2, 0, 0, 2) = 0", _vanishes(f1, q))
    report.expect("Q(2) lies on F3", "F3(-1/2, 0, 0, 2) = 0", _vanishes(f3, q))
    report.expect("Q(2) is off F2", "F2(-1/2, 0, 0, 2) = 0", _vanishes(f2, q), False)

    x_tilde = parse_polynomial(X_TILDE_1, CONFIG_RING)
    report.expect("new coordinate vanishes on F2", f"{X_TILDE_1} in F2", ideal_member(x_tilde, f2, order))
    report.expect("new coordinate vanishes on F3", f"{X_TILDE_1} in F3", ideal_member(x_tilde, f3, order))


# ============================================================================
# CYCLE CLASSES
# ============================================================================

@register('cycles', needs_scenario=True)
def check_cycles(report: VerificationReport, options: CheckOptions) -> None:
    scenario = load_scenario(options.scenario)
    group = scenario.group

    if scenario.certificate is not None:
        text = group.format(scenario.certificate)
        report.expect("certificate is homologous to zero", f"{text} ~ 0", is_zero(group, scenario.certificate))
        if scenario.expect == Expectation.EFFECTIVE_ZERO:
            report.expect("certificate is effective", f"{text} >= 0", scenario.certificate.is_effective)

    found = search_effective_zero(group, options.bound)
    outcome = group.format(found) if found is not None else 'none'
    expression = f"search_effective_zero(bound={options.bound})"
    if scenario.expect == Expectation.EFFECTIVE_ZERO:
        report.add_step(
            "bounded search finds an effective cycle homologous to zero", expression,
            expected='an effective cycle ~ 0',
            outcome=outcome,
            passed=found is not None and found.is_effective and is_zero(group, found),
        )
    elif scenario.expect == Expectation.NONE:
        report.expect("no effective cycle is homologous to zero", expression, outcome, 'none')
    else:
        report.add_step("bounded search", expression, expected='any', outcome=outcome, passed=True)
