"""
Affine charts of blow-ups, Jacobian smoothness and chart-level ideal checks.

A chart is only its ideal in the enlarged ring Q[base variables, chart
variables]; "modulo the chart" means adding chart_ideal before testing.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence, Tuple, Union

import sympy
from django.db import models
from django.utils.translation import gettext_lazy as _

from .exceptions import DimensionMismatchError, InvalidArgumentError, ZeroPolynomialError
from .groebner import (
    PointQ,
    PolyIdeal,
    ideal_equal,
    ideal_member,
    radical_member,
    saturate_by_poly,
)
from .poly_core import Polynomial, Scalar, VarSet, _check_same_ring

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BlowupChart:
    """
    One affine chart of the blow-up of base along (g_1, ..., g_k).

    chart_index selects the generator g_i taken as the local unit; chart_vars
    name the k - 1 ratios w_j = g_j / g_i. The chart ideal is the saturation of
    base + (g_j - w_j*g_i) by g_i. nonzerodivisor_assumed records that g_i is
    taken to be a non-zero-divisor on the base; it is not proved.
    """

    ambient: VarSet
    base_ideal: PolyIdeal
    blown_gens: Tuple[Polynomial, ...]
    chart_index: int
    chart_vars: Tuple[str, ...]
    chart_ideal: PolyIdeal
    nonzerodivisor_assumed: bool = True

    @property
    def local_unit(self) -> Polynomial:
        return self.blown_gens[self.chart_index].embed(self.ambient)

    def lift(self, point: Union[PointQ, Sequence[Scalar]]) -> PointQ:
        """The chart point over a base point where the local unit does not vanish."""
        if not isinstance(point, PointQ):
            point = PointQ(self.base_ideal.ring, tuple(point))
        unit = self.blown_gens[self.chart_index].evaluate(point.coordinates)
        if not unit:
            raise InvalidArgumentError(f"the local unit vanishes at {point}")
        ratios = [
            g.evaluate(point.coordinates) / unit
            for j, g in enumerate(self.blown_gens) if j != self.chart_index
        ]
        return PointQ(self.ambient, point.coordinates + tuple(ratios))

    def embed(self, ideal: PolyIdeal) -> PolyIdeal:
        if ideal.ring == self.ambient:
            return ideal
        return PolyIdeal(self.ambient, [g.embed(self.ambient) for g in ideal.gens])

    def __str__(self) -> str:
        return f"chart {self.chart_index} {self.chart_vars}: {self.chart_ideal}"


def chart_ideal(
    base: PolyIdeal,
    gens: Sequence[Polynomial],
    index: int,
    new_vars: Sequence[str],
) -> BlowupChart:
    gens = tuple(gens)
    new_vars = tuple(new_vars)
    for g in gens:
        _check_same_ring(base.ring, g.ring)
    if not any(gens):
        raise InvalidArgumentError("cannot blow up the zero ideal")
    if not 0 <= index < len(gens):
        raise InvalidArgumentError(f"chart index {index} out of range for {len(gens)} generators")
    if not gens[index]:
        raise ZeroPolynomialError(f"generator {index} is zero and cannot be a local unit")
    if len(new_vars) != len(gens) - 1:
        raise DimensionMismatchError(f"{len(gens)} generators need {len(gens) - 1} chart variables, got {len(new_vars)}")
    for name in new_vars:
        if name in base.ring:
            raise InvalidArgumentError(f"chart variable {name!r} already belongs to {base.ring}")

    ambient = base.ring.extend(new_vars)
    unit = gens[index].embed(ambient)
    others = [g.embed(ambient) for j, g in enumerate(gens) if j != index]
    relations = [
        g - Polynomial.variable(ambient, name) * unit for g, name in zip(others, new_vars)
    ]
    graph = PolyIdeal(ambient, [g.embed(ambient) for g in base.gens] + relations)
    saturated = saturate_by_poly(graph, unit)
    logger.debug(f"chart_ideal: local unit {gens[index]}, {len(saturated.gens)} generators over {ambient}")
    return BlowupChart(
        ambient=ambient,
        base_ideal=base,
        blown_gens=gens,
        chart_index=index,
        chart_vars=new_vars,
        chart_ideal=saturated,
    )


# ============================================================================
# JACOBIAN CRITERION
# ============================================================================

def _jacobian(polys: Sequence[Polynomial], ring: VarSet) -> sympy.Matrix:
    return sympy.Matrix([[f.diff(name).to_sympy() for name in ring.names] for f in polys])


def singular_locus_ideal(ideal: PolyIdeal, codim: int) -> PolyIdeal:
    """I plus every codim x codim minor of the Jacobian of its generators."""
    if codim < 1:
        raise InvalidArgumentError(f"codimension must be positive, got {codim}")
    rows, cols = len(ideal.gens), len(ideal.ring)
    if codim > min(rows, cols):
        raise DimensionMismatchError(f"no {codim}x{codim} minors in a {rows}x{cols} Jacobian")
    jacobian = _jacobian(ideal.gens, ideal.ring)
    minors = {}
    for row_sel in combinations(range(rows), codim):
        for col_sel in combinations(range(cols), codim):
            det = jacobian.extract(list(row_sel), list(col_sel)).det(method='berkowitz')
            minor = Polynomial.from_sympy(det, ideal.ring)
            if minor:
                minors.setdefault(minor, None)
    logger.debug(f"singular_locus_ideal: {len(minors)} nonzero {codim}x{codim} minors")
    return PolyIdeal(ideal.ring, list(ideal.gens) + list(minors))


class SmoothnessVerdict(models.TextChoices):
    SMOOTH = 'smooth', _('Smooth (singular ideal is the unit ideal)')
    SINGULAR_LOCUS_CERTIFIED = 'singular-locus-certified', _('Singular locus matches the certificate')
    INCONCLUSIVE = 'inconclusive', _('Inconclusive')


def smoothness_verdict(
    ideal: PolyIdeal,
    codim: int,
    certificate: Optional[Sequence[Polynomial]] = None,
) -> SmoothnessVerdict:
    """
    Classify V(I) with the Jacobian criterion.

    certificate lists generators of an ideal claimed to cut out the singular
    locus; it is accepted when both ideals have the same radical.
    """
    singular = singular_locus_ideal(ideal, codim)
    if singular.is_unit():
        return SmoothnessVerdict.SMOOTH
    if certificate:
        claimed = PolyIdeal(ideal.ring, certificate)
        if (all(radical_member(c, singular) for c in claimed.gens)
                and all(radical_member(g, claimed) for g in singular.gens)):
            return SmoothnessVerdict.SINGULAR_LOCUS_CERTIFIED
    return SmoothnessVerdict.INCONCLUSIVE


def jacobian_det_at(fns: Sequence[Polynomial], point: Union[PointQ, Sequence[Scalar]]) -> Fraction:
    if not fns:
        raise DimensionMismatchError("empty system")
    ring = fns[0].ring
    for f in fns:
        _check_same_ring(ring, f.ring)
    if len(fns) != len(ring):
        raise DimensionMismatchError(f"{len(fns)} functions in {len(ring)} variables is not a square system")
    coordinates = point.coordinates if isinstance(point, PointQ) else tuple(point)
    matrix = sympy.Matrix([
        [sympy.Rational(*_ratio(f.diff(name).evaluate(coordinates))) for name in ring.names]
        for f in fns
    ])
    det = sympy.Rational(matrix.det())
    return Fraction(int(det.p), int(det.q))


def gradient_at(f: Polynomial, point: Union[PointQ, Sequence[Scalar]]) -> Tuple[Fraction, ...]:
    coordinates = point.coordinates if isinstance(point, PointQ) else tuple(point)
    return tuple(f.diff(name).evaluate(coordinates) for name in f.ring.names)


def _ratio(value: Fraction) -> Tuple[int, int]:
    return value.numerator, value.denominator


# ============================================================================
# IDEALS MODULO A CHART
# ============================================================================

def is_principal_in_chart(chart: BlowupChart, ideal: PolyIdeal, candidate: Polynomial) -> bool:
    """True iff J + chart = (candidate) + chart."""
    ideal = chart.embed(ideal)
    candidate = candidate.embed(chart.ambient)
    modulo = ideal + chart.chart_ideal
    if not ideal_member(candidate, modulo):
        return False
    principal = PolyIdeal.principal(candidate) + chart.chart_ideal
    return all(ideal_member(g, principal) for g in ideal.gens)


def ideal_equal_in_chart(chart: BlowupChart, left: PolyIdeal, right: PolyIdeal) -> bool:
    return ideal_equal(chart.embed(left) + chart.chart_ideal, chart.embed(right) + chart.chart_ideal)


def strict_transform(chart: BlowupChart, ideal: PolyIdeal, divisor: Optional[Polynomial] = None) -> PolyIdeal:
    """
    Saturate J + chart by the exceptional divisor (the local unit unless given).
    """
    divisor = chart.local_unit if divisor is None else divisor.embed(chart.ambient)
    return saturate_by_poly(chart.embed(ideal) + chart.chart_ideal, divisor)
