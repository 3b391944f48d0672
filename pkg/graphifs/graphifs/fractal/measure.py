"""
Exact Hausdorff measure certification for the two-vertex family.

Three conditions are checked after solving for the dimension ``s``:

1. the hulls at u and v have the same length (exact),
2. ``h_v / h_u <= 1``,
3. ``(a + g_u)(|I_u|^s - a^s) / (b a^s) >= 1``.

When all three clear ``CONDITION_MARGIN`` the measures are
``H_u = |I_u|^s`` and ``H_v = |I_u|^s (1 - r_e1^s) / r_e2^s``. Values within
the margin of a bound are reported as boundary cases and never certified.
"""
import enum
import logging

import attr
from django.conf import settings

from graphifs.pipeline.models import AbstractStepProgressPipeline, Severity
from .dimension import perron_vector, solve_dimension
from .exceptions import DimensionAtOne, NotCertified
from .ifs_graph import TwoVertexFamily, as_family


logger = logging.getLogger(__name__)


class ConditionStatus(enum.Enum):
    HOLDS = 'holds'
    FAILS = 'fails'
    BOUNDARY = 'boundary'


def _at_most(value, bound, margin):
    if value <= bound - margin:
        return ConditionStatus.HOLDS
    if value > bound + margin:
        return ConditionStatus.FAILS
    return ConditionStatus.BOUNDARY


def _at_least(value, bound, margin):
    if value >= bound + margin:
        return ConditionStatus.HOLDS
    if value < bound - margin:
        return ConditionStatus.FAILS
    return ConditionStatus.BOUNDARY


@attr.frozen
class ConditionReport:
    cond1_holds: bool
    cond2_value: float
    cond2_status: ConditionStatus
    cond3_value: float
    cond3_status: ConditionStatus
    margin: float

    @property
    def cond2_holds(self):
        return self.cond2_status is ConditionStatus.HOLDS

    @property
    def cond3_holds(self):
        return self.cond3_status is ConditionStatus.HOLDS

    @property
    def all_hold(self):
        return self.cond1_holds and self.cond2_holds and self.cond3_holds

    @property
    def failed_conditions(self):
        failed = []
        if not self.cond1_holds:
            failed.append(1)
        if self.cond2_status is ConditionStatus.FAILS:
            failed.append(2)
        if self.cond3_status is ConditionStatus.FAILS:
            failed.append(3)
        return tuple(failed)

    @property
    def boundary_conditions(self):
        return tuple(
            index for index, status in ((2, self.cond2_status), (3, self.cond3_status))
            if status is ConditionStatus.BOUNDARY
        )

    def as_document(self):
        return {
            'cond1_holds': self.cond1_holds,
            'cond2_value': self.cond2_value,
            'cond2_status': self.cond2_status.value,
            'cond3_value': self.cond3_value,
            'cond3_status': self.cond3_status.value,
            'margin': self.margin,
        }


def condition_three_value(family, s):
    family = as_family(family)
    a, b = float(family.a), float(family.b)
    length_u = float(family.length_u)
    return (a + float(family.g_u)) * (length_u ** s - a ** s) / (b * a ** s)


def check_conditions(family, s, h):
    family = as_family(family)
    margin = settings.CONDITION_MARGIN
    cond2_value = h[1] / h[0]
    cond3_value = condition_three_value(family, s)
    return ConditionReport(
        cond1_holds=family.length_u == family.length_v,
        cond2_value=cond2_value,
        cond2_status=_at_most(cond2_value, 1.0, margin),
        cond3_value=cond3_value,
        cond3_status=_at_least(cond3_value, 1.0, margin),
        margin=margin,
    )


def _measures(family, s):
    r1, r2, _, _ = (float(ratio) for ratio in family.ratios)
    measure_u = float(family.length_u) ** s
    return measure_u, measure_u * (1 - r1 ** s) / r2 ** s


def exact_measures(family, s):
    """ (H^s(F_u), H^s(F_v)) for a family whose conditions all hold """
    family = as_family(family)
    conditions = check_conditions(family, s, perron_vector(family.to_ifs(), s))
    if not conditions.all_hold:
        raise NotCertified(
            f'conditions {conditions.failed_conditions or conditions.boundary_conditions} '
            f'do not hold for {family}'
        )
    return _measures(family, s)


def density_function(family, s, h, vertex, x, y):
    """
    Density of a pair of level-one pieces of lengths ``x`` (left) and ``y``
    (right) across the gap at ``vertex``.
    """
    family = as_family(family)
    if vertex == 0:
        gap, weight = family.g_u, h[1] / h[0]
    else:
        gap, weight = family.g_v, h[0] / h[1]
    x, y = float(x), float(y)
    return (x ** s + weight * y ** s) / (x + float(gap) + y) ** s


def y_max_ratio_from_quotient(quotient, s):
    if abs(1 - s) < 1e-12:
        raise DimensionAtOne(f's = {s!r} is too close to 1')
    return quotient ** (1 / (1 - s))


def y_max_ratio(family, s):
    """ Where ``f_u(a, .)`` peaks, as a multiple of b """
    return y_max_ratio_from_quotient(condition_three_value(family, s), s)


class CertificationStatus(enum.Enum):
    CERTIFIED = 'certified'
    FAILED_CONDITION = 'failed_condition'
    INCONCLUSIVE = 'inconclusive'


@attr.frozen
class CertificationReport:
    family: TwoVertexFamily
    dimension: object
    conditions: ConditionReport
    status: CertificationStatus
    failed_condition: int = None
    measures: tuple = attr.field(default=None)
    diagnostics: tuple = attr.field(default=(), eq=False)

    @measures.validator
    def _check_measures(self, attribute, value):
        if (value is not None) != (self.status is CertificationStatus.CERTIFIED):
            raise ValueError('measures are reported exactly when certified')

    @property
    def certified(self):
        return self.status is CertificationStatus.CERTIFIED

    def as_document(self):
        document = {
            'family': self.family.as_document(),
            'status': self.status.value,
            'dimension': self.dimension.as_document(),
            'conditions': self.conditions.as_document(),
            'diagnostics': [d.as_document() for d in self.diagnostics],
        }
        if self.failed_condition is not None:
            document['failed_condition'] = self.failed_condition
        if self.measures is not None:
            document['measures'] = {'u': self.measures[0], 'v': self.measures[1]}
        return document


class CertificationStage(enum.Enum):
    DIMENSION = 'dimension'
    CONDITIONS = 'conditions'
    MEASURES = 'measures'


class CertificationPipeline(AbstractStepProgressPipeline):

    name = 'certification'

    def __init__(self, family, tol=None, notifiers=None):
        super().__init__(notifiers=notifiers)
        self.family = as_family(family)
        self.tol = tol
        self.dimension = None
        self.conditions = None
        self.measures = None
        self.add_progress_total_units(5)

    def __str__(self):
        return f'{self.name} of {self.family}'

    def act(self):
        with self.stage_context(CertificationStage.DIMENSION):
            with self.step_context('solve') as data:
                self.dimension = solve_dimension(self.family.to_ifs(), self.tol)
                data.update(s=self.dimension.s, rho_residual=self.dimension.rho_residual)

        with self.stage_context(CertificationStage.CONDITIONS):
            self.conditions = check_conditions(
                self.family, self.dimension.s, self.dimension.h
            )
            self._condition_step(
                'hull_lengths', self.conditions.cond1_holds,
                length_u=str(self.family.length_u), length_v=str(self.family.length_v),
            )
            self._condition_step(
                'measure_ratio', self.conditions.cond2_holds,
                value=self.conditions.cond2_value,
                status=self.conditions.cond2_status.value,
            )
            self._condition_step(
                'quotient', self.conditions.cond3_holds,
                value=self.conditions.cond3_value,
                status=self.conditions.cond3_status.value,
            )

        with self.stage_context(CertificationStage.MEASURES):
            with self.step_context('measures') as data:
                if self.conditions.all_hold:
                    self.measures = _measures(self.family, self.dimension.s)
                    data.update(u=self.measures[0], v=self.measures[1])
                else:
                    data.update(skipped=True)

    def _condition_step(self, step, holds, **details):
        with self.step_context(step) as data:
            data.update(details)
            if not holds:
                self.record(Severity.WARNING, message='condition not satisfied', **details)

    def report(self):
        conditions = self.conditions
        failed = conditions.failed_conditions
        if conditions.all_hold:
            status = CertificationStatus.CERTIFIED
        elif failed:
            status = CertificationStatus.FAILED_CONDITION
        else:
            status = CertificationStatus.INCONCLUSIVE
        return CertificationReport(
            family=self.family,
            dimension=self.dimension,
            conditions=conditions,
            status=status,
            failed_condition=failed[0] if failed else None,
            measures=self.measures,
            diagnostics=tuple(self.diagnostics),
        )


def certify(family, tol=None):
    pipeline = CertificationPipeline(family, tol=tol).run()
    if pipeline.exception is not None:
        raise pipeline.exception
    report = pipeline.report()
    logger.info('%s: %s', pipeline, report.status.value)
    return report
