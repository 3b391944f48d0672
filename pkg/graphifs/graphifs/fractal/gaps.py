"""
Gap-length sets as unions of multiplicative semigroup cosets, and
multiplicative rational independence of positive rationals.

A coset ``y<1, x1, ..., xj>`` is the set of ``y * x1**n1 * ... * xj**nj`` over
non-negative integer exponents.
"""
import collections
import functools
import logging
import operator
from fractions import Fraction

import attr
import sympy
from django.conf import settings

from .exceptions import (
    BdMismatch,
    ContainsOne,
    GeneratorNotContracting,
    NonPositive,
    NotOneVertex,
    PrimeFactorTooLarge,
)
from .ifs_graph import as_family, format_rational, parse_rational
from .intervals import GapMultiset, level_one_gaps


logger = logging.getLogger(__name__)


def _exponent_pairs(exponents):
    return tuple(sorted((int(p), int(e)) for p, e in dict(exponents).items() if e))


@attr.frozen
class ExponentVector:
    exponents: tuple = attr.field(converter=_exponent_pairs, factory=tuple)

    def __getitem__(self, prime):
        return dict(self.exponents).get(prime, 0)

    def __len__(self):
        return len(self.exponents)

    @property
    def primes(self):
        return tuple(prime for prime, _ in self.exponents)

    def as_dict(self):
        return dict(self.exponents)

    def value(self):
        return functools.reduce(
            operator.mul,
            (Fraction(prime) ** exponent for prime, exponent in self.exponents),
            Fraction(1),
        )


def _factor_integer(n):
    factors = sympy.factorint(n, limit=settings.PRIME_LIMIT)
    too_large = [p for p in factors if p > settings.PRIME_LIMIT]
    if too_large:
        raise PrimeFactorTooLarge(
            f'{n} has a factor {too_large[0]} above {settings.PRIME_LIMIT}'
        )
    return factors


def factor_rational(q):
    q = parse_rational(q)
    if q <= 0:
        raise NonPositive(f'{q} is not positive')
    exponents = collections.Counter(_factor_integer(q.numerator))
    exponents.subtract(_factor_integer(q.denominator))
    return ExponentVector(exponents)


@attr.frozen
class IndependenceResult:
    labels: tuple
    values: tuple
    independent: bool
    witness: tuple = attr.field(default=None)

    @witness.validator
    def _check_witness(self, attribute, value):
        if value is None:
            return
        product = functools.reduce(
            operator.mul,
            (v ** m for v, m in zip(self.values, value)),
            Fraction(1),
        )
        if product != 1 or not any(value):
            raise ValueError(f'witness {value} does not reconstruct 1')

    def __bool__(self):
        return self.independent

    def as_document(self):
        document = {
            'independent': self.independent,
            'values': {
                label: format_rational(value)
                for label, value in zip(self.labels, self.values)
            },
        }
        if self.witness is not None:
            document['witness'] = dict(zip(self.labels, self.witness))
        return document


def _integer_kernel_vector(vector):
    scale = sympy.ilcm(*(sympy.Rational(entry).q for entry in vector))
    integers = [int(sympy.Rational(entry) * scale) for entry in vector]
    divisor = functools.reduce(sympy.igcd, (abs(n) for n in integers if n))
    integers = [n // divisor for n in integers]
    leading = next(n for n in integers if n)
    if leading < 0:
        integers = [-n for n in integers]
    return tuple(integers)


def is_multiplicatively_independent(values, labels=None):
    """
    Decide whether no nonzero integer vector ``m`` gives ``prod v_i**m_i == 1``.

    Values are read in order; a repeated value is dependent with witness
    ``e_i - e_j`` for the first repeated pair.
    """
    values = tuple(parse_rational(value) for value in values)
    labels = tuple(labels) if labels else tuple(format_rational(v) for v in values)
    for value in values:
        if value == 1:
            raise ContainsOne('1 is multiplicatively dependent on its own')
    vectors = [factor_rational(value) for value in values]

    for j, value in enumerate(values):
        for i in range(j):
            if values[i] == value:
                witness = [0] * len(values)
                witness[i], witness[j] = 1, -1
                return IndependenceResult(labels, values, False, tuple(witness))

    primes = sorted({prime for vector in vectors for prime in vector.primes})
    # columns are the values, rows the primes
    matrix = sympy.Matrix(
        len(primes), len(values), lambda row, column: vectors[column][primes[row]]
    )
    kernel = matrix.nullspace()
    if not kernel:
        return IndependenceResult(labels, values, True)
    witness = _integer_kernel_vector(kernel[0])
    logger.debug('dependence witness %s for %s', witness, labels)
    return IndependenceResult(labels, values, False, witness)


def _scale(value):
    value = parse_rational(value)
    if value <= 0:
        raise NonPositive(f'coset scale {value} is not positive')
    return value


def _generators(values):
    generators = {parse_rational(value) for value in values}
    if any(g <= 0 for g in generators):
        raise NonPositive('coset generators must be positive')
    return tuple(sorted(generators))


@attr.frozen
class Coset:
    scale: Fraction = attr.field(converter=_scale)
    generators: tuple = attr.field(converter=_generators)

    def __str__(self):
        inside = ', '.join(['1'] + [format_rational(g) for g in self.generators])
        return f'{format_rational(self.scale)}<{inside}>'


@attr.frozen
class CosetUnion:
    cosets: tuple = attr.field(converter=tuple)

    @cosets.validator
    def _check_nonempty(self, attribute, value):
        if not value:
            raise ValueError('a coset union needs at least one coset')

    def __str__(self):
        return ' U '.join(str(coset) for coset in self.cosets)

    def __iter__(self):
        return iter(self.cosets)

    def __len__(self):
        return len(self.cosets)


def two_vertex_gap_expression(family, equal_bd=False):
    """
    ``G_u = g_u<1, a> U g_u bd<1, a, bd, c> U g_v b<1, a, bd, c>`` written with
    the edge ratios; with ``equal_bd`` the product ``bd`` is ``b**2``.
    """
    family = as_family(family)
    r1, r2, r3, r4 = family.ratios
    if equal_bd:
        if not family.equal_bd:
            raise BdMismatch(f'edge ratios {r2} and {r4} differ')
        cross = r2 ** 2
    else:
        cross = r2 * r4
    shared = (r1, cross, r3)
    return CosetUnion((
        Coset(family.g_u, (r1,)),
        Coset(family.g_u * cross, shared),
        Coset(family.g_v * r2, shared),
    ))


def one_vertex_gap_expression(ifs):
    """ One coset per level-one gap, generated by all the edge ratios """
    if not ifs.is_one_vertex:
        raise NotOneVertex(f'{ifs} has more than one vertex')
    ratios = [edge.ratio for edge in ifs.edges]
    return CosetUnion(Coset(gap, ratios) for gap in level_one_gaps(ifs, 0))


def _expand(value, generators, start, cutoff):
    yield value
    for index in range(start, len(generators)):
        product = value * generators[index]
        if product >= cutoff:
            yield from _expand(product, generators, index, cutoff)


def enumerate_coset_union(union, cutoff):
    """ Elements at or above ``cutoff``, one count per coset and exponent tuple """
    cutoff = parse_rational(cutoff)
    if cutoff <= 0:
        raise NonPositive(f'cutoff {cutoff} is not positive')
    counts = collections.Counter()
    for coset in union:
        if any(g >= 1 for g in coset.generators):
            raise GeneratorNotContracting(f'{coset} has a generator >= 1')
        if coset.scale >= cutoff:
            counts.update(_expand(coset.scale, coset.generators, 0, cutoff))
    return counts


@attr.frozen
class GapComparison:
    equal: bool
    witness: Fraction = None

    def __bool__(self):
        return self.equal


def _as_counter(values):
    if isinstance(values, GapMultiset):
        return values.counter()
    return collections.Counter(values)


def compare_gap_sets(first, second, mode='set'):
    first, second = _as_counter(first), _as_counter(second)
    if mode == 'set':
        difference = set(first) ^ set(second)
    elif mode == 'multiset':
        difference = {value for value in set(first) | set(second) if first[value] != second[value]}
    else:
        raise ValueError(f'unknown comparison mode {mode!r}')
    if not difference:
        return GapComparison(True)
    return GapComparison(False, min(difference))
