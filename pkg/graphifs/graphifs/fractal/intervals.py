"""
Level-k interval approximations of the attractors and the self-similar measure.

The level-k intervals at a vertex are the hull images ``S_e(I_t(e))`` over
all paths ``e`` of length k from that vertex. Under the convex strong
separation condition they are disjoint and their order is inherited from the
parent level, so every computation here works on sorted exact rationals.
"""
import bisect
import collections
import enum
import functools
import itertools
import logging
from fractions import Fraction
from numbers import Integral

import attr
from django.conf import settings
from django.core.signals import setting_changed
from django.dispatch import receiver

from .exceptions import (
    IntervalOutsideHull,
    InvalidDepth,
    SamePath,
    ZeroLengthInterval,
)
from .ifs_graph import (
    ClosedInterval,
    PathLabel,
    compute_hulls,
    enumerate_paths,
    level_one_images,
    require_cssc,
)


logger = logging.getLogger(__name__)

LEVEL_CACHE_SIZE = 512


def _check_depth(k, minimum):
    if isinstance(k, bool) or not isinstance(k, Integral) or k < minimum:
        raise InvalidDepth(f'depth must be an integer >= {minimum}, got {k!r}')
    return int(k)


def as_interval(value):
    if isinstance(value, ClosedInterval):
        return value
    lo, hi = value
    return ClosedInterval(lo, hi)


@attr.frozen
class LevelInterval:
    interval: ClosedInterval
    path: PathLabel = None
    map: object = attr.field(default=None, eq=False)


@attr.frozen
class IntervalSet:
    vertex: int
    level: int
    items: tuple

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def intervals(self):
        return tuple(item.interval for item in self.items)

    def gaps(self):
        return [right.lo - left.hi for left, right in zip(self.intervals, self.intervals[1:])]


@functools.lru_cache(maxsize=LEVEL_CACHE_SIZE)
def _level_items(ifs, vertex, k):
    hull = compute_hulls(ifs)
    if k == 0:
        return (LevelInterval(hull[vertex]),)
    items = []
    for parent in _level_items(ifs, vertex, k - 1):
        terminal = parent.path.terminal if parent.path else vertex
        for _, edge in level_one_images(ifs, terminal, hull):
            if parent.path is None:
                path, similarity = PathLabel((edge,)), edge.map
            else:
                path = PathLabel(parent.path.edges + (edge,))
                similarity = parent.map.compose(edge.map)
            items.append(LevelInterval(similarity.image(hull[edge.target]), path, similarity))
    return tuple(items)


def level_intervals(ifs, vertex, k):
    """ Sorted level-k intervals at ``vertex``; level 0 is the hull """
    k = _check_depth(k, 0)
    vertex = ifs.check_vertex(vertex)
    require_cssc(ifs)
    return IntervalSet(vertex=vertex, level=k, items=_level_items(ifs, vertex, k))


def level_one_gaps(ifs, vertex):
    require_cssc(ifs)
    images = [image for image, _ in level_one_images(ifs, vertex)]
    return [right.lo - left.hi for left, right in zip(images, images[1:])]


@attr.frozen
class GapMultiset:
    vertex: int
    depth: int
    counts: tuple = attr.field(
        converter=lambda counts: tuple(sorted(collections.Counter(counts).items()))
    )

    def __len__(self):
        return sum(count for _, count in self.counts)

    def __contains__(self, length):
        return any(length == value for value, _ in self.counts)

    def counter(self):
        return collections.Counter(dict(self.counts))

    @property
    def lengths(self):
        return frozenset(value for value, _ in self.counts)

    def above(self, cutoff):
        return {value: count for value, count in self.counts if value >= cutoff}


def gap_lengths(ifs, vertex, k):
    """ Lengths of the open intervals of ``I_u`` left uncovered at level k """
    k = _check_depth(k, 1)
    intervals = level_intervals(ifs, vertex, k)
    return GapMultiset(vertex=intervals.vertex, depth=k, counts=intervals.gaps())


def verify_gap_fixed_point(ifs, k, gaps=gap_lengths):
    """
    Check that the level-(k+1) gaps at every vertex are its level-one gaps
    together with the level-k gaps at each edge target scaled by the edge ratio.

    ``gaps(ifs, vertex, depth)`` supplies the multisets being checked.
    """
    k = _check_depth(k, 1)
    require_cssc(ifs)
    for vertex in ifs.vertices:
        expected = collections.Counter(level_one_gaps(ifs, vertex))
        for edge in ifs.out_edges(vertex):
            for length, count in gaps(ifs, edge.target, k).counts:
                expected[edge.ratio * length] += count
        actual = gaps(ifs, vertex, k + 1).counter()
        if actual != expected:
            logger.debug('gap identity fails at vertex %d, level %d', vertex, k)
            return False
    return True


def default_gap_cutoff(ifs, k):
    """ Every gap not present at depth k is strictly shorter than this """
    k = _check_depth(k, 1)
    largest = max(max(level_one_gaps(ifs, vertex)) for vertex in ifs.vertices)
    return largest * ifs.max_ratio ** (k - 1)


@attr.frozen
class MeasureWeight:
    path: PathLabel
    weight: float


def path_weight(path, s, h):
    """ p_e = h_i(e)^-1 r_e^s h_t(e) """
    return h[path.terminal] * float(path.ratio) ** s / h[path.initial]


def measure_weights(ifs, s, h, vertex, k):
    k = _check_depth(k, 1)
    return tuple(
        MeasureWeight(path, path_weight(path, s, h))
        for path in enumerate_paths(ifs, vertex, k)
    )


@functools.lru_cache(maxsize=32)
def _weighted_level(ifs, s, h, vertex, k):
    items = _level_items(ifs, vertex, k)
    lows = [item.interval.lo for item in items]
    highs = [item.interval.hi for item in items]
    prefix = [0.0]
    prefix.extend(itertools.accumulate(path_weight(item.path, s, h) for item in items))
    return lows, highs, prefix


@receiver(setting_changed)
def _clear_level_caches(setting, **kwargs):
    if setting.startswith('HULL_'):
        _level_items.cache_clear()
        _weighted_level.cache_clear()


def measure_of_interval(ifs, s, h, vertex, interval, k):
    """
    Bounds on ``mu_u(J)`` from the level-k intervals: the lower bound sums
    the weights of intervals inside ``J``, the upper bound those whose
    interior meets ``J``.
    """
    k = _check_depth(k, 1)
    vertex = ifs.check_vertex(vertex)
    interval = as_interval(interval)
    require_cssc(ifs)
    hull = compute_hulls(ifs)[vertex]
    if not hull.contains(interval):
        raise IntervalOutsideHull(f'{interval} is not inside the hull {hull} of vertex {vertex}')
    lows, highs, prefix = _weighted_level(ifs, s, tuple(h), vertex, k)
    first_inside = bisect.bisect_left(lows, interval.lo)
    end_inside = bisect.bisect_right(highs, interval.hi)
    first_meeting = bisect.bisect_right(highs, interval.lo)
    end_meeting = bisect.bisect_left(lows, interval.hi)
    lower = prefix[end_inside] - prefix[first_inside] if end_inside > first_inside else 0.0
    upper = prefix[end_meeting] - prefix[first_meeting] if end_meeting > first_meeting else 0.0
    return max(lower, 0.0), max(upper, lower, 0.0)


def density(ifs, s, h, vertex, interval, k):
    interval = as_interval(interval)
    if interval.length == 0:
        raise ZeroLengthInterval(f'{interval} has zero length')
    lower, upper = measure_of_interval(ifs, s, h, vertex, interval, k)
    scale = float(interval.length) ** s
    return lower / scale, upper / scale


def sup_density_estimate(ifs, s, h, vertex, k=None):
    """
    Largest density upper bound over the level-j intervals for j <= k and the
    spans of consecutive level-j intervals.
    """
    k = _check_depth(settings.DENSITY_DEPTH if k is None else k, 1)
    best = 0.0
    for level in range(k + 1):
        intervals = level_intervals(ifs, vertex, level).intervals
        candidates = itertools.chain(
            intervals,
            (ClosedInterval(left.lo, right.hi) for left, right in zip(intervals, intervals[1:])),
        )
        for candidate in candidates:
            _, upper = density(ifs, s, h, vertex, candidate, k)
            best = max(best, upper)
    return best


class PathRelation(enum.Enum):
    DISJOINT = 'disjoint'
    NESTED_LEFT_IN_RIGHT = 'nested_left_in_right'
    NESTED_RIGHT_IN_LEFT = 'nested_right_in_left'
    OVERLAP = 'overlap'


def _path_image(ifs, path):
    return path.map.image(compute_hulls(ifs)[path.terminal])


def compare_path_images(ifs, p, q):
    if p == q:
        raise SamePath(f'{p} is compared with itself')
    left, right = _path_image(ifs, p), _path_image(ifs, q)
    if not left.intersects(right):
        return PathRelation.DISJOINT
    if right.contains(left):
        return PathRelation.NESTED_LEFT_IN_RIGHT
    if left.contains(right):
        return PathRelation.NESTED_RIGHT_IN_LEFT
    return PathRelation.OVERLAP


def _pieces(ifs, path, depth):
    if depth == 0:
        return [_path_image(ifs, path)]
    return [
        _path_image(ifs, path + extension)
        for extension in enumerate_paths(ifs, path.terminal, depth)
    ]


def _refinement_agrees(ifs, inner, outer, depth):
    """
    Pieces of the inner image at ``depth`` below it must each sit inside one
    piece of the outer image at the same absolute level, or all miss them.
    """
    inner_pieces = _pieces(ifs, inner, depth)
    outer_pieces = _pieces(ifs, outer, max(len(inner) + depth - len(outer), 0))
    contained = [any(o.contains(piece) for o in outer_pieces) for piece in inner_pieces]
    separate = [not any(o.intersects(piece) for o in outer_pieces) for piece in inner_pieces]
    return all(contained) or all(separate)


@attr.frozen
class TrichotomyReport:
    holds: bool
    nested: tuple = ()
    violations: tuple = ()

    def __bool__(self):
        return self.holds

    def as_document(self):
        return {
            'holds': self.holds,
            'nested': [list(pair) for pair in self.nested],
            'violations': [list(violation) for violation in self.violations],
        }


def verify_trichotomy(ifs, vertex, k):
    """
    Hull images of distinct cycles at ``vertex`` of length at most k must be
    disjoint or nested, and nested pairs must stay consistent when refined.
    """
    k = _check_depth(k, 1)
    vertex = ifs.check_vertex(vertex)
    cycles = [
        path
        for length in range(1, k + 1)
        for path in enumerate_paths(ifs, vertex, length)
        if path.terminal == vertex
    ]
    nested, violations = [], []
    for p, q in itertools.combinations(cycles, 2):
        relation = compare_path_images(ifs, p, q)
        if relation is PathRelation.DISJOINT:
            continue
        if relation is PathRelation.OVERLAP:
            violations.append((str(p), str(q), relation.value))
            continue
        inner, outer = (p, q) if relation is PathRelation.NESTED_LEFT_IN_RIGHT else (q, p)
        nested.append((str(inner), str(outer)))
        if not _refinement_agrees(ifs, inner, outer, settings.TRICHOTOMY_REFINEMENT_DEPTH):
            violations.append((str(inner), str(outer), 'refinement'))
    return TrichotomyReport(
        holds=not violations, nested=tuple(nested), violations=tuple(violations)
    )
