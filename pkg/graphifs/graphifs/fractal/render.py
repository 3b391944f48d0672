import logging
import os
from numbers import Integral

import attr
from django.conf import settings
from mako.lookup import TemplateLookup

from .exceptions import InvalidDepth, LevelTooDeep
from .ifs_graph import compute_hulls, require_cssc
from .intervals import level_intervals


logger = logging.getLogger(__name__)

TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'templates')
MARGIN = 10
LABEL_SIZE = 12
LABEL_BAND = 18

_lookup = TemplateLookup(directories=[TEMPLATE_DIR], input_encoding='utf-8')


def _setting(name):
    return attr.field(factory=lambda: getattr(settings, name))


@attr.frozen
class RenderSpec:
    levels: int = attr.field()
    width: int = _setting('RENDER_WIDTH')
    row_height: int = _setting('RENDER_ROW_HEIGHT')
    row_spacing: int = _setting('RENDER_ROW_SPACING')
    fill: str = _setting('RENDER_FILL')
    stroke: str = _setting('RENDER_STROKE')

    @levels.validator
    def _check_levels(self, attribute, value):
        if isinstance(value, bool) or not isinstance(value, Integral) or value < 0:
            raise InvalidDepth(f'levels must be a non-negative integer, got {value!r}')
        if value > settings.RENDER_MAX_LEVEL:
            raise LevelTooDeep(
                f'{value} levels requested, at most {settings.RENDER_MAX_LEVEL} are rendered'
            )

    @width.validator
    def _check_width(self, attribute, value):
        if value <= 2 * MARGIN:
            raise ValueError(f'image width {value} leaves no room to draw')


def _coordinate(value):
    return '%.3f' % value


def render_svg(ifs, spec):
    """ One row of level-k intervals per vertex and level, vertices stacked top-down """
    require_cssc(ifs)
    hulls = compute_hulls(ifs)
    left = min(hull.lo for hull in hulls)
    extent = max(hull.hi for hull in hulls) - left
    scale = (spec.width - 2 * MARGIN) / float(extent)
    pitch = spec.row_height + spec.row_spacing

    groups = []
    top = MARGIN
    for vertex in ifs.vertices:
        rows = []
        for level in range(spec.levels + 1):
            y = top + LABEL_BAND + level * pitch
            rects = [
                (
                    _coordinate(MARGIN + float(interval.lo - left) * scale),
                    _coordinate(float(interval.length) * scale),
                )
                for interval in level_intervals(ifs, vertex, level).intervals
            ]
            rows.append({'level': level, 'y': _coordinate(y), 'rects': rects})
        groups.append({'vertex': vertex, 'label_y': _coordinate(top + LABEL_SIZE), 'rows': rows})
        top += LABEL_BAND + (spec.levels + 1) * pitch + spec.row_spacing

    logger.debug('rendering %d level(s) of %s', spec.levels + 1, ifs)
    return _lookup.get_template('level_intervals.svg.mako').render(
        groups=groups,
        width=spec.width,
        height=top + MARGIN,
        margin=MARGIN,
        label_size=LABEL_SIZE,
        row_height=spec.row_height,
        fill=spec.fill,
        stroke=spec.stroke,
    )
