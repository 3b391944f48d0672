"""
IFS documents and result documents.

An IFS document is YAML holding either the unit-interval family::

    family: {a: 1/4, g_u: 5/12, b: 1/3, c: 1/7, g_v: 11/21, d: 1/3}

or a graph, at the top level or under ``graph``::

    vertices: 1
    edges:
      - {id: s1, from: 0, to: 0, ratio: 1/3, translation: 0}
      - {id: s2, from: 0, to: 0, ratio: 1/3, translation: 2/3}

Every number is an integer or a "p/q" string.
"""
import enum
import logging
from fractions import Fraction
from numbers import Real

import attr
import numpy as np
import yaml

from .exceptions import DocumentError
from .ifs_graph import (
    DirectedGraphIfs,
    TwoVertexFamily,
    build_ifs,
    format_rational,
)


logger = logging.getLogger(__name__)

FAMILY_FIELDS = ('a', 'g_u', 'b', 'c', 'g_v', 'd')


@attr.frozen
class IfsDocument:
    ifs: DirectedGraphIfs
    family: TwoVertexFamily = None

    @property
    def kind(self):
        return 'family' if self.family is not None else 'graph'


def _parse_family(fields):
    if not isinstance(fields, dict):
        raise DocumentError('family must be a mapping of the six parameters')
    missing = [name for name in FAMILY_FIELDS if name not in fields]
    unknown = sorted(set(fields) - set(FAMILY_FIELDS))
    if missing:
        raise DocumentError(f'family is missing {", ".join(missing)}')
    if unknown:
        raise DocumentError(f'family has unknown fields {", ".join(map(str, unknown))}')
    family = TwoVertexFamily.canonical(*(fields[name] for name in FAMILY_FIELDS))
    return IfsDocument(ifs=family.to_ifs(), family=family)


def _parse_graph(fields):
    if not isinstance(fields, dict) or 'edges' not in fields:
        raise DocumentError('a graph needs an edges list')
    edges = fields['edges']
    if not isinstance(edges, list):
        raise DocumentError('edges must be a list of edge records')
    vertex_count = fields.get('vertices')
    if vertex_count is not None and (isinstance(vertex_count, bool)
                                     or not isinstance(vertex_count, int)):
        raise DocumentError(f'vertices must be an integer, got {vertex_count!r}')
    return IfsDocument(ifs=build_ifs(edges, vertex_count=vertex_count))


def parse_document(data):
    if not isinstance(data, dict):
        raise DocumentError('an IFS document must be a mapping')
    if 'family' in data:
        if len(data) != 1:
            raise DocumentError('a family document holds nothing but the family')
        return _parse_family(data['family'])
    if 'graph' in data:
        if len(data) != 1:
            raise DocumentError('a graph document holds nothing but the graph')
        return _parse_graph(data['graph'])
    if 'edges' in data:
        return _parse_graph(data)
    raise DocumentError('expected a family or a graph')


def loads(text):
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise DocumentError(f'not a YAML document: {e}') from None
    return parse_document(data)


def read_document(path):
    logger.debug('reading %s', path)
    try:
        with open(path, encoding='utf-8') as stream:
            text = stream.read()
    except OSError as e:
        raise DocumentError(f'cannot read {path}: {e}') from None
    return loads(text)


def graph_document(ifs):
    return {
        'vertices': ifs.vertex_count,
        'edges': [
            {
                'id': edge.id,
                'from': edge.source,
                'to': edge.target,
                'ratio': format_rational(edge.ratio),
                'translation': format_rational(edge.map.translation),
            }
            for edge in ifs.edges
        ],
    }


def machine_view(value):
    """ Plain YAML-ready data: rationals as "p/q", reals to 10 significant digits """
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Real):
        return float('%.10g' % value)
    if isinstance(value, dict):
        return {str(key): machine_view(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [machine_view(item) for item in value]
    if value is None or isinstance(value, str):
        return value
    return str(value)


def dumps(data):
    return yaml.safe_dump(
        machine_view(data), sort_keys=True, default_flow_style=False, allow_unicode=True
    )


def dump_ifs(ifs):
    return dumps(graph_document(ifs))
