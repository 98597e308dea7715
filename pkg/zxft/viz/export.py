# export.py

import logging
from typing import Dict, Optional, Tuple

import networkx as nx

from zxft.diagram import Diagram, EdgeKind, SpiderKind
from zxft.utils import DEFAULT_SEED
from zxft.webs import PauliWeb

logger = logging.getLogger(__name__)

COLORS = {SpiderKind.Z: '#88cc88', SpiderKind.X: '#ee7777'}
HIGHLIGHT = {(1, 0): '#cc0000', (0, 1): '#009900', (1, 1): '#cc0000:#009900'}


def _xyz(coord) -> Tuple[float, float, float]:
    c = [float(x) for x in coord] + [0., 0., 0.]
    return c[0], c[1], c[2]


def layout(diagram: Diagram, seed: int = DEFAULT_SEED) -> Dict[int, Tuple[float, float, float]]:
    """
    3D position of every node: its stored coordinate, or a seeded spring
    layout position for nodes without one.
    """
    pos = {}
    for s, sp in diagram.spiders.items():
        if sp.coord is not None:
            pos[s] = _xyz(sp.coord)
    for p, port in diagram.ports.items():
        if port.coord is not None:
            pos[p] = _xyz(port.coord)
    missing = [n for n in list(diagram.spiders) + list(diagram.ports) if n not in pos]
    if missing:
        g = nx.MultiGraph()
        g.add_nodes_from(list(diagram.spiders) + list(diagram.ports))
        g.add_edges_from((e.a, e.b) for e in diagram.edges.values())
        fixed = list(pos) or None
        spring = nx.spring_layout(g, dim=3, seed=seed, pos=dict(pos) or None, fixed=fixed)
        for n in missing:
            pos[n] = tuple(float(x) for x in spring[n])
    return pos


def _node_label(diagram: Diagram, n: int) -> str:
    if diagram.is_port(n):
        port = diagram.ports[n]
        return port.label or '{}{}'.format(port.direction.value, n)
    sp = diagram.spiders[n]
    parts = []
    if sp.phase:
        parts.append('pi' if sp.phase == 2 else '{}pi/2'.format(sp.phase))
    if sp.instrument is not None:
        labels = [diagram.outcome_vars[v].label or 'b{}'.format(v) for v in sorted(sp.instrument.vars)]
        parts.append('+'.join(labels))
    return ' '.join(parts)


def export_dot(diagram: Diagram, web: Optional[PauliWeb] = None) -> str:
    """
    Graphviz DOT text. Hadamard edges are dashed blue; web highlights color
    edges red, green or both.

    Args:
        diagram (Diagram): diagram
        web (PauliWeb): optional web to highlight
    Returns:
        text (str): DOT source
    """
    lines = ['graph zx {', '  node [style=filled, fontsize=10];']
    for s in sorted(diagram.spiders):
        sp = diagram.spiders[s]
        shape = 'doublecircle' if sp.instrument is not None else 'circle'
        lines.append('  n{} [shape={}, fillcolor="{}", label="{}"];'.format(
            s, shape, COLORS[sp.kind], _node_label(diagram, s)))
    for p in diagram.port_order():
        lines.append('  n{} [shape=plaintext, style="", label="{}"];'.format(p, _node_label(diagram, p)))
    for eid in sorted(diagram.edges):
        e = diagram.edges[eid]
        attrs = []
        if e.kind is EdgeKind.HADAMARD:
            attrs += ['style=dashed', 'color="#3355ff"']
        if web is not None and eid in web.edges:
            attrs = [a for a in attrs if not a.startswith('color')]
            attrs += ['color="{}"'.format(HIGHLIGHT[web.edges[eid]]), 'penwidth=3']
        lines.append('  n{} -- n{}{};'.format(e.a, e.b, ' [{}]'.format(', '.join(attrs)) if attrs else ''))
    lines.append('}')
    return '\n'.join(lines) + '\n'


def export_obj(diagram: Diagram, seed: int = DEFAULT_SEED) -> str:
    """
    Wavefront OBJ text: one vertex per node at its layout position and one
    line element per edge. Groups separate plain and Hadamard edges.
    """
    pos = layout(diagram, seed)
    nodes = sorted(pos)
    index = {n: i + 1 for i, n in enumerate(nodes)}
    lines = ['# zxft diagram: {} spiders, {} ports, {} edges'.format(
        len(diagram.spiders), len(diagram.ports), len(diagram.edges))]
    for n in nodes:
        lines.append('v {:.4f} {:.4f} {:.4f}'.format(*pos[n]))
    for kind in EdgeKind:
        edges = [e for _, e in sorted(diagram.edges.items()) if e.kind is kind and not e.is_loop]
        if not edges:
            continue
        lines.append('g {}'.format('plain' if kind is EdgeKind.PLAIN else 'hadamard'))
        for e in edges:
            lines.append('l {} {}'.format(index[e.a], index[e.b]))
    logger.info(f'obj export: {len(nodes)} vertices')
    return '\n'.join(lines) + '\n'
