# fingerprint.py

import hashlib
import json
import logging
from typing import Dict, List, Tuple

import networkx as nx

from zxft.diagram import Diagram

logger = logging.getLogger(__name__)


def to_graph(diagram: Diagram, outcomes: bool = False) -> nx.Graph:
    """
    Labelled simple graph of a diagram. Parallel edges are folded into one
    graph edge carrying the sorted list of their kinds; self-loops become a
    node attribute.

    Args:
        diagram (Diagram): diagram
        outcomes (bool): distinguish instrument spiders from plain ones
    Returns:
        g (nx.Graph): graph with 'label' on nodes and edges
    """
    g = nx.Graph()
    for sid, sp in diagram.spiders.items():
        label = 'S{}{}'.format(sp.kind.value, sp.phase)
        if outcomes and sp.instrument is not None:
            label += 'm'
        g.add_node(sid, base=label, loops=[])
    for pid, port in diagram.ports.items():
        g.add_node(pid, base='P{}:{}'.format(port.direction.value, port.label or ''), loops=[])
    for e in diagram.edges.values():
        if e.is_loop:
            g.nodes[e.a]['loops'].append(e.kind.value)
        elif g.has_edge(e.a, e.b):
            g[e.a][e.b]['kinds'].append(e.kind.value)
        else:
            g.add_edge(e.a, e.b, kinds=[e.kind.value])
    for n, data in g.nodes(data=True):
        data['label'] = data['base'] + ('|' + ','.join(sorted(data['loops'])) if data['loops'] else '')
    for u, v, data in g.edges(data=True):
        data['label'] = ','.join(sorted(data['kinds']))
    return g


def _refine(colors: Dict[int, int], adj: Dict[int, List[Tuple[int, str]]]) -> Dict[int, int]:
    # color refinement; new colors are ranks of (old color, neighbor multiset)
    n_colors = len(set(colors.values()))
    while True:
        sig = {v: (colors[v], tuple(sorted((colors[u], lab) for u, lab in adj[v]))) for v in colors}
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        colors = {v: ranks[sig[v]] for v in colors}
        if len(ranks) == n_colors:
            return colors
        n_colors = len(ranks)


def _certificate(colors: Dict[int, int], labels: Dict[int, str], g: nx.Graph) -> str:
    order = sorted(colors, key=colors.get)
    pos = {v: i for i, v in enumerate(order)}
    edges = sorted(tuple(sorted((pos[u], pos[v]))) + (data['label'],) for u, v, data in g.edges(data=True))
    return json.dumps([[labels[v] for v in order], edges], separators=(',', ':'))


def canonical_certificate(g: nx.Graph) -> str:
    """
    Canonical certificate by individualization-refinement: refine, branch on
    every vertex of the first smallest non-singleton cell, keep the minimum
    certificate over all leaves. Exponential in the worst case (highly
    symmetric unlabelled graphs); labelled boundary ports keep it cheap.

    Args:
        g (nx.Graph): graph with 'label' on nodes and edges
    Returns:
        certificate (str): equal for isomorphic labelled graphs
    """
    labels = {v: data['label'] for v, data in g.nodes(data=True)}
    adj = {v: [(u, g[v][u]['label']) for u in g[v]] for v in g.nodes}
    ranks = {lab: i for i, lab in enumerate(sorted(set(labels.values())))}
    start = {v: ranks[labels[v]] for v in g.nodes}

    def search(colors):
        colors = _refine(colors, adj)
        cells = {}
        for v, c in colors.items():
            cells.setdefault(c, []).append(v)
        open_cells = [c for c, members in cells.items() if len(members) > 1]
        if not open_cells:
            return _certificate(colors, labels, g)
        target = min(open_cells, key=lambda c: (len(cells[c]), c))
        best = None
        for v in sorted(cells[target]):
            branched = {u: 2 * c + (1 if c == target and u != v else 0) for u, c in colors.items()}
            cert = search(branched)
            if best is None or cert < best:
                best = cert
        return best

    if not start:
        return '[[],[]]'
    return search(start)


def fingerprint(diagram: Diagram, outcomes: bool = False) -> str:
    """
    Isomorphism-invariant fingerprint of a diagram respecting spider kinds,
    phases, edge kinds and boundary-port labels.

    Args:
        diagram (Diagram): diagram
        outcomes (bool): also distinguish instrument spiders
    Returns:
        fingerprint (str): sha256 hex digest of the canonical certificate
    """
    cert = canonical_certificate(to_graph(diagram, outcomes=outcomes))
    return hashlib.sha256(cert.encode()).hexdigest()
