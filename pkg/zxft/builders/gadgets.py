# gadgets.py

import logging
from enum import Enum
from typing import Dict, Iterable, List, Tuple, Union

import networkx as nx

from zxft.diagram import Diagram, EdgeKind, OutcomeExpr, PortDirection, SpiderKind

logger = logging.getLogger(__name__)


class Gadget(Enum):
    """
    Named gadgets.
        'prep_zero', 'prep_plus': single-output state preparations
        'post_zero', 'post_plus': single-input postselections
        'meas_z', 'meas_x': destructive single-qubit measurements
        'cnot', 'cz', 'h', 's', 'z_rot': unitary gates
        'zz_meas', 'xx_meas', 'yy_meas': non-destructive two-qubit parity measurements
        'bell_meas': destructive Bell measurement emitting bXX and bZZ
        'w4_z_meas', 'w4_x_meas': four-qubit ZZZZ and XXXX measurements
        'ghz': n-qubit GHZ state
    """
    PREP_ZERO = 'prep_zero'
    PREP_PLUS = 'prep_plus'
    POST_ZERO = 'post_zero'
    POST_PLUS = 'post_plus'
    MEAS_Z = 'meas_z'
    MEAS_X = 'meas_x'
    CNOT = 'cnot'
    CZ = 'cz'
    H = 'h'
    S = 's'
    Z_ROT = 'z_rot'
    ZZ_MEAS = 'zz_meas'
    XX_MEAS = 'xx_meas'
    YY_MEAS = 'yy_meas'
    BELL_MEAS = 'bell_meas'
    W4_Z_MEAS = 'w4_z_meas'
    W4_X_MEAS = 'w4_x_meas'
    GHZ = 'ghz'


def _ports(d: Diagram, n_in: int, n_out: int) -> Tuple[List[int], List[int]]:
    ins = [d.add_port(PortDirection.IN, 'in{}'.format(i), (i, 0, -1)) for i in range(n_in)]
    outs = [d.add_port(PortDirection.OUT, 'out{}'.format(i), (i, 0, 1)) for i in range(n_out)]
    return ins, outs


def _instrument(d: Diagram, kind: SpiderKind, label: str, coord=None) -> int:
    var = d.add_outcome_var(label)
    return d.add_spider(kind, 0, OutcomeExpr.from_var(var), coord)


def _wire_dots(d: Diagram, kind: SpiderKind, n: int) -> List[int]:
    # one spider per wire, joined to in{i} and out{i}
    ins, outs = _ports(d, n, n)
    dots = []
    for i in range(n):
        s = d.add_spider(kind, 0, None, (i, 0, 0))
        d.add_edge(ins[i], s)
        d.add_edge(s, outs[i])
        dots.append(s)
    return dots


def _parity_meas(d: Diagram, basis: str, n: int) -> Diagram:
    # n wire dots of the measured basis' color joined to one instrument of the other color
    wire_kind = SpiderKind.Z if basis == 'Z' else SpiderKind.X
    dots = _wire_dots(d, wire_kind, n)
    m = _instrument(d, wire_kind.other, 'b' + basis * n, ((n - 1) / 2, 1, 0))
    for s in dots:
        d.add_edge(s, m)
    return d


def _one_leg(d: Diagram, kind: SpiderKind, direction: PortDirection, label: str = None) -> Diagram:
    if direction is PortDirection.OUT:
        _, (port,) = _ports(d, 0, 1)
    else:
        (port,), _ = _ports(d, 1, 0)
    if label is None:
        s = d.add_spider(kind, 0, None, (0, 0, 0))
    else:
        s = _instrument(d, kind, label, (0, 0, 0))
    if direction is PortDirection.OUT:
        d.add_edge(s, port)
    else:
        d.add_edge(port, s)
    return d


def gadget(name: Union[str, Gadget], **kwargs) -> Diagram:
    """
    Build a named gadget in reduced form. Ports are labelled in0, in1, ...
    and out0, out1, ...

    Args:
        name (str or Gadget): gadget name
        quarter_turns (int): rotation angle for 'z_rot' (default 1)
        n (int): number of qubits for 'ghz' (default 3)
    Returns:
        diagram (Diagram): gadget diagram
    """
    name = Gadget(name)
    d = Diagram()
    if name is Gadget.PREP_ZERO:
        return _one_leg(d, SpiderKind.X, PortDirection.OUT)
    if name is Gadget.PREP_PLUS:
        return _one_leg(d, SpiderKind.Z, PortDirection.OUT)
    if name is Gadget.POST_ZERO:
        return _one_leg(d, SpiderKind.X, PortDirection.IN)
    if name is Gadget.POST_PLUS:
        return _one_leg(d, SpiderKind.Z, PortDirection.IN)
    if name is Gadget.MEAS_Z:
        return _one_leg(d, SpiderKind.X, PortDirection.IN, 'bZ')
    if name is Gadget.MEAS_X:
        return _one_leg(d, SpiderKind.Z, PortDirection.IN, 'bX')
    if name is Gadget.CNOT:
        (ci, ti), (co, to) = _ports(d, 2, 2)
        c = d.add_spider(SpiderKind.Z, 0, None, (0, 0, 0))
        t = d.add_spider(SpiderKind.X, 0, None, (1, 0, 0))
        d.add_edge(ci, c)
        d.add_edge(c, co)
        d.add_edge(ti, t)
        d.add_edge(t, to)
        d.add_edge(c, t)
        return d
    if name is Gadget.CZ:
        u, v = _wire_dots(d, SpiderKind.Z, 2)
        d.add_edge(u, v, EdgeKind.HADAMARD)
        return d
    if name is Gadget.H:
        (i,), (o,) = _ports(d, 1, 1)
        d.add_edge(i, o, EdgeKind.HADAMARD)
        return d
    if name in (Gadget.S, Gadget.Z_ROT):
        turns = 1 if name is Gadget.S else int(kwargs.get('quarter_turns', 1))
        (s,) = _wire_dots(d, SpiderKind.Z, 1)
        d.set_phase(s, turns)
        return d
    if name is Gadget.ZZ_MEAS:
        return _parity_meas(d, 'Z', 2)
    if name is Gadget.XX_MEAS:
        return _parity_meas(d, 'X', 2)
    if name is Gadget.W4_Z_MEAS:
        return _parity_meas(d, 'Z', 4)
    if name is Gadget.W4_X_MEAS:
        return _parity_meas(d, 'X', 4)
    if name is Gadget.YY_MEAS:
        return _yy_meas(d)
    if name is Gadget.BELL_MEAS:
        (a, b), _ = _ports(d, 2, 0)
        x = _instrument(d, SpiderKind.X, 'bZZ', (0, 0, 0))
        z = _instrument(d, SpiderKind.Z, 'bXX', (1, 0, 0))
        d.add_edge(a, x)
        d.add_edge(x, z)
        d.add_edge(z, b)
        return d
    n = int(kwargs.get('n', 3))
    assert n >= 1, "ghz needs at least one qubit, got {}".format(n)
    _, outs = _ports(d, 0, n)
    s = d.add_spider(SpiderKind.Z, 0, None, ((n - 1) / 2, 0, 0))
    for o in outs:
        d.add_edge(s, o)
    return d


def _yy_meas(d: Diagram) -> Diagram:
    # wire i: in -> Z dot -> X dot -> out; the Z dots reach the green instrument
    # through Hadamard edges, the X dots through plain edges, so its own-color
    # highlight reads as XZ on both wires
    ins, outs = _ports(d, 2, 2)
    m = _instrument(d, SpiderKind.Z, 'bYY', (0.5, 1, 0))
    for i in range(2):
        z = d.add_spider(SpiderKind.Z, 0, None, (i, 0, -0.5))
        x = d.add_spider(SpiderKind.X, 0, None, (i, 0, 0.5))
        d.add_edge(ins[i], z)
        d.add_edge(z, x)
        d.add_edge(x, outs[i])
        d.add_edge(z, m, EdgeKind.HADAMARD)
        d.add_edge(x, m)
    return d


def graph_state(graph: Union[nx.Graph, Iterable[Tuple[int, int]], Dict[int, Iterable[int]]]) -> Diagram:
    """
    Graph state: one green spider with one output port per vertex, one
    Hadamard edge per graph edge. Ports are labelled v{vertex}.

    Args:
        graph (nx.Graph, edge list or adjacency dict): simple undirected graph
    Returns:
        diagram (Diagram): graph-state diagram
    """
    if not isinstance(graph, nx.Graph):
        graph = nx.Graph(dict(graph)) if isinstance(graph, dict) else nx.Graph(list(graph))
    assert nx.number_of_selfloops(graph) == 0, "graph states need a simple graph"
    d = Diagram()
    spiders = {}
    nodes = sorted(graph.nodes)
    for i, v in enumerate(nodes):
        s = d.add_spider(SpiderKind.Z, 0, None, (i, 0, 0))
        p = d.add_port(PortDirection.OUT, 'v{}'.format(v), (i, 0, 1))
        d.add_edge(s, p)
        spiders[v] = s
    for u, v in sorted(tuple(sorted(e)) for e in graph.edges):
        d.add_edge(spiders[u], spiders[v], EdgeKind.HADAMARD)
    logger.info(f'graph state on {len(nodes)} vertices and {graph.number_of_edges()} edges')
    return d
