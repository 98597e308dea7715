# diagram.py

import copy
import logging
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Dict, FrozenSet, List, Optional, Tuple

from zxft.errors import IntegrityError

logger = logging.getLogger(__name__)


class SpiderKind(Enum):
    """
    Spider colors.
        'Z': green spider
        'X': red spider
    """
    Z = 'Z'
    X = 'X'

    @property
    def other(self) -> 'SpiderKind':
        return SpiderKind.X if self is SpiderKind.Z else SpiderKind.Z


class EdgeKind(Enum):
    """
    Edge kinds.
        'plain': direct connection
        'h': connection through a Hadamard
    """
    PLAIN = 'plain'
    HADAMARD = 'h'

    def __xor__(self, other: 'EdgeKind') -> 'EdgeKind':
        return EdgeKind.HADAMARD if (self is EdgeKind.HADAMARD) != (other is EdgeKind.HADAMARD) \
            else EdgeKind.PLAIN

    @property
    def flipped(self) -> 'EdgeKind':
        return self ^ EdgeKind.HADAMARD


class PortDirection(Enum):
    """
    Boundary port directions.
        'in': input port
        'out': output port
    """
    IN = 'in'
    OUT = 'out'


@dataclass(frozen=True)
class OutcomeExpr:
    """
    Affine GF(2) combination const + sum(vars) of outcome variables.
    """
    vars: FrozenSet[int] = frozenset()
    const: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'vars', frozenset(self.vars))
        object.__setattr__(self, 'const', int(self.const) & 1)

    @classmethod
    def from_var(cls, var: int) -> 'OutcomeExpr':
        return cls(frozenset([var]), 0)

    @classmethod
    def constant(cls, bit: int = 0) -> 'OutcomeExpr':
        return cls(frozenset(), bit)

    def __xor__(self, other) -> 'OutcomeExpr':
        if isinstance(other, int):
            return OutcomeExpr(self.vars, self.const ^ (other & 1))
        return OutcomeExpr(self.vars ^ other.vars, self.const ^ other.const)

    __rxor__ = __xor__

    @property
    def is_constant(self) -> bool:
        return not self.vars

    def value(self, assignment: Dict[int, int]) -> int:
        """
        Evaluate the expression.

        Args:
            assignment (dict): outcome variable id -> bit
        Returns:
            bit (int): value of the expression
        """
        v = self.const
        for var in self.vars:
            assert var in assignment, "Outcome variable {} is not assigned".format(var)
            v ^= int(assignment[var]) & 1
        return v

    def to_dict(self) -> dict:
        return {'vars': sorted(self.vars), 'const': self.const}

    def __str__(self):
        terms = ['b{}'.format(v) for v in sorted(self.vars)]
        if self.const or not terms:
            terms.append(str(self.const))
        return '+'.join(terms)


@dataclass
class OutcomeVar:
    id: int
    label: Optional[str] = None


@dataclass
class Spider:
    id: int
    kind: SpiderKind
    phase: int = 0
    instrument: Optional[OutcomeExpr] = None
    coord: Optional[Tuple[float, float, float]] = None

    @property
    def is_instrument(self) -> bool:
        return self.instrument is not None

    def effective_phase(self, assignment: Dict[int, int]) -> int:
        """
        Phase in quarter turns once the instrument outcome is fixed.
        """
        if self.instrument is None:
            return self.phase
        return (self.phase + 2 * self.instrument.value(assignment)) % 4


@dataclass
class Edge:
    id: int
    a: int
    b: int
    kind: EdgeKind = EdgeKind.PLAIN

    @property
    def is_loop(self) -> bool:
        return self.a == self.b

    def other(self, node: int) -> int:
        assert node in (self.a, self.b), "node {} is not an end of edge {}".format(node, self.id)
        return self.b if node == self.a else self.a


@dataclass
class Port:
    id: int
    direction: PortDirection
    label: Optional[str] = None
    coord: Optional[Tuple[float, float, float]] = None


class Diagram:
    """
    ZX instrument network: spiders and boundary ports share one node id space,
    edges and outcome variables have their own. Ids are never reused.
    """

    def __init__(self):
        self._spiders: Dict[int, Spider] = {}
        self._ports: Dict[int, Port] = {}
        self._edges: Dict[int, Edge] = {}
        self._outcome_vars: Dict[int, OutcomeVar] = {}
        self._incidence: Dict[int, List[int]] = {}
        self._next_node = 0
        self._next_edge = 0
        self._next_var = 0

    # views

    @property
    def spiders(self):
        return MappingProxyType(self._spiders)

    @property
    def edges(self):
        return MappingProxyType(self._edges)

    @property
    def ports(self):
        return MappingProxyType(self._ports)

    @property
    def outcome_vars(self):
        return MappingProxyType(self._outcome_vars)

    @property
    def counters(self) -> Tuple[int, int, int]:
        return (self._next_node, self._next_edge, self._next_var)

    def spider(self, sid: int) -> Spider:
        if sid not in self._spiders:
            raise IntegrityError('unknown spider {}'.format(sid))
        return self._spiders[sid]

    def edge(self, eid: int) -> Edge:
        if eid not in self._edges:
            raise IntegrityError('unknown edge {}'.format(eid))
        return self._edges[eid]

    def port(self, pid: int) -> Port:
        if pid not in self._ports:
            raise IntegrityError('unknown port {}'.format(pid))
        return self._ports[pid]

    def is_spider(self, node: int) -> bool:
        return node in self._spiders

    def is_port(self, node: int) -> bool:
        return node in self._ports

    def has_node(self, node: int) -> bool:
        return node in self._incidence

    def incident(self, node: int) -> List[int]:
        """
        Edge ids incident to a node; a self-loop is listed twice.
        """
        if node not in self._incidence:
            raise IntegrityError('unknown node {}'.format(node))
        return list(self._incidence[node])

    def degree(self, node: int) -> int:
        return len(self.incident(node))

    def neighbors(self, node: int) -> List[int]:
        return [self._edges[e].other(node) for e in self.incident(node)]

    def edges_between(self, u: int, v: int) -> List[int]:
        return sorted(set(e for e in self.incident(u) if self._edges[e].other(u) == v))

    def instruments(self) -> List[int]:
        return sorted(s for s, sp in self._spiders.items() if sp.instrument is not None)

    def port_edge(self, pid: int) -> int:
        inc = self.incident(pid)
        assert len(inc) == 1, "port {} has degree {}".format(pid, len(inc))
        return inc[0]

    def port_order(self) -> List[int]:
        """
        Canonical port ordering: inputs first, then by label, then by id.
        """
        return sorted(self._ports, key=lambda p: (self._ports[p].direction is not PortDirection.IN,
                                                  self._ports[p].label or '', p))

    def inputs(self) -> List[int]:
        return [p for p in self.port_order() if self._ports[p].direction is PortDirection.IN]

    def outputs(self) -> List[int]:
        return [p for p in self.port_order() if self._ports[p].direction is PortDirection.OUT]

    def port_by_label(self, label: str) -> int:
        hits = [p for p, port in self._ports.items() if port.label == label]
        if len(hits) != 1:
            raise IntegrityError('no unique port labelled {}'.format(label))
        return hits[0]

    # construction

    def add_outcome_var(self, label: Optional[str] = None, vid: Optional[int] = None) -> int:
        vid = self._claim(vid, '_next_var', self._outcome_vars)
        self._outcome_vars[vid] = OutcomeVar(vid, label)
        return vid

    def add_spider(self, kind: SpiderKind, phase: int = 0, instrument: Optional[OutcomeExpr] = None,
                   coord: Optional[tuple] = None, sid: Optional[int] = None) -> int:
        """
        Add a spider.

        Args:
            kind (SpiderKind): color
            phase (int): phase in quarter turns
            instrument (OutcomeExpr): outcome expression if the spider is an instrument
            coord (tuple): optional layout coordinate
            sid (int): explicit id (deserialization); must be fresh
        Returns:
            sid (int): spider id
        """
        kind = SpiderKind(kind)
        if instrument is not None:
            self._check_vars(instrument)
        sid = self._claim(sid, '_next_node', self._incidence)
        self._spiders[sid] = Spider(sid, kind, int(phase) % 4, instrument,
                                    tuple(coord) if coord is not None else None)
        self._incidence[sid] = []
        return sid

    def add_port(self, direction: PortDirection, label: Optional[str] = None,
                 coord: Optional[tuple] = None, pid: Optional[int] = None) -> int:
        direction = PortDirection(direction)
        pid = self._claim(pid, '_next_node', self._incidence)
        self._ports[pid] = Port(pid, direction, label, tuple(coord) if coord is not None else None)
        self._incidence[pid] = []
        return pid

    def add_edge(self, a: int, b: int, kind: EdgeKind = EdgeKind.PLAIN, eid: Optional[int] = None,
                 check_ports: bool = True) -> int:
        """
        Add an edge between two nodes.

        Args:
            a (int): end A node id
            b (int): end B node id
            kind (EdgeKind): plain or Hadamard
            eid (int): explicit id (deserialization); must be fresh
            check_ports (bool): refuse to give a port a second edge
        Returns:
            eid (int): edge id
        """
        kind = EdgeKind(kind)
        for n in (a, b):
            if n not in self._incidence:
                raise IntegrityError('edge endpoint {} does not exist'.format(n))
            if check_ports and n in self._ports and self._incidence[n]:
                raise IntegrityError('port {} already has an incident edge'.format(n))
        if a == b and a in self._ports:
            raise IntegrityError('port {} cannot carry a self-loop'.format(a))
        eid = self._claim(eid, '_next_edge', self._edges)
        self._edges[eid] = Edge(eid, a, b, kind)
        self._incidence[a].append(eid)
        self._incidence[b].append(eid)
        return eid

    def remove_edge(self, eid: int):
        e = self.edge(eid)
        self._incidence[e.a].remove(eid)
        self._incidence[e.b].remove(eid)
        del self._edges[eid]

    def remove_spider(self, sid: int):
        self.spider(sid)
        for e in set(self._incidence[sid]):
            self.remove_edge(e)
        del self._incidence[sid]
        del self._spiders[sid]

    def remove_port(self, pid: int):
        self.port(pid)
        for e in set(self._incidence[pid]):
            self.remove_edge(e)
        del self._incidence[pid]
        del self._ports[pid]

    def remove_outcome_var(self, vid: int):
        if vid not in self._outcome_vars:
            raise IntegrityError('unknown outcome variable {}'.format(vid))
        users = [s for s, sp in self._spiders.items() if sp.instrument is not None and vid in sp.instrument.vars]
        if users:
            raise IntegrityError('outcome variable {} still used by spiders {}'.format(vid, users))
        del self._outcome_vars[vid]

    # mutation used by rewrite rules

    def set_kind(self, sid: int, kind: SpiderKind):
        self.spider(sid).kind = SpiderKind(kind)

    def set_phase(self, sid: int, phase: int):
        self.spider(sid).phase = int(phase) % 4

    def set_instrument(self, sid: int, instrument: Optional[OutcomeExpr]):
        if instrument is not None:
            self._check_vars(instrument)
        self.spider(sid).instrument = instrument

    def set_edge_kind(self, eid: int, kind: EdgeKind):
        self.edge(eid).kind = EdgeKind(kind)

    def set_coord(self, node: int, coord: Optional[tuple]):
        target = self._spiders.get(node) or self._ports.get(node)
        if target is None:
            raise IntegrityError('unknown node {}'.format(node))
        target.coord = tuple(coord) if coord is not None else None

    def relabel_outcome(self, vid: int, label: Optional[str]):
        if vid not in self._outcome_vars:
            raise IntegrityError('unknown outcome variable {}'.format(vid))
        self._outcome_vars[vid].label = label

    def reconnect(self, eid: int, old: int, new: int):
        """
        Move one end of an edge from node old to node new.
        For a self-loop on old, end B is moved.
        """
        e = self.edge(eid)
        if new not in self._incidence:
            raise IntegrityError('unknown node {}'.format(new))
        if e.b == old:
            e.b = new
        elif e.a == old:
            e.a = new
        else:
            raise IntegrityError('edge {} is not incident to {}'.format(eid, old))
        self._incidence[old].remove(eid)
        self._incidence[new].append(eid)

    # checks

    def validate(self) -> List[str]:
        """
        Report structural violations.

        Returns:
            violations (list[str]): empty if the diagram is valid
        """
        violations = []
        for eid, e in self._edges.items():
            for n in (e.a, e.b):
                if n not in self._incidence:
                    violations.append('edge {} has dangling endpoint {}'.format(eid, n))
        for pid in self._ports:
            deg = len(self._incidence.get(pid, []))
            if deg != 1:
                violations.append('port {} degree {}'.format(pid, deg))
        for nid in set(self._spiders) & set(self._ports):
            violations.append('duplicate node id {}'.format(nid))
        for sid, sp in self._spiders.items():
            if sp.instrument is not None:
                for v in sp.instrument.vars:
                    if v not in self._outcome_vars:
                        violations.append('spider {} references unknown outcome variable {}'.format(sid, v))
        return violations

    def is_valid(self) -> bool:
        return not self.validate()

    def normalize(self) -> List[str]:
        """
        Remove self-loops. A plain loop only scales the tensor; a Hadamard loop
        adds pi to the spider phase (both up to a global scalar).

        Returns:
            notes (list[str]): one note per removed loop
        """
        notes = []
        for eid in sorted(self._edges):
            e = self._edges.get(eid)
            if e is None or not e.is_loop:
                continue
            sid = e.a
            self.remove_edge(eid)
            if e.kind is EdgeKind.HADAMARD:
                sp = self._spiders[sid]
                sp.phase = (sp.phase + 2) % 4
                notes.append('spider {}: Hadamard self-loop {} replaced by a pi phase (up to scalar)'.format(sid, eid))
                logger.warning(notes[-1])
            else:
                notes.append('spider {}: plain self-loop {} removed'.format(sid, eid))
        return notes

    def copy(self) -> 'Diagram':
        return copy.deepcopy(self)

    # helpers

    def _claim(self, requested, counter, taken) -> int:
        if requested is None:
            nid = getattr(self, counter)
        else:
            nid = int(requested)
            if nid in taken:
                raise IntegrityError('id {} is already in use'.format(nid))
        setattr(self, counter, max(getattr(self, counter), nid + 1))
        return nid

    def _check_vars(self, expr: OutcomeExpr):
        for v in expr.vars:
            if v not in self._outcome_vars:
                raise IntegrityError('unknown outcome variable {}'.format(v))

    def summary(self) -> dict:
        return {
            'spiders': len(self._spiders),
            'x_spiders': sum(1 for s in self._spiders.values() if s.kind is SpiderKind.X),
            'edges': len(self._edges),
            'hadamard_edges': sum(1 for e in self._edges.values() if e.kind is EdgeKind.HADAMARD),
            'ports': len(self._ports),
            'instruments': len(self.instruments()),
            'outcome_vars': len(self._outcome_vars),
        }

    def __repr__(self):
        s = self.summary()
        return 'Diagram(spiders={}, edges={}, ports={}, instruments={})'.format(
            s['spiders'], s['edges'], s['ports'], s['instruments'])

