# webs.py

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd

from zxft.diagram import Diagram, EdgeKind, OutcomeExpr, SpiderKind
from zxft.errors import ContractViolation, UnsupportedPhase
from zxft.gf2 import nullspace, rref, solve_combination
from zxft.utils import bits_from_pauli, pauli_from_bits

logger = logging.getLogger(__name__)


class WebClass(Enum):
    """
    Web classes.
        'outer': nonzero outer signature
        'check': zero outer signature, nonzero instrument support
        'null': neither
    """
    OUTER = 'outer'
    CHECK = 'check'
    NULL = 'null'


def through(kind: EdgeKind, bits: Tuple[int, int]) -> Tuple[int, int]:
    """
    Highlight seen from the other end of an edge.
    """
    return (bits[1], bits[0]) if kind is EdgeKind.HADAMARD else bits


def own_other(kind: SpiderKind, bits: Tuple[int, int]) -> Tuple[int, int]:
    # green spiders own the green bit
    return (bits[1], bits[0]) if kind is SpiderKind.Z else (bits[0], bits[1])


def legs(diagram: Diagram, node: int) -> List[Tuple[int, bool]]:
    """
    Legs of a node as (edge id, node is end A). A self-loop gives two legs.
    """
    out = []
    seen_loop = set()
    for eid in diagram.incident(node):
        e = diagram.edges[eid]
        if e.is_loop:
            if eid in seen_loop:
                continue
            seen_loop.add(eid)
            out.append((eid, True))
            out.append((eid, False))
        else:
            out.append((eid, e.a == node))
    return out


class OuterSignature:

    def __init__(self, paulis: Dict[int, str]):
        self._paulis = {p: q for p, q in paulis.items() if q != 'I'}

    @property
    def paulis(self) -> Dict[int, str]:
        return dict(self._paulis)

    def __getitem__(self, port: int) -> str:
        return self._paulis.get(port, 'I')

    @property
    def is_identity(self) -> bool:
        return not self._paulis

    def to_string(self, diagram: Diagram) -> str:
        """
        E.g. 'in:ZZI|out:IZZ'; ports in diagram.port_order().
        """
        parts = []
        for name, ports in (('in', diagram.inputs()), ('out', diagram.outputs())):
            if ports:
                parts.append('{}:{}'.format(name, ''.join(self[p] for p in ports)))
        return '|'.join(parts)

    def __eq__(self, other):
        return isinstance(other, OuterSignature) and self._paulis == other._paulis

    def __hash__(self):
        return hash(frozenset(self._paulis.items()))

    def __repr__(self):
        return 'OuterSignature({})'.format(self._paulis)


class PauliWeb:
    """
    Highlight assignment on a diagram. Edge values are stored at end A as
    (r, g) bits; zero edges are omitted. Inclusions are the instrument spiders
    whose outcome enters the sign.
    """

    def __init__(self, diagram: Diagram, edges: Dict[int, Tuple[int, int]] = None,
                 inclusions: Iterable[int] = (), sign_expr: Optional[OutcomeExpr] = None):
        self._diagram = diagram
        self._edges = {e: (int(v[0]) & 1, int(v[1]) & 1) for e, v in (edges or {}).items() if v[0] or v[1]}
        self._inclusions = frozenset(inclusions)
        self._sign = sign_expr

    @property
    def diagram(self) -> Diagram:
        return self._diagram

    @property
    def edges(self) -> Dict[int, Tuple[int, int]]:
        return dict(self._edges)

    @property
    def inclusions(self) -> FrozenSet[int]:
        return self._inclusions

    @property
    def sign(self) -> OutcomeExpr:
        # computed on first use
        if self._sign is None:
            self._sign = sign(self, self._diagram)
        return self._sign

    def value(self, eid: int, at_a: bool = True) -> Tuple[int, int]:
        bits = self._edges.get(eid, (0, 0))
        if at_a:
            return bits
        return through(self._diagram.edges[eid].kind, bits)

    def value_at(self, eid: int, node: int) -> Tuple[int, int]:
        """
        Highlight of an edge at the end touching node.
        """
        return self.value(eid, self._diagram.edges[eid].a == node)

    @property
    def outer_signature(self) -> OuterSignature:
        paulis = {}
        for p in self._diagram.ports:
            eid = self._diagram.port_edge(p)
            r, g = self.value_at(eid, p)
            paulis[p] = pauli_from_bits(r, g)
        return OuterSignature(paulis)

    @property
    def is_zero(self) -> bool:
        return not self._edges and not self._inclusions

    @property
    def web_class(self) -> WebClass:
        if not self.outer_signature.is_identity:
            return WebClass.OUTER
        if self._inclusions:
            return WebClass.CHECK
        return WebClass.NULL

    def rebind(self, diagram: Diagram) -> 'PauliWeb':
        return PauliWeb(diagram, self._edges, self._inclusions, self.sign)

    def to_dict(self) -> dict:
        d = self._diagram
        return {
            'class': self.web_class.value,
            'outer': self.outer_signature.to_string(d),
            'sign': self.sign.to_dict(),
            'edges': {str(e): [r, g] for e, (r, g) in sorted(self._edges.items())},
            'inclusions': sorted(self._inclusions),
        }

    def summary(self) -> str:
        n_red = sum(1 for r, g in self._edges.values() if r)
        n_green = sum(1 for r, g in self._edges.values() if g)
        return '{} red, {} green edges'.format(n_red, n_green)

    def __eq__(self, other):
        return isinstance(other, PauliWeb) and self._diagram is other._diagram \
            and self._edges == other._edges and self._inclusions == other._inclusions

    def __repr__(self):
        return 'PauliWeb({}, sign={}, {})'.format(self.web_class.value, self.sign, self.summary())


def full_indicator(web: PauliWeb, s: int) -> int:
    """
    1 iff every leg of spider s carries the spider's own color. A spider
    without legs uses its inclusion bit.
    """
    d = web.diagram
    kind = d.spiders[s].kind
    ls = legs(d, s)
    if not ls:
        return 1 if s in web.inclusions else 0
    eid, at_a = ls[0]
    return own_other(kind, web.value(eid, at_a))[0]


def _check_phases(diagram: Diagram):
    for s in sorted(diagram.spiders):
        if diagram.spiders[s].phase not in (0, 2):
            raise UnsupportedPhase(s, diagram.spiders[s].phase)


def sign(web: PauliWeb, diagram: Diagram = None) -> OutcomeExpr:
    """
    Sign expression of a web: parity of fully highlighted pi spiders, plus
    r*g over Hadamard edges, plus the included instrument outcomes.

    Args:
        web (PauliWeb): web
        diagram (Diagram): diagram the web lives on (default web.diagram)
    Returns:
        sign (OutcomeExpr): the web's stabilizer carries (-1)^sign
    """
    d = diagram if diagram is not None else web.diagram
    const = 0
    for s, sp in d.spiders.items():
        if sp.phase == 2 and full_indicator(web, s):
            const ^= 1
    for eid, (r, g) in web.edges.items():
        if d.edges[eid].kind is EdgeKind.HADAMARD:
            const ^= r & g
    expr = OutcomeExpr.constant(const)
    for s in web.inclusions:
        expr = expr ^ d.spiders[s].instrument
    return expr


def verify(web: PauliWeb, diagram: Diagram = None) -> List[str]:
    """
    Check the web rules spider by spider.

    Returns:
        violations (list[str]): empty if the web is valid
    """
    d = diagram if diagram is not None else web.diagram
    violations = []
    for eid in web.edges:
        if eid not in d.edges:
            violations.append('highlight on unknown edge {}'.format(eid))
    for s in sorted(web.inclusions):
        if s not in d.spiders:
            violations.append('inclusion on unknown spider {}'.format(s))
    if violations:
        return violations
    for s in sorted(d.spiders):
        sp = d.spiders[s]
        if sp.phase not in (0, 2):
            violations.append('unsupported phase at spider {}'.format(s))
            continue
        own_bits, other_parity = [], 0
        for eid, at_a in legs(d, s):
            own, other = own_other(sp.kind, web.value(eid, at_a))
            own_bits.append(own)
            other_parity ^= other
        if other_parity:
            violations.append('odd {} count at spider {}'.format('red' if sp.kind is SpiderKind.Z else 'green', s))
        if own_bits and len(set(own_bits)) > 1:
            violations.append('{} highlight not all-or-none at spider {}'.format(
                'green' if sp.kind is SpiderKind.Z else 'red', s))
        if sp.instrument is None and s in web.inclusions:
            violations.append('inclusion on non-instrument spider {}'.format(s))
        if sp.instrument is not None and own_bits and int(s in web.inclusions) != own_bits[0]:
            violations.append('instrument inclusion mismatch at spider {}'.format(s))
    return violations


def combine(w1: PauliWeb, w2: PauliWeb) -> PauliWeb:
    """
    Product of two webs on the same diagram: highlights and inclusions XOR,
    the sign is recomputed (its outcome part is the XOR of both).
    """
    if w1.diagram is not w2.diagram:
        raise ContractViolation('cannot combine webs on different diagrams')
    edges = w1.edges
    for e, (r, g) in w2.edges.items():
        r0, g0 = edges.get(e, (0, 0))
        edges[e] = (r0 ^ r, g0 ^ g)
    return PauliWeb(w1.diagram, edges, w1.inclusions ^ w2.inclusions)


@dataclass
class GF2System:
    """
    Linear system of the web rules. Variables are r and g per edge (end A)
    followed by one inclusion bit per instrument.
    """
    edge_ids: List[int]
    instrument_ids: List[int]
    rows: List[List[int]] = field(default_factory=list)

    @property
    def n_vars(self) -> int:
        return 2 * len(self.edge_ids) + len(self.instrument_ids)

    @property
    def variables(self) -> List[tuple]:
        names = []
        for e in self.edge_ids:
            names += [('r', e), ('g', e)]
        return names + [('inclusion', s) for s in self.instrument_ids]

    def matrix(self) -> np.ndarray:
        m = np.zeros((len(self.rows), self.n_vars), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            for v in row:
                m[i, v] ^= 1
        return m

    def solution_dimension(self) -> int:
        return nullspace(self.matrix(), n_cols=self.n_vars).shape[0]


def _leg_vars(diagram: Diagram, index: Dict[int, int], eid: int, at_a: bool) -> Tuple[int, int]:
    r, g = 2 * index[eid], 2 * index[eid] + 1
    if at_a or diagram.edges[eid].kind is EdgeKind.PLAIN:
        return r, g
    return g, r


def constraints(diagram: Diagram) -> GF2System:
    """
    Encode the web rules: other-color parity even at each spider, own color
    all-or-none, instrument inclusion equal to the own-color indicator.
    Hadamard edges swap the variables seen at end B.

    Args:
        diagram (Diagram): diagram with phases in {0, pi}
    Returns:
        system (GF2System): rows of variable indices summing to 0
    """
    _check_phases(diagram)
    edge_ids = sorted(diagram.edges)
    index = {e: i for i, e in enumerate(edge_ids)}
    instruments = diagram.instruments()
    system = GF2System(edge_ids, instruments)
    inst_index = {s: 2 * len(edge_ids) + j for j, s in enumerate(instruments)}
    for s in sorted(diagram.spiders):
        kind = diagram.spiders[s].kind
        own_vars, other_vars = [], []
        for eid, at_a in legs(diagram, s):
            r, g = _leg_vars(diagram, index, eid, at_a)
            own, other = (g, r) if kind is SpiderKind.Z else (r, g)
            own_vars.append(own)
            other_vars.append(other)
        if other_vars:
            system.rows.append(other_vars)
        for v in own_vars[1:]:
            system.rows.append([own_vars[0], v])
        if s in inst_index and own_vars:
            system.rows.append([inst_index[s], own_vars[0]])
    return system


class _Classes:
    # union-find over variable indices

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def solution_space(system: GF2System) -> np.ndarray:
    """
    Basis of the system's solutions; equalities are merged before elimination.

    Returns:
        basis (np.ndarray): (k, n_vars) uint8
    """
    n = system.n_vars
    classes = _Classes(n)
    parities = []
    for row in system.rows:
        if len(row) == 2 and row[0] != row[1]:
            classes.union(row[0], row[1])
        else:
            parities.append(row)
    reps = sorted(set(classes.find(v) for v in range(n)))
    rep_index = {r: i for i, r in enumerate(reps)}
    var_class = np.array([rep_index[classes.find(v)] for v in range(n)], dtype=np.int64)
    m = np.zeros((len(parities), len(reps)), dtype=np.uint8)
    for i, row in enumerate(parities):
        for v in row:
            m[i, var_class[v]] ^= 1
    basis = nullspace(m, n_cols=len(reps))
    return basis[:, var_class] if n else np.zeros((basis.shape[0], 0), dtype=np.uint8)


class WebBasis:
    """
    Echelonized web basis. Columns are ordered outer port bits, instrument
    inclusion bits, edge bits; the pivot region of each row decides its class.
    """

    def __init__(self, diagram: Diagram, rows: np.ndarray, pivots: List[int], n_outer: int,
                 edge_ids: List[int], instrument_ids: List[int], ports: List[int]):
        self._diagram = diagram
        self._rows = rows
        self._pivots = pivots
        self._n_outer = n_outer
        self._edge_ids = edge_ids
        self._instrument_ids = instrument_ids
        self._ports = ports
        self._webs = [self._web(i) for i in range(len(pivots))]

    def _web(self, i: int) -> PauliWeb:
        return self._web_from_row(self._rows[i])

    def _web_from_row(self, row: np.ndarray) -> PauliWeb:
        n_inst = len(self._instrument_ids)
        inc = row[self._n_outer:self._n_outer + n_inst]
        bits = row[self._n_outer + n_inst:]
        edges = {}
        for j in np.flatnonzero(bits[0::2] | bits[1::2]):
            edges[self._edge_ids[j]] = (int(bits[2 * j]), int(bits[2 * j + 1]))
        inclusions = [self._instrument_ids[j] for j in np.flatnonzero(inc)]
        return PauliWeb(self._diagram, edges, inclusions)

    def _class_of(self, pivot: int) -> WebClass:
        if pivot < self._n_outer:
            return WebClass.OUTER
        if pivot < self._n_outer + len(self._instrument_ids):
            return WebClass.CHECK
        return WebClass.NULL

    @property
    def diagram(self) -> Diagram:
        return self._diagram

    @property
    def webs(self) -> List[PauliWeb]:
        return list(self._webs)

    @property
    def outer(self) -> List[PauliWeb]:
        return [w for w, p in zip(self._webs, self._pivots) if self._class_of(p) is WebClass.OUTER]

    @property
    def checks(self) -> List[PauliWeb]:
        return [w for w, p in zip(self._webs, self._pivots) if self._class_of(p) is WebClass.CHECK]

    @property
    def null(self) -> List[PauliWeb]:
        return [w for w, p in zip(self._webs, self._pivots) if self._class_of(p) is WebClass.NULL]

    @property
    def matrix(self) -> np.ndarray:
        return self._rows[:len(self._pivots)].copy()

    def __len__(self):
        return len(self._pivots)

    def find(self, outer: Optional[Dict[int, str]] = None,
             instruments: Optional[Iterable[int]] = None) -> Optional[PauliWeb]:
        """
        Find a web with a prescribed outer signature and/or instrument support.

        Args:
            outer (dict): port id -> Pauli letter; unlisted ports are I. None leaves
                the outer signature free unless instruments are given, in which
                case it must be trivial.
            instruments (iterable): exact set of included instrument spiders; None
                leaves the inclusions free
        Returns:
            web (PauliWeb): a matching web, or None if none exists
        """
        n_inst = len(self._instrument_ids)
        width = self._n_outer + n_inst
        target = np.zeros(width, dtype=np.uint8)
        constrained = np.zeros(width, dtype=bool)
        if outer is not None or instruments is not None:
            constrained[:self._n_outer] = True
            for p, pauli in (outer or {}).items():
                j = self._ports.index(p)
                target[2 * j], target[2 * j + 1] = bits_from_pauli(pauli)
        if instruments is not None:
            constrained[self._n_outer:] = True
            inst_pos = {s: j for j, s in enumerate(self._instrument_ids)}
            for s in instruments:
                if s not in inst_pos:
                    return None
                target[self._n_outer + inst_pos[s]] = 1
        acc = np.zeros(self._rows.shape[1], dtype=np.uint8)
        for i, p in enumerate(self._pivots):
            if p >= width or not constrained[p]:
                continue
            if acc[p] != target[p]:
                acc ^= self._rows[i]
        if np.any((acc[:width] ^ target)[constrained]):
            return None
        inc = acc[self._n_outer:width]
        bits = acc[width:]
        edges = {self._edge_ids[j]: (int(bits[2 * j]), int(bits[2 * j + 1]))
                 for j in np.flatnonzero(bits[0::2] | bits[1::2])}
        return PauliWeb(self._diagram, edges, [self._instrument_ids[j] for j in np.flatnonzero(inc)])

    def find_check(self, instruments: Iterable[int]) -> Optional[PauliWeb]:
        return self.find(outer={}, instruments=set(instruments))

    def find_check_among(self, included: Iterable[int], free: Iterable[int]) -> Optional[PauliWeb]:
        """
        Find a check whose inclusions outside free are exactly included; the
        inclusions of the free instruments are left open.

        Args:
            included (iterable): instrument spiders that must be included
            free (iterable): instrument spiders whose inclusion is unconstrained
        Returns:
            web (PauliWeb): a matching check, or None if none exists
        """
        free = set(free)
        included = set(included)
        assert not (included & free), "included and free instruments overlap"
        inst_pos = {s: j for j, s in enumerate(self._instrument_ids)}
        if any(s not in inst_pos for s in included):
            return None
        columns = list(range(self._n_outer))
        target = [0] * self._n_outer
        for s in self._instrument_ids:
            if s not in free:
                columns.append(self._n_outer + inst_pos[s])
                target.append(1 if s in included else 0)
        rows = self.matrix
        selection = solve_combination(rows, np.array(target, dtype=np.uint8), columns)
        if selection is None:
            return None
        acc = np.zeros(rows.shape[1], dtype=np.uint8)
        for i in np.flatnonzero(selection):
            acc ^= rows[i]
        return self._web_from_row(acc)

    def encode(self, web: PauliWeb) -> np.ndarray:
        """
        Row vector of a web of this diagram in the basis column order.
        """
        outer = web.outer_signature
        head = [b for p in self._ports for b in bits_from_pauli(outer[p])]
        inc = [1 if s in web.inclusions else 0 for s in self._instrument_ids]
        bits = [b for e in self._edge_ids for b in web.value(e, True)]
        return np.array(head + inc + bits, dtype=np.uint8)

    def table(self) -> pd.DataFrame:
        d = self._diagram
        return pd.DataFrame([{
            'class': w.web_class.value,
            'outer': w.outer_signature.to_string(d),
            'sign': str(w.sign),
            'highlights': w.summary(),
        } for w in self._webs])


def web_basis(diagram: Diagram) -> WebBasis:
    """
    Compute an echelonized basis of all Pauli webs of a diagram.

    Args:
        diagram (Diagram): diagram with phases in {0, pi}
    Returns:
        basis (WebBasis): outer webs first, then checks, then null webs
    """
    system = constraints(diagram)
    solutions = solution_space(system)
    edge_ids, instruments = system.edge_ids, system.instrument_ids
    index = {e: i for i, e in enumerate(edge_ids)}
    ports = diagram.port_order()
    outer_cols = []
    for p in ports:
        eid = diagram.port_edge(p)
        outer_cols += list(_leg_vars(diagram, index, eid, diagram.edges[eid].a == p))
    n_edge_vars = 2 * len(edge_ids)
    inst_cols = list(range(n_edge_vars, n_edge_vars + len(instruments)))
    columns = outer_cols + inst_cols + list(range(n_edge_vars))
    reduced, pivots = rref(solutions[:, columns]) if solutions.shape[0] else \
        (np.zeros((0, len(columns)), dtype=np.uint8), [])
    basis = WebBasis(diagram, reduced, pivots, len(outer_cols), edge_ids, instruments, ports)
    logger.info(f'web basis: {len(basis.outer)} outer, {len(basis.checks)} checks, {len(basis.null)} null')
    return basis
