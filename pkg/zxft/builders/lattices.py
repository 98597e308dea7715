# lattices.py

import copy
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from zxft.diagram import Diagram, EdgeKind, OutcomeExpr, PortDirection, SpiderKind

logger = logging.getLogger(__name__)

Qubit = Tuple[int, int]

CORNERS = ('BL', 'BR', 'TL', 'TR')
BOTTOM = ('BL', 'BR')
TOP = ('TL', 'TR')
LEFT = ('TL', 'BL')
RIGHT = ('TR', 'BR')
RING_SIZE = 6


class Flavor(Enum):
    """
    Fault-tolerance flavors.
        'cbqc': circuit-based, stabilizer measurement gadgets on data worldlines
        'mbqc': measurement-based, single-qubit X measurements of a cluster state
        'fbqc': fusion-based, 6-ring resource states joined by fusions
        'flobqc': Floquet-based, qubit chains joined by two-body measurements
    """
    CBQC = 'cbqc'
    MBQC = 'mbqc'
    FBQC = 'fbqc'
    FLOBQC = 'flobqc'


class StabilizerOrder(Enum):
    """
    Which stabilizer layer comes first in a round.
        'z_first': Z-type layer, then X-type layer
        'x_first': X-type layer, then Z-type layer
    """
    Z_FIRST = 'z_first'
    X_FIRST = 'x_first'


@dataclass(frozen=True)
class PatchSpec:
    """
    Rotated surface-code memory patch.

    Args:
        distance (int): code distance d >= 2
        rounds (int): measurement rounds r >= 1
        order (StabilizerOrder): stabilizer type measured first in each round
        ring_size (int): FBQC resource-state size, fixed at 6
    """
    distance: int
    rounds: int
    order: StabilizerOrder = StabilizerOrder.Z_FIRST
    ring_size: int = RING_SIZE

    def __post_init__(self):
        if int(self.distance) < 2:
            raise ValueError('distance must be >= 2, got {}'.format(self.distance))
        if int(self.rounds) < 1:
            raise ValueError('rounds must be >= 1, got {}'.format(self.rounds))
        if self.ring_size != RING_SIZE:
            raise ValueError('only {}-ring resource states are supported'.format(RING_SIZE))
        object.__setattr__(self, 'order', StabilizerOrder(self.order))

    @property
    def layer_bases(self) -> List[str]:
        first = 'Z' if self.order is StabilizerOrder.Z_FIRST else 'X'
        return [first, 'X' if first == 'Z' else 'Z']

    @property
    def n_layers(self) -> int:
        return 2 * self.rounds

    def to_dict(self) -> dict:
        return {'distance': self.distance, 'rounds': self.rounds, 'order': self.order.value}

    @classmethod
    def from_dict(cls, data: dict) -> 'PatchSpec':
        return cls(int(data['distance']), int(data['rounds']),
                   StabilizerOrder(data.get('order', StabilizerOrder.Z_FIRST.value)))


@dataclass(frozen=True)
class Stabilizer:
    """
    A plaquette stabilizer. Corners name the support qubits by their position
    around the plaquette center (bottom/top, left/right).
    """
    index: int
    basis: str
    plaquette: Tuple[int, int]
    corners: Tuple[Tuple[str, Qubit], ...]

    @property
    def support(self) -> List[Qubit]:
        return [q for _, q in self.corners]

    @property
    def weight(self) -> int:
        return len(self.corners)

    @property
    def center(self) -> Tuple[float, float]:
        a, b = self.plaquette
        return (a + 0.5, b + 0.5)

    def corner(self, name: str) -> Optional[Qubit]:
        return dict(self.corners).get(name)

    def role_of(self, q: Qubit) -> str:
        for name, p in self.corners:
            if p == q:
                return name
        raise KeyError(q)


def rotated_patch(distance: int) -> Tuple[List[Qubit], List[Stabilizer]]:
    """
    Data qubits and stabilizers of a rotated surface-code patch. Plaquette
    (a, b) covers qubits (a..a+1, b..b+1); it is Z-type when a+b is even.
    Weight-2 X stabilizers sit on the left and right edges, weight-2 Z
    stabilizers on the bottom and top edges.

    Args:
        distance (int): code distance
    Returns:
        qubits (list): (i, j) data qubits, row-major
        stabilizers (list[Stabilizer]): Z-type first, each group ordered by (b, a)
    """
    d = distance
    assert d >= 2, "distance must be >= 2, got {}".format(d)
    qubits = [(i, j) for j in range(d) for i in range(d)]
    inside = set(qubits)
    plaquettes = []
    for a in range(-1, d):
        for b in range(-1, d):
            basis = 'Z' if (a + b) % 2 == 0 else 'X'
            interior = 0 <= a <= d - 2 and 0 <= b <= d - 2
            side = (a in (-1, d - 1)) != (b in (-1, d - 1))
            if not interior:
                if not side:
                    continue
                on_lr = a in (-1, d - 1)
                # X boundaries left/right, Z boundaries bottom/top
                if (on_lr and basis != 'X') or (not on_lr and basis != 'Z'):
                    continue
            corners = tuple((name, q) for name, q in zip(CORNERS, ((a, b), (a + 1, b), (a, b + 1), (a + 1, b + 1)))
                            if q in inside)
            plaquettes.append((basis, b, a, corners))
    plaquettes.sort(key=lambda p: (p[0] != 'Z', p[1], p[2]))
    stabilizers = [Stabilizer(i, basis, (a, b), corners) for i, (basis, b, a, corners) in enumerate(plaquettes)]
    return qubits, stabilizers


@dataclass(frozen=True)
class Fusion:
    """
    A fusion gadget: an XX-instrument spider (emitting bXX) and the
    ZZ-instrument identity spider (emitting bZZ) between two halves of a split spider.
    """
    index: int
    origin: int
    halves: Tuple[int, int]
    xx_spider: int
    zz_spider: int
    xx_var: int
    zz_var: int


@dataclass(frozen=True)
class PairMeasurement:
    """
    A two-body measurement gadget between neighboring chain spiders.
    """
    index: int
    kind: str
    spiders: Tuple[int, int]
    gadget: int
    var: int
    time: float


@dataclass
class LatticeMeta:
    """
    Bookkeeping of a lattice diagram.

    slots maps every instrument's outcome variable to exactly one key:
    ('stab', index, round) for stabilizer gadgets, ('data', qubit, layer)
    for MBQC measurements, ('bXX' | 'bZZ', fusion index) for fusions,
    ('ZZ' | 'XX', pair index) for two-body measurements and ('end', spider)
    for chain-end measurements.
    """
    flavor: Flavor
    spec: Optional[PatchSpec]
    qubits: List[Qubit]
    stabilizers: List[Stabilizer]
    layer_bases: List[str]
    slots: Dict[tuple, int] = field(default_factory=dict)
    data_spiders: Dict[Tuple[Qubit, int], int] = field(default_factory=dict)
    stab_spiders: Dict[Tuple[int, int], int] = field(default_factory=dict)
    inputs: Dict[Qubit, int] = field(default_factory=dict)
    outputs: Dict[Qubit, int] = field(default_factory=dict)
    detectors: Dict[Tuple[int, int], FrozenSet[int]] = field(default_factory=dict)
    roles: Dict[int, tuple] = field(default_factory=dict)
    fusions: List[Fusion] = field(default_factory=list)
    chains: Dict[Tuple[int, int, int], List[int]] = field(default_factory=dict)
    pair_measurements: List[PairMeasurement] = field(default_factory=list)
    times: Dict[int, float] = field(default_factory=dict)
    rings: List[List[int]] = field(default_factory=list)

    @property
    def n_layers(self) -> int:
        return len(self.layer_bases)

    @property
    def layers_per_round(self) -> int:
        return len({b for b in self.layer_bases})

    def stabilizer(self, index: int) -> Stabilizer:
        return self.stabilizers[index]

    def round_of_layer(self, layer: int) -> int:
        return layer // self.layers_per_round

    def layer_of(self, index: int, t: int) -> int:
        """
        Layer in which stabilizer index is measured during round t.
        """
        basis = self.stabilizers[index].basis
        per = self.layers_per_round
        offsets = [k for k in range(per) if self.layer_bases[k] == basis]
        return t * per + offsets[0]

    def slot_of(self, var: int) -> tuple:
        for key, v in self.slots.items():
            if v == var:
                return key
        raise KeyError(var)

    def neighbors(self, index: int) -> Dict[str, Optional[Stabilizer]]:
        """
        Side-adjacent stabilizer slots of a plaquette (None where absent).
        """
        by_plaquette = {s.plaquette: s for s in self.stabilizers}
        a, b = self.stabilizers[index].plaquette
        return {'left': by_plaquette.get((a - 1, b)), 'right': by_plaquette.get((a + 1, b)),
                'below': by_plaquette.get((a, b - 1)), 'above': by_plaquette.get((a, b + 1))}

    def is_bulk_stabilizer(self, index: int) -> bool:
        s = self.stabilizers[index]
        return s.weight == 4 and all(n is not None for n in self.neighbors(index).values())

    def is_bulk_detector(self, index: int, t: int) -> bool:
        """
        A detector is in the bulk when its stabilizer is and neither of its
        two measurement layers is the first or last layer. Spiders of those
        layers touch a port, stay unmeasured and cannot be cut by a fusion.
        """
        if t < 1 or not self.is_bulk_stabilizer(index):
            return False
        return self.layer_of(index, t - 1) > 0 and self.layer_of(index, t) < self.n_layers - 1

    def bulk_detectors(self) -> List[Tuple[int, int]]:
        return sorted(k for k in self.detectors if self.is_bulk_detector(*k))

    def copy(self, flavor: Optional[Flavor] = None) -> 'LatticeMeta':
        meta = copy.deepcopy(self)
        if flavor is not None:
            meta.flavor = Flavor(flavor)
        return meta

    def coverage(self, diagram: Diagram) -> List[str]:
        """
        Problems with the slot coverage: every instrument's outcome variables
        must appear in exactly one slot.

        Returns:
            problems (list[str]): empty if coverage is total
        """
        problems = []
        counts = {}
        for key, v in self.slots.items():
            counts[v] = counts.get(v, 0) + 1
        for sid in diagram.instruments():
            for v in diagram.spiders[sid].instrument.vars:
                n = counts.get(v, 0)
                if n != 1:
                    problems.append('outcome {} of spider {} in {} slots'.format(v, sid, n))
        return problems

    def to_dict(self) -> dict:
        return {'flavor': self.flavor.value, 'spec': self.spec.to_dict() if self.spec is not None else None}


def memory_circuit(qubits: Sequence[Qubit], stabilizers: Sequence[Stabilizer], layer_bases: Sequence[str],
                   rounds: int, spec: Optional[PatchSpec] = None) -> Tuple[Diagram, LatticeMeta]:
    """
    Repeated stabilizer measurement on data-qubit worldlines. Each layer has
    one spider per data qubit (green in Z layers, red in X layers) joined by
    plain edges to one instrument spider of the other color per measured
    stabilizer. Worldlines are open at both ends.

    Args:
        qubits (sequence): data qubits
        stabilizers (sequence[Stabilizer]): stabilizers
        layer_bases (sequence[str]): basis measured in each layer of a round
        rounds (int): number of rounds
        spec (PatchSpec): originating patch, recorded in the meta
    Returns:
        diagram (Diagram): CBQC diagram
        meta (LatticeMeta): lattice bookkeeping
    """
    assert rounds >= 1, "rounds must be >= 1, got {}".format(rounds)
    bases = [layer_bases[L % len(layer_bases)] for L in range(rounds * len(layer_bases))]
    meta = LatticeMeta(Flavor.CBQC, spec, list(qubits), list(stabilizers), bases)
    d = Diagram()
    n_layers = len(bases)
    for q in qubits:
        meta.inputs[q] = d.add_port(PortDirection.IN, 'in_{}_{}'.format(*q), (q[0], q[1], -1))
    for q in qubits:
        meta.outputs[q] = d.add_port(PortDirection.OUT, 'out_{}_{}'.format(*q), (q[0], q[1], n_layers))

    per = len(layer_bases)
    for L, basis in enumerate(bases):
        kind = SpiderKind.Z if basis == 'Z' else SpiderKind.X
        for q in qubits:
            s = d.add_spider(kind, 0, None, (q[0], q[1], L))
            meta.data_spiders[(q, L)] = s
            meta.roles[s] = ('data', q, L, None)
            meta.times[s] = L
            below = meta.data_spiders[(q, L - 1)] if L > 0 else meta.inputs[q]
            d.add_edge(below, s)
        t = L // per
        for stab in stabilizers:
            if stab.basis != basis:
                continue
            var = d.add_outcome_var('m{}{}@r{}'.format(basis, stab.index, t))
            cx, cy = stab.center
            a = d.add_spider(kind.other, 0, OutcomeExpr.from_var(var), (cx, cy, L))
            for q in stab.support:
                d.add_edge(meta.data_spiders[(q, L)], a)
            meta.stab_spiders[(stab.index, t)] = a
            meta.roles[a] = ('stab', stab.index, L, None)
            meta.times[a] = L + 0.5
            meta.slots[('stab', stab.index, t)] = var
            if t >= 1:
                meta.detectors[(stab.index, t)] = frozenset({meta.slots[('stab', stab.index, t - 1)], var})
    for q in qubits:
        d.add_edge(meta.data_spiders[(q, n_layers - 1)], meta.outputs[q])
    logger.info(f'memory circuit: {len(qubits)} qubits, {len(stabilizers)} stabilizers, {rounds} rounds, '
                f'{len(d.instruments())} instruments')
    return d, meta


def cbqc(spec: PatchSpec) -> Tuple[Diagram, LatticeMeta]:
    """
    Circuit-based memory patch: per round one layer of Z-type and one layer
    of X-type stabilizer measurement gadgets (in spec.order).

    Args:
        spec (PatchSpec): patch
    Returns:
        diagram (Diagram): CBQC diagram
        meta (LatticeMeta): lattice bookkeeping
    """
    qubits, stabilizers = rotated_patch(spec.distance)
    return memory_circuit(qubits, stabilizers, spec.layer_bases, spec.rounds, spec)


def rep_code_lattice(rounds: int) -> Tuple[Diagram, LatticeMeta]:
    """
    Two-qubit repetition code: `rounds` ZZ measurements in series.
    """
    if rounds < 2:
        raise ValueError('rep_code needs at least 2 rounds, got {}'.format(rounds))
    qubits = [(0, 0), (1, 0)]
    stab = Stabilizer(0, 'Z', (0, -1), (('TL', (0, 0)), ('TR', (1, 0))))
    return memory_circuit(qubits, [stab], ['Z'], rounds)


def rep_code(rounds: int) -> Diagram:
    return rep_code_lattice(rounds)[0]
