# tableau.py

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import stim
from joblib import Parallel, delayed

from zxft.builders.lattices import Flavor, LatticeMeta
from zxft.diagram import Diagram, EdgeKind, OutcomeExpr, SpiderKind
from zxft.errors import ContractViolation
from zxft.utils import DEFAULT_SEED, DEFAULT_TABLEAU_RUNS
from zxft.webs import PauliWeb, legs

logger = logging.getLogger(__name__)

# tie-break inside one time step
PREPARE, GATE, MEASURE = 0, 1, 2

_PHASE_GATES = {
    SpiderKind.Z: {1: 'S', 2: 'Z', 3: 'S_DAG'},
    SpiderKind.X: {1: 'SQRT_X', 2: 'X', 3: 'SQRT_X_DAG'},
}


@dataclass(frozen=True)
class Op:
    """
    One primitive step of a circuit reading. MPP targets are (pauli, qubit)
    pairs, all other targets are qubit indices.
    """
    time: float
    order: int
    name: str
    targets: tuple
    var: Optional[int] = None


class CircuitReading:
    """
    Time-ordered Clifford circuit whose measurement record reproduces the
    outcome distribution of a lattice diagram.

    locations maps every spider read as a point on a qubit worldline to
    (qubit, time); port_wires maps boundary ports to the (qubit, time) where
    a Pauli on the port edge acts.
    """

    def __init__(self, flavor: Flavor):
        self._flavor = Flavor(flavor)
        self._qubits: List[tuple] = []
        self._ops: List[Op] = []
        self._locations: Dict[int, Tuple[int, float]] = {}
        self._port_wires: Dict[int, Tuple[int, float]] = {}
        self._flips: set = set()

    @property
    def flavor(self) -> Flavor:
        return self._flavor

    @property
    def n_qubits(self) -> int:
        return len(self._qubits)

    @property
    def qubits(self) -> List[tuple]:
        return list(self._qubits)

    @property
    def ops(self) -> List[Op]:
        return sorted(self._ops, key=lambda o: (o.time, o.order))

    @property
    def locations(self) -> Dict[int, Tuple[int, float]]:
        return dict(self._locations)

    @property
    def port_wires(self) -> Dict[int, Tuple[int, float]]:
        return dict(self._port_wires)

    @property
    def flips(self) -> frozenset:
        return frozenset(self._flips)

    def qubit(self, key: tuple) -> int:
        self._qubits.append(key)
        return len(self._qubits) - 1

    def add(self, time: float, order: int, name: str, targets, var: Optional[int] = None):
        self._ops.append(Op(time, order, name, tuple(targets), var))

    def locate(self, spider: int, qubit: int, time: float):
        self._locations[spider] = (qubit, time)

    def wire(self, port: int, qubit: int, time: float):
        self._port_wires[port] = (qubit, time)

    def flip(self, var: int):
        self._flips ^= {var}

    def measured_vars(self) -> List[int]:
        return [op.var for op in self.ops if op.order == MEASURE]

    def count(self, name: str) -> int:
        return sum(1 for op in self._ops if op.name == name)

    def to_stim(self) -> stim.Circuit:
        """
        Returns:
            circuit (stim.Circuit): one measurement record entry per measured variable, in measured_vars() order
        """
        c = stim.Circuit()
        for op in self.ops:
            if op.name == 'BELL':
                a, b = op.targets
                c.append('H', [a])
                c.append('CX', [a, b])
            elif op.name == 'MPP':
                c.append('MPP', _pauli_product(op.targets))
            else:
                c.append(op.name, list(op.targets))
        return c


def _pauli_product(targets: Sequence[Tuple[str, int]]) -> list:
    make = {'X': stim.target_x, 'Y': stim.target_y, 'Z': stim.target_z}
    out = []
    for i, (p, q) in enumerate(targets):
        if i:
            out.append(stim.target_combiner())
        out.append(make[p](q))
    return out


def _only_var(diagram: Diagram, s: int) -> int:
    expr = diagram.spiders[s].instrument
    assert len(expr.vars) == 1, "instrument {} must carry a single outcome variable".format(s)
    (var,) = expr.vars
    return var


def _measure(r: CircuitReading, diagram: Diagram, s: int, time: float, name: str, targets):
    # instrument phase and constant shift the recorded bit
    sp = diagram.spiders[s]
    if sp.phase % 2:
        raise ContractViolation('instrument {} has a non-Pauli phase'.format(s))
    var = _only_var(diagram, s)
    r.add(time, MEASURE, name, targets, var)
    if (sp.phase // 2 + sp.instrument.const) % 2:
        r.flip(var)


def _phase_gate(r: CircuitReading, diagram: Diagram, s: int, qubit: int, time: float):
    sp = diagram.spiders[s]
    if sp.instrument is None and sp.phase:
        r.add(time, GATE, _PHASE_GATES[sp.kind][sp.phase], [qubit])


def _port_neighbors(diagram: Diagram, faults: set) -> Dict[int, List[int]]:
    # spider -> adjacent ports, looking through fault spiders
    out = {}
    for p in diagram.port_order():
        end, _, _ = _walk(diagram, p, diagram.port_edge(p), faults, 0)
        out.setdefault(end, []).append(p)
    return out


def _walk(diagram: Diagram, start: int, eid: int, skip: set, parity: int) -> Tuple[int, int, int]:
    # follow an edge through degree-2 spiders in skip; returns (endpoint, Hadamard parity, last edge)
    node = start
    while True:
        e = diagram.edges[eid]
        parity ^= int(e.kind is EdgeKind.HADAMARD)
        node = e.other(node)
        if node not in skip:
            return node, parity, eid
        nxt = [x for x, _ in legs(diagram, node) if x != eid]
        assert len(nxt) == 1, "fault spider {} must have degree 2".format(node)
        eid = nxt[0]


def _fault_spiders(diagram: Diagram, meta: LatticeMeta) -> set:
    faults = set()
    for s, sp in diagram.spiders.items():
        if s in meta.roles:
            continue
        if sp.instrument is not None or sp.phase != 2 or diagram.degree(s) != 2:
            raise ContractViolation('spider {} has no lattice role and is not a Pauli fault'.format(s))
        faults.add(s)
    return faults


def cbqc_reading(diagram: Diagram, meta: LatticeMeta) -> CircuitReading:
    """
    Bell-paired data qubits, then one joint Pauli measurement per stabilizer
    instrument in layer order.
    """
    r = CircuitReading(Flavor.CBQC)
    index = {}
    for q in meta.qubits:
        index[q] = r.qubit(('data', q))
        ref = r.qubit(('ref', q))
        r.add(-1, PREPARE, 'BELL', [ref, index[q]])
        r.wire(meta.inputs[q], index[q], -0.5)
        r.wire(meta.outputs[q], index[q], meta.n_layers + 1)
    for (q, L), s in meta.data_spiders.items():
        r.locate(s, index[q], L)
        _phase_gate(r, diagram, s, index[q], L)
    for (i, t), a in sorted(meta.stab_spiders.items()):
        stab = meta.stabilizer(i)
        L = meta.roles[a][2]
        _measure(r, diagram, a, L + 0.5, 'MPP', [(stab.basis, index[q]) for q in stab.support])
    return r


def graph_reading(diagram: Diagram, meta: LatticeMeta) -> CircuitReading:
    """
    Graph-state reading of an MBQC or FBQC lattice: every green vertex is a
    qubit prepared in |+> (or holding an input half of a Bell pair), one CZ
    per Hadamard edge, then fusions as XX and ZZ parity measurements and
    single-qubit X measurements of the instruments.
    """
    r = CircuitReading(meta.flavor)
    faults = _fault_spiders(diagram, meta)
    gadget = {s for s, role in meta.roles.items() if role[0] == 'fusion'}
    vertices = sorted(s for s in meta.roles if s not in gadget and diagram.is_spider(s))
    ports = _port_neighbors(diagram, faults)
    index = {}
    for v in vertices:
        if diagram.spiders[v].kind is not SpiderKind.Z:
            raise ContractViolation('vertex {} is not a green spider'.format(v))
        index[v] = r.qubit(('vertex', v))
        r.locate(v, index[v], 1.5)
        inputs = [p for p in ports.get(v, []) if p in diagram.inputs()]
        if len(inputs) > 1:
            raise ContractViolation('vertex {} touches {} input ports'.format(v, len(inputs)))
        if inputs:
            ref = r.qubit(('ref', inputs[0]))
            r.add(0, PREPARE, 'BELL', [ref, index[v]])
            _, parity, _ = _walk(diagram, inputs[0], diagram.port_edge(inputs[0]), faults, 0)
            if parity:
                r.add(0, GATE, 'H', [index[v]])
            r.wire(inputs[0], index[v], 0.5)
        else:
            r.add(0, PREPARE, 'RX', [index[v]])
        for p in ports.get(v, []):
            if p not in inputs:
                r.wire(p, index[v], 3)
        _phase_gate(r, diagram, v, index[v], 1.5)
    done = set()
    for v in vertices:
        for eid, _ in legs(diagram, v):
            end, parity, last = _walk(diagram, v, eid, faults, 0)
            if end not in index or (end, last) in done:
                continue
            done.add((v, eid))
            if not parity or end == v:
                raise ContractViolation('edge {} between vertices is not a Hadamard edge'.format(eid))
            r.add(1, GATE, 'CZ', [index[v], index[end]])
    for f in meta.fusions:
        a, b = (index[h] for h in f.halves)
        _measure(r, diagram, f.xx_spider, 2, 'MPP', [('X', a), ('X', b)])
        _measure(r, diagram, f.zz_spider, 2, 'MPP', [('Z', a), ('Z', b)])
    for v in vertices:
        if diagram.spiders[v].instrument is not None:
            _measure(r, diagram, v, 2, 'MX', [index[v]])
    return r


def chain_reading(diagram: Diagram, meta: LatticeMeta) -> CircuitReading:
    """
    One qubit per FloBQC chain, prepared before its first spider, carrying
    the two-body measurements at their scheduled times and measured after
    its last spider unless that spider reaches an output.
    """
    r = CircuitReading(Flavor.FLOBQC)
    ports = _port_neighbors(diagram, _fault_spiders(diagram, meta))
    inputs, outputs = set(diagram.inputs()), set(diagram.outputs())
    owner = {}
    for label in sorted(meta.chains):
        members = meta.chains[label]
        q = r.qubit(('chain', label))
        for pos, s in enumerate(members):
            owner[s] = q
            r.locate(s, q, meta.times[s])
            _phase_gate(r, diagram, s, q, meta.times[s])
            for p in ports.get(s, []):
                first, last = pos == 0, pos == len(members) - 1
                if (p in inputs and not first) or (p in outputs and not last):
                    raise ContractViolation('chain {} reaches port {} from its middle'.format(label, p))
        first, last = members[0], members[-1]
        t0, t1 = meta.times[first], meta.times[last]
        start_inputs = [p for p in ports.get(first, []) if p in inputs]
        if start_inputs:
            ref = r.qubit(('ref', start_inputs[0]))
            r.add(t0 - 0.5, PREPARE, 'BELL', [ref, q])
            r.wire(start_inputs[0], q, t0 - 0.25)
        else:
            r.add(t0 - 0.5, PREPARE, 'RX' if diagram.spiders[first].kind is SpiderKind.Z else 'R', [q])
        for p in ports.get(last, []):
            if p in outputs:
                r.wire(p, q, t1 + 1)
        if diagram.spiders[last].instrument is not None:
            _measure(r, diagram, last, t1 + 0.5, 'MX' if diagram.spiders[last].kind is SpiderKind.Z else 'M', [q])
    for m in meta.pair_measurements:
        basis = m.kind[0]
        _measure(r, diagram, m.gadget, m.time, 'MPP', [(basis, owner[s]) for s in m.spiders])
    return r


def _place_faults(r: CircuitReading, diagram: Diagram, faults: set):
    # push every pi spider to a neighbor of its own color (a phase there) or
    # onto the qubit wire of a located neighbor
    locations = r.locations
    for f in sorted(faults):
        kind = diagram.spiders[f].kind
        sides = [_walk(diagram, f, eid, faults, 0)[:2] for eid, _ in legs(diagram, f)]
        seen = [kind if parity == 0 else kind.other for _, parity in sides]
        placed = False
        for (end, _), color in zip(sides, seen):
            if not diagram.is_spider(end) or diagram.spiders[end].kind is not color:
                continue
            if end in locations:
                q, t = locations[end]
                r.add(t, GATE, color_pauli(color), [q])
                placed = True
                break
            if diagram.spiders[end].instrument is not None:
                r.flip(min(diagram.spiders[end].instrument.vars))
                placed = True
                break
        if placed:
            continue
        located = [(end, color) for (end, _), color in zip(sides, seen) if end in locations]
        ported = [end for end, _ in sides if diagram.is_port(end) and end in r.port_wires]
        if len(located) == 2 and locations[located[0][0]][0] == locations[located[1][0]][0]:
            end, color = max(located, key=lambda x: locations[x[0]][1])
            q, t = locations[end]
            r.add(t - 0.25, GATE, color_pauli(color), [q])
        elif len(located) == 1 and ported:
            q, t = r.port_wires[ported[0]]
            r.add(t, GATE, color_pauli(located[0][1]), [q])
        elif len(located) == 1:
            q, t = locations[located[0][0]]
            r.add(t, GATE, color_pauli(located[0][1]), [q])
        else:
            raise ContractViolation('cannot place the Pauli fault at spider {}'.format(f))
    if faults:
        logger.info(f'placed {len(faults)} Pauli faults in the circuit reading')


def color_pauli(kind: SpiderKind) -> str:
    return 'Z' if kind is SpiderKind.Z else 'X'


def reading(diagram: Diagram, meta: LatticeMeta) -> CircuitReading:
    """
    Circuit reading of a lattice diagram from its schedule. Spiders without a
    lattice role are read as Pauli faults (as left by faults.inject) and
    become Pauli gates or recorded-outcome flips.

    Args:
        diagram (Diagram): lattice diagram, possibly with injected faults
        meta (LatticeMeta): its bookkeeping
    Returns:
        reading (CircuitReading): Clifford circuit reading
    """
    faults = _fault_spiders(diagram, meta)
    builder = {Flavor.CBQC: cbqc_reading, Flavor.MBQC: graph_reading, Flavor.FBQC: graph_reading,
               Flavor.FLOBQC: chain_reading}[meta.flavor]
    r = builder(diagram, meta)
    _place_faults(r, diagram, faults)
    missing = sorted(set(diagram.outcome_vars) - set(r.measured_vars()))
    if missing:
        raise ContractViolation('outcome variables {} are not measured by the reading'.format(missing))
    logger.info(f'{meta.flavor.value} reading: {r.n_qubits} qubits, {len(r.ops)} steps')
    return r


class OutcomeRecord:
    """
    Sampled outcome bits, one row per run and one column per variable.
    """

    def __init__(self, variables: List[int], bits: np.ndarray):
        self._vars = list(variables)
        self._bits = bits.astype(np.uint8)
        self._column = {v: i for i, v in enumerate(self._vars)}

    @property
    def vars(self) -> List[int]:
        return list(self._vars)

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def runs(self) -> int:
        return self._bits.shape[0]

    def __getitem__(self, var: int) -> np.ndarray:
        if var not in self._column:
            raise ContractViolation('outcome variable {} was not recorded'.format(var))
        return self._bits[:, self._column[var]]

    def evaluate(self, expr: OutcomeExpr) -> np.ndarray:
        """
        Value of an outcome expression in every run.
        """
        out = np.full(self.runs, expr.const, dtype=np.uint8)
        for v in expr.vars:
            out ^= self[v]
        return out

    def assignment(self, run: int) -> Dict[int, int]:
        return {v: int(self._bits[run, i]) for i, v in enumerate(self._vars)}

    def table(self, diagram: Optional[Diagram] = None) -> pd.DataFrame:
        names = [diagram.outcome_vars[v].label or str(v) for v in self._vars] if diagram is not None else self._vars
        return pd.DataFrame(self._bits, columns=names)


def tableau_run(reading: CircuitReading, seed: int = DEFAULT_SEED, runs: int = DEFAULT_TABLEAU_RUNS) -> OutcomeRecord:
    """
    Sample the reading with a stabilizer tableau simulator.

    Args:
        reading (CircuitReading): reading
        seed (int): sampler seed
        runs (int): number of shots
    Returns:
        record (OutcomeRecord): outcome bits with fault flips applied
    """
    circuit = reading.to_stim()
    samples = circuit.compile_sampler(seed=seed).sample(shots=runs).astype(np.uint8)
    variables = reading.measured_vars()
    flips = np.array([1 if v in reading.flips else 0 for v in variables], dtype=np.uint8)
    return OutcomeRecord(variables, samples ^ flips)


def tableau_runs(readings: Sequence[CircuitReading], seed: int = DEFAULT_SEED, runs: int = DEFAULT_TABLEAU_RUNS,
                 n_jobs: int = 1) -> List[OutcomeRecord]:
    """
    Batch sampling, reading k seeded with seed + k.
    """
    if n_jobs == 1:
        return [tableau_run(r, seed + k, runs) for k, r in enumerate(readings)]
    return Parallel(n_jobs=n_jobs)(delayed(tableau_run)(r, seed + k, runs) for k, r in enumerate(readings))


def check_constraints(reading: CircuitReading, checks: Iterable[Union[PauliWeb, OutcomeExpr]],
                      runs: int = DEFAULT_TABLEAU_RUNS, seed: int = DEFAULT_SEED) -> pd.DataFrame:
    """
    Count the runs in which each check constraint (its sign expression must
    vanish) is violated.

    Args:
        reading (CircuitReading): reading
        checks (iterable): check webs or their sign expressions
        runs (int): number of shots
        seed (int): sampler seed
    Returns:
        table (pd.DataFrame): columns check, sign, violations, runs
    """
    record = tableau_run(reading, seed, runs)
    rows = []
    for k, c in enumerate(checks):
        expr = c.sign if isinstance(c, PauliWeb) else c
        rows.append({'check': k, 'sign': str(expr), 'violations': int(record.evaluate(expr).sum()), 'runs': runs})
    table = pd.DataFrame(rows, columns=['check', 'sign', 'violations', 'runs'])
    bad = int((table['violations'] > 0).sum()) if len(table) else 0
    logger.info(f'check constraints: {len(table)} checks, {bad} violated over {runs} runs')
    return table
