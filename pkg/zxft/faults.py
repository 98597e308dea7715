# faults.py

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from zxft.diagram import Diagram, EdgeKind, OutcomeExpr, SpiderKind
from zxft.errors import ContractViolation, IntegrityError
from zxft.rewrite import insert_identity
from zxft.webs import PauliWeb, WebBasis

logger = logging.getLogger(__name__)

FAULT_PAULIS = ('X', 'Y', 'Z')


@dataclass(frozen=True)
class PauliFault:
    """
    A Pauli inserted on an edge, next to end A (at_a) or end B. Y is an X
    followed by a Z at the same location.
    """
    edge: int
    at_a: bool
    pauli: str

    def __post_init__(self):
        assert self.pauli in FAULT_PAULIS, "Unknown fault Pauli {}".format(self.pauli)

    def flips(self, bits: Tuple[int, int]) -> int:
        """
        Whether this fault anticommutes with a highlight (r, g) at its location.
        """
        r, g = bits
        return {'X': r, 'Z': g, 'Y': r ^ g}[self.pauli]

    def to_dict(self) -> dict:
        return {'edge': self.edge, 'side': 'a' if self.at_a else 'b', 'pauli': self.pauli}

    @classmethod
    def from_dict(cls, data: dict) -> 'PauliFault':
        side = data.get('side', 'a')
        assert side in ('a', 'b'), "side must be 'a' or 'b', got {}".format(side)
        return cls(int(data['edge']), side == 'a', str(data['pauli']))


@dataclass(frozen=True)
class Syndrome:
    """
    Check flips, in the order of basis.checks.
    """
    bits: Tuple[int, ...]

    def __len__(self):
        return len(self.bits)

    def __xor__(self, other: 'Syndrome') -> 'Syndrome':
        assert len(self) == len(other), "syndromes of different bases"
        return Syndrome(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    @property
    def weight(self) -> int:
        return int(sum(self.bits))

    @property
    def is_trivial(self) -> bool:
        return self.weight == 0

    def as_dict(self) -> Dict[int, int]:
        return {i: b for i, b in enumerate(self.bits)}


def _check_edges(diagram: Diagram, faults: Iterable[PauliFault]):
    for f in faults:
        if f.edge not in diagram.edges:
            raise IntegrityError('fault on unknown edge {}'.format(f.edge))


def inject(diagram: Diagram, faults: Sequence[PauliFault]) -> Diagram:
    """
    Splice pi-phase spiders into edges: red for X, green for Z, red then
    green for Y. The input diagram is left untouched.

    Args:
        diagram (Diagram): fault-free diagram
        faults (sequence[PauliFault]): faults
    Returns:
        faulty (Diagram): copy with the fault spiders spliced in
    """
    _check_edges(diagram, faults)
    d = diagram.copy()
    # current segments touching the original ends A and B of each edge
    a_seg, b_seg = {}, {}
    for f in faults:
        a_seg.setdefault(f.edge, f.edge)
        b_seg.setdefault(f.edge, f.edge)
        kinds = [SpiderKind.X, SpiderKind.Z] if f.pauli == 'Y' else \
            [SpiderKind.X if f.pauli == 'X' else SpiderKind.Z]
        for kind in kinds:
            if f.at_a:
                seg = a_seg[f.edge]
                step = insert_identity(d, seg, kind, EdgeKind.PLAIN)
                if b_seg[f.edge] == seg:
                    b_seg[f.edge] = step.created['edge']
            else:
                seg = b_seg[f.edge]
                step = insert_identity(d, seg, kind, d.edges[seg].kind)
                b_seg[f.edge] = step.created['edge']
            d.set_phase(step.created['spider'], 2)
    logger.info(f'injected {len(faults)} faults')
    return d


def flip(faults: Iterable[PauliFault], web: PauliWeb) -> int:
    """
    Parity of the faults that anticommute with a web.
    """
    bit = 0
    for f in faults:
        bit ^= f.flips(web.value(f.edge, f.at_a))
    return bit


def syndrome(faults: Sequence[PauliFault], basis: WebBasis) -> Syndrome:
    """
    Check flips caused by faults, computed from the fault-free basis: an X
    fault flips a check with a red highlight at its location, Z one with a
    green highlight, Y one with exactly one of the two.

    Args:
        faults (sequence[PauliFault]): faults
        basis (WebBasis): basis of the fault-free diagram
    Returns:
        syndrome (Syndrome): one bit per check
    """
    _check_edges(basis.diagram, faults)
    return Syndrome(tuple(flip(faults, w) for w in basis.checks))


def syndromes(fault_sets: Sequence[Sequence[PauliFault]], basis: WebBasis, n_jobs: int = 1) -> List[Syndrome]:
    """
    Batch syndrome evaluation.

    Args:
        fault_sets (sequence): fault sets
        basis (WebBasis): basis of the fault-free diagram
        n_jobs (int): joblib workers
    Returns:
        syndromes (list[Syndrome]): one per fault set
    """
    if n_jobs == 1:
        return [syndrome(f, basis) for f in fault_sets]
    return Parallel(n_jobs=n_jobs)(delayed(syndrome)(f, basis) for f in fault_sets)


def correlator_flip(faults: Sequence[PauliFault], web: PauliWeb) -> Tuple[int, OutcomeExpr]:
    """
    Flip of a logical correlator under faults, together with the correlator's
    outcome expression (its Pauli-frame contribution).

    Args:
        faults (sequence[PauliFault]): faults
        web (PauliWeb): web with support on boundary ports
    Returns:
        bit (int): 1 if the faults flip the correlator
        sign (OutcomeExpr): outcome expression of the correlator
    """
    if web.outer_signature.is_identity:
        raise ContractViolation('correlator_flip needs a web with support on boundary ports')
    _check_edges(web.diagram, faults)
    return flip(faults, web), web.sign


def classify(faults: Sequence[PauliFault], basis: WebBasis) -> str:
    """
    'detected' if some check flips; otherwise 'logical' if some outer web
    flips, else 'stabilizer'.
    """
    if not syndrome(faults, basis).is_trivial:
        return 'detected'
    if any(flip(faults, w) for w in basis.outer):
        return 'logical'
    return 'stabilizer'


@dataclass(frozen=True)
class EdgeCoverage:
    edge: int
    red: int
    green: int
    boundary: bool

    @property
    def double_covered(self) -> bool:
        return self.red > 0 and self.green > 0


class DetectabilityReport:

    def __init__(self, rows: List[EdgeCoverage]):
        self._rows = rows

    @property
    def rows(self) -> List[EdgeCoverage]:
        return list(self._rows)

    def __getitem__(self, edge: int) -> EdgeCoverage:
        for row in self._rows:
            if row.edge == edge:
                return row
        raise KeyError(edge)

    def undercovered(self, include_boundary: bool = False) -> List[int]:
        return [r.edge for r in self._rows if not r.double_covered and (include_boundary or not r.boundary)]

    def table(self) -> pd.DataFrame:
        return pd.DataFrame([{'edge': r.edge, 'red': r.red, 'green': r.green, 'boundary': r.boundary,
                              'double_covered': r.double_covered} for r in self._rows])


def detectability_map(diagram: Diagram, basis: WebBasis, edges: Optional[Iterable[int]] = None) -> DetectabilityReport:
    """
    For each edge, how many checks carry a red and how many a green
    highlight at its A end. Edges with both detect every single-edge fault.

    Args:
        diagram (Diagram): fault-free diagram
        basis (WebBasis): its web basis
        edges (iterable): edges to report (default all)
    Returns:
        report (DetectabilityReport): per-edge coverage
    """
    edges = sorted(diagram.edges) if edges is None else sorted(edges)
    index = {e: i for i, e in enumerate(edges)}
    red = np.zeros(len(edges), dtype=np.int64)
    green = np.zeros(len(edges), dtype=np.int64)
    for w in basis.checks:
        for eid in w.edges:
            if eid in index:
                r, g = w.value(eid, True)
                red[index[eid]] += r
                green[index[eid]] += g
    ports = set(diagram.ports)
    rows = []
    for e in edges:
        edge = diagram.edges[e]
        rows.append(EdgeCoverage(e, int(red[index[e]]), int(green[index[e]]), edge.a in ports or edge.b in ports))
    report = DetectabilityReport(rows)
    bad = report.undercovered()
    if bad:
        logger.warning(f'{len(bad)} non-boundary edges lack red or green check coverage')
    return report


def random_faults(diagram: Diagram, n: int, seed: int = 0) -> List[PauliFault]:
    """
    n faults drawn uniformly over edges, sides and Paulis.
    """
    rng = np.random.default_rng(seed)
    edges = sorted(diagram.edges)
    return [PauliFault(int(edges[rng.integers(len(edges))]), bool(rng.integers(2)),
                       FAULT_PAULIS[rng.integers(3)]) for _ in range(n)]
