# dense.py

import itertools
import logging
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
import torch

from zxft.diagram import Diagram, EdgeKind, SpiderKind
from zxft.errors import ContractViolation, SizeError
from zxft.utils import DEFAULT_SEED, EXHAUSTIVE_LIMIT, MAX_DENSE_PORTS, SAMPLED_ASSIGNMENTS, TOLERANCE
from zxft.webs import PauliWeb, legs

logger = logging.getLogger(__name__)

DTYPE = torch.complex128

_PLUS = torch.tensor([1., 1.], dtype=DTYPE)
_MINUS = torch.tensor([1., -1.], dtype=DTYPE)
HADAMARD = torch.tensor([[1., 1.], [1., -1.]], dtype=DTYPE) / np.sqrt(2)
IDENTITY = torch.eye(2, dtype=DTYPE)
PAULI_X = torch.tensor([[0., 1.], [1., 0.]], dtype=DTYPE)
PAULI_Z = torch.tensor([[1., 0.], [0., -1.]], dtype=DTYPE)
PAULI_Y = torch.tensor([[0., -1j], [1j, 0.]], dtype=DTYPE)


class ContractionOrder(Enum):
    """
    Pairwise contraction orders.
        'greedy': always contract the pair with the smallest result
        'sequential': fold tensors in creation order
    """
    GREEDY = 'greedy'
    SEQUENTIAL = 'sequential'


def spider_tensor(kind: SpiderKind, n_legs: int, quarter_turns: int) -> torch.Tensor:
    """
    Unnormalized spider tensor. Z: |0..0> + e^{i a}|1..1>; X: the same with
    every leg in the |+>/|-> basis.

    Args:
        kind (SpiderKind): color
        n_legs (int): number of legs
        quarter_turns (int): phase in units of pi/2
    Returns:
        tensor (torch.Tensor): shape (2,) * n_legs
    """
    phase = torch.exp(torch.tensor(1j * np.pi / 2 * (quarter_turns % 4), dtype=DTYPE))
    if n_legs == 0:
        return 1 + phase
    if SpiderKind(kind) is SpiderKind.Z:
        t = torch.zeros((2,) * n_legs, dtype=DTYPE)
        t[(0,) * n_legs] = 1
        t[(1,) * n_legs] = phase
        return t
    a, b = _PLUS, _MINUS
    for _ in range(n_legs - 1):
        a = torch.tensordot(a, _PLUS, dims=0)
        b = torch.tensordot(b, _MINUS, dims=0)
    return a + phase * b


class DenseTensor:
    """
    Amplitudes of a diagram indexed by its boundary ports in port order.
    """

    def __init__(self, tensor: torch.Tensor, ports: List[int], n_inputs: int):
        self._tensor = tensor
        self._ports = ports
        self._n_inputs = n_inputs

    @property
    def tensor(self) -> torch.Tensor:
        return self._tensor

    @property
    def ports(self) -> List[int]:
        return list(self._ports)

    def matrix(self) -> torch.Tensor:
        """
        Operator from inputs to outputs, shape (2^n_out, 2^n_in).
        """
        n_in = self._n_inputs
        n_out = len(self._ports) - n_in
        return self._tensor.reshape(2 ** n_in, 2 ** n_out).T

    def normalized(self) -> torch.Tensor:
        flat = self._tensor.reshape(-1)
        k = int(torch.argmax(flat.abs()))
        if flat[k].abs() == 0:
            return flat.clone()
        return flat / flat[k]

    @property
    def is_zero(self) -> bool:
        return bool(self._tensor.abs().max() < 1e-12) if self._tensor.numel() else True


def proportional(a: torch.Tensor, b: torch.Tensor, tol: float = TOLERANCE) -> bool:
    """
    Whether two tensors agree up to one nonzero scalar, after normalizing by
    the largest-magnitude entry of a.
    """
    a, b = a.reshape(-1), b.reshape(-1)
    if a.shape != b.shape:
        return False
    za, zb = bool(a.abs().max() < 1e-12), bool(b.abs().max() < 1e-12)
    if za or zb:
        return za and zb
    k = int(torch.argmax(a.abs()))
    if b[k].abs() < 1e-12:
        return False
    return bool((a / a[k] - b / b[k]).abs().max() <= tol)


def _network(diagram: Diagram, assignment: Dict[int, int]) -> Tuple[List[Tuple[torch.Tensor, list]], Dict[int, tuple]]:
    # one label per edge end; plain edges between spiders share a single label,
    # Hadamard edges and port-to-port edges get an explicit matrix
    tensors = []
    end_label = {}
    for eid in sorted(diagram.edges):
        e = diagram.edges[eid]
        explicit = e.kind is EdgeKind.HADAMARD or (diagram.is_port(e.a) and diagram.is_port(e.b))
        if explicit:
            end_label[(eid, True)] = ('a', eid)
            end_label[(eid, False)] = ('b', eid)
            tensors.append((HADAMARD if e.kind is EdgeKind.HADAMARD else IDENTITY, [('a', eid), ('b', eid)]))
        else:
            end_label[(eid, True)] = end_label[(eid, False)] = ('e', eid)
    for sid in sorted(diagram.spiders):
        sp = diagram.spiders[sid]
        labels = [end_label[leg] for leg in legs(diagram, sid)]
        t = spider_tensor(sp.kind, len(labels), sp.effective_phase(assignment))
        tensors.append(_trace_repeats(t, labels))
    port_labels = {}
    for pid in diagram.ports:
        ((eid, at_a),) = legs(diagram, pid)
        port_labels[pid] = end_label[(eid, at_a)]
    return tensors, port_labels


def _trace_repeats(t: torch.Tensor, labels: list) -> Tuple[torch.Tensor, list]:
    # self-loops: a label twice on one tensor is summed over
    labels = list(labels)
    while True:
        seen = {}
        pair = None
        for i, lab in enumerate(labels):
            if lab in seen:
                pair = (seen[lab], i)
                break
            seen[lab] = i
        if pair is None:
            return t, labels
        i, j = pair
        t = torch.diagonal(t, dim1=i, dim2=j).sum(-1)
        labels = [lab for k, lab in enumerate(labels) if k not in pair]


def _contract_pair(a: Tuple[torch.Tensor, list], b: Tuple[torch.Tensor, list]) -> Tuple[torch.Tensor, list]:
    ta, la = a
    tb, lb = b
    shared = [lab for lab in la if lab in lb]
    dims = ([la.index(lab) for lab in shared], [lb.index(lab) for lab in shared])
    t = torch.tensordot(ta, tb, dims=dims) if shared else torch.tensordot(ta, tb, dims=0)
    return t, [lab for lab in la if lab not in shared] + [lab for lab in lb if lab not in shared]


def _contract_all(tensors: list, order: ContractionOrder) -> Tuple[torch.Tensor, list]:
    tensors = list(tensors)
    if not tensors:
        return torch.tensor(1., dtype=DTYPE), []
    if order is ContractionOrder.SEQUENTIAL:
        acc = tensors[0]
        for t in tensors[1:]:
            acc = _contract_pair(acc, t)
        return acc
    while len(tensors) > 1:
        best = None
        for i in range(len(tensors)):
            for j in range(i + 1, len(tensors)):
                li, lj = tensors[i][1], tensors[j][1]
                n_shared = len(set(li) & set(lj))
                size = len(li) + len(lj) - 2 * n_shared
                key = (n_shared == 0, size, i, j)
                if best is None or key < best[0]:
                    best = (key, i, j)
        _, i, j = best
        merged = _contract_pair(tensors[i], tensors[j])
        tensors = [t for k, t in enumerate(tensors) if k not in (i, j)] + [merged]
    return tensors[0]


def dense_contract(diagram: Diagram, assignment: Optional[Dict[int, int]] = None,
                   order: ContractionOrder = ContractionOrder.GREEDY,
                   max_ports: int = MAX_DENSE_PORTS) -> DenseTensor:
    """
    Exact contraction of a diagram for one outcome assignment.

    Args:
        diagram (Diagram): diagram
        assignment (dict): outcome variable -> bit; every variable must be assigned
        order (ContractionOrder): contraction order
        max_ports (int): size limit on boundary ports
    Returns:
        tensor (DenseTensor): amplitudes indexed by ports in port order
    """
    assignment = assignment or {}
    ports = diagram.port_order()
    if len(ports) > max_ports:
        raise SizeError('{} boundary ports exceed the dense limit of {}'.format(len(ports), max_ports))
    missing = [v for v in diagram.outcome_vars if v not in assignment]
    if missing:
        raise ContractViolation('unassigned outcome variables: {}'.format(missing))
    tensors, port_labels = _network(diagram, assignment)
    t, labels = _contract_all(tensors, ContractionOrder(order))
    if ports:
        t = t.permute([labels.index(port_labels[p]) for p in ports])
    return DenseTensor(t, ports, len(diagram.inputs()))


def assignments(variables: List[int], seed: int = DEFAULT_SEED, limit: int = EXHAUSTIVE_LIMIT,
                samples: int = SAMPLED_ASSIGNMENTS) -> List[Dict[int, int]]:
    """
    Every assignment of the variables, or `samples` random ones when there
    are more than 2^limit.
    """
    variables = sorted(variables)
    if len(variables) <= limit:
        return [dict(zip(variables, bits)) for bits in itertools.product((0, 1), repeat=len(variables))]
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, 2, size=(samples, len(variables)))
    return [dict(zip(variables, (int(b) for b in row))) for row in draws]


def _port_signature(diagram: Diagram) -> List[Tuple[str, Optional[str]]]:
    return [(diagram.ports[p].direction.value, diagram.ports[p].label) for p in diagram.port_order()]


def equivalent(d1: Diagram, d2: Diagram, var_map: Optional[Dict[int, int]] = None, pin_unmatched: bool = False,
               seed: int = DEFAULT_SEED, tol: float = TOLERANCE,
               order: ContractionOrder = ContractionOrder.GREEDY) -> bool:
    """
    Whether two diagrams agree up to a scalar for every outcome assignment.

    Args:
        d1, d2 (Diagram): diagrams with the same port directions and labels
        var_map (dict): d1 variable -> d2 variable (default: identical ids)
        pin_unmatched (bool): fix variables without a counterpart to 0 instead of failing
        seed (int): seed for sampled assignments
        tol (float): relative tolerance
        order (ContractionOrder): contraction order
    Returns:
        equivalent (bool)
    """
    if _port_signature(d1) != _port_signature(d2):
        raise ContractViolation('diagrams have different boundary ports')
    var_map = dict(var_map) if var_map is not None else {v: v for v in d1.outcome_vars if v in d2.outcome_vars}
    unmatched1 = [v for v in d1.outcome_vars if v not in var_map]
    unmatched2 = [v for v in d2.outcome_vars if v not in set(var_map.values())]
    if (unmatched1 or unmatched2) and not pin_unmatched:
        raise ContractViolation('outcome variables without a counterpart: {} / {}'.format(unmatched1, unmatched2))
    for a in assignments(list(var_map), seed=seed):
        a1 = dict(a)
        a1.update({v: 0 for v in unmatched1})
        a2 = {var_map[v]: b for v, b in a.items()}
        a2.update({v: 0 for v in unmatched2})
        t1 = dense_contract(d1, a1, order).tensor
        t2 = dense_contract(d2, a2, order).tensor
        if not proportional(t1, t2, tol):
            logger.info(f'diagrams differ at assignment {a}')
            return False
    return True


def pauli_matrix(pauli: str) -> torch.Tensor:
    """
    Port operator of a highlight: X^g Z^r, so 'Y' reads as XZ.
    """
    return {'I': IDENTITY, 'X': PAULI_X, 'Z': PAULI_Z, 'Y': PAULI_X @ PAULI_Z}[pauli]


def apply_ports(tensor: torch.Tensor, ops: List[torch.Tensor]) -> torch.Tensor:
    """
    Apply one 2x2 operator to every index of a tensor.
    """
    t = tensor
    for i, op in enumerate(ops):
        t = torch.movedim(torch.tensordot(op, t, dims=([1], [i])), 0, i)
    return t


def verify_clifford(web: PauliWeb, diagram: Optional[Diagram] = None, seed: int = DEFAULT_SEED,
                    tol: float = TOLERANCE, limit: int = EXHAUSTIVE_LIMIT, samples: int = SAMPLED_ASSIGNMENTS) -> bool:
    """
    Check that the web's Pauli operators on the boundary ports stabilize the
    diagram up to its sign, for every (or sampled) outcome assignment: the
    port operator is applied to every port index (inputs therefore receive
    its transpose), and the result must equal (-1)^sign times the tensor.

    Args:
        web (PauliWeb): web
        diagram (Diagram): diagram (default web.diagram)
        seed (int): seed for sampled assignments
        tol (float): tolerance relative to the largest amplitude
        limit (int): enumerate every assignment up to this many outcome variables
        samples (int): assignments sampled beyond the limit
    Returns:
        ok (bool)
    """
    diagram = diagram if diagram is not None else web.diagram
    outer = web.outer_signature
    ops = [pauli_matrix(outer[p]) for p in diagram.port_order()]
    for a in assignments(list(diagram.outcome_vars), seed=seed, limit=limit, samples=samples):
        t = dense_contract(diagram, a).tensor
        scale = float(t.abs().max()) if t.numel() else 0.
        if scale < 1e-12:
            continue
        sign = -1. if web.sign.value(a) else 1.
        moved = apply_ports(t, ops) if ops else t
        if float((moved - sign * t).abs().max()) > tol * scale:
            logger.info(f'web fails at assignment {a}')
            return False
    return True
