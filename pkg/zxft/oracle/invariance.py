# invariance.py

import itertools
import logging
from typing import List

import pandas as pd
import torch

from zxft.diagram import SpiderKind
from zxft.oracle.dense import DTYPE, HADAMARD, PAULI_Y, proportional, spider_tensor
from zxft.utils import TOLERANCE

logger = logging.getLogger(__name__)

MAX_DEGREE = 5


def _as_matrix(t: torch.Tensor, k: int) -> torch.Tensor:
    # first k indices are inputs (columns), the rest outputs (rows)
    n = t.dim()
    return t.reshape(2 ** k, 2 ** (n - k)).T


def permutation_invariant(t: torch.Tensor, tol: float = TOLERANCE) -> bool:
    """
    Whether a tensor is unchanged by every permutation of its indices.
    """
    for perm in itertools.permutations(range(t.dim())):
        if float((t.permute(perm) - t).abs().max()) > tol:
            return False
    return True


def transpose_compatible(t: torch.Tensor, tol: float = TOLERANCE) -> bool:
    """
    Whether bending legs between input and output sides is a transpose: for
    every k, the matrix reading the first k legs as inputs, transposed,
    equals the matrix reading the first n - k legs as inputs.
    """
    n = t.dim()
    for k in range(n + 1):
        if float((_as_matrix(t, k).T - _as_matrix(t, n - k)).abs().max()) > tol:
            return False
    return True


def _row(name: str, check: str, ok: bool, expected: bool = True) -> dict:
    return {'tensor': name, 'check': check, 'ok': bool(ok), 'expected': expected}


def invariance_suite(max_degree: int = MAX_DEGREE, tol: float = TOLERANCE) -> pd.DataFrame:
    """
    Numerical checks that the elementary tensors depend only on their
    connectivity: spiders of degree 1 to max_degree at every quarter-turn
    phase and the Hadamard are invariant under leg permutations and under
    transposition of any subset of legs. Y is the negative control (its
    transpose is -Y), and the CZ matrix commutes with SWAP and is symmetric.

    Args:
        max_degree (int): largest spider degree checked
        tol (float): absolute tolerance
    Returns:
        report (pd.DataFrame): one row per check with columns tensor, check, ok, expected
    """
    rows: List[dict] = []
    for kind in SpiderKind:
        for n in range(1, max_degree + 1):
            for phase in range(4):
                t = spider_tensor(kind, n, phase)
                name = '{}({}pi/2, {} legs)'.format(kind.value, phase, n)
                rows.append(_row(name, 'permutation', permutation_invariant(t, tol)))
                rows.append(_row(name, 'transpose', transpose_compatible(t, tol)))
    rows.append(_row('H', 'permutation', permutation_invariant(HADAMARD, tol)))
    rows.append(_row('H', 'transpose', transpose_compatible(HADAMARD, tol)))
    rows.append(_row('Y', 'transpose', transpose_compatible(PAULI_Y, tol), expected=False))
    rows.append(_row('Y', 'transpose_is_negative', bool(float((PAULI_Y.T + PAULI_Y).abs().max()) <= tol)))
    cz = torch.diag(torch.tensor([1., 1., 1., -1.], dtype=DTYPE))
    swap = torch.eye(4, dtype=DTYPE)[[0, 2, 1, 3]]
    rows.append(_row('CZ', 'swap', proportional(swap @ cz @ swap, cz, tol)))
    rows.append(_row('CZ', 'transpose', proportional(cz.T, cz, tol)))
    report = pd.DataFrame(rows)
    report['passed'] = report['ok'] == report['expected']
    failed = int((~report['passed']).sum())
    if failed:
        logger.warning(f'invariance suite: {failed} checks failed')
    else:
        logger.info(f'invariance suite: all {len(report)} checks passed')
    return report
