# test_invariance.py

import torch

from zxft.diagram import SpiderKind
from zxft.oracle import invariance_suite, spider_tensor
from zxft.oracle.dense import DTYPE, PAULI_Y
from zxft.oracle.invariance import permutation_invariant, transpose_compatible


def test_suite_passes(caplog):
    report = invariance_suite(tol=1e-12)
    assert report['passed'].all()
    assert set(report['tensor']) >= {'H', 'Y', 'CZ'}
    assert len(report) == 2 * 5 * 4 * 2 + 6
    assert 'failed' not in caplog.text


def test_y_is_negative_control():
    assert not transpose_compatible(PAULI_Y)
    assert transpose_compatible(spider_tensor(SpiderKind.X, 4, 1))


def test_permutation():
    assert permutation_invariant(spider_tensor(SpiderKind.Z, 3, 3))
    t = torch.zeros((2, 2), dtype=DTYPE)
    t[0, 1] = 1
    assert not permutation_invariant(t)
