# gf2.py

from typing import List, Tuple

import numpy as np


def as_bits(matrix) -> np.ndarray:
    m = np.array(matrix, dtype=np.uint8, copy=True)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    return m & 1


def rref(matrix) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form over GF(2), lowest-index pivot first.

    Args:
        matrix (array-like): (m, n) 0/1 matrix
    Returns:
        reduced (np.ndarray): (m, n) uint8 matrix; rows past the rank are zero
        pivots (list[int]): pivot column of each nonzero row
    """
    m = as_bits(matrix)
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(m[r:, c])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        mask = m[:, c].astype(bool)
        mask[r] = False
        if mask.any():
            m[mask] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix, n_cols: int = None) -> np.ndarray:
    """
    Basis of {x : A x = 0} over GF(2).

    Args:
        matrix (array-like): (m, n) 0/1 matrix
        n_cols (int): number of columns when the matrix has no rows
    Returns:
        basis (np.ndarray): (k, n) uint8 matrix whose rows span the null space
    """
    a = np.asarray(matrix)
    if a.size == 0:
        n = n_cols if n_cols is not None else (a.shape[1] if a.ndim == 2 else 0)
        return np.eye(n, dtype=np.uint8)
    reduced, pivots = rref(a)
    n = reduced.shape[1]
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    if not free:
        return basis
    basis[np.arange(len(free)), free] = 1
    if pivots:
        basis[:, pivots] = reduced[:len(pivots)][:, free].T
    return basis


def solve_combination(rows: np.ndarray, target: np.ndarray, columns) -> np.ndarray:
    """
    Find a subset of the rows whose XOR matches target on the given columns.

    Args:
        rows (np.ndarray): (k, n) 0/1 matrix
        target (np.ndarray): (len(columns),) 0/1 vector
        columns (list[int]): columns to match
    Returns:
        selection (np.ndarray): (k,) 0/1 vector, or None if no combination exists
    """
    columns = list(columns)
    k = rows.shape[0]
    if k == 0:
        return np.zeros(0, dtype=np.uint8) if not np.any(target) else None
    # augmented system [R^T | t] over the selected columns
    aug = np.concatenate([as_bits(rows[:, columns]).T, as_bits(target).reshape(-1, 1)], axis=1)
    reduced, pivots = rref(aug)
    if k in pivots:
        return None
    x = np.zeros(k, dtype=np.uint8)
    for i, c in enumerate(pivots):
        x[c] = reduced[i, k]
    return x
