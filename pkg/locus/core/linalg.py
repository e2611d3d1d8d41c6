"""
Dense linear algebra over GF(q) on integer-encoded numpy matrices.
"""

from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from locus.core.field import FieldSpec
from locus.errors import SingularMatrixError


def matmul(f: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.ndim == 1:
        return matmul(f, a[None, :], b)[0]
    if b.ndim == 1:
        return matmul(f, a, b[:, None])[:, 0]
    if f.m == 1:
        return (a @ b) % f.p
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        col = a[:, k : k + 1]
        if not col.any():
            continue
        acc = f.add(acc, f.mul(col, b[k : k + 1, :]))
    return acc


def rref(f: FieldSpec, m: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form. The pivot of each column is the first row (at or below
    the current one) holding a nonzero entry.
    :return: the reduced matrix and the list of pivot columns
    """
    r = np.array(m, dtype=np.int64, copy=True)
    if r.ndim != 2:
        raise ValueError(f"Expected a matrix, got shape {r.shape}")
    rows, cols = r.shape
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if len(nz) == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = f.mul(r[row], f.inv(r[row, col]))
        others = np.nonzero(r[:, col])[0]
        others = others[others != row]
        if len(others) > 0:
            factors = r[others, col][:, None]
            r[others] = f.sub(r[others], f.mul(factors, r[row][None, :]))
        pivots.append(col)
        row += 1
    return r, pivots


def rank(f: FieldSpec, m: np.ndarray) -> int:
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    return len(rref(f, m)[1])


def row_basis(f: FieldSpec, m: np.ndarray) -> np.ndarray:
    r, pivots = rref(f, m)
    return r[: len(pivots)]


def nullspace(f: FieldSpec, m: np.ndarray) -> np.ndarray:
    """
    Rows spanning {x : m @ x = 0}.
    """
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(f, m)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = int(f.neg(r[row, fc]))
    return basis


def inverse(f: FieldSpec, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise SingularMatrixError(f"Cannot invert a non-square matrix of shape {m.shape}")
    aug = np.concatenate([m, np.eye(n, dtype=np.int64)], axis=1)
    r, pivots = rref(f, aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError(f"Matrix of size {n} is singular (rank {sum(1 for p in pivots if p < n)})")
    return r[:, n:]


class ErasureSolution(NamedTuple):
    values: np.ndarray
    determined: np.ndarray
    consistent: bool


def solve_erasures(f: FieldSpec, h: np.ndarray, word: np.ndarray, erased: Sequence[int]) -> ErasureSolution:
    """
    Solve h[:, E] x = -h[:, K] word[K] for the erased coordinates E.

    An unknown is determined when its column is a pivot whose row carries no free
    variable; undetermined unknowns are reported as 0 with ``determined`` False.
    """
    h = np.asarray(h, dtype=np.int64)
    word = np.asarray(word, dtype=np.int64)
    erased = list(erased)
    n = h.shape[1]
    known = np.ones(n, dtype=bool)
    known[erased] = False
    if not erased:
        return ErasureSolution(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=bool), True)
    if h.shape[0] == 0:
        return ErasureSolution(np.zeros(len(erased), dtype=np.int64), np.zeros(len(erased), dtype=bool), True)
    rhs = f.neg(matmul(f, h[:, known], word[known])) if known.any() else np.zeros(h.shape[0], dtype=np.int64)
    aug = np.concatenate([h[:, erased], rhs[:, None]], axis=1)
    r, pivots = rref(f, aug)
    e = len(erased)
    consistent = e not in pivots
    values = np.zeros(e, dtype=np.int64)
    determined = np.zeros(e, dtype=bool)
    pivot_cols = [p for p in pivots if p < e]
    free = [c for c in range(e) if c not in set(pivot_cols)]
    for row, pc in enumerate(pivot_cols):
        if not free or not r[row, free].any():
            values[pc] = r[row, e]
            determined[pc] = True
    return ErasureSolution(values, determined, consistent)
