"""Exact rational linear algebra kernel.

row_reduce is the single hot primitive; everything else here is a thin
derivation of it.  At import time the compiled backend is preferred,
with the pure-Python reference as fallback.  Set TWKIT_PURE_KERNEL=1 to
force the fallback (the two are bit-identical, so this only changes
speed).  BACKEND records which one is active.
"""

import os

from . import _pure

if os.environ.get("TWKIT_PURE_KERNEL"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

row_reduce = _impl.row_reduce


def rank(rows):
    if not rows or not rows[0]:
        return 0
    return len(row_reduce(rows)[1])


def pivot_columns(rows):
    """Column indices c such that column c adds new rank left to right."""
    if not rows or not rows[0]:
        return []
    return row_reduce(rows)[1]


def kernel_basis(rows, ncols=None):
    """Basis of the right kernel, one vector per non-pivot column.

    For the kernel of an (m x n) matrix acting on column vectors,
    returns vectors of length n in the standard RREF parametrization
    (free column gets 1), ordered by free column index.  Deterministic.
    ncols is required when rows is empty (a 0 x n matrix, full kernel).
    """
    if not rows:
        if not ncols:
            return []
        return [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    ncols = len(rows[0])
    if ncols == 0:
        return []
    rref, pivots = row_reduce(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(v)
    return basis


def image_basis(rows):
    """The pivot columns of the matrix itself: a basis of the column space."""
    if not rows or not rows[0]:
        return []
    cols = pivot_columns(rows)
    return [[row[c] for row in rows] for c in cols]


def solve(rows, rhs_columns, ncols=None):
    """Solve A @ X = B columnwise; B given as a list of column vectors.

    Returns the list of solution vectors (length = #columns of A), or
    None if any column of B is outside the column space.  When A has a
    nontrivial kernel the particular solution with free variables 0 is
    returned.  ncols is required when rows is empty (a 0 x n matrix).
    """
    nb = len(rhs_columns)
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else (ncols or 0)
    if nb == 0:
        return []
    for b in rhs_columns:
        if len(b) != nrows:
            raise ValueError("right-hand side length mismatch")
    if nrows == 0:
        return [[0] * ncols for _ in range(nb)]
    aug = [list(rows[i]) + [b[i] for b in rhs_columns] for i in range(nrows)]
    rref, pivots = row_reduce(aug)
    if any(p >= ncols for p in pivots):
        return None
    sols = []
    for j in range(nb):
        x = [0] * ncols
        for r, pc in enumerate(pivots):
            x[pc] = rref[r][ncols + j]
        sols.append(x)
    return sols
