# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Reduced row echelon form over exact rationals, compiled kernel.

Same contract as _pure.row_reduce.  Entries are carried as separate
numerator/denominator Python ints (denominators positive, pairs fully
reduced), which skips Fraction's per-operation object construction and
normalization overhead while staying exact.
"""

from fractions import Fraction
from math import gcd


def row_reduce(rows):
    """RREF of a rational matrix; returns (rref, pivots)."""
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t ncols = 0
    cdef Py_ssize_t r, c, i, j, pr
    if nrows:
        ncols = len(rows[0])

    nums = []
    dens = []
    for row in rows:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        nrow = []
        drow = []
        for x in row:
            f = x if isinstance(x, Fraction) else Fraction(x)
            nrow.append(f.numerator)
            drow.append(f.denominator)
        nums.append(nrow)
        dens.append(drow)

    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = -1
        for i in range(r, nrows):
            if nums[i][c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            nums[r], nums[pr] = nums[pr], nums[r]
            dens[r], dens[pr] = dens[pr], dens[r]
        pn = nums[r]
        pd = dens[r]
        # scale pivot row so entry (r, c) becomes 1
        sn = pn[c]
        sd = pd[c]
        if sn != sd:
            for j in range(c, ncols):
                if pn[j] != 0:
                    # (pn/pd) * (sd/sn)
                    a = pn[j] * sd
                    b = pd[j] * sn
                    if b < 0:
                        a = -a
                        b = -b
                    g = gcd(a, b)
                    if g > 1:
                        a //= g
                        b //= g
                    pn[j] = a
                    pd[j] = b
        pn[c] = 1
        pd[c] = 1
        for i in range(nrows):
            if i == r:
                continue
            inr = nums[i]
            idr = dens[i]
            fn = inr[c]
            if fn == 0:
                continue
            fd = idr[c]
            for j in range(c, ncols):
                bn = pn[j]
                if bn == 0:
                    continue
                # a - (fn/fd) * (bn/bd)
                tn = fn * bn
                td = fd * pd[j]
                a = inr[j] * td - tn * idr[j]
                if a == 0:
                    inr[j] = 0
                    idr[j] = 1
                    continue
                b = idr[j] * td
                if b < 0:
                    a = -a
                    b = -b
                g = gcd(a, b)
                if g > 1:
                    a //= g
                    b //= g
                inr[j] = a
                idr[j] = b
        pivots.append(c)
        r += 1

    out = []
    for i in range(nrows):
        inr = nums[i]
        idr = dens[i]
        out.append([Fraction(inr[j], idr[j]) for j in range(ncols)])
    return out, pivots
