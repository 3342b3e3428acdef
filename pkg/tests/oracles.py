"""Independent oracles used to pin expected values in the tests.

Nothing in here imports twkit.  The main oracle is a brute-force
Khovanov homology computation over Q in the textbook conventions
(A = Q[x]/(x^2), unknot q + q^-1, positive crossing at homological
degrees 0 and 1), with its own PD handling, its own cube, and its own
row reduction.  The package front end uses different conventions; the
bridge between the two is documented and tested where it is used.

PD conventions (same data format the package reads, interpreted by
separate code):

  crossing = (sign, (a, b, c, d))  with the four arc labels listed
  counterclockwise starting at the incoming under-strand.  The
  0-smoothing joins a-b and c-d, the 1-smoothing joins a-d and b-c,
  for either sign.  sign = +1 means the over-strand runs d -> b.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def _rank(rows):
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = Fraction(1) / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def braid_to_pd(word, strands):
    """PD code of a braid closure: (pd, free_loops).

    word: nonzero integers, +i / -i for the positive / negative
    generator on positions (i, i+1), 1-based, bottom to top.  Strand
    positions never involved in a crossing close into disjoint unknot
    circles, returned as a count.
    """
    used = set()
    for g in word:
        i = abs(g)
        if i < 1 or i >= strands:
            raise ValueError("generator %d out of range for %d strands" % (g, strands))
        used.update((i, i + 1))
    free_loops = sum(1 for p in range(1, strands + 1) if p not in used)
    cur = list(range(strands))
    nxt = strands
    crossings = []
    for g in word:
        i = abs(g) - 1
        lo, hi = cur[i], cur[i + 1]
        out_lo, out_hi = nxt, nxt + 1
        nxt += 2
        if g > 0:
            # the strand entering at position i passes over; the
            # under-strand runs SE (hi) -> NW (out_lo)
            crossings.append((+1, (hi, out_hi, out_lo, lo)))
        else:
            crossings.append((-1, (lo, hi, out_hi, out_lo)))
        cur[i], cur[i + 1] = out_lo, out_hi
    alias = {cur[p]: p for p in range(strands) if cur[p] != p}
    pd = [(sign, tuple(alias.get(a, a) for a in arcs)) for sign, arcs in crossings]
    return pd, free_loops


def mirror_pd(pd):
    """PD code of the mirror image (over/under swapped at every crossing)."""
    out = []
    for sign, (a, b, c, d) in pd:
        if sign > 0:
            out.append((-1, (d, a, b, c)))
        else:
            out.append((+1, (b, c, d, a)))
    return out


def _circles(pd, state):
    """Circles of a full resolution: (count, arc -> circle index)."""
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    arcs = set()
    for _, quad in pd:
        arcs.update(quad)
    for (_, (a, b, c, d)), s in zip(pd, state):
        if s == 0:
            union(a, b)
            union(c, d)
        else:
            union(a, d)
            union(b, c)
    reps = sorted({find(a) for a in arcs})
    index = {rep: i for i, rep in enumerate(reps)}
    return len(reps), {a: index[find(a)] for a in arcs}


def khovanov_table(pd, free_loops=0):
    """Bigraded dims of Khovanov homology over Q: {(i, q): dim}.

    Vertex v in {0,1}^n sits at homological degree |v| - n_minus with
    q-shift |v| + n_plus - 2 n_minus; each circle carries A = span(1, x)
    at q-degrees (+1, -1); the differential flips one 0 to 1 and carries
    merge/split with the cube sign (-1)^(number of 1s before the flip).
    """
    if not pd:
        if not free_loops:
            return {}
        return _tensor_unknots({(0, 1): 1, (0, -1): 1}, free_loops - 1)
    n = len(pd)
    npos = sum(1 for s, _ in pd if s > 0)
    nneg = n - npos
    states = {v: _circles(pd, v) for v in product((0, 1), repeat=n)}

    basis = {}  # (i, q) -> list of (v, marking); marking: 0 = "1", 1 = "x"
    pos = {}
    for v, (c, _) in states.items():
        i = sum(v) - nneg
        shift = sum(v) + npos - 2 * nneg
        for marking in product((0, 1), repeat=c):
            q = shift + sum(1 if m == 0 else -1 for m in marking)
            key = (i, q)
            slot = basis.setdefault(key, [])
            pos[(v, marking)] = (key, len(slot))
            slot.append((v, marking))

    dmat = {}
    for key, els in basis.items():
        tkey = (key[0] + 1, key[1])
        if tkey in basis:
            dmat[key] = [[Fraction(0)] * len(els) for _ in basis[tkey]]

    for v, (cv, lv) in states.items():
        for cx in range(n):
            if v[cx] == 1:
                continue
            w = v[:cx] + (1,) + v[cx + 1:]
            cw, lw = states[w]
            sgn = -1 if sum(v[:cx]) % 2 else 1
            # source circles feeding each target circle, via shared arcs
            back = {}
            for arc, cj in lw.items():
                back.setdefault(cj, set()).add(lv[arc])
            for marking in product((0, 1), repeat=cv):
                images = {}
                if cw == cv - 1:  # merge: two source circles into one
                    tgt = [0] * cw
                    ok = True
                    for cj, srcs in back.items():
                        total = sum(marking[s] for s in srcs)
                        if total >= 2:  # x.x = 0
                            ok = False
                            break
                        tgt[cj] = total
                    if ok:
                        images[tuple(tgt)] = sgn
                elif cw == cv + 1:  # split: one source circle into two
                    fwd = {}
                    for cj, srcs in back.items():
                        for s in srcs:
                            fwd.setdefault(s, []).append(cj)
                    (split_ci, pair), = ((s, sorted(ts)) for s, ts in fwd.items() if len(ts) == 2)
                    base = [0] * cw
                    for cj, srcs in back.items():
                        base[cj] = marking[next(iter(srcs))]
                    if marking[split_ci] == 0:  # Delta(1) = 1 x + x 1
                        for t_one, t_x in (pair, pair[::-1]):
                            tgt = list(base)
                            tgt[t_one], tgt[t_x] = 0, 1
                            key2 = tuple(tgt)
                            images[key2] = images.get(key2, 0) + sgn
                    else:  # Delta(x) = x x
                        tgt = list(base)
                        tgt[pair[0]] = tgt[pair[1]] = 1
                        images[tuple(tgt)] = sgn
                else:
                    raise AssertionError("resolution change is not a merge or split")
                skey, scol = pos[(v, marking)]
                for tmark, coeff in images.items():
                    tkey, trow = pos[(w, tmark)]
                    assert tkey == (skey[0] + 1, skey[1]), "degree bookkeeping broke"
                    dmat[skey][trow][scol] += coeff

    table = {}
    for key, els in basis.items():
        out_rank = _rank(dmat[key]) if key in dmat else 0
        pkey = (key[0] - 1, key[1])
        in_rank = _rank(dmat[pkey]) if pkey in dmat else 0
        dim = len(els) - out_rank - in_rank
        if dim:
            table[key] = dim
    if free_loops:
        table = _tensor_unknots(table, free_loops)
    return table


def _tensor_unknots(table, count):
    for _ in range(count):
        nxt = {}
        for (i, q), d in table.items():
            for dq in (1, -1):
                nxt[(i, q + dq)] = nxt.get((i, q + dq), 0) + d
        table = nxt
    return table


def khovanov_of_braid(word, strands):
    pd, free = braid_to_pd(word, strands)
    return khovanov_table(pd, free)


def khovanov_of_mirror_braid(word, strands):
    return khovanov_of_braid([-g for g in word], strands)
