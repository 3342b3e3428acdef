"""Splitting a graded complex into its elementary pieces.

A bounded complex of graded-free k[a]-modules with homogeneous
differentials splits as a direct sum of rank-one complexes with zero
differential and two-term complexes

    0 -> k[a]{s + 2km} --a^m--> k[a]{s} -> 0 .

A two-term piece with m >= 1 has homology k[a]/(a^m){s} concentrated in
its target degree; with m = 0 it is contractible and contributes
nothing.  `decompose` performs the splitting constructively and returns
the multiset of surviving pieces in a canonical order; that multiset is
an isomorphism invariant of the complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    HOM_POLY,
    BigradedTable,
    GradedFreeModule,
    GradedModuleDescriptor,
    GradedRing,
    HomMatrix,
    descriptor_dim_table,
)
from .complexes import GradedComplex


@dataclass(frozen=True)
class Decomposition:
    """Multiset of elementary pieces of a graded complex.

    free_pieces: tuples (i, s), a rank-one summand k[a]{s} in
    homological degree i with zero differential.

    torsion_pieces: tuples (i, m, s) with m >= 1, the two-term summand
    whose generator at degree i - 1, polynomial degree s + 2km, maps by
    a^m onto the generator at degree i, polynomial degree s.  The piece
    is indexed by its target degree i: that is where its homology
    k[a]/(a^m){s} lives.

    Both tuples are stored sorted, so equality is multiset equality.
    """

    k: int
    free_pieces: tuple = ()
    torsion_pieces: tuple = ()

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError("k must be a positive integer")
        free = tuple(sorted((int(i), int(s)) for i, s in self.free_pieces))
        tors = tuple(
            sorted((int(i), int(m), int(s)) for i, m, s in self.torsion_pieces)
        )
        for _, m, _ in tors:
            if m < 1:
                raise ValueError("torsion exponent must be >= 1")
        object.__setattr__(self, "free_pieces", free)
        object.__setattr__(self, "torsion_pieces", tors)


def _argsort(values, reverse=False):
    """Indices sorting `values`, stable, optionally descending."""
    idx = list(range(len(values)))
    idx.sort(key=(lambda r: -values[r]) if reverse else (lambda r: values[r]))
    return idx


def decompose(c: GradedComplex) -> Decomposition:
    """Split `c` into elementary pieces.

    Works degree by degree from the bottom.  At the lowest remaining
    degree n the source generators are ordered by ascending polynomial
    degree and the targets by descending degree, so in the first column
    of d^n the a-exponent grows downward and the first nonzero entry is
    a pivot of minimal exponent m.  If the column is zero the first
    source splits off as a free piece.  Otherwise a change of basis
    clears the pivot's column and row: subtracting multiples of the
    pivot row kills the column below it, which rewrites the next
    differential's pivot-target column into one that d^2 = 0 forces to
    vanish; clearing the pivot row afterwards touches nothing else.
    The source and target then split off as a two-term piece, a torsion
    piece when m >= 1 and a contractible pair when m = 0.
    """
    free, torsion, dropped = _split_pieces(c)
    if len(free) + 2 * len(torsion) + 2 * dropped != c.total_rank():
        raise AssertionError("piece count does not account for every generator")
    return Decomposition(c.ring.k, tuple(free), tuple(torsion))


def contractible_pairs(c: GradedComplex) -> int:
    """Number of m = 0 pairs dropped when splitting `c`.

    Zero exactly when rank accounting against decompose(c) closes:
    |free| + 2 |torsion| = total rank.
    """
    _, _, dropped = _split_pieces(c)
    return dropped


def _split_pieces(c: GradedComplex):
    two_k = c.ring.a_degree
    degs = {i: list(c.modules[i].degrees) for i in c.degrees_present()}
    mats = {}
    for i in sorted(degs):
        if i + 1 in degs:
            mats[i] = c.differential(i).scalar_rows()

    free = []
    torsion = []
    dropped = 0
    for n in sorted(degs):
        src = degs[n]
        if not src:
            continue
        ps = _argsort(src)
        src[:] = [src[j] for j in ps]
        d = mats.get(n)
        tgt = degs.get(n + 1)
        nxt = mats.get(n + 1)
        if d is not None:
            for r in range(len(d)):
                d[r] = [d[r][j] for j in ps]
            pt = _argsort(tgt, reverse=True)
            tgt[:] = [tgt[r] for r in pt]
            mats[n] = [d[r] for r in pt]
            d = mats[n]
            if nxt is not None:
                for r in range(len(nxt)):
                    nxt[r] = [nxt[r][j] for j in pt]

        while src:
            pivots = [r for r in range(len(d))] if d else []
            pivots = [r for r in pivots if d[r][0]]
            if not pivots:
                free.append((n, src[0]))
                del src[0]
                if d:
                    for r in range(len(d)):
                        del d[r][0]
                continue

            l = pivots[0]
            gap = src[0] - tgt[l]
            if gap < 0 or gap % two_k:
                raise AssertionError("pivot violates homogeneity")
            m = gap // two_k
            pivot = d[l][0]
            row_l = d[l]

            # clear the column below the pivot; the ratios also rewrite
            # the pivot target's outgoing column, which must then vanish
            ratios = []
            for i in pivots[1:]:
                ratio = d[i][0] / pivot
                ratios.append((i, ratio))
                d[i] = [d[i][j] - ratio * row_l[j] for j in range(len(row_l))]
            if nxt is not None:
                for r in range(len(nxt)):
                    acc = nxt[r][l]
                    for i, ratio in ratios:
                        acc += ratio * nxt[r][i]
                    if acc:
                        raise AssertionError(
                            "outgoing column of a split target did not vanish"
                        )
                    del nxt[r][l]

            # the pivot column is now supported on row l only, so
            # clearing the pivot row changes no other entry
            for j in range(1, len(row_l)):
                row_l[j] = Fraction(0)

            if m == 0:
                dropped += 1
            else:
                torsion.append((n + 1, m, tgt[l]))
            del src[0]
            for r in range(len(d)):
                del d[r][0]
            del tgt[l]
            del d[l]

    return free, torsion, dropped


def homology_structure(d: Decomposition):
    """Homology of any complex with decomposition `d`, as a map from
    homological degree to a graded module descriptor.

    A free piece (i, s) contributes k[a]{s} at degree i.  A torsion
    piece (i, m, s) contributes k[a]/(a^m){s} at degree i and nothing
    at degree i - 1.
    """
    by_degree = {}
    for i, s in d.free_pieces:
        by_degree.setdefault(i, ([], []))[0].append(s)
    for i, m, s in d.torsion_pieces:
        by_degree.setdefault(i, ([], []))[1].append((m, s))
    return {
        i: GradedModuleDescriptor(tuple(fr), tuple(to))
        for i, (fr, to) in sorted(by_degree.items())
    }


def hn_table(d: Decomposition) -> BigradedTable:
    """Bigraded dimensions of the mod-a homology.

    Each free piece lands at (i, s); each torsion piece (i, m, s) lands
    at (i, s) and at (i - 1, s + 2km).
    """
    table = BigradedTable((), HOM_POLY)
    for i, desc in homology_structure(d).items():
        table = table.add(descriptor_dim_table(desc, i, d.k))
    return table


def torsion_width(d: Decomposition) -> int:
    """Largest torsion exponent; 0 when the homology is free."""
    return max((m for _, m, _ in d.torsion_pieces), default=0)


def thickness(t: BigradedTable):
    """(ht, lht) of a nonzero (hom, poly) dimension table.

    ht  = 1 + max over nonzero pairs of ((2 i1 + j1) - (2 i2 + j2)) / 2.
    lht = max of (j1 - j2) / 2 over nonzero entries in adjacent
          homological degrees i and i + 1; None when no adjacent pair
          exists.

    Both are integers on any table whose entries sit on diagonals of a
    single parity; a mixed-parity table would make them half-integral,
    which is rejected rather than rounded.
    """
    if t.convention != HOM_POLY:
        raise ValueError("thickness expects a table in (hom, poly) convention")
    if t.is_empty():
        raise ValueError("thickness of an empty table")
    support = t.support()
    deltas = [2 * i + j for i, j in support]
    spread = max(deltas) - min(deltas)
    if spread % 2:
        raise ValueError("half-integral thickness on a mixed-parity table")
    ht = 1 + spread // 2

    by_i = {}
    for i, j in support:
        by_i.setdefault(i, []).append(j)
    gaps = [max(by_i[i]) - min(by_i[i + 1]) for i in by_i if i + 1 in by_i]
    if not gaps:
        return ht, None
    widest = max(gaps)
    if widest % 2:
        raise ValueError("half-integral local thickness on a mixed-parity table")
    return ht, widest // 2


def reassemble(d: Decomposition, ring: GradedRing = None) -> GradedComplex:
    """The direct sum of the elementary complexes of `d`.

    Pieces are laid out in canonical order, free before torsion, with
    unit scalars on the torsion differentials.  Splitting the result
    returns `d` itself.
    """
    if ring is None:
        ring = GradedRing(d.k)
    elif ring.k != d.k:
        raise ValueError("ring does not match the decomposition's k")

    degrees = {}

    def slot(i, s):
        degrees.setdefault(i, []).append(s)
        return len(degrees[i]) - 1

    units = {}
    for i, s in d.free_pieces:
        slot(i, s)
    for i, m, s in d.torsion_pieces:
        col = slot(i - 1, s + 2 * d.k * m)
        row = slot(i, s)
        units.setdefault(i - 1, []).append((row, col))

    modules = {i: GradedFreeModule(tuple(v)) for i, v in degrees.items()}
    diffs = {}
    for i, positions in units.items():
        rows = [[Fraction(0)] * len(degrees[i]) for _ in degrees[i + 1]]
        for r, c in positions:
            rows[r][c] = Fraction(1)
        diffs[i] = HomMatrix(
            ring, tuple(degrees[i]), tuple(degrees[i + 1]), tuple(map(tuple, rows))
        )
    return GradedComplex(ring, modules, diffs)
