"""Pages of the filtration spectral sequence, three ways.

Closed forms per elementary piece, assembly over a decomposition, and a
generic computation from a filtered complex of vector spaces that knows
nothing about pieces.  All three must agree exactly; the generic route
is the referee.

Position convention: a page entry sits at (p, q) where p is the
filtration degree and q is the homological degree minus p.  A generator
of polynomial degree s in homological degree i therefore lands at
(s, i - s).
"""

from __future__ import annotations

from .algebra import (
    HOM_POLY,
    PAGE,
    BigradedTable,
    GradedModuleDescriptor,
    _value_add,
    boxtimes,
)
from .complexes import FilteredFieldComplex
from .decompose import Decomposition, torsion_width
from .exactla import kernel_basis, rank


class PageTable:
    """One page of the spectral sequence.

    hat pages carry field dimensions; module pages carry graded module
    descriptors whose internal shifts repeat the filtration degree p of
    their position.  Zero entries are dropped on construction.
    """

    __slots__ = ("r", "hat", "_entries")

    def __init__(self, r, entries=(), hat=True):
        r = int(r)
        if r < 0:
            raise ValueError("page index must be >= 0")
        data = {}
        items = entries.items() if hasattr(entries, "items") else entries
        for key, value in items:
            key = (int(key[0]), int(key[1]))
            if hat:
                if isinstance(value, GradedModuleDescriptor):
                    raise ValueError("hat pages carry dimensions, not modules")
                if value < 0:
                    raise ValueError("negative dimension at %r" % (key,))
                if value:
                    data[key] = data.get(key, 0) + value
            else:
                if not isinstance(value, GradedModuleDescriptor):
                    raise ValueError("module pages carry descriptors")
                if value:
                    data[key] = data[key].merge(value) if key in data else value
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "hat", bool(hat))
        object.__setattr__(self, "_entries", data)

    def __setattr__(self, name, value):
        raise AttributeError("PageTable is immutable")

    def items(self):
        return sorted(self._entries.items())

    def support(self):
        return sorted(self._entries)

    def get(self, p, q):
        default = 0 if self.hat else GradedModuleDescriptor()
        return self._entries.get((p, q), default)

    def is_empty(self) -> bool:
        return not self._entries

    def same_entries(self, other: "PageTable") -> bool:
        """Entry-wise equality, ignoring the page index."""
        return self.hat == other.hat and self._entries == other._entries

    def __eq__(self, other):
        return (
            isinstance(other, PageTable)
            and self.r == other.r
            and self.same_entries(other)
        )

    def __hash__(self):
        return hash((self.r, self.hat, frozenset(self._entries.items())))

    def __repr__(self):
        return "PageTable(r=%d, %r, hat=%r)" % (self.r, self.items(), self.hat)

    def merge(self, other: "PageTable") -> "PageTable":
        if self.hat != other.hat or self.r != other.r:
            raise ValueError("cannot merge pages of different kind or index")
        merged = dict(self._entries)
        for key, value in other._entries.items():
            merged[key] = _value_add(merged[key], value) if key in merged else value
        return PageTable(self.r, merged, self.hat)

    def table(self) -> BigradedTable:
        """Dimensions as a (p, q) table; hat pages only."""
        if not self.hat:
            raise ValueError("module page has no single dimension table")
        return BigradedTable(self._entries, PAGE)

    def _rebuild(self, entries):
        return PageTable(self.r, entries, self.hat)


def piece_pages(piece, hat: bool, r: int, k: int) -> PageTable:
    """Closed-form page of one elementary piece.

    piece: (i, s) for a free piece, (i, m, s) for a torsion piece.

    A free piece shows one class at (s, i - s) on every page.  A torsion
    piece shows its two generator classes, at (s, i - s) and at
    (s + 2km, i - 1 - s - 2km), on pages r <= 2km; from r = 2km + 1 on,
    the hat page is empty while the module page keeps k[a]/(a^m){s}
    at (s, i - s).
    """
    if r < 0:
        raise ValueError("page index must be >= 0")
    if len(piece) == 2:
        i, s = piece
        entry = 1 if hat else GradedModuleDescriptor((s,), ())
        return PageTable(r, {(s, i - s): entry}, hat)

    i, m, s = piece
    if m < 1:
        raise ValueError("torsion piece needs m >= 1")
    bottom = (s, i - s)
    if r >= 2 * k * m + 1:
        if hat:
            return PageTable(r, {}, True)
        return PageTable(r, {bottom: GradedModuleDescriptor((), ((m, s),))}, False)
    top_s = s + 2 * k * m
    top = (top_s, i - 1 - top_s)
    if hat:
        return PageTable(r, {bottom: 1, top: 1}, True)
    return PageTable(
        r,
        {
            bottom: GradedModuleDescriptor((s,), ()),
            top: GradedModuleDescriptor((top_s,), ()),
        },
        False,
    )


def assembled_pages(d: Decomposition, hat: bool, r: int) -> PageTable:
    """Page r of a complex known only through its decomposition.

    The free pieces enter through the box product of their (i, s)
    dimension table with the page of the basic free piece at the
    origin; the torsion pieces add their closed-form pages directly.
    Restricted to r >= 1: the zeroth page depends on the presentation,
    not just the decomposition.
    """
    if r < 1:
        raise ValueError("assembled pages start at r = 1")
    counts = {}
    for i, s in d.free_pieces:
        counts[(i, s)] = counts.get((i, s), 0) + 1
    page = boxtimes(
        BigradedTable(counts, HOM_POLY), piece_pages((0, 0), hat, r, d.k)
    )
    for piece in d.torsion_pieces:
        page = page.merge(piece_pages(piece, hat, r, d.k))
    return page


def _lowered_kernel(levels, out_levels, d_out, p, bound):
    """Basis, in full coordinates, of the space of chains supported on
    filtration <= p whose differential lands in filtration <= bound."""
    cols = [j for j, lv in enumerate(levels) if lv <= p]
    rows = [t for t, lv in enumerate(out_levels) if lv > bound]
    sub = [[d_out[t][j] for j in cols] for t in rows]
    vecs = []
    for v in kernel_basis(sub, ncols=len(cols)):
        full = [0] * len(levels)
        for idx, j in enumerate(cols):
            full[j] = v[idx]
        vecs.append(full)
    return vecs


def _boundary_gens(levels, in_levels, d_in, p, source_bound):
    """Images d(y), in full coordinates, of chains y supported on
    filtration <= source_bound with d(y) in filtration <= p."""
    cols = [j for j, lv in enumerate(in_levels) if lv <= source_bound]
    rows = [t for t, lv in enumerate(levels) if lv > p]
    sub = [[d_in[t][j] for j in cols] for t in rows]
    gens = []
    for v in kernel_basis(sub, ncols=len(cols)):
        image = [0] * len(levels)
        for idx, j in enumerate(cols):
            x = v[idx]
            if x:
                for t in range(len(levels)):
                    image[t] += x * d_in[t][j]
        gens.append(image)
    return gens


def generic_pages(c: FilteredFieldComplex, r: int) -> PageTable:
    """Page r straight from the filtered complex, one bidegree at a
    time.

    E_r at (p, q) is Z_r / (Z_{r-1} one filtration step down + B_{r-1}),
    where Z_r collects chains in filtration <= p whose differential
    drops to filtration <= p - r, and B_{r-1} collects boundaries lying
    in filtration <= p of chains from filtration <= p + r - 1.  Both
    subspaces to quotient by sit inside Z_r, so the dimension is a rank
    difference.
    """
    if r < 0:
        raise ValueError("page index must be >= 0")
    entries = {}
    for n in sorted(c.degrees):
        levels = c.degrees[n]
        in_levels = c.degrees.get(n - 1, ())
        out_levels = c.degrees.get(n + 1, ())
        d_out = c.matrix(n)
        d_in = c.matrix(n - 1)
        for p in sorted(set(levels)):
            z_r = _lowered_kernel(levels, out_levels, d_out, p, p - r)
            if not z_r:
                continue
            z_prev = _lowered_kernel(levels, out_levels, d_out, p - 1, p - r)
            bounds = _boundary_gens(levels, in_levels, d_in, p, p + r - 1)
            dim = len(z_r) - rank(z_prev + bounds)
            if dim:
                entries[(p, n - p)] = dim
    return PageTable(r, entries, True)


def collapse_page(d: Decomposition) -> int:
    """The page index where the sequence stops changing: 2k tw + 1,
    read as 1 when there is no torsion (pages r >= 1 all agree)."""
    tw = torsion_width(d)
    return 1 if tw == 0 else 2 * d.k * tw + 1


def stabilization_page(tables) -> int:
    """Index r of the first table equal to every later one.

    The caller supplies consecutive pages reaching far enough past the
    last change; the scan finds that last change.
    """
    tables = list(tables)
    if not tables:
        raise ValueError("no pages given")
    for idx in range(len(tables) - 1, 0, -1):
        if not tables[idx].same_entries(tables[idx - 1]):
            return tables[idx].r
    return tables[0].r
