"""Bounded chain complexes of graded-free k[a]-modules, their a=0 and
a=1 specializations, Gaussian elimination, field homology, and the
connecting-homomorphism differential on the a=0 homology.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exactla
from .algebra import (
    HOM_POLY,
    BigradedTable,
    GradedFreeModule,
    GradedRing,
    HomMatrix,
    hom_matrix_validate,
)


class ComplexError(ValueError):
    """Structural defect in a complex: bad shapes, inhomogeneous
    entries, or d^2 != 0."""


class GradedComplex:
    """Bounded complex of graded-free k[a]-modules.

    modules: {homological degree i: GradedFreeModule}; differentials:
    {i: HomMatrix from C^i to C^{i+1}}.  Zero-rank modules are dropped,
    missing differentials mean zero maps.  Construction validates
    homogeneity of every differential and d^2 = 0.
    """

    __slots__ = ("ring", "modules", "differentials")

    def __init__(self, ring: GradedRing, modules, differentials, validate=True):
        mods = {int(i): m for i, m in modules.items() if m.rank > 0}
        diffs = {}
        for i, d in differentials.items():
            i = int(i)
            if d.nrows == 0 or d.ncols == 0:
                continue
            if i not in mods or (i + 1) not in mods:
                raise ComplexError(
                    "differential at degree %d has no matching modules" % i
                )
            diffs[i] = d
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "modules", mods)
        object.__setattr__(self, "differentials", diffs)
        if validate:
            self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("GradedComplex is immutable")

    def _validate(self):
        for i, d in sorted(self.differentials.items()):
            if d.ring != self.ring:
                raise ComplexError("ring mismatch in differential at degree %d" % i)
            if d.source_degrees != self.modules[i].degrees:
                raise ComplexError("source degrees mismatch at degree %d" % i)
            if d.target_degrees != self.modules[i + 1].degrees:
                raise ComplexError("target degrees mismatch at degree %d" % i)
            bad = hom_matrix_validate(d)
            if bad is not None:
                raise ComplexError(
                    "differential at degree %d is not homogeneous at entry %r"
                    % (i, bad)
                )
        for i in sorted(self.differentials):
            if i + 1 in self.differentials:
                if not self.differentials[i + 1].compose(self.differentials[i]).is_zero():
                    raise ComplexError(
                        "d^2 != 0 on the square starting at degree %d (maps %d->%d->%d)"
                        % (i, i, i + 1, i + 2)
                    )

    def degrees_present(self):
        return sorted(self.modules)

    def rank(self, i: int) -> int:
        m = self.modules.get(i)
        return m.rank if m else 0

    def total_rank(self) -> int:
        return sum(m.rank for m in self.modules.values())

    def differential(self, i: int) -> HomMatrix:
        """The differential out of degree i, materialized as a zero
        matrix when absent."""
        d = self.differentials.get(i)
        if d is not None:
            return d
        src = self.modules[i].degrees if i in self.modules else ()
        tgt = self.modules[i + 1].degrees if i + 1 in self.modules else ()
        return HomMatrix.zero(self.ring, src, tgt)

    def __eq__(self, other):
        return (
            isinstance(other, GradedComplex)
            and self.ring == other.ring
            and self.modules == other.modules
            and {i: d for i, d in self.differentials.items() if not d.is_zero()}
            == {i: d for i, d in other.differentials.items() if not d.is_zero()}
        )

    def __repr__(self):
        return "GradedComplex(k=%d, ranks=%r)" % (
            self.ring.k,
            {i: m.rank for i, m in sorted(self.modules.items())},
        )

    def shifted(self, di: int = 0, ds: int = 0) -> "GradedComplex":
        """||di|| {ds}: push homological degrees up by di and polynomial
        degrees up by ds.  No sign twist; none of the uses here depend
        on one."""
        return GradedComplex(
            self.ring,
            {i + di: m.shifted(ds) for i, m in self.modules.items()},
            {
                i + di: HomMatrix(
                    self.ring,
                    tuple(x + ds for x in d.source_degrees),
                    tuple(x + ds for x in d.target_degrees),
                    d.entries,
                )
                for i, d in self.differentials.items()
            },
            validate=False,
        )


def direct_sum(*complexes: GradedComplex) -> GradedComplex:
    """Block direct sum; generator order is summand order."""
    if not complexes:
        raise ValueError("empty direct sum needs a ring")
    ring = complexes[0].ring
    for c in complexes:
        if c.ring != ring:
            raise ValueError("ring mismatch in direct sum")
    degrees = {}
    for c in complexes:
        for i, m in c.modules.items():
            degrees.setdefault(i, []).extend(m.degrees)
    diffs = {}
    hom_degrees = set()
    for c in complexes:
        hom_degrees.update(c.differentials)
    for i in hom_degrees:
        src = degrees.get(i, [])
        tgt = degrees.get(i + 1, [])
        rows = [[Fraction(0)] * len(src) for _ in range(len(tgt))]
        roff = 0
        coff = 0
        for c in complexes:
            nr = c.rank(i + 1)
            nc = c.rank(i)
            d = c.differentials.get(i)
            if d is not None:
                for r in range(nr):
                    for cc in range(nc):
                        rows[roff + r][coff + cc] = d.entries[r][cc]
            roff += nr
            coff += nc
        diffs[i] = HomMatrix(ring, tuple(src), tuple(tgt), tuple(map(tuple, rows)))
    return GradedComplex(
        ring,
        {i: GradedFreeModule(tuple(d)) for i, d in degrees.items()},
        diffs,
        validate=False,
    )


def complex_from_data(k: int, modules, differentials) -> GradedComplex:
    """Build and validate a complex from {i: [degrees]} and {i: rows}."""
    ring = GradedRing(k)
    mods = {int(i): GradedFreeModule(tuple(ds)) for i, ds in modules.items()}
    diffs = {}
    for i, rows in differentials.items():
        i = int(i)
        src = mods[i].degrees if i in mods else ()
        tgt = mods[i + 1].degrees if i + 1 in mods else ()
        diffs[i] = HomMatrix(ring, src, tgt, tuple(tuple(row) for row in rows))
    return GradedComplex(ring, mods, diffs)


class FieldComplex:
    """Complex of graded C-spaces with a degree-preserving differential
    (the a -> 0 reduction)."""

    __slots__ = ("degrees", "mats")

    def __init__(self, degrees, mats, validate=True):
        degs = {int(i): tuple(v) for i, v in degrees.items() if len(v)}
        ms = {}
        for i, rows in mats.items():
            i = int(i)
            rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
            if not rows or not rows[0]:
                continue
            ms[i] = rows
        object.__setattr__(self, "degrees", degs)
        object.__setattr__(self, "mats", ms)
        if validate:
            self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("FieldComplex is immutable")

    def _label_ok(self, src_label, tgt_label):
        return src_label == tgt_label

    def _validate(self):
        for i, rows in sorted(self.mats.items()):
            src = self.degrees.get(i, ())
            tgt = self.degrees.get(i + 1, ())
            if len(rows) != len(tgt) or any(len(r) != len(src) for r in rows):
                raise ComplexError("shape mismatch at degree %d" % i)
            for r, row in enumerate(rows):
                for c, x in enumerate(row):
                    if x and not self._label_ok(src[c], tgt[r]):
                        raise ComplexError(
                            "entry (%d, %d) at degree %d violates the grading"
                            % (r, c, i)
                        )
        for i in sorted(self.mats):
            nxt = self.mats.get(i + 1)
            if nxt is None:
                continue
            cur = self.mats[i]
            for r in range(len(nxt)):
                for c in range(len(cur[0])):
                    if sum(nxt[r][j] * cur[j][c] for j in range(len(cur))) != 0:
                        raise ComplexError(
                            "d^2 != 0 on the square starting at degree %d" % i
                        )

    def rank(self, i: int) -> int:
        return len(self.degrees.get(i, ()))

    def matrix(self, i: int):
        """Differential out of degree i as list rows (may be empty)."""
        rows = self.mats.get(i)
        if rows is not None:
            return [list(r) for r in rows]
        return [[Fraction(0)] * self.rank(i) for _ in range(self.rank(i + 1))]


class FilteredFieldComplex(FieldComplex):
    """Complex of C-spaces with one filtration level per basis vector;
    the differential may only keep or lower the level (the a -> 1
    specialization, levels = old polynomial degrees)."""

    @property
    def levels(self):
        return self.degrees

    def _label_ok(self, src_label, tgt_label):
        return tgt_label <= src_label


def reduce_mod_a(c: GradedComplex) -> FieldComplex:
    """Set a = 0: keep exponent-0 scalars, kill everything else."""
    return FieldComplex(
        {i: m.degrees for i, m in c.modules.items()},
        {i: d.reduced_mod_a() for i, d in c.differentials.items()},
        validate=False,
    )


def specialize_a_to_1(c: GradedComplex) -> FilteredFieldComplex:
    """Set a = 1: same generators, scalar entries survive verbatim, the
    old polynomial degree of each generator becomes its filtration
    level."""
    return FilteredFieldComplex(
        {i: m.degrees for i, m in c.modules.items()},
        {i: d.entries for i, d in c.differentials.items()},
        validate=False,
    )


def gaussian_eliminate(c, hom_degree: int, row: int, col: int):
    """Cancel a contractible pair across the differential at hom_degree.

    The pivot entry must be invertible in the graded sense: a nonzero
    scalar joining generators of equal degree (equal filtration level in
    the filtered case).  Returns the homotopy-equivalent complex on the
    remaining generators with the corrected differential
    epsilon - gamma phi^{-1} delta.
    """
    if isinstance(c, GradedComplex):
        return _eliminate_graded(c, hom_degree, row, col)
    if isinstance(c, FieldComplex):
        return _eliminate_field(c, hom_degree, row, col)
    raise TypeError("unsupported complex type")


def _schur(rows, row: int, col: int):
    phi = rows[row][col]
    if not phi:
        raise ComplexError("pivot entry is zero")
    inv = 1 / phi
    out = []
    for r, full in enumerate(rows):
        if r == row:
            continue
        gamma = full[col]
        out.append(
            tuple(
                full[cc] - gamma * inv * rows[row][cc]
                for cc in range(len(full))
                if cc != col
            )
        )
    return out


def _eliminate_graded(c: GradedComplex, h: int, row: int, col: int) -> GradedComplex:
    d = c.differentials.get(h)
    if d is None:
        raise ComplexError("no differential at degree %d" % h)
    src = d.source_degrees
    tgt = d.target_degrees
    if not (0 <= col < len(src) and 0 <= row < len(tgt)):
        raise ComplexError("pivot position out of range")
    if src[col] != tgt[row]:
        raise ComplexError("pivot has positive a-exponent, not invertible")
    if not d.entries[row][col]:
        raise ComplexError("pivot entry is zero")

    new_src = tuple(x for i, x in enumerate(src) if i != col)
    new_tgt = tuple(x for i, x in enumerate(tgt) if i != row)
    mods = dict(c.modules)
    diffs = dict(c.differentials)

    if new_src:
        mods[h] = GradedFreeModule(new_src)
    else:
        mods.pop(h)
    if new_tgt:
        mods[h + 1] = GradedFreeModule(new_tgt)
    else:
        mods.pop(h + 1)

    diffs.pop(h, None)
    if new_src and new_tgt:
        diffs[h] = HomMatrix(c.ring, new_src, new_tgt, tuple(_schur(d.entries, row, col)))

    prev = diffs.pop(h - 1, None)
    if prev is not None and new_src:
        diffs[h - 1] = HomMatrix(
            c.ring,
            prev.source_degrees,
            new_src,
            tuple(r for i, r in enumerate(prev.entries) if i != col),
        )
    nxt = diffs.pop(h + 1, None)
    if nxt is not None and new_tgt:
        diffs[h + 1] = HomMatrix(
            c.ring,
            new_tgt,
            nxt.target_degrees,
            tuple(tuple(x for i, x in enumerate(r) if i != row) for r in nxt.entries),
        )
    return GradedComplex(c.ring, mods, diffs)


def _eliminate_field(c: FieldComplex, h: int, row: int, col: int) -> FieldComplex:
    rows = c.mats.get(h)
    if rows is None:
        raise ComplexError("no differential at degree %d" % h)
    src = c.degrees.get(h, ())
    tgt = c.degrees.get(h + 1, ())
    if not (0 <= col < len(src) and 0 <= row < len(tgt)):
        raise ComplexError("pivot position out of range")
    if src[col] != tgt[row]:
        raise ComplexError("pivot does not preserve the level, not invertible")
    if not rows[row][col]:
        raise ComplexError("pivot entry is zero")

    degs = dict(c.degrees)
    mats = {i: [list(r) for r in m] for i, m in c.mats.items()}
    degs[h] = tuple(x for i, x in enumerate(src) if i != col)
    degs[h + 1] = tuple(x for i, x in enumerate(tgt) if i != row)
    mats[h] = _schur(rows, row, col)
    if h - 1 in mats:
        mats[h - 1] = [r for i, r in enumerate(mats[h - 1]) if i != col]
    if h + 1 in mats:
        mats[h + 1] = [[x for i, x in enumerate(r) if i != row] for r in mats[h + 1]]
    cls = type(c)
    return cls(degs, mats)


@dataclass(frozen=True)
class FieldHomologyBasis:
    """Homology of a field complex with pinned cycle representatives.

    dims: {i: dim}; representatives: {i: tuple of coordinate vectors};
    boundaries: {i: tuple of vectors spanning the image of d^{i-1}};
    bigraded: dimension table by (i, generator degree) when the input
    was graded, else None.  Representatives come from reduced row
    echelon pivoting in generator order, so they are reproducible.
    """

    dims: dict
    representatives: dict
    boundaries: dict
    bigraded: BigradedTable | None

    def total_dim(self) -> int:
        return sum(self.dims.values())


def homology_field(fc: FieldComplex) -> FieldHomologyBasis:
    graded = not isinstance(fc, FilteredFieldComplex)
    hom_degrees = set(fc.degrees)
    dims = {}
    reps = {}
    bnds = {}
    bigraded = {}
    for i in sorted(hom_degrees):
        n = fc.rank(i)
        d_out = fc.mats.get(i)
        if d_out is not None:
            cycles = exactla.kernel_basis([list(r) for r in d_out], ncols=n)
        else:
            cycles = exactla.kernel_basis([], ncols=n)
        d_in = fc.mats.get(i - 1)
        if d_in is not None:
            image = exactla.image_basis([list(r) for r in d_in])
        else:
            image = []
        bnds[i] = tuple(tuple(v) for v in image)
        # columns [image | cycles]; the pivot columns landing in the
        # cycle block are the chosen representatives
        ncand = len(image) + len(cycles)
        if ncand:
            stacked = [
                [image[j][r] for j in range(len(image))]
                + [cycles[j][r] for j in range(len(cycles))]
                for r in range(n)
            ]
            pivots = exactla.pivot_columns(stacked)
        else:
            pivots = []
        chosen = [cycles[p - len(image)] for p in pivots if p >= len(image)]
        dims[i] = len(chosen)
        reps[i] = tuple(tuple(v) for v in chosen)
        if graded:
            degs = fc.degrees[i]
            for v in chosen:
                support = [c for c, x in enumerate(v) if x]
                vdegs = {degs[c] for c in support}
                if len(vdegs) != 1:
                    raise ComplexError("representative mixes degrees")
                key = (i, vdegs.pop())
                bigraded[key] = bigraded.get(key, 0) + 1
    return FieldHomologyBasis(
        dims=dims,
        representatives=reps,
        boundaries=bnds,
        bigraded=BigradedTable(bigraded, HOM_POLY) if graded else None,
    )


@dataclass(frozen=True)
class FirstDifferential:
    """The induced differential on the a=0 homology.

    blocks[i] maps homology at degree i to homology at degree i+1 in
    the bases pinned by homology_field; entries drop the polynomial
    degree by 2k.  rep_degrees records the degree of each basis class.
    """

    k: int
    dims: dict
    rep_degrees: dict
    blocks: dict

    def block(self, i: int):
        b = self.blocks.get(i)
        if b is not None:
            return [list(r) for r in b]
        nr = self.dims.get(i + 1, 0)
        nc = self.dims.get(i, 0)
        return [[Fraction(0)] * nc for _ in range(nr)]

    def rank(self) -> int:
        return sum(exactla.rank(self.block(i)) for i in self.dims)

    def nonzero_degrees(self):
        """Degrees i where the block out of i has a nonzero entry."""
        return sorted(
            i
            for i, b in self.blocks.items()
            if any(x for row in b for x in row)
        )

    def is_zero(self) -> bool:
        return not self.nonzero_degrees()


def first_differential(c: GradedComplex) -> FirstDifferential:
    """Lift each a=0 homology class, apply d, divide by a, project back.

    The representative's coordinate vector is reused verbatim as an
    exponent-0 chain over k[a]; d of that chain is divisible by a
    because the class is a cycle mod a, and the a^1 coefficient reduced
    mod a is projected onto the pinned homology basis one homological
    degree up.  The result is homogeneous of bidegree (1, -2k).
    """
    fc = reduce_mod_a(c)
    hb = homology_field(fc)
    k = c.ring.k
    rep_degrees = {}
    for i, reps in hb.representatives.items():
        degs = fc.degrees.get(i, ())
        out = []
        for v in reps:
            support = [ci for ci, x in enumerate(v) if x]
            out.append(degs[support[0]])
        rep_degrees[i] = tuple(out)

    blocks = {}
    for i in sorted(hb.dims):
        reps = hb.representatives[i]
        if not reps or hb.dims.get(i + 1, 0) == 0:
            continue
        d = c.differentials.get(i)
        tgt_degs = fc.degrees.get(i + 1, ())
        cols = []
        for vi, v in enumerate(reps):
            sigma = rep_degrees[i][vi]
            w = [Fraction(0)] * len(tgt_degs)
            if d is not None:
                for t in range(d.nrows):
                    gap = sigma - tgt_degs[t]
                    acc = sum(
                        (d.entries[t][g] * v[g] for g in range(d.ncols) if v[g]),
                        Fraction(0),
                    )
                    if gap == 0:
                        if acc:
                            raise ComplexError(
                                "lift of a mod-a cycle has nonzero a^0 image"
                            )
                    elif gap == 2 * k:
                        w[t] = acc
            cols.append(w)
        image = [list(v) for v in hb.boundaries.get(i + 1, ())]
        reps_next = [list(v) for v in hb.representatives.get(i + 1, ())]
        basis_cols = image + reps_next
        n = len(tgt_degs)
        mat = [[basis_cols[j][r] for j in range(len(basis_cols))] for r in range(n)]
        sols = exactla.solve(mat, cols, ncols=len(basis_cols))
        if sols is None:
            raise ComplexError("projection onto the homology basis failed")
        nb = len(image)
        block = [
            [sols[ci][nb + ri] for ci in range(len(reps))]
            for ri in range(len(reps_next))
        ]
        if any(x for row in block for x in row):
            blocks[i] = tuple(tuple(row) for row in block)

    out = FirstDifferential(k=k, dims=dict(hb.dims), rep_degrees=rep_degrees, blocks=blocks)
    for i in sorted(hb.dims):
        if i + 2 in hb.dims:
            a = out.block(i + 1)
            b = out.block(i)
            for r in range(len(a)):
                for cc in range(len(b[0]) if b else 0):
                    if sum(a[r][j] * b[j][cc] for j in range(len(b))) != 0:
                        raise ComplexError("induced differential fails d^2 = 0")
    return out
