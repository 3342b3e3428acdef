"""Graded base ring k[a], bigraded tables, module descriptors, and
homogeneous matrices.

Matrix entries over k[a] are stored as bare rational scalars; the
a-exponent of a nonzero entry is never stored but derived from the
source and target generator degrees.  Because every entry of a
homogeneous matrix is a monomial, composition of two such matrices is
plain rational matrix multiplication: all terms contributing to one
entry carry the same power of a.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

HOM_POLY = "hom_poly"  # keys (i, s): homological degree, polynomial degree
PAGE = "page"          # keys (p, q) = (s, i - s): filtration degree first


@dataclass(frozen=True)
class GradedRing:
    """The base ring k[a] over the rationals, deg(a) = 2k."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError("k must be a positive integer")

    @property
    def a_degree(self) -> int:
        return 2 * self.k


class BigradedTable:
    """Finite-support dimension table on Z x Z.

    convention HOM_POLY: keys (i, s).  convention PAGE: keys (p, q)
    with p = s and q = i - s.  Zero dimensions are dropped; negative
    ones rejected.
    """

    __slots__ = ("convention", "_entries")

    def __init__(self, entries=(), convention=HOM_POLY):
        if convention not in (HOM_POLY, PAGE):
            raise ValueError("unknown convention %r" % (convention,))
        data = {}
        items = entries.items() if hasattr(entries, "items") else entries
        for key, dim in items:
            if dim < 0:
                raise ValueError("negative dimension at %r" % (key,))
            if dim:
                key = (int(key[0]), int(key[1]))
                data[key] = data.get(key, 0) + dim
        object.__setattr__(self, "convention", convention)
        object.__setattr__(self, "_entries", data)

    def __setattr__(self, name, value):
        raise AttributeError("BigradedTable is immutable")

    def get(self, first, second) -> int:
        return self._entries.get((first, second), 0)

    def items(self):
        return sorted(self._entries.items())

    def support(self):
        return sorted(self._entries)

    def total_dim(self) -> int:
        return sum(self._entries.values())

    def is_empty(self) -> bool:
        return not self._entries

    def __bool__(self):
        return bool(self._entries)

    def __eq__(self, other):
        return (
            isinstance(other, BigradedTable)
            and self.convention == other.convention
            and self._entries == other._entries
        )

    def __hash__(self):
        return hash((self.convention, frozenset(self._entries.items())))

    def __repr__(self):
        return "BigradedTable(%r, convention=%r)" % (self.items(), self.convention)

    def add(self, other: "BigradedTable") -> "BigradedTable":
        if self.convention != other.convention:
            raise ValueError("convention mismatch")
        merged = dict(self._entries)
        for key, dim in other._entries.items():
            merged[key] = merged.get(key, 0) + dim
        return BigradedTable(merged, self.convention)

    def to_page(self) -> "BigradedTable":
        """(i, s) -> (p, q) = (s, i - s)."""
        if self.convention == PAGE:
            return self
        return BigradedTable(
            {(s, i - s): d for (i, s), d in self._entries.items()}, PAGE
        )

    def to_hom_poly(self) -> "BigradedTable":
        """(p, q) -> (i, s) = (p + q, p)."""
        if self.convention == HOM_POLY:
            return self
        return BigradedTable(
            {(p + q, p): d for (p, q), d in self._entries.items()}, HOM_POLY
        )

    def _rebuild(self, entries):
        return BigradedTable(entries, PAGE)


@dataclass(frozen=True)
class GradedModuleDescriptor:
    """Finitely generated graded k[a]-module up to isomorphism.

    free_shifts: multiset of s with a k[a]{s} summand.
    torsions: multiset of (m, s) with a (k[a]/(a^m)){s} summand.
    Both stored sorted, so equality is structural.
    """

    free_shifts: tuple = ()
    torsions: tuple = ()

    def __post_init__(self):
        free = tuple(sorted(int(s) for s in self.free_shifts))
        tors = tuple(sorted((int(m), int(s)) for m, s in self.torsions))
        for m, _ in tors:
            if m < 1:
                raise ValueError("torsion exponent must be >= 1")
        object.__setattr__(self, "free_shifts", free)
        object.__setattr__(self, "torsions", tors)

    def is_zero(self) -> bool:
        return not self.free_shifts and not self.torsions

    def __bool__(self):
        return not self.is_zero()

    def merge(self, other: "GradedModuleDescriptor") -> "GradedModuleDescriptor":
        return GradedModuleDescriptor(
            self.free_shifts + other.free_shifts, self.torsions + other.torsions
        )

    def shifted(self, ds: int) -> "GradedModuleDescriptor":
        return GradedModuleDescriptor(
            tuple(s + ds for s in self.free_shifts),
            tuple((m, s + ds) for m, s in self.torsions),
        )

    def scaled(self, c: int) -> "GradedModuleDescriptor":
        if c < 0:
            raise ValueError("multiplicity must be >= 0")
        return GradedModuleDescriptor(self.free_shifts * c, self.torsions * c)


@dataclass(frozen=True)
class GradedFreeModule:
    """Free k[a]-module with ordered homogeneous generators."""

    degrees: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def shifted(self, ds: int) -> "GradedFreeModule":
        return GradedFreeModule(tuple(d + ds for d in self.degrees))


@dataclass(frozen=True)
class HomMatrix:
    """Degree-homogeneous matrix between graded free modules.

    entries[r][c] is the rational scalar of the monomial entry; its
    a-exponent is (source_degrees[c] - target_degrees[r]) / 2k.  Shape
    is (len(target_degrees), len(source_degrees)); either may be 0.
    """

    ring: GradedRing
    source_degrees: tuple
    target_degrees: tuple
    entries: tuple

    def __post_init__(self):
        src = tuple(int(d) for d in self.source_degrees)
        tgt = tuple(int(d) for d in self.target_degrees)
        rows = tuple(
            tuple(x if isinstance(x, Fraction) else Fraction(x) for x in row)
            for row in self.entries
        )
        if len(rows) != len(tgt):
            raise ValueError("row count does not match target rank")
        for row in rows:
            if len(row) != len(src):
                raise ValueError("column count does not match source rank")
        object.__setattr__(self, "source_degrees", src)
        object.__setattr__(self, "target_degrees", tgt)
        object.__setattr__(self, "entries", rows)

    @classmethod
    def zero(cls, ring, source_degrees, target_degrees):
        return cls(
            ring,
            tuple(source_degrees),
            tuple(target_degrees),
            tuple(tuple(Fraction(0) for _ in source_degrees) for _ in target_degrees),
        )

    @classmethod
    def identity(cls, ring, degrees):
        n = len(degrees)
        return cls(
            ring,
            tuple(degrees),
            tuple(degrees),
            tuple(
                tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
            ),
        )

    @property
    def nrows(self) -> int:
        return len(self.target_degrees)

    @property
    def ncols(self) -> int:
        return len(self.source_degrees)

    def exponent(self, r: int, c: int) -> int:
        """a-exponent slot of position (r, c); meaningful when the
        degree gap is a valid multiple of 2k."""
        gap = self.source_degrees[c] - self.target_degrees[r]
        if gap < 0 or gap % self.ring.a_degree:
            raise ValueError("position (%d, %d) is not homogeneous" % (r, c))
        return gap // self.ring.a_degree

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    def scalar_rows(self):
        """Entries as mutable list-of-lists of Fraction."""
        return [list(row) for row in self.entries]

    def compose(self, other: "HomMatrix") -> "HomMatrix":
        """self after other.  Plain rational matmul is exact here: every
        term feeding one entry carries the same a-power."""
        if self.ring != other.ring:
            raise ValueError("ring mismatch")
        if self.source_degrees != other.target_degrees:
            raise ValueError("middle degree lists do not match")
        rows = []
        for r in range(self.nrows):
            srow = self.entries[r]
            rows.append(
                tuple(
                    sum(
                        (srow[j] * other.entries[j][c] for j in range(self.ncols)),
                        Fraction(0),
                    )
                    for c in range(other.ncols)
                )
            )
        return HomMatrix(self.ring, other.source_degrees, self.target_degrees, tuple(rows))

    def reduced_mod_a(self):
        """Scalar rows with every positive-exponent entry set to 0."""
        out = []
        for r, trow in enumerate(self.entries):
            tdeg = self.target_degrees[r]
            out.append(
                [
                    x if x and self.source_degrees[c] == tdeg else Fraction(0)
                    for c, x in enumerate(trow)
                ]
            )
        return out


def hom_matrix_validate(m: HomMatrix):
    """None if homogeneous, else the first violating (row, col).

    A violation is a nonzero entry whose degree gap is negative or not
    a multiple of 2k.
    """
    d2k = m.ring.a_degree
    for r in range(m.nrows):
        tdeg = m.target_degrees[r]
        row = m.entries[r]
        for c in range(m.ncols):
            if row[c]:
                gap = m.source_degrees[c] - tdeg
                if gap < 0 or gap % d2k:
                    return (r, c)
    return None


def _value_scale_shift(value, c: int, j: int):
    if isinstance(value, GradedModuleDescriptor):
        return value.scaled(c).shifted(j)
    return value * c


def _value_add(left, right):
    if isinstance(left, GradedModuleDescriptor) or isinstance(
        right, GradedModuleDescriptor
    ):
        if not isinstance(left, GradedModuleDescriptor) or not isinstance(
            right, GradedModuleDescriptor
        ):
            raise TypeError("cannot mix dimension and descriptor entries")
        return left.merge(right)
    return left + right


def _value_is_zero(value) -> bool:
    if isinstance(value, GradedModuleDescriptor):
        return value.is_zero()
    return value == 0


def boxtimes(h: BigradedTable, e):
    """(H boxtimes E)^{a,b} = sum over j+p=a, q+i-j=b of H^{i,j} x E^{p,q}.

    h is a HOM_POLY table (keys (i, j) = (hom, poly)); e is anything in
    PAGE position convention exposing items() of ((p, q), value) and a
    _rebuild(entries) constructor (a PAGE BigradedTable or a page
    table).  Dimensions multiply; module-valued entries are repeated by
    the dimension and their shifts raised by j.
    """
    if h.convention != HOM_POLY:
        raise ValueError("left factor must be in (hom, poly) convention")
    if isinstance(e, BigradedTable) and e.convention != PAGE:
        raise ValueError("right factor must be in page convention")
    out = {}
    for (i, j), c in h.items():
        for (p, q), value in e.items():
            key = (j + p, q + i - j)
            term = _value_scale_shift(value, c, j)
            if key in out:
                out[key] = _value_add(out[key], term)
            else:
                out[key] = term
    out = {key: v for key, v in out.items() if not _value_is_zero(v)}
    return e._rebuild(out)


def descriptor_dim_table(d: GradedModuleDescriptor, at_hom_degree: int, k: int) -> BigradedTable:
    """Field dimensions the module contributes to the a=0 homology.

    A free summand {s} at degree i lands at (i, s); a torsion summand
    (m, s) at degree i lands at (i, s) and also at (i-1, s+2km).
    """
    entries = {}

    def bump(key):
        entries[key] = entries.get(key, 0) + 1

    i = at_hom_degree
    for s in d.free_shifts:
        bump((i, s))
    for m, s in d.torsions:
        bump((i, s))
        bump((i - 1, s + 2 * k * m))
    return BigradedTable(entries, HOM_POLY)
