"""Splitting complexes into elementary pieces and the derived invariants."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twkit.algebra import HOM_POLY, PAGE, BigradedTable
from twkit.complexes import complex_from_data, direct_sum
from twkit.corpus import conjugate, random_decomposition
from twkit.decompose import (
    Decomposition,
    contractible_pairs,
    decompose,
    hn_table,
    homology_structure,
    reassemble,
    thickness,
    torsion_width,
)


def torsion_fixture():
    # 0 -> k[a]{4} --a^2--> k[a]{0} -> 0 at degrees 0, 1
    return complex_from_data(1, {0: [4], 1: [0]}, {0: [[1]]})


class TestDecompositionContainer:
    def test_sorted_multisets(self):
        d = Decomposition(2, ((1, 4), (0, 0)), ((2, 1, 0), (0, 3, -2)))
        assert d.free_pieces == ((0, 0), (1, 4))
        assert d.torsion_pieces == ((0, 3, -2), (2, 1, 0))

    def test_rejects_zero_width(self):
        with pytest.raises(ValueError):
            Decomposition(1, (), ((0, 0, 0),))

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            Decomposition(0)


class TestDecompose:
    def test_torsion_fixture(self):
        d = decompose(torsion_fixture())
        assert d == Decomposition(1, (), ((1, 2, 0),))

    def test_free_fixture(self):
        d = decompose(complex_from_data(3, {7: [0]}, {}))
        assert d == Decomposition(3, ((7, 0),), ())

    def test_invertible_differential_is_contractible(self):
        c = complex_from_data(1, {0: [0, 0], 1: [0, 0]}, {0: [[1, 1], [0, 1]]})
        assert decompose(c) == Decomposition(1)
        assert contractible_pairs(c) == 2

    def test_mixed_pivot_elimination(self):
        # the unit pivot eats one pair; the a-entry survives as torsion
        c = complex_from_data(1, {0: [2, 0], 1: [0, 0]}, {0: [[1, 1], [1, 0]]})
        assert decompose(c) == Decomposition(1, (), ((1, 1, 0),))
        assert contractible_pairs(c) == 1

    def test_scalars_do_not_matter(self):
        for scalar in ("1", "-3", "2/7"):
            c = complex_from_data(2, {0: [4], 1: [0]}, {0: [[scalar]]})
            assert decompose(c).torsion_pieces == ((1, 1, 0),)

    def test_basis_change_invariance_sample(self):
        rng = random.Random(40)
        for _ in range(10):
            d = random_decomposition(rng)
            c = reassemble(d)
            assert decompose(conjugate(rng, c)) == d


class TestTables:
    def test_homology_structure(self):
        d = Decomposition(1, ((0, 2),), ((1, 2, 0),))
        hs = homology_structure(d)
        assert sorted(hs) == [0, 1]
        assert hs[0].free_shifts == (2,) and hs[0].torsions == ()
        assert hs[1].free_shifts == () and hs[1].torsions == ((2, 0),)

    def test_hn_table_pairs(self):
        d = decompose(torsion_fixture())
        assert hn_table(d) == BigradedTable({(1, 0): 1, (0, 4): 1}, HOM_POLY)

    def test_hn_dimension_accounting(self):
        rng = random.Random(8)
        for _ in range(20):
            d = random_decomposition(rng)
            assert hn_table(d).total_dim() == len(d.free_pieces) + 2 * len(
                d.torsion_pieces
            )

    def test_torsion_width(self):
        assert torsion_width(Decomposition(1)) == 0
        assert torsion_width(Decomposition(1, (), ((0, 3, 0), (1, 1, 2)))) == 3


class TestThickness:
    def test_two_entry_example(self):
        t = BigradedTable({(0, 0): 1, (1, -4): 1}, HOM_POLY)
        assert thickness(t) == (2, 2)

    def test_single_entry(self):
        assert thickness(BigradedTable({(3, 5): 2}, HOM_POLY)) == (1, None)

    def test_wrong_convention(self):
        with pytest.raises(ValueError, match="convention"):
            thickness(BigradedTable({(0, 0): 1}, PAGE))

    def test_empty_table(self):
        with pytest.raises(ValueError, match="empty"):
            thickness(BigradedTable((), HOM_POLY))

    def test_mixed_parity_spread(self):
        t = BigradedTable({(0, 0): 1, (0, 1): 1}, HOM_POLY)
        with pytest.raises(ValueError, match="half-integral"):
            thickness(t)

    def test_mixed_parity_adjacent_gap(self):
        t = BigradedTable({(0, 0): 1, (1, -1): 1, (2, -2): 1}, HOM_POLY)
        with pytest.raises(ValueError, match="half-integral local"):
            thickness(t)

    def test_torsion_width_bounded_by_thickness(self):
        rng = random.Random(13)
        for _ in range(30):
            d = random_decomposition(rng, uniform_parity=True)
            t = hn_table(d)
            if t.is_empty():
                continue
            ht, lht = thickness(t)
            assert d.k * torsion_width(d) <= ht
            if torsion_width(d) >= 1:
                assert lht is not None
                assert d.k * torsion_width(d) <= lht


class TestReassemble:
    def test_round_trip_fixture(self):
        d = Decomposition(2, ((0, 2), (0, 2)), ((1, 3, -4),))
        assert decompose(reassemble(d)) == d

    def test_ring_mismatch(self):
        from twkit.algebra import GradedRing

        with pytest.raises(ValueError, match="does not match"):
            reassemble(Decomposition(2), GradedRing(1))

    def test_direct_sum_agrees(self):
        a = torsion_fixture()
        b = complex_from_data(1, {0: [6]}, {})
        d = decompose(direct_sum(a, b))
        assert d == Decomposition(1, ((0, 6),), ((1, 2, 0),))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_reassemble_round_trip_property(seed):
    d = random_decomposition(random.Random(seed))
    assert decompose(reassemble(d)) == d


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_rank_accounting_property(seed):
    d = random_decomposition(random.Random(seed))
    c = reassemble(d)
    assert len(d.free_pieces) + 2 * len(d.torsion_pieces) == c.total_rank()
    assert contractible_pairs(c) == 0
