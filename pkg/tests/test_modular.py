from math import gcd

import pytest
from hypothesis import given, strategies as st

from lensclass.modular import (
    ScopeError,
    exponent_subgroup,
    factorize,
    indeterminacy_bound,
    qdk_class_of,
    qdk_partition,
    totient,
    unit_group,
)

from _oracles import bfs_qdk, odd_squarefree


def brute_totient(d):
    return sum(1 for a in range(1, d + 1) if gcd(a, d) == 1)


@pytest.mark.parametrize("d,expected", [(1, 1), (7, 6), (15, 8)])
def test_totient_examples(d, expected):
    assert totient(d) == expected == brute_totient(d)


def test_totient_matches_count():
    for d in range(1, 500):
        assert totient(d) == brute_totient(d)


def test_totient_rejects_zero():
    with pytest.raises(ValueError):
        totient(0)


def test_factorize():
    assert factorize(1) == {}
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(9973) == {9973: 1}


class TestUnitGroup:
    def test_three(self):
        assert unit_group(3).units == (1, 2)

    def test_fifteen(self):
        G = unit_group(15)
        assert len(G.units) == 8
        assert G.crt_factors == (3, 5)
        assert G.component_orders == (2, 4)

    @pytest.mark.parametrize("bad", [9, 4, 12, 1, 0, -3])
    def test_rejects(self, bad):
        with pytest.raises(ScopeError):
            unit_group(bad)

    def test_square_message(self):
        with pytest.raises(ScopeError, match="square-free"):
            unit_group(45)


class TestQdk:
    def test_d3_single_class(self):
        for k in range(1, 6):
            assert qdk_partition(3, k).classes == ((1, 2),)

    def test_d7_k2(self):
        # squares mod 7 are {1, 2, 4}; together with their negatives they cover all units
        assert len(qdk_partition(7, 2)) == 1

    def test_d5_k2(self):
        assert qdk_partition(5, 2).classes == ((1, 4), (2, 3))

    def test_class_of_examples(self):
        assert qdk_class_of(7, 2, 6) == 1
        assert qdk_class_of(5, 2, 3) == 2
        for d in (5, 7, 15, 21):
            assert qdk_class_of(d, 3, 1) == 1

    def test_class_of_rejects_nonunit(self):
        with pytest.raises(ScopeError):
            qdk_class_of(15, 2, 5)

    def test_against_bfs(self):
        for d in odd_squarefree(3, 45):
            for k in range(1, 5):
                got = {frozenset(c) for c in qdk_partition(d, k).classes}
                assert got == bfs_qdk(d, k), (d, k)

    def test_representatives_are_minimal(self):
        part = qdk_partition(35, 4)
        assert all(c[0] == min(c) for c in part.classes)
        assert list(part.representatives) == sorted(part.representatives)

    @given(st.sampled_from(odd_squarefree(3, 101)), st.integers(1, 6), st.data())
    def test_class_invariant_under_powers_and_sign(self, d, k, data):
        units = unit_group(d).units
        q = data.draw(st.sampled_from(units))
        a = data.draw(st.sampled_from(units))
        c = qdk_class_of(d, k, q)
        assert qdk_class_of(d, k, q * pow(a, k, d) % d) == c
        assert qdk_class_of(d, k, d - q) == c
        assert qdk_class_of(d, k, c) == c


class TestExponentSubgroup:
    def test_trivial(self):
        assert exponent_subgroup(7, 1) == (1, [1])

    def test_cubes(self):
        assert exponent_subgroup(7, 3) == (3, [1, 2, 4])

    def test_fifteen(self):
        # Aut(C_15) = C_2 x C_4 has exponent 4
        order, elems = exponent_subgroup(15, 4)
        assert order == 8 and elems == list(unit_group(15).units)

    def test_order_divides_phi(self):
        for d in odd_squarefree(3, 151):
            for e in range(1, 13):
                order, _ = exponent_subgroup(d, e)
                assert totient(d) % order == 0
                if len(factorize(d)) == 1:
                    assert order == gcd(e, d - 1)
                    if (d - 1) % e == 0:
                        assert order == e


class TestIndeterminacy:
    def test_examples(self):
        assert indeterminacy_bound(7, 2) == 8
        assert indeterminacy_bound(5, 2) == 16
        for k in range(2, 10):
            assert indeterminacy_bound(3, k) == 8

    def test_k_must_exceed_one(self):
        with pytest.raises(ScopeError):
            indeterminacy_bound(7, 1)

    def test_gcd_identity(self):
        for d in odd_squarefree(3, 999):
            phi = totient(d)
            for k in range(1, 51):
                assert gcd(2 * k, phi) == 2 * gcd(k, phi // 2)
