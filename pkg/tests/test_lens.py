import cmath
from fractions import Fraction
from itertools import permutations, product
from math import prod

import pytest

from lensclass.lens import (
    LensSpace,
    ahss_e2_page,
    eps_order_bound,
    homeomorphic,
    homeomorphism_witness,
    homotopy_equivalent,
    linking_form,
    normalized_rho_difference,
    postnikov_invariant,
    rho_difference,
    rho_invariant,
    structure_rank,
    wh1_rank_prime,
)
from lensclass.modular import ScopeError, unit_group

from _oracles import odd_squarefree


def L(d, *q):
    return LensSpace.of(d, *q)


def numeric_rho(d, rotations, j):
    z = cmath.exp(2j * cmath.pi / d)
    return prod((z ** (j * q) + 1) / (z ** (j * q) - 1) for q in rotations)


class TestBasics:
    def test_postnikov(self):
        assert postnikov_invariant(L(7, 1, 1)) == 1
        assert postnikov_invariant(L(7, 2, 3)) == 6
        assert postnikov_invariant(L(5, 2, 2)) == 4

    def test_linking_form(self):
        assert linking_form(7, 1, 2) == Fraction(1, 7)
        assert linking_form(7, 8, 2) == Fraction(1, 7)
        assert linking_form(5, 3, 3) == Fraction(3, 5)

    def test_rejects_nonunit_rotation(self):
        with pytest.raises(ScopeError):
            L(15, 3, 1)

    def test_dimension(self):
        assert L(7, 1, 2, 3).dimension == 5


class TestComparisons:
    def test_homotopy_examples(self):
        assert homotopy_equivalent(L(7, 1, 1), L(7, 2, 1))
        assert not homotopy_equivalent(L(5, 1, 1), L(5, 2, 1))
        assert homotopy_equivalent(L(11, 3, 4), L(11, 3, 4))

    def test_homeomorphism_examples(self):
        assert homeomorphic(L(7, 2, 1), L(7, 1, 2))
        assert homeomorphic(L(7, 1, 1), L(7, 6, 6))
        assert not homeomorphic(L(7, 1, 1), L(7, 2, 1))

    def test_homeomorphism_exhaustive_hand_count(self):
        # 6 units x 2 permutations x 4 sign patterns, checked independently here
        d, a, b = 7, (1, 1), (2, 1)
        hits = [
            (u, perm, s)
            for u in range(1, 7)
            for perm in permutations(range(2))
            for s in product((1, -1), repeat=2)
            if all(b[i] % d == s[i] * u * a[perm[i]] % d for i in range(2))
        ]
        assert hits == []

    def test_mismatched(self):
        with pytest.raises(ScopeError):
            homotopy_equivalent(L(7, 1, 1), L(5, 1, 1))
        with pytest.raises(ScopeError):
            homeomorphic(L(7, 1, 1), L(7, 1, 1, 1))

    def test_homeomorphism_cap(self):
        with pytest.raises(ScopeError):
            homeomorphic(L(3, *[1] * 9), L(3, *[1] * 9))


class TestRho:
    def test_conjugation_symmetry(self):
        for d in odd_squarefree(3, 35):
            units = unit_group(d).units
            for k in range(1, 5):
                rot = [units[(i * 3 + k) % len(units)] for i in range(k)]
                assert rho_invariant(LensSpace(d, tuple(rot))).satisfies_conjugation_symmetry()

    def test_matches_numeric_product(self):
        for d, rot in [(7, (1, 1)), (7, (2, 1)), (15, (2, 7, 11)), (11, (3,))]:
            rho = rho_invariant(LensSpace(d, rot))
            for j in range(1, d):
                assert abs(complex(rho[j]) - numeric_rho(d, rot, j)) < 1e-9

    def test_separates_homotopy_equivalent_pair(self):
        diff, zero = rho_difference(L(7, 1, 1), L(7, 2, 1))
        assert not zero
        # the numeric oracle sees a difference well away from rounding noise
        gap = max(abs(numeric_rho(7, (2, 1), j) - numeric_rho(7, (1, 1), j)) for j in range(1, 7))
        assert gap > 0.1

    def test_self_difference_zero(self):
        assert rho_difference(L(11, 2, 3), L(11, 2, 3))[1]

    def test_unit_rescaling_reindexes(self):
        for d, rot in [(7, (1, 3)), (11, (2, 5, 7)), (15, (1, 2))]:
            Lq = LensSpace(d, rot)
            for u in unit_group(d).units:
                Lu = LensSpace(d, tuple(u * q for q in rot))
                rho_q, rho_u = rho_invariant(Lq), rho_invariant(Lu)
                inv = pow(u, -1, d)
                assert all(rho_u[j * inv] == rho_q[j] for j in range(1, d))

    def test_orientation_flip_normalization(self):
        A, B = L(5, 1, 1), L(5, 4, 1)
        assert homeomorphic(A, B)
        assert not rho_difference(A, B)[1]
        w = homeomorphism_witness(A, B)
        assert w.orientation == -1
        assert normalized_rho_difference(A, B, w)[1]

    @pytest.mark.parametrize("d", [5, 7, 11])
    @pytest.mark.parametrize("k", [2, 3])
    def test_homeomorphic_implies_invariants_agree(self, d, k):
        units = unit_group(d).units
        spaces = [LensSpace(d, q) for q in product(units, repeat=k) if list(q) == sorted(q)]
        rhos = {S: rho_invariant(S) for S in spaces}
        for A in spaces:
            for B in spaces:
                w = homeomorphism_witness(A, B)
                if w is None:
                    continue
                assert homotopy_equivalent(A, B)
                pulled = rhos[B].reindexed(pow(w.unit, -1, d)).scaled(w.orientation)
                assert (pulled - rhos[A]).is_zero()


class TestRanks:
    def test_wh1(self):
        assert wh1_rank_prime(3) == 0
        assert wh1_rank_prime(5) == 1
        assert wh1_rank_prime(29) == 13
        with pytest.raises(ScopeError):
            wh1_rank_prime(15)

    def test_structure_rank(self):
        assert [structure_rank(d) for d in (3, 7, 15)] == [1, 3, 7]

    def test_eps(self):
        assert [eps_order_bound(d) for d in (3, 5, 7)] == [18, 50, 98]


def e2_bound_oracle(d, k):
    # cells i odd with 0 < i < 2k-1 and j > 0, 4 | j, on the line i + j = 2k-1
    n = 2 * k - 1
    cells = [(i, n - i) for i in range(1, n, 2) if n - i > 0 and (n - i) % 4 == 0]
    return d ** len(cells)


class TestE2:
    def test_examples(self):
        assert ahss_e2_page(5, 2)[1] == 1
        assert ahss_e2_page(5, 4)[1] == 5
        assert ahss_e2_page(7, 5)[1] == 49

    def test_table_cells(self):
        table, _ = ahss_e2_page(5, 4)
        assert table[(3, 4)].torsion == (5,)
        # Z cells sit at i = 2k-1 with j >= 4, beyond the displayed range
        assert all(g.is_finite for g in table.values())
        assert table[(0, 4)].is_trivial
        assert table[(2, 4)].is_trivial

    def test_bound_is_odd_power_of_d(self):
        for d in odd_squarefree(3, 51):
            for k in range(2, 12):
                b = ahss_e2_page(d, k)[1]
                assert b % 2 == 1
                assert b == e2_bound_oracle(d, k)
