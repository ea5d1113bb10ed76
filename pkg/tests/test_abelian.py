import random

import pytest
from hypothesis import given, settings, strategies as st

from lensclass.abelian import (
    FgAbGroup,
    GroupWithInvolution,
    IntMatrix,
    InvalidInvolutionError,
    coinvariants,
    cokernel,
    image_subgroup,
    lattice_subquotient,
    mod2_quotient,
    smith_normal_form,
    symmetric_even_quotient,
    tate_cohomology,
)

from _oracles import (
    bf_coinvariants,
    bf_kernel_mod_image,
    random_module,
)


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols)


def check_snf(A: IntMatrix):
    U, S, V = smith_normal_form(A)
    assert U @ A @ V == S
    assert abs(U.det()) == 1
    assert abs(V.det()) == 1
    diag = []
    for i in range(S.rows):
        for j in range(S.cols):
            if i != j:
                assert S[i, j] == 0
            else:
                diag.append(S[i, j])
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        # zeros trail, and a | b (0 divides only 0)
        assert (b == 0) if a == 0 else (b % a == 0)
    return diag


class TestSmithNormalForm:
    def test_zero(self):
        assert check_snf(M([[0]])) == [0]

    def test_identity(self):
        assert check_snf(IntMatrix.identity(3)) == [1, 1, 1]

    def test_two_by_two(self):
        # hand reduction: gcd of entries is 2, det = -8
        assert check_snf(M([[2, 4], [6, 8]])) == [2, 4]

    @pytest.mark.parametrize("rows,cols", [(0, 0), (0, 3), (3, 0)])
    def test_empty(self, rows, cols):
        U, S, V = smith_normal_form(IntMatrix.zeros(rows, cols))
        assert (S.rows, S.cols) == (rows, cols)
        assert U.rows == rows and V.rows == cols

    def test_random_matrices(self):
        rng = random.Random(20261019)
        for _ in range(1000):
            r, c = rng.randint(1, 8), rng.randint(1, 8)
            A = IntMatrix(r, c, tuple(rng.randint(-50, 50) for _ in range(r * c)))
            check_snf(A)

    def test_rank_deficient(self):
        check_snf(M([[1, 2, 3], [2, 4, 6], [3, 6, 9]]))


class TestCokernel:
    def test_zero_matrix(self):
        assert cokernel(M([[0]])) == FgAbGroup(1)

    def test_unit_factor_dropped(self):
        assert cokernel(M([[1, 0], [0, 6]])) == FgAbGroup(0, (6,))

    def test_two_generators(self):
        assert cokernel(M([[2, 0], [0, 4]])) == FgAbGroup(0, (2, 4))

    def test_no_relations(self):
        assert cokernel(IntMatrix.zeros(3, 0)) == FgAbGroup(3)

    def test_crt_merge(self):
        assert cokernel(M([[2, 0], [0, 3]])) == FgAbGroup(0, (6,))

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_invariant_under_unimodular_change(self, data):
        r = data.draw(st.integers(1, 4))
        c = data.draw(st.integers(1, 4))
        entries = data.draw(st.lists(st.integers(-20, 20), min_size=r * c, max_size=r * c))
        A = IntMatrix(r, c, tuple(entries))
        # elementary row and column operations
        i, j = data.draw(st.integers(0, r - 1)), data.draw(st.integers(0, r - 1))
        t = data.draw(st.integers(-5, 5))
        rows = A.tolist()
        if i != j:
            rows[i] = [a + t * b for a, b in zip(rows[i], rows[j])]
        cols = list(zip(*rows))
        a, b = data.draw(st.integers(0, c - 1)), data.draw(st.integers(0, c - 1))
        if a != b:
            cols[a], cols[b] = cols[b], cols[a]
        B = IntMatrix.from_rows([list(x) for x in zip(*cols)], c)
        assert cokernel(A) == cokernel(B)


class TestFgAbGroup:
    def test_canonical_from_factors(self):
        assert FgAbGroup.from_factors([4, 6, 2]) == FgAbGroup(0, (2, 2, 12))

    def test_rejects_broken_chain(self):
        with pytest.raises(ValueError):
            FgAbGroup(0, (4, 6))

    def test_rejects_unit_factor(self):
        with pytest.raises(ValueError):
            FgAbGroup(0, (1, 2))

    def test_trivial(self):
        g = FgAbGroup()
        assert g.is_trivial and g.order == 1 and str(g) == "0"

    def test_mod2(self):
        assert FgAbGroup(1, (2, 12)).mod2() == FgAbGroup(0, (2, 2, 2))
        assert FgAbGroup(0, (3, 9)).mod2().is_trivial

    def test_json_roundtrip(self):
        g = FgAbGroup(2, (2, 6))
        assert FgAbGroup.from_json(g.to_json()) == g


class TestInvolutionValidation:
    def test_not_an_involution(self):
        # multiplication by 2 on Z/5 has order 4
        with pytest.raises(InvalidInvolutionError):
            GroupWithInvolution.from_cyclic([5], [[2]])

    def test_not_well_defined(self):
        # e_0 -> e_1 from Z/2 into Z/4 is not a homomorphism
        with pytest.raises(InvalidInvolutionError):
            GroupWithInvolution.from_cyclic([2, 4], [[0, 1], [1, 0]])

    def test_wrong_shape(self):
        with pytest.raises(InvalidInvolutionError):
            GroupWithInvolution(M([[3]]), M([[1, 0], [0, 1]]))

    def test_involution_only_modulo_relations(self):
        # 4 ≡ -1 mod 5 and 4^2 = 16 ≡ 1
        G = GroupWithInvolution.from_cyclic([5], [[4]])
        assert coinvariants(G).is_trivial


class TestCoinvariants:
    def test_identity(self):
        assert coinvariants(GroupWithInvolution.from_cyclic([3], [[1]])) == FgAbGroup(0, (3,))

    def test_negation_on_odd(self):
        assert coinvariants(GroupWithInvolution.from_cyclic([3], [[-1]])).is_trivial

    def test_swap(self):
        # brute force over 4 elements: (1-ι) image is {(0,0),(1,1)}
        G = GroupWithInvolution.from_cyclic([2, 2], [[0, 1], [1, 0]])
        assert coinvariants(G) == FgAbGroup(0, (2,))

    def test_free(self):
        G = GroupWithInvolution.from_cyclic([0, 0], [[0, 1], [1, 0]])
        assert coinvariants(G) == FgAbGroup(1)


class TestTate:
    def test_identity_on_Z(self):
        G = GroupWithInvolution.from_cyclic([0], [[1]])
        assert tate_cohomology(G, 0) == FgAbGroup(0, (2,))
        assert tate_cohomology(G, 1).is_trivial

    def test_negation_on_Z(self):
        G = GroupWithInvolution.from_cyclic([0], [[-1]])
        assert tate_cohomology(G, 0).is_trivial
        assert tate_cohomology(G, 1) == FgAbGroup(0, (2,))

    def test_swap_on_Z2(self):
        G = GroupWithInvolution.from_cyclic([0, 0], [[0, 1], [1, 0]])
        assert tate_cohomology(G, 0).is_trivial
        assert tate_cohomology(G, 1).is_trivial

    def test_bad_parity(self):
        with pytest.raises(ValueError):
            tate_cohomology(GroupWithInvolution.from_cyclic([0], [[1]]), 2)


class TestSymmetricEven:
    def test_identity_on_Z2(self):
        G = GroupWithInvolution.from_cyclic([2], [[1]])
        assert symmetric_even_quotient(G, 1) == FgAbGroup(0, (2,))

    def test_skew_on_trivial_action_free(self):
        # free module with trivial action: no nonzero skew-symmetrics
        for r in range(1, 5):
            ident = [[int(i == j) for j in range(r)] for i in range(r)]
            G = GroupWithInvolution.from_cyclic([0] * r, ident)
            assert symmetric_even_quotient(G, -1).is_trivial

    def test_skew_on_Z4(self):
        # ι = -1 on Z/4: skew-symmetrics are all of Z/4, skew-evens are 2Z/4
        G = GroupWithInvolution.from_cyclic([4], [[-1]])
        assert symmetric_even_quotient(G, -1) == FgAbGroup(0, (2,))


class TestHelpers:
    def test_image_and_mod2(self):
        # ι = swap on Z/4 + Z/4: norm image ≅ Z/4 (diagonal), A/(A^+ + 2A) = Z/2
        G = GroupWithInvolution.from_cyclic([4, 4], [[0, 1], [1, 0]])
        assert image_subgroup(G, 1) == FgAbGroup(0, (4,))
        assert mod2_quotient(G, 1) == FgAbGroup(0, (2,))

    def test_lattice_subquotient(self):
        assert lattice_subquotient([[1, 0], [0, 1]], [[2, 0], [0, 6]], 2) == FgAbGroup(0, (2, 6))
        with pytest.raises(ValueError):
            lattice_subquotient([[2, 0]], [[1, 0]], 2)


def test_random_modules_against_enumeration():
    rng = random.Random(7)
    for _ in range(200):
        mods, iota = random_module(rng)
        G = GroupWithInvolution.from_cyclic(mods, iota)
        assert coinvariants(G).torsion == bf_coinvariants(mods, iota)
        for sign in (1, -1):
            got = symmetric_even_quotient(G, sign)
            assert got.torsion == bf_kernel_mod_image(mods, iota, sign)
            assert got.is_elementary_2


def test_skew_quotient_is_twisted_tate():
    rng = random.Random(11)
    for _ in range(100):
        mods, iota = random_module(rng)
        G = GroupWithInvolution.from_cyclic(mods, iota)
        assert symmetric_even_quotient(G, -1) == tate_cohomology(G, 1)
        assert symmetric_even_quotient(G, -1) == tate_cohomology(G.twisted(-1), 0)
