"""Finitely generated abelian groups, Smith normal form, and C_2-module calculus.

Groups are handled through presentations: a group is ``Z^n / L`` where the
relation lattice ``L`` is spanned by integer vectors.  All arithmetic is on
Python integers, so nothing ever overflows or rounds.

>>> cokernel(IntMatrix.from_rows([[2, 0], [0, 4]]))
FgAbGroup(free_rank=0, torsion=(2, 4))
>>> G = GroupWithInvolution.from_cyclic([3], [[-1]])
>>> coinvariants(G)
FgAbGroup(free_rank=0, torsion=())
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Sequence

__all__ = [
    "IntMatrix",
    "FgAbGroup",
    "GroupWithInvolution",
    "InvalidInvolutionError",
    "smith_normal_form",
    "cokernel",
    "coinvariants",
    "quotient_by_image",
    "tate_cohomology",
    "symmetric_even_quotient",
    "image_subgroup",
    "mod2_quotient",
    "lattice_subquotient",
]


class InvalidInvolutionError(ValueError):
    """The supplied matrix does not define an involution of the presented group."""


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be natural numbers")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def tolist(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.rows
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        a, b = self.tolist(), other.tolist()
        return IntMatrix.from_rows(
            [[sum(a[i][t] * b[t][j] for t in range(self.cols)) for j in range(other.cols)]
             for i in range(self.rows)],
            other.cols,
        )

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for t in range(n - 1):
            if a[t][t] == 0:
                for i in range(t + 1, n):
                    if a[i][t] != 0:
                        a[t], a[i] = a[i], a[t]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
            prev = a[t][t]
        return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class FgAbGroup:
    """Z^free_rank + Z/d_1 + ... + Z/d_t with d_i >= 2 and d_i | d_{i+1}.

    The canonical form is unique, so ``==`` is an isomorphism test.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(x) for x in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be a natural number")
        for x in self.torsion:
            if x < 2:
                raise ValueError(f"invariant factor {x} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} break the divisibility chain")

    @classmethod
    def from_factors(cls, factors: Sequence[int], free_rank: int = 0) -> "FgAbGroup":
        """Canonical form of Z^free_rank + sum of Z/m for m in ``factors`` (any order)."""
        n = len(factors)
        diag = [[int(factors[i]) if i == j else 0 for j in range(n)] for i in range(n)]
        g = cokernel(IntMatrix.from_rows(diag, n))
        return cls(g.free_rank + free_rank, g.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        """Cardinality, or None when the group is infinite."""
        return prod(self.torsion) if self.free_rank == 0 else None

    @property
    def is_elementary_2(self) -> bool:
        return self.free_rank == 0 and all(x == 2 for x in self.torsion)

    def direct_sum(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup.from_factors(self.torsion + other.torsion, self.free_rank + other.free_rank)

    def mod2(self) -> "FgAbGroup":
        """G / 2G."""
        n = self.free_rank + sum(1 for x in self.torsion if x % 2 == 0)
        return FgAbGroup(0, (2,) * n)

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj: dict) -> "FgAbGroup":
        return cls(obj["free_rank"], tuple(obj["torsion"]))

    def __str__(self):
        parts = (["Z"] if self.free_rank == 1 else [f"Z^{self.free_rank}"] if self.free_rank else [])
        parts += [f"Z/{x}" for x in self.torsion]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Smith normal form

def _snf(a: list[list[int]], m: int, n: int):
    """Diagonalise ``a`` in place.

    Returns (U, Uinv, V, Vinv) with U·A·V = S.  The pivot is always the
    entry of smallest absolute value in the active block.
    """
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Uinv = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for r in Uinv:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(src, dst, c):
        # row_dst += c * row_src
        if c == 0:
            return
        ra, rd = a[src], a[dst]
        for j in range(n):
            rd[j] += c * ra[j]
        us, ud = U[src], U[dst]
        for j in range(m):
            ud[j] += c * us[j]
        for r in Uinv:
            r[src] -= c * r[dst]

    def add_col(src, dst, c):
        # col_dst += c * col_src
        if c == 0:
            return
        for r in a:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]
        vs, vd = Vinv[src], Vinv[dst]
        for j in range(n):
            vs[j] -= c * vd[j]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for r in Uinv:
            r[i] = -r[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return U, Uinv, V, Vinv
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is not None:
                add_row(bad, t, 1)
                continue
            if p < 0:
                negate_row(t)
            break
    return U, Uinv, V, Vinv


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with U·M·V = S, U and V unimodular, S in Smith form."""
    a = M.tolist()
    U, _, V, _ = _snf(a, M.rows, M.cols)
    return (IntMatrix.from_rows(U, M.rows), IntMatrix.from_rows(a, M.cols),
            IntMatrix.from_rows(V, M.cols))


def _diagonal(a, m, n):
    return [a[i][i] for i in range(min(m, n))]


def cokernel(M: IntMatrix) -> FgAbGroup:
    """Z^rows / image(M): the columns of M are the relations."""
    a = M.tolist()
    _snf(a, M.rows, M.cols)
    diag = _diagonal(a, M.rows, M.cols)
    nonzero = [x for x in diag if x]
    free = M.rows - len(nonzero)
    return FgAbGroup(free, tuple(x for x in nonzero if x != 1))


# ---------------------------------------------------------------------------
# Lattices in Z^n, generators stored as column lists

def _cols_to_rows(gens: list[list[int]], n: int) -> list[list[int]]:
    return [[g[i] for g in gens] for i in range(n)]


def _lattice_basis(gens: list[list[int]], n: int):
    """A Z-basis of span(gens) plus the data needed to solve in that basis."""
    m = len(gens)
    a = _cols_to_rows(gens, n) if m else [[] for _ in range(n)]
    U, Uinv, _, _ = _snf(a, n, m)
    diag = [d for d in _diagonal(a, n, m) if d]
    r = len(diag)
    basis = [[Uinv[i][t] * diag[t] for i in range(n)] for t in range(r)]
    return basis, U, diag


def _coordinates(v: list[int], U, diag) -> list[int] | None:
    """Coordinates of ``v`` in a basis produced by ``_lattice_basis``; None if outside."""
    n = len(v)
    w = [sum(U[i][j] * v[j] for j in range(n)) for i in range(n)]
    r = len(diag)
    if any(w[i] for i in range(r, n)):
        return None
    coords = []
    for t in range(r):
        q, rem = divmod(w[t], diag[t])
        if rem:
            return None
        coords.append(q)
    return coords


def _kernel(rows: list[list[int]], m: int, n: int) -> list[list[int]]:
    """Z-basis of {x in Z^n : A x = 0} for the m x n matrix ``rows``."""
    a = [list(r) for r in rows]
    _, _, V, _ = _snf(a, m, n)
    rank = sum(1 for d in _diagonal(a, m, n) if d)
    return [[V[i][t] for i in range(n)] for t in range(rank, n)]


def lattice_subquotient(outer: list[list[int]], inner: list[list[int]], n: int) -> FgAbGroup:
    """span(outer) / span(inner) inside Z^n.  ``inner`` must lie in span(outer)."""
    basis, U, diag = _lattice_basis(outer, n)
    rel = []
    for v in inner:
        c = _coordinates(v, U, diag)
        if c is None:
            raise ValueError("inner lattice is not contained in outer lattice")
        rel.append(c)
    r = len(basis)
    if not rel:
        return FgAbGroup(r, ())
    return cokernel(IntMatrix.from_rows(_cols_to_rows(rel, r), len(rel)))


# ---------------------------------------------------------------------------
# Groups with involution

@dataclass(frozen=True)
class GroupWithInvolution:
    """Z^n / L with an involution.

    ``presentation`` is r x n: each row is a relation vector on the n
    generators.  ``action`` is n x n and sends generator j to column j, so it
    acts on coordinate vectors by left multiplication.
    """

    presentation: IntMatrix
    action: IntMatrix
    _relations: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.presentation.cols
        if self.action.rows != n or self.action.cols != n:
            raise InvalidInvolutionError(
                f"action must be {n}x{n} to match {n} generators"
            )
        rels = [list(r) for r in self.presentation.tolist()]
        object.__setattr__(self, "_relations", tuple(tuple(r) for r in rels))
        _, U, diag = _lattice_basis(rels, n)
        iota = self.action.tolist()
        for r in rels:
            if _coordinates(_apply(iota, r), U, diag) is None:
                raise InvalidInvolutionError(f"action does not preserve relation {r}")
        for j in range(n):
            col = [iota[i][j] for i in range(n)]
            back = _apply(iota, col)
            back[j] -= 1
            if _coordinates(back, U, diag) is None:
                raise InvalidInvolutionError(
                    f"action squared is not the identity on generator {j}"
                )

    @classmethod
    def from_cyclic(cls, orders: Sequence[int], action: Sequence[Sequence[int]]) -> "GroupWithInvolution":
        """Z/m_1 + ... + Z/m_n (use 0 for a Z summand) with the given action matrix."""
        n = len(orders)
        rels = [[orders[i] if i == j else 0 for j in range(n)] for i in range(n) if orders[i]]
        return cls(IntMatrix.from_rows(rels, n), IntMatrix.from_rows(action, n))

    @property
    def ngens(self) -> int:
        return self.presentation.cols

    @property
    def relations(self) -> list[list[int]]:
        return [list(r) for r in self._relations]

    def group(self) -> FgAbGroup:
        return cokernel(self.presentation.transpose())

    def twisted(self, sign: int) -> "GroupWithInvolution":
        """Same group with the involution sign·ι."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if sign == 1:
            return self
        return GroupWithInvolution(
            self.presentation, IntMatrix(self.ngens, self.ngens, tuple(-x for x in self.action.entries))
        )

    def _endo(self, sign: int) -> list[list[int]]:
        """Matrix of 1 + sign·ι."""
        n = self.ngens
        iota = self.action.tolist()
        return [[int(i == j) + sign * iota[i][j] for j in range(n)] for i in range(n)]


def _apply(mat, v):
    return [sum(mat[i][j] * v[j] for j in range(len(v))) for i in range(len(mat))]


def _columns(mat):
    n = len(mat)
    return [[mat[i][j] for i in range(n)] for j in range(len(mat[0]) if mat else 0)]


def _quotient_by_endo_image(G: GroupWithInvolution, endo) -> FgAbGroup:
    n = G.ngens
    gens = G.relations + _columns(endo)
    if not gens:
        return FgAbGroup(n, ())
    return cokernel(IntMatrix.from_rows(_cols_to_rows(gens, n), len(gens)))


def quotient_by_image(G: GroupWithInvolution, sign: int) -> FgAbGroup:
    """A / (1 + sign·ι)A."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return _quotient_by_endo_image(G, G._endo(sign))


def coinvariants(G: GroupWithInvolution) -> FgAbGroup:
    """H_0(C_2; A) = A / (1 - ι)A."""
    return quotient_by_image(G, -1)


def image_subgroup(G: GroupWithInvolution, sign: int = 1) -> FgAbGroup:
    """(1 + sign·ι)A as an abstract group; sign=+1 gives the image of the norm."""
    n = G.ngens
    rels = G.relations
    return lattice_subquotient(rels + _columns(G._endo(sign)), rels, n)


def mod2_quotient(G: GroupWithInvolution, sign: int = 1) -> FgAbGroup:
    """A / ((1 + sign·ι)A + 2A)."""
    n = G.ngens
    if n == 0:
        return FgAbGroup()
    two = [[2 * int(i == j) for j in range(n)] for i in range(n)]
    gens = G.relations + _columns(G._endo(sign)) + _columns(two)
    return cokernel(IntMatrix.from_rows(_cols_to_rows(gens, n), len(gens)))


def _kernel_mod_image(G: GroupWithInvolution, sign: int) -> FgAbGroup:
    """ker(1 - sign·ι) / im(1 + sign·ι) on A = Z^n / L."""
    n = G.ngens
    if n == 0:
        return FgAbGroup()
    rels = G.relations
    f = G._endo(-sign)
    # preimage lattice K = {x : f x in L}: kernel of [f | -B] projected to x
    lbasis, _, _ = _lattice_basis(rels, n)
    m = len(lbasis)
    block = [f[i] + [-b[i] for b in lbasis] for i in range(n)]
    K = [v[:n] for v in _kernel(block, n, n + m)]
    inner = rels + _columns(G._endo(sign))
    result = lattice_subquotient(K, inner, n)
    if not result.is_elementary_2:
        raise ArithmeticError(f"Tate group {result} is not an elementary 2-group")
    return result


def tate_cohomology(G: GroupWithInvolution, parity: int) -> FgAbGroup:
    """Ĥ^0 = ker(1-ι)/im(1+ι) for parity 0, Ĥ^1 = ker(1+ι)/im(1-ι) for parity 1."""
    if parity not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    return _kernel_mod_image(G, 1 if parity == 0 else -1)


def symmetric_even_quotient(G: GroupWithInvolution, sign: int) -> FgAbGroup:
    """{a : a = sign·ι(a)} / {b + sign·ι(b)}."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return _kernel_mod_image(G, sign)
