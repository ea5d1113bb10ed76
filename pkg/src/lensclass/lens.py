"""Lens-space invariants and the closed-form ranks and orders they feed.

The ρ-invariant stored here is the raw multiplicative G-signature product

    ρ(j) = ∏_i (ζ^{j q_i} + 1) / (ζ^{j q_i} - 1),    1 <= j <= d-1,

with no global normalising constant.  Only differences and zero tests of ρ
carry meaning downstream, so any such constant cancels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd, prod

from .abelian import FgAbGroup
from .cyclotomic import CyclotomicNumber
from .modular import ScopeError, check_modulus, is_prime, qdk_class_of, unit_group

__all__ = [
    "LensSpace",
    "RhoVector",
    "HomeomorphismWitness",
    "MAX_HOMEO_K",
    "postnikov_invariant",
    "linking_form",
    "homotopy_equivalent",
    "homeomorphism_witness",
    "homeomorphic",
    "rho_invariant",
    "rho_difference",
    "normalized_rho_difference",
    "wh1_rank_prime",
    "structure_rank",
    "ahss_e2_page",
    "eps_order_bound",
]

MAX_HOMEO_K = 8


@dataclass(frozen=True)
class LensSpace:
    """L(d; q_1, ..., q_k), a closed manifold of dimension 2k - 1."""

    d: int
    rotations: tuple[int, ...]

    def __post_init__(self):
        check_modulus(self.d)
        rot = tuple(int(q) % self.d for q in self.rotations)
        if not rot:
            raise ScopeError("a lens space needs at least one rotation number")
        for q in rot:
            if gcd(q, self.d) != 1:
                raise ScopeError(f"rotation {q} is not a unit mod {self.d}")
        object.__setattr__(self, "rotations", rot)

    @classmethod
    def of(cls, d: int, *rotations: int) -> "LensSpace":
        return cls(d, tuple(rotations))

    @property
    def k(self) -> int:
        return len(self.rotations)

    @property
    def dimension(self) -> int:
        return 2 * self.k - 1

    def __str__(self):
        return f"L({self.d}; {', '.join(map(str, self.rotations))})"


def _require_comparable(L: LensSpace, M: LensSpace, same_k: bool = True):
    if L.d != M.d:
        raise ScopeError(f"incomparable lens spaces: d={L.d} vs d={M.d}")
    if same_k and L.k != M.k:
        raise ScopeError(f"incomparable lens spaces: k={L.k} vs k={M.k}")


def postnikov_invariant(L: LensSpace) -> int:
    return prod(L.rotations) % L.d


def linking_form(d: int, q: int, k: int) -> Fraction:
    """The 1x1 linking matrix q/d, as a fraction in [0, 1)."""
    check_modulus(d)
    if gcd(q, d) != 1:
        raise ScopeError(f"q={q} is not a unit mod {d}")
    return Fraction(q % d, d)


def homotopy_equivalent(L: LensSpace, M: LensSpace) -> bool:
    _require_comparable(L, M)
    return (qdk_class_of(L.d, L.k, postnikov_invariant(L))
            == qdk_class_of(M.d, M.k, postnikov_invariant(M)))


@dataclass(frozen=True)
class HomeomorphismWitness:
    """q'_i = signs[i] * unit * q_{perm[i]} (mod d) for every i."""

    unit: int
    perm: tuple[int, ...]
    signs: tuple[int, ...]

    @property
    def orientation(self) -> int:
        return prod(self.signs)


def homeomorphism_witness(L: LensSpace, M: LensSpace) -> HomeomorphismWitness | None:
    """Brute-force search for (u, σ, e) with M.q_i = e_i u L.q_σ(i), or None."""
    _require_comparable(L, M)
    if L.k > MAX_HOMEO_K:
        raise ScopeError(f"homeomorphism search is capped at k <= {MAX_HOMEO_K}")
    d = L.d
    for u in unit_group(d).units:
        scaled = [u * q % d for q in L.rotations]
        for perm in permutations(range(L.k)):
            signs = []
            for i, j in enumerate(perm):
                x, y = M.rotations[i], scaled[j]
                if x == y:
                    signs.append(1)
                elif x == (-y) % d:
                    signs.append(-1)
                else:
                    break
            else:
                return HomeomorphismWitness(u, perm, tuple(signs))
    return None


def homeomorphic(L: LensSpace, M: LensSpace) -> bool:
    return homeomorphism_witness(L, M) is not None


@dataclass(frozen=True)
class RhoVector:
    d: int
    values: dict

    def __getitem__(self, j: int) -> CyclotomicNumber:
        return self.values[j % self.d]

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())

    def __sub__(self, other: "RhoVector") -> "RhoVector":
        if self.d != other.d:
            raise ScopeError(f"conductor mismatch: {self.d} vs {other.d}")
        return RhoVector(self.d, {j: self.values[j] - other.values[j] for j in self.values})

    def scaled(self, c: int) -> "RhoVector":
        return RhoVector(self.d, {j: v * c for j, v in self.values.items()})

    def reindexed(self, u: int) -> "RhoVector":
        """j -> value at j·u."""
        return RhoVector(self.d, {j: self.values[j * u % self.d] for j in self.values})

    def satisfies_conjugation_symmetry(self) -> bool:
        return all(self.values[self.d - j] == v.conjugate() for j, v in self.values.items())

    def to_json(self) -> dict:
        return {"conductor": self.d,
                "values": {str(j): v.to_json() for j, v in sorted(self.values.items())}}


def rho_invariant(L: LensSpace) -> RhoVector:
    d = L.d
    one = CyclotomicNumber.from_int(d, 1)
    values = {}
    for j in range(1, d):
        val = one
        for q in L.rotations:
            z = CyclotomicNumber.zeta(d, j * q)
            val = val * (z + 1) * CyclotomicNumber.inverse_zeta_minus_one(d, j * q)
        values[j] = val
    return RhoVector(d, values)


def rho_difference(L: LensSpace, M: LensSpace) -> tuple[RhoVector, bool]:
    """ρ(M) - ρ(L) componentwise, with no reindexing."""
    _require_comparable(L, M, same_k=False)
    diff = rho_invariant(M) - rho_invariant(L)
    return diff, diff.is_zero()


def normalized_rho_difference(L: LensSpace, M: LensSpace,
                              witness: HomeomorphismWitness) -> tuple[RhoVector, bool]:
    """ρ(M) pulled back along the witness, minus ρ(L).

    With M.q_i = e_i·u·L.q_σ(i) one has ρ_M(j) = (∏ e_i)·ρ_L(j·u), so the
    comparison uses ρ_M(j·u^{-1})·∏ e_i.
    """
    _require_comparable(L, M)
    u_inv = pow(witness.unit, -1, L.d)
    pulled = rho_invariant(M).reindexed(u_inv).scaled(witness.orientation)
    diff = pulled - rho_invariant(L)
    return diff, diff.is_zero()


def wh1_rank_prime(p: int) -> int:
    """Rank of Wh_1(C_p), which is free abelian of rank (p-3)/2."""
    if p < 3 or not is_prime(p):
        raise ScopeError(f"Wh_1 rank is only provided for odd primes, got {p}")
    return (p - 3) // 2


def structure_rank(d: int) -> int:
    check_modulus(d)
    return (d - 1) // 2


def _e2_cell(d: int, k: int, i: int, j: int) -> FgAbGroup:
    top = 2 * k - 1
    if j > 0 and j % 4 == 0:
        if i == top:
            return FgAbGroup(1)
        if 0 < i < top and i % 2 == 1:
            return FgAbGroup(0, (d,))
    return FgAbGroup()


def ahss_e2_page(d: int, k: int) -> tuple[dict[tuple[int, int], FgAbGroup], int]:
    """E^2_{i,j} of the normal-invariant spectral sequence, total degree <= 2k.

    The bound is the product of |E^2_{i,j}| along i + j = 2k - 1; it bounds the
    order of the odd-degree homology from above and is a power of d.
    """
    check_modulus(d)
    if k <= 1:
        raise ScopeError(f"k must be > 1, got {k}")
    top = 2 * k - 1
    table = {(i, j): _e2_cell(d, k, i, j)
             for i in range(top + 1) for j in range(2 * k + 1 - i)}
    bound = 1
    for (i, j), g in table.items():
        if i + j == top and not g.is_trivial:
            if not g.is_finite:
                raise ArithmeticError("free cell on the odd diagonal")
            bound *= g.order
    return table, bound


def eps_order_bound(d: int) -> int:
    """2d², the bound on the homotopy order of the Dehn-twist map ε."""
    if d <= 1 or d % 2 == 0:
        raise ScopeError(f"d must be odd and > 1, got {d}")
    return 2 * d * d
