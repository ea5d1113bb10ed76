"""Strata of free C_ℓ-actions on S^1 x S^n and the self-equivalence arithmetic.

For n = 2k - 1 with k > 1 the actions (other than the standard rotation
T_ℓ) are covered by the strata

    Q_d^k x Z^{(d-1)/2} x H_0(C_2; Wh_0(C_d)),    1 < d | ℓ,

with fibres of size dividing 8 gcd(k, φ(d)/2).  Every other n has only T_ℓ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .abelian import FgAbGroup, GroupWithInvolution, coinvariants, quotient_by_image
from .classdata import RIM_ASSUMPTION, ClassGroupRecord, H0Result, h0_from_record
from .modular import (
    ScopeError,
    check_modulus,
    exponent_subgroup,
    indeterminacy_bound,
    is_prime,
    qdk_partition,
    totient,
)
from .lens import structure_rank

__all__ = [
    "SymbolicH0",
    "Stratum",
    "ClassificationResult",
    "HModReport",
    "HybridDescriptor",
    "classify_actions",
    "stratum_count",
    "hmod_report",
    "hybrid_structure_descriptor",
    "si_quotient",
]


@dataclass(frozen=True)
class SymbolicH0:
    """Stand-in for an H_0 group the ingested data does not determine."""

    label: str
    reason: str

    def to_json(self) -> dict:
        return {"kind": "symbolic", "label": self.label, "reason": self.reason}

    def describe(self) -> str:
        return self.label


@dataclass(frozen=True)
class Stratum:
    d: int
    q_class: int
    lattice_rank: int
    h0_descriptor: H0Result | SymbolicH0
    fiber_bound: int

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "q_class": self.q_class,
            "lattice_rank": self.lattice_rank,
            "h0": self.h0_descriptor.to_json(),
            "fiber_bound": self.fiber_bound,
        }


@dataclass(frozen=True)
class ClassificationResult:
    ell: int
    n: int
    kind: str
    strata: tuple[Stratum, ...] = ()
    countably_infinite: bool = False
    assumptions: tuple[str, ...] = field(default=())

    @property
    def k(self) -> int | None:
        return (self.n + 1) // 2 if self.kind == "strata" else None

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "n": self.n,
            "kind": self.kind,
            "countably_infinite": self.countably_infinite,
            "strata": [s.to_json() for s in self.strata],
        }


def _check_ell(ell: int):
    try:
        check_modulus(ell, "ell")
    except ScopeError as exc:
        raise ScopeError(f"ℓ must be square-free odd and > 1: {exc}") from None


def _h0_for(d: int, records_by_p: dict[int, ClassGroupRecord]):
    if is_prime(d):
        rec = records_by_p.get(d)
        if rec is not None:
            return h0_from_record(rec)
        return SymbolicH0(f"H_0(C_2; Cl_{d})", f"no class-group record for p={d}")
    return SymbolicH0(f"H_0(C_2; Wh_0(C_{d}))",
                      "Wh_0(C_d) for composite d is not determined by the ingested data")


def classify_actions(ell: int, n: int, records=()) -> ClassificationResult:
    """Enumerate the strata covering the conjugacy classes of free C_ℓ-actions on S^1 x S^n."""
    _check_ell(ell)
    if n < 1:
        raise ScopeError(f"n must be >= 1, got {n}")
    if n % 2 == 0 or n == 1:
        return ClassificationResult(ell, n, "single_class")
    k = (n + 1) // 2
    by_p = {r.p: r for r in records}
    strata = []
    assumptions = set()
    for d in (x for x in range(3, ell + 1, 2) if ell % x == 0):
        h0 = _h0_for(d, by_p)
        if isinstance(h0, H0Result):
            assumptions.add(RIM_ASSUMPTION)
            if h0.grh_conditional:
                assumptions.add(f"GRH for the Hilbert class field of Q(zeta_{d} + zeta_{d}^-1)")
        bound = indeterminacy_bound(d, k)
        rank = structure_rank(d)
        for q in qdk_partition(d, k).representatives:
            strata.append(Stratum(d, q, rank, h0, bound))
    return ClassificationResult(ell, n, "strata", tuple(strata),
                                countably_infinite=any(s.lattice_rank >= 1 for s in strata),
                                assumptions=tuple(sorted(assumptions)))


def stratum_count(ell: int, k: int) -> int:
    _check_ell(ell)
    if k <= 1:
        raise ScopeError(f"k must be > 1, got {k}")
    return sum(len(qdk_partition(d, k)) for d in range(3, ell + 1, 2) if ell % d == 0)


@dataclass(frozen=True)
class HModReport:
    """Orders in hMod(S^1 x L) = A ⋊ (C_2 x B)."""

    d: int
    k: int
    a_order: int
    b_order: int
    e: int
    total_order: int
    effective_quotient_order: int
    discrepancy_flag: bool
    b_elements: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "k": self.k,
            "a_order": self.a_order,
            "b_order": self.b_order,
            "e": self.e,
            "total_order": self.total_order,
            "effective_quotient_order": self.effective_quotient_order,
            "discrepancy_flag": self.discrepancy_flag,
            "b_elements": list(self.b_elements),
        }


def hmod_report(d: int, k: int) -> HModReport:
    check_modulus(d)
    if k <= 1:
        raise ScopeError(f"k must be > 1, got {k}")
    e = gcd(2 * k, totient(d))
    b_order, b_elems = exponent_subgroup(d, e)
    a_order = 2 * d * d
    return HModReport(
        d=d,
        k=k,
        a_order=a_order,
        b_order=b_order,
        e=e,
        total_order=a_order * 2 * b_order,
        effective_quotient_order=4 * e,
        discrepancy_flag=b_order != e,
        b_elements=tuple(b_elems),
    )


@dataclass(frozen=True)
class HybridDescriptor:
    """Parameter space Z^{(d-1)/2} x H_0 of a single stratum."""

    lattice: FgAbGroup
    h0: H0Result | SymbolicH0

    def to_json(self) -> dict:
        return {"lattice_rank": self.lattice.free_rank, "h0": self.h0.to_json()}

    def describe(self) -> str:
        r = self.lattice.free_rank
        return f"(Z^{r}, {self.h0.describe()})"


def hybrid_structure_descriptor(d: int, k: int, h0) -> HybridDescriptor:
    check_modulus(d)
    if k <= 1:
        raise ScopeError(f"k must be > 1, got {k}")
    if isinstance(h0, FgAbGroup):
        h0 = H0Result.exact(h0)
    return HybridDescriptor(FgAbGroup(structure_rank(d)), h0)


def si_quotient(wh0: GroupWithInvolution) -> FgAbGroup:
    """Wh_0 modulo its skew-evens.

    The stored involution μ is already the negated standard one, so
    skew-evens are {b + μ(b)} and the quotient is A/(1+μ)A, which is the
    coinvariant group of -μ.
    """
    direct = quotient_by_image(wh0, 1)
    via_coinvariants = coinvariants(wh0.twisted(-1))
    if direct != via_coinvariants:
        raise ArithmeticError(
            f"skew-even quotient {direct} disagrees with coinvariants {via_coinvariants}"
        )
    return direct
