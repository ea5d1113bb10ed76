"""Units modulo d, the partition Q_d^k, and the indeterminacy arithmetic.

Throughout, d is odd and square-free.  Class representatives are always the
smallest residue in the class so output is stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

__all__ = [
    "MAX_MODULUS",
    "ScopeError",
    "UnitGroupModD",
    "PartitionQdk",
    "factorize",
    "is_prime",
    "totient",
    "check_modulus",
    "unit_group",
    "qdk_partition",
    "qdk_class_of",
    "exponent_subgroup",
    "indeterminacy_bound",
]

MAX_MODULUS = 10**5


class ScopeError(ValueError):
    """An input lies outside the range the classification covers."""


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def totient(d: int) -> int:
    if d < 1:
        raise ValueError("totient is defined for d >= 1")
    phi = d
    for p in factorize(d):
        phi = phi // p * (p - 1)
    return phi


def check_modulus(d: int, name: str = "d") -> dict[int, int]:
    """Reject anything but an odd square-free integer in (1, MAX_MODULUS]."""
    if not isinstance(d, int) or d <= 1:
        raise ScopeError(f"{name} must be an integer > 1, got {d!r}")
    if d % 2 == 0:
        raise ScopeError(f"{name} must be square-free odd, got even {name}={d}")
    if d > MAX_MODULUS:
        raise ScopeError(f"{name}={d} exceeds the enumeration cap {MAX_MODULUS}")
    f = factorize(d)
    if any(e > 1 for e in f.values()):
        raise ScopeError(f"{name} must be square-free odd, got {name}={d} = "
                         + " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(f.items())))
    return f


@dataclass(frozen=True)
class UnitGroupModD:
    d: int
    units: tuple[int, ...]
    crt_factors: tuple[int, ...]

    @property
    def component_orders(self) -> tuple[int, ...]:
        """Orders of the cyclic CRT components (Z/p)^x."""
        return tuple(p - 1 for p in self.crt_factors)

    @property
    def order(self) -> int:
        return len(self.units)


@lru_cache(maxsize=256)
def unit_group(d: int) -> UnitGroupModD:
    f = check_modulus(d)
    units = tuple(a for a in range(1, d) if gcd(a, d) == 1)
    return UnitGroupModD(d, units, tuple(sorted(f)))


def _kth_powers_pm(d: int, k: int) -> frozenset[int]:
    """The subgroup {±a^k} of the units mod d."""
    powers = {pow(a, k, d) for a in unit_group(d).units}
    return frozenset(powers | {d - x for x in powers})


@dataclass(frozen=True)
class PartitionQdk:
    d: int
    k: int
    classes: tuple[tuple[int, ...], ...]

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.classes)

    def __len__(self):
        return len(self.classes)

    def class_of(self, q: int) -> int:
        q %= self.d
        for c in self.classes:
            if q in c:
                return c[0]
        raise ScopeError(f"{q} is not a unit mod {self.d}")


@lru_cache(maxsize=1024)
def qdk_partition(d: int, k: int) -> PartitionQdk:
    """Orbits of the units mod d under multiplication by k-th powers and by -1."""
    if k < 1:
        raise ScopeError(f"k must be >= 1, got {k}")
    G = unit_group(d)
    H = _kth_powers_pm(d, k)
    seen: set[int] = set()
    classes = []
    for q in G.units:
        if q in seen:
            continue
        orbit = tuple(sorted(q * h % d for h in H))
        seen.update(orbit)
        classes.append(orbit)
    classes.sort()
    return PartitionQdk(d, k, tuple(classes))


def qdk_class_of(d: int, k: int, q: int) -> int:
    """Smallest residue in the Q_d^k class of q."""
    check_modulus(d)
    if gcd(q, d) != 1:
        raise ScopeError(f"q={q} is not a unit mod {d}")
    return qdk_partition(d, k).class_of(q)


def exponent_subgroup(d: int, e: int) -> tuple[int, list[int]]:
    """The units a mod d with a^e = 1, and how many there are."""
    if e < 1:
        raise ScopeError(f"exponent must be >= 1, got {e}")
    elems = [a for a in unit_group(d).units if pow(a, e, d) == 1]
    return len(elems), elems


def indeterminacy_bound(d: int, k: int) -> int:
    """8 gcd(k, φ(d)/2): the fibre-size bound over a stratum."""
    check_modulus(d)
    if k <= 1:
        raise ScopeError(f"k must be > 1, got {k}")
    return 8 * gcd(k, totient(d) // 2)
