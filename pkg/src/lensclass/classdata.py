"""Class-group records for Z[ζ_p] and the coinvariant deduction built on them.

Records are ingested from a small line-oriented text file; nothing here
computes a class group from scratch.  ``minus_class_number`` is an
independent analytic check on the orders the records carry.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .abelian import FgAbGroup
from .cyclotomic import CyclotomicNumber
from .modular import factorize, is_prime

__all__ = [
    "DATA_ENV_VAR",
    "BUNDLED_DATA",
    "TABLE1_PRIMES",
    "TABLE1_EXPECTED",
    "TABLE1_LIMIT",
    "RIM_ASSUMPTION",
    "DataFileError",
    "ConsistencyError",
    "ClassGroupRecord",
    "H0Result",
    "default_data_path",
    "parse_records",
    "load_records",
    "deduce_h0",
    "h0_from_record",
    "reproduce_table1",
    "minus_class_number",
    "validate_records",
]

DATA_ENV_VAR = "LENSCLASS_DATA"
BUNDLED_DATA = "classgroups.txt"
TABLE1_LIMIT = 241
MINUS_CLASS_NUMBER_CAP = 300

RIM_ASSUMPTION = (
    "Wh_0(C_p) is identified with the ideal class group Cl_p of Z[zeta_p] "
    "(Rim's theorem), with the involution induced by zeta_p -> zeta_p^-1."
)


class DataFileError(ValueError):
    """A class-group data file failed to parse or validate."""


class ConsistencyError(ArithmeticError):
    """An internal cross-check failed; the result cannot be trusted."""


@dataclass(frozen=True)
class ClassGroupRecord:
    p: int
    cl_plus: FgAbGroup
    cl_minus_mod2: FgAbGroup
    cl_minus: FgAbGroup | None = None
    grh_conditional: bool = False

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p={self.p} is not an odd prime")
        if not self.cl_minus_mod2.is_elementary_2:
            raise ValueError(f"Cl^-/2 = {self.cl_minus_mod2} is not elementary abelian of exponent 2")
        for name, g in (("Cl^+", self.cl_plus), ("Cl^-", self.cl_minus)):
            if g is not None and not g.is_finite:
                raise ValueError(f"{name} must be finite")
        if self.cl_minus is not None and self.cl_minus.mod2() != self.cl_minus_mod2:
            raise ValueError(
                f"Cl^- = {self.cl_minus} has mod-2 quotient {self.cl_minus.mod2()}, "
                f"not {self.cl_minus_mod2}"
            )


@dataclass(frozen=True)
class H0Result:
    """H_0(C_2; Cl_p): either a determined group or only an order interval."""

    kind: str
    group: FgAbGroup | None
    order_low: int
    order_high: int
    grh_conditional: bool = False
    rule: str = ""

    def __post_init__(self):
        if self.kind == "exact":
            if self.group is None or not (self.order_low <= self.group.order <= self.order_high):
                raise ValueError("exact H0 result must carry a group within its order bounds")
        elif self.kind == "interval":
            if self.order_low > self.order_high:
                raise ValueError("empty order interval")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @classmethod
    def exact(cls, group: FgAbGroup, grh: bool = False, rule: str = "") -> "H0Result":
        return cls("exact", group, group.order, group.order, grh, rule)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "group": self.group.to_json() if self.group is not None else None,
            "order_low": self.order_low,
            "order_high": self.order_high,
            "grh_conditional": self.grh_conditional,
            "rule": self.rule,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "H0Result":
        g = obj.get("group")
        return cls(obj["kind"], FgAbGroup.from_json(g) if g else None, obj["order_low"],
                   obj["order_high"], obj["grh_conditional"], obj.get("rule", ""))

    def describe(self) -> str:
        star = "*" if self.grh_conditional else ""
        if self.kind == "exact":
            return _paren(self.group) + star
        return f"{self.order_low} <= order <= {self.order_high}{star}"


def _paren(g: FgAbGroup) -> str:
    return "0" if g.is_trivial else "(" + ",".join(map(str, g.torsion)) + ")"


# ---------------------------------------------------------------------------
# data files

def default_data_path() -> Path:
    env = os.environ.get(DATA_ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("lensclass") / "data" / BUNDLED_DATA))


def _parse_group(text: str, lineno: int, what: str) -> FgAbGroup:
    text = text.strip()
    if text in ("0", ""):
        return FgAbGroup()
    try:
        factors = [int(x) for x in text.split(",")]
    except ValueError:
        raise DataFileError(f"line {lineno}: cannot parse {what} {text!r}") from None
    if any(f < 1 for f in factors):
        raise DataFileError(f"line {lineno}: {what} factors must be positive, got {text!r}")
    return FgAbGroup.from_factors([f for f in factors if f > 1])


def parse_records(text: str, source: str = "<string>") -> list[ClassGroupRecord]:
    """Parse ``p ; Cl^+ ; Cl^-/2 ; Cl^- ; flag`` lines.

    Groups are ``0`` or comma-separated cyclic orders; ``-`` in the Cl^-
    column means unknown; flag ``*`` marks a GRH-conditional Cl^+.
    """
    records: list[ClassGroupRecord] = []
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(";")]
        if len(fields) != 5:
            raise DataFileError(f"{source}:{lineno}: expected 5 ';'-separated fields, got {len(fields)}")
        try:
            p = int(fields[0])
        except ValueError:
            raise DataFileError(f"{source}:{lineno}: bad prime {fields[0]!r}") from None
        if p in seen:
            raise DataFileError(f"{source}:{lineno}: duplicate prime {p} (first on line {seen[p]})")
        if fields[4] not in ("*", "-"):
            raise DataFileError(f"{source}:{lineno}: flag must be '*' or '-', got {fields[4]!r}")
        cl_minus = None if fields[3] == "-" else _parse_group(fields[3], lineno, "Cl^-")
        try:
            rec = ClassGroupRecord(
                p,
                _parse_group(fields[1], lineno, "Cl^+"),
                _parse_group(fields[2], lineno, "Cl^-/2"),
                cl_minus,
                fields[4] == "*",
            )
        except DataFileError:
            raise
        except ValueError as exc:
            raise DataFileError(f"{source}:{lineno}: {exc}") from None
        seen[p] = lineno
        records.append(rec)
    return records


def load_records(path=None) -> list[ClassGroupRecord]:
    path = Path(path) if path is not None else default_data_path()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFileError(f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_records(text, str(path))


# ---------------------------------------------------------------------------
# the exact-sequence deduction

def deduce_h0(cl_plus: FgAbGroup, cl_minus_mod2: FgAbGroup, grh: bool = False) -> H0Result:
    """Pin down H_0(C_2; Cl) from  ₂Cl^- -> Cl^+ -> H_0 -> Cl^-/2 -> 0."""
    if cl_plus.is_trivial:
        return H0Result.exact(cl_minus_mod2, grh, "a")
    if cl_minus_mod2.is_trivial:
        # Cl^- odd, so ₂Cl^- = 0 and Cl^+ injects
        return H0Result.exact(cl_plus, grh, "b")
    if cl_plus.order % 2:
        return H0Result.exact(cl_plus.direct_sum(cl_minus_mod2), grh, "c")
    return H0Result("interval", None, cl_minus_mod2.order,
                    cl_plus.order * cl_minus_mod2.order, grh, "d")


def h0_from_record(rec: ClassGroupRecord) -> H0Result:
    return deduce_h0(rec.cl_plus, rec.cl_minus_mod2, rec.grh_conditional)


def _odd_primes_upto(n: int) -> list[int]:
    return [p for p in range(3, n + 1, 2) if is_prime(p)]


TABLE1_PRIMES = (29, 113, 163, 191, 197, 229, 239)

_E3 = FgAbGroup(0, (2, 2, 2))
TABLE1_EXPECTED: dict[int, H0Result] = {
    29: H0Result.exact(_E3, False, "a"),
    113: H0Result.exact(_E3, False, "a"),
    163: H0Result("interval", None, 4, 16, True, "d"),
    191: H0Result.exact(FgAbGroup(0, (11,)), True, "b"),
    197: H0Result.exact(_E3, True, "a"),
    229: H0Result.exact(FgAbGroup(0, (3,)), True, "b"),
    239: H0Result.exact(_E3, True, "a"),
}


def _same_h0(a: H0Result, b: H0Result) -> bool:
    return (a.kind, a.group, a.order_low, a.order_high, a.grh_conditional) == \
           (b.kind, b.group, b.order_low, b.order_high, b.grh_conditional)


def reproduce_table1(records, cross_check: bool = True, limit: int = TABLE1_LIMIT) -> dict:
    """Recompute the listed rows and the vanishing claim for the other primes <= limit."""
    by_p = {r.p: r for r in records}
    rows, mismatches = [], []
    for p in TABLE1_PRIMES:
        rec = by_p.get(p)
        if rec is None:
            continue
        h0 = h0_from_record(rec)
        row = {
            "p": p,
            "cl_plus": _paren(rec.cl_plus) + ("*" if rec.grh_conditional else ""),
            "cl_minus_mod2": _paren(rec.cl_minus_mod2),
            "h0": h0.to_json(),
            "h0_text": h0.describe(),
        }
        if cross_check and not _same_h0(h0, TABLE1_EXPECTED[p]):
            row["expected"] = TABLE1_EXPECTED[p].describe()
            mismatches.append({"p": p, "computed": h0.describe(),
                               "expected": TABLE1_EXPECTED[p].describe()})
        rows.append(row)

    vanishing, conditional = [], []
    for p in _odd_primes_upto(limit):
        if p in TABLE1_PRIMES or p not in by_p:
            continue
        h0 = h0_from_record(by_p[p])
        if h0.kind == "exact" and h0.group.is_trivial:
            vanishing.append(p)
            if h0.grh_conditional:
                conditional.append(p)
        elif cross_check:
            mismatches.append({"p": p, "computed": h0.describe(), "expected": "0"})

    gaps = [p for p in _odd_primes_upto(limit) if p not in by_p]
    return {
        "limit": limit,
        "rows": rows,
        "vanishing": vanishing,
        "vanishing_count": len(vanishing),
        # Z[ζ_2] = Z has trivial class group, so p = 2 vanishes as well
        "vanishing_count_with_p2": len(vanishing) + 1,
        "vanishing_grh_conditional": conditional,
        "gaps": gaps,
        "mismatches": mismatches,
        "ok": not gaps and not mismatches and len(rows) == len(TABLE1_PRIMES),
    }


# ---------------------------------------------------------------------------
# analytic minus class number

def _primitive_root(p: int) -> int:
    qs = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ValueError(f"no primitive root mod {p}")


def minus_class_number(p: int) -> int:
    """h_p^- = 2p ∏_{χ odd} (-B_{1,χ}/2), evaluated exactly in Q(ζ_{p-1})."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"p={p} is not an odd prime")
    if p > MINUS_CLASS_NUMBER_CAP:
        raise ValueError(f"p={p} exceeds the cost cap {MINUS_CLASS_NUMBER_CAP}")
    n = p - 1
    g = _primitive_root(p)
    powers = [pow(g, m, p) for m in range(n)]
    total = CyclotomicNumber.from_int(n, 1)
    odd = 0
    for j in range(1, n, 2):
        # Σ_a a·χ_j(a) with χ_j(g^m) = ζ^{jm}
        coeffs = [0] * n
        for m, a in enumerate(powers):
            coeffs[j * m % n] += a
        total = total * CyclotomicNumber(n, coeffs)
        odd += 1
    if not total.is_rational():
        raise ConsistencyError(f"Bernoulli product for p={p} is not rational")
    value = 2 * p * (-1) ** odd * total.rational_value() / Fraction(2 * p) ** odd
    if value.denominator != 1 or value <= 0:
        raise ConsistencyError(f"minus class number for p={p} came out as {value}")
    return int(value)


def _two_part(n: int) -> int:
    t = 1
    while n % 2 == 0:
        n //= 2
        t *= 2
    return t


def validate_records(records, limit: int = MINUS_CLASS_NUMBER_CAP) -> dict:
    """Check record orders against the analytic minus class number."""
    issues = []
    checked = []
    for rec in records:
        if rec.p > limit:
            continue
        h = minus_class_number(rec.p)
        checked.append(rec.p)
        m2 = rec.cl_minus_mod2.order
        if rec.cl_minus is not None and rec.cl_minus.order != h:
            issues.append({"p": rec.p, "problem": f"|Cl^-| = {rec.cl_minus.order} but h^- = {h}"})
        if _two_part(h) % m2:
            issues.append({"p": rec.p,
                           "problem": f"|Cl^-/2| = {m2} does not divide the 2-part {_two_part(h)} of h^- = {h}"})
        elif (m2 == 1) != (h % 2 == 1):
            issues.append({"p": rec.p,
                           "problem": f"Cl^-/2 = {_paren(rec.cl_minus_mod2)} but h^- = {h} has 2-part {_two_part(h)}"})
    return {"checked": checked, "issues": issues, "ok": not issues}
