"""Command-line front end.

Every subcommand prints one JSON document (default) or an aligned text
table (``--format table``).  Exit codes: 0 success, 1 precondition
violation, 2 data-file problem, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import __version__
from .abelian import FgAbGroup
from .classdata import (
    BUNDLED_DATA,
    DATA_ENV_VAR,
    RIM_ASSUMPTION,
    ConsistencyError,
    DataFileError,
    h0_from_record,
    load_records,
    minus_class_number,
    reproduce_table1,
    validate_records,
)
from .classify import classify_actions, hmod_report
from .lens import (
    LensSpace,
    homeomorphism_witness,
    homotopy_equivalent,
    linking_form,
    normalized_rho_difference,
    postnikov_invariant,
    rho_difference,
    rho_invariant,
)
from .modular import ScopeError, qdk_partition

EXIT_OK, EXIT_PRECONDITION, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3

CITATIONS = (
    "Cl_p^+: J. C. Miller, Real cyclotomic fields of prime conductor and their "
    "class numbers, Math. Comp. 84 (2015), Theorem 1.1",
    "Cl_p^-/2: R. Schoof, Minus class groups of the fields of the l-th roots of "
    "unity, Math. Comp. 67 (1998), Table 4.4",
)
GRH_NOTE = ("values marked GRH-conditional assume the Generalized Riemann Hypothesis "
            "for the zeta function of the Hilbert class field of Q(zeta_p + zeta_p^-1)")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _data_source(path):
    if path:
        return path
    env = os.environ.get(DATA_ENV_VAR)
    return env if env else None


def _provenance(path) -> dict:
    src = _data_source(path)
    return {"file": src if src else f"bundled:{BUNDLED_DATA}", "citations": list(CITATIONS)}


def _document(command, inputs, results, assumptions=(), provenance=None) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "results": results,
        "assumptions": list(assumptions),
        "data_provenance": provenance,
    }


# ---------------------------------------------------------------------------
# subcommands

def cmd_classify(args):
    records = load_records(_data_source(args.data))
    res = classify_actions(args.ell, args.n, records)
    results = res.to_json()
    if res.kind == "strata":
        results["k"] = res.k
        divisors = {}
        for s in res.strata:
            divisors.setdefault(s.d, []).append(s.q_class)
        results["divisor_groups"] = [{"d": d, "q_classes": qs} for d, qs in divisors.items()]
        results["stratum_count"] = len(res.strata)
    assumptions = list(res.assumptions)
    if any(s.h0_descriptor.to_json().get("grh_conditional") for s in res.strata):
        assumptions.append(GRH_NOTE)
    return _document("classify", {"ell": args.ell, "n": args.n}, results, assumptions,
                     _provenance(args.data))


def cmd_qdk(args):
    part = qdk_partition(args.d, args.k)
    results = {
        "class_count": len(part),
        "representatives": list(part.representatives),
        "classes": [list(c) for c in part.classes],
    }
    return _document("qdk", {"d": args.d, "k": args.k}, results)


def _lens_summary(L: LensSpace) -> dict:
    q = postnikov_invariant(L)
    lf = linking_form(L.d, q, L.k)
    return {"type": str(L), "postnikov_invariant": q, "linking_form": f"{lf.numerator}/{lf.denominator}"}


def cmd_lens_compare(args):
    L, M = LensSpace(args.d, args.q), LensSpace(args.d, args.q2)
    he = homotopy_equivalent(L, M)
    witness = homeomorphism_witness(L, M)
    _, raw_zero = rho_difference(L, M)
    results = {
        "first": _lens_summary(L),
        "second": _lens_summary(M),
        "homotopy_equivalent": he,
        "rho_difference_zero": raw_zero,
        "homeomorphic": witness is not None,
    }
    if witness is not None:
        _, norm_zero = normalized_rho_difference(L, M, witness)
        results["witness"] = {"unit": witness.unit, "permutation": list(witness.perm),
                              "signs": list(witness.signs)}
        results["normalized_rho_difference_zero"] = norm_zero
    return _document("lens-compare", {"d": args.d, "q": list(args.q), "q2": list(args.q2)}, results)


def cmd_rho(args):
    L = LensSpace(args.d, args.q)
    rho = rho_invariant(L)
    values = []
    for j, v in sorted(rho.values.items()):
        z = complex(v)
        values.append({"j": j, **v.to_json(), "approx": [f"{z.real:.12g}", f"{z.imag:.12g}"]})
    results = {
        "lens_space": str(L),
        "normalization": "raw product of (z+1)/(z-1) over rotations; only differences are meaningful",
        "conjugation_symmetric": rho.satisfies_conjugation_symmetry(),
        "values": values,
    }
    return _document("rho", {"d": args.d, "q": list(args.q)}, results)


def _record_for(records, p):
    for r in records:
        if r.p == p:
            return r
    raise ScopeError(f"no class-group record for p={p} in the data file")


def cmd_h0(args):
    records = load_records(_data_source(args.data))
    rec = _record_for(records, args.p)
    h0 = h0_from_record(rec)
    results = {
        "p": rec.p,
        "cl_plus": rec.cl_plus.to_json(),
        "cl_minus_mod2": rec.cl_minus_mod2.to_json(),
        "h0": h0.to_json(),
        "h0_text": h0.describe(),
    }
    assumptions = [RIM_ASSUMPTION] + ([GRH_NOTE] if h0.grh_conditional else [])
    return _document("h0", {"p": args.p}, results, assumptions, _provenance(args.data))


def cmd_table1(args):
    records = load_records(_data_source(args.data))
    report = reproduce_table1(records, cross_check=not args.no_cross_check)
    return _document("table1", {"cross_check": not args.no_cross_check}, report,
                     [RIM_ASSUMPTION, GRH_NOTE], _provenance(args.data))


def cmd_hmod(args):
    return _document("hmod", {"d": args.d, "k": args.k}, hmod_report(args.d, args.k).to_json())


def cmd_validate_data(args):
    records = load_records(_data_source(args.data))
    report = validate_records(records)
    report["minus_class_numbers"] = {str(p): minus_class_number(p) for p in report["checked"]}
    return _document("validate-data", {}, report, (), _provenance(args.data))


# ---------------------------------------------------------------------------
# text tables

def _table(headers, rows) -> str:
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    line = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip()
    out = [line(headers), line(["-" * w for w in widths])]
    out += [line(r) for r in rows]
    return "\n".join(out)


def _h0_text(h: dict) -> str:
    if h["kind"] == "symbolic":
        return h["label"]
    star = "*" if h["grh_conditional"] else ""
    if h["kind"] == "interval":
        return f"{h['order_low']} <= order <= {h['order_high']}{star}"
    g = FgAbGroup.from_json(h["group"])
    return ("0" if g.is_trivial else "(" + ",".join(map(str, g.torsion)) + ")") + star


def render_table(doc: dict) -> str:
    cmd, res = doc["command"], doc["results"]
    if cmd == "classify":
        if res["kind"] == "single_class":
            body = f"A_{res['ell']}^{res['n']} = {{(T_{res['ell']})}}"
        else:
            body = _table(["d", "[q]", "rank", "H_0", "fibre bound"],
                          [[s["d"], s["q_class"], s["lattice_rank"], _h0_text(s["h0"]), s["fiber_bound"]]
                           for s in res["strata"]])
            body += f"\nstrata: {res['stratum_count']}  countably infinite: {res['countably_infinite']}"
    elif cmd == "qdk":
        body = _table(["rep", "class"], [[c[0], " ".join(map(str, c))] for c in res["classes"]])
    elif cmd == "lens-compare":
        rows = [[k, v] for k, v in res.items() if not isinstance(v, dict)]
        rows += [[f"{side}.{k}", v] for side in ("first", "second") for k, v in res[side].items()]
        body = _table(["field", "value"], rows)
    elif cmd == "rho":
        body = _table(["j", "re", "im"], [[v["j"], *v["approx"]] for v in res["values"]])
    elif cmd == "h0":
        body = _table(["p", "H_0", "rule"], [[res["p"], res["h0_text"], res["h0"]["rule"]]])
    elif cmd == "table1":
        body = _table(["p", "Cl+", "Cl-/2", "H_0"],
                      [[r["p"], r["cl_plus"], r["cl_minus_mod2"], r["h0_text"]] for r in res["rows"]])
        body += (f"\nvanishes for {res['vanishing_count']} odd primes <= {res['limit']} not listed"
                 f" ({res['vanishing_count_with_p2']} counting p = 2)")
        if res["gaps"]:
            body += "\ngaps: " + " ".join(map(str, res["gaps"]))
        for m in res["mismatches"]:
            body += f"\nMISMATCH p={m['p']}: computed {m['computed']}, expected {m['expected']}"
    elif cmd == "hmod":
        body = _table(["field", "value"], [[k, v] for k, v in res.items() if k != "b_elements"])
    elif cmd == "validate-data":
        body = _table(["p", "h^-"], [[p, h] for p, h in res["minus_class_numbers"].items()])
        for i in res["issues"]:
            body += f"\nISSUE p={i['p']}: {i['problem']}"
    else:
        body = json.dumps(res, indent=2)
    notes = [f"* {a}" for a in doc["assumptions"]]
    return "\n".join([body, *notes]) + "\n"


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lensclass", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.set_defaults(func=func)
        return p

    p = add("classify", cmd_classify, "strata of free C_ell-actions on S^1 x S^n")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--data")

    p = add("qdk", cmd_qdk, "the partition Q_d^k of units mod d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("lens-compare", cmd_lens_compare, "homotopy / homeomorphism / rho comparison")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=_int_list, required=True)
    p.add_argument("--q2", type=_int_list, required=True)

    p = add("rho", cmd_rho, "exact rho-invariant vector of a lens space")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=_int_list, required=True)

    p = add("h0", cmd_h0, "H_0(C_2; Cl_p) from the class-group data")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--data")

    p = add("table1", cmd_table1, "reproduce the class-group coinvariant table")
    p.add_argument("--data")
    p.add_argument("--no-cross-check", action="store_true",
                   help="do not compare against the published table")

    p = add("hmod", cmd_hmod, "orders in the self-equivalence group")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("validate-data", cmd_validate_data, "check a data file against the analytic h^-")
    p.add_argument("--data", required=True)
    return parser


def emit(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse(text: str) -> dict:
    return json.loads(text)


def _exit_code(doc: dict) -> int:
    res = doc["results"]
    if doc["command"] == "table1" and res["mismatches"]:
        return EXIT_DATA
    if doc["command"] == "validate-data" and not res["ok"]:
        return EXIT_DATA
    return EXIT_OK


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> tuple[int, dict | None]:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        doc = args.func(args)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_PRECONDITION, None
    except DataFileError as exc:
        print(f"data error: {exc}", file=stderr)
        return EXIT_DATA, None
    except ScopeError as exc:
        print(f"precondition violated: {exc}", file=stderr)
        return EXIT_PRECONDITION, None
    except (ConsistencyError, ArithmeticError) as exc:
        print(f"internal consistency failure: {exc}", file=stderr)
        return EXIT_INTERNAL, None
    except ValueError as exc:
        print(f"precondition violated: {exc}", file=stderr)
        return EXIT_PRECONDITION, None
    stdout.write(render_table(doc) if args.format == "table" else emit(doc))
    return _exit_code(doc), doc


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
