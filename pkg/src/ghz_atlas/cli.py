"""``ghz-atlas`` command line: enumerate, check, eigen, tables, bell.

Exit status: 0 success, 1 verification mismatch, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__, golden
from .enumerator import ClassificationResult, enumerate_classes, find_class_of
from .experiment import InvalidExperiment, invariants, parse_words, validate
from .hilbert import (
    RANK_TOL,
    NumericalError,
    achievable_vectors,
    bell_analysis,
    bell_operator,
    fix_phase,
    ghz_state,
    is_ghz_form,
    joint_eigenspace,
    violated_subset,
)
from .lhv import classify, identity_subset_basis, span_subsets
from .report import FORMATS, ReportDocument, assignment_unicode, eps_unicode

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

CACHE_ENV = "GHZ_ATLAS_CACHE"
CACHE_FORMAT = 1
MIN_QUBITS, MAX_QUBITS = 2, 4


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# Small formatting helpers

def _machine_assignment(entries: List[dict]) -> str:
    if not entries:
        return "-"
    return "; ".join(f"{d['axis']}{d['site']}={d['expr']}" for d in entries)


def _machine_certificate(cert: dict) -> str:
    return "".join(f"e{i}" for i in cert["indices"]) + f"={cert['sign']:+d}"


def verdict_detail(verdict: dict) -> str:
    """Certificate or assignment of a verdict payload, in ``e1`` notation."""
    if "certificate" in verdict:
        return _machine_certificate(verdict["certificate"])
    return _machine_assignment(verdict.get("assignment", []))


def _detail_unicode(text: str) -> str:
    if text.startswith("e"):
        return eps_unicode(text)
    return assignment_unicode(text)


def _ints(xs) -> str:
    return " ".join(str(x) for x in xs)


def _eps_text(eps: Sequence[int]) -> str:
    return " ".join(f"{v:+d}" for v in eps)


def _clean(x: float) -> float:
    return round(float(x), 12) + 0.0


def encode_state(v: np.ndarray) -> List[List[float]]:
    return [[_clean(z.real), _clean(z.imag)] for z in v]


def _state_terms(v: np.ndarray, n: int) -> str:
    terms = []
    for k, z in enumerate(v):
        if abs(z) > 1e-9:
            terms.append(f"({_clean(z.real):+.6g}{_clean(z.imag):+.6g}i)|{k:0{n}b}>")
    return " ".join(terms)


def _decomposition_json(dec) -> dict:
    d = dec.to_json()
    return {
        "u": [encode_state(np.asarray(u)) for u in dec.u],
        "v": [encode_state(np.asarray(v)) for v in dec.v],
        "theta": _clean(d["theta"]),
        "phi": _clean(d["phi"]),
    }


def _check_qubits(n: int) -> None:
    if not MIN_QUBITS <= n <= MAX_QUBITS:
        raise UsageError(f"--qubits must be between {MIN_QUBITS} and {MAX_QUBITS}, got {n}")


def _parse_eps(text: str) -> Tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--eps must be a comma-separated list of 1/-1, got {text!r}")
    if any(v not in (1, -1) for v in vals):
        raise UsageError(f"--eps entries must be 1 or -1, got {text!r}")
    return vals


def _experiment_arg(text: str):
    """Parse and validate, keeping the given element order."""
    try:
        strings = parse_words(text)
    except ValueError as exc:
        raise UsageError(str(exc))
    dup = sorted({str(p) for p in strings if strings.count(p) > 1})
    if dup:
        raise InvalidExperiment(f"repeated element {', '.join(dup)}", "duplicate", tuple(dup))
    e = validate(strings)  # InvalidExperiment is reported by main()
    return strings, e


# --------------------------------------------------------------------------
# Cache

def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ghz_atlas"


def _cache_path(n: int, size: int) -> Path:
    return cache_dir() / f"classes-n{n}-k{size}.json"


def load_cached(n: int, size: int) -> Optional[dict]:
    path = _cache_path(n, size)
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if data.get("cache_format") != CACHE_FORMAT or data.get("version") != __version__:
        return None
    result = data.get("result")
    if not isinstance(result, dict) or result.get("n") != n or result.get("size") != size:
        return None
    return result


def store_cached(n: int, size: int, result: dict) -> None:
    path = _cache_path(n, size)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"cache_format": CACHE_FORMAT, "version": __version__, "result": result}))
        tmp.replace(path)
    except OSError as exc:
        print(f"warning: could not write cache {path}: {exc}", file=sys.stderr)


def classification_payload(n: int, size: int, threads: int = 1, use_cache: bool = True) -> dict:
    if use_cache:
        hit = load_cached(n, size)
        if hit is not None:
            return hit
    res: ClassificationResult = enumerate_classes(n, size, threads=threads)
    out = res.to_json()
    out["class_count"] = res.class_count
    if use_cache:
        store_cached(n, size, out)
    return out


# --------------------------------------------------------------------------
# Commands

def cmd_enumerate(args) -> Tuple[ReportDocument, int]:
    _check_qubits(args.qubits)
    if args.size < 2:
        raise UsageError("--size must be at least 2")
    result = classification_payload(args.qubits, args.size, args.threads, not args.no_cache)
    payload = {"command": "enumerate", **result}
    doc = ReportDocument(f"Experiment classes: n={args.qubits}, size={args.size}", payload)
    rows = []
    for k, c in enumerate(result["classes"], 1):
        rows.append(
            [
                k,
                c["canonical"],
                c.get("paper_label", "-"),
                c["c"],
                _ints(c["r"]),
                _ints(c["triad_profile"]),
                c["verdict"]["kind"],
                verdict_detail(c["verdict"]),
            ]
        )
    doc.add(
        "",
        ["index", "canonical", "label", "C", "R", "triads", "verdict", "detail"],
        rows,
        {7: _detail_unicode},
    )
    nontrivial = sum(c["verdict"]["kind"] == "Nontrivial" for c in result["classes"])
    doc.notes.append(f"{len(rows)} classes, {nontrivial} nontrivial")
    return doc, EXIT_OK


def cmd_check(args) -> Tuple[ReportDocument, int]:
    strings, e = _experiment_arg(args.experiment)
    inv = invariants(strings)
    verdict = classify(strings)
    subsets = span_subsets(identity_subset_basis(strings), len(strings))
    payload = {
        "command": "check",
        "experiment": ",".join(str(p) for p in strings),
        "n": e.n,
        "size": len(e),
        "valid": True,
        "invariants": {"c": inv.c, "r": list(inv.r_by_element), "triad_profile": list(inv.triad_profile)},
        "identity_subsets": [s.to_json() for s in subsets],
        "verdict": verdict.to_json(),
    }
    if e.n <= MAX_QUBITS:
        idx, entry = find_class_of(e)
        cls = {"index": idx + 1, "canonical": str(entry.canonical)}
        if entry.labels:
            cls["paper_label"] = entry.label_text
        payload["class"] = cls

    doc = ReportDocument(f"Experiment {payload['experiment']}", payload)
    summary = [
        ["valid", "yes"],
        ["sites", e.n],
        ["elements", len(e)],
        ["C", inv.c],
        ["R", _ints(inv.r_by_element)],
        ["triads", _ints(inv.triad_profile)],
        ["verdict", verdict.kind],
    ]
    if "class" in payload:
        summary.append(["class", f"{payload['class']['index']} ({payload['class']['canonical']})"])
        summary.append(["label", payload["class"].get("paper_label", "-")])
    doc.add("Summary", ["field", "value"], summary)
    doc.add(
        "Identity subsets",
        ["elements", "product"],
        [["".join(f"e{i}" for i in s["indices"]), f"{s['sign']:+d}"] for s in payload["identity_subsets"]],
        {0: eps_unicode},
    )
    vj = payload["verdict"]
    if "certificate" in vj:
        doc.add(
            "Certificate",
            ["elements", "product"],
            [[_ints(vj["certificate"]["indices"]), f"{vj['certificate']['sign']:+d}"]],
        )
        doc.notes.append(
            "no value assignment exists: the product of eigenvalues of the certificate elements "
            "is forced to -1 while local values would give +1"
        )
    else:
        doc.add(
            "Value assignment",
            ["observable", "value"],
            [[f"{d['axis']}{d['site']}", d["expr"]] for d in vj["assignment"]],
            {0: lambda s: assignment_unicode(f"{s}=1").split(" = ")[0], 1: eps_unicode},
        )
        doc.notes.append("observables not listed take the value 1")
    return doc, EXIT_OK


def _ghz_flag(state: np.ndarray, n: int, tol: float):
    if n != 4:
        return None, None
    dec = is_ghz_form(state, max(tol, 1e-8))
    return dec is not None, dec


def cmd_eigen(args) -> Tuple[ReportDocument, int]:
    strings, e = _experiment_arg(args.experiment)
    tol = args.tol
    spec = ",".join(str(p) for p in strings)
    if args.eps is None:
        rows = []
        spaces = []
        for vec in achievable_vectors(strings, tol):
            item = {"eps": list(vec.values), "dim": vec.eigenspace_dim, "ghz": None}
            if vec.eigenspace_dim == 1:
                (state,) = joint_eigenspace(strings, vec.values, tol)
                flag, dec = _ghz_flag(state, e.n, tol)
                item["ghz"] = flag
                if dec is not None:
                    item["decomposition"] = _decomposition_json(dec)
            spaces.append(item)
            ghz = "-" if item["ghz"] is None else ("yes" if item["ghz"] else "no")
            rows.append([_eps_text(item["eps"]), item["dim"], ghz])
        payload = {
            "command": "eigen",
            "experiment": spec,
            "n": e.n,
            "eigenspaces": spaces,
            "dimension_sum": sum(s["dim"] for s in spaces),
        }
        doc = ReportDocument(f"Joint eigenspaces of {spec}", payload)
        doc.add("", ["eps", "dim", "ghz"], rows)
        doc.notes.append(f"{len(rows)} achievable eigenvalue vectors, dimensions sum to {payload['dimension_sum']}")
        return doc, EXIT_OK

    eps = _parse_eps(args.eps)
    if len(eps) != len(strings):
        raise UsageError(f"--eps has {len(eps)} entries, experiment has {len(strings)} elements")
    basis = joint_eigenspace(strings, eps, tol)
    payload = {"command": "eigen", "experiment": spec, "n": e.n, "eps": list(eps), "dim": len(basis)}
    doc = ReportDocument(f"Joint eigenspace of {spec} at eps = {_eps_text(eps)}", payload)
    if not basis:
        payload["consistent"] = False
        payload["basis"] = []
        payload["ghz"] = None
        bad = violated_subset(strings, eps)
        if bad is not None:
            payload["violated_subset"] = bad.to_json()
            idx = bad.to_json()["indices"]
            got = int(np.prod([eps[i - 1] for i in idx]))
            doc.add(
                "Violated identity subset",
                ["elements", "required", "given"],
                [["".join(f"e{i}" for i in idx), f"{bad.sign:+d}", f"{got:+d}"]],
                {0: eps_unicode},
            )
        doc.notes.append("no common eigenstate")
        return doc, EXIT_MISMATCH
    payload["consistent"] = True
    states = [fix_phase(b) for b in basis] if len(basis) == 1 else basis
    payload["basis"] = [encode_state(b) for b in states]
    rows = [[k + 1, _state_terms(b, e.n)] for k, b in enumerate(states)]
    doc.add("Basis", ["vector", "amplitudes"], rows)
    payload["ghz"] = None
    if len(basis) == 1:
        flag, dec = _ghz_flag(states[0], e.n, tol)
        payload["ghz"] = flag
        if dec is not None:
            payload["decomposition"] = _decomposition_json(dec)
            doc.add(
                "GHZ decomposition",
                ["part", "phase", "site states"],
                [
                    ["u", f"{payload['decomposition']['theta']:.6g}", " ".join(_state_terms(np.asarray(x), 1) for x in dec.u)],
                    ["v", f"{payload['decomposition']['phi']:.6g}", " ".join(_state_terms(np.asarray(x), 1) for x in dec.v)],
                ],
            )
    ghz = "-" if payload["ghz"] is None else ("yes" if payload["ghz"] else "no")
    doc.notes.append(f"dimension {len(basis)}, GHZ form: {ghz}")
    return doc, EXIT_OK


def compare_tables(tables: Dict[str, dict], threads: int = 1) -> Tuple[List[dict], List[str]]:
    """Regenerate each invariant table and compare it with ``tables``.

    Rows are matched through labels; row agreement means equal C and equal R
    multiset.  Table rows that land in an already matched class, and classes
    no row reaches, are both mismatches.
    """
    out = []
    problems: List[str] = []
    for name, table in tables.items():
        size = int(table["size"])
        res = enumerate_classes(4, size, threads=threads)
        by_label = {lab: k for k, c in enumerate(res.classes) for lab in c.labels}
        claimed: Dict[int, str] = {}
        rows = []
        for row in table["rows"]:
            label = row["label"]
            g_c, g_r = int(row["c"]), [int(x) for x in row["r"]]
            item = {"label": label, "golden_c": g_c, "golden_r": g_r}
            k = by_label.get(label)
            if k is None:
                item.update(canonical=None, c=None, r=None, status="no class")
                problems.append(f"Table {name} ({label}): no enumerated class carries this label")
                rows.append(item)
                continue
            c = res.classes[k]
            r = sorted(c.invariants.r_by_element, reverse=True)
            item.update(canonical=str(c.canonical), c=c.invariants.c, r=r)
            if k in claimed:
                item["status"] = f"same class as ({claimed[k]})"
                problems.append(f"Table {name} ({label}): same class as ({claimed[k]})")
            elif c.invariants.c != g_c or r != sorted(g_r, reverse=True):
                item["status"] = "mismatch"
                problems.append(
                    f"Table {name} ({label}): computed C={c.invariants.c} R={r}, "
                    f"table C={g_c} R={sorted(g_r, reverse=True)}"
                )
                claimed[k] = label
            else:
                item["status"] = "ok"
                claimed[k] = label
            rows.append(item)
        for k, c in enumerate(res.classes):
            if k not in claimed and not any(r["canonical"] == str(c.canonical) for r in rows):
                rows.append(
                    {
                        "label": None,
                        "golden_c": None,
                        "golden_r": None,
                        "canonical": str(c.canonical),
                        "c": c.invariants.c,
                        "r": sorted(c.invariants.r_by_element, reverse=True),
                        "status": "missing from table",
                    }
                )
                problems.append(f"Table {name}: class {c.canonical} has no row")
        if len(table["rows"]) != res.class_count:
            problems.append(f"Table {name}: {len(table['rows'])} rows, {res.class_count} classes")
        out.append(
            {
                "table": name,
                "size": size,
                "table_rows": len(table["rows"]),
                "class_count": res.class_count,
                "rows": rows,
            }
        )
    return out, problems


def cmd_tables(args) -> Tuple[ReportDocument, int]:
    try:
        tables = golden.reference_tables(args.golden)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read golden tables: {exc}")
    results, problems = compare_tables(tables, args.threads)
    payload = {"command": "tables", "match": not problems, "tables": results, "mismatches": problems}
    doc = ReportDocument("Invariant tables (n=4)", payload)
    for t in results:
        doc.add(
            f"Table {t['table']} (size {t['size']}; {t['table_rows']} rows, {t['class_count']} classes)",
            ["label", "canonical", "C", "R", "table C", "table R", "status"],
            [
                [
                    "-" if r["label"] is None else f"({r['label']})",
                    r["canonical"] or "-",
                    "-" if r["c"] is None else r["c"],
                    "-" if r["r"] is None else _ints(r["r"]),
                    "-" if r["golden_c"] is None else r["golden_c"],
                    "-" if r["golden_r"] is None else _ints(r["golden_r"]),
                    r["status"],
                ]
                for r in t["rows"]
            ],
        )
    if problems:
        doc.notes.append(f"{len(problems)} mismatches:")
        doc.notes.extend(f"  {p}" for p in problems)
    else:
        doc.notes.append("all tables match")
    return doc, EXIT_MISMATCH if problems else EXIT_OK


def cmd_bell(args) -> Tuple[ReportDocument, int]:
    rep = bell_analysis(args.tol)
    ghz = ghz_state(4)
    expectation = float(np.real(np.vdot(ghz, bell_operator() @ ghz)))
    payload = {
        "command": "bell",
        "quantum_max": _clean(rep.quantum_max),
        "degenerate": rep.degenerate,
        "maximizer_ghz": rep.ghz,
        "ghz_overlap": _clean(rep.ghz_overlap),
        "ghz_expectation": _clean(expectation),
        "classical_max": rep.classical_max,
        "printed_bound": rep.printed_bound,
        "discrepancy": rep.discrepancy,
        "maximizer": encode_state(fix_phase(rep.maximizer)),
    }
    if rep.discrepancy:
        payload["note"] = (
            f"the stated bound {rep.printed_bound} is the quantum maximum; "
            f"local value assignments reach at most {rep.classical_max}"
        )
    doc = ReportDocument("Bell operator", payload)
    doc.add(
        "",
        ["quantity", "value"],
        [
            ["quantum_max", f"{payload['quantum_max']:.12g}"],
            ["degenerate", "yes" if rep.degenerate else "no"],
            ["maximizer_ghz", "yes" if rep.ghz else "no"],
            ["ghz_overlap", f"{payload['ghz_overlap']:.12g}"],
            ["ghz_expectation", f"{payload['ghz_expectation']:.12g}"],
            ["classical_max", rep.classical_max],
            ["printed_bound", rep.printed_bound],
        ],
    )
    if "note" in payload:
        doc.notes.append("note: " + payload["note"])
    return doc, EXIT_OK


# --------------------------------------------------------------------------
# Argument parsing

def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out-dir", type=Path, help="also write the report into this directory")

    parser = argparse.ArgumentParser(prog="ghz-atlas", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list experiment classes of one size")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check", parents=[common], help="validate and classify one experiment")
    p.add_argument("experiment", help='comma-separated words, e.g. "xxxx,yyxx,xxyy"')
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eigen", parents=[common], help="joint eigenspaces of an experiment")
    p.add_argument("experiment")
    p.add_argument("--eps", help="comma-separated eigenvalues, e.g. -1,1,1,1,1")
    p.add_argument("--tol", type=_positive_float, default=RANK_TOL)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("tables", parents=[common], help="regenerate and diff the invariant tables")
    p.add_argument("--golden", type=Path, help="alternative golden table file")
    p.add_argument("--threads", type=_positive_int, default=1)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("bell", parents=[common], help="Bell operator bounds")
    p.add_argument("--tol", type=_positive_float, default=RANK_TOL)
    p.set_defaults(func=cmd_bell)
    return parser


_EXT = {"text": "txt", "json": "json", "csv": "csv"}


def _out_stem(args) -> str:
    if args.command == "enumerate":
        return f"enumerate-n{args.qubits}-k{args.size}"
    return args.command


def _join_eps(argv: Sequence[str]) -> List[str]:
    """Let ``--eps -1,1`` through: argparse would read ``-1,1`` as an option."""
    out: List[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--eps":
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
                break
            out.append(f"--eps={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_eps(sys.argv[1:] if argv is None else argv))
    try:
        doc, code = args.func(args)
    except UsageError as exc:
        print(f"ghz-atlas {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidExperiment as exc:
        print(f"ghz-atlas {args.command}: error({exc.rule}): {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"ghz-atlas {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    text = doc.render(args.format)
    sys.stdout.write(text)
    if args.out_dir is not None:
        try:
            args.out_dir.mkdir(parents=True, exist_ok=True)
            (args.out_dir / f"{_out_stem(args)}.{_EXT[args.format]}").write_text(text)
        except OSError as exc:
            print(f"ghz-atlas {args.command}: cannot write report: {exc}", file=sys.stderr)
            return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
