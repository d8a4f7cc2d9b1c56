"""Wire formats: matrix JSON documents, canonical report serialization, CSV.

Floats are written with 17 significant decimal digits, which round-trips
every finite double bit-for-bit.  Canonical serialization is deterministic:
fixed field order, fixed separators, LF newlines, and no wall-clock content
(a probe's elapsed time is diagnostic output, never part of the document).
"""

import io
import json
import math

import numpy as np

from .cone import DnVerdict
from .errors import ParseError
from .probe import ExponentEstimate, ProbeReport, Witness
from .scans import SignScanResult, Violation
from .spectral import symmetrize
from .verify import SuiteReport

SYMMETRY_INPUT_TOL = 1e-12


def format_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ParseError(f"non-finite value {x} cannot be serialized")
    if x == int(x) and abs(x) < 1e16:
        return format(x, ".1f")
    return format(x, ".17g")


def _emit(obj, out):
    if obj is None:
        out.write("null")
    elif obj is True:
        out.write("true")
    elif obj is False:
        out.write("false")
    elif isinstance(obj, (int, np.integer)):
        out.write(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.write(format_float(obj))
    elif isinstance(obj, str):
        out.write(json.dumps(obj))
    elif isinstance(obj, dict):
        out.write("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.write(", ")
            out.write(json.dumps(str(k)))
            out.write(": ")
            _emit(v, out)
        out.write("}")
    elif isinstance(obj, (list, tuple)):
        out.write("[")
        for i, v in enumerate(obj):
            if i:
                out.write(", ")
            _emit(v, out)
        out.write("]")
    else:
        raise ParseError(f"cannot serialize object of type {type(obj).__name__}")


def dumps_canonical(obj):
    out = io.StringIO()
    _emit(obj, out)
    out.write("\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# matrices

def matrix_to_doc(a):
    a = np.asarray(a, dtype=np.float64)
    return {"n": int(a.shape[0]), "rows": [[float(v) for v in row] for row in a]}


def serialize_matrix(a):
    return dumps_canonical(matrix_to_doc(a))


def matrix_from_doc(doc, warn=None):
    """Matrix from its wire document; asymmetry beyond tolerance is an error,
    asymmetry within tolerance is symmetrized with a warning."""
    if not isinstance(doc, dict) or "n" not in doc or "rows" not in doc:
        raise ParseError('matrix document must be {"n": int, "rows": [[...], ...]}')
    try:
        n = int(doc["n"])
        a = np.asarray(doc["rows"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix document: {exc}") from None
    if a.ndim != 2 or a.shape != (n, n):
        raise ParseError(f"rows have shape {a.shape}, expected ({n}, {n})")
    gap = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    sym = symmetrize(a, asym_tol=SYMMETRY_INPUT_TOL)
    if gap > 0 and warn is not None:
        warn(f"input asymmetry {gap:.3e} within tolerance; symmetrized")
    return sym


def parse_matrix(text, warn=None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return matrix_from_doc(doc, warn=warn)


def load_matrix(path, warn=None):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix(fh.read(), warn=warn)


# ---------------------------------------------------------------------------
# report documents (canonical order, no volatile fields)

def verdict_to_doc(v: DnVerdict):
    return {
        "is_dn": v.is_dn,
        "min_eigenvalue": v.min_eigenvalue,
        "min_entry": v.min_entry,
        "psd_tol": v.psd_tol,
        "entry_tol": v.entry_tol,
    }


def scan_to_doc(res: SignScanResult):
    fv = None
    if res.first_violation is not None:
        fv = {
            "order": res.first_violation.order,
            "x": res.first_violation.x,
            "value": res.first_violation.value,
        }
    return {
        "all_nonneg": res.all_nonneg,
        "first_violation": fv,
        "orders_checked": res.orders_checked,
        "grid": res.grid,
    }


def scan_from_doc(doc):
    fv = doc.get("first_violation")
    violation = None if fv is None else Violation(int(fv["order"]), float(fv["x"]), float(fv["value"]))
    return SignScanResult(
        all_nonneg=bool(doc["all_nonneg"]),
        first_violation=violation,
        orders_checked=int(doc["orders_checked"]),
        grid=str(doc["grid"]),
    )


def witness_to_doc(w: Witness):
    return {
        "matrix": matrix_to_doc(w.matrix),
        "entry": [int(w.entry[0]), int(w.entry[1])],
        "value": w.value,
    }


def report_to_doc(rep: ProbeReport):
    return {
        "n": rep.n,
        "func": rep.func,
        "verdict": rep.verdict,
        "witness": None if rep.witness is None else witness_to_doc(rep.witness),
        "trials": rep.trials,
        "seed": rep.seed,
        "strategy": rep.strategy,
    }


def report_from_doc(doc):
    wdoc = doc.get("witness")
    witness = None
    if wdoc is not None:
        witness = Witness(
            matrix=matrix_from_doc(wdoc["matrix"]),
            entry=(int(wdoc["entry"][0]), int(wdoc["entry"][1])),
            value=float(wdoc["value"]),
        )
    return ProbeReport(
        n=int(doc["n"]),
        func=dict(doc["func"]),
        verdict=str(doc["verdict"]),
        witness=witness,
        trials=int(doc["trials"]),
        seed=int(doc["seed"]),
        strategy=str(doc["strategy"]),
        elapsed=0.0,
    )


def estimate_to_doc(est: ExponentEstimate):
    return {
        "n": est.n,
        "family": est.family,
        "alpha_lo": est.alpha_lo,
        "alpha_hi": est.alpha_hi,
        "resolution": est.resolution,
        "reports": [
            {"alpha": alpha, "report": report_to_doc(rep)} for alpha, rep in est.reports
        ],
    }


def suite_to_doc(rep: SuiteReport):
    return {
        "n_max": rep.n_max,
        "seed": rep.seed,
        "draws": rep.draws,
        "all_passed": rep.all_passed,
        "checks": [
            {
                "name": c.name,
                "order": c.order,
                "passed": c.passed,
                "margin": c.margin if math.isfinite(c.margin) else -1e308,
                "detail": c.detail,
            }
            for c in rep.checks
        ],
    }


# ---------------------------------------------------------------------------
# CSV (fixed header per report type, LF newlines, 17-digit floats)

def _csv_cell(v):
    if isinstance(v, str):
        if any(ch in v for ch in ',"\n'):
            return '"' + v.replace('"', '""') + '"'
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    if v is None:
        return ""
    raise ParseError(f"cannot write CSV cell of type {type(v).__name__}")


def _csv_lines(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


PROBE_CSV_HEADER = (
    "n", "kind", "alpha", "beta", "u", "verdict", "trials", "seed",
    "witness_i", "witness_j", "witness_value",
)


def _func_columns(func):
    return (
        func.get("kind", ""),
        func.get("alpha", None),
        func.get("beta", None),
        func.get("u", None),
    )


def report_to_csv(rep: ProbeReport):
    kind, alpha, beta, u = _func_columns(rep.func)
    w = rep.witness
    row = (
        rep.n, kind, alpha, beta, u, rep.verdict, rep.trials, rep.seed,
        None if w is None else w.entry[0],
        None if w is None else w.entry[1],
        None if w is None else w.value,
    )
    return _csv_lines(PROBE_CSV_HEADER, [row])


BRACKET_CSV_HEADER = (
    "n", "family", "beta", "u", "resolution", "alpha_lo", "alpha_hi",
)


def estimate_to_csv(est: ExponentEstimate):
    fam = est.family
    row = (
        est.n, fam.get("kind", ""), fam.get("beta", None), fam.get("u", None),
        est.resolution, est.alpha_lo, est.alpha_hi,
    )
    return _csv_lines(BRACKET_CSV_HEADER, [row])


VERIFY_CSV_HEADER = ("check", "order", "passed", "margin", "detail")


def suite_to_csv(rep: SuiteReport):
    rows = [
        (c.name, c.order, c.passed, c.margin if math.isfinite(c.margin) else -1e308, c.detail)
        for c in rep.checks
    ]
    return _csv_lines(VERIFY_CSV_HEADER, rows)


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
