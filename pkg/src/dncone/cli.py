"""Command-line front end.

Exit codes:
  0  computation succeeded (for ``verify``: every check passed)
  1  a claimed-true property failed verification (failed checks, an
     inconsistent or stalled bracket)
  2  invalid input or configuration
  3  internal numerical failure (non-convergence, projection or quadrature
     stall, overflow)

All randomness flows from --seed (fallback: the DNCONE_SEED environment
variable, then 0); repeated runs with the same seed write byte-identical
report files.
"""

import argparse
import os
import sys

from . import serialize
from .cone import check_dn
from .divdiff import divided_differences
from .errors import (
    BracketStall,
    DnConeError,
    DomainError,
    InconsistentBracket,
    NonConvergence,
    ParseError,
    ProjectionStall,
    QuadratureStall,
    SamplerStall,
    SingularShift,
)
from .funcs import ExpFamily, PowerShift, PurePower, Tabulated, lemma_derivative
from .matfuncs import QuadratureSpec, hadamard_apply, quadrature_power, resolvent_product, spectral_apply
from .probe import AlphaFamily, bracket_exponent, find_violation
from .scans import GridSpec, derivative_sign_scan, mw_preserves
from .verify import VerifyTolerances, verify_theorem_suite

_CONFIG_ERRORS = (DomainError, ParseError, ValueError)
_NUMERIC_ERRORS = (NonConvergence, SingularShift, ProjectionStall, SamplerStall,
                   QuadratureStall, OverflowError)


def _seed_default():
    env = os.environ.get("DNCONE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"DNCONE_SEED must be an integer, got {env!r}") from None
    return 0


def _parse_floats(text):
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise DomainError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _build_func(args):
    kind = getattr(args, "kind", None) or "power"
    if kind == "power":
        if args.alpha is None:
            raise DomainError("--alpha is required for kind=power")
        if getattr(args, "beta", None) is not None:
            return PowerShift(args.alpha, args.beta, args.u if args.u is not None else 1.0)
        return PurePower(args.alpha)
    if kind == "powershift":
        if args.alpha is None or args.beta is None:
            raise DomainError("--alpha and --beta are required for kind=powershift")
        return PowerShift(args.alpha, args.beta, args.u if args.u is not None else 1.0)
    if kind == "exp":
        return ExpFamily.exp()
    if kind == "cosh":
        return ExpFamily.cosh()
    if kind == "tabulated":
        if not args.nodes or not args.values:
            raise DomainError("--nodes and --values are required for kind=tabulated")
        return Tabulated(tuple(_parse_floats(args.nodes)), tuple(_parse_floats(args.values)))
    raise DomainError(f"unknown function kind {kind!r}")


def _emit(args, text):
    if getattr(args, "output", None):
        serialize.write_text(args.output, text)
    else:
        sys.stdout.write(text)


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _load_matrix_arg(args):
    return serialize.load_matrix(args.matrix, warn=_warn)


def _add_func_args(p, kinds=("power", "powershift", "exp", "cosh", "tabulated")):
    p.add_argument("--kind", choices=kinds, default="power")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--u", type=float, default=None)
    p.add_argument("--nodes", default=None, help="comma-separated nodes (tabulated)")
    p.add_argument("--values", default=None, help="comma-separated values (tabulated)")


def _cmd_check_dn(args):
    a = _load_matrix_arg(args)
    v = check_dn(a, psd_tol=args.psd_tol, entry_tol=args.entry_tol)
    _emit(args, serialize.dumps_canonical(serialize.verdict_to_doc(v)))
    return 0


def _cmd_power(args):
    a = _load_matrix_arg(args)
    f = _build_func(args)
    fa = spectral_apply(a, f)
    doc = {
        "matrix": serialize.matrix_to_doc(fa),
        "verdict": serialize.verdict_to_doc(check_dn(fa, psd_tol=args.psd_tol, entry_tol=args.entry_tol)),
    }
    _emit(args, serialize.dumps_canonical(doc))
    return 0


def _cmd_hpower(args):
    a = _load_matrix_arg(args)
    f = _build_func(args)
    fa = hadamard_apply(a, f)
    doc = {
        "matrix": serialize.matrix_to_doc(fa),
        "verdict": serialize.verdict_to_doc(check_dn(fa, psd_tol=args.psd_tol, entry_tol=args.entry_tol)),
    }
    _emit(args, serialize.dumps_canonical(doc))
    return 0


def _cmd_divdiff(args):
    f = _build_func(args)
    nodes = _parse_floats(args.at)
    table = divided_differences(f, nodes)
    doc = {
        "nodes": [float(v) for v in table.nodes],
        "coefficients": [float(v) for v in table.coefficients()],
        "table": [
            [float(table.table[i, j]) for j in range(table.order + 1 - i)]
            for i in range(table.order + 1)
        ],
    }
    _emit(args, serialize.dumps_canonical(doc))
    return 0


def _cmd_lemma_deriv(args):
    value = lemma_derivative(args.alpha, args.beta, args.u, args.order, args.x)
    _emit(args, serialize.dumps_canonical({"value": value}))
    return 0


def _cmd_scan(args):
    f = _build_func(args)
    res = derivative_sign_scan(f, args.n, grid=_grid_from_args(args))
    _emit(args, serialize.dumps_canonical(serialize.scan_to_doc(res)))
    return 0


def _cmd_mw(args):
    f = _build_func(args)
    res = mw_preserves(f, args.n, node_budget=args.node_budget, seed=args.seed)
    _emit(args, serialize.dumps_canonical(serialize.scan_to_doc(res)))
    return 0


def _cmd_resolvent(args):
    a = _load_matrix_arg(args)
    r = resolvent_product(a, args.p, args.u)
    doc = {
        "matrix": serialize.matrix_to_doc(r),
        "verdict": serialize.verdict_to_doc(check_dn(r, psd_tol=args.psd_tol, entry_tol=args.entry_tol)),
    }
    _emit(args, serialize.dumps_canonical(doc))
    return 0


def _cmd_quadpower(args):
    a = _load_matrix_arg(args)
    spec = QuadratureSpec.for_exponent(args.q, segments=args.segments, rel_tol=args.rel_tol)
    out = quadrature_power(a, spec, solve_mode=args.solve_mode)
    _emit(args, serialize.dumps_canonical({"matrix": serialize.matrix_to_doc(out)}))
    return 0


def _cmd_find_violation(args):
    f = _build_func(args)
    rep = find_violation(args.n, f, budget=args.budget, seed=args.seed,
                         entry_tol=args.entry_tol, jobs=args.jobs)
    if args.format == "csv":
        _emit(args, serialize.report_to_csv(rep))
    else:
        _emit(args, serialize.dumps_canonical(serialize.report_to_doc(rep)))
    print(f"{rep.verdict} after {rep.trials} trials ({rep.elapsed:.2f}s)", file=sys.stderr)
    return 0


def _cmd_bracket(args):
    if args.family == "power":
        family = AlphaFamily(kind="power")
    else:
        family = AlphaFamily(kind="power_shift", beta=args.beta if args.beta is not None else 1.0,
                             u=args.u if args.u is not None else 1.0)
    est = bracket_exponent(args.n, family, resolution=args.resolution,
                           budget_per_alpha=args.budget, seed=args.seed,
                           entry_tol=args.entry_tol)
    if args.format == "csv":
        _emit(args, serialize.estimate_to_csv(est))
    else:
        _emit(args, serialize.dumps_canonical(serialize.estimate_to_doc(est)))
    print(f"bracket [{est.alpha_lo:.6g}, {est.alpha_hi:.6g}] at resolution {est.resolution:g}",
          file=sys.stderr)
    return 0


def _cmd_verify(args):
    tol = VerifyTolerances(psd_tol=args.psd_tol, entry_tol=args.entry_tol)
    rep = verify_theorem_suite(args.n_max, seed=args.seed, draws=args.draws, tol=tol)
    if args.format == "csv":
        _emit(args, serialize.suite_to_csv(rep))
    else:
        _emit(args, serialize.dumps_canonical(serialize.suite_to_doc(rep)))
    for c in rep.checks:
        status = "pass" if c.passed else "FAIL"
        order = f" n={c.order}" if c.order else ""
        print(f"[{status}] {c.name}{order}: margin {c.margin:.3e} {c.detail}", file=sys.stderr)
    return 0 if rep.all_passed else 1


def _grid_from_args(args):
    if args.grid_lo is None and args.grid_hi is None:
        return None
    spec = GridSpec()
    return GridSpec(
        log_lo=args.grid_lo if args.grid_lo is not None else spec.log_lo,
        log_hi=args.grid_hi if args.grid_hi is not None else spec.log_hi,
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dncone",
        description="Matrix functions on the doubly nonnegative cone: membership "
        "checks, preservation scans, and critical-exponent probes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    seed_default = None  # resolved after parsing so DNCONE_SEED is honored

    def common(p, fmt=False):
        p.add_argument("--seed", type=int, default=seed_default)
        p.add_argument("--output", "-o", default=None, help="write the report to this path")
        p.add_argument("--psd-tol", dest="psd_tol", type=float, default=1e-10)
        p.add_argument("--entry-tol", dest="entry_tol", type=float, default=1e-10)
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("check-dn", help="DN membership verdict for a matrix file")
    p.add_argument("--matrix", required=True)
    common(p)
    p.set_defaults(fn=_cmd_check_dn)

    p = sub.add_parser("power", help="spectral f(A) plus its DN verdict")
    p.add_argument("--matrix", required=True)
    _add_func_args(p)
    common(p)
    p.set_defaults(fn=_cmd_power)

    p = sub.add_parser("hpower", help="entrywise f[A] plus its DN verdict")
    p.add_argument("--matrix", required=True)
    _add_func_args(p)
    common(p)
    p.set_defaults(fn=_cmd_hpower)

    p = sub.add_parser("divdiff", help="divided-difference table over given nodes")
    _add_func_args(p)
    p.add_argument("--at", required=True, help="comma-separated evaluation nodes")
    common(p)
    p.set_defaults(fn=_cmd_divdiff)

    p = sub.add_parser("lemma-deriv", help="closed-form derivative of x^a (x+u)^-b")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    common(p)
    p.set_defaults(fn=_cmd_lemma_deriv)

    p = sub.add_parser("scan", help="derivative sign scan of f through order n-1")
    _add_func_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid-lo", type=float, default=None)
    p.add_argument("--grid-hi", type=float, default=None)
    common(p)
    p.set_defaults(fn=_cmd_scan)

    p = sub.add_parser("mw", help="cone-preservation predicate for f at order n")
    _add_func_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--node-budget", dest="node_budget", type=int, default=2000)
    common(p)
    p.set_defaults(fn=_cmd_mw)

    p = sub.add_parser("resolvent", help="A^p (A + uI)^{-1} plus its DN verdict")
    p.add_argument("--matrix", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--u", type=float, required=True)
    common(p)
    p.set_defaults(fn=_cmd_resolvent)

    p = sub.add_parser("quadpower", help="A^q by the resolvent integral")
    p.add_argument("--matrix", required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--segments", type=int, default=4)
    p.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-8)
    p.add_argument("--solve-mode", dest="solve_mode", choices=("eigen", "lu"), default="eigen")
    common(p)
    p.set_defaults(fn=_cmd_quadpower)

    p = sub.add_parser("find-violation", help="search DN matrices for f(A) with a negative entry")
    _add_func_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    common(p, fmt=True)
    p.set_defaults(fn=_cmd_find_violation)

    p = sub.add_parser("bracket", help="two-sided bracket of the critical exponent")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", choices=("power", "powershift"), default="power")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--u", type=float, default=None)
    p.add_argument("--resolution", type=float, default=0.05)
    p.add_argument("--budget", type=int, default=None)
    common(p, fmt=True)
    p.set_defaults(fn=_cmd_bracket)

    p = sub.add_parser("verify", help="run the full invariant battery")
    p.add_argument("--n-max", dest="n_max", type=int, default=4)
    p.add_argument("--draws", type=int, default=200)
    common(p, fmt=True)
    p.set_defaults(fn=_cmd_verify)

    return parser


def run_cli(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed a message; normalize its failure code to 2
        return 0 if exc.code in (0, None) else 2
    try:
        if getattr(args, "seed", None) is None:
            args.seed = _seed_default()
        if getattr(args, "jobs", None) is not None and args.jobs < 1:
            raise DomainError("--jobs must be >= 1")
        # negative tolerances are misconfiguration, but they must surface as
        # failed verdicts/checks, never as crashes
        return args.fn(args)
    except (InconsistentBracket, BracketStall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DnConeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
