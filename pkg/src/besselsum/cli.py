"""Command-line front end: evaluate, compare, sweep, selfcheck.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 comparison or
selfcheck failure.  Results go to stdout; diagnostics and machine-readable
error records go to stderr.  Numbers are printed with shortest round-trip
precision (17 significant digits suffice to reparse them bit-exactly).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import random
import sys
from dataclasses import dataclass

from .errors import BesselSumError, DomainError, UsageError
from .kernel import digamma, gamma, zeta, zeta_sign_log
from .hypergeo import FmSpec, d_r, f_m, gauss_2f1
from .oracle import direct_sum
from .series_jj import (
    classify_theta,
    coeff_a_m,
    s_alternating,
    s_jj,
)
from .series_modified import classify_poles, _is_mu2_special, evaluate_modified, s_modified_alternating
from .types import (
    EvalResult,
    Method,
    SeriesKind,
    SeriesParams,
    TermLedger,
    TruncationPolicy,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_COMPARE = 3

_ENV_MAX_TERMS = "BESSELSUM_MAX_TERMS"

_CSV_FIELDS = [
    "kind", "mu", "nu", "alpha", "a", "b",
    "theta", "theta_class", "method", "value", "abs_err_est", "terms", "warnings",
]


@dataclass
class SweepAxis:
    name: str
    start: float
    stop: float
    count: int
    log: bool


@dataclass
class RunConfig:
    """One fully resolved invocation."""

    command: str
    kind: SeriesKind | None = None
    params: SeriesParams | None = None
    method: str = "auto"
    policy: TruncationPolicy = TruncationPolicy()
    n_max: int = 1_000_000
    tol: float = 1e-9
    sweep_axis: SweepAxis | None = None
    output: str = "human"
    seed: int | None = None
    ledger_path: str | None = None

    def __post_init__(self):
        if (self.command == "sweep") != (self.sweep_axis is not None):
            raise UsageError("sweep requires an axis; other commands accept none")
        if self.sweep_axis is not None and self.sweep_axis.count < 2:
            raise UsageError("sweep needs count >= 2")


# ----------------------------------------------------------------------
# evaluation dispatch
# ----------------------------------------------------------------------

def _expansion_eval(kind, p, policy, ledger=None) -> EvalResult:
    if kind is SeriesKind.JJ:
        return s_jj(p, policy, ledger)
    if kind is SeriesKind.JJ_ALT:
        return s_alternating(p, policy)
    if kind is SeriesKind.K1:
        return evaluate_modified(1, p, policy, ledger)
    if kind is SeriesKind.K1_ALT:
        return s_modified_alternating(1, p, policy)
    if kind is SeriesKind.K2:
        return evaluate_modified(2, p, policy, ledger)
    return s_modified_alternating(2, p, policy)


def _oracle_eval(kind, p, n_max, policy) -> EvalResult:
    rep = direct_sum(kind, p, n_max, policy)
    warns = ["oracle: heuristic tail bound (no analytic envelope applies)"] if rep.heuristic else []
    return EvalResult(rep.value, rep.tail_bound, rep.n_terms, Method.DIRECT_ORACLE, warns)


def _evaluate(kind, p, method, policy, n_max, err_stream, ledger=None) -> EvalResult:
    if method == "expansion":
        return _expansion_eval(kind, p, policy, ledger)
    if method == "oracle":
        return _oracle_eval(kind, p, n_max, policy)
    try:
        res = _expansion_eval(kind, p, policy, ledger)
        print("auto: selected expansion (domain conditions hold)", file=err_stream)
        return res
    except DomainError as exc:
        print(f"auto: expansion unavailable ({exc}); selected oracle", file=err_stream)
        return _oracle_eval(kind, p, n_max, policy)


def _theta_fields(kind: SeriesKind, p: SeriesParams) -> tuple[float, str]:
    if kind.base is SeriesKind.JJ:
        tc = classify_theta(p)
        label = tc.kind.value if tc.N is None else f"{tc.kind.value}(N={tc.N})"
        return p.theta, label
    lat = classify_poles(p)
    if lat.all_simple:
        label = "all-simple"
    elif _is_mu2_special(p):
        label = "mu2-treble"
    else:
        label = "collision"
    return p.theta, label


def _row(kind: SeriesKind, p: SeriesParams, res: EvalResult) -> dict:
    theta, tclass = _theta_fields(kind, p)
    return {
        "kind": kind.value,
        "mu": repr(p.mu),
        "nu": repr(p.nu),
        "alpha": repr(p.alpha),
        "a": repr(p.a),
        "b": repr(p.b),
        "theta": repr(theta),
        "theta_class": tclass,
        "method": res.method.value,
        "value": repr(res.value),
        "abs_err_est": repr(res.abs_err_est),
        "terms": str(res.terms_used),
        "warnings": ";".join(res.warnings),
    }


def _emit_rows(rows, output, out) -> None:
    if output == "csv":
        writer = csv.DictWriter(out, fieldnames=_CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    elif output == "json":
        out.write(json.dumps(rows, indent=2))
        out.write("\n")
    else:
        for row in rows:
            for key in _CSV_FIELDS:
                out.write(f"{key:12s}: {row[key]}\n")
            out.write("\n")


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------

def _cmd_eval(cfg: RunConfig, out, err) -> int:
    ledger = TermLedger() if cfg.ledger_path else None
    res = _evaluate(cfg.kind, cfg.params, cfg.method, cfg.policy, cfg.n_max, err, ledger)
    _emit_rows([_row(cfg.kind, cfg.params, res)], cfg.output, out)
    if ledger is not None:
        if res.method is Method.DIRECT_ORACLE:
            print("ledger: not recorded (oracle path has no residue terms)", file=err)
        else:
            with open(cfg.ledger_path, "w") as fh:
                ledger.write_csv(fh)
    return EXIT_OK


def _cmd_compare(cfg: RunConfig, out, err) -> int:
    res_e = _evaluate(cfg.kind, cfg.params, "expansion", cfg.policy, cfg.n_max, err)
    res_o = _evaluate(cfg.kind, cfg.params, "oracle", cfg.policy, cfg.n_max, err)
    abs_diff = abs(res_e.value - res_o.value)
    rel_diff = abs_diff / max(abs(res_o.value), 5e-324)
    ok = abs_diff <= cfg.tol
    rows = [_row(cfg.kind, cfg.params, res_e), _row(cfg.kind, cfg.params, res_o)]
    _emit_rows(rows, cfg.output, out)
    verdict = "PASS" if ok else "FAIL"
    out.write(
        f"compare: abs_diff={abs_diff!r} rel_diff={rel_diff!r} tol={cfg.tol!r} {verdict}\n"
    )
    return EXIT_OK if ok else EXIT_COMPARE


def _sweep_values(axis: SweepAxis) -> list[float]:
    if axis.log:
        if axis.start <= 0.0 or axis.stop <= 0.0:
            raise UsageError("log-scale sweep needs positive endpoints")
        lo, hi = math.log(axis.start), math.log(axis.stop)
        return [math.exp(lo + (hi - lo) * i / (axis.count - 1)) for i in range(axis.count)]
    return [
        axis.start + (axis.stop - axis.start) * i / (axis.count - 1)
        for i in range(axis.count)
    ]


def _cmd_sweep(cfg: RunConfig, out, err) -> int:
    axis = cfg.sweep_axis
    rows = []
    base = cfg.params
    for v in _sweep_values(axis):
        fields = {
            "mu": base.mu, "nu": base.nu, "alpha": base.alpha, "a": base.a, "b": base.b,
        }
        fields[axis.name] = v
        p = SeriesParams(**fields)
        res = _evaluate(cfg.kind, p, cfg.method, cfg.policy, cfg.n_max, err)
        rows.append(_row(cfg.kind, p, res))
    _emit_rows(rows, cfg.output if cfg.output != "human" else "csv", out)
    return EXIT_OK


def _cmd_selfcheck(cfg: RunConfig, out, err) -> int:
    rng = random.Random(cfg.seed if cfg.seed is not None else 0)
    groups: list[tuple[str, int, int]] = []

    def check(name, pairs, tol):
        bad = sum(1 for got, want in pairs if not abs(got - want) <= tol * max(1.0, abs(want)))
        groups.append((name, len(pairs) - bad, len(pairs)))

    xs = [rng.uniform(0.1, 40.0) for _ in range(200)]
    check("gamma recurrence", [(gamma(x + 1.0) / gamma(x), x) for x in xs], 1e-13)
    check("digamma recurrence", [(digamma(x + 1.0) - digamma(x), 1.0 / x) for x in xs], 1e-12)
    rt = []
    for s in [-9.5 + k for k in range(10)]:
        lhs = zeta(s)
        rhs = (
            2.0**s * math.pi ** (s - 1.0) * math.sin(0.5 * math.pi * s)
            * gamma(1.0 - s) * zeta(1.0 - s)
        )
        rt.append((lhs, rhs))
    check("zeta functional equation", rt, 1e-12)
    check("zeta trivial zeros", [(zeta(-2.0 * m), 0.0) for m in range(1, 11)], 0.0)
    pairs = []
    for _ in range(25):
        p = SeriesParams(rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0.3, 3.7), 1.0, 1.0)
        if abs(p.theta - round(p.theta)) < 1e-3:
            continue
        for m in range(3, 9):
            pairs.append((coeff_a_m(m, p), _selfcheck_a_direct(m, p)))
    check("A_m dual forms", pairs, 1e-12)
    pairs = []
    for N in range(1, 12):
        for r in range(1, N + 1):
            mu = rng.choice([0.0, 0.5, 1.0, 2.0, 7.3])
            psi_form = math.factorial(r) * (
                digamma(N + 1.0) + digamma(N + 1.0 + mu)
                - digamma(N + 1.0 - r) - digamma(N + 1.0 + mu - r)
            )
            pairs.append((d_r(r, N, mu), psi_form))
    check("D_r dual forms", pairs, 1e-12)
    pairs = []
    for _ in range(50):
        m = rng.randint(0, 20)
        mus = rng.uniform(-2.0, 2.0)
        nu = rng.uniform(0.0, 2.0)
        chi = rng.uniform(-1.0, 1.0)
        pairs.append((f_m(FmSpec(m, mus, nu, chi)), gauss_2f1(-m, -m - mus, 1.0 + nu, chi)))
    check("F_m vs direct 2F1", pairs, 1e-12)

    spots = [
        (SeriesKind.JJ, SeriesParams(0.5, 0.5, 2.5, 1.2, 0.7)),
        (SeriesKind.K1, SeriesParams(0.5, 0.25, 0.8, 1.2, 0.9)),
        (SeriesKind.K2, SeriesParams(1.5, 0.5, 1.0, 2.0, 1.0)),
        (SeriesKind.JJ_ALT, SeriesParams(0.0, 0.0, 2.0, 0.7, 0.7)),
    ]
    pairs = []
    for kind, p in spots:
        res = _expansion_eval(kind, p, cfg.policy)
        rep = direct_sum(kind, p, 400_000, cfg.policy)
        pairs.append((res.value, rep.value))
    check("expansion vs oracle spots", pairs, 1e-6)

    failed = 0
    for name, good, n in groups:
        status = "PASS" if good == n else "FAIL"
        if good != n:
            failed += 1
        out.write(f"selfcheck {name}: {status} ({good}/{n})\n")
    out.write(f"selfcheck: {len(groups) - failed}/{len(groups)} groups passed\n")
    return EXIT_OK if failed == 0 else EXIT_COMPARE


def _selfcheck_a_direct(m: int, p: SeriesParams) -> float:
    th = p.theta
    lg = (
        math.lgamma(1.0 + p.mu + p.nu + 2.0 * m)
        - math.lgamma(m + 1.0)
        - math.lgamma(1.0 + p.mu + m)
        - math.lgamma(1.0 + p.nu + m)
        - math.lgamma(1.0 + p.mu + p.nu + m)
    )
    return (-1.0) ** m * math.exp(lg) * zeta(th - 2.0 * m)


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="besselsum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_params=True):
        if with_params:
            sp.add_argument("--kind", required=True, choices=[k.value for k in SeriesKind])
            sp.add_argument("--mu", type=float, required=True)
            sp.add_argument("--nu", type=float, required=True)
            sp.add_argument("--alpha", type=float, required=True)
            sp.add_argument("--a", type=float, required=True)
            sp.add_argument("--b", type=float, required=True)
        sp.add_argument("--rel-tol", type=float, default=None)
        sp.add_argument("--max-terms", type=int, default=None)
        sp.add_argument("--nmax", type=int, default=1_000_000,
                        help="term budget for the direct-summation oracle")
        sp.add_argument("--output", choices=["human", "csv", "json"], default="human")

    sp_eval = sub.add_parser("eval", help="evaluate one series")
    add_common(sp_eval)
    sp_eval.add_argument("--method", choices=["auto", "expansion", "oracle"], default="auto")
    sp_eval.add_argument("--ledger", default=None, help="write the per-term ledger CSV here")

    sp_cmp = sub.add_parser("compare", help="expansion vs oracle with PASS/FAIL verdict")
    add_common(sp_cmp)
    sp_cmp.add_argument("--tol", type=float, default=1e-9)

    sp_sweep = sub.add_parser("sweep", help="evaluate along one parameter axis")
    add_common(sp_sweep)
    sp_sweep.add_argument("--method", choices=["auto", "expansion", "oracle"], default="auto")
    sp_sweep.add_argument("--axis", required=True, choices=["mu", "nu", "alpha", "a", "b"])
    sp_sweep.add_argument("--from", dest="sweep_from", type=float, required=True)
    sp_sweep.add_argument("--to", dest="sweep_to", type=float, required=True)
    sp_sweep.add_argument("--count", type=int, required=True)
    sp_sweep.add_argument("--log", action="store_true")

    sp_check = sub.add_parser("selfcheck", help="run the embedded invariant suite")
    add_common(sp_check, with_params=False)
    sp_check.add_argument("--seed", type=int, default=0)
    return parser


def _policy_from_args(args) -> TruncationPolicy:
    max_terms = args.max_terms
    if max_terms is None:
        env = os.environ.get(_ENV_MAX_TERMS)
        if env is not None:
            try:
                max_terms = int(env)
            except ValueError as exc:
                raise UsageError(f"{_ENV_MAX_TERMS} must be an integer (got {env!r})") from exc
    kwargs = {}
    if args.rel_tol is not None:
        kwargs["rel_tol"] = args.rel_tol
    if max_terms is not None:
        kwargs["max_terms"] = max_terms
    return TruncationPolicy(**kwargs)


def build_config(argv) -> RunConfig:
    args = _build_parser().parse_args(argv)
    policy = _policy_from_args(args)
    cfg_kwargs = dict(command=args.command, policy=policy, output=args.output, n_max=args.nmax)
    if args.command != "selfcheck":
        cfg_kwargs["kind"] = SeriesKind(args.kind)
        try:
            cfg_kwargs["params"] = SeriesParams(args.mu, args.nu, args.alpha, args.a, args.b)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
    if args.command in ("eval", "sweep"):
        cfg_kwargs["method"] = args.method
    if args.command == "eval":
        cfg_kwargs["ledger_path"] = args.ledger
    if args.command == "compare":
        cfg_kwargs["tol"] = args.tol
    if args.command == "sweep":
        cfg_kwargs["sweep_axis"] = SweepAxis(
            args.axis, args.sweep_from, args.sweep_to, args.count, args.log
        )
    if args.command == "selfcheck":
        cfg_kwargs["seed"] = args.seed
    return RunConfig(**cfg_kwargs)


def run(cfg: RunConfig, out=None, err=None) -> int:
    """Execute a resolved configuration; returns the process exit status."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    handler = {
        "eval": _cmd_eval,
        "compare": _cmd_compare,
        "sweep": _cmd_sweep,
        "selfcheck": _cmd_selfcheck,
    }[cfg.command]
    return handler(cfg, out, err)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = build_config(argv)
        return run(cfg)
    except UsageError as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(json.dumps({"error": "domain", "message": str(exc)}), file=sys.stderr)
        return EXIT_DOMAIN
    except BesselSumError as exc:
        print(json.dumps({"error": "internal", "message": str(exc)}), file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
