"""Command-line interface.

Subcommands: exponent, curve, simulate, fit, example1, check.  Every
invocation is a pure function of its flags, the model file, and the seed,
and all numeric output is printed at 12 significant digits, so reruns are
byte-identical.  Exit codes: 0 success, 1 a numeric check failed, 2 usage
or validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import architectures as arch
from . import evaluator as ev
from .exponents import rate_function_grid
from .model import (
    HypothesisModel,
    NotAProbability,
    Quantizer,
    ShapeMismatch,
    SupportMismatch,
    identity_quantizer,
    induce,
    load_model,
    validate_model,
)

# Example model used throughout: three symbols, strongly skewed both ways.
_TABLE_PMF0 = (0.8, 0.15, 0.05)
_TABLE_PMF1 = (0.05, 0.15, 0.8)

_ARCH_NAMES = {
    "parallel-1": "Parallel1",
    "parallel-2": "Parallel2",
    "sequential-feedback-2": "SequentialFeedback2",
    "full-feedback-2": "FullFeedback2",
    "restricted-feedback-2": "RestrictedFeedback2",
    "one-msg-sequential": "OneMsgSequential",
    "daisy-full": "DaisyFull",
    "daisy-restricted": "DaisyRestricted",
    "tree": "Tree",
}

_USAGE_ERRORS = (
    NotAProbability,
    SupportMismatch,
    ShapeMismatch,
    arch.UnsupportedFormulation,
    arch.InfeasibleRate,
    ev.TooLarge,
    ev.DegenerateLLR,
    ValueError,
    OSError,
)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".12g")
    return str(x)


def _jsonable(obj):
    """Round floats to 12 significant digits; stringify non-finite values."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(format(obj, ".12g"))
        return _fmt(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonable(obj.item())
    return obj


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args) -> tuple[HypothesisModel, int]:
    m, d_file = load_model(args.model)
    d = args.d if args.d is not None else d_file
    if d < 2:
        raise ValueError("message alphabet size d must be at least 2")
    return m, d


def _parse_map(text: str, name: str) -> Quantizer:
    try:
        labels = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ValueError(f"{name} must be comma-separated integer labels") from exc
    if not labels:
        raise ValueError(f"{name} must be nonempty")
    return Quantizer(map=labels, message_alphabet_size=max(labels) + 1)


def _compute_report(m: HypothesisModel, kind: str, args) -> arch.ExponentReport:
    mode = "all" if args.exhaustive else "llr_monotone"
    formulation = args.formulation
    d = args.d if args.d is not None else 2
    if kind == "Parallel1":
        return arch.exponent_parallel(m, d=d, messages_per_sensor=1, formulation=formulation, mode=mode)
    if kind == "Parallel2":
        return arch.exponent_parallel(m, d=d, messages_per_sensor=2, formulation=formulation, mode=mode)
    if kind == "DaisyRestricted":
        if args.r is None:
            raise ValueError("daisy-restricted needs --r in (0, 1)")
        return arch.exponent_daisy_restricted(m, args.r, d=d, mode=mode, formulation=formulation)
    if kind == "Tree":
        if args.r is None:
            raise ValueError("tree needs --r in (0, 1)")
        return arch.exponent_tree(m, args.r, d=d, mode=mode, formulation=formulation)
    return arch.exponent_feedback_equivalent(m, d=d, kind=kind, formulation=formulation, mode=mode)


def cmd_exponent(args) -> int:
    m, d = _load(args)
    args.d = d
    report = _compute_report(m, _ARCH_NAMES[args.arch], args)
    text = json.dumps(_jsonable(report.to_dict()), indent=2) + "\n"
    _emit(text, args.output)
    return 0


def cmd_curve(args) -> int:
    m, _ = _load(args)
    q = _parse_map(args.quantizer, "--quantizer") if args.quantizer else identity_quantizer(m)
    im = induce(m, q)
    zmin, zmax = im.llr_support()
    lo = args.t_lo if args.t_lo is not None else zmin
    hi = args.t_hi if args.t_hi is not None else zmax
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo or args.t_points < 2:
        raise ValueError("bad t grid: need finite lo <= hi and at least two points")
    ts = np.linspace(lo, hi, args.t_points)
    r0 = rate_function_grid(im, 0, ts)
    r1 = rate_function_grid(im, 1, ts)
    lines = ["t,rate_h0,rate_h1"]
    for t, a, b in zip(ts, r0, r1):
        lines.append(f"{_fmt(float(t))},{_fmt(float(a))},{_fmt(float(b))}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _strategy_from_args(m: HypothesisModel, args) -> ev.Strategy:
    kind = _ARCH_NAMES[args.arch]
    if args.quantizer is None:
        # No explicit maps given: evaluate the optimal strategy for this
        # architecture, which keeps the common workflow to one command.
        report = _compute_report(m, kind, args)
        return ev.strategy_from_report(report, t=args.t, fusion_threshold=args.fusion_threshold)
    gamma = _parse_map(args.quantizer, "--quantizer")
    delta0 = _parse_map(args.delta0, "--delta0") if args.delta0 else None
    delta1 = _parse_map(args.delta1, "--delta1") if args.delta1 else None
    staged = kind in ("DaisyRestricted", "Tree", "DaisyFull")
    needs_t = staged or kind in ("SequentialFeedback2", "FullFeedback2", "RestrictedFeedback2")
    return ev.Strategy(
        kind=kind,
        gamma=gamma,
        delta0=delta0,
        delta1=delta1,
        t=(args.t if args.t is not None else 0.0) if needs_t else None,
        r=args.r if staged else None,
        fusion_threshold=args.fusion_threshold,
    )


def _parse_n_grid(text: str) -> list[int]:
    try:
        ns = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError("--n-grid must be comma-separated integers") from exc
    if not ns or any(n < 1 for n in ns):
        raise ValueError("--n-grid entries must be positive integers")
    return ns


_CSV_HEADER = "n,p_e0,p_e1,p_e,log_pe_over_n,method,ci"


def _estimate_row(e: ev.ErrorEstimate) -> str:
    return ",".join(
        [
            str(e.n),
            _fmt(e.p_e0),
            _fmt(e.p_e1),
            _fmt(e.p_e),
            _fmt(e.log_pe_over_n),
            e.method,
            _fmt(e.ci),
        ]
    )


def _estimate_dict(e: ev.ErrorEstimate) -> dict:
    return {
        "n": e.n,
        "p_e0": e.p_e0,
        "p_e1": e.p_e1,
        "p_e": e.p_e,
        "log_pe_over_n": e.log_pe_over_n,
        "method": e.method,
        "ci": e.ci,
    }


def cmd_simulate(args) -> int:
    m, d = _load(args)
    args.d = d
    strategy = _strategy_from_args(m, args)
    rows = []
    for n in _parse_n_grid(args.n_grid):
        if args.method == "exact":
            rows.append(ev.exact_error(m, strategy, n))
        else:
            rows.append(ev.simulate(m, strategy, n, num_trials=args.samples, seed=args.seed))
    if args.format == "json":
        text = json.dumps(_jsonable([_estimate_dict(e) for e in rows]), indent=2) + "\n"
    else:
        text = "\n".join([_CSV_HEADER] + [_estimate_row(e) for e in rows]) + "\n"
    _emit(text, args.output)
    return 0


def cmd_fit(args) -> int:
    m, d = _load(args)
    args.d = d
    strategy = _strategy_from_args(m, args)
    result = ev.fit_exponent(
        m,
        strategy,
        _parse_n_grid(args.n_grid),
        method=args.method,
        num_trials=args.samples,
        seed=args.seed,
    )
    if args.format == "json":
        payload = {
            "slope": result.slope,
            "intercept": result.intercept,
            "rows": [_estimate_dict(e) for e in result.estimates],
        }
        text = json.dumps(_jsonable(payload), indent=2) + "\n"
    else:
        text = "\n".join([_CSV_HEADER] + [_estimate_row(e) for e in result.estimates]) + "\n"
    _emit(text, args.output)
    return 0


def cmd_example1(args) -> int:
    m = validate_model(HypothesisModel(pmf0=_TABLE_PMF0, pmf1=_TABLE_PMF1))
    daisy = arch.exponent_daisy_restricted(m, r=0.5, d=2)
    tree = arch.exponent_tree(m, r=0.5, d=2)
    par = arch.exponent_parallel(m, d=2, messages_per_sensor=1)
    sym = arch.check_symmetric_rate_condition(m, d=2, r=0.5)
    try:
        ordering = arch.check_ordering(m, r=0.5, d=2)
        ordering_failure = None
    except arch.OrderingViolation as exc:
        ordering = {"tree": tree.exponent, "daisy_restricted": daisy.exponent, "parallel1": par.exponent}
        ordering_failure = str(exc)

    lines = []
    lines.append("model: pmf0 = 0.8 0.15 0.05 | pmf1 = 0.05 0.15 0.8")
    lines.append(
        "restricted-feedback chain (r = 0.5): exponent = " + _fmt(daisy.exponent)
    )
    s = daisy.strategy
    lines.append(
        "  gamma = "
        + ",".join(map(str, s["gamma"]))
        + "  delta0 = "
        + ",".join(map(str, s["delta0"]))
        + "  delta1 = "
        + ",".join(map(str, s["delta1"]))
        + "  t = "
        + _fmt(s["t"])
    )
    lines.append("two-level tree (r = 0.5): exponent = " + _fmt(tree.exponent))
    st = tree.strategy
    lines.append(
        "  gamma = "
        + ",".join(map(str, st["gamma"]))
        + "  delta = "
        + ",".join(map(str, st["delta0"]))
        + "  t = "
        + _fmt(st["t"])
    )
    lines.append("parallel, one message per sensor: exponent = " + _fmt(par.exponent))
    lines.append(
        "symmetric-rate condition: "
        + ("applies" if sym["applies"] else "does not apply")
        + " (max gap = "
        + _fmt(sym["max_gap"])
        + ")"
    )
    lines.append(
        "ordering tree >= chain > parallel: "
        + _fmt(ordering["tree"])
        + " >= "
        + _fmt(ordering["daisy_restricted"])
        + " > "
        + _fmt(ordering["parallel1"])
    )

    failures = []
    if abs(daisy.exponent - (-0.365)) > 1e-3:
        failures.append("chain exponent off the reference -0.365 by more than 1e-3")
    if abs(tree.exponent - (-0.356)) > 1e-3:
        failures.append("tree exponent off the reference -0.356 by more than 1e-3")
    if not tree.exponent > daisy.exponent:
        failures.append("tree exponent is not strictly above the chain exponent")
    if s["delta0"] != [0, 0, 1] or s["delta1"] != [0, 1, 1]:
        failures.append("chain second-stage pair is not (0,0,1)/(0,1,1)")
    if st["delta0"] != [0, 0, 1]:
        failures.append("tree second-stage quantizer is not (0,0,1)")
    if sym["applies"]:
        failures.append("symmetric-rate condition unexpectedly applies to this model")
    if ordering_failure is not None:
        failures.append(ordering_failure)

    for f in failures:
        lines.append("FAILED: " + f)
    if not failures:
        lines.append("all reference checks passed")
    _emit("\n".join(lines) + "\n", args.output)
    return 1 if failures else 0


def _random_models(count: int, seed: int) -> list[HypothesisModel]:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p0 = rng.dirichlet(np.ones(3))
        p1 = rng.dirichlet(np.ones(3))
        if min(p0.min(), p1.min()) < 5e-3:
            continue
        if 0.5 * np.abs(p0 - p1).sum() < 1e-2:
            continue
        out.append(HypothesisModel(pmf0=p0 / p0.sum(), pmf1=p1 / p1.sum()))
    return out


def cmd_check(args) -> int:
    models = _random_models(args.models, args.seed)
    lines = []
    violations = 0

    order_bad = 0
    for m in models:
        for r in (0.25, 0.5, 0.75):
            try:
                arch.check_ordering(m, r=r, d=2)
            except arch.OrderingViolation:
                order_bad += 1
    lines.append(f"ordering: {len(models)} models x 3 stage fractions, {order_bad} violations")
    violations += order_bad

    sym_applies = 0
    sym_bad = 0
    for m in models:
        res = arch.check_symmetric_rate_condition(m, d=2, r=0.5)
        if res["applies"]:
            sym_applies += 1
            if not res["consistent"]:
                sym_bad += 1
    lines.append(
        f"symmetric-rate shortcut: applies on {sym_applies} of {len(models)} models, "
        f"{sym_bad} inconsistencies"
    )
    violations += sym_bad

    sgb_checks = 0
    sgb_bad = 0
    for m in models:
        par = arch.exponent_parallel(m, d=2, messages_per_sensor=1)
        strat = ev.strategy_from_report(par)
        im = induce(m, strat.gamma)
        for n in (1, 4, 12):
            est = ev.exact_error_parallel(m, strat, n)
            bound, _ = ev.sgb_lower_bound(im, n)
            sgb_checks += 1
            if max(est.p_e0, est.p_e1) < bound * (1.0 - 1e-9):
                sgb_bad += 1
        daisy = arch.exponent_daisy_restricted(m, r=0.5, d=2)
        dstrat = ev.strategy_from_report(daisy)
        est = ev.exact_error_daisy(m, dstrat, 12)
        bound, _ = ev.sgb_lower_bound(ev.llr_distribution_daisy(m, dstrat, 12), 1)
        sgb_checks += 1
        if max(est.p_e0, est.p_e1) < bound * (1.0 - 1e-9):
            sgb_bad += 1
    lines.append(f"error lower bound: {sgb_checks} exact evaluations, {sgb_bad} violations")
    violations += sgb_bad

    lines.append("all checks passed" if violations == 0 else f"{violations} checks FAILED")
    _emit("\n".join(lines) + "\n", args.output)
    return 0 if violations == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decdet",
        description="Error exponents and finite-n errors for decentralized detection networks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, model_required=True):
        if model_required:
            p.add_argument("--model", required=True, help="model file: 'K D' header plus two pmf lines")
            p.add_argument("--d", type=int, default=None, help="message alphabet size (default: model header)")
        p.add_argument("--output", default=None, help="write to this file instead of stdout")

    p_exp = sub.add_parser("exponent", help="optimal error exponent of one architecture")
    add_common(p_exp)
    p_exp.add_argument("--arch", choices=sorted(_ARCH_NAMES), default="parallel-1")
    p_exp.add_argument("--r", type=float, default=None, help="first-stage fraction for staged kinds")
    p_exp.add_argument("--formulation", choices=["bayesian", "neyman-pearson"], default="bayesian")
    p_exp.add_argument("--exhaustive", action="store_true", help="search all quantizers, not only LLR-interval ones")
    p_exp.set_defaults(func=cmd_exponent)

    p_curve = sub.add_parser("curve", help="rate-function curves of one quantizer as CSV")
    add_common(p_curve)
    p_curve.add_argument("--quantizer", default=None, help="comma-separated labels, e.g. 0,1,1 (default identity)")
    p_curve.add_argument("--t-lo", type=float, default=None)
    p_curve.add_argument("--t-hi", type=float, default=None)
    p_curve.add_argument("--t-points", type=int, default=401)
    p_curve.set_defaults(func=cmd_curve)

    def add_strategy_flags(p):
        p.add_argument("--arch", choices=sorted(_ARCH_NAMES), default="parallel-1")
        p.add_argument("--r", type=float, default=None)
        p.add_argument("--formulation", choices=["bayesian", "neyman-pearson"], default="bayesian")
        p.add_argument("--exhaustive", action="store_true")
        p.add_argument("--quantizer", default=None, help="first-stage map (default: optimize)")
        p.add_argument("--delta0", default=None)
        p.add_argument("--delta1", default=None)
        p.add_argument("--t", type=float, default=None, help="aggregator threshold")
        p.add_argument("--fusion-threshold", type=float, default=0.0)
        p.add_argument("--n-grid", required=True, help="comma-separated blocklengths")
        p.add_argument("--samples", type=int, default=100_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p_sim = sub.add_parser("simulate", help="finite-n error probabilities of one strategy")
    add_common(p_sim)
    add_strategy_flags(p_sim)
    p_sim.add_argument("--method", choices=["exact", "mc"], default="mc")
    p_sim.set_defaults(func=cmd_simulate)

    p_fit = sub.add_parser("fit", help="least-squares exponent fit over a blocklength grid")
    add_common(p_fit)
    add_strategy_flags(p_fit)
    p_fit.add_argument("--method", choices=["exact", "mc"], default="exact")
    p_fit.set_defaults(func=cmd_fit)

    p_ex = sub.add_parser("example1", help="reproduce the bundled three-symbol reference results")
    add_common(p_ex, model_required=False)
    p_ex.set_defaults(func=cmd_example1)

    p_chk = sub.add_parser("check", help="ordering, shortcut and lower-bound sweep on random models")
    add_common(p_chk, model_required=False)
    p_chk.add_argument("--models", type=int, default=10)
    p_chk.add_argument("--seed", type=int, default=0)
    p_chk.set_defaults(func=cmd_check)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
