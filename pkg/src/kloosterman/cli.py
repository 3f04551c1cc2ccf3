"""Command-line interface.

Exit status: 0 when everything passed, 1 when an identity or bound-cap
check failed, 2 on configuration or I/O errors.  All numeric output uses
'.' as the decimal separator regardless of locale.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict

from .arith import Modulus
from .bounds import make_report
from .errors import ConfigInvalid, KloostermanError, OutputIoError
from .expsum import IntervalSpec, SumParams, complete_kloosterman, incomplete_kloosterman
from .harness import bench_allsums, emit, parse_sweep_config, run_sweep, verify_identities
from .spectral import all_complete_sums
from .weight import build_window, decay_constant, default_lambda_grid, window_fourier


def _g(x: float) -> str:
    return f"{x:.12g}"


def _cmd_complete(args) -> int:
    value = complete_kloosterman(SumParams(args.a, args.b, Modulus(args.p)))
    print(f"re={_g(value.re)} im={_g(value.im)} abs={_g(value.abs)}")
    return 0


def _cmd_incomplete(args) -> int:
    params = SumParams(args.a, args.b, Modulus(args.p))
    interval = IntervalSpec(args.start, args.len)
    value = incomplete_kloosterman(params, interval)
    print(f"re={_g(value.re)} im={_g(value.im)} abs={_g(value.abs)}")
    report = make_report(params, interval, value.abs)
    print(
        f"trivial={report.trivial} weil={_g(report.weil)}"
        f" weil_completed={_g(report.weil_completed)}"
        f" thm1_best={_g(report.best_thm1)} best_r={report.best_r}"
        f" conj1={_g(report.conj1)} conj_in_range={report.conj_in_range}"
        f" ratio_thm1={_g(report.ratio_thm1)} ratio_conj={_g(report.ratio_conj)}"
    )
    return 0


def _cmd_allsums(args) -> int:
    spectrum = all_complete_sums(args.b, Modulus(args.p))
    lines = ["a,re,im"]
    for a, v in enumerate(spectrum.values):
        lines.append(f"{a},{_g(v.real)},{_g(v.imag)}")
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OutputIoError(f"cannot write {args.out}: {exc}") from exc
        print(f"wrote {len(spectrum.values)} sums to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    try:
        summary = verify_identities(args.p_limit, seed=args.seed)
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from exc
    for check in summary.checks:
        tag = "PASS" if check.passed else "FAIL"
        detail = f" ({check.detail})" if check.detail else ""
        print(f"{tag} {check.name}: max_defect={_g(check.max_defect)} "
              f"threshold={_g(check.threshold)}{detail}")
    return 0 if summary.all_passed else 1


def _cmd_sweep(args) -> int:
    config = parse_sweep_config(args.config)
    records = run_sweep(config)
    emit(records, config.output_path, config.output_format)
    bad = [r for r in records if r.abs_S > r.unit_count + 1e-6]
    worst = max((r.ratio_thm1 for r in records), default=0.0)
    print(f"{len(records)} records -> {config.output_path} "
          f"[{config.output_format}] max_ratio_thm1={_g(worst)}")
    if bad:
        print(f"FAIL {len(bad)} records exceed the trivial bound", file=sys.stderr)
        return 1
    return 0


def _cmd_window_check(args) -> int:
    window = build_window(args.n, args.delta)
    mass = window_fourier(window, 0.0).real
    expected = window.scale - 2.0 * window.delta
    print(f"mass={_g(mass)} expected={_g(expected)} defect={_g(abs(mass - expected))}")
    grid = default_lambda_grid(window.scale)
    for order in sorted({0, 2, args.a_order}):
        const = decay_constant(window, order, grid)
        print(f"decay_constant[A={order}]={_g(const)}")
    return 0


def _cmd_bench(args) -> int:
    report = bench_allsums(args.p, args.reps)
    d = asdict(report)
    print(f"p={d['p']} reps={d['repetitions']} median={_g(d['median_seconds'])}s "
          f"throughput={_g(d['sums_per_second'])} sums/s "
          f"crosscheck_error={_g(d['crosscheck_error'])}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kloosterman",
        description="Evaluate Kloosterman sums, verify their exact identities, "
                    "and measure bound curves empirically.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complete", help="one complete sum")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.set_defaults(func=_cmd_complete)

    p = sub.add_parser("incomplete", help="one incomplete sum plus its bound report")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--len", type=int, required=True)
    p.set_defaults(func=_cmd_incomplete)

    p = sub.add_parser("allsums", help="full spectrum for fixed b, as CSV")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_allsums)

    p = sub.add_parser("verify", help="run the exact-identity suites")
    p.add_argument("--p-limit", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sweep", help="run a sweep config file")
    p.add_argument("--config", type=str, required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("window-check", help="window mass and decay constants")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--a-order", type=int, default=2)
    p.set_defaults(func=_cmd_window_check)

    p = sub.add_parser("bench", help="time the all-frequencies fast path")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--reps", type=int, default=5)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigInvalid, OutputIoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KloostermanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    raise SystemExit(main())
