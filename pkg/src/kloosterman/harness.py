"""Seeded experiment sweeps, identity verification suites, a benchmark
driver, and flat-file persistence.

Sweeps are reproducible by construction: every (prime, theta, sample) cell
derives its own counter-based random stream from the configured seed, so
records do not depend on execution order.  CSV is the primary output
format (one row per record, 12 significant digits); JSON mirrors the same
field names.
"""

from __future__ import annotations

import json
import math
import statistics
import time
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .arith import (
    Modulus,
    inverse_table,
    is_prime,
    next_prime_at_least,
    prev_prime_at_most,
    primes_up_to,
)
from .bounds import make_report
from .errors import ConfigInvalid, OutputIoError
from .expsum import (
    IntervalSpec,
    SumParams,
    complete_kloosterman,
    incomplete_kloosterman,
    second_moment_complete,
    second_moment_incomplete,
)
from .spectral import all_complete_sums, dft
from .weight import build_window, poisson_completion

CSV_HEADER = (
    "p,a,b,M,L,theta,re,im,abs_S,unit_count,weil,thm1_best,best_r,conj1,"
    "ratio_thm1,ratio_conj,seed,sample_index"
)

_FIELDS = CSV_HEADER.split(",")
_FLOAT_FIELDS = frozenset(
    {"theta", "re", "im", "abs_S", "weil", "thm1_best", "conj1", "ratio_thm1",
     "ratio_conj"}
)


@dataclass(frozen=True)
class ExperimentRecord:
    """One sweep cell sample; field names match the CSV header exactly."""

    p: int
    a: int
    b: int
    M: int
    L: int
    theta: float
    re: float
    im: float
    abs_S: float
    unit_count: int
    weil: float
    thm1_best: float
    best_r: int
    conj1: float
    ratio_thm1: float
    ratio_conj: float
    seed: int
    sample_index: int


@dataclass
class SweepConfig:
    """Sweep plan: which primes, which interval-length exponents, how many
    samples per cell, and where the records go."""

    primes: list[int]
    theta_list: list[float]
    samples_per_cell: int
    r_max: int = 10
    epsilon: float = 0.0
    seed: int = 0
    output_path: str = "sweep.csv"
    output_format: str = "csv"

    def validate(self) -> None:
        if not self.primes:
            raise ConfigInvalid("primes must be nonempty")
        for p in self.primes:
            if not is_prime(p):
                raise ConfigInvalid(f"{p} is not prime")
            if p < 3:
                raise ConfigInvalid(f"sweep primes must be odd, got {p}")
        if not self.theta_list:
            raise ConfigInvalid("theta_list must be nonempty")
        for theta in self.theta_list:
            if not 0.0 < theta <= 1.0:
                raise ConfigInvalid(f"theta must lie in (0, 1], got {theta}")
        if self.samples_per_cell < 1:
            raise ConfigInvalid("samples_per_cell must be >= 1")
        if self.r_max < 2:
            raise ConfigInvalid("r_max must be >= 2")
        if self.epsilon < 0:
            raise ConfigInvalid("epsilon must be >= 0")
        if not 0 <= self.seed < 1 << 64:
            raise ConfigInvalid("seed must fit in 64 unsigned bits")
        if self.output_format not in ("csv", "json"):
            raise ConfigInvalid(f"unknown output format {self.output_format!r}")


def _parse_primes_value(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("range:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigInvalid(f"range form is range:lo:hi:count, got {text!r}")
        try:
            lo, hi, count = int(parts[1]), int(parts[2]), int(parts[3])
        except ValueError as exc:
            raise ConfigInvalid(f"bad range bounds in {text!r}") from exc
        if not (2 <= lo <= hi) or count < 1:
            raise ConfigInvalid(f"bad range {text!r}")
        # count primes at (roughly) geometric targets across [lo, hi]
        targets = np.geomspace(lo, hi, count)
        out: list[int] = []
        for t in targets:
            p = next_prime_at_least(int(math.ceil(t)))
            if p > hi:
                p = prev_prime_at_most(hi)
            if p < lo:
                continue
            if not out or p != out[-1]:
                out.append(p)
        if not out:
            raise ConfigInvalid(f"no primes in [{lo}, {hi}]")
        return out
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigInvalid(f"bad primes list {text!r}") from exc


def parse_sweep_config(path: str) -> SweepConfig:
    """Read a flat key=value sweep file; keys are the SweepConfig fields.

    primes accepts a comma list or range:lo:hi:count; blank lines and
    #-comments are ignored.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise OutputIoError(f"cannot read config {path}: {exc}") from exc
    raw: dict[str, str] = {}
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigInvalid(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = stripped.partition("=")
        raw[key.strip()] = value.strip()
    known = {f for f in SweepConfig.__dataclass_fields__}
    for key in raw:
        if key not in known:
            raise ConfigInvalid(f"unknown config key {key!r}")
    for required in ("primes", "theta_list", "samples_per_cell"):
        if required not in raw:
            raise ConfigInvalid(f"missing config key {required!r}")
    try:
        config = SweepConfig(
            primes=_parse_primes_value(raw["primes"]),
            theta_list=[float(tok) for tok in raw["theta_list"].split(",") if tok.strip()],
            samples_per_cell=int(raw["samples_per_cell"]),
            r_max=int(raw.get("r_max", 10)),
            epsilon=float(raw.get("epsilon", 0.0)),
            seed=int(raw.get("seed", 0)),
            output_path=raw.get("output_path", "sweep.csv"),
            output_format=raw.get("output_format", "csv"),
        )
    except ValueError as exc:
        raise ConfigInvalid(f"bad config value: {exc}") from exc
    config.validate()
    return config


def _cell_rng(seed: int, prime_index: int, theta_index: int,
              sample_index: int) -> np.random.Generator:
    # Philox is counter-based; the spawn key gives every cell its own
    # stream, so records are independent of execution order.
    seq = np.random.SeedSequence(seed, spawn_key=(prime_index, theta_index, sample_index))
    return np.random.Generator(np.random.Philox(seq))


def run_sweep(config: SweepConfig) -> list[ExperimentRecord]:
    """Evaluate every (prime, theta, sample) cell of the config.

    Each sample draws a in [0, p), b in [1, p) (so gcd(b, p) = 1), and
    M in [0, p), evaluates the incomplete sum over (M, M + ceil(p^theta)],
    and scores it against every bound curve.
    """
    config.validate()
    records: list[ExperimentRecord] = []
    for ip, p in enumerate(config.primes):
        pm = Modulus(p)
        for it, theta in enumerate(config.theta_list):
            length = math.ceil(p**theta)
            for k in range(config.samples_per_cell):
                rng = _cell_rng(config.seed, ip, it, k)
                a = int(rng.integers(0, p))
                b = int(rng.integers(1, p))
                start = int(rng.integers(0, p))
                params = SumParams(a, b, pm)
                interval = IntervalSpec(start, length)
                value = incomplete_kloosterman(params, interval)
                report = make_report(params, interval, value.abs,
                                     r_max=config.r_max, epsilon=config.epsilon)
                records.append(ExperimentRecord(
                    p=p, a=a, b=b, M=start, L=length, theta=theta,
                    re=value.re, im=value.im, abs_S=value.abs,
                    unit_count=report.trivial, weil=report.weil,
                    thm1_best=report.best_thm1, best_r=report.best_r,
                    conj1=report.conj1, ratio_thm1=report.ratio_thm1,
                    ratio_conj=report.ratio_conj, seed=config.seed,
                    sample_index=k,
                ))
    records.sort(key=lambda r: (r.p, r.theta, r.sample_index))
    return records


def _render(name: str, value) -> str:
    return f"{value:.12g}" if name in _FLOAT_FIELDS else str(value)


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    lines = [CSV_HEADER]
    for rec in records:
        d = asdict(rec)
        lines.append(",".join(_render(name, d[name]) for name in _FIELDS))
    return "\n".join(lines) + "\n"


def emit(records: Iterable[ExperimentRecord], path: str, fmt: str = "csv") -> None:
    """Write records as CSV (12 significant digits) or a JSON array with
    the same field names."""
    records = list(records)
    try:
        if fmt == "csv":
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(records_to_csv(records))
        elif fmt == "json":
            with open(path, "w", encoding="utf-8") as fh:
                json.dump([asdict(rec) for rec in records], fh, indent=1)
                fh.write("\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OutputIoError(f"cannot write {path}: {exc}") from exc


def load_records(path: str, fmt: str = "csv") -> list[ExperimentRecord]:
    """Read back what emit wrote."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise OutputIoError(f"cannot read {path}: {exc}") from exc
    rows: list[dict] = []
    if fmt == "csv":
        lines = [ln for ln in text.splitlines() if ln]
        if not lines or lines[0] != CSV_HEADER:
            raise OutputIoError(f"{path} does not carry the expected header")
        for line in lines[1:]:
            cells = line.split(",")
            rows.append({name: cells[i] for i, name in enumerate(_FIELDS)})
    elif fmt == "json":
        rows = json.loads(text)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    out = []
    for row in rows:
        kwargs = {
            name: (float(row[name]) if name in _FLOAT_FIELDS else int(row[name]))
            for name in _FIELDS
        }
        out.append(ExperimentRecord(**kwargs))
    return out


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    max_defect: float
    threshold: float
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationSummary:
    checks: list[IdentityCheck]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _check(name, defect, threshold, detail=""):
    return IdentityCheck(name, float(defect), float(threshold),
                         bool(defect <= threshold), detail)


def verify_identities(p_limit: int, seed: int = 0) -> VerificationSummary:
    """Run every exact-identity suite over the primes up to p_limit.

    The twisted-average identity is checked exhaustively in (b, m) for
    p <= 200 and on 6 sampled frequencies b (all m at once) above that;
    the moment identities sample 5 frequencies per prime; the completion
    identity runs on up to 12 primes spread across the range.  Defects
    are normalized as documented per check.
    """
    if p_limit < 5:
        raise ValueError(f"p_limit must be >= 5, got {p_limit}")
    primes = primes_up_to(p_limit)
    checks: list[IdentityCheck] = []

    # twisted average vs closed form, via one extra forward DFT per b:
    # T[m] = sum_a S(a,b;p) e(am/p) must equal p e(-b*mbar/p) for unit m.
    worst = 0.0
    pairs = 0
    for p in primes:
        pm = Modulus(p)
        inv = inverse_table(p)
        rng = np.random.Generator(np.random.Philox(
            np.random.SeedSequence(seed, spawn_key=(1, p))))
        if p <= 200:
            bs = range(1, p)
        else:
            bs = sorted({int(rng.integers(1, p)) for _ in range(6)})
        for b in bs:
            spectrum = all_complete_sums(b, pm)
            twisted = dft(spectrum.values, "forward")
            rhs = p * np.exp(2j * np.pi * ((-b * inv[1:]) % p) / p)
            defect = float(np.max(np.abs(twisted[1:] - rhs))) / p
            worst = max(worst, defect)
            pairs += p - 1
    checks.append(_check("twisted-average", worst, 1e-6,
                         f"{pairs} (b,m) pairs, defect scaled by 1/p"))

    # complete second moment == p(p-1), relative defect
    worst = 0.0
    for p in primes:
        pm = Modulus(p)
        rng = np.random.Generator(np.random.Philox(
            np.random.SeedSequence(seed, spawn_key=(2, p))))
        for _ in range(5):
            b = int(rng.integers(0, p))
            total = second_moment_complete(b, pm)
            worst = max(worst, abs(total / (p * (p - 1)) - 1.0))
    checks.append(_check("second-moment-complete", worst, 1e-6, "relative"))

    # incomplete second moment == unit count, absolute defect
    worst = 0.0
    for p in primes:
        pm = Modulus(p)
        rng = np.random.Generator(np.random.Philox(
            np.random.SeedSequence(seed, spawn_key=(3, p))))
        for _ in range(5):
            b = int(rng.integers(1, p))
            start = int(rng.integers(0, p))
            length = int(rng.integers(1, p + 1))
            value, units = second_moment_incomplete(b, pm, IntervalSpec(start, length))
            worst = max(worst, abs(value - units))
    checks.append(_check("second-moment-incomplete", worst, 1e-6, "absolute"))

    # square-root bound on complete sums (unit b, so the gcd factor is 1)
    worst = 0.0
    for p in primes:
        pm = Modulus(p)
        rng = np.random.Generator(np.random.Philox(
            np.random.SeedSequence(seed, spawn_key=(4, p))))
        for _ in range(3):
            b = int(rng.integers(1, p))
            excess = float(np.max(np.abs(all_complete_sums(b, pm).values))) - 2 * math.sqrt(p)
            worst = max(worst, excess)
    checks.append(_check("weil-complete", worst, 1e-6, "max |S| - 2 sqrt(p)"))

    # spectral fast path vs the direct evaluator on sampled entries
    worst = 0.0
    for p in primes[:: max(1, len(primes) // 8)]:
        pm = Modulus(p)
        rng = np.random.Generator(np.random.Philox(
            np.random.SeedSequence(seed, spawn_key=(5, p))))
        b = int(rng.integers(1, p))
        spectrum = all_complete_sums(b, pm)
        for _ in range(3):
            a = int(rng.integers(0, p))
            direct = complete_kloosterman(SumParams(a, b, pm))
            defect = abs(spectrum.values[a] - complex(direct)) / p
            worst = max(worst, defect)
    checks.append(_check("spectral-vs-direct", worst, 1e-8, "defect scaled by 1/p"))

    # completion identity: defect must stay under the certified tail
    worst = 0.0
    eligible = [p for p in primes if p >= 11]
    stride = max(1, len(eligible) // 12)
    for p in eligible[::stride]:
        pm = Modulus(p)
        scale = math.ceil(math.sqrt(p))
        window = build_window(float(scale), scale / 8.0)
        height = math.ceil(20.0 * p / scale)
        rng = np.random.Generator(np.random.Philox(
            np.random.SeedSequence(seed, spawn_key=(6, p))))
        for _ in range(3):
            a = int(rng.integers(0, p))
            b = int(rng.integers(1, p))
            start = int(rng.integers(0, p))
            spectrum = all_complete_sums(b, pm)
            result = poisson_completion(a, b, pm, start, window, height, spectrum)
            excess = (result.defect - result.tail_estimate) / window.scale
            worst = max(worst, excess)
    checks.append(_check("completion-identity", worst, 1e-6,
                         "(defect - tail) scaled by 1/scale"))

    return VerificationSummary(checks)


@dataclass(frozen=True)
class BenchReport:
    p: int
    repetitions: int
    median_seconds: float
    sums_per_second: float
    crosscheck_error: float


def bench_allsums(p: int, repetitions: int = 5) -> BenchReport:
    """Time the all-frequencies fast path at prime p.

    Eight random spectrum entries are cross-checked against the direct
    evaluator before any timing is reported; a mismatch raises.
    """
    pm = Modulus(p)
    if not pm.is_prime:
        raise ValueError(f"{p} is not prime")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    spectrum = all_complete_sums(1, pm)  # also warms plan + inverse table
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(0, spawn_key=(7, p))))
    worst = 0.0
    for _ in range(8):
        a = int(rng.integers(0, p))
        direct = complete_kloosterman(SumParams(a, 1, pm))
        worst = max(worst, abs(spectrum.values[a] - complex(direct)))
    if worst > 1e-8 * p:
        raise RuntimeError(f"fast path disagrees with direct evaluation: {worst}")
    times = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        all_complete_sums(1, pm)
        times.append(time.perf_counter() - t0)
    median = statistics.median(times)
    return BenchReport(p, repetitions, median, p / median, worst)
