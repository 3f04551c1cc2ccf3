"""Complete and incomplete Kloosterman sums: reference evaluators, exact
identity checks, an O(p log p) all-frequencies fast path, smooth-cutoff
completion, and empirical bound sweeps."""

from .arith import (
    Modulus,
    batch_inverse,
    coprime_count,
    divisor_count,
    gcd3,
    is_prime,
    mod_inverse,
    primes_up_to,
)
from .bounds import (
    BoundReport,
    best_r,
    conjecture_bound,
    make_report,
    nontrivial_threshold,
    prop1_bound,
    thm1_bound,
    weil_bound,
)
from .errors import (
    ConfigInvalid,
    DegenerateWindow,
    IntervalTooLong,
    InvalidR,
    KloostermanError,
    NonInvertible,
    OutputIoError,
    QuadratureNonConvergence,
    SizeOverflow,
)
from .expsum import (
    IntervalSpec,
    SumParams,
    SumValue,
    complete_kloosterman,
    incomplete_kloosterman,
    lemma2_transform,
    second_moment_complete,
    second_moment_incomplete,
)
from .harness import (
    ExperimentRecord,
    SweepConfig,
    VerificationSummary,
    bench_allsums,
    emit,
    load_records,
    parse_sweep_config,
    run_sweep,
    verify_identities,
)
from .spectral import (
    SpectrumVector,
    all_complete_sums,
    all_incomplete_sums,
    dft,
    windowed_mean_value,
)
from .weight import (
    CompletionResult,
    SmoothWindow,
    build_window,
    decay_constant,
    default_lambda_grid,
    poisson_completion,
    smoothed_incomplete_sum,
    window_eval,
    window_fourier,
    window_fourier_many,
)

__version__ = "0.1.0"
