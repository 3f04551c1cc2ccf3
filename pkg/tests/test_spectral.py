import math

import numpy as np
import pytest

from kloosterman.arith import Modulus
from kloosterman.errors import IntervalTooLong, SizeOverflow
from kloosterman.expsum import (
    IntervalSpec,
    SumParams,
    complete_kloosterman,
    incomplete_kloosterman,
)
from kloosterman.spectral import (
    all_complete_sums,
    all_incomplete_sums,
    dft,
    windowed_mean_value,
)


def dft_oracle(v, sign=1):
    """Direct quadratic-time transform."""
    v = np.asarray(v, dtype=complex)
    n = v.size
    grid = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(sign * 2j * np.pi * grid / n) @ v


def test_dft_delta_and_constant():
    for n in (1, 2, 5, 8, 97):
        delta = np.zeros(n, dtype=complex)
        delta[0] = 1.0
        assert np.max(np.abs(dft(delta) - np.ones(n))) <= 1e-8 * n
        ones = np.ones(n, dtype=complex)
        expected = np.zeros(n, dtype=complex)
        expected[0] = n
        assert np.max(np.abs(dft(ones) - expected)) <= 1e-8 * n


def test_dft_matches_quadratic_oracle():
    rng = np.random.default_rng(0)
    for n in (3, 12, 97, 256, 1009):
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        assert np.max(np.abs(dft(v, "forward") - dft_oracle(v, +1))) <= 1e-8 * n
        assert np.max(np.abs(dft(v, "inverse") - dft_oracle(v, -1))) <= 1e-8 * n


def test_dft_forward_inverse_round_trip():
    rng = np.random.default_rng(1)
    for n in (1, 2, 5, 97, 1009):
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        back = dft(dft(v, "forward"), "inverse")
        assert np.max(np.abs(back - n * v)) <= 1e-8 * n


def test_dft_parseval():
    rng = np.random.default_rng(2)
    for n in (5, 97, 1009):
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        x = dft(v, "forward")
        lhs = float(np.real(np.vdot(x, x)))
        rhs = n * float(np.real(np.vdot(v, v)))
        assert lhs == pytest.approx(rhs, rel=1e-6)


def test_dft_input_validation():
    with pytest.raises(ValueError):
        dft([])
    with pytest.raises(ValueError):
        dft([1.0, 2.0], direction="sideways")


def test_all_complete_sums_matches_direct():
    for p in (5, 97, 101):
        pm = Modulus(p)
        for b in (1, 2, p - 1):
            spectrum = all_complete_sums(b, pm)
            assert spectrum.values.shape == (p,)
            for a in range(p):
                direct = complex(complete_kloosterman(SumParams(a, b, pm)))
                assert abs(spectrum.values[a] - direct) <= 1e-8 * p


def test_all_complete_sums_invariants():
    for p in (5, 101, 1009):
        pm = Modulus(p)
        for b in (1, p - 1):
            values = all_complete_sums(b, pm).values
            assert abs(values[0] - (-1.0)) <= 1e-8 * p  # Ramanujan sum at a=0
            assert np.max(np.abs(values.imag)) <= 1e-8 * p
            power = float(np.real(np.vdot(values, values)))
            assert power == pytest.approx(p * (p - 1), rel=1e-6)


def test_all_incomplete_sums_full_period_and_spot_checks():
    pm = Modulus(101)
    full = all_incomplete_sums(1, pm, IntervalSpec(0, 101))
    comp = all_complete_sums(1, pm)
    assert np.max(np.abs(full.values - comp.values)) <= 1e-8 * 101

    rng = np.random.default_rng(3)
    part = all_incomplete_sums(1, pm, IntervalSpec(0, 10))
    for a in rng.integers(0, 101, size=5):
        direct = complex(
            incomplete_kloosterman(SumParams(int(a), 1, pm), IntervalSpec(0, 10))
        )
        assert abs(part.values[int(a)] - direct) <= 1e-8 * 101


def test_all_incomplete_sums_full_period_any_start():
    # (start, start+p] covers every residue once, wherever it sits
    pm = Modulus(97)
    comp = all_complete_sums(3, pm)
    for start in (17, -40, 96):
        full = all_incomplete_sums(3, pm, IntervalSpec(start, 97))
        assert np.max(np.abs(full.values - comp.values)) <= 1e-8 * 97


def test_dft_size_overflow_guard(monkeypatch):
    import kloosterman.spectral as spectral

    monkeypatch.setattr(spectral, "MAX_LENGTH", 8)
    with pytest.raises(SizeOverflow):
        spectral.dft(np.ones(9, dtype=complex))


def test_all_incomplete_sums_edge_cases():
    pm = Modulus(11)
    zero = all_incomplete_sums(4, pm, IntervalSpec(3, 0))
    assert np.max(np.abs(zero.values)) == 0.0
    with pytest.raises(IntervalTooLong):
        all_incomplete_sums(1, pm, IntervalSpec(0, 12))
    # interval placed across a multiple of p: the colliding slot is skipped
    shifted = all_incomplete_sums(2, pm, IntervalSpec(8, 5))
    direct = complex(incomplete_kloosterman(SumParams(0, 2, pm), IntervalSpec(8, 5)))
    assert abs(shifted.values[0] - direct) <= 1e-8 * 11


def test_windowed_mean_value_full_window_closed_form():
    for p, b, m in ((5, 1, 1), (101, 7, 3)):
        pm = Modulus(p)
        spectrum = all_complete_sums(b, pm)
        got = windowed_mean_value(b, pm, m, 0.0, float(p), spectrum)
        mbar = pow(m, -1, p)
        want = p * np.exp(2j * np.pi * ((-b * mbar) % p) / p)
        assert complex(got) == pytest.approx(complex(want), abs=1e-9 * p)
        assert got.term_count == p


def test_windowed_mean_value_empty_window():
    pm = Modulus(11)
    spectrum = all_complete_sums(1, pm)
    got = windowed_mean_value(1, pm, 1, 4.25, 0.5, spectrum)
    assert (got.re, got.im, got.term_count) == (0.0, 0.0, 0)


def test_windowed_mean_value_matches_direct_loop():
    p = 101
    pm = Modulus(p)
    spectrum = all_complete_sums(1, pm)
    got = windowed_mean_value(1, pm, 3, 10.5, 20.0, spectrum)
    acc = 0j
    for a in range(11, 31):  # integers in (10.5, 30.5]
        s = complex(complete_kloosterman(SumParams(a, 1, pm)))
        acc += s * np.exp(2j * np.pi * (3 * a % p) / p)
    assert complex(got) == pytest.approx(acc, abs=1e-6 * p)
    assert got.term_count == 20


def test_windowed_mean_value_long_window_against_spectrum_loop():
    p = 101
    pm = Modulus(p)
    b, m = 5, 17
    spectrum = all_complete_sums(b, pm)
    x, y = 3.7, 2.5 * p
    got = windowed_mean_value(b, pm, m, x, y, spectrum)
    lo, hi = math.floor(x) + 1, math.floor(x + y)
    acc = 0j
    for a in range(lo, hi + 1):
        acc += spectrum.values[a % p] * np.exp(2j * np.pi * (m * a % p) / p)
    assert complex(got) == pytest.approx(acc, abs=1e-8 * p * 3)


def test_windowed_mean_value_additivity():
    p = 97
    pm = Modulus(p)
    spectrum = all_complete_sums(2, pm)
    rng = np.random.default_rng(4)
    for _ in range(6):
        x = float(rng.uniform(-50, 50))
        y1 = float(rng.uniform(0.5, 150))
        y2 = float(rng.uniform(0.5, 150))
        whole = complex(windowed_mean_value(2, pm, 9, x, y1 + y2, spectrum))
        left = complex(windowed_mean_value(2, pm, 9, x, y1, spectrum))
        right = complex(windowed_mean_value(2, pm, 9, x + y1, y2, spectrum))
        assert whole == pytest.approx(left + right, abs=1e-8 * p)


def test_windowed_mean_value_validates_spectrum():
    pm = Modulus(11)
    wrong_kind = all_incomplete_sums(1, pm, IntervalSpec(0, 5))
    with pytest.raises(ValueError):
        windowed_mean_value(1, pm, 1, 0.0, 5.0, wrong_kind)
    other_b = all_complete_sums(2, pm)
    with pytest.raises(ValueError):
        windowed_mean_value(1, pm, 1, 0.0, 5.0, other_b)
