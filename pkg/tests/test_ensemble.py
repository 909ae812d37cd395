import math

import numpy as np
import pytest
from scipy import stats

from eraser_sim import kernels
from eraser_sim.ensemble import (
    FWHM_TO_SIGMA,
    EnsembleSpec,
    UndefinedCoherenceError,
    coherence_report,
    derive_seed,
    sample_block,
    sample_pair,
)
from eraser_sim.model import TWO_PI, InputError

N_STAT = 100_000


def test_zero_bandwidth_gives_zero_detuning(backend):
    block = sample_block(EnsembleSpec(1000, 3, 0.0))
    assert np.all(block.delta_f == 0.0)


def test_sample_pair_is_deterministic(backend):
    spec = EnsembleSpec(50, 11, 1.5)
    assert sample_pair(spec, 17) == sample_pair(spec, 17)
    assert sample_pair(spec, 17) != sample_pair(spec, 18)
    # Same draw through the block path.
    assert sample_block(spec)[17] == sample_pair(spec, 17)


def test_sample_pair_depends_on_seed_and_index_only():
    a = sample_pair(EnsembleSpec(100, 5, 1.0), 40)
    b = sample_pair(EnsembleSpec(10_000, 5, 1.0), 40)
    assert a == b


@pytest.mark.parametrize("index", [-1, 10, 2.5])
def test_sample_pair_index_out_of_range(index):
    with pytest.raises(InputError):
        sample_pair(EnsembleSpec(10, 0, 1.0), index)


def test_ensemble_spec_validation():
    with pytest.raises(InputError):
        EnsembleSpec(0, 1, 1.0)
    with pytest.raises(InputError):
        EnsembleSpec(5, -1, 1.0)
    with pytest.raises(InputError):
        EnsembleSpec(5, 2**64, 1.0)
    with pytest.raises(InputError):
        EnsembleSpec(5, 1, -0.5)


def test_phase_ranges(backend):
    b = sample_block(EnsembleSpec(N_STAT, 9, 1.0))
    for arr in (b.eta, b.zeta_s, b.zeta_id, b.theta_id):
        assert arr.min() >= 0.0 and arr.max() < TWO_PI


def test_detuning_statistics(backend):
    n = N_STAT
    df = sample_block(EnsembleSpec(n, 2024, 1.0)).delta_f
    sd = df.std(ddof=1)
    assert abs(df.mean()) <= 3 * sd / math.sqrt(n)
    # Two independent FWHM estimators: moment-based and interquartile-based.
    fwhm_sd = sd / FWHM_TO_SIGMA
    iqr = np.subtract(*np.percentile(df, [75, 25]))
    fwhm_iqr = iqr / (2 * stats.norm.ppf(0.75)) / FWHM_TO_SIGMA
    assert fwhm_sd == pytest.approx(1.0, rel=0.03)
    assert fwhm_iqr == pytest.approx(1.0, rel=0.03)
    assert stats.kstest(df, "norm", args=(0, FWHM_TO_SIGMA)).pvalue > 1e-3


def test_eta_uniform_ks(backend):
    eta = sample_block(EnsembleSpec(N_STAT, 77, 1.0)).eta
    assert stats.kstest(eta, "uniform", args=(0, TWO_PI)).pvalue > 1e-3


def test_detuning_sign_symmetry(backend):
    df = sample_block(EnsembleSpec(N_STAT, 78, 2.0)).delta_f
    half = N_STAT // 2
    # Compare the two halves so the samples are independent.
    assert stats.ks_2samp(df[:half], -df[half:]).pvalue > 1e-3


def test_phases_mutually_independent():
    b = sample_block(EnsembleSpec(N_STAT, 5, 1.0))
    c = np.corrcoef([b.eta, b.zeta_s, b.zeta_id, b.theta_id, b.delta_f])
    off = c[~np.eye(5, dtype=bool)]
    assert np.max(np.abs(off)) < 5 / math.sqrt(N_STAT)


def test_disjoint_ranges_match_single_sequence(backend):
    spec = EnsembleSpec(10_000, 99, 0.7)
    full = sample_block(spec)
    parts = [sample_block(spec, lo, hi) for lo, hi in [(0, 3333), (3333, 7000), (7000, 10_000)]]
    for name in ("delta_f", "eta", "zeta_s", "zeta_id", "theta_id"):
        joined = np.concatenate([getattr(p, name) for p in parts])
        assert np.array_equal(joined, getattr(full, name))


def test_backends_agree():
    if "numba" not in kernels.available_backends():
        pytest.skip("numba not installed")
    key = kernels.seed_key(31)
    a = kernels.draw_pairs(key, 0, 5000, 0.8, name="numpy")
    b = kernels.draw_pairs(key, 0, 5000, 0.8, name="numba")
    for x, y in zip(a[1:], b[1:]):
        assert np.array_equal(x, y)  # uniform phases are exact
    np.testing.assert_allclose(a[0], b[0], rtol=0, atol=1e-12)


def test_coherence_report_examples():
    r = coherence_report(EnsembleSpec(1, 0, 1.0), 1.0)
    assert (r.tau_0, r.tau_j_min) == (1.0, 1.0)
    r = coherence_report(EnsembleSpec(1, 0, 2.0), 0.1)
    assert r.tau_0 == 0.5
    assert r.tau_j_min == pytest.approx(5.0, rel=1e-15)


@pytest.mark.parametrize("ratio", [0.9, 0.5, 0.01, 1e-6])
def test_per_photon_coherence_exceeds_ensemble(ratio):
    r = coherence_report(EnsembleSpec(1, 0, 3.0), ratio)
    assert r.tau_j_min > r.tau_0


def test_coherence_report_errors():
    with pytest.raises(UndefinedCoherenceError):
        coherence_report(EnsembleSpec(1, 0, 0.0), 0.5)
    with pytest.raises(InputError):
        coherence_report(EnsembleSpec(1, 0, 1.0), 0.0)
    with pytest.raises(InputError):
        coherence_report(EnsembleSpec(1, 0, 1.0), 1.5)


def test_derive_seed():
    assert derive_seed(42, 3) == derive_seed(42, 3)
    assert len({derive_seed(42, k) for k in range(100)}) == 100
    assert derive_seed(42, 0) != derive_seed(43, 0)
