import numpy as np
import pytest

from ranklaw.corpus import RawRankList
from ranklaw.estimator import ParameterSet
from ranklaw.series import compress
from ranklaw.synth import synthesize

# criterion number -> (passed, message); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        status, msg = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{status}] criterion {key}: {msg}")


@pytest.fixture
def small_series():
    return compress(RawRankList.from_frequencies([5, 3, 3, 1, 1]))


@pytest.fixture(scope="session")
def law_series():
    """Word-like synthetic series with a visible tail (V ~ 6.8e5)."""
    truth = ParameterSet(alpha=0.9, beta=1.5, log10_gamma=4.0, log10_C=14.0)
    return truth, compress(synthesize(truth, 10**6))


@pytest.fixture(scope="session")
def exact_series():
    """Synthetic series truncated while frequencies are still large, so
    integer rounding is negligible (relative error < 1e-4)."""
    truth = ParameterSet(alpha=0.9, beta=1.5, log10_gamma=4.0, log10_C=16.0)
    return truth, compress(synthesize(truth, 10**5))


def random_raw(rng, vocab_size, max_freq=None):
    max_freq = max_freq or max(2, 3 * vocab_size)
    freqs = np.sort(rng.integers(1, max_freq, size=vocab_size))[::-1]
    return RawRankList.from_frequencies(freqs)
