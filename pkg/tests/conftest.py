"""Shared fixtures: sieves, zero sets, and the pooled correlation experiment.

Everything expensive is session-scoped and lazy, so running a single test
module only pays for what it touches.
"""

from pathlib import Path

import numpy as np
import pytest

from zetapair.paircorr import aggregate, empirical_r2, gue_on_bins, theory_on_bins
from zetapair.sieve import build_sieve
from zetapair.singular import twin_prime_constant
from zetapair.special import ZetaEvaluator, mean_density
from zetapair.zeros import compute_zeros

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def zeta_cfg():
    return ZetaEvaluator()


@pytest.fixture(scope="session")
def tables_small():
    return build_sieve(10_000)


@pytest.fixture(scope="session")
def tables_1m():
    return build_sieve(1_000_000 + 16)


@pytest.fixture(scope="session")
def tables_big():
    # covers empirical alpha at N = 1e7 with shifts up to ~200
    return build_sieve(10_000_000 + 256)


@pytest.fixture(scope="session")
def c2_ref(tables_big):
    return twin_prime_constant(10_000_000, tables_big)


@pytest.fixture(scope="session")
def zeros_low():
    return compute_zeros(10.0, 1000.0)


@pytest.fixture(scope="session")
def zeros_high():
    return compute_zeros(2990.0, 12010.0)


@pytest.fixture(scope="session")
def zero_fixture_path():
    return DATA / "zeros_first_100.txt"


@pytest.fixture(scope="session")
def pooled_experiment(zeros_high, tables_1m, zeta_cfg):
    """Pooled empirical R2 over (3000, 12000) plus matched theory curves.

    Windows of 200 mean spacings, bins of width 0.05 up to eps = 3; the
    per-window theory (bin-averaged, unfolded, at the window center) is
    pooled with the same normalization weights as the data.
    """
    lo, hi = 3000.0, 12000.0
    p_cut, k_cut = 20_000, 14
    windows = []
    e = lo
    while True:
        w = 200.0 / mean_density(e)
        if e + w > hi:
            break
        windows.append((e + w / 2.0, w))
        e += w
    ests, curves = [], []
    for center, w in windows:
        est = empirical_r2(zeros_high, center, w, 0.05, 3.0)
        ests.append(est)
        curves.append(theory_on_bins(center, est.bin_edges, zeta_cfg, tables_1m,
                                     p_cut, k_cut))
    pooled = aggregate(ests)
    weights = np.array([e.norms for e in ests])
    from zetapair.paircorr import bin_average

    theory_binned = np.array(
        [bin_average(c, pooled.bin_edges) for c in curves]
    )
    theory_pooled = (theory_binned * weights).sum(axis=0) / weights.sum(axis=0)
    gue_binned = bin_average(gue_on_bins(pooled.bin_edges), pooled.bin_edges)
    n_zeros = sum(
        int(np.sum((zeros_high.ordinates >= c - w / 2) & (zeros_high.ordinates <= c + w / 2)))
        for c, w in windows
    )
    return {
        "pooled": pooled,
        "theory": theory_pooled,
        "gue": gue_binned,
        "n_zeros": n_zeros,
        "n_windows": len(windows),
    }
