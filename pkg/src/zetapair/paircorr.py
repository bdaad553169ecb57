"""Two-point statistics of zero ordinates and the matching theory curves.

The empirical side histograms unfolded ordinate differences over a height
window, normalized so a unit-density Poisson process gives 1 in every
bin.  The theory side assembles the height-dependent curve

    total(eps) = dbar(E)^2 + diag(eps) + offdiag(eps)

whose diagonal term combines the second log-derivative of zeta on the
1-line with a prime-power sum, and whose off-diagonal term is
|zeta(1+i eps)|^2 exp(-2 pi i eps dbar(E)) times an absolutely convergent
product over primes, plus the complex conjugate.  In unfolded units the
curve tends to the random-matrix limit 1 - (sin(pi eps)/(pi eps))^2 as E
grows.

Oscillatory theory is always bin-averaged (5-point Gauss-Legendre per
bin) before it is compared with a histogram.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sieve import SieveTables
from .special import TWO_PI, ZetaEvaluator, log_zeta_dd, mean_density, zeta_one_line
from .zeros import ZeroList

__all__ = [
    "CorrelationEstimate",
    "TheoryCurve",
    "CompareReport",
    "InsufficientDataError",
    "GridMismatchError",
    "empirical_r2",
    "aggregate",
    "r2_diag_limit",
    "r2_off_limit",
    "gue_r2",
    "r2_diag_finite",
    "r2_off_finite",
    "theory_curve",
    "theory_on_bins",
    "gue_on_bins",
    "bin_average",
    "compare",
    "poisson_noise_floor",
]

DEFAULT_PRIME_CUTOFF = 100_000
DEFAULT_POWER_CUTOFF = 20


class InsufficientDataError(ValueError):
    pass


class GridMismatchError(ValueError):
    pass


# -- empirical side ----------------------------------------------------------

@dataclass(frozen=True)
class CorrelationEstimate:
    """Binned two-point density of unfolded ordinate differences.

    values[b] estimates R2 on bin b in unfolded units; counts/norms hold
    the raw pair counts and the Poisson-calibrated denominators so
    estimates from different windows can be pooled.
    """

    bin_edges: np.ndarray
    values: np.ndarray
    window: tuple[float, float]  # (E_center, width)
    pair_count: int
    normalization: str = "unfolded_density_squared"
    counts: np.ndarray = field(default=None, repr=False)
    norms: np.ndarray = field(default=None, repr=False)

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


def _pair_differences(x: np.ndarray, max_diff: float) -> np.ndarray:
    hi = np.searchsorted(x, x + max_diff, side="right")
    parts = [x[i + 1 : hi[i]] - x[i] for i in range(len(x)) if hi[i] > i + 1]
    if not parts:
        return np.empty(0)
    return np.concatenate(parts)


def empirical_r2(
    zl: ZeroList,
    e_center: float,
    width: float,
    bin_width: float,
    eps_max: float,
) -> CorrelationEstimate:
    """Histogram of unfolded differences over the window e_center +- width/2.

    Normalization: a Poisson process of unit (unfolded) density would give
    ~1 in every bin; both the measured point density and the window-edge
    deficit (pairs whose partner falls outside) are divided out.
    """
    if bin_width <= 0 or eps_max <= bin_width:
        raise ValueError("need 0 < bin_width < eps_max")
    lo, hi = e_center - width / 2.0, e_center + width / 2.0
    if lo < zl.range[0] or hi > zl.range[1]:
        raise ValueError("window extends beyond the zero list range")
    sel = zl.ordinates[(zl.ordinates >= lo) & (zl.ordinates <= hi)]
    if len(sel) < 100:
        raise InsufficientDataError(
            f"only {len(sel)} zeros in window, need at least 100"
        )
    dens = mean_density(e_center)
    x = sel * dens
    length = width * dens
    lam = len(x) / length
    nbins = int(round(eps_max / bin_width))
    edges = np.linspace(0.0, nbins * bin_width, nbins + 1)
    diffs = _pair_differences(x, float(edges[-1]))
    counts = np.histogram(diffs, bins=edges)[0].astype(np.float64)
    centers = 0.5 * (edges[:-1] + edges[1:])
    norms = lam * lam * bin_width * (length - centers)
    return CorrelationEstimate(
        edges,
        counts / norms,
        (float(e_center), float(width)),
        int(counts.sum()),
        counts=counts,
        norms=norms,
    )


def aggregate(estimates: list[CorrelationEstimate]) -> CorrelationEstimate:
    """Pool window estimates on a shared bin grid (counts and norms add)."""
    if not estimates:
        raise ValueError("nothing to aggregate")
    edges = estimates[0].bin_edges
    for est in estimates[1:]:
        if est.bin_edges.shape != edges.shape or not np.allclose(est.bin_edges, edges):
            raise GridMismatchError("estimates use different bin grids")
    counts = np.sum([e.counts for e in estimates], axis=0)
    norms = np.sum([e.norms for e in estimates], axis=0)
    centers = np.array([e.window[0] for e in estimates])
    widths = np.array([e.window[1] for e in estimates])
    span = (np.max(centers + widths / 2) + np.min(centers - widths / 2)) / 2.0
    total_w = float(np.max(centers + widths / 2) - np.min(centers - widths / 2))
    return CorrelationEstimate(
        edges,
        counts / norms,
        (float(span), total_w),
        int(counts.sum()),
        counts=counts,
        norms=norms,
    )


# -- limiting (unfolded) theory ----------------------------------------------

def _nonzero(eps) -> np.ndarray:
    arr = np.asarray(eps, dtype=np.float64)
    if np.any(arr == 0.0):
        raise ValueError("the limiting forms are singular at eps = 0")
    return arr


def r2_diag_limit(eps):
    """Unfolded diagonal limit: -1 / (2 pi^2 eps^2)."""
    arr = _nonzero(eps)
    out = -1.0 / (2.0 * np.pi**2 * arr**2)
    return float(out) if np.isscalar(eps) or arr.ndim == 0 else out


def r2_off_limit(eps):
    """Unfolded off-diagonal limit: cos(2 pi eps) / (2 pi^2 eps^2)."""
    arr = _nonzero(eps)
    out = np.cos(TWO_PI * arr) / (2.0 * np.pi**2 * arr**2)
    return float(out) if np.isscalar(eps) or arr.ndim == 0 else out


def gue_r2(eps):
    """Random-matrix pair correlation 1 - (sin(pi eps)/(pi eps))^2."""
    arr = np.asarray(eps, dtype=np.float64)
    out = 1.0 - np.sinc(arr) ** 2
    return float(out) if np.isscalar(eps) or arr.ndim == 0 else out


# -- finite-height theory ------------------------------------------------------

def _prime_power_terms(tables: SieveTables, p_cut: int, k_cut: int):
    """Weights/log-frequencies of the diagonal prime-power sum, cached."""
    key = ("ppw", p_cut, k_cut)
    hit = tables._bulk.get(key)
    if hit is not None:
        return hit
    ps = tables.primes[: np.searchsorted(tables.primes, p_cut, side="right")]
    ps = ps.astype(np.float64)
    logs, weights = [], []
    for k in range(1, k_cut + 1):
        keep = (k + 1) * np.log(ps) <= 40.0  # p^-(k+1) >= ~4e-18
        if not np.any(keep):
            break
        lp = np.log(ps[keep])
        logs.append((k + 1) * lp)
        weights.append(lp**2 * k * np.exp(-(k + 1) * lp))
    out = (np.concatenate(logs), np.concatenate(weights))
    tables._bulk[key] = out
    return out


def r2_diag_finite(
    eps,
    cfg: ZetaEvaluator,
    tables: SieveTables,
    p_cut: int = DEFAULT_PRIME_CUTOFF,
    k_cut: int = DEFAULT_POWER_CUTOFF,
):
    """Finite-height diagonal term (absolute units, real by construction).

    -(1/4 pi^2) [ d^2/dw^2 ln zeta(1+iw)|_eps
                  + sum_{p <= P, 1 <= k <= K} (ln p)^2 k p^-(1+i eps)(k+1) ]
    plus the complex conjugate.  The k = 0 term carries a factor k and
    vanishes identically, so the sum starts at k = 1.
    """
    arr = np.atleast_1d(np.asarray(eps, dtype=np.float64))
    if p_cut > tables.limit:
        raise ValueError("prime cutoff exceeds sieve limit")
    logs, weights = _prime_power_terms(tables, p_cut, k_cut)
    x = log_zeta_dd(cfg, arr)
    x = x + np.exp(-1j * np.multiply.outer(arr, logs)) @ weights
    out = -np.real(x) / (2.0 * np.pi**2)
    scalar = np.isscalar(eps) or np.asarray(eps).ndim == 0
    return float(out[0]) if scalar else out


def _off_product(tables: SieveTables, p_cut: int, eps: np.ndarray) -> np.ndarray:
    ps = tables.primes[: np.searchsorted(tables.primes, p_cut, side="right")]
    ps = ps.astype(np.float64)
    log_p = np.log(ps)
    prod = np.ones(eps.shape, dtype=np.complex128)
    chunk = max(1, (1 << 22) // max(1, eps.size))
    for lo in range(0, len(ps), chunk):
        sl = slice(lo, lo + chunk)
        ratio = (1.0 - np.exp(-1j * np.multiply.outer(eps, log_p[sl]))) / (ps[sl] - 1.0)
        prod *= np.prod(1.0 - ratio * ratio, axis=-1)
    return prod


def r2_off_finite(
    eps,
    e_height: float,
    cfg: ZetaEvaluator,
    tables: SieveTables,
    p_cut: int = DEFAULT_PRIME_CUTOFF,
):
    """Finite-height off-diagonal term (absolute units, real).

    (1/4 pi^2) |zeta(1+i eps)|^2 exp(-2 pi i eps dbar(E))
        prod_{p <= P} (1 - ((1 - p^-i eps)/(p - 1))^2)  + c.c.
    """
    if e_height <= TWO_PI:
        raise ValueError("height must exceed 2 pi for a positive mean density")
    if p_cut > tables.limit:
        raise ValueError("prime cutoff exceeds sieve limit")
    arr = np.atleast_1d(np.asarray(eps, dtype=np.float64))
    z = zeta_one_line(cfg, arr)
    mod2 = np.real(z * np.conj(z))
    phase = np.exp(-1j * TWO_PI * arr * mean_density(e_height))
    x = mod2 * phase * _off_product(tables, p_cut, arr) / (4.0 * np.pi**2)
    out = 2.0 * np.real(x)
    scalar = np.isscalar(eps) or np.asarray(eps).ndim == 0
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class TheoryCurve:
    """Pointwise theory curve; total = constant_term + diag + offdiag."""

    epsilons: np.ndarray
    constant_term: float
    diag: np.ndarray
    offdiag: np.ndarray
    total: np.ndarray
    e_height: float
    truncation: dict
    unfolded: bool


def theory_curve(
    e_height: float,
    epsilons,
    cfg: ZetaEvaluator,
    tables: SieveTables,
    p_cut: int = DEFAULT_PRIME_CUTOFF,
    k_cut: int = DEFAULT_POWER_CUTOFF,
    unfolded: bool = True,
) -> TheoryCurve:
    """Evaluate the finite-height curve on a grid.

    With unfolded=True the grid is in mean-spacing units: arguments are
    rescaled by 1/dbar(E) and all terms divided by dbar(E)^2, so the
    constant term is exactly 1.
    """
    eps = np.asarray(epsilons, dtype=np.float64)
    dens = mean_density(e_height)
    if unfolded:
        args, scale, const = eps / dens, 1.0 / dens**2, 1.0
    else:
        args, scale, const = eps, 1.0, dens**2
    diag = scale * r2_diag_finite(args, cfg, tables, p_cut, k_cut)
    off = scale * r2_off_finite(args, e_height, cfg, tables, p_cut)
    return TheoryCurve(
        eps,
        const,
        diag,
        off,
        const + diag + off,
        float(e_height),
        {"prime_cutoff": p_cut, "power_cutoff": k_cut},
        unfolded,
    )


# -- bin-averaged comparison ---------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)


def _bin_quadrature_nodes(edges: np.ndarray) -> np.ndarray:
    centers = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    return (centers[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()


def theory_on_bins(
    e_height: float,
    edges: np.ndarray,
    cfg: ZetaEvaluator,
    tables: SieveTables,
    p_cut: int = DEFAULT_PRIME_CUTOFF,
    k_cut: int = DEFAULT_POWER_CUTOFF,
) -> TheoryCurve:
    """Unfolded theory evaluated on the 5-point quadrature grid of the bins."""
    return theory_curve(
        e_height, _bin_quadrature_nodes(np.asarray(edges)), cfg, tables, p_cut, k_cut
    )


def gue_on_bins(edges: np.ndarray) -> TheoryCurve:
    """The limit curve on the same quadrature layout (constant term 1)."""
    nodes = _bin_quadrature_nodes(np.asarray(edges))
    diag = r2_diag_limit(nodes)
    off = r2_off_limit(nodes)
    return TheoryCurve(
        nodes, 1.0, diag, off, 1.0 + diag + off, math.inf, {}, True
    )


def bin_average(curve: TheoryCurve, edges: np.ndarray) -> np.ndarray:
    """Collapse a node-layout curve to per-bin averages."""
    edges = np.asarray(edges)
    expect = _bin_quadrature_nodes(edges)
    if curve.epsilons.shape != expect.shape or not np.allclose(
        curve.epsilons, expect, rtol=0, atol=1e-12
    ):
        raise GridMismatchError(
            "theory grid is not the 5-node quadrature layout of these bins"
        )
    vals = curve.total.reshape(-1, 5)
    return vals @ (_GL_WEIGHTS / 2.0)


@dataclass(frozen=True)
class CompareReport:
    bin_centers: np.ndarray
    empirical: np.ndarray
    theory_binned: np.ndarray
    residuals: np.ndarray
    ms_residual: float


def compare(est: CorrelationEstimate, curve: TheoryCurve) -> CompareReport:
    """Residuals of a histogram against the bin-averaged theory curve."""
    theory = bin_average(curve, est.bin_edges)
    res = est.values - theory
    return CompareReport(
        est.bin_centers, est.values, theory, res, float(np.mean(res**2))
    )


def poisson_noise_floor(est: CorrelationEstimate, reference: np.ndarray | None = None) -> float:
    """Expected mean-square residual from counting noise alone.

    Var(value_b) ~ R2_b / norm_b for Poisson counts; ``reference`` supplies
    R2_b (bin-averaged theory), defaulting to 1.
    """
    ref = np.ones_like(est.norms) if reference is None else np.asarray(reference)
    return float(np.mean(ref / est.norms))
