"""Ensemble experiments: estimates with uncertainty, constant extraction,
and empirical checks of the concentration and block-correlation statements.

Replicate r of experiment ``tag`` draws its generator from
``SeedSequence(entropy=(master_seed, crc32(tag)), spawn_key=(r,))``, so
sub-experiments are independent streams, reproducible in isolation, and the
aggregates do not depend on scheduling: results land in per-replicate slots
and are reduced in index order regardless of the thread count.
"""

from __future__ import annotations

import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator, PCG64, SeedSequence

from . import _kernels
from .errors import InsufficientReplicatesError, InstrumentationError, ParameterError
from .model import ModelParams, generate, tracked_block_sizes
from .stats import compute_stats
from .theory import block_growth_expectation, constants

# below this tree size the per-replicate work is cheaper than the Python
# call overhead, so replicates run batched inside one kernel call
BATCH_NM_LIMIT = 64

SEED_SCHEME = "SeedSequence(entropy=(master_seed, crc32(tag)), spawn_key=(replicate,))"


def default_threads() -> int:
    env = os.environ.get("MORI_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def replicate_rng(master_seed: int, tag: str, r: int) -> Generator:
    """Independent generator for replicate r of the named experiment."""
    ss = SeedSequence(
        entropy=(int(master_seed), zlib.crc32(tag.encode())), spawn_key=(int(r),)
    )
    return Generator(PCG64(ss))


def _run_indexed(worker, reps: int, threads: int | None):
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or reps < 2:
        for r in range(reps):
            worker(r)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(worker, range(reps), chunksize=max(1, reps // (threads * 8))))


@dataclass(frozen=True)
class StatSummary:
    mean: float
    variance: float
    ci95: float  # normal-theory half width, 1.96 * sqrt(variance / R)

    @classmethod
    def of(cls, values: np.ndarray) -> "StatSummary":
        r = len(values)
        var = float(np.var(values, ddof=1)) if r > 1 else 0.0
        return cls(float(np.mean(values)), var, 1.96 * math.sqrt(var / r))

    def to_dict(self) -> dict:
        return {"mean": self.mean, "variance": self.variance, "ci95": self.ci95}


@dataclass
class EnsembleReport:
    """Aggregate of R independent replicates of one parameter point."""

    params: ModelParams
    replicates: int
    master_seed: int
    tag: str
    epsilon: float
    triangles: StatSummary
    adjacent_pairs: StatSummary
    degenerate_pairs: StatSummary
    max_degree: StatSummary
    clustering: StatSummary | None
    clustering_defined: int
    band_width: float
    tail_exceed_count: int
    seed_scheme: str = SEED_SCHEME
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def tail_exceed_frequency(self) -> float:
        return self.tail_exceed_count / self.replicates

    def replicate_seed_key(self, r: int) -> tuple:
        return (self.master_seed, zlib.crc32(self.tag.encode()), r)

    def to_dict(self) -> dict:
        return {
            "n": self.params.n,
            "m": self.params.m,
            "beta": self.params.beta,
            "replicates": self.replicates,
            "master_seed": self.master_seed,
            "tag": self.tag,
            "seed_scheme": self.seed_scheme,
            "epsilon": self.epsilon,
            "triangles": self.triangles.to_dict(),
            "adjacent_pairs": self.adjacent_pairs.to_dict(),
            "degenerate_pairs": self.degenerate_pairs.to_dict(),
            "max_degree": self.max_degree.to_dict(),
            "clustering": self.clustering.to_dict() if self.clustering else None,
            "clustering_defined": self.clustering_defined,
            "band_width": self.band_width,
            "tail_exceed_count": self.tail_exceed_count,
            "tail_exceed_frequency": self.tail_exceed_frequency,
        }


def deviation_band(n: int, beta: float, epsilon: float) -> float:
    """The concentration band n^((4+beta)/(4+2*beta) + epsilon) for D."""
    return float(n) ** ((4 + beta) / (4 + 2 * beta) + epsilon)


def replicate_uniforms(params: ModelParams, reps: int, master_seed: int,
                       tag: str) -> np.ndarray:
    """The (reps, 2*(nm-1)) matrix of step uniforms, row r from replicate r's stream."""
    width = 2 * (params.nm - 1)
    u_all = np.empty((reps, width))
    for r in range(reps):
        u_all[r] = replicate_rng(master_seed, tag, r).random(width)
    return u_all


def run_ensemble(params: ModelParams, reps: int, master_seed: int,
                 epsilon: float = 0.05, tag: str = "ensemble",
                 threads: int | None = None,
                 keep_raw: bool = False) -> EnsembleReport:
    """R independent replicates with derived seeds; deterministic given master_seed."""
    if reps < 2:
        raise InsufficientReplicatesError(f"need at least 2 replicates, got {reps}")
    tri = np.empty(reps, np.float64)
    pairs = np.empty(reps, np.float64)
    degen = np.empty(reps, np.float64)
    dmax = np.empty(reps, np.float64)
    clus = np.full(reps, np.nan)

    if params.nm <= BATCH_NM_LIMIT:
        u_all = replicate_uniforms(params, reps, master_seed, tag)
        itri = np.empty(reps, np.int64)
        ipairs = np.empty(reps, np.int64)
        idegen = np.empty(reps, np.int64)
        idmax = np.empty(reps, np.int64)

        def chunk(lo_hi):
            lo, hi = lo_hi
            _kernels.ensemble_counters(
                params.nm, params.m, float(params.beta), u_all[lo:hi],
                itri[lo:hi], ipairs[lo:hi], idegen[lo:hi], idmax[lo:hi],
            )

        nthreads = default_threads() if threads is None else max(1, int(threads))
        bounds = np.linspace(0, reps, min(nthreads, reps) + 1, dtype=int)
        spans = list(zip(bounds[:-1], bounds[1:]))
        if len(spans) == 1:
            chunk(spans[0])
        else:
            with ThreadPoolExecutor(max_workers=len(spans)) as pool:
                list(pool.map(chunk, spans))
        tri[:] = itri
        pairs[:] = ipairs
        degen[:] = idegen
        dmax[:] = idmax
        defined_mask = ipairs > 0
        clus[defined_mask] = 3.0 * itri[defined_mask] / ipairs[defined_mask]
    else:
        def worker(r: int):
            g = generate(params, replicate_rng(master_seed, tag, r))
            s = compute_stats(g)
            tri[r] = s.triangles
            pairs[r] = s.adjacent_pairs
            degen[r] = s.degenerate_pairs
            dmax[r] = s.max_degree
            if s.clustering is not None:
                clus[r] = s.clustering

        _run_indexed(worker, reps, threads)

    defined = ~np.isnan(clus)
    band = deviation_band(params.n, params.beta, epsilon)
    exceed = int(np.count_nonzero(np.abs(pairs - pairs.mean()) >= band))
    report = EnsembleReport(
        params=params,
        replicates=reps,
        master_seed=int(master_seed),
        tag=tag,
        epsilon=float(epsilon),
        triangles=StatSummary.of(tri),
        adjacent_pairs=StatSummary.of(pairs),
        degenerate_pairs=StatSummary.of(degen),
        max_degree=StatSummary.of(dmax),
        clustering=StatSummary.of(clus[defined]) if defined.any() else None,
        clustering_defined=int(defined.sum()),
        band_width=band,
        tail_exceed_count=exceed,
    )
    if keep_raw:
        report.raw = {"triangles": tri, "adjacent_pairs": pairs, "clustering": clus}
    return report


@dataclass
class SlopeFit:
    """Least-squares fit of mean triangle counts against ln(n)."""

    grid: list[int]
    means: list[float]
    slope: float
    intercept: float
    slope_stderr: float
    reference_slope: float
    reports: list[EnsembleReport] = field(repr=False, default_factory=list)

    @property
    def slope_ratio(self) -> float | None:
        return self.slope / self.reference_slope if self.reference_slope else None

    def to_dict(self) -> dict:
        return {
            "grid": list(self.grid),
            "means": list(self.means),
            "slope": self.slope,
            "intercept": self.intercept,
            "slope_stderr": self.slope_stderr,
            "reference_slope": self.reference_slope,
            "slope_ratio": self.slope_ratio,
        }


def _ols(x: np.ndarray, y: np.ndarray, w: np.ndarray | None = None):
    if w is None:
        w = np.ones_like(x)
    wsum = w.sum()
    xbar = (w * x).sum() / wsum
    ybar = (w * y).sum() / wsum
    sxx = (w * (x - xbar) ** 2).sum()
    slope = (w * (x - xbar) * (y - ybar)).sum() / sxx
    intercept = ybar - slope * xbar
    resid = y - (intercept + slope * x)
    dof = max(len(x) - 2, 1)
    sigma2 = (w * resid ** 2).sum() / dof
    return float(slope), float(intercept), float(math.sqrt(sigma2 / sxx))


def fit_triangle_slope(m: int, beta: float, grid, reps: int, master_seed: int,
                       threads: int | None = None,
                       weighted: bool = False) -> SlopeFit:
    """Estimate the triangle log-slope by regressing ensemble means on ln(n).

    Fitting the slope sidesteps the unknown additive constant in the triangle
    expectation; the intercept absorbs it.
    """
    grid = [int(n) for n in grid]
    if len(grid) < 4 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ParameterError("grid must be strictly increasing with at least 4 points")
    if reps < 2:
        raise InsufficientReplicatesError(f"need at least 2 replicates, got {reps}")
    reports = [
        run_ensemble(ModelParams(n, m, beta), reps, master_seed, tag=f"grid:{n}",
                     threads=threads)
        for n in grid
    ]
    x = np.log(np.array(grid, np.float64))
    y = np.array([rep.triangles.mean for rep in reports])
    w = None
    if weighted:
        w = np.array([
            reps / rep.triangles.variance if rep.triangles.variance > 0 else 0.0
            for rep in reports
        ])
        if not w.any():
            w = None
    slope, intercept, stderr = _ols(x, y, w)
    return SlopeFit(grid, y.tolist(), slope, intercept, stderr,
                    constants(m, beta).c1, reports)


@dataclass
class ConcentrationReport:
    """Empirical exceedance of the deviation band, with the band/sigma diagnostic."""

    params: ModelParams
    replicates: int
    master_seed: int
    epsilon: float
    band_width: float
    exceed_count: int
    mean_pairs: float
    observed_std: float

    @property
    def exceed_frequency(self) -> float:
        return self.exceed_count / self.replicates

    @property
    def band_to_sigma(self) -> float:
        return self.band_width / self.observed_std if self.observed_std else math.inf

    def to_dict(self) -> dict:
        return {
            "n": self.params.n,
            "m": self.params.m,
            "beta": self.params.beta,
            "replicates": self.replicates,
            "master_seed": self.master_seed,
            "epsilon": self.epsilon,
            "band_width": self.band_width,
            "exceed_count": self.exceed_count,
            "exceed_frequency": self.exceed_frequency,
            "mean_adjacent_pairs": self.mean_pairs,
            "observed_std": self.observed_std,
            "band_to_sigma": self.band_to_sigma,
        }


def concentration_experiment(params: ModelParams, reps: int, master_seed: int,
                             epsilon: float,
                             threads: int | None = None) -> ConcentrationReport:
    """Frequency of |D - mean(D)| exceeding the band (ensemble mean proxies E[D])."""
    report = run_ensemble(params, reps, master_seed, epsilon=epsilon,
                          tag="concentration", threads=threads)
    return ConcentrationReport(
        params=params,
        replicates=reps,
        master_seed=int(master_seed),
        epsilon=float(epsilon),
        band_width=report.band_width,
        exceed_count=report.tail_exceed_count,
        mean_pairs=report.adjacent_pairs.mean,
        observed_std=math.sqrt(report.adjacent_pairs.variance),
    )


@dataclass
class BlockCorrelationReport:
    """Covariance estimate for one tracked block per owner, plus the growth check."""

    params: ModelParams
    owners: tuple[int, int]
    anchor: int
    horizon: int
    replicates: int
    master_seed: int
    mean_a: float
    se_a: float
    mean_b: float
    se_b: float
    covariance: float
    covariance_se: float
    theory_mean: float

    def to_dict(self) -> dict:
        return {
            "n": self.params.n,
            "m": self.params.m,
            "beta": self.params.beta,
            "owners": list(self.owners),
            "anchor": self.anchor,
            "horizon": self.horizon,
            "replicates": self.replicates,
            "master_seed": self.master_seed,
            "mean_a": self.mean_a,
            "se_a": self.se_a,
            "mean_b": self.mean_b,
            "se_b": self.se_b,
            "covariance": self.covariance,
            "covariance_se": self.covariance_se,
            "theory_mean": self.theory_mean,
        }


def block_correlation_experiment(params: ModelParams, owner_pair, anchor: int,
                                 horizon: int, reps: int, master_seed: int,
                                 threads: int | None = None) -> BlockCorrelationReport:
    """Estimate E[|A||B|] - E[|A|]E[|B|] for one non-base block per owner.

    The tracked block of each owner is the one containing its oldest anchor
    half-edge, a singleton at the anchor, so its mean size is also compared
    against the gamma-ratio growth law.
    """
    j, k = owner_pair
    if j == k:
        raise InstrumentationError("owners must be distinct")
    if reps < 2:
        raise InsufficientReplicatesError(f"need at least 2 replicates, got {reps}")
    owners = np.array([j, k], np.int64)
    a = np.empty(reps, np.float64)
    b = np.empty(reps, np.float64)

    def worker(r: int):
        sizes = tracked_block_sizes(
            params, replicate_rng(master_seed, "blocks", r), owners, anchor, horizon
        )
        if len(sizes[0]) < 2 or len(sizes[1]) < 2:
            raise InstrumentationError(
                "an owner has no half-edge at the anchor; nothing to track"
            )
        a[r] = sizes[0][1]
        b[r] = sizes[1][1]

    _run_indexed(worker, reps, threads)

    cov_terms = (a - a.mean()) * (b - b.mean())
    covariance = float(cov_terms.sum() / (reps - 1))
    covariance_se = float(np.std(cov_terms, ddof=1) / math.sqrt(reps))
    return BlockCorrelationReport(
        params=params,
        owners=(int(j), int(k)),
        anchor=int(anchor),
        horizon=int(horizon),
        replicates=reps,
        master_seed=int(master_seed),
        mean_a=float(a.mean()),
        se_a=float(np.std(a, ddof=1) / math.sqrt(reps)),
        mean_b=float(b.mean()),
        se_b=float(np.std(b, ddof=1) / math.sqrt(reps)),
        covariance=covariance,
        covariance_se=covariance_se,
        theory_mean=block_growth_expectation(anchor, horizon, params.beta),
    )
