"""Monte Carlo harness: ties sampling and geometry to the analytic closed
forms, and implements the statistical tests of the probabilistic lemmas.

Trial i of a run always consumes substream i of the configured seed, and
results are reduced in trial order, so output is identical for any worker
count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Optional

import numpy as np
from scipy.stats import chi2 as _chi2

from . import analytic, geometry
from .sampling import ProcessSpec, RandomStream, sample_uniform_sphere

POLE = np.array([0.0, 0.0, 1.0])
Z_THRESHOLD = 4.0
KS_99 = 1.6276  # asymptotic 99% Kolmogorov quantile

ALL_STATISTICS = ("width", "area", "volume", "edge_length",
                  "acute_fraction", "min_distance")


@dataclass(frozen=True)
class ExperimentConfig:
    process: ProcessSpec
    trials: int
    seed: int
    statistics: tuple = ("width", "area", "volume")
    histogram_bins: int = 200
    workers: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.histogram_bins < 2:
            raise ValueError("histogram_bins must be >= 2")
        unknown = set(self.statistics) - set(ALL_STATISTICS)
        if unknown:
            raise ValueError(f"unknown statistics: {sorted(unknown)}")


@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean: float
    variance: float
    stderr: float
    minimum: float
    maximum: float
    skewness: float
    histogram: Optional[tuple] = None  # (bin_edges, counts)


@dataclass(frozen=True)
class ZReport:
    statistic_name: str
    observed_mean: float
    analytic_value: float
    stderr: float
    z: float
    threshold: float = Z_THRESHOLD

    @property
    def passed(self) -> bool:
        return abs(self.z) <= self.threshold


def summarize(values: np.ndarray, bins: int = 0) -> SummaryStats:
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    count = len(v)
    mean = float(v.mean())
    var = float(v.var(ddof=1)) if count > 1 else 0.0
    std = math.sqrt(var)
    skew = float(((v - mean) ** 3).mean() / std ** 3) if std > 0 else 0.0
    hist = None
    if bins:
        counts, edges = np.histogram(v, bins=bins)
        hist = (edges, counts)
    return SummaryStats(count, mean, var, math.sqrt(var / count) if count else 0.0,
                        float(v.min()), float(v.max()), skew, hist)


def z_report(name: str, stats: SummaryStats, analytic_value: float,
             threshold: float = Z_THRESHOLD) -> ZReport:
    z = (stats.mean - analytic_value) / stats.stderr if stats.stderr > 0 \
        else 0.0
    return ZReport(name, stats.mean, analytic_value, stats.stderr, z, threshold)


def analytic_value(spec: ProcessSpec, statistic: str) -> Optional[float]:
    """Closed-form expectation for a statistic under a process, if known."""
    iv = {"width": 1, "area": 2, "volume": 3}.get(statistic)
    if spec.kind == "uniform":
        if iv:
            return analytic.expected_iv_uniform(iv, spec.n)
        if statistic == "edge_length" and spec.n >= 3:
            return analytic.expected_edge_length_uniform(spec.n)
        if statistic == "acute_fraction" and spec.n >= 3:
            return 0.5
        if statistic == "min_distance":
            return analytic.expected_min_distance(spec.n)
    elif spec.kind == "symmetric":
        if iv:
            return analytic.expected_iv_symmetric(iv, spec.n)
    elif spec.kind == "poisson":
        if iv:
            return analytic.expected_iv_poisson(iv, spec.intensity)
        if statistic == "edge_length":
            return analytic.expected_edge_length_poisson(spec.intensity)
    elif spec.kind == "homeoid":
        if iv:
            return analytic.expected_iv_ellipsoid(iv, spec.n, spec.ellipsoid)
    return None


def _trial_values(spec: ProcessSpec, stream: RandomStream,
                  statistics: tuple) -> dict:
    pts = spec.sample(stream)
    n = len(pts)
    out = {}
    if "min_distance" in statistics:
        from .sampling import min_distance_to_pole
        out["min_distance"] = min_distance_to_pole(pts, POLE)[0] if n else np.nan

    hull_stats = [s for s in statistics if s != "min_distance"]
    if not hull_stats:
        return out
    if n >= 3:
        m = geometry.measure(geometry.convex_hull(pts))
        vals = {"width": m.width, "area": m.area, "volume": m.volume,
                "edge_length": m.edge_length,
                "acute_fraction": m.acute_facets / m.facet_count}
    elif n == 2:
        # A segment: mean width is half its length; everything else is 0.
        vals = {"width": float(np.linalg.norm(pts[0] - pts[1])) / 2.0,
                "area": 0.0, "volume": 0.0, "edge_length": 0.0,
                "acute_fraction": np.nan}
    else:
        vals = {"width": 0.0, "area": 0.0, "volume": 0.0, "edge_length": 0.0,
                "acute_fraction": np.nan}
    for s in hull_stats:
        out[s] = vals[s]
    return out


_RETRY_SHIFT = 1 << 48


def _run_chunk(args) -> tuple:
    config, lo, hi = args
    base = RandomStream(config.seed)
    cols = {s: np.empty(hi - lo) for s in config.statistics}
    failures = 0
    for i in range(lo, hi):
        for attempt in range(8):
            try:
                vals = _trial_values(config.process,
                                     base.substream(i + attempt * _RETRY_SHIFT),
                                     config.statistics)
                break
            except geometry.GeometryError:
                failures += 1
        else:  # pragma: no cover
            raise RuntimeError("trial failed 8 times; degenerate process?")
        for s in config.statistics:
            cols[s][i - lo] = vals[s]
    return cols, failures


def run(config: ExperimentConfig) -> dict:
    """Run all trials; returns statistic -> (SummaryStats, ZReport | None)."""
    workers = config.workers
    chunk = max(1024, config.trials // (8 * max(workers, 1)))
    ranges = [(config, lo, min(lo + chunk, config.trials))
              for lo in range(0, config.trials, chunk)]
    if workers > 1 and len(ranges) > 1:
        with Pool(workers) as pool:
            pieces = pool.map(_run_chunk, ranges)
    else:
        pieces = [_run_chunk(r) for r in ranges]
    failures = sum(f for _, f in pieces)
    if failures > max(1, config.trials * 1e-4):
        raise RuntimeError(f"{failures} degenerate trials out of {config.trials}")

    out = {}
    for s in config.statistics:
        values = np.concatenate([cols[s] for cols, _ in pieces])
        stats = summarize(values, config.histogram_bins)
        target = analytic_value(config.process, s)
        report = z_report(s, stats, target) if target is not None else None
        out[s] = (stats, report)
    return out


# -- acute-facet experiments -------------------------------------------------

def acute_fraction(n: int, trials: int, seed: int,
                   workers: int = 0) -> tuple[SummaryStats, ZReport]:
    config = ExperimentConfig(ProcessSpec("uniform", n=n), trials, seed,
                              statistics=("acute_fraction",), workers=workers)
    return run(config)["acute_fraction"]


def planar_acute_fraction(trials: int, seed: int) -> tuple[SummaryStats, ZReport]:
    """Control experiment on the unit circle, where the acute probability is
    1/4 instead of 1/2: a triangle inscribed in a circle is acute iff it
    contains the center, i.e. iff every arc between consecutive vertices is
    shorter than pi."""
    g = RandomStream(seed).generator()
    theta = np.sort(g.uniform(0.0, 2.0 * np.pi, (trials, 3)), axis=1)
    gaps = np.column_stack([np.diff(theta, axis=1),
                            2.0 * np.pi - (theta[:, 2] - theta[:, 0])])
    acute = (gaps < np.pi).all(axis=1).astype(float)
    stats = summarize(acute)
    return stats, z_report("planar_acute", stats, 0.25)


@dataclass(frozen=True)
class BucketRow:
    bucket: int
    lo: float
    hi: float
    count: int
    observed: float
    expected: float
    z: float

    @property
    def passed(self) -> bool:
        return abs(self.z) <= Z_THRESHOLD


@dataclass(frozen=True)
class BucketTable:
    rows: list
    chi_square: float
    chi_square_threshold: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows) and \
            self.chi_square <= self.chi_square_threshold


def shape_size_independence(n: int, trials: int, buckets: int,
                            seed: int) -> BucketTable:
    """Bucket hull facets by circumradius quantile; under shape-size
    independence every bucket's acute fraction is 1/2."""
    base = RandomStream(seed)
    radii, acute = [], []
    for i in range(trials):
        p = geometry.convex_hull(sample_uniform_sphere(n, base.substream(i)))
        a, b, c = (p.vertices[p.facets[:, j]] for j in range(3))
        normals = np.cross(b - a, c - a)
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        h = np.abs(np.einsum("ij,ij->i", normals, a))
        radii.append(np.sqrt(np.maximum(1.0 - h * h, 0.0)))
        acute.append(geometry._acute_mask(a, b, c))
    radii = np.concatenate(radii)
    acute = np.concatenate(acute).astype(float)
    order = np.argsort(radii, kind="stable")
    radii, acute = radii[order], acute[order]
    edges_idx = np.linspace(0, len(radii), buckets + 1).astype(int)
    rows, chi = [], 0.0
    for bkt in range(buckets):
        lo, hi = edges_idx[bkt], edges_idx[bkt + 1]
        frac = acute[lo:hi].mean()
        z = (frac - 0.5) / math.sqrt(0.25 / (hi - lo))
        chi += z * z
        rows.append(BucketRow(bkt, float(radii[lo]), float(radii[hi - 1]),
                              hi - lo, float(frac), 0.5, float(z)))
    return BucketTable(rows, chi, float(_chi2.ppf(0.99, buckets)))


def facet_probability_check(n: int, trials: int, buckets: int,
                            seed: int) -> BucketTable:
    """For random triples with small-circumcap area fraction beta, the
    probability that the remaining n - 3 points avoid the small cap is
    (1 - beta)^(n-3); checked per beta-quantile bucket."""
    if n < 3:
        raise ValueError("need n >= 3")
    base = RandomStream(seed)
    betas = np.empty(trials)
    avoid = np.empty(trials)
    chunk = max(1, 10 ** 6 // max(n, 1))
    done = 0
    idx = 0
    while done < trials:
        take = min(chunk, trials - done)
        pts = sample_uniform_sphere(take * n, base.substream(idx)) \
            .reshape(take, n, 3)
        idx += 1
        a, b, c = pts[:, 0], pts[:, 1], pts[:, 2]
        normals = np.cross(b - a, c - a)
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        d = np.einsum("ij,ij->i", normals, a)
        flip = d < 0.0
        normals[flip] *= -1.0
        d = np.abs(d)  # small cap: {x . normal > d}
        betas[done:done + take] = (1.0 - d) / 2.0
        if n > 3:
            rest = np.einsum("ikj,ij->ik", pts[:, 3:], normals)
            avoid[done:done + take] = (rest <= d[:, None]).all(axis=1)
        else:
            avoid[done:done + take] = 1.0
        done += take
    order = np.argsort(betas, kind="stable")
    betas, avoid = betas[order], avoid[order]
    edges_idx = np.linspace(0, trials, buckets + 1).astype(int)
    rows, chi = [], 0.0
    for bkt in range(buckets):
        lo, hi = edges_idx[bkt], edges_idx[bkt + 1]
        predicted = (1.0 - betas[lo:hi]) ** (n - 3)
        diff = avoid[lo:hi] - predicted
        stderr = diff.std(ddof=1) / math.sqrt(hi - lo)
        z = diff.mean() / stderr if stderr > 0 else 0.0
        chi += z * z
        rows.append(BucketRow(bkt, float(betas[lo]), float(betas[hi - 1]),
                              hi - lo, float(avoid[lo:hi].mean()),
                              float(predicted.mean()), float(z)))
    return BucketTable(rows, chi, float(_chi2.ppf(0.99, buckets)))


# -- chords ------------------------------------------------------------------

@dataclass(frozen=True)
class ChordTest:
    trials: int
    ks_statistic: float
    ks_bound: float

    @property
    def passed(self) -> bool:
        return self.ks_statistic <= self.ks_bound


def chord_cdf_test(trials: int, seed: int) -> ChordTest:
    """KS distance of the empirical chord-length CDF from L^2/4."""
    pts = sample_uniform_sphere(2 * trials, RandomStream(seed))
    lengths = np.sort(np.linalg.norm(pts[:trials] - pts[trials:], axis=1))
    cdf = lengths * lengths / 4.0
    i = np.arange(1, trials + 1)
    d_plus = (i / trials - cdf).max()
    d_minus = (cdf - (i - 1) / trials).max()
    return ChordTest(trials, float(max(d_plus, d_minus)),
                     KS_99 / math.sqrt(trials))


# -- moment curve scatter ----------------------------------------------------

def moment_scatter(n_list, trials_each: int, seed: int) -> list:
    """Per-trial (n, trial, width, area, volume) rows for the curve overlay.

    Raises if any row violates the normalized chain, which holds for every
    inscribed polytope.
    """
    rows = []
    base = RandomStream(seed)
    idx = 0
    for n in n_list:
        for t in range(trials_each):
            m = geometry.measure(geometry.convex_hull(
                sample_uniform_sphere(n, base.substream(idx))))
            idx += 1
            w, a, v = geometry.normalized_volume_chain(m)
            if not (w >= a >= v):
                raise RuntimeError(f"normalized chain violated at n={n}")
            rows.append((n, t, m.width, m.area, m.volume))
    return rows


def gamma_samples(t_values) -> list:
    return [(float(t), *analytic.moment_curve(t)) for t in t_values]


# -- deficiency table --------------------------------------------------------

@dataclass(frozen=True)
class DeficiencyRow:
    n: int
    width_random: float
    width_model: float
    width_ratio: float
    area_random: float
    area_model: float
    area_ratio: float
    volume_random: float
    volume_model: float
    volume_ratio: float
    length_random_per_sqrt_n: float
    length_model_per_sqrt_n: float


def deficiency_table(n_list) -> list:
    """Analytic-only comparison of random hulls against the virtual model."""
    rows = []
    for n in n_list:
        length_m, width_m, area_m, vol_m = analytic.model_quantities(n)
        dw_r = analytic.deficiency(analytic.expected_iv_uniform(1, n), 2.0)
        da_r = analytic.deficiency(analytic.expected_iv_uniform(2, n),
                                   4.0 * math.pi)
        dv_r = analytic.deficiency(analytic.expected_iv_uniform(3, n),
                                   4.0 * math.pi / 3.0)
        dw_m = analytic.deficiency(width_m, 2.0)
        da_m = analytic.deficiency(area_m, 4.0 * math.pi)
        dv_m = analytic.deficiency(vol_m, 4.0 * math.pi / 3.0)
        rows.append(DeficiencyRow(
            n, dw_r, dw_m, dw_r / dw_m, da_r, da_m, da_r / da_m,
            dv_r, dv_m, dv_r / dv_m,
            analytic.expected_edge_length_uniform(n) / math.sqrt(n),
            length_m / math.sqrt(n)))
    return rows


# -- minimum distance --------------------------------------------------------

def min_distance_experiment(n: int, trials: int, seed: int) -> dict:
    """ZReports for E[R], E[Phi], E[R^2] of the minimum distance to a pole.

    Only the z-coordinates matter for the distance to (0,0,1), so trials are
    drawn in bulk.
    """
    g = RandomStream(seed).generator()
    r = np.empty(trials)
    phi = np.empty(trials)
    chunk = max(1, 4 * 10 ** 6 // max(n, 1))
    done = 0
    while done < trials:
        take = min(chunk, trials - done)
        z = g.uniform(-1.0, 1.0, (take, n))
        best = np.clip(z.max(axis=1), -1.0, 1.0)
        r[done:done + take] = np.sqrt(2.0 - 2.0 * best)
        phi[done:done + take] = np.arccos(best)
        done += take
    out = {}
    for name, values, target in (
            ("euclidean", r, analytic.expected_min_distance(n)),
            ("spherical", phi, analytic.expected_min_spherical(n)),
            ("euclidean_sq", r * r, analytic.min_distance_moment(n, 2))):
        stats = summarize(values)
        out[name] = (stats, z_report(name, stats, target))
    return out


# -- conjecture probe --------------------------------------------------------

@dataclass(frozen=True)
class ConjectureReport:
    n: int
    trials: int
    max_width: float
    model_width: float
    max_area: float
    model_area: float
    max_volume: float
    model_volume: float
    violations: dict = field(default_factory=dict)


def conjecture_probe(n: int, trials: int, seed: int) -> ConjectureReport:
    """Empirical maxima of the intrinsic volumes against the virtual-model
    bounds.  Purely observational: a violation is reported, never an error."""
    base = RandomStream(seed)
    best = {"width": 0.0, "area": 0.0, "volume": 0.0}
    for i in range(trials):
        m = geometry.measure(geometry.convex_hull(
            sample_uniform_sphere(n, base.substream(i))))
        best["width"] = max(best["width"], m.width)
        best["area"] = max(best["area"], m.area)
        best["volume"] = max(best["volume"], m.volume)
    _, width_m, area_m, vol_m = analytic.model_quantities(n)
    bounds = {"width": width_m, "area": area_m, "volume": vol_m}
    violations = {k: best[k] for k in best if best[k] > bounds[k]}
    return ConjectureReport(n, trials, best["width"], width_m, best["area"],
                            area_m, best["volume"], vol_m, violations)
