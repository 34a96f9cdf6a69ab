"""Acceptance suite: every headline claim at full scale, one printed
pass/fail line per criterion (run with ``pytest -s`` to see them live).

All seeds are frozen in SEEDS below; the statistical threshold is |z| <= 4
unless a criterion states otherwise.  Total runtime is dominated by the
roughly 1.4 million convex hulls the Monte Carlo criteria require.
"""
import functools
import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import dblquad, quad

from sphull import analytic, cli, experiments, geometry
from sphull.analytic import Ellipsoid
from sphull.sampling import ProcessSpec, RandomStream, sample_uniform_sphere

PI = math.pi
Z = 4.0

# Frozen seed manifest: one entry per randomized criterion.
SEEDS = {
    "uniform_n4": 1001,
    "uniform_n10": 1002,
    "uniform_n100": 1003,
    "uniform_n3_acute": 1004,
    "symmetric_n3": 2001,
    "symmetric_n10": 2002,
    "poisson_r05": 3001,
    "poisson_r1": 3002,
    "poisson_r4": 3003,
    "min_dist": 4001,
    "chords": 5001,
    "shape_size": 6001,
    "facet_prob": 7001,
    "width_oracle_dirs": 8001,
    "width_oracle_hulls": 8002,
    "homeoid": 9001,
    "structural": 10001,
    "figure1": 11001,
    "figure2": 11002,
    "determinism": 12001,
    "planar_acute": 13001,
}

UNIFORM_TRIALS = 200_000
SYMMETRIC_TRIALS = 100_000
POISSON_TRIALS = 100_000


def _check(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}  {detail}".rstrip())
    assert ok, f"{name}: {detail}"


@functools.lru_cache(maxsize=None)
def _uniform_run(n):
    stats = ("width", "area", "volume", "edge_length", "acute_fraction")
    config = experiments.ExperimentConfig(
        ProcessSpec("uniform", n=n), UNIFORM_TRIALS, SEEDS[f"uniform_n{n}"],
        statistics=stats)
    return experiments.run(config)


@functools.lru_cache(maxsize=None)
def _symmetric_run(n):
    config = experiments.ExperimentConfig(
        ProcessSpec("symmetric", n=n), SYMMETRIC_TRIALS,
        SEEDS[f"symmetric_n{n}"])
    return experiments.run(config)


@functools.lru_cache(maxsize=None)
def _poisson_run(key, rho):
    config = experiments.ExperimentConfig(
        ProcessSpec("poisson", intensity=rho), POISSON_TRIALS, SEEDS[key],
        statistics=("width", "area", "volume", "edge_length"))
    return experiments.run(config)


def test_intrinsic_volumes_uniform():
    for n in (4, 10, 100):
        results = _uniform_run(n)
        for stat in ("width", "area", "volume"):
            _, report = results[stat]
            _check(f"uniform n={n} {stat}", report.passed,
                   f"mean={report.observed_mean:.6f} "
                   f"target={report.analytic_value:.6f} z={report.z:+.2f}")


def test_intrinsic_volumes_symmetric():
    for n in (3, 10):
        results = _symmetric_run(n)
        for stat in ("width", "area", "volume"):
            _, report = results[stat]
            _check(f"symmetric n={n} {stat}", report.passed,
                   f"z={report.z:+.2f}")
    # The n = 3 expected volume is exactly pi / 6.
    target = _symmetric_run(3)["volume"][1].analytic_value
    _check("symmetric n=3 volume target pi/6",
           target == pytest.approx(PI / 6.0, rel=1e-14), f"{target!r}")


def test_intrinsic_volumes_poisson():
    for key, rho in (("poisson_r05", 0.5), ("poisson_r1", 1.0),
                     ("poisson_r4", 4.0)):
        results = _poisson_run(key, rho)
        for stat in ("width", "area", "volume"):
            _, report = results[stat]
            _check(f"poisson rho={rho} {stat}", report.passed,
                   f"z={report.z:+.2f}")


def test_poisson_closed_form_equals_conditional_series():
    # Oracle equivalence, no sampling: the Bessel closed form must match the
    # Poisson mixture of the uniform formulas to 1e-10 relative.
    worst = 0.0
    for rho in (0.5, 1.0, 4.0):
        lam = 4.0 * PI * rho
        for k in (1, 2, 3):
            mix = sum(math.exp(-lam + n * math.log(lam) - math.lgamma(n + 1))
                      * analytic.expected_iv_uniform(k, n)
                      for n in range(k + 1, 600))
            closed = analytic.expected_iv_poisson(k, rho)
            worst = max(worst, abs(closed / mix - 1.0))
    _check("poisson closed form vs conditional series", worst <= 1e-10,
           f"max rel diff={worst:.2e}")


def test_total_edge_length():
    _, report = _uniform_run(10)["edge_length"]
    _check("edge length uniform n=10", report.passed, f"z={report.z:+.2f}")
    target = math.comb(10, 3) * 512.0 / (3.0 * PI) * analytic.beta(9.5, 2.5)
    _check("edge length n=10 closed form",
           report.analytic_value == pytest.approx(target, rel=1e-12),
           f"{report.analytic_value!r}")

    _, report = _poisson_run("poisson_r1", 1.0)["edge_length"]
    _check("edge length poisson rho=1", report.passed, f"z={report.z:+.2f}")

    n = 10 ** 6
    ratio = analytic.expected_edge_length_uniform(n) / \
        (64.0 / (3.0 * math.sqrt(PI)) * math.sqrt(n))
    _check("edge length asymptote (12.036 sqrt(n)) at n=1e6",
           abs(ratio - 1.0) <= 1e-3, f"ratio={ratio:.6f}")


def test_acute_facets():
    config = experiments.ExperimentConfig(
        ProcessSpec("uniform", n=3), SYMMETRIC_TRIALS,
        SEEDS["uniform_n3_acute"], statistics=("acute_fraction",))
    _, report = experiments.run(config)["acute_fraction"]
    _check("acute fraction n=3", report.passed, f"z={report.z:+.2f}")
    for n in (4, 10, 100):
        _, report = _uniform_run(n)["acute_fraction"]
        _check(f"acute fraction n={n}", report.passed, f"z={report.z:+.2f}")
    _, report = experiments.planar_acute_fraction(1_000_000,
                                                  SEEDS["planar_acute"])
    _check("planar control 1/4", report.passed, f"z={report.z:+.2f}")


def test_minimum_distance():
    for n in (1, 10, 100):
        results = experiments.min_distance_experiment(n, 1_000_000,
                                                      SEEDS["min_dist"] + n)
        for name, label in (("euclidean", "E[R]"), ("spherical", "E[Phi]"),
                            ("euclidean_sq", "E[R^2]")):
            _, report = results[name]
            _check(f"min distance n={n} {label}", report.passed,
                   f"z={report.z:+.2f}")
    _check("min distance n=1 target 4/3",
           analytic.expected_min_distance(1) == 4.0 / 3.0, "")


def test_chord_cdf():
    result = experiments.chord_cdf_test(1_000_000, SEEDS["chords"])
    _check("chord-length CDF KS", result.passed,
           f"D={result.ks_statistic:.2e} bound={result.ks_bound:.2e}")


def test_shape_size_independence():
    table = experiments.shape_size_independence(20, SYMMETRIC_TRIALS, 10,
                                                SEEDS["shape_size"])
    worst = max(abs(r.z) for r in table.rows)
    _check("shape-size independence (10 buckets, n=20)", table.passed,
           f"max|z|={worst:.2f} chi2={table.chi_square:.1f}"
           f"<={table.chi_square_threshold:.1f}")


def test_facet_cap_probability():
    table = experiments.facet_probability_check(10, 1_000_000, 10,
                                                SEEDS["facet_prob"])
    worst = max(abs(r.z) for r in table.rows)
    _check("facet-cap avoid probability (10 buckets, n=10)",
           all(r.passed for r in table.rows), f"max|z|={worst:.2f}")


def test_special_functions():
    # Half-integer Bessel closed forms, evaluated at 50 digits to avoid the
    # oracle's own cancellation; upward recurrence from I_{1/2}, I_{3/2}.
    mpmath.mp.dps = 50
    xs = [0.1, 0.3, 1.0, 3.0, 7.0, 13.0, 20.0, 35.0, 50.0]
    worst = 0.0
    for x in xs:
        mx = mpmath.mpf(x)
        pref = mpmath.sqrt(2.0 / (mpmath.pi * mx))
        closed = [pref * mpmath.sinh(mx),
                  pref * (mpmath.cosh(mx) - mpmath.sinh(mx) / mx)]
        for j in range(2, 4):  # I_{nu+1} = I_{nu-1} - (2 nu / x) I_nu
            nu = j - 0.5
            closed.append(closed[j - 2] - 2 * nu / mx * closed[j - 1])
        for j, nu in enumerate((0.5, 1.5, 2.5, 3.5)):
            rel = abs(analytic.bessel_i(nu, x) / float(closed[j]) - 1.0)
            worst = max(worst, rel)
    _check("Bessel series vs half-integer closed forms", worst <= 1e-12,
           f"max rel err={worst:.2e}")

    worst = 0.0
    for k in (1.0, 2.0, 3.0):
        for z in (0.1, 1.0, 5.0, 15.0, 30.0, 60.0):
            lhs, rhs = analytic.bessel_series_identity(k, z)
            worst = max(worst, abs(lhs / rhs - 1.0))
    _check("Bessel series identity", worst <= 1e-10,
           f"max rel err={worst:.2e}")

    # Edge-length integrals against adaptive quadrature; the substitution
    # t = 1 - u^2 removes the endpoint singularity of (1-t)^(-1/2).
    def j_integrand(u, n):
        t = 1.0 - u * u
        return 2.0 * t ** 1.5 * (((1.0 + u) / 2.0) ** (n - 3)
                                 + ((1.0 - u) / 2.0) ** (n - 3))

    def k_integrand(u, rho):
        t = 1.0 - u * u
        return 2.0 * t ** 1.5 * (math.exp(-2.0 * PI * rho * (1.0 + u))
                                 + math.exp(-2.0 * PI * rho * (1.0 - u)))

    worst = 0.0
    for n in (4, 10, 50):
        val = quad(j_integrand, 0.0, 1.0, args=(n,), limit=200,
                   epsabs=1e-13, epsrel=1e-13)[0]
        worst = max(worst, abs(analytic.j_length(n) / val - 1.0))
    for rho in (0.5, 1.0, 4.0):
        val = quad(k_integrand, 0.0, 1.0, args=(rho,), limit=200,
                   epsabs=1e-13, epsrel=1e-13)[0]
        worst = max(worst, abs(analytic.k_length(rho) / val - 1.0))
    _check("J/K length integrals vs quadrature", worst <= 1e-9,
           f"max rel err={worst:.2e}")

    # Incomplete elliptic integrals against direct quadrature.
    worst = 0.0
    for phi in (0.4, 1.0, PI / 2.0):
        for k in (0.2, 0.6, 0.95):
            f_q = quad(lambda t: 1.0 / math.sqrt(1.0 - (k * math.sin(t)) ** 2),
                       0.0, phi, limit=200)[0]
            e_q = quad(lambda t: math.sqrt(1.0 - (k * math.sin(t)) ** 2),
                       0.0, phi, limit=200)[0]
            worst = max(worst,
                        abs(analytic.incomplete_elliptic_f(phi, k) / f_q - 1.0),
                        abs(analytic.incomplete_elliptic_e(phi, k) / e_q - 1.0))
    _check("elliptic F/E vs quadrature", worst <= 1e-10,
           f"max rel err={worst:.2e}")


def test_mean_width_kernel_vs_projection_oracle():
    m_dirs = 1_000_000
    dirs = sample_uniform_sphere(m_dirs, RandomStream(SEEDS["width_oracle_dirs"]))
    hull_stream = RandomStream(SEEDS["width_oracle_hulls"])
    solids = {
        "tetrahedron": geometry.convex_hull(
            np.array([[1.0, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])
            / math.sqrt(3.0)),
        "octahedron": geometry.convex_hull(
            np.array([[1.0, 0, 0], [-1, 0, 0], [0, 1.0, 0], [0, -1, 0],
                      [0, 0, 1.0], [0, 0, -1]])),
    }
    sizes = [4, 5, 6, 8, 10, 12, 15, 20, 25, 30,
             35, 40, 50, 60, 70, 80, 90, 100, 150, 200]
    for i, n in enumerate(sizes):
        solids[f"random n={n}"] = geometry.convex_hull(
            sample_uniform_sphere(n, hull_stream.substream(i)))

    worst = 0.0
    for name, poly in solids.items():
        widths = np.empty(m_dirs)
        for lo in range(0, m_dirs, 100_000):
            chunk = dirs[lo:lo + 100_000]
            dots = poly.vertices @ chunk.T
            widths[lo:lo + 100_000] = dots.max(axis=0) - dots.min(axis=0)
        est = widths.mean()
        sigma = widths.std(ddof=1) / math.sqrt(m_dirs)
        z = (geometry.mean_width(poly) - est) / sigma
        worst = max(worst, abs(z))
        assert abs(z) <= 5.0, (name, z)
    _check("mean-width kernel vs projection oracle (22 solids)",
           worst <= 5.0, f"max|z|={worst:.2f}")


def test_deficiency_constants():
    n = 10 ** 6
    rows = experiments.deficiency_table([n])
    row = rows[0]
    wa, _, vol = analytic.deficiency_ratio_limits()
    _check("deficiency width ratio -> 1.984...",
           abs(row.width_ratio - wa) <= 1e-3, f"{row.width_ratio:.6f}")
    _check("deficiency area ratio -> 1.984...",
           abs(row.area_ratio - wa) <= 1e-3, f"{row.area_ratio:.6f}")
    _check("deficiency volume ratio -> 2.205...",
           abs(row.volume_ratio - vol) <= 1e-3, f"{row.volume_ratio:.6f}")
    limit = 6.0 * math.sqrt(2.0 * PI) / 3.0 ** 0.25
    _check("model length / sqrt(n) -> 11.427...",
           abs(row.length_model_per_sqrt_n - limit) <= 1e-3,
           f"{row.length_model_per_sqrt_n:.6f}")


def test_ellipsoid():
    # Sphere reduction.
    s = Ellipsoid(1.0, 1.0, 1.0)
    worst = max(abs(analytic.ellipsoid_width(s) - 2.0),
                abs(analytic.ellipsoid_area(s) - 4.0 * PI),
                abs(analytic.ellipsoid_volume(s) - 4.0 * PI / 3.0))
    _check("ellipsoid sphere reduction", worst <= 1e-12, f"max abs={worst:.1e}")

    # Analytic area against a surface-quadrature oracle.
    e = Ellipsoid(2.0, 1.5, 1.0)

    def element(phi, theta):
        st, ct = math.sin(theta), math.cos(theta)
        sp, cp = math.sin(phi), math.cos(phi)
        return st * math.sqrt((e.q * e.r * st * cp) ** 2
                              + (e.p * e.r * st * sp) ** 2
                              + (e.p * e.q * ct) ** 2)

    oracle = dblquad(element, 0.0, PI, 0.0, 2.0 * PI,
                     epsabs=1e-12, epsrel=1e-12)[0]
    rel = abs(analytic.ellipsoid_area(e) / oracle - 1.0)
    _check("ellipsoid area vs quadrature (2, 1.5, 1)", rel <= 1e-8,
           f"rel err={rel:.2e}")

    # Homeoid hulls against the expected intrinsic volumes.
    config = experiments.ExperimentConfig(
        ProcessSpec("homeoid", n=20, ellipsoid=e), SYMMETRIC_TRIALS,
        SEEDS["homeoid"])
    results = experiments.run(config)
    for stat in ("width", "area", "volume"):
        _, report = results[stat]
        _check(f"homeoid n=20 {stat}", report.passed, f"z={report.z:+.2f}")


def test_structural_invariants():
    base = RandomStream(SEEDS["structural"])
    rng = base.generator()
    sizes = rng.integers(3, 13, size=1000)
    for i, n in enumerate(sizes):
        pts = sample_uniform_sphere(int(n), base.substream(i + 1))
        p = geometry.convex_hull(pts)
        v, ec, f = p.vertex_count, p.edge_count, p.facet_count
        assert v - ec + f == 2, (n, v, ec, f)
        assert ec == 3 * v - 6 and f == 2 * v - 4
        m = geometry.measure(p)
        w, a, vol = geometry.normalized_volume_chain(m)
        assert w >= a >= vol, (n, w, a, vol)
        assert {frozenset(t) for t in p.facets.tolist()} == \
            geometry.brute_force_facets(pts), f"facet mismatch at n={n}"
    _check("structural invariants + brute-force facets (1000 instances)",
           True, "Euler, chain, facet equality")


def test_determinism_across_workers(tmp_path):
    blobs = []
    for workers in ("0", "2", "4"):
        out = tmp_path / f"det{workers}.csv"
        code = cli.main(["simulate", "--model", "uniform", "--n", "8",
                         "--trials", "5000", "--seed",
                         str(SEEDS["determinism"]), "--workers", workers,
                         "--out", str(out)])
        assert code == 0
        blobs.append(out.read_bytes())
    _check("byte-identical CSV across --workers {0,2,4}",
           blobs[0] == blobs[1] == blobs[2], f"{len(blobs[0])} bytes")


def test_figure_data():
    # Figure-1 ordering: normalized means strictly decreasing at n = 1000.
    base = RandomStream(SEEDS["figure1"])
    chains = np.array([
        geometry.normalized_volume_chain(geometry.measure(
            geometry.convex_hull(sample_uniform_sphere(1000,
                                                       base.substream(i)))))
        for i in range(200)])
    means = chains.mean(axis=0)
    stderr = chains.std(axis=0, ddof=1).max() / math.sqrt(len(chains))
    ordered = means[0] - means[1] > 4.0 * stderr and \
        means[1] - means[2] > 4.0 * stderr
    _check("figure-1 ordering w > a > v at n=1000", bool(ordered),
           f"means={means[0]:.5f} > {means[1]:.5f} > {means[2]:.5f}")

    # Figure-2 scatter data: per-trial points exist for each n and respect
    # the chain (moment_scatter raises internally otherwise).
    rows = experiments.moment_scatter([10, 40, 100, 200], 150,
                                      SEEDS["figure2"])
    _check("figure-2 scatter data (4 groups x 150 trials)",
           len(rows) == 600, "chain verified per point")
