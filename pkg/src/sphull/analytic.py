"""Closed-form expectations, special functions, the virtual model, and
ellipsoid quantities: the analytic ground truth for every experiment.

Intrinsic volumes are indexed k = 1 (mean width), 2 (surface area),
3 (volume), with unit-ball values 2, 4 pi, 4 pi / 3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    pass


BALL_IV = {1: 2.0, 2: 4.0 * math.pi, 3: 4.0 * math.pi / 3.0}


# -- gamma / beta plumbing ---------------------------------------------------

def lgamma(x: float) -> float:
    return math.lgamma(x)


def lbeta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def beta(a: float, b: float) -> float:
    return math.exp(lbeta(a, b))


# -- modified Bessel functions -----------------------------------------------

def bessel_i(nu: float, x: float) -> float:
    """Modified Bessel function of the first kind, ascending series.

    Accurate to ~1e-12 relative for x <= 200; use bessel_i_scaled beyond.
    """
    if nu < 0.0 or x < 0.0:
        raise DomainError("bessel_i requires nu >= 0 and x >= 0")
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    half = x / 2.0
    term = math.exp(nu * math.log(half) - math.lgamma(nu + 1.0))
    total, comp = term, 0.0
    m = 0
    hh = half * half
    while True:
        m += 1
        term *= hh / (m * (m + nu))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if term < total * 1e-17 and m > half:
            return total
        if m > 100000:  # pragma: no cover
            raise DomainError("bessel_i series failed to converge")


def bessel_i_scaled(nu: float, x: float) -> float:
    """exp(-x) * I_nu(x); series below x = 200, asymptotic expansion above."""
    if nu < 0.0 or x < 0.0:
        raise DomainError("bessel_i_scaled requires nu >= 0 and x >= 0")
    if x <= 200.0:
        return math.exp(-x) * bessel_i(nu, x)
    # Large-argument expansion: optimal-truncation error ~ e^{-2x}, negligible.
    mu = 4.0 * nu * nu
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        nxt = term * -(mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) < 1e-18:
            break
    return total / math.sqrt(2.0 * math.pi * x)


def bessel_series_identity(k: float, z: float) -> tuple[float, float]:
    """Both sides of the series identity
    sum_m Gamma(m+k+1) z^(m+k+1) / (Gamma(m+2k+2) m!)
      = e^(z/2) sqrt(pi z) I_(k+1/2)(z/2).
    """
    if k <= 0.0 or z <= 0.0:
        raise DomainError("identity requires k > 0 and z > 0")
    logz = math.log(z)
    total, comp = 0.0, 0.0
    m = 0
    while True:
        term = math.exp(math.lgamma(m + k + 1.0) - math.lgamma(m + 2.0 * k + 2.0)
                        - math.lgamma(m + 1.0) + (m + k + 1.0) * logz)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if term < total * 1e-17 and m > z:
            break
        m += 1
    rhs = math.exp(z / 2.0) * math.sqrt(math.pi * z) * bessel_i(k + 0.5, z / 2.0)
    return total, rhs


# -- expected intrinsic volumes ----------------------------------------------

def _iv_factor_uniform(k: int, n: float) -> float:
    if n <= k:
        return 0.0
    f = 1.0
    for j in range(1, k + 1):
        f *= (n - j) / (n + j)
    return f


def expected_iv_uniform(k: int, n: int) -> float:
    """E[V_k(X_n)] for n uniform points: V_k(ball) * prod_{j<=k} (n-j)/(n+j).

    Vanishes for n <= k (flat or low-cardinality hulls).
    """
    if k not in (1, 2, 3):
        raise DomainError("k must be 1, 2 or 3")
    if n < 1:
        raise DomainError("n must be >= 1")
    return BALL_IV[k] * _iv_factor_uniform(k, n)


def expected_iv_symmetric(k: int, n: int) -> float:
    """E[V_k] for the hull of n uniform points and their antipodes."""
    if k not in (1, 2, 3):
        raise DomainError("k must be 1, 2 or 3")
    if n < 3:
        raise DomainError("symmetric formulas need n >= 3")
    if k == 1:
        f = n / (n + 1.0)
    elif k == 2:
        f = (n - 1.0) / (n + 2.0)
    else:
        f = n / (n + 1.0) * (n - 2.0) / (n + 3.0)
    return BALL_IV[k] * f


def expected_iv_poisson(k: int, intensity: float) -> float:
    """E[V_k] for the hull of a Poisson process of the given intensity:
    V_k(ball) * 2 pi sqrt(rho) e^(-2 pi rho) I_(k+1/2)(2 pi rho)."""
    if k not in (1, 2, 3):
        raise DomainError("k must be 1, 2 or 3")
    if intensity <= 0.0:
        raise DomainError("intensity must be positive")
    x = 2.0 * math.pi * intensity
    return BALL_IV[k] * 2.0 * math.pi * math.sqrt(intensity) * \
        bessel_i_scaled(k + 0.5, x)


# -- total edge length -------------------------------------------------------

def expected_edge_length_uniform(n: int) -> float:
    """E[Length(X_n)] = C(n,3) * (512 / 3 pi) * B(n - 1/2, 5/2).

    Evaluated in log space; asymptotically (64 / 3 sqrt(pi)) sqrt(n).
    """
    if n < 3:
        raise DomainError("edge length needs n >= 3")
    log_comb = lgamma(n + 1.0) - lgamma(n - 2.0) - lgamma(4.0)
    return math.exp(log_comb + math.log(512.0 / (3.0 * math.pi))
                    + lbeta(n - 0.5, 2.5))


def expected_edge_length_poisson(intensity: float) -> float:
    """E[Length(X_rho)] = (128/3) sqrt(rho) * 2 pi sqrt(rho) e^(-2 pi rho)
    I_2(2 pi rho)."""
    if intensity <= 0.0:
        raise DomainError("intensity must be positive")
    x = 2.0 * math.pi * intensity
    return (256.0 * math.pi / 3.0) * intensity * bessel_i_scaled(2.0, x)


def j_length(n: int) -> float:
    """Closed form of the edge-length integral in the uniform case:
    32 * B(n - 1/2, 5/2)."""
    if n < 3:
        raise DomainError("j_length needs n >= 3")
    return 32.0 * beta(n - 0.5, 2.5)


def k_length(intensity: float) -> float:
    """Closed form of the edge-length integral in the Poisson case:
    (3 / 2 pi) rho^-2 e^(-2 pi rho) I_2(2 pi rho)."""
    if intensity <= 0.0:
        raise DomainError("intensity must be positive")
    x = 2.0 * math.pi * intensity
    return 1.5 / math.pi * intensity ** -2 * bessel_i_scaled(2.0, x)


# -- minimum distance --------------------------------------------------------

def expected_min_distance(n: int) -> float:
    """Expected minimum Euclidean distance of n uniform points to a fixed
    point: 2 (2n)!! / (2n+1)!! = 2 * 4^n (n!)^2 / (2n+1)!."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if n <= 500:  # exact rational, correctly rounded
        from fractions import Fraction
        f = math.factorial
        return float(Fraction(2 * 4 ** n * f(n) ** 2, f(2 * n + 1)))
    return math.exp(math.log(2.0) + n * math.log(4.0)
                    + 2.0 * lgamma(n + 1.0) - lgamma(2.0 * n + 2.0))


def expected_min_spherical(n: int) -> float:
    """Expected minimum spherical distance: B(n + 1/2, 1/2)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return beta(n + 0.5, 0.5)


def min_distance_moment(n: int, k: int) -> float:
    """E[R^k] = n 2^k B(n, k/2 + 1) for the minimum Euclidean distance R."""
    if n < 1 or k < 1:
        raise DomainError("n, k must be >= 1")
    return n * 2.0 ** k * beta(float(n), k / 2.0 + 1.0)


# -- moment curve and width-based prediction ---------------------------------

def moment_curve(t: float) -> tuple[float, float, float]:
    """The curve through the expected intrinsic-volume triplets,
    gamma(t) = (2 (t-1)/(t+1), 4 pi (t-1)(t-2)/((t+1)(t+2)), ...)."""
    if t < 3.0:
        raise DomainError("curve is defined for t >= 3")
    return tuple(BALL_IV[k] * _iv_factor_uniform(k, t) for k in (1, 2, 3))


def predict_from_width(w: float) -> tuple[float, float, float]:
    """Invert the width formula to n(w) = (2+w)/(2-w) and predict the
    matching area and volume along the moment curve."""
    if not 0.0 < w < 2.0:
        raise DomainError("width must lie in (0, 2)")
    n = (2.0 + w) / (2.0 - w)
    a = 4.0 * math.pi * (w / 2.0) * (3.0 * w - 2.0) / (6.0 - w)
    v = (4.0 * math.pi / 3.0) * (w / 2.0) * (3.0 * w - 2.0) / (6.0 - w) \
        * 2.0 * (w - 1.0) / (4.0 - w)
    return n, a, v


# -- virtual model -----------------------------------------------------------

@dataclass(frozen=True)
class VirtualModel:
    """Idealized polytope with 2n-4 congruent regular spherical facets
    (realizable only for n = 4, 6, 20); benchmark for deficiencies."""

    n: int
    spherical_area: float   # a_n = 4 pi / (2n - 4)
    spherical_angle: float  # alpha_n = (a_n + pi) / 3
    edge: float             # Euclidean edge length L_n
    facet_area: float       # Euclidean facet area A_n
    cone_volume: float      # volume V_n of the tetrahedron facet-to-origin
    normal_angle: float     # angle theta_n between adjacent facet normals


def virtual_model(n: int) -> VirtualModel:
    """Exact facet geometry of the virtual model by spherical trigonometry.

    The regular spherical triangle has area a_n and angle alpha_n (Girard);
    its side s satisfies cos s = cos(alpha_n) / (1 - cos(alpha_n)).  All
    Euclidean quantities come from explicit vertex coordinates of two
    adjacent facets, arranged for numerical stability at large n.
    """
    if n < 4:
        raise DomainError("virtual model needs n >= 4")
    a = 4.0 * math.pi / (2.0 * n - 4.0)
    alpha = (a + math.pi) / 3.0
    cos_alpha = math.cos(alpha)
    # 1 - cos s = (1 - 2 cos alpha) / (1 - cos alpha), with
    # 1 - 2 cos(pi/3 + d) = (1 - cos d) + sqrt(3) sin d for d = a/3.
    d = a / 3.0
    one_minus_2ca = (1.0 - math.cos(d)) + math.sqrt(3.0) * math.sin(d)
    om = one_minus_2ca / (1.0 - cos_alpha)      # 1 - cos s
    cos_s = 1.0 - om
    sin_s = math.sqrt(om * (2.0 - om))

    va = np.array([0.0, 0.0, 1.0])
    vb = np.array([sin_s, 0.0, cos_s])
    x = cos_s * om / sin_s
    y = math.sqrt(max(om * (2.0 - om) - x * x, 0.0))
    vc1 = np.array([x, y, cos_s])
    vc2 = np.array([x, -y, cos_s])

    edge = float(np.linalg.norm(va - vb))
    n1 = np.cross(vb - va, vc1 - va)
    n2 = np.cross(vc2 - va, vb - va)  # both oriented away from the origin
    facet_area = 0.5 * float(np.linalg.norm(n1))
    cone_volume = abs(float(np.dot(va, np.cross(vb, vc1)))) / 6.0
    n1u, n2u = n1 / np.linalg.norm(n1), n2 / np.linalg.norm(n2)
    theta = float(np.arctan2(np.linalg.norm(np.cross(n1u, n2u)),
                             np.dot(n1u, n2u)))
    return VirtualModel(n, a, alpha, edge, facet_area, cone_volume, theta)


def model_quantities(n: int) -> tuple[float, float, float, float]:
    """(total edge length, mean width, area, volume) of the virtual model:
    (3n-6) L_n, (3n-6) L_n theta_n / 4 pi, (2n-4) A_n, (2n-4) V_n."""
    m = virtual_model(n)
    ne, nf = 3.0 * n - 6.0, 2.0 * n - 4.0
    length = ne * m.edge
    width = ne * m.edge * m.normal_angle / (4.0 * math.pi)
    return length, width, nf * m.facet_area, nf * m.cone_volume


def deficiency(measure_value: float, ball_value: float) -> float:
    """Normalized deficiency 1 - mu(X) / mu(ball)."""
    return 1.0 - measure_value / ball_value


def deficiency_ratio_limits() -> tuple[float, float, float]:
    """Limits of the random-vs-model deficiency ratios:
    18 sqrt(3) / 5 pi for width and area, 4 sqrt(3) / pi for volume."""
    wa = 18.0 * math.sqrt(3.0) / (5.0 * math.pi)
    return wa, wa, 4.0 * math.sqrt(3.0) / math.pi


# -- elliptic integrals (Carlson symmetric forms) ----------------------------

def _carlson_rf(x: float, y: float, z: float) -> float:
    for _ in range(200):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        x, y, z = (x + lam) / 4.0, (y + lam) / 4.0, (z + lam) / 4.0
        mu = (x + y + z) / 3.0
        if max(abs(x - mu), abs(y - mu), abs(z - mu)) < 1e-10 * mu:
            break
    dx, dy, dz = (mu - x) / mu, (mu - y) / mu, (mu - z) / mu
    e2 = dx * dy + dy * dz + dz * dx
    e3 = dx * dy * dz
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0
            - 3.0 * e2 * e3 / 44.0) / math.sqrt(mu)


def _carlson_rd(x: float, y: float, z: float) -> float:
    total = 0.0
    factor = 1.0
    for _ in range(200):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        total += factor / (sz * (z + lam))
        factor /= 4.0
        x, y, z = (x + lam) / 4.0, (y + lam) / 4.0, (z + lam) / 4.0
        mu = (x + y + 3.0 * z) / 5.0
        if max(abs(x - mu), abs(y - mu), abs(z - mu)) < 1e-10 * mu:
            break
    dx, dy, dz = (mu - x) / mu, (mu - y) / mu, (mu - z) / mu
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + 2.0 * ec
    series = (1.0 + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee)
              + dz * (ee / 6.0 + dz * (-9.0 / 22.0 * ec + 3.0 / 26.0 * dz * ea)))
    return 3.0 * total + factor * series / (mu * math.sqrt(mu))


def incomplete_elliptic_f(phi: float, k: float) -> float:
    """Legendre incomplete elliptic integral of the first kind F(phi, k)."""
    if not 0.0 <= phi <= math.pi / 2.0 or k < 0.0:
        raise DomainError("need 0 <= phi <= pi/2 and k >= 0")
    s = math.sin(phi)
    if s == 0.0:
        return 0.0
    c2 = math.cos(phi) ** 2
    q = 1.0 - (k * s) ** 2
    if q < 0.0:
        raise DomainError("k sin(phi) must not exceed 1")
    return s * _carlson_rf(c2, q, 1.0)


def incomplete_elliptic_e(phi: float, k: float) -> float:
    """Legendre incomplete elliptic integral of the second kind E(phi, k)."""
    if not 0.0 <= phi <= math.pi / 2.0 or k < 0.0:
        raise DomainError("need 0 <= phi <= pi/2 and k >= 0")
    s = math.sin(phi)
    if s == 0.0:
        return 0.0
    c2 = math.cos(phi) ** 2
    q = 1.0 - (k * s) ** 2
    if q < 0.0:
        raise DomainError("k sin(phi) must not exceed 1")
    if q == 0.0:  # complete degenerate case E(pi/2, 1) = 1
        return s
    return s * _carlson_rf(c2, q, 1.0) \
        - (k * s) ** 2 * s * _carlson_rd(c2, q, 1.0) / 3.0


# -- ellipsoids --------------------------------------------------------------

@dataclass(frozen=True)
class Ellipsoid:
    """Axis-aligned ellipsoid with half-axes p >= q >= r > 0."""

    p: float
    q: float
    r: float

    def __post_init__(self):
        if not (self.p >= self.q >= self.r > 0.0):
            raise DomainError("half-axes must satisfy p >= q >= r > 0")

    @property
    def dual(self) -> "Ellipsoid":
        return Ellipsoid(1.0 / self.r, 1.0 / self.q, 1.0 / self.p)


def ellipsoid_volume(e: Ellipsoid) -> float:
    return 4.0 * math.pi / 3.0 * e.p * e.q * e.r


def ellipsoid_area(e: Ellipsoid) -> float:
    """Surface area via incomplete elliptic integrals; spheres and spheroids
    take explicit degenerate branches (the elliptic arguments become 0/0)."""
    p, q, r = e.p, e.q, e.r
    if p - r <= 1e-12 * p:
        return 4.0 * math.pi * p * p
    if p - q <= 1e-12 * p:  # oblate spheroid, p = q > r
        ecc = math.sqrt(1.0 - (r / p) ** 2)
        return 2.0 * math.pi * p * p * \
            (1.0 + (1.0 - ecc * ecc) / ecc * math.atanh(ecc))
    if q - r <= 1e-12 * q:  # prolate spheroid, p > q = r
        ecc = math.sqrt(1.0 - (r / p) ** 2)
        return 2.0 * math.pi * r * r * (1.0 + p / (r * ecc) * math.asin(ecc))
    phi = math.asin(math.sqrt(1.0 - (r / p) ** 2))
    k = (p / q) * math.sqrt((q * q - r * r) / (p * p - r * r))
    ff = incomplete_elliptic_f(phi, k)
    ee = incomplete_elliptic_e(phi, k)
    return 2.0 * math.pi * (r * r
                            + q * r * r / math.sqrt(p * p - r * r) * ff
                            + q * math.sqrt(p * p - r * r) * ee)


def ellipsoid_width(e: Ellipsoid) -> float:
    """Mean width via the dual-ellipsoid relation
    W(E) = (pqr / 2 pi) * Area(dual of E)."""
    return e.p * e.q * e.r / (2.0 * math.pi) * ellipsoid_area(e.dual)


def expected_iv_ellipsoid(k: int, n: int, e: Ellipsoid) -> float:
    """E[V_k] for n homeoid-distributed points on the ellipsoid shell: the
    sphere rational factor times the ellipsoid's own V_k."""
    if k not in (1, 2, 3):
        raise DomainError("k must be 1, 2 or 3")
    if n < 1:
        raise DomainError("n must be >= 1")
    body = {1: ellipsoid_width, 2: ellipsoid_area, 3: ellipsoid_volume}[k](e)
    return body * _iv_factor_uniform(k, n)


def expected_edge_length_ellipsoid_asymptotic(n: int, e: Ellipsoid) -> float:
    """Leading-order expected total edge length of a homeoid hull:
    Width(E) * (32 / 3 sqrt(pi)) sqrt(n)."""
    if n < 3:
        raise DomainError("edge length needs n >= 3")
    return ellipsoid_width(e) * 32.0 / (3.0 * math.sqrt(math.pi)) * math.sqrt(n)
