"""Seedable point processes on the sphere, the circle, and ellipsoid shells.

Every sampler draws from a counter-based Philox stream keyed by
(seed, stream_index), so trial i of an experiment can use stream_index = i
and the output is identical no matter how trials are scheduled.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class RandomStream:
    """Deterministic substream handle: same (seed, stream_index) means the
    same output sequence on every platform and worker count."""

    seed: int
    stream_index: int = 0

    def substream(self, index: int) -> "RandomStream":
        return RandomStream(self.seed, index)

    def generator(self) -> np.random.Generator:
        key = (int(self.seed) & 0xFFFFFFFFFFFFFFFF) | \
            ((int(self.stream_index) & 0xFFFFFFFFFFFFFFFF) << 64)
        return np.random.Generator(np.random.Philox(key=key))


def _points_from_z_phi(z: np.ndarray, phi: np.ndarray) -> np.ndarray:
    s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])


def sample_uniform_sphere(n: int, stream: RandomStream) -> np.ndarray:
    """n i.i.d. uniform points on the unit 2-sphere.

    Uses the cylindrical construction z ~ U[-1,1], phi ~ U[0,2pi): the
    projection onto any diameter is then uniform by construction.
    """
    g = stream.generator()
    z = g.uniform(-1.0, 1.0, n)
    phi = g.uniform(0.0, TWO_PI, n)
    return _points_from_z_phi(z, phi)


def sample_poisson_sphere(intensity: float, stream: RandomStream) -> np.ndarray:
    """Stationary Poisson process on the sphere: N ~ Poisson(4 pi rho) count,
    then N uniform points from the same stream."""
    if intensity <= 0.0:
        raise ValueError("intensity must be positive")
    g = stream.generator()
    count = int(g.poisson(4.0 * np.pi * intensity))
    z = g.uniform(-1.0, 1.0, count)
    phi = g.uniform(0.0, TWO_PI, count)
    return _points_from_z_phi(z, phi)


def sample_symmetric(n: int, stream: RandomStream) -> np.ndarray:
    """n uniform points followed by their exact negations (2n points)."""
    pts = sample_uniform_sphere(n, stream)
    return np.concatenate([pts, -pts])


def sample_homeoid(n: int, ellipsoid, stream: RandomStream) -> np.ndarray:
    """Homeoid-distributed points on an ellipsoid shell: the image of uniform
    sphere samples under the diagonal map (x,y,z) -> (px, qy, rz)."""
    pts = sample_uniform_sphere(n, stream)
    return pts * np.array([ellipsoid.p, ellipsoid.q, ellipsoid.r])


def sample_chord(stream: RandomStream) -> tuple[np.ndarray, np.ndarray]:
    """Two independent uniform points; the chord length L has CDF L^2/4."""
    pts = sample_uniform_sphere(2, stream)
    return pts[0], pts[1]


def sample_uniform_circle_angles(n: int, stream: RandomStream) -> np.ndarray:
    """n i.i.d. angles uniform on [0, 2pi); the planar control process."""
    return stream.generator().uniform(0.0, TWO_PI, n)


def min_distance_to_pole(points: np.ndarray,
                         pole: np.ndarray) -> tuple[float, float]:
    """Minimum Euclidean and spherical (geodesic) distance from the points to
    a fixed unit vector; spherical = 2 arcsin(euclidean / 2)."""
    dots = np.asarray(points) @ np.asarray(pole, dtype=float)
    best = float(np.clip(dots.max(), -1.0, 1.0))
    euclidean = float(np.sqrt(max(2.0 - 2.0 * best, 0.0)))
    return euclidean, float(np.arccos(best))


@dataclass(frozen=True)
class ProcessSpec:
    """Which point process to sample: uniform / poisson / symmetric / homeoid."""

    kind: str
    n: Optional[int] = None
    intensity: Optional[float] = None
    ellipsoid: object = None

    def __post_init__(self):
        if self.kind in ("uniform", "symmetric", "homeoid"):
            if self.n is None or self.n < 1:
                raise ValueError(f"{self.kind} process needs n >= 1")
        elif self.kind == "poisson":
            if self.intensity is None or self.intensity <= 0.0:
                raise ValueError("poisson process needs intensity > 0")
        else:
            raise ValueError(f"unknown process kind: {self.kind}")
        if self.kind == "homeoid" and self.ellipsoid is None:
            raise ValueError("homeoid process needs an ellipsoid")

    def sample(self, stream: RandomStream) -> np.ndarray:
        if self.kind == "uniform":
            return sample_uniform_sphere(self.n, stream)
        if self.kind == "poisson":
            return sample_poisson_sphere(self.intensity, stream)
        if self.kind == "symmetric":
            return sample_symmetric(self.n, stream)
        return sample_homeoid(self.n, self.ellipsoid, stream)
