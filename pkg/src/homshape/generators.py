"""Named curve families and seeded random curves.

The ``fig*`` generators are the sphere curves used by the bundled example
pipelines; ``random_walk`` produces a smooth random curve on any of the
supported manifolds from an explicit seed.
"""

from __future__ import annotations

import numpy as np

from . import lie
from .curves import DiscreteCurve
from .errors import ConfigurationError
from .manifolds import ManifoldPoint, ManifoldSpec, alpha_from_coords, tangent_project


def rot_x(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


_E1 = np.array([1.0, 0.0, 0.0])
_DIAG = np.array([0.0, 1.0, 1.0]) / np.sqrt(2.0)


def fig1_c1(t: float) -> np.ndarray:
    return rot_x(np.pi * t**3) @ rot_y(np.pi * t**3) @ rot_y(np.pi * t**3 / 2) @ _E1


def fig1_c2(t: float) -> np.ndarray:
    return rot_z(3 * np.pi * t / 4) @ rot_x(np.pi * t) @ _E1


def fig2_c1(t: float) -> np.ndarray:
    return rot_x(2 * np.pi * t) @ rot_y(2 * np.pi * t) @ rot_z(np.pi * t) @ _DIAG


def fig2_c2(t: float) -> np.ndarray:
    return rot_z(2 * np.pi * t) @ rot_x(2 * np.pi * t) @ rot_y(np.pi * t / 2) @ _DIAG


def great_circle(t: float) -> np.ndarray:
    return np.array([np.cos(np.pi * t / 2), np.sin(np.pi * t / 2), 0.0])


SPHERE_GENERATORS = {
    "fig1_c1": fig1_c1,
    "fig1_c2": fig1_c2,
    "fig2_c1": fig2_c1,
    "fig2_c2": fig2_c2,
    "great_circle": great_circle,
}

GENERATOR_NAMES = tuple(SPHERE_GENERATORS) + ("random_walk",)


def sample_sphere_curve(fn, n_segments: int, warp=None) -> DiscreteCurve:
    """Sample an analytic sphere curve on the uniform grid on [0, 1].

    ``warp`` optionally precomposes the curve with a time warp, so the
    samples become ``fn(warp(t_i))``.
    """
    grid = np.linspace(0.0, 1.0, n_segments + 1)
    times = grid if warp is None else np.array([warp(t) for t in grid])
    samples = np.stack([np.asarray(fn(t), dtype=float)[:, None] for t in times])
    spec = ManifoldSpec("sphere", 3, 1)
    return DiscreteCurve(spec, grid, samples, tol=1e-8)


def random_start(spec: ManifoldSpec, rng: np.random.Generator) -> np.ndarray:
    """Seeded random point on the manifold."""
    if spec.kind == "sphere":
        v = rng.normal(size=3)
        return (v / np.linalg.norm(v))[:, None]
    g = rng.normal(size=(spec.n, spec.width))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    if spec.kind == "lie_group" and np.linalg.det(q) < 0:
        q[:, -1] = -q[:, -1]
    return q


def random_tangent(
    spec: ManifoldSpec, coords: np.ndarray, rng: np.random.Generator, scale: float
) -> np.ndarray:
    """Seeded random tangent vector of roughly the requested magnitude."""
    point = ManifoldPoint(spec, coords, tol=1e-8)
    for _ in range(8):
        ambient = rng.normal(size=coords.shape)
        vec = tangent_project(point, ambient)
        nrm = np.linalg.norm(vec)
        if nrm > 1e-8:
            return vec * (scale / nrm) * (0.5 + rng.uniform())
    raise ConfigurationError("could not draw a nonzero tangent vector")


def random_curve(
    spec: ManifoldSpec,
    n_segments: int,
    rng: np.random.Generator,
    step: float = 0.25,
) -> DiscreteCurve:
    """Smooth random walk: each segment flows along a random tangent."""
    samples = np.empty((n_segments + 1, spec.n, spec.width))
    samples[0] = random_start(spec, rng)
    for i in range(n_segments):
        vec = random_tangent(spec, samples[i], rng, step)
        xi = alpha_from_coords(spec, samples[i], vec)
        samples[i + 1] = lie.segment_exp(xi) @ samples[i]
    grid = np.linspace(0.0, 1.0, n_segments + 1)
    return DiscreteCurve(spec, grid, samples, tol=1e-8)


def generate(
    name: str,
    n_segments: int,
    spec: ManifoldSpec | None = None,
    seed: int = 0,
    step: float = 0.25,
) -> DiscreteCurve:
    """Build a named curve at the requested resolution."""
    if name == "random_walk":
        spec = spec if spec is not None else ManifoldSpec("sphere", 3, 1)
        return random_curve(spec, n_segments, np.random.default_rng(seed), step=step)
    if name not in SPHERE_GENERATORS:
        raise ConfigurationError(
            f"unknown generator {name!r}; choose from {sorted(GENERATOR_NAMES)}"
        )
    return sample_sphere_curve(SPHERE_GENERATORS[name], n_segments)
