"""Square-root velocity transforms and the algebra-path machinery.

An :class:`AlgebraPath` is a piecewise-constant skew-matrix-valued function
on a grid.  The forward transform lifts segment velocities through the
manifold's transport map and rescales each value by the inverse square root
of its norm; the inverse rebuilds the curve as a product of exponentials.

The straightening map :func:`psi` conjugates a path by its own evolution,
evaluated at the left endpoint of each segment.  With that convention the
discrete map is an exact involution, which is what makes the reductive
transform invertible to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lie
from .curves import DiscreteCurve, lift_frames, segment_generators
from .errors import DegenerateVelocityError, InputError
from .manifolds import ManifoldPoint, ManifoldSpec

TRANSFORM_KINDS = ("srvt", "reductive")


@dataclass(eq=False)
class AlgebraPath:
    """Piecewise-constant so(n)-valued path with its inversion data.

    ``values[i]`` holds on ``[grid[i], grid[i+1])``.  The start point of the
    source curve and the inner-product mode used for scaling are stored so
    the path is self-describing for inversion.
    """

    grid: np.ndarray
    values: np.ndarray
    spec: ManifoldSpec
    base: ManifoldPoint
    inner: str = "killing"

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise InputError("grid must hold at least two times")
        if np.any(np.diff(grid) <= 0):
            raise InputError("grid times must be strictly increasing")
        if values.shape != (grid.size - 1, self.spec.n, self.spec.n):
            raise InputError(
                f"values must have shape {(grid.size - 1, self.spec.n, self.spec.n)}, "
                f"got {values.shape}"
            )
        sym = 0.5 * (values + np.transpose(values, (0, 2, 1)))
        worst = float(np.max(np.linalg.norm(sym, axis=(1, 2)))) if values.size else 0.0
        if worst > 1e-8:
            raise InputError(f"path values are not skew (defect {worst:.3e})")
        if self.inner not in lie.INNER_MODES:
            raise InputError(f"unknown inner-product mode {self.inner!r}")
        if self.base.spec != self.spec:
            raise InputError("base point spec does not match path spec")
        self.grid = grid
        self.values = values - sym

    @property
    def n_segments(self) -> int:
        return self.grid.size - 1

    def norms(self) -> np.ndarray:
        return np.array(
            [lie.algebra_norm(v, self.inner) for v in self.values]
        )

    def with_values(self, values: np.ndarray) -> "AlgebraPath":
        return AlgebraPath(self.grid.copy(), values, self.spec, self.base, self.inner)


def require_same_grid(a: AlgebraPath, b: AlgebraPath) -> None:
    if a.grid.shape != b.grid.shape or not np.allclose(a.grid, b.grid, atol=1e-12):
        raise InputError("paths are defined on different grids")


def scale(path: AlgebraPath) -> AlgebraPath:
    """Rescale each value to q / sqrt(|q|); zero values are an error."""
    out = np.empty_like(path.values)
    for i, v in enumerate(path.values):
        nrm = lie.algebra_norm(v, path.inner)
        if nrm <= 1e-12:
            raise DegenerateVelocityError(i)
        out[i] = v / np.sqrt(nrm)
    return path.with_values(out)


def unscale(path: AlgebraPath) -> AlgebraPath:
    """Inverse of :func:`scale`: each value becomes q |q|."""
    out = np.empty_like(path.values)
    for i, v in enumerate(path.values):
        out[i] = v * lie.algebra_norm(v, path.inner)
    return path.with_values(out)


def _transport_derivatives(curve: DiscreteCurve) -> np.ndarray:
    """Per-segment transported true derivatives alpha(c_i, v_i) / dt_i."""
    gens = segment_generators(curve)
    dts = np.diff(curve.grid)
    return gens / dts[:, None, None]


def srvt(curve: DiscreteCurve, inner: str = "killing") -> AlgebraPath:
    """Square-root velocity transform of a discrete curve.

    Each segment's transported derivative is divided by the square root of
    its norm.  The start point is recorded for inversion.
    """
    raw = _transport_derivatives(curve)
    path = AlgebraPath(
        curve.grid.copy(), raw, curve.spec, curve.start_point(), inner
    )
    return scale(path)


def rho_evolution(c0: ManifoldPoint, path: AlgebraPath) -> DiscreteCurve:
    """Evolve a start point along a piecewise-constant algebra path.

    Exact for this discretisation: each segment applies one exponential,
    ``c_{i+1} = exp(dt_i q_i) c_i``.
    """
    if c0.spec != path.spec:
        raise InputError("start point and path live on different manifolds")
    dts = np.diff(path.grid)
    samples = np.empty((path.grid.size, path.spec.n, path.spec.width))
    samples[0] = c0.coords
    for i in range(path.n_segments):
        samples[i + 1] = lie.segment_exp(dts[i] * path.values[i]) @ samples[i]
    return DiscreteCurve(
        path.spec,
        path.grid.copy(),
        samples,
        tol=1e-8,
        check_immersion=False,
    )


def srvt_inverse(path: AlgebraPath) -> DiscreteCurve:
    """Rebuild the curve whose transform is ``path``."""
    return rho_evolution(path.base, unscale(path))


def _evolution_prefix(path: AlgebraPath) -> np.ndarray:
    """Rotations G_i = Evol(q)(t_i): products of the segment exponentials."""
    dts = np.diff(path.grid)
    out = np.empty((path.grid.size, path.spec.n, path.spec.n))
    out[0] = np.eye(path.spec.n)
    for i in range(path.n_segments):
        out[i + 1] = lie.segment_exp(dts[i] * path.values[i]) @ out[i]
    return out


def psi(path: AlgebraPath) -> AlgebraPath:
    """Straightening involution: q_i -> -Ad(G_i^{-1}) q_i.

    G_i is the evolution of the path itself at the left endpoint of segment
    i; applying the map twice returns the original path exactly.
    """
    prefixes = _evolution_prefix(path)
    out = np.empty_like(path.values)
    for i, v in enumerate(path.values):
        g = prefixes[i]
        out[i] = -(g.T @ v @ g)
    return path.with_values(out)


def psi_g0(path: AlgebraPath, g0) -> AlgebraPath:
    """Frame-twisted straightening: Ad(g0) applied after :func:`psi`.

    Its inverse is the same map with ``g0`` transposed.
    """
    g0 = lie.check_rotation(g0, tol=1e-9)
    straightened = psi(path)
    out = np.einsum("ab,ibc,dc->iad", g0, straightened.values, g0)
    return path.with_values(out)


def reductive_srvt(curve: DiscreteCurve, inner: str = "killing") -> AlgebraPath:
    """Transform whose values lie in the reductive complement.

    The transported derivative is conjugated back through the propagated
    frame of the curve before scaling; conjugation preserves norms, so the
    values keep the segment speeds of the plain transform.
    """
    raw = _transport_derivatives(curve)
    frames = lift_frames(curve).frames
    straightened = np.empty_like(raw)
    for i, v in enumerate(raw):
        f = frames[i]
        straightened[i] = -(f.T @ v @ f)
    path = AlgebraPath(
        curve.grid.copy(), straightened, curve.spec, curve.start_point(), inner
    )
    return scale(path)


def reductive_srvt_inverse(path: AlgebraPath, g0) -> DiscreteCurve:
    """Invert :func:`reductive_srvt` given the start frame ``g0``.

    The start frame must project onto the stored base point.  Values are
    required to lie in the reductive complement of the path's manifold.
    """
    g0 = lie.check_rotation(g0, tol=1e-9)
    check_reductive_membership(path, tol=1e-8)
    base_coords = g0[:, : path.spec.width]
    if np.linalg.norm(base_coords - path.base.coords) > 1e-8:
        raise InputError("start frame does not project onto the path's base point")
    unscaled = unscale(path)
    twisted = psi_g0(unscaled, g0)
    return rho_evolution(path.base, twisted)


def reductive_membership_defect(path: AlgebraPath) -> tuple[float, float]:
    """Max isotropy-block norm of the values (and of the pxp block alone).

    The second number is only meaningful for the Grassmann kind, whose
    complement also excludes the leading block.
    """
    kind = path.spec.kind
    if kind == "lie_group":
        return 0.0, 0.0
    p = path.spec.p
    mode = "grassmann" if kind == "grassmann" else "stiefel"
    worst_h = 0.0
    worst_omega = 0.0
    for v in path.values:
        split = lie.reductive_project(v, p, mode)
        worst_h = max(worst_h, float(np.linalg.norm(split.h_part)))
        worst_omega = max(worst_omega, float(np.linalg.norm(v[:p, :p])))
    return worst_h, worst_omega


def check_reductive_membership(path: AlgebraPath, tol: float = 1e-8) -> None:
    worst_h, _ = reductive_membership_defect(path)
    if worst_h > tol:
        raise InputError(
            f"path values leave the reductive complement (defect {worst_h:.3e})"
        )
