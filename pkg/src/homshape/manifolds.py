"""Supported homogeneous manifolds and their transport maps.

Four kinds are implemented, all realised inside SO(n):

* ``sphere``     -- unit vectors in R^3 under rotation,
* ``stiefel``    -- nxp orthonormal frames,
* ``grassmann``  -- nxp frames representing p-dimensional subspaces,
* ``lie_group``  -- SO(n) itself acting on itself.

Points carry their coordinates as an ``n x p`` matrix (``n x n`` for the
group case; a sphere point is the single-column case).  The central object
is :func:`alpha`, which lifts a tangent vector at a point to a skew matrix
generating the motion: ``alpha(x, v) @ x == v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lie
from .config import default_tol
from .errors import ConfigurationError, InputError, InvalidTangentError

KINDS = ("sphere", "stiefel", "grassmann", "lie_group")


@dataclass(frozen=True)
class ManifoldSpec:
    """Which manifold a point or curve lives on."""

    kind: str
    n: int
    p: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown manifold kind {self.kind!r}")
        if self.kind == "sphere":
            if self.n != 3 or self.p != 1:
                raise ConfigurationError("sphere mode supports n=3, p=1")
        elif self.kind == "lie_group":
            if self.n < 2:
                raise ConfigurationError("lie_group requires n >= 2")
            object.__setattr__(self, "p", self.n)
        else:
            if not 1 <= self.p < self.n:
                raise ConfigurationError(
                    f"{self.kind} requires 1 <= p < n, got n={self.n}, p={self.p}"
                )

    @property
    def width(self) -> int:
        """Number of coordinate columns."""
        return self.n if self.kind == "lie_group" else self.p


def _coerce_coords(spec: ManifoldSpec, coords) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]
    if coords.shape != (spec.n, spec.width):
        raise InputError(
            f"coordinates for {spec.kind}(n={spec.n}, p={spec.p}) must have "
            f"shape {(spec.n, spec.width)}, got {coords.shape}"
        )
    return coords


def point_defect(spec: ManifoldSpec, coords: np.ndarray) -> float:
    """How far coordinates are from satisfying the manifold constraint."""
    if spec.kind == "lie_group":
        d = np.linalg.norm(coords.T @ coords - np.eye(spec.n))
        return float(max(d, abs(np.linalg.det(coords) - 1.0)))
    return float(np.linalg.norm(coords.T @ coords - np.eye(spec.width)))


def project_to_manifold(spec: ManifoldSpec, coords) -> np.ndarray:
    """Nearest-point repair of slightly off-manifold coordinates."""
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]
    if spec.kind == "sphere":
        nrm = np.linalg.norm(coords)
        if nrm == 0:
            raise InputError("cannot project the zero vector to the sphere")
        return coords / nrm
    u, _, vt = np.linalg.svd(coords, full_matrices=False)
    out = u @ vt
    if spec.kind == "lie_group" and np.linalg.det(out) < 0:
        u[:, -1] = -u[:, -1]
        out = u @ vt
    return out


@dataclass(frozen=True, eq=False)
class ManifoldPoint:
    """A validated point on one of the supported manifolds."""

    spec: ManifoldSpec
    coords: np.ndarray
    tol: float = field(default=None, repr=False, compare=False)  # type: ignore[assignment]

    def __post_init__(self):
        tol = self.tol if self.tol is not None else default_tol()
        object.__setattr__(self, "tol", tol)
        coords = _coerce_coords(self.spec, self.coords)
        defect = point_defect(self.spec, coords)
        if defect > tol:
            raise InputError(
                f"point violates {self.spec.kind} constraint by {defect:.3e} "
                f"(tolerance {tol:.1e})"
            )
        object.__setattr__(self, "coords", coords)

    @property
    def vector(self) -> np.ndarray:
        """Flattened view for single-column points."""
        return self.coords[:, 0] if self.coords.shape[1] == 1 else self.coords


def tangent_defect(x: ManifoldPoint, vec: np.ndarray) -> float:
    """How far a vector is from the tangent space at ``x``."""
    kind = x.spec.kind
    q = x.coords
    if kind == "sphere" or kind == "grassmann":
        return float(np.linalg.norm(q.T @ vec))
    if kind == "stiefel":
        s = q.T @ vec
        return float(np.linalg.norm(0.5 * (s + s.T)))
    # lie_group: vec @ g^{-1} must be skew
    xi = vec @ q.T
    return float(np.linalg.norm(0.5 * (xi + xi.T)))


def tangent_project(x: ManifoldPoint, vec: np.ndarray) -> np.ndarray:
    """Orthogonal projection of an ambient vector onto the tangent space."""
    kind = x.spec.kind
    q = x.coords
    if kind == "sphere" or kind == "grassmann":
        return vec - q @ (q.T @ vec)
    if kind == "stiefel":
        s = q.T @ vec
        return vec - q @ (0.5 * (s + s.T))
    xi = vec @ q.T
    return (0.5 * (xi - xi.T)) @ q


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A tangent vector anchored at a manifold point."""

    base: ManifoldPoint
    vec: np.ndarray
    tol: float = field(default=1e-8, repr=False, compare=False)
    repair: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        vec = np.asarray(self.vec, dtype=float)
        if vec.ndim == 1:
            vec = vec[:, None]
        if vec.shape != self.base.coords.shape:
            raise InputError(
                f"tangent vector shape {vec.shape} does not match base "
                f"point shape {self.base.coords.shape}"
            )
        if self.repair:
            vec = tangent_project(self.base, vec)
        else:
            defect = tangent_defect(self.base, vec)
            if defect > self.tol:
                raise InvalidTangentError(
                    f"vector violates tangency at its base point by {defect:.3e}"
                )
        object.__setattr__(self, "vec", vec)


def act(g, x: ManifoldPoint) -> ManifoldPoint:
    """Left action of a rotation on a point."""
    g = lie.check_rotation(g, tol=max(x.tol, 1e-10))
    if g.shape[0] != x.spec.n:
        raise InputError(
            f"rotation dimension {g.shape[0]} does not match manifold n={x.spec.n}"
        )
    return ManifoldPoint(x.spec, g @ x.coords, tol=max(x.tol, 1e-9))


def act_tangent(g, v: TangentVector) -> TangentVector:
    """Push a tangent vector forward along the action of ``g``."""
    moved = act(g, v.base)
    return TangentVector(moved, np.asarray(g, dtype=float) @ v.vec)


def alpha(x: ManifoldPoint, v: TangentVector) -> np.ndarray:
    """Lift a tangent vector at ``x`` to a skew generator.

    The defining property is ``alpha(x, v) @ x.coords == v.vec``.  Per kind:

    * sphere:    v u^T - u v^T
    * stiefel:   F Q^T - Q F^T with F = V - Q (Q^T V)/2
    * grassmann: V Q^T - Q V^T
    * lie_group: v g^{-1}
    """
    if v.base is not x and not np.array_equal(v.base.coords, x.coords):
        raise InputError("tangent vector is not anchored at the given point")
    kind = x.spec.kind
    q = x.coords
    w = v.vec
    if kind == "sphere" or kind == "grassmann":
        return w @ q.T - q @ w.T
    if kind == "stiefel":
        f = w - 0.5 * (q @ (q.T @ w))
        return f @ q.T - q @ f.T
    return w @ q.T


def alpha_from_coords(spec: ManifoldSpec, coords: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Unvalidated fast path of :func:`alpha` for internal loops."""
    kind = spec.kind
    if kind == "sphere" or kind == "grassmann":
        return vec @ coords.T - coords @ vec.T
    if kind == "stiefel":
        f = vec - 0.5 * (coords @ (coords.T @ vec))
        return f @ coords.T - coords @ f.T
    return vec @ coords.T


def manifold_exp(x: ManifoldPoint, vec: np.ndarray) -> np.ndarray:
    """Coordinates of the point reached by flowing along ``alpha(x, vec)``."""
    xi = alpha_from_coords(x.spec, x.coords, np.asarray(vec, dtype=float))
    return lie.segment_exp(xi) @ x.coords


def alpha_equivariance_defect(g, x: ManifoldPoint, v: TangentVector, mode: str = "killing") -> float:
    """Norm of ``alpha(g.x, g.v) - Ad(g) alpha(x, v)``.

    A diagnostic: zero for the sphere and Grassmann transports (and for
    block-diagonal isotropy elements on the Stiefel manifold).
    """
    g = np.asarray(g, dtype=float)
    lhs = alpha(act(g, x), act_tangent(g, v))
    rhs = lie.adjoint(g, alpha(x, v))
    return lie.algebra_norm(lhs - rhs, mode)
