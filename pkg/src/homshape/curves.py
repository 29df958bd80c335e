"""Discrete curve model: sampled points joined by group-exponential arcs.

A :class:`DiscreteCurve` stores samples on a time grid and is read as the
piecewise curve ``t -> exp(((t - t_i)/dt_i) xi_i) @ c_i`` on each cell,
where ``xi_i`` is the skew generator fitted so the arc lands exactly on the
next sample.  Fitting is closed-form on the sphere and a damped
Gauss-Newton solve in frame coordinates for the other kinds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lie
from .config import default_tol
from .errors import (
    DegenerateSegmentError,
    InputError,
    InvalidWarpError,
    LiftFailureError,
)
from .manifolds import ManifoldPoint, ManifoldSpec

_COINCIDENT = 1e-12
_NEWTON_TOL = 1e-12  # residual above this is a failed solve
_NEWTON_POLISH = 1e-14  # keep iterating down to here while steps help
_NEWTON_MAX_ITER = 50


@dataclass(eq=False)
class DiscreteCurve:
    """Time grid plus manifold samples, interpreted piecewise geodesically."""

    spec: ManifoldSpec
    grid: np.ndarray
    samples: np.ndarray
    tol: float = field(default=None, repr=False)  # type: ignore[assignment]
    check_immersion: bool = field(default=True, repr=False)

    def __post_init__(self):
        tol = self.tol if self.tol is not None else default_tol()
        self.tol = tol
        grid = np.asarray(self.grid, dtype=float)
        samples = np.asarray(self.samples, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise InputError("grid must hold at least two times")
        if np.any(np.diff(grid) <= 0):
            raise InputError("grid times must be strictly increasing")
        expected = (grid.size, self.spec.n, self.spec.width)
        if samples.shape != expected:
            raise InputError(
                f"samples must have shape {expected}, got {samples.shape}"
            )
        from .manifolds import point_defect  # local to avoid cycle at import

        for i, s in enumerate(samples):
            defect = point_defect(self.spec, s)
            if defect > tol:
                raise InputError(
                    f"sample {i} violates the {self.spec.kind} constraint "
                    f"by {defect:.3e}"
                )
        if self.check_immersion:
            gaps = np.linalg.norm(np.diff(samples, axis=0), axis=(1, 2))
            bad = np.nonzero(gaps <= _COINCIDENT)[0]
            if bad.size:
                raise DegenerateSegmentError(int(bad[0]), "coincident samples")
        self.grid = grid
        self.samples = samples
        self._segments = None

    @property
    def n_segments(self) -> int:
        return self.grid.size - 1

    def point(self, i: int) -> ManifoldPoint:
        return ManifoldPoint(self.spec, self.samples[i], tol=max(self.tol, 1e-9))

    def start_point(self) -> ManifoldPoint:
        return self.point(0)


@dataclass(frozen=True, eq=False)
class FrameLift:
    """Rotations [U, U_perp]_i whose leading columns are the curve samples."""

    frames: np.ndarray


@dataclass(eq=False)
class ReparamMap:
    """Monotone grid warp with pinned endpoints."""

    grid: np.ndarray
    s: np.ndarray
    path: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        s = np.asarray(self.s, dtype=float)
        if grid.shape != s.shape or grid.ndim != 1:
            raise InvalidWarpError("warp must assign one time per grid point")
        span = grid[-1] - grid[0]
        if abs(s[0] - grid[0]) > 1e-9 * span or abs(s[-1] - grid[-1]) > 1e-9 * span:
            raise InvalidWarpError("warp must fix the endpoints")
        if np.any(np.diff(s) < -1e-15 * span):
            raise InvalidWarpError("warp must be non-decreasing")
        self.grid = grid
        self.s = s

    def inverse(self) -> "ReparamMap":
        """Piecewise-linear inverse sampled on the same grid."""
        s_inv = np.interp(self.grid, self.s, self.grid)
        s_inv[0], s_inv[-1] = self.grid[0], self.grid[-1]
        return ReparamMap(self.grid, s_inv)

    def compose(self, other: "ReparamMap") -> "ReparamMap":
        """Warp equal to applying ``other`` first, then this map."""
        w = np.interp(other.s, self.grid, self.s)
        w[0], w[-1] = self.grid[0], self.grid[-1]
        return ReparamMap(self.grid, w)


def identity_warp(grid) -> ReparamMap:
    grid = np.asarray(grid, dtype=float)
    return ReparamMap(grid, grid.copy())


# ---------------------------------------------------------------------------
# segment fitting


def _sphere_velocity(a: np.ndarray, b: np.ndarray, index: int) -> np.ndarray:
    """Closed-form tangent at ``a`` whose arc reaches ``b`` in unit time."""
    d = float(a[:, 0] @ b[:, 0])
    if d <= -1.0 + 1e-12:
        raise DegenerateSegmentError(index, "antipodal samples")
    d = min(d, 1.0)
    if d >= 1.0 - 1e-12:
        # removable singularity: arccos(d)/sqrt(1-d^2) -> 1 as d -> 1
        ratio = 1.0 + (1.0 - d) / 3.0
    else:
        ratio = np.arccos(d) / np.sqrt(1.0 - d * d)
    return (b - d * a) * ratio


def _param_pairs(spec: ManifoldSpec) -> list[tuple[int, int]]:
    """Index pairs (row > col) spanning the solve space for one segment."""
    n, p = spec.n, spec.p
    if spec.kind == "lie_group":
        return [(r, c) for c in range(n) for r in range(c + 1, n)]
    pairs: list[tuple[int, int]] = []
    if spec.kind == "stiefel":
        pairs.extend((r, c) for c in range(p) for r in range(c + 1, p))
    pairs.extend((p + r, c) for c in range(p) for r in range(n - p))
    return pairs


def _solve_frame_step(spec: ManifoldSpec, target: np.ndarray, index: int) -> np.ndarray:
    """Solve exp(W) I_w = target for W in the reductive complement.

    ``target`` is the next sample expressed in the frame of the current one.
    Damped Gauss-Newton with a finite-difference Jacobian; the initial guess
    is the skew part of ``target``, exact to third order in the step size.
    """
    n, w = spec.n, spec.width
    pairs = _param_pairs(spec)
    eye_w = np.eye(n)[:, :w]

    def build(params: np.ndarray) -> np.ndarray:
        W = np.zeros((n, n))
        for val, (r, c) in zip(params, pairs):
            W[r, c] = val
            W[c, r] = -val
        return W

    def residual(params: np.ndarray) -> np.ndarray:
        return (lie.segment_exp(build(params)) @ eye_w - target).ravel()

    # Skew part of the target: exact to third order in the step since the
    # quadratic term of the exponential is symmetric.
    guess = np.zeros((n, n))
    if w < n:
        top = target[:w, :]
        guess[:w, :w] = 0.5 * (top - top.T)
        guess[w:, :w] = target[w:, :]
        guess[:w, w:] = -target[w:, :].T
    else:
        guess = 0.5 * (target - target.T)
    x = np.array([guess[r, c] for (r, c) in pairs])
    r = residual(x)
    err = np.max(np.abs(r))
    h = 1e-7
    for _ in range(_NEWTON_MAX_ITER):
        if err <= _NEWTON_POLISH:
            break
        jac = np.empty((r.size, x.size))
        for j in range(x.size):
            xj = x.copy()
            xj[j] += h
            jac[:, j] = (residual(xj) - r) / h
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        scale = 1.0
        improved = False
        for _ in range(12):
            r_new = residual(x + scale * step)
            err_new = np.max(np.abs(r_new))
            if err_new < err:
                improved = True
                break
            scale *= 0.5
        if not improved:
            break
        x = x + scale * step
        r, err = r_new, err_new
    if err <= _NEWTON_TOL:
        return build(x)
    raise LiftFailureError(
        f"segment {index}: no convergence after {_NEWTON_MAX_ITER} iterations "
        f"(residual {err:.3e})"
    )


def _fit_segments(curve: DiscreteCurve) -> tuple[np.ndarray, np.ndarray]:
    """Per-segment velocities v_i and generators xi_i with exp(xi_i) c_i = c_{i+1}."""
    spec = curve.spec
    n_seg = curve.n_segments
    vels = np.empty((n_seg, spec.n, spec.width))
    gens = np.empty((n_seg, spec.n, spec.n))
    for i in range(n_seg):
        a = curve.samples[i]
        b = curve.samples[i + 1]
        if np.linalg.norm(b - a) <= _COINCIDENT:
            raise DegenerateSegmentError(i, "coincident samples")
        if spec.kind == "sphere":
            v = _sphere_velocity(a, b, i)
            vels[i] = v
            gens[i] = v @ a.T - a @ v.T
        else:
            frame = lie.qr_complete(a)
            W = _solve_frame_step(spec, frame.T @ b, i)
            vels[i] = frame @ W[:, : spec.width]
            gens[i] = frame @ W @ frame.T
    return vels, gens


def _segments(curve: DiscreteCurve) -> tuple[np.ndarray, np.ndarray]:
    if curve._segments is None:
        curve._segments = _fit_segments(curve)
    return curve._segments


def fit_velocities(curve: DiscreteCurve) -> np.ndarray:
    """Segment velocities: tangents v_i at c_i whose unit-time arc hits c_{i+1}.

    The time step is not divided out; ``v_i / dt_i`` approximates the true
    derivative at ``t_i``.
    """
    return _segments(curve)[0]


def segment_generators(curve: DiscreteCurve) -> np.ndarray:
    """Skew generators xi_i = alpha(c_i, v_i) of the segment arcs."""
    return _segments(curve)[1]


def evaluate(curve: DiscreteCurve, t: float) -> np.ndarray:
    """Coordinates of the interpolated curve at time ``t``.

    Grid times return the stored samples bit-exactly; interior times follow
    the segment arc.  Times outside the grid raise.
    """
    grid = curve.grid
    t = float(t)
    j = int(np.searchsorted(grid, t))
    if j < grid.size and grid[j] == t:
        return curve.samples[j].copy()
    if j == 0 or j == grid.size:
        raise InputError(f"time {t} outside the curve domain [{grid[0]}, {grid[-1]}]")
    i = j - 1
    frac = (t - grid[i]) / (grid[i + 1] - grid[i])
    xi = _segments(curve)[1][i]
    return lie.segment_exp(frac * xi) @ curve.samples[i]


def lift_frames(curve: DiscreteCurve) -> FrameLift:
    """Frames propagated along the curve: F_{i+1} = exp(xi_i) F_i.

    F_0 completes the first sample to a rotation by QR.  For the group case
    the samples are their own frames.
    """
    if curve.spec.kind == "lie_group":
        return FrameLift(frames=curve.samples.copy())
    gens = _segments(curve)[1]
    frames = np.empty((curve.grid.size, curve.spec.n, curve.spec.n))
    frames[0] = lie.qr_complete(curve.samples[0])
    for i in range(curve.n_segments):
        frames[i + 1] = lie.segment_exp(gens[i]) @ frames[i]
    return FrameLift(frames=frames)


def reparametrise_curve(
    curve: DiscreteCurve, warp, check_immersion: bool = True
) -> DiscreteCurve:
    """Resample the curve at warped times, keeping the original grid."""
    if isinstance(warp, ReparamMap):
        if warp.grid.shape != curve.grid.shape or not np.allclose(
            warp.grid, curve.grid
        ):
            raise InvalidWarpError("warp grid does not match the curve grid")
        s = warp.s
    else:
        s = ReparamMap(curve.grid, np.asarray(warp, dtype=float)).s
    samples = np.stack([evaluate(curve, si) for si in s])
    return DiscreteCurve(
        curve.spec,
        curve.grid.copy(),
        samples,
        tol=max(curve.tol, 1e-9),
        check_immersion=check_immersion,
    )


def uniform_resample(curve: DiscreteCurve, n_segments: int) -> DiscreteCurve:
    """Resample onto the uniform grid on [0, 1] with the given segment count."""
    if n_segments < 1:
        raise InputError("need at least one segment")
    times = np.linspace(curve.grid[0], curve.grid[-1], n_segments + 1)
    samples = np.stack([evaluate(curve, t) for t in times])
    return DiscreteCurve(
        curve.spec,
        np.linspace(0.0, 1.0, n_segments + 1),
        samples,
        tol=max(curve.tol, 1e-9),
    )
