"""Dense kernels for SO(n) and so(n).

Skew matrices are plain float ndarrays validated through :func:`as_skew`;
rotations through :func:`check_rotation`.  Everything here is pure and
allocation-light so the curve pipelines can call into it per segment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConfigurationError, InputError

INNER_MODES = ("killing", "frobenius")

# Angle below which the Rodrigues coefficients switch to their Taylor
# expansions; sin(a)/a and (1-cos a)/a^2 cancel catastrophically near 0.
_RODRIGUES_SMALL = 1e-4


def as_skew(x, tol: float = 1e-8) -> np.ndarray:
    """Return ``x`` symmetrised to exact skewness.

    Rejects inputs whose symmetric part exceeds ``tol`` in Frobenius norm:
    those are not noise but wrong data.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InputError(f"skew matrix must be square, got shape {x.shape}")
    sym = 0.5 * (x + x.T)
    if np.linalg.norm(sym) > tol:
        raise InputError(
            f"matrix is not skew-symmetric: symmetric part has norm "
            f"{np.linalg.norm(sym):.3e} > {tol:.1e}"
        )
    return x - sym


def check_rotation(g, tol: float = 1e-10) -> np.ndarray:
    """Validate that ``g`` is in SO(n) within ``tol``."""
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise InputError(f"rotation must be square, got shape {g.shape}")
    n = g.shape[0]
    defect = np.linalg.norm(g.T @ g - np.eye(n))
    if defect > tol:
        raise InputError(f"matrix is not orthogonal: |g^T g - I| = {defect:.3e}")
    if abs(np.linalg.det(g) - 1.0) > max(tol, 1e-10):
        raise InputError("orthogonal matrix has determinant -1, not a rotation")
    return g


def hat(x) -> np.ndarray:
    """Map a 3-vector to the skew matrix acting as the cross product."""
    x = np.asarray(x, dtype=float).reshape(3)
    return np.array(
        [
            [0.0, -x[2], x[1]],
            [x[2], 0.0, -x[0]],
            [-x[1], x[0], 0.0],
        ]
    )


def vee(X) -> np.ndarray:
    """Inverse of :func:`hat`; requires a 3x3 skew matrix."""
    X = np.asarray(X, dtype=float)
    if X.shape != (3, 3):
        raise InputError(f"vee expects a 3x3 matrix, got {X.shape}")
    X = as_skew(X)
    return np.array([X[2, 1], X[0, 2], X[1, 0]])


def rodrigues(X) -> np.ndarray:
    """Closed-form exponential of a 3x3 skew matrix.

    exp(X) = I + sin(a)/a X + (1-cos a)/a^2 X^2 with a the rotation angle.
    """
    X = np.asarray(X, dtype=float)
    if X.shape != (3, 3):
        raise InputError(f"rodrigues expects a 3x3 matrix, got {X.shape}")
    a = np.linalg.norm(vee(X))
    if a < _RODRIGUES_SMALL:
        a2 = a * a
        c1 = 1.0 - a2 / 6.0 + a2 * a2 / 120.0
        c2 = 0.5 - a2 / 24.0 + a2 * a2 / 720.0
    else:
        c1 = np.sin(a) / a
        c2 = (1.0 - np.cos(a)) / (a * a)
    return np.eye(3) + c1 * X + c2 * (X @ X)


def expm(X) -> np.ndarray:
    """Exponential of a skew matrix of any dimension.

    Defers to scipy's scaling-and-squaring Pade implementation, kept as an
    independent cross-check of :func:`rodrigues`.
    """
    return scipy.linalg.expm(np.asarray(X, dtype=float))


def segment_exp(X: np.ndarray) -> np.ndarray:
    """Exponential used by the curve pipelines: Rodrigues when 3x3."""
    if X.shape == (3, 3):
        return rodrigues(X)
    return scipy.linalg.expm(X)


def adjoint(g, X) -> np.ndarray:
    """Adjoint action of a rotation on a skew matrix: g X g^T."""
    g = np.asarray(g, dtype=float)
    X = np.asarray(X, dtype=float)
    if g.shape != X.shape:
        raise InputError(f"dimension mismatch: g is {g.shape}, X is {X.shape}")
    return g @ X @ g.T


def algebra_inner(X, Y, mode: str = "killing") -> float:
    """Inner product on so(n).

    ``frobenius`` is Tr(X Y^T).  ``killing`` is the negative Killing form
    scaled to -(n-2) Tr(XY), positive definite on so(n) for n >= 3; the two
    coincide on so(3).
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != Y.shape:
        raise InputError(f"dimension mismatch: {X.shape} vs {Y.shape}")
    if mode == "frobenius":
        return float(np.sum(X * Y))
    if mode == "killing":
        n = X.shape[0]
        if n < 3:
            raise ConfigurationError(
                "the scaled Killing form degenerates on so(2); use mode='frobenius'"
            )
        # For skew X, Y:  -(n-2) Tr(XY) = (n-2) Tr(X Y^T).
        return float((n - 2) * np.sum(X * Y))
    raise ConfigurationError(f"unknown inner-product mode {mode!r}")


def algebra_norm(X, mode: str = "killing") -> float:
    """Norm induced by :func:`algebra_inner`."""
    return float(np.sqrt(max(algebra_inner(X, X, mode), 0.0)))


@dataclass(frozen=True, eq=False)
class ReductiveSplit:
    """Orthogonal decomposition of a skew matrix into isotropy and complement.

    ``h_part + m_part`` reconstructs the input exactly; the two blocks are
    orthogonal under :func:`algebra_inner` in either mode.
    """

    p: int
    mode: str
    h_part: np.ndarray
    m_part: np.ndarray


def reductive_project(X, p: int, mode: str = "stiefel") -> ReductiveSplit:
    """Split a skew matrix along the reductive decomposition for block size p.

    ``stiefel`` keeps the trailing (n-p)x(n-p) block as the isotropy part;
    ``grassmann`` additionally assigns the leading pxp block to it, leaving
    only the off-diagonal coupling blocks in the complement.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if not 0 < p < n:
        raise InputError(f"block size p={p} out of range for n={n}")
    if mode not in ("stiefel", "grassmann"):
        raise ConfigurationError(f"unknown reductive mode {mode!r}")
    h = np.zeros_like(X)
    h[p:, p:] = X[p:, p:]
    if mode == "grassmann":
        h[:p, :p] = X[:p, :p]
    return ReductiveSplit(p=p, mode=mode, h_part=h, m_part=X - h)


def qr_complete(Q) -> np.ndarray:
    """Complete an nxp orthonormal-column matrix to a rotation [Q, Q_perp].

    The first p columns equal ``Q``; a trailing column sign is flipped if
    needed to land in SO(n).  Deterministic in ``Q``.
    """
    Q = np.asarray(Q, dtype=float)
    n, p = Q.shape
    if n == p:
        return check_rotation(Q)
    full, _ = np.linalg.qr(Q, mode="complete")
    # The leading columns of the QR factor equal Q up to column signs and
    # rounding; substitute Q itself so the frame projects onto it exactly.
    frame = np.empty_like(full)
    frame[:, :p] = Q
    frame[:, p:] = full[:, p:]
    if np.linalg.det(frame) < 0:
        frame[:, -1] = -frame[:, -1]
    return frame
