"""Package-wide numerical defaults."""

import os

DEFAULT_TOL = 1e-10


def default_tol() -> float:
    """Default validation tolerance, overridable via HOMSHAPE_TOL."""
    value = os.environ.get("HOMSHAPE_TOL")
    if value is None:
        return DEFAULT_TOL
    tol = float(value)
    if tol <= 0:
        raise ValueError("HOMSHAPE_TOL must be positive")
    return tol
