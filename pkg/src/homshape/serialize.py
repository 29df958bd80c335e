"""JSON schemas for curves, transform paths, and distance reports.

Floats are written with Python's shortest round-trip representation, so a
save/load cycle reproduces every sample bit-exactly.  All writes go through
a temporary file and an atomic rename.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .curves import DiscreteCurve
from .errors import InputError
from .manifolds import ManifoldPoint, ManifoldSpec, project_to_manifold
from .metrics import ShapeDistanceReport
from .transforms import AlgebraPath


def _spec_to_dict(spec: ManifoldSpec) -> dict:
    return {"kind": spec.kind, "n": int(spec.n), "p": int(spec.p)}


def _spec_from_dict(data) -> ManifoldSpec:
    try:
        return ManifoldSpec(str(data["kind"]), int(data["n"]), int(data["p"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad manifold spec: {exc}") from exc


def curve_to_dict(curve: DiscreteCurve, name: str | None = None) -> dict:
    doc = {
        "spec": _spec_to_dict(curve.spec),
        "grid": curve.grid.tolist(),
        "samples": [s.ravel().tolist() for s in curve.samples],
    }
    if name:
        doc["name"] = name
    return doc


def curve_from_dict(data, repair: bool = False, tol: float | None = None) -> DiscreteCurve:
    try:
        spec = _spec_from_dict(data["spec"])
        grid = np.asarray(data["grid"], dtype=float)
        samples = np.asarray(
            [np.asarray(row, dtype=float).reshape(spec.n, spec.width) for row in data["samples"]]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad curve document: {exc}") from exc
    if repair:
        samples = np.stack([project_to_manifold(spec, s) for s in samples])
    return DiscreteCurve(spec, grid, samples, tol=tol)


def path_to_dict(path: AlgebraPath, transform_kind: str = "srvt") -> dict:
    return {
        "spec": _spec_to_dict(path.spec),
        "grid": path.grid.tolist(),
        "values": [v.ravel().tolist() for v in path.values],
        "base": {
            "spec": _spec_to_dict(path.base.spec),
            "coords": path.base.coords.ravel().tolist(),
        },
        "inner": path.inner,
        "transform": transform_kind,
    }


def path_from_dict(data) -> tuple[AlgebraPath, str]:
    try:
        spec = _spec_from_dict(data["spec"])
        grid = np.asarray(data["grid"], dtype=float)
        values = np.asarray(
            [np.asarray(row, dtype=float).reshape(spec.n, spec.n) for row in data["values"]]
        )
        base_doc = data["base"]
        base_spec = _spec_from_dict(base_doc["spec"])
        base = ManifoldPoint(
            base_spec,
            np.asarray(base_doc["coords"], dtype=float).reshape(
                base_spec.n, base_spec.width
            ),
        )
        inner = str(data.get("inner", "killing"))
        transform_kind = str(data.get("transform", "srvt"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad path document: {exc}") from exc
    return AlgebraPath(grid, values, spec, base, inner), transform_kind


def report_to_dict(report: ShapeDistanceReport) -> dict:
    return {
        "d_param": report.d_param,
        "d_shape": report.d_shape,
        "warp": report.warp.s.tolist(),
        "transform": report.transform_kind,
    }


def save_json(doc: dict, filename: str) -> None:
    """Write a JSON document atomically (temp file + rename)."""
    directory = os.path.dirname(os.path.abspath(filename))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            json.dump(doc, handle, indent=1)
            handle.write("\n")
        os.replace(tmp, filename)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_json(filename: str) -> dict:
    try:
        with open(filename) as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {filename}: {exc}") from exc
