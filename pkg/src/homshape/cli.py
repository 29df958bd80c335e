"""Command-line front end.

Exit codes: 0 success, 1 invariant-check failure, 2 bad input or
configuration, 3 numerical degeneracy (antipodal samples, vanishing
velocities).  The HOMSHAPE_TOL environment variable overrides the default
validation tolerance of 1e-10.
"""

from __future__ import annotations

import csv
import functools
import json
import sys

import click
import numpy as np

from . import lie, serialize
from .config import default_tol
from .curves import DiscreteCurve, lift_frames, reparametrise_curve, uniform_resample
from .errors import (
    ConfigurationError,
    HomshapeError,
    InputError,
    NumericalDegeneracyError,
)
from .generators import GENERATOR_NAMES, generate as generate_curve, random_curve
from .manifolds import ManifoldSpec, point_defect
from .metrics import align_start_rotation, geodesic_interpolate, l2_distance, shape_distance
from .registration import reparametrise
from .transforms import (
    psi,
    psi_g0,
    reductive_membership_defect,
    reductive_srvt,
    reductive_srvt_inverse,
    srvt,
    srvt_inverse,
)

_INNER = {"killing": "killing", "frobenius": "frobenius"}


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NumericalDegeneracyError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
        except (InputError, ConfigurationError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except HomshapeError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _load_curve(filename: str, repair: bool) -> DiscreteCurve:
    return serialize.curve_from_dict(
        serialize.load_json(filename), repair=repair, tol=default_tol() * 10
    )


@click.group()
def main():
    """Shape analysis for curves on spheres, frame manifolds, and SO(n)."""


@main.command()
@click.argument("generator", type=click.Choice(sorted(GENERATOR_NAMES)))
@click.option("--n", "n_segments", default=100, show_default=True, help="Number of segments.")
@click.option("--kind", default="sphere", show_default=True,
              type=click.Choice(["sphere", "stiefel", "grassmann", "lie_group"]),
              help="Manifold for random_walk.")
@click.option("--dim", default=3, show_default=True, help="Ambient dimension for random_walk.")
@click.option("--frame", "frame_p", default=1, show_default=True, help="Frame width for random_walk.")
@click.option("--seed", default=0, show_default=True, help="Random seed.")
@click.option("--output", "-o", required=True, type=click.Path(), help="Curve file to write.")
@_handle_errors
def generate(generator, n_segments, kind, dim, frame_p, seed, output):
    """Emit a named curve as a JSON curve file."""
    if generator == "random_walk":
        spec = ManifoldSpec(kind, dim, frame_p)
        curve = random_curve(spec, n_segments, np.random.default_rng(seed))
    else:
        curve = generate_curve(generator, n_segments, seed=seed)
    serialize.save_json(serialize.curve_to_dict(curve, name=generator), output)
    click.echo(f"wrote {generator} with {n_segments} segments to {output}")


@main.command()
@click.option("--input", "-i", "input_file", required=True, type=click.Path(exists=True))
@click.option("--output", "-o", required=True, type=click.Path())
@click.option("--transform", "transform_kind", default="srvt", show_default=True,
              type=click.Choice(["srvt", "reductive"]))
@click.option("--inner", default="killing", show_default=True, type=click.Choice(sorted(_INNER)))
@click.option("--repair-tangents", is_flag=True, help="Project loaded samples back onto the manifold.")
@_handle_errors
def transform(input_file, output, transform_kind, inner, repair_tangents):
    """Transform a curve file into an algebra-path file."""
    curve = _load_curve(input_file, repair_tangents)
    fn = reductive_srvt if transform_kind == "reductive" else srvt
    path = fn(curve, _INNER[inner])
    serialize.save_json(serialize.path_to_dict(path, transform_kind), output)
    click.echo(f"wrote {transform_kind} path with {path.n_segments} values to {output}")


@main.command()
@click.option("--input", "-i", "input_file", required=True, type=click.Path(exists=True))
@click.option("--output", "-o", required=True, type=click.Path())
@_handle_errors
def invert(input_file, output):
    """Rebuild the curve whose transform is stored in a path file."""
    path, transform_kind = serialize.path_from_dict(serialize.load_json(input_file))
    if transform_kind == "reductive":
        curve = reductive_srvt_inverse(path, lie.qr_complete(path.base.coords))
    else:
        curve = srvt_inverse(path)
    serialize.save_json(serialize.curve_to_dict(curve), output)
    click.echo(f"wrote inverted curve with {curve.n_segments} segments to {output}")


def _distance_options(fn):
    fn = click.option("--input", "-i", "input_file", required=True, type=click.Path(exists=True))(fn)
    fn = click.option("--input2", "input_file2", required=True, type=click.Path(exists=True))(fn)
    fn = click.option("--n", "n_segments", default=100, show_default=True,
                      help="Common resampling resolution.")(fn)
    fn = click.option("--window", default=10, show_default=True,
                      help="DP search band in cells; 0 runs the exhaustive O(N^4) search.")(fn)
    fn = click.option("--transform", "transform_kind", default="srvt", show_default=True,
                      type=click.Choice(["srvt", "reductive"]))(fn)
    fn = click.option("--inner", default="killing", show_default=True,
                      type=click.Choice(sorted(_INNER)))(fn)
    fn = click.option("--align-start", is_flag=True,
                      help="Rigidly rotate curve 2 so the start points coincide.")(fn)
    fn = click.option("--paper-literal-cost", is_flag=True,
                      help="Integrate the warped path without the slope scaling.")(fn)
    fn = click.option("--repair-tangents", is_flag=True)(fn)
    return fn


def _run_distance(input_file, input_file2, n_segments, window, transform_kind, inner,
                  align_start, paper_literal_cost, repair_tangents):
    c1 = _load_curve(input_file, repair_tangents)
    c2 = _load_curve(input_file2, repair_tangents)
    return shape_distance(
        c1,
        c2,
        transform_kind=transform_kind,
        window=None if window == 0 else window,
        n_segments=n_segments,
        inner=_INNER[inner],
        align_start=align_start,
        paper_literal_cost=paper_literal_cost,
    )


@main.command()
@_distance_options
@click.option("--output", "-o", type=click.Path(), help="Optional report file.")
@_handle_errors
def distance(output, **kwargs):
    """Print the shape-distance report for two curve files."""
    report = _run_distance(**kwargs)
    doc = serialize.report_to_dict(report)
    click.echo(json.dumps(doc, indent=1))
    if output:
        serialize.save_json(doc, output)


@main.command()
@_distance_options
@click.option("--output", "-o", required=True, type=click.Path(), help="Warp file to write.")
@_handle_errors
def reparam(output, **kwargs):
    """Compute the optimal warp of curve 2 towards curve 1."""
    report = _run_distance(**kwargs)
    doc = {
        "grid": report.warp.grid.tolist(),
        "s": report.warp.s.tolist(),
        "d_param": report.d_param,
        "d_shape": report.d_shape,
    }
    serialize.save_json(doc, output)
    click.echo(f"d_param={report.d_param:.6g} d_shape={report.d_shape:.6g} -> {output}")


@main.command()
@_distance_options
@click.option("--theta", "thetas", multiple=True, type=float, default=(0.25, 0.5, 0.75),
              show_default=True, help="Interpolation parameters (repeatable).")
@click.option("--output", "-o", "prefix", required=True, type=click.Path(),
              help="Output prefix; writes <prefix>_theta*.json and <prefix>_points.csv.")
@_handle_errors
def geodesic(thetas, prefix, **kwargs):
    """Interpolate between two curves along the transform-space line.

    Curve 2 is optimally reparametrised towards curve 1 first (set
    --window 0 for the exhaustive search).
    """
    report = _run_distance(**kwargs)
    c1 = uniform_resample(_load_curve(kwargs["input_file"], kwargs["repair_tangents"]),
                          kwargs["n_segments"])
    c2 = uniform_resample(_load_curve(kwargs["input_file2"], kwargs["repair_tangents"]),
                          kwargs["n_segments"])
    if kwargs["align_start"] and np.linalg.norm(c1.samples[0] - c2.samples[0]) > 1e-8:
        g = align_start_rotation(c1, c2)
        c2 = DiscreteCurve(c2.spec, c2.grid, np.einsum("ab,ibc->iac", g, c2.samples))
    c2w = reparametrise_curve(c2, report.warp)
    rows = []
    for theta in thetas:
        curve = geodesic_interpolate(
            c1, c2w, theta,
            transform_kind=kwargs["transform_kind"], inner=_INNER[kwargs["inner"]],
        )
        out = f"{prefix}_theta{theta:g}.json"
        serialize.save_json(serialize.curve_to_dict(curve, name=f"theta={theta:g}"), out)
        for t, sample in zip(curve.grid, curve.samples):
            rows.append([theta, t] + sample.ravel().tolist())
        click.echo(f"wrote {out}")
    csv_file = f"{prefix}_points.csv"
    width = len(rows[0]) - 2
    header = ["theta", "t"] + (["x", "y", "z"] if width == 3 else [f"c{i}" for i in range(width)])
    with open(csv_file, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    click.echo(f"wrote {csv_file}")


@main.command()
@click.option("--seed", default=0, show_default=True)
@click.option("--n", "n_segments", default=20, show_default=True)
@_handle_errors
def check(seed, n_segments):
    """Run the self-contained invariant battery on generated data."""
    tol = default_tol()
    rng = np.random.default_rng(seed)
    failures = 0

    def report(name: str, worst: float, bound: float):
        nonlocal failures
        ok = worst <= bound
        failures += 0 if ok else 1
        click.echo(f"[{'PASS' if ok else 'FAIL'}] {name}: {worst:.3e} <= {bound:.1e}")

    worst = 0.0
    for _ in range(200):
        x = rng.normal(size=3)
        x *= rng.uniform(0, np.pi) / np.linalg.norm(x)
        X = lie.hat(x)
        worst = max(worst, float(np.max(np.abs(lie.rodrigues(X) - lie.expm(X)))))
    report("rodrigues agrees with expm on so(3)", worst, 1e-12)

    specs = [
        ManifoldSpec("sphere", 3, 1),
        ManifoldSpec("stiefel", 4, 2),
        ManifoldSpec("grassmann", 4, 2),
        ManifoldSpec("lie_group", 3),
    ]
    worst = 0.0
    for spec in specs:
        for _ in range(3):
            curve = random_curve(spec, n_segments, rng)
            back = srvt_inverse(srvt(curve))
            worst = max(worst, float(np.max(np.abs(back.samples - curve.samples))))
            red = reductive_srvt(curve)
            g0 = lift_frames(curve).frames[0]
            back2 = reductive_srvt_inverse(red, g0)
            worst = max(worst, float(np.max(np.abs(back2.samples - curve.samples))))
    report("transform round trips on all manifolds", worst, 1e-9)

    worst = 0.0
    for spec in specs[:2]:
        for _ in range(5):
            curve = random_curve(spec, n_segments, rng)
            path = srvt(curve)
            twice = psi(psi(path))
            worst = max(worst, float(np.max(np.abs(twice.values - path.values))))
            g0 = lift_frames(curve).frames[0]
            back = psi_g0(psi_g0(path, g0), g0.T)
            worst = max(worst, float(np.max(np.abs(back.values - path.values))))
    report("straightening map is an involution", worst, tol)

    worst = 0.0
    worst_omega = 0.0
    for spec in specs[1:3]:
        for _ in range(5):
            curve = random_curve(spec, n_segments, rng)
            h_def, omega_def = reductive_membership_defect(reductive_srvt(curve))
            worst = max(worst, h_def)
            if spec.kind == "grassmann":
                worst_omega = max(worst_omega, omega_def)
    report("reductive transforms stay in the complement", worst, tol)
    report("grassmann transforms have no frame spin", worst_omega, 1e-12)

    spec = ManifoldSpec("sphere", 3, 1)
    curve = random_curve(spec, 200, rng)
    frames = lift_frames(curve).frames
    worst = float(np.linalg.norm(frames[-1].T @ frames[-1] - np.eye(3)))
    report("frame orthogonality after 200 steps", worst, tol)

    worst = 0.0
    for spec in specs:
        curve = random_curve(spec, n_segments, rng)
        worst = max(worst, max(point_defect(spec, s) for s in curve.samples))
    report("generated curves satisfy manifold constraints", worst, tol)

    curve = random_curve(spec, n_segments, rng)
    q = srvt(curve)
    report("self distance", l2_distance(q, q), 1e-14)

    if failures:
        click.echo(f"{failures} invariant check(s) failed", err=True)
        sys.exit(1)
    click.echo("all invariant checks passed")
