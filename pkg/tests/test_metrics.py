import numpy as np
import pytest

from homshape import lie
from homshape.curves import DiscreteCurve, reparametrise_curve, uniform_resample
from homshape.errors import (
    BaseMismatchError,
    ConfigurationError,
    DegenerateIntermediateError,
    InputError,
    InvalidTangentError,
)
from homshape.generators import (
    fig2_c1,
    fig2_c2,
    random_curve,
    random_tangent,
    sample_sphere_curve,
)
from homshape.manifolds import ManifoldPoint, ManifoldSpec, point_defect
from homshape.metrics import (
    ShapeDistanceReport,
    geodesic_interpolate,
    l2_distance,
    pullback_metric,
    shape_distance,
)
from homshape.transforms import AlgebraPath, reductive_srvt, srvt

from _helpers import (
    closed_form_pullback,
    random_algebra_path,
    synthetic_warp,
)

E1 = np.array([1.0, 0.0, 0.0])
SPHERE = ManifoldSpec("sphere", 3, 1)
STIEFEL = ManifoldSpec("stiefel", 4, 2)


def quarter_circle(direction=1.0):
    grid = np.linspace(0.0, 1.0, 6)
    samples = np.stack(
        [
            np.array([np.cos(direction * np.pi * t / 2), np.sin(direction * np.pi * t / 2), 0.0])[:, None]
            for t in grid
        ]
    )
    return DiscreteCurve(SPHERE, grid, samples)


class TestL2Distance:
    def test_self_distance_zero(self):
        rng = np.random.default_rng(0)
        q = random_algebra_path(rng, SPHERE, 10)
        assert l2_distance(q, q) == 0.0

    def test_unit_constant_against_zero(self):
        base = ManifoldPoint(SPHERE, E1)
        value = lie.hat([1.0, 0.0, 0.0]) / np.sqrt(2.0)
        grid = np.linspace(0.0, 1.0, 5)
        q1 = AlgebraPath(grid, np.stack([value] * 4), SPHERE, base)
        q2 = AlgebraPath(grid, np.zeros((4, 3, 3)), SPHERE, base)
        assert l2_distance(q1, q2) == pytest.approx(1.0, abs=1e-14)

    def test_symmetry_and_triangle_inequality(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            a = random_algebra_path(rng, SPHERE, 4)
            b = random_algebra_path(rng, SPHERE, 4)
            c = random_algebra_path(rng, SPHERE, 4)
            dab, dba = l2_distance(a, b), l2_distance(b, a)
            assert dab == dba
            assert dab <= l2_distance(a, c) + l2_distance(c, b) + 1e-12

    def test_grid_mismatch(self):
        rng = np.random.default_rng(2)
        a = random_algebra_path(rng, SPHERE, 4)
        b = random_algebra_path(rng, SPHERE, 5)
        with pytest.raises(InputError):
            l2_distance(a, b)

    def test_inner_mode_mismatch(self):
        rng = np.random.default_rng(3)
        a = random_algebra_path(rng, SPHERE, 4, inner="killing")
        b = random_algebra_path(rng, SPHERE, 4, inner="frobenius")
        with pytest.raises(InputError):
            l2_distance(a, b)


class TestShapeDistance:
    def test_same_curve(self):
        curve = sample_sphere_curve(fig2_c1, 40)
        report = shape_distance(curve, curve, window=4, n_segments=40)
        assert report.d_param == 0.0
        assert report.d_shape == 0.0
        assert np.allclose(report.warp.s, report.warp.grid, atol=1e-12)

    def test_reparametrised_copy_is_recovered(self):
        n = 100
        reference = sample_sphere_curve(fig2_c1, n, warp=synthetic_warp)
        moving = sample_sphere_curve(fig2_c1, n)
        report = shape_distance(reference, moving, window=6, n_segments=n)
        assert report.d_shape <= report.d_param / 5.0
        target = synthetic_warp(np.linspace(0.0, 1.0, n + 1))
        assert np.max(np.abs(report.warp.s - target)) <= 5.0 / n

    def test_fig2_pair_improves(self):
        c1 = sample_sphere_curve(fig2_c1, 60)
        c2 = sample_sphere_curve(fig2_c2, 60)
        for kind in ("srvt", "reductive"):
            report = shape_distance(c1, c2, transform_kind=kind, window=5, n_segments=60)
            assert 0.0 < report.d_shape < report.d_param

    def test_base_mismatch_errors_without_alignment(self):
        rng = np.random.default_rng(4)
        c1 = random_curve(SPHERE, 10, rng)
        c2 = random_curve(SPHERE, 10, rng)
        with pytest.raises(BaseMismatchError):
            shape_distance(c1, c2, window=3, n_segments=10)

    @pytest.mark.parametrize("spec", [SPHERE, STIEFEL], ids=lambda s: s.kind)
    def test_align_start_rotates_curve_two(self, spec):
        rng = np.random.default_rng(5)
        c1 = random_curve(spec, 10, rng)
        c2 = random_curve(spec, 10, rng)
        report = shape_distance(c1, c2, window=3, n_segments=10, align_start=True)
        assert np.isfinite(report.d_param)
        assert report.d_shape <= report.d_param

    def test_invariance_under_common_warp(self):
        n = 200
        c1 = sample_sphere_curve(fig2_c1, n)
        c2 = sample_sphere_curve(fig2_c2, n)
        d_plain = l2_distance(srvt(uniform_resample(c1, n)), srvt(uniform_resample(c2, n)))
        c1w = sample_sphere_curve(fig2_c1, n, warp=synthetic_warp)
        c2w = sample_sphere_curve(fig2_c2, n, warp=synthetic_warp)
        d_warped = l2_distance(srvt(uniform_resample(c1w, n)), srvt(uniform_resample(c2w, n)))
        assert abs(d_warped - d_plain) <= 0.02 * d_plain

    def test_reductive_distance_invariance_order(self):
        sizes = (50, 100, 200)
        diffs = []
        for n in sizes:
            c1 = sample_sphere_curve(fig2_c1, n)
            c2 = sample_sphere_curve(fig2_c2, n)
            d_plain = l2_distance(reductive_srvt(c1), reductive_srvt(c2))
            c1w = sample_sphere_curve(fig2_c1, n, warp=synthetic_warp)
            c2w = sample_sphere_curve(fig2_c2, n, warp=synthetic_warp)
            d_warped = l2_distance(reductive_srvt(c1w), reductive_srvt(c2w))
            diffs.append(abs(d_warped - d_plain))
        order = np.log(diffs[0] / diffs[-1]) / np.log(sizes[-1] / sizes[0])
        assert diffs[0] > diffs[1] > diffs[2]
        assert order >= 0.9

    def test_report_invariant_enforced(self):
        grid = np.linspace(0.0, 1.0, 3)
        warp = None
        from homshape.curves import identity_warp

        warp = identity_warp(grid)
        with pytest.raises(InputError):
            ShapeDistanceReport(d_param=1.0, d_shape=2.0, warp=warp, transform_kind="srvt")


class TestGeodesicInterpolate:
    def setup_method(self):
        n = 60
        c1 = sample_sphere_curve(fig2_c1, n)
        c2 = sample_sphere_curve(fig2_c2, n)
        report = shape_distance(c1, c2, window=5, n_segments=n)
        self.c1 = uniform_resample(c1, n)
        self.c2w = reparametrise_curve(uniform_resample(c2, n), report.warp)

    def test_endpoints(self):
        g0 = geodesic_interpolate(self.c1, self.c2w, 0.0)
        g1 = geodesic_interpolate(self.c1, self.c2w, 1.0)
        assert np.max(np.abs(g0.samples - self.c1.samples)) <= 1e-9
        assert np.max(np.abs(g1.samples - self.c2w.samples)) <= 1e-9

    def test_intermediate_curves_are_valid(self):
        for theta in (0.25, 0.5, 0.75):
            g = geodesic_interpolate(self.c1, self.c2w, theta)
            for s in g.samples:
                assert point_defect(SPHERE, s) <= 1e-10

    def test_swap_symmetry(self):
        for theta in (0.25, 0.5):
            a = geodesic_interpolate(self.c1, self.c2w, theta)
            b = geodesic_interpolate(self.c2w, self.c1, 1.0 - theta)
            assert np.max(np.abs(a.samples - b.samples)) <= 1e-9

    def test_reductive_flatness(self):
        q1 = reductive_srvt(self.c1)
        q2 = reductive_srvt(self.c2w)
        dq = l2_distance(q1, q2)
        for theta in (0.25, 0.5, 0.75):
            g = geodesic_interpolate(self.c1, self.c2w, theta, transform_kind="reductive")
            assert abs(l2_distance(reductive_srvt(g), q1) - theta * dq) <= 1e-10

    def test_transform_space_line_has_constant_speed(self):
        q1 = srvt(self.c1)
        q2 = srvt(self.c2w)
        dq = l2_distance(q1, q2)
        for theta in (0.2, 0.7):
            blend = AlgebraPath(
                q1.grid,
                (1 - theta) * q1.values + theta * q2.values,
                q1.spec,
                q1.base,
                q1.inner,
            )
            assert abs(l2_distance(blend, q1) - theta * dq) <= 1e-10

    def test_base_mismatch(self):
        rng = np.random.default_rng(6)
        other = random_curve(SPHERE, 60, rng)
        with pytest.raises(BaseMismatchError):
            geodesic_interpolate(self.c1, other, 0.5)

    def test_degenerate_intermediate(self):
        forward = quarter_circle(1.0)
        backward = quarter_circle(-1.0)
        with pytest.raises(DegenerateIntermediateError) as info:
            geodesic_interpolate(forward, backward, 0.5)
        assert info.value.theta == 0.5

    def test_theta_out_of_range(self):
        with pytest.raises(ConfigurationError):
            geodesic_interpolate(self.c1, self.c2w, 1.5)


class TestPullbackMetric:
    def test_zero_field(self):
        rng = np.random.default_rng(7)
        curve = random_curve(SPHERE, 20, rng)
        zero = np.zeros_like(curve.samples)
        assert pullback_metric(curve, zero, zero) == 0.0

    def test_bilinearity(self):
        rng = np.random.default_rng(8)
        curve = random_curve(SPHERE, 30, rng)
        field = np.stack(
            [random_tangent(SPHERE, curve.samples[i], rng, 0.5) for i in range(31)]
        )
        g1 = pullback_metric(curve, field, field)
        g2 = pullback_metric(curve, 2.0 * field, field)
        assert abs(g2 - 2.0 * g1) <= 2e-8 * max(1.0, abs(g1))

    def test_matches_closed_form(self):
        rng = np.random.default_rng(9)
        for _ in range(3):
            curve = random_curve(SPHERE, 100, rng)
            field = np.stack(
                [random_tangent(SPHERE, curve.samples[i], rng, 0.5) for i in range(101)]
            )
            fd = pullback_metric(curve, field, field)
            cf = closed_form_pullback(curve, field)
            assert abs(fd - cf) <= 1e-4 * abs(cf)

    def test_polarisation_consistency(self):
        rng = np.random.default_rng(10)
        curve = random_curve(SPHERE, 20, rng)
        v = np.stack([random_tangent(SPHERE, curve.samples[i], rng, 0.5) for i in range(21)])
        w = np.stack([random_tangent(SPHERE, curve.samples[i], rng, 0.5) for i in range(21)])
        gvw = pullback_metric(curve, v, w)
        gsum = pullback_metric(curve, v + w, v + w)
        gv = pullback_metric(curve, v, v)
        gw = pullback_metric(curve, w, w)
        assert abs(gsum - gv - gw - 2.0 * gvw) <= 1e-6 * max(1.0, gsum)

    def test_rejects_non_tangent_field(self):
        rng = np.random.default_rng(11)
        curve = random_curve(SPHERE, 5, rng)
        bad = np.ones_like(curve.samples)
        with pytest.raises(InvalidTangentError):
            pullback_metric(curve, bad, bad)
