import json

import numpy as np
import pytest

import fracdim as fd
from fracdim.errors import ConvergenceError


class TestAffineCoeffs:
    def test_zero_data(self):
        p = fd.Partition(np.array([0.0, 0.3, 1.0]))
        c, d = fd.affine_branch_coeffs(p, [0.0, 0.0, 0.0], [0.4, -0.2])
        assert np.all(c == 0.0) and np.all(d == 0.0)

    def test_zero_alpha_is_broken_line(self):
        p = fd.Partition(np.array([0.0, 0.5, 1.0]))
        ys = np.array([1.0, 3.0, 2.0])
        c, d = fd.affine_branch_coeffs(p, ys, [0.0, 0.0])
        assert np.allclose(c, np.diff(ys))
        assert np.allclose(d, ys[:-1])

    def test_tent_example(self):
        p = fd.Partition(np.array([0.0, 0.5, 1.0]))
        c, d = fd.affine_branch_coeffs(p, [0.0, 1.0, 0.0], [0.8, 0.8])
        assert np.allclose(c, [1.0, -1.0])
        assert np.allclose(d, [0.0, 1.0])

    def test_interpolation_conditions_hold(self):
        rng = np.random.default_rng(3)
        knots = np.array([0.0, 0.2, 0.7, 1.0])
        p = fd.Partition(knots)
        ys = rng.standard_normal(4)
        al = rng.uniform(-0.9, 0.9, 3)
        c, d = fd.affine_branch_coeffs(p, ys, al)
        # F_i(0, y_0) = y_{i-1} and F_i(1, y_N) = y_i
        assert np.allclose(d + al * ys[0], ys[:-1], atol=1e-12)
        assert np.allclose(c + d + al * ys[-1], ys[1:], atol=1e-12)


class TestMapParams:
    def test_uniform(self):
        slopes, offsets = fd.affine_map_params(fd.Partition(np.array([0.0, 0.5, 1.0])))
        assert np.allclose(slopes, [0.5, 0.5])
        assert np.allclose(offsets, [0.0, 0.5])

    def test_nonuniform(self):
        slopes, offsets = fd.affine_map_params(fd.Partition(np.array([0.0, 0.25, 1.0])))
        assert np.allclose(slopes, [0.25, 0.75])
        assert np.allclose(offsets, [0.0, 0.25])

    def test_right_endpoint_exact(self):
        knots = np.array([0.0, 0.1, 0.37, 0.8, 1.0])
        slopes, offsets = fd.affine_map_params(fd.Partition(knots))
        assert np.array_equal(slopes * 1.0 + offsets, knots[1:])


class TestRbApply:
    def test_zero_alpha_gives_broken_line(self):
        spec = fd.make_affine_spec([0, 0.5, 1], [0.0, 1.0, 0.0], [0.0, 0.0])
        g = fd.GridFunction(8, np.random.default_rng(0).standard_normal(9))
        out = fd.rb_apply(spec, g)
        expected = np.interp(np.linspace(0, 1, 9), [0, 0.5, 1], [0, 1, 0])
        assert np.allclose(out.values, expected)

    def test_alpha_fractal_with_g_equal_base(self):
        seed = fd.Polynomial([0, 0, 1])
        base = fd.Polynomial([0, 1])  # matches seed at 0 and 1
        spec = fd.make_alpha_fractal_spec([0, 0.5, 1], [0.6, 0.6], seed, base)
        g = fd.sample(base, 64)
        out = fd.rb_apply(spec, g)
        assert np.allclose(out.values, fd.sample(seed, 64).values, atol=1e-12)

    def test_alpha_fractal_seed_is_fixed_point_when_base_is_seed(self):
        seed = fd.Polynomial([0, 0, 1])
        spec = fd.make_alpha_fractal_spec([0, 0.5, 1], [0.6, 0.6], seed, seed)
        g = fd.sample(seed, 64)
        out = fd.rb_apply(spec, g)
        assert np.allclose(out.values, g.values, atol=1e-12)

    def test_contraction_on_random_pairs(self):
        spec = fd.make_affine_spec(
            [0, 0.3, 0.7, 1], [0.0, 1.0, -1.0, 0.5], [0.8, -0.6, 0.7]
        )
        rng = np.random.default_rng(11)
        s = spec.contraction_factor
        for _ in range(10):
            g1 = fd.GridFunction(256, rng.standard_normal(257))
            g2 = fd.GridFunction(256, rng.standard_normal(257))
            lhs = np.max(np.abs(fd.rb_apply(spec, g1).values - fd.rb_apply(spec, g2).values))
            rhs = s * np.max(np.abs(g1.values - g2.values))
            assert lhs <= rhs + 1e-12


class TestSpecValidation:
    def test_rejects_non_contractive_alpha(self):
        with pytest.raises(ValueError):
            fd.make_affine_spec([0, 0.5, 1], [0, 1, 0], [1.0, 0.5])

    def test_rejects_mismatched_lengths(self):
        with pytest.raises(ValueError):
            fd.make_affine_spec([0, 0.5, 1], [0, 1], [0.5, 0.5])

    def test_rejects_base_endpoint_mismatch(self):
        seed = fd.Polynomial([0, 0, 1])
        bad_base = fd.Polynomial([0.5])
        with pytest.raises(ValueError):
            fd.make_alpha_fractal_spec([0, 0.5, 1], [0.5, 0.5], seed, bad_base)


def tent_oracle(x, alpha, depth=20):
    """Manual expansion of the self-referential equation at dyadic points."""
    c = [1.0, -1.0]
    d = [0.0, 1.0]
    if depth == 0:
        return np.interp(x, [0, 0.5, 1], [0, 1, 0])
    if x <= 0.5:
        u = 2 * x
        return c[0] * u + d[0] + alpha * tent_oracle(u, alpha, depth - 1)
    u = 2 * x - 1
    return c[1] * u + d[1] + alpha * tent_oracle(u, alpha, depth - 1)


class TestSolve:
    def test_zero_alpha_one_iteration(self):
        spec = fd.make_affine_spec([0, 0.5, 1], [0.0, 1.0, 0.0], [0.0, 0.0])
        fif = fd.solve_fixed_point(spec, m=256, tol=1e-12)
        assert fif.iterations == 1
        assert fif.residual <= 1e-15
        assert fif(0.25) == pytest.approx(0.5)

    def test_tent_knot_value(self, tent_half_fif):
        assert tent_half_fif(0.5) == 1.0

    def test_tent_quarter_value(self, tent_half_fif):
        # one self-referential expansion: F_1(1/2, f(1/2)) = 0.5 + 0.5 * 1
        assert tent_half_fif(0.25) == pytest.approx(1.0, abs=1e-10)
        assert tent_half_fif(0.25) == pytest.approx(tent_oracle(0.25, 0.5), abs=1e-10)

    def test_dyadic_points_against_oracle(self, tent_half_fif):
        for x in (0.125, 0.375, 0.625, 0.875):
            assert tent_half_fif(x) == pytest.approx(tent_oracle(x, 0.5), abs=1e-9)

    def test_knot_interpolation(self):
        spec = fd.make_affine_spec(
            [0, 0.25, 0.5, 1], [0.2, -1.0, 0.7, 0.1], [0.7, -0.8, 0.5]
        )
        fif = fd.solve_fixed_point(spec, m=2 ** 12, tol=1e-10)
        idx = (spec.partition.knots * 2 ** 12).round().astype(int)
        assert np.max(np.abs(fif.grid.values[idx] - spec.ys)) <= 1e-9

    def test_alpha_fractal_degenerates_to_seed_at_zero_alpha(self):
        seed = fd.Polynomial([0, 0, 1])
        base = fd.Polynomial([0, 1])
        spec = fd.make_alpha_fractal_spec([0, 0.5, 1], [0.0, 0.0], seed, base)
        fif = fd.solve_fixed_point(spec, m=1024, tol=1e-10)
        assert fd.sup_norm_diff(seed, fif, 1024) <= 1e-10

    def test_perturbation_bound(self):
        # ||f_alpha - f|| <= s/(1-s) ||f - b|| on the grid
        seed = fd.Polynomial([0, 0, 1])
        base = fd.Polynomial([0, 1])
        spec = fd.make_alpha_fractal_spec([0, 0.5, 1], [0.6, 0.6], seed, base)
        fif = fd.solve_fixed_point(spec, m=2 ** 12, tol=1e-10)
        s = 0.6
        lhs = fd.sup_norm_diff(seed, fif, 2 ** 12)
        rhs = s / (1 - s) * fd.sup_norm_diff(seed, base, 2 ** 12)
        assert lhs <= rhs + 1e-9

    def test_branch_closure_identity(self):
        # f_alpha - f = alpha_i (f_alpha - b) o L_i^{-1} on each interval
        seed = fd.Polynomial([0, 0, 1])
        base = fd.Polynomial([0, 1])
        spec = fd.make_alpha_fractal_spec([0, 0.5, 1], [0.6, -0.4], seed, base)
        m = 2 ** 12
        fif = fd.solve_fixed_point(spec, m=m, tol=1e-10)
        xs = fif.grid.xs
        left = fif.grid.values - seed._eval(xs)
        for i, (lo, hi, al) in enumerate([(0.0, 0.5, 0.6), (0.5, 1.0, -0.4)]):
            mask = (xs >= lo) & (xs <= hi) if i == 0 else (xs > lo) & (xs <= hi)
            u = (xs[mask] - lo) / (hi - lo)
            rhs = al * (fif.grid.interp(u) - base._eval(u))
            assert np.max(np.abs(left[mask] - rhs)) <= 1e-9

    def test_convergence_error_carries_residual(self):
        spec = fd.make_affine_spec([0, 0.3, 1], [0.0, 1.0, 0.0], [0.95, 0.95])
        with pytest.raises(ConvergenceError) as exc:
            # budget too small for the tolerance at this contraction rate
            fd.solve_fixed_point(spec, m=64, tol=1e-12, max_iterations=3)
        assert exc.value.residual is not None
        assert exc.value.residual > 1e-12
        assert exc.value.iterations == 3


class TestResidual:
    def test_converged_residual_below_tol(self, tent_half_spec):
        fif = fd.solve_fixed_point(tent_half_spec, m=2 ** 12, tol=1e-10)
        assert fd.self_ref_residual(tent_half_spec, fif.grid) <= 1e-10

    def test_broken_line_zero_alpha(self):
        spec = fd.make_affine_spec([0, 0.5, 1], [0.0, 1.0, 0.0], [0.0, 0.0])
        g = fd.GridFunction(64, np.interp(np.linspace(0, 1, 65), [0, 0.5, 1], [0, 1, 0]))
        assert fd.self_ref_residual(spec, g) <= 1e-15

    def test_zero_function_residual(self, tent_half_spec):
        # T(0) is the broken-line part c_i u + d_i, whose sup is 1
        g = fd.GridFunction(64, np.zeros(65))
        assert fd.self_ref_residual(tent_half_spec, g) == pytest.approx(1.0)


class TestChaosGame:
    def test_zero_alpha_points_on_tent(self):
        spec = fd.make_affine_spec([0, 0.5, 1], [0.0, 1.0, 0.0], [0.0, 0.0])
        pts = fd.chaos_game(spec, 2000, seed=5)
        expected = np.interp(pts[:, 0], [0, 0.5, 1], [0, 1, 0])
        assert np.max(np.abs(pts[:, 1] - expected)) <= 1e-9

    def test_determinism(self, tent_half_spec):
        a = fd.chaos_game(tent_half_spec, 500, seed=123)
        b = fd.chaos_game(tent_half_spec, 500, seed=123)
        assert np.array_equal(a, b)

    def test_cross_validation_against_fixed_point(self, tent_half_spec, tent_half_fif):
        pts = fd.chaos_game(tent_half_spec, 10 ** 4, seed=42)
        dev = np.max(np.abs(pts[:, 1] - tent_half_fif.grid.interp(pts[:, 0])))
        assert dev <= 1e-3

    def test_rejects_alpha_fractal_branch(self):
        seed = fd.Polynomial([0, 0, 1])
        spec = fd.make_alpha_fractal_spec([0, 0.5, 1], [0.5, 0.5], seed, seed)
        with pytest.raises(ValueError):
            fd.chaos_game(spec, 10, seed=0)


class TestJson:
    def test_affine_roundtrip(self, tent_half_spec):
        back = fd.spec_from_json(json.dumps(fd.spec_to_json(tent_half_spec)))
        assert np.allclose(back.partition.knots, tent_half_spec.partition.knots)
        assert np.allclose(back.ys, tent_half_spec.ys)
        assert np.allclose(back.branch.c, tent_half_spec.branch.c)

    def test_alpha_fractal_roundtrip(self):
        seed = fd.Polynomial([0, 0, 1])
        base = fd.Polynomial([0, 1])
        spec = fd.make_alpha_fractal_spec([0, 0.5, 1], [0.5, -0.5], seed, base)
        back = fd.spec_from_json(fd.spec_to_json(spec))
        g = fd.GridFunction(32, np.zeros(33))
        assert np.allclose(
            fd.rb_apply(back, g).values, fd.rb_apply(spec, g).values
        )
