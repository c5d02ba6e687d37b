"""Fractal interpolation functions as fixed points of the branch-map operator.

Specs pair a partition with interpolation data, a scale vector, and a branch
family: either affine maps F_i(x, y) = c_i x + d_i + alpha_i y, or the
fractal-perturbation branch F built from a seed function and a base function.
Fixed points are computed by iterating the operator on a uniform grid with
linear interpolation at branch pre-images.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .functions import Func, GridFunction, Partition, func_from_json, func_to_json

__all__ = [
    "AffineBranch",
    "AlphaFractalBranch",
    "FifSpec",
    "FifFunction",
    "affine_map_params",
    "affine_branch_coeffs",
    "make_affine_spec",
    "make_alpha_fractal_spec",
    "rb_apply",
    "self_ref_residual",
    "solve_fixed_point",
    "chaos_game",
    "spec_to_json",
    "spec_from_json",
]

DEFAULT_RESOLUTION = 2 ** 16
DEFAULT_TOL = 1e-10
CHAOS_BURN_IN = 100


@dataclass(eq=False)
class AffineBranch:
    c: np.ndarray
    d: np.ndarray


@dataclass(eq=False)
class AlphaFractalBranch:
    seed: Func
    base: Func


def affine_map_params(partition: Partition):
    """Slopes and offsets of the horizontal maps L_i(x) = a_i x + x_{i-1}."""
    return partition.lengths.copy(), partition.knots[:-1].copy()


def affine_branch_coeffs(partition: Partition, ys, alpha):
    """Coefficients c_i, d_i making both interpolation conditions exact.

    d_i = y_{i-1} - alpha_i y_0 and c_i = y_i - y_{i-1} - alpha_i (y_N - y_0).
    """
    ys = np.asarray(ys, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    n = partition.n_intervals
    if ys.shape != (n + 1,):
        raise ValueError("ys length must equal knot count")
    if alpha.shape != (n,):
        raise ValueError("alpha length must equal interval count")
    d = ys[:-1] - alpha * ys[0]
    c = np.diff(ys) - alpha * (ys[-1] - ys[0])
    return c, d


@dataclass(eq=False)
class FifSpec:
    partition: Partition
    ys: np.ndarray
    alpha: np.ndarray
    branch: object  # AffineBranch | AlphaFractalBranch

    def __post_init__(self):
        self.ys = np.asarray(self.ys, dtype=float)
        self.alpha = np.asarray(self.alpha, dtype=float)
        n = self.partition.n_intervals
        if self.ys.shape != (n + 1,):
            raise ValueError("ys length must equal knot count")
        if self.alpha.shape != (n,):
            raise ValueError("alpha length must equal interval count")
        if np.any(np.abs(self.alpha) >= 1.0):
            raise ValueError("scale factors must satisfy |alpha_i| < 1")
        if isinstance(self.branch, AffineBranch):
            c, d = self.branch.c, self.branch.d
            if np.max(np.abs(d + self.alpha * self.ys[0] - self.ys[:-1])) > 1e-12:
                raise ValueError("branch maps violate the left interpolation condition")
            if np.max(np.abs(c + d + self.alpha * self.ys[-1] - self.ys[1:])) > 1e-12:
                raise ValueError("branch maps violate the right interpolation condition")
        elif isinstance(self.branch, AlphaFractalBranch):
            seed, base = self.branch.seed, self.branch.base
            if abs(base(0.0) - seed(0.0)) > 1e-9 or abs(base(1.0) - seed(1.0)) > 1e-9:
                raise ValueError("base must match the seed at both endpoints")
        else:
            raise ValueError("branch must be AffineBranch or AlphaFractalBranch")

    @property
    def contraction_factor(self) -> float:
        return float(np.max(np.abs(self.alpha)))


def make_affine_spec(knots, ys, alpha) -> FifSpec:
    partition = knots if isinstance(knots, Partition) else Partition(np.asarray(knots, dtype=float))
    c, d = affine_branch_coeffs(partition, ys, alpha)
    return FifSpec(partition, np.asarray(ys, dtype=float), np.asarray(alpha, dtype=float), AffineBranch(c, d))


def make_alpha_fractal_spec(knots, alpha, seed: Func, base: Func, ys=None) -> FifSpec:
    partition = knots if isinstance(knots, Partition) else Partition(np.asarray(knots, dtype=float))
    if ys is None:
        ys = seed._eval(partition.knots)
    return FifSpec(partition, ys, np.asarray(alpha, dtype=float), AlphaFractalBranch(seed, base))


def _make_applier(spec: FifSpec, m: int):
    """Precompute everything of one operator application that is iterate-free."""
    xs = np.linspace(0.0, 1.0, m + 1)
    knots = spec.partition.knots
    lengths = spec.partition.lengths
    # interior knots belong to their left branch; searchsorted(side=left)
    # returns i for x == x_i, and 0 only at x = 0
    br = np.searchsorted(knots, xs, side="left")
    br[br == 0] = 1
    i = br - 1
    u = np.clip((xs - knots[i]) / lengths[i], 0.0, 1.0)
    al = spec.alpha[i]
    pos = u * m
    i0 = np.minimum(pos.astype(np.int64), m - 1)
    frac = pos - i0
    i1 = i0 + 1

    if isinstance(spec.branch, AffineBranch):
        lin = spec.branch.c[i] * u + spec.branch.d[i]
    else:
        seed_x = spec.branch.seed._eval(xs)
        base_u = spec.branch.base._eval(u)
        lin = seed_x - al * base_u

    def apply(g: np.ndarray) -> np.ndarray:
        gu = g[i0] * (1.0 - frac) + g[i1] * frac
        return lin + al * gu

    return xs, apply


def rb_apply(spec: FifSpec, g: GridFunction) -> GridFunction:
    """One application of the branch-map operator to grid samples."""
    _, apply = _make_applier(spec, g.m)
    return GridFunction(g.m, apply(g.values))


def self_ref_residual(spec: FifSpec, g: GridFunction) -> float:
    """Sup over the grid of |g - T g|."""
    out = rb_apply(spec, g)
    return float(np.max(np.abs(g.values - out.values)))


@dataclass(eq=False)
class FifFunction(Func):
    """Converged fixed point of a spec; evaluates by grid interpolation."""

    spec: FifSpec
    grid: GridFunction
    residual: float
    iterations: int

    def _eval(self, x):
        return self.grid.interp(x)


def solve_fixed_point(
    spec: FifSpec,
    m: int = DEFAULT_RESOLUTION,
    tol: float = DEFAULT_TOL,
    max_iterations: int | None = None,
) -> FifFunction:
    """Iterate the operator from the broken-line interpolant until converged.

    The stopping rule converts successive-iterate distance to a residual
    bound via the contraction inequality: once sup|g_{k+1} - g_k| is below
    tol (1 - s) / s with s = max|alpha_i|, the self-referential residual of
    the final iterate is below tol.  max_iterations caps the iteration
    budget below the contraction-rate estimate.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    xs, apply = _make_applier(spec, m)
    g = np.interp(xs, spec.partition.knots, spec.ys)
    s = spec.contraction_factor
    g_new = apply(g)
    d = float(np.max(np.abs(g_new - g)))
    g = g_new
    iterations = 1
    if s > 0.0 and d > 0.0:
        target = tol * (1.0 - s) / s
        if d > target:
            cap = math.ceil(math.log(target / d) / math.log(s)) + 8
            if max_iterations is not None:
                cap = min(cap, max_iterations)
            while d > target:
                if iterations >= cap:
                    res = float(np.max(np.abs(apply(g) - g)))
                    raise ConvergenceError(
                        f"fixed-point iteration stalled at residual {res:.3e}",
                        residual=res,
                        iterations=iterations,
                    )
                g_new = apply(g)
                d = float(np.max(np.abs(g_new - g)))
                g = g_new
                iterations += 1
    residual = float(np.max(np.abs(apply(g) - g)))
    return FifFunction(spec=spec, grid=GridFunction(m, g), residual=residual, iterations=iterations)


def chaos_game(spec: FifSpec, n_points: int, seed: int) -> np.ndarray:
    """Random-iteration sampling of the attractor (affine branches only).

    Deterministic for a fixed seed: branch choices come from
    numpy.random.default_rng (PCG64).  The first CHAOS_BURN_IN iterates are
    discarded so returned points lie on the attractor to within the
    accumulated contraction factor.
    """
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    if not isinstance(spec.branch, AffineBranch):
        raise ValueError("chaos game supports affine branch specs only")
    rng = np.random.default_rng(seed)
    n = spec.partition.n_intervals
    idx = rng.integers(0, n, size=n_points + CHAOS_BURN_IN)
    slopes, offsets = affine_map_params(spec.partition)
    c, d, al = spec.branch.c, spec.branch.d, spec.alpha
    x = float(spec.partition.knots[0])
    y = float(spec.ys[0])
    pts = np.empty((n_points, 2))
    for t, i in enumerate(idx):
        x, y = slopes[i] * x + offsets[i], c[i] * x + d[i] + al[i] * y
        if t >= CHAOS_BURN_IN:
            pts[t - CHAOS_BURN_IN] = (x, y)
    return pts


# ---------------------------------------------------------------------------
# JSON (de)serialization


def spec_to_json(spec: FifSpec) -> dict:
    out = {
        "knots": spec.partition.knots.tolist(),
        "ys": spec.ys.tolist(),
        "alpha": spec.alpha.tolist(),
    }
    if isinstance(spec.branch, AffineBranch):
        out["branch"] = "affine"
    else:
        out["branch"] = "alpha_fractal"
        out["seed"] = func_to_json(spec.branch.seed)
        out["base"] = func_to_json(spec.branch.base)
    return out


def spec_from_json(obj) -> FifSpec:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "branch" not in obj:
        raise ValueError("spec JSON must be an object with a 'branch' field")
    branch = obj["branch"]
    if branch == "affine":
        return make_affine_spec(obj["knots"], obj["ys"], obj["alpha"])
    if branch == "alpha_fractal":
        seed = func_from_json(obj["seed"])
        base = func_from_json(obj["base"])
        return make_alpha_fractal_spec(obj["knots"], obj["alpha"], seed, base, ys=obj.get("ys"))
    raise ValueError(f"unknown branch kind {branch!r}")
