"""Regeneration-point constructions and the independence test.

The first nonnegative zero-velocity point T of a flow admits a two-stage
scan construction: R is the first nonnegative point whose entire past
stays under the centered parabola, S the first point at or after R whose
entire future stays strictly under it; S coincides with T pathwise.  An
iterated argsup map started at R walks to the same point.  Regenerativity
of the zero set is probed statistically: low-dimensional features of the
flow before and after T are tested for dependence across replicates with
a distance-correlation permutation test (the test can only fail to
falsify; it never proves full-process independence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import InsufficientDataError, ParameterError, WindowTooSmallError
from .levy import GridSpec, LevyParams, LevyPath, sample_path
from .shocks import zero_set_indices
from .solver import BurgersSolution, solve

# u is sampled at this many equispaced points on each side of T when
# building the feature vectors.
N_FEATURE_SAMPLES = 64

FEATURE_NAMES = ("mean_u", "min_u", "n_shocks")


@dataclass(frozen=True)
class RegenReport:
    """Scan results for one path.  Missing quantities (window exhausted,
    empty nonnegative zero set) are None; that is a status, not an error."""

    R: float | None
    S: float | None
    T_first: float | None
    rk: list[float] = field(default_factory=list)
    s_equals_t: bool | None = None
    rk_converged: bool = False
    steps: int = 0


@dataclass(frozen=True)
class IndependenceReport:
    p_value_global: float
    dcor: float
    feature_correlations: tuple[float, ...]
    n_valid: int
    n_dropped: int
    T_values: np.ndarray
    f_pre: np.ndarray
    f_post: np.ndarray


def _scan_r_index(values: np.ndarray, ys: np.ndarray, i0: int, t: float) -> int | None:
    """First grid index >= i0 whose entire past satisfies the closed
    parabola bound values[j] - values[i] <= (y_i - y_j)^2 / (2t)."""
    for i in range(i0, len(ys)):
        past = values[:i] - values[i]
        if np.all(past <= (ys[i] - ys[:i]) ** 2 / (2.0 * t)):
            return i
    return None


def _scan_s_index(values: np.ndarray, ys: np.ndarray, start: int, t: float) -> int | None:
    """First grid index >= start whose entire future satisfies the strict
    parabola bound."""
    n = len(ys)
    for i in range(start, n):
        fut = values[i + 1 :] - values[i]
        if np.all(fut < (ys[i + 1 :] - ys[i]) ** 2 / (2.0 * t)):
            return i
    return None


def rst_scan(path: LevyPath, t: float, sol: BurgersSolution | None = None) -> RegenReport:
    """Direct O(n^2) scan for (R, S) plus T from the zero set.

    The parabola conditions compare plain grid values at their own grid
    offsets; a left limit is carried by the previous grid point, which is
    scanned at its own location.  T_first is the smallest nonnegative
    element of the zero set of the solved flow, over the whole grid: the
    scans see the whole grid too, and S coincides with T only when both
    constructions run on the same domain.
    """
    if sol is None:
        sol = solve(path, t)
    ys = path.grid.points()
    values = path.values
    i0 = path.grid.zero_index

    r_idx = _scan_r_index(values, ys, i0, t)
    s_idx = _scan_s_index(values, ys, r_idx, t) if r_idx is not None else None

    zy = sol.vertex_ys[zero_set_indices(sol)]
    zy = zy[zy >= 0.0]
    t_first = float(zy[0]) if len(zy) else None

    s_val = float(ys[s_idx]) if s_idx is not None else None
    return RegenReport(
        R=float(ys[r_idx]) if r_idx is not None else None,
        S=s_val,
        T_first=t_first,
        s_equals_t=(s_val == t_first) if (s_val is not None and t_first is not None) else None,
    )


@dataclass(frozen=True)
class RkResult:
    rk: list[float]
    converged: bool
    steps: int


def rk_sequence(
    path: LevyPath, t: float, k_max: int = 64, r0: float | None = None
) -> RkResult:
    """Iterated argsup walk from r_0 = R toward the first zero point.

    Each step moves to the largest argmax of values minus the parabola
    recentered at the current point, scanning grid points to the right
    (ties to the larger index); the walk stops at the first fixed point.
    Exceeding k_max is reported, not fatal.
    """
    if k_max < 1:
        raise ParameterError("k_max must be >= 1")
    ys = path.grid.points()
    values = path.values
    if r0 is None:
        i = _scan_r_index(values, ys, path.grid.zero_index, t)
        if i is None:
            return RkResult(rk=[], converged=False, steps=0)
    else:
        i = int(np.searchsorted(ys, r0))
        if i >= len(ys) or ys[i] != r0:
            raise ParameterError(f"r0={r0} is not a grid point")

    rk = [float(ys[i])]
    converged = False
    for _ in range(k_max):
        obj = values[i:] - (ys[i:] - ys[i]) ** 2 / (2.0 * t)
        step = int(np.flatnonzero(obj == obj.max())[-1])
        if step == 0:
            converged = True
            break
        i += step
        rk.append(float(ys[i]))
    return RkResult(rk=rk, converged=converged, steps=len(rk) - 1)


def regen_report(path: LevyPath, t: float, k_max: int = 64) -> RegenReport:
    """rst_scan plus the r_k walk in one report."""
    base = rst_scan(path, t)
    if base.R is None:
        return base
    walk = rk_sequence(path, t, k_max=k_max, r0=base.R)
    return RegenReport(
        R=base.R,
        S=base.S,
        T_first=base.T_first,
        rk=walk.rk,
        s_equals_t=base.s_equals_t,
        rk_converged=walk.converged,
        steps=walk.steps,
    )


def _standardize(x: np.ndarray) -> np.ndarray:
    mu = x.mean(axis=0)
    sd = x.std(axis=0)
    sd[sd == 0] = 1.0
    return (x - mu) / sd


def distance_correlation(x: np.ndarray, y: np.ndarray) -> float:
    """Sample distance correlation between row-paired observations."""
    a = squareform(pdist(np.atleast_2d(x)))
    b = squareform(pdist(np.atleast_2d(y)))
    aa = a - a.mean(axis=0) - a.mean(axis=1)[:, None] + a.mean()
    bb = b - b.mean(axis=0) - b.mean(axis=1)[:, None] + b.mean()
    dcov2 = (aa * bb).mean()
    dvar_x = (aa * aa).mean()
    dvar_y = (bb * bb).mean()
    if dvar_x <= 0 or dvar_y <= 0:
        return 0.0
    return math.sqrt(max(dcov2, 0.0)) / (dvar_x * dvar_y) ** 0.25


def permutation_pvalue(
    f_pre: np.ndarray,
    f_post: np.ndarray,
    rng: np.random.Generator,
    n_perm: int = 999,
) -> tuple[float, float]:
    """(dcor, permutation p-value) for dependence between the rows of
    f_pre and f_post; f_post rows are permuted across replicates.

    Exact under the null by construction: p = (1 + #{perm >= obs}) /
    (1 + n_perm), so p-values are approximately uniform for independent
    features and never zero.
    """
    obs = distance_correlation(f_pre, f_post)
    a = squareform(pdist(np.atleast_2d(f_pre)))
    aa = a - a.mean(axis=0) - a.mean(axis=1)[:, None] + a.mean()
    dvar_x = (aa * aa).mean()
    b_full = squareform(pdist(np.atleast_2d(f_post)))
    n = len(b_full)
    count = 0
    for _ in range(n_perm):
        perm = rng.permutation(n)
        b = b_full[np.ix_(perm, perm)]
        bb = b - b.mean(axis=0) - b.mean(axis=1)[:, None] + b.mean()
        dvar_y = (bb * bb).mean()
        if dvar_x <= 0 or dvar_y <= 0:
            stat = 0.0
        else:
            stat = math.sqrt(max((aa * bb).mean(), 0.0)) / (dvar_x * dvar_y) ** 0.25
        if stat >= obs:
            count += 1
    return obs, (1 + count) / (1 + n_perm)


def _side_features(
    sol: BurgersSolution, lo: float, hi: float, closed_right: bool
) -> np.ndarray:
    """(mean u, min u, #shocks) on (lo, hi] or [lo, hi); shocks are the
    macroscopic edges (grid-index gap >= 2)."""
    t = sol.t
    macro = np.diff(sol.vertex_grid_indices) >= 2
    j = np.arange(N_FEATURE_SAMPLES, dtype=float)
    if closed_right:
        xs = lo + (hi - lo) * (j + 1.0) / N_FEATURE_SAMPLES
        n_shocks = np.count_nonzero(macro & (sol.edge_x > lo) & (sol.edge_x <= hi))
    else:
        xs = lo + (hi - lo) * j / N_FEATURE_SAMPLES
        n_shocks = np.count_nonzero(macro & (sol.edge_x >= lo) & (sol.edge_x < hi))
    owners = np.searchsorted(sol.edge_x, xs, side="right")
    u = (xs - sol.vertex_ys[owners]) / t
    return np.array([u.mean(), u.min(), float(n_shocks)])


def _derived_seed(seed: int, *key: int) -> int:
    ss = np.random.SeedSequence((int(seed) & (2**64 - 1), *key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def independence_test(
    params: LevyParams,
    grid: GridSpec,
    t: float,
    window_w: float,
    n_rep: int,
    seed: int,
    n_perm: int = 999,
) -> IndependenceReport:
    """Permutation test of dependence between the flow before and after T.

    Per replicate, feature vectors (mean u, min u, shock count) are built
    on [T-w, T) and (T, T+w]; across replicates the features are
    standardized and tested with distance correlation.  Replicates where T
    is not found or [T-w, T+w] leaves the analysis window are dropped and
    counted; more than 20% drops aborts.
    """
    if n_rep < 100:
        raise ParameterError("need n_rep >= 100")
    pre_rows, post_rows, t_vals = [], [], []
    n_dropped = 0
    for rep in range(n_rep):
        path = sample_path(params, grid, _derived_seed(seed, 0, rep))
        try:
            sol = solve(path, t)
        except WindowTooSmallError:
            n_dropped += 1
            continue
        zy = sol.vertex_ys[zero_set_indices(sol)]
        zy = zy[zy >= 0.0]
        if len(zy) == 0:
            n_dropped += 1
            continue
        T = float(zy[0])
        if T - window_w < sol.window[0] or T + window_w > sol.window[1]:
            n_dropped += 1
            continue
        pre_rows.append(_side_features(sol, T - window_w, T, closed_right=False))
        post_rows.append(_side_features(sol, T, T + window_w, closed_right=True))
        t_vals.append(T)

    if n_dropped > 0.2 * n_rep:
        raise InsufficientDataError(
            f"{n_dropped}/{n_rep} replicates dropped; shrink w or enlarge the grid"
        )

    f_pre = _standardize(np.array(pre_rows))
    f_post = _standardize(np.array(post_rows))
    rng = np.random.default_rng(_derived_seed(seed, 1))
    dcor, p = permutation_pvalue(f_pre, f_post, rng, n_perm=n_perm)

    corrs = []
    for j in range(f_pre.shape[1]):
        x, y = f_pre[:, j], f_post[:, j]
        if x.std() == 0 or y.std() == 0:
            corrs.append(0.0)
        else:
            corrs.append(float(np.corrcoef(x, y)[0, 1]))

    return IndependenceReport(
        p_value_global=p,
        dcor=dcor,
        feature_correlations=tuple(corrs),
        n_valid=len(t_vals),
        n_dropped=n_dropped,
        T_values=np.array(t_vals),
        f_pre=f_pre,
        f_post=f_post,
    )
