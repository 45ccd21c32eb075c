"""Brute-force reference implementations for cross-checking.

Nothing here imports the computational modules of this package: point sets
and polytopes are read only as plain data (``.dim``, ``.points``,
``.vertices``), and convex-hull membership goes through Qhull in floating
point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import ConvexHull

DEFAULT_SEED = 0x5EED
DEFAULT_SAMPLES = 100_000
HULL_TOL = 1e-9


@dataclass(frozen=True)
class McEstimate:
    value: float
    half_width_95: float
    samples: int
    seed: int
    zero_hits: bool = False

    def brackets(self, exact) -> bool:
        return abs(float(exact) - self.value) <= self.half_width_95


def oracle_cconv(A, x) -> bool:
    """Literal transcription: every sign vector has a dominating point of A."""
    x = tuple(x)
    n = len(x)
    for theta in itertools.product((-1, 1), repeat=n):
        found = False
        for y in A.points:
            if all((y[i] >= x[i]) if theta[i] == 1 else (y[i] <= x[i]) for i in range(n)):
                found = True
                break
        if not found:
            return False
    return True


def oracle_cconv_cells(A) -> int:
    """Unit cells of the bounding box whose corners all pass :func:`oracle_cconv`."""
    if not A.points:
        return 0
    pts = list(A.points)
    n = len(pts[0])
    lo = [min(p[i] for p in pts) for i in range(n)]
    hi = [max(p[i] for p in pts) for i in range(n)]
    count = 0
    for base in itertools.product(*(range(a, b) for a, b in zip(lo, hi))):
        if all(
            oracle_cconv(A, tuple(c + s for c, s in zip(base, sig)))
            for sig in itertools.product((0, 1), repeat=n)
        ):
            count += 1
    return count


def grid_shatter_search(A, t, grid_step) -> int:
    """Largest |I| t-shattered by A with the level h restricted to a fine grid.

    The grid is anchored at integers and covers [floor(min - t), max] per
    coordinate with spacing ``grid_step``; every index set is tried, largest
    first. For integer points a level can always be lowered onto a coordinate
    value, so any step dividing 1 loses nothing.
    """
    t = Fraction(t)
    step = Fraction(grid_step)
    if t <= 0 or step <= 0:
        raise ValueError("t and grid_step must be positive")
    if (1 / step).denominator != 1:
        raise ValueError("grid too coarse: grid_step must divide 1")
    pts = sorted(A.points)
    if not pts:
        return 0
    n = A.dim
    q = math.lcm(t.denominator, step.denominator)
    X = np.array(pts, dtype=np.int64) * q
    T = int(t * q)
    S = int(step * q)
    for size in range(n, 0, -1):
        for I in itertools.combinations(range(n), size):
            Xi = X[:, I]
            axes = [np.arange(q * ((int(Xi[:, j].min()) - T) // q), Xi[:, j].max() + 1, S) for j in range(size)]
            H = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
            for s in range(0, len(H), 20000):
                h = H[s:s + 20000]
                covered = np.ones(len(h), dtype=bool)
                for plus in itertools.product((False, True), repeat=size):
                    cond = np.ones((len(h), len(Xi)), dtype=bool)
                    for j, up in enumerate(plus):
                        if up:
                            cond &= Xi[None, :, j] >= h[:, None, j] + T
                        else:
                            cond &= Xi[None, :, j] <= h[:, None, j]
                    covered &= cond.any(axis=1)
                if covered.any():
                    return size
    return 0


# ---------------------------------------------------------------- float hull membership


def _float_hull(points: np.ndarray):
    """(A, b) with A x <= b describing the hull of full-dimensional points."""
    d = points.shape[1]
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([points.max(), -points.min()])
    hull = ConvexHull(points)
    return hull.equations[:, :-1], -hull.equations[:, -1]


def _polytope_points(K) -> np.ndarray:
    return np.array([[float(c) for c in v] for v in K.vertices], dtype=float).reshape(len(K.vertices), K.dim)


def _scaled_tol(b: np.ndarray) -> float:
    return HULL_TOL * max(1.0, float(np.abs(b).max()))


def exhaustive_cell_count(K, positions=None) -> int:
    """Unit cells inside the coordinate projection, by testing every corner.

    ``positions`` are 0-based coordinates (all of them by default).
    """
    V = _polytope_points(K)
    if positions is not None:
        V = V[:, list(positions)]
    d = V.shape[1]
    if np.linalg.matrix_rank(V - V[0]) < d if len(V) > 1 else True:
        return 0
    A, b = _float_hull(V)
    tol = _scaled_tol(b)
    lo = np.floor(V.min(axis=0)).astype(int)
    hi = np.ceil(V.max(axis=0)).astype(int)
    count = 0
    corners = np.array(list(itertools.product((0, 1), repeat=d)), dtype=float)
    for base in itertools.product(*(range(l, h) for l, h in zip(lo, hi))):
        c = corners + np.array(base, dtype=float)
        if np.all(c @ A.T <= b + tol):
            count += 1
    return count


# ---------------------------------------------------------------- Monte Carlo


def _shards(seed: int, samples: int, n_shards: int = 4):
    per = -(-samples // n_shards)
    return [(np.random.default_rng(ss), per) for ss in np.random.SeedSequence(seed).spawn(n_shards)]


def _estimate(hits: int, total: int, scale: float, seed: int) -> McEstimate:
    q = hits / total
    if hits == 0:
        # rule of three for an empty sample
        return McEstimate(0.0, scale * 3.0 / total, total, seed, zero_hits=True)
    hw = 1.96 * math.sqrt(q * (1 - q) / total)
    return McEstimate(q * scale, hw * scale, total, seed)


def mc_volume(body, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> McEstimate:
    """Hit rate in the bounding box times the box volume.

    ``body`` is either a polytope (anything with ``.vertices``) or an object
    offering ``bounding_box()`` and ``contains_many(points)``.
    """
    if hasattr(body, "vertices"):
        V = _polytope_points(body)
        A, b = _float_hull(V)
        tol = _scaled_tol(b)
        lo, hi = V.min(axis=0), V.max(axis=0)

        def inside(x):
            return np.all(x @ A.T <= b + tol, axis=1)
    else:
        lo, hi = (np.asarray(v, dtype=float) for v in body.bounding_box())
        inside = body.contains_many
    box_vol = float(np.prod(hi - lo))
    hits = total = 0
    for rng, per in _shards(seed, samples):
        x = rng.uniform(lo, hi, size=(per, len(lo)))
        hits += int(np.count_nonzero(inside(x)))
        total += per
    return _estimate(hits, total, box_vol, seed)


def sample_lp_ball_gamma(p: float, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points of {sum |x_i|^p <= n}: generalized-Gaussian directions with an
    exponential radial correction."""
    if math.isinf(p):
        return rng.uniform(-1, 1, size=(size, n))
    g = rng.gamma(1 / p, 1.0, size=(size, n)) ** (1 / p)
    y = g * rng.choice([-1.0, 1.0], size=(size, n))
    z = rng.exponential(1.0, size=(size, 1))
    x = y / ((np.abs(y) ** p).sum(axis=1, keepdims=True) + z) ** (1 / p)
    return x * n ** (1 / p)


def mc_mu_p(body, p, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> McEstimate:
    """Fraction of B_p^n (uniform) falling in ``body``."""
    p = float(p)
    n = body.dim
    if hasattr(body, "vertices"):
        A, b = _float_hull(_polytope_points(body))
        tol = _scaled_tol(b)

        def inside(x):
            return np.all(x @ A.T <= b + tol, axis=1)
    else:
        inside = body.contains_many
    hits = total = 0
    for rng, per in _shards(seed, samples):
        x = sample_lp_ball_gamma(p, n, per, rng)
        hits += int(np.count_nonzero(inside(x)))
        total += per
    return _estimate(hits, total, 1.0, seed)
