"""Quantities of convex bodies: integer cells in coordinate projections,
largest coordinate cubes, the combinatorial dimension v(K, t), L_p balls,
the volume ratios a_k / A_k, mu_p, r_k, and the diameter duality experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Sequence

import numpy as np

from .errors import InputError, PreconditionError
from .lattice import IndexSet, IntegerCell, index_sets
from .lp import maximize_certified
from .polytope import (
    CoordSubspace,
    RationalPolytope,
    coord_subspaces,
    cross_polytope,
    cube,
    hull_of_union,
    intersection,
    polar,
    project_polytope,
    section,
    volume,
)

INF = math.inf


@dataclass(frozen=True)
class ConstantsConfig:
    """The unspecified absolute constants, plus Monte Carlo settings."""

    c_ak: Fraction = Fraction(1, 4)
    C_Ak: Fraction = Fraction(6)
    c_41: Fraction = Fraction(1, 100)
    mc_samples: int = 100_000
    mc_seed: int = 0x5EED

    def __post_init__(self):
        for name in ("c_ak", "C_Ak", "c_41"):
            v = Fraction(getattr(self, name))
            if v <= 0:
                raise InputError(f"constant {name} must be positive")
            object.__setattr__(self, name, v)
        if self.mc_samples <= 0:
            raise InputError("mc_samples must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> "ConstantsConfig":
        known = {"c_ak", "C_Ak", "c_41", "mc_samples", "mc_seed"}
        unknown = set(d) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        kw = {k: Fraction(v) if k in ("c_ak", "C_Ak", "c_41") else int(v) for k, v in d.items()}
        return cls(**kw)

    def to_dict(self) -> dict:
        return {
            "c_ak": str(self.c_ak),
            "C_Ak": str(self.C_Ak),
            "c_41": str(self.c_41),
            "mc_samples": self.mc_samples,
            "mc_seed": self.mc_seed,
        }


# ---------------------------------------------------------------- integer cells


def _int_rows(P: RationalPolytope) -> tuple[np.ndarray, list[int]]:
    """Normals and integer right-hand sides for cell bases z: a . z <= floor(b - pos(a))."""
    A = [f.normal for f in P.facets]
    beta = [math.floor(f.offset - f.worst_corner_shift()) for f in P.facets]
    return A, beta


def _needs_object(A, beta, lo, hi) -> bool:
    amax = max((abs(c) for r in A for c in r), default=0)
    zmax = max([abs(v) for v in lo + hi] + [1])
    bmax = max((abs(b) for b in beta), default=0)
    return amax * zmax * len(lo) + bmax > 2**60


def _cell_scan(P: RationalPolytope, collect: bool):
    """Count (or list) bases of unit cells inside a full-dimensional polytope.

    Enumerates prefixes (z_1..z_{d-1}) over the bounding box and reads off
    the admissible z_d as an interval.
    """
    d = P.dim
    lo_f, hi_f = P.bounding_box()
    lo = [math.ceil(v) for v in lo_f]
    hi = [math.floor(v) - 1 for v in hi_f]
    if any(l > h for l, h in zip(lo, hi)):
        return [] if collect else 0
    A, beta = _int_rows(P)
    dtype = object if _needs_object(A, beta, lo, hi) else np.int64
    An = np.array(A, dtype=dtype).reshape(len(A), d)
    bn = np.array(beta, dtype=dtype)
    ranges = [np.arange(l, h + 1, dtype=np.int64).astype(dtype) for l, h in zip(lo[:-1], hi[:-1])]
    if ranges:
        grids = np.meshgrid(*ranges, indexing="ij")
        Z = np.stack([g.ravel() for g in grids], axis=1)
    else:
        Z = np.zeros((1, 0), dtype=dtype)
    total = 0
    bases = []
    chunk = 200_000
    last = An[:, -1]
    for s in range(0, len(Z), chunk):
        z = Z[s:s + chunk]
        rhs = bn[None, :] - z @ An[:, :-1].T if d > 1 else np.broadcast_to(bn, (len(z), len(bn)))
        upper = np.full(len(z), hi[-1], dtype=dtype)
        lower = np.full(len(z), lo[-1], dtype=dtype)
        ok = np.ones(len(z), dtype=bool)
        for j in range(len(last)):
            a = last[j]
            if a > 0:
                upper = np.minimum(upper, rhs[:, j] // a)
            elif a < 0:
                lower = np.maximum(lower, _ceil_div(rhs[:, j], a))
            else:
                ok &= rhs[:, j] >= 0
        width = (upper - lower + 1)
        width = np.where(ok & (width > 0), width, 0)
        if collect:
            for zi, l, w in zip(z, lower, width):
                for v in range(int(l), int(l) + int(w)):
                    bases.append(tuple(int(c) for c in zi) + (v,))
        else:
            total += int(width.sum())
    return bases if collect else total


def _ceil_div(x, a):
    """ceil(x / a) elementwise for a nonzero integer a."""
    return -((-x) // a)


def cells_in_polytope(P: RationalPolytope) -> int:
    """Number of unit lattice cells [z, z+1]^d contained in P."""
    if P.is_empty or not P.is_full_dim:
        return 0
    return _cell_scan(P, collect=False)


def count_integer_cells_body(K: RationalPolytope, I: IndexSet) -> set[IntegerCell]:
    """Cells of the lattice P_I Z^n contained in P_I K."""
    P = project_polytope(K, I)
    if not P.is_full_dim:
        return set()
    return {IntegerCell(I, b) for b in _cell_scan(P, collect=True)}


def cell_count_body(K: RationalPolytope, I: IndexSet) -> int:
    return cells_in_polytope(project_polytope(K, I))


@dataclass(frozen=True)
class BestProjection:
    indices: IndexSet
    count: int
    vol_sixth: Fraction  # vol(K/6)
    quarter_bound: Fraction  # vol(K/4) - 2^-n
    counts: dict = field(default_factory=dict, compare=False)


def best_cell_projection(K: RationalPolytope) -> BestProjection:
    """Coordinate projection with the most integer cells (ties: smaller |I|, then lex)."""
    n = K.dim
    vol = volume(K)
    counts = {I: cell_count_body(K, I) for I in index_sets(n)}
    best = max(counts.items(), key=lambda kv: kv[1])[1]
    I = next(I for I, c in counts.items() if c == best)
    return BestProjection(I, best, vol / 6**n, vol / 4**n - Fraction(1, 2**n), counts)


# ---------------------------------------------------------------- coordinate cubes


def _max_cube_in(P: RationalPolytope) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Largest t with h + t{0,1}^d inside P, by one LP in (h, t)."""
    d = P.dim
    if P.is_empty:
        raise PreconditionError("empty polytope contains no cube")
    rows, rhs = [], []
    for a, b in P.inequalities():
        rows.append(list(a) + [sum(c for c in a if c > 0)])
        rhs.append(b)
    c = [0] * d + [1]
    res = maximize_certified(c, rows, rhs, free=range(d))
    if not res.ok:
        raise PreconditionError(f"cube LP ended with status {res.status}")
    return res.x[-1], tuple(res.x[:-1])


@lru_cache(maxsize=512)
def max_cube_side(K: RationalPolytope, I: IndexSet) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Exact largest side of a translated coordinate cube in P_I K, with its corner h."""
    return _max_cube_in(project_polytope(K, I))


def cube_sides(K: RationalPolytope) -> dict[IndexSet, Fraction]:
    return {I: max_cube_side(K, I)[0] for I in index_sets(K.dim)}


def comb_dimension_body(K: RationalPolytope, t) -> int:
    """v(K, t) = max{|I| : P_I K contains a translate of the cube of side t}."""
    t = Fraction(t)
    if t <= 0:
        raise InputError("scale t must be positive")
    return max((len(I) for I, s in cube_sides(K).items() if s >= t), default=0)


def comb_dimension_root(K: RationalPolytope, t: "RationalRoot") -> int:
    """v(K, t) for t given exactly as a rational root."""
    return max((len(I) for I, s in cube_sides(K).items() if RationalRoot(s, 1) >= t), default=0)


# ---------------------------------------------------------------- exact roots


@total_ordering
@dataclass(frozen=True)
class RationalRoot:
    """The positive real number base ** (1 / root), compared exactly."""

    base: Fraction
    root: int = 1

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        if self.base < 0 or self.root < 1:
            raise InputError("rational root needs base >= 0 and root >= 1")

    def _cmp_pair(self, other: "RationalRoot"):
        return self.base ** other.root, other.base ** self.root

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalRoot):
            return NotImplemented
        a, b = self._cmp_pair(other)
        return a == b

    def __lt__(self, other) -> bool:
        if not isinstance(other, RationalRoot):
            return NotImplemented
        a, b = self._cmp_pair(other)
        return a < b

    def __hash__(self):
        return hash(float(self))

    def __float__(self) -> float:
        if self.base == 0:
            return 0.0
        return math.exp((math.log(self.base.numerator) - math.log(self.base.denominator)) / self.root)

    def __mul__(self, other: "RationalRoot") -> "RationalRoot":
        r = self.root * other.root // math.gcd(self.root, other.root)
        return RationalRoot(self.base ** (r // self.root) * other.base ** (r // other.root), r)


# ---------------------------------------------------------------- L_p balls


@dataclass(frozen=True)
class LpBallSpec:
    """B_p^n normalized as |x(1)|^p + ... + |x(n)|^p <= n (max |x(i)| <= 1 for p = inf)."""

    p: object
    n: int

    def __post_init__(self):
        p = self.p
        if p != INF:
            p = Fraction(p)
            if p < 1:
                raise InputError("p must be at least 1")
        object.__setattr__(self, "p", p)
        if self.n < 1:
            raise InputError("dimension must be positive")

    def contains(self, x: Sequence) -> bool:
        if self.p == INF:
            return max(abs(Fraction(c)) for c in x) <= 1
        if self.p.denominator == 1:
            return sum(abs(Fraction(c)) ** int(self.p) for c in x) <= self.n
        return sum(abs(float(c)) ** float(self.p) for c in x) <= self.n

    # float interface shared with OracleBody, for Monte Carlo
    @property
    def dim(self) -> int:
        return self.n

    def contains_many(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.p == INF:
            return np.all(np.abs(x) <= 1, axis=1)
        return (np.abs(x) ** float(self.p)).sum(axis=1) <= self.n

    def bounding_box(self) -> tuple[list[float], list[float]]:
        R = 1.0 if self.p == INF else self.n ** (1 / float(self.p))
        return [-R] * self.n, [R] * self.n


def lp_ball(spec: LpBallSpec) -> RationalPolytope:
    if spec.p == INF:
        return cube(spec.n)
    if spec.p == 1:
        return cross_polytope(spec.n, spec.n)
    raise InputError("polytope form of B_p^n exists only for p in {1, inf}")


def lp_ball_volume(p, k: int) -> float:
    """w_p(k) = k^{k/p} (2 Gamma(1 + 1/p))^k / Gamma(1 + k/p), via log-Gamma."""
    if k < 0:
        raise InputError("dimension must be nonnegative")
    if k == 0:
        return 1.0
    if p == INF:
        return 2.0**k
    p = float(p)
    if p < 1:
        raise InputError("p must be at least 1")
    logw = (k / p) * math.log(k) + k * math.log(2 * math.gamma(1 + 1 / p)) - math.lgamma(1 + k / p)
    return math.exp(logw)


def lp_ball_volume_exact(p, k: int) -> Fraction:
    """w_p(k) for p in {1, inf}: 2^k k^k / k! and 2^k."""
    if p == INF:
        return Fraction(2**k)
    if Fraction(p) == 1:
        return Fraction(2**k * k**k, math.factorial(k))
    raise InputError("exact L_p ball volume only for p in {1, inf}")


def euclidean_ball_volume(n: int) -> float:
    """Volume of the standard unit ball (radius 1) in R^n."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


# ---------------------------------------------------------------- volume ratios a_k, A_k


@dataclass
class VolumeRatio:
    """Extremal coordinate volume ratio, exact as a rational root."""

    value: RationalRoot | None  # None means +inf
    witness: CoordSubspace | None
    degenerate: list[CoordSubspace] = field(default_factory=list)

    def __float__(self) -> float:
        return INF if self.value is None else float(self.value)


def _check_k(K: RationalPolytope, k: int) -> None:
    if not 0 < k < K.dim:
        raise InputError(f"k must satisfy 0 < k < n = {K.dim}")


def a_k_exact(K: RationalPolytope, k: int, cfg: ConstantsConfig = ConstantsConfig()) -> VolumeRatio:
    """min over coordinate E, k <= codim E < n, of (|cK| / |P_E K|)^(1/codim E)."""
    _check_k(K, k)
    n = K.dim
    vol_cK = cfg.c_ak**n * volume(K)
    best, wit, degen = None, None, []
    for E in coord_subspaces(n, range(k, n)):
        vp = volume(project_polytope(K, E.kept))
        if vp == 0:
            degen.append(E)
            continue
        r = RationalRoot(vol_cK / vp, E.codim)
        if best is None or r < best:
            best, wit = r, E
    return VolumeRatio(best, wit, degen)


def A_k_exact(K: RationalPolytope, k: int, cfg: ConstantsConfig = ConstantsConfig()) -> VolumeRatio:
    """max over coordinate E, k <= codim E < n, of (|CK| / |K ∩ E|)^(1/codim E)."""
    _check_k(K, k)
    n = K.dim
    vol_CK = cfg.C_Ak**n * volume(K)
    best, wit, degen = None, None, []
    for E in coord_subspaces(n, range(k, n)):
        S = section(K, E)
        vs = volume(S) if not S.is_empty else Fraction(0)
        if vs == 0:
            degen.append(E)
            continue
        r = RationalRoot(vol_CK / vs, E.codim)
        if best is None or r > best:
            best, wit = r, E
    if degen:
        return VolumeRatio(None, degen[0], degen)
    return VolumeRatio(best, wit, degen)


def a_k(K: RationalPolytope, k: int, cfg: ConstantsConfig = ConstantsConfig()) -> float:
    return float(a_k_exact(K, k, cfg))


def A_k(K: RationalPolytope, k: int, cfg: ConstantsConfig = ConstantsConfig()) -> float:
    return float(A_k_exact(K, k, cfg))


# ---------------------------------------------------------------- mu_p


@dataclass(frozen=True)
class MuEstimate:
    value: float
    half_width: float  # 95% confidence half-width; 0 for exact values
    provenance: str  # "exact", "exact-volume" or "mc"
    exact: Fraction | None = None
    samples: int = 0
    flagged: bool = False


def sample_lp_ball(p, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points of B_p^n by rejection from the bounding cube."""
    if p == INF:
        return rng.uniform(-1.0, 1.0, size=(size, n))
    p = float(p)
    R = n ** (1 / p)
    out = []
    got = 0
    while got < size:
        x = rng.uniform(-R, R, size=(max(1024, 2 * (size - got)), n))
        x = x[(np.abs(x) ** p).sum(axis=1) <= n]
        out.append(x)
        got += len(x)
    return np.concatenate(out)[:size]


def _float_hrep(K: RationalPolytope) -> tuple[np.ndarray, np.ndarray]:
    A = np.array([[float(c) for c in a] for a, _ in K.inequalities()])
    b = np.array([float(b) for _, b in K.inequalities()])
    return A, b


def mu_p(K: RationalPolytope, p, cfg: ConstantsConfig = ConstantsConfig(), tol: float | None = None) -> MuEstimate:
    """mu_p(K) = |K ∩ B_p^n| / |B_p^n|."""
    n = K.dim
    spec = LpBallSpec(p, n)
    if K.is_empty:
        return MuEstimate(0.0, 0.0, "exact", Fraction(0))
    if spec.p == INF or spec.p == 1:
        inter = intersection(K, lp_ball(spec))
        val = volume(inter) / lp_ball_volume_exact(spec.p, n)
        return MuEstimate(float(val), 0.0, "exact", val)
    if all(spec.contains(v) for v in K.vertices):
        return MuEstimate(float(volume(K)) / lp_ball_volume(spec.p, n), 0.0, "exact-volume")
    A, b = _float_hrep(K)
    shards = np.random.SeedSequence(cfg.mc_seed).spawn(4)
    per = -(-cfg.mc_samples // 4)
    hits = 0
    for ss in shards:
        x = sample_lp_ball(spec.p, n, per, np.random.default_rng(ss))
        hits += int(np.all(x @ A.T <= b + 1e-12, axis=1).sum())
    N = per * 4
    q = hits / N
    hw = 1.96 * math.sqrt(max(q * (1 - q), 1.0 / N) / N)
    return MuEstimate(q, hw, "mc", None, N, flagged=tol is not None and hw > tol)


# ---------------------------------------------------------------- r_k and duality


@dataclass(frozen=True)
class RkResult:
    value: float  # (2 / sqrt n) * ell1
    ell1: Fraction  # min_I max_{x in K} sum_{i in I} |x(i)|
    witness: IndexSet
    heuristic: bool = False


def _require_symmetric(K: RationalPolytope) -> None:
    if not K.is_symmetric():
        raise PreconditionError("body must be origin symmetric (vertex set closed under negation)")


def _ell1_mass(K: RationalPolytope, I: IndexSet) -> Fraction:
    pos = I.positions
    return max(sum(abs(v[p]) for p in pos) for v in K.vertices)


def r_k(K: RationalPolytope, k: int, greedy: bool = False) -> RkResult:
    """r_k(K) = (2/sqrt n) min_{|I|=k} max_{x in K} sum_{i in I} |x(i)|."""
    n = K.dim
    if not 1 <= k <= n:
        raise InputError(f"k must lie in 1..{n}")
    _require_symmetric(K)
    if greedy:
        single = sorted(range(1, n + 1), key=lambda i: (max(abs(v[i - 1]) for v in K.vertices), i))
        I = IndexSet(n, tuple(sorted(single[:k])))
        m = _ell1_mass(K, I)
        return RkResult(2 * float(m) / math.sqrt(n), m, I, heuristic=True)
    best, wit = None, None
    for I in index_sets(n, [k]):
        m = _ell1_mass(K, I)
        if best is None or m < best:
            best, wit = m, I
    return RkResult(2 * float(best) / math.sqrt(n), best, wit)


def section_ell1_radius(K: RationalPolytope, I: IndexSet) -> Fraction:
    """max ||x||_1 over K ∩ E_I."""
    S = section(K, CoordSubspace(K.dim, I))
    if S.is_empty:
        return Fraction(0)
    return max(sum(abs(c) for c in v) for v in S.vertices)


@dataclass
class DualityOutcome:
    case: int  # 1: |K1| <= |n^-1/2 B_inf|, bounded section of K;  2: bounded section of K°
    body: str  # "K" or "polar"
    subspace: IndexSet
    section_radius: Fraction  # max ||x||_1 over the witness section
    radius_bound: float  # R2 sqrt(n) (case 1) or R1 sqrt(n) (case 2)
    product: Fraction  # r_k(K) r_m(K°), exact
    rk: RkResult
    rm_polar: RkResult
    t1: Fraction
    t2: Fraction
    vol_K1: Fraction
    measured_constant: float  # product ** eps
    bound: float  # C_try ** (1/eps)
    passed: bool


def _rational_approx(x: float) -> Fraction:
    return Fraction(x).limit_denominator(10**6)


def duality_experiment(K: RationalPolytope, k: int, m: int, eps, C_try, cfg: ConstantsConfig = ConstantsConfig()) -> DualityOutcome:
    """Run the two-case construction for r_k(K) r_m(K°) <= C^(1/eps).

    t1, t2 come from the closed forms for R1, R2; the irrational scale factors
    sqrt(n) and sqrt(2) enter K1 through rational approximations.
    """
    n = K.dim
    eps = Fraction(eps)
    C = float(C_try)
    if n > 6:
        raise InputError("duality experiment runs in exact mode only for n <= 6")
    if not (0 < eps < 1) or k < 1 or m < 1 or k + m > (1 - eps) * n:
        raise PreconditionError(f"need k + m <= (1 - eps) n with positive k, m (k={k}, m={m}, eps={eps}, n={n})")
    _require_symmetric(K)
    Kp = polar(K)
    delta = 1 - Fraction(k, n)
    lam = 1 - Fraction(m, n)
    den = delta + lam - 1
    R1 = C ** float((delta - lam + 1) / den) / math.sqrt(2)
    R2 = C ** float((lam - delta + 1) / den) / math.sqrt(2)
    t1 = _rational_approx(1 / (2 * R1))
    t2 = _rational_approx(1 / (2 * R2))
    sq = math.sqrt(n)
    small_cube = cube(n, -_rational_approx(float(t1) / sq), _rational_approx(float(t1) / sq))
    big_cross = cross_polytope(n, _rational_approx(sq / float(t2)))
    K1 = intersection(hull_of_union(K, small_cube), big_cross)
    vK1 = volume(K1)
    # |K1| <= (2/sqrt n)^n  <=>  |K1|^2 n^n <= 4^n
    case = 1 if vK1 * vK1 * n**n <= 4**n else 2
    rk = r_k(K, k)
    rm = r_k(Kp, m)
    if case == 1:
        body, I, radius_bound = "K", rk.witness, R2 * sq
        best = min(index_sets(n, [k]), key=lambda J: (section_ell1_radius(K, J), J))
        rad = section_ell1_radius(K, best)
        I = best
    else:
        body, radius_bound = "polar", R1 * sq
        I = min(index_sets(n, [m]), key=lambda J: (section_ell1_radius(Kp, J), J))
        rad = section_ell1_radius(Kp, I)
    product = 4 * rk.ell1 * rm.ell1 / n
    inv = 1 / eps
    if inv.denominator == 1:
        passed = product <= Fraction(C_try) ** int(inv)
    else:
        passed = float(product) <= C ** float(inv)
    return DualityOutcome(
        case=case,
        body=body,
        subspace=I,
        section_radius=rad,
        radius_bound=radius_bound,
        product=product,
        rk=rk,
        rm_polar=rm,
        t1=t1,
        t2=t2,
        vol_K1=vK1,
        measured_constant=float(product) ** float(eps),
        bound=C ** float(inv),
        passed=passed,
    )
