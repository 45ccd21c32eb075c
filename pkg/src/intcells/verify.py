"""Claim checkers for point sets and polytopes, and the constant sweeps.

Every checker returns a :class:`VerificationReport`. Claims whose constant is
left unspecified are split into a constant-free *profile* (exact volumes,
radii, cube sides) and an exact ``holds(profile, constant)`` test. The
verifier evaluates ``holds`` at the configured constant. The sweep bisects on
it over a corpus and cross-checks the result against the closed-form
critical constant of each instance.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable

from .bodies import (
    INF,
    ConstantsConfig,
    RationalRoot,
    a_k_exact,
    best_cell_projection,
    cells_in_polytope,
    comb_dimension_root,
    cube_sides,
    duality_experiment,
    euclidean_ball_volume,
    lp_ball_volume,
    mu_p,
    r_k,
)
from .errors import InputError, PreconditionError
from .io import instance_to_json
from .lattice import (
    IntegerPointSet,
    box_content,
    cell_content,
    natarajan_dimension,
    shattered_sets,
    shattering_dimension_discrete,
    slice_set,
    vc_dimension,
)
from .polytope import (
    CoordSubspace,
    RationalPolytope,
    coord_subspaces,
    origin_interior_witness,
    polar,
    project_polytope,
    section,
    volume,
)
from .reports import VerificationReport, digest

DISCRETE_CLAIMS = ("THM_2_2", "THM_2_4", "LEM_2_7", "SAUER_SHELAH", "PAJOR_1", "HL_I", "HL_II", "HL_III")
CONVEX_CLAIMS = (
    "THM_1_1",
    "THM_2_10",
    "LEM_2_9",
    "THM_3_1",
    "THM_3_4",
    "LEM_3_5",
    "THM_4_1",
    "LEM_4_2",
    "SECTION_POLAR",
    "SANTALO",
    "THM_5_1",
)
SANTALO_TOL = 1e-9


def _digest(x) -> str:
    return digest(instance_to_json(x)) if x is not None else digest(None)


def _int_param(params: dict, key: str, default=None) -> int:
    v = params.get(key, default)
    if v is None:
        raise InputError(f"missing parameter {key!r}")
    if isinstance(v, bool) or not isinstance(v, int):
        try:
            v = int(str(v))
        except ValueError:
            raise InputError(f"parameter {key!r} must be an integer, got {v!r}") from None
    return v


# ================================================================ point sets


def _box_sides(A: IntegerPointSet, params: dict) -> tuple[list[int], list[int]]:
    """(N_i, shift) with A - shift inside prod {0..N_i}."""
    if not A.points:
        lo = hi = (0,) * A.dim
    else:
        lo, hi = A.bounds()
    if "N" in params:
        N = params["N"]
        N = [N] * A.dim if isinstance(N, int) else list(N)
        if len(N) != A.dim:
            raise InputError("need one bound N_i per coordinate")
        if any(l < 0 or h > n for l, h, n in zip(lo, hi, N)):
            raise InputError("point set is not contained in the box prod {0..N_i}")
        return N, [0] * A.dim
    return [h - l for l, h in zip(lo, hi)], list(lo)


def _subset_product_sum(weights: list[int], max_size: int) -> int:
    """sum over I with |I| <= max_size of prod_{i in I} weights[i] (empty product 1)."""
    # elementary symmetric polynomials e_0 .. e_n
    e = [1] + [0] * len(weights)
    for w in weights:
        for j in range(len(weights), 0, -1):
            e[j] += e[j - 1] * w
    return sum(e[: max_size + 1])


def verify_discrete(claim: str, A: IntegerPointSet, params: dict | None = None) -> VerificationReport:
    params = dict(params or {})
    d = _digest(A)
    size = len(A.points)
    n = A.dim
    if claim == "THM_2_2":
        bc = box_content(A)
        return VerificationReport(claim, d, size, 1 + bc, "<=", details={"box_content": bc})
    if claim == "THM_2_4":
        cc = cell_content(A)
        nontrivial = cc - 1 if size else 0
        return VerificationReport(
            claim, d, size, cc, "<=",
            details={"cell_content": cc, "statement_rhs": 1 + nontrivial, "nontrivial_terms": nontrivial},
        )
    if claim == "LEM_2_7":
        coords = params.get("coords", list(range(1, n + 1)))
        if isinstance(coords, int):
            coords = [coords]
        total = cell_content(A)
        per = {}
        for j in coords:
            levels = sorted({x[j - 1] for x in A.points})
            per[j] = sum(cell_content(slice_set(A, j, k)) for k in levels)
        worst = max(per, key=lambda j: (per[j], -j)) if per else None
        return VerificationReport(
            claim, d, total, per[worst] if per else 0, ">=", witness=worst, details={"slice_sums": per}
        )
    if claim == "SAUER_SHELAH":
        v = vc_dimension(A)
        bound = sum(math.comb(n, i) for i in range(v + 1))
        # contrapositive form: every d with #A > sum_{i<=d} C(n,i) must have vc > d
        thresholds = {dd: sum(math.comb(n, i) for i in range(dd + 1)) for dd in range(n + 1)}
        bad = [dd for dd, th in thresholds.items() if size > th and not v > dd]
        return VerificationReport(
            claim, d, size, bound, "<=", details={"vc": v, "contrapositive_failures": bad}
        )
    if claim == "PAJOR_1":
        sh = shattered_sets(A)
        return VerificationReport(
            claim, d, size, 1 + len(sh), "<=", witness=sh[-1] if sh else None, details={"shattered": len(sh)}
        )
    if claim in ("HL_I", "HL_II", "HL_III"):
        N, shift = _box_sides(A, params)
        if claim == "HL_III":
            nat = natarajan_dimension(A)
            rhs = _subset_product_sum([math.comb(k + 1, 2) for k in N], nat)
            return VerificationReport(claim, d, size, rhs, "<=", details={"N": N, "shift": shift, "natarajan": nat})
        v, wit = shattering_dimension_discrete(A, 1)
        if claim == "HL_I":
            rhs = _subset_product_sum(N, v)
        else:
            M = max(N, default=0)
            rhs = sum(math.comb(n, i) * M**i for i in range(v + 1))
        return VerificationReport(claim, d, size, rhs, "<=", witness=wit, details={"N": N, "shift": shift, "v": v})
    raise InputError(f"unknown discrete claim {claim!r}; known: {', '.join(DISCRETE_CLAIMS)}")


# ================================================================ convex bodies: profiles


def _require_full_dim(K: RationalPolytope) -> None:
    if K.is_empty or not K.is_full_dim:
        raise PreconditionError("claim needs a full-dimensional body")


def _require_interior_origin(K: RationalPolytope) -> None:
    w = origin_interior_witness(K)
    if w is not None:
        raise PreconditionError("origin must be an interior point", witness=w)


def _k_param(K: RationalPolytope, params: dict) -> int:
    k = _int_param(params, "k", 1)
    if not 0 < k < K.dim:
        raise InputError(f"k must satisfy 0 < k < n = {K.dim}")
    return k


def _ell1_radius(P: RationalPolytope) -> Fraction:
    return max(sum(abs(c) for c in v) for v in P.vertices)


def _max_side_by_rank(K: RationalPolytope) -> list[Fraction]:
    """S[j] = largest cube side over projections of rank j (S[0] is unused)."""
    sides = cube_sides(K)
    S = [Fraction(0)] * (K.dim + 1)
    for I, s in sides.items():
        S[len(I)] = max(S[len(I)], s)
    return S


@dataclass(frozen=True)
class SectionProfile:
    """Section-radius data: K ∩ E volumes for codim >= k and the best codim-k radius."""

    n: int
    vol: Fraction
    sections: tuple  # (codim l, |K ∩ E|, E)
    radius: Fraction  # min over codim-k E of max ||x||_1 on K ∩ E
    witness: CoordSubspace


@lru_cache(maxsize=1024)
def section_profile(K: RationalPolytope, k: int) -> SectionProfile:
    n = K.dim
    secs = []
    for E in coord_subspaces(n, range(k, n)):
        S = section(K, E)
        secs.append((E.codim, volume(S) if not S.is_empty else Fraction(0), E))
    radii = [(_ell1_radius(section(K, E)), E) for E in coord_subspaces(n, [k])]
    rad, wit = min(radii, key=lambda t: (t[0], t[1].kept.indices))
    return SectionProfile(n, volume(K), tuple(secs), rad, wit)


def _Ak_at(prof: SectionProfile, C: Fraction) -> RationalRoot | None:
    best = None
    for l, s, _ in prof.sections:
        if s == 0:
            return None
        r = RationalRoot(C**prof.n * prof.vol / s, l)
        best = r if best is None or r > best else best
    return best


def thm31_holds(prof: SectionProfile, C, factor=2) -> bool:
    A = _Ak_at(prof, Fraction(C))
    return A is None or RationalRoot(prof.radius, 1) <= RationalRoot(Fraction(factor), 1) * A


def thm31_critical(prof: SectionProfile, factor=1) -> RationalRoot:
    """Smallest C with radius <= factor * A_k(K; C)."""
    rho = prof.radius / factor
    return min(RationalRoot(rho**l * s / prof.vol, prof.n) for l, s, _ in prof.sections if s > 0)


@dataclass(frozen=True)
class CubeProfile:
    """Cube-fitting data: projection volumes for codim >= k and the largest rank-(n-k) cube."""

    n: int
    k: int
    vol: Fraction
    projections: tuple  # (codim l, |P_E K|, E)
    side: Fraction  # largest cube side over rank n-k projections


@lru_cache(maxsize=1024)
def cube_profile(K: RationalPolytope, k: int) -> CubeProfile:
    n = K.dim
    projs = tuple((E.codim, volume(project_polytope(K, E.kept)), E) for E in coord_subspaces(n, range(k, n)))
    return CubeProfile(n, k, volume(K), projs, _max_side_by_rank(K)[n - k])


def thm34_holds(prof: CubeProfile, c) -> bool:
    """v(K, a_k(K; c)) >= n - k, i.e. a_k <= the largest rank-(n-k) cube side."""
    c = Fraction(c)
    S = prof.side
    return any(c**prof.n * prof.vol / p <= S**l for l, p, _ in prof.projections if p > 0)


def thm34_critical(prof: CubeProfile) -> RationalRoot:
    """Largest c with v(K, a_k(K; c)) >= n - k."""
    return max(RationalRoot(prof.side**l * p / prof.vol, prof.n) for l, p, _ in prof.projections if p > 0)


@dataclass(frozen=True)
class DualProfile:
    """Data for A_k(K) a_k(nK°) >= 1 at a fixed projection constant c."""

    n: int
    vol: Fraction
    sections: tuple
    a_polar: RationalRoot  # a_k(nK°) with the configured c


@lru_cache(maxsize=1024)
def dual_profile(K: RationalPolytope, k: int, c: Fraction) -> DualProfile:
    prof = section_profile(K, k)
    L = polar(K).scaled(K.dim)
    a = a_k_exact(L, k, ConstantsConfig(c_ak=c))
    if a.value is None:
        raise PreconditionError("every projection of nK° is degenerate")
    return DualProfile(K.dim, prof.vol, prof.sections, a.value)


def lem35_holds(prof: DualProfile, C) -> bool:
    C = Fraction(C)
    a = prof.a_polar
    for l, s, _ in prof.sections:
        if s == 0:
            return True
        # (C^n |K| / s)^(1/l) * a >= 1  <=>  C^n |K| / s >= a^(-l)
        if RationalRoot(C**prof.n * prof.vol / s, 1) >= RationalRoot(a.base ** (-l) if a.base else Fraction(0), a.root):
            return True
    return False


def lem35_critical(prof: DualProfile) -> RationalRoot:
    """Smallest C with A_k(K; C) a_k(nK°) >= 1."""
    a = prof.a_polar
    return min(
        RationalRoot((s / prof.vol) ** a.root * a.base ** (-l), a.root * prof.n) for l, s, _ in prof.sections if s > 0
    )


@dataclass(frozen=True)
class MuProfile:
    n: int
    mu: Any  # Fraction when exact, float otherwise (upper end of the 95% interval)
    mu_point: float
    half_width: float
    provenance: str
    sides: tuple  # S[j] for j = 0..n


def mu_profile(K: RationalPolytope, p, cfg: ConstantsConfig) -> MuProfile:
    est = mu_p(K, p, cfg)
    if est.exact is not None:
        mu, prov = est.exact, "exact"
    elif est.provenance == "exact-volume":
        mu, prov = est.value, "exact"
    else:
        mu, prov = min(1.0, est.value + est.half_width), "mc"
    return MuProfile(K.dim, mu, est.value, est.half_width, prov, tuple(_max_side_by_rank(K)))


def _t41_ok(prof: MuProfile, c, k: int) -> bool:
    """c (k/n) mu^(1/k) <= S[n-k]."""
    n, mu, S = prof.n, prof.mu, prof.sides[prof.n - k]
    if isinstance(mu, Fraction):
        return (Fraction(c) * Fraction(k, n)) ** k * mu <= S**k
    return float(c) * k / n * mu ** (1 / k) <= float(S) * (1 + 1e-12)


def thm41_violations(prof: MuProfile, c) -> list[int]:
    return [k for k in range(1, prof.n) if not _t41_ok(prof, c, k)]


def thm41_holds(prof: MuProfile, c) -> bool:
    return not thm41_violations(prof, c)


def thm41_critical(prof: MuProfile) -> float:
    """Largest c with v(K, c (k/n) mu^(1/k)) >= n - k for every k."""
    vals = []
    for k in range(1, prof.n):
        S = prof.sides[prof.n - k]
        if isinstance(prof.mu, Fraction):
            if prof.mu > 0:
                vals.append(float(RationalRoot(S**k * prof.n**k / (k**k * prof.mu), k)))
        elif prof.mu > 0:
            vals.append(float(S) * prof.n / (k * prof.mu ** (1 / k)))
    return min(vals, default=INF)


def thm51_holds(product: Fraction, eps: Fraction, C) -> bool:
    inv = 1 / eps
    if inv.denominator == 1:
        return product <= Fraction(C) ** int(inv)
    # product <= C^(1/eps)  <=>  product^eps <= C
    return RationalRoot(product**eps.numerator, eps.denominator) <= RationalRoot(Fraction(C), 1)


def thm51_critical(product: Fraction, eps: Fraction) -> RationalRoot:
    return RationalRoot(product**eps.numerator, eps.denominator)


# ================================================================ convex bodies: verifier


def _cells_translate(K: RationalPolytope, x) -> int:
    return cells_in_polytope(K.translated(x))


def lemma29_translates(n: int, count: int, seed: int, denominator: int = 16) -> list[tuple[Fraction, ...]]:
    rng = random.Random(seed)
    return [tuple(Fraction(rng.randrange(-2 * denominator, 2 * denominator), denominator) for _ in range(n)) for _ in range(count)]


def lemma42_sweep(max_n: int = 30, ps=(1, Fraction(3, 2), 2, 4, INF)) -> tuple[float, dict]:
    best, where = 0.0, None
    for p in ps:
        for n in range(1, max_n + 1):
            wn = lp_ball_volume(p, n)
            for k in range(1, n + 1):
                r = lp_ball_volume(p, k) / wn
                if r > best:
                    best, where = r, {"p": "inf" if p == INF else str(p), "k": k, "n": n}
    return best, where


def verify_convex(claim: str, K: RationalPolytope | None, params: dict | None = None, cfg: ConstantsConfig | None = None) -> VerificationReport:
    params = dict(params or {})
    cfg = cfg or ConstantsConfig()
    if claim == "LEM_4_2":
        N = _int_param(params, "max_n", 30)
        bound = float(params.get("bound", 10))
        ps = params.get("ps")
        ps = tuple(INF if str(p) == "inf" else Fraction(p) for p in ps) if ps else (1, Fraction(3, 2), 2, 4, INF)
        best, where = lemma42_sweep(N, ps)
        return VerificationReport(claim, digest({"max_n": N, "ps": [str(p) for p in ps]}), best, bound, "<=",
                                  witness=where, measured_constant=best, provenance="exact")
    if K is None:
        raise InputError(f"claim {claim} needs a polytope")
    d = _digest(K)
    n = K.dim
    if claim not in CONVEX_CLAIMS:
        raise InputError(f"unknown convex claim {claim!r}; known: {', '.join(CONVEX_CLAIMS)}")

    if claim in ("THM_1_1", "THM_2_10"):
        _require_full_dim(K)
        bp = best_cell_projection(K)
        details = {"vol_K/6": bp.vol_sixth, "vol_K/4-2^-n": bp.quarter_bound, "count": bp.count}
        if claim == "THM_2_10":
            return VerificationReport(claim, d, bp.count, bp.quarter_bound, ">=", witness=bp.indices, details=details)
        details["quarter_bound_dominates"] = bp.vol_sixth < 1 or bp.quarter_bound >= bp.vol_sixth
        rel = ">=" if bp.vol_sixth >= 1 else "vacuous"
        return VerificationReport(claim, d, bp.count, bp.vol_sixth, rel, witness=bp.indices, details=details)

    if claim == "LEM_2_9":
        xs = params.get("translates")
        if xs is None:
            xs = lemma29_translates(n, _int_param(params, "count", 100), _int_param(params, "seed", 0))
        else:
            xs = [tuple(Fraction(c) for c in x) for x in xs]
        rhs = cells_in_polytope(K.scaled(2))
        counts = [_cells_translate(K, x) for x in xs]
        worst = max(range(len(xs)), key=lambda i: counts[i]) if xs else None
        return VerificationReport(claim, d, counts[worst] if xs else 0, rhs, "<=",
                                  witness=xs[worst] if xs else None, details={"translates": len(xs)})

    if claim == "THM_3_1":
        k = _k_param(K, params)
        _require_interior_origin(K)
        prof = section_profile(K, k)
        factor = Fraction(params.get("factor", 2))
        A = _Ak_at(prof, cfg.C_Ak)
        crit = thm31_critical(prof, factor=1)
        details = {"k": k, "A_k": float(A) if A else INF, "factor": factor, "radius": prof.radius,
                   "absorbed_constant": float(crit)}
        if A is None:
            return VerificationReport(claim, d, prof.radius, INF, "vacuous", witness=prof.witness, details=details)
        return VerificationReport(claim, d, RationalRoot(prof.radius, 1), RationalRoot(factor, 1) * A, "<=",
                                  witness=prof.witness, measured_constant=float(crit), details=details)

    if claim == "THM_3_4":
        k = _k_param(K, params)
        _require_full_dim(K)
        a = a_k_exact(K, k, cfg)
        v = comb_dimension_root(K, a.value)
        prof = cube_profile(K, k)
        details = {"k": k, "a_k": float(a), "cube_side": prof.side, "holds_via_profile": thm34_holds(prof, cfg.c_ak),
                   "degenerate_projections": len(a.degenerate)}
        return VerificationReport(claim, d, v, n - k, ">=", witness=a.witness,
                                  measured_constant=float(thm34_critical(prof)), details=details)

    if claim == "LEM_3_5":
        k = _k_param(K, params)
        _require_interior_origin(K)
        prof = dual_profile(K, k, cfg.c_ak)
        A = _Ak_at(section_profile(K, k), cfg.C_Ak)
        product = A * prof.a_polar if A is not None else None
        details = {"k": k, "A_k": float(A) if A else INF, "a_k_nKpolar": float(prof.a_polar), "c": cfg.c_ak, "C": cfg.C_Ak}
        crit = float(lem35_critical(prof))
        if product is None:
            return VerificationReport(claim, d, INF, 1, "vacuous", details=details)
        return VerificationReport(claim, d, product, RationalRoot(Fraction(1), 1), ">=",
                                  measured_constant=crit, details=details)

    if claim == "THM_4_1":
        p = params.get("p", "inf")
        p = INF if str(p) == "inf" else Fraction(p)
        prof = mu_profile(K, p, cfg)
        bad = thm41_violations(prof, cfg.c_41)
        return VerificationReport(
            claim, d, len(bad), 0, "<=", witness=bad or None, measured_constant=thm41_critical(prof),
            provenance=prof.provenance, ci=prof.half_width if prof.provenance == "mc" else None,
            details={"p": str(p), "mu": prof.mu_point, "c": cfg.c_41, "violating_k": bad},
        )

    if claim == "SECTION_POLAR":
        _require_interior_origin(K)
        Kp = polar(K)
        bad = []
        checked = 0
        for E in coord_subspaces(n, range(0, n)):
            lhs = polar(section(K, E))
            rhs = project_polytope(Kp, E.kept)
            checked += 1
            if sorted(lhs.vertices) != sorted(rhs.vertices):
                bad.append(E)
        return VerificationReport(claim, d, len(bad), 0, "<=", witness=bad[0] if bad else None,
                                  details={"subspaces": checked})

    if claim == "SANTALO":
        _require_interior_origin(K)
        if not K.is_symmetric():
            raise PreconditionError("Santaló bound is checked for symmetric bodies")
        prod = volume(K) * volume(polar(K))
        ball = euclidean_ball_volume(n) ** 2
        const = (float(prod) / ball) ** (1 / n)
        mahler = float(prod * math.factorial(n) / 4**n) ** (1 / n)
        return VerificationReport(claim, d, float(prod), ball * (1 + SANTALO_TOL), "<=", measured_constant=const,
                                  details={"product": prod, "ball_product": ball, "vs_cube_cross": mahler})

    # THM_5_1
    k = _int_param(params, "k", 2)
    m = _int_param(params, "m", 2)
    eps = Fraction(params.get("eps", "1/3"))
    C_try = Fraction(params.get("C_try", 4))
    out = duality_experiment(K, k, m, eps, C_try, cfg)
    K2 = K.scaled(2)
    scaled_product = 4 * r_k(K2, k).ell1 * r_k(polar(K2), m).ell1 / n
    inv = 1 / eps
    rhs = C_try ** int(inv) if inv.denominator == 1 else float(C_try) ** float(inv)
    details = {
        "case": out.case, "body": out.body, "t1": out.t1, "t2": out.t2, "vol_K1": out.vol_K1,
        "section_radius": out.section_radius, "radius_bound": out.radius_bound,
        "r_k": out.rk.value, "r_m_polar": out.rm_polar.value, "scale_invariant": scaled_product == out.product,
    }
    return VerificationReport(claim, d, out.product, rhs, "<=", witness=out.subspace,
                              measured_constant=float(thm51_critical(out.product, eps)), details=details)


def verify(claim: str, instance, params: dict | None = None, cfg: ConstantsConfig | None = None) -> VerificationReport:
    if claim in DISCRETE_CLAIMS:
        if not isinstance(instance, IntegerPointSet):
            raise InputError(f"{claim} needs a point set")
        return verify_discrete(claim, instance, params)
    if claim in CONVEX_CLAIMS:
        if instance is not None and not isinstance(instance, RationalPolytope):
            raise InputError(f"{claim} needs a polytope")
        return verify_convex(claim, instance, params, cfg)
    raise InputError(f"unknown claim {claim!r}")


# ================================================================ sweeps


@dataclass
class SweepResult:
    claim: str
    direction: str  # "max": largest constant keeping every instance valid; "min": smallest
    constant: float  # closed form, worst instance
    bisected: float | None  # bisection on the exact predicate over the whole corpus
    per_instance: list = field(default_factory=list)
    worst_instance: int | None = None

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "direction": self.direction,
            "constant": self.constant,
            "bisected": self.bisected,
            "per_instance": self.per_instance,
            "worst_instance": self.worst_instance,
        }


def bisect_constant(holds_all: Callable[[Fraction], bool], direction: str, guess: float, iters: int = 40) -> float | None:
    """Boundary of a monotone predicate, bracketing from ``guess`` by doubling, then bisecting."""
    if not math.isfinite(guess) or guess <= 0:
        guess = 1.0
    good = direction == "max"  # for "max", small constants hold
    lo = hi = Fraction(guess).limit_denominator(10**9)
    for _ in range(200):
        if holds_all(lo) == good:
            break
        lo /= 2
    else:
        return None
    for _ in range(200):
        if holds_all(hi) != good:
            break
        hi *= 2
    else:
        return None
    # invariant: holds(lo) == good, holds(hi) != good
    for _ in range(iters):
        mid = (lo + hi) / 2
        mid = mid.limit_denominator(10**12) if mid.denominator > 10**15 else mid
        if holds_all(mid) == good:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def sweep(claim: str, corpus: list, params: dict | None = None, cfg: ConstantsConfig | None = None, iters: int = 40) -> SweepResult:
    """Best constant for ``claim`` over ``corpus`` (a list of polytopes)."""
    params = dict(params or {})
    cfg = cfg or ConstantsConfig()
    if not corpus and claim != "LEM_4_2":
        raise InputError("empty corpus")
    if claim == "THM_3_1":
        k_of = lambda K: _k_param(K, params)  # noqa: E731
        profs = [section_profile(K, k_of(K)) for K in corpus]
        factor = Fraction(params.get("factor", 1))
        crit = [float(thm31_critical(p, factor)) for p in profs]
        return _finish(claim, "min", crit, lambda C: all(thm31_holds(p, C, factor) for p in profs), iters)
    if claim == "THM_3_4":
        profs = [cube_profile(K, _k_param(K, params)) for K in corpus]
        crit = [float(thm34_critical(p)) for p in profs]
        return _finish(claim, "max", crit, lambda c: all(thm34_holds(p, c) for p in profs), iters)
    if claim == "LEM_3_5":
        profs = [dual_profile(K, _k_param(K, params), cfg.c_ak) for K in corpus]
        crit = [float(lem35_critical(p)) for p in profs]
        return _finish(claim, "min", crit, lambda C: all(lem35_holds(p, C) for p in profs), iters)
    if claim == "THM_4_1":
        p = params.get("p", "inf")
        p = INF if str(p) == "inf" else Fraction(p)
        profs = [mu_profile(K, p, cfg) for K in corpus]
        crit = [thm41_critical(pr) for pr in profs]
        return _finish(claim, "max", crit, lambda c: all(thm41_holds(pr, c) for pr in profs), iters)
    if claim == "THM_5_1":
        k = _int_param(params, "k", 2)
        m = _int_param(params, "m", 2)
        eps = Fraction(params.get("eps", "1/3"))
        prods = [duality_experiment(K, k, m, eps, 4, cfg).product for K in corpus]
        crit = [float(thm51_critical(q, eps)) for q in prods]
        return _finish(claim, "min", crit, lambda C: all(thm51_holds(q, eps, C) for q in prods), iters)
    if claim == "SANTALO":
        consts = [verify_convex("SANTALO", K, cfg=cfg).measured_constant for K in corpus]
        # largest observed constant bounds the Santaló side, smallest the reverse side
        res = SweepResult(claim, "min", max(consts), None, consts, consts.index(max(consts)))
        return res
    if claim == "LEM_4_2":
        best, where = lemma42_sweep(_int_param(params, "max_n", 30))
        return SweepResult(claim, "min", best, None, [where], None)
    raise InputError(f"claim {claim!r} has no sweepable constant")


def _finish(claim: str, direction: str, crit: list[float], holds_all, iters: int) -> SweepResult:
    worst = min(crit) if direction == "max" else max(crit)
    idx = crit.index(worst)
    bis = bisect_constant(holds_all, direction, worst, iters) if math.isfinite(worst) else None
    return SweepResult(claim, direction, worst, bis, crit, idx)


def with_constant(cfg: ConstantsConfig, claim: str, value) -> ConstantsConfig:
    """Copy of ``cfg`` with the constant that ``claim`` depends on set to ``value``."""
    name = {"THM_3_1": "C_Ak", "LEM_3_5": "C_Ak", "THM_3_4": "c_ak", "THM_4_1": "c_41"}.get(claim)
    if name is None:
        raise InputError(f"claim {claim!r} has no configurable constant")
    return replace(cfg, **{name: Fraction(value)})
