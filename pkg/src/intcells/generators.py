"""Seeded instance families.

Every generator is a pure function of its :class:`GenSpec`; the same spec
always serializes to the same bytes.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InputError
from .lattice import IntegerPointSet
from .polytope import RationalPolytope, box, cross_polytope, cube

# random vertices are integers divided by this
DENOMINATOR = 4

INF = math.inf


@dataclass(frozen=True)
class GenSpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def to_dict(self) -> dict:
        return {"family": self.family, "params": {k: _jsonable(v) for k, v in self.params.items()}, "seed": self.seed}


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if v == INF:
        return "inf"
    return v


def _density(d) -> float:
    d = float(d)
    if not 0 < d <= 1:
        raise InputError(f"density must lie in (0, 1], got {d}")
    return d


# ---------------------------------------------------------------- discrete families


def boolean_random(n: int, density=0.5, seed: int = 0) -> IntegerPointSet:
    if not 1 <= n <= 12:
        raise InputError("boolean_random supports 1 <= n <= 12")
    rng = random.Random(seed)
    d = _density(density)
    return IntegerPointSet(n, frozenset(p for p in itertools.product((0, 1), repeat=n) if rng.random() < d))


def box_random(n: int, N: Sequence[int] | int, density=0.5, seed: int = 0) -> IntegerPointSet:
    """Random subset of prod {0..N_i}."""
    if not 1 <= n <= 5:
        raise InputError("box_random supports 1 <= n <= 5")
    N = [N] * n if isinstance(N, int) else list(N)
    if len(N) != n or any(v < 0 for v in N):
        raise InputError("need one nonnegative bound N_i per coordinate")
    rng = random.Random(seed)
    d = _density(density)
    return IntegerPointSet(
        n, frozenset(p for p in itertools.product(*(range(v + 1) for v in N)) if rng.random() < d)
    )


def diagonal(n: int, M: int) -> IntegerPointSet:
    return IntegerPointSet(n, frozenset((k,) * n for k in range(M + 1)))


def full_grid(n: int, M: int) -> IntegerPointSet:
    return IntegerPointSet(n, frozenset(itertools.product(range(M + 1), repeat=n)))


_DISCRETE = {
    "boolean_random": lambda p, seed: boolean_random(p["n"], p.get("density", 0.5), seed),
    "box_random": lambda p, seed: box_random(p["n"], p["N"], p.get("density", 0.5), seed),
    "diagonal": lambda p, seed: diagonal(p["n"], p["M"]),
    "full_grid": lambda p, seed: full_grid(p["n"], p["M"]),
}


def gen_discrete(spec: GenSpec) -> IntegerPointSet:
    try:
        make = _DISCRETE[spec.family]
    except KeyError:
        raise InputError(f"unknown discrete family {spec.family!r}; known: {sorted(_DISCRETE)}") from None
    try:
        return make(spec.params, spec.seed)
    except KeyError as exc:
        raise InputError(f"family {spec.family} is missing parameter {exc}") from None
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"family {spec.family}: bad parameter value ({exc})") from None


# ---------------------------------------------------------------- polytope families


def parallelepiped(semiaxes: Sequence) -> RationalPolytope:
    a = [Fraction(v) for v in semiaxes]
    if any(v <= 0 for v in a):
        raise InputError("semiaxes must be positive")
    return box([-v for v in a], a)


def pancake(lengths: Sequence) -> RationalPolytope:
    ls = [Fraction(v) for v in lengths]
    if any(v <= 0 for v in ls):
        raise InputError("pancake side lengths must be positive")
    return box([0] * len(ls), ls)


def random_hull(n: int, m: int, scale, seed: int = 0, symmetric: bool = False) -> RationalPolytope:
    """Hull of m random lattice points in [-scale, scale]^n divided by DENOMINATOR.

    With ``symmetric`` the points are mirrored through the origin. Draws are
    repeated (deterministically) until the hull is full-dimensional and, for
    symmetric bodies, has the origin in its interior.
    """
    if m < 1 or n < 1:
        raise InputError("need n >= 1 and m >= 1")
    rng = random.Random(seed)
    R = int(Fraction(scale) * DENOMINATOR)
    if R < 1:
        raise InputError("scale too small for the lattice denominator")
    for _ in range(1000):
        pts = [tuple(Fraction(rng.randint(-R, R), DENOMINATOR) for _ in range(n)) for _ in range(m)]
        if symmetric:
            pts += [tuple(-c for c in p) for p in pts]
        K = RationalPolytope(n, pts)
        if K.is_full_dim:
            return K
    raise InputError("could not draw a full-dimensional hull; raise m or scale")


def random_in_lp_ball(n: int, m: int, p, seed: int = 0, symmetric: bool = True) -> RationalPolytope:
    """Random polytope whose vertices lie in B_p^n (p in {1, 2, inf} exactly checked)."""
    rng = random.Random(seed)
    for _ in range(1000):
        pts = []
        while len(pts) < m:
            x = [Fraction(rng.randint(-16, 16), 16) for _ in range(n)]
            if p == INF:
                y = x
            else:
                pf = float(p)
                scale = (n ** (1 / pf))
                y = [Fraction(c * Fraction(scale).limit_denominator(64)) for c in x]
                if Fraction(p) == 1:
                    if sum(abs(c) for c in y) > n:
                        continue
                elif Fraction(p) == 2:
                    if sum(c * c for c in y) > n:
                        continue
                else:
                    if sum(abs(float(c)) ** pf for c in y) > n:
                        continue
            pts.append(tuple(y))
        if symmetric:
            pts += [tuple(-c for c in q) for q in pts]
        K = RationalPolytope(n, pts)
        if K.is_full_dim:
            return K
    raise InputError("could not draw a full-dimensional polytope in the L_p ball")


def lp_ball_polytope(p, n: int) -> RationalPolytope:
    if p == INF or p == "inf":
        return cube(n)
    if Fraction(p) == 1:
        return cross_polytope(n, n)
    raise InputError("B_p^n is a polytope only for p in {1, inf}")


_POLY = {
    "cube": lambda p, seed: cube(p["n"], -Fraction(p.get("s", 1)), Fraction(p.get("s", 1))),
    "parallelepiped": lambda p, seed: parallelepiped(p["a"]),
    "cross": lambda p, seed: cross_polytope(p["n"], p.get("r", 1)),
    "random_hull": lambda p, seed: random_hull(p["n"], p["m"], p.get("scale", 1), seed, p.get("symmetric", False)),
    "random_in_lp_ball": lambda p, seed: random_in_lp_ball(p["n"], p["m"], _p(p["p"]), seed, p.get("symmetric", True)),
    "pancake": lambda p, seed: pancake(p["lengths"]),
    "lp_ball": lambda p, seed: lp_ball_polytope(_p(p["p"]), p["n"]),
}


def _p(v):
    return INF if v in ("inf", INF) else Fraction(v)


def gen_polytope(spec: GenSpec) -> RationalPolytope:
    try:
        make = _POLY[spec.family]
    except KeyError:
        raise InputError(f"unknown polytope family {spec.family!r}; known: {sorted(_POLY)}") from None
    try:
        return make(spec.params, spec.seed)
    except KeyError as exc:
        raise InputError(f"family {spec.family} is missing parameter {exc}") from None
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"family {spec.family}: bad parameter value ({exc})") from None


def generate(spec: GenSpec):
    """Dispatch on the family name to the discrete or polytope generators."""
    if spec.family in _DISCRETE:
        return gen_discrete(spec)
    return gen_polytope(spec)


# ---------------------------------------------------------------- sharpness body


@dataclass(frozen=True)
class OracleBody:
    """Points of B_p^n with at least k coordinates of absolute value <= eps.

    Coordinate convex but not convex; available only through membership.
    """

    dim: int
    p: object
    eps: Fraction
    k: int

    def _in_ball(self, x: np.ndarray) -> np.ndarray:
        if self.p == INF:
            return np.all(np.abs(x) <= 1, axis=-1)
        return (np.abs(x) ** float(self.p)).sum(axis=-1) <= self.dim

    def contains_many(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        small = (np.abs(x) <= float(self.eps)).sum(axis=-1)
        return self._in_ball(x) & (small >= self.k)

    def contains(self, x: Sequence) -> bool:
        return bool(self.contains_many(np.asarray([x], dtype=float))[0])

    def projection_contains(self, positions: Sequence[int], y: Sequence) -> bool:
        """Whether y lies in the coordinate projection onto ``positions`` (0-based).

        Free coordinates are best completed by zeros: that keeps the point in
        the ball and makes every free coordinate small.
        """
        y = np.asarray(y, dtype=float)
        free = self.dim - len(positions)
        if self.p == INF:
            in_ball = bool(np.all(np.abs(y) <= 1))
        else:
            in_ball = float((np.abs(y) ** float(self.p)).sum()) <= self.dim
        small = int((np.abs(y) <= float(self.eps)).sum())
        return in_ball and small + free >= self.k

    def bounding_box(self) -> tuple[list[float], list[float]]:
        R = 1.0 if self.p == INF else self.dim ** (1 / float(self.p))
        return [-R] * self.dim, [R] * self.dim


def gen_sharpness_body(n: int, k: int, p, eps) -> OracleBody:
    if not (n / 2 <= k < n):
        raise InputError(f"need n/2 <= k < n, got n={n}, k={k}")
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be positive")
    p = _p(p)
    if p != INF and p < 1:
        raise InputError("p must be at least 1")
    return OracleBody(n, p, eps, k)
