"""Exact rational polytopes.

Vertices are :class:`~fractions.Fraction` vectors; facets are stored as
primitive integer normals with rational offsets, ``a . x <= b``. Both
conversions V -> H and H -> V go through one double-description routine
(:func:`extreme_rays`) working in exact integer arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import InputError, PreconditionError
from .lattice import IndexSet
from .lp import maximize

Vec = tuple[Fraction, ...]
IntVec = tuple[int, ...]

EXACT_MAX_DIM = 7


# ---------------------------------------------------------------- integer linear algebra


def _primitive(v: Sequence[int]) -> IntVec:
    g = 0
    for c in v:
        g = math.gcd(g, c)
    if g == 0:
        return tuple(v)
    return tuple(c // g for c in v)


def _lcm_denominators(vals: Iterable[Fraction]) -> int:
    L = 1
    for v in vals:
        L = L * v.denominator // math.gcd(L, v.denominator)
    return L


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def rank_and_pivots(rows: Sequence[Sequence[int]]) -> tuple[int, list[int]]:
    """Rank of an integer matrix and its pivot columns (fraction-free elimination)."""
    M = [list(r) for r in rows]
    if not M:
        return 0, []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    prev = 1
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(r + 1, len(M)):
            M[i] = [(M[r][c] * M[i][j] - M[i][c] * M[r][j]) // prev for j in range(ncols)]
        prev = M[r][c]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return r, pivots


def det_int(M: Sequence[Sequence[int]]) -> int:
    """Bareiss determinant of a square integer matrix."""
    A = [list(r) for r in M]
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1] if n else 1


def _nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[IntVec]:
    """Integer basis of {w : row . w = 0 for all rows}."""
    M = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        M[r] = [v / M[r][c] for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        w = [Fraction(0)] * ncols
        w[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            w[pc] = -M[i][f]
        L = _lcm_denominators(w)
        basis.append(_primitive([int(v * L) for v in w]))
    return basis


# ---------------------------------------------------------------- double description


def extreme_rays(rows: Sequence[IntVec]) -> list[IntVec]:
    """Extreme rays of the pointed cone {z : row . z >= 0 for every row}.

    ``rows`` must have full column rank. Rays come back primitive, in no
    particular order. Adjacency uses the combinatorial test on zero sets.
    """
    rows = [tuple(r) for r in rows]
    D = len(rows[0])
    # greedy independent subset for the initial simplicial cone
    chosen: list[int] = []
    for i, r in enumerate(rows):
        if rank_and_pivots([rows[j] for j in chosen] + [r])[0] == len(chosen) + 1:
            chosen.append(i)
            if len(chosen) == D:
                break
    if len(chosen) < D:
        raise PreconditionError("cone is not pointed (constraint matrix is rank deficient)")
    B = [[Fraction(v) for v in rows[i]] for i in chosen]
    # inverse of B: columns r_j with B r_j = e_j
    aug = [B[i] + [Fraction(int(i == j)) for j in range(D)] for i in range(D)]
    for c in range(D):
        p = next(i for i in range(c, D) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        aug[c] = [v / aug[c][c] for v in aug[c]]
        for i in range(D):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    rays: list[IntVec] = []
    zeros: list[int] = []
    for j in range(D):
        col = [aug[i][D + j] for i in range(D)]
        L = _lcm_denominators(col)
        rays.append(_primitive([int(v * L) for v in col]))
        zeros.append(sum(1 << chosen[i] for i in range(D) if i != j))
    chosen_set = set(chosen)
    for k, row in enumerate(rows):
        if k in chosen_set:
            continue
        vals = [_dot(row, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            bit = 1 << k
            zeros = [z | bit if v == 0 else z for z, v in zip(zeros, vals)]
            continue
        new_rays: list[IntVec] = []
        new_zeros: list[int] = []
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if common.bit_count() < D - 2:
                    continue
                if any(
                    i != p and i != q and common & ~zeros[i] == 0
                    for i in range(len(rays))
                ):
                    continue
                vp, vq = vals[p], -vals[q]
                r = _primitive([vq * a + vp * b for a, b in zip(rays[p], rays[q])])
                new_rays.append(r)
                new_zeros.append(common | (1 << k))
        keep = [i for i, v in enumerate(vals) if v >= 0]
        bit = 1 << k
        rays = [rays[i] for i in keep] + new_rays
        zeros = [zeros[i] | bit if vals[i] == 0 else zeros[i] for i in keep] + new_zeros
    return rays


# ---------------------------------------------------------------- polytope type


@dataclass(frozen=True, order=True)
class Facet:
    """Halfspace ``normal . x <= offset`` with a primitive integer normal."""

    normal: IntVec
    offset: Fraction

    def slack(self, x: Sequence) -> Fraction:
        return self.offset - _dot(self.normal, x)

    def worst_corner_shift(self) -> int:
        """max over sigma in {0,1}^d of normal . sigma."""
        return sum(a for a in self.normal if a > 0)


def _to_vec(x) -> Vec:
    try:
        return tuple(Fraction(c) for c in x)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not a rational vector: {x!r}") from exc


def _full_dim_facets(pts: list[IntVec], d: int) -> list[tuple[IntVec, int]]:
    """Facets (a, b) with a . p <= b of the hull of full-dimensional integer points."""
    if d == 1:
        xs = [p[0] for p in pts]
        return [((1,), max(xs)), ((-1,), -min(xs))]
    rows = [tuple(-c for c in p) + (1,) for p in pts]
    out = []
    for ray in extreme_rays(rows):
        a, b = ray[:-1], ray[-1]
        if any(a):
            out.append((a, b))
    return out


class RationalPolytope:
    """Convex hull of finitely many rational points in R^dim.

    Only extreme points are kept, sorted, so equality of polytopes is
    equality of vertex tuples. Facets are derived on demand.
    """

    def __init__(self, dim: int, points: Iterable[Sequence] = (), *, _trusted_facets=None, _is_vertex_set=False):
        if dim < 1:
            raise InputError("polytope dimension must be at least 1")
        pts = sorted({_to_vec(p) for p in points})
        for p in pts:
            if len(p) != dim:
                raise InputError(f"vertex {p} has length {len(p)}, expected {dim}")
        self.dim = dim
        self._raw = pts
        if _trusted_facets is not None:
            self.__dict__["_hrep"] = (tuple(_trusted_facets), (), dim)
        if _is_vertex_set or len(pts) <= 1:
            self.__dict__["vertices"] = tuple(pts)

    # --- representations

    @cached_property
    def _hrep(self) -> tuple[tuple[Facet, ...], tuple[Facet, ...], int]:
        """(facets, equalities, affine dimension). Equalities are a . x = b rows."""
        pts = self._raw
        d = self.dim
        if not pts:
            return (), (), -1
        L = _lcm_denominators(c for p in pts for c in p)
        ip = [tuple(int(c * L) for c in p) for p in pts]
        diffs = [tuple(a - b for a, b in zip(p, ip[0])) for p in ip[1:]]
        r, piv = rank_and_pivots(diffs) if diffs else (0, [])
        if r == d:
            facets = []
            for a, b in _full_dim_facets(ip, d):
                g = math.gcd(*a)
                facets.append(Facet(tuple(c // g for c in a), Fraction(b, L * g)))
            return tuple(sorted(facets)), (), d
        eqs = []
        for w in _nullspace(diffs, d) if diffs else [tuple(int(i == j) for j in range(d)) for i in range(d)]:
            eqs.append(Facet(w, Fraction(_dot(w, ip[0]), L)))
        facets = []
        if r > 0:
            sub = [tuple(p[c] for c in piv) for p in ip]
            for a, b in _full_dim_facets(sub, r):
                full = [0] * d
                for c, v in zip(piv, a):
                    full[c] = v
                g = math.gcd(*full)
                facets.append(Facet(tuple(v // g for v in full), Fraction(b, L * g)))
        return tuple(sorted(facets)), tuple(eqs), r

    @staticmethod
    def _tight_sets(pts: Sequence[Vec], facets: Sequence[Facet]) -> list[list[int]]:
        """For every point, the indices of the facets it lies on (integer arithmetic)."""
        L = _lcm_denominators(c for p in pts for c in p)
        ip = [tuple(int(c * L) for c in p) for p in pts]
        rhs = [f.offset * L for f in facets]
        normals = [f.normal for f in facets]
        return [[j for j, (a, b) in enumerate(zip(normals, rhs)) if sum(x * y for x, y in zip(a, q)) == b] for q in ip]

    @cached_property
    def vertices(self) -> tuple[Vec, ...]:
        facets, _, r = self._hrep
        if r <= 0:
            return tuple(self._raw)
        out = []
        for p, tight_idx in zip(self._raw, self._tight_sets(self._raw, facets)):
            tight = [facets[j].normal for j in tight_idx]
            if len(tight) >= r and rank_and_pivots(tight)[0] == r:
                out.append(p)
        return tuple(out)

    @property
    def facets(self) -> tuple[Facet, ...]:
        return self._hrep[0]

    @property
    def equalities(self) -> tuple[Facet, ...]:
        return self._hrep[1]

    @property
    def affine_dim(self) -> int:
        return self._hrep[2]

    @property
    def is_empty(self) -> bool:
        return not self._raw

    @property
    def is_full_dim(self) -> bool:
        return self.affine_dim == self.dim

    def inequalities(self) -> list[tuple[tuple, Fraction]]:
        """H-representation as a list of (normal, offset) rows, equalities doubled."""
        rows = [(f.normal, f.offset) for f in self.facets]
        for e in self.equalities:
            rows.append((e.normal, e.offset))
            rows.append((tuple(-c for c in e.normal), -e.offset))
        return rows

    # --- constructors

    @classmethod
    def from_halfspaces(cls, dim: int, rows: Iterable[tuple[Sequence, object]]) -> "RationalPolytope":
        """Bounded polyhedron {x : a . x <= b}; empty polytope when infeasible."""
        rows = [(_to_vec(a), Fraction(b)) for a, b in rows]
        if any(len(a) != dim for a, _ in rows):
            raise InputError("halfspace normals must have the polytope dimension")
        cone_rows = []
        for a, b in rows:
            L = _lcm_denominators(list(a) + [b])
            cone_rows.append(_primitive([-int(c * L) for c in a] + [int(b * L)]))
        cone_rows.append(tuple([0] * dim + [1]))
        if rank_and_pivots(cone_rows)[0] < dim + 1:
            raise InputError("halfspace system does not describe a bounded set")
        verts = []
        for ray in extreme_rays(cone_rows):
            s = ray[-1]
            if s > 0:
                verts.append(tuple(Fraction(c, s) for c in ray[:-1]))
            elif any(ray[:-1]):
                raise InputError("halfspace system does not describe a bounded set")
        return cls(dim, verts)

    @classmethod
    def empty(cls, dim: int) -> "RationalPolytope":
        return cls(dim, ())

    # --- value semantics

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalPolytope) and self.dim == other.dim and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.dim, self.vertices))

    def __repr__(self) -> str:
        return f"RationalPolytope(dim={self.dim}, vertices={len(self.vertices)})"

    def scaled(self, s) -> "RationalPolytope":
        s = Fraction(s)
        if s <= 0:
            raise InputError("scale factor must be positive")
        facets = tuple(Facet(f.normal, f.offset * s) for f in self.facets) if "_hrep" in self.__dict__ and self.is_full_dim else None
        return RationalPolytope(self.dim, [tuple(c * s for c in v) for v in self.vertices],
                                _trusted_facets=facets, _is_vertex_set=True)

    def translated(self, v: Sequence) -> "RationalPolytope":
        v = _to_vec(v)
        facets = tuple(Facet(f.normal, f.offset + _dot(f.normal, v)) for f in self.facets) if "_hrep" in self.__dict__ and self.is_full_dim else None
        return RationalPolytope(self.dim, [tuple(a + b for a, b in zip(p, v)) for p in self.vertices],
                                _trusted_facets=facets, _is_vertex_set=True)

    def negated(self) -> "RationalPolytope":
        return RationalPolytope(self.dim, [tuple(-c for c in v) for v in self.vertices], _is_vertex_set=True)

    def is_symmetric(self) -> bool:
        vs = set(self.vertices)
        return all(tuple(-c for c in v) in vs for v in vs)

    def bounding_box(self) -> tuple[Vec, Vec]:
        if self.is_empty:
            raise InputError("empty polytope has no bounding box")
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.dim))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.dim))
        return lo, hi

    def centroid_of_vertices(self) -> Vec:
        m = len(self.vertices)
        return tuple(sum(v[i] for v in self.vertices) / m for i in range(self.dim))

    def vertex_facet_incidence(self) -> list[frozenset[int]]:
        """For every facet, the indices of the vertices lying on it."""
        out: list[set[int]] = [set() for _ in self.facets]
        for i, tight in enumerate(self._tight_sets(self.vertices, self.facets)):
            for j in tight:
                out[j].add(i)
        return [frozenset(s) for s in out]


@dataclass(frozen=True)
class CoordSubspace:
    """The coordinate subspace E spanned by the kept coordinates."""

    ambient: int
    kept: IndexSet

    def __post_init__(self):
        if self.kept.ambient != self.ambient:
            raise InputError("kept index set lives in a different dimension")

    @property
    def codim(self) -> int:
        return self.ambient - len(self.kept)

    @property
    def dim(self) -> int:
        return len(self.kept)


def coord_subspaces(n: int, codims: Iterable[int]) -> list[CoordSubspace]:
    """Coordinate subspaces with the given codimensions, kept sets ordered by size then lex."""
    dims = sorted({n - c for c in codims if 0 <= c < n})
    return [
        CoordSubspace(n, IndexSet(n, c))
        for k in dims
        for c in itertools.combinations(range(1, n + 1), k)
    ]


# ---------------------------------------------------------------- operations


def contains_point(K: RationalPolytope, x: Sequence) -> bool:
    """Exact membership, boundary included."""
    x = _to_vec(x)
    if len(x) != K.dim:
        raise InputError(f"point of length {len(x)} tested against a polytope in dimension {K.dim}")
    if K.is_empty:
        return False
    return all(f.slack(x) >= 0 for f in K.facets) and all(e.slack(x) == 0 for e in K.equalities)


def in_hull_lp(K: RationalPolytope, x: Sequence) -> bool:
    """Membership by LP feasibility of a convex combination of vertices."""
    x = _to_vec(x)
    V = K.vertices
    if not V:
        return False
    m = len(V)
    A_eq = [[v[i] for v in V] for i in range(K.dim)] + [[1] * m]
    b_eq = list(x) + [1]
    return maximize([0] * m, A_eq=A_eq, b_eq=b_eq).ok


@lru_cache(maxsize=8192)
def volume(K: RationalPolytope) -> Fraction:
    """Exact Lebesgue volume; zero for lower-dimensional polytopes.

    Pulling triangulation: each face is coned from its smallest vertex over
    its own facets not containing that vertex.
    """
    if K.dim > EXACT_MAX_DIM:
        raise InputError(f"exact volume is limited to dimension {EXACT_MAX_DIM}; use oracles.mc_volume")
    if K.is_empty or not K.is_full_dim:
        return Fraction(0)
    d = K.dim
    V = K.vertices
    if d == 1:
        return V[-1][0] - V[0][0]
    L = _lcm_denominators(c for v in V for c in v)
    P = [tuple(int(c * L) for c in v) for v in V]
    incid = [s for s in K.vertex_facet_incidence()]

    @lru_cache(maxsize=None)
    def aff_dim(face: frozenset) -> int:
        pts = sorted(face)
        base = P[pts[0]]
        return rank_and_pivots([tuple(a - b for a, b in zip(P[i], base)) for i in pts[1:]])[0] if len(pts) > 1 else 0

    @lru_cache(maxsize=None)
    def tri(face: frozenset, k: int) -> tuple[tuple[int, ...], ...]:
        if k == 0:
            return ((min(face),),)
        apex = min(face)
        subs = {face & s for s in incid}
        out = []
        for g in subs:
            if apex in g or g == face or len(g) < k or aff_dim(g) != k - 1:
                continue
            out.extend((apex,) + t for t in tri(g, k - 1))
        return tuple(out)

    total = 0
    for simplex in tri(frozenset(range(len(P))), d):
        base = P[simplex[0]]
        total += abs(det_int([[a - b for a, b in zip(P[i], base)] for i in simplex[1:]]))
    return Fraction(total, math.factorial(d) * L**d)


@lru_cache(maxsize=8192)
def project_polytope(K: RationalPolytope, I: IndexSet) -> RationalPolytope:
    """P_I K as a polytope in R^|I|."""
    if I.ambient != K.dim:
        raise InputError("index set and polytope dimensions differ")
    if I.is_trivial:
        raise InputError("projection needs a nonempty index set")
    pos = I.positions
    return RationalPolytope(len(pos), [tuple(v[p] for p in pos) for v in K.vertices])


@lru_cache(maxsize=8192)
def section(K: RationalPolytope, E: CoordSubspace) -> RationalPolytope:
    """K ∩ E expressed in the coordinates of E (coordinates outside E set to 0).

    The result is empty when E misses K; check ``is_empty``.
    """
    if E.ambient != K.dim:
        raise InputError("subspace and polytope dimensions differ")
    if K.is_empty:
        return RationalPolytope.empty(E.dim)
    pos = E.kept.positions
    rows = [(tuple(a[p] for p in pos), b) for a, b in K.inequalities()]
    return RationalPolytope.from_halfspaces(E.dim, rows)


def origin_interior_witness(K: RationalPolytope) -> Facet | None:
    """None when 0 is an interior point of K, else a facet (or equality) not strictly satisfied at 0."""
    if K.is_empty:
        raise PreconditionError("empty polytope has no interior")
    if K.equalities:
        return K.equalities[0]
    return next((f for f in K.facets if f.offset <= 0), None)


def polar(K: RationalPolytope) -> RationalPolytope:
    """K° = {y : <x, y> <= 1 for all x in K}; needs 0 in the interior of K."""
    w = origin_interior_witness(K)
    if w is not None:
        raise PreconditionError("origin is not an interior point; polar is unbounded", witness=w)
    verts = [tuple(Fraction(a) / f.offset for a in f.normal) for f in K.facets]
    facets = []
    for v in K.vertices:
        L = _lcm_denominators(v)
        a = [int(c * L) for c in v]
        g = math.gcd(*a)
        facets.append(Facet(tuple(c // g for c in a), Fraction(L, g)))
    return RationalPolytope(K.dim, verts, _trusted_facets=sorted(facets), _is_vertex_set=True)


def hull_of_union(K: RationalPolytope, Q: RationalPolytope) -> RationalPolytope:
    if K.dim != Q.dim:
        raise InputError("polytopes live in different dimensions")
    if all(contains_point(K, v) for v in Q.vertices):
        return K
    if all(contains_point(Q, v) for v in K.vertices):
        return Q
    return RationalPolytope(K.dim, list(K.vertices) + list(Q.vertices))


def intersection(K: RationalPolytope, Q: RationalPolytope) -> RationalPolytope:
    if K.dim != Q.dim:
        raise InputError("polytopes live in different dimensions")
    if K.is_empty or Q.is_empty:
        return RationalPolytope.empty(K.dim)
    if all(contains_point(Q, v) for v in K.vertices):
        return K
    if all(contains_point(K, v) for v in Q.vertices):
        return Q
    return RationalPolytope.from_halfspaces(K.dim, K.inequalities() + Q.inequalities())


# ---------------------------------------------------------------- standard bodies


def cube(n: int, lo=-1, hi=1) -> RationalPolytope:
    lo, hi = Fraction(lo), Fraction(hi)
    return RationalPolytope(n, itertools.product((lo, hi), repeat=n), _is_vertex_set=True)


def box(lo: Sequence, hi: Sequence) -> RationalPolytope:
    return RationalPolytope(len(lo), itertools.product(*zip(_to_vec(lo), _to_vec(hi))))


def cross_polytope(n: int, r=1) -> RationalPolytope:
    """conv{±r e_i}."""
    r = Fraction(r)
    verts = []
    for i in range(n):
        for s in (r, -r):
            v = [Fraction(0)] * n
            v[i] = s
            verts.append(tuple(v))
    return RationalPolytope(n, verts, _is_vertex_set=True)
