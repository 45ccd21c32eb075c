"""Finite subsets of Z^n: coordinate projections, coordinate convex hulls,
integer boxes and cells, cell content, and the discrete dimensions.

Coordinates are 1-based in :class:`IndexSet` (matching the usual R^I
notation) and 0-based everywhere else.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InputError

Point = tuple[int, ...]


@dataclass(frozen=True, order=True)
class IndexSet:
    """A subset I of {1..ambient} naming the coordinate projection P_I.

    The empty index set is the trivial (0-dimensional) projection and is only
    built through :meth:`trivial`.
    """

    ambient: int
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.indices)))
        if len(idx) != len(self.indices):
            raise InputError(f"repeated indices in {self.indices}")
        if idx and (idx[0] < 1 or idx[-1] > self.ambient):
            raise InputError(f"indices {idx} not inside 1..{self.ambient}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, ambient: int, indices: Iterable[int]) -> "IndexSet":
        idx = tuple(indices)
        if not idx:
            raise InputError("index set must be nonempty (use IndexSet.trivial)")
        return cls(ambient, idx)

    @classmethod
    def full(cls, ambient: int) -> "IndexSet":
        return cls(ambient, tuple(range(1, ambient + 1)))

    @classmethod
    def trivial(cls, ambient: int) -> "IndexSet":
        return cls(ambient, ())

    @property
    def positions(self) -> tuple[int, ...]:
        """0-based positions of the kept coordinates."""
        return tuple(i - 1 for i in self.indices)

    @property
    def is_trivial(self) -> bool:
        return not self.indices

    def complement(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.ambient + 1) if i not in self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.indices)) + "}"


def index_sets(n: int, sizes: Iterable[int] | None = None) -> list[IndexSet]:
    """Nonempty index sets of {1..n}, by cardinality then lexicographic."""
    sizes = range(1, n + 1) if sizes is None else sizes
    return [
        IndexSet(n, c)
        for k in sizes
        for c in itertools.combinations(range(1, n + 1), k)
    ]


@dataclass(frozen=True)
class IntegerPointSet:
    """A finite set A of integer vectors of length ``dim``."""

    dim: int
    points: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.dim < 0:
            raise InputError(f"dimension must be nonnegative, got {self.dim}")
        pts = frozenset(tuple(int(c) for c in p) for p in self.points)
        for p in pts:
            if len(p) != self.dim:
                raise InputError(f"point {p} has length {len(p)}, expected {self.dim}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, dim: int, points: Iterable[Sequence[int]]) -> "IntegerPointSet":
        """Build from a list, rejecting duplicates (file semantics)."""
        seen: dict[Point, int] = {}
        for k, p in enumerate(points):
            q = tuple(int(c) for c in p)
            if q in seen:
                raise InputError(f"duplicate point {list(q)} at index {k} (first seen at index {seen[q]})")
            seen[q] = k
        return cls(dim, frozenset(seen))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(sorted(self.points))

    def __contains__(self, x) -> bool:
        return tuple(x) in self.points

    def sorted_points(self) -> list[Point]:
        return sorted(self.points)

    def bounds(self) -> tuple[Point, Point]:
        if not self.points:
            raise InputError("empty point set has no bounding box")
        arr = np.array(self.sorted_points(), dtype=np.int64).reshape(len(self), self.dim)
        return tuple(arr.min(0).tolist()), tuple(arr.max(0).tolist())

    def translate(self, v: Sequence[int]) -> "IntegerPointSet":
        return IntegerPointSet(self.dim, frozenset(tuple(a + b for a, b in zip(p, v)) for p in self.points))

    def permute(self, perm: Sequence[int]) -> "IntegerPointSet":
        """Coordinate relabeling: new coordinate j is old coordinate perm[j] (0-based)."""
        return IntegerPointSet(self.dim, frozenset(tuple(p[i] for i in perm) for p in self.points))

    def is_boolean(self) -> bool:
        return all(c in (0, 1) for p in self.points for c in p)


@dataclass(frozen=True)
class SignPattern:
    over: IndexSet
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) != len(self.over) or any(s not in (-1, 1) for s in self.signs):
            raise InputError("sign pattern must assign +-1 to every index")


@dataclass(frozen=True)
class IntegerBox:
    """prod_{i in over} {lo_i, hi_i} with lo_i < hi_i."""

    over: IndexSet
    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.over) or len(self.hi) != len(self.over):
            raise InputError("box bounds must be indexed by the index set")
        if any(a >= b for a, b in zip(self.lo, self.hi)):
            raise InputError(f"box needs lo < hi coordinatewise, got {self.lo}, {self.hi}")

    def corners(self) -> Iterator[Point]:
        return itertools.product(*zip(self.lo, self.hi))


@dataclass(frozen=True, order=True)
class IntegerCell:
    """The unit box prod_{i in over} {a_i, a_i + 1}."""

    over: IndexSet
    base: tuple[int, ...]

    def as_box(self) -> IntegerBox:
        return IntegerBox(self.over, self.base, tuple(a + 1 for a in self.base))

    def corners(self) -> Iterator[Point]:
        return itertools.product(*((a, a + 1) for a in self.base))


@dataclass(frozen=True)
class ShatterWitness:
    """Level h (indexed by ``indices``) at which A t-shatters ``indices``."""

    indices: IndexSet
    level: tuple[Fraction, ...]
    scale: Fraction

    def check(self, A: IntegerPointSet) -> bool:
        """Exhaustive partition loop."""
        pos = self.indices.positions
        for plus in itertools.product((False, True), repeat=len(pos)):
            if not any(
                all(
                    (x[p] >= h + self.scale) if up else (x[p] <= h)
                    for p, h, up in zip(pos, self.level, plus)
                )
                for x in A.points
            ):
                return False
        return True


def _check_index(A: IntegerPointSet, I: IndexSet) -> None:
    if I.ambient != A.dim:
        raise InputError(f"index set lives in dimension {I.ambient}, point set in {A.dim}")


def project(A: IntegerPointSet, I: IndexSet) -> IntegerPointSet:
    """P_I A, duplicates merged."""
    _check_index(A, I)
    if I.is_trivial:
        raise InputError("projection needs a nonempty index set")
    pos = I.positions
    return IntegerPointSet(len(pos), frozenset(tuple(x[p] for p in pos) for x in A.points))


def slice_set(A: IntegerPointSet, j: int, k: int) -> IntegerPointSet:
    """{x in A : x(j) = k}, kept in the ambient dimension (j is 1-based)."""
    if not 1 <= j <= A.dim:
        raise InputError(f"coordinate {j} outside 1..{A.dim}")
    return IntegerPointSet(A.dim, frozenset(x for x in A.points if x[j - 1] == k))


def cconv_contains(A: IntegerPointSet, x: Sequence[int]) -> bool:
    """Membership of x in the coordinate convex hull of A, by the sign-pattern loop."""
    x = tuple(x)
    if len(x) != A.dim:
        raise InputError(f"point of length {len(x)} tested against a set in dimension {A.dim}")
    n = A.dim
    # per point: which coordinates may take sign +1 (y >= x) and -1 (y <= x)
    masks = []
    for y in A.points:
        ge = sum(1 << i for i in range(n) if y[i] >= x[i])
        le = sum(1 << i for i in range(n) if y[i] <= x[i])
        masks.append((ge, le))
    full = (1 << n) - 1
    for plus in range(1 << n):
        minus = full & ~plus
        if not any(plus & ~ge == 0 and minus & ~le == 0 for ge, le in masks):
            return False
    return True


def _grid(A: IntegerPointSet) -> tuple[np.ndarray, Point]:
    lo, hi = A.bounds()
    shape = tuple(h - l + 1 for l, h in zip(lo, hi))
    g = np.zeros(shape, dtype=bool)
    idx = np.array(A.sorted_points(), dtype=np.int64) - np.array(lo, dtype=np.int64)
    g[tuple(idx.T)] = True
    return g, lo


def cconv_grid(A: IntegerPointSet) -> tuple[np.ndarray, Point]:
    """Indicator of cconv(A) ∩ Z^n on the bounding box of A, with its origin.

    For each orthant direction the dominated region is a suffix-OR along
    every axis; the hull is the intersection over directions.
    """
    g, lo = _grid(A)
    n = A.dim
    out = np.ones_like(g)
    for flips in itertools.product((False, True), repeat=n):
        axes = tuple(i for i in range(n) if flips[i])
        r = np.flip(g, axes) if axes else g
        for ax in range(n):
            r = np.flip(np.logical_or.accumulate(np.flip(r, ax), axis=ax), ax)
        out &= np.flip(r, axes) if axes else r
    return out, lo


def _cell_bases(inside: np.ndarray) -> np.ndarray:
    """Bases a (as grid offsets) whose cells prod{a_i, a_i+1} lie in ``inside``."""
    c = inside
    for ax in range(c.ndim):
        n_ax = c.shape[ax]
        if n_ax < 2:
            return np.zeros((0, c.ndim), dtype=np.int64)
        c = np.take(c, range(n_ax - 1), axis=ax) & np.take(c, range(1, n_ax), axis=ax)
    return np.argwhere(c)


def integer_cells_in_cconv(A: IntegerPointSet, I: IndexSet) -> set[IntegerCell]:
    """Integer cells of Z^I contained in cconv(P_I A)."""
    PA = project(A, I)
    if not PA.points:
        return set()
    inside, lo = cconv_grid(PA)
    return {IntegerCell(I, tuple(int(b + l) for b, l in zip(base, lo))) for base in _cell_bases(inside)}


def count_cells_in_cconv(A: IntegerPointSet, I: IndexSet) -> int:
    PA = project(A, I)
    if not PA.points:
        return 0
    inside, _ = cconv_grid(PA)
    return len(_cell_bases(inside))


def _count_boxes(points: set[Point]) -> int:
    if not points:
        return 0
    if len(next(iter(points))) == 0:
        return 1
    fibers: dict[int, set[Point]] = {}
    for p in points:
        fibers.setdefault(p[0], set()).add(p[1:])
    keys = sorted(fibers)
    total = 0
    for a, b in itertools.combinations(keys, 2):
        common = fibers[a] & fibers[b]
        if common:
            total += _count_boxes(common)
    return total


def _has_box(points: set[Point]) -> bool:
    if not points:
        return False
    if len(next(iter(points))) == 0:
        return True
    fibers: dict[int, set[Point]] = {}
    for p in points:
        fibers.setdefault(p[0], set()).add(p[1:])
    keys = sorted(fibers)
    return any(_has_box(fibers[a] & fibers[b]) for a, b in itertools.combinations(keys, 2))


def integer_boxes_in(B: IntegerPointSet, I: IndexSet) -> int:
    """Number of integer boxes over I all of whose corners lie in P_I B."""
    return _count_boxes(set(project(B, I).points))


def cell_content(A: IntegerPointSet) -> int:
    """Cells in cconv(P_I A) summed over all I, plus one for the trivial projection."""
    if not A.points:
        return 0
    return 1 + sum(count_cells_in_cconv(A, I) for I in index_sets(A.dim))


def box_content(A: IntegerPointSet) -> int:
    """Integer boxes in P_I A summed over all nonempty I (no trivial term)."""
    if not A.points:
        return 0
    return sum(integer_boxes_in(A, I) for I in index_sets(A.dim))


def _upward_closed_search(n: int, holds) -> list[IndexSet]:
    """All nonempty I with ``holds(I)`` for a property closed under taking subsets.

    Level-wise: a set is tried only when all its one-smaller subsets hold.
    Returned by cardinality then lexicographic.
    """
    found: list[IndexSet] = []
    level = [(i,) for i in range(1, n + 1)]
    while level:
        good = [c for c in level if holds(IndexSet(n, c))]
        found.extend(IndexSet(n, c) for c in good)
        good_set = set(good)
        nxt = []
        for c in good:
            for j in range(c[-1] + 1, n + 1):
                cand = c + (j,)
                if all(cand[:r] + cand[r + 1:] in good_set for r in range(len(cand))):
                    nxt.append(cand)
        level = nxt
    return found


def _require_boolean(A: IntegerPointSet) -> None:
    if not A.is_boolean():
        raise InputError("this operation needs a subset of {0,1}^n")


def shattered_sets(A: IntegerPointSet) -> list[IndexSet]:
    """Nonempty I with P_I A = {0,1}^I, for Boolean A."""
    _require_boolean(A)
    codes = [sum(1 << i for i, c in enumerate(p) if c) for p in A.points]

    def holds(I: IndexSet) -> bool:
        mask = sum(1 << p for p in I.positions)
        return len({c & mask for c in codes}) == 1 << len(I)

    return _upward_closed_search(A.dim, holds)


def vc_dimension(A: IntegerPointSet) -> int:
    found = shattered_sets(A)
    return max((len(I) for I in found), default=0)


def natarajan_dimension(A: IntegerPointSet) -> int:
    """Largest |I| such that P_I A contains an integer box."""
    if not A.points:
        return 0

    def holds(I: IndexSet) -> bool:
        return _has_box(set(project(A, I).points))

    return max((len(I) for I in _upward_closed_search(A.dim, holds)), default=0)


def _as_fraction(t) -> Fraction:
    try:
        return Fraction(t)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not a rational number: {t!r}") from exc


def shattering_level(A: IntegerPointSet, I: IndexSet, t) -> tuple[Fraction, ...] | None:
    """A level h at which A t-shatters I, or None.

    h ranges over the grid {x(i)} ∪ {x(i) - t} per coordinate, scanned in
    lexicographic order, so the witness is deterministic.
    """
    t = _as_fraction(t)
    if t <= 0:
        raise InputError("scale t must be positive")
    _check_index(A, I)
    if not A.points:
        return None
    k = len(I)
    q = t.denominator
    T = t.numerator
    X = np.array([[x[p] for p in I.positions] for x in A.sorted_points()], dtype=np.int64) * q
    cands = [np.unique(np.concatenate([X[:, j], X[:, j] - T])) for j in range(k)]
    weights = 1 << np.arange(k, dtype=np.int64)
    # a level that works needs both x <= h and x >= h + t attained per coordinate
    cands = [c[(c >= X[:, j].min()) & (c + T <= X[:, j].max())] for j, c in enumerate(cands)]
    if any(len(c) == 0 for c in cands):
        return None
    grids = np.meshgrid(*cands, indexing="ij")
    H = np.stack([g.ravel() for g in grids], axis=1)
    chunk = max(1, 2_000_000 // max(1, len(X) * k))
    for start in range(0, len(H), chunk):
        h = H[start:start + chunk]
        le = X[None, :, :] <= h[:, None, :]
        ge = X[None, :, :] >= h[:, None, :] + T
        valid = np.all(le | ge, axis=2)
        code = (ge * weights).sum(axis=2)
        served = np.zeros((len(h), 1 << k), dtype=bool)
        rows, cols = np.nonzero(valid)
        served[rows, code[rows, cols]] = True
        ok = np.nonzero(served.all(axis=1))[0]
        if len(ok):
            return tuple(Fraction(int(v), q) for v in h[ok[0]])
    return None


def shattering_dimension_discrete(A: IntegerPointSet, t) -> tuple[int, ShatterWitness | None]:
    """v(A, t): the largest |I| that A t-shatters, with a witness when positive."""
    t = _as_fraction(t)
    if t <= 0:
        raise InputError("scale t must be positive")
    levels: dict[IndexSet, tuple[Fraction, ...]] = {}

    def holds(I: IndexSet) -> bool:
        h = shattering_level(A, I, t)
        if h is not None:
            levels[I] = h
        return h is not None

    found = _upward_closed_search(A.dim, holds)
    if not found:
        return 0, None
    best = max(len(I) for I in found)
    I = next(I for I in found if len(I) == best)
    return best, ShatterWitness(I, levels[I], t)
