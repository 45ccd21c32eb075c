"""Exact linear programming over the rationals.

Dense two-phase primal simplex with Bland's rule. No tolerances: every
quantity is a :class:`fractions.Fraction`, and Bland's rule guarantees
termination on degenerate problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def _pivot(T: list[list[Fraction]], z: list[Fraction], basis: list[int], r: int, col: int) -> None:
    row = T[r]
    p = row[col]
    if p != 1:
        T[r] = row = [v / p for v in row]
    for i, other in enumerate(T):
        if i != r and other[col] != 0:
            f = other[col]
            T[i] = [a - f * b for a, b in zip(other, row)]
    if z[col] != 0:
        f = z[col]
        z[:] = [a - f * b for a, b in zip(z, row)]
    basis[r] = col


def _run(T, z, basis, allowed: int) -> str:
    """Maximize with reduced costs in ``z`` (entering when z[j] < 0)."""
    while True:
        col = next((j for j in range(allowed) if z[j] < 0), None)
        if col is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            a = row[col]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(T, z, basis, best[1], col)


def maximize(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: Sequence[int] = (),
) -> LPResult:
    """max c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x_j >= 0 unless j in ``free``."""
    nv = len(c)
    free = sorted(set(free))
    # column layout: original vars, negative parts of free vars, slacks, artificials
    cols_of = {j: [j] for j in range(nv)}
    for k, j in enumerate(free):
        cols_of[j].append(nv + k)
    ns = nv + len(free)

    def expand(row):
        out = [Fraction(0)] * ns
        for j in range(nv):
            v = Fraction(row[j])
            out[j] = v
            if len(cols_of[j]) == 2:
                out[cols_of[j][1]] = -v
        return out

    rows = [(expand(r), Fraction(b), True) for r, b in zip(A_ub, b_ub)]
    rows += [(expand(r), Fraction(b), False) for r, b in zip(A_eq, b_eq)]
    m = len(rows)
    n_slack = sum(1 for _, _, ub in rows if ub)
    width = ns + n_slack + m
    T: list[list[Fraction]] = []
    basis: list[int] = []
    s = 0
    for i, (r, b, ub) in enumerate(rows):
        line = r + [Fraction(0)] * (n_slack + m) + [b]
        if ub:
            line[ns + s] = Fraction(1)
            s_col = ns + s
            s += 1
        else:
            s_col = None
        if b < 0:
            line = [-v for v in line]
        if s_col is not None and line[s_col] == 1:
            basis.append(s_col)
        else:
            line[ns + n_slack + i] = Fraction(1)
            basis.append(ns + n_slack + i)
        T.append(line)

    art_start = ns + n_slack
    # phase 1: maximize -(sum of artificials)
    # z[j] are reduced costs, z[-1] the objective value
    z = [Fraction(0)] * art_start + [Fraction(1)] * m + [Fraction(0)]
    for i, bcol in enumerate(basis):
        if bcol >= art_start:
            z = [a - b for a, b in zip(z, T[i])]
        else:
            z[art_start + i] = Fraction(0)
    _run(T, z, basis, width)
    if z[-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis
    r = 0
    while r < len(T):
        if basis[r] >= art_start:
            col = next((j for j in range(art_start) if T[r][j] != 0), None)
            if col is None:
                del T[r]
                del basis[r]
                continue
            _pivot(T, [Fraction(0)] * (width + 1), basis, r, col)
        r += 1
    T = [row[:art_start] + [row[-1]] for row in T]

    cost = [Fraction(0)] * (art_start + 1)
    for j in range(nv):
        cj = Fraction(c[j])
        cost[j] = -cj
        if len(cols_of[j]) == 2:
            cost[cols_of[j][1]] = cj
    z = cost
    for i, bcol in enumerate(basis):
        if z[bcol] != 0:
            f = z[bcol]
            z = [a - f * b for a, b in zip(z, T[i])]
    status = _run(T, z, basis, art_start)
    if status != "optimal":
        return LPResult(status)
    val = [Fraction(0)] * art_start
    for i, bcol in enumerate(basis):
        val[bcol] = T[i][-1]
    x = tuple(sum((val[k] if k == cols_of[j][0] else -val[k]) for k in cols_of[j]) for j in range(nv))
    return LPResult("optimal", x, z[-1])


def minimize(c, *args, **kwargs) -> LPResult:
    res = maximize([-Fraction(v) for v in c], *args, **kwargs)
    if res.ok:
        return LPResult("optimal", res.x, -res.value)
    return res


def _solve_square(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan over the rationals; None when M is singular."""
    n = len(M)
    T = [list(row) + [r] for row, r in zip(M, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if T[i][col] != 0), None)
        if piv is None:
            return None
        T[col], T[piv] = T[piv], T[col]
        p = T[col][col]
        T[col] = [v / p for v in T[col]]
        for i in range(n):
            if i != col and T[i][col] != 0:
                f = T[i][col]
                T[i] = [a - f * b for a, b in zip(T[i], T[col])]
    return [row[-1] for row in T]


def _rank(rows: list[list[Fraction]]) -> int:
    T = [list(r) for r in rows]
    rank = 0
    ncols = len(T[0]) if T else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(T)) if T[i][col] != 0), None)
        if piv is None:
            continue
        T[rank], T[piv] = T[piv], T[rank]
        for i in range(rank + 1, len(T)):
            if T[i][col] != 0:
                f = T[i][col] / T[rank][col]
                T[i] = [a - f * b for a, b in zip(T[i], T[rank])]
        rank += 1
    return rank


def maximize_certified(c: Sequence, A_ub: Sequence[Sequence], b_ub: Sequence, free: Sequence[int] = ()) -> LPResult:
    """max c.x s.t. A_ub x <= b_ub (x_j >= 0 unless j in ``free``), exact.

    A floating-point solve proposes the optimal vertex; the answer is returned
    only after the vertex is recomputed in rationals and both primal and dual
    feasibility are verified exactly. Otherwise :func:`maximize` decides.
    """
    from scipy.optimize import linprog  # local: only this fast path needs scipy

    nv = len(c)
    free_set = set(free)
    rows = [[Fraction(v) for v in r] for r in A_ub]
    rhs = [Fraction(b) for b in b_ub]
    for j in range(nv):
        if j not in free_set:
            rows.append([Fraction(-int(i == j)) for i in range(nv)])
            rhs.append(Fraction(0))
    cf = [Fraction(v) for v in c]
    try:
        res = linprog(
            [-float(v) for v in cf],
            A_ub=[[float(v) for v in r] for r in rows],
            b_ub=[float(b) for b in rhs],
            bounds=[(None, None)] * nv,
            method="highs",
        )
    except ValueError:
        res = None
    if res is not None and res.status == 0:
        x_f = res.x
        marg = [-m for m in res.ineqlin.marginals]
        slack = [float(b) - sum(float(a) * xv for a, xv in zip(r, x_f)) for r, b in zip(rows, rhs)]
        order = sorted(range(len(rows)), key=lambda i: (-abs(marg[i]), abs(slack[i])))
        basis: list[int] = []
        for i in order:
            if abs(slack[i]) > 1e-7 * (1 + abs(float(rhs[i]))):
                continue
            if _rank([rows[j] for j in basis + [i]]) == len(basis) + 1:
                basis.append(i)
            if len(basis) == nv:
                break
        if len(basis) == nv:
            x = _solve_square([rows[i] for i in basis], [rhs[i] for i in basis])
            if x is not None and all(sum(a * xv for a, xv in zip(r, x)) <= b for r, b in zip(rows, rhs)):
                y = _solve_square([[rows[i][j] for i in basis] for j in range(nv)], cf)
                if y is not None and all(v >= 0 for v in y):
                    return LPResult("optimal", tuple(x), sum(a * b for a, b in zip(cf, x)))
    return maximize(c, A_ub, b_ub, free=free)
