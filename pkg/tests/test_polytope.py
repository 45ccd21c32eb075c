import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from intcells import oracles
from intcells.errors import InputError, PreconditionError
from intcells.generators import random_hull
from intcells.lattice import IndexSet
from intcells.polytope import (
    CoordSubspace,
    RationalPolytope,
    box,
    contains_point,
    coord_subspaces,
    cross_polytope,
    cube,
    hull_of_union,
    in_hull_lp,
    intersection,
    polar,
    project_polytope,
    section,
    volume,
)

F = Fraction


def rational_points(dim, count):
    coord = st.fractions(min_value=-4, max_value=4, max_denominator=6)
    return st.lists(st.tuples(*[coord] * dim), min_size=count, max_size=count + 6)


# ---------------------------------------------------------------- construction


def test_interior_points_are_dropped():
    K = RationalPolytope(2, [(0, 0), (2, 0), (0, 2), (2, 2), (1, 1), (1, 0)])
    assert K.vertices == ((0, 0), (0, 2), (2, 0), (2, 2))
    assert len(K.facets) == 4


def test_lower_dimensional_hull_keeps_equalities():
    K = RationalPolytope(3, [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert K.affine_dim == 2 and not K.is_full_dim
    assert len(K.equalities) == 1


def test_bad_vertex_length_is_an_input_error():
    with pytest.raises(InputError):
        RationalPolytope(2, [(0, 0, 0)])


@pytest.mark.parametrize("seed", range(15))
def test_vertices_match_qhull(seed):
    n = 2 + seed % 3
    K = random_hull(n, n + 6, 3, seed=seed)
    pts = np.array([[float(c) for c in v] for v in K._raw], dtype=float)
    hull = ConvexHull(pts)
    assert len(K.vertices) == len(hull.vertices)


# ---------------------------------------------------------------- volume


def test_volume_examples():
    assert volume(cube(3, 0, 1)) == 1
    assert volume(cross_polytope(2, 2)) == 8
    assert volume(RationalPolytope(2, [(0, 0), (3, 0), (0, 3)])) == F(9, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_cross_polytope_volume(n):
    assert volume(cross_polytope(n)) == F(2**n, math.factorial(n))


def test_lower_dimensional_volume_is_zero():
    assert volume(RationalPolytope(3, [(0, 0, 0), (1, 0, 0), (0, 1, 0)])) == 0


@pytest.mark.parametrize("seed", range(20))
def test_volume_matches_qhull(seed):
    n = 2 + seed % 4
    K = random_hull(n, n + 5, 3, seed=100 + seed)
    pts = np.array([[float(c) for c in v] for v in K.vertices], dtype=float)
    assert float(volume(K)) == pytest.approx(ConvexHull(pts).volume, rel=1e-9)


@pytest.mark.parametrize("seed", range(4))
def test_volume_inside_monte_carlo_interval(seed):
    K = random_hull(3, 8, 2, seed=200 + seed)
    est = oracles.mc_volume(K, samples=200_000, seed=seed)
    assert est.brackets(volume(K)) or abs(est.value - float(volume(K))) <= 2 * est.half_width_95


def test_mc_volume_of_unit_cube():
    est = oracles.mc_volume(cube(3, 0, 1))
    assert est.brackets(1)


@settings(max_examples=40, deadline=None)
@given(rational_points(2, 3), st.fractions(min_value=F(1, 3), max_value=3, max_denominator=5))
def test_volume_scales_by_power(pts, s):
    K = RationalPolytope(2, pts)
    assert volume(K.scaled(s)) == s**2 * volume(K)


@settings(max_examples=40, deadline=None)
@given(rational_points(3, 4), st.tuples(*[st.integers(-3, 3)] * 3))
def test_volume_translation_invariant(pts, v):
    K = RationalPolytope(3, pts)
    assert volume(K.translated(v)) == volume(K)


# ---------------------------------------------------------------- membership


def test_contains_point_examples():
    K = random_hull(3, 9, 2, seed=5)
    c = K.centroid_of_vertices()
    assert contains_point(K, c)
    assert all(contains_point(K, v) for v in K.vertices)
    f = K.facets[0]
    v = next(v for v in K.vertices if f.slack(v) == 0)
    outside = tuple(x + F(1, 1000) * a for x, a in zip(v, f.normal))
    assert not contains_point(K, outside)


@settings(max_examples=60, deadline=None)
@given(rational_points(3, 5), st.tuples(*[st.fractions(min_value=-5, max_value=5, max_denominator=4)] * 3))
def test_h_rep_membership_agrees_with_lp(pts, x):
    K = RationalPolytope(3, pts)
    assert contains_point(K, x) == in_hull_lp(K, x)


# ---------------------------------------------------------------- projection and section


def test_projection_of_cube():
    assert project_polytope(cube(3, 0, 1), IndexSet.of(3, [1, 2])) == cube(2, 0, 1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_axis_sections_of_cross_polytope(n):
    K = cross_polytope(n, n)
    for i in range(1, n + 1):
        S = section(K, CoordSubspace(n, IndexSet.of(n, [i])))
        assert S.vertices == ((-n,), (n,))


def test_section_missing_the_body_is_empty():
    K = cube(2, 1, 2)
    assert section(K, CoordSubspace(2, IndexSet.of(2, [1]))).is_empty


@pytest.mark.parametrize("seed", range(8))
def test_section_vertices_lie_in_the_body(seed):
    K = random_hull(4, 9, 2, seed=300 + seed, symmetric=True)
    for E in coord_subspaces(4, [1, 2]):
        for v in section(K, E).vertices:
            x = [F(0)] * 4
            for p, c in zip(E.kept.positions, v):
                x[p] = c
            assert contains_point(K, x)


def test_coord_subspaces_ordering():
    Es = coord_subspaces(3, [1, 2])
    assert [tuple(E.kept) for E in Es] == [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]


# ---------------------------------------------------------------- polarity


def test_polar_examples():
    assert polar(cross_polytope(2)) == cube(2)
    for n in (2, 3, 4):
        assert polar(cube(n)) == cross_polytope(n)


def test_polar_needs_interior_origin():
    with pytest.raises(PreconditionError):
        polar(cube(2, 0, 1))


@pytest.mark.parametrize("seed", range(15))
def test_bipolar_round_trip(seed):
    n = 2 + seed % 3
    K = random_hull(n, n + 3, 2, seed=400 + seed, symmetric=True)
    assert polar(polar(K)) == K


def test_polar_reverses_inclusion():
    K, Q = cube(3), cube(3, -2, 2)
    Kp, Qp = polar(K), polar(Q)
    assert all(contains_point(Kp, v) for v in Qp.vertices)


# ---------------------------------------------------------------- hull and intersection


def test_hull_and_intersection():
    C = cube(3, 0, 1)
    assert hull_of_union(C, C) == C
    small, big = cube(2, F(-1, 2), F(1, 2)), cube(2)
    assert intersection(small, big) == small
    assert hull_of_union(small, big) == big


@pytest.mark.parametrize("n", [2, 3])
def test_cube_meets_scaled_cross_polytope(n):
    K = intersection(cube(n), cross_polytope(n, F(3, 2)))
    assert K.is_symmetric()
    assert len(K.facets) <= 2 * n + 2**n
    assert all(contains_point(cube(n), v) and contains_point(cross_polytope(n, F(3, 2)), v) for v in K.vertices)


def test_box_constructor():
    K = box((0, -1), (2, 1))
    assert volume(K) == 4
    assert K.bounding_box() == ((0, -1), (2, 1))


def test_symmetric_random_hull_is_symmetric():
    for seed in range(5):
        K = random_hull(3, 5, 2, seed=seed, symmetric=True)
        assert K.is_symmetric()
        assert set(K.vertices) == {tuple(-c for c in v) for v in K.vertices}


def test_scaled_matches_pointwise_scaling():
    K = random_hull(2, 6, 2, seed=1)
    s = F(5, 3)
    assert K.scaled(s) == RationalPolytope(2, [tuple(s * c for c in v) for v in K.vertices])


def test_translates_are_full_dimensional():
    rng = random.Random(0)
    K = random_hull(3, 7, 2, seed=2)
    for _ in range(5):
        v = [F(rng.randint(-8, 8), 4) for _ in range(3)]
        assert K.translated(v).is_full_dim


def test_cube_vertices_are_all_sign_vectors():
    assert set(cube(3).vertices) == set(itertools.product((-1, 1), repeat=3))
