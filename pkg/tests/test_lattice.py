import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intcells import oracles
from intcells.errors import InputError
from intcells.generators import box_random, diagonal, full_grid
from intcells.lattice import (
    IndexSet,
    IntegerPointSet,
    box_content,
    cconv_contains,
    cell_content,
    count_cells_in_cconv,
    integer_boxes_in,
    integer_cells_in_cconv,
    natarajan_dimension,
    project,
    shattered_sets,
    shattering_dimension_discrete,
    slice_set,
    vc_dimension,
)


def P(*pts):
    return IntegerPointSet.from_points(len(pts[0]), pts)


def cube01(n):
    return IntegerPointSet.from_points(n, itertools.product((0, 1), repeat=n))


def test_index_set_is_one_based_and_sorted():
    I = IndexSet.of(4, [3, 1])
    assert tuple(I) == (1, 3)
    assert I.positions == (0, 2)
    assert I.complement() == (2, 4)
    with pytest.raises(InputError):
        IndexSet.of(3, [4])
    assert IndexSet.trivial(3).is_trivial


def test_from_points_rejects_duplicates_and_bad_lengths():
    with pytest.raises(InputError):
        IntegerPointSet.from_points(2, [(0, 1), (0, 1)])
    with pytest.raises(InputError):
        IntegerPointSet.from_points(2, [(0, 1, 2)])


# ---------------------------------------------------------------- projection


def test_project_merges_duplicates():
    assert project(P((0, 1), (1, 1)), IndexSet.of(2, [2])).sorted_points() == [(1,)]


def test_project_boolean_square():
    assert project(cube01(2), IndexSet.of(2, [1])).sorted_points() == [(0,), (1,)]


def test_project_random_points_bounded():
    A = box_random(3, 4, 0.4, seed=3)
    B = project(A, IndexSet.of(3, [1, 3]))
    assert len(B) <= 25
    assert set(B.points) == {(x[0], x[2]) for x in A.points}


# ---------------------------------------------------------------- coordinate convexity


def test_cconv_examples():
    assert not cconv_contains(P((0, 1), (1, 0)), (0, 0))
    # the pattern (+, -) needs y1 >= 1 and y2 <= 1, which neither point offers
    assert not cconv_contains(P((0, 0), (2, 2)), (1, 1))
    assert cconv_contains(P((0, 0), (2, 0), (0, 2), (2, 2)), (1, 1))
    A = box_random(3, 4, 0.3, seed=11)
    assert all(cconv_contains(A, x) for x in A.points)


def test_cconv_matches_oracle_on_the_spec_examples():
    cases = [(P((0, 1), (1, 0)), (0, 0)), (P((0, 0), (2, 2)), (1, 1)), (P((0, 0), (2, 2)), (0, 0))]
    for A, x in cases:
        assert cconv_contains(A, x) == oracles.oracle_cconv(A, x)


def test_cconv_agrees_with_oracle_on_random_trials():
    rng = random.Random(0)
    for trial in range(10_000):
        n = 1 + trial % 3
        pts = {tuple(rng.randint(0, 4) for _ in range(n)) for _ in range(rng.randint(1, 6))}
        A = IntegerPointSet.from_points(n, pts)
        x = tuple(rng.randint(-1, 5) for _ in range(n))
        assert cconv_contains(A, x) == oracles.oracle_cconv(A, x)


def test_cconv_far_outside_is_false():
    assert not cconv_contains(P((0, 0), (2, 2)), (100, -100))


# ---------------------------------------------------------------- cells and boxes


def test_cells_examples():
    assert {c.base for c in integer_cells_in_cconv(cube01(2), IndexSet.full(2))} == {(0, 0)}
    assert count_cells_in_cconv(full_grid(2, 3), IndexSet.full(2)) == 9
    assert count_cells_in_cconv(P((0, 0), (2, 2)), IndexSet.full(2)) == 0
    assert count_cells_in_cconv(P((0, 0), (2, 0), (0, 2), (2, 2)), IndexSet.full(2)) == 4


def test_cells_agree_with_oracle():
    for seed in range(60):
        A = box_random(1 + seed % 3, 3, 0.3, seed=seed)
        assert count_cells_in_cconv(A, IndexSet.full(A.dim)) == oracles.oracle_cconv_cells(A)


def test_boxes_examples():
    assert integer_boxes_in(full_grid(2, 3), IndexSet.full(2)) == 36
    assert integer_boxes_in(P((1, 2)), IndexSet.full(2)) == 0
    assert integer_boxes_in(cube01(3), IndexSet.of(3, [1, 2])) == 1


def test_cell_content_examples():
    assert cell_content(IntegerPointSet(2, frozenset())) == 0
    assert cell_content(P((3, 4))) == 1
    assert cell_content(cube01(2)) == 4


def test_box_content_examples():
    assert box_content(cube01(2)) == 3
    assert box_content(P((3, 4))) == 0
    assert box_content(full_grid(2, 3)) == 48


# ---------------------------------------------------------------- slices


def test_slice_examples():
    A = cube01(2)
    assert slice_set(A, 1, 0).sorted_points() == [(0, 0), (0, 1)]
    assert len(slice_set(A, 1, 7)) == 0


def test_slices_partition():
    A = box_random(3, 4, 0.5, seed=5)
    for j in (1, 2, 3):
        parts = [slice_set(A, j, k).points for k in range(0, 5)]
        assert sum(len(p) for p in parts) == len(A)
        assert frozenset().union(*parts) == A.points


# ---------------------------------------------------------------- dimensions


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_vc_of_full_cube(n):
    assert vc_dimension(cube01(n)) == n
    assert natarajan_dimension(cube01(n)) == n


def test_vc_examples():
    assert vc_dimension(P((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0))) == 1
    assert vc_dimension(P((1, 0, 1))) == 0


def test_vc_needs_boolean_input():
    with pytest.raises(InputError):
        vc_dimension(P((0, 2)))


def test_natarajan_examples():
    assert natarajan_dimension(full_grid(2, 3)) == 2
    assert natarajan_dimension(diagonal(3, 4)) == 1


def test_shattered_sets_are_downward_closed():
    # the empty index set is left implicit
    A = box_random(4, 1, 0.6, seed=2)
    sh = set(shattered_sets(A))
    for I in sh:
        for r in range(1, len(I)):
            for J in itertools.combinations(tuple(I), r):
                assert IndexSet(4, J) in sh


def test_shattering_dimension_examples():
    for n in (1, 2, 3):
        v, wit = shattering_dimension_discrete(cube01(n), 1)
        assert v == n and wit.check(cube01(n))
        assert shattering_dimension_discrete(cube01(n), 2)[0] == 0


def test_shattering_dimension_matches_grid_oracle():
    rng = random.Random(1)
    for i in range(200):
        n = 1 + i % 3
        pts = {tuple(rng.randint(0, 5) for _ in range(n)) for _ in range(rng.randint(2, 30))}
        A = IntegerPointSet.from_points(n, pts)
        t = Fraction(rng.choice([1, 2, 3, 2]), rng.choice([1, 1, 2]))
        v, wit = shattering_dimension_discrete(A, t)
        assert v == oracles.grid_shatter_search(A, t, Fraction(1, 4)), (i, t)
        if v:
            assert wit.check(A)


def test_shattering_above_range_is_zero():
    assert shattering_dimension_discrete(full_grid(2, 3), 4)[0] == 0


def test_grid_oracle_refuses_coarse_grids():
    with pytest.raises(ValueError):
        oracles.grid_shatter_search(cube01(2), Fraction(1), Fraction(2, 3))


def test_shattering_scale_rule():
    A = box_random(2, 4, 0.5, seed=9)
    B = IntegerPointSet.from_points(2, [(2 * a, 2 * b) for a, b in A.points])
    for t in (1, 2, 3):
        assert shattering_dimension_discrete(A, t)[0] == shattering_dimension_discrete(B, 2 * t)[0]


# ---------------------------------------------------------------- properties


small_sets = st.integers(1, 3).flatmap(
    lambda n: st.sets(st.tuples(*[st.integers(0, 3)] * n), min_size=1, max_size=12).map(
        lambda pts: IntegerPointSet.from_points(len(next(iter(pts))), pts)
    )
)


@settings(max_examples=80, deadline=None)
@given(small_sets, st.data())
def test_monotone_under_inclusion(A, data):
    extra = data.draw(st.sets(st.tuples(*[st.integers(0, 3)] * A.dim), max_size=5))
    B = IntegerPointSet.from_points(A.dim, set(A.points) | extra)
    assert cell_content(A) <= cell_content(B)
    assert box_content(A) <= box_content(B)
    assert natarajan_dimension(A) <= natarajan_dimension(B)
    assert shattering_dimension_discrete(A, 1)[0] <= shattering_dimension_discrete(B, 1)[0]
    x = data.draw(st.tuples(*[st.integers(-1, 4)] * A.dim))
    if cconv_contains(A, x):
        assert cconv_contains(B, x)


@settings(max_examples=80, deadline=None)
@given(small_sets, st.data())
def test_invariant_under_translation_and_permutation(A, data):
    v = data.draw(st.tuples(*[st.integers(-5, 5)] * A.dim))
    perm = data.draw(st.permutations(range(A.dim)))
    for B in (A.translate(v), A.permute(perm)):
        assert cell_content(B) == cell_content(A)
        assert box_content(B) == box_content(A)
        assert natarajan_dimension(B) == natarajan_dimension(A)


@settings(max_examples=80, deadline=None)
@given(small_sets)
def test_counting_bounds(A):
    assert len(A) <= cell_content(A)
    assert len(A) <= 1 + box_content(A)
