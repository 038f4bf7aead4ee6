"""
Tests for color refinement, individualization and the canonical color renaming.
"""

import numpy as np
import pytest
from conftest import circulant
from hypothesis import given, settings
from hypothesis import strategies as st

from circulant_canon.core import ConnectionSet, Digraph, cayley, iter_connection_sets, random_permutation, relabel
from circulant_canon.models.errors import InvalidInputError
from circulant_canon.refinement import (
    Coloring,
    color_refinement,
    dense_ranks,
    individualize,
    initial_coloring,
    refine,
    refine_round,
    round_colorings,
)
from circulant_canon.sampling import draw_connection_set, make_rng
from circulant_canon.walk import walk_matrix


@pytest.mark.parametrize(
    "x, individualized, colors",
    [
        (circulant(4, 1), [], (0, 0, 0, 0)),
        (circulant(5, 1, 4), [0], (0, 1, 1, 1, 1)),
        (circulant(5, 1, 4), [3, 1], (2, 1, 2, 0, 2)),
        (circulant(3, 1), [0, 1, 2], (0, 0, 0)),
        (Digraph.empty(1), [0], (0,)),
    ],
)
def test_initial_coloring(x, individualized, colors):
    assert initial_coloring(x, individualized).colors == colors


def test_initial_coloring_rejects_foreign_vertex():
    with pytest.raises(InvalidInputError):
        initial_coloring(circulant(3, 1), [3])


def test_regular_digraph_is_stable_immediately():
    rounds = round_colorings(circulant(6, 1, 2))
    assert len(rounds) == 1
    assert rounds[0].num_classes == 1
    assert rounds[0].stable


def test_one_round_on_directed_triangle(directed_triangle):
    c1 = refine_round(directed_triangle, initial_coloring(directed_triangle, [0]))
    assert c1.is_discrete
    # 2 -> 0 is an arc, 1 -> 2 is not: vertex 2 sees the individualized color
    assert c1.colors == (0, 2, 1)


def test_path_splits_endpoints_from_middle():
    path = Digraph.from_edges(3, [(0, 1), (1, 2)], directed=False)
    c = color_refinement(path)
    assert c.partition() == frozenset({frozenset({0, 2}), frozenset({1})})
    assert c.colors == (0, 1, 0)


@pytest.mark.parametrize(
    "x, individualized, classes",
    [
        (circulant(3, 1), [0], [(0,), (2,), (1,)]),
        (circulant(5, 1, 4), [0], [(0,), (1, 4), (2, 3)]),
        (circulant(6, 1, 5), [], [(0, 1, 2, 3, 4, 5)]),
    ],
)
def test_color_refinement(x, individualized, classes):
    assert color_refinement(x, individualized).classes() == classes


def test_round_colorings():
    triangle = round_colorings(circulant(3, 1), [0])
    assert [c.num_classes for c in triangle] == [2, 3]
    assert triangle[-1].stable
    complete = Digraph.complete(3)
    assert round_colorings(complete) == [initial_coloring(complete).model_copy(update={"stable": True})]
    square = round_colorings(circulant(4, 1, 3), [0])
    assert [c.partition() for c in square] == [
        frozenset({frozenset({0}), frozenset({1, 2, 3})}),
        frozenset({frozenset({0}), frozenset({1, 3}), frozenset({2})}),
    ]


def test_renaming_keeps_parent_order():
    c = color_refinement(circulant(5, 1, 4), [0])
    assert c.colors[0] == 0
    two = Digraph.from_edges(4, [(0, 1), (2, 3), (3, 2)])
    refined = refine_round(two, initial_coloring(two))
    # vertex 1 has no out-neighbors: the empty signature ranks first
    assert refined.colors == (1, 0, 1, 1)


def test_individualize():
    c = Coloring(n=4, colors=(1, 0, 1, 1))
    assert individualize(c, 2).colors == (2, 0, 1, 2)
    assert individualize(c, 1) == c


def test_refine_from_individualized_coloring(five_cycle):
    c = refine(five_cycle, individualize(color_refinement(five_cycle), 0))
    assert c.classes() == [(0,), (1, 4), (2, 3)]


def test_dense_ranks():
    keys = np.array([[1, 2], [0, 5], [1, 2], [1, 0]])
    assert dense_ranks(keys).tolist() == [2, 0, 2, 1]
    assert dense_ranks(np.zeros((0, 3), dtype=np.int64)).tolist() == []


def test_coloring_validation():
    with pytest.raises(ValueError):
        Coloring(n=3, colors=(0, 2, 2))
    with pytest.raises(ValueError):
        Coloring(n=2, colors=(0,))


def test_coloring_size_mismatch(directed_triangle):
    with pytest.raises(InvalidInputError):
        refine_round(directed_triangle, Coloring(n=2, colors=(0, 0)))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=1, max_value=14),
    st.integers(min_value=0, max_value=2**32),
    st.lists(st.integers(min_value=0, max_value=13), max_size=3),
)
def test_engines_agree(n, seed, individualized):
    rng = make_rng(seed, n)
    x = relabel(cayley(draw_connection_set(n, True, rng)), random_permutation(n, rng))
    chosen = [v % n for v in individualized]
    assert round_colorings(x, chosen, "vectorized") == round_colorings(x, chosen, "reference")


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=2**32))
def test_engines_agree_on_arbitrary_digraphs(n, seed):
    rng = np.random.default_rng(seed)
    adjacency = rng.random((n, n)) < 0.4
    np.fill_diagonal(adjacency, False)
    x = Digraph(adjacency)
    assert color_refinement(x, [], "vectorized") == color_refinement(x, [], "reference")


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=16), st.integers(min_value=0, max_value=2**32))
def test_stable_coloring_is_relabeling_invariant(n, seed):
    rng = make_rng(seed, n)
    x = cayley(draw_connection_set(n, True, rng))
    pi = random_permutation(n, rng)
    c = color_refinement(x, [0])
    d = color_refinement(relabel(x, pi), [pi(0)])
    assert all(d.colors[pi(v)] == c.colors[v] for v in range(n))


def _walks_separate_colors(x: Digraph) -> None:
    w = walk_matrix(x, [0]).entries
    rounds = round_colorings(x, [0])
    for k in range(x.n):
        c = rounds[min(k, len(rounds) - 1)]
        for u in range(x.n):
            for v in range(u + 1, x.n):
                if w[u][: k + 1] != w[v][: k + 1]:
                    assert c.colors[u] != c.colors[v], (k, u, v)


@pytest.mark.parametrize("n", range(2, 8))
def test_walk_counts_never_merge_colors_exhaustively(n):
    for s in iter_connection_sets(n):
        _walks_separate_colors(cayley(s))


@pytest.mark.parametrize("n", [10, 17, 24, 32])
def test_walk_counts_never_merge_colors_on_random_sets(n):
    for draw in range(10):
        _walks_separate_colors(cayley(draw_connection_set(n, draw % 2 == 0, make_rng(5, n, draw))))


def test_large_circulant_refines_quickly():
    s = draw_connection_set(600, True, make_rng(1, 600))
    c = color_refinement(cayley(s), [0])
    assert c.n == 600


@pytest.mark.parametrize("elements", [(1,), (1, 2), (2, 5, 7)])
def test_individualizing_vertex_zero_of_directed_cycle_is_discrete(elements):
    assert color_refinement(cayley(ConnectionSet(n=11, elements=elements)), [0]).is_discrete
