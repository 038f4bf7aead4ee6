"""
Tests for 2-WL pair colorings, orbitals, Schurity and Cayley representations.
"""

import numpy as np
import pytest
from conftest import circulant

from circulant_canon.core import (
    ConnectionSet,
    Digraph,
    Permutation,
    cayley,
    iter_connection_sets,
    random_permutation,
    relabel,
)
from circulant_canon.models.errors import NotFirmError, OracleBoundExceededError
from circulant_canon.models.results import GiveUpReason
from circulant_canon.sampling import draw_connection_set, is_firm, isomorphism_classes, make_rng
from circulant_canon.wl2 import (
    OrbitalPartition,
    PairColoring,
    canonical_cayley_representation,
    cayley_representations,
    count_representation_classes,
    cycle_classes,
    is_schurian,
    orbital_partition,
    wl2_distinguishes,
    wl2_rounds,
    wl2_stable,
)


def difference_classes(n: int) -> frozenset:
    return frozenset(frozenset((x, (x + a) % n) for x in range(n)) for a in range(n))


def first_firm(n: int, undirected: bool) -> ConnectionSet:
    return next(s for s in iter_connection_sets(n, undirected) if s.size and is_firm(s))


def rook_graph() -> Digraph:
    cells = [(i, j) for i in range(4) for j in range(4)]
    edges = [
        (4 * a[0] + a[1], 4 * b[0] + b[1])
        for a in cells
        for b in cells
        if a != b and (a[0] == b[0] or a[1] == b[1])
    ]
    return Digraph.from_edges(16, edges)


def shrikhande_graph() -> Digraph:
    steps = {(0, 1), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)}
    edges = [
        (4 * i + j, 4 * ((i + di) % 4) + (j + dj) % 4)
        for i in range(4)
        for j in range(4)
        for di, dj in steps
    ]
    return Digraph.from_edges(16, edges)


@pytest.mark.parametrize("n", [3, 5, 8, 12])
def test_directed_cycle_has_the_difference_classes(n):
    stable = wl2_stable(circulant(n, 1))
    assert stable.num_classes == n
    assert stable.partition() == difference_classes(n)
    assert stable.stable


@pytest.mark.parametrize(
    "x, classes",
    [
        (Digraph.complete(3), 2),
        (Digraph.empty(4), 2),
        (Digraph.empty(1), 1),
        (circulant(5, 1, 4), 3),
        (circulant(6, 1, 5), 4),
    ],
)
def test_stable_class_counts(x, classes):
    assert wl2_stable(x).num_classes == classes


def test_rounds_are_numbered_and_end_stable():
    rounds = wl2_rounds(circulant(7, 1, 3))
    assert [pc.round for pc in rounds] == list(range(len(rounds)))
    assert rounds[-1].stable and not any(pc.stable for pc in rounds[:-1])
    assert [pc.num_classes for pc in rounds] == sorted(pc.num_classes for pc in rounds)


def test_initial_pair_colors_order_types():
    first = wl2_rounds(circulant(4, 1))[0]
    matrix = first.matrix()
    # nonarc/nonarc < nonarc/arc < arc/nonarc < loop
    assert matrix[0, 2] == 0
    assert matrix[1, 0] == 1
    assert matrix[0, 1] == 2
    assert matrix[0, 0] == 3


def test_stable_coloring_is_relabeling_invariant():
    x = cayley(draw_connection_set(10, True, make_rng(5, 10)))
    pi = random_permutation(10, np.random.default_rng(5))
    c = wl2_stable(x).matrix()
    d = wl2_stable(relabel(x, pi)).matrix()
    assert all(d[pi(u), pi(v)] == c[u, v] for u in range(10) for v in range(10))


@pytest.mark.parametrize(
    "x, parts",
    [
        (circulant(5, 1), 5),
        (circulant(5, 1, 4), 3),
        (Digraph.complete(3), 2),
        (circulant(6, 2, 4), 3),
    ],
)
def test_orbital_partition(x, parts):
    assert len(orbital_partition(x).parts) == parts


def test_orbital_partition_of_directed_cycle():
    assert orbital_partition(circulant(7, 1)).parts == difference_classes(7)


def test_orbital_partition_bound():
    with pytest.raises(OracleBoundExceededError):
        orbital_partition(circulant(13, 1))
    assert len(orbital_partition(circulant(13, 1), bound=13).parts) == 13
    with pytest.raises(OracleBoundExceededError):
        orbital_partition(circulant(3, 1), bound=0)


@pytest.mark.parametrize("x", [circulant(6, 1), Digraph.complete(4), circulant(5, 1, 4), circulant(7, 1, 2, 4)])
def test_is_schurian(x):
    assert is_schurian(x)


@pytest.mark.parametrize("n", range(3, 10))
def test_firm_circulant_digraphs_are_schurian(n):
    for s in iter_connection_sets(n):
        if is_firm(s):
            assert is_schurian(cayley(s)), s.format()


def test_cycle_classes_of_directed_five_cycle():
    found = cycle_classes(wl2_stable(circulant(5, 1)))
    assert len(found) == 4
    assert all(len(perms) == 1 and perms[0].is_full_cycle() for _, perms in found)
    assert {perms[0] for _, perms in found} == {Permutation.rotation(5, a) for a in range(1, 5)}


def test_cycle_classes_of_undirected_five_cycle(five_cycle):
    found = cycle_classes(wl2_stable(five_cycle))
    assert len(found) == 2
    for _, (forward, backward) in found:
        assert forward.inverse() == backward
        assert forward(0) < backward(0)


def test_no_cycle_classes_in_complete_graphs():
    assert cycle_classes(wl2_stable(Digraph.complete(3))) == []
    assert cycle_classes(wl2_stable(Digraph.complete(5))) == []


def test_undirected_cycle_classes_need_four_vertices():
    # the arc class of K3 is an undirected 3-cycle that cannot be oriented canonically
    assert cycle_classes(wl2_stable(circulant(3, 1, 2))) == []
    assert len(cycle_classes(wl2_stable(circulant(4, 1, 3)))) == 1


def test_canonical_cayley_representation_of_five_cycle(five_cycle):
    forms = set()
    for seed in range(6):
        y = relabel(five_cycle, random_permutation(5, np.random.default_rng(seed)))
        result = canonical_cayley_representation(y)
        assert result.succeeded
        assert result.canonical_form.circulant_connection_set() in {frozenset({1, 4}), frozenset({2, 3})}
        forms.add(result.canonical_form)
    assert len(forms) == 1


def test_canonical_cayley_representation_gives_up_on_complete_graph(complete_five):
    result = canonical_cayley_representation(complete_five)
    assert result.reason is GiveUpReason.NO_CYCLE_CLASS


@pytest.mark.parametrize("n, undirected", [(8, False), (9, False), (12, True), (16, False), (20, True), (24, False)])
def test_canonical_cayley_representation_of_firm_circulants(n, undirected):
    checked = 0
    for draw in range(12):
        s = draw_connection_set(n, not undirected, make_rng(13, n, draw))
        if not is_firm(s):
            continue
        x = cayley(s)
        result = canonical_cayley_representation(x)
        assert result.succeeded, s.format()
        assert result.canonical_form.circulant_connection_set() is not None
        for seed in range(4):
            other = canonical_cayley_representation(relabel(x, random_permutation(n, np.random.default_rng(seed))))
            assert other.canonical_form == result.canonical_form
        checked += 1
    assert checked > 0


def test_cayley_representations_are_circulant():
    x = cayley(first_firm(10, undirected=False))
    results = cayley_representations(x)
    assert results
    assert all(r.canonical_form.circulant_connection_set() is not None for r in results)


@pytest.mark.parametrize(
    "x, count",
    [
        (circulant(5, 1), 4),
        (circulant(7, 1), 6),
        (circulant(5, 1, 4), 2),
        (circulant(7, 1, 6), 3),
    ],
)
def test_count_representation_classes(x, count):
    assert count_representation_classes(x) == count


@pytest.mark.parametrize("undirected, count", [(False, 4), (True, 2)])
def test_count_representation_classes_at_twelve(undirected, count):
    assert count_representation_classes(cayley(first_firm(12, undirected))) == count


def test_count_representation_classes_requires_firm():
    with pytest.raises(NotFirmError) as excinfo:
        count_representation_classes(Digraph.complete(4))
    assert excinfo.value.group_order == 24


def test_count_representation_classes_bound():
    with pytest.raises(OracleBoundExceededError):
        count_representation_classes(circulant(13, 1))
    with pytest.raises(OracleBoundExceededError):
        count_representation_classes(circulant(3, 1), bound=0)


@pytest.mark.parametrize(
    "x, y, distinguished",
    [
        (circulant(6, 1, 5), circulant(6, 2, 4), True),
        (circulant(5, 1, 4), circulant(5, 2, 3), False),
        (circulant(4, 1), circulant(5, 1), True),
        (Digraph.empty(0), Digraph.empty(0), False),
    ],
)
def test_wl2_distinguishes(x, y, distinguished):
    assert wl2_distinguishes(x, y) is distinguished


def test_wl2_cannot_separate_strongly_regular_graphs_with_equal_parameters():
    rook, shrikhande = rook_graph(), shrikhande_graph()
    assert rook.edge_count == shrikhande.edge_count == 96
    assert not wl2_distinguishes(rook, shrikhande)


def test_pair_coloring_validation():
    with pytest.raises(ValueError):
        PairColoring(n=2, colors=((0, 1), (1,)))
    with pytest.raises(ValueError):
        PairColoring(n=2, colors=((0, 2), (2, 0)))
    with pytest.raises(ValueError):
        OrbitalPartition(n=2, parts=frozenset({frozenset({(0, 0), (1, 1)})}))


@pytest.mark.parametrize("n, undirected", [(5, False), (6, False), (7, False), (8, False), (8, True), (10, True)])
def test_wl2_identifies_firm_circulants(n, undirected):
    classes = isomorphism_classes(n, not undirected)
    for i, cls in enumerate(classes):
        if not is_firm(cls[0]):
            continue
        x = cayley(cls[0])
        for j, other in enumerate(classes):
            if j != i:
                assert wl2_distinguishes(x, cayley(other[0])), (cls[0].format(), other[0].format())


@pytest.mark.parametrize("undirected, count", [(False, 4), (True, 2)])
def test_cayley_representations_of_firm_circulants(undirected, count):
    x = cayley(first_firm(12, undirected))
    results = cayley_representations(x)
    assert len(results) == count == count_representation_classes(x)
