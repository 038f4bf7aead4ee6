"""
Brute-force oracles for small orders: automorphisms, isomorphisms and canonical forms.

Automorphisms and isomorphisms are found by individualization-refinement backtracking:
the next vertex of ``x`` is taken from its first non-singleton color class, and its
candidate images are the vertices of ``y`` carrying the same canonical color after
refinement. The canonical form does not use refinement at all, so it can serve as an
independent ground truth for the canonizers.
"""

from collections.abc import Iterator
from logging import getLogger

import numpy as np

from circulant_canon.core import Digraph, Labeling, Permutation, is_isomorphism, relabel
from circulant_canon.models.errors import OracleBoundExceededError
from circulant_canon.models.settings import get_settings
from circulant_canon.refinement import Coloring, color_refinement

logger = getLogger(__name__)


def _check_bound(operation: str, n: int, bound: int) -> None:
    if n > bound:
        raise OracleBoundExceededError(operation, n, bound)


def _first_open_class(c: Coloring) -> int:
    sizes = np.bincount(c.colors, minlength=c.num_classes)
    return int(np.flatnonzero(sizes > 1)[0])


def _isomorphisms(
    x: Digraph, y: Digraph, prefix_x: list[int], prefix_y: list[int]
) -> Iterator[Permutation]:
    """Every isomorphism x -> y mapping prefix_x[i] to prefix_y[i]."""
    cx = color_refinement(x, prefix_x)
    cy = color_refinement(y, prefix_y)
    if cx.num_classes != cy.num_classes or not np.array_equal(
        np.bincount(cx.colors, minlength=cx.num_classes),
        np.bincount(cy.colors, minlength=cy.num_classes),
    ):
        return
    if cx.is_discrete:
        position = [0] * y.n
        for w, color in enumerate(cy.colors):
            position[color] = w
        pi = Permutation(position[color] for color in cx.colors)
        if is_isomorphism(x, y, pi):
            yield pi
        return
    target = _first_open_class(cx)
    v = cx.colors.index(target)
    for w in (w for w, color in enumerate(cy.colors) if color == target):
        yield from _isomorphisms(x, y, prefix_x + [v], prefix_y + [w])


def iter_automorphisms(x: Digraph) -> Iterator[Permutation]:
    """Lazily enumerate Aut(x); unbounded, callers decide how far to go."""
    return _isomorphisms(x, x, [], [])


def brute_automorphisms(x: Digraph, bound: int | None = None) -> list[Permutation]:
    """The full automorphism group of ``x``."""
    _check_bound("brute_automorphisms", x.n, bound or get_settings().aut_oracle_bound)
    group = list(iter_automorphisms(x))
    logger.debug(f"|Aut| = {len(group)} for {x!r}")
    return group


def find_isomorphism(x: Digraph, y: Digraph) -> Permutation | None:
    """Some isomorphism from x to y, or None when they are not isomorphic."""
    if x.n != y.n or x.edge_count != y.edge_count:
        return None
    return next(_isomorphisms(x, y, [], []), None)


def automorphism_generators(x: Digraph) -> tuple[list[Permutation], int]:
    """
    A strong generating set of Aut(x) together with |Aut(x)|.

    Walks down a stabilizer chain: at each level the orbit of the chosen vertex under
    the pointwise stabilizer of the previous choices is found by one existence search
    per candidate, and each witness joins the generators. The order is the product of
    the orbit lengths, so groups such as Sym(n) are measured without being listed.
    """
    order = 1
    generators: list[Permutation] = []
    prefix: list[int] = []
    while True:
        c = color_refinement(x, prefix)
        if c.is_discrete:
            return generators, order
        target = _first_open_class(c)
        cell = [w for w, color in enumerate(c.colors) if color == target]
        v = cell[0]
        orbit = 1
        for w in cell[1:]:
            witness = next(_isomorphisms(x, x, prefix + [v], prefix + [w]), None)
            if witness is not None:
                orbit += 1
                generators.append(witness)
        order *= orbit
        prefix.append(v)


def automorphism_group_order(x: Digraph) -> int:
    """|Aut(x)| by the orbit-stabilizer product."""
    return automorphism_generators(x)[1]


def _twins(rows: list[list[int]], n: int) -> list[list[bool]]:
    """twins[u][w]: the transposition (u w) is an automorphism."""
    twins = [[False] * n for _ in range(n)]
    for u in range(n):
        for w in range(u + 1, n):
            if rows[u][w] != rows[w][u]:
                continue
            if all(
                rows[u][z] == rows[w][z] and rows[z][u] == rows[z][w]
                for z in range(n)
                if z != u and z != w
            ):
                twins[u][w] = twins[w][u] = True
    return twins


def brute_canonical_form(x: Digraph, bound: int | None = None) -> Digraph:
    """
    The least relabeled adjacency matrix over all permutations.

    Matrices are compared reading row k up to the diagonal and then column k above it,
    for k = 0, 1, ..., so every prefix is fixed once the first labels are placed. The
    search prunes branches whose prefix already exceeds the best one, and tries only
    one vertex of each set of twins per level.
    """
    n = x.n
    _check_bound("brute_canonical_form", n, bound or get_settings().canon_oracle_bound)
    rows = x.adjacency.astype(int).tolist()
    twins = _twins(rows, n)
    best: list[int] | None = None
    best_order: list[int] = []

    def descend(order: list[int], sequence: list[int], used: list[bool]) -> None:
        nonlocal best, best_order
        if len(order) == n:
            if best is None or sequence < best:
                best, best_order = sequence, order
            return
        tried: list[int] = []
        for v in range(n):
            if used[v] or any(twins[v][t] for t in tried):
                continue
            tried.append(v)
            block = [rows[v][u] for u in order] + [0] + [rows[u][v] for u in order]
            extended = sequence + block
            if best is not None and extended > best[: len(extended)]:
                continue
            used[v] = True
            descend(order + [v], extended, used)
            used[v] = False

    descend([], [], [False] * n)
    labels = [0] * n
    for label, v in enumerate(best_order):
        labels[v] = label
    return relabel(x, Labeling(labels))
