"""
Canonical labeling of circulants by color refinement with individualization.

``canonize_digraph`` and ``canonize_graph`` individualize vertex 0 without trying the
others, which loses nothing on vertex-transitive inputs such as circulants; on other
inputs their output need not be canonical. ``canonize_full`` tries every vertex and
keeps the lexicographically least relabeled matrix, so it is canonical on any input
where it succeeds. A give-up is an ordinary result, never an exception, and happens
for all isomorphic inputs alike.
"""

from logging import getLogger

import numpy as np

from circulant_canon.core import Digraph, Labeling
from circulant_canon.models.errors import InvalidInputError
from circulant_canon.models.results import CanonMode, CanonResult, GiveUpReason
from circulant_canon.refinement import Coloring, color_refinement, individualize, refine
from circulant_canon.walk import walk_matrix

logger = getLogger(__name__)


def _require_symmetric(x: Digraph, operation: str) -> None:
    if not x.is_symmetric:
        raise InvalidInputError("adjacency is not symmetric", operation)


def _least_pair_class(c: Coloring) -> tuple[int, int] | None:
    """The two vertices of the least color whose class has exactly two members."""
    sizes = np.bincount(c.colors, minlength=c.num_classes)
    pairs = np.flatnonzero(sizes == 2)
    if pairs.size == 0:
        return None
    members = [x for x, color in enumerate(c.colors) if color == pairs[0]]
    return members[0], members[1]


def _pair_labels(first: Coloring, second: Coloring) -> Labeling | None:
    keys = list(zip(first.colors, second.colors))
    if len(set(keys)) != len(keys):
        return None
    return Labeling.from_keys(keys)


def canonize_digraph(x: Digraph) -> CanonResult:
    """Individualize vertex 0 and refine; a discrete stable coloring is the labeling."""
    if x.n == 0:
        return CanonResult.success(x, Labeling([]))
    c = color_refinement(x, [0])
    if not c.is_discrete:
        logger.debug(f"{x!r}: {c.num_classes} classes after refinement, giving up")
        return CanonResult.give_up(GiveUpReason.NOT_DISCRETE)
    return CanonResult.success(x, Labeling(c.colors))


def canonize_graph(x: Digraph, pair_index: int = 0) -> CanonResult:
    """
    The two-pass labeling for circulant graphs.

    Refine with vertex 0 individualized (C), pick the least color class with exactly
    two vertices, individualize one of them, u, alone (C'), and label every vertex by
    the pair (C(x), C'(x)). ``pair_index`` selects u within its class: 0 takes the
    smaller vertex, 1 the larger. Gives up when no class has two vertices or when the
    pairs are not pairwise distinct. A discrete C is used as the labeling directly.
    """
    _require_symmetric(x, "canonize_graph")
    if x.n == 0:
        return CanonResult.success(x, Labeling([]))
    c = color_refinement(x, [0])
    if c.is_discrete:
        return CanonResult.success(x, Labeling(c.colors))
    pair = _least_pair_class(c)
    if pair is None:
        return CanonResult.give_up(GiveUpReason.NO_PAIR_CLASS)
    u = pair[pair_index]
    labeling = _pair_labels(c, color_refinement(x, [u]))
    if labeling is None:
        return CanonResult.give_up(GiveUpReason.LABELS_NOT_DISTINCT)
    return CanonResult.success(x, labeling)


def _candidates(x: Digraph, v: int) -> list[Labeling]:
    c = color_refinement(x, [v])
    if c.is_discrete:
        return [Labeling(c.colors)]
    if not x.is_symmetric:
        return []
    pair = _least_pair_class(c)
    if pair is None:
        return []
    found = []
    for u in pair:
        labeling = _pair_labels(c, color_refinement(x, [u]))
        if labeling is not None:
            found.append(labeling)
    return found


def canonize_full(x: Digraph) -> CanonResult:
    """
    Try every individualized vertex (and, for graphs, both second vertices) and return
    the candidate whose relabeled adjacency matrix is lexicographically least in
    row-major order.
    """
    if x.n == 0:
        return CanonResult.success(x, Labeling([]))
    best: CanonResult | None = None
    for v in range(x.n):
        for labeling in _candidates(x, v):
            candidate = CanonResult.success(x, labeling)
            if best is None or candidate.canonical_form.packed < best.canonical_form.packed:
                best = candidate
    if best is None:
        return CanonResult.give_up(GiveUpReason.NO_DISCRETE_CANDIDATE)
    return best


def naive_canonize(x: Digraph, tie_break_seed: int = 0) -> CanonResult:
    """
    Refine; while the coloring is not discrete, individualize a vertex chosen by the
    seed from the least-colored class with more than one vertex, and refine again.
    Always produces a labeling.
    """
    rng = np.random.default_rng(tie_break_seed)
    c = color_refinement(x)
    steps = 0
    while not c.is_discrete:
        sizes = np.bincount(c.colors, minlength=c.num_classes)
        target = int(np.flatnonzero(sizes > 1)[0])
        cell = [v for v, color in enumerate(c.colors) if color == target]
        v = cell[int(rng.integers(len(cell)))]
        c = refine(x, individualize(c, v))
        steps += 1
    logger.debug(f"{x!r}: discrete after {steps} individualizations")
    return CanonResult.success(x, Labeling(c.colors))


def canonize_by_walks(x: Digraph) -> CanonResult:
    """
    Label vertices by their walk counts to an individualized vertex.

    Digraphs: rank of the row W_0(x). Graphs: the least row value shared by exactly two
    vertices picks u (the smaller one), and x is labeled by (W_0(x), W_u(x)). Gives up
    when the rows, or the row pairs, are not pairwise distinct.
    """
    if x.n == 0:
        return CanonResult.success(x, Labeling([]))
    rows = walk_matrix(x, [0]).entries
    if len(set(rows)) == x.n:
        return CanonResult.success(x, Labeling.from_keys(rows))
    if not x.is_symmetric:
        return CanonResult.give_up(GiveUpReason.NOT_DISCRETE)
    groups: dict[tuple[int, ...], list[int]] = {}
    for v, row in enumerate(rows):
        groups.setdefault(row, []).append(v)
    pairs = sorted(row for row, members in groups.items() if len(members) == 2)
    if not pairs:
        return CanonResult.give_up(GiveUpReason.NO_PAIR_CLASS)
    u = groups[pairs[0]][0]
    keys = list(zip(rows, walk_matrix(x, [u]).entries))
    if len(set(keys)) != x.n:
        return CanonResult.give_up(GiveUpReason.LABELS_NOT_DISTINCT)
    return CanonResult.success(x, Labeling.from_keys(keys))


def canonize(x: Digraph, mode: CanonMode = "full", seed: int = 0) -> CanonResult:
    """Dispatch to the canonizer named by ``mode``."""
    if mode == "digraph":
        return canonize_digraph(x)
    if mode == "graph":
        return canonize_graph(x)
    if mode == "full":
        return canonize_full(x)
    if mode == "naive":
        return naive_canonize(x, seed)
    if mode == "walk":
        return canonize_by_walks(x)
    raise InvalidInputError(f"unknown canonization mode {mode!r}", "canonize")
