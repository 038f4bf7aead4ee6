"""
Two-dimensional Weisfeiler-Leman refinement, orbitals and Cayley representations.

Pair colors start from ``(type(uv), type(vu))`` with types nonarc < arc < loop, and a
round recolors ``uv`` by its old color together with the multiset of
``(c(uw), c(wv))`` over all w. Each round renames colors by the same rule as vertex
refinement: keys sorted by old color, then by the sorted signature. The n^3 array of
color pairs is built with numpy; an edge pair ``(a, b)`` is encoded as ``a * k + b``
where k is the current number of colors.
"""

from logging import getLogger

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from circulant_canon.core import Digraph, Labeling, Permutation, is_isomorphism
from circulant_canon.models.errors import NotFirmError, OracleBoundExceededError
from circulant_canon.models.results import CanonResult, GiveUpReason
from circulant_canon.models.settings import get_settings
from circulant_canon.oracles import automorphism_generators, brute_automorphisms
from circulant_canon.refinement import dense_ranks

logger = getLogger(__name__)

Pair = tuple[int, int]

_NONARC, _ARC, _LOOP = 0, 1, 2


class PairColoring(BaseModel):
    """A coloring of the ordered vertex pairs with canonical ids 0..k-1."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    colors: tuple[tuple[int, ...], ...]
    round: int = Field(default=0, ge=0)
    stable: bool = False

    @model_validator(mode="after")
    def _check_shape(self):
        if len(self.colors) != self.n or any(len(row) != self.n for row in self.colors):
            raise ValueError(f"expected an {self.n}x{self.n} color matrix")
        used = {c for row in self.colors for c in row}
        if used and used != set(range(max(used) + 1)):
            raise ValueError("color ids must form a contiguous prefix of the non-negative integers")
        return self

    @property
    def num_classes(self) -> int:
        return max((max(row) for row in self.colors), default=-1) + 1

    def matrix(self) -> np.ndarray:
        return np.array(self.colors, dtype=np.int64).reshape(self.n, self.n)

    def classes(self) -> list[list[Pair]]:
        """Pairs of every color, indexed by color id, in row-major order."""
        members: list[list[Pair]] = [[] for _ in range(self.num_classes)]
        for u, row in enumerate(self.colors):
            for v, c in enumerate(row):
                members[c].append((u, v))
        return members

    def partition(self) -> frozenset[frozenset[Pair]]:
        return frozenset(frozenset(c) for c in self.classes())


class OrbitalPartition(BaseModel):
    """The orbits of Aut(x) on ordered vertex pairs."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    parts: frozenset[frozenset[Pair]]

    @model_validator(mode="after")
    def _check_cover(self):
        total = sum(len(part) for part in self.parts)
        covered = set().union(*self.parts) if self.parts else set()
        if total != self.n * self.n or len(covered) != total:
            raise ValueError("orbitals must be disjoint and cover every ordered pair")
        return self


def _initial_keys(x: Digraph) -> np.ndarray:
    types = np.where(x.adjacency, _ARC, _NONARC)
    np.fill_diagonal(types, _LOOP)
    return np.stack([types.ravel(), types.T.ravel()], axis=1)


def _round_keys(colors: np.ndarray, k: int) -> np.ndarray:
    n = colors.shape[0]
    # signature[u, v, w] encodes (c(uw), c(wv))
    signature = colors[:, None, :] * k + colors.T[None, :, :]
    signature.sort(axis=2)
    return np.concatenate([colors.reshape(n * n, 1), signature.reshape(n * n, n)], axis=1)


def _as_coloring(colors: np.ndarray, round_index: int, stable: bool = False) -> PairColoring:
    return PairColoring(
        n=colors.shape[0],
        colors=tuple(tuple(row) for row in colors.tolist()),
        round=round_index,
        stable=stable,
    )


def wl2_rounds(x: Digraph) -> list[PairColoring]:
    """c^0, c^1, ... up to the first stable pair coloring, which is marked stable."""
    n = x.n
    if n == 0:
        return [PairColoring(n=0, colors=(), stable=True)]
    colors = dense_ranks(_initial_keys(x)).reshape(n, n)
    k = int(colors.max()) + 1
    sequence = [_as_coloring(colors, 0)]
    while True:
        refined = dense_ranks(_round_keys(colors, k)).reshape(n, n)
        refined_k = int(refined.max()) + 1
        logger.debug(f"2-WL round {len(sequence)}: {k} -> {refined_k} classes")
        if refined_k == k:
            break
        colors, k = refined, refined_k
        sequence.append(_as_coloring(colors, len(sequence)))
    sequence[-1] = sequence[-1].model_copy(update={"stable": True})
    return sequence


def wl2_stable(x: Digraph) -> PairColoring:
    """The stable 2-WL pair coloring WL(x)."""
    return wl2_rounds(x)[-1]


def wl2_distinguishes(x: Digraph, y: Digraph) -> bool:
    """
    Run 2-WL on both inputs in lockstep with one shared renaming; true iff the color
    histograms differ in some round.
    """
    if x.n != y.n:
        return True
    n = x.n
    if n == 0:
        return False
    cells = n * n
    joint = dense_ranks(np.concatenate([_initial_keys(x), _initial_keys(y)]))
    k = int(joint.max()) + 1
    while True:
        cx, cy = joint[:cells].reshape(n, n), joint[cells:].reshape(n, n)
        if not np.array_equal(np.bincount(cx.ravel(), minlength=k), np.bincount(cy.ravel(), minlength=k)):
            return True
        joint = dense_ranks(np.concatenate([_round_keys(cx, k), _round_keys(cy, k)]))
        refined_k = int(joint.max()) + 1
        if refined_k == k:
            return False
        k = refined_k


def _orbit_parts(n: int, generators: list[Permutation]) -> frozenset[frozenset[Pair]]:
    parent = list(range(n * n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in generators:
        images = g.images
        for u in range(n):
            for v in range(n):
                a, b = find(u * n + v), find(images[u] * n + images[v])
                if a != b:
                    parent[max(a, b)] = min(a, b)
    parts: dict[int, set[Pair]] = {}
    for cell in range(n * n):
        parts.setdefault(find(cell), set()).add(divmod(cell, n))
    return frozenset(frozenset(part) for part in parts.values())


def orbital_partition(x: Digraph, bound: int | None = None) -> OrbitalPartition:
    """Orbits of Aut(x) on V x V, from a generating set of the group."""
    limit = bound if bound is not None else get_settings().aut_oracle_bound
    if x.n > limit:
        raise OracleBoundExceededError("orbital_partition", x.n, limit)
    generators, _ = automorphism_generators(x)
    return OrbitalPartition(n=x.n, parts=_orbit_parts(x.n, generators))


def is_schurian(x: Digraph, bound: int | None = None) -> bool:
    """WL(x) equals the orbital partition of Aut(x), ignoring color names."""
    return wl2_stable(x).partition() == orbital_partition(x, bound).parts


def _successor_cycle(n: int, pairs: list[Pair]) -> list[int] | None:
    successor: dict[int, int] = {}
    indegree = [0] * n
    for u, v in pairs:
        if u in successor:
            return None
        successor[u] = v
        indegree[v] += 1
    if len(successor) != n or any(d != 1 for d in indegree):
        return None
    order = [0]
    while len(order) < n:
        nxt = successor[order[-1]]
        if nxt == 0:
            return None
        order.append(nxt)
    return order if successor[order[-1]] == 0 else None


def _undirected_cycle(n: int, pairs: list[Pair]) -> list[int] | None:
    if n < 4 or len(pairs) != 2 * n:
        return None
    members = set(pairs)
    neighbors: dict[int, list[int]] = {}
    for u, v in pairs:
        if (v, u) not in members:
            return None
        neighbors.setdefault(u, []).append(v)
    if len(neighbors) != n or any(len(ns) != 2 for ns in neighbors.values()):
        return None
    order = [0, min(neighbors[0])]
    while len(order) < n:
        a, b = neighbors[order[-1]]
        nxt = b if a == order[-2] else a
        if nxt == 0:
            return None
        order.append(nxt)
    return order if 0 in neighbors[order[-1]] else None


def cycle_classes(pc: PairColoring) -> list[tuple[int, tuple[Permutation, ...]]]:
    """
    The color classes that form a single directed n-cycle (one cyclic permutation) or,
    for n >= 4, a single undirected n-cycle (the two traversal directions, the first
    one leaving vertex 0 toward its smaller neighbor), ordered by color id.
    """
    found = []
    for color, pairs in enumerate(pc.classes()):
        cycle = _successor_cycle(pc.n, pairs)
        if cycle is not None:
            found.append((color, (Permutation.from_cycle(cycle),)))
            continue
        cycle = _undirected_cycle(pc.n, pairs)
        if cycle is not None:
            forward = Permutation.from_cycle(cycle)
            found.append((color, (forward, forward.inverse())))
    return found


def _representation(x: Digraph, sigma: Permutation) -> CanonResult:
    if not is_isomorphism(x, x, sigma):
        return CanonResult.give_up(GiveUpReason.NOT_AUTOMORPHISM)
    labels = [0] * x.n
    v = 0
    for i in range(x.n):
        labels[v] = i
        v = sigma(v)
    return CanonResult.success(x, Labeling(labels))


def canonical_cayley_representation(x: Digraph) -> CanonResult:
    """
    Relabel ``x`` as a Cayley (di)graph of Z_n along the cycle class of least color.

    The cycle is followed from vertex 0 and must be an automorphism of ``x``; vertex
    x_i of the cycle receives label i, so a successful output always has circulant
    adjacency.
    """
    classes = cycle_classes(wl2_stable(x))
    if not classes:
        return CanonResult.give_up(GiveUpReason.NO_CYCLE_CLASS)
    color, permutations = classes[0]
    result = _representation(x, permutations[0])
    logger.debug(f"{x!r}: cycle class {color} -> {result.outcome}")
    return result


def cayley_representations(x: Digraph) -> list[CanonResult]:
    """One verified Cayley representation per cycle class of WL(x)."""
    results = []
    for _, permutations in cycle_classes(wl2_stable(x)):
        result = _representation(x, permutations[0])
        if result.succeeded:
            results.append(result)
    return results


def count_representation_classes(x: Digraph, bound: int | None = None) -> int:
    """
    Equivalence classes of Cayley representations of a firm circulant: the n-cycles of
    Aut(x), with a cycle and its inverse counted once for graphs.
    """
    limit = bound if bound is not None else get_settings().aut_oracle_bound
    if x.n > limit:
        raise OracleBoundExceededError("count_representation_classes", x.n, limit)
    _, order = automorphism_generators(x)
    expected = x.n if not x.is_symmetric or x.n <= 2 else 2 * x.n
    if order != expected:
        raise NotFirmError(x.n, order)
    cycles = [g for g in brute_automorphisms(x, limit) if g.is_full_cycle()]
    if not x.is_symmetric:
        return len(cycles)
    return len({frozenset((g, g.inverse())) for g in cycles})
