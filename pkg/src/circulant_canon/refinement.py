"""
Color refinement (1-WL) with vertex individualization.

One round recolors every vertex by its old color together with the multiset of the
colors of its out-neighbors. New colors are renamed canonically after every round:
the distinct keys ``(old color, ascending neighbor colors)`` are sorted (shorter
sequence first when one is a prefix of the other) and numbered 0, 1, 2, ... in that
order. Because the order only depends on the keys, the renamed colors are invariant
under relabeling of the input, and the classes keep the order of their parents.

Two engines implement the same round: a numpy engine, which sorts the masked color
matrix row-wise and ranks rows with ``np.lexsort``, and a plain-Python reference
engine used for differential testing. Both produce identical color ids.
"""

from collections.abc import Sequence
from logging import getLogger
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from circulant_canon.core import Digraph
from circulant_canon.models.errors import InvalidInputError
from circulant_canon.models.settings import get_settings

logger = getLogger(__name__)

Engine = Literal["vectorized", "reference"]


class Coloring(BaseModel):
    """A vertex coloring with canonical color ids 0..k-1."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    colors: tuple[int, ...]
    round: int = Field(default=0, ge=0, description="Refinement round that produced the coloring.")
    stable: bool = Field(default=False, description="True once a further round leaves the partition unchanged.")

    @model_validator(mode="after")
    def _check_prefix(self):
        if len(self.colors) != self.n:
            raise ValueError(f"expected {self.n} colors, got {len(self.colors)}")
        if self.n and set(self.colors) != set(range(max(self.colors) + 1)):
            raise ValueError("color ids must form a contiguous prefix of the non-negative integers")
        return self

    @property
    def num_classes(self) -> int:
        return max(self.colors) + 1 if self.n else 0

    @property
    def is_discrete(self) -> bool:
        return self.num_classes == self.n

    def classes(self) -> list[tuple[int, ...]]:
        """Color classes indexed by color id, vertices ascending."""
        members: list[list[int]] = [[] for _ in range(self.num_classes)]
        for x, c in enumerate(self.colors):
            members[c].append(x)
        return [tuple(m) for m in members]

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c) for c in self.classes())


def dense_ranks(keys: np.ndarray) -> np.ndarray:
    """Dense ranks of the rows of ``keys`` in lexicographic row order."""
    if keys.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.lexsort(keys.T[::-1])
    ordered = keys[order]
    steps = np.any(ordered[1:] != ordered[:-1], axis=1)
    ranks = np.empty(keys.shape[0], dtype=np.int64)
    ranks[order] = np.concatenate(([0], np.cumsum(steps)))
    return ranks


def _vectorized_round(g: Digraph, colors: Sequence[int]) -> list[int]:
    n = g.n
    current = np.asarray(colors, dtype=np.int32)
    # absent neighbors sort last as n, then become -1 so a shorter signature ranks first
    masked = np.where(g.adjacency, current[None, :], np.int32(n))
    masked.sort(axis=1)
    masked[masked == n] = -1
    keys = np.concatenate([current[:, None], masked], axis=1)
    return dense_ranks(keys).tolist()


def _reference_round(g: Digraph, colors: Sequence[int]) -> list[int]:
    keys = [
        (colors[x], tuple(sorted(colors[y] for y in g.out_neighbors(x))))
        for x in range(g.n)
    ]
    renaming = {key: i for i, key in enumerate(sorted(set(keys)))}
    return [renaming[key] for key in keys]


_ENGINES = {"vectorized": _vectorized_round, "reference": _reference_round}


def initial_coloring(g: Digraph, individualized: Sequence[int] = ()) -> Coloring:
    """
    C_0: individualized vertices get the reserved colors 0, 1, ... in input order and
    every other vertex shares the next color.

    Individualizing the whole vertex set of a graph with more than one vertex
    distinguishes nothing and yields the monochromatic coloring.
    """
    order = list(dict.fromkeys(int(v) for v in individualized))
    for v in order:
        if not 0 <= v < g.n:
            raise InvalidInputError(f"vertex {v} is not in 0..{g.n - 1}", "individualized")
    if g.n > 1 and len(order) == g.n:
        order = []
    colors = [len(order)] * g.n
    for i, v in enumerate(order):
        colors[v] = i
    return Coloring(n=g.n, colors=colors)


def refine_round(g: Digraph, c: Coloring, engine: Engine | None = None) -> Coloring:
    """One refinement round followed by canonical renaming."""
    if c.n != g.n:
        raise InvalidInputError(f"coloring of {c.n} vertices for a graph of {g.n}", "coloring")
    step = _ENGINES[engine or get_settings().refinement_engine]
    colors = step(g, c.colors)
    new = Coloring(n=g.n, colors=colors, round=c.round + 1)
    if new.num_classes == c.num_classes:
        new = new.model_copy(update={"stable": True})
    logger.debug(f"round {new.round}: {c.num_classes} -> {new.num_classes} classes")
    return new


def _iterate(g: Digraph, start: Coloring, engine: Engine | None) -> list[Coloring]:
    sequence = [start]
    current = start
    while True:
        if current.is_discrete:
            break
        following = refine_round(g, current, engine)
        if following.stable:
            break
        sequence.append(following)
        current = following
    sequence[-1] = current.model_copy(update={"stable": True})
    return sequence


def round_colorings(
    g: Digraph, individualized: Sequence[int] = (), engine: Engine | None = None
) -> list[Coloring]:
    """The colorings C_0, C_1, ... up to the first stable one, which is marked stable."""
    return _iterate(g, initial_coloring(g, individualized), engine)


def color_refinement(
    g: Digraph, individualized: Sequence[int] = (), engine: Engine | None = None
) -> Coloring:
    """The stable coloring of ``g`` with the given vertices individualized."""
    return _iterate(g, initial_coloring(g, individualized), engine)[-1]


def refine(g: Digraph, c: Coloring, engine: Engine | None = None) -> Coloring:
    """The stable coloring reached from an arbitrary starting coloring."""
    return _iterate(g, c.model_copy(update={"stable": False}), engine)[-1]


def individualize(c: Coloring, v: int) -> Coloring:
    """Split ``v`` off its class; ``v`` takes the lower of the two resulting ids."""
    keys = np.array([(color, int(x != v)) for x, color in enumerate(c.colors)], dtype=np.int64)
    return Coloring(n=c.n, colors=dense_ranks(keys).tolist(), round=c.round)
