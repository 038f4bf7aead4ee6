"""
Graph and connection-set representations for circulants.

A circulant digraph ``cay(Z_n, S)`` has the vertex set ``{0, ..., n-1}`` and an arc
``(x, y)`` whenever ``y - x mod n`` lies in the connection set ``S``. Graphs are the
digraphs whose adjacency is symmetric, i.e. the circulants with ``S = -S``.
"""

from collections.abc import Iterable, Iterator, Sequence
from functools import cached_property
from itertools import combinations
from logging import getLogger
from math import gcd

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from circulant_canon.models.errors import GraphFormatError, InvalidInputError, SizeMismatchError

logger = getLogger(__name__)


class Permutation:
    """
    A permutation of ``{0, ..., n-1}`` stored as the tuple of images.

    Composition follows function notation: ``(p * q)(x) == p(q(x))``.
    """

    __slots__ = ("_images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise InvalidInputError("images do not form a bijection", "permutation")
        self._images = images

    @classmethod
    def identity(cls, n: int):
        return cls(range(n))

    @classmethod
    def rotation(cls, n: int, a: int):
        """sigma_a: x -> x + a."""
        return cls((x + a) % n for x in range(n))

    @classmethod
    def multiplier(cls, n: int, k: int):
        """mu_k: x -> k x, defined for units k of Z_n."""
        if gcd(k, n) != 1:
            raise InvalidInputError(f"{k} is not a unit modulo {n}", "multiplier")
        return cls((k * x) % n for x in range(n))

    @classmethod
    def negation(cls, n: int):
        """rho: x -> -x."""
        return cls((-x) % n for x in range(n))

    @classmethod
    def from_cycle(cls, cycle: Sequence[int]):
        """The cyclic permutation ``(x_0 x_1 ... x_{n-1})`` on all of its entries."""
        images = [0] * len(cycle)
        for i, x in enumerate(cycle):
            images[x] = cycle[(i + 1) % len(cycle)]
        return cls(images)

    @property
    def images(self) -> tuple[int, ...]:
        return self._images

    @property
    def n(self) -> int:
        return len(self._images)

    def __call__(self, x: int) -> int:
        return self._images[x]

    def __getitem__(self, x: int) -> int:
        return self._images[x]

    def __len__(self) -> int:
        return len(self._images)

    def __iter__(self) -> Iterator[int]:
        return iter(self._images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.n != self.n:
            raise SizeMismatchError(self.n, other.n, "permutation composition")
        return type(self)(self._images[x] for x in other._images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for x, y in enumerate(self._images):
            inv[y] = x
        return type(self)(inv)

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its smallest element, ordered by that element."""
        seen = [False] * self.n
        result = []
        for start in range(self.n):
            if seen[start]:
                continue
            cycle = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x)
                x = self._images[x]
            result.append(tuple(cycle))
        return result

    def is_full_cycle(self) -> bool:
        """True if the permutation is a single cycle through all n points."""
        return self.n > 0 and len(self.cycles()) == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._images == other._images

    def __hash__(self) -> int:
        return hash(self._images)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self._images)})"


class Labeling(Permutation):
    """A bijective vertex labeling: vertex ``x`` receives the label ``labeling(x)``."""

    __slots__ = ()

    @classmethod
    def from_keys(cls, keys: Sequence) -> "Labeling":
        """Label vertices by the rank of their keys; keys must be pairwise distinct."""
        order = sorted(range(len(keys)), key=lambda x: keys[x])
        labels = [0] * len(keys)
        for rank, x in enumerate(order):
            labels[x] = rank
        return cls(labels)


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """A uniformly random permutation drawn from ``rng``."""
    return Permutation(rng.permutation(n).tolist())


class Digraph:
    """
    A loopless digraph on ``{0, ..., n-1}`` with a dense boolean adjacency matrix.

    Row ``x`` of the matrix is the out-neighborhood ``N(x)``. Instances are immutable:
    the matrix is stored read-only and every derived quantity is cached.
    """

    def __init__(self, adjacency):
        adj = np.array(adjacency, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InvalidInputError(f"adjacency must be square, got shape {adj.shape}", "digraph")
        if adj.diagonal().any():
            raise InvalidInputError("loops are not allowed", "digraph")
        adj.setflags(write=False)
        self._adj = adj

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], directed: bool = True) -> "Digraph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"edge ({u}, {v}) leaves the vertex range 0..{n - 1}", "digraph")
            adj[u, v] = True
            if not directed:
                adj[v, u] = True
        return cls(adj)

    @classmethod
    def empty(cls, n: int) -> "Digraph":
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def complete(cls, n: int) -> "Digraph":
        return cls(~np.eye(n, dtype=bool))

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    @cached_property
    def is_symmetric(self) -> bool:
        return bool((self._adj == self._adj.T).all())

    @cached_property
    def neighbor_lists(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(np.flatnonzero(row).tolist()) for row in self._adj)

    def out_neighbors(self, x: int) -> tuple[int, ...]:
        return self.neighbor_lists[x]

    @property
    def edge_count(self) -> int:
        return int(self._adj.sum())

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, v in zip(*np.nonzero(self._adj)):
            yield int(u), int(v)

    @cached_property
    def packed(self) -> bytes:
        """Row-major adjacency bits; byte comparison is the lexicographic order of the matrix."""
        return np.packbits(self._adj, axis=None).tobytes()

    def digest(self) -> str:
        """Hex string of the row-major adjacency bits."""
        return self.packed.hex()

    def circulant_connection_set(self) -> frozenset[int] | None:
        """
        The connection set ``S`` if every row is the cyclic shift of row 0, else None.
        """
        row0 = self._adj[0] if self.n else np.zeros(0, dtype=bool)
        for x in range(1, self.n):
            if not np.array_equal(self._adj[x], np.roll(row0, x)):
                return None
        return frozenset(np.flatnonzero(row0).tolist())

    def to_text(self) -> str:
        """Serialize to the ``n <n> directed|undirected`` text format."""
        kind = "undirected" if self.is_symmetric else "directed"
        lines = [f"n {self.n} {kind}"]
        for u, v in self.edges():
            if kind == "directed" or u < v:
                lines.append(f"{u} {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, source: str = "<text>") -> "Digraph":
        """Parse the ``n <n> directed|undirected`` text format; '#' starts a comment."""
        lines = [
            (number, line.split("#", 1)[0].strip())
            for number, line in enumerate(text.splitlines(), start=1)
        ]
        lines = [(number, line) for number, line in lines if line]
        if not lines:
            raise GraphFormatError("empty graph description", source)
        number, header = lines[0]
        parts = header.split()
        if len(parts) != 3 or parts[0] != "n" or parts[2] not in ("directed", "undirected"):
            raise GraphFormatError(f"bad header {header!r}", source, number)
        try:
            n = int(parts[1])
        except ValueError:
            raise GraphFormatError(f"bad order {parts[1]!r}", source, number)
        directed = parts[2] == "directed"
        adj = np.zeros((n, n), dtype=bool)
        for number, line in lines[1:]:
            fields = line.split()
            if len(fields) != 2:
                raise GraphFormatError(f"expected 'u v', got {line!r}", source, number)
            try:
                u, v = int(fields[0]), int(fields[1])
            except ValueError:
                raise GraphFormatError(f"non-integer vertex in {line!r}", source, number)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"vertex out of range in {line!r}", source, number)
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}", source, number)
            adj[u, v] = True
            if not directed:
                adj[v, u] = True
        return cls(adj)

    def __eq__(self, other) -> bool:
        return isinstance(other, Digraph) and self.n == other.n and self.packed == other.packed

    def __hash__(self) -> int:
        return hash((self.n, self.packed))

    def __repr__(self) -> str:
        kind = "graph" if self.is_symmetric else "digraph"
        return f"Digraph(n={self.n}, {kind}, edges={self.edge_count})"


class ConnectionSet(BaseModel):
    """
    A connection set ``S`` of ``Z_n \\ {0}``.

    ``undirected`` flags an inverse-closed set used to generate a graph; the flag is
    validated, so a flagged set always satisfies ``s in S <=> n - s in S``.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, description="Order of the cyclic group.")
    elements: tuple[int, ...] = Field(default=(), description="Residues in 1..n-1, ascending.")
    undirected: bool = Field(default=False, description="Flag for an inverse-closed set.")

    @field_validator("elements", mode="before")
    @classmethod
    def _sort_elements(cls, value):
        return tuple(sorted(set(int(s) for s in value)))

    @model_validator(mode="after")
    def _check_residues(self):
        for s in self.elements:
            if not 0 < s < self.n:
                raise ValueError(f"element {s} is not a non-zero residue modulo {self.n}")
        if self.undirected and not self.is_inverse_closed:
            raise ValueError(f"{self.format()} is flagged undirected but is not inverse-closed")
        return self

    @property
    def is_inverse_closed(self) -> bool:
        members = set(self.elements)
        return all((self.n - s) % self.n in members for s in members)

    @property
    def size(self) -> int:
        return len(self.elements)

    def contains(self, s: int) -> bool:
        return s % self.n in self.elements

    def negation(self) -> "ConnectionSet":
        """-S."""
        return ConnectionSet(n=self.n, elements=[(-s) % self.n for s in self.elements], undirected=self.undirected)

    def scaled(self, k: int) -> "ConnectionSet":
        """kS; a bijection on connection sets when k is a unit."""
        return ConnectionSet(n=self.n, elements=[(k * s) % self.n for s in self.elements], undirected=self.undirected)

    def indicator(self) -> np.ndarray:
        """The characteristic vector chi_S as a 0/1 integer array."""
        chi = np.zeros(self.n, dtype=np.int64)
        chi[list(self.elements)] = 1
        return chi

    def format(self) -> str:
        return f"{self.n}: " + ",".join(str(s) for s in self.elements)

    @classmethod
    def parse(cls, text: str, undirected: bool = False) -> "ConnectionSet":
        """Parse ``"<n>: s1,s2,...,sk"``."""
        head, sep, tail = text.partition(":")
        if not sep:
            raise ValueError(f"expected '<n>: s1,s2,...', got {text!r}")
        n = int(head.strip())
        elements = [int(part) for part in tail.replace(" ", "").split(",") if part]
        return cls(n=n, elements=elements, undirected=undirected)


def units(n: int) -> list[int]:
    """The multiplicative group Z_n^x, ascending."""
    return [k for k in range(n) if gcd(k, n) == 1]


def inverse_pairs(n: int) -> list[tuple[int, ...]]:
    """The orbits {j, n-j} of negation on Z_n \\ {0}; the singleton (n/2,) when n is even."""
    pairs = [(j, n - j) for j in range(1, (n + 1) // 2)]
    if n % 2 == 0 and n > 1:
        pairs.append((n // 2,))
    return pairs


def iter_connection_sets(n: int, undirected: bool = False) -> Iterator[ConnectionSet]:
    """Every connection set of order n (inverse-closed ones when ``undirected``)."""
    blocks = inverse_pairs(n) if undirected else [(s,) for s in range(1, n)]
    for size in range(len(blocks) + 1):
        for chosen in combinations(blocks, size):
            yield ConnectionSet(n=n, elements=[s for block in chosen for s in block], undirected=undirected)


def cayley(s: ConnectionSet) -> Digraph:
    """The Cayley digraph cay(Z_n, S): arc (x, y) iff y - x mod n is in S."""
    n = s.n
    chi = s.indicator().astype(bool)
    idx = np.arange(n)
    differences = (idx[None, :] - idx[:, None]) % n
    return Digraph(chi[differences])


def relabel(x: Digraph, labeling: Permutation) -> Digraph:
    """The relabeled digraph: (labeling(u), labeling(v)) is an arc iff (u, v) is one."""
    if labeling.n != x.n:
        raise SizeMismatchError(x.n, labeling.n, "relabel")
    inv = np.array(labeling.inverse().images, dtype=np.intp)
    if x.n == 0:
        return x
    return Digraph(x.adjacency[np.ix_(inv, inv)])


def is_isomorphism(x: Digraph, y: Digraph, pi: Permutation) -> bool:
    """True iff ``pi`` maps x onto y arc for arc."""
    if x.n != y.n or pi.n != x.n:
        return False
    return relabel(x, pi) == y
