"""
Random circulants and the exhaustive class computations behind the exact samplers.

Three models are provided: Cayley circulants (a uniformly random connection set),
unlabeled circulants (a uniformly random isomorphism class) and labeled circulants (a
uniformly random graph on {0..n-1} isomorphic to a circulant). The latter two are exact
rejection samplers on top of the Cayley one and need the isomorphism classes of all
connection sets of the order, so they are limited to small n.

Every draw is a pure function of ``(seed, n, draw index)``: the generator is seeded from
``SeedSequence(seed, spawn_key=(n, draw))``.
"""

from functools import lru_cache
from logging import getLogger
from math import factorial

import numpy as np

from circulant_canon.core import (
    ConnectionSet,
    Digraph,
    cayley,
    inverse_pairs,
    iter_connection_sets,
    random_permutation,
    relabel,
    units,
)
from circulant_canon.models.errors import EnumerationBoundExceededError, InvalidInputError
from circulant_canon.models.results import CensusReport, SampleModel
from circulant_canon.models.settings import get_settings
from circulant_canon.oracles import automorphism_group_order, find_isomorphism
from circulant_canon.spectral import spectrum_key

logger = getLogger(__name__)


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """An independent generator for every key under one seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _check_sampler_bound(operation: str, n: int, directed: bool) -> None:
    settings = get_settings()
    bound = settings.sampler_bound_directed if directed else settings.sampler_bound_undirected
    if n > bound:
        raise EnumerationBoundExceededError(operation, n, bound)


def draw_connection_set(n: int, directed: bool, rng: np.random.Generator) -> ConnectionSet:
    """
    Digraphs: each of 1..n-1 joins S with probability 1/2. Graphs: each inverse pair
    {j, n-j}, and the singleton n/2 for even n, joins S with probability 1/2.
    """
    if directed:
        mask = rng.integers(0, 2, size=max(n - 1, 0)).astype(bool)
        return ConnectionSet(n=n, elements=(np.flatnonzero(mask) + 1).tolist())
    blocks = inverse_pairs(n)
    mask = rng.integers(0, 2, size=len(blocks)).astype(bool)
    elements = [s for block, keep in zip(blocks, mask) if keep for s in block]
    return ConnectionSet(n=n, elements=elements, undirected=True)


def sample_cayley(model: SampleModel, draw: int = 0) -> ConnectionSet:
    return draw_connection_set(model.n, model.directed, make_rng(model.seed, model.n, draw))


def multiplier_stabilizer(s: ConnectionSet) -> frozenset[int]:
    """K(S): the units k with kS = S."""
    return frozenset(k for k in units(s.n) if s.scaled(k).elements == s.elements)


def is_multiplier_free(s: ConnectionSet, directed: bool | None = None) -> bool:
    """K(S) = {1} for digraphs, K(S) = {1, -1} for graphs; direction defaults to the set's flag."""
    directed = not s.undirected if directed is None else directed
    trivial = {1 % s.n} if directed else {1 % s.n, (s.n - 1) % s.n}
    return multiplier_stabilizer(s) == trivial


def firm_order(n: int, directed: bool) -> int:
    """|Aut| of a firm circulant: n for digraphs, 2n for graphs with n >= 3."""
    return n if directed or n <= 2 else 2 * n


def is_firm(s: ConnectionSet, directed: bool | None = None) -> bool:
    """Aut(cay(S)) is as small as possible: Z_n for digraphs, the dihedral group for graphs."""
    directed = not s.undirected if directed is None else directed
    return automorphism_group_order(cayley(s)) == firm_order(s.n, directed)


@lru_cache(maxsize=32)
def _classes(n: int, directed: bool) -> tuple[tuple[ConnectionSet, ...], ...]:
    by_spectrum: dict[tuple, list[ConnectionSet]] = {}
    for s in iter_connection_sets(n, undirected=not directed):
        by_spectrum.setdefault(spectrum_key(s), []).append(s)
    classes: list[tuple[ConnectionSet, ...]] = []
    for group in by_spectrum.values():
        index = {s.elements: s for s in group}
        orbits: list[list[ConnectionSet]] = []
        seen: set[tuple[int, ...]] = set()
        for s in group:
            if s.elements in seen:
                continue
            orbit = {s.scaled(k).elements for k in units(n)}
            seen |= orbit
            orbits.append([index[e] for e in sorted(orbit)])
        merged: list[list[ConnectionSet]] = []
        for orbit in orbits:
            for cls in merged:
                if find_isomorphism(cayley(orbit[0]), cayley(cls[0])) is not None:
                    cls.extend(orbit)
                    break
            else:
                merged.append(list(orbit))
        classes.extend(tuple(sorted(cls, key=lambda s: s.elements)) for cls in merged)
    classes.sort(key=lambda cls: (len(cls[0].elements), cls[0].elements))
    logger.debug(f"n={n} {'directed' if directed else 'undirected'}: {len(classes)} isomorphism classes")
    return tuple(classes)


def isomorphism_classes(n: int, directed: bool) -> tuple[tuple[ConnectionSet, ...], ...]:
    """
    All connection sets of order n grouped by isomorphism of their circulants.

    Sets are first split by their exact spectrum, then joined along multiplier orbits,
    and remaining orbits of one spectrum are merged by an isomorphism search.
    """
    _check_sampler_bound("isomorphism_classes", n, directed)
    return _classes(n, directed)


def class_size(s: ConnectionSet, directed: bool | None = None) -> int:
    """s(X): the number of connection sets whose circulant is isomorphic to cay(S)."""
    directed = not s.undirected if directed is None else directed
    for cls in isomorphism_classes(s.n, directed):
        if any(member.elements == s.elements for member in cls):
            return len(cls)
    raise InvalidInputError(f"{s.format()} is not a connection set of this model", "class_size")


def sample_unlabeled(model: SampleModel, draw: int = 0) -> ConnectionSet:
    """A connection set whose isomorphism class is uniform among the circulants of order n."""
    _check_sampler_bound("sample_unlabeled", model.n, model.directed)
    rng = make_rng(model.seed, model.n, draw)
    rejected = 0
    while True:
        s = draw_connection_set(model.n, model.directed, rng)
        if rng.random() * class_size(s, model.directed) < 1:
            logger.debug(f"unlabeled draw {draw}: accepted {s.format()} after {rejected} rejections")
            return s
        rejected += 1


def sample_labeled(model: SampleModel, draw: int = 0) -> Digraph:
    """A uniformly random graph on {0..n-1} among those isomorphic to a circulant."""
    _check_sampler_bound("sample_labeled", model.n, model.directed)
    rng = make_rng(model.seed, model.n, draw)
    base = firm_order(model.n, model.directed)
    while True:
        s = draw_connection_set(model.n, model.directed, rng)
        x = cayley(s)
        weight = automorphism_group_order(x) * class_size(s, model.directed)
        if rng.random() * weight < base:
            return relabel(x, random_permutation(model.n, rng))


def sample(model: SampleModel, draw: int = 0) -> ConnectionSet | Digraph:
    """Draw from the model's kind."""
    if model.kind == "unlabeled":
        return sample_unlabeled(model, draw)
    if model.kind == "labeled":
        return sample_labeled(model, draw)
    return sample_cayley(model, draw)


def circulant_census(n: int, directed: bool) -> CensusReport:
    """Exhaustive counts of Cayley, unlabeled, labeled, multiplier-free and firm circulants."""
    classes = isomorphism_classes(n, directed)
    labeled = firm_classes = firm_labeled = mf_sets = mf_classes = 0
    for cls in classes:
        order = automorphism_group_order(cayley(cls[0]))
        copies = factorial(n) // order
        labeled += copies
        if order == firm_order(n, directed):
            firm_classes += 1
            firm_labeled += copies
        if is_multiplier_free(cls[0], directed):
            mf_classes += 1
        mf_sets += sum(1 for s in cls if is_multiplier_free(s, directed))
    return CensusReport(
        n=n,
        directed=directed,
        connection_sets=sum(len(cls) for cls in classes),
        unlabeled=len(classes),
        labeled=labeled,
        multiplier_free_sets=mf_sets,
        multiplier_free_classes=mf_classes,
        firm_classes=firm_classes,
        firm_labeled=firm_labeled,
    )
