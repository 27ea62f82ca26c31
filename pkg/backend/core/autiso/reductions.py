"""Isomorphism of colored groups through three oracles, and the reductions between them."""

from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from backend.core.env import AUT_ORDER_LIMIT, GROUP_ORDER_LIMIT, SEARCH_BUDGET
from backend.core.errors import DomainCapExceededError, TheoremViolationError
from backend.core.groups.coloring import ColoredGroup, individualize, product_coloring
from backend.core.groups.group import FiniteGroup, is_isomorphism
from backend.core.autiso.automorphisms import automorphism_group
from backend.core.autiso.permutation_group import PermutationGroup
from backend.core.autiso.search import (
    SearchCounter,
    element_invariants,
    extension_search,
    generating_sequence,
    image_candidates,
)


class IsoOracle(str, Enum):
    DIRECT = "direct"
    VIA_AUT = "via_aut"
    VIA_CYC1 = "via_cyc1"


def _colored(G: Union[FiniteGroup, ColoredGroup]) -> ColoredGroup:
    return G if isinstance(G, ColoredGroup) else ColoredGroup.monochrome(G)


def is_colored_isomorphism(CG: ColoredGroup, CH: ColoredGroup, f) -> bool:
    f = np.asarray(f, dtype=np.int64)
    return is_isomorphism(CG.group, CH.group, f) and bool(np.array_equal(CH.coloring[f], CG.coloring))


def _histograms_differ(CG: ColoredGroup, CH: ColoredGroup) -> bool:
    if CG.group.order != CH.group.order:
        return True
    width = max(CG.num_colors, CH.num_colors)
    return not np.array_equal(
        np.bincount(CG.coloring, minlength=width), np.bincount(CH.coloring, minlength=width)
    )


def _direct(CG: ColoredGroup, CH: ColoredGroup, counter: SearchCounter) -> Optional[np.ndarray]:
    gens = generating_sequence(CG.group)
    candidates = image_candidates(element_invariants(CG), element_invariants(CH), gens)
    return extension_search(CG, CH, gens, candidates, [], counter)


def _via_aut(CG: ColoredGroup, CH: ColoredGroup, budget: int) -> Optional[np.ndarray]:
    """Aut of G x H colored by the product coloring has index-2 over the part fixing both factors iff G = H."""
    n = CG.group.order
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    if n * n > GROUP_ORDER_LIMIT:
        raise DomainCapExceededError(n, 2, GROUP_ORDER_LIMIT)
    K = product_coloring(CG, CH, shared_palette=True)
    aut = automorphism_group(K, limit=GROUP_ORDER_LIMIT, budget=budget)
    # (g, 1) has code g and (1, h) has code h * n
    for a in aut.generators:
        if a[1] % n == 0:
            f = np.zeros(n, dtype=np.int64)
            f[1:] = a[1:n] // n
            if not is_colored_isomorphism(CG, CH, f):
                raise TheoremViolationError("a factor-swapping automorphism restricts to an isomorphism", {"f": f.tolist()})
            return f
    return None


class _OrbitCache:
    """Orbit labels of Aut(K) for colored products K, keyed by Cayley table and coloring."""

    def __init__(self, budget: int):
        self.budget = budget
        self.labels: Dict[bytes, np.ndarray] = {}
        self.hits = 0

    def orbit_labels(self, K: ColoredGroup) -> np.ndarray:
        key = K.group.mul.tobytes() + b"|" + K.coloring.tobytes()
        if key in self.labels:
            self.hits += 1
        else:
            aut = automorphism_group(K, limit=GROUP_ORDER_LIMIT, budget=self.budget)
            self.labels[key] = aut.orbit_labels()
        return self.labels[key]


def same_orbit_in_product(CG: ColoredGroup, CH: ColoredGroup, x: int, y: int, cache: _OrbitCache) -> bool:
    """Whether (x, 1) and (1, y) share a class of cyc_1 of the colored product of G_x and H_y."""
    n = CG.group.order
    if n * n > GROUP_ORDER_LIMIT:
        raise DomainCapExceededError(n, 2, GROUP_ORDER_LIMIT)
    K = product_coloring(individualize(CG, x), individualize(CH, y), shared_palette=True)
    labels = cache.orbit_labels(K)
    return bool(labels[x] == labels[y * n])


def _discrete_match(CG: ColoredGroup, CH: ColoredGroup) -> Optional[np.ndarray]:
    position = np.full(CH.num_colors, -1, dtype=np.int64)
    position[CH.coloring] = np.arange(CH.group.order)
    f = position[CG.coloring]
    return f if (f >= 0).all() and is_colored_isomorphism(CG, CH, f) else None


def _via_cyc1(CG: ColoredGroup, CH: ColoredGroup, cache: _OrbitCache, depth: int = 0) -> Optional[np.ndarray]:
    if _histograms_differ(CG, CH):
        return None
    if CG.is_discrete():
        return _discrete_match(CG, CH)
    sizes = np.bincount(CG.coloring)
    x = int(np.flatnonzero(sizes[CG.coloring] > 1)[0])
    for y in np.flatnonzero(CH.coloring == CG.coloring[x]):
        if not same_orbit_in_product(CG, CH, x, int(y), cache):
            continue
        found = _via_cyc1(individualize(CG, x), individualize(CH, int(y)), cache, depth + 1)
        if found is None:
            raise TheoremViolationError(
                "same orbit in the colored product implies isomorphic individualizations", {"x": x, "y": int(y)}
            )
        return found
    logger.debug(f"via_cyc1: no partner for element {x} at depth {depth}")
    return None


def iso_colored_groups(
    CG: Union[FiniteGroup, ColoredGroup],
    CH: Union[FiniteGroup, ColoredGroup],
    oracle: IsoOracle = IsoOracle.DIRECT,
    limit: int = AUT_ORDER_LIMIT,
    budget: int = SEARCH_BUDGET,
) -> Optional[np.ndarray]:
    """A color-preserving isomorphism CG -> CH, or None.

    Both colorings are read in one vocabulary. `direct` backtracks over images
    of a generating sequence; `via_aut` extracts the map from a factor-swapping
    automorphism of the colored product; `via_cyc1` individualizes one element
    at a time and pairs it with a partner in the same Aut-orbit of the product.

    Raises:
        DomainCapExceededError: if the groups are larger than `limit`.
        BudgetExceededError: if a search runs past `budget` nodes.
    """
    CG, CH = _colored(CG), _colored(CH)
    oracle = IsoOracle(oracle)
    if CG.group.order > limit:
        raise DomainCapExceededError(CG.group.order, 1, limit)
    if _histograms_differ(CG, CH):
        return None
    if oracle == IsoOracle.DIRECT:
        f = _direct(CG, CH, SearchCounter(budget, "isomorphism nodes"))
    elif oracle == IsoOracle.VIA_AUT:
        f = _via_aut(CG, CH, budget)
    else:
        cache = _OrbitCache(budget)
        f = _via_cyc1(CG, CH, cache)
        logger.debug(f"via_cyc1 used {len(cache.labels)} automorphism groups, {cache.hits} cache hits")
    if f is not None and not is_colored_isomorphism(CG, CH, f):
        raise TheoremViolationError(f"{oracle.value} returns isomorphisms", {"f": np.asarray(f).tolist()})
    logger.info(f"{CG.group.name} ~ {CH.group.name} by {oracle.value}: {'isomorphic' if f is not None else 'not isomorphic'}")
    return f


def automorphisms_by_individualization(
    CG: Union[FiniteGroup, ColoredGroup], oracle: IsoOracle = IsoOracle.DIRECT, budget: int = SEARCH_BUDGET
) -> PermutationGroup:
    """Aut(G) generated by S_x(G) and Aut(G_x), where S_x holds one isomorphism G_x -> G_y per partner y.

    The order is |{y : G_x = G_y}| |Aut(G_x)|, read off without enumerating elements.
    """
    CG = _colored(CG)
    n = CG.group.order
    if CG.is_discrete():
        return PermutationGroup(n, (), 1)
    sizes = np.bincount(CG.coloring)
    x = int(np.flatnonzero(sizes[CG.coloring] > 1)[0])
    Gx = individualize(CG, x)
    transversal: List[np.ndarray] = []
    for y in np.flatnonzero(CG.coloring == CG.coloring[x]):
        f = iso_colored_groups(Gx, individualize(CG, int(y)), oracle, limit=n, budget=budget)
        if f is not None:
            transversal.append(f)
    stabilizer = automorphisms_by_individualization(Gx, oracle, budget)
    generators = tuple(f for f in transversal if not np.array_equal(f, np.arange(n))) + stabilizer.generators
    return PermutationGroup(n, generators, len(transversal) * stabilizer.order)
