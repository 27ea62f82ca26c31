"""Backtracking over generator images, shared by automorphism and isomorphism searches."""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from backend.core.env import SEARCH_BUDGET
from backend.core.errors import BudgetExceededError
from backend.core.groups.coloring import ColoredGroup
from backend.core.groups.group import FiniteGroup, extend_homomorphism, generated_subgroup


class SearchCounter:
    """Counts search nodes and raises once the budget is spent."""

    def __init__(self, budget: int = SEARCH_BUDGET, what: str = "search nodes"):
        self.budget = budget
        self.what = what
        self.used = 0

    def tick(self, nodes: int = 1) -> None:
        self.used += nodes
        if self.used > self.budget:
            raise BudgetExceededError(self.what, self.used, self.budget)


ElementInvariant = Tuple[int, int, int, Tuple[int, ...]]


def element_invariants(CG: ColoredGroup) -> List[ElementInvariant]:
    """(order, color, centralizer size, colors of the powers) of every element.

    Colored isomorphisms preserve all four, so only elements with equal
    invariants are tried as images of each other.
    """
    G = CG.group
    table = G.mul_list
    colors = CG.coloring.tolist()
    orders = G.element_orders.tolist()
    centralizers = G.centralizer_sizes.tolist()
    invariants = []
    for x in range(G.order):
        powers, current = [], x
        for _ in range(orders[x]):
            powers.append(colors[current])
            current = table[current][x]
        invariants.append((orders[x], colors[x], centralizers[x], tuple(powers)))
    return invariants


def generating_sequence(G: FiniteGroup) -> List[int]:
    """Greedy generating sequence: elements by decreasing order, kept when they enlarge the subgroup."""
    gens: List[int] = []
    size = 1
    for x in sorted(range(1, G.order), key=lambda y: (-int(G.element_orders[y]), y)):
        if size == G.order:
            break
        grown = len(generated_subgroup(G, gens + [x]))
        if grown > size:
            gens.append(x)
            size = grown
    return gens


def image_candidates(
    source: Sequence[ElementInvariant], target: Sequence[ElementInvariant], gens: Sequence[int]
) -> List[List[int]]:
    by_invariant: Dict[ElementInvariant, List[int]] = {}
    for y, key in enumerate(target):
        by_invariant.setdefault(key, []).append(y)
    return [by_invariant.get(source[g], []) for g in gens]


def _colors_agree(phi: np.ndarray, source: np.ndarray, target: np.ndarray) -> bool:
    defined = phi >= 0
    return bool(np.array_equal(target[phi[defined]], source[defined]))


def extension_search(
    CG: ColoredGroup,
    CH: ColoredGroup,
    gens: Sequence[int],
    candidates: Sequence[Sequence[int]],
    fixed: Sequence[int],
    counter: SearchCounter,
) -> Optional[np.ndarray]:
    """First color-preserving isomorphism CG -> CH sending gens[i] to fixed[i] for the given prefix.

    The remaining generators range over their candidates in id order; every
    partial assignment is extended to the generated subgroup and pruned as soon
    as it stops being an injective color-preserving homomorphism.
    """
    G, H = CG.group, CH.group
    if G.order != H.order:
        return None
    source, target = CG.coloring, CH.coloring
    images = list(fixed)
    if images:
        phi = extend_homomorphism(G, gens[: len(images)], images, H)
        if phi is None or not _colors_agree(phi, source, target):
            return None
    if not gens:
        return np.zeros(1, dtype=np.int64)

    def descend(level: int) -> Optional[np.ndarray]:
        for y in candidates[level]:
            counter.tick()
            if y in images:
                continue
            images.append(y)
            phi = extend_homomorphism(G, gens[: level + 1], images, H)
            if phi is not None and _colors_agree(phi, source, target):
                if level + 1 == len(gens):
                    return phi
                found = descend(level + 1)
                if found is not None:
                    return found
            images.pop()
        return None

    if len(images) == len(gens):
        return phi
    return descend(len(images))
