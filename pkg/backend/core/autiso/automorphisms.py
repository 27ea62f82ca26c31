"""Automorphism groups of colored groups and the permutation groups they induce on G^m."""

from math import prod
from typing import List, Optional, Union

import numpy as np
from loguru import logger

from backend.core.env import AUT_ORDER_LIMIT, DOMAIN_CAP, SEARCH_BUDGET
from backend.core.errors import AxiomViolationError, DomainCapExceededError, TheoremViolationError
from backend.core.groups.coloring import ColoredGroup
from backend.core.groups.group import FiniteGroup, is_isomorphism
from backend.core.groups.power import PowerContext, power
from backend.core.srings.sring import SRing, verify_axioms
from backend.core.autiso.permutation_group import PermutationGroup, schreier_generators, schreier_orbit
from backend.core.autiso.search import (
    SearchCounter,
    element_invariants,
    extension_search,
    generating_sequence,
    image_candidates,
)


def _colored(G: Union[FiniteGroup, ColoredGroup]) -> ColoredGroup:
    return G if isinstance(G, ColoredGroup) else ColoredGroup.monochrome(G)


def automorphism_group(
    CG: Union[FiniteGroup, ColoredGroup], limit: int = AUT_ORDER_LIMIT, budget: int = SEARCH_BUDGET
) -> PermutationGroup:
    """All color-preserving automorphisms, as a stabilizer chain along a greedy generating sequence.

    Level j collects the orbit of the j-th generator under the automorphisms
    fixing the earlier ones. Levels are solved from the last to the first so
    the generators already found close orbits without further search.

    Args:
        CG: A group or colored group.
        limit: Largest group order accepted.
        budget: Search node budget.

    Raises:
        DomainCapExceededError: if the group order exceeds `limit`.
        BudgetExceededError: if the search needs more than `budget` nodes.
    """
    CG = _colored(CG)
    G = CG.group
    if G.order > limit:
        raise DomainCapExceededError(G.order, 1, limit)
    gens = generating_sequence(G)
    invariants = element_invariants(CG)
    candidates = image_candidates(invariants, invariants, gens)
    counter = SearchCounter(budget, "automorphism search nodes")

    generators: List[np.ndarray] = []
    transversals = [None] * len(gens)
    for level in reversed(range(len(gens))):
        point = gens[level]
        fixed = list(gens[:level])
        orbit = schreier_orbit(point, generators, G.order)
        excluded = set()
        for y in candidates[level]:
            if y in orbit or y in excluded:
                continue
            phi = extension_search(CG, CG, gens, candidates, fixed + [y], counter)
            if phi is None:
                excluded.update(schreier_orbit(y, generators, G.order))
                continue
            generators.append(phi)
            orbit = schreier_orbit(point, generators, G.order)
        transversals[level] = tuple(orbit[y] for y in sorted(orbit))

    order = prod(len(t) for t in transversals)
    logger.debug(f"|Aut({G.name})| = {order} after {counter.used} search nodes")
    return PermutationGroup(G.order, tuple(generators), order, tuple(transversals))


def componentwise(ctx: PowerContext, phi: np.ndarray) -> np.ndarray:
    """The permutation of G^m applying phi in every coordinate."""
    return ctx.encode_digits(np.asarray(phi)[ctx.digits])


def right_multiplication(ctx: PowerContext, t: int) -> np.ndarray:
    return ctx.mul_codes(np.arange(ctx.size), t)


def cyc_m(
    G: FiniteGroup, m: int, coloring: Optional[ColoredGroup] = None, cap: int = DOMAIN_CAP, check: bool = True
) -> SRing:
    """S-ring over G^m whose classes are the orbits of (colored) Aut(G) acting componentwise.

    Raises:
        AxiomViolationError: if `check` is set and the orbit partition fails S1-S3.
    """
    ctx = power(G, m, cap)
    aut = automorphism_group(coloring if coloring is not None else G)
    action = PermutationGroup(ctx.size, tuple(componentwise(ctx, a) for a in aut.generators), aut.order)
    partition = action.orbits()
    if check:
        report = verify_axioms(ctx, partition)
        if not report.ok:
            raise AxiomViolationError("orbit partition is an S-ring", report.witnesses)
    A = SRing(ctx, partition)
    logger.info(f"cyc_{m}({G.name}) has rank {A.rank}")
    return A


def is_componentwise_automorphism(ctx: PowerContext, sigma: np.ndarray) -> bool:
    """sigma applies one automorphism of G in every coordinate."""
    phi = ctx.digits[sigma[: ctx.n], 0].astype(np.int64)
    return is_isomorphism(ctx.base, ctx.base, phi) and bool(np.array_equal(sigma, componentwise(ctx, phi)))


def hol_m_generators(G: FiniteGroup, m: int, cap: int = DOMAIN_CAP) -> PermutationGroup:
    """Right multiplications by a generating set of G^m together with componentwise Aut(G).

    The order is n^m |Aut(G)|: the identity tuple has the whole of G^m as its
    orbit and its stabilizer is the componentwise Aut(G), which is checked on
    the Schreier generators of the stabilizer.

    Raises:
        TheoremViolationError: if the orbit of the identity tuple is not all of G^m
            or its stabilizer holds a permutation outside componentwise Aut(G).
    """
    ctx = power(G, m, cap)
    aut = automorphism_group(G)
    shifts = [
        right_multiplication(ctx, ctx.encode([g if j == i else 0 for j in range(m)]))
        for i in range(m)
        for g in generating_sequence(G)
    ]
    generators = tuple(shifts) + tuple(componentwise(ctx, a) for a in aut.generators)
    orbit = schreier_orbit(0, generators, ctx.size)
    if len(orbit) != ctx.size:
        raise TheoremViolationError("right multiplications are transitive", {"orbit_size": len(orbit)})
    for sigma in schreier_generators(0, generators, ctx.size):
        if not is_componentwise_automorphism(ctx, sigma):
            raise TheoremViolationError(
                "the stabilizer of the identity tuple is componentwise Aut(G)", {"element": sigma[:16].tolist()}
            )
    return PermutationGroup(ctx.size, generators, ctx.size * aut.order)
