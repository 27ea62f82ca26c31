import time
from typing import Dict, Optional

import numpy as np
from loguru import logger

from backend.core.env import CLOSURE_TIME_BUDGET, DOMAIN_CAP
from backend.core.errors import BudgetExceededError, DomainCapExceededError, DomainMismatchError
from backend.core.groups.power import PowerContext
from backend.core.partitions.partition import Partition, combine_labels
from backend.core.srings.pair_counts import count_key, iter_count_vectors
from backend.core.srings.sring import SRing


def _product_split(ctx: PowerContext, P: Partition) -> Partition:
    rank = P.num_classes
    interned: Dict[bytes, int] = {}
    labels = np.empty(ctx.size, dtype=np.int64)
    for z, values, counts in iter_count_vectors(ctx, P.class_of, rank):
        key = int(P.class_of[z]).to_bytes(8, "little") + count_key(values, counts)
        labels[z] = interned.setdefault(key, len(interned))
    return Partition.from_labels(labels)


def schur_closure(
    ctx: PowerContext,
    initial: Partition,
    cap: int = DOMAIN_CAP,
    time_budget: float = CLOSURE_TIME_BUDGET,
    round_budget: Optional[int] = None,
) -> SRing:
    """The coarsest S-ring over G^m refining `initial`.

    Each round splits classes by the class of the inverse and then by the full
    vector of representation counts r_{Y,Z}(g); the loop stops when a round
    leaves the number of classes unchanged.

    Args:
        ctx: The carrier G^m.
        initial: Partition to refine.
        cap: Largest admissible carrier size.
        time_budget: Seconds before the refinement is abandoned.
        round_budget: Maximum number of rounds, N when omitted.

    Raises:
        DomainCapExceededError: if the carrier is larger than `cap`.
        BudgetExceededError: if the time or round budget runs out.
    """
    if ctx.size > cap:
        raise DomainCapExceededError(ctx.n, ctx.arity, cap)
    if initial.size != ctx.size:
        raise DomainMismatchError(f"initial partition on {initial.size} points, carrier has {ctx.size}")
    if round_budget is None:
        round_budget = ctx.size
    identity = np.zeros(ctx.size, dtype=np.int64)
    identity[0] = 1
    P = Partition(combine_labels(initial.class_of, identity))

    started = time.perf_counter()
    rounds = 0
    while True:
        rounds += 1
        if rounds > round_budget:
            raise BudgetExceededError("closure rounds", rounds, round_budget)
        before = P.num_classes
        P = Partition(combine_labels(P.class_of, P.class_of[ctx.inverse]))
        P = _product_split(ctx, P)
        elapsed = time.perf_counter() - started
        logger.debug(f"Closure round {rounds}: {before} -> {P.num_classes} classes ({elapsed:.2f}s)")
        if P.num_classes == before:
            break
        if elapsed > time_budget:
            raise BudgetExceededError("closure seconds", round(elapsed, 2), time_budget)
    logger.info(f"Schur closure on {ctx.size} points: rank {P.num_classes} after {rounds} rounds")
    return SRing(ctx, P)
