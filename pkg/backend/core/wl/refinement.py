"""Weisfeiler-Leman refinement on G^m.

All steps work on a list of structures at once and intern signatures jointly,
so one run both computes WL_m of a single group and compares two groups.
Signature rows are exact integer vectors; colors are their ranks in sorted order.
"""

from typing import List, Optional, Sequence

import numpy as np
from loguru import logger

from backend.core.env import DOMAIN_CAP
from backend.core.errors import AxiomViolationError, BudgetExceededError
from backend.core.groups.coloring import ColoredGroup
from backend.core.groups.group import FiniteGroup
from backend.core.groups.power import PowerContext, power
from backend.core.partitions.partition import Partition
from backend.core.wl.rainbow import (
    COPY_SLOT,
    CoherentConfig,
    Rainbow,
    check_c1,
    check_c2,
    check_regular,
    coordinate_map_generators,
)


def joint_colors(rows: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Intern the signature rows of several structures with one shared dictionary."""
    widths = {r.shape[1] for r in rows}
    if len(widths) != 1:
        raise ValueError(f"signature widths differ: {sorted(widths)}")
    stacked = np.concatenate([np.asarray(r, dtype=np.int64) for r in rows], axis=0)
    _, colors = np.unique(stacked, axis=0, return_inverse=True)
    colors = colors.reshape(-1)
    bounds = np.cumsum([len(r) for r in rows])[:-1]
    return np.split(colors, bounds)


def count_colors(colors: Sequence[np.ndarray]) -> int:
    return len(np.unique(np.concatenate(colors)))


def initial_rows(ctx: PowerContext, coloring: Optional[ColoredGroup] = None) -> np.ndarray:
    """rho, mu and (when colored) the color vector of every tuple."""
    columns = [ctx.equality_pattern().astype(np.int64), ctx.product_pattern().astype(np.int64)]
    if coloring is not None:
        columns.append(coloring.coloring[ctx.digits].astype(np.int64))
    return np.concatenate(columns, axis=1)


def _substitution_colors(ctx: PowerContext, colors: np.ndarray, i: int) -> np.ndarray:
    """N x n table of the color of x with coordinate i replaced by each alpha."""
    codes = np.arange(ctx.size)
    alphas = np.arange(ctx.n)
    return colors[ctx.substitute(codes[:, None], i, alphas[None, :])]


def _c2_rows(ctx: PowerContext, colors: np.ndarray) -> np.ndarray:
    codes = np.arange(ctx.size)
    columns = [colors[:, None]]
    for sigma in coordinate_map_generators(ctx.arity):
        columns.append(colors[ctx.apply_coordinate_map(codes, sigma)][:, None])
    if ctx.arity >= 2:
        # set of classes mapped onto y by the copy map; empty unless y_0 == y_1
        preimages = np.sort(_substitution_colors(ctx, colors, COPY_SLOT), axis=1)
        repeated = np.zeros_like(preimages, dtype=bool)
        repeated[:, 1:] = preimages[:, 1:] == preimages[:, :-1]
        preimages = np.where(repeated, -1, preimages)
        preimages = np.sort(preimages, axis=1)
        in_image = ctx.digits[:, 0] == ctx.digits[:, COPY_SLOT]
        preimages[~in_image] = -1
        columns.append(preimages)
    return np.concatenate(columns, axis=1)


def enforce_c2(ctxs: Sequence[PowerContext], colors: List[np.ndarray]) -> List[np.ndarray]:
    """Coarsest common refinement closed under all coordinate maps."""
    while True:
        before = count_colors(colors)
        colors = joint_colors([_c2_rows(ctx, c) for ctx, c in zip(ctxs, colors)])
        if count_colors(colors) == before:
            return colors


def _wl_rows(ctx: PowerContext, colors: np.ndarray, vector_ids: np.ndarray) -> np.ndarray:
    sorted_ids = np.sort(vector_ids.reshape(ctx.size, ctx.n), axis=1)
    return np.concatenate([colors[:, None], sorted_ids], axis=1)


def joint_wl_step(ctxs: Sequence[PowerContext], colors: List[np.ndarray]) -> List[np.ndarray]:
    """One refinement round: x keyed on (color, sorted multiset over alpha of the substituted color vector)."""
    vectors = [
        np.stack([_substitution_colors(ctx, c, i) for i in range(ctx.arity)], axis=2).reshape(-1, ctx.arity)
        for ctx, c in zip(ctxs, colors)
    ]
    vector_ids = joint_colors(vectors)
    return joint_colors([_wl_rows(ctx, c, v) for ctx, c, v in zip(ctxs, colors, vector_ids)])


def _rainbow(ctx: PowerContext, P: Partition) -> Rainbow:
    return Rainbow(ctx, P, c1_verified=check_c1(ctx, P) is None, c2_verified=check_c2(ctx, P) is None)


def initial_rainbow(
    G: FiniteGroup, m: int, coloring: Optional[ColoredGroup] = None, cap: int = DOMAIN_CAP
) -> Rainbow:
    """The coarsest rainbow on G^m whose classes keep rho, mu (and colors) constant."""
    ctx = power(G, m, cap)
    colors = joint_colors([initial_rows(ctx, coloring)])
    colors = enforce_c2([ctx], colors)
    R = _rainbow(ctx, Partition.from_labels(colors[0]))
    logger.debug(f"Initial rainbow of {G.name}^{m}: {R.num_classes} classes")
    return R


def wl_step(ctx: PowerContext, P: Partition) -> Partition:
    return Partition.from_labels(joint_wl_step([ctx], [P.class_of])[0])


def check_c3(ctx: PowerContext, P: Partition) -> Optional[dict]:
    """None when the substitution counts are constant on every class, else a witness."""
    refined = wl_step(ctx, P)
    if refined.num_classes == P.num_classes:
        return None
    for X, members in enumerate(P.classes):
        labels = refined.class_of[members]
        if labels.min() != labels.max():
            other = int(members[np.argmax(labels != labels[0])])
            return {"X": X, "x": ctx.decode(int(members[0])), "x_other": ctx.decode(other)}
    return None


def wl_fixpoint(R: Rainbow, round_budget: Optional[int] = None) -> CoherentConfig:
    """Iterate wl_step to stabilization and certify C1-C3 and regularity of the result.

    Raises:
        AxiomViolationError: if the fixpoint is not a coherent configuration.
        BudgetExceededError: if more than `round_budget` rounds are needed.
    """
    ctx = R.ctx
    if round_budget is None:
        round_budget = ctx.size
    P = R.partition
    rounds = 0
    while True:
        refined = wl_step(ctx, P)
        if refined.num_classes == P.num_classes:
            break
        if refined.num_classes < P.num_classes:
            raise AxiomViolationError("refinement is monotone", {"before": P.num_classes, "after": refined.num_classes})
        rounds += 1
        if rounds > round_budget:
            raise BudgetExceededError("WL rounds", rounds, round_budget)
        P = refined
    for name, witness in (("C1", check_c1(ctx, P)), ("C2", check_c2(ctx, P))):
        if witness is not None:
            raise AxiomViolationError(name, witness)
    regularity = check_regular(ctx, P)
    if not regularity.regular:
        raise AxiomViolationError("regularity", {"violations": [v.model_dump() for v in regularity.violations]})
    logger.info(f"WL fixpoint on {ctx.base.name}^{ctx.arity}: {P.num_classes} classes after {rounds} rounds")
    return CoherentConfig(Rainbow(ctx, P, True, True), c3_verified=True, regularity=regularity)


def wl_m_group(
    G: FiniteGroup, m: int, coloring: Optional[ColoredGroup] = None, cap: int = DOMAIN_CAP
) -> CoherentConfig:
    return wl_fixpoint(initial_rainbow(G, m, coloring, cap))
