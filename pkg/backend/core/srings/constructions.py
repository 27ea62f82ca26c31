"""Tensor powers, the S-rings A_m(G), quotients, projections and tensor products."""

from typing import Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from backend.core.env import DOMAIN_CAP
from backend.core.errors import AxiomViolationError, DomainCapExceededError, NotAnSRingSetError
from backend.core.groups.coloring import ColoredGroup
from backend.core.groups.group import FiniteGroup, direct_product, from_table
from backend.core.groups.power import PowerContext, power
from backend.core.partitions.partition import Partition, canonical_labels, combine_labels
from backend.core.partitions.projection import partition_image, project
from backend.core.srings.closure import schur_closure
from backend.core.srings.sring import SRing, verify_axioms


def support_pattern(ctx: PowerContext) -> np.ndarray:
    """Bitmask of the coordinates equal to the identity, per tuple."""
    return ((ctx.digits == 0).astype(np.int64) * (1 << np.arange(ctx.arity))).sum(axis=1)


def diagonal_mask(ctx: PowerContext) -> np.ndarray:
    return ctx.digits.min(axis=1) == ctx.digits.max(axis=1)


def tensor_power_partition(G: FiniteGroup, m: int, cap: int = DOMAIN_CAP) -> Tuple[PowerContext, Partition]:
    """The basic sets of the m-th tensor power of the trivial S-ring: tuples grouped by support pattern."""
    ctx = power(G, m, cap)
    return ctx, Partition.from_labels(support_pattern(ctx))


def am_initial_partition(ctx: PowerContext, coloring: Optional[ColoredGroup] = None) -> Partition:
    """Support patterns met with the diagonal, the diagonal split by color when colored."""
    diagonal = diagonal_mask(ctx).astype(np.int64)
    if coloring is not None:
        diagonal = diagonal * (coloring.coloring[ctx.digits[:, 0]] + 1)
    return Partition(combine_labels(support_pattern(ctx), diagonal))


def compute_Am(G: FiniteGroup, m: int, coloring: Optional[ColoredGroup] = None, cap: int = DOMAIN_CAP) -> SRing:
    """The smallest S-ring over G^m containing the tensor power of the trivial S-ring and the diagonal.

    Args:
        G: Base group.
        m: Arity.
        coloring: Optional coloring of G; the diagonal is then split into the
            diagonals of the color classes before closing.
        cap: Largest admissible n^m.
    """
    if coloring is not None and not coloring.group.same_table(G):
        raise ValueError("coloring belongs to a different group")
    ctx = power(G, m, cap)
    A = schur_closure(ctx, am_initial_partition(ctx, coloring), cap=cap)
    logger.info(f"A_{m}({G.name}) has rank {A.rank}")
    return A


def carrier_group(ctx: PowerContext) -> FiniteGroup:
    """G^m materialized as a FiniteGroup (needs n^m within the group order bound)."""
    if ctx.arity == 1:
        return ctx.base
    codes = np.arange(ctx.size)
    return from_table(ctx.mul_codes(codes[:, None], codes[None, :]), name=f"{ctx.base.name}^{ctx.arity}")


def left_cosets(ctx: PowerContext, H: np.ndarray) -> np.ndarray:
    """Minimal element of gH for every g."""
    codes = np.arange(ctx.size)
    return ctx.mul_codes(codes[:, None], H[None, :]).min(axis=1)


def right_cosets(ctx: PowerContext, H: np.ndarray) -> np.ndarray:
    codes = np.arange(ctx.size)
    return ctx.mul_codes(H[:, None], codes[None, :]).min(axis=0)


def is_normal(ctx: PowerContext, H: Sequence[int]) -> bool:
    H = np.unique(np.asarray(H, dtype=np.int64))
    return bool(np.array_equal(left_cosets(ctx, H), right_cosets(ctx, H)))


def quotient_group(ctx: PowerContext, H: Sequence[int]) -> Tuple[FiniteGroup, np.ndarray]:
    """G^m / H with cosets numbered by minimal representative; returns (quotient, coset id per code)."""
    H = np.unique(np.asarray(H, dtype=np.int64))
    if not ctx.is_subgroup(H):
        raise NotAnSRingSetError("H is not a subgroup")
    if not is_normal(ctx, H):
        raise NotAnSRingSetError("H is not normal")
    coset_of = canonical_labels(left_cosets(ctx, H))
    reps = np.unique(left_cosets(ctx, H))  # ascending, so reps[i] is the minimal member of coset i
    table = coset_of[ctx.mul_codes(reps[:, None], reps[None, :])]
    Q = from_table(table, name=f"{ctx.base.name}^{ctx.arity}/H{len(H)}")
    return Q, coset_of


def quotient_sring(A: SRing, H: Sequence[int]) -> SRing:
    """The quotient of A modulo a normal S-ring subgroup H, over G^m/H.

    Raises:
        NotAnSRingSetError: if H is not a normal subgroup that is a union of classes.
    """
    H = np.unique(np.asarray(H, dtype=np.int64))
    if not A.is_sring_set(H):
        raise NotAnSRingSetError("H is not a union of classes")
    Q, coset_of = quotient_group(A.ctx, H)
    P, merged, _ = partition_image(A.partition, coset_of, Q.order)
    ctx = PowerContext(Q, 1)
    report = verify_axioms(ctx, P)
    if merged or not report.ok:
        raise AxiomViolationError("quotient S-ring", {"merged": merged, **report.witnesses})
    return SRing(ctx, P)


def project_sring(A: SRing, k: int) -> SRing:
    """The quotient of A modulo the tuples trivial on the first k coordinates, read on G^k.

    Raises:
        NotAnSRingSetError: if the kernel is not a union of classes.
        AxiomViolationError: if class images overlap or the image fails S1-S3.
    """
    m = A.ctx.arity
    if not 1 <= k <= m:
        raise ValueError(f"projection arity {k} outside 1..{m}")
    if k == m:
        return A
    kernel = np.flatnonzero(A.ctx.project_codes(np.arange(A.ctx.size), range(k)) == 0)
    if not A.is_sring_set(kernel):
        raise NotAnSRingSetError(f"the kernel of the projection to {k} coordinates is not a union of classes")
    result = project(A.ctx, A.partition, range(k))
    report = verify_axioms(result.ctx, result.partition)
    if result.merged or not report.ok:
        raise AxiomViolationError("projection of an S-ring", {"k": k, "merged": result.merged, **report.witnesses})
    return SRing(result.ctx, result.partition)


def tensor_product(A: SRing, B: SRing, cap: int = DOMAIN_CAP) -> SRing:
    """S-ring over the product of both carriers whose classes are X x X'.

    Carriers over the same base group give G^{a+b}; otherwise both carriers are
    materialized as groups and multiplied. Codes are x + y |A| in both cases.
    """
    size = A.ctx.size * B.ctx.size
    if A.ctx.base.same_table(B.ctx.base):
        n, arity = A.ctx.n, A.ctx.arity + B.ctx.arity
        if size > cap:
            raise DomainCapExceededError(n, arity, cap)
        ctx = PowerContext(A.ctx.base, arity)
    else:
        if size > cap:
            raise DomainCapExceededError(size, 1, cap)
        ctx = PowerContext(direct_product([carrier_group(A.ctx), carrier_group(B.ctx)]), 1)
    codes = np.arange(size)
    first, second = np.divmod(codes, A.ctx.size)[::-1]
    labels = A.partition.class_of[first] * B.rank + B.partition.class_of[second]
    return SRing(ctx, Partition.from_labels(labels))
