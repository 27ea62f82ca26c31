"""Coordinate projections, preimages and coordinate-map images on G^m."""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from loguru import logger

from backend.core.errors import SchurPowerError
from backend.core.groups.power import PowerContext
from backend.core.partitions.partition import Partition, canonical_labels
from backend.core.partitions.union_find import UnionFind


@dataclass(frozen=True)
class ProjectionResult:
    """Projected partition on G^{|K|}.

    `coincided` is True when distinct classes had the same image. `merged` is
    True when some images overlapped without coinciding and had to be fused;
    for rainbows this never happens.
    """

    partition: Partition
    ctx: PowerContext
    merged: bool
    coincided: bool = False


def _check_indices(ctx: PowerContext, K: Sequence[int]) -> list:
    K = list(K)
    if not K:
        raise SchurPowerError("projection onto an empty index set")
    if any(not 0 <= i < ctx.arity for i in K) or len(set(K)) != len(K):
        raise SchurPowerError(f"index set {K} invalid for arity {ctx.arity}")
    return K


def partition_image(P: Partition, images: np.ndarray, target_size: int) -> Tuple[Partition, bool, bool]:
    """Partition of [0, target_size) whose classes are the images of the classes of P.

    `images[x]` is the image of point x and the map must be onto. Returns the
    partition, whether partially overlapping images were fused, and whether
    distinct classes had the same image.
    """
    pair_keys = np.unique(P.class_of * target_size + images)
    classes, points = np.divmod(pair_keys, target_size)

    order = np.argsort(points, kind="stable")
    points, classes = points[order], classes[order]
    uf = UnionFind(range(P.num_classes))
    same_point = np.flatnonzero(points[1:] == points[:-1])
    for pos in same_point:
        uf.union(int(classes[pos]), int(classes[pos + 1]))
    component = np.array([uf.find(c) for c in range(P.num_classes)], dtype=np.int64)

    labels = np.full(target_size, -1, dtype=np.int64)
    labels[points] = component[classes]
    if (labels < 0).any():
        raise SchurPowerError("image map is not onto")

    # every class of a component must hit exactly the component's image
    images_per_class = np.bincount(classes, minlength=P.num_classes)
    images_per_component = np.bincount(labels, minlength=P.num_classes)
    merged = bool((images_per_class != images_per_component[component]).any())
    projected = Partition(canonical_labels(labels))
    return projected, merged, projected.num_classes < P.num_classes


def project(ctx: PowerContext, P: Partition, K: Sequence[int]) -> ProjectionResult:
    """Partition of G^{|K|} whose classes are the images pr_K(X) of the classes of P.

    Images that coincide give one class. Images that overlap partially are
    fused through a union-find over classes and reported with `merged`.
    """
    K = _check_indices(ctx, K)
    target = ctx.projected(len(K))
    images = ctx.project_codes(np.arange(ctx.size), K)
    projected, merged, coincided = partition_image(P, images, target.size)
    if merged:
        logger.warning(f"Projection onto {K} fused partially overlapping class images")
    return ProjectionResult(projected, target, merged, coincided)


def coordinate_map_image(ctx: PowerContext, codes: Sequence[int], sigma: Sequence[int]) -> np.ndarray:
    """Sorted codes of {x^sigma : x in codes}; coordinate j of x^sigma is x_{sigma[j]}."""
    return np.unique(ctx.apply_coordinate_map(np.asarray(codes, dtype=np.int64), sigma))


def full_preimage(ctx: PowerContext, K: Sequence[int], Y: Sequence[int]) -> np.ndarray:
    """Sorted codes x of G^m with pr_K(x) in Y."""
    K = _check_indices(ctx, K)
    inside = np.zeros(ctx.n ** len(K), dtype=bool)
    inside[np.asarray(Y, dtype=np.int64)] = True
    return np.flatnonzero(inside[ctx.project_codes(np.arange(ctx.size), K)])
