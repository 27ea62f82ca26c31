"""m-ary rainbows and coherent configurations on G^m, with their condition checkers."""

import itertools
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from backend.core.groups.power import PowerContext, TupleProfile, tuple_profile
from backend.core.partitions.partition import Partition, canonical_labels, combine_labels


def coordinate_map_generators(m: int) -> List[Tuple[int, ...]]:
    """Maps generating every map {0..m-1} -> {0..m-1} under composition.

    A transposition and an m-cycle (with its inverse) give all permutations;
    adding the map that copies slot 0 into slot 1 gives everything else.
    """
    if m < 2:
        return []
    identity = list(range(m))
    transposition = [1, 0] + identity[2:]
    cycle = identity[1:] + [0]
    inverse_cycle = [m - 1] + identity[:-1]
    copy = [0, 0] + identity[2:]
    gens = []
    for sigma in (transposition, cycle, inverse_cycle, copy):
        if tuple(sigma) not in gens:
            gens.append(tuple(sigma))
    return gens


COPY_SLOT = 1  # the non-injective generator writes x_0 into this slot


def check_c1(ctx: PowerContext, P: Partition) -> Optional[Dict[str, Any]]:
    """None when rho is constant on every class, else a witness."""
    if ctx.arity < 2:
        return None
    pattern = canonical_labels(ctx.equality_pattern())
    joint = combine_labels(P.class_of, pattern)
    if Partition(joint).num_classes == P.num_classes:
        return None
    for X, members in enumerate(P.classes):
        values = pattern[members]
        if values.min() != values.max():
            other = int(members[np.argmax(values != values[0])])
            return {"X": X, "x": ctx.decode(int(members[0])), "x_other": ctx.decode(other)}
    return None


def check_c2(ctx: PowerContext, P: Partition) -> Optional[Dict[str, Any]]:
    """None when X^sigma is a class for every class X and every coordinate map sigma."""
    codes = np.arange(ctx.size)
    for sigma in coordinate_map_generators(ctx.arity):
        image = ctx.apply_coordinate_map(codes, sigma)
        target = P.class_of[image]
        for X, members in enumerate(P.classes):
            t = target[members]
            if t.min() != t.max():
                return {"X": X, "sigma": list(sigma), "reason": "image meets two classes"}
            if len(np.unique(image[members])) != int(P.class_sizes[t[0]]):
                return {"X": X, "sigma": list(sigma), "reason": "image is a proper part of a class"}
    return None


class RegularityViolation(BaseModel):
    X: int
    K: List[int]
    values: List[int] = Field(description="Distinct values of n_K(x; X) over x in X")


class RegularityReport(BaseModel):
    regular: bool
    violations: List[RegularityViolation] = Field(default_factory=list)
    counts: List[List[int]] = Field(
        default_factory=list, description="[X, K as bitmask, n_K(X)] for every class and index set"
    )


def check_regular(ctx: PowerContext, P: Partition, max_violations: int = 20) -> RegularityReport:
    """n_K(x; X) = #{y in X : pr_K(y) = pr_K(x)} for every class X and every K, with constancy verdicts."""
    codes = np.arange(ctx.size)
    violations: List[RegularityViolation] = []
    counts: List[List[int]] = []
    r = P.num_classes
    for size in range(ctx.arity + 1):
        for K in itertools.combinations(range(ctx.arity), size):
            projected = ctx.project_codes(codes, K) if K else np.zeros(ctx.size, dtype=np.int64)
            _, inverse, per_pair = np.unique(
                P.class_of * (ctx.n ** len(K)) + projected, return_inverse=True, return_counts=True
            )
            values = per_pair[inverse.reshape(-1)]
            low = np.full(r, np.iinfo(np.int64).max)
            high = np.zeros(r, dtype=np.int64)
            np.minimum.at(low, P.class_of, values)
            np.maximum.at(high, P.class_of, values)
            mask = sum(1 << i for i in K)
            for X in np.flatnonzero(low != high):
                if len(violations) < max_violations:
                    distinct = np.unique(values[P.class_of == X]).tolist()
                    violations.append(RegularityViolation(X=int(X), K=list(K), values=distinct))
            counts.extend([int(X), mask, int(low[X])] for X in np.flatnonzero(low == high))
    return RegularityReport(regular=not violations, violations=violations, counts=counts)


@dataclass(frozen=True, eq=False)
class Rainbow:
    """A partition of G^m with its per-class profiles and verified C1/C2 flags."""

    ctx: PowerContext
    partition: Partition
    c1_verified: bool
    c2_verified: bool

    @property
    def num_classes(self) -> int:
        return self.partition.num_classes

    def profile(self, X: int) -> TupleProfile:
        """rho and mu of the class representative; rho is shared by the class when C1 holds."""
        return tuple_profile(self.ctx, int(self.partition.representatives[X]))

    def __repr__(self) -> str:
        return f"Rainbow({self.ctx.base.name}^{self.ctx.arity}, classes={self.num_classes})"


@dataclass(frozen=True, eq=False)
class CoherentConfig:
    rainbow: Rainbow
    c3_verified: bool
    regularity: RegularityReport = field(repr=False)

    @property
    def ctx(self) -> PowerContext:
        return self.rainbow.ctx

    @property
    def partition(self) -> Partition:
        return self.rainbow.partition

    @property
    def num_classes(self) -> int:
        return self.partition.num_classes

    def __repr__(self) -> str:
        return f"CoherentConfig({self.ctx.base.name}^{self.ctx.arity}, classes={self.num_classes})"


class ClassProfile(BaseModel):
    rho: List[int]
    mu: List[List[int]]
    constant_mu: bool = Field(description="mu is the same for every member of the class")


class CoherentConfigFile(BaseModel):
    group_name: str
    group_order: int
    arity: int
    class_of: List[int]
    profiles: List[ClassProfile]
    n_K: List[List[int]] = Field(description="[X, K as bitmask, n_K(X)]")


def class_profiles(ctx: PowerContext, P: Partition) -> List[ClassProfile]:
    mu_labels = canonical_labels(ctx.product_pattern())
    profiles = []
    for X, members in enumerate(P.classes):
        profile = tuple_profile(ctx, int(members[0]))
        values = mu_labels[members]
        profiles.append(
            ClassProfile(
                rho=list(profile.rho),
                mu=[list(t) for t in profile.mu],
                constant_mu=bool(values.min() == values.max()),
            )
        )
    return profiles


def coherent_config_to_file(cc: CoherentConfig) -> CoherentConfigFile:
    ctx = cc.ctx
    return CoherentConfigFile(
        group_name=ctx.base.name,
        group_order=ctx.n,
        arity=ctx.arity,
        class_of=cc.partition.class_of.tolist(),
        profiles=class_profiles(ctx, cc.partition),
        n_K=cc.regularity.counts,
    )
