"""S-rings over G^m and their structure constants."""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from backend.core.errors import AxiomViolationError, NotAnSRingSetError, TheoremViolationError
from backend.core.groups.group import FiniteGroup, from_table
from backend.core.groups.power import PowerContext
from backend.core.partitions.partition import Partition
from backend.core.srings.pair_counts import count_key, count_of, iter_count_vectors


class AxiomReport(BaseModel):
    s1: bool = Field(description="{identity} is a class")
    s2: bool = Field(description="the inverse of every class is a class")
    s3: bool = Field(description="representation counts are constant on classes")
    witnesses: Dict[str, Dict[str, Any]] = Field(default_factory=dict, description="First violation per axiom")

    @property
    def ok(self) -> bool:
        return self.s1 and self.s2 and self.s3


def inverse_classes(ctx: PowerContext, P: Partition) -> np.ndarray:
    """Class of the inverse of each class representative."""
    return P.class_of[ctx.inverse[P.representatives]]


def _s3_witness(ctx: PowerContext, P: Partition) -> Optional[Dict[str, Any]]:
    rank = P.num_classes
    reference: Dict[int, Tuple[int, np.ndarray, np.ndarray]] = {}
    for z, values, counts in iter_count_vectors(ctx, P.class_of, rank):
        Z = int(P.class_of[z])
        if Z not in reference:
            reference[Z] = (z, values, counts)
            continue
        z0, values0, counts0 = reference[Z]
        if count_key(values, counts) == count_key(values0, counts0):
            continue
        for pair in np.union1d(values, values0):
            c, c0 = count_of(values, counts, pair), count_of(values0, counts0, pair)
            if c != c0:
                X, Y = divmod(int(pair), rank)
                return {"X": X, "Y": Y, "Z": Z, "z": z0, "z_other": z, "count": c0, "count_other": c}
    return None


def verify_axioms(ctx: PowerContext, P: Partition) -> AxiomReport:
    """Check S1-S3 for a partition of G^m and record the first witness of each failure."""
    witnesses: Dict[str, Dict[str, Any]] = {}
    identity_class = P.members(int(P.class_of[0]))
    s1 = len(identity_class) == 1
    if not s1:
        witnesses["s1"] = {"identity_class": identity_class[:8].tolist()}

    inv_of_rep = inverse_classes(ctx, P)
    image = P.class_of[ctx.inverse]
    bad = np.flatnonzero(image != inv_of_rep[P.class_of])
    s2 = len(bad) == 0 and bool(np.array_equal(P.class_sizes[inv_of_rep], P.class_sizes))
    if not s2:
        if len(bad):
            x = int(bad[0])
            witnesses["s2"] = {"X": int(P.class_of[x]), "x": x, "x_inverse_class": int(image[x])}
        else:
            X = int(np.flatnonzero(P.class_sizes[inv_of_rep] != P.class_sizes)[0])
            witnesses["s2"] = {"X": X, "inverse_lies_in": int(inv_of_rep[X])}

    s3_witness = _s3_witness(ctx, P)
    s3 = s3_witness is None
    if not s3:
        witnesses["s3"] = s3_witness
    return AxiomReport(s1=s1, s2=s2, s3=s3, witnesses=witnesses)


@dataclass(frozen=True)
class StructureConstantTensor:
    """Sparse c_{X,Y}^Z of an S-ring."""

    rank: int
    sizes: np.ndarray
    inverse_class: np.ndarray
    entries: Dict[Tuple[int, int, int], int]

    def get(self, X: int, Y: int, Z: int) -> int:
        return self.entries.get((X, Y, Z), 0)

    def nonzero(self) -> List[List[int]]:
        return [[X, Y, Z, c] for (X, Y, Z), c in sorted(self.entries.items())]

    def check_identities(self) -> List[str]:
        """Return descriptions of failed tensor identities (empty when all hold)."""
        failures = []
        totals: Dict[Tuple[int, int], int] = {}
        for (X, Y, Z), c in self.entries.items():
            totals[(X, Y)] = totals.get((X, Y), 0) + c * int(self.sizes[Z])
            mirrored = self.get(int(self.inverse_class[Y]), int(self.inverse_class[X]), int(self.inverse_class[Z]))
            if mirrored != c:
                failures.append(f"c[{X},{Y}->{Z}]={c} but inverse-mirrored constant is {mirrored}")
        # class 0 is {identity}
        identity_rows: Dict[int, Dict[int, int]] = {}
        for (E, Y, Z), c in self.entries.items():
            if E == 0:
                identity_rows.setdefault(Y, {})[Z] = c
        for X in range(self.rank):
            for Y in range(self.rank):
                if totals.get((X, Y), 0) != int(self.sizes[X]) * int(self.sizes[Y]):
                    failures.append(f"sum over Z of c[{X},{Y}->Z]|Z| != |X||Y|")
            if identity_rows.get(X) != {X: 1}:
                failures.append(f"identity row of class {X} is {identity_rows.get(X)}")
        return failures


def structure_constants(ctx: PowerContext, P: Partition) -> StructureConstantTensor:
    """Exact structure constants, read off class representatives.

    Raises:
        AxiomViolationError: if the counts are not constant on some class.
    """
    witness = _s3_witness(ctx, P)
    if witness is not None:
        raise AxiomViolationError("S3", witness)
    rank = P.num_classes
    entries: Dict[Tuple[int, int, int], int] = {}
    for z, values, counts in iter_count_vectors(ctx, P.class_of, rank, P.representatives):
        Z = int(P.class_of[z])
        for pair, c in zip(values.tolist(), counts.tolist()):
            X, Y = divmod(pair, rank)
            entries[(X, Y, Z)] = c
    return StructureConstantTensor(
        rank=rank, sizes=P.class_sizes, inverse_class=inverse_classes(ctx, P), entries=entries
    )


@dataclass(frozen=True, eq=False)
class SRing:
    """An S-ring over the group G^m described by `ctx`.

    Class 0 is always {identity}. The tensor is computed on first use.
    """

    ctx: PowerContext
    partition: Partition

    @property
    def rank(self) -> int:
        return self.partition.num_classes

    @property
    def group(self) -> FiniteGroup:
        return self.ctx.base

    @cached_property
    def tensor(self) -> StructureConstantTensor:
        logger.debug(f"Computing structure constants of a rank {self.rank} S-ring on {self.ctx.size} points")
        return structure_constants(self.ctx, self.partition)

    @cached_property
    def inverse_class(self) -> np.ndarray:
        return inverse_classes(self.ctx, self.partition)

    def class_members(self, X: int) -> np.ndarray:
        return self.partition.members(X)

    def class_containing(self, code: int) -> int:
        return int(self.partition.class_of[code])

    def is_sring_set(self, codes: Sequence[int]) -> bool:
        return self.partition.is_union_of_classes(codes)

    def is_sring_group(self, codes: Sequence[int]) -> bool:
        return self.is_sring_set(codes) and self.ctx.is_subgroup(codes)

    def __repr__(self) -> str:
        return f"SRing({self.group.name}^{self.ctx.arity}, rank={self.rank})"


def n_of(A: SRing, X: int, H: Sequence[int]) -> int:
    """n(X, H) as the sum of c_{Y,X}^X over classes Y inside H, checked against |X cap Hx|.

    Raises:
        NotAnSRingSetError: if H is not an S-ring subgroup of A.
        AxiomViolationError: if |X cap Hx| depends on x in X.
    """
    H = np.unique(np.asarray(H, dtype=np.int64))
    if not A.is_sring_group(H):
        raise NotAnSRingSetError("H is not a subgroup that is a union of classes")
    by_constants = sum(A.tensor.get(int(Y), X, X) for Y in A.partition.classes_inside(H))

    members = A.class_members(X)
    in_X = np.zeros(A.ctx.size, dtype=bool)
    in_X[members] = True
    cosets = A.ctx.mul_codes(H[:, None], members[None, :])
    counts = in_X[cosets].sum(axis=0)
    if counts.min() != counts.max():
        x = int(members[int(np.argmax(counts != counts[0]))])
        raise AxiomViolationError("constant |X cap Hx|", {"X": X, "x": int(members[0]), "x_other": x})
    if int(counts[0]) != by_constants:
        raise TheoremViolationError(
            "n(X,H) agrees for both formulas", {"X": X, "constants": by_constants, "cosets": int(counts[0])}
        )
    return by_constants


class CarrierDescriptor(BaseModel):
    group_name: str = Field(description="Name of the base group G")
    group_order: int = Field(description="n = |G|")
    arity: int = Field(description="m; the carrier is G^m with mixed-radix codes")
    mul: List[List[int]] = Field(description="Cayley table of G")


class SRingFile(BaseModel):
    carrier: CarrierDescriptor
    rank: int
    class_of: List[int] = Field(description="Class id of every tuple code")
    structure_constants: Optional[List[List[int]]] = Field(
        default=None, description="Nonzero [X, Y, Z, c] quadruples"
    )


def sring_to_file(A: SRing, with_constants: bool = False) -> SRingFile:
    return SRingFile(
        carrier=CarrierDescriptor(
            group_name=A.group.name, group_order=A.group.order, arity=A.ctx.arity, mul=A.group.mul.tolist()
        ),
        rank=A.rank,
        class_of=A.partition.class_of.tolist(),
        structure_constants=A.tensor.nonzero() if with_constants else None,
    )


def sring_from_file(data: SRingFile, check: bool = True) -> SRing:
    G = from_table(data.carrier.mul, name=data.carrier.group_name)
    ctx = PowerContext(G, data.carrier.arity)
    P = Partition.from_labels(np.asarray(data.class_of, dtype=np.int64))
    if P.size != ctx.size:
        raise AxiomViolationError("carrier size", {"expected": ctx.size, "got": P.size})
    if check:
        report = verify_axioms(ctx, P)
        if not report.ok:
            raise AxiomViolationError("S-ring axioms", report.witnesses)
    return SRing(ctx, P)
