"""Canonical partitions of an indexed domain [0, N)."""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Sequence

import numpy as np
from pydantic import BaseModel, Field

from backend.core.errors import DomainMismatchError


def canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Relabel so class ids are contiguous and ordered by minimal member.

    `labels` is either a 1-D array of keys or a 2-D array whose rows are keys.
    """
    labels = np.asarray(labels)
    if labels.ndim == 1:
        _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    else:
        _, first, inverse = np.unique(labels, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inverse]


def combine_labels(*columns: np.ndarray) -> np.ndarray:
    """Joint key of several label columns as one canonical label array."""
    key = np.zeros(len(columns[0]), dtype=np.int64)
    for column in columns:
        column = canonical_labels(column)
        key = canonical_labels(key * (int(column.max()) + 1) + column)
    return key


@dataclass(frozen=True, eq=False)
class Partition:
    """A partition of [0, N) in canonical form.

    Class ids are 0..r-1 ordered by minimal member, so two partitions are equal
    exactly when their `class_of` arrays are equal.
    """

    class_of: np.ndarray

    def __post_init__(self):
        class_of = np.asarray(self.class_of, dtype=np.int64)
        class_of.flags.writeable = False
        object.__setattr__(self, "class_of", class_of)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        return cls(canonical_labels(np.asarray(labels)))

    @classmethod
    def from_classes(cls, classes: Iterable[Iterable[int]], size: int) -> "Partition":
        labels = np.full(size, -1, dtype=np.int64)
        for c, members in enumerate(classes):
            members = np.asarray(list(members), dtype=np.int64)
            if len(members) and (labels[members] >= 0).any():
                raise ValueError("classes overlap")
            labels[members] = c
        if (labels < 0).any():
            raise ValueError(f"classes do not cover [0, {size})")
        return cls.from_labels(labels)

    @classmethod
    def discrete(cls, size: int) -> "Partition":
        return cls(np.arange(size, dtype=np.int64))

    @classmethod
    def single(cls, size: int) -> "Partition":
        return cls(np.zeros(size, dtype=np.int64))

    @property
    def size(self) -> int:
        return int(len(self.class_of))

    @property
    def num_classes(self) -> int:
        return int(self.class_of.max()) + 1 if self.size else 0

    @cached_property
    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.class_of, minlength=self.num_classes)

    @cached_property
    def classes(self) -> List[np.ndarray]:
        order = np.argsort(self.class_of, kind="stable")
        bounds = np.cumsum(self.class_sizes)[:-1]
        return np.split(order, bounds)

    @cached_property
    def representatives(self) -> np.ndarray:
        """Minimal member of each class."""
        return np.array([members[0] for members in self.classes], dtype=np.int64)

    def members(self, c: int) -> np.ndarray:
        return self.classes[c]

    def is_union_of_classes(self, codes: Sequence[int]) -> bool:
        codes = np.unique(np.asarray(codes, dtype=np.int64))
        touched = np.unique(self.class_of[codes])
        return int(self.class_sizes[touched].sum()) == len(codes)

    def classes_inside(self, codes: Sequence[int]) -> np.ndarray:
        """Ids of the classes contained in `codes`."""
        codes = np.unique(np.asarray(codes, dtype=np.int64))
        counts = np.bincount(self.class_of[codes], minlength=self.num_classes)
        return np.flatnonzero((counts == self.class_sizes) & (counts > 0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return bool(np.array_equal(self.class_of, other.class_of))

    def __hash__(self):
        return hash(self.class_of.tobytes())

    def __repr__(self) -> str:
        return f"Partition(size={self.size}, classes={self.num_classes})"


def _same_domain(P: Partition, Q: Partition) -> None:
    if P.size != Q.size:
        raise DomainMismatchError(f"partitions on domains of size {P.size} and {Q.size}")


def meet(P: Partition, Q: Partition) -> Partition:
    _same_domain(P, Q)
    return Partition(canonical_labels(P.class_of * Q.num_classes + Q.class_of))


def is_coarser_equal(P: Partition, Q: Partition) -> bool:
    """True iff every class of P is a union of classes of Q."""
    _same_domain(P, Q)
    return meet(P, Q).num_classes == Q.num_classes


class PartitionFile(BaseModel):
    domain: int = Field(description="Domain size N")
    class_of: List[int] = Field(description="Class id of every point; canonicalized on load")


def partition_to_file(P: Partition) -> PartitionFile:
    return PartitionFile(domain=P.size, class_of=P.class_of.tolist())


def partition_from_file(data: PartitionFile) -> Partition:
    if len(data.class_of) != data.domain:
        raise DomainMismatchError(f"domain {data.domain} but {len(data.class_of)} labels")
    return Partition.from_labels(np.asarray(data.class_of, dtype=np.int64))
