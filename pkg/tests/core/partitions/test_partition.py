import numpy as np
import pytest

from backend.core.errors import DomainMismatchError
from backend.core.partitions.partition import (
    Partition,
    PartitionFile,
    canonical_labels,
    combine_labels,
    is_coarser_equal,
    meet,
    partition_from_file,
    partition_to_file,
)
from backend.core.partitions.union_find import UnionFind


def test_canonical_labels_order_by_first_member():
    assert canonical_labels(np.array([5, 5, 3, 3, 5, 9])).tolist() == [0, 0, 1, 1, 0, 2]


def test_canonical_labels_of_rows():
    rows = np.array([[1, 0], [0, 1], [1, 0]])
    assert canonical_labels(rows).tolist() == [0, 1, 0]


def test_combine_labels_is_the_joint_key():
    assert combine_labels(np.array([0, 0, 1, 1]), np.array([0, 1, 0, 1])).tolist() == [0, 1, 2, 3]
    assert combine_labels(np.array([0, 0, 1, 1]), np.array([7, 7, 7, 7])).tolist() == [0, 0, 1, 1]


def test_partition_basics():
    P = Partition.from_classes([[3, 1], [0], [2, 4]], 5)
    assert P.class_of.tolist() == [0, 1, 2, 1, 2]
    assert P.num_classes == 3
    assert P.class_sizes.tolist() == [1, 2, 2]
    assert [c.tolist() for c in P.classes] == [[0], [1, 3], [2, 4]]
    assert P.representatives.tolist() == [0, 1, 2]
    assert P == Partition.from_labels([9, 4, 6, 4, 6])
    assert hash(P) == hash(Partition.from_labels([9, 4, 6, 4, 6]))


def test_from_classes_rejects_overlap_and_gaps():
    with pytest.raises(ValueError):
        Partition.from_classes([[0, 1], [1, 2]], 3)
    with pytest.raises(ValueError):
        Partition.from_classes([[0, 1]], 3)


def test_union_of_classes():
    P = Partition.from_classes([[0], [1, 3], [2, 4]], 5)
    assert P.is_union_of_classes([1, 3, 0])
    assert not P.is_union_of_classes([1, 2])
    assert P.classes_inside([0, 1, 2, 3]).tolist() == [0, 1]


def test_meet_examples():
    P = Partition.from_classes([[0, 1], [2, 3]], 4)
    Q = Partition.from_classes([[0, 2], [1, 3]], 4)
    assert meet(P, Q) == Partition.discrete(4)
    assert meet(P, P) == P
    assert meet(P, Partition.discrete(4)) == Partition.discrete(4)
    assert meet(P, Q) == meet(Q, P)


def test_is_coarser_equal_examples():
    P = Partition.from_classes([[0, 1], [2]], 3)
    assert is_coarser_equal(Partition.single(3), P)
    assert is_coarser_equal(P, Partition.discrete(3))
    assert not is_coarser_equal(Partition.discrete(3), P)
    assert is_coarser_equal(Partition.discrete(3), Partition.discrete(3))
    assert is_coarser_equal(P, meet(P, Partition.from_classes([[0], [1, 2]], 3)))


def test_meet_properties_on_random_partitions():
    rng = np.random.default_rng(7)
    for _ in range(20):
        P, Q, R = (Partition.from_labels(rng.integers(0, 6, size=64)) for _ in range(3))
        assert meet(meet(P, Q), R) == meet(P, meet(Q, R))
        assert is_coarser_equal(P, meet(P, Q))
        assert is_coarser_equal(Q, meet(P, Q))


def test_domain_mismatch():
    with pytest.raises(DomainMismatchError):
        meet(Partition.single(3), Partition.single(4))
    with pytest.raises(DomainMismatchError):
        is_coarser_equal(Partition.single(3), Partition.single(4))


def test_partition_file_canonicalizes():
    P = partition_from_file(PartitionFile(domain=4, class_of=[3, 3, 1, 0]))
    assert P.class_of.tolist() == [0, 0, 1, 2]
    assert partition_to_file(P).class_of == [0, 0, 1, 2]
    with pytest.raises(DomainMismatchError):
        partition_from_file(PartitionFile(domain=5, class_of=[0, 0]))


def test_union_find():
    uf = UnionFind(range(5))
    assert uf.union(0, 1)
    assert uf.union(3, 4)
    assert not uf.union(1, 0)
    assert uf.find(1) == uf.find(0)
    assert uf.find(4) == uf.find(3) != uf.find(0)
    assert uf.find(2) == 2
