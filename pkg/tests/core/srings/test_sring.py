import numpy as np
import pytest

from backend.core.errors import AxiomViolationError, DomainCapExceededError, NotAnSRingSetError
from backend.core.groups.group import cyclic, group_by_name
from backend.core.groups.power import PowerContext
from backend.core.partitions.partition import Partition, is_coarser_equal
from backend.core.srings.closure import schur_closure
from backend.core.srings.constructions import compute_Am
from backend.core.srings.distinguished import factor_subgroup
from backend.core.srings.sring import (
    SRing,
    SRingFile,
    n_of,
    sring_from_file,
    sring_to_file,
    structure_constants,
    verify_axioms,
)


def test_group_ring_partition_passes(z4):
    report = verify_axioms(PowerContext(z4, 1), Partition.discrete(4))
    assert report.ok
    assert report.witnesses == {}


def test_identity_not_alone_fails_s1(z3):
    report = verify_axioms(PowerContext(z3, 1), Partition.from_classes([[0, 1], [2]], 3))
    assert not report.s1
    assert "s1" in report.witnesses


def test_class_not_closed_under_inverse_fails_s2(z4):
    report = verify_axioms(PowerContext(z4, 1), Partition.from_classes([[0], [1], [2, 3]], 4))
    assert not report.s2
    assert not report.ok


def test_uneven_counts_fail_s3():
    # 1 + 1 = 2 but 3 is not a sum of two elements of {1, 6}
    ctx = PowerContext(cyclic(7), 1)
    report = verify_axioms(ctx, Partition.from_classes([[0], [1, 6], [2, 3, 4, 5]], 7))
    assert report.s1 and report.s2
    assert not report.s3
    assert set(report.witnesses["s3"]) >= {"X", "Y", "Z", "count", "count_other"}


def test_automorphism_orbits_pass(z4):
    assert verify_axioms(PowerContext(z4, 1), Partition.from_classes([[0], [1, 3], [2]], 4)).ok
    assert verify_axioms(PowerContext(z4, 1), Partition.from_classes([[0], [1, 2, 3]], 4)).ok


def test_structure_constants_of_trivial_sring(z3):
    T = structure_constants(PowerContext(z3, 1), Partition.from_classes([[0], [1, 2]], 3))
    assert T.get(1, 1, 0) == 2
    assert T.get(1, 1, 1) == 1
    assert T.get(0, 1, 1) == 1
    assert T.check_identities() == []


def test_structure_constants_reject_non_srings(z4):
    P = Partition.from_classes([[0], [1], [2, 3]], 4)
    with pytest.raises(AxiomViolationError):
        structure_constants(PowerContext(z4, 1), P)


def test_closure_of_single_class_is_trivial(z4):
    A = schur_closure(PowerContext(z4, 1), Partition.single(4))
    assert A.rank == 2
    assert A.partition == Partition.from_classes([[0], [1, 2, 3]], 4)


def test_closure_respects_cap(z4):
    with pytest.raises(DomainCapExceededError):
        schur_closure(PowerContext(z4, 3), Partition.single(64), cap=63)


def test_closure_is_idempotent(s3):
    A = compute_Am(s3, 2)
    again = schur_closure(A.ctx, A.partition)
    assert again.partition == A.partition


def test_n_of_complement_over_first_factor(z3):
    A = compute_Am(z3, 2)
    complement = A.class_containing(A.ctx.encode((2, 1)))
    assert n_of(A, complement, factor_subgroup(A.ctx, [0])) == 1


def test_n_of_identity_subgroup(z3):
    A = compute_Am(z3, 2)
    for X in range(A.rank):
        assert n_of(A, X, [0]) == 1


def test_n_of_requires_sring_subgroup(z3):
    A = compute_Am(z3, 2)
    with pytest.raises(NotAnSRingSetError):
        n_of(A, 1, [0, 1])


def test_sring_file_roundtrip(z3):
    A = compute_Am(z3, 2)
    data = SRingFile.model_validate(sring_to_file(A, with_constants=True).model_dump())
    assert data.rank == 5
    assert data.structure_constants
    loaded = sring_from_file(data)
    assert loaded.partition == A.partition
    assert np.array_equal(loaded.group.mul, z3.mul)


def test_sring_file_rejects_non_sring(z4):
    data = sring_to_file(SRing(PowerContext(z4, 1), Partition.discrete(4)))
    data.class_of = [0, 1, 2, 2]
    with pytest.raises(AxiomViolationError):
        sring_from_file(data)


def test_sring_set_and_group(z3):
    A = compute_Am(z3, 2)
    G0 = factor_subgroup(A.ctx, [0])
    assert A.is_sring_group(G0)
    assert not A.is_sring_group([0, 1])
    assert A.is_sring_set(np.arange(9))


def _set_partitions(n):
    """Every partition of range(n) as a restricted growth string."""

    def grow(labels, top):
        if len(labels) == n:
            yield labels
            return
        for label in range(top + 2):
            yield from grow(labels + [label], max(top, label))

    yield from grow([0], 0)


@pytest.mark.parametrize("name, m", [("Z4", 1), ("Z2xZ2", 1), ("Z2", 2), ("Z5", 1), ("S3", 1)])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_closure_is_coarsest_sring_below_random_partition(name, m, seed):
    ctx = PowerContext(group_by_name(name), m)
    rng = np.random.default_rng(seed)
    P = Partition.from_labels(rng.integers(0, 3, size=ctx.size))
    closure = schur_closure(ctx, P).partition
    assert is_coarser_equal(P, closure)
    below = [
        Q
        for Q in (Partition.from_labels(np.array(labels)) for labels in _set_partitions(ctx.size))
        if is_coarser_equal(P, Q) and verify_axioms(ctx, Q).ok
    ]
    assert closure in below
    assert all(is_coarser_equal(closure, Q) for Q in below)
