import numpy as np
import pytest

from backend.core.errors import SchurPowerError
from backend.core.groups.group import group_by_name
from backend.core.groups.power import PowerContext
from backend.core.partitions.partition import Partition
from backend.core.srings.constructions import compute_Am
from backend.core.srings.sring import SRing
from backend.core.srings.distinguished import (
    coordinate_swap_identity,
    diagonal_subgroup,
    distinguished_subsets,
    evaluate_word,
    factor_subgroup,
    generated_extension_check,
    genuine_subgroups,
    product_formula_check,
    product_set,
    sring_groups,
    word_constancy_check,
)


def test_factor_and_diagonal_subgroups(z3):
    ctx = PowerContext(z3, 2)
    assert factor_subgroup(ctx, []).tolist() == [0]
    assert factor_subgroup(ctx, [0]).tolist() == [0, 1, 2]
    assert factor_subgroup(ctx, [1]).tolist() == [0, 3, 6]
    assert diagonal_subgroup(ctx, [0, 1]).tolist() == [0, 4, 8]
    assert len(diagonal_subgroup(ctx, [1])) == 9


def test_product_set(z2):
    ctx = PowerContext(z2, 3)
    X = product_set(ctx, 0, 1, 2)
    assert len(X) == 4
    assert all(ctx.decode(int(x))[2] == ctx.decode(int(x))[0] ^ ctx.decode(int(x))[1] for x in X)


def test_genuine_subgroups(z3):
    ctx = PowerContext(z3, 2)
    subgroups = genuine_subgroups(ctx)
    assert [s.tolist() for s in subgroups] == [[0, 4, 8], [0, 1, 2], [0, 3, 6]]


@pytest.mark.parametrize("name, m", [("Z3", 2), ("Z2", 3), ("Z3", 3)])
def test_distinguished_subsets_of_am(name, m):
    A = compute_Am(group_by_name(name), m)
    subsets, report = distinguished_subsets(A)
    assert report.failures == []
    assert report.product_set_failures == []
    assert subsets.factors[()].tolist() == [0]
    assert len(subsets.diagonals[(0,)]) == A.ctx.size


def test_product_formula(z3):
    assert product_formula_check(compute_Am(z3, 3)) == []


def test_coordinate_swap_identity(z3, z2):
    assert coordinate_swap_identity(compute_Am(z3, 2), 0, 1) == []
    assert coordinate_swap_identity(compute_Am(z2, 3), 2, 0) == []


def test_coordinate_swap_identity_flags_non_invariant_partition(z2):
    ctx = PowerContext(z2, 2)
    # (0,1) and (1,1) share a class and both copy to (1,1), which is not a union of classes
    A = SRing(ctx, Partition.from_classes([[0], [1], [2, 3]], 4))
    assert coordinate_swap_identity(A, 0, 1) == [2]


def test_generated_extension(z3):
    report = generated_extension_check(compute_Am(z3, 3))
    assert report.checked_classes > 0
    assert report.failures == []


def test_evaluate_word(z3):
    ctx = PowerContext(z3, 3)
    x = ctx.encode((1, 2, 2))
    assert evaluate_word(ctx, np.array([x]), [(0, 1), (0, 1)]).tolist() == [2]
    assert evaluate_word(ctx, np.array([x]), [(0, -1)]).tolist() == [2]
    assert evaluate_word(ctx, np.array([x]), []).tolist() == [0]


def test_word_constancy_examples(z3):
    A = compute_Am(z3, 3)
    X = A.class_containing(A.ctx.encode((1, 2, 2)))
    assert word_constancy_check(A, X, 1, [(0, 1), (0, 1)]) is True
    # the empty word asks for x_ell = e
    inside = A.class_containing(A.ctx.encode((1, 0, 0)))
    assert word_constancy_check(A, inside, 2, []) is True
    assert word_constancy_check(A, X, 2, [], k=1) is False


def test_word_constancy_holds_on_every_class(z2):
    A = compute_Am(z2, 3)
    for X in range(A.rank):
        word_constancy_check(A, X, 2, [(0, 1)])


def test_word_constancy_rejects_long_prefix(z3):
    A = compute_Am(z3, 3)
    with pytest.raises(SchurPowerError):
        word_constancy_check(A, 0, 2, [(0, 1)], k=2)
    with pytest.raises(SchurPowerError):
        word_constancy_check(A, 0, 2, [(1, 1)], k=1)
    with pytest.raises(SchurPowerError):
        word_constancy_check(A, 0, 2, [(0, 2)], k=1)


def test_sring_groups_of_am(z3):
    found = sring_groups(compute_Am(z3, 2))
    assert set(found) == {"G{}", "D{}", "G{0}", "G{1}", "D{0}", "D{1}", "G{0,1}", "D{0,1}"}
    assert found["D{0,1}"].tolist() == [0, 4, 8]


def test_sring_groups_of_coarse_sring(z3):
    A = SRing(PowerContext(z3, 2), Partition.from_classes([[0], list(range(1, 9))], 9))
    assert set(sring_groups(A)) == {"G{}", "G{0,1}", "D{0}", "D{1}", "D{}"}
