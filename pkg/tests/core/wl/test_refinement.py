import pytest

from backend.core.errors import BudgetExceededError, DomainCapExceededError
from backend.core.groups.coloring import ColoredGroup, individualize
from backend.core.groups.group import cyclic, group_by_name
from backend.core.groups.power import PowerContext
from backend.core.partitions.partition import Partition, is_coarser_equal
from backend.core.wl.rainbow import (
    Rainbow,
    check_c1,
    check_c2,
    check_regular,
    class_profiles,
    coherent_config_to_file,
    coordinate_map_generators,
)
from backend.core.wl.refinement import check_c3, initial_rainbow, wl_fixpoint, wl_m_group, wl_step


def test_coordinate_map_generators():
    assert coordinate_map_generators(1) == []
    gens = coordinate_map_generators(3)
    assert (1, 0, 2) in gens
    assert (1, 2, 0) in gens
    assert (0, 0, 2) in gens
    assert coordinate_map_generators(2) == [(1, 0), (0, 0)]


def test_initial_rainbow_m1_splits_identity(z4):
    R = initial_rainbow(z4, 1)
    assert R.partition == Partition.from_classes([[0], [1, 2, 3]], 4)
    assert R.c1_verified and R.c2_verified


def test_initial_rainbow_z2_squared_has_four_classes(z2):
    R = initial_rainbow(z2, 2)
    assert R.num_classes == 4
    assert R.profile(0).rho == (0, 0)


def test_initial_rainbow_keeps_identity_and_diagonal(s3):
    R = initial_rainbow(s3, 2)
    ctx = R.ctx
    assert R.partition.class_sizes[R.partition.class_of[0]] == 1
    diagonal = [ctx.encode((g, g)) for g in range(s3.order)]
    assert R.partition.is_union_of_classes(diagonal)


def test_wl_step_keeps_the_m1_rainbow(z4):
    ctx = PowerContext(z4, 1)
    P = Partition.from_classes([[0], [1, 2, 3]], 4)
    assert wl_step(ctx, P) == P


def test_wl_step_on_discrete(z3):
    ctx = PowerContext(z3, 2)
    assert wl_step(ctx, Partition.discrete(9)) == Partition.discrete(9)


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4", "Z2xZ2", "S3"])
def test_wl1_has_two_classes(name):
    cc = wl_m_group(group_by_name(name), 1)
    assert cc.num_classes == 2


def test_wl_of_trivial_group():
    assert wl_m_group(cyclic(1), 2).num_classes == 1


def test_wl2_z2_is_discrete(z2):
    assert wl_m_group(z2, 2).partition == Partition.discrete(4)


def test_wl2_z4_refines_initial_rainbow(z4):
    cc = wl_m_group(z4, 2)
    R = initial_rainbow(z4, 2)
    assert is_coarser_equal(R.partition, cc.partition)
    assert cc.regularity.regular
    assert check_c3(cc.ctx, cc.partition) is None


def test_colored_wl_separates_individualized_element(z4):
    CG = individualize(ColoredGroup.monochrome(z4), 2)
    cc = wl_m_group(z4, 1, coloring=CG)
    assert cc.partition == Partition.from_classes([[0], [1, 3], [2]], 4)


def test_wl_cap(z4):
    with pytest.raises(DomainCapExceededError):
        wl_m_group(z4, 3, cap=63)


def test_c1_violation(z2):
    ctx = PowerContext(z2, 2)
    witness = check_c1(ctx, Partition.single(4))
    assert witness is not None
    assert witness["X"] == 0


def test_c2_violation(z2):
    ctx = PowerContext(z2, 2)
    # (1,0) and (0,1) are swapped by the transposition but sit in different classes of sizes 2 and 1
    P = Partition.from_classes([[0], [1, 3], [2]], 4)
    assert check_c2(ctx, P) is not None


def test_regularity_violation(z2):
    ctx = PowerContext(z2, 2)
    # over the first coordinate, (e,e) and (e,a) share a fiber that (a,e) has to itself
    uneven = Partition.from_classes([[0, 1, 2], [3]], 4)
    report = check_regular(ctx, uneven)
    assert not report.regular
    assert report.violations[0].X == 0
    assert report.violations[0].values == [1, 2]


def test_coherent_config_file(z3):
    cc = wl_m_group(z3, 2)
    data = coherent_config_to_file(cc)
    assert data.arity == 2
    assert len(data.profiles) == cc.num_classes
    assert all(profile.constant_mu for profile in data.profiles)
    assert len(class_profiles(cc.ctx, cc.partition)) == cc.num_classes


def test_wl_fixpoint_splits_mixed_tuples(z2):
    ctx = PowerContext(z2, 2)
    coarse = Rainbow(ctx, Partition.from_classes([[0], [1, 2], [3]], 4), True, True)
    cc = wl_fixpoint(coarse)
    assert cc.partition == Partition.discrete(4)
    assert cc.c3_verified


def test_wl_fixpoint_round_budget(z2):
    ctx = PowerContext(z2, 2)
    coarse = Rainbow(ctx, Partition.from_classes([[0], [1, 2], [3]], 4), True, True)
    with pytest.raises(BudgetExceededError):
        wl_fixpoint(coarse, round_budget=0)


def test_wl_fixpoint_of_initial_rainbow_matches_wl_m_group(s3):
    assert wl_fixpoint(initial_rainbow(s3, 2)).partition == wl_m_group(s3, 2).partition
