import pytest

from backend.core.groups.coloring import ColoredGroup, individualize
from backend.core.groups.group import group_by_name, relabel_group
from backend.core.partitions.partition import Partition
from backend.core.srings.constructions import compute_Am
from backend.core.verify.grid import reversed_relabel
from backend.core.verify.harness import (
    check_automorphism_inclusion,
    check_iso_reductions,
    check_iso_theorem,
    check_projection_theorems,
    check_rainbow_properties,
    check_rank5,
    check_sandwich,
    check_stabilization,
    check_tensor_identities,
    check_word_theorem,
    rank5_partition,
)
from backend.core.verify.reports import GroupMap, RelationKind, TheoremId, TheoremReport, Verdict, revalidate


def test_rank5_passes_and_revalidates(z3):
    report = check_rank5(z3)
    assert report.verdict == Verdict.PASS
    assert report.theorem == TheoremId.RANK5
    assert "A_2" in report.artifacts.srings
    assert revalidate(report) == []


def test_rank5_on_z2(z2):
    report = check_rank5(z2)
    assert report.verdict == Verdict.PASS
    assert any("empty" in note for note in report.notes)


def test_rank5_partition_classes(z2):
    assert rank5_partition(z2) == Partition.from_classes([[0], [1], [2], [3]], 4)


def test_tampered_relation_is_caught(z3):
    report = check_rank5(z3)
    report.artifacts.relations[0].holds = False
    assert revalidate(report)


def test_tampered_partition_is_caught(z3):
    report = check_rank5(z3)
    report.artifacts.partitions["expected"].class_of = [0] + [1] * 8
    problems = revalidate(report)
    assert any("stored True, found False" in p for p in problems)


def test_failing_report_needs_a_failing_relation(z3):
    report = check_rank5(z3)
    report.verdict = Verdict.FAIL
    assert revalidate(report) == ["failing report holds no failing relation"]


def test_relate_records_failures(z3):
    report = TheoremReport(theorem=TheoremId.RANK5, groups=[z3.name])
    assert not report.relate(RelationKind.REFINES, "a", "b", False)
    assert report.verdict == Verdict.FAIL
    assert report.witness["finer"] == "a"
    report.fail("second failure", {})
    assert report.witness["statement"] == "a refines b"


def test_stabilization(z4):
    report = check_stabilization(z4, 1, 2)
    assert report.verdict == Verdict.PASS, report.witness
    assert [r.kind for r in report.artifacts.relations][-1] == RelationKind.EQUAL
    assert revalidate(report) == []


def test_stabilization_below_threshold_notes_it(klein):
    report = check_stabilization(klein, 1, 1)
    assert report.verdict == Verdict.PASS
    assert report.parameters["d"] == 2
    assert any("not required" in note for note in report.notes)


def test_sandwich(z2):
    report = check_sandwich(z2, 1)
    assert report.verdict == Verdict.PASS
    assert len(report.artifacts.relations) == 2
    assert revalidate(report) == []


def test_sandwich_skips_beyond_cap(z3):
    report = check_sandwich(z3, 2, cap=20)
    assert report.verdict == Verdict.SKIPPED
    assert len(report.notes) == 2


def test_projection_theorems(z2):
    report = check_projection_theorems(z2, 1)
    assert report.verdict == Verdict.PASS
    assert "pr_m WL_3m" in report.artifacts.srings
    assert revalidate(report) == []


def test_iso_theorem_on_renumbered_group(z3):
    report = check_iso_theorem(z3, reversed_relabel(z3))
    assert report.verdict == Verdict.PASS, report.witness
    assert len(report.artifacts.isomorphisms) == 1
    assert revalidate(report) == []


def test_iso_theorem_on_different_orders(z2, z3):
    report = check_iso_theorem(z2, z3)
    assert report.verdict == Verdict.PASS
    assert "orders differ" in report.notes


def test_tensor_identities(z3):
    report = check_tensor_identities(compute_Am(z3, 2))
    assert report.verdict == Verdict.PASS
    assert report.parameters == {"m": 2}


def test_automorphism_inclusion(z3):
    report = check_automorphism_inclusion(z3, 2)
    assert report.verdict == Verdict.PASS
    assert revalidate(report) == []


@pytest.mark.parametrize("name, m", [("Z2", 3), ("Z3", 2)])
def test_rainbow_properties(name, m):
    report = check_rainbow_properties(group_by_name(name), m)
    assert report.verdict == Verdict.PASS, report.witness
    assert "WL_m" in report.artifacts.partitions
    assert revalidate(report) == []


def test_word_theorem(z3):
    report = check_word_theorem(z3, 3, 20, 0)
    assert report.verdict == Verdict.PASS
    assert report.parameters == {"m": 3, "samples": 20, "seed": 0}


def test_word_theorem_is_reproducible(z3):
    assert check_word_theorem(z3, 3, 10, 7).notes == check_word_theorem(z3, 3, 10, 7).notes


def test_word_theorem_needs_three_coordinates(z3):
    with pytest.raises(ValueError):
        check_word_theorem(z3, 2, 5, 0)


def test_iso_reductions(z4, klein):
    assert check_iso_reductions(z4, z4).verdict == Verdict.PASS
    report = check_iso_reductions(z4, klein)
    assert report.verdict == Verdict.PASS
    assert report.artifacts.isomorphisms == []
    assert revalidate(report) == []


def test_iso_reductions_on_colored_groups(klein):
    mono = ColoredGroup.monochrome(klein)
    report = check_iso_reductions(individualize(mono, 1), individualize(mono, 3), label="individualized")
    assert report.verdict == Verdict.PASS
    assert "individualized" in report.notes
    assert len(report.artifacts.isomorphisms) == 1


def test_same_named_tables_are_stored_apart(z4):
    renumbered = relabel_group(z4, [0, 2, 3, 1])
    assert renumbered.name == z4.name
    report = TheoremReport(theorem=TheoremId.ISO_REDUCTIONS, groups=["Z4", "Z4"])
    source = report.add_group(z4.name, z4.mul)
    target = report.add_group(renumbered.name, renumbered.mul)
    assert (source, target) == ("Z4", "Z4#2")
    assert report.add_group(z4.name, z4.mul) == "Z4"
    report.artifacts.isomorphisms.append(GroupMap(source=source, target=target, map=[0, 2, 3, 1]))
    assert revalidate(report) == []
    report.artifacts.isomorphisms[0] = GroupMap(source=source, target=target, map=[0, 1, 2, 3])
    assert revalidate(report) == ["map Z4 -> Z4#2 is not an isomorphism"]


def test_iso_reductions_on_renumbered_copy_revalidates(z4):
    report = check_iso_reductions(z4, relabel_group(z4, [0, 2, 3, 1]))
    assert report.verdict == Verdict.PASS
    assert set(report.artifacts.groups) == {"Z4", "Z4#2"}
    assert report.artifacts.isomorphisms[0].target == "Z4#2"
    assert revalidate(report) == []
