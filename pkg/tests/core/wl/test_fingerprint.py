import pytest

from backend.core.errors import TheoremViolationError
from backend.core.groups.coloring import ColoredGroup, individualize
from backend.core.groups.group import group_by_name
from backend.core.partitions.partition import Partition, is_coarser_equal
from backend.core.wl.fingerprint import (
    WLDimensionProbe,
    joint_colorings,
    joint_fingerprint,
    match_colors,
    probe_wl_dimension,
    verify_color_matching,
)
from backend.core.wl.projections import cc_from_sring, sring_from_wl3m
from backend.core.wl.refinement import wl_m_group


def test_identical_groups_are_equivalent(s3):
    result = joint_fingerprint((s3, None), (s3, None), 2)
    assert result.equal
    assert result.transcript[-1]["equal"]
    first, second = result.fingerprints
    assert [e.size for e in first.entries] == [e.size for e in second.entries]


def test_renumbered_group_is_equivalent(z4, z4_renumbered):
    assert joint_fingerprint((z4, None), (z4_renumbered, None), 2).equal


def test_z4_and_klein_differ_at_arity_two(z4, klein):
    result = joint_fingerprint((z4, None), (klein, None), 2)
    assert not result.equal
    assert result.rounds == 0


def test_different_orders_short_circuit(z3, z4):
    result = joint_fingerprint((z3, None), (z4, None), 1)
    assert not result.equal
    assert result.transcript[0]["reason"] == "orders differ"
    assert result.fingerprints == []


def test_color_matching_confirms_positive_verdict(z4, z4_renumbered):
    report = verify_color_matching((z4, None), (z4_renumbered, None), 2)
    assert report.fingerprint_equal
    assert report.checked
    assert report.discrepancies == []


def test_match_colors_on_precomputed_coloring(z4, z4_renumbered, klein):
    report = match_colors(*joint_colorings((z4, None), (z4_renumbered, None), 2))
    assert report.checked
    assert report.discrepancies == []
    assert not match_colors(*joint_colorings((z4, None), (klein, None), 2)).checked


def test_color_matching_skips_negative_verdict(z4, klein):
    report = verify_color_matching((z4, None), (klein, None), 2)
    assert not report.fingerprint_equal
    assert not report.checked


def test_probe_wl_dimension(z4, klein):
    probe = probe_wl_dimension(z4, klein, [2, 1])
    assert probe.verdicts == {1: True, 2: False}
    assert probe.first_distinguishing() == 2


def test_probe_rejects_non_monotone_verdicts():
    probe = WLDimensionProbe(names=("G", "H"))
    probe.record(1, False)
    with pytest.raises(TheoremViolationError):
        probe.record(2, True)


def test_probe_without_distinction():
    probe = WLDimensionProbe(names=("G", "H"))
    probe.record(1, True)
    assert probe.first_distinguishing() is None


@pytest.mark.parametrize("name", ["Z2", "Z3"])
def test_sring_from_wl3m_has_rank_two(name):
    A, report = sring_from_wl3m(group_by_name(name), 1)
    assert A.rank == 2
    assert report.conditions == {"S1": True, "S2": True, "S3": True}
    assert report.refines["A_m"]
    assert not report.merged


def test_sring_from_wl3m_on_z4_refines_trivial(z4):
    A, _ = sring_from_wl3m(z4, 1)
    assert is_coarser_equal(Partition.from_classes([[0], [1, 2, 3]], 4), A.partition)


@pytest.mark.parametrize("name, m", [("Z3", 2), ("Z2", 2), ("Z4", 1)])
def test_cc_from_sring(name, m):
    cc, report = cc_from_sring(group_by_name(name), m)
    assert all(report.conditions.values())
    assert cc.ctx.arity == m
    if m >= 2:
        assert report.refines["WL_m"]


def test_sandwich_second_inclusion_on_z4(z4):
    cc, report = cc_from_sring(z4, 2)
    assert report.source_arity == 3
    assert cc.ctx.size == 16
    assert is_coarser_equal(wl_m_group(z4, 2).partition, cc.partition)


@pytest.mark.parametrize(
    "a, b, m",
    [("Z4", "Z2xZ2", 1), ("Z4", "Z2xZ2", 2), ("S3", "Z6", 2), ("Q8", "D4", 1), ("Z5", "Z5", 2)],
)
def test_fingerprint_is_symmetric(a, b, m):
    G, H = group_by_name(a), group_by_name(b)
    forward = joint_fingerprint((G, None), (H, None), m)
    backward = joint_fingerprint((H, None), (G, None), m)
    assert forward.equal == backward.equal
    assert forward.rounds == backward.rounds
    assert [t["colors"] for t in forward.transcript] == [t["colors"] for t in backward.transcript]
    for mine, theirs in zip(forward.fingerprints, reversed(backward.fingerprints)):
        assert sorted(e.size for e in mine.entries) == sorted(e.size for e in theirs.entries)


def test_colored_fingerprint_is_symmetric(z4):
    first = (z4, individualize(ColoredGroup.monochrome(z4), 1))
    second = (z4, individualize(ColoredGroup.monochrome(z4), 2))
    assert joint_fingerprint(first, second, 1).equal == joint_fingerprint(second, first, 1).equal
