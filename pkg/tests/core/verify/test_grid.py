import asyncio

from backend.core.env import DEFAULT_GRID
from backend.core.groups.group import group_by_name, is_isomorphism
from backend.core.verify.grid import (
    GridJob,
    WORD_CASES,
    _guarded,
    default_jobs,
    failures,
    limited,
    reversed_relabel,
    run_job,
    run_jobs,
    stabilization_range,
    summary_table,
)
from backend.core.verify.reports import TheoremId, TheoremReport, Verdict


def test_reversed_relabel(z4, s3):
    renamed = reversed_relabel(z4)
    assert renamed.name == "Z4'"
    assert is_isomorphism(z4, renamed, [0, 3, 2, 1])
    assert reversed_relabel(s3).order == 6


def test_default_jobs_cover_every_check():
    jobs = default_jobs(["Z2", "Z3"], samples=5)
    theorems = {job.theorem for job in jobs}
    assert theorems == set(TheoremId)
    assert GridJob(theorem=TheoremId.ISO_THEOREM, groups=["Z2", "Z2'"]) in jobs
    words = [job for job in jobs if job.theorem == TheoremId.WORD]
    assert len(words) == len(WORD_CASES)
    assert all(job.parameters["samples"] == 5 for job in words)


def test_default_jobs_respect_stabilization_cap():
    jobs = default_jobs(["Z3"], stabilization_cap=27)
    stabilization = [job.parameters for job in jobs if job.theorem == TheoremId.STABILIZATION]
    assert all(3 ** (p["m"] + p["k"]) <= 27 for p in stabilization)
    assert {"m": 1, "k": 2, "cap": 27} in stabilization
    assert not any(p["m"] == 3 for p in stabilization)


def test_stabilization_range():
    assert stabilization_range(2, 8) == [(1, 1), (1, 2), (2, 1)]
    assert stabilization_range(5, 16) == []
    assert stabilization_range(1, 2**16) == [(1, 1)]


def test_default_jobs_cover_stabilization_up_to_2_16():
    jobs = default_jobs()
    covered = {
        (job.groups[0], job.parameters["m"], job.parameters["k"])
        for job in jobs
        if job.theorem == TheoremId.STABILIZATION
    }
    expected = {
        (name, m, k)
        for name in DEFAULT_GRID
        for m in range(1, 16)
        for k in range(1, 16)
        if group_by_name(name).order ** (m + k) <= 2**16
    }
    assert covered == expected
    assert ("Z2", 15, 1) in covered
    assert ("Z4", 4, 4) in covered


def test_run_job_rebuilds_primed_groups():
    report = run_job(GridJob(theorem=TheoremId.ISO_REDUCTIONS, groups=["Z3", "Z3'"]))
    assert report.verdict == Verdict.PASS
    assert report.groups == ["Z3", "Z3'"]


def test_run_jobs_keeps_job_order():
    jobs = [
        GridJob(theorem=TheoremId.RANK5, groups=["Z3"]),
        GridJob(theorem=TheoremId.RANK5, groups=["Z2"]),
        GridJob(theorem=TheoremId.TENSOR_IDENTITIES, groups=["Z2"], parameters={"m": 2}),
    ]
    reports = asyncio.run(run_jobs(jobs, threads=2))
    assert [(r.theorem, r.groups) for r in reports] == [(job.theorem, job.groups) for job in jobs]
    assert all(r.verdict == Verdict.PASS for r in reports)
    assert all(r.elapsed_seconds is None for r in reports)


def test_cap_errors_become_skipped():
    job = GridJob(theorem=TheoremId.STABILIZATION, groups=["Z3"], parameters={"m": 1, "k": 1})
    report = _guarded(job, cap=4, budget=1000, timings=True)
    assert report.verdict == Verdict.SKIPPED
    assert report.notes[0].startswith("cap-skipped")
    assert report.elapsed_seconds is not None


def test_other_errors_become_failures():
    job = GridJob(theorem=TheoremId.ISO_REDUCTIONS, groups=["Z3", "Z3"], parameters={"individualize_a": 7})
    report = _guarded(job, cap=10**6, budget=10**6, timings=False)
    assert report.verdict == Verdict.FAIL
    assert report.witness["error"] == "InvalidGroupError"


def test_summary_table_and_failures():
    passing = TheoremReport(theorem=TheoremId.RANK5, groups=["Z3"], parameters={"m": 2}, notes=["ok"])
    failing = TheoremReport(theorem=TheoremId.ISO_THEOREM, groups=["Z4", "Z2xZ2"])
    failing.fail("verdicts agree", {})
    df = summary_table([passing, failing])
    assert list(df.columns) == ["theorem", "groups", "parameters", "verdict", "notes"]
    assert df.loc[0, "parameters"] == "m=2"
    assert df.loc[1, "groups"] == "Z4 vs Z2xZ2"
    assert df["verdict"].tolist() == ["pass", "fail"]
    assert failures([passing, failing]) == [failing]


def test_empty_summary_table():
    assert summary_table([]).empty


def test_limited_reports():
    skipped = TheoremReport(theorem=TheoremId.RANK5, groups=["Z3"], verdict=Verdict.SKIPPED)
    budget = TheoremReport(theorem=TheoremId.RANK5, groups=["Z4"], verdict=Verdict.BUDGET)
    passing = TheoremReport(theorem=TheoremId.RANK5, groups=["Z2"])
    assert limited([skipped, passing, budget]) == [skipped, budget]
