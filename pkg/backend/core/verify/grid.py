"""Runs theorem checks over a grid of small groups and summarizes the verdicts."""

import asyncio
import itertools
import time
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import BaseModel, Field

from backend.core.env import DEFAULT_GRID, DOMAIN_CAP, SEARCH_BUDGET, STABILIZATION_CAP, THREADS
from backend.core.errors import BudgetExceededError, DomainCapExceededError, SchurPowerError
from backend.core.groups.coloring import ColoredGroup, individualize
from backend.core.groups.group import FiniteGroup, group_by_name, relabel_group
from backend.core.srings.constructions import compute_Am
from backend.core.verify import harness
from backend.core.verify.reports import TheoremId, TheoremReport, Verdict

# Largest carriers used by the default grid for each kind of check
SANDWICH_CAP = 4096
RAINBOW_CAP = 4096
ISO_THEOREM_MAX_ORDER = 4
ISO_REDUCTION_MAX_ORDER = 12
AUT_INCLUSION_MAX_ORDER = 8
WORD_CASES = [("Z3", 3), ("Z2xZ2", 4), ("Z4", 3)]


class GridJob(BaseModel):
    theorem: TheoremId
    groups: List[str]
    parameters: Dict[str, int] = Field(default_factory=dict)


def reversed_relabel(G: FiniteGroup) -> FiniteGroup:
    """G renumbered by reversing its non-identity elements, named with a trailing prime."""
    perm = np.r_[0, np.arange(G.order - 1, 0, -1)] if G.order > 1 else np.zeros(1, dtype=np.int64)
    return relabel_group(G, perm, name=f"{G.name}'")


def _group(name: str) -> FiniteGroup:
    if name.endswith("'"):
        return reversed_relabel(group_by_name(name[:-1]))
    return group_by_name(name)


def _colored(name: str, individualized: int) -> ColoredGroup:
    CG = ColoredGroup.monochrome(_group(name))
    return individualize(CG, individualized) if individualized >= 0 else CG


def run_job(job: GridJob, cap: int = DOMAIN_CAP, budget: int = SEARCH_BUDGET) -> TheoremReport:
    """Run one check from Cayley tables rebuilt by name."""
    p = job.parameters
    cap = min(cap, p.get("cap", cap))
    groups = [_group(name) for name in job.groups]
    G = groups[0]
    checks: Dict[TheoremId, Callable[[], TheoremReport]] = {
        TheoremId.STABILIZATION: lambda: harness.check_stabilization(G, p["m"], p["k"], cap=cap),
        TheoremId.SANDWICH: lambda: harness.check_sandwich(G, p["m"], cap=cap),
        TheoremId.ISO_THEOREM: lambda: harness.check_iso_theorem(G, groups[1], cap=cap, budget=budget),
        TheoremId.PROJECTIONS: lambda: harness.check_projection_theorems(G, p["m"], cap=cap),
        TheoremId.RANK5: lambda: harness.check_rank5(G, cap=cap),
        TheoremId.WORD: lambda: harness.check_word_theorem(G, p["m"], p["samples"], p["seed"], cap=cap),
        TheoremId.TENSOR_IDENTITIES: lambda: harness.check_tensor_identities(compute_Am(G, p["m"], cap=cap)),
        TheoremId.AUTOMORPHISM_INCLUSION: lambda: harness.check_automorphism_inclusion(G, p["m"], cap=cap),
        TheoremId.RAINBOW: lambda: harness.check_rainbow_properties(G, p["m"], cap=cap),
        TheoremId.ISO_REDUCTIONS: lambda: harness.check_iso_reductions(
            _colored(job.groups[0], p.get("individualize_a", -1)),
            _colored(job.groups[1], p.get("individualize_b", -1)),
            budget=budget,
        ),
    }
    return checks[job.theorem]()


def _guarded(job: GridJob, cap: int, budget: int, timings: bool) -> TheoremReport:
    start = time.perf_counter()
    base = TheoremReport(theorem=job.theorem, groups=job.groups, parameters=job.parameters)
    try:
        report = run_job(job, cap=cap, budget=budget)
    except DomainCapExceededError as e:
        logger.warning(f"{job.theorem.value} {job.groups} skipped: {e}")
        report = base.model_copy(update={"verdict": Verdict.SKIPPED, "notes": [f"cap-skipped: {e}"]})
    except BudgetExceededError as e:
        logger.warning(f"{job.theorem.value} {job.groups} ran out of budget: {e}")
        report = base.model_copy(update={"verdict": Verdict.BUDGET, "notes": [str(e)]})
    except SchurPowerError as e:
        logger.error(f"{job.theorem.value} {job.groups} failed: {e}")
        base.fail(str(e), {"error": type(e).__name__})
        report = base
    if timings:
        report.elapsed_seconds = round(time.perf_counter() - start, 3)
    logger.info(f"{job.theorem.value} {job.groups} {job.parameters}: {report.verdict.value}")
    return report


async def run_jobs(
    jobs: Sequence[GridJob],
    threads: int = THREADS,
    cap: int = DOMAIN_CAP,
    budget: int = SEARCH_BUDGET,
    timings: bool = False,
) -> List[TheoremReport]:
    """Run jobs concurrently, at most `threads` at a time; reports come back in job order."""
    semaphore = asyncio.Semaphore(max(1, threads))

    async def run_one(job: GridJob) -> TheoremReport:
        async with semaphore:
            return await asyncio.to_thread(_guarded, job, cap, budget, timings)

    return await asyncio.gather(*(run_one(job) for job in jobs))


def stabilization_range(n: int, cap: int) -> List[Tuple[int, int]]:
    """Every (m, k) with m, k >= 1 and n^(m+k) <= cap; only (1, 1) for the trivial group."""
    if n <= 1:
        return [(1, 1)]
    pairs = []
    total = 2
    while n**total <= cap:
        pairs.extend((m, total - m) for m in range(1, total))
        total += 1
    return pairs


def default_jobs(
    names: Sequence[str] = DEFAULT_GRID,
    stabilization_cap: int = STABILIZATION_CAP,
    samples: int = 100,
    seed: int = 0,
    max_arity: int = 3,
) -> List[GridJob]:
    """The default grid: every check at every (group, parameters) admitted by the per-check caps."""
    orders = {name: group_by_name(name).order for name in names}
    jobs: List[GridJob] = []

    def add(theorem: TheoremId, groups: List[str], **parameters: Any) -> None:
        jobs.append(GridJob(theorem=theorem, groups=groups, parameters=parameters))

    for name in names:
        n = orders[name]
        add(TheoremId.RANK5, [name])
        add(TheoremId.TENSOR_IDENTITIES, [name], m=2)
        for m, k in stabilization_range(n, stabilization_cap):
            add(TheoremId.STABILIZATION, [name], m=m, k=k, cap=stabilization_cap)
        for m in (1, 2):
            if n ** (3 * m) <= SANDWICH_CAP or n ** (m + 1) <= SANDWICH_CAP:
                add(TheoremId.SANDWICH, [name], m=m, cap=SANDWICH_CAP)
                add(TheoremId.PROJECTIONS, [name], m=m, cap=SANDWICH_CAP)
        for m in range(2, max_arity + 1):
            if n**m <= RAINBOW_CAP:
                add(TheoremId.RAINBOW, [name], m=m, cap=RAINBOW_CAP)
        if n <= AUT_INCLUSION_MAX_ORDER:
            add(TheoremId.AUTOMORPHISM_INCLUSION, [name], m=2)
        if n <= ISO_THEOREM_MAX_ORDER:
            add(TheoremId.ISO_THEOREM, [name, f"{name}'"])
    for a, b in itertools.combinations(names, 2):
        if orders[a] == orders[b] and orders[a] <= ISO_THEOREM_MAX_ORDER:
            add(TheoremId.ISO_THEOREM, [a, b])
    for a, b in itertools.combinations_with_replacement(names, 2):
        if orders[a] != orders[b] or orders[a] > ISO_REDUCTION_MAX_ORDER:
            continue
        add(TheoremId.ISO_REDUCTIONS, [a, b])
        if orders[a] > 1:
            add(TheoremId.ISO_REDUCTIONS, [a, b], individualize_a=1, individualize_b=1)
            add(TheoremId.ISO_REDUCTIONS, [a, b], individualize_a=1, individualize_b=min(2, orders[b] - 1))
    for name, m in WORD_CASES:
        add(TheoremId.WORD, [name], m=m, samples=samples, seed=seed)
    return jobs


def run_default_grid(
    names: Sequence[str] = DEFAULT_GRID,
    threads: int = THREADS,
    cap: int = DOMAIN_CAP,
    budget: int = SEARCH_BUDGET,
    stabilization_cap: int = STABILIZATION_CAP,
    samples: int = 100,
    seed: int = 0,
    timings: bool = False,
) -> List[TheoremReport]:
    jobs = default_jobs(names, stabilization_cap=stabilization_cap, samples=samples, seed=seed)
    logger.info(f"Running {len(jobs)} theorem checks on {len(names)} groups with {threads} threads")
    return asyncio.run(run_jobs(jobs, threads=threads, cap=cap, budget=budget, timings=timings))


def summary_table(reports: Sequence[TheoremReport]) -> pd.DataFrame:
    rows = [
        {
            "theorem": r.theorem.value,
            "groups": " vs ".join(r.groups),
            "parameters": ", ".join(f"{k}={v}" for k, v in r.parameters.items()),
            "verdict": r.verdict.value,
            "notes": "; ".join(r.notes)[:80],
        }
        for r in reports
    ]
    df = pd.DataFrame(rows, columns=["theorem", "groups", "parameters", "verdict", "notes"])
    logger.debug(f"Verdict counts: {df['verdict'].value_counts().to_dict() if len(df) else {}}")
    return df


def failures(reports: Sequence[TheoremReport]) -> List[TheoremReport]:
    return [r for r in reports if r.verdict == Verdict.FAIL]


def limited(reports: Sequence[TheoremReport]) -> List[TheoremReport]:
    """Reports stopped by a cap or a budget."""
    return [r for r in reports if r.verdict in (Verdict.SKIPPED, Verdict.BUDGET)]
