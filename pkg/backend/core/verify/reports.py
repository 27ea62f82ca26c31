"""Theorem reports, the artifacts they carry, and re-validation from those artifacts alone."""

from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from backend.core.groups.group import from_table, is_isomorphism
from backend.core.groups.power import PowerContext
from backend.core.partitions.partition import Partition, is_coarser_equal
from backend.core.srings.sring import verify_axioms


class TheoremId(str, Enum):
    STABILIZATION = "stabilization"
    SANDWICH = "sandwich"
    ISO_THEOREM = "iso_theorem"
    PROJECTIONS = "projections"
    RANK5 = "rank5"
    WORD = "word"
    TENSOR_IDENTITIES = "tensor_identities"
    AUTOMORPHISM_INCLUSION = "automorphism_inclusion"
    RAINBOW = "rainbow_properties"
    ISO_REDUCTIONS = "iso_reductions"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"
    BUDGET = "budget"


class RelationKind(str, Enum):
    REFINES = "refines"
    EQUAL = "equal"


class PartitionArtifact(BaseModel):
    group: str = Field(description="Key into ReportArtifacts.groups")
    arity: int
    class_of: List[int]


class Relation(BaseModel):
    kind: RelationKind
    finer: str = Field(description="Partition label; for EQUAL either side")
    coarser: str
    holds: bool


class GroupMap(BaseModel):
    source: str
    target: str
    map: List[int]


class ReportArtifacts(BaseModel):
    groups: Dict[str, List[List[int]]] = Field(
        default_factory=dict, description="Cayley tables by name, suffixed #2, #3, ... when names collide"
    )
    partitions: Dict[str, PartitionArtifact] = Field(default_factory=dict)
    relations: List[Relation] = Field(default_factory=list)
    srings: List[str] = Field(default_factory=list, description="Partition labels that must satisfy S1-S3")
    isomorphisms: List[GroupMap] = Field(default_factory=list)


class TheoremReport(BaseModel):
    theorem: TheoremId
    groups: List[str]
    parameters: Dict[str, int] = Field(default_factory=dict)
    verdict: Verdict = Verdict.PASS
    witness: Optional[Dict[str, Any]] = None
    notes: List[str] = Field(default_factory=list)
    artifacts: ReportArtifacts = Field(default_factory=ReportArtifacts)
    elapsed_seconds: Optional[float] = Field(default=None, description="Only filled when timings are requested")

    def fail(self, statement: str, witness: Dict[str, Any]) -> None:
        if self.verdict != Verdict.FAIL:
            self.verdict = Verdict.FAIL
            self.witness = {"statement": statement, **witness}

    def add_group(self, name: str, mul: np.ndarray) -> str:
        """Store a Cayley table and return its key; a second table under a taken name gets `name#2`, `name#3`, ..."""
        table = np.asarray(mul).tolist()
        key, suffix = name, 1
        while key in self.artifacts.groups and self.artifacts.groups[key] != table:
            suffix += 1
            key = f"{name}#{suffix}"
        self.artifacts.groups[key] = table
        return key

    def add_partition(self, label: str, ctx: PowerContext, P: Partition, sring: bool = False) -> None:
        key = self.add_group(ctx.base.name, ctx.base.mul)
        self.artifacts.partitions[label] = PartitionArtifact(group=key, arity=ctx.arity, class_of=P.class_of.tolist())
        if sring:
            self.artifacts.srings.append(label)

    def relate(self, kind: RelationKind, finer: str, coarser: str, holds: bool) -> bool:
        self.artifacts.relations.append(Relation(kind=kind, finer=finer, coarser=coarser, holds=holds))
        if not holds:
            self.fail(f"{finer} {kind.value} {coarser}", {"finer": finer, "coarser": coarser})
        return holds


def _rebuild(artifacts: ReportArtifacts, label: str):
    item = artifacts.partitions[label]
    G = from_table(artifacts.groups[item.group], name=item.group)
    return PowerContext(G, item.arity), Partition.from_labels(np.asarray(item.class_of, dtype=np.int64))


def revalidate(report: TheoremReport) -> List[str]:
    """Re-check a report from its stored artifacts; returns the disagreements found.

    A passing report must have every stored relation hold, every listed S-ring
    satisfy S1-S3 and every stored map be a group isomorphism. A failing report
    must contain at least one stored relation that indeed fails.
    """
    artifacts = report.artifacts
    problems = []
    observed = []
    for relation in artifacts.relations:
        _, finer = _rebuild(artifacts, relation.finer)
        _, coarser = _rebuild(artifacts, relation.coarser)
        if relation.kind == RelationKind.EQUAL:
            holds = finer == coarser
        else:
            holds = finer.size == coarser.size and is_coarser_equal(coarser, finer)
        observed.append(holds)
        if holds != relation.holds:
            problems.append(f"{relation.finer} {relation.kind.value} {relation.coarser}: stored {relation.holds}, found {holds}")
    if report.verdict == Verdict.PASS:
        for label in artifacts.srings:
            ctx, P = _rebuild(artifacts, label)
            if not verify_axioms(ctx, P).ok:
                problems.append(f"{label} fails S1-S3")
        for iso in artifacts.isomorphisms:
            G = from_table(artifacts.groups[iso.source], name=iso.source)
            H = from_table(artifacts.groups[iso.target], name=iso.target)
            if not is_isomorphism(G, H, iso.map):
                problems.append(f"map {iso.source} -> {iso.target} is not an isomorphism")
    elif report.verdict == Verdict.FAIL and artifacts.relations and all(observed):
        problems.append("failing report holds no failing relation")
    return problems
