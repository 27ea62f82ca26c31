"""S-rings from WL fixpoints and coherent configurations from S-rings, via projection to G^m."""

from typing import Tuple

from loguru import logger
from pydantic import BaseModel, Field

from backend.core.env import DOMAIN_CAP
from backend.core.errors import AxiomViolationError, DomainCapExceededError, TheoremViolationError
from backend.core.groups.group import FiniteGroup
from backend.core.partitions.partition import is_coarser_equal
from backend.core.partitions.projection import project
from backend.core.srings.constructions import compute_Am
from backend.core.srings.sring import SRing, verify_axioms
from backend.core.wl.rainbow import CoherentConfig, Rainbow, check_c1, check_c2, check_regular
from backend.core.wl.refinement import check_c3, wl_m_group


class ProjectionReport(BaseModel):
    group_name: str
    arity: int
    source_arity: int = Field(description="Arity of the configuration that was projected")
    source_classes: int
    projected_classes: int
    merged: bool = Field(description="Partially overlapping class images had to be fused")
    conditions: dict = Field(default_factory=dict, description="Axiom or condition name -> verdict")
    refines: dict = Field(default_factory=dict, description="Comparison name -> verdict")


def sring_from_wl3m(G: FiniteGroup, m: int, cap: int = DOMAIN_CAP) -> Tuple[SRing, ProjectionReport]:
    """Project WL_{3m}(G) onto the first m coordinates and certify the result as an S-ring.

    The result must refine A_m(G).

    Raises:
        DomainCapExceededError: if n^{3m} exceeds `cap`.
        AxiomViolationError: if the projection is not an S-ring.
        TheoremViolationError: if it does not refine A_m(G).
    """
    if G.order ** (3 * m) > cap:
        raise DomainCapExceededError(G.order, 3 * m, cap)
    cc = wl_m_group(G, 3 * m, cap=cap)
    result = project(cc.ctx, cc.partition, range(m))
    axioms = verify_axioms(result.ctx, result.partition)
    report = ProjectionReport(
        group_name=G.name,
        arity=m,
        source_arity=3 * m,
        source_classes=cc.num_classes,
        projected_classes=result.partition.num_classes,
        merged=result.merged,
        conditions={"S1": axioms.s1, "S2": axioms.s2, "S3": axioms.s3},
    )
    if result.merged or not axioms.ok:
        raise AxiomViolationError("projected WL fixpoint is an S-ring", {"merged": result.merged, **axioms.witnesses})
    A = SRing(result.ctx, result.partition)
    Am = compute_Am(G, m, cap=cap)
    report.refines["A_m"] = is_coarser_equal(Am.partition, A.partition)
    if not report.refines["A_m"]:
        raise TheoremViolationError("projected WL_3m refines A_m", {"group": G.name, "m": m})
    logger.info(f"pr_{m} WL_{3 * m}({G.name}) is an S-ring of rank {A.rank}")
    return A, report


def cc_from_sring(G: FiniteGroup, m: int, cap: int = DOMAIN_CAP) -> Tuple[CoherentConfig, ProjectionReport]:
    """Project the partition of A_{m+1}(G) onto the first m coordinates and certify it as a coherent configuration.

    For m >= 2 the result must refine WL_m(G).
    """
    A = compute_Am(G, m + 1, cap=cap)
    result = project(A.ctx, A.partition, range(m))
    ctx, P = result.ctx, result.partition
    c1, c2, c3 = check_c1(ctx, P), check_c2(ctx, P), check_c3(ctx, P)
    regularity = check_regular(ctx, P)
    report = ProjectionReport(
        group_name=G.name,
        arity=m,
        source_arity=m + 1,
        source_classes=A.rank,
        projected_classes=P.num_classes,
        merged=result.merged,
        conditions={"C1": c1 is None, "C2": c2 is None, "C3": c3 is None, "regular": regularity.regular},
    )
    failed = {name: witness for name, witness in (("C1", c1), ("C2", c2), ("C3", c3)) if witness is not None}
    if failed:
        raise AxiomViolationError("projected S-ring is a coherent configuration", failed)
    cc = CoherentConfig(Rainbow(ctx, P, True, True), c3_verified=True, regularity=regularity)
    if m >= 2:
        wl = wl_m_group(G, m, cap=cap)
        report.refines["WL_m"] = is_coarser_equal(wl.partition, P)
        if not report.refines["WL_m"]:
            raise TheoremViolationError("projected A_{m+1} refines WL_m", {"group": G.name, "m": m})
    logger.info(f"pr_{m} A_{m + 1}({G.name}) is a coherent configuration with {P.num_classes} classes")
    return cc, report
