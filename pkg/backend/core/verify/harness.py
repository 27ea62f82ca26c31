"""Theorem checks on small groups.

Every check recomputes its structures from Cayley tables and returns a
TheoremReport; violated consequences turn into failing verdicts with witnesses
rather than exceptions.
"""

from typing import Optional, Union

import numpy as np
from loguru import logger

from backend.core.env import DOMAIN_CAP, SEARCH_BUDGET
from backend.core.errors import AxiomViolationError, DomainCapExceededError, TheoremViolationError
from backend.core.groups.coloring import ColoredGroup
from backend.core.groups.group import FiniteGroup, minimal_generating_number
from backend.core.groups.power import power
from backend.core.partitions.partition import Partition, is_coarser_equal
from backend.core.partitions.projection import project
from backend.core.srings.constructions import compute_Am, project_sring
from backend.core.srings.distinguished import diagonal_subgroup, factor_subgroup, word_constancy_check
from backend.core.srings.sring import SRing
from backend.core.wl.rainbow import check_c1, check_c2, check_regular
from backend.core.wl.refinement import check_c3, initial_rainbow, wl_m_group
from backend.core.wl.projections import cc_from_sring, sring_from_wl3m
from backend.core.autiso.automorphisms import cyc_m, hol_m_generators
from backend.core.autiso.isomorphisms import combinatorial_iso_search, group_iso_to_sring_map, induced_class_map, is_sring_automorphism
from backend.core.autiso.reductions import IsoOracle, is_colored_isomorphism, iso_colored_groups
from backend.core.verify.reports import GroupMap, RelationKind, TheoremId, TheoremReport, Verdict


def _require(G: FiniteGroup, m: int, cap: int) -> None:
    if G.order**m > cap:
        raise DomainCapExceededError(G.order, m, cap)


def _record_sring(report: TheoremReport, label: str, A: SRing) -> None:
    report.add_partition(label, A.ctx, A.partition, sring=True)


def check_stabilization(G: FiniteGroup, m: int, k: int, cap: int = DOMAIN_CAP) -> TheoremReport:
    """A_m <= pr_m A_{m+k} <= cyc_m, with equality on the right once k >= max(2, d(G))."""
    _require(G, m + k, cap)
    d = minimal_generating_number(G)
    report = TheoremReport(theorem=TheoremId.STABILIZATION, groups=[G.name], parameters={"m": m, "k": k, "d": d})
    Am = compute_Am(G, m, cap=cap)
    projected = project_sring(compute_Am(G, m + k, cap=cap), m)
    cyc = cyc_m(G, m, cap=cap)
    for label, A in (("A_m", Am), ("pr_m A_m+k", projected), ("cyc_m", cyc)):
        _record_sring(report, label, A)
    report.relate(RelationKind.REFINES, "pr_m A_m+k", "A_m", is_coarser_equal(Am.partition, projected.partition))
    report.relate(RelationKind.REFINES, "cyc_m", "pr_m A_m+k", is_coarser_equal(projected.partition, cyc.partition))
    if k >= max(2, d):
        report.relate(RelationKind.EQUAL, "pr_m A_m+k", "cyc_m", projected.partition == cyc.partition)
    else:
        report.notes.append(f"k={k} < max(2, d={d}): equality with cyc_m not required")
    report.notes.append(f"ranks: A_m={Am.rank}, projection={projected.rank}, cyc_m={cyc.rank}")
    return report


def check_sandwich(G: FiniteGroup, m: int, cap: int = DOMAIN_CAP) -> TheoremReport:
    """pr_m WL_3m >= S(A_m) and pr_m S(A_{m+1}) >= WL_m; a half beyond `cap` is skipped with a note."""
    report = TheoremReport(theorem=TheoremId.SANDWICH, groups=[G.name], parameters={"m": m})
    ran = 0
    if G.order ** (3 * m) <= cap:
        cc = wl_m_group(G, 3 * m, cap=cap)
        projected = project(cc.ctx, cc.partition, range(m))
        Am = compute_Am(G, m, cap=cap)
        report.add_partition("pr_m WL_3m", projected.ctx, projected.partition)
        _record_sring(report, "A_m", Am)
        report.relate(RelationKind.REFINES, "pr_m WL_3m", "A_m", is_coarser_equal(Am.partition, projected.partition))
        ran += 1
    else:
        report.notes.append(f"cap-skipped: WL_{3 * m} needs {G.order}^{3 * m} > {cap}")
    if G.order ** (m + 1) <= cap:
        A = compute_Am(G, m + 1, cap=cap)
        projected = project(A.ctx, A.partition, range(m))
        wl = wl_m_group(G, m, cap=cap)
        report.add_partition("pr_m A_m+1", projected.ctx, projected.partition)
        report.add_partition("WL_m", wl.ctx, wl.partition)
        report.relate(RelationKind.REFINES, "pr_m A_m+1", "WL_m", is_coarser_equal(wl.partition, projected.partition))
        ran += 1
    else:
        report.notes.append(f"cap-skipped: A_{m + 1} needs {G.order}^{m + 1} > {cap}")
    if not ran:
        report.verdict = Verdict.SKIPPED
    return report


def check_iso_theorem(
    G: FiniteGroup, H: FiniteGroup, cap: int = DOMAIN_CAP, budget: int = SEARCH_BUDGET
) -> TheoremReport:
    """G and H are isomorphic exactly when A_3(G) and A_3(H) are combinatorially isomorphic."""
    _require(G, 3, cap)
    report = TheoremReport(theorem=TheoremId.ISO_THEOREM, groups=[G.name, H.name], parameters={"m": 3})
    g_key = report.add_group(G.name, G.mul)
    h_key = report.add_group(H.name, H.mul)
    f = iso_colored_groups(G, H, IsoOracle.DIRECT, limit=max(G.order, 1), budget=budget)
    if G.order != H.order:
        report.notes.append("orders differ")
        if f is not None:
            report.fail("groups of different order are not isomorphic", {"map": np.asarray(f).tolist()})
        return report
    A, B = compute_Am(G, 3, cap=cap), compute_Am(H, 3, cap=cap)
    _record_sring(report, "A_3(G)", A)
    _record_sring(report, "A_3(H)", B)
    witness = combinatorial_iso_search(A, B, budget=budget)
    report.notes.append(f"group isomorphism: {f is not None}; S-ring isomorphism: {witness is not None}")
    if (f is None) != (witness is None):
        report.fail("group and A_3 isomorphism verdicts agree", {"group_iso": f is not None, "sring_iso": witness is not None})
        return report
    if f is not None:
        report.artifacts.isomorphisms.append(GroupMap(source=g_key, target=h_key, map=np.asarray(f).tolist()))
        F = group_iso_to_sring_map(G, H, f, 3)
        if induced_class_map(A, B, F) is None:
            report.fail("a group isomorphism induces an S-ring isomorphism", {"map": np.asarray(f).tolist()})
    return report


def check_projection_theorems(G: FiniteGroup, m: int, cap: int = DOMAIN_CAP) -> TheoremReport:
    """pr_m WL_3m is an S-ring above A_m; pr_m S(A_{m+1}) is a coherent configuration above WL_m."""
    report = TheoremReport(theorem=TheoremId.PROJECTIONS, groups=[G.name], parameters={"m": m})
    ran = 0
    for name, construct, arity in (("pr_m WL_3m", sring_from_wl3m, 3 * m), ("pr_m A_m+1", cc_from_sring, m + 1)):
        if G.order**arity > cap:
            report.notes.append(f"cap-skipped: {name} needs {G.order}^{arity} > {cap}")
            continue
        try:
            result, details = construct(G, m, cap=cap)
        except (AxiomViolationError, TheoremViolationError) as e:
            report.fail(f"{name}: {e}", {"construction": name})
            return report
        report.add_partition(name, result.ctx, result.partition, sring=construct is sring_from_wl3m)
        report.notes.append(f"{name}: {details.projected_classes} classes, conditions {details.conditions}")
        ran += 1
    if not ran:
        report.verdict = Verdict.SKIPPED
    return report


def rank5_partition(G: FiniteGroup) -> Partition:
    """{e}, G_0 minus e, G_1 minus e, the diagonal minus e, and the rest, on G^2."""
    ctx = power(G, 2)
    labels = np.full(ctx.size, 4, dtype=np.int64)
    labels[diagonal_subgroup(ctx, [0, 1])] = 3
    labels[factor_subgroup(ctx, [1])] = 2
    labels[factor_subgroup(ctx, [0])] = 1
    labels[0] = 0
    return Partition.from_labels(labels)


def check_rank5(G: FiniteGroup, cap: int = DOMAIN_CAP) -> TheoremReport:
    """A_2(G) has rank 5 with the classes of rank5_partition; rank 4 for |G| = 2."""
    _require(G, 2, cap)
    report = TheoremReport(theorem=TheoremId.RANK5, groups=[G.name], parameters={"m": 2})
    if G.order < 2:
        report.verdict = Verdict.SKIPPED
        report.notes.append("trivial group")
        return report
    A = compute_Am(G, 2, cap=cap)
    expected = 5 if G.order >= 3 else 4
    _record_sring(report, "A_2", A)
    report.add_partition("expected", A.ctx, rank5_partition(G))
    report.relate(RelationKind.EQUAL, "A_2", "expected", A.partition == rank5_partition(G))
    if A.rank != expected:
        report.fail("rank of A_2", {"rank": A.rank, "expected": expected})
    if G.order == 2:
        report.notes.append("|G| = 2: the complement class is empty")
    return report


def check_word_theorem(G: FiniteGroup, m: int, samples: int, seed: int, cap: int = DOMAIN_CAP) -> TheoremReport:
    """Word relations x_ell = w(x_0..x_{k-1}) with k <= m-2 hold on all or none of each class of A_m."""
    _require(G, m, cap)
    if m < 3:
        raise ValueError("word checks need m >= 3")
    report = TheoremReport(
        theorem=TheoremId.WORD, groups=[G.name], parameters={"m": m, "samples": samples, "seed": seed}
    )
    A = compute_Am(G, m, cap=cap)
    rng = np.random.default_rng(seed)
    held = 0
    for _ in range(samples):
        k = int(rng.integers(1, m - 1))
        ell = int(rng.integers(k, m))
        length = int(rng.integers(0, 5))
        word = [(int(rng.integers(0, k)), int(rng.choice([1, -1]))) for _ in range(length)]
        X = int(rng.integers(0, A.rank))
        try:
            held += word_constancy_check(A, X, ell, word, k)
        except TheoremViolationError as e:
            report.fail(e.statement, e.witness)
            break
    report.notes.append(f"{samples} probes on {A.rank} classes, {held} with the relation holding")
    return report


def check_tensor_identities(A: SRing) -> TheoremReport:
    report = TheoremReport(
        theorem=TheoremId.TENSOR_IDENTITIES, groups=[A.group.name], parameters={"m": A.ctx.arity}
    )
    _record_sring(report, "A", A)
    failures = A.tensor.check_identities()
    if failures:
        report.fail("structure constant identities", {"failures": failures[:10]})
    report.notes.append(f"rank {A.rank}, {len(A.tensor.entries)} nonzero constants")
    return report


def check_automorphism_inclusion(G: FiniteGroup, m: int, cap: int = DOMAIN_CAP) -> TheoremReport:
    """Every generator of hol_m(G) is an automorphism of A_m(G), and A_m(G) <= cyc_m(G)."""
    _require(G, m, cap)
    report = TheoremReport(theorem=TheoremId.AUTOMORPHISM_INCLUSION, groups=[G.name], parameters={"m": m})
    A = compute_Am(G, m, cap=cap)
    hol = hol_m_generators(G, m, cap=cap)
    for index, f in enumerate(hol.generators):
        if not is_sring_automorphism(f, A):
            report.fail("hol_m generators are S-ring automorphisms", {"generator": index})
            break
    cyc = cyc_m(G, m, cap=cap, check=False)
    _record_sring(report, "A_m", A)
    report.add_partition("cyc_m", cyc.ctx, cyc.partition)
    report.relate(RelationKind.REFINES, "cyc_m", "A_m", is_coarser_equal(A.partition, cyc.partition))
    report.notes.append(f"{len(hol.generators)} generators, |hol_m| = {hol.order}")
    return report


def check_rainbow_properties(G: FiniteGroup, m: int, cap: int = DOMAIN_CAP) -> TheoremReport:
    """S(A_m) is a regular rainbow (refining the group rainbow for m >= 3); WL_m is a regular coherent configuration."""
    _require(G, m, cap)
    report = TheoremReport(theorem=TheoremId.RAINBOW, groups=[G.name], parameters={"m": m})
    A = compute_Am(G, m, cap=cap)
    _record_sring(report, "S_m", A)
    for name, witness in (("C1", check_c1(A.ctx, A.partition)), ("C2", check_c2(A.ctx, A.partition))):
        if witness is not None:
            report.fail(f"S_m satisfies {name}", witness)
    regularity = check_regular(A.ctx, A.partition)
    if not regularity.regular:
        report.fail("S_m is regular", {"violations": [v.model_dump() for v in regularity.violations[:5]]})
    c3 = check_c3(A.ctx, A.partition)
    report.notes.append(f"S_m satisfies C3: {c3 is None}")
    if m >= 3:
        X = initial_rainbow(G, m, cap=cap)
        report.add_partition("X_m", X.ctx, X.partition)
        report.relate(RelationKind.REFINES, "S_m", "X_m", is_coarser_equal(X.partition, A.partition))
    try:
        wl = wl_m_group(G, m, cap=cap)
    except AxiomViolationError as e:
        report.fail("WL_m is a regular coherent configuration", {"condition": e.condition, **e.witness})
        return report
    report.add_partition("WL_m", wl.ctx, wl.partition)
    report.notes.append(f"S_m has {A.rank} classes, WL_m has {wl.num_classes}")
    return report


def check_iso_reductions(
    CG: Union[FiniteGroup, ColoredGroup],
    CH: Union[FiniteGroup, ColoredGroup],
    budget: int = SEARCH_BUDGET,
    label: Optional[str] = None,
) -> TheoremReport:
    """The direct, via_aut and via_cyc1 oracles agree and return color-preserving isomorphisms."""
    CG = CG if isinstance(CG, ColoredGroup) else ColoredGroup.monochrome(CG)
    CH = CH if isinstance(CH, ColoredGroup) else ColoredGroup.monochrome(CH)
    report = TheoremReport(theorem=TheoremId.ISO_REDUCTIONS, groups=[CG.group.name, CH.group.name])
    if label:
        report.notes.append(label)
    g_key = report.add_group(CG.group.name, CG.group.mul)
    h_key = report.add_group(CH.group.name, CH.group.mul)
    limit = max(CG.group.order, 1)
    verdicts = {}
    for oracle in IsoOracle:
        f = iso_colored_groups(CG, CH, oracle, limit=limit, budget=budget)
        verdicts[oracle.value] = f is not None
        if f is not None and not is_colored_isomorphism(CG, CH, f):
            report.fail(f"{oracle.value} witness is a colored isomorphism", {"map": np.asarray(f).tolist()})
        if f is not None and oracle == IsoOracle.DIRECT:
            report.artifacts.isomorphisms.append(
                GroupMap(source=g_key, target=h_key, map=np.asarray(f).tolist())
            )
    if len(set(verdicts.values())) > 1:
        report.fail("oracles agree", verdicts)
    report.notes.append(f"verdicts: {verdicts}")
    logger.debug(f"Iso reductions {CG} vs {CH}: {verdicts}")
    return report
