"""Joint WL runs on two groups: equivalence verdicts, color matching and dimension probes."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from backend.core.env import DOMAIN_CAP
from backend.core.errors import TheoremViolationError
from backend.core.groups.coloring import ColoredGroup
from backend.core.groups.group import FiniteGroup
from backend.core.groups.power import PowerContext, power, tuple_profile
from backend.core.wl.rainbow import coordinate_map_generators
from backend.core.wl.refinement import count_colors, enforce_c2, initial_rows, joint_colors, joint_wl_step

Structure = Tuple[FiniteGroup, Optional[ColoredGroup]]


class FingerprintEntry(BaseModel):
    color: int
    size: int
    rho: List[int]
    mu: List[List[int]]


class ColorFingerprint(BaseModel):
    """Per-structure multiset of (color, class size, rho, mu).

    Colors are only comparable between fingerprints produced by the same joint run.
    """

    group_name: str
    arity: int
    entries: List[FingerprintEntry]


class FingerprintResult(BaseModel):
    equal: bool
    rounds: int
    transcript: List[Dict[str, Any]] = Field(description="Per round: total colors and whether histograms agree")
    fingerprints: List[ColorFingerprint] = Field(default_factory=list)


def _histogram(colors: np.ndarray, total: int) -> np.ndarray:
    return np.bincount(colors, minlength=total)


def _fingerprint(ctx: PowerContext, colors: np.ndarray) -> ColorFingerprint:
    entries = []
    for color in np.unique(colors):
        members = np.flatnonzero(colors == color)
        profile = tuple_profile(ctx, int(members[0]))
        entries.append(
            FingerprintEntry(
                color=int(color), size=len(members), rho=list(profile.rho), mu=[list(t) for t in profile.mu]
            )
        )
    return ColorFingerprint(group_name=ctx.base.name, arity=ctx.arity, entries=entries)


def joint_colorings(
    first: Structure, second: Structure, m: int, cap: int = DOMAIN_CAP
) -> Tuple[List[PowerContext], List[np.ndarray], FingerprintResult]:
    """Run WL_m on both structures with one shared signature dictionary.

    Stops early when the color histograms of the two structures diverge.
    """
    ctxs = [power(first[0], m, cap), power(second[0], m, cap)]
    transcript: List[Dict[str, Any]] = []
    if ctxs[0].size != ctxs[1].size:
        transcript.append({"round": 0, "colors": 0, "equal": False, "reason": "orders differ"})
        return ctxs, [], FingerprintResult(equal=False, rounds=0, transcript=transcript)

    colors = joint_colors([initial_rows(ctx, cg) for ctx, (_, cg) in zip(ctxs, (first, second))])
    colors = enforce_c2(ctxs, colors)
    rounds = 0
    while True:
        total = count_colors(colors)
        equal = bool(np.array_equal(_histogram(colors[0], total), _histogram(colors[1], total)))
        transcript.append({"round": rounds, "colors": total, "equal": equal})
        if not equal:
            break
        refined = joint_wl_step(ctxs, colors)
        if count_colors(refined) == total:
            break
        colors = refined
        rounds += 1
    verdict = transcript[-1]["equal"]
    result = FingerprintResult(
        equal=verdict,
        rounds=rounds,
        transcript=transcript,
        fingerprints=[_fingerprint(ctx, c) for ctx, c in zip(ctxs, colors)],
    )
    logger.info(f"WL_{m} fingerprint {first[0].name} vs {second[0].name}: {'equal' if verdict else 'distinct'}")
    return ctxs, colors, result


def joint_fingerprint(first: Structure, second: Structure, m: int, cap: int = DOMAIN_CAP) -> FingerprintResult:
    return joint_colorings(first, second, m, cap)[2]


class MatchingReport(BaseModel):
    fingerprint_equal: bool
    checked: bool = Field(description="A class bijection was built and re-checked")
    discrepancies: List[str] = Field(default_factory=list)


def verify_color_matching(first: Structure, second: Structure, m: int, cap: int = DOMAIN_CAP) -> MatchingReport:
    return match_colors(*joint_colorings(first, second, m, cap))


def match_colors(
    ctxs: Sequence[PowerContext], colors: Sequence[np.ndarray], result: FingerprintResult
) -> MatchingReport:
    """Re-check a positive fingerprint through the class bijection given by shared colors.

    Takes the output of `joint_colorings`. Compares class sizes, rho, mu, the
    substitution-count multiset of a representative and the images under
    coordinate maps. Discrepancies are reported, not resolved.
    """
    m = ctxs[0].arity
    if not result.equal:
        return MatchingReport(fingerprint_equal=False, checked=False)
    discrepancies = []
    a, b = colors
    codes = np.arange(ctxs[0].size)
    images = [
        [c[ctx.apply_coordinate_map(codes, sigma)] for sigma in coordinate_map_generators(m)]
        for ctx, c in zip(ctxs, colors)
    ]
    for color in np.unique(a):
        xa = int(np.flatnonzero(a == color)[0])
        xb = int(np.flatnonzero(b == color)[0])
        pa, pb = tuple_profile(ctxs[0], xa), tuple_profile(ctxs[1], xb)
        if pa != pb:
            discrepancies.append(f"color {color}: profiles differ")
        counts = []
        for ctx, c, x in ((ctxs[0], a, xa), (ctxs[1], b, xb)):
            table = np.stack(
                [c[ctx.substitute(np.full(ctx.n, x), i, np.arange(ctx.n))] for i in range(m)], axis=1
            )
            counts.append(sorted(map(tuple, table.tolist())))
        if counts[0] != counts[1]:
            discrepancies.append(f"color {color}: substitution counts differ")
        for k, _ in enumerate(coordinate_map_generators(m)):
            if images[0][k][xa] != images[1][k][xb]:
                discrepancies.append(f"color {color}: coordinate map {k} leads to different colors")
    if discrepancies:
        logger.warning(f"Color matching found {len(discrepancies)} discrepancies")
    return MatchingReport(fingerprint_equal=True, checked=True, discrepancies=discrepancies)


@dataclass
class WLDimensionProbe:
    """Per-m WL-equivalence verdicts for a pair of groups."""

    names: Tuple[str, str]
    verdicts: Dict[int, bool] = field(default_factory=dict)

    def record(self, m: int, equivalent: bool) -> None:
        for other, verdict in self.verdicts.items():
            if other < m and not verdict and equivalent:
                raise TheoremViolationError(
                    "distinguished groups stay distinguished at higher arity", {"m": m, "distinguished_at": other}
                )
            if other > m and verdict and not equivalent:
                raise TheoremViolationError(
                    "distinguished groups stay distinguished at higher arity", {"m": other, "distinguished_at": m}
                )
        self.verdicts[m] = equivalent

    def first_distinguishing(self) -> Optional[int]:
        return min((m for m, v in self.verdicts.items() if not v), default=None)


def probe_wl_dimension(
    G: FiniteGroup, H: FiniteGroup, arities: Sequence[int], cap: int = DOMAIN_CAP
) -> WLDimensionProbe:
    probe = WLDimensionProbe(names=(G.name, H.name))
    for m in sorted(arities):
        probe.record(m, joint_fingerprint((G, None), (H, None), m, cap).equal)
    return probe
