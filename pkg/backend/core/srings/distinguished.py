"""The subgroups G_K, D_K and the sets X_{i,j,k} of a carrier G^m, and checks built on them."""

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from backend.core.errors import SchurPowerError, TheoremViolationError
from backend.core.groups.group import extend_homomorphism, generated_subgroup
from backend.core.groups.power import PowerContext
from backend.core.srings.sring import SRing

Word = Sequence[Tuple[int, int]]


def factor_subgroup(ctx: PowerContext, K: Sequence[int]) -> np.ndarray:
    """G_K: tuples whose coordinates outside K are the identity."""
    outside = [i for i in range(ctx.arity) if i not in set(K)]
    if not outside:
        return np.arange(ctx.size)
    return np.flatnonzero((ctx.digits[:, outside] == 0).all(axis=1))


def diagonal_subgroup(ctx: PowerContext, K: Sequence[int]) -> np.ndarray:
    """D_K: tuples whose coordinates in K are all equal."""
    K = list(K)
    if len(K) <= 1:
        return np.arange(ctx.size)
    block = ctx.digits[:, K]
    return np.flatnonzero((block == block[:, :1]).all(axis=1))


def product_set(ctx: PowerContext, i: int, j: int, k: int) -> np.ndarray:
    """X_{i,j,k}: tuples with x_i x_j = x_k."""
    D = ctx.digits
    return np.flatnonzero(ctx.base.mul[D[:, i], D[:, j]] == D[:, k])


def genuine_subgroups(ctx: PowerContext) -> List[np.ndarray]:
    """The diagonal followed by the m coordinate factors G_{i}."""
    return [diagonal_subgroup(ctx, range(ctx.arity))] + [factor_subgroup(ctx, [i]) for i in range(ctx.arity)]


@dataclass(frozen=True)
class DistinguishedSubsets:
    ctx: PowerContext
    factors: Dict[Tuple[int, ...], np.ndarray]
    diagonals: Dict[Tuple[int, ...], np.ndarray]
    products: Dict[Tuple[int, int, int], np.ndarray]


class DistinguishedEntry(BaseModel):
    name: str = Field(description="G_K, D_K or X_ijk with 0-based indices")
    size: int
    is_sring_set: bool = Field(description="Union of classes of the S-ring")
    is_subgroup: bool


class DistinguishedReport(BaseModel):
    entries: List[DistinguishedEntry]

    @property
    def failures(self) -> List[DistinguishedEntry]:
        """G_K and D_K entries that are not S-ring subgroups."""
        return [e for e in self.entries if e.name[0] in "GD" and not (e.is_sring_set and e.is_subgroup)]

    @property
    def product_set_failures(self) -> List[DistinguishedEntry]:
        """X_ijk entries with distinct indices that are not S-ring sets."""
        return [
            e
            for e in self.entries
            if e.name[0] == "X" and len(set(e.name[2:-1].split(","))) == 3 and not e.is_sring_set
        ]


def _label(prefix: str, indices: Sequence[int]) -> str:
    return f"{prefix}{{{','.join(str(i) for i in indices)}}}"


def distinguished_subsets(A: SRing) -> Tuple[DistinguishedSubsets, DistinguishedReport]:
    """Build every G_K, D_K and X_{i,j,k} of A's carrier and report which are S-ring sets and subgroups."""
    ctx = A.ctx
    m = ctx.arity
    subsets = list(itertools.chain.from_iterable(itertools.combinations(range(m), r) for r in range(m + 1)))
    factors = {K: factor_subgroup(ctx, K) for K in subsets}
    diagonals = {K: diagonal_subgroup(ctx, K) for K in subsets}
    products = {t: product_set(ctx, *t) for t in itertools.product(range(m), repeat=3)}

    entries = []
    for prefix, family in (("G", factors), ("D", diagonals), ("X", products)):
        for key, codes in family.items():
            entries.append(
                DistinguishedEntry(
                    name=_label(prefix, key),
                    size=len(codes),
                    is_sring_set=A.is_sring_set(codes),
                    is_subgroup=ctx.is_subgroup(codes),
                )
            )
    report = DistinguishedReport(entries=entries)
    if report.failures:
        logger.warning(f"{len(report.failures)} distinguished subsets are not S-ring sets/groups of {A}")
    return DistinguishedSubsets(ctx, factors, diagonals, products), report


def sring_groups(A: SRing) -> Dict[str, np.ndarray]:
    """The G_K and D_K of A's carrier that are A-groups, keyed by label."""
    ctx = A.ctx
    found = {}
    for r in range(ctx.arity + 1):
        for K in itertools.combinations(range(ctx.arity), r):
            for prefix, codes in (("G", factor_subgroup(ctx, K)), ("D", diagonal_subgroup(ctx, K))):
                if A.is_sring_group(codes):
                    found[_label(prefix, K)] = codes
    return found


def evaluate_word(ctx: PowerContext, codes: np.ndarray, word: Word) -> np.ndarray:
    """w(x_0..x_{k-1}) for every code; letters are (coordinate, exponent +-1)."""
    G = ctx.base
    value = np.zeros(len(codes), dtype=np.int64)
    for index, exponent in word:
        letter = ctx.digits[codes, index].astype(np.int64)
        if exponent < 0:
            letter = G.inv[letter]
        value = G.mul[value, letter]
    return value


def word_constancy_check(A: SRing, X: int, ell: int, word: Word, k: Optional[int] = None) -> bool:
    """Truth value of x_ell = w(x_0..x_{k-1}), which must be the same for every x in class X.

    Args:
        A: A_m(G) or an S-ring above it, m >= 3.
        X: Class id.
        ell: Target coordinate, k <= ell < m.
        word: Letters (coordinate < k, exponent in {1, -1}).
        k: Number of leading coordinates the word may use, at most m - 2.

    Raises:
        TheoremViolationError: with two witnesses if the truth value varies over X.
    """
    m = A.ctx.arity
    if k is None:
        k = 1 + max((index for index, _ in word), default=-1)
    if k > m - 2 or not k <= ell < m:
        raise SchurPowerError(f"need k <= m-2 and k <= ell < m, got k={k}, ell={ell}, m={m}")
    if any(not 0 <= index < k or exponent not in (1, -1) for index, exponent in word):
        raise SchurPowerError(f"word {list(word)} uses letters outside a_0..a_{k - 1}")
    members = A.class_members(X)
    holds = evaluate_word(A.ctx, members, word) == A.ctx.digits[members, ell]
    if holds.all() or not holds.any():
        return bool(holds[0])
    witness = {
        "X": X,
        "holds_at": A.ctx.decode(int(members[np.argmax(holds)])),
        "fails_at": A.ctx.decode(int(members[np.argmin(holds)])),
        "ell": ell,
        "word": [list(letter) for letter in word],
    }
    raise TheoremViolationError("word relation is constant on the class", witness)


def coordinate_swap_identity(A: SRing, i: int, j: int) -> List[int]:
    """Classes X whose image under writing x_j into slot i is not an S-ring set of A,
    or differs from X G_i cap D_{i,j}.

    An empty list means every image is a union of classes.
    """
    ctx = A.ctx
    sigma = list(range(ctx.arity))
    sigma[i] = j
    in_diagonal = np.zeros(ctx.size, dtype=bool)
    in_diagonal[diagonal_subgroup(ctx, [i, j])] = True
    failures = []
    for X, members in enumerate(A.partition.classes):
        image = np.unique(ctx.apply_coordinate_map(members, sigma))
        if not A.is_sring_set(image):
            failures.append(X)
            continue
        shifted = np.unique(np.concatenate([ctx.substitute(members, i, alpha) for alpha in range(ctx.n)]))
        if not np.array_equal(image, shifted[in_diagonal[shifted]]):
            failures.append(X)
    if failures:
        logger.warning(f"{len(failures)} classes of {A} have images under x_{i} := x_{j} that are not S-ring sets")
    return failures


def product_formula_check(A: SRing) -> List[Tuple[int, int, int]]:
    """Triples of distinct coordinates whose X_{i,j,k} is not an S-ring set or not the image
    of G^m under writing x_i x_j into slot k."""
    ctx = A.ctx
    codes = np.arange(ctx.size)
    failures = []
    for i, j, k in itertools.permutations(range(ctx.arity), 3):
        X_ijk = product_set(ctx, i, j, k)
        written = ctx.substitute(codes, k, ctx.base.mul[ctx.digits[:, i], ctx.digits[:, j]])
        if not A.is_sring_set(X_ijk) or not np.array_equal(np.unique(written), X_ijk):
            failures.append((i, j, k))
    return failures


class ExtensionReport(BaseModel):
    checked_classes: int = Field(description="Classes whose leading coordinates generate all coordinates")
    failures: List[int] = Field(default_factory=list, description="Classes where a coordinate map does not extend")


def generated_extension_check(A: SRing) -> ExtensionReport:
    """For classes X whose first k <= m-2 coordinates generate <x_0..x_{m-1}>, check that
    x_i -> y_i extends to an isomorphism <x> -> <y> for every y in X."""
    ctx = A.ctx
    G = ctx.base
    m = ctx.arity
    checked, failures = 0, []
    for X, members in enumerate(A.partition.classes):
        x = ctx.decode(int(members[0]))
        full = generated_subgroup(G, x)
        if not any(len(generated_subgroup(G, x[:k])) == len(full) for k in range(0, m - 1)):
            continue
        checked += 1
        for code in members[1:]:
            y = ctx.decode(int(code))
            phi = extend_homomorphism(G, x, y)
            if phi is None or len(generated_subgroup(G, y)) != len(full):
                failures.append(X)
                break
    logger.debug(f"Generated-extension check on {A}: {checked} classes, {len(failures)} failures")
    return ExtensionReport(checked_classes=checked, failures=failures)
