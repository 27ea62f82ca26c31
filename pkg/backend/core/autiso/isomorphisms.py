"""Algebraic and combinatorial isomorphisms between S-rings over G^m."""

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from backend.core.env import PAIR_BLOCK_ENTRIES, SEARCH_BUDGET
from backend.core.errors import DomainMismatchError, TheoremViolationError
from backend.core.groups.group import FiniteGroup
from backend.core.groups.power import PowerContext
from backend.core.srings.sring import SRing
from backend.core.autiso.search import SearchCounter
from backend.core.wl.refinement import count_colors, joint_colors

SubgroupList = Sequence[Sequence[int]]


@dataclass(frozen=True, eq=False)
class ClassBijection:
    """An algebraic isomorphism: class X of `source` goes to class_map[X] of `target`."""

    source: SRing
    target: SRing
    class_map: np.ndarray
    genuine: bool = False

    def __call__(self, X: int) -> int:
        return int(self.class_map[X])


class IsoWitnessFile(BaseModel):
    kind: str = Field(description="group, algebraic or combinatorial")
    found: bool
    map: Optional[List[int]] = Field(default=None, description="Element or tuple-code bijection")
    class_map: Optional[List[int]] = None
    nodes: int = Field(0, description="Search nodes used")
    budget: int = 0


def dense_constants(A: SRing) -> np.ndarray:
    r = A.rank
    T = np.zeros((r, r, r), dtype=np.int64)
    for (X, Y, Z), c in A.tensor.entries.items():
        T[X, Y, Z] = c
    return T


def is_algebraic_isomorphism(A: SRing, B: SRing, class_map: Sequence[int]) -> bool:
    phi = np.asarray(class_map, dtype=np.int64)
    if A.rank != B.rank or len(phi) != A.rank or phi[0] != 0:
        return False
    if not np.array_equal(np.sort(phi), np.arange(B.rank)):
        return False
    if not np.array_equal(B.partition.class_sizes[phi], A.partition.class_sizes):
        return False
    if not np.array_equal(phi[A.inverse_class], B.inverse_class[phi]):
        return False
    if len(A.tensor.entries) != len(B.tensor.entries):
        return False
    return all(B.tensor.get(phi[X], phi[Y], phi[Z]) == c for (X, Y, Z), c in A.tensor.entries.items())


def respects_subgroups(A: SRing, B: SRing, class_map: Sequence[int], subgroups: Tuple[SubgroupList, SubgroupList]) -> bool:
    """phi(H_i) = H'_i for the paired lists of S-ring subgroups."""
    phi = np.asarray(class_map, dtype=np.int64)
    for H, H2 in zip(*subgroups):
        if not np.array_equal(np.sort(phi[A.partition.classes_inside(H)]), B.partition.classes_inside(H2)):
            return False
    return True


def _intern(keys: List[List[tuple]]) -> List[List[int]]:
    index = {key: i for i, key in enumerate(sorted({k for ks in keys for k in ks}))}
    return [[index[k] for k in ks] for ks in keys]


def _class_colors(rings: Sequence[SRing], subgroups: Optional[Tuple[SubgroupList, SubgroupList]]) -> List[List[int]]:
    """Joint refinement of class invariants until stable.

    A class starts from (size, self-paired, subgroup membership) and is then
    keyed on the multiset of (color Y, color Z, c) over its constants in both
    argument positions.
    """
    initial = []
    for t, A in enumerate(rings):
        inside = [set(A.partition.classes_inside(H).tolist()) for H in subgroups[t]] if subgroups else []
        initial.append(
            [
                (int(A.partition.class_sizes[X]), int(A.inverse_class[X]) == X, tuple(X in s for s in inside))
                for X in range(A.rank)
            ]
        )
    colors = _intern(initial)
    while True:
        keys = []
        for A, col in zip(rings, colors):
            right: Dict[int, List[tuple]] = {X: [] for X in range(A.rank)}
            left: Dict[int, List[tuple]] = {X: [] for X in range(A.rank)}
            for (X, Y, Z), c in A.tensor.entries.items():
                right[X].append((col[Y], col[Z], c))
                left[Y].append((col[X], col[Z], c))
            keys.append([(col[X], tuple(sorted(right[X])), tuple(sorted(left[X]))) for X in range(A.rank)])
        refined = _intern(keys)
        if len(set(sum(refined, []))) == len(set(sum(colors, []))):
            return refined
        colors = refined


def iter_algebraic_isomorphisms(
    A: SRing,
    B: SRing,
    subgroups: Optional[Tuple[SubgroupList, SubgroupList]] = None,
    counter: Optional[SearchCounter] = None,
) -> Iterator[np.ndarray]:
    """Every algebraic isomorphism A -> B (respecting `subgroups` when given), in a deterministic order."""
    counter = counter or SearchCounter()
    if A.rank != B.rank or A.ctx.size != B.ctx.size:
        return
    colA, colB = (np.asarray(c) for c in _class_colors([A, B], subgroups))
    if not np.array_equal(np.sort(colA), np.sort(colB)) or colA[0] != colB[0]:
        return
    TA, TB = dense_constants(A), dense_constants(B)
    cell_size = np.bincount(colA)
    order = sorted(range(1, A.rank), key=lambda X: (cell_size[colA[X]], X))
    phi = np.full(A.rank, -1, dtype=np.int64)
    phi[0] = 0
    used = np.zeros(B.rank, dtype=bool)
    used[0] = True
    assigned = [0]

    def consistent(X: int, Xp: int) -> bool:
        S = np.array(assigned + [X])
        Sp = np.array([int(phi[Y]) for Y in assigned] + [Xp])
        return (
            np.array_equal(TA[X][np.ix_(S, S)], TB[Xp][np.ix_(Sp, Sp)])
            and np.array_equal(TA[np.ix_(S, [X], S)], TB[np.ix_(Sp, [Xp], Sp)])
            and np.array_equal(TA[np.ix_(S, S, [X])], TB[np.ix_(Sp, Sp, [Xp])])
        )

    def descend(pos: int) -> Iterator[np.ndarray]:
        if pos == len(order):
            yield phi.copy()
            return
        X = order[pos]
        for Xp in np.flatnonzero((colB == colA[X]) & ~used):
            counter.tick()
            if not consistent(X, int(Xp)):
                continue
            phi[X] = Xp
            used[Xp] = True
            assigned.append(X)
            yield from descend(pos + 1)
            assigned.pop()
            used[Xp] = False
            phi[X] = -1

    for found in descend(0):
        if is_algebraic_isomorphism(A, B, found) and (subgroups is None or respects_subgroups(A, B, found, subgroups)):
            yield found


def algebraic_iso_search(
    A: SRing,
    B: SRing,
    subgroups: Optional[Tuple[SubgroupList, SubgroupList]] = None,
    budget: int = SEARCH_BUDGET,
) -> Optional[ClassBijection]:
    """First algebraic isomorphism A -> B, or None when none exists.

    Args:
        A: Source S-ring.
        B: Target S-ring.
        subgroups: Paired lists of S-ring subgroups the bijection must carry
            onto each other; with the distinguished lists this searches for
            genuine isomorphisms.
        budget: Search node budget.

    Raises:
        BudgetExceededError: if the search runs past `budget` nodes.
    """
    counter = SearchCounter(budget, "algebraic isomorphism nodes")
    found = next(iter_algebraic_isomorphisms(A, B, subgroups, counter), None)
    logger.debug(f"Algebraic isomorphism {A} -> {B}: {'found' if found is not None else 'none'} ({counter.used} nodes)")
    if found is None:
        return None
    return ClassBijection(A, B, found, genuine=subgroups is not None)


def _blocks(size: int):
    step = max(1, PAIR_BLOCK_ENTRIES // max(size, 1))
    for start in range(0, size, step):
        yield np.arange(start, min(start + step, size))


def difference_classes(A: SRing, rows: np.ndarray) -> np.ndarray:
    """len(rows) x N table of class(x y^-1) for y in `rows` and all x."""
    ctx = A.ctx
    return A.partition.class_of[ctx.mul_codes(np.arange(ctx.size)[None, :], ctx.inverse[rows][:, None])]


def is_sring_automorphism(f: Sequence[int], A: SRing) -> bool:
    """(Xy)^f = X f(y) for every class X and every y."""
    f = np.asarray(f, dtype=np.int64)
    if not np.array_equal(np.sort(f), np.arange(A.ctx.size)):
        raise DomainMismatchError("f is not a permutation of the carrier")
    ctx = A.ctx
    for rows in _blocks(ctx.size):
        images = A.partition.class_of[ctx.mul_codes(f[None, :], ctx.inverse[f[rows]][:, None])]
        if not np.array_equal(images, difference_classes(A, rows)):
            return False
    return True


def induced_class_map(A: SRing, B: SRing, f: Sequence[int]) -> Optional[ClassBijection]:
    """The class pairing of a combinatorial isomorphism f, or None when f is not one."""
    f = np.asarray(f, dtype=np.int64)
    if A.ctx.size != B.ctx.size or A.rank != B.rank:
        return None
    class_map = np.full(A.rank, -1, dtype=np.int64)
    for rows in _blocks(A.ctx.size):
        source = difference_classes(A, rows)
        target = B.partition.class_of[B.ctx.mul_codes(f[None, :], B.ctx.inverse[f[rows]][:, None])]
        pairs = np.unique(source * B.rank + target)
        X, Xp = np.divmod(pairs, B.rank)
        if len(np.unique(X)) != len(X):
            return None
        if ((class_map[X] >= 0) & (class_map[X] != Xp)).any():
            return None
        class_map[X] = Xp
    if (class_map < 0).any() or len(np.unique(class_map)) != A.rank:
        return None
    return ClassBijection(A, B, class_map)


def _refine(E: Sequence[np.ndarray], colors: List[np.ndarray]) -> List[np.ndarray]:
    while True:
        total = count_colors(colors)
        rows = [np.concatenate([c[:, None], np.sort(e * total + c[None, :], axis=1)], axis=1) for e, c in zip(E, colors)]
        refined = joint_colors(rows)
        if count_colors(refined) == total:
            return refined
        colors = refined


def _colored_graph_iso(
    EA: np.ndarray, EB: np.ndarray, colA: np.ndarray, colB: np.ndarray, counter: SearchCounter
) -> Optional[np.ndarray]:
    """Bijection f with EB[f(y), f(x)] = EA[y, x] and colors kept, by individualization and refinement."""
    size = len(colA)

    def search(ca: np.ndarray, cb: np.ndarray) -> Optional[np.ndarray]:
        counter.tick()
        ca, cb = _refine([EA, EB], [ca, cb])
        total = count_colors([ca, cb])
        hist = np.bincount(ca, minlength=total)
        if not np.array_equal(hist, np.bincount(cb, minlength=total)):
            return None
        if total == size and hist.max() == 1:
            position = np.empty(total, dtype=np.int64)
            position[cb] = np.arange(size)
            f = position[ca]
            return f if np.array_equal(EB[f[:, None], f[None, :]], EA) else None
        cell = int(np.argmin(np.where(hist > 1, hist, size + 1)))
        v = int(np.flatnonzero(ca == cell)[0])
        for w in np.flatnonzero(cb == cell):
            ca2, cb2 = ca.copy(), cb.copy()
            ca2[v], cb2[w] = total, total
            found = search(ca2, cb2)
            if found is not None:
                return found
        return None

    return search(colA, colB)


def combinatorial_iso_search(
    A: SRing, B: SRing, normalized: bool = True, budget: int = SEARCH_BUDGET
) -> Optional[np.ndarray]:
    """A bijection f of the carriers with (Xy)^f = X'f(y) for a class pairing X -> X', or None.

    Each candidate pairing is an algebraic isomorphism, so the search runs over
    those and, for each, over vertex maps of the colored Cayley graphs. With
    `normalized` the identity is sent to the identity.

    Raises:
        BudgetExceededError: if the search runs past `budget` nodes.
    """
    if A.ctx.size != B.ctx.size or A.rank != B.rank:
        return None
    counter = SearchCounter(budget, "combinatorial isomorphism nodes")
    rows = np.arange(A.ctx.size)
    EA, EB = difference_classes(A, rows), difference_classes(B, rows)
    for phi in iter_algebraic_isomorphisms(A, B, counter=counter):
        if normalized:
            colA, colB = phi[A.partition.class_of], B.partition.class_of.copy()
        else:
            colA, colB = np.zeros(A.ctx.size, dtype=np.int64), np.zeros(B.ctx.size, dtype=np.int64)
        f = _colored_graph_iso(phi[EA], EB, colA, colB, counter)
        if f is not None:
            induced = induced_class_map(A, B, f)
            if induced is None or not np.array_equal(induced.class_map, phi):
                raise TheoremViolationError("a combinatorial isomorphism induces its class pairing", {"f": f[:16].tolist()})
            logger.debug(f"Combinatorial isomorphism {A} -> {B} found after {counter.used} nodes")
            return f
    logger.debug(f"No combinatorial isomorphism {A} -> {B} ({counter.used} nodes)")
    return None


def group_iso_to_sring_map(G: FiniteGroup, H: FiniteGroup, f: Sequence[int], m: int) -> np.ndarray:
    """The map G^m -> H^m applying the group isomorphism f in every coordinate."""
    f = np.asarray(f, dtype=np.int64)
    source, target = PowerContext(G, m), PowerContext(H, m)
    return target.encode_digits(f[source.digits])
