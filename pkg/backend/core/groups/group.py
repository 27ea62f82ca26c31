"""Finite groups stored as validated Cayley tables, plus the standard families."""

import itertools
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from backend.core.env import (
    EXHAUSTIVE_ASSOCIATIVITY_LIMIT,
    GROUP_ORDER_LIMIT,
    SYMMETRIC_DEGREE_LIMIT,
)
from backend.core.errors import InvalidGroupError


class GroupFamily(str, Enum):
    """
    Families accepted by `make_group`.
    """

    CYCLIC = "cyclic"
    DIHEDRAL = "dihedral"  # order 2k: rotations 0..k-1 then reflections
    QUATERNION8 = "quaternion8"
    SYMMETRIC = "symmetric"  # lexicographic rank order of permutations
    ELEMENTARY_ABELIAN = "elementary_abelian"
    DIRECT_PRODUCT = "direct_product"  # mixed radix, first factor least significant
    FROM_TABLE = "from_table"


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table.

    Element 0 is the identity. Tables are read-only numpy arrays; a group is
    immutable once built and may be shared freely.

    Args:
        mul: n x n table, mul[a, b] is the id of a*b.
        inv: length-n table of inverses.
        name: Display name such as "Z4" or "S3".
    """

    mul: np.ndarray
    inv: np.ndarray
    name: str = field(default="G")

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    @property
    def identity(self) -> int:
        return 0

    @cached_property
    def mul_list(self) -> List[List[int]]:
        # plain lists are much faster than numpy for scalar lookups in searches
        return self.mul.tolist()

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        current = np.arange(n)
        for k in range(1, n + 1):
            orders[(current == 0) & (orders == 0)] = k
            current = self.mul[current, np.arange(n)]
        return _readonly(orders)

    @cached_property
    def centralizer_sizes(self) -> np.ndarray:
        return _readonly((self.mul == self.mul.T).sum(axis=1).astype(np.int64))

    @property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def power_of(self, x: int, k: int) -> int:
        result = 0
        for _ in range(k % int(self.element_orders[x])):
            result = int(self.mul[result, x])
        return result

    def same_table(self, other: "FiniteGroup") -> bool:
        return self is other or bool(np.array_equal(self.mul, other.mul))

    def __repr__(self) -> str:
        return f"FiniteGroup(name={self.name!r}, order={self.order})"


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def validate_table(mul: np.ndarray) -> np.ndarray:
    """Check every group axiom on a Cayley table and return its inverse table.

    Raises:
        InvalidGroupError: naming the first violated axiom with a witness.
    """
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise InvalidGroupError("square table", detail=f"shape {mul.shape}")
    n = mul.shape[0]
    if n > GROUP_ORDER_LIMIT:
        raise InvalidGroupError("order bound", detail=f"order {n} exceeds {GROUP_ORDER_LIMIT}")
    bad = np.argwhere((mul < 0) | (mul >= n))
    if len(bad):
        a, b = (int(v) for v in bad[0])
        raise InvalidGroupError("entries in range", (a, b), f"mul[{a},{b}]={int(mul[a, b])}")
    ids = np.arange(n)
    for x in range(n):
        if mul[0, x] != x or mul[x, 0] != x:
            raise InvalidGroupError("identity is element 0", (x,))
    expected = np.broadcast_to(ids, (n, n))
    rows = np.sort(mul, axis=1)
    bad_rows = np.flatnonzero((rows != expected).any(axis=1))
    if len(bad_rows):
        raise InvalidGroupError("rows are permutations", (int(bad_rows[0]),))
    cols = np.sort(mul, axis=0)
    bad_cols = np.flatnonzero((cols != expected.T).any(axis=0))
    if len(bad_cols):
        raise InvalidGroupError("columns are permutations", (int(bad_cols[0]),))
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
        _check_associativity(mul)
    inv = np.argmax(mul == 0, axis=1)
    bad_inv = np.flatnonzero(mul[inv, ids] != 0)
    if len(bad_inv):
        raise InvalidGroupError("two-sided inverses", (int(bad_inv[0]),))
    return inv


def _check_associativity(mul: np.ndarray, chunk: int = 16) -> None:
    n = mul.shape[0]
    for start in range(0, n, chunk):
        a = np.arange(start, min(n, start + chunk))
        left = mul[mul[a]]  # ((a b) c) indexed [a, b, c]
        right = mul[a[:, None, None], mul[None, :, :]]  # (a (b c))
        bad = np.argwhere(left != right)
        if len(bad):
            i, b, c = (int(v) for v in bad[0])
            raise InvalidGroupError("associativity", (int(a[i]), b, c))


def from_table(mul: Sequence[Sequence[int]], name: str = "G") -> FiniteGroup:
    table = np.asarray(mul, dtype=np.int64)
    inv = validate_table(table)
    return FiniteGroup(mul=_readonly(table.copy()), inv=_readonly(inv.astype(np.int64)), name=name)


def _trusted(mul: np.ndarray, name: str) -> FiniteGroup:
    # family constructors still validate: they are cheap at these sizes and catch numbering slips
    return from_table(mul, name=name)


def cyclic(k: int) -> FiniteGroup:
    if k < 1:
        raise InvalidGroupError("family parameters", detail=f"cyclic order {k} < 1")
    ids = np.arange(k)
    return _trusted((ids[:, None] + ids[None, :]) % k, f"Z{k}")


def dihedral(k: int) -> FiniteGroup:
    """Dihedral group of order 2k; ids 0..k-1 are rotations r^i, ids k+i are s r^i."""
    if k < 1:
        raise InvalidGroupError("family parameters", detail=f"dihedral with {k} rotations")
    n = 2 * k
    mul = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        fa, ia = divmod(a, k)
        for b in range(n):
            fb, ib = divmod(b, k)
            # r s = s r^-1
            if fb == 0:
                f, i = fa, (ia + ib) % k
            else:
                f, i = fa ^ 1, (ib - ia) % k
            mul[a, b] = f * k + i
    return _trusted(mul, f"D{k}")


# unit products of 1, i, j, k as (sign, unit)
_QUATERNION_UNITS = {
    (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion8() -> FiniteGroup:
    """Q8 numbered 1, -1, i, -i, j, -j, k, -k."""
    elements = [(sign, unit) for unit in range(4) for sign in (1, -1)]
    index = {e: pos for pos, e in enumerate(elements)}
    mul = np.zeros((8, 8), dtype=np.int64)
    for a, (sa, ua) in enumerate(elements):
        for b, (sb, ub) in enumerate(elements):
            if ua == 0 or ub == 0:
                sign, unit = 1, ua + ub
            else:
                sign, unit = _QUATERNION_UNITS[(ua, ub)]
            mul[a, b] = index[(sa * sb * sign, unit)]
    return _trusted(mul, "Q8")


def symmetric(degree: int) -> FiniteGroup:
    """Symmetric group; (a*b)(i) = b(a(i)), i.e. apply a first."""
    if not 1 <= degree <= SYMMETRIC_DEGREE_LIMIT:
        raise InvalidGroupError(
            "family parameters", detail=f"symmetric degree {degree} outside 1..{SYMMETRIC_DEGREE_LIMIT}"
        )
    perms = list(itertools.permutations(range(degree)))
    index = {p: pos for pos, p in enumerate(perms)}
    n = len(perms)
    mul = np.zeros((n, n), dtype=np.int64)
    for a, pa in enumerate(perms):
        for b, pb in enumerate(perms):
            mul[a, b] = index[tuple(pb[pa[i]] for i in range(degree))]
    return _trusted(mul, f"S{degree}")


def direct_product(factors: Sequence[FiniteGroup], name: Optional[str] = None) -> FiniteGroup:
    """Direct product with mixed-radix numbering, first factor least significant."""
    if not factors:
        raise InvalidGroupError("family parameters", detail="direct product of no factors")
    orders = [G.order for G in factors]
    n = int(np.prod(orders))
    if n > GROUP_ORDER_LIMIT:
        raise InvalidGroupError("order bound", detail=f"order {n} exceeds {GROUP_ORDER_LIMIT}")
    codes = np.arange(n)
    mul = np.zeros((n, n), dtype=np.int64)
    radix = 1
    for G in factors:
        digits = (codes // radix) % G.order
        mul += G.mul[digits[:, None], digits[None, :]] * radix
        radix *= G.order
    return _trusted(mul, name or "x".join(G.name for G in factors))


def elementary_abelian(p: int, r: int) -> FiniteGroup:
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)) or r < 1:
        raise InvalidGroupError("family parameters", detail=f"elementary abelian ({p}, {r})")
    if p**r > GROUP_ORDER_LIMIT:
        raise InvalidGroupError("order bound", detail=f"order {p**r} exceeds {GROUP_ORDER_LIMIT}")
    return direct_product([cyclic(p)] * r, name="x".join([f"Z{p}"] * r))


def make_group(family, *params, name: Optional[str] = None) -> FiniteGroup:
    """Build a group from one of the standard families.

    Args:
        family: A `GroupFamily` or its string value.
        params: Family parameters, e.g. `make_group("cyclic", 4)`,
            `make_group("elementary_abelian", 2, 3)`, `make_group("direct_product", [G, H])`,
            `make_group("from_table", table)`.

    Returns:
        A validated FiniteGroup whose element 0 is the identity.
    """
    try:
        family = GroupFamily(family)
    except ValueError:
        raise InvalidGroupError("family parameters", detail=f"unknown family {family!r}")
    try:
        if family == GroupFamily.CYCLIC:
            group = cyclic(int(params[0]))
        elif family == GroupFamily.DIHEDRAL:
            group = dihedral(int(params[0]))
        elif family == GroupFamily.QUATERNION8:
            group = quaternion8()
        elif family == GroupFamily.SYMMETRIC:
            group = symmetric(int(params[0]))
        elif family == GroupFamily.ELEMENTARY_ABELIAN:
            group = elementary_abelian(int(params[0]), int(params[1]))
        elif family == GroupFamily.DIRECT_PRODUCT:
            factors = params[0] if len(params) == 1 and not isinstance(params[0], FiniteGroup) else params
            group = direct_product(list(factors))
        else:
            group = from_table(params[0])
    except IndexError:
        raise InvalidGroupError("family parameters", detail=f"missing parameters for {family.value}")
    if name is not None:
        group = FiniteGroup(mul=group.mul, inv=group.inv, name=name)
    logger.debug(f"Built group {group.name} of order {group.order}")
    return group


_NAME_TOKEN = re.compile(r"^(Z|D|S|Q)(\d+)$")


def group_by_name(name: str) -> FiniteGroup:
    """Parse names like "Z4", "S3", "D4", "Q8" or products such as "Z2xZ2"."""
    factors = []
    for token in name.split("x"):
        match = _NAME_TOKEN.match(token.strip())
        if not match:
            raise InvalidGroupError("family parameters", detail=f"cannot parse group name {name!r}")
        letter, number = match.group(1), int(match.group(2))
        if letter == "Z":
            factors.append(cyclic(number))
        elif letter == "D":
            factors.append(dihedral(number))
        elif letter == "S":
            factors.append(symmetric(number))
        elif number == 8:
            factors.append(quaternion8())
        else:
            raise InvalidGroupError("family parameters", detail=f"no quaternion group Q{number}")
    if len(factors) == 1:
        return factors[0]
    return direct_product(factors, name=name)


def relabel_group(G: FiniteGroup, perm: Sequence[int], name: Optional[str] = None) -> FiniteGroup:
    """Renumber G so that old element a becomes perm[a]; perm must fix 0."""
    perm = np.asarray(perm, dtype=np.int64)
    if perm[0] != 0 or sorted(perm.tolist()) != list(range(G.order)):
        raise InvalidGroupError("relabeling", detail="perm must be a permutation fixing 0")
    mul = np.zeros_like(G.mul)
    mul[perm[:, None], perm[None, :]] = perm[G.mul]
    return from_table(mul, name=name or G.name)


def generated_subgroup(G: FiniteGroup, gens: Sequence[int]) -> np.ndarray:
    """Sorted ids of the subgroup generated by `gens`."""
    table = G.mul_list
    seen = [False] * G.order
    seen[0] = True
    queue = [0]
    for g in queue:
        row = table[g]
        for s in gens:
            h = row[s]
            if not seen[h]:
                seen[h] = True
                queue.append(h)
    return np.array(sorted(queue), dtype=np.int64)


def extend_homomorphism(
    G: FiniteGroup,
    gens: Sequence[int],
    images: Sequence[int],
    H: Optional[FiniteGroup] = None,
    injective: bool = True,
) -> Optional[np.ndarray]:
    """Extend gens[i] -> images[i] to a homomorphism on the subgroup generated by gens.

    Walks the Cayley graph of <gens> breadth first, assigning phi(g*s) = phi(g)*t.
    The assignment is a homomorphism exactly when no edge is inconsistent.

    Args:
        G: Source group.
        gens: Generators in G.
        images: Their proposed images in H.
        H: Target group, G when omitted.
        injective: Reject assignments that identify two elements.

    Returns:
        Array of length |G| with phi on <gens> and -1 elsewhere, or None.
    """
    H = H or G
    source, target = G.mul_list, H.mul_list
    phi = [-1] * G.order
    used = [False] * H.order
    phi[0] = 0
    used[0] = True
    queue = [0]
    pairs = list(zip(gens, images))
    for g in queue:
        fg = phi[g]
        for s, t in pairs:
            h = source[g][s]
            image = target[fg][t]
            if phi[h] >= 0:
                if phi[h] != image:
                    return None
            else:
                if injective and used[image]:
                    return None
                phi[h] = image
                used[image] = True
                queue.append(h)
    return np.array(phi, dtype=np.int64)


def is_isomorphism(G: FiniteGroup, H: FiniteGroup, f: Sequence[int]) -> bool:
    f = np.asarray(f, dtype=np.int64)
    if G.order != H.order or len(f) != G.order or f.min() < 0:
        return False
    if len(np.unique(f)) != G.order:
        return False
    return bool(np.array_equal(f[G.mul], H.mul[f[:, None], f[None, :]]))


def minimal_generating_number(G: FiniteGroup) -> int:
    """Least d such that some d elements generate G.

    Iterative deepening over generated subgroups: level d holds every distinct
    subgroup generated by d elements, deduplicated by member set.
    """
    n = G.order
    if n == 1:
        return 0
    if int(G.element_orders.max()) == n:
        return 1
    # one representative per cyclic subgroup is enough
    cyclic_reps: Dict[frozenset, int] = {}
    for x in range(1, n):
        key = frozenset(generated_subgroup(G, [x]).tolist())
        cyclic_reps.setdefault(key, x)
    reps = sorted(cyclic_reps.values())
    level: Dict[frozenset, tuple] = {frozenset([0]): ()}
    d = 0
    while True:
        d += 1
        next_level: Dict[frozenset, tuple] = {}
        for members, gens in level.items():
            for x in reps:
                if x in members:
                    continue
                new_gens = gens + (x,)
                subgroup = frozenset(generated_subgroup(G, new_gens).tolist())
                if len(subgroup) == n:
                    logger.debug(f"d({G.name}) = {d} via generators {new_gens}")
                    return d
                next_level.setdefault(subgroup, new_gens)
        level = next_level
