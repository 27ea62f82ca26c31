"""The direct power G^m with tuples packed as mixed-radix integers."""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Sequence, Tuple

import numpy as np

from backend.core.env import DOMAIN_CAP
from backend.core.errors import DomainCapExceededError, SchurPowerError
from backend.core.groups.group import FiniteGroup


@dataclass(frozen=True)
class PowerContext:
    """G^m with codes x_0 + x_1 n + ... + x_{m-1} n^{m-1}.

    Coordinates are 0-based throughout the library. Code 0 is the identity tuple.
    """

    base: FiniteGroup
    arity: int

    @property
    def n(self) -> int:
        return self.base.order

    @property
    def size(self) -> int:
        return self.n**self.arity

    @cached_property
    def radix(self) -> np.ndarray:
        return self.n ** np.arange(self.arity, dtype=np.int64)

    @cached_property
    def digits(self) -> np.ndarray:
        """N x m table of coordinates of every code."""
        codes = np.arange(self.size, dtype=np.int64)
        table = (codes[:, None] // self.radix[None, :]) % self.n
        table = table.astype(np.int16 if self.n <= 256 else np.int64)
        table.flags.writeable = False
        return table

    @cached_property
    def inverse(self) -> np.ndarray:
        codes = self.encode_digits(self.base.inv[self.digits])
        codes.flags.writeable = False
        return codes

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != self.arity:
            raise SchurPowerError(f"tuple {tuple(coords)} does not have arity {self.arity}")
        return int(sum(int(c) * int(r) for c, r in zip(coords, self.radix)))

    def decode(self, code: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.digits[code])

    def encode_digits(self, digits: np.ndarray) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) * self.radix).sum(axis=-1)

    def mul_codes(self, a, b) -> np.ndarray:
        """Componentwise product of broadcastable code arrays."""
        if self.arity == 1:
            return self.base.mul[a, b]
        da, db = self.digits[a], self.digits[b]
        return self.encode_digits(self.base.mul[da, db])

    def substitute(self, codes: np.ndarray, i: int, alpha) -> np.ndarray:
        """Replace coordinate i of each code by alpha."""
        return codes + (np.asarray(alpha, dtype=np.int64) - self.digits[codes, i]) * self.radix[i]

    def apply_coordinate_map(self, codes: np.ndarray, sigma: Sequence[int]) -> np.ndarray:
        """x -> x^sigma, where coordinate j of the image is x_{sigma[j]}."""
        sigma = list(sigma)
        if len(sigma) != self.arity or any(not 0 <= s < self.arity for s in sigma):
            raise SchurPowerError(f"{sigma} is not a map on {self.arity} coordinates")
        return self.encode_digits(self.digits[codes][..., sigma])

    def projected(self, k: int) -> "PowerContext":
        return PowerContext(self.base, k)

    def project_codes(self, codes: np.ndarray, K: Sequence[int]) -> np.ndarray:
        K = list(K)
        target = self.base.order ** np.arange(len(K), dtype=np.int64)
        return (self.digits[codes][..., K].astype(np.int64) * target).sum(axis=-1)

    def equality_pattern(self) -> np.ndarray:
        """N x (m choose 2) boolean table of x_i == x_j for i < j."""
        pairs = [(i, j) for i in range(self.arity) for j in range(i + 1, self.arity)]
        D = self.digits
        if not pairs:
            return np.zeros((self.size, 0), dtype=bool)
        return np.stack([D[:, i] == D[:, j] for i, j in pairs], axis=1)

    def product_pattern(self) -> np.ndarray:
        """N x m^3 boolean table of x_i x_j == x_k, triples in lexicographic order."""
        D = self.digits
        m = self.arity
        columns = []
        for i in range(m):
            for j in range(m):
                prod = self.base.mul[D[:, i], D[:, j]]
                for k in range(m):
                    columns.append(prod == D[:, k])
        return np.stack(columns, axis=1)

    def is_subgroup(self, codes: Sequence[int]) -> bool:
        codes = np.unique(np.asarray(codes, dtype=np.int64))
        if len(codes) == 0 or codes[0] != 0:
            return False
        return len(self.generated_subgroup(codes)) == len(codes)

    def generated_subgroup(self, codes: Sequence[int]) -> np.ndarray:
        """Sorted codes of the subgroup of G^m generated by `codes`.

        Elements outside the current subgroup join the generator list one at a
        time; the members are then closed under right multiplication by all of them.
        """
        members = np.zeros(self.size, dtype=bool)
        members[0] = True
        gens: List[int] = []
        for g in np.asarray(codes, dtype=np.int64):
            if members[g]:
                continue
            gens.append(int(g))
            generators = np.array(gens, dtype=np.int64)
            frontier = np.flatnonzero(members)
            while len(frontier):
                products = self.mul_codes(frontier[:, None], generators[None, :]).reshape(-1)
                fresh = np.unique(products[~members[products]])
                members[fresh] = True
                frontier = fresh
        return np.flatnonzero(members)


def power(G: FiniteGroup, m: int, cap: int = DOMAIN_CAP) -> PowerContext:
    """G^m as a PowerContext.

    Raises:
        DomainCapExceededError: if n^m exceeds `cap`.
    """
    if m < 1:
        raise SchurPowerError(f"arity must be positive, got {m}")
    if G.order**m > cap:
        raise DomainCapExceededError(G.order, m, cap)
    return PowerContext(G, m)


@dataclass(frozen=True)
class TupleProfile:
    """Coordinate-equality partition rho and product relation mu of a tuple.

    rho is a class-of vector normalized by first occurrence; mu is the sorted
    list of 0-based triples (i, j, k) with x_i x_j = x_k.
    """

    rho: Tuple[int, ...]
    mu: Tuple[Tuple[int, int, int], ...]


def tuple_profile(ctx: PowerContext, x: int) -> TupleProfile:
    if not 0 <= x < ctx.size:
        raise SchurPowerError(f"code {x} outside [0, {ctx.size})")
    coords = ctx.decode(x)
    seen = {}
    rho = tuple(seen.setdefault(v, len(seen)) for v in coords)
    mul = ctx.base.mul
    m = ctx.arity
    mu = tuple(
        (i, j, k)
        for i in range(m)
        for j in range(m)
        for k in range(m)
        if mul[coords[i], coords[j]] == coords[k]
    )
    return TupleProfile(rho=rho, mu=mu)
