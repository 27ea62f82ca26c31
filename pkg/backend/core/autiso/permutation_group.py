"""Permutation groups given by generators, with lazy element enumeration."""

import itertools
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from backend.core.errors import BudgetExceededError, SchurPowerError
from backend.core.partitions.partition import Partition


def compose(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """f after g."""
    return f[g]


def invert(f: np.ndarray) -> np.ndarray:
    inverse = np.empty_like(f)
    inverse[f] = np.arange(len(f))
    return inverse


@dataclass(frozen=True, eq=False)
class PermutationGroup:
    """A permutation group on range(degree).

    When `transversals` is set, every element is t_0 o t_1 o ... o t_{d-1} for
    exactly one choice of t_j in transversals[j], and `order` is the product of
    their lengths.
    """

    degree: int
    generators: Tuple[np.ndarray, ...]
    order: int
    transversals: Optional[Tuple[Tuple[np.ndarray, ...], ...]] = None

    def __post_init__(self):
        gens = tuple(np.asarray(g, dtype=np.int64) for g in self.generators)
        identity = np.arange(self.degree)
        for g in gens:
            if g.shape != (self.degree,) or not np.array_equal(np.sort(g), identity):
                raise SchurPowerError(f"generator is not a permutation of {self.degree} points")
        object.__setattr__(self, "generators", gens)

    @property
    def identity(self) -> np.ndarray:
        return np.arange(self.degree)

    def iter_elements(self) -> Iterator[np.ndarray]:
        if self.transversals is not None:
            for choice in itertools.product(*self.transversals):
                element = self.identity
                for t in reversed(choice):
                    element = compose(t, element)
                yield element
            return
        seen = {self.identity.tobytes()}
        queue = [self.identity]
        yield self.identity
        for f in queue:
            for g in self.generators:
                h = compose(g, f)
                key = h.tobytes()
                if key not in seen:
                    seen.add(key)
                    queue.append(h)
                    yield h

    def elements(self, limit: Optional[int] = None) -> List[np.ndarray]:
        if limit is not None and self.order > limit:
            raise BudgetExceededError("group elements", self.order, limit)
        return list(self.iter_elements())

    def orbit_labels(self) -> np.ndarray:
        """Smallest point of the orbit of every point."""
        labels = np.arange(self.degree)
        while True:
            previous = labels
            for g in self.generators:
                labels = np.minimum(labels, labels[g])
                labels = np.minimum(labels, labels[invert(g)])
            labels = labels[labels]
            if np.array_equal(labels, previous):
                return labels

    def orbits(self) -> Partition:
        return Partition.from_labels(self.orbit_labels())

    def orbit(self, point: int) -> np.ndarray:
        labels = self.orbit_labels()
        return np.flatnonzero(labels == labels[point])

    def __repr__(self) -> str:
        return f"PermutationGroup(degree={self.degree}, generators={len(self.generators)}, order={self.order})"


def schreier_orbit(point: int, generators: Sequence[np.ndarray], degree: int) -> dict:
    """Orbit of `point` with a transversal: orbit point y -> an element mapping point to y."""
    transversal = {point: np.arange(degree)}
    queue = [point]
    for x in queue:
        for g in generators:
            y = int(g[x])
            if y not in transversal:
                transversal[y] = compose(g, transversal[x])
                queue.append(y)
    return transversal


def schreier_generators(point: int, generators: Sequence[np.ndarray], degree: int) -> Iterator[np.ndarray]:
    """Generators of the stabilizer of `point`: t_{g(x)}^-1 g t_x over the orbit and the generators."""
    transversal = schreier_orbit(point, generators, degree)
    for x, t_x in transversal.items():
        for g in generators:
            yield compose(invert(transversal[int(g[x])]), compose(g, t_x))
