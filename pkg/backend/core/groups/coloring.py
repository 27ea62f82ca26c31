from dataclasses import dataclass
from functools import cached_property
from typing import List

import numpy as np

from backend.core.errors import InvalidGroupError
from backend.core.groups.group import FiniteGroup, direct_product


@dataclass(frozen=True, eq=False)
class ColoredGroup:
    """A group whose elements carry color ids 0..c-1.

    Colors of two colored groups are compared by value, so isomorphism tests
    between colored groups assume both colorings use one vocabulary.
    """

    group: FiniteGroup
    coloring: np.ndarray

    def __post_init__(self):
        coloring = np.asarray(self.coloring, dtype=np.int64)
        if coloring.shape != (self.group.order,):
            raise InvalidGroupError("coloring length", detail=f"{coloring.shape} for order {self.group.order}")
        used = np.unique(coloring)
        if used[0] != 0 or used[-1] != len(used) - 1:
            raise InvalidGroupError("contiguous colors", detail=f"color ids {used.tolist()}")
        coloring.flags.writeable = False
        object.__setattr__(self, "coloring", coloring)

    @classmethod
    def monochrome(cls, group: FiniteGroup) -> "ColoredGroup":
        return cls(group, np.zeros(group.order, dtype=np.int64))

    @property
    def num_colors(self) -> int:
        return int(self.coloring.max()) + 1

    @cached_property
    def color_classes(self) -> List[np.ndarray]:
        return [np.flatnonzero(self.coloring == c) for c in range(self.num_colors)]

    def class_size(self, x: int) -> int:
        return int((self.coloring == self.coloring[x]).sum())

    def is_discrete(self) -> bool:
        return self.num_colors == self.group.order

    def __repr__(self) -> str:
        return f"ColoredGroup({self.group.name}, colors={self.num_colors})"


def individualize(CG: ColoredGroup, x: int) -> ColoredGroup:
    """Give x a fresh color, id `num_colors`, keeping every other color id.

    An element that already has a singleton color is left as it is, so the
    operation is idempotent and fresh ids agree across groups individualized
    in the same sequence.
    """
    if not 0 <= x < CG.group.order:
        raise InvalidGroupError("element id", (x,))
    if CG.class_size(x) == 1:
        return CG
    coloring = CG.coloring.copy()
    coloring[x] = CG.num_colors
    return ColoredGroup(CG.group, coloring)


def product_coloring(CG: ColoredGroup, CG2: ColoredGroup, shared_palette: bool = False) -> ColoredGroup:
    """Color G x G' by (g,1) -> c(g), (1,g') -> c'(g') and everything else -> a fresh color.

    Args:
        CG: Colored first factor.
        CG2: Colored second factor.
        shared_palette: Read both colorings in one vocabulary instead of keeping
            the two color-id spaces disjoint.

    Returns:
        A ColoredGroup over the direct product, ids renumbered preserving order
        so the fresh color is the largest id.
    """
    G, H = CG.group, CG2.group
    product = direct_product([G, H])
    offset = 0 if shared_palette else CG.num_colors
    epsilon = max(CG.num_colors, offset + CG2.num_colors)
    coloring = np.full(product.order, epsilon, dtype=np.int64)
    coloring[1 : G.order] = CG.coloring[1:]
    coloring[np.arange(1, H.order) * G.order] = CG2.coloring[1:] + offset
    _, compact = np.unique(coloring, return_inverse=True)
    return ColoredGroup(product, compact.reshape(-1))
