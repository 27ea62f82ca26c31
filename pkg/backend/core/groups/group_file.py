from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field

from backend.core.errors import InvalidGroupError
from backend.core.groups.coloring import ColoredGroup
from backend.core.groups.group import FiniteGroup, from_table


class GroupFile(BaseModel):
    order: int = Field(description="Number of elements n; ids are 0..n-1 and 0 is the identity")
    mul: List[List[int]] = Field(description="Cayley table, mul[a][b] is the id of a*b")
    coloring: Optional[List[int]] = Field(default=None, description="Color id per element; absent means monochrome")
    name: Optional[str] = Field(default=None, description="Display name of the group")


def group_to_file(G: FiniteGroup, coloring: Optional[np.ndarray] = None) -> GroupFile:
    return GroupFile(
        order=G.order,
        mul=G.mul.tolist(),
        coloring=None if coloring is None else [int(c) for c in coloring],
        name=G.name,
    )


def colored_group_to_file(CG: ColoredGroup) -> GroupFile:
    return group_to_file(CG.group, CG.coloring)


def group_from_file(data: GroupFile) -> ColoredGroup:
    """Validate a group file and return it as a colored group (monochrome if uncolored)."""
    if len(data.mul) != data.order:
        raise InvalidGroupError("declared order", detail=f"order {data.order} but {len(data.mul)} rows")
    G = from_table(data.mul, name=data.name or f"G{data.order}")
    if data.coloring is None:
        return ColoredGroup.monochrome(G)
    return ColoredGroup(G, np.asarray(data.coloring, dtype=np.int64))
