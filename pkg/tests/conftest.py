import pytest

from backend.core.groups.group import cyclic, group_by_name, relabel_group


@pytest.fixture
def z2():
    return cyclic(2)


@pytest.fixture
def z3():
    return cyclic(3)


@pytest.fixture
def z4():
    return cyclic(4)


@pytest.fixture
def klein():
    return group_by_name("Z2xZ2")


@pytest.fixture
def s3():
    return group_by_name("S3")


@pytest.fixture
def z4_renumbered(z4):
    # 1 <-> 3 is an automorphism; 1 -> 2 -> 3 -> 1 is a genuine renumbering
    return relabel_group(z4, [0, 2, 3, 1], name="Z4'")
