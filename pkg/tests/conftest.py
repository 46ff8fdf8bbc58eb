"""Shared fixtures."""

import pytest

from slodowy.partitions import Partition


@pytest.fixture
def sl6_cover() -> tuple[Partition, Partition]:
    """The cover (2,2,2) < (3,2,1) worked out entry by entry."""
    return Partition((2, 2, 2)), Partition((3, 2, 1))
