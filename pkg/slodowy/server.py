"""FastMCP server exposing stage construction and verification as tools."""

import logging
from typing import Any, Literal

from fastmcp import FastMCP

from .partitions import Partition, covers_above
from .pyramids import Pyramid, enumerate_pyramids, render, right_aligned
from .stages import construct_stage as build_stage
from .stages import verify_stage as check_stage

logger = logging.getLogger(__name__)

mcp = FastMCP(
    name="Slodowy Stages Server",
    instructions="""
# Slodowy Stages Server

Exact computations for Hamiltonian reduction by stages in type A.

## Conventions

- Partitions are lists of positive integers in nonincreasing order, e.g. [2, 2, 2].
- A stage is a dominance cover mu < lam; use `list_covers` to find valid lam.
- Matrices are sparse: {"n": n, "entries": [[row, col, "p/q"], ...]}, 1-based.

## Tools

- `list_covers`: partitions covering a given partition
- `construct_stage`: e1, e2, h2', m1, k, m2 and the characters for a cover
- `verify_stage`: every check of the construction, with witnesses for failures
- `render_pyramid`: ascii / tex / dot drawing of a pyramid
- `run_example`: the sl3 (quantum) or sl4 (classical) worked example
""",
)


@mcp.tool()
async def list_covers(partition: list[int]) -> list[list[int]]:
    """Partitions covering ``partition`` in dominance order.

    Args:
        partition: Nonincreasing list of positive integers

    Returns:
        Covering partitions, largest first
    """
    try:
        return [lam.to_json() for lam in covers_above(Partition.of(partition))]
    except Exception as e:
        raise Exception(f"list_covers failed: {str(e)}") from e


@mcp.tool()
async def construct_stage(mu: list[int], lam: list[int]) -> dict[str, Any]:
    """Stage data for the cover mu < lam.

    Args:
        mu: Jordan type of the first-stage nilpotent
        lam: Jordan type of e2; must cover mu

    Returns:
        JSON form of the stage data
    """
    try:
        return build_stage(Partition.of(mu), Partition.of(lam)).to_json()
    except Exception as e:
        raise Exception(f"construct_stage failed: {str(e)}") from e


@mcp.tool()
async def verify_stage(mu: list[int], lam: list[int]) -> dict[str, Any]:
    """Run every check of the stage construction for mu < lam.

    Returns:
        Report with ``passed``, per-check results, failures and witnesses
    """
    try:
        report = check_stage(Partition.of(mu), Partition.of(lam))
        logger.info("verify_stage %s < %s: %s", mu, lam, report.passed)
        return report.to_dict()
    except Exception as e:
        raise Exception(f"verify_stage failed: {str(e)}") from e


@mcp.tool()
async def render_pyramid(
    shape: list[int],
    offsets: list[int] | None = None,
    format: Literal["ascii", "tex", "dot"] = "ascii",
) -> str:
    """Draw a pyramid of the given shape.

    Args:
        shape: Row lengths, bottom row first
        offsets: Row offsets in half-box units; right-aligned when omitted
        format: ascii, tex (TikZ) or dot

    Returns:
        The rendering as text
    """
    try:
        p = Partition.of(shape)
        pyramid = right_aligned(p) if offsets is None else Pyramid.of(p, offsets)
        return render(pyramid, fmt=format)
    except Exception as e:
        raise Exception(f"render_pyramid failed: {str(e)}") from e


@mcp.tool()
async def count_pyramids(shape: list[int]) -> int:
    """Number of pyramids of the given shape."""
    try:
        return len(enumerate_pyramids(Partition.of(shape)))
    except Exception as e:
        raise Exception(f"count_pyramids failed: {str(e)}") from e


@mcp.tool()
async def run_example(name: Literal["sl3", "sl4"], max_degree: int = 4) -> dict[str, Any]:
    """Run one of the worked examples against its packaged fixture.

    Args:
        name: sl3 (quantum reduction) or sl4 (Poisson reduction)
        max_degree: Degree bound for the sl3 dimension table

    Returns:
        Check report; for sl4 the data holds the normalization scalar and sign
    """
    try:
        if name == "sl3":
            from .uhbar import verify_sl3

            return verify_sl3(max_degree=max_degree).to_dict()
        if name == "sl4":
            from .poisson import verify_sl4

            return verify_sl4().to_dict()
        raise ValueError(f"unknown example {name!r}")
    except Exception as e:
        raise Exception(f"run_example failed: {str(e)}") from e
