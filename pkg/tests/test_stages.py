"""Tests for the stage construction (e2, k, m2, h2') and its verification."""

import pytest

from slodowy.errors import RelationError
from slodowy.lie_core import Mat, Subalg, centralizer, jordan_type
from slodowy.partitions import Partition, hasse_edges
from slodowy.pyramids import nilpotent_of, right_aligned, standard_filling
from slodowy.stages import (
    check_chains,
    construct_stage,
    ek_basis,
    jordan_strings_e2,
    subregular_to_regular,
    verify_stage,
)


def E(n: int, i: int, j: int) -> Mat:
    return Mat.elementary(n, i, j)


def _ek_position(shape: Partition, i: int, j: int, shift: int) -> int:
    position = 0
    for a in range(1, shape.length + 1):
        for b in range(1, shape.length + 1):
            shifts = list(range(0, shape[b]) if a <= b else range(shape[b] - shape[a], shape[b]))
            if (a, b) == (i, j):
                return position + shifts.index(shift)
            position += len(shifts)
    raise AssertionError("no such basis element")


class TestSl6Cover:
    """(2,2,2) < (3,2,1), entry by entry."""

    def test_e2(self, sl6_cover: tuple[Partition, Partition]) -> None:
        sd = construct_stage(*sl6_cover)
        assert sd.e2 == sd.e1 + E(6, 1, 3) + E(6, 4, 6)
        assert jordan_type(sd.e2) == Partition((3, 2, 1))

    def test_k(self, sl6_cover: tuple[Partition, Partition]) -> None:
        sd = construct_stage(*sl6_cover)
        e_1 = E(6, 2, 1) + E(6, 3, 2) + E(6, 5, 4) + E(6, 6, 5)
        e_2 = E(6, 3, 1) + E(6, 6, 4)
        assert sd.k.basis == (e_1, e_2)

    def test_h2prime(self, sl6_cover: tuple[Partition, Partition]) -> None:
        """(E22 - E55) + (2E11 - 2E66), already trace zero."""
        sd = construct_stage(*sl6_cover)
        assert sd.h2prime.matrix == Mat.diag([2, 1, 0, 0, -1, -2])
        assert sd.h2prime.K == -1
        assert sd.h2prime.source == "trace"

    def test_dimensions(self, sl6_cover: tuple[Partition, Partition]) -> None:
        """m2 is half of the (3,2,1) orbit."""
        sd = construct_stage(*sl6_cover)
        assert sd.m1.dim == 9
        assert sd.k.dim == 2
        assert sd.m2.dim == 11

    def test_verify(self, sl6_cover: tuple[Partition, Partition]) -> None:
        report = verify_stage(*sl6_cover)
        assert report.passed, report.failures()
        assert report.data["K"] == "-1"

    def test_json(self, sl6_cover: tuple[Partition, Partition]) -> None:
        data = construct_stage(*sl6_cover).to_json()
        assert data["mu"] == [2, 2, 2]
        assert data["rows"] == {"i": 1, "j": 3}
        assert data["K_source"] == "trace"
        assert Mat.from_json(data["e2"]) == construct_stage(*sl6_cover).e2


def test_subregular_sl3() -> None:
    """(2,1) < (3): regular e2 and the full lower triangular m2."""
    sd = construct_stage(Partition((2, 1)), Partition((3,)))
    assert sd.e2 == E(3, 1, 2) + E(3, 2, 3)
    assert sd.m1 == Subalg(3, [E(3, 2, 1), E(3, 3, 1)])
    assert sd.k.basis == (E(3, 3, 2),)
    assert sd.h2prime.matrix == Mat.diag([2, 0, -2])


def test_sl4_cover_2_2() -> None:
    """(2,2) < (3,1)."""
    sd = construct_stage(Partition((2, 2)), Partition((3, 1)))
    assert sd.e2 == E(4, 1, 2) + E(4, 1, 3) + E(4, 2, 4) + E(4, 3, 4)
    assert sd.k.basis == (E(4, 2, 1) + E(4, 4, 3),)
    assert sd.h2prime.matrix == Mat.diag([2, 0, 0, -2])


def test_fractional_trace_constant_falls_back() -> None:
    """For (3,2,1) < (4,1,1) the trace-zero K is -4/5; K = 0 gives a good grading."""
    sd = construct_stage(Partition((3, 2, 1)), Partition((4, 1, 1)))
    assert sd.h2prime.source == "aligned"
    assert sd.h2prime.K == 0
    assert sd.h2prime.matrix.trace() == 0
    assert verify_stage(sd.mu, sd.lam, sd).passed


def test_non_cover_is_rejected() -> None:
    with pytest.raises(RelationError):
        construct_stage(Partition((2, 2, 2)), Partition((3, 3)))


def test_jordan_chains_of_sl6_cover(sl6_cover: tuple[Partition, Partition]) -> None:
    sd = construct_stage(*sl6_cover)
    report = check_chains(sd.e2, jordan_strings_e2(sd.filling, sd.rows))
    assert report.passed, report.witnesses
    assert report.data["lengths"] == [3, 2, 1]


def test_jordan_chain_of_subregular_sl3() -> None:
    """e2 = E12 + E23 sends e3 to e2 to e1; the receiving row's coefficient stops growing at mu_j."""
    sd = construct_stage(Partition((2, 1)), Partition((3,)))
    chains = jordan_strings_e2(sd.filling, sd.rows)
    assert chains == [[{3: 1}, {2: 1}, {1: 1}]]
    assert check_chains(sd.e2, chains).passed


@pytest.mark.parametrize(
    ("mu", "lam", "lengths"),
    [((3, 2), (4, 1), [4, 1]), ((3, 2, 1), (3, 3), [3, 3]), ((3, 2, 1), (4, 1, 1), [4, 1, 1])],
)
def test_jordan_chains_with_unequal_rows(
    mu: tuple[int, ...], lam: tuple[int, ...], lengths: list[int]
) -> None:
    sd = construct_stage(Partition(mu), Partition(lam))
    report = check_chains(sd.e2, jordan_strings_e2(sd.filling, sd.rows))
    assert report.passed, report.witnesses
    assert report.data["lengths"] == lengths


def test_broken_chain_is_reported(sl6_cover: tuple[Partition, Partition]) -> None:
    sd = construct_stage(*sl6_cover)
    report = check_chains(sd.e1, jordan_strings_e2(sd.filling, sd.rows))
    assert not report.passed


class TestEKBasis:
    @pytest.mark.parametrize("parts", [(1,), (2, 1), (2, 2), (3, 2, 1), (3, 3, 1), (4, 2, 1)])
    def test_spans_centralizer(self, parts: tuple[int, ...]) -> None:
        shape = Partition(parts)
        e = nilpotent_of(standard_filling(right_aligned(shape)))
        basis = ek_basis(shape)
        assert len(basis) == sum(min(a, b) for a in parts for b in parts)
        assert Subalg(shape.n, basis) == centralizer(e, "gl")
        assert Subalg(shape.n, basis).dim == len(basis)

    @pytest.mark.parametrize("parts", [(2, 1), (3, 2, 2), (4, 1)])
    def test_diagonal_shifts_sum_to_e(self, parts: tuple[int, ...]) -> None:
        shape = Partition(parts)
        basis = ek_basis(shape)
        total = Mat.zero(shape.n)
        for i in range(1, shape.length + 1):
            if shape[i] > 1:
                total = total + basis[_ek_position(shape, i, i, 1)]
        assert total == nilpotent_of(standard_filling(right_aligned(shape)))


@pytest.mark.parametrize("n", range(2, 7))
def test_subregular_to_regular(n: int) -> None:
    report = subregular_to_regular(n)
    assert report.passed, report.witnesses


@pytest.mark.parametrize("n", range(2, 6))
def test_every_cover_verifies(n: int) -> None:
    for mu, lam in hasse_edges(n):
        report = verify_stage(mu, lam)
        assert report.passed, (str(mu), str(lam), report.failures())


@pytest.mark.slow
@pytest.mark.parametrize("n", range(6, 9))
def test_every_cover_verifies_large(n: int) -> None:
    for mu, lam in hasse_edges(n):
        report = verify_stage(mu, lam)
        assert report.passed, (str(mu), str(lam), report.failures())
