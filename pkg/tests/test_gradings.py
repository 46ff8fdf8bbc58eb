"""Tests for good gradings and Premet subalgebras."""

import pytest

from slodowy.errors import DomainError, InputError
from slodowy.gradings import (
    Grading,
    check_good,
    choose_lagrangian,
    dynkin_grading,
    premet_report,
    premet_subalgebra,
    symplectic_on_gminus1,
)
from slodowy.lie_core import Mat, Subalg
from slodowy.partitions import all_partitions
from slodowy.pyramids import Pyramid, enumerate_pyramids, grading_of, nilpotent_of, standard_filling


def E(n: int, i: int, j: int) -> Mat:
    return Mat.elementary(n, i, j)


def test_dynkin_grading_of_regular_nilpotent() -> None:
    g = dynkin_grading(E(3, 1, 2) + E(3, 2, 3))
    assert g.semisimple == Mat.diag([2, 0, -2])
    assert g.is_even


def test_dynkin_grading_is_good() -> None:
    e = E(4, 1, 2) + E(4, 3, 4)
    assert check_good(dynkin_grading(e), e).passed


def test_bad_grading_is_reported() -> None:
    """e in degree 1 fails the first condition."""
    e = E(3, 1, 2) + E(3, 2, 3)
    report = check_good(Grading(Mat.diag([1, 0, -1])), e)
    assert not report.passed
    assert "GG1" in report.failures()


def test_grading_pieces() -> None:
    g = Grading(Mat.diag([2, 0, -2]))
    assert g.degree(1, 3) == 4
    assert g.dim(0) == 3
    assert g.degrees == [-4, -2, 0, 2, 4]
    assert g.homogeneous_degree(E(3, 1, 2) + E(3, 2, 3)) == 2
    assert g.homogeneous_degree(E(3, 1, 2) + E(3, 1, 3)) is None


def test_grading_must_be_integral() -> None:
    with pytest.raises(DomainError):
        Grading(Mat.diag(["1/2", 0]))


def test_grading_must_be_diagonal() -> None:
    with pytest.raises(DomainError):
        Grading(E(2, 1, 2))


class TestOddGrading:
    """The odd good grading of sl3 for the minimal nilpotent E13."""

    @pytest.fixture
    def setup(self) -> tuple[Grading, Mat]:
        f = standard_filling(Pyramid.of((2, 1), (0, 1)))
        return grading_of(f), nilpotent_of(f)

    def test_nilpotent(self, setup: tuple[Grading, Mat]) -> None:
        _, e = setup
        assert e == E(3, 1, 3)

    def test_grading_is_good_and_odd(self, setup: tuple[Grading, Mat]) -> None:
        g, e = setup
        assert check_good(g, e).passed
        assert not g.is_even
        assert g.dim(-1) == 2

    def test_symplectic_form(self, setup: tuple[Grading, Mat]) -> None:
        g, e = setup
        form = symplectic_on_gminus1(g, e)
        assert form.dim == 2
        assert form.is_antisymmetric
        assert form.rank == 2

    def test_premet_subalgebra(self, setup: tuple[Grading, Mat]) -> None:
        """m = span(E21, E31) satisfies every Premet condition."""
        g, e = setup
        lagrangian = choose_lagrangian(symplectic_on_gminus1(g, e))
        assert lagrangian.dim == 1
        m = premet_subalgebra(g, e, lagrangian)
        assert m == Subalg(3, [E(3, 2, 1), E(3, 3, 1)])
        report = premet_report(m, e)
        assert report.passed, report.failures()

    def test_non_isotropic_subspace_rejected(self, setup: tuple[Grading, Mat]) -> None:
        g, e = setup
        with pytest.raises(InputError):
            premet_subalgebra(g, e, Subalg(3, [E(3, 2, 1), E(3, 3, 2)]))


def test_premet_report_detects_wrong_dimension() -> None:
    """Half the regular orbit needs three generators, not two."""
    e = E(3, 1, 2) + E(3, 2, 3)
    report = premet_report(Subalg(3, [E(3, 2, 1), E(3, 3, 1)]), e)
    assert "chi2" in report.failures()


def test_trace_form_must_pair_opposite_degrees() -> None:
    """Moving E21 into degree 4 leaves g(2) paired with g(4) and unpaired with g(-2)."""
    g = Grading(Mat.diag([1, -1]))
    g.pieces = {0: g.pieces[0], 2: g.pieces[2], 4: g.pieces[-2]}
    report = check_good(g, E(2, 1, 2))
    assert "GG5" in report.failures()
    assert report.witnesses["GG5"] == {"pairs": [[2, 4]], "degenerate": [2, 4]}


def _premet_of_every_pyramid(n: int) -> None:
    for shape in all_partitions(n):
        for p in enumerate_pyramids(shape):
            f = standard_filling(p)
            g, e = grading_of(f), nilpotent_of(f)
            m = premet_subalgebra(g, e, choose_lagrangian(symplectic_on_gminus1(g, e)))
            report = premet_report(m, e)
            assert report.passed, (str(p), report.failures())


@pytest.mark.parametrize("n", range(1, 5))
def test_every_pyramid_gives_a_premet_subalgebra(n: int) -> None:
    _premet_of_every_pyramid(n)


@pytest.mark.slow
@pytest.mark.parametrize("n", range(5, 8))
def test_every_pyramid_gives_a_premet_subalgebra_large(n: int) -> None:
    _premet_of_every_pyramid(n)
