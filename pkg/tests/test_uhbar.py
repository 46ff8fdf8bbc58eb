"""Tests for PBW arithmetic in U_ħ, ideal reduction and invariants."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slodowy.errors import DomainError, InputError, ResourceError
from slodowy.gradings import Grading
from slodowy.lie_core import Mat
from slodowy.partitions import Partition
from slodowy.poisson import ClassicalCtx, is_invariant, symbol_to_poly
from slodowy.stages import construct_stage
from slodowy.uhbar import (
    LieBasis,
    PBWAlgebra,
    PBWElem,
    ReductionCtx,
    ideal_reduce,
    invariant_basis,
    invariant_space,
    kazhdan_symbol,
    one_shot_dims,
    random_element,
    stage_algebra,
    stage_phi_and_comoment,
    two_stage_dims,
    verify_sl3,
)


def E(n: int, i: int, j: int) -> Mat:
    return Mat.elementary(n, i, j)


@pytest.fixture
def sl2() -> PBWAlgebra:
    """Letters e, h, f in that order."""
    return PBWAlgebra(LieBasis([E(2, 1, 2), Mat.diag([1, -1]), E(2, 2, 1)], ["e", "h", "f"]))


@pytest.fixture
def sl2_ctx(sl2: PBWAlgebra) -> ReductionCtx:
    """m = span(f), χ(f) = 1, Dynkin grading."""
    return ReductionCtx.build(sl2, [E(2, 2, 1)], [1], Grading(Mat.diag([1, -1])), "sl2")


def _sl3_algebra() -> PBWAlgebra:
    """Upper triangle, Cartan, then the lower triangle last."""
    mats = [E(3, 1, 2), E(3, 1, 3), E(3, 2, 3), Mat.diag([1, -1, 0]), Mat.diag([0, 1, -1])]
    mats += [E(3, 2, 1), E(3, 3, 2), E(3, 3, 1)]
    return PBWAlgebra(LieBasis(mats))


SL3 = _sl3_algebra()


def _casimir(sl2: PBWAlgebra) -> PBWElem:
    return sl2.from_terms([[1, ["h", "h"], 0], [4, ["e", "f"], 0], [-2, ["h"], 1]])


class TestPBW:
    def test_straightening(self, sl2: PBWAlgebra) -> None:
        """f e = e f - ħ h."""
        assert sl2.word(["f", "e"]) == sl2.word(["e", "f"]) - sl2.word(["h"], hpow=1)

    def test_commutator(self, sl2: PBWAlgebra) -> None:
        assert sl2.commutator(sl2.letter(0), sl2.letter(2)) == sl2.word(["h"], hpow=1)
        assert sl2.commutator(sl2.letter(1), sl2.letter(0)) == sl2.word(["e"], hpow=1, coeff=2)

    def test_casimir_is_central(self, sl2: PBWAlgebra) -> None:
        c = _casimir(sl2)
        for letter in range(3):
            assert sl2.commutator(sl2.letter(letter), c).is_zero

    def test_normal_form_is_enforced(self) -> None:
        with pytest.raises(InputError):
            PBWElem({((2, 0), 0): 1})
        with pytest.raises(InputError):
            PBWElem({((0,), -1): 1})

    def test_json_round_trip(self, sl2: PBWAlgebra) -> None:
        c = _casimir(sl2)
        assert PBWElem.from_json(c.to_json()) == c
        assert c.to_json(sl2.names)[0]["word"] == ["e", "f"]

    def test_malformed_json(self) -> None:
        with pytest.raises(InputError):
            PBWElem.from_json([{"mono": [0]}])

    def test_pretty(self, sl2: PBWAlgebra) -> None:
        assert sl2.word(["e"], hpow=1, coeff=3).pretty(sl2.names) == "3*ħ*e"
        assert PBWElem().pretty(sl2.names) == "0"

    def test_degree(self, sl2: PBWAlgebra) -> None:
        assert _casimir(sl2).degree == 2
        assert PBWElem().degree == -1

    def test_unknown_letter(self, sl2: PBWAlgebra) -> None:
        with pytest.raises(InputError):
            sl2.word(["x"])


class TestReduction:
    def test_m_letters_must_be_last(self, sl2: PBWAlgebra) -> None:
        with pytest.raises(InputError):
            ReductionCtx(sl2, (0,), (1,), (4, 2, 0))

    def test_reduce_replaces_trailing_letters(self, sl2: PBWAlgebra, sl2_ctx: ReductionCtx) -> None:
        """e f ↦ ħ e and f ↦ ħ."""
        assert ideal_reduce(sl2.word(["e", "f"]), sl2_ctx) == sl2.word(["e"], hpow=1)
        assert ideal_reduce(sl2.word(["f", "f"]), sl2_ctx) == sl2.hbar(2)

    def test_levels(self, sl2_ctx: ReductionCtx) -> None:
        """Kazhdan levels j + 2: e 4, h 2, f 0."""
        assert sl2_ctx.levels == (4, 2, 0)

    def test_invariant_basis_sl2(self, sl2: PBWAlgebra, sl2_ctx: ReductionCtx) -> None:
        """1 and the reduced Casimir h² + 4ħe - 2ħh."""
        basis = invariant_basis(sl2_ctx, 4)
        assert len(basis) == 2
        assert basis[0] == sl2.one()
        expected = ideal_reduce(_casimir(sl2), sl2_ctx)
        assert expected == sl2.from_terms([[1, ["h", "h"], 0], [4, ["e"], 1], [-2, ["h"], 1]])
        lead = basis[1].terms[((1, 1), 0)]
        assert basis[1].scale(1 / lead) == expected

    def test_kazhdan_symbol(self, sl2: PBWAlgebra, sl2_ctx: ReductionCtx) -> None:
        symbol = kazhdan_symbol(ideal_reduce(_casimir(sl2), sl2_ctx), sl2_ctx)
        assert symbol == {(1, 1): 1, (0,): 4}

    def test_negative_degree_bound(self, sl2_ctx: ReductionCtx) -> None:
        with pytest.raises(InputError):
            invariant_basis(sl2_ctx, -1)

    def test_size_cap(self, sl2_ctx: ReductionCtx) -> None:
        with pytest.raises(ResourceError) as exc_info:
            invariant_space(sl2_ctx, 6, max_dim=5)
        assert exc_info.value.details["cap"] == 5

    def test_size_cap_from_environment(self, sl2_ctx: ReductionCtx, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("SLODOWY_MAX_DIM", "3")
        with pytest.raises(ResourceError):
            invariant_space(sl2_ctx, 4)


class TestStages:
    """The regular sl3 case (2,1) < (3)."""

    @pytest.fixture(scope="class")
    def stage(self):  # type: ignore[no-untyped-def]
        return stage_algebra(construct_stage(Partition((2, 1)), Partition((3,))))

    def test_letter_layout(self, stage) -> None:  # type: ignore[no-untyped-def]
        """Complement of m2, then k, then m1."""
        assert len(stage.algebra.basis) == 8
        assert stage.ctx2.first_m == 5
        assert stage.ctx1.first_m == 6
        assert stage.k_letters == (5,)

    def test_one_shot_dims(self, stage) -> None:  # type: ignore[no-untyped-def]
        """Graded dimensions of C[ħ, z1, z2] with z1, z2 of degrees 2 and 3."""
        assert one_shot_dims(stage.ctx2, 5) == [1, 1, 2, 3, 4, 5]

    def test_two_stage_dims_agree(self, stage) -> None:  # type: ignore[no-untyped-def]
        assert two_stage_dims(stage, 4) == one_shot_dims(stage.ctx2, 4)

    def test_phi_rejects_non_invariant(self, stage) -> None:  # type: ignore[no-untyped-def]
        e1 = stage.algebra.element(E(3, 1, 2))
        with pytest.raises(DomainError):
            stage_phi_and_comoment(stage, e1)

    def test_phi_of_constant(self, stage) -> None:  # type: ignore[no-untyped-def]
        one = stage.algebra.one()
        assert stage_phi_and_comoment(stage, one) == one

    @pytest.mark.parametrize(("which", "bound"), [("ctx1", 3), ("ctx2", 4)])
    def test_symbols_are_classical_invariants(  # type: ignore[no-untyped-def]
        self, stage, which: str, bound: int
    ) -> None:
        """Top Kazhdan symbols of quantum invariants Poisson-commute with m modulo I_χ."""
        ctx = getattr(stage, which)
        classical = ClassicalCtx.from_reduction(ctx)
        basis = invariant_basis(ctx, bound)
        assert len(basis) > 1
        for u in basis:
            symbol = symbol_to_poly(kazhdan_symbol(u, ctx), classical.algebra)
            assert is_invariant(symbol, classical), u.pretty(stage.algebra.names)

    def test_symbol_of_non_invariant(self, stage) -> None:  # type: ignore[no-untyped-def]
        classical = ClassicalCtx.from_reduction(stage.ctx2)
        e1 = stage.algebra.element(E(3, 1, 2))
        symbol = symbol_to_poly(kazhdan_symbol(e1, stage.ctx2), classical.algebra)
        assert not is_invariant(symbol, classical)


class TestSl3Example:
    def test_z1_with_correction(self) -> None:
        """The printed z1 needs the correction -3ħ(h1 + h2)."""
        report = verify_sl3(max_degree=3)
        assert report.data["z1_printed_invariant"] is False
        assert report.checks["z1_correction_found"]
        assert report.checks["z1_invariant"]
        assert report.checks["z1_lift_invariant"]
        assert report.checks["z1_phi"]
        assert report.data["z1_correction"] == "-3*ħ*h1 - 3*ħ*h2"
        assert report.checks["dims_expected"]
        assert report.checks["dims_agree"]

    @pytest.mark.slow
    def test_full_example(self) -> None:
        report = verify_sl3(max_degree=8)
        assert report.passed, report.failures()
        assert report.checks["z2_correction_found"]
        assert isinstance(report.data["z2_printed_invariant"], bool)
        assert report.data["z2_correction"]
        assert report.checks["commute"]
        assert report.data["one_shot_dims"] == [1, 1, 2, 3, 4, 5, 7, 8, 10]


@given(
    st.lists(st.integers(min_value=0, max_value=7), max_size=3),
    st.lists(st.integers(min_value=0, max_value=7), max_size=3),
    st.lists(st.integers(min_value=0, max_value=7), max_size=3),
)
@settings(max_examples=100, deadline=None)
def test_pbw_associativity(a: list[int], b: list[int], c: list[int]) -> None:
    x, y, z = SL3.word(a), SL3.word(b), SL3.word(c)
    assert SL3.mul(SL3.mul(x, y), z) == SL3.mul(x, SL3.mul(y, z))


@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=0, max_value=4))
@settings(max_examples=100, deadline=None)
def test_ideal_reduce_is_idempotent(seed: int, degree: int) -> None:
    ctx = ReductionCtx.build(
        SL3,
        [E(3, 2, 1), E(3, 3, 2), E(3, 3, 1)],
        [1, 1, 0],
        Grading(Mat.diag([2, 0, -2])),
    )
    rng = random.Random(seed)
    u = SL3.mul(random_element(ctx, degree, rng), SL3.word([rng.randrange(8) for _ in range(2)]))
    once = ideal_reduce(u, ctx)
    assert ideal_reduce(once, ctx) == once
