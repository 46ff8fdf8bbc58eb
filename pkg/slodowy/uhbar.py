"""U_ħ of a matrix Lie algebra as a PBW rewriting system, and its quantum Hamiltonian reductions.

Elements are finite sums of ordered monomials ``x_{i1} ... x_{ik} ħ^p`` with
``i1 <= ... <= ik`` in a fixed basis order; ħ is central and
``x y - y x = ħ [x, y]``. Every letter and ħ have Rees degree 1, so products,
commutators and the ideal reduction preserve the Rees degree.
"""

import logging
import random
from bisect import bisect_left
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Any

from sympy.polys.domains import QQ

from .checks import CheckReport
from .config import Settings, load_fixture
from .errors import ConsistencyError, DomainError, InputError, ResourceError
from .gradings import Grading
from .lie_core import (
    ONE,
    ZERO,
    Mat,
    Rat,
    Subalg,
    bracket,
    complement_basis,
    nullspace,
    rank,
    rat,
    rat_str,
    solve,
)
from .partitions import Partition
from .pyramids import grading_of
from .stages import StageData, construct_stage

logger = logging.getLogger(__name__)

Mono = tuple[int, ...]
Term = tuple[Mono, int]
Terms = dict[Term, Rat]


def _acc(out: dict[Any, Rat], key: Any, c: Rat) -> None:
    value = out.get(key, ZERO) + c
    if value:
        out[key] = value
    else:
        out.pop(key, None)


class LieBasis:
    """Ordered basis of a matrix Lie algebra with cached structure constants."""

    def __init__(self, mats: Sequence[Mat], names: Sequence[str] | None = None) -> None:
        if not mats:
            raise InputError("a Lie basis needs at least one element")
        self.mats: tuple[Mat, ...] = tuple(mats)
        self.n = self.mats[0].n
        self._span = Subalg(self.n, self.mats, keep_basis=True)
        if self._span.dim != len(self.mats):
            raise InputError("basis elements are linearly dependent")
        self.names: tuple[str, ...] = tuple(names) if names is not None else tuple(m.name() for m in mats)
        if len(self.names) != len(self.mats) or len(set(self.names)) != len(self.names):
            raise InputError("basis names must be unique, one per element")
        self._index = {m: i for i, m in enumerate(self.mats)}
        self._by_name = {name: i for i, name in enumerate(self.names)}
        self._structure: dict[tuple[int, int], dict[int, Rat]] = {}

    def __len__(self) -> int:
        return len(self.mats)

    def index_of(self, x: Mat) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise InputError(f"{x.name()} is not a basis element") from None

    def index_named(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise InputError(f"unknown letter {name!r}", letters=list(self.names)) from None

    def coords(self, x: Mat) -> dict[int, Rat]:
        return {i: c for i, c in enumerate(self._span.coords(x)) if c}

    def structure(self, i: int, j: int) -> dict[int, Rat]:
        """Coordinates of [x_i, x_j]."""
        key = (i, j)
        if key not in self._structure:
            self._structure[key] = self.coords(bracket(self.mats[i], self.mats[j]))
        return self._structure[key]


class PBWElem:
    """Sparse element of U_ħ in normal form."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Term, Any] | None = None) -> None:
        clean: Terms = {}
        for (mono, hpow), c in (terms or {}).items():
            mono = tuple(int(i) for i in mono)
            if any(a > b for a, b in zip(mono, mono[1:], strict=False)) or int(hpow) < 0:
                raise InputError(f"monomial {mono} ħ^{hpow} is not in normal form")
            q = rat(c)
            if q:
                _acc(clean, (mono, int(hpow)), q)
        self.terms = clean

    @classmethod
    def _raw(cls, terms: Terms) -> "PBWElem":
        obj = cls.__new__(cls)
        obj.terms = {k: c for k, c in terms.items() if c}
        return obj

    @classmethod
    def from_json(cls, data: Iterable[Mapping[str, Any]]) -> "PBWElem":
        try:
            return cls({(tuple(t["mono"]), int(t.get("hpow", 0))): rat(str(t["coeff"])) for t in data})
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed PBW element JSON: {e}") from e

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Largest Rees degree of a term, -1 for zero."""
        return max((len(m) + h for m, h in self.terms), default=-1)

    def hbar_free(self) -> "PBWElem":
        return PBWElem._raw({(m, h): c for (m, h), c in self.terms.items() if h == 0})

    def __add__(self, other: "PBWElem") -> "PBWElem":
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return PBWElem._raw(out)

    def __sub__(self, other: "PBWElem") -> "PBWElem":
        return self + other.scale(-ONE)

    def __neg__(self) -> "PBWElem":
        return self.scale(-ONE)

    def scale(self, c: Any) -> "PBWElem":
        q = rat(c)
        return PBWElem._raw({k: q * v for k, v in self.terms.items()})

    def times_hbar(self, power: int = 1) -> "PBWElem":
        return PBWElem._raw({(m, h + power): c for (m, h), c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PBWElem):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def to_json(self, names: Sequence[str] | None = None) -> list[dict[str, Any]]:
        out = []
        for (mono, hpow), c in sorted(self.terms.items()):
            entry: dict[str, Any] = {"mono": list(mono), "hpow": hpow, "coeff": rat_str(c)}
            if names is not None:
                entry["word"] = [names[i] for i in mono]
            out.append(entry)
        return out

    def pretty(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (mono, hpow), c in sorted(self.terms.items(), key=lambda kv: (-len(kv[0][0]), kv[0])):
            factors = ([f"ħ^{hpow}" if hpow > 1 else "ħ"] if hpow else []) + [names[i] for i in mono]
            body = "*".join(factors)
            if not body:
                parts.append(rat_str(c))
            elif c == ONE:
                parts.append(body)
            elif c == -ONE:
                parts.append("-" + body)
            else:
                parts.append(f"{rat_str(c)}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"PBWElem({len(self.terms)} terms, degree {self.degree})"


class PBWAlgebra:
    """Normal-form multiplication in U_ħ by straightening ``x w1 = w1 x + ħ [x, w1]``."""

    def __init__(self, basis: LieBasis) -> None:
        self.basis = basis
        self._lmul_cache: dict[tuple[int, Mono], Terms] = {}
        self._mono_cache: dict[tuple[Mono, Mono], Terms] = {}

    @property
    def names(self) -> tuple[str, ...]:
        return self.basis.names

    def one(self) -> PBWElem:
        return PBWElem._raw({((), 0): ONE})

    def hbar(self, power: int = 1) -> PBWElem:
        return PBWElem._raw({((), power): ONE})

    def letter(self, i: int) -> PBWElem:
        return PBWElem._raw({((i,), 0): ONE})

    def element(self, x: Mat) -> PBWElem:
        return PBWElem._raw({((i,), 0): c for i, c in self.basis.coords(x).items()})

    def word(self, letters: Sequence[int | str], hpow: int = 0, coeff: Any = ONE) -> PBWElem:
        """The product of ``letters`` in the order written, times coeff·ħ^hpow."""
        out = self.hbar(hpow).scale(coeff)
        for letter in reversed(letters):
            idx = self.basis.index_named(letter) if isinstance(letter, str) else letter
            out = self.mul(self.letter(idx), out)
        return out

    def from_terms(self, terms: Iterable[Sequence[Any]]) -> PBWElem:
        """Sum of ``[coeff, [letters...], hpow]`` entries, each multiplied in the order written."""
        total = PBWElem()
        for entry in terms:
            try:
                coeff, letters, hpow = entry
            except (TypeError, ValueError) as e:
                raise InputError(f"term must be [coeff, letters, hpow], got {entry!r}") from e
            total = total + self.word(list(letters), int(hpow), rat(str(coeff)))
        return total

    def lmul(self, x: int, mono: Mono) -> Terms:
        """x · mono in normal form; keys carry the extra power of ħ."""
        key = (x, mono)
        cached = self._lmul_cache.get(key)
        if cached is not None:
            return cached
        if not mono or x <= mono[0]:
            result: Terms = {((x,) + mono, 0): ONE}
        else:
            w1, rest = mono[0], mono[1:]
            result = {}
            for (m2, h2), c2 in self.lmul(x, rest).items():
                for (m3, h3), c3 in self.lmul(w1, m2).items():
                    _acc(result, (m3, h2 + h3), c2 * c3)
            for k, s in self.basis.structure(x, w1).items():
                for (m3, h3), c3 in self.lmul(k, rest).items():
                    _acc(result, (m3, h3 + 1), s * c3)
        self._lmul_cache[key] = result
        return result

    def mono_mul(self, a: Mono, b: Mono) -> Terms:
        if not a or not b or a[-1] <= b[0]:
            return {(a + b, 0): ONE}
        key = (a, b)
        cached = self._mono_cache.get(key)
        if cached is not None:
            return cached
        result: Terms = {(b, 0): ONE}
        for x in reversed(a):
            step: Terms = {}
            for (m, h), c in result.items():
                for (m2, h2), c2 in self.lmul(x, m).items():
                    _acc(step, (m2, h + h2), c * c2)
            result = step
        self._mono_cache[key] = result
        return result

    def mul(self, a: PBWElem, b: PBWElem) -> PBWElem:
        out: Terms = {}
        for (ma, ha), ca in a.terms.items():
            for (mb, hb), cb in b.terms.items():
                for (m, h), c in self.mono_mul(ma, mb).items():
                    _acc(out, (m, ha + hb + h), ca * cb * c)
        return PBWElem._raw(out)

    def commutator(self, a: PBWElem, b: PBWElem) -> PBWElem:
        return self.mul(a, b) - self.mul(b, a)


def pbw_mul(algebra: PBWAlgebra, a: PBWElem, b: PBWElem) -> PBWElem:
    return algebra.mul(a, b)


@dataclass(frozen=True)
class ReductionCtx:
    """Quotient U_ħ / U_ħ·{y − χ(y)ħ : y ∈ m} with the m-letters last in the basis order.

    ``levels`` holds the Kazhdan level j + 2 of every letter of grading degree j.
    """

    algebra: PBWAlgebra
    m_letters: tuple[int, ...]
    chi: tuple[Rat, ...]
    levels: tuple[int, ...]
    name: str = ""

    def __post_init__(self) -> None:
        size = len(self.algebra.basis)
        if tuple(sorted(self.m_letters)) != tuple(range(size - len(self.m_letters), size)):
            raise InputError(
                "m-letters must be the last letters of the basis order", letters=list(self.m_letters)
            )
        if len(self.chi) != len(self.m_letters):
            raise InputError("one character value is needed per m-letter")

    @classmethod
    def build(
        cls,
        algebra: PBWAlgebra,
        m_basis: Sequence[Mat],
        chi_values: Sequence[Any],
        grading: Grading,
        name: str = "",
    ) -> "ReductionCtx":
        letters = [algebra.basis.index_of(y) for y in m_basis]
        order = sorted(range(len(letters)), key=lambda a: letters[a])
        levels = tuple(max(grading.degrees_of(x), default=0) + 2 for x in algebra.basis.mats)
        return cls(
            algebra=algebra,
            m_letters=tuple(letters[a] for a in order),
            chi=tuple(rat(chi_values[a]) for a in order),
            levels=levels,
            name=name,
        )

    @property
    def first_m(self) -> int:
        return len(self.algebra.basis) - len(self.m_letters)

    @property
    def free_letters(self) -> range:
        return range(self.first_m)

    def chi_value(self, letter: int) -> Rat:
        return self.chi[letter - self.first_m]

    def level(self, mono: Mono) -> int:
        return sum(self.levels[i] for i in mono)


def ideal_reduce(u: PBWElem, ctx: ReductionCtx) -> PBWElem:
    """Replace the trailing m-letters of every normal-form term by χ(y)ħ."""
    out: Terms = {}
    first = ctx.first_m
    for (mono, h), c in u.terms.items():
        p = bisect_left(mono, first)
        coeff = c
        for y in mono[p:]:
            coeff *= ctx.chi_value(y)
            if not coeff:
                break
        if coeff:
            _acc(out, (mono[:p], h + len(mono) - p), coeff)
    return PBWElem._raw(out)


def failing_generators(u: PBWElem, ctx: ReductionCtx, letters: Sequence[int] | None = None) -> list[int]:
    algebra = ctx.algebra
    return [
        y
        for y in (ctx.m_letters if letters is None else letters)
        if not ideal_reduce(algebra.commutator(algebra.letter(y), u), ctx).is_zero
    ]


def ad_invariant(a: Mat, u: PBWElem, ctx: ReductionCtx) -> bool:
    """True iff [a, u] lies in the left ideal of ``ctx``."""
    algebra = ctx.algebra
    return ideal_reduce(algebra.commutator(algebra.element(a), u), ctx).is_zero


def quotient_monomials(ctx: ReductionCtx, degree: int, max_level: int | None = None) -> list[Term]:
    """Normal-form monomials of the quotient of Rees degree ``degree``, longest first."""
    out: list[Term] = []
    for size in range(degree, -1, -1):
        for mono in combinations_with_replacement(ctx.free_letters, size):
            if max_level is None or ctx.level(mono) <= max_level:
                out.append((mono, degree - size))
    return out


def _check_size(unknowns: int, degree: int, max_dim: int | None) -> None:
    cap = max_dim if max_dim is not None else Settings.from_env().max_dim
    if unknowns > cap:
        raise ResourceError(
            f"{unknowns} unknowns at degree {degree} exceed the cap of {cap} (SLODOWY_MAX_DIM)",
            unknowns=unknowns,
            degree=degree,
            cap=cap,
        )


def _vectorize(elems: Sequence[PBWElem]) -> list[dict[int, Rat]]:
    index: dict[Term, int] = {}
    return [{index.setdefault(t, len(index)): c for t, c in u.terms.items()} for u in elems]


def _ad_rows(columns: Sequence[PBWElem], letters: Sequence[int], ctx: ReductionCtx) -> list[dict[int, Rat]]:
    """Rows of u ↦ (reduce [y, u])_y over the given columns, in ``ctx``'s quotient."""
    algebra = ctx.algebra
    rows: dict[tuple[int, Term], dict[int, Rat]] = defaultdict(dict)
    for col, u in enumerate(columns):
        for y in letters:
            image = ideal_reduce(algebra.commutator(algebra.letter(y), u), ctx)
            for term, c in image.terms.items():
                rows[(y, term)][col] = c
    return list(rows.values())


def invariant_space(
    ctx: ReductionCtx, degree: int, max_level: int | None = None, max_dim: int | None = None
) -> list[PBWElem]:
    """Basis of the m-invariants of the quotient in one Rees degree."""
    columns = quotient_monomials(ctx, degree, max_level)
    _check_size(len(columns), degree, max_dim)
    elems = [PBWElem._raw({t: ONE}) for t in columns]
    kernel = nullspace(_ad_rows(elems, ctx.m_letters, ctx), len(columns))
    logger.debug("%s degree %d: %d monomials, %d invariants", ctx.name, degree, len(columns), len(kernel))
    return [PBWElem._raw({columns[c]: v for c, v in vec.items()}) for vec in kernel]


def invariant_basis(ctx: ReductionCtx, D: int, max_dim: int | None = None) -> list[PBWElem]:
    """Invariants of Kazhdan level ≤ D whose ħ-free parts are linearly independent."""
    if D < 0:
        raise InputError(f"degree bound must be nonnegative, got {D}")
    found: list[PBWElem] = []
    symbols: list[PBWElem] = []
    for degree in range(D + 1):
        for u in invariant_space(ctx, degree, max_level=D, max_dim=max_dim):
            top = u.hbar_free()
            if top.is_zero:
                continue
            if rank(_vectorize(symbols + [top])) > len(symbols):
                symbols.append(top)
                found.append(u)
    return found


def kazhdan_symbol(u: PBWElem, ctx: ReductionCtx) -> dict[Mono, Rat]:
    """Set ħ = 1 and keep the terms of top Kazhdan level."""
    collapsed: dict[Mono, Rat] = {}
    for (mono, _), c in u.terms.items():
        _acc(collapsed, mono, c)
    if not collapsed:
        return {}
    top = max(ctx.level(m) for m in collapsed)
    return {m: c for m, c in collapsed.items() if ctx.level(m) == top}


def random_element(ctx: ReductionCtx, degree: int, rng: random.Random, size: int = 3) -> PBWElem:
    monos = quotient_monomials(ctx, degree)
    picks = rng.sample(monos, min(size, len(monos)))
    return PBWElem._raw({t: QQ(rng.randint(-4, 4) or 1) for t in picks})


# --------------------------------------------------------------------------- reduction by stages


@dataclass
class StageAlgebra:
    """One PBW algebra shared by both stages: letters ordered [complement of m2] + [k] + [m1]."""

    stage: StageData
    algebra: PBWAlgebra
    ctx1: ReductionCtx
    ctx2: ReductionCtx
    k_letters: tuple[int, ...]


def stage_algebra(
    sd: StageData, preferred: Sequence[Mat] = (), names: Mapping[Mat, str] | None = None
) -> StageAlgebra:
    fixed = list(sd.k.basis) + list(sd.m1.basis)
    mats = complement_basis(fixed, sd.n, preferred, "sl") + fixed
    labels = [(names or {}).get(m, m.name()) for m in mats]
    algebra = PBWAlgebra(LieBasis(mats, labels))
    ctx1 = ReductionCtx.build(
        algebra, sd.m1.basis, [sd.chi1(y) for y in sd.m1.basis], grading_of(sd.filling), "stage1"
    )
    ctx2 = ReductionCtx.build(
        algebra, sd.m2.basis, [sd.chi2(y) for y in sd.m2.basis], Grading(sd.h2prime.matrix), "stage2"
    )
    k_letters = tuple(algebra.basis.index_of(x) for x in sd.k.basis)
    return StageAlgebra(stage=sd, algebra=algebra, ctx1=ctx1, ctx2=ctx2, k_letters=k_letters)


def stage_phi_and_comoment(
    sa: StageAlgebra, u: PBWElem, D: int = 1, rng: random.Random | None = None
) -> PBWElem:
    """Image in the one-shot reduction of a first-stage class that is also k-invariant.

    The k-action uses the inclusion of k into g as its lift. The image is checked
    against a second representative perturbed by an element of the first-stage ideal.
    """
    names = sa.algebra.names
    bad = failing_generators(u, sa.ctx1)
    if bad:
        raise DomainError("element is not invariant modulo the first-stage ideal", generator=names[bad[0]])
    first = ideal_reduce(u, sa.ctx1)
    bad = failing_generators(first, sa.ctx2, sa.k_letters)
    if bad:
        raise DomainError("first-stage class is not k-invariant", generator=names[bad[0]])
    image = ideal_reduce(first, sa.ctx2)

    rng = rng or random.Random(0)
    if sa.ctx1.m_letters:
        y = rng.choice(sa.ctx1.m_letters)
        shift = sa.algebra.letter(y) - sa.algebra.hbar().scale(sa.ctx1.chi_value(y))
        w = random_element(sa.ctx1, max(D, 0), rng)
        other = ideal_reduce(u + sa.algebra.mul(w, shift), sa.ctx2)
        if other != image:
            raise ConsistencyError("second-stage image depends on the representative", generator=names[y])
    return image


def one_shot_dims(ctx: ReductionCtx, D: int, max_dim: int | None = None) -> list[int]:
    return [len(invariant_space(ctx, d, max_dim=max_dim)) for d in range(D + 1)]


def two_stage_dims(sa: StageAlgebra, D: int, max_dim: int | None = None) -> list[int]:
    """Per Rees degree: dimension of the second-stage image of k-invariant first-stage invariants."""
    dims = []
    for d in range(D + 1):
        first = invariant_space(sa.ctx1, d, max_dim=max_dim)
        if not first:
            dims.append(0)
            continue
        kernel = nullspace(_ad_rows(first, sa.k_letters, sa.ctx2), len(first))
        images = []
        for vec in kernel:
            combo = PBWElem()
            for c, v in vec.items():
                combo = combo + first[c].scale(v)
            images.append(ideal_reduce(combo, sa.ctx2))
        dims.append(rank(_vectorize(images)))
        logger.debug("two-stage degree %d: %d first-stage invariants, image %d", d, len(first), dims[-1])
    return dims


# --------------------------------------------------------------------------- the sl3 example


def _correction(sa: StageAlgebra, z: PBWElem, extra: PBWElem) -> PBWElem | None:
    """Lower-level c with z + c invariant in the one-shot quotient and z + c + extra m1-invariant."""
    algebra = sa.algebra
    level = max(sa.ctx2.level(m) for m, _ in z.terms)
    columns = [
        PBWElem._raw({t: ONE}) for t in quotient_monomials(sa.ctx2, z.degree) if sa.ctx2.level(t[0]) < level
    ]
    rows: dict[tuple[str, int, Term], dict[int, Rat]] = defaultdict(dict)
    rhs: dict[tuple[str, int, Term], Rat] = {}
    for tag, ctx, target in (("one_shot", sa.ctx2, z), ("first", sa.ctx1, z + extra)):
        for y in ctx.m_letters:
            ad_y = algebra.letter(y)
            for term, c in ideal_reduce(algebra.commutator(ad_y, target), ctx).terms.items():
                rhs[(tag, y, term)] = -c
            for col, u in enumerate(columns):
                for term, c in ideal_reduce(algebra.commutator(ad_y, u), ctx).terms.items():
                    rows[(tag, y, term)][col] = c
    keys = set(rows) | set(rhs)
    solution = solve(((rows.get(key, {}), rhs.get(key, ZERO)) for key in keys), len(columns))
    if solution is None:
        return None
    total = PBWElem()
    for col, v in solution.items():
        total = total + columns[col].scale(v)
    return total


def verify_sl3(max_degree: int = 8, fixture_dir: str | None = None, max_dim: int | None = None) -> CheckReport:
    """The regular sl3 example end to end: invariants, their first-stage lifts, φ and dimensions."""
    data = load_fixture("sl3", fixture_dir)
    n = int(data["n"])
    letters = {name: Mat.from_json({"n": n, "entries": entries}) for name, entries in data["letters"].items()}
    sd = construct_stage(Partition.of(data["mu"]), Partition.of(data["lam"]))
    sa = stage_algebra(sd, preferred=list(letters.values()), names={m: name for name, m in letters.items()})
    algebra, ctx1, ctx2 = sa.algebra, sa.ctx1, sa.ctx2
    names = algebra.names

    report = CheckReport(subject="sl3")
    report.data["letters"] = list(names)
    corrected: dict[str, PBWElem] = {}
    for label, entry in data["invariants"].items():
        z = algebra.from_terms(entry["terms"])
        extra = algebra.from_terms(entry["lift_extra"])
        report.data[f"{label}_printed_invariant"] = not failing_generators(z, ctx2)
        c = _correction(sa, z, extra)
        report.add(f"{label}_correction_found", c is not None)
        if c is None:
            continue
        zc = z + c
        lift = zc + extra
        corrected[label] = zc
        report.data[f"{label}_correction"] = c.pretty(names)
        report.add(f"{label}_invariant", not failing_generators(zc, ctx2), {"element": zc.pretty(names)})
        report.add(f"{label}_lift_invariant", not failing_generators(lift, ctx1), {"lift": lift.pretty(names)})
        try:
            image = stage_phi_and_comoment(sa, lift)
            report.add(f"{label}_phi", image == ideal_reduce(zc, ctx2), {"image": image.pretty(names)})
        except (DomainError, ConsistencyError) as e:
            report.add(f"{label}_phi", False, {"error": str(e), **e.details})

    if len(corrected) == 2:
        z1, z2 = corrected.values()
        report.add("commute", ideal_reduce(algebra.commutator(z1, z2), ctx2).is_zero)

    one_shot = one_shot_dims(ctx2, max_degree, max_dim)
    two_stage = two_stage_dims(sa, max_degree, max_dim)
    expected = list(data.get("one_shot_dims", []))[: max_degree + 1]
    report.data["one_shot_dims"] = one_shot
    report.data["two_stage_dims"] = two_stage
    report.add("dims_expected", one_shot[: len(expected)] == expected, {"expected": expected})
    report.add("dims_agree", one_shot == two_stage)
    logger.info("sl3 example: %s", "pass" if report.passed else report.failures())
    return report
