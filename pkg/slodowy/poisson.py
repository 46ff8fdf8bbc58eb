"""Lie–Poisson algebra of polynomial functions on g*, Hamiltonian reduction and the sl4 example.

A basis element b of g gives the coordinate x_b(X) = tr(X b). The bracket is
{x_a, x_b} = x_[a,b], extended as a biderivation. Polynomials are elements of a
sympy ``PolyRing`` over QQ.
"""

import logging
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from sympy import Matrix, Symbol, sympify
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

from .checks import CheckReport
from .config import load_fixture
from .errors import DomainError, InputError, ResourceError
from .gradings import Grading, premet_subalgebra
from .lie_core import (
    ZERO,
    Char,
    Mat,
    Rat,
    Subalg,
    bracket,
    chi_of,
    complement_basis,
    rat,
    rat_str,
    solve,
)
from .partitions import Partition
from .pyramids import Filling, Pyramid, grading_of, nilpotent_of
from .stages import construct_stage
from .uhbar import Mono, ReductionCtx

logger = logging.getLogger(__name__)

Poly = PolyElement


def substitute(f: Poly, images: Sequence[Poly | Rat], target: PolyRing) -> Poly:
    """Replace the i-th generator of ``f``'s ring by ``images[i]`` in ``target``."""
    out = target.zero
    for monom, coeff in f.terms():
        term = target(coeff)
        for image, e in zip(images, monom, strict=True):
            if e:
                term *= image**e
                if not term:
                    break
        out += term
    return out


def parse_poly(text: str | int, target: PolyRing) -> Poly:
    try:
        return target.from_expr(sympify(str(text)))
    except (ValueError, TypeError, SyntaxError) as e:
        raise InputError(f"cannot read polynomial {text!r}: {e}") from e


class PoissonAlgebra:
    """C[g*] on an ordered basis of g, with the Lie–Poisson bracket."""

    def __init__(self, basis: Sequence[Mat], labels: Sequence[str] | None = None) -> None:
        self.mats: tuple[Mat, ...] = tuple(basis)
        self.n = self.mats[0].n
        self.labels: tuple[str, ...] = tuple(labels) if labels is not None else tuple(m.name() for m in basis)
        span = Subalg(self.n, self.mats, keep_basis=True)
        if span.dim != len(self.mats):
            raise InputError("basis elements are linearly dependent")
        self._span = span
        self.ring: PolyRing = ring([f"x{i}" for i in range(len(self.mats))], QQ)[0]
        gens = self.ring.gens
        self._table: dict[tuple[int, int], Poly] = {}
        for i in range(len(self.mats)):
            for j in range(i + 1, len(self.mats)):
                value = self.coordinate(bracket(self.mats[i], self.mats[j]))
                if value:
                    self._table[(i, j)] = value
                    self._table[(j, i)] = -value
        logger.debug("Lie-Poisson algebra on %d coordinates, %d nonzero brackets", len(gens), len(self._table))

    def var(self, i: int) -> Poly:
        return self.ring.gens[i]

    def coordinate(self, x: Mat) -> Poly:
        """The linear function x_b for b = x, written in the basis coordinates."""
        coords = self._span.coords(x)
        return sum((self.ring.gens[i] * c for i, c in enumerate(coords) if c), self.ring.zero)

    def lp_bracket(self, f: Poly, g: Poly) -> Poly:
        df = [(i, f.diff(x)) for i, x in enumerate(self.ring.gens)]
        dg = [(j, g.diff(x)) for j, x in enumerate(self.ring.gens)]
        df = [(i, d) for i, d in df if d]
        dg = [(j, d) for j, d in dg if d]
        out = self.ring.zero
        for i, fi in df:
            for j, gj in dg:
                value = self._table.get((i, j))
                if value is not None:
                    out += fi * gj * value
        return out

    def to_json(self, f: Poly) -> dict[str, Any]:
        return {
            "vars": list(self.labels),
            "terms": [list(monom) + [rat_str(c)] for monom, c in sorted(f.terms())],
        }

    def from_json(self, data: Mapping[str, Any]) -> Poly:
        if list(data.get("vars", [])) != list(self.labels):
            raise InputError("polynomial variables do not match the algebra")
        out = self.ring.zero
        for entry in data.get("terms", []):
            *monom, coeff = entry
            out += self.ring({tuple(int(e) for e in monom): rat(str(coeff))})
        return out


def lp_bracket(pa: PoissonAlgebra, f: Poly, g: Poly) -> Poly:
    return pa.lp_bracket(f, g)


@dataclass
class ClassicalCtx:
    """Reduction of C[g*] by the ideal I_χ generated by x_y − χ(y), y in m.

    The m-coordinates are the last variables; ``weights`` are Kazhdan weights
    j + 2 of the coordinates of grading degree j.
    """

    algebra: PoissonAlgebra
    m_vars: tuple[int, ...]
    chi: tuple[Rat, ...]
    weights: tuple[int, ...]

    @classmethod
    def build(
        cls,
        m: Subalg,
        chi: Char,
        grading: Grading,
        preferred: Sequence[Mat] = (),
        labels: Mapping[Mat, str] | None = None,
    ) -> "ClassicalCtx":
        free = complement_basis(m.basis, m.n, preferred, "sl")
        mats = free + list(m.basis)
        pa = PoissonAlgebra(mats, [(labels or {}).get(x, x.name()) for x in mats])
        return cls(
            algebra=pa,
            m_vars=tuple(range(len(free), len(mats))),
            chi=tuple(chi(y) for y in m.basis),
            weights=tuple(max(grading.degrees_of(x), default=0) + 2 for x in mats),
        )

    @classmethod
    def from_reduction(cls, ctx: ReductionCtx) -> "ClassicalCtx":
        """Same letters, m and χ as a quantum reduction, for comparing symbols."""
        basis = ctx.algebra.basis
        return cls(
            algebra=PoissonAlgebra(basis.mats, basis.names),
            m_vars=ctx.m_letters,
            chi=ctx.chi,
            weights=ctx.levels,
        )

    @property
    def free_vars(self) -> list[int]:
        return [i for i in range(len(self.algebra.mats)) if i not in self.m_vars]

    def images(self) -> list[Poly | Rat]:
        gens = self.algebra.ring.gens
        values = dict(zip(self.m_vars, self.chi, strict=True))
        return [values[i] if i in values else gens[i] for i in range(len(gens))]

    def weight(self, monom: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self.weights, monom, strict=True))


def reduce_mod_ichi(f: Poly, ctx: ClassicalCtx) -> Poly:
    """Substitute every m-coordinate by its character value."""
    return substitute(f, ctx.images(), ctx.algebra.ring)


def failing_generators(f: Poly, ctx: ClassicalCtx) -> list[str]:
    pa = ctx.algebra
    return [pa.labels[y] for y in ctx.m_vars if reduce_mod_ichi(pa.lp_bracket(pa.var(y), f), ctx)]


def is_invariant(f: Poly, ctx: ClassicalCtx) -> bool:
    return not failing_generators(f, ctx)


def reduced_bracket(f: Poly, g: Poly, ctx: ClassicalCtx) -> Poly:
    for label, h in (("first", f), ("second", g)):
        bad = failing_generators(h, ctx)
        if bad:
            raise DomainError(f"{label} argument is not invariant", generator=bad[0])
    return reduce_mod_ichi(ctx.algebra.lp_bracket(f, g), ctx)


def symbol_to_poly(symbol: Mapping[Mono, Rat], pa: PoissonAlgebra) -> Poly:
    """Commutative image of a PBW symbol: letter i becomes coordinate i."""
    out = pa.ring.zero
    for mono, c in symbol.items():
        term = pa.ring(c)
        for i in mono:
            term *= pa.var(i)
        out += term
    return out


# --------------------------------------------------------------------------- slice sections


@dataclass
class Section:
    """A polynomial family of matrices X(p_1, ..., p_r) inside the level set of χ."""

    params: tuple[str, ...]
    ring: PolyRing
    matrix: dict[tuple[int, int], Poly]
    weights: dict[str, int]
    n: int

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Section":
        try:
            params = tuple(data["params"])
            n = len(data["matrix"])
            S = ring(list(params), QQ)[0]
            matrix = {}
            for i, row in enumerate(data["matrix"], start=1):
                for j, text in enumerate(row, start=1):
                    value = parse_poly(text, S)
                    if value:
                        matrix[(i, j)] = value
            weights = {p: int(w) for p, w in data["weights"].items()}
        except (KeyError, TypeError) as e:
            raise InputError(f"malformed section: {e}") from e
        return cls(params=params, ring=S, matrix=matrix, weights=weights, n=n)

    def gen(self, name: str) -> Poly:
        return self.ring.gens[self.params.index(name)]

    def pair(self, b: Mat) -> Poly:
        """tr(X b) as a polynomial in the parameters."""
        return sum((self.matrix[(j, i)] * c for (i, j), c in b.items() if (j, i) in self.matrix), self.ring.zero)

    def restrict(self, f: Poly, pa: PoissonAlgebra) -> Poly:
        return substitute(f, [self.pair(b) for b in pa.mats], self.ring)

    def to_sympy(self) -> Matrix:
        m = Matrix.zeros(self.n, self.n)
        for (i, j), value in self.matrix.items():
            m[i - 1, j - 1] = value.as_expr()
        return m


def _monomials(ctx: ClassicalCtx, weight: int, bound: int) -> Iterator[tuple[int, ...]]:
    free = ctx.free_vars
    size = len(ctx.algebra.mats)

    def extend(pos: int, left: int, w: int, exps: dict[int, int]) -> Iterator[tuple[int, ...]]:
        if pos == len(free):
            if w == weight:
                yield tuple(exps.get(i, 0) for i in range(size))
            return
        var = free[pos]
        for e in range(left + 1):
            exps[var] = e
            yield from extend(pos + 1, left - e, w + e * ctx.weights[var], exps)
        exps.pop(var, None)

    yield from extend(0, bound, 0, {})


def invariant_lift(target: Poly, section: Section, ctx: ClassicalCtx, weight: int, bound: int) -> Poly:
    """An m-invariant polynomial of Kazhdan weight ``weight`` and degree ≤ ``bound`` restricting to ``target``."""
    pa = ctx.algebra
    columns = [pa.ring({monom: 1}) for monom in _monomials(ctx, weight, bound)]
    rows: dict[tuple[Any, ...], dict[int, Rat]] = {}
    rhs: dict[tuple[Any, ...], Rat] = {}
    for col, mono in enumerate(columns):
        for y in ctx.m_vars:
            image = reduce_mod_ichi(pa.lp_bracket(pa.var(y), mono), ctx)
            for monom, c in image.terms():
                rows.setdefault(("inv", y, monom), {})[col] = c
        for monom, c in section.restrict(mono, pa).terms():
            rows.setdefault(("sec", monom), {})[col] = c
    for monom, c in target.terms():
        rhs[("sec", monom)] = c
    keys = list(rows) + [k for k in rhs if k not in rows]
    solution = solve(((rows.get(k, {}), rhs.get(k, ZERO)) for k in keys), len(columns))
    if solution is None:
        raise ResourceError(
            f"no invariant lift of weight {weight} with degree ≤ {bound}",
            weight=weight,
            bound=bound,
            candidates=len(columns),
        )
    return sum((columns[c] * v for c, v in solution.items()), pa.ring.zero)


def lift_with_escalation(
    target: Poly, section: Section, ctx: ClassicalCtx, weight: int, bounds: Sequence[int] = (3, 4, 5)
) -> Poly:
    last: ResourceError | None = None
    for bound in bounds:
        try:
            return invariant_lift(target, section, ctx, weight, bound)
        except ResourceError as e:
            logger.debug("lift of weight %d failed at degree %d", weight, bound)
            last = e
    assert last is not None
    raise last


# --------------------------------------------------------------------------- the sl4 example


def table_bracket(table: Mapping[tuple[int, int], Poly], target: PolyRing) -> Callable[[Poly, Poly], Poly]:
    """Biderivation on ``target`` determined by the brackets of its generators."""
    gens = target.gens

    def br(f: Poly, g: Poly) -> Poly:
        out = target.zero
        for (i, j), value in table.items():
            fi = f.diff(gens[i])
            if fi:
                gj = g.diff(gens[j])
                if gj:
                    out += fi * gj * value
        return out

    return br


def _side_tables(
    section: Section, ctx: ClassicalCtx, report: CheckReport, tag: str
) -> dict[tuple[int, int], Poly] | None:
    """Reduced brackets of the invariant lifts of the section parameters, restricted to the section."""
    pa = ctx.algebra
    lifts: list[Poly] = []
    for name in section.params:
        try:
            lifts.append(lift_with_escalation(section.gen(name), section, ctx, section.weights[name]))
        except ResourceError as e:
            report.add(f"{tag}_lift_{name}", False, {"error": str(e), **e.details})
            return None
    report.add(f"{tag}_lifts", True)
    table: dict[tuple[int, int], Poly] = {}
    for i in range(len(lifts)):
        for j in range(i + 1, len(lifts)):
            value = section.restrict(reduced_bracket(lifts[i], lifts[j], ctx), pa)
            if value:
                table[(i, j)] = value
                table[(j, i)] = -value
    return table


def recorded_table(section: Section, entries: Mapping[str, str]) -> dict[tuple[int, int], Poly]:
    table: dict[tuple[int, int], Poly] = {}
    for key, text in entries.items():
        a, b = (s.strip() for s in key.split(","))
        i, j = section.params.index(a), section.params.index(b)
        value = parse_poly(text, section.ring)
        table[(i, j)] = value
        table[(j, i)] = -value
    return table


def _scalar(
    computed: dict[tuple[int, int], Poly], expected: dict[tuple[int, int], Poly]
) -> Rat | None:
    for key, value in sorted(expected.items()):
        monom, coeff = value.terms()[0]
        found = dict(computed.get(key, value.ring.zero).terms()).get(monom, ZERO)
        if found:
            return found / coeff
    return None


def _mismatches(
    section: Section,
    computed: dict[tuple[int, int], Poly],
    recorded: dict[tuple[int, int], Poly],
    scalar: Rat,
) -> list[dict[str, Any]]:
    zero = section.ring.zero
    return [
        {
            "pair": [section.params[i], section.params[j]],
            "computed": str(computed.get((i, j), zero).as_expr()),
            "expected": str((recorded.get((i, j), zero) * scalar).as_expr()),
        }
        for i in range(len(section.params))
        for j in range(i + 1, len(section.params))
        if computed.get((i, j), zero) != recorded.get((i, j), zero) * scalar
    ]


def _section_in_level_set(section: Section, m: Subalg, chi: Char) -> bool:
    return all(section.pair(y) == section.ring(chi(y)) for y in m.basis)


def verify_sl4(fixture_dir: str | None = None) -> CheckReport:
    """Both reductions of the sl4 example, their bracket tables, and the isomorphism φ."""
    data = load_fixture("sl4", fixture_dir)
    report = CheckReport(subject="sl4")

    premet = data["premet"]
    pyramid = Pyramid.of(premet["shape"], premet["offsets"])
    filling = Filling(pyramid, premet["labels"])
    e = nilpotent_of(filling)
    g = grading_of(filling)
    m = premet_subalgebra(g, e, Subalg(e.n))
    chi = chi_of(e, m)
    slice_side = Section.from_json(data["slice"])
    ctx_slice = ClassicalCtx.build(m, chi, g)

    sd = construct_stage(Partition.of(data["mu"]), Partition.of(data["lam"]))
    reduced_side = Section.from_json(data["reduced"])
    ctx_reduced = ClassicalCtx.build(sd.m2, sd.chi2, Grading(sd.h2prime.matrix))

    report.add("slice_in_level_set", _section_in_level_set(slice_side, m, chi))
    report.add("reduced_in_level_set", _section_in_level_set(reduced_side, sd.m2, sd.chi2))
    phi = [parse_poly(data["phi"][p], reduced_side.ring) for p in slice_side.params]
    psi = [parse_poly(data["psi"][p], slice_side.ring) for p in reduced_side.params]
    report.add(
        "phi_psi_identity",
        all(substitute(p, phi, reduced_side.ring) == x for p, x in zip(psi, reduced_side.ring.gens, strict=True)),
    )
    report.add(
        "psi_phi_identity",
        all(substitute(p, psi, slice_side.ring) == x for p, x in zip(phi, slice_side.ring.gens, strict=True)),
    )
    report.add("char_poly", _char_poly_preserved(slice_side, reduced_side, phi))

    computed_s = _side_tables(slice_side, ctx_slice, report, "slice")
    computed_r = _side_tables(reduced_side, ctx_reduced, report, "reduced")
    if computed_s is None or computed_r is None:
        return report
    printed_r = data["reduced"]["brackets"]
    errata = data["reduced"].get("errata", {})
    recorded_s = recorded_table(slice_side, data["slice"]["brackets"])
    recorded_r = recorded_table(reduced_side, {**printed_r, **errata})

    scalar = _scalar(computed_s, recorded_s)
    report.data["scalar"] = rat_str(scalar) if scalar is not None else None
    report.data["sign"] = None if scalar is None else (1 if scalar > 0 else -1)
    report.data["slice_brackets"] = _table_json(computed_s, slice_side)
    report.data["reduced_brackets"] = _table_json(computed_r, reduced_side)
    if scalar is None:
        report.add("scalar_found", False)
        return report
    report.add("scalar_found", True)
    for tag, section, computed, recorded in (
        ("slice", slice_side, computed_s, recorded_s),
        ("reduced", reduced_side, computed_r, recorded_r),
    ):
        mismatches = _mismatches(section, computed, recorded, scalar)
        report.add(f"{tag}_table", not mismatches, {"mismatches": mismatches})
    # the printed {u,v} entry disagrees with φ({d,f}); the errata entry replaces it
    report.data["reduced_printed_matches"] = not _mismatches(
        reduced_side, computed_r, recorded_table(reduced_side, printed_r), scalar
    )
    report.data["reduced_errata"] = {
        key: {"printed": printed_r.get(key), "corrected": text} for key, text in errata.items()
    }

    br_s = table_bracket(computed_s, slice_side.ring)
    br_r = table_bracket(computed_r, reduced_side.ring)
    not_poisson = [
        [slice_side.params[i], slice_side.params[j]]
        for i in range(len(phi))
        for j in range(i + 1, len(phi))
        if substitute(br_s(slice_side.ring.gens[i], slice_side.ring.gens[j]), phi, reduced_side.ring)
        != br_r(phi[i], phi[j])
    ]
    report.add("phi_poisson", not not_poisson, {"pairs": not_poisson})
    logger.info("sl4 example: %s (scalar %s)", "pass" if report.passed else report.failures(), report.data["scalar"])
    return report


def _char_poly_preserved(source: Section, target: Section, phi: Sequence[Poly]) -> bool:
    t = Symbol("t")
    mine = source.to_sympy().charpoly(t).all_coeffs()
    theirs = target.to_sympy().charpoly(t).all_coeffs()
    return all(
        substitute(parse_poly(a, source.ring), phi, target.ring) == parse_poly(b, target.ring)
        for a, b in zip(mine, theirs, strict=True)
    )


def _table_json(table: Mapping[tuple[int, int], Poly], section: Section) -> dict[str, str]:
    return {
        f"{section.params[i]},{section.params[j]}": str(value.as_expr())
        for (i, j), value in sorted(table.items())
        if i < j
    }
