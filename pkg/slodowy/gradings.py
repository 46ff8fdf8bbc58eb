"""Good gradings, Premet subalgebras and the symplectic form on g_{-1}.

Only gradings by a diagonal semisimple element are handled; the degree of the
elementary matrix E_ij is h_ii − h_jj.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Any

from .checks import CheckReport
from .errors import ConsistencyError, DomainError, InputError
from .lie_core import (
    ONE,
    ZERO,
    Mat,
    Rat,
    Subalg,
    bracket,
    centralizer,
    chi_of,
    is_ad_nilpotent,
    jordan_type,
    rank,
    rat_str,
    sl2_complete,
    trace_pair,
)
from .partitions import orbit_dim

logger = logging.getLogger(__name__)


class Grading:
    """Z-grading of gl_n by the ad-eigenvalues of a diagonal matrix."""

    def __init__(self, semisimple: Mat) -> None:
        if not semisimple.is_diagonal:
            raise DomainError(f"{semisimple.name()} is not diagonal")
        self.semisimple = semisimple
        self.n = semisimple.n
        diag = semisimple.diagonal()
        self._degree: dict[tuple[int, int], int] = {}
        pieces: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                d = diag[i - 1] - diag[j - 1]
                if d.denominator != 1:
                    raise DomainError(
                        f"ad-eigenvalue {rat_str(d)} of E{i}{j} is not an integer", entry=[i, j]
                    )
                self._degree[(i, j)] = int(d.numerator)
                pieces[int(d.numerator)].append((i, j))
        self.pieces: dict[int, list[tuple[int, int]]] = dict(sorted(pieces.items()))

    def degree(self, i: int, j: int) -> int:
        return self._degree[(i, j)]

    @property
    def degrees(self) -> list[int]:
        return list(self.pieces)

    def piece(self, j: int) -> Subalg:
        return Subalg(self.n, [Mat.elementary(self.n, a, b) for a, b in self.pieces.get(j, [])])

    def dim(self, j: int) -> int:
        return len(self.pieces.get(j, []))

    def degrees_of(self, x: Mat) -> set[int]:
        return {self._degree[k] for k in x.support}

    def homogeneous_degree(self, x: Mat) -> int | None:
        found = self.degrees_of(x)
        return found.pop() if len(found) == 1 else None

    @property
    def is_even(self) -> bool:
        return all(j % 2 == 0 for j in self.pieces)

    def to_json(self) -> dict[str, Any]:
        return {
            "semisimple": [rat_str(c) for c in self.semisimple.diagonal()],
            "dims": {str(j): len(p) for j, p in self.pieces.items()},
        }


def grade_from_semisimple(h: Mat) -> Grading:
    return Grading(h)


def dynkin_grading(e: Mat) -> Grading:
    """Grading by the neutral element of an sl2-triple through ``e``.

    When ``e`` is a 0/1 matrix whose entries form disjoint chains of basis vectors
    the neutral element is read off the chains and is diagonal by construction;
    otherwise the triple is computed from a Jordan basis and must be diagonal.
    """
    n = e.n
    entries = dict(e.items())
    image_of: dict[int, int] = {}
    chain_shaped = all(c == 1 for c in entries.values())
    for i, j in entries:
        if j in image_of or i in image_of.values():
            chain_shaped = False
        image_of[j] = i
    if chain_shaped:
        targets = set(image_of.values())
        weights: dict[int, int] = {}
        for start in range(1, n + 1):
            if start in targets:
                continue
            chain = [start]
            while chain[-1] in image_of:
                chain.append(image_of[chain[-1]])
            for t, label in enumerate(chain):
                weights[label] = -(len(chain) - 1) + 2 * t
        if len(weights) == n:
            return Grading(Mat.diag([weights[k] for k in range(1, n + 1)]))
    _, h, _ = sl2_complete(e)
    return Grading(h)


def _ad_rank(g: Grading, e: Mat, j: int) -> int:
    return rank(bracket(e, Mat.elementary(g.n, a, b)).to_vec() for a, b in g.pieces.get(j, []))


def _trace_row(g: Grading, x: tuple[int, int], j: int) -> dict[int, Rat]:
    """tr(E_x · y) for the elementary y spanning g(j), keyed by position in the piece."""
    ex = Mat.elementary(g.n, *x)
    row = {k: trace_pair(ex, Mat.elementary(g.n, *y)) for k, y in enumerate(g.pieces.get(j, []))}
    return {k: c for k, c in row.items() if c != ZERO}


def check_good(g: Grading, e: Mat) -> CheckReport:
    """GG1–GG6 for the pair (grading, e); failures are reported, never raised."""
    report = CheckReport(subject="good_grading")
    report.data["grading"] = g.to_json()

    off_degree = [[i, j] for (i, j) in e.support if g.degree(i, j) != 2]
    report.add("GG1", not off_degree, {"entries_not_in_degree_2": off_degree})

    not_injective = [j for j in g.degrees if j <= -1 and _ad_rank(g, e, j) != g.dim(j)]
    report.add("GG2", not not_injective, {"degrees": not_injective})

    not_surjective = [j for j in g.degrees if j >= -1 and _ad_rank(g, e, j) != g.dim(j + 2)]
    report.add("GG3", not not_surjective, {"degrees": not_surjective})

    z = centralizer(e, "gl")
    negative = [
        m.to_json() for m in z.basis if any(g.degree(i, j) < 0 for (i, j) in m.support)
    ]
    report.add("GG4", not negative, {"centralizer_elements": negative[:3]})

    not_orthogonal = [
        [i, j]
        for i in g.degrees
        for j in g.degrees
        if i <= j and i + j != 0 and any(_trace_row(g, x, j) for x in g.pieces[i])
    ]
    degenerate = [
        j
        for j in g.degrees
        if j >= 0
        and (g.dim(-j) != g.dim(j) or rank(_trace_row(g, x, -j) for x in g.pieces[j]) != g.dim(j))
    ]
    report.add(
        "GG5",
        not not_orthogonal and not degenerate,
        {"pairs": not_orthogonal, "degenerate": degenerate},
    )

    report.add(
        "GG6",
        z.dim == g.dim(0) + g.dim(1),
        {"centralizer": z.dim, "g0": g.dim(0), "g1": g.dim(1)},
    )
    return report


@dataclass
class SympForm:
    """ω(x, y) = tr(e[x, y]) on g_{-1}, with its Gram matrix over the elementary basis."""

    e: Mat
    space: Subalg
    gram: list[list[Rat]]

    @property
    def dim(self) -> int:
        return self.space.dim

    def form(self, u: list[Rat], v: list[Rat]) -> Rat:
        return sum(
            (u[a] * self.gram[a][b] * v[b] for a in range(self.dim) for b in range(self.dim) if u[a] and v[b]),
            ZERO,
        )

    @property
    def is_antisymmetric(self) -> bool:
        return all(self.gram[a][b] == -self.gram[b][a] for a in range(self.dim) for b in range(self.dim))

    @property
    def rank(self) -> int:
        return rank({b: c for b, c in enumerate(row) if c} for row in self.gram)


def symplectic_on_gminus1(g: Grading, e: Mat) -> SympForm:
    basis = [Mat.elementary(g.n, a, b) for a, b in g.pieces.get(-1, [])]
    gram = [[trace_pair(e, bracket(x, y)) for y in basis] for x in basis]
    return SympForm(e=e, space=Subalg(g.n, basis, keep_basis=True), gram=gram)


def choose_lagrangian(s: SympForm) -> Subalg:
    """Deterministic Lagrangian: pair the first remaining vector with its first partner.

    The remaining vectors are projected off the chosen pair each round, so the
    kept first members span an isotropic subspace of half dimension.
    """
    dim = s.dim
    remaining: list[list[Rat]] = [[ONE if b == a else ZERO for b in range(dim)] for a in range(dim)]
    chosen: list[list[Rat]] = []
    while remaining:
        v = remaining.pop(0)
        partner_index = next((idx for idx, w in enumerate(remaining) if s.form(v, w) != ZERO), None)
        if partner_index is None:
            raise ConsistencyError("symplectic form on g_-1 is degenerate", dim=dim)
        w = remaining.pop(partner_index)
        vw = s.form(v, w)
        projected = []
        for u in remaining:
            alpha = s.form(u, w) / vw
            beta = s.form(u, v) / vw
            u2 = [u[a] - alpha * v[a] + beta * w[a] for a in range(dim)]
            if any(u2):
                projected.append(u2)
        remaining = projected
        chosen.append(v)
    mats = []
    for coeffs in chosen:
        total = Mat.zero(s.space.n)
        for c, x in zip(coeffs, s.space.basis, strict=True):
            if c:
                total = total + x.scale(c)
        mats.append(total)
    return Subalg(s.space.n, mats)


def premet_subalgebra(g: Grading, e: Mat, lagrangian: Subalg) -> Subalg:
    """m = l ⊕ (sum of the pieces of degree ≤ −2)."""
    for x in lagrangian.basis:
        if not g.degrees_of(x) <= {-1}:
            raise InputError(f"{x.name()} is not in g_-1")
    for idx, x in enumerate(lagrangian.basis):
        for y in lagrangian.basis[idx + 1 :]:
            if trace_pair(e, bracket(x, y)) != ZERO:
                raise InputError("subspace is not isotropic for ω", pair=[x.name(), y.name()])
    negative = [Mat.elementary(g.n, a, b) for j, pairs in g.pieces.items() if j <= -2 for a, b in pairs]
    m = Subalg(g.n, list(lagrangian.basis) + negative)
    logger.debug("Premet subalgebra of dim %d (lagrangian %d)", m.dim, lagrangian.dim)
    return m


def premet_report(m: Subalg, e: Mat) -> CheckReport:
    """χ1–χ4 for the pair (m, e) with χ = tr(e·)."""
    report = CheckReport(subject="premet")
    report.add("chi1", m.is_subalgebra() and is_ad_nilpotent(m))
    expected = orbit_dim(jordan_type(e))
    report.add("chi2", 2 * m.dim == expected, {"dim_m": m.dim, "orbit_dim": expected})
    image_rank = rank(bracket(e, y).to_vec() for y in m.basis)
    report.add("chi3", image_rank == m.dim, {"kernel_dim": m.dim - image_rank})
    report.add("chi4", chi_of(e, m).vanishes_on_brackets())
    return report
