"""Reduction by stages for a cover mu ⋖ lam of partitions.

Everything is read off the standard filling of the right-aligned pyramid of
``mu``: the first-stage data (e1, m1, chi1) come from the pyramid itself, the
second-stage data (e2, k, m2, chi2, h2') slide one box down from row ``j`` to
row ``i``.
"""

import logging
from dataclasses import dataclass
from typing import Any

from sympy.polys.domains import QQ

from .checks import CheckReport
from .errors import ConsistencyError, InputError
from .gradings import (
    Grading,
    check_good,
    choose_lagrangian,
    premet_report,
    premet_subalgebra,
    symplectic_on_gminus1,
)
from .lie_core import (
    ONE,
    ZERO,
    Char,
    Mat,
    Rat,
    Subalg,
    bracket,
    brackets_within,
    centralizer,
    chi_of,
    jordan_type,
    rank,
    rat_str,
    subalgebra_checks,
    trace_pair,
)
from .partitions import CoverRows, Partition, cover_rows
from .pyramids import Filling, Pyramid, grading_of, nilpotent_of, right_aligned, standard_filling

logger = logging.getLogger(__name__)

Chain = list[dict[int, Rat]]


@dataclass
class H2Prime:
    """The semisimple element h2' together with the constant K used to build it."""

    matrix: Mat
    K: Rat
    source: str


@dataclass
class StageData:
    mu: Partition
    lam: Partition
    rows: CoverRows
    pyramid: Pyramid
    filling: Filling
    e1: Mat
    e2: Mat
    h2prime: H2Prime
    m1: Subalg
    k: Subalg
    m2: Subalg
    chi1: Char
    chi2: Char
    kappa: Char

    @property
    def n(self) -> int:
        return self.mu.n

    def to_json(self) -> dict[str, Any]:
        return {
            "mu": self.mu.to_json(),
            "lam": self.lam.to_json(),
            "rows": self.rows.to_json(),
            "pyramid": self.pyramid.to_json(),
            "filling": self.filling.to_json(),
            "e1": self.e1.to_json(),
            "e2": self.e2.to_json(),
            "h2prime": self.h2prime.matrix.to_json(),
            "K": rat_str(self.h2prime.K),
            "K_source": self.h2prime.source,
            "m1": self.m1.to_json(),
            "k": self.k.to_json(),
            "m2": self.m2.to_json(),
            "chi1": self.chi1.to_json(),
            "chi2": self.chi2.to_json(),
            "kappa": self.kappa.to_json(),
        }


def _check_rows(d: Filling, r: CoverRows) -> None:
    rows = d.pyramid.shape.length
    if not 1 <= r.i < r.j <= rows:
        raise InputError(f"rows ({r.i}, {r.j}) out of range for {rows} rows", rows=r.to_json())


def construct_e2(d: Filling, r: CoverRows) -> Mat:
    """e1 plus E_kl for each column shared by rows i (box k) and j (box l)."""
    _check_rows(d, r)
    extra = {}
    for t in range(d.pyramid.shape[r.j]):
        col = d.pyramid.first_col(r.j) + 2 * t
        k = d.label_at(r.i, col)
        if k is not None:
            extra[(k, d.rows[r.j - 1][t])] = ONE
    return nilpotent_of(d) + Mat(d.n, extra)


def _e_m(d: Filling, r: CoverRows, m: int) -> Mat:
    entries = {}
    for row in range(r.i, r.j - m + 1):
        for col in range(d.pyramid.first_col(row), d.pyramid.last_col(row) + 1, 2):
            k = d.label_at(row, col)
            upper = d.label_at(row + m, col)
            if upper is not None and k is not None:
                entries[(upper, k)] = ONE
    return Mat(d.n, entries)


def first_stage_subalgebra(d: Filling) -> Subalg:
    """m1: Premet subalgebra of the pyramid grading for e1."""
    g = grading_of(d)
    e1 = nilpotent_of(d)
    lagrangian = choose_lagrangian(symplectic_on_gminus1(g, e1))
    return premet_subalgebra(g, e1, lagrangian)


def construct_k_m2(d: Filling, r: CoverRows, m1: Subalg | None = None) -> tuple[Subalg, Subalg]:
    """k = span(E_1 .. E_{j-i}) and m2 = m1 + k with m1's basis first."""
    _check_rows(d, r)
    if m1 is None:
        m1 = first_stage_subalgebra(d)
    k = Subalg(d.n, [_e_m(d, r, m) for m in range(1, r.j - r.i + 1)], keep_basis=True)
    m2 = Subalg(d.n, list(m1.basis) + list(k.basis), keep_basis=True)
    if m2.dim != m1.dim + k.dim:
        raise ConsistencyError("k meets m1", dims=[m1.dim, k.dim])
    return k, m2


def _h2prime_entries(d: Filling, r: CoverRows, K: Rat) -> dict[int, Rat]:
    lam_i = d.pyramid.shape[r.i] + 1
    entries: dict[int, Rat] = {}
    for row in range(1, d.pyramid.shape.length + 1):
        if row in (r.i, r.j):
            continue
        for t, label in enumerate(d.rows[row - 1]):
            entries[label] = QQ(d.pyramid.shape[row] - 1 - 2 * t)
    first = d.pyramid.first_col(r.i)
    for t in range(lam_i + 1):
        coeff = QQ(lam_i - 2 * t) + K
        if t < d.pyramid.shape[r.i]:
            entries[d.rows[r.i - 1][t]] = coeff
        partner = d.label_at(r.j, first + 2 * t - 2)
        if partner is not None:
            entries[partner] = coeff
    return entries


def h2prime_data(d: Filling, r: CoverRows, e2: Mat | None = None) -> H2Prime:
    """Build h2', trying the trace-zero K first and falling back to an integral good K.

    The trace-zero K can be fractional, in which case the grading is not integral.
    Integral K are then tried in order of distance to it and the first one giving a
    good grading for e2 is shifted by a multiple of the identity to trace zero.
    """
    _check_rows(d, r)
    if e2 is None:
        e2 = construct_e2(d, r)
    n = d.n
    base = _h2prime_entries(d, r, ZERO)
    merged = d.pyramid.shape[r.i] + d.pyramid.shape[r.j]
    k_trace = -sum(base.values(), ZERO) / QQ(merged)

    def attempt(K: Rat) -> Mat | None:
        entries = _h2prime_entries(d, r, K)
        h = Mat.diag([entries[label] for label in range(1, n + 1)])
        if K.denominator != 1 or not check_good(Grading(h), e2).passed:
            return None
        return h

    h = attempt(k_trace)
    if h is not None:
        return H2Prime(h, k_trace, "trace")
    candidates = sorted(range(-2 * n, 2 * n + 1), key=lambda c: (abs(QQ(c) - k_trace), c))
    for c in candidates:
        h = attempt(QQ(c))
        if h is not None:
            shift = h.trace() / QQ(n)
            logger.debug("trace-zero K=%s is not good; using K=%d", rat_str(k_trace), c)
            return H2Prime(h - Mat.identity(n).scale(shift), QQ(c), "aligned")
    raise ConsistencyError("no constant K gives a good grading", rows=r.to_json(), K_trace=rat_str(k_trace))


def construct_h2prime(d: Filling, r: CoverRows) -> Mat:
    return h2prime_data(d, r).matrix


def ek_basis(shape: Partition, filling: Filling | None = None) -> list[Mat]:
    """Elements E_i^j[r] sending b_{i,t} to b_{j,t+r}, boxes counted from the right.

    They span the centralizer of the nilpotent of the right-aligned pyramid;
    sum_i E_i^i[1] is that nilpotent.
    """
    if filling is None:
        filling = standard_filling(right_aligned(shape))
    rows = shape.length
    out: list[Mat] = []
    for i in range(1, rows + 1):
        for j in range(1, rows + 1):
            shifts = range(0, shape[j]) if i <= j else range(shape[j] - shape[i], shape[j])
            for s in shifts:
                entries = {}
                for t in range(1, shape[i] + 1):
                    target = filling.from_right(j, t + s)
                    if target is not None:
                        entries[(target, filling.from_right(i, t))] = ONE
                out.append(Mat(shape.n, entries))
    return out


def jordan_strings_e2(d: Filling, r: CoverRows) -> list[Chain]:
    """Jordan chains of e2, each listed from its generator down to the kernel vector."""
    _check_rows(d, r)

    def b(row: int, t: int) -> int | None:
        return d.from_right(row, t)

    def vector(*terms: tuple[Rat, int | None]) -> dict[int, Rat]:
        out: dict[int, Rat] = {}
        for c, label in terms:
            if label is not None and c:
                out[label] = out.get(label, ZERO) + QQ(c)
        return {k: c for k, c in out.items() if c}

    shape = d.pyramid.shape
    mu_i, mu_j = shape[r.i], shape[r.j]
    chains: list[Chain] = []
    chains.append([vector((min(k, mu_j), b(r.i, k)), (1, b(r.j, k + 1))) for k in range(0, mu_i + 1)])
    if mu_j > 1:
        chains.append([vector((mu_j - k, b(r.i, k)), (-1, b(r.j, k + 1))) for k in range(1, mu_j)])
    for s in range(1, shape.length + 1):
        if s not in (r.i, r.j):
            chains.append([vector((1, b(s, t))) for t in range(1, shape[s] + 1)])
    return chains


def check_chains(e2: Mat, chains: list[Chain]) -> CheckReport:
    report = CheckReport(subject="jordan_chains")
    broken = [
        [idx, pos]
        for idx, chain in enumerate(chains)
        for pos, v in enumerate(chain)
        if e2.apply(v) != (chain[pos + 1] if pos + 1 < len(chain) else {})
    ]
    report.add("chain_steps", not broken, {"chain_position": broken})
    vectors = [v for chain in chains for v in chain]
    report.add("chain_basis", rank(vectors) == e2.n == len(vectors), {"rank": rank(vectors)})
    report.data["lengths"] = sorted((len(c) for c in chains), reverse=True)
    return report


def construct_stage(mu: Partition, lam: Partition) -> StageData:
    rows = cover_rows(mu, lam)
    pyramid = right_aligned(mu)
    d = standard_filling(pyramid)
    e1 = nilpotent_of(d)
    e2 = construct_e2(d, rows)
    m1 = first_stage_subalgebra(d)
    k, m2 = construct_k_m2(d, rows, m1)
    h2 = h2prime_data(d, rows, e2)
    chi2 = chi_of(e2, m2)
    logger.debug("stage %s < %s: dim m1=%d dim k=%d K=%s", mu, lam, m1.dim, k.dim, rat_str(h2.K))
    return StageData(
        mu=mu,
        lam=lam,
        rows=rows,
        pyramid=pyramid,
        filling=d,
        e1=e1,
        e2=e2,
        h2prime=h2,
        m1=m1,
        k=k,
        m2=m2,
        chi1=chi_of(e1, m1),
        chi2=chi2,
        kappa=chi_of(e2, k),
    )


def verify_stage(mu: Partition, lam: Partition, data: StageData | None = None) -> CheckReport:
    """Every check of the stage construction for mu ⋖ lam, failures reported with witnesses."""
    s = data if data is not None else construct_stage(mu, lam)
    report = CheckReport(subject=f"stage {mu} < {lam}")
    report.data.update(
        {
            "mu": mu.to_json(),
            "lam": lam.to_json(),
            "rows": s.rows.to_json(),
            "K": rat_str(s.h2prime.K),
            "K_source": s.h2prime.source,
            "dims": {"m1": s.m1.dim, "k": s.k.dim, "m2": s.m2.dim},
        }
    )

    jt1, jt2 = jordan_type(s.e1), jordan_type(s.e2)
    report.add("e1_type", jt1 == mu, {"computed": jt1.to_json()})
    report.add("e2_type", jt2 == lam, {"computed": jt2.to_json()})
    chains = check_chains(s.e2, jordan_strings_e2(s.filling, s.rows))
    report.merge(chains, "chains")
    report.add("chain_lengths", chains.data["lengths"] == list(lam.parts), {"lengths": chains.data["lengths"]})

    ek = Subalg(s.n, ek_basis(mu, s.filling))
    report.add("ek_centralizer", ek == centralizer(s.e1, "gl"), {"ek_dim": ek.dim})

    report.merge(subalgebra_checks(s.m1, s.k, s.chi2), "SR1")
    report.add("SR2_character", s.chi2.vanishes_on_brackets())
    restricted = Char(s.m1, [trace_pair(s.e2, y) for y in s.m1.basis])
    report.add("SR2_restriction", restricted == s.chi1, {"chi2_on_m1": restricted.to_json()})
    sr3 = [
        [xi.name(), y.name()]
        for xi in s.k.basis
        for y in s.m1.basis
        if trace_pair(s.e1, bracket(xi, y)) != ZERO
    ]
    report.add("SR3", not sr3, {"pairs": sr3[:3]})

    report.merge(premet_report(s.m2, s.e2), "premet_m2")
    report.merge(premet_report(s.m1, s.e1), "premet_m1")
    report.add("m2_derived_in_m1", brackets_within(s.m2.basis, s.m2.basis, s.m1))

    h = s.h2prime.matrix
    report.merge(check_good(Grading(h), s.e2), "h2prime_good")
    report.add("h2prime_preserves_m1", brackets_within([h], s.m1.basis, s.m1))
    report.add("h2prime_eigen", bracket(h, s.e2) == s.e2.scale(2))
    report.add("h2prime_trace", h.trace() == ZERO, {"trace": rat_str(h.trace())})
    logger.info("verified %s < %s: %s", mu, lam, "pass" if report.passed else report.failures())
    return report


def subregular_to_regular(n: int) -> CheckReport:
    """(n-1, 1) ⋖ (n): e2 is regular and m2 is the strictly lower triangular algebra."""
    if n < 2:
        raise InputError(f"subregular orbit needs n >= 2, got {n}")
    mu, lam = Partition((n - 1, 1)), Partition((n,))
    s = construct_stage(mu, lam)
    lower = Subalg(n, [Mat.elementary(n, a, b) for a in range(1, n + 1) for b in range(1, a)])
    report = CheckReport(subject=f"subregular_to_regular n={n}")
    report.add("e2_regular", jordan_type(s.e2) == lam)
    report.add("m2_lower_triangular", s.m2 == lower, {"dim_m2": s.m2.dim})
    return report
