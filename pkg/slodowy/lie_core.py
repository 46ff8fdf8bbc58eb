"""Exact-rational matrix Lie algebra layer.

Matrices are sparse maps ``(row, col) -> QQ`` with 1-based indices. Linear algebra
goes through sympy's sparse reduced row echelon routine on dict-of-dict rows, so
every rank, kernel and span comparison is exact.
"""

import logging
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping, Sequence
from typing import Any, Literal, TypeAlias

from sympy import Matrix, Rational
from sympy.polys.domains import QQ
from sympy.polys.matrices.sdm import sdm_irref, sdm_nullspace_from_rref, sdm_particular_from_rref

from .checks import CheckReport
from .errors import ConsistencyError, DomainError, InputError
from .partitions import Partition

logger = logging.getLogger(__name__)

# Element of sympy's QQ (gmpy2.mpq or PythonMPQ depending on the install)
Rat: TypeAlias = Any
Vec: TypeAlias = dict[int, Any]
Ambient: TypeAlias = Literal["gl", "sl"]

ZERO = QQ(0)
ONE = QQ(1)


def rat(value: Any) -> Rat:
    """Coerce an int, ``"p/q"`` string, sympy Rational or QQ element to QQ."""
    if isinstance(value, str):
        try:
            return QQ.from_sympy(Rational(value.strip()))
        except (TypeError, ValueError) as e:
            raise InputError(f"not a rational number: {value!r}") from e
    return QQ.convert(value)


def rat_str(value: Rat) -> str:
    return str(rat(value))


# --------------------------------------------------------------------------- linear algebra


def _clean(v: Mapping[int, Any]) -> Vec:
    return {k: QQ.convert(c) for k, c in v.items() if c}


def echelon(vectors: Iterable[Mapping[int, Any]]) -> tuple[list[Vec], list[int]]:
    """Reduced row echelon form of the span of ``vectors``: (rows, pivot columns)."""
    rows: dict[int, Vec] = {}
    for v in vectors:
        cleaned = _clean(v)
        if cleaned:
            rows[len(rows)] = cleaned
    if not rows:
        return [], []
    rref, pivots, _ = sdm_irref(rows)
    return [rref[i] for i in range(len(pivots))], list(pivots)


def rank(vectors: Iterable[Mapping[int, Any]]) -> int:
    return len(echelon(vectors)[1])


def nullspace(rows: Iterable[Mapping[int, Any]], ncols: int) -> list[Vec]:
    """Basis of {x : r·x = 0 for every row r} in a space of ``ncols`` coordinates."""
    system: dict[int, Vec] = {}
    for r in rows:
        cleaned = _clean(r)
        if cleaned:
            system[len(system)] = cleaned
    if not system:
        return [{j: ONE} for j in range(ncols)]
    rref, pivots, nonzero_cols = sdm_irref(system)
    kernel, _ = sdm_nullspace_from_rref(rref, ONE, ncols, pivots, nonzero_cols)
    return [dict(k) for k in kernel]


def solve(equations: Iterable[tuple[Mapping[int, Any], Any]], ncols: int) -> Vec | None:
    """A particular solution of the affine system ``row·x = rhs``, or None if inconsistent."""
    system: dict[int, Vec] = {}
    for row, rhs in equations:
        augmented = _clean(row)
        if rhs:
            augmented[ncols] = QQ.convert(rhs)
        if augmented:
            system[len(system)] = augmented
    if not system:
        return {}
    rref, pivots, _ = sdm_irref(system)
    if pivots and pivots[-1] == ncols:
        return None
    return dict(sdm_particular_from_rref(rref, ncols + 1, pivots))


class SpanBasis:
    """Echelonized basis of a subspace with membership and coordinate lookup."""

    def __init__(self, vectors: Iterable[Mapping[int, Any]]) -> None:
        self.rows, self.pivots = echelon(vectors)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def residual(self, v: Mapping[int, Any]) -> Vec:
        out = _clean(v)
        for row, p in zip(self.rows, self.pivots, strict=True):
            c = out.get(p)
            if c:
                for k, a in row.items():
                    value = out.get(k, ZERO) - c * a
                    if value:
                        out[k] = value
                    else:
                        out.pop(k, None)
        return out

    def contains(self, v: Mapping[int, Any]) -> bool:
        return not self.residual(v)

    def coords(self, v: Mapping[int, Any]) -> list[Rat]:
        """Coordinates of ``v`` against the echelon rows; raises if ``v`` is outside."""
        if not self.contains(v):
            raise InputError("vector is not in the span")
        return [QQ.convert(v.get(p, ZERO)) for p in self.pivots]


# --------------------------------------------------------------------------- matrices


class Mat:
    """Sparse exact n×n matrix, immutable."""

    __slots__ = ("n", "_entries", "_hash")

    def __init__(self, n: int, entries: Mapping[tuple[int, int], Any] | None = None) -> None:
        if n < 1:
            raise InputError(f"matrix dimension must be positive, got {n}")
        clean: dict[tuple[int, int], Rat] = {}
        for (i, j), c in (entries or {}).items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise InputError(f"index ({i},{j}) out of range for n={n}")
            q = rat(c)
            if q:
                clean[(i, j)] = q
        self.n = n
        self._entries = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, n: int, entries: dict[tuple[int, int], Rat]) -> "Mat":
        obj = cls.__new__(cls)
        obj.n = n
        obj._entries = {k: c for k, c in entries.items() if c}
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, n: int) -> "Mat":
        return cls(n)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls._raw(n, {(i, i): ONE for i in range(1, n + 1)})

    @classmethod
    def elementary(cls, n: int, i: int, j: int) -> "Mat":
        return cls(n, {(i, j): ONE})

    @classmethod
    def diag(cls, values: Sequence[Any]) -> "Mat":
        return cls(len(values), {(i + 1, i + 1): v for i, v in enumerate(values)})

    @classmethod
    def from_vec(cls, n: int, vec: Mapping[int, Any]) -> "Mat":
        return cls._raw(n, {(k // n + 1, k % n + 1): QQ.convert(c) for k, c in vec.items()})

    @classmethod
    def from_sympy(cls, m: Matrix) -> "Mat":
        n = m.shape[0]
        return cls(n, {(i + 1, j + 1): m[i, j] for i in range(n) for j in range(n) if m[i, j] != 0})

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Mat":
        try:
            n = int(data["n"])
            return cls(n, {(int(i), int(j)): rat(str(c)) for i, j, c in data["entries"]})
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed matrix JSON: {e}") from e

    # access
    def get(self, i: int, j: int) -> Rat:
        return self._entries.get((i, j), ZERO)

    def items(self) -> Iterator[tuple[tuple[int, int], Rat]]:
        return iter(sorted(self._entries.items()))

    @property
    def support(self) -> list[tuple[int, int]]:
        return sorted(self._entries)

    @property
    def is_zero(self) -> bool:
        return not self._entries

    @property
    def is_diagonal(self) -> bool:
        return all(i == j for i, j in self._entries)

    def diagonal(self) -> list[Rat]:
        return [self.get(i, i) for i in range(1, self.n + 1)]

    def trace(self) -> Rat:
        return sum((c for (i, j), c in self._entries.items() if i == j), ZERO)

    # arithmetic
    def _check(self, other: "Mat") -> None:
        if self.n != other.n:
            raise InputError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        out = dict(self._entries)
        for k, c in other._entries.items():
            out[k] = out.get(k, ZERO) + c
        return Mat._raw(self.n, out)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + other.scale(-ONE)

    def __neg__(self) -> "Mat":
        return self.scale(-ONE)

    def scale(self, c: Any) -> "Mat":
        q = rat(c)
        return Mat._raw(self.n, {k: q * v for k, v in self._entries.items()})

    def __rmul__(self, c: Any) -> "Mat":
        return self.scale(c)

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        by_row: dict[int, list[tuple[int, Rat]]] = defaultdict(list)
        for (k, j), b in other._entries.items():
            by_row[k].append((j, b))
        out: dict[tuple[int, int], Rat] = defaultdict(lambda: ZERO)
        for (i, k), a in self._entries.items():
            for j, b in by_row.get(k, ()):
                out[(i, j)] += a * b
        return Mat._raw(self.n, dict(out))

    def power(self, k: int) -> "Mat":
        result = Mat.identity(self.n)
        for _ in range(k):
            result = result @ self
        return result

    def apply(self, v: Mapping[int, Any]) -> dict[int, Rat]:
        """Matrix times a sparse column vector indexed by 1-based labels."""
        out: dict[int, Rat] = defaultdict(lambda: ZERO)
        for (i, j), c in self._entries.items():
            if j in v:
                out[i] += c * QQ.convert(v[j])
        return {i: c for i, c in out.items() if c}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.n == other.n and self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._entries.items())))
        return self._hash

    # conversions
    def to_vec(self) -> Vec:
        n = self.n
        return {(i - 1) * n + (j - 1): c for (i, j), c in self._entries.items()}

    def to_sympy(self) -> Matrix:
        m = Matrix.zeros(self.n, self.n)
        for (i, j), c in self._entries.items():
            m[i - 1, j - 1] = QQ.to_sympy(c)
        return m

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "entries": [[i, j, rat_str(c)] for (i, j), c in self.items()]}

    def name(self) -> str:
        """Compact human form such as ``E14+E25-2*E36``."""
        if not self._entries:
            return "0"
        parts: list[str] = []
        for (i, j), c in self.items():
            label = f"E{i}{j}" if self.n < 10 else f"E{i}_{j}"
            if c == ONE:
                term = label
            elif c == -ONE:
                term = "-" + label
            else:
                term = f"{rat_str(c)}*{label}"
            parts.append(term if not parts or term.startswith("-") else "+" + term)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Mat({self.n}, {self.name()})"


def bracket(x: Mat, y: Mat) -> Mat:
    """Commutator xy − yx."""
    return (x @ y) - (y @ x)


def trace_pair(x: Mat, y: Mat) -> Rat:
    """Trace form tr(xy)."""
    x._check(y)
    return sum((c * y.get(j, i) for (i, j), c in x._entries.items()), ZERO)


def matrix_rank(x: Mat) -> int:
    rows: dict[int, dict[int, Rat]] = defaultdict(dict)
    for (i, j), c in x._entries.items():
        rows[i][j] = c
    return rank(rows.values())


def is_nilpotent(x: Mat) -> bool:
    return x.power(x.n).is_zero


# --------------------------------------------------------------------------- subalgebras


class Subalg:
    """Subspace of gl_n given by an echelonized basis of matrices."""

    def __init__(self, n: int, mats: Iterable[Mat] = (), keep_basis: bool = False) -> None:
        mats = list(mats)
        self.n = n
        self._span = SpanBasis(m.to_vec() for m in mats)
        self._given = keep_basis and len(mats) == self._span.dim
        if self._given:
            self.basis: tuple[Mat, ...] = tuple(mats)
        else:
            self.basis = tuple(Mat.from_vec(n, row) for row in self._span.rows)
        self.closed: bool | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: Mat) -> bool:
        return self._span.contains(x.to_vec())

    def coords(self, x: Mat) -> list[Rat]:
        """Coordinates of ``x`` in ``self.basis``."""
        if not self._given:
            return self._span.coords(x.to_vec())
        equations: dict[int, dict[int, Rat]] = defaultdict(dict)
        for col, m in enumerate(self.basis):
            for k, c in m.to_vec().items():
                equations[k][col] = c
        target = x.to_vec()
        sol = solve(((equations[k], target.get(k, ZERO)) for k in set(equations) | set(target)), self.dim)
        if sol is None:
            raise InputError(f"{x.name()} is not in the subalgebra")
        return [QQ.convert(sol.get(c, ZERO)) for c in range(self.dim)]

    def __add__(self, other: "Subalg") -> "Subalg":
        return Subalg(self.n, self.basis + other.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subalg):
            return NotImplemented
        return self.n == other.n and self._span.rows == other._span.rows

    def __hash__(self) -> int:
        return hash((self.n, tuple(frozenset(r.items()) for r in self._span.rows)))

    def contains_all(self, mats: Iterable[Mat]) -> bool:
        return all(self.contains(m) for m in mats)

    def is_subalgebra(self) -> bool:
        """Closure under the bracket; the result is recorded on ``closed``."""
        self.closed = self.contains_all(
            bracket(a, b) for idx, a in enumerate(self.basis) for b in self.basis[idx + 1 :]
        )
        return self.closed

    def to_json(self) -> list[dict[str, Any]]:
        return [m.to_json() for m in self.basis]

    def __repr__(self) -> str:
        return f"Subalg(n={self.n}, dim={self.dim})"


class Char:
    """Linear functional on a subalgebra, given by its values on the basis."""

    def __init__(self, domain: Subalg, values: Sequence[Any]) -> None:
        if len(values) != domain.dim:
            raise InputError(f"character has {len(values)} values for a {domain.dim}-dim domain")
        self.domain = domain
        self.values: tuple[Rat, ...] = tuple(rat(v) for v in values)

    def __call__(self, x: Mat) -> Rat:
        return sum((c * v for c, v in zip(self.domain.coords(x), self.values, strict=True)), ZERO)

    @property
    def is_zero(self) -> bool:
        return not any(self.values)

    def restrict(self, sub: Subalg) -> "Char":
        return Char(sub, [self(b) for b in sub.basis])

    def vanishes_on_brackets(self) -> bool:
        basis = self.domain.basis
        return all(self(bracket(a, b)) == ZERO for idx, a in enumerate(basis) for b in basis[idx + 1 :])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Char):
            return NotImplemented
        return self.domain == other.domain and all(self(b) == other(b) for b in self.domain.basis)

    def to_json(self) -> list[str]:
        return [rat_str(v) for v in self.values]


def chi_of(e: Mat, m: Subalg) -> Char:
    """The functional y ↦ tr(e·y) restricted to ``m``."""
    return Char(m, [trace_pair(e, y) for y in m.basis])


# --------------------------------------------------------------------------- centralizers and Jordan data


def _ad_rows(e: Mat) -> dict[int, dict[int, Rat]]:
    """Rows of the matrix of x ↦ [e, x] on gl_n in elementary coordinates."""
    n = e.n
    rows: dict[int, dict[int, Rat]] = defaultdict(dict)

    def put(out: tuple[int, int], unknown: tuple[int, int], c: Rat) -> None:
        r = (out[0] - 1) * n + out[1] - 1
        u = (unknown[0] - 1) * n + unknown[1] - 1
        value = rows[r].get(u, ZERO) + c
        if value:
            rows[r][u] = value
        else:
            rows[r].pop(u, None)

    for (i, a), c in e._entries.items():
        # e E_ab contributes c E_ib
        for b in range(1, n + 1):
            put((i, b), (a, b), c)
    for (b, j), c in e._entries.items():
        # E_ab e contributes c E_aj
        for a in range(1, n + 1):
            put((a, j), (a, b), -c)
    return rows


def centralizer(e: Mat, ambient: Ambient = "gl") -> Subalg:
    """Kernel of x ↦ [e, x] on gl_n or on its trace-zero part."""
    n = e.n
    rows = list(_ad_rows(e).values())
    if ambient == "sl":
        rows.append({(a - 1) * n + a - 1: ONE for a in range(1, n + 1)})
    elif ambient != "gl":
        raise InputError(f"unknown ambient {ambient!r}")
    kernel = nullspace(rows, n * n)
    logger.debug("centralizer of %s in %s_%d has dim %d", e.name(), ambient, n, len(kernel))
    return Subalg(n, [Mat.from_vec(n, v) for v in kernel])


def jordan_type(x: Mat) -> Partition:
    """Partition of Jordan block sizes of a nilpotent matrix, from ranks of powers."""
    n = x.n
    ranks = [n]
    power = Mat.identity(n)
    for _ in range(n):
        power = power @ x
        ranks.append(matrix_rank(power))
    if ranks[-1] != 0:
        raise DomainError(f"{x.name()} is not nilpotent")
    ranks.append(0)
    parts: list[int] = []
    for size in range(n, 0, -1):
        at_least = ranks[size - 1] - ranks[size]
        at_least_next = ranks[size] - ranks[size + 1]
        parts.extend([size] * (at_least - at_least_next))
    return Partition(tuple(parts))


def sl2_complete(e: Mat) -> tuple[Mat, Mat, Mat]:
    """Complete a nonzero nilpotent to a triple with [h,e]=2e, [h,f]=−2f, [e,f]=h."""
    if e.is_zero:
        raise InputError("cannot complete the zero matrix to an sl2-triple")
    if not is_nilpotent(e):
        raise DomainError(f"{e.name()} is not nilpotent")
    n = e.n
    P, J = e.to_sympy().jordan_form()
    H = Matrix.zeros(n, n)
    F = Matrix.zeros(n, n)
    start = 0
    while start < n:
        size = 1
        while start + size < n and J[start + size - 1, start + size] == 1:
            size += 1
        for a in range(1, size + 1):
            H[start + a - 1, start + a - 1] = size + 1 - 2 * a
        for a in range(1, size):
            F[start + a, start + a - 1] = a * (size - a)
        start += size
    P_inv = P.inv()
    h = Mat.from_sympy(P * H * P_inv)
    f = Mat.from_sympy(P * F * P_inv)
    if bracket(h, e) != e.scale(2) or bracket(h, f) != f.scale(-2) or bracket(e, f) != h:
        raise ConsistencyError(f"sl2 relations failed for {e.name()}")
    return e, h, f


# --------------------------------------------------------------------------- subalgebra reports


def brackets_within(left: Iterable[Mat], right: Sequence[Mat], target: Subalg) -> bool:
    return all(target.contains(bracket(a, b)) for a in left for b in right)


def is_ad_nilpotent(m: Subalg) -> bool:
    """True iff the associative span generated by ``m`` is nilpotent (m^n = 0).

    This is equivalent to ``m`` being simultaneously strictly triangularizable,
    hence a Lie algebra of ad-nilpotent elements once it is closed.
    """
    if m.dim == 0:
        return True
    current = list(m.basis)
    for _ in range(m.n):
        products = [a @ b for a in current for b in m.basis]
        span = SpanBasis(p.to_vec() for p in products)
        if span.dim == 0:
            return True
        current = [Mat.from_vec(m.n, row) for row in span.rows]
    return False


def subalgebra_checks(m1: Subalg, k: Subalg | None = None, chi: Char | None = None) -> CheckReport:
    """Closure, ideal and character checks for m1, optionally with a complement k."""
    report = CheckReport(subject="subalgebra")
    report.add("m1_closed", m1.is_subalgebra())
    if k is not None:
        m2 = m1 + k
        report.add("direct_sum", m2.dim == m1.dim + k.dim, {"dims": [m1.dim, k.dim, m2.dim]})
        report.add("m2_closed", m2.is_subalgebra())
        report.add("m1_ideal", brackets_within(m2.basis, m1.basis, m1))
        report.add("k_abelian", all(bracket(a, b).is_zero for a in k.basis for b in k.basis))
        report.data["k_ideal"] = brackets_within(m2.basis, k.basis, k)
    if chi is not None:
        report.add("chi_character", chi.vanishes_on_brackets())
    return report


# --------------------------------------------------------------------------- adapted bases


def standard_basis(n: int, ambient: Ambient = "sl") -> list[Mat]:
    """Off-diagonal E_ab in lexicographic order, then E_aa (gl) or E_aa − E_{a+1,a+1} (sl)."""
    off = [Mat.elementary(n, a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a != b]
    if ambient == "gl":
        return off + [Mat.elementary(n, a, a) for a in range(1, n + 1)]
    if ambient == "sl":
        return off + [Mat(n, {(a, a): 1, (a + 1, a + 1): -1}) for a in range(1, n)]
    raise InputError(f"unknown ambient {ambient!r}")


def complement_basis(
    fixed: Sequence[Mat], n: int, preferred: Iterable[Mat] = (), ambient: Ambient = "sl"
) -> list[Mat]:
    """Greedy complement of span(fixed) in the ambient, drawn from ``preferred`` first."""
    rows = [m.to_vec() for m in fixed]
    current = rank(rows)
    chosen: list[Mat] = []
    target = n * n - (1 if ambient == "sl" else 0)
    for candidate in list(preferred) + standard_basis(n, ambient):
        if current == target:
            break
        if ambient == "sl" and candidate.trace() != ZERO:
            continue
        trial = rank(rows + [candidate.to_vec()])
        if trial > current:
            rows.append(candidate.to_vec())
            chosen.append(candidate)
            current = trial
    return chosen
