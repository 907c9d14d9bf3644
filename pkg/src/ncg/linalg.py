"""Sparse exact matrices over :class:`~ncg.scalars.Scalar` and linear solving.

Row reduction works over Q(i).  Matrices with symbolic entries are handled
through the generic-element principle: every distinct monomial in the
symbols is treated as an independent coordinate, so an identity that holds
for symbolic generic entries holds for every numerical specialization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from gmpy2 import mpq

from .scalars import (
    BAR,
    I,
    ONE,
    TABLE,
    ZERO,
    Scalar,
    Symbol,
    ensure_symbol,
    parse_scalar,
    substitute,
)
from .scalars import _mono_key  # noqa: F401  (canonical monomial ordering)

__all__ = [
    "Mat",
    "AntilinearOp",
    "Echelon",
    "SolutionSpace",
    "ConstraintSet",
    "NonlinearError",
    "ShapeError",
    "span_basis",
    "rank",
    "nullspace",
    "solve_linear_in_symbols",
    "commutant",
    "fresh_symbols",
]

ZQ = mpq(0)
OQ = mpq(1)


class ShapeError(ValueError):
    pass


class NonlinearError(ValueError):
    pass


# -- Gaussian rational helpers ------------------------------------------------

def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cinv(a):
    n = a[0] * a[0] + a[1] * a[1]
    return (a[0] / n, -a[1] / n)


def _nz(a) -> bool:
    return bool(a[0]) or bool(a[1])


# -- matrices -------------------------------------------------------------------

class Mat:
    """Immutable sparse matrix with :class:`Scalar` entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Mapping[Tuple[int, int], Scalar] | None = None):
        if rows <= 0 or cols <= 0:
            raise ShapeError("matrix dimensions must be positive")
        self.rows = rows
        self.cols = cols
        self.data: Dict[Tuple[int, int], Scalar] = {}
        if data:
            for k, v in data.items():
                v = Scalar.coerce(v)
                if v.terms:
                    self.data[k] = v

    # -- construction -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Mat":
        return cls(rows, rows if cols is None else cols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat":
        return cls(len(rows), len(rows[0]), {(i, j): Scalar.coerce(v) for i, r in enumerate(rows) for j, v in enumerate(r)})

    @classmethod
    def diag(cls, entries: Sequence) -> "Mat":
        return cls(len(entries), len(entries), {(i, i): Scalar.coerce(v) for i, v in enumerate(entries)})

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int, value=ONE) -> "Mat":
        return cls(rows, cols, {(i, j): Scalar.coerce(value)})

    @classmethod
    def block_diag(cls, blocks: Sequence["Mat"]) -> "Mat":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        data = {}
        r = c = 0
        for b in blocks:
            for (i, j), v in b.data.items():
                data[(r + i, c + j)] = v
            r += b.rows
            c += b.cols
        return cls(n, m, data)

    @classmethod
    def blocks(cls, grid: Sequence[Sequence["Mat | None"]]) -> "Mat":
        heights = [next(b.rows for b in row if b is not None) for row in grid]
        widths = [next(grid[i][j].cols for i in range(len(grid)) if grid[i][j] is not None) for j in range(len(grid[0]))]
        data = {}
        r = 0
        for bi, row in enumerate(grid):
            c = 0
            for bj, b in enumerate(row):
                if b is not None:
                    if b.rows != heights[bi] or b.cols != widths[bj]:
                        raise ShapeError("inconsistent block sizes")
                    for (i, j), v in b.data.items():
                        data[(r + i, c + j)] = v
                c += widths[bj]
            r += heights[bi]
        return cls(sum(heights), sum(widths), data)

    # -- basic access -------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: Tuple[int, int]) -> Scalar:
        return self.data.get(key, ZERO)

    def is_zero(self) -> bool:
        return not self.data

    def nnz(self) -> int:
        return len(self.data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.data.items())))

    def to_rows(self) -> List[List[Scalar]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def __repr__(self) -> str:
        return f"Mat({self.rows}x{self.cols}, nnz={len(self.data)})"

    def pretty(self) -> str:
        cells = [[str(x) for x in r] for r in self.to_rows()]
        w = max(len(c) for r in cells for c in r)
        return "\n".join("[" + ", ".join(c.rjust(w) for c in r) + "]" for r in cells)

    # -- algebra ------------------------------------------------------------
    def _check(self, o: "Mat") -> None:
        if self.shape != o.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {o.shape}")

    def __add__(self, o: "Mat") -> "Mat":
        self._check(o)
        d = dict(self.data)
        for k, v in o.data.items():
            w = d.get(k)
            d[k] = v if w is None else w + v
        return Mat(self.rows, self.cols, d)

    def __sub__(self, o: "Mat") -> "Mat":
        return self + (-o)

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, {k: -v for k, v in self.data.items()})

    def scale(self, s) -> "Mat":
        s = Scalar.coerce(s)
        if s.is_zero():
            return Mat(self.rows, self.cols)
        return Mat(self.rows, self.cols, {k: v * s for k, v in self.data.items()})

    def __mul__(self, o):
        if not isinstance(o, Mat):
            return self.scale(o)
        if self.cols != o.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {o.shape}")
        by_row: Dict[int, List[Tuple[int, Scalar]]] = {}
        for (k, j), v in o.data.items():
            by_row.setdefault(k, []).append((j, v))
        out: Dict[Tuple[int, int], Scalar] = {}
        for (i, k), a in self.data.items():
            row = by_row.get(k)
            if not row:
                continue
            for j, b in row:
                key = (i, j)
                p = a * b
                w = out.get(key)
                out[key] = p if w is None else w + p
        return Mat(self.rows, o.cols, out)

    def __rmul__(self, s):
        return self.scale(s)

    def __matmul__(self, o: "Mat") -> "Mat":
        return self * o

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows, {(j, i): v for (i, j), v in self.data.items()})

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def conj(self) -> "Mat":
        return Mat(self.rows, self.cols, {k: v.conj() for k, v in self.data.items()})

    def adjoint(self) -> "Mat":
        return Mat(self.cols, self.rows, {(j, i): v.conj() for (i, j), v in self.data.items()})

    @property
    def H(self) -> "Mat":
        return self.adjoint()

    def kron(self, o: "Mat") -> "Mat":
        d = {}
        for (i, j), a in self.data.items():
            for (k, l), b in o.data.items():
                d[(i * o.rows + k, j * o.cols + l)] = a * b
        return Mat(self.rows * o.rows, self.cols * o.cols, d)

    def commutator(self, o: "Mat") -> "Mat":
        return self * o - o * self

    def anticommutator(self, o: "Mat") -> "Mat":
        return self * o + o * self

    def map(self, fn: Callable[[Scalar], Scalar]) -> "Mat":
        return Mat(self.rows, self.cols, {k: fn(v) for k, v in self.data.items()})

    def subs(self, bindings: Mapping[Symbol, Scalar]) -> "Mat":
        return self.map(lambda v: substitute(v, bindings))

    def diff(self, mu: int) -> "Mat":
        return self.map(lambda v: v.diff(mu))

    def symbols(self) -> set:
        out = set()
        for v in self.data.values():
            out |= v.symbols()
        return out

    def is_constant(self) -> bool:
        return all(v.is_constant() for v in self.data.values())

    def trace(self) -> Scalar:
        t = ZERO
        for (i, j), v in self.data.items():
            if i == j:
                t = t + v
        return t

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        ri = {r: a for a, r in enumerate(rows)}
        ci = {c: b for b, c in enumerate(cols)}
        return Mat(len(rows), len(cols), {(ri[i], ci[j]): v for (i, j), v in self.data.items() if i in ri and j in ci})

    def permute(self, perm: Sequence[int]) -> "Mat":
        """Return P M P^T where P maps basis vector k to perm[k]."""
        return Mat(self.rows, self.cols, {(perm[i], perm[j]): v for (i, j), v in self.data.items()})

    def coordinates(self) -> Dict[Tuple, Tuple]:
        """Coordinate vector with (row, col, monomial) keys."""
        out = {}
        for (i, j), v in self.data.items():
            for m, c in v.terms.items():
                out[(i, j, m)] = c
        return out

    def split_monomials(self, among: Iterable[Symbol] | None = None) -> Dict[Tuple, "Mat"]:
        """Decompose M = sum_m m * M_m over monomials m (in ``among`` or all symbols)."""
        ids = None if among is None else {s.uid for s in among}
        parts: Dict[Tuple, Dict] = {}
        for (i, j), v in self.data.items():
            for m, c in v.terms.items():
                km = m if ids is None else tuple(p for p in m if p[0] in ids)
                rm = () if ids is None else tuple(p for p in m if p[0] not in ids)
                d = parts.setdefault(km, {})
                val = Scalar({rm: c}, True)
                w = d.get((i, j))
                d[(i, j)] = val if w is None else w + val
        return {k: Mat(self.rows, self.cols, d) for k, d in parts.items()}

    def inverse(self) -> "Mat":
        """Exact inverse of a constant square matrix."""
        if self.rows != self.cols or not self.is_constant():
            raise ShapeError("inverse needs a constant square matrix")
        n = self.rows
        rows = []
        for i in range(n):
            r = {}
            for j in range(n):
                v = self[i, j]
                if v.terms:
                    r[j] = v.constant()
            r[n + i] = (OQ, ZQ)
            rows.append(r)
        red, piv = _rref(rows, list(range(2 * n)))
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ZeroDivisionError("singular matrix")
        d = {}
        for i in range(n):
            for j, c in red[i].items():
                if j >= n:
                    d[(i, j - n)] = Scalar({(): c}, True)
        return Mat(n, n, d)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> List[List[str]]:
        return [[str(x) for x in r] for r in self.to_rows()]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[str]]) -> "Mat":
        return cls.from_rows([[parse_scalar(x) for x in r] for r in rows])


class AntilinearOp:
    """Antilinear operator psi -> M conj(psi)."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Mat):
        self.matrix = matrix

    def apply(self, v: Mat) -> Mat:
        return self.matrix * v.conj()

    def compose(self, other: "AntilinearOp") -> Mat:
        """(M1, conj) o (M2, conj) is the linear operator M1 conj(M2)."""
        return self.matrix * other.matrix.conj()

    def square(self) -> Mat:
        return self.compose(self)

    def inverse(self) -> "AntilinearOp":
        return AntilinearOp(self.matrix.inverse().conj())

    def conjugate(self, op: Mat) -> Mat:
        """J op J^-1 for a linear operator op."""
        return self.matrix * op.conj() * self.matrix.inverse()

    def times_linear(self, op: Mat) -> "AntilinearOp":
        """J o op (antilinear)."""
        return AntilinearOp(self.matrix * op.conj())

    def kron(self, other: "AntilinearOp") -> "AntilinearOp":
        return AntilinearOp(self.matrix.kron(other.matrix))

    def is_antiunitary(self) -> bool:
        n = self.matrix.rows
        return self.matrix.adjoint() * self.matrix == Mat.identity(n)

    def __eq__(self, other) -> bool:
        return isinstance(other, AntilinearOp) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)


# -- row reduction ---------------------------------------------------------------

def _reduce_vec(v: Dict, rows: List[Dict], pivots: List) -> Dict:
    for r, p in zip(rows, pivots):
        c = v.get(p)
        if c is None:
            continue
        for k, a in r.items():
            t = _cmul(c, a)
            w = v.get(k)
            if w is None:
                v[k] = (-t[0], -t[1])
            else:
                nw = (w[0] - t[0], w[1] - t[1])
                if _nz(nw):
                    v[k] = nw
                else:
                    del v[k]
    return v


def _rref(rows: List[Dict], order: List) -> Tuple[List[Dict], List]:
    """Reduced row echelon form with pivot search following ``order``."""
    pos = {k: n for n, k in enumerate(order)}
    work = [dict(r) for r in rows if r]
    out: List[Dict] = []
    piv: List = []
    for col in order:
        best = None
        for idx, r in enumerate(work):
            if col in r:
                best = idx
                break
        if best is None:
            continue
        r = work.pop(best)
        inv = _cinv(r[col])
        r = {k: _cmul(a, inv) for k, a in r.items()}
        for other in itertools.chain(work, out):
            c = other.get(col)
            if c is None:
                continue
            for k, a in r.items():
                t = _cmul(c, a)
                w = other.get(k)
                if w is None:
                    other[k] = (-t[0], -t[1])
                else:
                    nw = (w[0] - t[0], w[1] - t[1])
                    if _nz(nw):
                        other[k] = nw
                    else:
                        del other[k]
        out.append(r)
        piv.append(col)
        work = [w for w in work if w]
    order_idx = sorted(range(len(piv)), key=lambda n: pos[piv[n]])
    return [out[n] for n in order_idx], [piv[n] for n in order_idx]


def _coord_key(k):
    i, j, m = k
    return (i, j, _mono_key(m))


class Echelon:
    """Incremental echelon basis of coordinate vectors over Q(i).

    Vectors are dicts ``coordinate -> (re, im)``.  Pivot choice is the
    smallest coordinate under ``key``, which keeps results deterministic.
    """

    def __init__(self, key=None):
        self.key = key or (lambda k: k)
        self.rows: List[Dict] = []
        self.pivots: List = []

    def reduce(self, v: Dict) -> Dict:
        return _reduce_vec(dict(v), self.rows, self.pivots)

    def add(self, v: Dict) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r, key=self.key)
        inv = _cinv(r[p])
        r = {k: _cmul(a, inv) for k, a in r.items()}
        self.rows.append(r)
        self.pivots.append(p)
        return True

    def contains(self, v: Dict) -> bool:
        return not self.reduce(v)

    def __len__(self) -> int:
        return len(self.rows)


def span_basis(mats: Sequence[Mat]) -> List[Mat]:
    """Basis of the Q(i)-span, keeping the first independent inputs.

    Distinct symbol monomials count as independent coordinates.
    """
    if not mats:
        return []
    shape = mats[0].shape
    ech = Echelon(_coord_key)
    out = []
    for m in mats:
        if m.shape != shape:
            raise ShapeError("span_basis needs equally shaped matrices")
        if ech.add(m.coordinates()):
            out.append(m)
    return out


def rank(mats: Sequence[Mat]) -> int:
    return len(span_basis(mats))


def nullspace(rows: Sequence[Dict[int, Tuple]], ncols: int) -> List[Dict[int, Tuple]]:
    """Basis of {x : row . x = 0 for all rows} with rows as sparse dicts."""
    red, piv = _rref([dict(r) for r in rows], list(range(ncols)))
    pset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pset:
            continue
        v = {free: (OQ, ZQ)}
        for r, p in zip(red, piv):
            c = r.get(free)
            if c is not None:
                v[p] = (-c[0], -c[1])
        basis.append(v)
    return basis


def commutant(mats: Sequence[Mat], within_dim: int) -> List[Mat]:
    """Basis of {X : X M = M X for all M}; symbolic M split per monomial."""
    n = within_dim
    gens: List[Mat] = []
    for m in mats:
        if m.shape != (n, n):
            raise ShapeError("commutant generators must be n x n")
        gens.extend(m.split_monomials().values())
    rows = []
    for g in gens:
        # (XG - GX)_{ij} = sum_k X_ik G_kj - G_ik X_kj ; unknown X_ab -> index a*n+b
        eq: Dict[Tuple[int, int], Dict[int, Tuple]] = {}
        for (k, j), v in g.data.items():
            c = v.constant()
            for i in range(n):
                d = eq.setdefault((i, j), {})
                idx = i * n + k
                w = d.get(idx, (ZQ, ZQ))
                d[idx] = (w[0] + c[0], w[1] + c[1])
        for (i, k), v in g.data.items():
            c = v.constant()
            for j in range(n):
                d = eq.setdefault((i, j), {})
                idx = k * n + j
                w = d.get(idx, (ZQ, ZQ))
                d[idx] = (w[0] - c[0], w[1] - c[1])
        rows.extend({k: a for k, a in d.items() if _nz(a)} for d in eq.values())
    basis = nullspace([r for r in rows if r], n * n)
    return [Mat(n, n, {divmod(k, n): Scalar({(): a}, True) for k, a in v.items()}) for v in basis]


# -- symbols for unknowns ----------------------------------------------------------

_FRESH = itertools.count()


def fresh_symbols(prefix: str, count: int, kind: str = "complex", germ: bool = False) -> List[Symbol]:
    out = []
    while len(out) < count:
        name = f"{prefix}{next(_FRESH)}"
        if name in TABLE or (name + BAR) in TABLE:
            continue
        out.append(ensure_symbol(name, kind, germ))
    return out


# -- constraint sets and solution spaces -----------------------------------------

@dataclass
class ConstraintSet:
    """Polynomial equations p = 0; empty means satisfied."""

    polys: List[Scalar] = field(default_factory=list)

    def __post_init__(self):
        self.polys = [p for p in (Scalar.coerce(q) for q in self.polys) if not p.is_zero()]

    @property
    def satisfied(self) -> bool:
        return not self.polys

    def __bool__(self) -> bool:
        return bool(self.polys)

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def holds_at(self, bindings: Mapping[Symbol, Scalar]) -> bool:
        return all(substitute(p, bindings).is_zero() for p in self.polys)

    def extend(self, other: "ConstraintSet | Iterable[Scalar]") -> "ConstraintSet":
        return ConstraintSet(list(self.polys) + list(other))

    def canonical(self) -> "ConstraintSet":
        """Deduplicate up to constant multiples and conjugation; linear parts echelonized."""
        seen = Echelon(lambda k: _mono_key(k))
        out = []
        lin, nonlin = [], []
        for p in self.polys:
            (lin if p.degree() <= 1 else nonlin).append(p)
        for p in sorted(lin, key=str):
            seen.add(dict(p.terms))
        red, piv = _rref([dict(r) for r in seen.rows], sorted({k for r in seen.rows for k in r}, key=_mono_key))
        lin_out = [Scalar(r, True) for r in red]
        # drop conjugate duplicates
        ech = Echelon(lambda k: _mono_key(k))
        for p in lin_out:
            if ech.contains(dict(p.conj().terms)) and ech.contains(dict(p.terms)):
                continue
            if ech.add(dict(p.terms)):
                out.append(p)
                ech.add(dict(p.conj().terms))
        keyset: Dict[str, Scalar] = {}
        for p in nonlin:
            q = _monic(p)
            qc = _monic(p.conj())
            k, kc = str(q), str(qc)
            if k in keyset or kc in keyset:
                continue
            keyset[k] = q
        out.extend(keyset[k] for k in sorted(keyset))
        return ConstraintSet(out)

    def factored(self) -> List[str]:
        return [factor_text(p) for p in self.polys]

    def to_json(self) -> List[str]:
        return [str(p) for p in self.polys]


def _monic(p: Scalar) -> Scalar:
    lead = min(p.terms, key=_mono_key)
    return p * Scalar({(): _cinv(p.terms[lead])}, True)


def factor_text(p: Scalar) -> str:
    """Factored display via sympy over Q(i); display only."""
    import sympy

    syms = {s.name: sympy.Symbol(s.name) for s in p.symbols()}
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        t = sympy.Rational(int(c[0].numerator), int(c[0].denominator)) + sympy.I * sympy.Rational(int(c[1].numerator), int(c[1].denominator))
        for u, e in m:
            t *= syms[TABLE.by_uid(u).name] ** e
        expr += t
    gaussian = any(c[1] for c in p.terms.values())
    # the algebraic extension is slow; only pay for it when needed
    f = sympy.factor(expr, extension=sympy.I) if gaussian else sympy.factor(expr)
    return str(f).replace("**", "^")


@dataclass
class SolutionSpace:
    """Affine solution family of a linear system in designated unknowns."""

    unknowns: List[Symbol]
    params: List[Symbol]
    values: Dict[Symbol, Scalar]
    constraints: ConstraintSet
    feasible: bool = True

    @property
    def dimension(self) -> int:
        return len(self.params)

    def member(self, bindings: Mapping[Symbol, Scalar]) -> Dict[Symbol, Scalar]:
        return {u: substitute(v, bindings) for u, v in self.values.items()}

    def apply(self, expr: Scalar) -> Scalar:
        return substitute(expr, self.values)

    def apply_mat(self, m: Mat) -> Mat:
        return m.subs(self.values)

    def basis(self) -> List[Dict[Symbol, Scalar]]:
        """Homogeneous directions, one per parameter."""
        out = []
        zero = {p: ZERO for p in self.params}
        for p in self.params:
            b = dict(zero)
            b[p] = ONE
            base = self.member(zero)
            val = self.member(b)
            out.append({u: val[u] - base[u] for u in self.unknowns})
        return out


def solve_linear_in_symbols(
    equations: Sequence[Scalar],
    unknowns: Sequence[Symbol],
    *,
    reality: str | bool = "auto",
    generic: bool = True,
) -> SolutionSpace:
    """Solve equations (each = 0) that are affine in ``unknowns``.

    generic=True: the equations must hold identically in every other symbol,
    so each monomial in the other symbols gives its own linear equation.
    generic=False: other symbols are parameters; consistency conditions on
    them come back as ``constraints``.

    reality: with "auto", complex unknowns whose conjugate partner also
    occurs are split into real and imaginary parts, so x + x̄ = 0 has a one
    real-parameter family.  ``False`` treats x and x̄ as independent.
    """
    unknowns = list(dict.fromkeys(unknowns))
    eqs = [Scalar.coerce(e) for e in equations]
    uset = set(unknowns)
    present = set()
    for e in eqs:
        present |= e.symbols()
    decompose: List[Symbol] = []
    if reality:
        for u in unknowns:
            if u.is_real:
                continue
            p = TABLE.partner(u)
            if reality is True or p in present or p in uset:
                if p in uset and unknowns.index(p) < unknowns.index(u):
                    continue
                decompose.append(u)
        if decompose:
            # a partial split would drop the conjugate equations
            for u in unknowns:
                p = TABLE.partner(u)
                if u.is_real or u in decompose or p in decompose:
                    continue
                if p in uset and unknowns.index(p) < unknowns.index(u):
                    continue
                decompose.append(u)
    # substitute x = xr + i xi, x̄ = xr - i xi
    real_of: Dict[Symbol, Tuple[Symbol, Symbol]] = {}
    bind = {}
    for u in decompose:
        base = u.name[:-1] if u.name.endswith(BAR) else u.name
        xr = ensure_symbol(f"{base}_re", "real", u.germ)
        xi = ensure_symbol(f"{base}_im", "real", u.germ)
        real_of[u] = (xr, xi)
        val = Scalar.sym(xr) + I * Scalar.sym(xi)
        bind[u] = val
        bind[TABLE.partner(u)] = val.conj()
    work_unknowns: List[Symbol] = []
    for u in unknowns:
        if u in real_of:
            work_unknowns.extend(real_of[u])
        elif TABLE.partner(u) in real_of:
            continue
        else:
            work_unknowns.append(u)
    if bind:
        eqs = [substitute(e, bind) for e in eqs]
    all_real = bool(reality) and all(w.is_real for w in work_unknowns)
    col = {w.uid: n for n, w in enumerate(work_unknowns)}
    ncols = len(work_unknowns)
    rows: List[Dict] = []
    rhs: List[Scalar] = []

    def add_row(lin: Dict[int, Tuple], r: Scalar):
        if all_real:
            # real unknowns: real and imaginary parts vanish separately
            re_l = {k: (a[0], ZQ) for k, a in lin.items() if a[0]}
            im_l = {k: (a[1], ZQ) for k, a in lin.items() if a[1]}
            rows.append(re_l)
            rhs.append(r.real_part())
            rows.append(im_l)
            rhs.append(r.imag_part())
        else:
            rows.append(lin)
            rhs.append(r)

    wset = set(work_unknowns)
    for e in eqs:
        parts = e.split(wset)
        lin_parts: Dict[int, Scalar] = {}
        const = ZERO
        for km, coef in parts.items():
            if not km:
                const = coef
            elif len(km) == 1 and km[0][1] == 1:
                lin_parts[col[km[0][0]]] = coef
            else:
                raise NonlinearError(f"equation not affine in unknowns: {e}")
        if generic:
            keys = set(const.terms)
            for c in lin_parts.values():
                keys |= set(c.terms)
            for m in keys:
                lin = {k: c.terms[m] for k, c in lin_parts.items() if m in c.terms}
                r = Scalar({(): const.terms[m]}, True) if m in const.terms else ZERO
                add_row(lin, -r)
        else:
            lin = {}
            for k, c in lin_parts.items():
                if not c.is_constant():
                    raise NonlinearError("non-generic solve needs constant coefficients")
                if c.terms:
                    lin[k] = c.constant()
            add_row(lin, -const)
    # augmented elimination with symbolic right-hand sides
    aug = []
    for lin, r in zip(rows, rhs):
        row = {k: a for k, a in lin.items() if _nz(a)}
        aug.append((row, r))
    red_rows: List[Tuple[Dict, Scalar]] = []
    pivots: List[int] = []
    work = [a for a in aug if a[0] or not a[1].is_zero()]
    for c in range(ncols):
        idx = next((n for n, (r, _) in enumerate(work) if c in r), None)
        if idx is None:
            continue
        r, s = work.pop(idx)
        inv = _cinv(r[c])
        r = {k: _cmul(a, inv) for k, a in r.items()}
        s = s * Scalar({(): inv}, True)

        def elim(row, val):
            f = row.get(c)
            if f is None:
                return row, val
            row = dict(row)
            for k, a in r.items():
                t = _cmul(f, a)
                w = row.get(k)
                if w is None:
                    row[k] = (-t[0], -t[1])
                else:
                    nw = (w[0] - t[0], w[1] - t[1])
                    if _nz(nw):
                        row[k] = nw
                    else:
                        del row[k]
            return row, val - s * Scalar({(): f}, True)

        work = [elim(rw, v) for rw, v in work]
        red_rows = [elim(rw, v) for rw, v in red_rows]
        red_rows.append((r, s))
        pivots.append(c)
    leftovers = [v for rw, v in work if not rw and not v.is_zero()]
    feasible = True
    cons = []
    for v in leftovers:
        if v.is_constant():
            feasible = False
        cons.append(v)
    pset = set(pivots)
    free = [work_unknowns[c] for c in range(ncols) if c not in pset]
    sol: Dict[Symbol, Scalar] = {}
    for (r, s), p in zip(red_rows, pivots):
        val = s
        for k, a in r.items():
            if k != p:
                val = val - Scalar({(): a}, True) * Scalar.sym(work_unknowns[k])
        sol[work_unknowns[p]] = val
    for f in free:
        sol[f] = Scalar.sym(f)
    values: Dict[Symbol, Scalar] = {}
    for u in unknowns:
        if u in real_of:
            xr, xi = real_of[u]
            values[u] = sol[xr] + I * sol[xi]
            values[TABLE.partner(u)] = sol[xr] - I * sol[xi]
        elif u not in values:
            values[u] = sol[u]
    return SolutionSpace(unknowns, free, values, ConstraintSet(cons), feasible)
