"""Exact Gaussian-rational polynomials in named commuting symbols.

A :class:`Scalar` is a sparse polynomial over Q(i).  Symbols come in two
kinds: ``real`` symbols are fixed by conjugation, ``complex`` symbols carry
an explicit conjugate partner (``c`` and ``c̄``).  Symbols flagged as germs
stand for smooth functions and can be differentiated with respect to the
four coordinates; the derivative of a germ is again a (lazily created)
symbol, e.g. ``∂0f`` or ``∂01f``.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Tuple

from gmpy2 import mpq

__all__ = [
    "Symbol",
    "SymbolTable",
    "Scalar",
    "SymbolError",
    "make_symbol",
    "ensure_symbol",
    "get_symbol",
    "substitute",
    "is_zero",
    "parse_scalar",
    "ZERO",
    "ONE",
    "I",
    "TABLE",
]

BAR = "̄"

ZQ = mpq(0)
OQ = mpq(1)


class SymbolError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Symbol:
    name: str
    kind: str
    uid: int
    germ: bool = False
    base: str = ""
    deriv: Tuple[int, ...] = ()

    @property
    def is_real(self) -> bool:
        return self.kind == "real"

    def conj(self) -> "Symbol":
        return TABLE.partner(self)

    def __repr__(self) -> str:
        return f"Symbol({self.name!r}, {self.kind})"

    def __hash__(self) -> int:
        return self.uid

    def __eq__(self, other) -> bool:
        return self is other

    def __lt__(self, other: "Symbol") -> bool:
        return self.name < other.name

    # arithmetic sugar: symbols promote to scalars
    def _s(self) -> "Scalar":
        return Scalar.sym(self)

    def __add__(self, o):
        return self._s() + o

    __radd__ = __add__

    def __sub__(self, o):
        return self._s() - o

    def __rsub__(self, o):
        return Scalar.coerce(o) - self._s()

    def __mul__(self, o):
        return self._s() * o

    __rmul__ = __mul__

    def __neg__(self):
        return -self._s()

    def __pow__(self, k: int):
        return self._s() ** k


class SymbolTable:
    """Append-only registry of symbols; registration is atomic."""

    def __init__(self) -> None:
        self._by_name: Dict[str, Symbol] = {}
        self._by_uid: list[Symbol] = []
        self._partner: Dict[int, int] = {}
        self._lock = threading.RLock()

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def get(self, name: str) -> Symbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise SymbolError(f"unknown symbol {name!r}") from None

    def by_uid(self, uid: int) -> Symbol:
        return self._by_uid[uid]

    def _new(self, name: str, kind: str, germ: bool, base: str, deriv) -> Symbol:
        s = Symbol(name, kind, len(self._by_uid), germ, base or name, tuple(deriv))
        self._by_uid.append(s)
        self._by_name[name] = s
        return s

    def make(self, name: str, kind: str = "complex", germ: bool = False) -> Symbol:
        if kind not in ("real", "complex"):
            raise SymbolError(f"bad kind {kind!r}")
        if not name or any(ch in name for ch in " *+-^()/") or name.endswith(BAR):
            raise SymbolError(f"bad symbol name {name!r}")
        with self._lock:
            if name in self._by_name or (kind == "complex" and name + BAR in self._by_name):
                raise SymbolError(f"duplicate symbol {name!r}")
            s = self._new(name, kind, germ, name, ())
            if kind == "complex":
                c = self._new(name + BAR, kind, germ, name + BAR, ())
                self._partner[s.uid] = c.uid
                self._partner[c.uid] = s.uid
            else:
                self._partner[s.uid] = s.uid
            return s

    def ensure(self, name: str, kind: str = "complex", germ: bool = False) -> Symbol:
        with self._lock:
            s = self._by_name.get(name)
            if s is None:
                return self.make(name, kind, germ)
            if s.kind != kind or s.germ != germ:
                raise SymbolError(f"symbol {name!r} exists with different kind")
            return s

    def partner(self, s: Symbol) -> Symbol:
        return self._by_uid[self._partner[s.uid]]

    def derivative(self, s: Symbol, mu: int) -> Symbol | None:
        """Symbol for d_mu s, or None when s is a constant."""
        if not s.germ:
            return None
        deriv = tuple(sorted(s.deriv + (mu,)))
        root = s.base
        name = "∂" + "".join(map(str, deriv)) + root
        with self._lock:
            d = self._by_name.get(name)
            if d is not None:
                return d
            p = self.partner(self._by_name[root]) if s.deriv else self.partner(s)
            d = self._new(name, s.kind, True, root, deriv)
            if s.kind == "complex":
                pname = "∂" + "".join(map(str, deriv)) + p.base
                dc = self._new(pname, s.kind, True, p.base, deriv)
                self._partner[d.uid] = dc.uid
                self._partner[dc.uid] = d.uid
            else:
                self._partner[d.uid] = d.uid
            return d


TABLE = SymbolTable()


def make_symbol(name: str, kind: str = "complex", germ: bool = False) -> Symbol:
    return TABLE.make(name, kind, germ)


def ensure_symbol(name: str, kind: str = "complex", germ: bool = False) -> Symbol:
    return TABLE.ensure(name, kind, germ)


def get_symbol(name: str) -> Symbol:
    return TABLE.get(name)


# -- coefficients: pairs (re, im) of mpq ------------------------------------

Coef = Tuple[mpq, mpq]
Mono = Tuple[Tuple[int, int], ...]  # ((uid, exponent), ...) sorted by uid


def _coef(x) -> Coef:
    if isinstance(x, tuple):
        return x
    if isinstance(x, complex):
        re_, im_ = x.real, x.imag
        if re_ != int(re_) or im_ != int(im_):
            raise TypeError("only integral complex literals are exact")
        return (mpq(int(re_)), mpq(int(im_)))
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars")
    return (mpq(x), ZQ)


def _cmul(a: Coef, b: Coef) -> Coef:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, e in b:
        d[k] = d.get(k, 0) + e
    return tuple(sorted(d.items()))


class Scalar:
    """Immutable sparse polynomial over Q(i)."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Mono, Coef] | None = None, _clean: bool = False):
        if terms is None:
            self.terms: Dict[Mono, Coef] = {}
        elif _clean:
            self.terms = terms  # type: ignore[assignment]
        else:
            self.terms = {m: c for m, c in terms.items() if c[0] or c[1]}
        self._hash = None

    # -- constructors -------------------------------------------------------
    @staticmethod
    def const(x) -> "Scalar":
        c = _coef(x)
        if not (c[0] or c[1]):
            return ZERO
        return Scalar({(): c}, True)

    @staticmethod
    def gauss(re_, im_=0) -> "Scalar":
        return Scalar.const((mpq(re_), mpq(im_)))

    @staticmethod
    def sym(s: Symbol, power: int = 1) -> "Scalar":
        return Scalar({((s.uid, power),): (OQ, ZQ)}, True)

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, Symbol):
            return Scalar.sym(x)
        return Scalar.const(x)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "Scalar":
        o = Scalar.coerce(other)
        if not o.terms:
            return self
        if not self.terms:
            return o
        t = dict(self.terms)
        for m, c in o.terms.items():
            a = t.get(m)
            if a is None:
                t[m] = c
            else:
                r = (a[0] + c[0], a[1] + c[1])
                if r[0] or r[1]:
                    t[m] = r
                else:
                    del t[m]
        return Scalar(t, True)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar({m: (-c[0], -c[1]) for m, c in self.terms.items()}, True)

    def __sub__(self, other) -> "Scalar":
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other) -> "Scalar":
        o = Scalar.coerce(other)
        if not self.terms or not o.terms:
            return ZERO
        if len(o.terms) == 1 and () in o.terms:
            c = o.terms[()]
            if c == (OQ, ZQ):
                return self
            return Scalar({m: _cmul(a, c) for m, a in self.terms.items()}, True)
        if len(self.terms) == 1 and () in self.terms:
            return o * self
        t: Dict[Mono, Coef] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                c = _cmul(c1, c2)
                a = t.get(m)
                if a is not None:
                    c = (a[0] + c[0], a[1] + c[1])
                t[m] = c
        return Scalar(t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            raise ValueError("negative powers are not polynomial")
        r = ONE
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __truediv__(self, other) -> "Scalar":
        o = Scalar.coerce(other)
        if not o.is_constant() or o.is_zero():
            raise ZeroDivisionError("division only by nonzero constants")
        return self * o.inverse_const()

    def inverse_const(self) -> "Scalar":
        a, b = self.terms[()]
        n = a * a + b * b
        return Scalar({(): (a / n, -b / n)}, True)

    # -- comparisons --------------------------------------------------------
    def __eq__(self, other) -> bool:
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant(self) -> Coef:
        return self.terms.get((), (ZQ, ZQ))

    def to_complex_fraction(self) -> Tuple[Fraction, Fraction]:
        if not self.is_constant():
            raise ValueError("not a constant")
        a, b = self.constant()
        return Fraction(int(a.numerator), int(a.denominator)), Fraction(int(b.numerator), int(b.denominator))

    # -- involution and calculus -------------------------------------------
    def conj(self) -> "Scalar":
        t: Dict[Mono, Coef] = {}
        for m, c in self.terms.items():
            nm = tuple(sorted((TABLE._partner[u], e) for u, e in m))
            t[nm] = (c[0], -c[1])
        return Scalar(t, True)

    def real_part(self) -> "Scalar":
        return (self + self.conj()) * HALF

    def imag_part(self) -> "Scalar":
        return (self - self.conj()) * MINUS_HALF_I

    def diff(self, mu: int) -> "Scalar":
        """Coordinate derivative d_mu; non-germ symbols are constants."""
        out = ZERO
        for m, c in self.terms.items():
            for idx, (u, e) in enumerate(m):
                d = TABLE.derivative(TABLE.by_uid(u), mu)
                if d is None:
                    continue
                rest = list(m)
                if e == 1:
                    rest.pop(idx)
                else:
                    rest[idx] = (u, e - 1)
                mono = _mono_mul(tuple(rest), ((d.uid, 1),))
                out = out + Scalar({mono: (c[0] * e, c[1] * e)}, True)
        return out

    def symbols(self) -> set:
        return {TABLE.by_uid(u) for m in self.terms for u, _ in m}

    def degree(self, among: Iterable[Symbol] | None = None) -> int:
        ids = None if among is None else {s.uid for s in among}
        best = 0
        for m in self.terms:
            best = max(best, sum(e for u, e in m if ids is None or u in ids))
        return best

    def subs(self, bindings: Mapping[Symbol, "Scalar"]) -> "Scalar":
        return substitute(self, bindings)

    def split(self, unknowns: Iterable[Symbol]) -> Dict[Mono, "Scalar"]:
        """Group terms by their monomial in the unknowns.

        Returns ``{unknown_monomial: coefficient}`` where coefficients only
        involve the other symbols.
        """
        ids = {s.uid for s in unknowns}
        out: Dict[Mono, Dict[Mono, Coef]] = {}
        for m, c in self.terms.items():
            km = tuple(p for p in m if p[0] in ids)
            rm = tuple(p for p in m if p[0] not in ids)
            out.setdefault(km, {})[rm] = c
        return {k: Scalar(v, True) for k, v in out.items()}

    def monomials(self) -> Iterator[Tuple[Mono, Coef]]:
        return iter(self.terms.items())

    # -- text ---------------------------------------------------------------
    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"Scalar({to_text(self)!r})"


ZERO = Scalar()
ONE = Scalar({(): (OQ, ZQ)}, True)
I = Scalar({(): (ZQ, OQ)}, True)
HALF = Scalar({(): (mpq(1, 2), ZQ)}, True)
MINUS_HALF_I = Scalar({(): (ZQ, mpq(-1, 2))}, True)


def is_zero(s: Scalar) -> bool:
    return s.is_zero()


def substitute(s: Scalar, bindings: Mapping[Symbol, Scalar]) -> Scalar:
    """Homomorphic substitution.

    Real symbols may only be bound to conjugation-fixed scalars.  When a
    complex symbol is bound and its partner is not, the partner receives the
    conjugate binding so that substitution commutes with ``conj``.
    """
    full: Dict[int, Scalar] = {}
    for sym, val in bindings.items():
        val = Scalar.coerce(val)
        if sym.is_real and val.conj() != val:
            raise SymbolError(f"real symbol {sym.name} bound to non-real {val}")
        full[sym.uid] = val
    for sym, val in list(bindings.items()):
        p = TABLE.partner(sym)
        if p.uid not in full:
            full[p.uid] = Scalar.coerce(val).conj()
    out = ZERO
    for m, c in s.terms.items():
        term = Scalar({(): c}, True)
        keep = []
        for u, e in m:
            if u in full:
                term = term * (full[u] ** e)
            else:
                keep.append((u, e))
        if keep:
            term = term * Scalar({tuple(keep): (OQ, ZQ)}, True)
        out = out + term
    return out


# -- canonical text ----------------------------------------------------------

def _fmt_q(q: mpq) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_coef(c: Coef) -> str:
    a, b = c
    if not b:
        return _fmt_q(a)
    if not a:
        if b == 1:
            return "i"
        if b == -1:
            return "-i"
        return _fmt_q(b) + "i"
    sb = "+" if b > 0 else "-"
    bb = abs(b)
    return f"({_fmt_q(a)}{sb}{'' if bb == 1 else _fmt_q(bb)}i)"


def _mono_key(m: Mono):
    names = [(TABLE.by_uid(u).name, e) for u, e in m]
    names.sort()
    return (sum(e for _, e in names), tuple(names))


def to_text(s: Scalar) -> str:
    if not s.terms:
        return "0"
    parts = []
    for m in sorted(s.terms, key=_mono_key):
        c = s.terms[m]
        names = sorted((TABLE.by_uid(u).name, e) for u, e in m)
        factors = [n if e == 1 else f"{n}^{e}" for n, e in names]
        if not factors:
            body = _fmt_coef(c)
        elif c == (OQ, ZQ):
            body = "*".join(factors)
        elif c == (-OQ, ZQ):
            body = "-" + "*".join(factors)
        else:
            body = _fmt_coef(c) + "*" + "*".join(factors)
        parts.append(body)
    out = parts[0]
    for p in parts[1:]:
        out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
    return out


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<i>i)(?![^\s*+\-^()])|(?P<name>[^\s*+\-^()]+)|(?P<op>[*+\-^()]))"
)


def parse_scalar(text: str) -> Scalar:
    """Parse the canonical text form (also accepts any +,-,*,^,() expression)."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at {pos}")
        pos = m.end()
        if m.group("num"):
            toks.append(("num", m.group("num")))
        elif m.group("i"):
            toks.append(("i", "i"))
        elif m.group("name"):
            name = m.group("name")
            # "2i" style coefficients
            mm = re.fullmatch(r"(\d+(?:/\d+)?)i", name)
            if mm:
                toks.append(("num", mm.group(1)))
                toks.append(("op", "*"))
                toks.append(("i", "i"))
            else:
                toks.append(("name", name))
        else:
            toks.append(("op", m.group("op")))
    toks.append(("end", ""))
    idx = 0

    def peek():
        return toks[idx]

    def take():
        nonlocal idx
        t = toks[idx]
        idx += 1
        return t

    def expr() -> Scalar:
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        val = term() * sign
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            t = term()
            val = val + t if op == "+" else val - t
        return val

    def term() -> Scalar:
        val = power()
        while True:
            if peek() == ("op", "*"):
                take()
                val = val * power()
            elif peek()[0] in ("num", "i", "name") or peek() == ("op", "("):
                val = val * power()
            else:
                return val

    def power() -> Scalar:
        b = atom()
        if peek() == ("op", "^"):
            take()
            k = take()
            if k[0] != "num":
                raise ValueError("exponent must be an integer")
            b = b ** int(k[1])
        return b

    def atom() -> Scalar:
        kind, v = take()
        if kind == "num":
            return Scalar.const(Fraction(v))
        if kind == "i":
            return I
        if kind == "name":
            return Scalar.sym(TABLE.get(v))
        if (kind, v) == ("op", "("):
            e = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return e
        if (kind, v) == ("op", "-"):
            return -atom()
        raise ValueError(f"unexpected token {v!r}")

    out = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in {text!r}")
    return out
