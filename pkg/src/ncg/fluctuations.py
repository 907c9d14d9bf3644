"""One-forms, fluctuated Dirac operators, gauge transformations.

Pointwise, a (twisted) one-form a[D, b]_ρ is a constant matrix that is
bilinear in the values and gradients of a and b.  Splitting the generic
expression into its monomials gives a finite generating set of the
one-forms at a point.  Coefficients on that set are germ symbols, since a
one-form is a field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

from .clifford import OperatorExpr
from .linalg import ConstraintSet, Mat, _rref, solve_linear_in_symbols
from .scalars import BAR, I, TABLE, Scalar, Symbol, _mono_key, ensure_symbol, substitute
from .triples import Element, RealSpectralTriple, operator_entries
from .twists import TwistedTriple, twisted_commutator

__all__ = [
    "OneFormSpace",
    "FluctuationFamily",
    "InconsistentFluctuation",
    "one_form_space",
    "fluctuate",
    "selfadjoint_family",
    "gauge_transform",
    "check_transparency",
    "adjoint_action",
    "real_span_basis",
    "same_real_span",
    "GermPhase",
    "unit_phase",
    "unit_quaternion",
    "cayley_unitary",
    "numeric_unitary",
    "phase_unitary",
    "reduce_phases",
    "conjugation_identity",
]

Triple = Union[RealSpectralTriple, TwistedTriple]
ZQ, OQ = mpq(0), mpq(1)


class InconsistentFluctuation(ValueError):
    pass


def _is_twisted(T: Triple) -> bool:
    return isinstance(T, TwistedTriple)


def _base(T: Triple) -> RealSpectralTriple:
    return T.base if _is_twisted(T) else T


def _commutator(T: Triple, D: OperatorExpr, b: Element) -> OperatorExpr:
    if _is_twisted(T):
        return twisted_commutator(D, b, T)
    pb = OperatorExpr.const(T.rep(b))
    return D * pb - pb * D


def _pi(T: Triple, a: Element) -> Mat:
    return T.pi(a)


@dataclass
class OneFormSpace:
    basis: List[OperatorExpr]
    coefficients: List[Symbol]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def member(self, coeffs: Optional[Sequence] = None) -> OperatorExpr:
        if not self.basis:
            raise ValueError("empty one-form space")
        cs = self.coefficients if coeffs is None else coeffs
        out = OperatorExpr.zero(self.basis[0].dim)
        for c, b in zip(cs, self.basis):
            out = out + b.scale(Scalar.coerce(c))
        return out


def _op_real_coords(O: OperatorExpr) -> Dict:
    out = {}
    for alpha, m in O.terms.items():
        for (i, j, mono), c in m.coordinates().items():
            for part in (0, 1):
                if c[part]:
                    out[(alpha, i, j, mono, part)] = (c[part], ZQ)
    return out


def _op_key(k):
    alpha, i, j, m, part = k
    return (len(alpha), alpha, i, j, _mono_key(m), part)


def _realify(a: Element, b: Element) -> Tuple[Element, Element]:
    """Write every complex entry symbol as x_re + i x_im with real symbols.

    The algebras are real (ℍ is not a complex algebra), so one-forms are
    real combinations; splitting by complex monomials would complexify them.
    """
    bind: Dict[Symbol, Scalar] = {}
    for el in (a, b):
        for m in el.values():
            for s in m.symbols():
                if s.is_real or s in bind or TABLE.partner(s) in bind:
                    continue
                base = s.name[:-1] if s.name.endswith(BAR) else s.name
                xr = ensure_symbol(f"{base}_re", "real", s.germ)
                xi = ensure_symbol(f"{base}_im", "real", s.germ)
                bind[s] = Scalar.sym(xr) + I * Scalar.sym(xi)
    return ({k: v.subs(bind) for k, v in a.items()}, {k: v.subs(bind) for k, v in b.items()})


def one_form_space(T: Triple, D_part: Optional[OperatorExpr] = None, prefix: str = "φ") -> OneFormSpace:
    """Basis of the real span of the pointwise one-forms a[D, b]_ρ (or a[D, b])."""
    D = T.D if D_part is None else D_part
    A = T.algebra
    a, b = _realify(A.generic("a"), A.generic("b"))
    form = OperatorExpr.const(_pi(T, a)) * _commutator(T, D, b)
    # split by the algebra entries only; couplings in D stay in the coefficients
    among = form.symbols() - D.symbols()
    pieces: Dict[Tuple, Dict] = {}
    for alpha, m in form.terms.items():
        for mono, part in m.split_monomials(among).items():
            pieces.setdefault(mono, {})[alpha] = part
    candidates = [OperatorExpr(D.dim, pieces[k]) for k in sorted(pieces, key=_mono_key)]
    rows = [_op_real_coords(c) for c in candidates]
    order = sorted({k for r in rows for k in r}, key=_op_key)
    red, piv = _rref(rows, order)
    basis = []
    for r in red:
        terms: Dict[Tuple, Dict] = {}
        for (alpha, i, j, mono, part), c in r.items():
            v = Scalar({mono: (c[0], ZQ) if part == 0 else (ZQ, c[0])}, True)
            d = terms.setdefault(alpha, {})
            d[(i, j)] = d[(i, j)] + v if (i, j) in d else v
        basis.append(OperatorExpr(D.dim, {al: Mat(D.dim, D.dim, d) for al, d in terms.items()}))
    coeffs = [ensure_symbol(f"{prefix}{k}", "real", germ=True) for k in range(len(basis))]
    return OneFormSpace(basis, coeffs)


def fluctuate(T: Triple, A: OperatorExpr, D_part: Optional[OperatorExpr] = None) -> OperatorExpr:
    """D + A + ε' J A J⁻¹ (twisted: D + A + J A J⁻¹)."""
    D = T.D if D_part is None else D_part
    J = T.J
    if J is None:
        return D + A
    if _is_twisted(T):
        eps = 1
    else:
        eps = _base(T).signs()[1] or 1
    return D + A + A.conjugate_by(J).scale(eps)


# -- real spans ------------------------------------------------------------------------

def _real_coords(m: Mat) -> Dict:
    out = {}
    for (i, j, mono), c in m.coordinates().items():
        if c[0]:
            out[(i, j, _mono_key(mono), mono, 0)] = (c[0], ZQ)
        if c[1]:
            out[(i, j, _mono_key(mono), mono, 1)] = (c[1], ZQ)
    return out


def real_span_basis(mats: Sequence[Mat]) -> List[Mat]:
    """Canonical basis (reduced echelon form) of the real span of ``mats``."""
    if not mats:
        return []
    n, m = mats[0].shape
    rows = [_real_coords(x) for x in mats]
    order = sorted({k for r in rows for k in r}, key=lambda k: (k[0], k[1], k[2], k[4]))
    red, _ = _rref(rows, order)
    out = []
    for r in red:
        d: Dict[Tuple[int, int], Scalar] = {}
        for (i, j, _, mono, part), c in r.items():
            v = Scalar({mono: (c[0], ZQ) if part == 0 else (ZQ, c[0])}, True)
            d[(i, j)] = d[(i, j)] + v if (i, j) in d else v
        out.append(Mat(n, m, d))
    return out


def same_real_span(xs: Sequence[Mat], ys: Sequence[Mat]) -> bool:
    bx, by = real_span_basis(xs), real_span_basis(ys)
    return len(bx) == len(by) and len(real_span_basis(list(xs) + list(ys))) == len(bx)


@dataclass
class FluctuationFamily:
    """D + Σ p_k B_k over real parameters p_k with the imposed adjointness."""

    D: OperatorExpr
    params: List[Symbol]
    basis: List[Mat]
    product: str
    constraints: ConstraintSet = field(default_factory=ConstraintSet)

    @property
    def dimension(self) -> int:
        return len(self.params)

    def fluctuation(self) -> Mat:
        out = Mat.zeros(self.D.dim)
        for p, b in zip(self.params, self.basis):
            out = out + b.scale(Scalar.sym(p))
        return out

    def operator(self) -> OperatorExpr:
        return self.D + OperatorExpr.const(self.fluctuation())

    def spans(self, mats: Sequence[Mat]) -> bool:
        return same_real_span(self.basis, mats)

    def express(self, named: Sequence[Tuple[Symbol, Mat]]) -> OperatorExpr:
        """Rewrite the family as D + Σ s·E over a caller-chosen real basis.

        Raises if the given matrices do not span the same real space.
        """
        if not self.spans([m for _, m in named]):
            raise ValueError("named basis does not span the family")
        out = self.D
        for s, m in named:
            out = out + OperatorExpr.const(m.scale(Scalar.sym(s)))
        return out

    def to_json(self) -> dict:
        return {
            "product": self.product,
            "parameters": [{"name": p.name, "kind": p.kind} for p in self.params],
            "basis": [b.to_json() for b in self.basis],
        }


def _adjointness_equations(T: Triple, X: Mat, product: str) -> List[Scalar]:
    if product == "standard":
        Y = X.adjoint()
    elif product == "rho":
        if not _is_twisted(T) or T.R is None:
            raise ValueError("the ρ-product needs a twisted triple with R")
        Y = (T.R * X * T.R.adjoint()).adjoint()
    else:
        raise ValueError(f"unknown product {product!r}")
    return operator_entries(X - Y)


def selfadjoint_family(T: Triple, D_part: Optional[OperatorExpr] = None, product: str = "standard",
                       prefix: str = "x") -> FluctuationFamily:
    D = T.D if D_part is None else D_part
    space = one_form_space(T, D_part)
    if space.dimension == 0:
        return FluctuationFamily(D, [], [], product)
    A = space.member()
    X = fluctuate(T, A, D_part) - D
    if X.degree() > 0:
        raise InconsistentFluctuation("fluctuation is not a bounded operator")
    Xm = X.bounded_part()
    eqs = _adjointness_equations(T, Xm, product)
    sol = solve_linear_in_symbols(eqs, space.coefficients)
    if not sol.feasible:
        raise InconsistentFluctuation("adjointness constraints are inconsistent")
    Xs = sol.apply_mat(Xm)
    parts = Xs.split_monomials(sol.params)
    dirs = [parts[k] for k in sorted(parts, key=_mono_key) if k]
    basis = real_span_basis(dirs)
    params = [ensure_symbol(f"{prefix}{k}", "real", germ=True) for k in range(len(basis))]
    return FluctuationFamily(D, params, basis, product, sol.constraints)


# -- gauge transformations -------------------------------------------------------------

def adjoint_action(T: Triple, u: Element) -> Tuple[Mat, Mat]:
    """(Ad u, Ad(u)⁻¹) = (u J u J⁻¹, J u* J⁻¹ u*)."""
    J = T.J
    pu = T.pi(u)
    pus = T.pi(T.algebra.star(u))
    return pu * J.conjugate(pu), J.conjugate(pus) * pus


def gauge_transform(T: Triple, A: OperatorExpr, u: Element, D_part: Optional[OperatorExpr] = None) -> OperatorExpr:
    """A^u = u[D, u*] + u A u* (twisted: ρ(u)[D, u*]_ρ + ρ(u) A u*)."""
    D = T.D if D_part is None else D_part
    us = T.algebra.star(u)
    lead = T.pi(T.rho(u)) if _is_twisted(T) else T.pi(u)
    L = OperatorExpr.const(lead)
    return L * _commutator(T, D, us) + L * A * OperatorExpr.const(T.pi(us))


def check_transparency(T: Triple, D_part: OperatorExpr) -> bool:
    a = T.algebra.generic("a")
    return _commutator(T, D_part, a).is_zero()


class GermPhase:
    """Germ unitary w = e^{iθ}: w w̄ = 1, ∂_μ w = i w ∂_μθ."""

    def __init__(self, name: str = "w", angle: str = "θ"):
        self.w = ensure_symbol(name, "complex", germ=True)
        self.wbar = TABLE.partner(self.w)
        self.theta = ensure_symbol(angle, "real", germ=True)

    @property
    def value(self) -> Scalar:
        return Scalar.sym(self.w)

    def dtheta(self, mu: int) -> Symbol:
        return TABLE.derivative(self.theta, mu)

    def reduce(self, s: Scalar) -> Scalar:
        binds = {}
        for mu in range(4):
            dw = TABLE.derivative(self.w, mu)
            binds[dw] = I * Scalar.sym(self.w) * Scalar.sym(self.dtheta(mu))
            binds[TABLE.partner(dw)] = -I * Scalar.sym(self.wbar) * Scalar.sym(self.dtheta(mu))
        s = substitute(s, binds)
        out: Dict = {}
        wu, bu = self.w.uid, self.wbar.uid
        for mono, c in s.terms.items():
            d = dict(mono)
            k = min(d.get(wu, 0), d.get(bu, 0))
            for u in (wu, bu):
                if u in d:
                    d[u] -= k
                    if not d[u]:
                        del d[u]
            nm = tuple(sorted(d.items()))
            w = out.get(nm)
            out[nm] = c if w is None else (w[0] + c[0], w[1] + c[1])
        return Scalar(out)

    def reduce_op(self, O: OperatorExpr) -> OperatorExpr:
        return O.map(lambda m: m.map(self.reduce))


# -- explicit unitaries ----------------------------------------------------------------

def _q(x) -> Scalar:
    return Scalar.const(mpq(x))


def unit_phase(t) -> Scalar:
    """((1 - t²) + 2ti) / (1 + t²), a rational point of the unit circle."""
    t = mpq(t)
    d = 1 + t * t
    return Scalar({(): ((1 - t * t) / d, 2 * t / d)}, True)


def unit_quaternion(x: Sequence) -> Mat:
    """Inverse stereographic image of x ∈ ℚ³ as [[α, β], [-β̄, ᾱ]]."""
    x1, x2, x3 = (mpq(v) for v in x)
    n = x1 * x1 + x2 * x2 + x3 * x3
    d = 1 + n
    al = Scalar({(): ((1 - n) / d, 2 * x1 / d)}, True)
    be = Scalar({(): (2 * x2 / d, 2 * x3 / d)}, True)
    return Mat.from_rows([[al, be], [-be.conj(), al.conj()]])


def cayley_unitary(K: Mat) -> Mat:
    """(I - K)(I + K)⁻¹ for antihermitian K."""
    n = K.rows
    if K.adjoint() != -K:
        raise ValueError("Cayley transform needs an antihermitian matrix")
    return (Mat.identity(n) - K) * (Mat.identity(n) + K).inverse()


def _random_rational(rng, lo: int = -5, hi: int = 5) -> mpq:
    return mpq(rng.randint(lo, hi), rng.randint(1, 4))


def numeric_unitary(A, rng) -> Element:
    """A random unitary element of the algebra with exact rational entries."""
    out: Element = {}
    for f in A.factors:
        if f.kind == "C":
            out[f.name] = Mat(1, 1, {(0, 0): unit_phase(_random_rational(rng))})
        elif f.kind == "H":
            out[f.name] = unit_quaternion([_random_rational(rng) for _ in range(3)])
        elif f.kind == "M":
            n = f.n
            d: Dict[Tuple[int, int], Scalar] = {}
            for i in range(n):
                d[(i, i)] = Scalar({(): (ZQ, _random_rational(rng))}, True)
                for j in range(i + 1, n):
                    z = Scalar({(): (_random_rational(rng), _random_rational(rng))}, True)
                    d[(i, j)] = z
                    d[(j, i)] = -z.conj()
            out[f.name] = cayley_unitary(Mat(n, n, d))
        else:
            raise ValueError(f"no explicit unitaries for {f.label()}")
    return out


def phase_unitary(A, names: Optional[Mapping[str, str]] = None) -> Tuple[Element, Dict[str, GermPhase]]:
    """Germ unitary with an independent phase e^{iθ} on every ℂ factor.

    ``names`` maps factor name to a phase label; factors mapped to the same
    label share the phase, factors not listed get 1.
    """
    if names is None:
        names = {f.name: f"u{k}" for k, f in enumerate(A.factors)}
    phases: Dict[str, GermPhase] = {}
    u: Element = {}
    for f in A.factors:
        if f.kind != "C":
            raise ValueError("phase unitaries need commutative factors")
        lab = names.get(f.name)
        if lab is None:
            u[f.name] = Mat.identity(1)
            continue
        if lab not in phases:
            phases[lab] = GermPhase(f"w{lab}", f"θ{lab}")
        u[f.name] = Mat(1, 1, {(0, 0): phases[lab].value})
    return u, phases


def reduce_phases(O: OperatorExpr, phases: Mapping[str, GermPhase]) -> OperatorExpr:
    for p in phases.values():
        O = p.reduce_op(O)
    return O


def conjugation_identity(T: Triple, A: OperatorExpr, u: Element) -> Tuple[OperatorExpr, OperatorExpr]:
    """(ρ(Ad u) D_A Ad(u)⁻¹, D_{A^u}); equal when the gauge formula holds."""
    DA = fluctuate(T, A)
    if _is_twisted(T):
        lead, _ = adjoint_action(T, T.rho(u))
    else:
        lead, _ = adjoint_action(T, u)
    _, inv = adjoint_action(T, u)
    lhs = OperatorExpr.const(lead) * DA * OperatorExpr.const(inv)
    rhs = fluctuate(T, gauge_transform(T, A, u))
    return lhs, rhs
