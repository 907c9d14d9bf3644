"""Twisted spectral triples: automorphisms, twisted commutators and axioms.

A twist ρ acts on the algebra by permuting its factors.  Operators on the
Hilbert space are twisted by a unitary R with ρ(π(a)) = R π(a) R†, which
also defines the ρ-inner product ⟨ψ, φ⟩_ρ = ⟨ψ, Rφ⟩.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .clifford import GAMMA, OperatorExpr, is_bounded
from .linalg import ConstraintSet, Mat, solve_linear_in_symbols
from .scalars import HALF, TABLE, Scalar
from .triples import (
    AlgebraSpec,
    CheckResult,
    Element,
    RealSpectralTriple,
    TripleReport,
    compute_signs,
    constraints_of,
    ko_dimension,
    rep_is_multiplicative,
    operator_entries,
)

__all__ = [
    "Automorphism",
    "TwistedTriple",
    "TwistError",
    "twisted_commutator",
    "check_twisted_first_order",
    "check_twisted_order_zero",
    "validate_twisted",
    "twist_by_grading",
    "minimal_twist",
    "rho_product",
    "rho_adjoint",
    "signature",
    "check_closure_under_twist",
]


class TwistError(ValueError):
    pass


@dataclass(frozen=True)
class Automorphism:
    """Factor permutation: ρ(a)[mapping[f]] = a[f]."""

    mapping: Tuple[Tuple[str, str], ...]

    @classmethod
    def from_dict(cls, m: Mapping[str, str]) -> "Automorphism":
        return cls(tuple(sorted(m.items())))

    @classmethod
    def flip(cls, pairs: Sequence[Tuple[str, str]], fixed: Sequence[str] = ()) -> "Automorphism":
        m = {}
        for x, y in pairs:
            m[x], m[y] = y, x
        for f in fixed:
            m[f] = f
        return cls.from_dict(m)

    @classmethod
    def identity(cls, names: Sequence[str]) -> "Automorphism":
        return cls.from_dict({n: n for n in names})

    def as_dict(self) -> Dict[str, str]:
        return dict(self.mapping)

    def __call__(self, a: Element) -> Element:
        m = self.as_dict()
        return {m.get(k, k): v for k, v in a.items()}

    def inverse(self) -> "Automorphism":
        return Automorphism.from_dict({v: k for k, v in self.mapping})

    def compose(self, other: "Automorphism") -> "Automorphism":
        """(self ∘ other)."""
        m, o = self.as_dict(), other.as_dict()
        keys = set(m) | set(o)
        return Automorphism.from_dict({k: m.get(o.get(k, k), o.get(k, k)) for k in keys})

    def is_involution(self) -> bool:
        return all(self.as_dict().get(v, v) == k for k, v in self.mapping)

    def is_valid_for(self, A: AlgebraSpec) -> bool:
        """Bijective on factor names and matching factor types."""
        m = self.as_dict()
        names = set(A.names())
        if set(m) - names or set(m.values()) - names or len(set(m.values())) != len(m):
            return False
        return all((A.factor(k).kind, A.factor(k).n) == (A.factor(v).kind, A.factor(v).n) for k, v in m.items())


@dataclass
class TwistedTriple:
    base: RealSpectralTriple
    rho: Automorphism
    R: Optional[Mat] = None
    twisting_operator: Optional[Mat] = None
    notes: Dict[str, str] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.base.name

    @property
    def algebra(self) -> AlgebraSpec:
        return self.base.algebra

    @property
    def D(self) -> OperatorExpr:
        return self.base.D

    @property
    def J(self):
        return self.base.J

    @property
    def gamma(self):
        return self.base.gamma

    @property
    def dim(self) -> int:
        return self.base.dim

    def pi(self, a: Element) -> Mat:
        return self.base.rep(a)

    def generic_pair(self, tag: str = "a") -> Tuple[Mat, Mat]:
        """(π(a), π(ρ(a))) for a generic element."""
        a = self.algebra.generic(tag)
        return self.pi(a), self.pi(self.rho(a))

    def rho_op(self, O: Mat) -> Mat:
        if self.R is None:
            raise TwistError("no unitary implementing the twist")
        return self.R * O * self.R.adjoint()

    @property
    def grading_like(self) -> Optional[bool]:
        """Whether the twisting operator anticommutes with D."""
        G = self.twisting_operator
        if G is None:
            return None
        return (OperatorExpr.const(G) * self.D + self.D * OperatorExpr.const(G)).is_zero()


def twisted_commutator(D: OperatorExpr, a: Element, T: TwistedTriple) -> OperatorExpr:
    """[D, a]_ρ = D π(a) - π(ρ(a)) D."""
    return D * OperatorExpr.const(T.pi(a)) - OperatorExpr.const(T.pi(T.rho(a))) * D


def check_twisted_first_order(T: TwistedTriple, D_part: Optional[OperatorExpr] = None) -> ConstraintSet:
    """[[D, a]_ρ, J b* J⁻¹]_ρ° with ρ°(J b* J⁻¹) = J π(ρ(b))* J⁻¹."""
    D = T.D if D_part is None else D_part
    A = T.algebra
    a, b = A.generic("a"), A.generic("b")
    da = twisted_commutator(D, a, T)
    bo = OperatorExpr.const(T.base.opposite(T.pi(b)))
    rbo = OperatorExpr.const(T.base.opposite(T.pi(T.rho(b))))
    return constraints_of(da * bo - rbo * da)


def check_twisted_order_zero(T: TwistedTriple) -> ConstraintSet:
    return constraints_of(T.pi(T.algebra.generic("a")).commutator(T.base.opposite(T.pi(T.algebra.generic("b")))))


def _bool(name: str, ok: bool, detail: str = "") -> CheckResult:
    return CheckResult(name, "PASS" if ok else "FAIL", ConstraintSet(), detail)


def _cons(name: str, cs: ConstraintSet) -> CheckResult:
    return CheckResult(name, "PASS" if cs.satisfied else "CONSTRAINED", cs)


def r_commutes_with_J(T: TwistedTriple) -> Optional[int]:
    """+1 if RJ = JR, -1 if RJ = -JR, None otherwise."""
    if T.R is None or T.J is None:
        return None
    lhs = T.R * T.J.matrix
    rhs = T.J.matrix * T.R.conj()
    if lhs == rhs:
        return 1
    if lhs == -rhs:
        return -1
    return None


def validate_twisted(T: TwistedTriple) -> TripleReport:
    n = T.dim
    checks: List[CheckResult] = []
    unital, mult = rep_is_multiplicative(T.algebra, T.base.rep)
    checks.append(_bool("rep unital", unital))
    checks.append(_bool("rep multiplicative", mult))
    checks.append(_bool("twist is an automorphism", T.rho.is_valid_for(T.algebra)))
    checks.append(_bool("D selfadjoint", T.D.adjoint() == T.D))
    a = T.algebra.generic("a")
    ok, cs = is_bounded(twisted_commutator(T.D, a, T))
    checks.append(CheckResult("bounded twisted commutators", "PASS" if ok else "FAIL", cs))
    pa, pra = T.pi(a), T.pi(T.rho(a))
    if T.R is not None:
        checks.append(_bool("R unitary", T.R.adjoint() * T.R == Mat.identity(n)))
        checks.append(_bool("R implements twist", T.R * pa * T.R.adjoint() == pra))
        if T.J is not None:
            s = r_commutes_with_J(T)
            checks.append(_bool("R commutes or anticommutes with J", s is not None, f"sign {s}"))
    G = T.gamma
    if G is not None:
        checks.append(_bool("grading selfadjoint", G.adjoint() == G))
        checks.append(_bool("grading squares to 1", G * G == Mat.identity(n)))
        checks.append(_bool("grading anticommutes with D", (OperatorExpr.const(G) * T.D + T.D * OperatorExpr.const(G)).is_zero()))
        checks.append(_cons("grading commutes with algebra", constraints_of(G.commutator(pa))))
    signs = compute_signs(T.D, T.J, G)
    if T.J is not None:
        checks.append(_bool("J antiunitary", T.J.is_antiunitary()))
        checks.append(_bool("J^2 = eps", signs[0] is not None))
        checks.append(_bool("JD = eps' DJ", signs[1] is not None))
        if G is not None:
            checks.append(_bool("JΓ = eps'' ΓJ", signs[2] is not None))
        checks.append(_cons("twisted order zero", check_twisted_order_zero(T)))
        checks.append(_cons("twisted first order", check_twisted_first_order(T)))
    ko = None
    if T.J is not None and None not in signs[: 2 if G is None else 3]:
        ko = ko_dimension(signs, even=G is not None)
    return TripleReport(T.name, checks, signs, ko)


# -- minimal twists -----------------------------------------------------------------

def _default_R(T: RealSpectralTriple) -> Optional[Mat]:
    """γ⁰ ⊗ I on a spinor-outer product, if the dimensions allow it."""
    if T.dim % 4:
        return None
    return GAMMA[0].kron(Mat.identity(T.dim // 4))


def minimal_twist(T: RealSpectralTriple, gamma_tilde: Mat, R: Optional[Mat] = None,
                  name: Optional[str] = None, suffix: str = "'") -> TwistedTriple:
    """Minimal twist by ℂ²: π((a, a')) = ½(1+Γ̃)π(a) + ½(1-Γ̃)π(a'), ρ = flip."""
    n = T.dim
    G = gamma_tilde
    if G.shape != (n, n):
        raise TwistError("twisting operator has the wrong shape")
    if G.adjoint() != G:
        raise TwistError("twisting operator is not selfadjoint")
    if G * G != Mat.identity(n):
        raise TwistError("twisting operator does not square to 1")
    if not constraints_of(G.commutator(T.generic("a"))).satisfied:
        raise TwistError("twisting operator does not commute with the algebra")
    tr = G.trace().constant()[0]
    if abs(tr) == n:
        raise TwistError("twisting operator has a single eigenvalue")
    P = (Mat.identity(n) + G).scale(HALF)
    Q = (Mat.identity(n) - G).scale(HALF)
    A2 = AlgebraSpec(T.algebra.factors + T.algebra.renamed(suffix).factors)
    rep = T.rep.transform(lambda m: P * m) + T.rep.rename({f: f + suffix for f in T.algebra.names()}).transform(lambda m: Q * m)
    rho = Automorphism.flip([(f, f + suffix) for f in T.algebra.names()])
    base = RealSpectralTriple(name or f"{T.name}-twisted", A2, rep, T.D, T.J, T.gamma, T.scheme, dict(T.notes))
    if R is None:
        R = _default_R(T)
    tt = TwistedTriple(base, rho, None, G)
    if R is not None:
        a = A2.generic("a")
        if R * tt.pi(a) * R.adjoint() == tt.pi(rho(a)):
            tt.R = R
    return tt


def twist_by_grading(T: RealSpectralTriple, R: Optional[Mat] = None, name: Optional[str] = None) -> TwistedTriple:
    if T.gamma is None:
        raise TwistError("twist by grading needs a graded triple")
    return minimal_twist(T, T.gamma, R, name)


# -- rho-product -------------------------------------------------------------------------

def rho_product(T: TwistedTriple, psi: Mat, phi: Mat) -> Scalar:
    """⟨ψ, φ⟩_ρ = ψ† R φ for column vectors."""
    v = psi.adjoint() * T.R * phi
    return v[0, 0]


def rho_adjoint(T: TwistedTriple, O: Mat) -> Mat:
    """O⁺ = ρ(O)† = (R O R†)†."""
    return T.rho_op(O).adjoint()


def signature(R: Mat) -> Tuple[int, int]:
    """(#(+1), #(-1)) eigenvalues of a selfadjoint involution."""
    n = R.rows
    if R.adjoint() != R or R * R != Mat.identity(n):
        raise ValueError("signature needs a selfadjoint involution")
    tr = R.trace()
    if not tr.is_constant() or tr.constant()[1]:
        raise ValueError("trace is not rational")
    t = int(tr.constant()[0])
    return ((n + t) // 2, (n - t) // 2)


# -- closure of subalgebras under the twist -------------------------------------------------

def check_closure_under_twist(T: TwistedTriple, sub: AlgebraSpec,
                              embed: Callable[[Element], Element]) -> Tuple[ConstraintSet, Optional[Mat]]:
    """Conditions on a generic b ∈ sub under which ρ(π(b)) ∈ π(sub).

    Solves π(embed(b')) = π(ρ(embed(b))) for the entries of b' with b as
    symbolic data; the consistency conditions of that linear system are the
    returned constraints.  The witness is π(ρ(embed(b))) when they are not
    empty.
    """
    b = sub.generic("a")
    target = T.pi(T.rho(embed(b)))
    bp = sub.generic("z")
    zs = {s for m in bp.values() for s in m.symbols()}
    unknowns = sorted(zs | {TABLE.partner(s) for s in zs}, key=lambda s: s.uid)
    lhs = T.pi(embed(bp))
    eqs = operator_entries(lhs - target)
    sol = solve_linear_in_symbols(eqs, unknowns, reality=False, generic=False)
    cs = sol.constraints.canonical()
    return cs, (None if cs.satisfied and sol.feasible else target)
