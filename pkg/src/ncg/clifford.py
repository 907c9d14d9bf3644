"""Euclidean gamma matrices, formal differential operators and function germs.

Smooth functions are modelled pointwise: a germ is a symbol flagged as
differentiable, and its derivatives ``∂μf`` are independent symbols.  This is
enough for every commutator identity handled here, since those only involve
first derivatives at a point.  The spin connection is set to zero (flat germ
model): it only contributes a bounded term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .linalg import AntilinearOp, ConstraintSet, Mat, ShapeError, SolutionSpace, solve_linear_in_symbols
from .scalars import I, ONE, Scalar, Symbol, TABLE, ensure_symbol

__all__ = [
    "GAMMA_BASIS_TAG",
    "GammaBasis",
    "GAMMA",
    "PAULI",
    "OperatorExpr",
    "Germ",
    "dirac_free",
    "germ_commutator",
    "is_bounded",
    "solve_intertwiner_constraint",
    "intertwiner_rank",
    "charge_conjugation",
]

GAMMA_BASIS_TAG = "euclidean-chiral/v1: g0=[[0,1],[1,0]], gj=[[0,i*s_j],[-i*s_j,0]], g5=g0g1g2g3=diag(1,1,-1,-1)"

Index = Tuple[int, ...]


def _pauli() -> List[Mat]:
    return [
        Mat.identity(2),
        Mat.from_rows([[0, 1], [1, 0]]),
        Mat.from_rows([[0, -I], [I, 0]]),
        Mat.from_rows([[1, 0], [0, -1]]),
    ]


PAULI = _pauli()


@dataclass(frozen=True)
class GammaBasis:
    """Chiral basis: γ^μ = [[0, σ^μ], [σ̄^μ, 0]] with σ^μ = (1, iσ_j), σ̄^μ = (1, -iσ_j)."""

    gammas: Tuple[Mat, Mat, Mat, Mat]
    gamma5: Mat
    sigma: Tuple[Mat, ...]
    sigma_bar: Tuple[Mat, ...]
    tag: str = GAMMA_BASIS_TAG

    @classmethod
    def chiral(cls) -> "GammaBasis":
        z = Mat.zeros(2)
        sig = (PAULI[0],) + tuple(p.scale(I) for p in PAULI[1:])
        sigb = (PAULI[0],) + tuple(p.scale(-I) for p in PAULI[1:])
        gs = tuple(Mat.blocks([[z, s], [sb, z]]) for s, sb in zip(sig, sigb))
        g5 = gs[0] * gs[1] * gs[2] * gs[3]
        return cls(gs, g5, sig, sigb)

    def __getitem__(self, mu: int) -> Mat:
        return self.gammas[mu]

    def clifford_defects(self) -> List[Tuple[int, int]]:
        """Pairs (μ, ν) where γ^μγ^ν + γ^νγ^μ ≠ 2δ^{μν}."""
        bad = []
        for mu in range(4):
            for nu in range(mu, 4):
                want = Mat.identity(4).scale(2) if mu == nu else Mat.zeros(4)
                if self.gammas[mu].anticommutator(self.gammas[nu]) != want:
                    bad.append((mu, nu))
        return bad


GAMMA = GammaBasis.chiral()


# -- formal differential operators -------------------------------------------------

def _add_index(a: Index, mu: int) -> Index:
    return tuple(sorted(a + (mu,)))


def _leibniz(alpha: Index, b: Mat) -> Dict[Index, Mat]:
    """∂^α ∘ b as a differential operator (b a multiplication operator)."""
    out: Dict[Index, Mat] = {(): b}
    for mu in alpha:
        nxt: Dict[Index, Mat] = {}
        for beta, c in out.items():
            dc = c.diff(mu)
            if not dc.is_zero():
                nxt[beta] = nxt[beta] + dc if beta in nxt else dc
            k = _add_index(beta, mu)
            nxt[k] = nxt[k] + c if k in nxt else c
        out = nxt
    return out


class OperatorExpr:
    """Finite sum Σ_α A_α ∂^α with matrix coefficients acting on the left."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Index, Mat] | None = None):
        self.dim = dim
        self.terms: Dict[Index, Mat] = {}
        for k, m in (terms or {}).items():
            if m.shape != (dim, dim):
                raise ShapeError(f"coefficient of {k} has shape {m.shape}, expected {dim}")
            k = tuple(sorted(k))
            if not m.is_zero():
                self.terms[k] = self.terms[k] + m if k in self.terms else m
        self.terms = {k: m for k, m in self.terms.items() if not m.is_zero()}

    @classmethod
    def const(cls, m: Mat) -> "OperatorExpr":
        return cls(m.rows, {(): m})

    @classmethod
    def zero(cls, dim: int) -> "OperatorExpr":
        return cls(dim)

    @classmethod
    def partial(cls, mu: int, dim: int) -> "OperatorExpr":
        return cls(dim, {(mu,): Mat.identity(dim)})

    @staticmethod
    def lift(x) -> "OperatorExpr":
        return x if isinstance(x, OperatorExpr) else OperatorExpr.const(x)

    # -- structure
    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def part(self, grade: int) -> "OperatorExpr":
        return OperatorExpr(self.dim, {k: m for k, m in self.terms.items() if len(k) == grade})

    def coeff(self, alpha: Sequence[int] = ()) -> Mat:
        return self.terms.get(tuple(sorted(alpha)), Mat.zeros(self.dim))

    def bounded_part(self) -> Mat:
        return self.coeff(())

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Mat):
            other = OperatorExpr.const(other)
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        keys = ", ".join("∂" + "".join(map(str, k)) if k else "1" for k in sorted(self.terms))
        return f"OperatorExpr({self.dim}, [{keys}])"

    # -- linear structure
    def __add__(self, o) -> "OperatorExpr":
        o = OperatorExpr.lift(o)
        if o.dim != self.dim:
            raise ShapeError("dimension mismatch")
        t = dict(self.terms)
        for k, m in o.terms.items():
            t[k] = t[k] + m if k in t else m
        return OperatorExpr(self.dim, t)

    __radd__ = __add__

    def __neg__(self) -> "OperatorExpr":
        return OperatorExpr(self.dim, {k: -m for k, m in self.terms.items()})

    def __sub__(self, o) -> "OperatorExpr":
        return self + (-OperatorExpr.lift(o))

    def __rsub__(self, o) -> "OperatorExpr":
        return OperatorExpr.lift(o) - self

    def scale(self, s) -> "OperatorExpr":
        return OperatorExpr(self.dim, {k: m.scale(s) for k, m in self.terms.items()})

    def map(self, fn) -> "OperatorExpr":
        return OperatorExpr(self.dim, {k: fn(m) for k, m in self.terms.items()})

    def subs(self, bindings) -> "OperatorExpr":
        return self.map(lambda m: m.subs(bindings))

    def symbols(self) -> set:
        out = set()
        for m in self.terms.values():
            out |= m.symbols()
        return out

    # -- composition
    def __mul__(self, o) -> "OperatorExpr":
        if isinstance(o, (Scalar, Symbol, int)):
            return self.scale(o)
        o = OperatorExpr.lift(o)
        if o.dim != self.dim:
            raise ShapeError("dimension mismatch")
        out: Dict[Index, Mat] = {}
        for alpha, a in self.terms.items():
            for beta, b in o.terms.items():
                for gamma, c in _leibniz(alpha, b).items():
                    k = tuple(sorted(gamma + beta))
                    v = a * c
                    out[k] = out[k] + v if k in out else v
        return OperatorExpr(self.dim, out)

    def __rmul__(self, o) -> "OperatorExpr":
        if isinstance(o, (Scalar, Symbol, int)):
            return self.scale(o)
        return OperatorExpr.lift(o) * self

    def commutator(self, o) -> "OperatorExpr":
        o = OperatorExpr.lift(o)
        return self * o - o * self

    def adjoint(self) -> "OperatorExpr":
        """Formal adjoint with ∂_μ† = -∂_μ."""
        out = OperatorExpr(self.dim)
        for alpha, a in self.terms.items():
            sign = -1 if len(alpha) % 2 else 1
            out = out + OperatorExpr(self.dim, _leibniz(alpha, a.adjoint().scale(sign)))
        return out

    def transpose(self) -> "OperatorExpr":
        """Formal transpose with ∂_μ^T = -∂_μ."""
        out = OperatorExpr(self.dim)
        for alpha, a in self.terms.items():
            sign = -1 if len(alpha) % 2 else 1
            out = out + OperatorExpr(self.dim, _leibniz(alpha, a.transpose().scale(sign)))
        return out

    def conjugate_by(self, J: AntilinearOp) -> "OperatorExpr":
        """J O J⁻¹ for antilinear J = M∘conj with constant M (∂_μ is real)."""
        m, mi = J.matrix, J.matrix.inverse()
        return OperatorExpr(self.dim, {k: m * a.conj() * mi for k, a in self.terms.items()})

    def sandwich(self, left: Mat, right: Mat) -> "OperatorExpr":
        """left ∘ O ∘ right for multiplication operators left, right."""
        return OperatorExpr.const(left) * self * OperatorExpr.const(right)

    def tensor(self, f: Mat) -> "OperatorExpr":
        """O ⊗ F with the differential factor on the outer slot."""
        return OperatorExpr(self.dim * f.rows, {k: a.kron(f) for k, a in self.terms.items()})

    def permute(self, perm: Sequence[int]) -> "OperatorExpr":
        return self.map(lambda m: m.permute(perm))

    def restrict(self, left: Mat, right: Mat) -> Dict[Index, Mat]:
        """Coefficients L A_α R; the result need not be square."""
        return {k: left * a * right for k, a in self.terms.items()}

    def substitute_partial(self, mu: int, value) -> "OperatorExpr":
        """Replace ∂_μ (acting to the right on a plane wave) by ``value``."""
        value = Scalar.coerce(value)
        out: Dict[Index, Mat] = {}
        for k, a in self.terms.items():
            n = k.count(mu)
            rest = tuple(x for x in k if x != mu)
            v = a.scale(value ** n) if n else a
            out[rest] = out[rest] + v if rest in out else v
        return OperatorExpr(self.dim, out)

    def to_json(self) -> Dict[str, List[List[str]]]:
        return {("d" + "".join(map(str, k)) if k else "1"): self.terms[k].to_json() for k in sorted(self.terms)}


# -- germs -------------------------------------------------------------------------

class Germ:
    """A smooth function at a point: value symbol plus independent gradients."""

    __slots__ = ("symbol",)

    def __init__(self, name: str, kind: str = "complex"):
        self.symbol = ensure_symbol(name, kind, germ=True)

    @property
    def scalar(self) -> Scalar:
        return Scalar.sym(self.symbol)

    @property
    def gradient(self) -> List[Symbol]:
        return [TABLE.derivative(self.symbol, mu) for mu in range(4)]

    def times(self, m: Mat) -> Mat:
        return m.scale(self.scalar)

    def conj(self) -> Scalar:
        return self.scalar.conj()

    def __repr__(self) -> str:
        return f"Germ({self.symbol.name})"


def dirac_free(spinor_dim: int = 4) -> OperatorExpr:
    """∂̸ = -i Σ γ^μ ∂_μ in the flat germ model."""
    if spinor_dim != 4:
        raise ShapeError("only the 4-dimensional spinor bundle is modelled")
    return OperatorExpr(4, {(mu,): GAMMA[mu].scale(-I) for mu in range(4)})


def germ_commutator(D: OperatorExpr, f: Mat, rho_f: Optional[Mat] = None) -> OperatorExpr:
    """[D, f]_ρ = D f - ρ(f) D; ordinary commutator when ρ(f) is omitted."""
    if f.shape != (D.dim, D.dim):
        raise ShapeError("germ value does not act on the operator's space")
    rf = f if rho_f is None else rho_f
    return D * OperatorExpr.const(f) - OperatorExpr.const(rf) * D


def is_bounded(O: OperatorExpr) -> Tuple[bool, ConstraintSet]:
    """Bounded iff every coefficient of positive differential degree vanishes."""
    polys = []
    for k in sorted(O.terms):
        if k:
            polys.extend(O.terms[k].data[key] for key in sorted(O.terms[k].data))
    cs = ConstraintSet(polys).canonical() if polys else ConstraintSet()
    return (not polys, cs)


# -- intertwiners -------------------------------------------------------------------

def _generic_4x4(prefix: str) -> Tuple[Mat, List[Symbol]]:
    syms = [ensure_symbol(f"{prefix}{i}{j}") for i in range(4) for j in range(4)]
    return Mat(4, 4, {(i, j): Scalar.sym(syms[4 * i + j]) for i in range(4) for j in range(4)}), syms


def _intertwiner_system():
    A, sa = _generic_4x4("iwA")
    B, sb = _generic_4x4("iwB")
    eqs = []
    for mu in range(4):
        r = A * GAMMA[mu] - GAMMA[mu] * B
        eqs.extend(r.data[k] for k in sorted(r.data))
    return A, B, sa + sb, eqs


def solve_intertwiner_constraint() -> Tuple[SolutionSpace, Mat, Mat]:
    """Solve Aγ^μ = γ^μB for all μ over generic complex 4×4 A, B.

    Returns the solution space and the solved A, B in its parameters.
    """
    A, B, unknowns, eqs = _intertwiner_system()
    sol = solve_linear_in_symbols(eqs, unknowns, reality=False)
    return sol, sol.apply_mat(A), sol.apply_mat(B)


def intertwiner_rank() -> int:
    """Rank of the stacked 64×32 linear system behind the intertwiner solve."""
    _, _, unknowns, eqs = _intertwiner_system()
    sol = solve_linear_in_symbols(eqs, unknowns, reality=False)
    return len(unknowns) - sol.dimension


# -- charge conjugation --------------------------------------------------------------

def charge_conjugation(phase: Scalar | int | None = None) -> AntilinearOp:
    """𝒥 = M∘conj with 𝒥 ∂̸ 𝒥⁻¹ = ∂̸.

    M solves M γ̄^μ = -γ^μ M; the solution is unique up to a scalar.  The
    representative with entries in {0, ±1, ±i} is normalised so that its
    first nonzero entry (row-major) equals 1, then multiplied by ``phase``.
    The default phase -i gives 𝒥 = iγ⁰γ²∘conj.  Sign relations and
    fluctuations do not see the phase; fermionic kernels pick it up as an
    overall factor.
    """
    if phase is None:
        phase = -I
    Ms, syms = _generic_4x4("ccM")
    eqs = []
    for mu in range(4):
        r = Ms * GAMMA[mu].conj() + GAMMA[mu] * Ms
        eqs.extend(r.data[k] for k in sorted(r.data))
    sol = solve_linear_in_symbols(eqs, syms, reality=False)
    if sol.dimension != 1:
        raise ArithmeticError("charge conjugation is not unique up to phase")
    M = sol.apply_mat(Ms).subs({sol.params[0]: ONE})
    lead = M.data[min(M.data)]
    M = M.scale(lead.inverse_const()).scale(phase)
    J = AntilinearOp(M)
    if not J.is_antiunitary():
        raise ArithmeticError("charge conjugation matrix is not unitary")
    return J
