"""Fermionic action kernels and Lagrangian templates.

The fermionic action ⟨Jξ, R D ξ⟩ is bilinear in ξ: with J = M∘conj it reads
ξᵀ (M† R D) ξ.  Restricted to a subspace with basis B, its kernel is
K = Bᵀ M† R D B, a matrix of differential operators acting to the right.
Grassmann variables are not modelled: the action only sees the
antisymmetric part (K - Kᵀ)/2, where transposition uses ∂ᵀ = -∂.

Lagrangians are compared through kernels.  Group the subspace coordinates
into named spinors X_A.  A diagonal slot (A, A) contributes X_Aᵀ Kᵃ[A, A] X_A;
an off-diagonal pair contributes X_Aᵀ Kᵃ[A, B] X_B + X_Bᵀ Kᵃ[B, A] X_A, which
is 2 X_Aᵀ Kᵃ[A, B] X_B for anticommuting variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .clifford import PAULI, OperatorExpr
from .linalg import Mat
from .scalars import HALF, I, ZERO, Scalar, Symbol, ensure_symbol

__all__ = [
    "KernelMatrix",
    "fermionic_kernel",
    "antisymmetrize",
    "plane_wave_substitute",
    "LagrangianTemplate",
    "weyl_template",
    "weyl_right_template",
    "dirac_template",
    "TEMPLATES",
    "Identification",
    "MatchResult",
    "match_template",
    "pair_kernel",
    "ActionSetup",
    "standard_action",
]


def _stack(basis: Sequence[Mat]) -> Mat:
    n = basis[0].rows
    return Mat(n, len(basis), {(i, c): v for c, b in enumerate(basis) for (i, _), v in b.data.items()})


def antisymmetrize(K: OperatorExpr) -> OperatorExpr:
    return (K - K.transpose()).scale(HALF)


@dataclass
class KernelMatrix:
    """Kernel of a bilinear form on a subspace, with named spinor slots."""

    K: OperatorExpr
    slots: List[Tuple[str, List[int]]] = field(default_factory=list)

    @property
    def antisymmetric(self) -> OperatorExpr:
        return antisymmetrize(self.K)

    def is_antisymmetric(self) -> bool:
        return (self.K + self.K.transpose()).is_zero()

    def block(self, a: str, b: str, antisym: bool = True) -> OperatorExpr:
        src = self.antisymmetric if antisym else self.K
        ra, rb = dict(self.slots)[a], dict(self.slots)[b]
        if len(ra) != len(rb):
            raise ValueError("kernel blocks must be square")
        return OperatorExpr(len(ra), {al: m.submatrix(ra, rb) for al, m in src.terms.items()})

    def subs(self, bindings: Mapping[Symbol, Scalar]) -> "KernelMatrix":
        return KernelMatrix(self.K.subs(bindings), list(self.slots))

    def to_json(self) -> dict:
        return {"slots": [[n, idx] for n, idx in self.slots], "kernel": self.K.to_json()}


def fermionic_kernel(T, D_op: OperatorExpr, basis: Sequence[Mat], slots=None,
                     twisted: Optional[bool] = None) -> KernelMatrix:
    """K = Bᵀ M† [R] D B for J = M∘conj; R is used when the triple has one."""
    if not basis:
        raise ValueError("empty subspace")
    B = _stack(basis)
    R = getattr(T, "R", None)
    if twisted is None:
        twisted = R is not None
    if twisted and R is None:
        raise ValueError("twisted kernel needs the unitary R")
    X = T.J.matrix.adjoint()
    if twisted:
        X = X * R
    Bt = B.transpose()
    K = OperatorExpr(len(basis), {al: Bt * X * m * B for al, m in D_op.terms.items()})
    if slots is None:
        slots = [(f"x{k}", [k]) for k in range(len(basis))]
    return KernelMatrix(K, list(slots))


def plane_wave_substitute(K: Union[KernelMatrix, OperatorExpr], energy: Symbol) -> Union[KernelMatrix, OperatorExpr]:
    """∂₀ → i·energy on a kernel of degree at most one in ∂₀."""
    O = K.K if isinstance(K, KernelMatrix) else K
    for alpha in O.terms:
        if alpha.count(0) > 1:
            raise ValueError("plane-wave substitution needs degree ≤ 1 in ∂₀")
    out = O.substitute_partial(0, I * Scalar.sym(energy))
    return KernelMatrix(out, list(K.slots)) if isinstance(K, KernelMatrix) else out


# -- templates -------------------------------------------------------------------------

@dataclass
class LagrangianTemplate:
    """ψ† T ψ with T a fixed operator-valued matrix on named Weyl slots."""

    name: str
    slots: List[str]
    kernel: OperatorExpr
    derived: bool = False
    description: str = ""

    def slot_index(self, name: str) -> List[int]:
        k = self.slots.index(name)
        return [2 * k, 2 * k + 1]

    def planewave(self, energy: Symbol) -> "LagrangianTemplate":
        return LagrangianTemplate(self.name, list(self.slots), plane_wave_substitute(self.kernel, energy),
                                  self.derived, self.description)

    def subs(self, bindings: Mapping[Symbol, Scalar]) -> "LagrangianTemplate":
        return LagrangianTemplate(self.name, list(self.slots), self.kernel.subs(bindings), self.derived,
                                  self.description)


def _sigma_tilde(sign: int) -> List[Mat]:
    """(I, sign·σ_j)."""
    return [Mat.identity(2)] + [PAULI[j].scale(sign) for j in (1, 2, 3)]


def _weyl_block(sign: int, gauge: Optional[Sequence[Symbol]] = None, charge: int = 1) -> OperatorExpr:
    """i σ̃^μ 𝒟_μ with 𝒟_μ = ∂_μ - i·charge·g_μ."""
    st = _sigma_tilde(sign)
    out = OperatorExpr.zero(2)
    for mu in range(4):
        term = OperatorExpr.partial(mu, 2)
        if gauge is not None:
            term = term - OperatorExpr.const(Mat.identity(2).scale(I * Scalar.sym(gauge[mu]) * charge))
        out = out + OperatorExpr.const(st[mu].scale(I)) * term
    return out


def weyl_template() -> LagrangianTemplate:
    return LagrangianTemplate("weyl", ["ψ_l"], _weyl_block(-1), False, "i ψ_l† σ̃^μ ∂_μ ψ_l, σ̃ = (I, -σ_j)")


def weyl_right_template() -> LagrangianTemplate:
    return LagrangianTemplate("weyl-right", ["ψ_r"], _weyl_block(+1), True, "i ψ_r† σ^μ ∂_μ ψ_r, σ = (I, σ_j)")


def dirac_template(mass: Symbol, gauge: Sequence[Symbol], charge: int = 1) -> LagrangianTemplate:
    """i ψ_l† σ̃^μ 𝒟_μ ψ_l + i ψ_r† σ^μ 𝒟_μ ψ_r - m (ψ_l† ψ_r + ψ_r† ψ_l).

    𝒟_μ = ∂_μ - i·charge·g_μ.  The sign of the charge is a convention: the
    fluctuation D + g_μγ^μ couples as charge -1 in this gamma basis.
    """
    m = Mat.identity(2).scale(-Scalar.sym(mass))
    Z = Mat.zeros(2)
    L, Rb = _weyl_block(-1, gauge, charge), _weyl_block(+1, gauge, charge)
    terms: Dict[Tuple, Mat] = {}
    for al in set(L.terms) | set(Rb.terms):
        a = L.terms.get(al, Z)
        b = Rb.terms.get(al, Z)
        if al == ():
            terms[al] = Mat.blocks([[a, m], [m, b]])
        else:
            terms[al] = Mat.blocks([[a, Z], [Z, b]])
    return LagrangianTemplate("dirac", ["ψ_l", "ψ_r"], OperatorExpr(4, terms), False,
                              "Dirac Lagrangian in Minkowski signature with mass m and potential g_μ")


TEMPLATES = {"weyl": weyl_template, "weyl-right": weyl_right_template}


# -- matching ------------------------------------------------------------------------

@dataclass
class Identification:
    """Physical spinors in terms of subspace spinors.

    ``right[ψ] = (X, C)`` means ψ = C·X; ``left[ψ] = (X, C)`` means
    ψ† = Xᵀ·C.
    """

    left: Dict[str, Tuple[str, Mat]]
    right: Dict[str, Tuple[str, Mat]]
    specialize: Dict[Symbol, Scalar] = field(default_factory=dict)

    def variables(self) -> Tuple[set, set]:
        return {x for x, _ in self.left.values()}, {x for x, _ in self.right.values()}


@dataclass
class MatchResult:
    matched: bool
    residual: OperatorExpr
    reason: str = ""

    def to_json(self) -> dict:
        return {"matched": self.matched, "reason": self.reason, "residual": self.residual.to_json()}


def pair_kernel(K: KernelMatrix, a: str, b: str) -> OperatorExpr:
    """Coefficient of X_aᵀ(...)X_b in the action: Kᵃ[a, a] or 2Kᵃ[a, b]."""
    blk = K.block(a, b)
    return blk if a == b else blk.scale(Scalar.const(2))


def _embed(O: OperatorExpr, n: int, rows: Sequence[int], cols: Sequence[int]) -> OperatorExpr:
    terms = {}
    for al, m in O.terms.items():
        terms[al] = Mat(n, n, {(rows[i], cols[j]): v for (i, j), v in m.data.items()})
    return OperatorExpr(n, terms)


def _mat_inverse(C: Mat) -> Mat:
    return C.inverse()


def match_template(K: KernelMatrix, template: LagrangianTemplate, ident: Identification,
                   prefactor=1) -> MatchResult:
    """Compare the action of K with prefactor × template after identification.

    With ψ = C_r X and ψ† = Xᵀ C_l, the term Xᵀ P X equals
    ψ† (C_l⁻¹ P C_r⁻¹) ψ; this is compared with the template block by block.
    """
    if set(ident.left) != set(template.slots) or set(ident.right) != set(template.slots):
        raise ValueError("identification does not cover the template slots")
    Kb = K.subs(ident.specialize) if ident.specialize else K
    n = 2 * len(template.slots)
    out = OperatorExpr.zero(n)
    for p in template.slots:
        xa, cl = ident.left[p]
        for q in template.slots:
            xb, cr = ident.right[q]
            P = pair_kernel(Kb, xa, xb)
            L, Rr = _mat_inverse(cl), _mat_inverse(cr)
            blk = OperatorExpr(2, {al: L * m * Rr for al, m in P.terms.items()})
            out = out + _embed(blk, n, template.slot_index(p), template.slot_index(q))
    target = template.kernel.scale(Scalar.coerce(prefactor))
    if ident.specialize:
        target = target.subs(ident.specialize)
    residual = out - target
    lv, rv = ident.variables()
    if lv & rv:
        return MatchResult(False, residual, "ψ and ψ† are built from the same subspace spinors")
    if not residual.is_zero():
        return MatchResult(False, residual, "kernel differs from the template")
    return MatchResult(True, residual, "")


# -- standard set-ups ------------------------------------------------------------------------

@dataclass
class ActionSetup:
    """A model's kernel together with the template it is compared against."""

    model: str
    kernel: KernelMatrix
    template: LagrangianTemplate
    ident: Identification
    prefactor: int
    expect_match: bool
    note: str = ""

    def run(self) -> MatchResult:
        return match_template(self.kernel, self.template, self.ident, self.prefactor)


def _fluctuated_dirac(name: str):
    from .fluctuations import selfadjoint_family
    from .models import build, field_basis
    T = build(name)
    fam = selfadjoint_family(T)
    return T, fam.express(field_basis(name))


def standard_action(name: str, planewave: Union[bool, str] = True) -> ActionSetup:
    """Kernel on H_r of the fluctuated operator, with the matching template.

    ``planewave`` names the energy E in ∂₀ → iE; True or "f0" picks the field
    component f_0, any other name a fresh real symbol.  False keeps ∂₀.
    """
    from .models import field_symbols, hr_basis
    if name not in ("manifold-twist", "doubled-manifold", "ed"):
        raise ValueError(f"no action set-up for {name!r}")
    f, g = field_symbols("f"), field_symbols("g")
    I2 = Mat.identity(2)
    s2 = PAULI[2]
    T, D = _fluctuated_dirac(name)
    if name == "manifold-twist":
        K = fermionic_kernel(T, D, hr_basis(1), [("ζ", [0, 1])])
        tmpl = weyl_template()
        ident = Identification({"ψ_l": ("ζ", I2)}, {"ψ_l": ("ζ", I2)})
        setup = ActionSetup(name, K, tmpl, ident, 2, False,
                            "one Weyl spinor: ψ and ψ† cannot both be built from ζ")
    elif name == "doubled-manifold":
        K = fermionic_kernel(T, D, hr_basis(2), [("ζ", [0, 1]), ("φ", [2, 3])])
        ident = Identification({"ψ_l": ("φ", s2.scale(-I))}, {"ψ_l": ("ζ", I2)}, {x: ZERO for x in g})
        setup = ActionSetup(name, K, weyl_template(), ident, 4, True, "g_μ = 0, ψ = ζ, ψ† = -i φᵀσ₂")
    elif name == "ed":
        slots = [("ζ1", [0, 1]), ("ζ2", [2, 3]), ("φ1", [4, 5]), ("φ2", [6, 7])]
        K = fermionic_kernel(T, D, hr_basis(4), slots)
        m = ensure_symbol("m", "real")
        d = ensure_symbol("d", "complex")
        md = I * Scalar.sym(m)
        spec = {d: -md, d.conj(): md, g[0]: ZERO}
        ident = Identification({"ψ_l": ("φ1", s2.scale(-I)), "ψ_r": ("φ2", s2.scale(I))},
                               {"ψ_l": ("ζ1", I2), "ψ_r": ("ζ2", I2)}, spec)
        setup = ActionSetup(name, K, dirac_template(m, g, charge=-1), ident, 4, True,
                            "d = -im, temporal gauge g_0 = 0; D + g_μγ^μ gives 𝒟_μ = ∂_μ + i g_μ")
    on_shell = planewave is True or planewave in ("f0", "f_0")
    if planewave:
        E = f[0] if on_shell else ensure_symbol(str(planewave), "real")
        setup.kernel = plane_wave_substitute(setup.kernel, E)
        setup.template = setup.template.planewave(E)
    if not on_shell and setup.expect_match:
        # the f_0 term only cancels against ∂₀ → i f_0
        setup.expect_match = False
        setup.note += "; energy differs from f_0, residual ∝ (E - f_0)"
    return setup
