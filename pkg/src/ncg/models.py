"""Catalog of concrete triples and twists.

Spinor indices are outermost everywhere: a product state is labelled
(s, ṡ, finite indices...).  The internal space of the Standard Model uses
(C, I, α) with C = 0 particles / 1 antiparticles, I = 0 leptons / 1..3
quark colours, α ∈ (1̇, 2̇, 1, 2) for right (ν_R, e_R) and left (ν_L, e_L).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .clifford import GAMMA, OperatorExpr, dirac_free
from .linalg import AntilinearOp, Mat, solve_linear_in_symbols
from .scalars import I as IMAG, Scalar, ensure_symbol
from .triples import (SPIN, AlgebraSpec, Factor, IndexScheme, RealSpectralTriple, Representation,
                      manifold_triple, operator_entries, product_triple)
from .twists import Automorphism, TwistedTriple, minimal_twist, twist_by_grading

__all__ = [
    "ModelDescriptor",
    "MODELS",
    "UnknownModel",
    "build",
    "describe",
    "list_models",
    "sm_finite",
    "sm_triple",
    "grand_triple",
    "bprime_twist",
    "btilde_twist",
    "bsub",
    "doubled_finite",
    "ed_finite",
    "rename_factors",
    "dirac_parts",
    "grading_break",
    "FactorBlock",
    "hr_basis",
    "hplus_basis",
    "field_basis",
    "field_symbols",
    "finite_outer_permutation",
    "finite_outer",
    "generations",
    "sm_parts",
    "sm_scheme",
    "sm_twist",
    "manifold_twist",
    "doubled_manifold",
    "ed_model",
    "GRAND_SCHEME",
]

Model = Union[RealSpectralTriple, TwistedTriple]


class UnknownModel(KeyError):
    pass


def generations(default: int = 1) -> int:
    v = os.environ.get("NCG_GENERATIONS")
    return int(v) if v else default


# -- Standard Model internal triple ------------------------------------------------------

ALPHA = ("1̇", "2̇", "1", "2")
RIGHT, LEFT = ("1̇", "2̇"), ("1", "2")


def sm_scheme(n_gen: int = 1) -> IndexScheme:
    slots = [("C", ("0", "1"))]
    if n_gen > 1:
        slots.append(("n", tuple(str(k) for k in range(n_gen))))
    slots += [("I", ("0", "1", "2", "3")), ("α", ALPHA)]
    return IndexScheme(tuple(slots))


def _sm_flat(S: IndexScheme, n_gen: int, **idx) -> int:
    if n_gen == 1:
        idx.pop("n", None)
    return S.flat(**idx)


def _yukawa(name: str, n_gen: int, i: int, j: int) -> Scalar:
    if n_gen == 1:
        return Scalar.sym(ensure_symbol(name, "complex"))
    return Scalar.sym(ensure_symbol(f"{name}{i + 1}{j + 1}", "complex"))


def _majorana(n_gen: int, i: int, j: int) -> Scalar:
    if n_gen == 1:
        return Scalar.sym(ensure_symbol("kR", "real"))
    a, b = sorted((i, j))
    return Scalar.sym(ensure_symbol(f"kR{a + 1}{b + 1}", "complex"))


def sm_finite(n_gen: int = 1, yukawa: bool = True, majorana: bool = True) -> RealSpectralTriple:
    """(ℂ ⊕ ℍ ⊕ M₃(ℂ), ℂ^{32N}, D_Y + D_M) with Γ_F and J_F."""
    S = sm_scheme(n_gen)
    n = S.dim
    gens = range(n_gen)
    f = lambda **k: _sm_flat(S, n_gen, **k)
    A = AlgebraSpec.of(Factor("λ", "C"), Factor("q", "H"), Factor("m", "M", 3))
    rep = Representation(n)
    for g in gens:
        for I in range(4):
            rep.place("λ", [f(C=0, n=g, I=I, α="1̇")])
            rep.place("λ", [f(C=0, n=g, I=I, α="2̇")], conj=True)
            rep.place("q", [f(C=0, n=g, I=I, α=a) for a in LEFT])
        for a in ALPHA:
            rep.place("λ", [f(C=1, n=g, I=0, α=a)])
            rep.place("m", [f(C=1, n=g, I=I, α=a) for I in (1, 2, 3)])
    D: Dict[Tuple[int, int], Scalar] = {}

    def put(i, j, v):
        D[(i, j)] = D[(i, j)] + v if (i, j) in D else v

    if yukawa:
        for g in gens:
            for h in gens:
                for I in range(4):
                    up, down = ("yν", "ye") if I == 0 else ("yu", "yd")
                    for L, R, y in (("1", "1̇", up), ("2", "2̇", down)):
                        v = _yukawa(y, n_gen, g, h)
                        l0, r0 = f(C=0, n=g, I=I, α=L), f(C=0, n=h, I=I, α=R)
                        put(l0, r0, v)
                        put(r0, l0, v.conj())
                        l1, r1 = f(C=1, n=g, I=I, α=L), f(C=1, n=h, I=I, α=R)
                        put(l1, r1, v.conj())
                        put(r1, l1, v)
    if majorana:
        for g in gens:
            for h in gens:
                k = _majorana(n_gen, g, h)
                p, a = f(C=0, n=h, I=0, α="1̇"), f(C=1, n=g, I=0, α="1̇")
                put(a, p, k)
                put(p, a, k.conj())
    DF = OperatorExpr.const(Mat(n, n, D))
    gdiag = []
    for k in range(n):
        u = S.unflat(k)
        left = u["α"] in LEFT
        gdiag.append(1 if (u["C"] == "0") == left else -1)
    G = Mat.diag(gdiag)
    half = n // 2
    Jm = Mat.blocks([[Mat.zeros(half), Mat.identity(half)], [Mat.identity(half), Mat.zeros(half)]])
    notes = {"H_F": f"ℂ^{n} ({n_gen} generation{'s' if n_gen > 1 else ''}, 32 per generation)"}
    return RealSpectralTriple("sm-finite", A, rep, DF, AntilinearOp(Jm), G, S, notes)


def sm_triple(n_gen: int = 1) -> RealSpectralTriple:
    T = product_triple(manifold_triple(), sm_finite(n_gen), "sm")
    T.notes["H_F"] = f"ℂ^{32 * n_gen}"
    return T


def _finite_part(T: RealSpectralTriple, DF: Mat) -> OperatorExpr:
    return OperatorExpr.const(GAMMA.gamma5.kron(DF))


def sm_parts(n_gen: int = 1) -> Dict[str, OperatorExpr]:
    n = 32 * n_gen
    return {
        "free": dirac_free().tensor(Mat.identity(n)),
        "yukawa": OperatorExpr.const(GAMMA.gamma5.kron(sm_finite(n_gen, True, False).D.bounded_part())),
        "majorana": OperatorExpr.const(GAMMA.gamma5.kron(sm_finite(n_gen, False, True).D.bounded_part())),
    }


# -- grand algebra --------------------------------------------------------------------------

GRAND_SCHEME = IndexScheme(SPIN.slots + sm_scheme(1).slots)


def grand_triple(chiral: bool = False) -> RealSpectralTriple:
    """C∞(M) ⊗ (M₄(ℍ) ⊕ M₈(ℂ)) on L²(M,S) ⊗ ℂ³².

    Q acts on (ṡ, α) of the particles (on (s, α) in the chiral variant),
    M on (s, I) of the antiparticles; both are trivial on the other indices.
    """
    S = GRAND_SCHEME
    A = AlgebraSpec.of(Factor("Q", "MH", 4, germ=True), Factor("M", "M", 8, germ=True))
    rep = Representation(S.dim)
    dots = ("0̇", "1̇")
    sides = ("l", "r")
    if chiral:
        for sd in dots:
            for I in range(4):
                rep.place("Q", [S.flat(s=s, ṡ=sd, C=0, I=I, α=a) for s in sides for a in ALPHA])
    else:
        for s in sides:
            for I in range(4):
                rep.place("Q", [S.flat(s=s, ṡ=sd, C=0, I=I, α=a) for sd in dots for a in ALPHA])
    for sd in dots:
        for a in ALPHA:
            rep.place("M", [S.flat(s=s, ṡ=sd, C=1, I=I, α=a) for s in sides for I in range(4)])
    base = sm_triple(1)
    return RealSpectralTriple("grand-chiral" if chiral else "grand", A, rep, base.D, base.J, base.gamma, S,
                              {"dof": "4 × 32 = 128"})


# -- 𝓑′ and 𝓑̃ ----------------------------------------------------------------------------------

def _twisted_sm_like(name: str, A: AlgebraSpec, rep: Representation, rho: Automorphism,
                     D: Optional[OperatorExpr] = None) -> TwistedTriple:
    base = sm_triple(1)
    T = RealSpectralTriple(name, A, rep, base.D if D is None else D, base.J, base.gamma, GRAND_SCHEME)
    R = GAMMA[0].kron(Mat.identity(32))
    tt = TwistedTriple(T, rho, None, GAMMA.gamma5.kron(Mat.identity(32)))
    a = A.generic("a")
    if R * tt.pi(a) * R.adjoint() == tt.pi(rho(a)):
        tt.R = R
    return tt


def bprime_twist() -> TwistedTriple:
    """ℍ_L^l ⊕ ℍ_L^r ⊕ ℍ_R^l ⊕ ℍ_R^r ⊕ M₄(ℂ) with the chiral flip, D = ∂̸ ⊗ I."""
    S = GRAND_SCHEME
    A = AlgebraSpec.of(*(Factor(n, "H", germ=True) for n in ("qLl", "qLr", "qRl", "qRr")),
                       Factor("m", "M", 4, germ=True))
    rep = Representation(S.dim)
    for s in ("l", "r"):
        for sd in ("0̇", "1̇"):
            for I in range(4):
                rep.place(f"qL{s}", [S.flat(s=s, ṡ=sd, C=0, I=I, α=a) for a in LEFT])
                rep.place(f"qR{s}", [S.flat(s=s, ṡ=sd, C=0, I=I, α=a) for a in RIGHT])
            for a in ALPHA:
                rep.place("m", [S.flat(s=s, ṡ=sd, C=1, I=I, α=a) for I in range(4)])
    rho = Automorphism.flip([("qLl", "qLr"), ("qRl", "qRr")], ["m"])
    return _twisted_sm_like("bprime", A, rep, rho, dirac_free().tensor(Mat.identity(32)))


def btilde_twist() -> TwistedTriple:
    """ℍ_L^l ⊕ ℍ_L^r ⊕ ℂ_R^l ⊕ ℂ_R^r ⊕ (ℂ ⊕ M₃(ℂ)), D = ∂̸ ⊗ I + γ⁵ ⊗ D_F."""
    S = GRAND_SCHEME
    A = AlgebraSpec.of(Factor("qLl", "H", germ=True), Factor("qLr", "H", germ=True),
                       Factor("cRl", "C", germ=True), Factor("cRr", "C", germ=True),
                       Factor("c", "C", germ=True), Factor("m", "M", 3, germ=True))
    rep = Representation(S.dim)
    for s in ("l", "r"):
        for sd in ("0̇", "1̇"):
            for I in range(4):
                rep.place(f"qL{s}", [S.flat(s=s, ṡ=sd, C=0, I=I, α=a) for a in LEFT])
                rep.place(f"cR{s}", [S.flat(s=s, ṡ=sd, C=0, I=I, α="1̇")])
                rep.place(f"cR{s}", [S.flat(s=s, ṡ=sd, C=0, I=I, α="2̇")], conj=True)
            for a in ALPHA:
                rep.place("c", [S.flat(s=s, ṡ=sd, C=1, I=0, α=a)])
                rep.place("m", [S.flat(s=s, ṡ=sd, C=1, I=I, α=a) for I in (1, 2, 3)])
    rho = Automorphism.flip([("qLl", "qLr"), ("cRl", "cRr")], ["c", "m"])
    return _twisted_sm_like("btilde", A, rep, rho)


def bsub() -> Tuple[AlgebraSpec, Callable]:
    """𝓑 ⊂ 𝓑̃ via ℂ = ℂ_R^l: returns (𝓑, embedding into 𝓑̃ elements)."""
    B = AlgebraSpec.of(Factor("qLl", "H", germ=True), Factor("qLr", "H", germ=True),
                       Factor("cRl", "C", germ=True), Factor("cRr", "C", germ=True),
                       Factor("m", "M", 3, germ=True))

    def embed(b):
        out = dict(b)
        out["c"] = b["cRl"]
        return out

    return B, embed


# -- doubled manifold and electrodynamics ---------------------------------------------------

def doubled_finite() -> RealSpectralTriple:
    """(ℂ², ℂ², 0) with Γ_F = diag(1, -1) and J_F exchanging e and ē."""
    A = AlgebraSpec.of(Factor("f", "C"), Factor("g", "C"))
    rep = Representation(2).place("f", [0]).place("g", [1])
    J = AntilinearOp(Mat.from_rows([[0, 1], [1, 0]]))
    S = IndexScheme((("e", ("e", "ē")),))
    return RealSpectralTriple("doubled-finite", A, rep, OperatorExpr.zero(2), J, Mat.diag([1, -1]), S)


def ed_finite() -> RealSpectralTriple:
    """Electrodynamics: ℂ² on ℂ⁴ = span(e_l, e_r, ē_l, ē_r) with mass coupling d."""
    d = Scalar.sym(ensure_symbol("d", "complex"))
    db = d.conj()
    Z = Scalar.const(0)
    DF = Mat.from_rows([[Z, d, Z, Z], [db, Z, Z, Z], [Z, Z, Z, db], [Z, Z, d, Z]])
    A = AlgebraSpec.of(Factor("f", "C"), Factor("g", "C"))
    rep = Representation(4).place("f", [0]).place("f", [1]).place("g", [2]).place("g", [3])
    J = AntilinearOp(Mat.blocks([[Mat.zeros(2), Mat.identity(2)], [Mat.identity(2), Mat.zeros(2)]]))
    S = IndexScheme((("e", ("e_l", "e_r", "ē_l", "ē_r")),))
    return RealSpectralTriple("ed-finite", A, rep, OperatorExpr.const(DF), J, Mat.diag([1, -1, -1, 1]), S)


def rename_factors(T: TwistedTriple, mapping: Dict[str, str]) -> TwistedTriple:
    A = AlgebraSpec(tuple(Factor(mapping.get(f.name, f.name), f.kind, f.n, f.germ) for f in T.algebra.factors))
    rep = T.base.rep.rename(mapping)
    rho = Automorphism.from_dict({mapping.get(k, k): mapping.get(v, v) for k, v in T.rho.as_dict().items()})
    b = T.base
    base = RealSpectralTriple(b.name, A, rep, b.D, b.J, b.gamma, b.scheme, dict(b.notes))
    return TwistedTriple(base, rho, T.R, T.twisting_operator, dict(T.notes))


def manifold_twist() -> TwistedTriple:
    T = minimal_twist(manifold_triple(), GAMMA.gamma5, name="manifold-twist")
    return rename_factors(T, {"f'": "g"})


def doubled_manifold() -> TwistedTriple:
    return twist_by_grading(product_triple(manifold_triple(), doubled_finite(), "doubled-manifold"),
                            name="doubled-manifold")


def ed_model() -> TwistedTriple:
    return twist_by_grading(product_triple(manifold_triple(), ed_finite(), "ed"), name="ed")


def sm_twist(n_gen: int = 1) -> TwistedTriple:
    return twist_by_grading(sm_triple(n_gen), name="sm-twist")


def finite_outer_permutation(n_finite: int, n_spin: int = 4) -> List[int]:
    """perm[k] = spinor-outer index of finite-outer position k."""
    return [s * n_finite + f for f in range(n_finite) for s in range(n_spin)]


def finite_outer(M: Mat, n_finite: int) -> Mat:
    """Reorder a spinor-outer matrix to finite-outer index order."""
    perm = finite_outer_permutation(n_finite, M.rows // n_finite)
    return M.submatrix(perm, perm)


# -- subspaces ---------------------------------------------------------------------------------

def hr_basis(n_finite: int) -> List[Mat]:
    """Unnormalised basis of the +1 eigenspace of γ⁰ ⊗ I: ξ = (ζ; ζ) ⊗ e_k.

    Ordered by finite index, then Weyl component.
    """
    n = 4 * n_finite
    out = []
    for k in range(n_finite):
        for w in range(2):
            v = Mat.zeros(n, 1)
            v = v + Mat.unit(n, 1, w * n_finite + k, 0) + Mat.unit(n, 1, (2 + w) * n_finite + k, 0)
            out.append(v)
    return out


def hplus_basis(gamma: Mat) -> List[Mat]:
    """Standard basis vectors of the +1 eigenspace of a diagonal grading."""
    n = gamma.rows
    out = []
    for k in range(n):
        if gamma[k, k] == Scalar.const(1):
            out.append(Mat.unit(n, 1, k, 0))
    return out


# -- named fluctuation fields ------------------------------------------------------------------

def field_symbols(letter: str) -> List:
    return [ensure_symbol(f"{letter}_{mu}", "real", True) for mu in range(4)]


def field_basis(name: str) -> List[Tuple[object, Mat]]:
    """Named real fields of the selfadjoint twisted fluctuations.

    f_μ multiplies -iγ⁵γ^μ (the field X_μ = f_μγ⁵) and g_μ multiplies γ^μ
    times the finite grading-like matrix of the model.
    """
    x5 = [GAMMA.gamma5.scale(-IMAG) * GAMMA[mu] for mu in range(4)]
    f, g = field_symbols("f"), field_symbols("g")
    if name == "manifold-twist":
        return [(f[mu], x5[mu]) for mu in range(4)]
    if name == "doubled-manifold":
        G = Mat.diag([1, -1])
        return ([(f[mu], x5[mu].kron(Mat.identity(2))) for mu in range(4)]
                + [(g[mu], GAMMA[mu].kron(G)) for mu in range(4)])
    if name == "ed":
        Ip, Ipp = Mat.diag([1, -1, 1, -1]), Mat.diag([1, 1, -1, -1])
        return [(f[mu], x5[mu].kron(Ip)) for mu in range(4)] + [(g[mu], GAMMA[mu].kron(Ipp)) for mu in range(4)]
    raise UnknownModel(f"no named fields for {name!r}")


# -- Dirac operator parts ----------------------------------------------------------------------

def dirac_parts(name: str, model: Model) -> Dict[str, OperatorExpr]:
    """Named pieces of D: "free" (∂̸ ⊗ I) plus the finite pieces; "all" is D."""
    n = model.dim // 4
    out = {"free": dirac_free().tensor(Mat.identity(n))}
    if model.dim % 128 == 0 and name not in ("bprime",):
        out.update({k: v for k, v in sm_parts(n // 32).items() if k != "free"})
    elif name == "ed":
        out["finite"] = OperatorExpr.const(GAMMA.gamma5.kron(ed_finite().D.bounded_part()))
    out["all"] = model.D
    return out


# -- grading breaking ---------------------------------------------------------------------------

@dataclass
class FactorBlock:
    name: str
    kind: str
    n: int
    copies: int
    support: List[int]

    def label(self) -> str:
        return Factor(self.name, self.kind, self.n).label()

    def to_json(self) -> dict:
        return {"name": self.name, "algebra": self.label(), "copies": self.copies, "support": self.support}


def _components(X: Mat) -> List[List[int]]:
    n = X.rows
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for (i, j), v in X.data.items():
        if not v.is_zero():
            parent[find(i)] = find(j)
    groups: Dict[int, List[int]] = {}
    for i in range(n):
        if any(not X[i, j].is_zero() for j in range(n)):
            groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _base_uids(X: Mat) -> frozenset:
    from .scalars import TABLE
    out = set()
    for s in X.symbols():
        p = TABLE.partner(s)
        out.add(min(s.uid, p.uid))
    return frozenset(out)


def _classify(k: int, ncomplex: int) -> Tuple[str, int]:
    real = 2 * ncomplex
    if real == 2 * k * k:
        return ("C", 1) if k == 1 else ("M", k)
    if k % 2 == 0 and real == k * k:
        return ("H", 1) if k == 2 else ("MH", k // 2)
    raise ValueError(f"block of size {k} with {real} real parameters is not a matrix algebra")


def _grand_namer(S: IndexScheme, support: Sequence[int]) -> str:
    vals = [S.unflat(k) for k in support]
    C = {v["C"] for v in vals}
    if C == {"0"}:
        pairs = sorted({("L" if v["α"] in LEFT else "R", v["s"]) for v in vals})
        chis = {p[0] for p in pairs}
        sides = {p[1] for p in pairs}
        if len(chis) == 1 and len(sides) == 1:
            return f"{pairs[0][0]}^{pairs[0][1]}"
        if len(chis) == 1:
            return pairs[0][0]
        return "⊕".join(f"{c}^{s}" for c, s in pairs)
    sides = sorted({v["s"] for v in vals})
    return sides[0] if len(sides) == 1 else "+".join(sides)


def grading_break(model: RealSpectralTriple, mode: str = "grading") -> Tuple[AlgebraSpec, List[FactorBlock]]:
    """Subalgebra of generic elements commuting with Γ, and its factor structure.

    mode "grading" imposes [Γ, π(a)] = 0; mode "split" imposes commutation
    with γ⁵ ⊗ I and I ⊗ Γ_F separately.
    """
    G = model.gamma
    if G is None:
        raise ValueError("grading_break needs a graded model")
    gens = [G]
    if mode == "split":
        g5 = GAMMA.gamma5.kron(Mat.identity(model.dim // 4))
        gens = [g5, g5 * G]
    elif mode != "grading":
        raise ValueError(f"unknown mode {mode!r}")
    pa = model.generic("a")
    unknowns = sorted(pa.symbols(), key=lambda s: s.uid)
    eqs: List[Scalar] = []
    for g in gens:
        eqs += operator_entries(g.commutator(pa))
    sol = solve_linear_in_symbols(eqs, unknowns, reality=False)
    X = sol.apply_mat(pa)
    comps = _components(X)
    by_syms: Dict[frozenset, List[List[int]]] = {}
    for c in comps:
        by_syms.setdefault(_base_uids(X.submatrix(c, c)), []).append(c)
    S = model.scheme
    blocks: List[FactorBlock] = []
    used = set()
    for syms, cs in sorted(by_syms.items(), key=lambda kv: kv[1][0][0]):
        kind, n = _classify(len(cs[0]), len(syms))
        support = sorted(i for c in cs for i in c)
        name = _grand_namer(S, support) if S is not None and "C" in dict(S.slots) else f"b{len(blocks)}"
        while name in used:
            name += "'"
        used.add(name)
        blocks.append(FactorBlock(name, kind, n, len(cs), support))
    blocks.sort(key=lambda b: b.name)
    A = AlgebraSpec(tuple(Factor(b.name, b.kind, b.n, True) for b in blocks))
    return A, blocks


# -- catalog ---------------------------------------------------------------------------------------

def _load_catalog() -> Dict[str, dict]:
    import json
    from importlib import resources
    with resources.files("ncg.data").joinpath("catalog.json").open(encoding="utf-8") as fh:
        return json.load(fh)


@dataclass
class ModelDescriptor:
    name: str
    title: str
    builder: Callable[[int], Model]
    twisted: bool
    refs: List[str] = field(default_factory=list)
    blocks: Dict[str, str] = field(default_factory=dict)
    expected: Dict[Tuple[str, str], str] = field(default_factory=dict)

    def expected_status(self, part: str, check: str) -> str:
        for key in ((part, check), ("*", check)):
            if key in self.expected:
                return self.expected[key]
        return "PASS"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "title": self.title,
            "twisted": self.twisted,
            "references": self.refs,
            "blocks": self.blocks,
            "expected": {f"{p}:{c}": s for (p, c), s in sorted(self.expected.items())},
        }


_GRAND_EXPECTED = {
    ("free", "bounded commutators"): "FAIL",
    ("all", "bounded commutators"): "FAIL",
    ("*", "grading commutes with algebra"): "CONSTRAINED",
    ("free", "first order"): "CONSTRAINED",
    ("yukawa", "first order"): "CONSTRAINED",
    ("majorana", "first order"): "CONSTRAINED",
    ("all", "first order"): "CONSTRAINED",
}

_BUILDERS: Dict[str, Tuple[Callable[[int], Model], bool, Dict]] = {
    "sm": (sm_triple, False, {}),
    "sm-twist": (sm_twist, True, {}),
    "grand": (lambda n: grand_triple(False), False, _GRAND_EXPECTED),
    "grand-chiral": (lambda n: grand_triple(True), False, {**_GRAND_EXPECTED, ("*", "order zero"): "CONSTRAINED"}),
    "bprime": (lambda n: bprime_twist(), True, {}),
    "btilde": (lambda n: btilde_twist(), True, {
        ("majorana", "twisted first order"): "CONSTRAINED",
        ("all", "twisted first order"): "CONSTRAINED",
    }),
    "manifold": (lambda n: manifold_triple(), False, {}),
    "manifold-twist": (lambda n: manifold_twist(), True, {}),
    "doubled-manifold": (lambda n: doubled_manifold(), True, {}),
    "ed": (lambda n: ed_model(), True, {}),
}


def _descriptors() -> Dict[str, ModelDescriptor]:
    cat = _load_catalog()
    out = {}
    for name, (fn, tw, exp) in _BUILDERS.items():
        c = cat.get(name, {})
        out[name] = ModelDescriptor(name, c.get("title", name), fn, tw, list(c.get("references", [])),
                                    dict(c.get("blocks", {})), dict(exp))
    return out


MODELS: Dict[str, ModelDescriptor] = _descriptors()


def list_models() -> List[ModelDescriptor]:
    return [MODELS[k] for k in sorted(MODELS)]


def describe(name: str) -> ModelDescriptor:
    try:
        return MODELS[name]
    except KeyError:
        raise UnknownModel(name) from None


def build(name: str, n_gen: Optional[int] = None) -> Model:
    describe(name)
    return _build(name, generations() if n_gen is None else n_gen)


@lru_cache(maxsize=None)
def _build(name: str, n_gen: int) -> Model:
    return MODELS[name].builder(n_gen)
