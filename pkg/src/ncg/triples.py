"""Real (graded) spectral triples: algebras, representations and axiom checks.

Every checker evaluates an identity on *generic* algebra elements whose
entries are fresh symbols, and returns the polynomial equations on those
symbols under which the identity holds.  An empty :class:`ConstraintSet`
means the axiom holds for all elements.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .clifford import GAMMA, OperatorExpr, dirac_free, charge_conjugation, is_bounded
from .linalg import AntilinearOp, ConstraintSet, Mat, ShapeError
from .scalars import ONE, Scalar, ensure_symbol, parse_scalar

__all__ = [
    "Factor",
    "AlgebraSpec",
    "Representation",
    "IndexScheme",
    "RealSpectralTriple",
    "CheckResult",
    "TripleReport",
    "validate_triple",
    "check_order_zero",
    "check_first_order",
    "product_triple",
    "manifold_triple",
    "unitary_group_dim",
    "ko_dimension",
    "triple_from_config",
    "triple_to_config",
    "operator_entries",
]

Element = Dict[str, Mat]


# -- algebras ----------------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    """One summand: kind "C", "H", "M" (Mₙ(ℂ)) or "MH" (Mₙ(ℍ))."""

    name: str
    kind: str
    n: int = 1
    germ: bool = False

    def __post_init__(self):
        if self.kind not in ("C", "H", "M", "MH"):
            raise ValueError(f"unknown factor kind {self.kind!r}")

    @property
    def size(self) -> int:
        """Size of the complex matrix carrying the generic value."""
        return {"C": 1, "H": 2, "M": self.n, "MH": 2 * self.n}[self.kind]

    def label(self) -> str:
        return {"C": "ℂ", "H": "ℍ", "M": f"M{self.n}(ℂ)", "MH": f"M{self.n}(ℍ)"}[self.kind]

    def generic(self, tag: str) -> Mat:
        # constants and germs must not share names
        base = f"{self.name}{'_' if self.germ else '.'}{tag}"
        sym = lambda s: Scalar.sym(ensure_symbol(s, "complex", self.germ))
        if self.kind == "C":
            return Mat(1, 1, {(0, 0): sym(base)})
        if self.kind == "M":
            n = self.n
            return Mat(n, n, {(i, j): sym(f"{base}{i + 1}{j + 1}") for i in range(n) for j in range(n)})
        n = 1 if self.kind == "H" else self.n
        blocks = []
        for i in range(n):
            row = []
            for j in range(n):
                suf = "" if self.kind == "H" else f"{i + 1}{j + 1}"
                a, b = sym(f"{base}{suf}α"), sym(f"{base}{suf}β")
                row.append(Mat.from_rows([[a, b], [-b.conj(), a.conj()]]))
            blocks.append(row)
        return Mat.blocks(blocks)

    def unit(self) -> Mat:
        return Mat.identity(self.size)

    def unitary_dim(self) -> int:
        return {"C": 1, "H": 3, "M": self.n ** 2, "MH": self.n * (2 * self.n + 1)}[self.kind]


@dataclass(frozen=True)
class AlgebraSpec:
    factors: Tuple[Factor, ...]

    def __post_init__(self):
        names = [f.name for f in self.factors]
        if len(set(names)) != len(names):
            raise ValueError("factor names must be distinct")

    @classmethod
    def of(cls, *factors: Factor) -> "AlgebraSpec":
        return cls(tuple(factors))

    def names(self) -> List[str]:
        return [f.name for f in self.factors]

    def factor(self, name: str) -> Factor:
        for f in self.factors:
            if f.name == name:
                return f
        raise KeyError(name)

    def generic(self, tag: str = "a") -> Element:
        return {f.name: f.generic(tag) for f in self.factors}

    def unit(self) -> Element:
        return {f.name: f.unit() for f in self.factors}

    def multiply(self, a: Element, b: Element) -> Element:
        return {k: a[k] * b[k] for k in a}

    def star(self, a: Element) -> Element:
        return {k: v.adjoint() for k, v in a.items()}

    def with_germ(self, germ: bool = True) -> "AlgebraSpec":
        return AlgebraSpec(tuple(Factor(f.name, f.kind, f.n, germ) for f in self.factors))

    def renamed(self, suffix: str) -> "AlgebraSpec":
        return AlgebraSpec(tuple(Factor(f.name + suffix, f.kind, f.n, f.germ) for f in self.factors))

    def describe(self) -> str:
        return " ⊕ ".join(f"{f.label()}_{f.name}" for f in self.factors)


def unitary_group_dim(A: AlgebraSpec) -> int:
    """Real dimension of the Lie algebra of U(A)."""
    if any(f.germ for f in A.factors):
        raise ValueError("unitary group dimension needs a finite-dimensional algebra")
    return sum(f.unitary_dim() for f in A.factors)


# -- index schemes -------------------------------------------------------------------

@dataclass(frozen=True)
class IndexScheme:
    """Named tensor slots, flattened with the first slot outermost."""

    slots: Tuple[Tuple[str, Tuple[str, ...]], ...]

    @property
    def dim(self) -> int:
        d = 1
        for _, labels in self.slots:
            d *= len(labels)
        return d

    def _pos(self, slot: str, value) -> int:
        for name, labels in self.slots:
            if name == slot:
                return value if isinstance(value, int) else labels.index(value)
        raise KeyError(slot)

    def flat(self, **idx) -> int:
        k = 0
        for name, labels in self.slots:
            k = k * len(labels) + self._pos(name, idx[name])
        return k

    def unflat(self, k: int) -> Dict[str, str]:
        out = {}
        for name, labels in reversed(self.slots):
            k, r = divmod(k, len(labels))
            out[name] = labels[r]
        return dict(reversed(list(out.items())))

    def indices(self, **fixed) -> List[int]:
        return [k for k in range(self.dim) if all(self.unflat(k)[s] == (v if isinstance(v, str) else dict(self.slots)[s][v]) for s, v in fixed.items())]

    def prepend(self, name: str, labels: Sequence[str]) -> "IndexScheme":
        return IndexScheme(((name, tuple(labels)),) + self.slots)


# -- representations -------------------------------------------------------------------

UnitKey = Tuple[str, int, int, bool]


class Representation:
    """Linear map: rep(x) = Σ x[f][a,b] (or its conjugate) · E_{f,a,b}."""

    def __init__(self, dim: int, units: Mapping[UnitKey, Mat] | None = None):
        self.dim = dim
        self.units: Dict[UnitKey, Mat] = {}
        for k, m in (units or {}).items():
            self._add(k, m)

    def _add(self, key: UnitKey, m: Mat) -> None:
        if m.shape != (self.dim, self.dim):
            raise ShapeError("unit image has wrong shape")
        if key in self.units:
            m = self.units[key] + m
        if m.is_zero():
            self.units.pop(key, None)
        else:
            self.units[key] = m

    def place(self, factor: str, rows: Sequence[int], cols: Sequence[int] | None = None, *,
              conj: bool = False, transpose: bool = False, coeff=ONE, size: int | None = None) -> "Representation":
        """Place the factor value v so that entry (rows[a], cols[b]) gets v[a,b]."""
        cols = rows if cols is None else cols
        k = size or len(rows)
        for a in range(k):
            for b in range(k):
                src = (b, a) if transpose else (a, b)
                self._add((factor, src[0], src[1], conj), Mat.unit(self.dim, self.dim, rows[a], cols[b], coeff))
        return self

    def __call__(self, x: Element) -> Mat:
        out: Dict[Tuple[int, int], Scalar] = {}
        for (f, a, b, cj), E in self.units.items():
            v = x[f][a, b]
            if v.is_zero():
                continue
            if cj:
                v = v.conj()
            for key, e in E.data.items():
                p = v * e
                w = out.get(key)
                out[key] = p if w is None else w + p
        return Mat(self.dim, self.dim, out)

    def transform(self, fn: Callable[[Mat], Mat], dim: int | None = None) -> "Representation":
        r = Representation(dim or self.dim)
        for k, m in self.units.items():
            r._add(k, fn(m))
        return r

    def rename(self, mapping: Mapping[str, str]) -> "Representation":
        r = Representation(self.dim)
        for (f, a, b, c), m in self.units.items():
            r._add((mapping.get(f, f), a, b, c), m)
        return r

    def __add__(self, other: "Representation") -> "Representation":
        r = Representation(self.dim, self.units)
        for k, m in other.units.items():
            r._add(k, m)
        return r

    def factors(self) -> List[str]:
        return sorted({k[0] for k in self.units})


# -- triples -------------------------------------------------------------------------------

@dataclass
class RealSpectralTriple:
    name: str
    algebra: AlgebraSpec
    rep: Representation
    D: OperatorExpr
    J: Optional[AntilinearOp] = None
    gamma: Optional[Mat] = None
    scheme: Optional[IndexScheme] = None
    notes: Dict[str, str] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.rep.dim

    def pi(self, x: Element) -> Mat:
        return self.rep(x)

    def generic(self, tag: str = "a") -> Mat:
        return self.rep(self.algebra.generic(tag))

    def opposite(self, b: Mat) -> Mat:
        """b° = J b* J⁻¹."""
        return self.J.conjugate(b.adjoint())

    def signs(self) -> Tuple[Optional[int], Optional[int], Optional[int]]:
        return compute_signs(self.D, self.J, self.gamma)


def _sign_of(x: Mat, y: Mat) -> Optional[int]:
    if x == y:
        return 1
    if x == -y:
        return -1
    return None


def _op_sign(x: OperatorExpr, y: OperatorExpr) -> Optional[int]:
    if x == y:
        return 1
    if x == -y:
        return -1
    return None


def compute_signs(D: OperatorExpr, J: Optional[AntilinearOp], gamma: Optional[Mat]):
    if J is None:
        return (None, None, None)
    n = J.matrix.rows
    eps = _sign_of(J.square(), Mat.identity(n))
    epsp = _op_sign(D.conjugate_by(J), D)
    if D.is_zero():
        epsp = 1
    epspp = None if gamma is None else _sign_of(J.conjugate(gamma), gamma)
    return (eps, epsp, epspp)


def _load_ko():
    with resources.files("ncg").joinpath("data/ko_signs.json").open("r", encoding="utf-8") as fh:
        return json.load(fh)


def ko_dimension(signs: Sequence[Optional[int]], even: bool = True) -> Optional[int]:
    """Look up the KO-dimension (mod 8) of a sign triple; None if no match."""
    table = _load_ko()
    part = table["even" if even else "odd"]
    key = list(signs if even else signs[:2])
    for k, v in part.items():
        if v == key:
            return int(k)
    return None


def operator_entries(O) -> List[Scalar]:
    """All nonzero entries of a Mat or of every coefficient of an OperatorExpr."""
    if isinstance(O, Mat):
        return [O.data[k] for k in sorted(O.data)]
    out = []
    for k in sorted(O.terms):
        m = O.terms[k]
        out.extend(m.data[key] for key in sorted(m.data))
    return out


def constraints_of(O) -> ConstraintSet:
    return ConstraintSet(operator_entries(O)).canonical()


@dataclass
class CheckResult:
    name: str
    status: str  # PASS / FAIL / CONSTRAINED
    constraints: ConstraintSet = field(default_factory=ConstraintSet)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_json(self) -> dict:
        d = {"check": self.name, "status": self.status}
        if self.constraints:
            d["constraints"] = self.constraints.to_json()
        if self.detail:
            d["detail"] = self.detail
        return d


def _from_constraints(name: str, cs: ConstraintSet, detail: str = "") -> CheckResult:
    return CheckResult(name, "PASS" if cs.satisfied else "CONSTRAINED", cs, detail)


def _bool(name: str, ok: bool, detail: str = "") -> CheckResult:
    return CheckResult(name, "PASS" if ok else "FAIL", ConstraintSet(), detail)


@dataclass
class TripleReport:
    name: str
    checks: List[CheckResult]
    signs: Tuple[Optional[int], Optional[int], Optional[int]]
    ko_dim: Optional[int]

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "model": self.name,
            "checks": [c.to_json() for c in self.checks],
            "signs": list(self.signs),
            "ko_dimension": self.ko_dim,
        }


def rep_is_multiplicative(A: AlgebraSpec, rep: Representation) -> Tuple[bool, bool]:
    """(unital, multiplicative) on generic elements."""
    a, b = A.generic("a"), A.generic("b")
    unital = rep(A.unit()) == Mat.identity(rep.dim)
    mult = rep(A.multiply(a, b)) == rep(a) * rep(b)
    return unital, mult


def validate_triple(T: RealSpectralTriple) -> TripleReport:
    n = T.dim
    if T.D.dim != n:
        raise ShapeError("Dirac operator and representation have different dimensions")
    checks: List[CheckResult] = []
    unital, mult = rep_is_multiplicative(T.algebra, T.rep)
    checks.append(_bool("rep unital", unital))
    checks.append(_bool("rep multiplicative", mult))
    checks.append(_bool("D selfadjoint", T.D.adjoint() == T.D))
    a = T.generic("a")
    comm = T.D * OperatorExpr.const(a) - OperatorExpr.const(a) * T.D
    ok, cs = is_bounded(comm)
    checks.append(CheckResult("bounded commutators", "PASS" if ok else "FAIL", cs,
                              "" if ok else "degree-one part of [D, a] is nonzero"))
    G = T.gamma
    if G is not None:
        if G.shape != (n, n):
            raise ShapeError("grading has wrong shape")
        checks.append(_bool("grading selfadjoint", G.adjoint() == G))
        checks.append(_bool("grading squares to 1", G * G == Mat.identity(n)))
        checks.append(_bool("grading anticommutes with D", (OperatorExpr.const(G) * T.D + T.D * OperatorExpr.const(G)).is_zero()))
        checks.append(_from_constraints("grading commutes with algebra", constraints_of(G.commutator(a))))
    signs = T.signs()
    if T.J is not None:
        if T.J.matrix.shape != (n, n):
            raise ShapeError("real structure has wrong shape")
        checks.append(_bool("J antiunitary", T.J.is_antiunitary()))
        checks.append(_bool("J^2 = eps", signs[0] is not None))
        checks.append(_bool("JD = eps' DJ", signs[1] is not None))
        if G is not None:
            checks.append(_bool("JΓ = eps'' ΓJ", signs[2] is not None))
    ko = None
    if T.J is not None and None not in signs[: 2 if G is None else 3]:
        ko = ko_dimension(signs, even=G is not None)
    return TripleReport(T.name, checks, signs, ko)


def check_order_zero(T: RealSpectralTriple) -> ConstraintSet:
    """[a, J b* J⁻¹] on generic a, b."""
    a = T.generic("a")
    bo = T.opposite(T.generic("b"))
    return constraints_of(a.commutator(bo))


def check_first_order(T: RealSpectralTriple, D: Optional[OperatorExpr] = None) -> ConstraintSet:
    """[[D, a], J b* J⁻¹] on generic a, b."""
    D = T.D if D is None else D
    a = T.generic("a")
    bo = OperatorExpr.const(T.opposite(T.generic("b")))
    da = D * OperatorExpr.const(a) - OperatorExpr.const(a) * D
    return constraints_of(da * bo - bo * da)


# -- products -----------------------------------------------------------------------------

SPIN = IndexScheme((("s", ("l", "r")), ("ṡ", ("0̇", "1̇"))))


def manifold_triple(name: str = "manifold") -> RealSpectralTriple:
    """(C∞(M), L²(M,S), ∂̸) with 𝒥 and γ⁵ in the germ model."""
    A = AlgebraSpec.of(Factor("f", "C", germ=True))
    rep = Representation(4)
    for k in range(4):
        rep._add(("f", 0, 0, False), Mat.unit(4, 4, k, k))
    return RealSpectralTriple(name, A, rep, dirac_free(), charge_conjugation(), GAMMA.gamma5, SPIN)


def product_triple(manifold: RealSpectralTriple, finite: RealSpectralTriple, name: str | None = None) -> RealSpectralTriple:
    """Spinor-outer product: D = ∂̸⊗I + γ⁵⊗D_F, Γ = γ⁵⊗Γ_F, J = 𝒥⊗J_F."""
    if manifold.gamma is None or finite.gamma is None:
        raise ValueError("product needs gradings on both factors")
    if finite.D.degree() > 0:
        raise ValueError("finite part must have a constant Dirac operator")
    nF = finite.dim
    DF = finite.D.bounded_part()
    D = manifold.D.tensor(Mat.identity(nF)) + OperatorExpr.const(manifold.gamma.kron(DF))
    G = manifold.gamma.kron(finite.gamma)
    J = manifold.J.kron(finite.J) if manifold.J is not None and finite.J is not None else None
    rep = finite.rep.transform(lambda m: Mat.identity(manifold.dim).kron(m), manifold.dim * nF)
    scheme = None
    if finite.scheme is not None and manifold.scheme is not None:
        scheme = IndexScheme(manifold.scheme.slots + finite.scheme.slots)
    return RealSpectralTriple(name or f"{manifold.name}×{finite.name}", finite.algebra.with_germ(), rep, D, J, G, scheme)


# -- declarative config ---------------------------------------------------------------------

def triple_from_config(cfg: Mapping) -> RealSpectralTriple:
    """Build a finite triple from a JSON-style mapping.

    Keys: ``name``, ``dim``, ``factors`` ([{name, kind, n}]), ``placements``
    ([{factor, rows, cols?, conj?, transpose?}]) or the ``units`` echoed by
    :func:`triple_to_config`, ``D`` (matrix of scalar
    strings), optional ``J`` (matrix of the antilinear operator) and ``gamma``.
    """
    dim = int(cfg["dim"])
    A = AlgebraSpec(tuple(Factor(f["name"], f["kind"], int(f.get("n", 1)), bool(f.get("germ", False))) for f in cfg["factors"]))
    rep = Representation(dim)
    for p in cfg.get("placements", []):
        rep.place(p["factor"], p["rows"], p.get("cols"), conj=bool(p.get("conj", False)), transpose=bool(p.get("transpose", False)))
    # the canonical echo lists unit images instead of placements
    for u in cfg.get("units", []):
        img = Mat(dim, dim, {(int(i), int(j)): parse_scalar(v) for i, j, v in u["image"]})
        rep._add((u["factor"], int(u["entry"][0]), int(u["entry"][1]), bool(u["conj"])), img)
    D = OperatorExpr.const(Mat.from_json(cfg["D"])) if "D" in cfg else OperatorExpr.zero(dim)
    J = AntilinearOp(Mat.from_json(cfg["J"])) if "J" in cfg else None
    G = Mat.from_json(cfg["gamma"]) if "gamma" in cfg else None
    return RealSpectralTriple(cfg.get("name", "config"), A, rep, D, J, G)


def triple_to_config(T: RealSpectralTriple) -> dict:
    """Canonical JSON echo of a finite triple (placements listed per unit)."""
    if T.D.degree() > 0:
        raise ValueError("only finite triples have a config form")
    units = []
    for (f, a, b, cj), m in sorted(T.rep.units.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2], kv[0][3])):
        units.append({"factor": f, "entry": [a, b], "conj": cj, "image": sorted([i, j, str(v)] for (i, j), v in m.data.items())})
    out = {
        "name": T.name,
        "dim": T.dim,
        "factors": [{"name": f.name, "kind": f.kind, "n": f.n} for f in T.algebra.factors],
        "units": units,
        "D": T.D.bounded_part().to_json(),
    }
    if T.J is not None:
        out["J"] = T.J.matrix.to_json()
    if T.gamma is not None:
        out["gamma"] = T.gamma.to_json()
    return out
