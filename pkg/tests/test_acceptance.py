"""Acceptance suite: thirteen exact criteria, one reported line each.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary lists
every criterion with PASS or FAIL.  Running the file directly prints the
same lines.
"""

import functools
import time

import pytest
import sympy

from conftest import ACCEPTANCE, mat_symbols, random_bindings
from ncg.actions import fermionic_kernel, standard_action
from ncg.clifford import GAMMA, OperatorExpr, PAULI, is_bounded, solve_intertwiner_constraint
from ncg.fluctuations import (adjoint_action, check_transparency, conjugation_identity, numeric_unitary,
                              one_form_space, phase_unitary, reduce_phases, selfadjoint_family)
from ncg.linalg import Mat, solve_linear_in_symbols
from ncg.models import (bprime_twist, bsub, btilde_twist, dirac_parts, doubled_manifold, ed_model,
                        field_basis, field_symbols, grading_break, grand_triple, hplus_basis, manifold_twist, sm_triple,
                        sm_twist)
from ncg.scalars import I, Scalar
from ncg.triples import manifold_triple, operator_entries, rep_is_multiplicative
from ncg.twists import (check_closure_under_twist, check_twisted_first_order, rho_adjoint, signature,
                        twisted_commutator, validate_twisted)


def criterion(n, title):
    def deco(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            ACCEPTANCE[n] = (title, False)
            fn(*args, **kwargs)
            ACCEPTANCE[n] = (title, True)
        return run
    return deco


def _sympy(p: Scalar):
    return sympy.sympify(str(p).replace("i*", "I*").replace("i)", "I)"))


# -- 1 ------------------------------------------------------------------------------------

@criterion(1, "intertwiners Aγ^μ = γ^μB form the two-parameter family diag(λ, λ') / diag(λ', λ)")
def test_c01_intertwiner():
    t = time.perf_counter()
    sol, A, B = solve_intertwiner_constraint()
    elapsed = time.perf_counter() - t
    assert sol.dimension == 2
    lam, lamp = A[0, 0], A[2, 2]
    assert {frozenset(lam.symbols()), frozenset(lamp.symbols())} == {frozenset({p}) for p in sol.params}
    I2, Z = Mat.identity(2), Mat.zeros(2)
    assert A == Mat.blocks([[I2.scale(lam), Z], [Z, I2.scale(lamp)]])
    assert B == Mat.blocks([[I2.scale(lamp), Z], [Z, I2.scale(lam)]])
    for mu in range(4):
        assert A * GAMMA[mu] == GAMMA[mu] * B
    assert elapsed < 1.0


# -- 2 ------------------------------------------------------------------------------------

@criterion(2, "grand algebra: [∂̸⊗I, a] unbounded; boundedness forces spinor-scalar action")
def test_c02_grand_unbounded():
    G = grand_triple()
    a = G.generic("a")
    free = dirac_parts("grand", G)["free"]
    ok, cs = is_bounded(free * OperatorExpr.const(a) - OperatorExpr.const(a) * free)
    assert not ok and not cs.satisfied
    # conjugate equations are implied, so split unknowns into real and imaginary parts
    sol = solve_linear_in_symbols(list(cs.polys), sorted(a.symbols(), key=lambda s: s.uid))
    assert sol.feasible and sol.constraints.satisfied
    a_b = sol.apply_mat(a)
    n = G.dim // 4
    x = a_b.submatrix(range(n), range(n))
    # multiple of the identity in the spinor index
    assert a_b == Mat.identity(4).kron(x)
    assert a != Mat.identity(4).kron(a.submatrix(range(n), range(n)))
    # conversely every spinor-scalar element satisfies the constraints
    ok2, _ = is_bounded(free * OperatorExpr.const(a_b) - OperatorExpr.const(a_b) * free)
    assert ok2


# -- 3 ------------------------------------------------------------------------------------

@criterion(3, "grading breaking: M2(ℍ)_L ⊕ M2(ℍ)_R ⊕ M4(ℂ)_l ⊕ M4(ℂ)_r and its chiral split")
def test_c03_grading_break():
    _, blocks = grading_break(grand_triple())
    assert [(b.name, b.kind, b.n) for b in blocks] == [("L", "MH", 2), ("R", "MH", 2), ("l", "M", 4), ("r", "M", 4)]
    _, blocks = grading_break(grand_triple(chiral=True), mode="split")
    assert [(b.name, b.kind, b.n) for b in blocks] == [
        ("L^l", "H", 1), ("L^r", "H", 1), ("R^l", "H", 1), ("R^r", "H", 1), ("l", "M", 4), ("r", "M", 4)]
    supports = [set(b.support) for b in blocks]
    assert all(not (s & t) for i, s in enumerate(supports) for t in supports[i + 1:])


# -- 4 ------------------------------------------------------------------------------------

@criterion(4, "𝓑′ with the chiral flip: bounded twisted commutators and twisted first order")
def test_c04_bprime():
    B = bprime_twist()
    r = validate_twisted(B)
    assert r.check("bounded twisted commutators").passed
    assert r.check("twisted first order").passed
    assert r.passed


# -- 5 ------------------------------------------------------------------------------------

@criterion(5, "𝓑̃ with γ⁵⊗D_R: branch conditions c = c_R^l, d = d_R^l or the mirror")
def test_c05_majorana_branches():
    T = btilde_twist()
    cs = check_twisted_first_order(T, dirac_parts("btilde", T)["majorana"]).canonical()
    assert not cs.satisfied
    got = {sympy.factor(_sympy(p)) for p in cs.polys}
    kR, c_a, c_b, l_a, l_b, r_a, r_b = sympy.symbols("kR c_a c_b cRl_a cRl_b cRr_a cRr_b")
    expected = [kR * (l_a - c_a) * (r_b - c_b), kR * (l_b - c_b) * (r_a - c_a)]
    syms = [kR, c_a, c_b, l_a, l_b, r_a, r_b]
    assert sympy.groebner(list(got), *syms) == sympy.groebner(expected, *syms)
    # branch → constraints vanish, on both branches
    byname = {s.name: s for s in set().union(*(p.symbols() for p in cs.polys))}
    for side in ("cRl", "cRr"):
        sub = {byname["c_a"]: Scalar.sym(byname[f"{side}_a"]), byname["c_b"]: Scalar.sym(byname[f"{side}_b"])}
        assert cs.holds_at(sub)
    # constraints → branch: on the diagonal a = b every generator is kR(c - c_R^l)(c - c_R^r)
    diag = {byname[f"{k}_b"]: Scalar.sym(byname[f"{k}_a"]) for k in ("c", "cRl", "cRr")}
    for p in cs.polys:
        q = sympy.factor(_sympy(p.subs(diag)))
        assert sympy.simplify(q / (kR * (c_a - l_a) * (c_a - r_a))) in (1, -1)


# -- 6 ------------------------------------------------------------------------------------

@criterion(6, "closure of 𝓑 under the twist holds only when c_R^r = c_R^l")
def test_c06_closure():
    T = btilde_twist()
    sub, embed = bsub()
    cs, _ = check_closure_under_twist(T, sub, embed)
    polys = cs.canonical().polys
    assert len(polys) == 1
    p = _sympy(polys[0])
    assert sympy.expand(p - (sympy.Symbol("cRl_a") - sympy.Symbol("cRr_a"))) == 0 or \
        sympy.expand(p + (sympy.Symbol("cRl_a") - sympy.Symbol("cRr_a"))) == 0


# -- 7 ------------------------------------------------------------------------------------

@criterion(7, "twist by grading of the SM: twisted order zero/first order pass, γ⁵⊗D_M transparent")
def test_c07_sm_twist():
    S = sm_twist()
    r = validate_twisted(S)
    assert r.check("twisted order zero").passed
    assert r.check("twisted first order").passed
    dm = dirac_parts("sm-twist", S)["majorana"]
    assert check_transparency(S, dm)
    assert selfadjoint_family(S, dm).dimension == 0


# -- 8 ------------------------------------------------------------------------------------

@criterion(8, "manifold: twisted family ∂̸ - i f_μγ⁵γ^μ (4 real parameters); untwisted family empty")
def test_c08_manifold_family():
    fam = selfadjoint_family(manifold_twist())
    assert fam.dimension == 4
    assert fam.spans([m for _, m in field_basis("manifold-twist")])
    assert selfadjoint_family(manifold_triple()).dimension == 0


# -- 9 ------------------------------------------------------------------------------------

@criterion(9, "doubled manifold and ED: 8-parameter families with Γ_F and I′/I″ structure; γ⁵⊗D_F transparent")
def test_c09_doubled_and_ed():
    for name, T in (("doubled-manifold", doubled_manifold()), ("ed", ed_model())):
        fam = selfadjoint_family(T)
        assert fam.dimension == 8
        assert fam.spans([m for _, m in field_basis(name)])
    ed = ed_model()
    fin = dirac_parts("ed", ed)["finite"]
    assert check_transparency(ed, fin)
    assert selfadjoint_family(ed, fin).dimension == 0


# -- 10 -----------------------------------------------------------------------------------

def _ed_gauge(labels):
    ed = ed_model()
    f, g = field_symbols("f"), field_symbols("g")
    fp, gp = field_symbols("f'"), field_symbols("g'")
    basis = field_basis("ed")

    def X(fs, gs):
        out = Mat.zeros(ed.dim)
        for s, (_, m) in zip(list(fs) + list(gs), basis):
            out = out + m.scale(Scalar.sym(s))
        return out

    DX = ed.D + OperatorExpr.const(X(f, g))
    u, ph = phase_unitary(ed.algebra, labels)
    lead, _ = adjoint_action(ed, ed.rho(u))
    _, inv = adjoint_action(ed, u)
    Dp = reduce_phases(OperatorExpr.const(lead) * DX * OperatorExpr.const(inv), ph)
    diff = Dp - ed.D - OperatorExpr.const(X(fp, gp))
    sol = solve_linear_in_symbols(operator_entries(diff), fp + gp, reality=False, generic=False)
    assert sol.feasible and sol.constraints.satisfied
    return {s: sol.values[s] for s in fp + gp}, f, g, fp, gp, ph


@criterion(10, "gauge: f_μ invariant, g_μ → g_μ + ∂_μθ; twisted conjugation identity for 20 numeric unitaries")
def test_c10_gauge(rng):
    vals, f, g, fp, gp, ph = _ed_gauge({"g": "θ", "g'": "θ"})
    th = ph["θ"]
    for mu in range(4):
        assert vals[fp[mu]] == Scalar.sym(f[mu])
        assert vals[gp[mu]] == Scalar.sym(g[mu]) + Scalar.sym(th.dtheta(mu))
    for T in (ed_model(), manifold_twist(), doubled_manifold()):
        A = one_form_space(T).member()
        u, phases = phase_unitary(T.algebra)
        lhs, rhs = conjugation_identity(T, A, u)
        diff = reduce_phases(lhs - rhs, phases)
        assert diff.is_zero()
        for _ in range(20):
            un = numeric_unitary(T.algebra, rng)
            l2, r2 = conjugation_identity(T, A, un)
            assert (l2 - r2).is_zero()


# -- 11 -----------------------------------------------------------------------------------

@criterion(11, "ρ-product: R = γ⁰ has signature (2,2); (Ad u⁻¹)⁺ = ρ(Ad u) for numeric unitaries")
def test_c11_rho_product(rng):
    assert signature(manifold_twist().R) == (2, 2)
    for T in (manifold_twist(), doubled_manifold(), ed_model(), bprime_twist()):
        for _ in range(20):
            u = numeric_unitary(T.algebra, rng)
            for m in u.values():
                assert m.adjoint() * m == Mat.identity(m.rows)
            _, adinv = adjoint_action(T, u)
            rad, _ = adjoint_action(T, T.rho(u))
            assert rho_adjoint(T, adinv) == rad


# -- 12 -----------------------------------------------------------------------------------

@criterion(12, "action kernels: antisymmetric; doubled → Weyl, ED → Dirac; single manifold fails with σ₂")
def test_c12_actions():
    sm = sm_triple()
    Ksm = fermionic_kernel(sm, sm.D, hplus_basis(sm.gamma), twisted=False)
    assert Ksm.is_antisymmetric() and not Ksm.K.is_zero()
    man = standard_action("manifold-twist")
    assert man.kernel.is_antisymmetric()
    f0 = Scalar.sym(field_symbols("f")[0])
    inner = OperatorExpr.const(Mat.identity(2).scale(I * f0))
    for j in (1, 2, 3):
        inner = inner - OperatorExpr.const(PAULI[j]) * OperatorExpr.partial(j, 2)
    s2 = OperatorExpr.const(PAULI[2])
    two = Scalar.const(2)
    assert (man.kernel.K - (s2 * inner).scale(two)).is_zero()
    res = man.run()
    assert not res.matched
    expected_residual = (OperatorExpr.const(PAULI[2] - Mat.identity(2).scale(I)) * inner).scale(two)
    assert (res.residual - expected_residual).is_zero()
    for name in ("doubled-manifold", "ed"):
        setup = standard_action(name)
        assert setup.kernel.is_antisymmetric()
        r = setup.run()
        assert r.matched, (name, r.reason)


# -- 13 -----------------------------------------------------------------------------------

N_BIND = 100


@criterion(13, "engine soundness: twisted Leibniz, multiplicativity, J signs, constraint consistency (≥100 bindings)")
def test_c13_soundness(rng):
    # twisted Leibniz rule [D, ab]_ρ = [D, a]_ρ b + ρ(a)[D, b]_ρ on germ elements
    T = doubled_manifold()
    A = T.algebra
    a, b = A.generic("a"), A.generic("b")
    lhs = twisted_commutator(T.D, A.multiply(a, b), T)
    rhs = twisted_commutator(T.D, a, T) * OperatorExpr.const(T.pi(b)) + \
        OperatorExpr.const(T.pi(T.rho(a))) * twisted_commutator(T.D, b, T)
    diff = lhs - rhs
    syms = diff.symbols() | lhs.symbols()
    for _ in range(N_BIND):
        bind = random_bindings(syms, rng)
        assert diff.subs(bind).is_zero()
        assert lhs.subs(bind) == rhs.subs(bind)

    # representation multiplicativity on numeric elements
    S = sm_twist()
    assert rep_is_multiplicative(S.algebra, S.base.rep) == (True, True)
    a, b = S.algebra.generic("a"), S.algebra.generic("b")
    pa, pb, pab = S.pi(a), S.pi(b), S.pi(S.algebra.multiply(a, b))
    syms = mat_symbols(pa, pb)
    for _ in range(N_BIND):
        bind = random_bindings(syms, rng)
        assert pab.subs(bind) == pa.subs(bind) * pb.subs(bind)

    # J-sign relations applied to random vectors
    T = sm_triple()
    eps, epsp, epspp = T.signs()
    J, G = T.J, T.gamma
    D = T.D.bounded_part().subs(random_bindings(T.D.symbols(), rng))
    n = T.dim
    for _ in range(N_BIND):
        v = Mat(n, 1, {(rng.randrange(n), 0): Scalar.gauss(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(4)})
        assert J.apply(J.apply(v)) == v.scale(Scalar.const(eps))
        assert J.apply(D * v) == (D * J.apply(v)).scale(Scalar.const(epsp))
        assert J.apply(G * v) == (G * J.apply(v)).scale(Scalar.const(epspp))

    # ConstraintSet: generic answer agrees with specialised recomputation
    T = btilde_twist()
    Dm = dirac_parts("btilde", T)["majorana"]
    cs = check_twisted_first_order(T, Dm)
    A = T.algebra
    a, b = A.generic("a"), A.generic("b")
    da = twisted_commutator(Dm, a, T)
    bo = OperatorExpr.const(T.base.opposite(T.pi(b)))
    rbo = OperatorExpr.const(T.base.opposite(T.pi(T.rho(b))))
    expr = da * bo - rbo * da
    syms = expr.symbols()
    byname = {s.name: s for s in syms}
    outcomes = set()
    for k in range(N_BIND):
        bind = random_bindings(syms, rng, span=2)
        if k % 2:
            # land on a branch half of the time
            side = "cRl" if k % 4 == 1 else "cRr"
            for t in "ab":
                src = byname[f"{side}_{t}"]
                bind[byname[f"c_{t}"]] = bind[src]
                bind[byname[f"c_{t}"].conj()] = bind[src.conj()]
        held = cs.holds_at(bind)
        assert held == expr.subs(bind).is_zero()
        outcomes.add(held)
    assert outcomes == {True, False}


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
