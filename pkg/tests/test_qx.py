from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from ordspace.qx import (
    ARCHIMEDEAN,
    MINUS_INF,
    PLUS_INF,
    ROOT_MINUS,
    ROOT_PLUS,
    QxError,
    RationalPoly,
    RealRoot,
    Site,
    build_qx_model,
    check_irreducible,
    compare_roots,
    decide_qx_quotient,
    element_in_model,
    factor_rational,
    gamma_from_sites,
    isolate_real_roots,
    load_model_spec,
    ordering_at,
    parse_poly,
    simplest_between,
    site_sign,
    sturm_count,
)
from ordspace.quotients import brute_force_decide
from ordspace.spaces import OracleConfig, parse_character

P = parse_poly


def test_parse_and_print():
    assert str(P("x^2 - 2")) == "x^2 - 2"
    assert P("(x-1)(x+2)") == P("x^2 + x - 2")
    assert P("3/2*x^3 + x - 1/2").coeffs == (F(-1, 2), F(1), F(0), F(3, 2))
    for bad in ("x^2 +", "y + 1", "1/x", "x^(1/2)"):
        with pytest.raises(QxError):
            P(bad)


def test_arithmetic():
    p, q = P("x^2 - 2"), P("x + 1")
    quo, rem = (p * q + P("3")).divmod(q)
    assert quo == p and rem == P("3")
    assert p.gcd(p * q) == p
    assert P("(x-1)^2*(x+1)").squarefree_part().make_monic() == P("x^2 - 1")


def test_sturm_examples():
    assert sturm_count(P("x^2-2"), F(-2), F(2)) == 2
    assert sturm_count(P("x^2+1")) == 0
    assert sturm_count(P("x^3-2"), F(0), F(2)) == 1
    assert sturm_count(P("(x-1)^3")) == 1


def test_isolation():
    assert isolate_real_roots(P("x^2+1")) == []
    r = isolate_real_roots(P("x^2-2"))
    assert len(r) == 2 and r[0].hi <= r[1].lo
    roots = isolate_real_roots(P("x^2-2")) + isolate_real_roots(P("x^2-3"))
    roots.sort(key=lambda x: x.lo)
    ordered = sorted(roots, key=lambda x: x.lo)
    # exact comparison gives -sqrt3 < -sqrt2 < sqrt2 < sqrt3
    from functools import cmp_to_key

    ordered = sorted(roots, key=cmp_to_key(compare_roots))
    assert [str(x.poly) for x in ordered] == ["x^2 - 3", "x^2 - 2", "x^2 - 2", "x^2 - 3"]
    assert [x.is_exact for x in isolate_real_roots(P("x*(x-1/2)*(x^2-5)"))] == [False, True, True, False]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=4, unique=True))
def test_isolation_of_rational_products(roots):
    p = RationalPoly((F(1),))
    for r in roots:
        p = p * RationalPoly.x_minus(F(r, 3))
    iso = isolate_real_roots(p * P("x^2 + 1"))
    assert [x.lo for x in iso] == sorted(F(r, 3) for r in roots)


def test_irreducibility():
    assert check_irreducible(P("x^2-2"))
    assert not check_irreducible(P("x^2-1"))
    assert check_irreducible(P("x^4-10x^2+1"))
    assert not check_irreducible(P("x^4+4"))
    assert not check_irreducible(P("(x^2-2)(x^2-3)"))
    with pytest.raises(QxError):
        check_irreducible(P("x^5-4x+2"))
    assert check_irreducible(P("x^5-4x+2"), assume=True)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=3, max_size=5).filter(lambda c: c[0] != 0))
def test_irreducibility_matches_sympy(coeffs):
    import sympy

    p = RationalPoly.from_ints(*coeffs)
    if p.degree < 1 or p.degree > 4:
        return
    expected = sympy.Poly(list(coeffs), sympy.Symbol("x")).is_irreducible
    assert check_irreducible(p) == expected


def test_simplest_between():
    e = RealRoot.exact
    assert simplest_between(None, None) == 0
    assert simplest_between(e(F(1, 3)), e(F(1, 2))) == F(2, 5)
    assert simplest_between(e(F(-7, 2)), e(-3)) == F(-10, 3)
    r2, r3 = isolate_real_roots(P("x^2-2"))[1], isolate_real_roots(P("x^2-3"))[1]
    assert simplest_between(r2, r3) == F(3, 2)
    assert simplest_between(e(1000), None) == 1001


def test_model_sqrt2():
    M = build_qx_model([P("x^2-2")], [])
    assert (M.space.n, M.space.order) == (6, 32)
    assert M.oracle_checked
    assert M.separators == (-2, 0, 2)
    p = M.A[0]
    plus_inf = ordering_at(M, Site(PLUS_INF))
    assert plus_inf == M.space.chars[M.space.index_of["pinf"]]
    # sigma_minus * sigma_plus at a root kills exactly the generator p
    g = ordering_at(M, Site(ROOT_MINUS, p, 1)) ^ ordering_at(M, Site(ROOT_PLUS, p, 1))
    ker = M.space.kernel([g])
    assert M.generator_mask("p1") not in ker
    assert all(M.generator_mask(n) in ker for n in ("-1", "l1", "l2", "l3"))
    with pytest.raises(QxError):
        ordering_at(M, Site(ARCHIMEDEAN, point=F(1)))


def test_model_point_only_and_two_quadratics():
    M = build_qx_model([], [F(0)])
    assert (M.space.n, M.space.dim) == (3, 3)
    M = build_qx_model([P("x^2-2"), P("x^2-3")], [], config=OracleConfig(max_dim=8))
    assert M.space.dim == 8 and M.m == 4


@pytest.mark.parametrize("A, B, msg", [
    (["x^2-1"], [], "reducible"),
    (["x^2+1"], [], "no real root"),
    (["2x-1"], [], "monic"),
    (["x^2-2"], ["0", "0"], "repeated"),
    (["x-1"], ["1"], "root"),
])
def test_model_errors(A, B, msg):
    with pytest.raises(QxError, match=msg):
        build_qx_model([P(a) for a in A], [F(b) for b in B])


def test_site_signs_match_model():
    M = build_qx_model([P("x^2-2"), P("x^2-2x-1")], [F(5)])
    for w in ("x^2-2", "-(x^2-2)*(x^2-2x-1)", "x^2+x+7", "x+2"):
        w = P(w)
        mask = element_in_model(M, w)
        for lbl, site in M.site_labels:
            assert ((mask >> M.space.index_of[lbl]) & 1) == (site_sign(M, site, w) < 0)
    with pytest.raises(QxError):
        element_in_model(M, P("x-1"))


def test_factor_rational():
    c, facs = factor_rational(P("2x^3 - 4x"))
    assert c == 2 and facs == [(P("x"), 1), (P("x^2-2"), 1)]


def test_quotient_patterns():
    M = build_qx_model([P("x^2-2")], [])
    S = M.space
    for word in ("r1m*r1p", "r1m*r2p"):
        G0 = S.kernel([parse_character(S, word)])
        assert decide_qx_quotient(M, G0).is_quotient_space == brute_force_decide(S, G0)
    with pytest.raises(QxError):
        from ordspace.f2core import echelonize

        decide_qx_quotient(M, echelonize([S.gens[1]], S.n))


def test_model_spec_parsing():
    spec = load_model_spec("# c\npoly: x^2 - 2\npoint: 3/2\npoly!: x^5 - 4x + 2\n")
    assert spec.A[0] == P("x^2-2") and spec.B == (F(3, 2),) and spec.assume == (1,)
    with pytest.raises(QxError, match="line 1"):
        load_model_spec("polly: x")
    with pytest.raises(QxError, match="line 2"):
        load_model_spec("point: 1\npoint: x\n")
