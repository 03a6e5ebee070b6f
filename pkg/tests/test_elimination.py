import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonneg.elimination import (
    discriminant,
    projection_set,
    pseudo_rem,
    resultant,
    subresultant_prs,
    triangularize,
)
from nonneg.errors import BadDivisor, BadInput, ZeroPoly
from nonneg.polyring import Ring, eval_at, gcd, squarefree_basis, to_text
from nonneg.realroots import isolate_roots
from oracles import sylvester_resultant, to_sympy

R = Ring(("x", "y", "a", "b", "c", "p", "q", "u"))
x, y, a, b, c, p, q, u = R.gens()


def test_pseudo_rem_examples():
    assert pseudo_rem(x**2, x + 1, "x") == R.constant(1)
    assert pseudo_rem(x + 1, x**2, "x") == x + 1
    r = pseudo_rem(a * x**2 + b * x + c, 2 * a * x + b, "x")
    assert r == a * (4 * a * c - b**2)
    with pytest.raises(BadDivisor):
        pseudo_rem(x, a, "x")


def test_prs_examples():
    assert gcd(subresultant_prs(x**3 - x, x**2 - 1, "x")[-1], x**2 - 1) == x**2 - 1
    assert subresultant_prs(x**2 - 2, x, "x")[-1] == R.constant(-2)
    f = (x - 1) * (x - 2) * (x - 3)
    assert subresultant_prs(f, f.diff("x"), "x")[-1].is_constant()
    with pytest.raises(ZeroPoly):
        subresultant_prs(R.zero(), x, "x")


def test_resultant_examples():
    assert resultant(x**2 - 1, x - 2, "x") == R.constant(3)
    r = resultant(x * y - 1, y + x, "y")
    assert to_sympy(r) == sylvester_resultant(x * y - 1, y + x, "y")
    # det [[x, -1], [1, x]] = x^2 + 1
    assert r == x**2 + 1
    with pytest.raises(BadInput):
        resultant(x, a, "x")


def test_discriminant_examples():
    assert discriminant(a * x**2 + b * x + c, "x") == b**2 - 4 * a * c
    assert discriminant(x**2 - 1, "x") == R.constant(4)
    assert discriminant(x**3 + p * x + q, "x") == -4 * p**3 - 27 * q**2
    with pytest.raises(BadInput):
        discriminant(a, "x")


def test_projection_set_examples():
    got = projection_set(b**2 - 4 * a * c, "c")
    assert set(map(to_text, got)) >= {"a"}
    assert all(not g.involves("c") for g in got)
    assert list(map(to_text, projection_set(a, "c"))) == ["a"]
    got = projection_set((x - u) * (x + u), "x")
    assert "u" in map(to_text, got)
    with pytest.raises(ZeroPoly):
        projection_set(R.zero(), "x")


def test_triangularize_examples():
    (br,) = [t for t in triangularize([a * b * c - 1], ["a"]) if t.generic]
    assert br.chain == (a * b * c - 1,) and br.initials == (b * c,)
    branches = triangularize([x * y - 1, x + y], ["y", "x"])
    main = branches[0]
    assert main.mainvars == ("x", "y")
    assert gcd(main.chain[0], x**2 + 1) == x**2 + 1 and main.chain[0].degree() == 2
    assert isolate_roots(main.chain[0]) == []
    assert triangularize([R.constant(1) + 0 * x], ["x"]) == []
    with pytest.raises(BadInput):
        triangularize([], ["x"])


# --- properties -----------------------------------------------------------------
S = Ring(("x", "s", "t"))
small_coef = st.integers(-3, 3)


def upoly(max_deg):
    """Polynomials of degree <= max_deg in x with coefficients in s, t."""
    mono = st.tuples(st.integers(0, max_deg), st.integers(0, 1), st.integers(0, 1))
    return st.dictionaries(mono, small_coef.filter(bool), min_size=1, max_size=5).map(S.from_terms)


def has_x(f):
    return f.degree("x") >= 1


@given(upoly(3).filter(has_x), upoly(3).filter(has_x))
def test_resultant_matches_sylvester_determinant(f, g):
    assert to_sympy(resultant(f, g, "x")) == sylvester_resultant(f, g, "x")


@given(upoly(2).filter(has_x), upoly(2).filter(has_x), upoly(3).filter(has_x))
def test_resultant_is_multiplicative(f, g, h):
    assert resultant(f * g, h, "x") == resultant(f, h, "x") * resultant(g, h, "x")


@given(upoly(2).filter(has_x), upoly(2).filter(has_x), upoly(2).filter(has_x))
def test_planted_common_factor_gives_zero_resultant(f, g, h):
    assert resultant(f * h, g * h, "x").is_zero()


@given(upoly(3).filter(has_x), upoly(3).filter(has_x))
def test_zero_resultant_iff_common_factor(f, g):
    common = gcd(f, g).degree("x") > 0
    assert resultant(f, g, "x").is_zero() == common


@given(st.integers(-5, 5), st.integers(-5, 5).filter(bool), st.integers(-5, 5))
def test_quadratic_discriminant_identity(bb, aa, cc):
    f = aa * x**2 + bb * x + cc
    assert discriminant(f, "x") == R.constant(bb * bb - 4 * aa * cc)


@given(st.lists(upoly(3).filter(lambda f: not f.is_constant()), min_size=1, max_size=3))
def test_projection_set_is_a_clean_basis(fs):
    out = projection_set(fs, "x")
    for g in out:
        assert not g.is_constant() and not g.involves("x")
    if out:
        assert squarefree_basis(out) == out
    for i, g in enumerate(out):
        for h in out[i + 1:]:
            assert gcd(g, h).is_constant()


@given(st.integers(-3, 3), st.integers(1, 3), st.integers(-3, 3), st.fractions(-2, 2, max_denominator=3))
def test_branch_points_solve_the_system(k, m, n, tval):
    # x*y = k + t and m*y + x = n over unknowns (y, x); t is a parameter
    T = Ring(("y", "x", "t"))
    Y, X, t = T.gens()
    F = [X * Y - k - t, m * Y + X - n]
    for br in triangularize(F, ["y", "x"]):
        if not br.generic:
            continue
        low = br.chain[0].subs({"t": tval})
        for iv in isolate_roots(low):
            if iv.is_point:
                xv = iv.lo
                top = br.chain[1].subs({"x": xv, "t": tval})
                if top.degree("y") != 1:
                    continue
                yv = -top.coeffs("y")[0].constant_value() / top.coeffs("y")[1].constant_value()
                for f in F:
                    assert eval_at(f, {"x": xv, "y": yv, "t": tval}) == 0
