from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from nonneg.borderpoly import border_polynomial, decompose, reduce_through
from nonneg.classifier import count_at
from nonneg.elimination import discriminant
from nonneg.errors import NoEquation
from nonneg.polyring import Ring, eval_at, squarefree_basis, to_text
from nonneg.problemfile import load_problem
from nonneg.prover import _prepare
from nonneg.realroots import isolate_roots
from nonneg.system import SemiAlgSystem


def quadratic_system():
    R = Ring(("x", "a", "b", "c"))
    x, a, b, c = R.gens()
    return SemiAlgSystem(R, 3, (a * x**2 + b * x + c,), (), (), (a,))


def test_quadratic_border():
    bb = border_polynomial(quadratic_system())
    assert {to_text(f) for f in bb.factors} == {"a", "4*a*c - b^2"}
    tags = dict(zip(map(to_text, bb.factors), (t for t, _ in bb.provenance)))
    assert tags["4*a*c - b^2"] == "discriminant"


def test_example1_border_lives_in_b_c(corpus_dir):
    sys = _prepare(load_problem(corpus_dir / "ex01.prob"))
    assert sys.unknowns == ("a",) and sys.params == ("b", "c")
    bb = border_polynomial(sys)
    assert bb.factors
    for f in bb.factors:
        assert not f.involves("a") and not f.is_zero() and not f.is_constant()
    # the largest factor has 19 terms (the reference factor has degree 18; ours is 16)
    assert max(f.nterms() for f in bb.factors) == 19


def test_linear_system_has_empty_border():
    R = Ring(("x", "t"))
    x, t = R.gens()
    sys = SemiAlgSystem(R, 1, (x - t,))
    assert border_polynomial(sys).factors == ()
    for tv in (-3, 0, Fraction(7, 2)):
        assert count_at(sys, {"t": tv}) == 1


def test_no_equation():
    R = Ring(("x", "t"))
    with pytest.raises(NoEquation):
        border_polynomial(SemiAlgSystem(R, 1, (), (R.gen("x"),)))


def test_json_carries_provenance():
    js = border_polynomial(quadratic_system()).to_json()
    assert {f["tag"] for f in js["factors"]} <= {"initial", "discriminant", "ineq-resultant"}
    assert all({"poly", "degree", "terms", "source"} <= set(f) for f in js["factors"])


def test_reduce_through_detects_identical_vanishing():
    R = Ring(("y", "x", "t"))
    y, x, t = R.gens()
    chain = (x - t, y - x)
    assert reduce_through(y - t, chain, ("x", "y")) is None
    assert reduce_through(y + t, chain, ("x", "y")) == [t]


# --- properties -----------------------------------------------------------------
P1 = Ring(("x", "t"))
X, T = P1.gens()
lin = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).map(lambda ab: ab[0] * T + ab[1])


@st.composite
def one_param_systems(draw):
    """One unknown x, one parameter t; equation of degree <= 3 in x whose
    coefficients are linear in t, plus optional side constraints."""
    deg = draw(st.integers(1, 3))
    coeffs = [draw(lin) for _ in range(deg)] + [draw(lin.filter(lambda p: not p.is_zero()))]
    f = sum((c * X**i for i, c in enumerate(coeffs)), P1.zero())
    assume(f.degree("x") >= 1)
    N = tuple(draw(st.lists(lin.map(lambda p: X - p), max_size=1)))
    P = tuple(draw(st.lists(lin.map(lambda p: X + p), max_size=1)))
    return SemiAlgSystem(P1, 1, (f,), N, P, ())


def _cells(factors):
    prod = P1.constant(1)
    for f in factors:
        prod = prod * f
    return [] if prod.is_constant() else isolate_roots(prod)


def _same_cell(ivs, s, u):
    lo, hi = min(s, u), max(s, u)
    return all(iv.hi < lo or iv.lo > hi for iv in ivs)


@given(one_param_systems(), st.fractions(-4, 4, max_denominator=7), st.fractions(-4, 4, max_denominator=7))
def test_count_is_locally_constant_off_the_border(sys, s, u):
    bb = border_polynomial(sys)
    fs = bb.sampling_factors()
    for f in bb.factors:
        assert not f.involves("x")
    if any(eval_at(f, {"t": v}) == 0 for f in fs for v in (s, u)):
        return
    if _same_cell(_cells(fs), s, u):
        assert count_at(sys, {"t": s}) == count_at(sys, {"t": u})


@given(one_param_systems(), st.fractions(-4, 4, max_denominator=7))
def test_specialization_keeps_initials_and_discriminants_nonzero(sys, s):
    bb = border_polynomial(sys)
    if any(eval_at(f, {"t": s}) == 0 for f in bb.factors):
        return
    for br in decompose(sys):
        if br.param_eqs:
            continue
        for tpoly, y in zip(br.chain, br.mainvars):
            assert not tpoly.lc(y).subs({"t": s}).is_zero()
            if tpoly.degree(y) > 1:
                assert not discriminant(tpoly, y).subs({"t": s}).is_zero()


@given(one_param_systems())
def test_border_is_a_clean_basis(sys):
    bb = border_polynomial(sys)
    if bb.factors:
        assert list(bb.factors) == squarefree_basis(list(bb.factors))
    assert all(not f.is_constant() for f in bb.factors)
