from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nonneg.errors import BadInterval, NotIsolating, ZeroPoly
from nonneg.polyring import Ring, to_text
from nonneg.realroots import (
    Interval,
    count_roots_interval,
    count_roots_with_signs,
    isolate_ball,
    isolate_descartes,
    isolate_many,
    isolate_roots,
    refine,
    root_bound,
    sign_at,
    squarefree_z,
    sturm_chain,
    to_zpoly,
)
from oracles import count_with_signs_oracle

R = Ring(("x",))
x = R.gen("x")


def test_sturm_chain_examples():
    assert [to_text(s) for s in sturm_chain(x**2 - 2)] == ["x^2 - 2", "2*x", "2"]
    chain = sturm_chain(x**3 - x)
    assert len(chain) == 4 and chain[-1].is_constant() and not chain[-1].is_zero()
    assert [to_text(s) for s in sturm_chain((x - 1) ** 2)][0] == "x - 1"
    with pytest.raises(ZeroPoly):
        sturm_chain(R.zero())


def test_count_roots_interval_examples():
    assert count_roots_interval(x**2 - 2, 0, 2) == 1
    assert count_roots_interval(x**3 - x, -2, 2) == 3
    assert count_roots_interval(x**2 + 1, -10, 10) == 0
    # half-open: a root at the left end is excluded, at the right end included
    assert count_roots_interval(x - 1, 1, 2) == 0
    assert count_roots_interval(x - 1, 0, 1) == 1
    with pytest.raises(BadInterval):
        count_roots_interval(x, 1, 1)


def test_isolate_examples():
    ivs = isolate_roots(x**2 - 2)
    assert len(ivs) == 2
    assert -2 <= ivs[0].lo and ivs[0].hi <= -1 and 1 <= ivs[1].lo and ivs[1].hi <= 2
    ivs = isolate_roots(x**3 - x)
    assert [iv.lo <= r <= iv.hi for iv, r in zip(ivs, (-1, 0, 1))] == [True] * 3
    assert isolate_roots(x**2 + 1) == []
    with pytest.raises(ZeroPoly):
        isolate_roots(R.zero())


def test_refine_examples():
    iv = refine(x**2 - 2, Interval(Fraction(1), Fraction(2)), Fraction(1, 8))
    assert iv.width <= Fraction(1, 8) and iv.lo**2 <= 2 <= iv.hi**2
    iv = refine(3 * x - 1, Interval(Fraction(0), Fraction(1)), Fraction(1, 100))
    assert Fraction(1, 3) in iv and iv.width <= Fraction(1, 100)
    wide = Interval(Fraction(1), Fraction(2))
    assert refine(x**2 - 2, wide, 5) == wide
    with pytest.raises(NotIsolating):
        refine(x**2 - 2, Interval(Fraction(2), Fraction(3)), Fraction(1, 8))


def test_count_with_signs_examples():
    assert count_roots_with_signs(x**2 - 1, strict=[x]) == 1
    assert count_roots_with_signs(2 * x - 1, nonneg=[x]) == 1
    assert count_roots_with_signs(x**2 - 2, nonzero=[x**2 - 2]) == 0


def test_constraint_sign_is_not_normalized_away():
    # -x > 0 keeps only the negative root; a content/sign normalization of the
    # constraint would wrongly keep the positive one
    assert count_roots_with_signs(x**2 - 2, strict=[-x]) == 1
    assert count_roots_with_signs(x**2 - 2, strict=[-x, x - 1]) == 0
    assert count_roots_with_signs(x**2 - 2, nonneg=[-2 * x + 3]) == 2
    assert count_roots_with_signs(x**2 - 2, nonneg=[-x**2 + 2]) == 2
    assert count_roots_with_signs(x**2 - 2, strict=[-x**2 + 2]) == 0


def test_distinct_roots_only():
    assert count_roots_with_signs((x - 1) ** 3 * (x + 2)) == 2
    assert len(isolate_roots((x - 1) ** 3 * (x + 2) ** 2)) == 2


# --- properties -----------------------------------------------------------------
roots_q = st.lists(st.fractions(-6, 6, max_denominator=6), min_size=0, max_size=5, unique=True)
quads = st.lists(st.tuples(st.integers(-4, 4), st.integers(1, 5)), max_size=1)


def planted(roots, quad):
    f = R.constant(1)
    for r in roots:
        f = f * (r.denominator * x - r.numerator)
    for b, c in quad:
        f = f * (x**2 + b * x + (b * b + c))  # no real roots: discriminant -3b^2-4c < 0
    return f


@given(roots_q, quads)
def test_isolation_matches_sturm_and_planted_roots(roots, quad):
    f = planted(roots, quad)
    if f.is_constant():
        return
    ivs = isolate_roots(f)
    B = root_bound(to_zpoly(f)) + 1
    assert len(ivs) == count_roots_interval(f, -B, B) == len(roots)
    for a, b in zip(ivs, ivs[1:]):
        assert a.hi < b.lo
    p = to_zpoly(f)
    for iv, r in zip(ivs, sorted(roots)):
        assert r in iv
        assert iv.is_point or sign_at(p, iv.lo) * sign_at(p, iv.hi) < 0


@given(roots_q.filter(bool), st.fractions(1, 1, max_denominator=1) | st.fractions(Fraction(1, 1000), Fraction(1, 2), max_denominator=1000))
def test_refine_stays_inside(roots, width):
    f = planted(roots, [])
    for iv in isolate_roots(f):
        r = refine(f, iv, width)
        assert iv.lo <= r.lo and r.hi <= iv.hi and r.width <= width
        assert count_roots_interval(f, r.lo - Fraction(1, 10**9), r.hi) == 1


small = st.lists(st.integers(-3, 3), min_size=1, max_size=4).map(lambda cs: sum((c * x**i for i, c in enumerate(cs)), R.zero()))


@given(roots_q, quads, st.lists(small, max_size=2), st.lists(small, max_size=1), st.lists(small, max_size=1))
def test_counter_matches_sympy_oracle(roots, quad, N, P, H):
    f = planted(roots, quad)
    if f.is_constant():
        return
    assert count_roots_with_signs(f, N, P, H) == count_with_signs_oracle(f, N, P, H)


def test_oracle_itself_on_a_known_case():
    assert count_with_signs_oracle(x**2 - 2, strict=[-x]) == 1
    assert count_with_signs_oracle(x**3 - x, nonneg=[x]) == 2
    assert count_with_signs_oracle(x**2 - 2, nonzero=[x**2 - 2]) == 0


@given(roots_q, quads)
def test_ball_and_descartes_isolation_agree(roots, quad):
    f = planted(roots, quad)
    if f.is_constant():
        return
    p = squarefree_z(to_zpoly(f))
    a, b = isolate_ball(p), isolate_descartes(p)
    assert len(a) == len(b)
    for u, v in zip(a, b):
        assert u.lo <= v.hi and v.lo <= u.hi


@given(roots_q.filter(bool), st.data())
def test_counter_with_constraints_vanishing_at_roots(roots, data):
    f = planted(roots, [])
    r = data.draw(st.sampled_from(roots))
    s = data.draw(small)
    g = (r.denominator * x - r.numerator) * (s if not s.is_zero() else R.constant(1))
    for kind in ("nonneg", "strict", "nonzero"):
        kw = {kind: [g]}
        assert count_roots_with_signs(f, **kw) == count_with_signs_oracle(f, **kw)


def test_shared_root_cases():
    f = (x - 1) * (x + 2)
    assert count_roots_with_signs(f, strict=[x - 1]) == 0
    assert count_roots_with_signs(f, nonneg=[x - 1]) == 1
    assert count_roots_with_signs(f, nonzero=[x - 1]) == 1


def test_isolate_many_examples():
    a, b = to_zpoly((x - 1) * (x + 2)), to_zpoly((x - 1) * (x**2 - 2))
    ivs = isolate_many([a, b])
    assert len(ivs) == 4
    assert Fraction(-2) in ivs[0] and Fraction(1) in ivs[2]
    assert isolate_many([]) == []


@given(st.lists(st.tuples(roots_q, quads), min_size=1, max_size=3))
def test_isolate_many_matches_the_product(parts):
    polys = [planted(r, q) for r, q in parts]
    polys = [p for p in polys if not p.is_constant()]
    if not polys:
        return
    prod = R.constant(1)
    for p in polys:
        prod = prod * p
    many = isolate_many([to_zpoly(p) for p in polys])
    assert len(many) == len(isolate_roots(prod))
    for u, v in zip(many, many[1:]):
        assert u.hi < v.lo
    zp = to_zpoly(prod)
    for iv in many:
        assert iv.is_point or count_roots_interval(prod, iv.lo, iv.hi) == 1
        assert iv.is_point or sign_at(squarefree_z(zp), iv.lo) * sign_at(squarefree_z(zp), iv.hi) < 0
