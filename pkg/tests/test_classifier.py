from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from nonneg.classifier import (
    Cell,
    _condition,
    count_at,
    format_condition,
    real_root_classification,
    refine_condition,
    simplify,
)
from nonneg.errors import Unsupported
from nonneg.expr import parse_poly
from nonneg.polyring import Ring, eval_at, poly_normalize
from nonneg.problemfile import load_problem
from nonneg.prover import _prepare
from nonneg.system import CountTarget, SemiAlgSystem

Q = Ring(("x", "a", "b", "c"))
x, a, b, c = Q.gens()
QUAD = SemiAlgSystem(Q, 3, (a * x**2 + b * x + c,), (), (), (a,))


def holds(conjs, ring, point) -> bool:
    """Evaluate a condition (list of literal sets) at a parameter point."""
    ops = {
        ">": lambda v: v > 0,
        "<": lambda v: v < 0,
        ">=": lambda v: v >= 0,
        "<=": lambda v: v <= 0,
        "=": lambda v: v == 0,
        "!=": lambda v: v != 0,
    }
    for conj in conjs:
        if all(ops[rel](eval_at(poly_normalize(parse_poly(t), ring), point)) for t, rel in conj):
            return True
    return False


def test_count_at_examples(corpus_dir):
    ex1 = _prepare(load_problem(corpus_dir / "ex01.prob"))
    assert count_at(ex1, {"b": 1, "c": 1}) == 0
    assert count_at(QUAD, {"a": 1, "b": 3, "c": 1}) == 2
    assert count_at(QUAD, {"a": 1, "b": 0, "c": 1}) == 0
    assert count_at(QUAD, {"a": 1, "b": 2, "c": 1}) == 1


def test_example1_is_uniformly_zero(corpus_dir):
    ex1 = _prepare(load_problem(corpus_dir / "ex01.prob"))
    res = real_root_classification(ex1, CountTarget.exact(0))
    assert res.uniform and set(res.counts) == {0}
    assert res.condition_text == "true"


def test_example9_is_uniformly_zero(corpus_dir):
    ex9 = _prepare(load_problem(corpus_dir / "ex09.prob"))
    res = real_root_classification(ex9, CountTarget.exact(0))
    assert res.uniform and set(res.counts) == {0}


def test_quadratic_condition_and_border_refinement():
    res = real_root_classification(QUAD, CountTarget.at_least(1))
    assert not res.uniform and set(res.counts) == {0, 2}
    assert res.condition_text == "4*a*c - b^2 < 0"
    refine_condition(res)
    assert format_condition(res.refined_condition) == "4*a*c - b^2 <= 0"
    assert res.to_json()["refined_condition"] == "4*a*c - b^2 <= 0"


def test_exact_two_on_quadratic():
    res = real_root_classification(QUAD, CountTarget.exact(2))
    assert res.condition_text == "4*a*c - b^2 < 0"
    refine_condition(res)
    # on the border there is a double root, so one solution: nothing to add
    assert format_condition(res.refined_condition) == "4*a*c - b^2 < 0"


def test_ambiguous_when_one_sign_vector_has_two_counts():
    cells = [Cell({"a": Fraction(1)}, 0, (1,)), Cell({"a": Fraction(2)}, 1, (1,))]
    assert _condition(cells, [Ring(("a",)).gen("a")], CountTarget.exact(0)) is None
    assert format_condition(None) == "AMBIGUOUS"


def test_simplify_merges_complementary_literals():
    p = frozenset({("a", ">"), ("b", "<")})
    q = frozenset({("a", "<"), ("b", "<")})
    assert simplify([p, q]) == [frozenset({("b", "<")})]
    assert simplify([frozenset({("b", "<")}), frozenset({("b", "=")})]) == [frozenset({("b", "<=")})]
    assert format_condition([]) == "false"


def test_needs_a_parameter():
    R = Ring(("x",))
    with pytest.raises(Unsupported):
        real_root_classification(SemiAlgSystem(R, 0, (R.gen("x") ** 2 - 2,)), CountTarget.exact(2))


# --- properties -----------------------------------------------------------------
P2 = Ring(("x", "s", "t"))
X, S, T = P2.gens()
lin = st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)).map(lambda v: v[0] * S + v[1] * T + v[2])


@st.composite
def systems(draw):
    deg = draw(st.integers(1, 2))
    coeffs = [draw(lin) for _ in range(deg)] + [draw(lin.filter(lambda p: not p.is_zero()))]
    f = sum((k * X**i for i, k in enumerate(coeffs)), P2.zero())
    assume(f.degree("x") >= 1)
    P = tuple(draw(st.lists(st.sampled_from([X, X - S, T - X, S]), max_size=1)))
    return SemiAlgSystem(P2, 2, (f,), (), P, ())


pts = st.tuples(st.fractions(-3, 3, max_denominator=7), st.fractions(-3, 3, max_denominator=7))


@given(systems(), st.sampled_from([CountTarget.exact(0), CountTarget.at_least(1), CountTarget.exact(2)]), st.lists(pts, min_size=1, max_size=8))
def test_condition_agrees_with_exact_counts_off_the_border(sys, target, points):
    try:
        res = real_root_classification(sys, target)
    except Unsupported:
        return
    if res.condition is None:
        return
    for s, t in points:
        pt = {"s": s, "t": t}
        if any(eval_at(f, pt) == 0 for f in res.factors):
            continue
        assert holds(res.condition, P2, pt) == target.meets(count_at(sys, pt))


@given(systems())
def test_cell_counts_are_exact_counts(sys):
    try:
        res = real_root_classification(sys, CountTarget.exact(0))
    except Unsupported:
        return
    for cell in res.cells[:6]:
        if cell.pruned is None:
            assert count_at(sys, cell.sample) == cell.count
