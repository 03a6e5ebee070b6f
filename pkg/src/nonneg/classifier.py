"""Real root classification of parametric semi-algebraic systems.

Counting at a parameter point is exact. Chain polynomials are specialized
level by level; a coordinate is either a rational or a real algebraic number
given by an irreducible integer polynomial and an isolating interval. Signs
at points with a single irrational coordinate are decided exactly by gcd
tests; with several irrational coordinates they fall back to rational
interval refinement, which terminates at generic points and reports
``DEGENERATE`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import flint

from .borderpoly import BorderBasis, _divides, border_polynomial, decompose
from .elimination import discriminant, resultant
from .errors import Degenerate, DegenerateExhausted, MissingAssignment, NonnegError, Unsupported
from .intervals import sign_on
from .paramcad import DEFAULT_MAX_DEGREE, DEFAULT_MAX_TERMS, SamplePoint, open_cell_samples, sign_vector
from .polyring import Polynomial, eval_at, squarefree_basis, to_text
from .realroots import Interval, isolate_z, refine_z, sign_at, sign_at_root, squarefree_z, to_zpoly
from .system import CountTarget, SemiAlgSystem, append_equation

__all__ = [
    "AlgebraicNumber",
    "ClassificationResult",
    "CountTarget",
    "SemiAlgSystem",
    "count_at",
    "real_root_classification",
    "refine_condition",
    "format_condition",
    "solutions_at",
]

# refinement stops once every irrational coordinate is this narrow
_WIDTH_FLOOR = Fraction(1, 2**64)


class AlgebraicNumber:
    """Real root of an irreducible integer polynomial inside ``iv``."""

    __slots__ = ("poly", "iv")

    def __init__(self, poly: flint.fmpz_poly, iv: Interval):
        self.poly = poly
        self.iv = iv

    def refine(self) -> None:
        self.iv = refine_z(self.poly, self.iv, self.iv.width / 2)

    def __float__(self):
        return float(self.iv.mid)

    def __repr__(self):
        return f"AlgebraicNumber({self.poly}, [{self.iv.lo}, {self.iv.hi}])"


def _as_poly(p: flint.fmpz_poly, ring, var: str) -> Polynomial:
    x = ring.gen(var)
    acc = ring.zero()
    for k, c in enumerate(p.coeffs()):
        if c:
            acc = acc + x**k * int(c)
    return acc


def _univariate(h: Polynomial) -> flint.fmpz_poly:
    return to_zpoly(h, keep_sign=True)


def _split_coords(coords: dict):
    rats = {k: v for k, v in coords.items() if not isinstance(v, AlgebraicNumber)}
    algs = {k: v for k, v in coords.items() if isinstance(v, AlgebraicNumber)}
    return rats, algs


def _specialize(g: Polynomial, coords: dict):
    rats, algs = _split_coords(coords)
    used = {k: v for k, v in rats.items() if g.involves(k)}
    h = g.subs(used) if used else g
    return h, {k: v for k, v in algs.items() if h.involves(k)}


def sign_at_point(g: Polynomial, coords: dict) -> int:
    """Sign of ``g`` at a point whose coordinates are rationals or algebraic numbers."""
    h, algs = _specialize(g, coords)
    free = [v for v in h.variables() if v not in algs]
    if free:
        raise MissingAssignment(f"no value for {free}")
    if h.is_constant():
        c = h.constant_value()
        return (c > 0) - (c < 0)
    if len(algs) == 1:
        (a,) = algs.values()
        s, a.iv = sign_at_root(a.poly, a.iv, _univariate(h))
        return s
    while True:
        s = sign_on(h, {k: a.iv for k, a in algs.items()})
        if s:
            return s
        if all(a.iv.width < _WIDTH_FLOOR for a in algs.values()):
            raise Degenerate(f"cannot separate {to_text(g)} from zero at an algebraic point")
        for a in algs.values():
            a.refine()


def _roots(p: flint.fmpz_poly) -> list:
    """Real roots of ``p`` as ``(value, interval)``; the intervals isolate the
    roots of ``p`` itself, values are Fractions or AlgebraicNumbers."""
    sq = squarefree_z(to_zpoly(p))
    if sq.degree() <= 0:
        return []
    _, facs = sq.factor()
    out = []
    for iv in isolate_z(sq):
        if iv.is_point:
            out.append((iv.lo, iv))
            continue
        for q, _ in facs:
            if sign_at(q, iv.lo) * sign_at(q, iv.hi) < 0:
                break
        else:  # pragma: no cover - the product changes sign, so a factor does
            raise AssertionError("no factor owns the isolated root")
        if q.degree() == 1:
            c0, c1 = q.coeffs()
            out.append((Fraction(-int(c0), int(c1)), iv))
        else:
            out.append((AlgebraicNumber(to_zpoly(q), iv), iv))
    return out


def _widen(roots: list) -> list:
    """Replace point intervals by open neighbourhoods free of other roots."""
    out = []
    for i, (val, iv) in enumerate(roots):
        if iv.is_point:
            left = roots[i - 1][1].hi if i > 0 else iv.lo - 1
            right = roots[i + 1][1].lo if i + 1 < len(roots) else iv.hi + 1
            d = min(iv.lo - left, right - iv.hi) / 2
            iv = Interval(iv.lo - d, iv.hi + d)
        out.append((val, iv))
    return out


def _extend(t: Polynomial, y: str, sol: dict) -> list:
    """Values of ``y`` extending the partial solution ``sol`` to a zero of ``t``."""
    h, algs = _specialize(t, sol)
    if h.is_zero():
        raise Degenerate(f"{to_text(t)} vanishes identically")
    init = h.lc(y)
    if sign_at_point(init, sol) == 0:
        # initial vanishes: these points belong to another branch
        return []
    if h.degree(y) <= 0:
        return []  # a nonzero constant in y
    if not algs:
        return [v for v, _ in _roots(_univariate(h))]
    # candidates: roots of the eliminant over all conjugates
    r = h
    for v, a in algs.items():
        r = resultant(r, _as_poly(a.poly, h.ring, v), v)
    if r.is_zero():
        raise Degenerate(f"{to_text(t)} shares a factor with a lower coordinate's polynomial")
    if h.degree(y) > 1:
        disc = discriminant(h, y)
        if sign_at_point(disc, sol) == 0:
            raise Degenerate(f"{to_text(t)} has a repeated root over an irrational lower point")
    out = []
    for val, iv in _widen(_roots(_univariate(r))):
        lo = sign_at_point(h.subs({y: iv.lo}), sol)
        hi = sign_at_point(h.subs({y: iv.hi}), sol)
        if not (lo and hi):  # pragma: no cover - endpoints avoid the eliminant's roots
            raise Degenerate("isolating interval endpoint is a root")
        if lo != hi:
            out.append(val)
    return out


def _param_violation(sys: SemiAlgSystem, point: dict):
    """First parameter-only constraint violated at ``point`` (only constraints
    whose variables are all assigned are checked)."""
    for g, kind in sys.constraints():
        if not sys.is_param_only(g) or not all(v in point for v in g.variables()):
            continue
        v = eval_at(g, point)
        if kind == "ge" and v < 0:
            return g, "<"
        if kind == "gt" and v <= 0:
            return g, "<" if v < 0 else "="
        if kind == "ne" and v == 0:
            return g, "="
    return None


def solutions_at(sys: SemiAlgSystem, point) -> list:
    """All real solutions of ``sys`` at the parameter point, as dicts from
    unknown to a Fraction or AlgebraicNumber."""
    if isinstance(point, SamplePoint):
        point = point.point
    point = {k: Fraction(v) for k, v in point.items()}
    missing = [p for p in sys.params if p not in point]
    if missing:
        raise MissingAssignment(f"no value for parameters {missing}")
    if _param_violation(sys, point):
        return []
    out = []
    for b in decompose(sys):
        if any(eval_at(e, point) != 0 for e in b.param_eqs):
            continue
        if b.free:
            raise Degenerate(f"unknowns {list(b.free)} are undetermined at this point")
        sols = [dict(point)]
        for t, y in zip(b.chain, b.mainvars):
            nxt = []
            for s in sols:
                for v in _extend(t, y, s):
                    s2 = dict(s)
                    s2[y] = v
                    nxt.append(s2)
            sols = nxt
        for s in sols:
            if _satisfies(sys, s):
                out.append({u: s[u] for u in sys.unknowns})
    return out


def _satisfies(sys: SemiAlgSystem, coords: dict) -> bool:
    for g, kind in sys.constraints():
        if sys.is_param_only(g):
            continue
        s = sign_at_point(g, coords)
        if kind == "ge" and s < 0 or kind == "gt" and s <= 0 or kind == "ne" and s == 0:
            return False
    return True


def count_at(sys: SemiAlgSystem, sample) -> int:
    """Exact number of distinct real solutions at a parameter point."""
    return len(solutions_at(sys, sample))


# --- conditions -------------------------------------------------------------------
_MERGE = {
    frozenset({">", "<"}): None,
    frozenset({">", "="}): ">=",
    frozenset({"<", "="}): "<=",
    frozenset({">=", "<"}): None,
    frozenset({"<=", ">"}): None,
}


def _merge_pair(c1: frozenset, c2: frozenset):
    d1, d2 = dict(c1), dict(c2)
    if d1.keys() != d2.keys():
        return None
    diff = [k for k in d1 if d1[k] != d2[k]]
    if len(diff) != 1:
        return None
    k = diff[0]
    key = frozenset({d1[k], d2[k]})
    if key not in _MERGE:
        return None
    rel = _MERGE[key]
    d = {kk: vv for kk, vv in d1.items() if kk != k}
    if rel is not None:
        d[k] = rel
    return frozenset(d.items())


def simplify(conjs) -> list:
    """Merge conjunctions that differ in one complementary literal, drop
    absorbed ones; repeat until nothing changes. The union is preserved
    (up to the border variety)."""
    cs = set(conjs)
    changed = True
    while changed:
        changed = False
        lst = sorted(cs, key=_conj_key)
        for i in range(len(lst)):
            for j in range(i + 1, len(lst)):
                m = _merge_pair(lst[i], lst[j])
                if m is not None:
                    cs.discard(lst[i])
                    cs.discard(lst[j])
                    cs.add(m)
                    changed = True
                    break
            if changed:
                break
        if not changed:
            for a in lst:
                for b in lst:
                    if a is not b and a < b and a in cs:
                        cs.discard(b)
                        changed = True
    return sorted(cs, key=_conj_key)


def _conj_key(c):
    return (len(c), sorted(c))


def format_condition(conjs) -> str:
    if conjs is None:
        return "AMBIGUOUS"
    if not conjs:
        return "false"
    parts = []
    for c in conjs:
        if not c:
            parts.append("true")
            continue
        lits = [f"{p} {rel} 0" for p, rel in sorted(c)]
        parts.append(" and ".join(lits))
    if len(parts) == 1:
        return parts[0]
    return " or ".join(f"({p})" if " and " in p else p for p in parts)


# --- classification -------------------------------------------------------------
@dataclass
class Cell:
    sample: dict
    count: int
    signs: tuple | None = None
    pruned: tuple | None = None  # (constraint text, relation) when pruned

    def to_json(self) -> dict:
        out = {"sample": {k: _qtext(v) for k, v in self.sample.items()}, "count": self.count}
        if self.signs is not None:
            out["signs"] = list(self.signs)
        if self.pruned is not None:
            out["pruned"] = f"{self.pruned[0]} {self.pruned[1]} 0"
        return out


def _qtext(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass
class ClassificationResult:
    system: SemiAlgSystem
    target: CountTarget
    border: BorderBasis
    factors: list  # the sign-vector factors (border + parameter-only constraints)
    cells: list
    uniform: bool
    condition: list | None  # list of conjunctions, None = AMBIGUOUS
    refinements: list = field(default_factory=list)  # boundary results, see refine_condition

    @property
    def counts(self) -> list:
        return [c.count for c in self.cells]

    @property
    def condition_text(self) -> str:
        return format_condition(self.condition)

    @property
    def refined_condition(self):
        if not self.refinements or self.condition is None:
            return self.condition
        return simplify(list(self.condition) + [c for r in self.refinements for c in r])

    def to_json(self) -> dict:
        refined = self.refined_condition
        return {
            "system": self.system.to_json(),
            "target": self.target.to_json(),
            "border": self.border.to_json(),
            "sign_factors": [to_text(f) for f in self.factors],
            "cells": [c.to_json() for c in self.cells],
            "uniform": self.uniform,
            "counts": sorted(set(self.counts)),
            "condition": self.condition_text,
            "refined_condition": format_condition(refined),
        }


def _retry_points(sample: SamplePoint, tries: int):
    last, value = sample.coords[-1]
    lo, hi = sample.gap
    cands = []
    if lo is not None and hi is not None:
        cands = [lo + (hi - lo) * Fraction(j, tries + 2) for j in range(1, tries + 2)]
    elif lo is not None:
        cands = [value + j for j in range(1, tries + 1)]
    elif hi is not None:
        cands = [value - j for j in range(1, tries + 1)]
    else:
        cands = [value + j for j in range(1, tries + 1)]
    for c in cands:
        if c != value:
            p = sample.point
            p[last] = c
            yield p


def _count_with_retries(sys, sample, factors, tries=5) -> tuple:
    try:
        return sample.point, count_at(sys, sample)
    except Degenerate as first:
        err = first
    for p in _retry_points(sample, tries):
        try:
            if sign_vector(factors, p) != sample.signs:
                continue
            return p, count_at(sys, p)
        except (Degenerate, NonnegError) as e:
            err = e
    raise DegenerateExhausted(f"resampling failed at {sample.point}: {err}", factor=getattr(err, "details", {}).get("factor"))


def real_root_classification(
    sys: SemiAlgSystem,
    target: CountTarget,
    max_degree=DEFAULT_MAX_DEGREE,
    max_terms=DEFAULT_MAX_TERMS,
    border: BorderBasis | None = None,
) -> ClassificationResult:
    if sys.d < 1:
        raise Unsupported("classification needs at least one parameter; use count_at for d = 0")
    if border is None:
        border = border_polynomial(sys)
    for attempt in range(2):
        factors = border.sampling_factors()
        try:
            cells = _classify_cells(sys, factors, max_degree, max_terms)
            break
        except DegenerateExhausted as exc:
            extra = exc.details.get("factor")
            if attempt or extra is None or extra.is_constant():
                raise
            border = BorderBasis(
                tuple(squarefree_basis(list(border.factors) + [extra])),
                border.provenance + (("initial", "escalated after degenerate sample"),),
                border.constraints,
            )
    counts = {c.count for c in cells}
    uniform = len(counts) <= 1
    condition = _condition(cells, factors, target)
    return ClassificationResult(sys, target, border, factors, cells, uniform, condition)


def _classify_cells(sys, factors, max_degree, max_terms) -> list:
    params = sys.params

    def prune(point):
        return _param_violation(sys, point)

    pruned = []
    if factors:
        samples = open_cell_samples(factors, params, prune, max_degree=max_degree, max_terms=max_terms, pruned_out=pruned)
    else:
        samples = [SamplePoint(tuple((p, Fraction(0)) for p in params), ())]
        if prune(samples[0].point):
            pruned.append((samples[0].point, prune(samples[0].point)))
            samples = []
    cells = []
    for s in samples:
        point, n = _count_with_retries(sys, s, factors)
        cells.append(Cell(point, n, s.signs))
    for point, (g, rel) in pruned:
        cells.append(Cell(point, 0, None, (to_text(g), rel)))
    return cells


def _condition(cells, factors, target):
    texts = [to_text(f) for f in factors]
    by_signs = {}
    for c in cells:
        if c.signs is None:
            continue
        if by_signs.setdefault(c.signs, c.count) != c.count:
            return None
    if all(target.meets(c.count) for c in cells):
        return [frozenset()]
    conjs = []
    for c in cells:
        if not target.meets(c.count):
            continue
        if c.signs is not None:
            conjs.append(frozenset((t, ">" if s > 0 else "<") for t, s in zip(texts, c.signs)))
        else:
            conjs.append(frozenset({c.pruned}))
    return simplify(conjs)


def refine_condition(
    result: ClassificationResult,
    depth: int = 1,
    max_degree=DEFAULT_MAX_DEGREE,
    max_terms=DEFAULT_MAX_TERMS,
) -> ClassificationResult:
    """Classify on each border factor ``B = 0`` as well and record, in
    ``result.refinements``, where on the border the target count holds.

    Factors excluded by a ``!=`` hypothesis are skipped, as are boundary
    systems the classifier cannot handle; their points stay undecided.
    """
    if depth < 1 or result.condition is None:
        return result
    sys, target = result.system, result.target
    excluded = [h for h in sys.H if sys.is_param_only(h) and not h.is_constant()]
    for B in result.border.factors:
        if any(_divides(B, h) for h in excluded):
            continue
        lit = (to_text(B), "=")
        try:
            child = append_equation(sys, B)
            if child.d == 0:
                conjs = [frozenset({lit})] if target.meets(count_at(child, {})) else []
            else:
                sub = refine_condition(
                    real_root_classification(child, target, max_degree, max_terms), depth - 1, max_degree, max_terms
                )
                cond = sub.refined_condition
                if cond is None:
                    continue
                conjs = [c | {lit} for c in cond]
        except NonnegError:
            continue
        result.refinements.append(conjs)
    return result
