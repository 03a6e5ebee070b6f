"""Open-cell sampling of parameter space.

Projection eliminates parameters from last to first; lifting walks back up,
isolating the real roots of the specialized polynomials and picking a simple
dyadic rational in every open gap. Only open cells are sampled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .elimination import projection_set
from .errors import BadInput, OnVariety, Unsupported, ZeroPoly
from .polyring import eval_at, squarefree_basis, to_text
from .realroots import isolate_many, simplest_between, to_zpoly

DEFAULT_MAX_DEGREE = 2000
DEFAULT_MAX_TERMS = 100_000


@dataclass(frozen=True)
class SamplePoint:
    coords: tuple  # ((param, Fraction), ...) in parameter order
    signs: tuple  # sign of each factor, same order as the factor list
    # open interval of the last coordinate's cell (None = unbounded); lets a
    # caller pick another point of the same cell
    gap: tuple = (None, None)

    @property
    def point(self) -> dict:
        return dict(self.coords)

    def to_json(self) -> dict:
        return {"coords": {k: _qtext(v) for k, v in self.coords}, "signs": list(self.signs)}


@dataclass(frozen=True)
class ProjectionCascade:
    params: tuple
    # levels[k] involves only params[: k + 1]; levels[0] is univariate
    levels: tuple

    def to_json(self) -> list:
        return [[to_text(p) for p in lvl] for lvl in self.levels]


def _qtext(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _check(polys, max_degree, max_terms, level):
    for p in polys:
        if p.degree() > max_degree or p.nterms() > max_terms:
            raise Unsupported(
                f"projection level {level}: polynomial of degree {p.degree()} with {p.nterms()} terms exceeds the caps "
                f"({max_degree}, {max_terms})"
            )


def projection_cascade(factors, params, max_degree=DEFAULT_MAX_DEGREE, max_terms=DEFAULT_MAX_TERMS) -> ProjectionCascade:
    params = tuple(params)
    if not params:
        raise BadInput("need at least one parameter")
    for f in factors:
        if f.is_zero():
            raise ZeroPoly("zero factor")
        extra = set(f.variables()) - set(params)
        if extra:
            raise BadInput(f"factor {to_text(f)} involves non-parameters {sorted(extra)}")
    level = squarefree_basis(factors)
    _check(level, max_degree, max_terms, len(params))
    levels = [level]
    for k in range(len(params) - 1, 0, -1):
        level = projection_set(level, params[k]) if level else []
        _check(level, max_degree, max_terms, k)
        levels.append(level)
    levels.reverse()
    # a polynomial may land on a higher level than it needs to; move it down
    # so that level k only holds polynomials whose last variable is params[k]
    fixed = [[] for _ in params]
    for lvl in levels:
        for p in lvl:
            k = max(params.index(v) for v in p.variables())
            if not any(p == q for q in fixed[k]):
                fixed[k].append(p)
    return ProjectionCascade(params, tuple(tuple(squarefree_basis(l)) for l in fixed))


def _gaps(roots) -> list:
    """One simple rational per open gap between sorted isolating intervals,
    with the gap's bounds."""
    if not roots:
        return [(Fraction(0), None, None)]
    out = []
    first = roots[0]
    out.append((simplest_between(None, first.lo, hi_open=first.is_point), None, first.lo))
    for a, b in zip(roots, roots[1:]):
        out.append((simplest_between(a.hi, b.lo, lo_open=a.is_point, hi_open=b.is_point), a.hi, b.lo))
    last = roots[-1]
    out.append((simplest_between(last.hi, None, lo_open=last.is_point), last.hi, None))
    return out


def _lift_values(polys, assigned: dict, var: str) -> list:
    specialized = []
    for p in polys:
        q = p.subs(assigned) if assigned else p
        if q.is_zero():
            raise Unsupported(f"{to_text(p)} vanishes identically at {assigned}")
        if not q.is_constant():
            specialized.append(to_zpoly(q))
    return _gaps(isolate_many(specialized))


def open_cell_samples(
    factors,
    params,
    prune=None,
    cascade: ProjectionCascade | None = None,
    max_degree=DEFAULT_MAX_DEGREE,
    max_terms=DEFAULT_MAX_TERMS,
    pruned_out: list | None = None,
) -> list:
    """At least one sample point in every connected component of the
    complement of the factors' zero set.

    ``prune(assigned)`` may return a truthy value to drop every cell above a
    partial sample; the partial point and that value are appended to
    ``pruned_out`` when given.
    """
    params = tuple(params)
    factors = list(factors)
    if cascade is None:
        cascade = projection_cascade(factors, params, max_degree, max_terms)
    partial = [({}, (None, None))]
    for k, var in enumerate(params):
        nxt = []
        for assigned, _ in partial:
            for value, lo, hi in _lift_values(cascade.levels[k], assigned, var):
                point = dict(assigned)
                point[var] = value
                if prune is not None:
                    why = prune(point)
                    if why:
                        if pruned_out is not None:
                            pruned_out.append((point, why))
                        continue
                nxt.append((point, (lo, hi)))
        partial = nxt
    out = []
    for point, gap in partial:
        coords = tuple((v, point[v]) for v in params)
        out.append(SamplePoint(coords, sign_vector(factors, point), gap))
    return out


def sign_vector(factors, point) -> tuple:
    signs = []
    for i, f in enumerate(factors):
        v = eval_at(f, point)
        if v == 0:
            raise OnVariety(f"factor {i} ({to_text(f)}) vanishes at the point", index=i)
        signs.append(1 if v > 0 else -1)
    return tuple(signs)
