"""Border polynomial of a parametric semi-algebraic system.

Off the zero set of the border factors the number of distinct real solutions
is locally constant. The construction: triangularize the equations, then for
every chain collect the initials, the discriminants and the resultants of the
constraint polynomials, each pushed down to the parameters by iterated
resultants through the lower part of the chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .elimination import TriangularSystem, discriminant, resultant, triangularize
from .errors import NoEquation, Unsupported
from .polyring import Polynomial, squarefree_basis, to_text
from .system import SemiAlgSystem


@dataclass(frozen=True)
class BorderBasis:
    factors: tuple
    # one (tag, source) pair per factor; tag is initial/discriminant/ineq-resultant
    provenance: tuple
    # parameter-only constraint factors: not part of the proviso, but the
    # sampler has to separate their sign regions
    constraints: tuple = ()

    def sampling_factors(self) -> list:
        return squarefree_basis(list(self.factors) + list(self.constraints))

    def summary(self) -> list:
        return [{"poly": to_text(f), "degree": f.degree(), "terms": f.nterms()} for f in self.factors]

    def to_json(self) -> dict:
        return {
            "factors": [
                {"poly": to_text(f), "tag": tag, "source": src, "degree": f.degree(), "terms": f.nterms()}
                for f, (tag, src) in zip(self.factors, self.provenance)
            ],
            "constraints": [to_text(c) for c in self.constraints],
        }


def reduce_through(g: Polynomial, chain, mainvars) -> list | None:
    """Iterated resultants of ``g`` with the chain, top element first.

    Returns the nonconstant squarefree factors of the eliminant (possibly
    none), or ``None`` when the eliminant vanishes identically, i.e. ``g``
    vanishes on a whole component of the chain.
    """
    facs = [g]
    for t, y in zip(reversed(chain), reversed(mainvars)):
        nxt = []
        for f in facs:
            if f.involves(y):
                f = resultant(f, t, y)
                if f.is_zero():
                    return None
            nxt.append(f)
        facs = squarefree_basis(nxt)
    return facs


@lru_cache(maxsize=256)
def decompose(sys: SemiAlgSystem) -> tuple:
    """Triangular branches of ``sys.F`` (generic branch first); cached."""
    if not sys.F:
        raise NoEquation("the system must have at least one equation")
    return tuple(triangularize(list(sys.F), sys.unknowns))


def border_polynomial(sys: SemiAlgSystem) -> BorderBasis:
    """Squarefree, pairwise coprime border factors in the parameters only."""
    branches = decompose(sys)
    found = []  # (poly, tag, source)

    def add(polys, tag, source):
        for p in polys or ():
            if not p.is_constant():
                found.append((p, tag, source))

    full = [b for b in branches if not b.param_eqs]
    for b in full:
        if b.free:
            raise Unsupported(f"equations leave {list(b.free)} undetermined on an open set of parameters")
        _chain_factors(sys, b, add)

    # a branch living on param_eqs = 0 is empty as soon as one of them is
    # nonzero, so one of them in the border is enough
    for b in branches:
        if not b.param_eqs:
            continue
        have = squarefree_basis([p for p, _, _ in found])
        if any(_zero_set_covered(e, have) for e in b.param_eqs):
            continue
        e = min(b.param_eqs, key=lambda p: (p.degree(), p.nterms(), str(p)))
        add([e], "initial", "vanishing-initial branch")

    factors = squarefree_basis([p for p, _, _ in found])
    provenance = []
    for f in factors:
        for p, tag, src in found:
            if _divides(f, p):
                provenance.append((tag, src))
                break
        else:  # pragma: no cover - every factor comes from some source
            provenance.append(("initial", "unknown"))
    constraints = squarefree_basis([g for g, _ in sys.constraints() if sys.is_param_only(g) and not g.is_constant()])
    return BorderBasis(tuple(factors), tuple(provenance), tuple(constraints))


def _chain_factors(sys: SemiAlgSystem, b: TriangularSystem, add) -> None:
    chain, ys = b.chain, b.mainvars
    for k, (t, y) in enumerate(zip(chain, ys)):
        lower, lower_ys = chain[:k], ys[:k]
        init = t.lc(y)
        if not init.is_constant():
            # None: the initial vanishes on a whole lower component, which the
            # split branch covers
            add(reduce_through(init, lower, lower_ys), "initial", f"lc_{y}({to_text(t)})")
        if t.degree(y) > 1:
            # None here means repeated roots all along a lower component; the
            # counter handles that case exactly when coordinates are rational
            add(reduce_through(discriminant(t, y), lower, lower_ys), "discriminant", f"disc_{y}({to_text(t)})")
    for g, kind in sys.constraints():
        if sys.is_param_only(g):
            continue
        facs = reduce_through(g, chain, ys)
        if facs is None:
            raise Unsupported(f"constraint {to_text(g)} vanishes on a component of the equations")
        add(facs, "ineq-resultant", f"res({to_text(g)}, chain)")


def _divides(f: Polynomial, p: Polynomial) -> bool:
    try:
        p.exquo(f)
        return True
    except ArithmeticError:
        return False


def _zero_set_covered(e: Polynomial, basis: list) -> bool:
    """True when V(e) lies inside the union of V(f) for f in basis."""
    if e.is_constant():
        return not e.is_zero()
    # V(q) lies inside V(f) whenever q divides f
    return all(any(_divides(q, f) for f in basis) for q in squarefree_basis([e]))
