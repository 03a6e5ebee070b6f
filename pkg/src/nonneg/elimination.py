"""Pseudo-division, subresultants, resultants, discriminants, the open-CAD
projection and a simple triangularization of equation systems.

Polynomials are handled in recursive form internally: a list of FLINT
coefficients (free of the eliminated variable), lowest degree first.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadDivisor, BadInput, Unsupported, ZeroPoly
from .polyring import Polynomial, primitive, squarefree_basis, squarefree_part


# --- recursive representation ---------------------------------------------
def _split(f: Polynomial, var: str) -> list:
    return [c.raw for c in f.coeffs(var)]


def _join(ring, cs: list, var: str) -> Polynomial:
    x = ring.ctx.gens()[ring.index(var)]
    acc = ring.ctx.constant(0)
    for c in reversed(cs):
        acc = acc * x + c
    return Polynomial(ring, acc)


def _strip(cs: list) -> list:
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def _prem(A: list, B: list) -> list:
    dA, dB = len(A) - 1, len(B) - 1
    if dA < dB:
        return list(A)
    lcB = B[-1]
    R = list(A)
    e = dA - dB + 1
    while R and len(R) - 1 >= dB:
        lcR = R[-1]
        j = len(R) - 1 - dB
        R = [lcB * r for r in R]
        for i, b in enumerate(B):
            R[i + j] = R[i + j] - lcR * b
        R.pop()
        _strip(R)
        e -= 1
    if e and R:
        m = lcB**e
        R = [m * r for r in R]
    return R


def _subresultants(F: list, G: list):
    """Subresultant PRS of F, G (deg F >= deg G >= 0, G nonzero).

    Returns the remainder sequence and the principal scalar subresultants; the
    last scalar is the resultant when the sequence ends in a constant.
    """
    n, m = len(F) - 1, len(G) - 1
    R = [F, G]
    d = n - m
    b = -1 if (d + 1) % 2 else 1
    h = [b * c for c in _prem(F, G)]
    lc = G[-1]
    c = lc**d
    S = [None, c]
    c = -c
    while h:
        k = len(h) - 1
        R.append(h)
        F, G, m, d = G, h, k, m - k
        b = -lc * c**d
        h = [x / b for x in _prem(F, G)]
        lc = G[-1]
        if d > 1:
            c = ((-lc) ** d) / (c ** (d - 1))
        else:
            c = -lc
        S.append(-c)
    return R, S


# --- public operations ---------------------------------------------------------
def pseudo_rem(f: Polynomial, g: Polynomial, var: str) -> Polynomial:
    """``prem(f, g)``: remainder of ``lc(g)**k * f`` by ``g``, ``k = max(deg f - deg g + 1, 0)``."""
    if g.degree(var) < 1:
        raise BadDivisor(f"divisor has degree {g.degree(var)} in {var}")
    return _join(f.ring, _prem(_split(f, var), _split(g, var)), var)


def subresultant_prs(f: Polynomial, g: Polynomial, var: str) -> list:
    if f.is_zero() or g.is_zero():
        raise ZeroPoly("subresultant PRS of a zero polynomial")
    if f.degree(var) < g.degree(var):
        raise BadInput("need deg f >= deg g")
    R, _ = _subresultants(_split(f, var), _split(g, var))
    return [_join(f.ring, r, var) for r in R]


def resultant(f: Polynomial, g: Polynomial, var: str) -> Polynomial:
    """Sylvester resultant of ``f`` and ``g`` with respect to ``var``."""
    n, m = f.degree(var), g.degree(var)
    if n < 1 or m < 1:
        raise BadInput(f"resultant needs positive degree in {var} (got {n}, {m})")
    F, G = _split(f, var), _split(g, var)
    sign = 1
    if n < m:
        F, G = G, F
        if (n * m) % 2:
            sign = -1
    R, S = _subresultants(F, G)
    if len(R[-1]) > 1:
        return f.ring.zero()
    res = Polynomial(f.ring, S[-1])
    return res if sign == 1 else -res


def discriminant(f: Polynomial, var: str) -> Polynomial:
    """``(-1)**(n(n-1)/2) * Res(f, f') / lc(f)``; ``b^2 - 4*a*c`` for a quadratic."""
    n = f.degree(var)
    if n < 1:
        raise BadInput(f"discriminant needs positive degree in {var}")
    if n == 1:
        return f.ring.constant(1)
    r = resultant(f, f.diff(var), var).exquo(f.lc(var))
    return -r if (n * (n - 1) // 2) % 2 else r


def projection_set(B, var: str) -> list:
    """Open-CAD projection eliminating ``var``.

    Squarefree basis of the leading coefficients, discriminants and pairwise
    resultants of the squarefree basis of ``B``; elements free of ``var`` pass
    through, constants are dropped.
    """
    if isinstance(B, Polynomial):
        B = [B]
    if any(b.is_zero() for b in B):
        raise ZeroPoly("projection of a zero polynomial")
    basis = squarefree_basis(B)
    out = []
    movers = []
    for b in basis:
        if b.involves(var):
            movers.append(b)
        else:
            out.append(b)
    for b in movers:
        out.append(b.lc(var))
        if b.degree(var) > 1:
            out.append(discriminant(b, var))
    for i in range(len(movers)):
        for j in range(i + 1, len(movers)):
            out.append(resultant(movers[i], movers[j], var))
    out = [p for p in out if not p.is_constant()]
    return squarefree_basis(out)


# --- triangularization ----------------------------------------------------------
@dataclass(frozen=True)
class TriangularSystem:
    """A chain with strictly increasing main variables (bottom element first)."""

    chain: tuple
    mainvars: tuple
    side: tuple = ()
    # equations left over that involve no unknown (they must vanish)
    param_eqs: tuple = ()
    # unknowns not determined by any equation on this branch
    free: tuple = ()
    generic: bool = True

    @property
    def initials(self) -> tuple:
        return tuple(t.lc(v) for t, v in zip(self.chain, self.mainvars))


def triangularize(F, unknowns, cap: int = 64) -> list:
    """Greedy triangular decomposition of ``F = 0`` in the given unknowns.

    ``unknowns[0]`` is eliminated first and so becomes the top of the chain.
    When several equations contain the current unknown, a pivot linear in it
    is required; elimination by resultant is then exact off its initial.
    Wherever a nonconstant initial is used, the branch on which it vanishes
    is split off (marked ``generic=False``). The generic branch comes first.
    An inconsistent system yields an empty list.
    """
    F = list(F)
    if not F:
        raise BadInput("triangularize needs at least one equation")
    counter = [0]
    out = _tri(F, tuple(unknowns), (), True, cap, counter)
    out.sort(key=lambda b: not b.generic)
    return out


def _tri(pool, unknowns, side, generic, cap, counter) -> list:
    counter[0] += 1
    if counter[0] > cap:
        raise Unsupported(f"triangularization exceeded {cap} branches")
    # the zero set is all that matters, so repeated factors are dropped early
    pool = [squarefree_part(p) for p in pool if not p.is_zero()]
    if any(p.is_constant() for p in pool):
        return []
    if not unknowns:
        return [TriangularSystem((), (), side, tuple(pool), (), generic)]
    y = unknowns[0]
    with_y = [p for p in pool if p.involves(y)]
    rest = [p for p in pool if not p.involves(y)]
    if not with_y:
        subs = _tri(rest, unknowns[1:], side, generic, cap, counter)
        return [TriangularSystem(b.chain, b.mainvars, b.side, b.param_eqs, (y,) + b.free, b.generic) for b in subs]
    pivot = min(with_y, key=lambda p: (p.degree(y), p.nterms(), str(p)))
    others = [p for p in with_y if p is not pivot]
    if others and pivot.degree(y) != 1:
        raise Unsupported(f"no equation linear in {y!r} to eliminate it by")
    init = pivot.lc(y)
    out = []
    new_side = side if init.is_constant() else side + (init,)
    for b in _tri(rest + [resultant(pivot, o, y) for o in others], unknowns[1:], new_side, generic, cap, counter):
        out.append(TriangularSystem(b.chain + (pivot,), b.mainvars + (y,), b.side, b.param_eqs, b.free, b.generic))
    if not init.is_constant():
        reductum = pivot - init * pivot.ring.gen(y) ** pivot.degree(y)
        try:
            out += _tri(rest + others + [reductum, init], unknowns, side, False, cap, counter)
        except Unsupported as exc:
            if "exceeded" in str(exc) or any(init.involves(u) for u in unknowns):
                raise
            # degenerate branches only matter on the border variety
            out.append(TriangularSystem((), (), side, (init,), tuple(unknowns), False))
    return out
