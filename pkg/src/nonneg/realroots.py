"""Exact real roots of univariate polynomials with rational coefficients.

Counting uses Sturm chains. Isolation starts from certified complex root
balls (arb, through python-flint) and keeps a real ball only after an exact
sign-change check at rational endpoints; if that fails it falls back to
Descartes' rule of signs with dyadic bisection. All endpoints are rationals
and every decision is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

import flint

from .errors import BadInput, BadInterval, NotIsolating, ZeroPoly
from .polyring import Polynomial, to_fmpq, to_fraction


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise BadInterval(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def to_json(self) -> list:
        return [str(self.lo), str(self.hi)]


# --- conversions --------------------------------------------------------------
def univariate_var(f: Polynomial) -> str | None:
    vs = f.variables()
    if len(vs) > 1:
        raise BadInput(f"expected a univariate polynomial, got variables {vs}")
    return vs[0] if vs else None


def to_qpoly(f: Polynomial) -> flint.fmpq_poly:
    """``fmpq_poly`` in the single variable of ``f`` (constants allowed)."""
    var = univariate_var(f)
    if var is None:
        return flint.fmpq_poly([to_fmpq(f.constant_value())])
    i = f.ring.index(var)
    cs = [flint.fmpq(0)] * (f.degree(var) + 1)
    for m, c in zip(f.raw.monoms(), f.raw.coeffs()):
        cs[m[i]] = c
    return flint.fmpq_poly(cs)


def from_qpoly(p, ring, var: str) -> Polynomial:
    x = ring.gen(var)
    acc = ring.zero()
    for k, c in enumerate(p.coeffs()):
        if c:
            acc = acc + x**k * to_fraction(flint.fmpq(c))
    return acc


def to_zpoly(p, keep_sign: bool = False) -> flint.fmpz_poly:
    """Primitive integer polynomial with the same roots.

    The leading coefficient is made positive unless ``keep_sign`` is set, in
    which case the result is a positive multiple of ``p`` (same signs
    everywhere).
    """
    if isinstance(p, Polynomial):
        p = to_qpoly(p)
    if isinstance(p, flint.fmpq_poly):
        p = p.numer()
    if p.is_zero():
        return p
    c = p.content()
    if not keep_sign and p.leading_coefficient() < 0:
        c = -c
    return flint.fmpz_poly([x // c for x in p.coeffs()])


def squarefree_z(p: flint.fmpz_poly) -> flint.fmpz_poly:
    if p.degree() <= 0:
        return p
    g = p.gcd(p.derivative())
    if g.degree() > 0:
        p = to_zpoly(flint.fmpz_poly(divmod(p, g)[0]))
    return p


# --- exact signs --------------------------------------------------------------
def sign_at(p, x) -> int:
    """Sign of an integer or rational univariate polynomial at a rational."""
    v = p(to_fmpq(x))
    return (v > 0) - (v < 0)


def _variations(coeffs) -> int:
    v = 0
    last = 0
    for c in coeffs:
        if c == 0:
            continue
        s = 1 if c > 0 else -1
        if last and s != last:
            v += 1
        last = s
    return v


_SHIFT = flint.fmpz_poly([1, 1])


def descartes_bound(p: flint.fmpz_poly, lo: Fraction, hi: Fraction) -> int:
    """Descartes bound on the number of roots of ``p`` in the open interval ``(lo, hi)``.

    Zero means no roots; one means exactly one root.
    """
    n = p.degree()
    if n <= 0:
        return 0
    lin = flint.fmpq_poly([to_fmpq(lo), to_fmpq(hi - lo)])
    q = flint.fmpq_poly(p)(lin).numer()
    cs = q.coeffs()
    cs += [0] * (n + 1 - len(cs))
    r = flint.fmpz_poly(cs[::-1])(_SHIFT)
    return _variations(r.coeffs())


def _cauchy_bound(p: flint.fmpz_poly) -> Fraction:
    cs = p.coeffs()
    lead = abs(int(cs[-1]))
    return 1 + Fraction(max(abs(int(c)) for c in cs[:-1]), lead)


def root_bound(p) -> Fraction:
    """Strict bound B with every real root inside (-B, B)."""
    p = to_zpoly(p)
    if p.degree() <= 0:
        return Fraction(1)
    return _cauchy_bound(p)


# --- isolation ---------------------------------------------------------------
def _isolate_positive(p: flint.fmpz_poly) -> list:
    """Isolate the roots of squarefree ``p`` (with ``p(0) != 0``) in (0, inf).

    Returns (lo, hi) pairs of Fractions; ``lo == hi`` marks an exact root.
    """
    n = p.degree()
    if n <= 0:
        return []
    cs = [int(c) for c in p.coeffs()]
    # positive roots only need the Cauchy-style bound on a_i/a_n
    bound = _cauchy_bound(p)
    e = max(0, int(bound).bit_length())
    while Fraction(2**e) <= bound:
        e += 1
    q0 = flint.fmpz_poly([c << (e * i) for i, c in enumerate(cs)])
    scale = Fraction(2**e)
    out = []
    stack = [(q0, 0, 0)]
    while stack:
        q, c, k = stack.pop()
        d = q.degree()
        if d <= 0:
            continue
        qc = q.coeffs()
        qc += [0] * (d + 1 - len(qc))
        v = _variations(flint.fmpz_poly(qc[::-1])(_SHIFT).coeffs())
        if v == 0:
            continue
        if v == 1:
            out.append((scale * Fraction(c, 2**k), scale * Fraction(c + 1, 2**k)))
            continue
        ql = flint.fmpz_poly([int(a) << (d - i) for i, a in enumerate(qc)])
        qr = ql(_SHIFT)
        rc = qr.coeffs()
        if rc and rc[0] == 0:
            m = scale * Fraction(2 * c + 1, 2 ** (k + 1))
            out.append((m, m))
            qr = flint.fmpz_poly(rc[1:])
        stack.append((qr, 2 * c + 1, k + 1))
        stack.append((ql, 2 * c, k + 1))
    return out


def _tighten(p: flint.fmpz_poly, lo: Fraction, hi: Fraction) -> tuple:
    """Shrink an open isolating interval until neither endpoint is a root."""
    while True:
        slo, shi = sign_at(p, lo), sign_at(p, hi)
        if slo and shi:
            return lo, hi
        m = (lo + hi) / 2
        sm = sign_at(p, m)
        if sm == 0:
            return m, m
        if shi:
            if sm == shi:
                hi = m
            else:
                lo = m
        elif slo:
            if sm == slo:
                lo = m
            else:
                hi = m
        else:
            if descartes_bound(p, lo, m) == 0:
                lo = m
            else:
                hi = m


def _disjoint(tagged: list) -> list:
    """Sort ``(interval, poly)`` pairs and refine overlapping neighbours
    (the wider one, against its own polynomial) until all are disjoint.
    Refining can move an interval past a neighbour, so re-sort each round."""
    while True:
        tagged.sort(key=lambda t: (t[0].lo, t[0].hi))
        for i in range(len(tagged) - 1):
            a, b = tagged[i][0], tagged[i + 1][0]
            if a.hi >= b.lo:
                j = i if a.width >= b.width else i + 1
                iv, q = tagged[j]
                tagged[j] = (refine_z(q, iv, iv.width / 2), q)
                break
        else:
            return [iv for iv, _ in tagged]


def _separate(p, roots: list) -> list:
    return _disjoint([(iv, p) for iv in roots])


def _dyadic(x) -> Fraction:
    man, exp = x.man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def isolate_descartes(p: flint.fmpz_poly) -> list:
    """Isolation by Descartes' rule of signs with bisection (pure rational)."""
    roots = []
    cs = [int(c) for c in p.coeffs()]
    if cs[0] == 0:
        roots.append(Interval(Fraction(0), Fraction(0)))
        cs = cs[1:]
    base = flint.fmpz_poly(cs)
    for lo, hi in _isolate_positive(base):
        if lo != hi:
            lo, hi = _tighten(p, lo, hi)
        roots.append(Interval(lo, hi))
    mirrored = flint.fmpz_poly([c if i % 2 == 0 else -c for i, c in enumerate(cs)])
    for lo, hi in _isolate_positive(mirrored):
        lo, hi = -hi, -lo
        if lo != hi:
            lo, hi = _tighten(p, lo, hi)
        roots.append(Interval(lo, hi))
    return _separate(p, roots)


def isolate_ball(p: flint.fmpz_poly) -> list:
    """Isolation from certified complex root balls, each real ball then
    re-checked with exact rational sign evaluation at its endpoints."""
    roots = []
    for z, _ in p.complex_roots():
        if not z.imag.is_zero():
            continue
        x = z.real
        mid, rad = _dyadic(x.mid()), _dyadic(x.rad())
        lo, hi = mid - rad, mid + rad
        slo, shi = sign_at(p, lo), sign_at(p, hi)
        if rad == 0 or slo == 0 or shi == 0:
            for c in (mid, lo, hi):
                if sign_at(p, c) == 0:
                    roots.append(Interval(c, c))
                    break
            else:
                raise NotIsolating(f"ball around {float(mid)} does not certify a root")
        elif slo == shi:
            raise NotIsolating(f"no sign change on [{lo}, {hi}]")
        else:
            roots.append(Interval(lo, hi))
    return _separate(p, roots)


def isolate_z(p: flint.fmpz_poly) -> list:
    """Sorted disjoint isolating intervals for the distinct real roots of ``p``."""
    if p.is_zero():
        raise ZeroPoly("cannot isolate the roots of the zero polynomial")
    p = squarefree_z(to_zpoly(p))
    if p.degree() <= 0:
        return []
    try:
        return isolate_ball(p)
    except NotIsolating:
        return isolate_descartes(p)


def coprime_basis_z(polys) -> list:
    """Pairwise coprime squarefree integer polynomials with the same real
    roots as the product of ``polys`` (constants dropped)."""
    basis = []
    for p in polys:
        p = squarefree_z(to_zpoly(p))
        if p.degree() <= 0:
            continue
        nxt = []
        for b in basis:
            g = p.gcd(b)
            if g.degree() > 0:
                p = p // g
                rest = b // g
                nxt.append(g)
                if rest.degree() > 0:
                    nxt.append(rest)
            else:
                nxt.append(b)
        if p.degree() > 0:
            nxt.append(p)
        basis = nxt
    return basis


def isolate_many(polys) -> list:
    """Sorted disjoint isolating intervals for the distinct real roots of the
    product of ``polys``, without forming the product: each factor of a
    coprime basis is isolated on its own and overlaps are refined apart."""
    tagged = []
    for q in coprime_basis_z(polys):
        tagged += [(iv, q) for iv in isolate_z(q)]
    return _disjoint(tagged)


def refine_z(p: flint.fmpz_poly, iv: Interval, width: Fraction) -> Interval:
    """Bisect ``iv`` (isolating a root of squarefree ``p``) down to ``width``."""
    lo, hi = iv.lo, iv.hi
    if lo == hi:
        return iv
    slo, shi = sign_at(p, lo), sign_at(p, hi)
    if slo == 0 or shi == 0 or slo == shi:
        raise NotIsolating(f"[{lo}, {hi}] does not bracket a sign change")
    while hi - lo > width:
        m = (lo + hi) / 2
        sm = sign_at(p, m)
        if sm == 0:
            return Interval(m, m)
        if sm == slo:
            lo = m
        else:
            hi = m
    return Interval(lo, hi)


def sign_at_root(p: flint.fmpz_poly, iv: Interval, g) -> tuple:
    """Exact sign of ``g`` at the root of squarefree ``p`` isolated by ``iv``.

    Returns ``(sign, interval)``; the interval may come back refined.
    Exact zeros are detected through ``gcd(p, g)``, never numerically.
    """
    g = to_zpoly(g, keep_sign=True)
    if iv.is_point:
        return sign_at(g, iv.lo), iv
    if g.degree() <= 0:
        c = int(g.coeffs()[0]) if not g.is_zero() else 0
        return (c > 0) - (c < 0), iv
    h = p.gcd(g)
    if h.degree() > 0 and sign_at(h, iv.lo) * sign_at(h, iv.hi) < 0:
        return 0, iv
    while True:
        s = sign_at(g, iv.lo)
        if s and sign_at(g, iv.hi) == s and descartes_bound(g, iv.lo, iv.hi) == 0:
            return s, iv
        iv = refine_z(p, iv, iv.width / 2)
        if iv.is_point:
            return sign_at(g, iv.lo), iv


# --- public operations on Polynomial ------------------------------------------
def _nonzero_upoly(f: Polynomial) -> flint.fmpz_poly:
    if f.is_zero():
        raise ZeroPoly("zero polynomial")
    return to_zpoly(f)


def sturm_chain(f: Polynomial) -> list:
    """Sturm chain of the squarefree part of univariate ``f``."""
    p = _nonzero_upoly(f)
    var = univariate_var(f)
    if var is None:
        return [f]
    p = flint.fmpq_poly(squarefree_z(p))
    chain = [p, p.derivative()]
    while True:
        r = divmod(chain[-2], chain[-1])[1]
        if r.is_zero():
            break
        chain.append(-r)
    return [from_qpoly(s, f.ring, var) for s in chain]


def _sturm_variations(chain_q, x) -> int:
    return _variations([s(to_fmpq(x)) for s in chain_q])


def count_roots_interval(f: Polynomial, lo, hi) -> int:
    """Number of distinct real roots of ``f`` in the half-open interval (lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise BadInterval(f"need lo < hi, got ({lo}, {hi}]")
    chain = [to_qpoly(s) for s in sturm_chain(f)]
    return _sturm_variations(chain, lo) - _sturm_variations(chain, hi)


def isolate_roots(f: Polynomial) -> list:
    """Disjoint sorted isolating intervals, each refined to width at most 1."""
    p = squarefree_z(_nonzero_upoly(f))
    return [refine_z(p, iv, Fraction(1)) for iv in isolate_z(p)]


def refine(f: Polynomial, iv: Interval, width) -> Interval:
    width = Fraction(width)
    if iv.is_point or width >= iv.width:
        return iv
    p = squarefree_z(_nonzero_upoly(f))
    return refine_z(p, iv, width)


def count_roots_with_signs(f: Polynomial, nonneg=(), strict=(), nonzero=()) -> int:
    """Distinct real roots of ``f`` at which every side condition holds."""
    p = squarefree_z(_nonzero_upoly(f))
    conds = [(to_zpoly(g, keep_sign=True), "ge") for g in nonneg]
    conds += [(to_zpoly(g, keep_sign=True), "gt") for g in strict]
    conds += [(to_zpoly(g, keep_sign=True), "ne") for g in nonzero]
    count = 0
    for iv in isolate_z(p):
        if roots_satisfy(p, iv, conds):
            count += 1
    return count


def roots_satisfy(p, iv, conds) -> bool:
    for g, kind in conds:
        s, iv = sign_at_root(p, iv, g)
        if kind == "ge" and s < 0 or kind == "gt" and s <= 0 or kind == "ne" and s == 0:
            return False
    return True


def simplest_between(lo, hi, lo_open=True, hi_open=True) -> Fraction:
    """Simplest dyadic rational in the interval between ``lo`` and ``hi``.

    ``None`` bounds are infinite. Integers of least magnitude are preferred,
    then dyadics with the smallest denominator.
    """
    def ok(x):
        if lo is not None and (x < lo or (lo_open and x == lo)):
            return False
        if hi is not None and (x > hi or (hi_open and x == hi)):
            return False
        return True

    if ok(Fraction(0)):
        return Fraction(0)
    if lo is None:
        n = floor(hi)
        return Fraction(n - 1 if n == hi and hi_open else n)
    if hi is None:
        n = -floor(-lo)
        return Fraction(n + 1 if n == lo and lo_open else n)
    k = 0
    while True:
        den = 2**k
        if lo >= 0:
            m = floor(lo * den)
            for cand in (m, m + 1):
                if ok(Fraction(cand, den)):
                    return Fraction(cand, den)
        else:
            m = -floor(-hi * den)
            for cand in (m, m - 1):
                if ok(Fraction(cand, den)):
                    return Fraction(cand, den)
        k += 1
