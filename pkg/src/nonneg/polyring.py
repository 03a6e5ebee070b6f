"""Exact sparse multivariate polynomials with rational coefficients.

Arithmetic, gcd and substitution are delegated to FLINT's ``fmpq_mpoly``;
this module fixes the variable order, the canonical text form and the
rational/``Fraction`` boundary used by the rest of the package.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd as igcd
from typing import Iterable, Mapping

import flint

from . import expr as E
from .errors import (
    MissingAssignment,
    NegativeExponent,
    RingMismatch,
    UnknownVariable,
    ZeroInput,
)


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


class Ring:
    """An ordered list of distinct variable names (the ``R`` of a system)."""

    __slots__ = ("names", "ctx", "_index")

    _cache: dict = {}

    def __new__(cls, names: Iterable[str]):
        names = tuple(names)
        hit = cls._cache.get(names)
        if hit is not None:
            return hit
        if not names:
            raise ValueError("a ring needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self = object.__new__(cls)
        self.names = names
        self.ctx = flint.fmpq_mpoly_ctx.get(names, "deglex")
        self._index = {n: i for i, n in enumerate(names)}
        cls._cache[names] = self
        return self

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __repr__(self):
        return f"Ring({list(self.names)})"

    def __reduce__(self):
        return (Ring, (self.names,))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"variable {name!r} is not in ring {list(self.names)}") from None

    def __contains__(self, name):
        return name in self._index

    def gen(self, name: str) -> "Polynomial":
        return Polynomial(self, self.ctx.gens()[self.index(name)])

    def gens(self):
        return tuple(Polynomial(self, g) for g in self.ctx.gens())

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, self.ctx.constant(to_fmpq(c)))

    def zero(self) -> "Polynomial":
        return Polynomial(self, self.ctx.constant(0))

    def from_terms(self, terms: Mapping[tuple, object]) -> "Polynomial":
        return Polynomial(self, self.ctx.from_dict({tuple(k): to_fmpq(v) for k, v in terms.items() if v}))

    def parse(self, text: str) -> "Polynomial":
        return poly_normalize(E.parse_poly(text), self)


class Polynomial:
    """Immutable polynomial over a :class:`Ring`; ``raw`` is the FLINT value."""

    __slots__ = ("ring", "raw")

    def __init__(self, ring: Ring, raw):
        self.ring = ring
        self.raw = raw

    # --- coercion -------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring:
                raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, self.raw + other.raw)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, self.raw - other.raw)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, other.raw - self.raw)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, self.raw * other.raw)

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(self.ring, -self.raw)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise NegativeExponent(f"exponent must be a nonnegative integer, got {n!r}")
        return Polynomial(self.ring, self.raw**n)

    def exquo(self, other: "Polynomial") -> "Polynomial":
        """Exact division; raises ``ArithmeticError`` when not exact."""
        other = self._coerce(other)
        try:
            return Polynomial(self.ring, self.raw / other.raw)
        except Exception as exc:  # flint raises DomainError
            raise ArithmeticError(str(exc)) from None

    def divides(self, other: "Polynomial") -> bool:
        """True when ``self`` divides ``other`` exactly."""
        _, r = divmod(other.raw, self.raw)
        return r.is_zero()

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring is other.ring and self.raw == other.raw
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.names, str(self.raw)))

    def __bool__(self):
        return not self.raw.is_zero()

    def __repr__(self):
        return f"Polynomial({str(self)!r}, {list(self.ring.names)})"

    def __str__(self):
        return to_text(self)

    def __reduce__(self):
        return (_rebuild, (self.ring.names, self.terms()))

    # --- structure ------------------------------------------------------
    def is_zero(self) -> bool:
        return self.raw.is_zero()

    def is_constant(self) -> bool:
        return self.raw.is_constant()

    def constant_value(self) -> Fraction:
        if self.raw.is_zero():
            return Fraction(0)
        if not self.raw.is_constant():
            raise ValueError("not a constant polynomial")
        return to_fraction(self.raw.leading_coefficient())

    def terms(self) -> dict:
        return {tuple(int(e) for e in m): to_fraction(c) for m, c in zip(self.raw.monoms(), self.raw.coeffs())}

    def nterms(self) -> int:
        return len(self.raw)

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var``, or total degree. The zero polynomial has degree -1."""
        if self.raw.is_zero():
            return -1
        if var is None:
            return int(self.raw.total_degree())
        return int(self.raw.degrees()[self.ring.index(var)])

    total_degree = degree

    def variables(self) -> tuple:
        if self.raw.is_zero():
            return ()
        degs = self.raw.degrees()
        return tuple(n for n, d in zip(self.ring.names, degs) if d > 0)

    def involves(self, var: str) -> bool:
        return self.degree(var) > 0

    def leading_coefficient(self) -> Fraction:
        """Coefficient of the graded-lex leading term."""
        return to_fraction(self.raw.leading_coefficient())

    def coeffs(self, var: str) -> list:
        """Coefficients as a polynomial in ``var``: ``result[k]`` multiplies ``var**k``."""
        i = self.ring.index(var)
        d = self.degree(var)
        if d < 0:
            return []
        buckets = [dict() for _ in range(d + 1)]
        for m, c in zip(self.raw.monoms(), self.raw.coeffs()):
            k = m[i]
            m = list(m)
            m[i] = 0
            buckets[k][tuple(m)] = c
        ctx = self.ring.ctx
        return [Polynomial(self.ring, ctx.from_dict(b)) for b in buckets]

    def lc(self, var: str) -> "Polynomial":
        """Leading coefficient with respect to ``var`` (the initial)."""
        cs = self.coeffs(var)
        return cs[-1] if cs else self.ring.zero()

    def to_ring(self, ring: Ring) -> "Polynomial":
        if ring is self.ring:
            return self
        idx = []
        for n, d in zip(self.ring.names, self.raw.degrees() if not self.raw.is_zero() else [0] * len(self.ring)):
            if n in ring:
                idx.append(ring.index(n))
            elif d > 0:
                raise UnknownVariable(f"variable {n!r} is not in ring {list(ring.names)}")
            else:
                idx.append(None)
        out = {}
        for m, c in zip(self.raw.monoms(), self.raw.coeffs()):
            e = [0] * len(ring)
            for k, j in zip(m, idx):
                if j is not None:
                    e[j] = k
            out[tuple(e)] = c
        return Polynomial(ring, ring.ctx.from_dict(out))

    # convenience wrappers around the module-level operations
    def __call__(self, point):
        return eval_full(self, point)

    def subs(self, assignments) -> "Polynomial":
        return substitute_partial(self, assignments)

    def diff(self, var: str) -> "Polynomial":
        return derivative(self, var)


def _rebuild(names, terms):
    return Ring(names).from_terms(terms)


# --- text form -------------------------------------------------------------
def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_text(f: Polynomial) -> str:
    """Canonical text: graded-lex terms, explicit ``*`` and ``^``, ``p/q`` coefficients."""
    if f.raw.is_zero():
        return "0"
    parts = []
    names = f.ring.names
    for m, c in zip(f.raw.monoms(), f.raw.coeffs()):
        c = to_fraction(c)
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
        mag = abs(c)
        if not mono:
            body = _fmt_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_rational(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


# --- spec operations --------------------------------------------------------
def poly_normalize(node: E.Node, ring: Ring) -> Polynomial:
    """Expand an expression tree into canonical form over ``ring``."""
    ctx = ring.ctx

    def go(n):
        if isinstance(n, E.Num):
            return ctx.constant(to_fmpq(n.value))
        if isinstance(n, E.Var):
            return ctx.gens()[ring.index(n.name)]
        if isinstance(n, E.Neg):
            return -go(n.arg)
        if isinstance(n, E.Power):
            if n.exp < 0:
                raise NegativeExponent(f"negative exponent {n.exp}")
            return go(n.base) ** n.exp
        if isinstance(n, E.Sum):
            acc = ctx.constant(0)
            for sign, t in n.terms:
                acc = acc + go(t) if sign > 0 else acc - go(t)
            return acc
        if isinstance(n, E.Product):
            acc = ctx.constant(1)
            for fct in n.factors:
                acc = acc * go(fct)
            return acc
        raise TypeError(f"not an expression node: {n!r}")

    return Polynomial(ring, go(node))


def arith(op: str, f: Polynomial, g) -> Polynomial:
    if op == "pow":
        return f**g
    if not isinstance(g, Polynomial) or g.ring is not f.ring:
        raise RingMismatch("operands must share a ring")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def eval_full(f: Polynomial, point: Mapping[str, object]) -> Fraction:
    vals = []
    for n in f.ring.names:
        if n not in point:
            raise MissingAssignment(f"no value for {n!r}")
        vals.append(to_fmpq(point[n]))
    for n in point:
        f.ring.index(n)
    return to_fraction(f.raw(*vals))


def eval_at(f: Polynomial, point: Mapping[str, object]) -> Fraction:
    """Like :func:`eval_full` but only the variables ``f`` uses need values."""
    vals = []
    for n, d in zip(f.ring.names, f.raw.degrees() if not f.raw.is_zero() else [0] * len(f.ring)):
        if d == 0:
            vals.append(flint.fmpq(0))
        elif n in point:
            vals.append(to_fmpq(point[n]))
        else:
            raise MissingAssignment(f"no value for {n!r}")
    return to_fraction(f.raw(*vals))


def substitute_partial(f: Polynomial, assignments: Mapping[str, object]) -> Polynomial:
    if not assignments:
        return f
    for n in assignments:
        f.ring.index(n)
    return Polynomial(f.ring, f.raw.subs({n: to_fmpq(v) for n, v in assignments.items()}))


def derivative(f: Polynomial, var: str) -> Polynomial:
    return Polynomial(f.ring, f.raw.derivative(f.ring.index(var)))


def content(f: Polynomial) -> Fraction:
    """Positive rational content: gcd of numerators over lcm of denominators."""
    if f.raw.is_zero():
        return Fraction(0)
    nums, dens = [], []
    for c in f.raw.coeffs():
        nums.append(int(c.p))
        dens.append(int(c.q))
    g = reduce(igcd, nums)
    lcm = reduce(lambda a, b: a * b // igcd(a, b), dens)
    return Fraction(abs(g), lcm)


def primitive(f: Polynomial) -> Polynomial:
    """Integer coefficients with gcd 1 and a positive graded-lex leading coefficient."""
    if f.raw.is_zero():
        return f
    c = content(f)
    if f.leading_coefficient() < 0:
        c = -c
    return Polynomial(f.ring, f.raw * to_fmpq(1 / c))


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    if g.ring is not f.ring:
        raise RingMismatch("operands must share a ring")
    if f.raw.is_zero() and g.raw.is_zero():
        return f
    return primitive(Polynomial(f.ring, f.raw.gcd(g.raw)))


def squarefree_part(f: Polynomial) -> Polynomial:
    """Radical of ``f`` (primitive), via gcd with all partial derivatives."""
    if f.raw.is_zero():
        raise ZeroInput("zero polynomial has no squarefree part")
    if f.is_constant():
        return f.ring.constant(1)
    g = f.raw
    for i, d in enumerate(f.raw.degrees()):
        if d > 0:
            g = g.gcd(f.raw.derivative(i))
            if g.is_constant():
                break
    return primitive(Polynomial(f.ring, f.raw / g))


def content_in(f: Polynomial, var: str) -> Polynomial:
    """gcd of the coefficients of ``f`` viewed as a polynomial in ``var``."""
    cs = [c.raw for c in f.coeffs(var) if c]
    g = cs[0]
    for c in cs[1:]:
        if g.is_constant():
            break
        g = g.gcd(c)
    return primitive(Polynomial(f.ring, g))


def _split_contents(f: Polynomial) -> list:
    """Split ``f`` along its per-variable contents (nonconstant pieces only)."""
    if f.is_constant():
        return []
    for v in f.variables():
        c = content_in(f, v)
        if not c.is_constant():
            return _split_contents(c) + _split_contents(primitive(f.exquo(c)))
    return [primitive(f)]


def _sort_key(p: Polynomial):
    return (p.degree(), p.nterms(), str(p))


def squarefree_basis(polys: Iterable[Polynomial]) -> list:
    """Pairwise-coprime squarefree primitive polynomials with the same zero set
    as the product of ``polys``. Constants are dropped; output order is
    deterministic (total degree, term count, text)."""
    basis: list = []
    for p in polys:
        if p.is_zero():
            raise ZeroInput("squarefree_basis got a zero polynomial")
        if p.is_constant():
            continue
        for q in _split_contents(squarefree_part(p)):
            basis = _refine(basis, q)
    return sorted(basis, key=_sort_key)


def _refine(basis: list, q: Polynomial) -> list:
    out = []
    for b in basis:
        if q.is_constant():
            out.append(b)
            continue
        g = gcd(b, q)
        if g.is_constant():
            out.append(b)
            continue
        out.append(g)
        rest = primitive(b.exquo(g))
        if not rest.is_constant():
            out.append(rest)
        q = primitive(q.exquo(g))
    if not q.is_constant():
        out.append(q)
    return out
