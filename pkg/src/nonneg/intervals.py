"""Exact rational interval arithmetic for enclosing polynomial values on boxes."""

from __future__ import annotations

from fractions import Fraction

import flint

from .polyring import Polynomial, to_fmpq, to_fraction


def _pow(lo, hi, e):
    if e == 0:
        return flint.fmpq(1), flint.fmpq(1)
    if e % 2 or lo >= 0:
        return lo**e, hi**e
    if hi <= 0:
        return hi**e, lo**e
    return flint.fmpq(0), max(lo**e, hi**e)


def _mul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(ps), max(ps)


def enclose(f: Polynomial, box) -> tuple:
    """Rigorous ``(lo, hi)`` enclosure of ``f`` over ``box``.

    ``box`` maps every variable of ``f`` to a rational or to a ``(lo, hi)`` pair
    (an ``Interval`` works too). Naive monomial-wise evaluation: the enclosure
    shrinks to the true value as the box widths go to zero.
    """
    names = f.ring.names
    bounds = []
    for n, d in zip(names, f.raw.degrees() if not f.raw.is_zero() else [0] * len(names)):
        if d == 0:
            bounds.append(None)
            continue
        v = box[n]
        if hasattr(v, "lo"):
            lo, hi = to_fmpq(v.lo), to_fmpq(v.hi)
        elif isinstance(v, tuple):
            lo, hi = to_fmpq(v[0]), to_fmpq(v[1])
        else:
            lo = hi = to_fmpq(v)
        bounds.append((lo, hi))
    cache = {}
    tot_lo = flint.fmpq(0)
    tot_hi = flint.fmpq(0)
    for m, c in zip(f.raw.monoms(), f.raw.coeffs()):
        acc = (flint.fmpq(1), flint.fmpq(1))
        for i, e in enumerate(m):
            if e:
                key = (i, e)
                pw = cache.get(key)
                if pw is None:
                    pw = cache[key] = _pow(bounds[i][0], bounds[i][1], e)
                acc = _mul(acc, pw)
        if c >= 0:
            tot_lo += c * acc[0]
            tot_hi += c * acc[1]
        else:
            tot_lo += c * acc[1]
            tot_hi += c * acc[0]
    return to_fraction(tot_lo), to_fraction(tot_hi)


def sign_on(f: Polynomial, box) -> int | None:
    """+1/-1 when ``f`` has that sign on the whole box, 0 when ``f`` is the zero
    polynomial or the box is a point where ``f`` vanishes, else ``None``."""
    lo, hi = enclose(f, box)
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    if lo == hi == 0:
        return 0
    return None


def width(box) -> Fraction:
    w = Fraction(0)
    for v in box.values():
        if hasattr(v, "lo"):
            w = max(w, v.hi - v.lo)
        elif isinstance(v, tuple):
            w = max(w, Fraction(v[1]) - Fraction(v[0]))
    return w
