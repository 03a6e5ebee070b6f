"""Plain-text problem files.

One directive per line; ``#`` starts a comment::

    ring a b c          variable order (exactly one)
    params 2 | b c      parameters: the last d variables, or by name
    eq  <poly>          equation  poly = 0
    ge  <poly>          poly >= 0
    gt  <poly>          poly > 0
    ne  <poly>          poly != 0
    goal <poly> >= <poly>   (also >, <=, <)  -> prove mode
    count 0 | 1..3 | 1..inf                  -> classify mode
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ConflictingMode, MissingRing, ParseError
from .expr import parse_poly
from .polyring import Ring, poly_normalize
from .prover import Problem
from .system import CountTarget, SemiAlgSystem

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_GOAL = re.compile(r"(>=|<=|>|<)")


@dataclass
class ClassifyRequest:
    system: SemiAlgSystem
    target: CountTarget
    name: str = ""


def _poly(text: str, ring: Ring, line: int, col: int):
    return poly_normalize(parse_poly(text, line, col), ring)


def parse_problem(text: str, name: str = ""):
    """``Problem`` when the file has a goal, ``ClassifyRequest`` when it has a count."""
    ring = None
    params = None
    lists = {"eq": [], "ge": [], "gt": [], "ne": []}
    goal = None
    count = None
    pending = []  # polynomial directives, normalized once the ring is known
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        parts = line.strip().split(None, 1)
        key = parts[0]
        rest = parts[1] if len(parts) > 1 else ""
        # 0-based offset of the directive's argument in the raw line
        col = line.index(rest, indent + len(key)) if rest else len(line)
        if key == "ring":
            if ring is not None:
                raise ParseError("more than one ring directive", lineno, indent + 1)
            names = rest.split()
            if not names or not all(_NAME.match(n) for n in names) or len(set(names)) != len(names):
                raise ParseError("ring needs distinct variable names", lineno, col + 1)
            ring = tuple(names)
        elif key == "params":
            if params is not None:
                raise ParseError("more than one params directive", lineno, indent + 1)
            toks = rest.split()
            if len(toks) == 1 and toks[0].isdigit():
                params = int(toks[0])
            elif toks and all(_NAME.match(t) for t in toks):
                params = tuple(toks)
            else:
                raise ParseError("params takes a count or variable names", lineno, col + 1)
        elif key in lists:
            if not rest:
                raise ParseError(f"{key} needs a polynomial", lineno, col + 1)
            pending.append((key, rest, lineno, col))
        elif key == "goal":
            if goal is not None:
                raise ConflictingMode("more than one goal", line=lineno)
            m = list(_GOAL.finditer(rest))
            if len(m) != 1:
                raise ParseError("goal must be '<poly> >= <poly>' (or >, <=, <)", lineno, col + 1)
            rel = m[0].group(1)
            lhs, rhs = rest[: m[0].start()], rest[m[0].end():]
            goal = (lhs, rhs, rel, lineno, col, col + m[0].end())
        elif key == "count":
            if count is not None:
                raise ConflictingMode("more than one count", line=lineno)
            count = (_parse_count(rest, lineno, col), lineno)
        else:
            raise ParseError(f"unknown directive {key!r}", lineno, indent + 1)
    if ring is None:
        raise MissingRing("the problem file has no ring directive")
    if goal is not None and count is not None:
        raise ConflictingMode("a file has either a goal or a count, not both")
    if goal is None and count is None:
        raise ConflictingMode("the file needs a goal (prove) or a count (classify)")
    R = Ring(ring)
    for key, body, lineno, col in pending:
        lists[key].append(_poly(body, R, lineno, col))
    if goal is not None:
        lhs, rhs, rel, lineno, col, col2 = goal
        lp, rp = _poly(lhs, R, lineno, col), _poly(rhs, R, lineno, col2)
        t = lp - rp if rel in (">=", ">") else rp - lp
        if isinstance(params, int):
            if not 0 <= params < len(ring):
                raise ParseError(f"params {params} out of range", 0, 0)
            params = ring[len(ring) - params:] if params else ()
        if params is not None:
            for p in params:
                R.index(p)
        return Problem(
            R,
            tuple(lists["eq"]),
            tuple(lists["ge"]),
            tuple(lists["gt"]),
            tuple(lists["ne"]),
            t,
            rel in (">", "<"),
            params,
            name=name,
        )
    target, _ = count
    sys = SemiAlgSystem(R, 0, tuple(lists["eq"]), tuple(lists["ge"]), tuple(lists["gt"]), tuple(lists["ne"]))
    if params is None:
        raise ParseError("classification needs a params directive", 0, 0)
    if isinstance(params, int):
        if not 1 <= params < len(ring):
            raise ParseError(f"params {params} out of range", 0, 0)
        names = ring[len(ring) - params:]
    else:
        for p in params:
            R.index(p)
        names = params
    unknowns = tuple(v for v in ring if v not in names)
    return ClassifyRequest(sys.reorder(unknowns, tuple(v for v in ring if v in names)), target, name)


def _parse_count(text: str, lineno: int, col: int) -> CountTarget:
    t = text.replace(" ", "")
    m = re.fullmatch(r"(\d+)(?:\.\.(\d+|inf|n|\w+))?", t)
    if not m:
        raise ParseError("count takes N, LO..HI or LO..inf", lineno, col + 1)
    lo = int(m.group(1))
    hi = m.group(2)
    if hi is None:
        return CountTarget.exact(lo)
    if hi.isdigit():
        return CountTarget(lo, int(hi))
    # an unassigned name as upper end means no upper bound
    return CountTarget(lo, None)


def load_problem(path):
    from pathlib import Path

    p = Path(path)
    return parse_problem(p.read_text(), p.stem)
