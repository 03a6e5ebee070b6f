"""Nonnegativity prover on top of real root classification.

``hypotheses => goal`` is refuted by showing that ``hypotheses and not goal``
has no real solution for generic parameter values. Equation-free problems get
a slack unknown. A uniform count of zero proves a non-strict goal through the
continuity closure; otherwise border factors are examined by boundary
recursion. A positive count yields a counterexample with an exact witness box.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .classifier import AlgebraicNumber, real_root_classification, solutions_at
from .errors import (
    AlreadyHasEquation,
    BadN,
    DepthExceeded,
    NonnegError,
    RefinementStalled,
    UnsatisfiableSplit,
    Unsupported,
)
from .intervals import enclose
from .polyring import Polynomial, Ring, squarefree_basis, to_text
from .realroots import Interval, refine_z, to_zpoly
from .system import CountTarget, SemiAlgSystem, append_equation

PROVED = "PROVED"
PROVED_GENERIC_CLOSURE = "PROVED_GENERIC_CLOSURE"
DISPROVED = "DISPROVED"
UNKNOWN = "UNKNOWN"

_STALL = Fraction(1, 2**64)


@dataclass(frozen=True)
class Problem:
    ring: Ring
    equations: tuple = ()
    nonneg: tuple = ()
    strict: tuple = ()
    nonzero: tuple = ()
    goal: Polynomial | None = None
    goal_strict: bool = False  # True for ``goal > 0``
    params: tuple | None = None  # user override: parameter names
    depth: int = 3
    closure: str = "generic"  # or "full"
    name: str = ""

    def hypotheses_json(self) -> dict:
        return {
            "equations": [to_text(p) for p in self.equations],
            "nonneg": [to_text(p) for p in self.nonneg],
            "strict": [to_text(p) for p in self.strict],
            "nonzero": [to_text(p) for p in self.nonzero],
        }


@dataclass
class Witness:
    """A point violating the goal: rational values for most variables, plus
    at most one variable known only to lie in a box, where it is a root of
    ``defining`` (which changes sign across the box)."""

    param_values: dict
    unknown_boxes: dict
    certificate: dict

    def to_json(self) -> dict:
        return {
            "param_values": {k: _q(v) for k, v in self.param_values.items()},
            "unknown_boxes": {k: [_q(iv.lo), _q(iv.hi)] for k, iv in self.unknown_boxes.items()},
            "certificate": self.certificate,
        }


@dataclass
class Verdict:
    status: str
    witness: Witness | None = None
    border: object = None
    trace: list = field(default_factory=list)
    reason: str = ""
    seconds: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "status": self.status,
            "reason": self.reason,
            "witness": self.witness.to_json() if self.witness else None,
            "border": self.border.to_json() if self.border is not None else None,
            "trace": self.trace,
        }
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def _q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --- encodings ------------------------------------------------------------------
def encode_refutation(p: Problem) -> SemiAlgSystem:
    """``hypotheses and goal < 0`` (or ``goal <= 0`` for a strict goal)."""
    N, P = list(p.nonneg), list(p.strict)
    if p.goal_strict:
        N.append(-p.goal)
    else:
        P.append(-p.goal)
    return SemiAlgSystem(p.ring, 0, tuple(p.equations), tuple(N), tuple(P), tuple(p.nonzero))


def _fresh_name(ring: Ring, base: str = "T") -> str:
    name = base
    while name in ring:
        name += "_"
    return name


def encode_slack(sys: SemiAlgSystem, negated_goal: Polynomial | None = None) -> SemiAlgSystem:
    """Replace ``-t > 0`` (or ``-t >= 0``) by ``t + T = 0, T > 0`` (or ``T >= 0``)
    with a new first ring variable ``T``, the only unknown."""
    if sys.F:
        raise AlreadyHasEquation("slack encoding is for equation-free systems")
    if negated_goal is None:
        negated_goal = sys.P[-1] if sys.P else sys.N[-1]
    in_p = any(negated_goal == q for q in sys.P)
    T = _fresh_name(sys.ring)
    ring = Ring((T,) + sys.ring.names)
    conv = lambda ps: [q.to_ring(ring) for q in ps]
    N, P = conv(sys.N), conv(sys.P)
    neg = negated_goal.to_ring(ring)
    t = ring.gen(T)
    if in_p:
        P = [q for q in P if q != neg] + [t]
    else:
        N = [q for q in N if q != neg] + [t]
    return SemiAlgSystem(ring, len(sys.ring), (-neg + t,), tuple(N), tuple(P), tuple(conv(sys.H)))


def choose_split(sys: SemiAlgSystem, params=None) -> tuple:
    """Pick one unknown per equation (lowest positive degree, ring order on
    ties); everything else is a parameter. ``params`` overrides the choice."""
    names = sys.ring.names
    if params is not None:
        params = tuple(params)
        for v in params:
            sys.ring.index(v)
        unknowns = tuple(v for v in names if v not in params)
        params = tuple(v for v in names if v in params)
        return unknowns, params
    chosen = []
    for f in sys.F:
        cands = [v for v in names if f.involves(v) and v not in chosen]
        if not cands:
            raise UnsatisfiableSplit(f"no variable left to solve {to_text(f)} for")
        chosen.append(min(cands, key=lambda v: (f.degree(v), names.index(v))))
    unknowns = tuple(v for v in names if v in chosen)
    return unknowns, tuple(v for v in names if v not in chosen)


def make_ex6(n: int) -> Problem:
    """``-1 <= x_i <= 1, sum x_i^3 = 0  =>  sum x_i <= n/3``."""
    if not isinstance(n, int) or n < 3:
        raise BadN(f"n must be an integer >= 3, got {n!r}")
    ring = Ring(tuple(f"x{i}" for i in range(1, n + 1)))
    xs = ring.gens()
    nonneg = []
    for x in xs:
        nonneg += [x + 1, 1 - x]
    cubes = ring.zero()
    total = ring.zero()
    for x in xs:
        cubes = cubes + x**3
        total = total + x
    goal = ring.constant(Fraction(n, 3)) - total
    return Problem(ring, (cubes,), tuple(nonneg), (), (), goal, False, name=f"ex06_n{n}")


# --- witnesses ------------------------------------------------------------------
def _divides_univariate(p: Polynomial, g: Polynomial) -> bool:
    try:
        g.exquo(p)
        return True
    except ArithmeticError:
        return False


def extract_witness(problem: Problem, sys: SemiAlgSystem, sample, index: int = 0) -> Witness:
    """Certify the ``index``-th real solution of ``sys`` at ``sample`` as a
    counterexample to ``problem``."""
    if hasattr(sample, "point"):
        sample = sample.point
    sols = solutions_at(sys, sample)
    if index >= len(sols):
        raise Unsupported(f"no solution #{index} at this sample")
    coords = dict(sample)
    coords.update(sols[index])
    names = problem.ring.names
    algs = {k: v for k, v in coords.items() if k in names and isinstance(v, AlgebraicNumber)}
    if len(algs) > 1:
        raise Unsupported("witness boxes support at most one irrational coordinate")
    rats = {k: Fraction(v) for k, v in coords.items() if k in names and not isinstance(v, AlgebraicNumber)}
    alg_var, alg = (next(iter(algs.items())) if algs else (None, None))
    ring = problem.ring
    defining = None
    if alg is not None:
        p = to_zpoly(alg.poly)
        defining = ring.zero()
        x = ring.gen(alg_var)
        for k, c in enumerate(p.coeffs()):
            if c:
                defining = defining + x**k * int(c)
    iv = alg.iv if alg is not None else None
    while True:
        box = dict(rats)
        if alg_var is not None:
            box[alg_var] = (iv.lo, iv.hi)
        cert = _certify(problem, rats, box, alg_var, defining)
        if cert is not None:
            break
        if iv.width < _STALL:
            raise RefinementStalled("witness box did not separate the constraints from zero")
        iv = refine_z(alg.poly, iv, iv.width / 2)
    boxes = {}
    for v in names:
        if v == alg_var:
            boxes[v] = iv
    values = {v: rats[v] for v in names if v in rats}
    if defining is not None:
        cert["defining"] = {"var": alg_var, "poly": to_text(defining)}
    return Witness(values, boxes, cert)


def _certify(problem, rats, box, alg_var, defining):
    """Certificate dict, or None if the box is still too wide."""
    def sub(g):
        used = {k: v for k, v in rats.items() if g.involves(k)}
        return g.subs(used) if used else g

    cert = {"equations": [], "nonneg": [], "strict": [], "nonzero": [], "goal": None}
    for e in problem.equations:
        h = sub(e)
        if h.is_constant():
            if not h.is_zero():
                raise Unsupported(f"equation {to_text(e)} does not hold at the witness")
            cert["equations"].append({"poly": to_text(e), "how": "zero"})
        elif defining is not None and _divides_univariate(defining, h):
            cert["equations"].append({"poly": to_text(e), "how": "multiple-of-defining"})
        else:
            raise Unsupported(f"cannot certify equation {to_text(e)} at the witness")
    checks = [("nonneg", g, ">=") for g in problem.nonneg]
    checks += [("strict", g, ">") for g in problem.strict]
    checks += [("nonzero", g, "!=") for g in problem.nonzero]
    checks.append(("goal", problem.goal, "<=" if problem.goal_strict else "<"))
    for kind, g, rel in checks:
        h = sub(g)
        if not h.is_constant() and defining is not None and _divides_univariate(defining, h):
            lo = hi = Fraction(0)
            how = "multiple-of-defining"
        else:
            lo, hi = enclose(h, box)
            how = "enclosure"
        ok = {
            ">=": lo >= 0,
            ">": lo > 0,
            "!=": lo > 0 or hi < 0,
            "<": hi < 0,
            "<=": hi <= 0,
        }[rel]
        if not ok:
            if how == "multiple-of-defining" or lo == hi:
                raise Unsupported(f"{to_text(g)} {rel} 0 fails at the witness")
            return None
        entry = {"poly": to_text(g), "rel": rel, "lo": _q(lo), "hi": _q(hi), "how": how}
        if kind == "goal":
            cert["goal"] = entry
        else:
            cert[kind].append(entry)
    if defining is not None:
        lo, hi = box[alg_var]
        a = sub(defining).subs({alg_var: lo}).constant_value()
        b = sub(defining).subs({alg_var: hi}).constant_value()
        if not a * b < 0:
            return None
        cert["sign_change"] = {"at_lo": _q(a), "at_hi": _q(b)}
    return cert


def verify_witness(problem: Problem, w: Witness) -> bool:
    """Re-check a witness from scratch with plain ``Fraction`` arithmetic on
    the term dictionaries (no FLINT, no shared interval code)."""
    names = problem.ring.names
    box = {}
    for v in names:
        if v in w.param_values:
            x = Fraction(w.param_values[v])
            box[v] = (x, x)
        elif v in w.unknown_boxes:
            iv = w.unknown_boxes[v]
            box[v] = (Fraction(iv.lo), Fraction(iv.hi))
        else:
            return False
    wide = [v for v in names if box[v][0] != box[v][1]]
    if len(wide) > 1:
        return False
    x = wide[0] if wide else None
    defining = None
    if x is not None:
        spec = w.certificate.get("defining")
        if not spec or spec["var"] != x:
            return False
        defining = _upoly_from_text(problem.ring, spec["poly"], x)
        lo, hi = box[x]
        if not _ueval(defining, lo) * _ueval(defining, hi) < 0:
            return False

    def restrict(g):
        """Univariate coefficient list of g in x after plugging the point values."""
        out = {}
        for mono, c in g.terms().items():
            val = Fraction(c)
            k = 0
            for name, e in zip(names, mono):
                if e == 0:
                    continue
                if name == x:
                    k = e
                else:
                    val *= box[name][0] ** e
            out[k] = out.get(k, Fraction(0)) + val
        n = max(out) if out else 0
        cs = [out.get(i, Fraction(0)) for i in range(n + 1)]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        return cs

    def vanishes(g) -> bool:
        cs = restrict(g)
        if len(cs) == 1:
            return cs[0] == 0
        return defining is not None and _urem(cs, defining) == [Fraction(0)]

    def enclosure(g):
        cs = restrict(g)
        if x is None:
            return cs[0], cs[0]
        lo, hi = box[x]
        tot_lo = tot_hi = Fraction(0)
        for k, c in enumerate(cs):
            plo, phi = _upow(lo, hi, k)
            a, b = c * plo, c * phi
            tot_lo += min(a, b)
            tot_hi += max(a, b)
        return tot_lo, tot_hi

    for e in problem.equations:
        if not vanishes(e):
            return False
    for g in problem.nonneg:
        if not vanishes(g) and enclosure(g)[0] < 0:
            return False
    for g in problem.strict:
        if enclosure(g)[0] <= 0:
            return False
    for g in problem.nonzero:
        lo, hi = enclosure(g)
        if lo <= 0 <= hi:
            return False
    if problem.goal_strict:
        return vanishes(problem.goal) or enclosure(problem.goal)[1] <= 0
    return enclosure(problem.goal)[1] < 0


def _upoly_from_text(ring, text, x) -> list:
    g = ring.parse(text)
    cs = [Fraction(0)] * (g.degree(x) + 1)
    i = ring.index(x)
    for mono, c in g.terms().items():
        cs[mono[i]] += Fraction(c)
    return cs


def _ueval(cs, t):
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * t + c
    return acc


def _upow(lo, hi, k):
    if k == 0:
        return Fraction(1), Fraction(1)
    a, b = lo**k, hi**k
    if k % 2 == 0 and lo < 0 < hi:
        return Fraction(0), max(a, b)
    return min(a, b), max(a, b)


def _urem(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) and any(a):
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + shift] -= q * c
        a.pop()
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a or [Fraction(0)]


# --- proving ----------------------------------------------------------------------
def prove(p: Problem) -> Verdict:
    t0 = time.perf_counter()
    v = _prove(p)
    v.seconds = time.perf_counter() - t0
    return v


def _prepare(p: Problem) -> SemiAlgSystem:
    sys = encode_refutation(p)
    override = p.params
    if not sys.F:
        sys = encode_slack(sys)
        override = None
    unknowns, params = choose_split(sys, override)
    return sys.reorder(unknowns, params)


def _prove(p: Problem) -> Verdict:
    try:
        sys = _prepare(p)
    except NonnegError as e:
        return Verdict(UNKNOWN, reason=f"{e.code}: {e}")
    trace = []
    try:
        outcome = _examine(p, sys, trace, depth=0)
    except NonnegError as e:
        return Verdict(UNKNOWN, reason=f"{e.code}: {e}", trace=trace)
    status, witness, border, reason = outcome
    if status == "EMPTY_GENERIC":
        closable = not p.goal_strict and not p.strict
        if p.closure == "generic" and closable:
            return Verdict(PROVED_GENERIC_CLOSURE, None, border, trace)
        try:
            sub = boundary_recursion(p, sys, border, 1, p.depth, trace)
        except NonnegError as e:
            return Verdict(UNKNOWN, None, border, trace, f"{e.code}: {e}")
        status, witness, _, reason = sub
        if status == "EMPTY":
            return Verdict(PROVED, None, border, trace)
    if status == "VIOLATED":
        return Verdict(DISPROVED, witness, border, trace)
    if status == "EMPTY":
        return Verdict(PROVED, None, border, trace)
    return Verdict(UNKNOWN, None, border, trace, reason)


def _examine(p: Problem, sys: SemiAlgSystem, trace: list, depth: int):
    """Classify one (sub)system. Returns (status, witness, border, reason) with
    status EMPTY (no solutions at all), EMPTY_GENERIC (none off the border),
    VIOLATED (witness found) or UNKNOWN."""
    node = {"depth": depth, "unknowns": list(sys.unknowns), "params": list(sys.params),
            "equations": [to_text(f) for f in sys.F]}
    trace.append(node)
    if sys.d == 0:
        sols = solutions_at(sys, {})
        node["count"] = len(sols)
        if not sols:
            return "EMPTY", None, None, ""
        return _witness_from(p, sys, [({}, len(sols))], None, node)
    res = real_root_classification(sys, CountTarget.exact(0))
    node["cells"] = len(res.cells)
    node["counts"] = sorted(set(res.counts))
    node["border"] = [{"degree": f.degree(), "terms": f.nterms()} for f in res.border.factors]
    bad = [(c.sample, c.count) for c in res.cells if c.count > 0]
    if bad:
        return _witness_from(p, sys, bad, res.border, node)
    return "EMPTY_GENERIC", None, res.border, ""


def _witness_from(p, sys, bad, border, node):
    last = None
    for sample, n in bad:
        for i in range(n):
            try:
                w = extract_witness(p, sys, sample, i)
            except NonnegError as e:
                last = e
                continue
            if verify_witness(p, w):
                node["witness"] = True
                return "VIOLATED", w, border, ""
    reason = f"counterexample cell found but no witness certified ({last.code}: {last})" if last else "witness failed verification"
    return "UNKNOWN", None, border, reason


def boundary_recursion(p: Problem, sys: SemiAlgSystem, border, depth: int, limit: int, trace: list | None = None):
    """Settle the border: each factor (and each parameter-only non-strict
    hypothesis boundary) is appended as an equation with a fresh unknown."""
    trace = [] if trace is None else trace
    factors = _boundary_factors(sys, border)
    if not factors:
        return "EMPTY", None, border, ""
    if depth > limit:
        raise DepthExceeded(f"boundary recursion needs depth > {limit}")
    for B in factors:
        child = append_equation(sys, B)
        status, witness, cborder, reason = _examine(p, child, trace, depth)
        if status == "EMPTY_GENERIC":
            status, witness, _, reason = boundary_recursion(p, child, cborder, depth + 1, limit, trace)
        if status == "VIOLATED":
            return status, witness, border, ""
        if status != "EMPTY":
            return "UNKNOWN", None, border, reason
    return "EMPTY", None, border, ""


def _boundary_factors(sys: SemiAlgSystem, border) -> list:
    extra = [g for g in sys.N if sys.is_param_only(g) and not g.is_constant()]
    return squarefree_basis(list(border.factors) + extra) if border is not None else squarefree_basis(extra)
