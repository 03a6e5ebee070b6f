"""Parametric semi-algebraic systems and count targets."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadInput, RingMismatch, UnsatisfiableSplit
from .polyring import Polynomial, Ring, to_text


@dataclass(frozen=True)
class SemiAlgSystem:
    """``F = 0, N >= 0, P > 0, H != 0`` over ``ring``; the last ``d`` ring
    variables are parameters, the others unknowns."""

    ring: Ring
    d: int
    F: tuple = ()
    N: tuple = ()
    P: tuple = ()
    H: tuple = ()

    def __post_init__(self):
        for name in ("F", "N", "P", "H"):
            polys = tuple(getattr(self, name))
            object.__setattr__(self, name, polys)
            for p in polys:
                if not isinstance(p, Polynomial):
                    raise BadInput(f"{name} must hold polynomials, got {type(p).__name__}")
                if p.ring is not self.ring:
                    raise RingMismatch(f"{name} polynomial {p} is over {p.ring!r}, not {self.ring!r}")
        if not 0 <= self.d < len(self.ring):
            raise BadInput(f"d={self.d} must satisfy 0 <= d < {len(self.ring)}")

    @property
    def unknowns(self) -> tuple:
        return self.ring.names[: len(self.ring) - self.d]

    @property
    def params(self) -> tuple:
        return self.ring.names[len(self.ring) - self.d:]

    def constraints(self):
        """``(polynomial, kind)`` pairs with kind in ``ge``/``gt``/``ne``."""
        return [(g, "ge") for g in self.N] + [(p, "gt") for p in self.P] + [(h, "ne") for h in self.H]

    def is_param_only(self, p: Polynomial) -> bool:
        return not any(p.involves(u) for u in self.unknowns)

    def reorder(self, unknowns, params) -> "SemiAlgSystem":
        """Same system over the ring ``unknowns + params``."""
        ring = Ring(tuple(unknowns) + tuple(params))
        if set(ring.names) != set(self.ring.names):
            raise BadInput("reordering must keep the same variables")
        conv = lambda ps: tuple(p.to_ring(ring) for p in ps)
        return SemiAlgSystem(ring, len(params), conv(self.F), conv(self.N), conv(self.P), conv(self.H))

    def to_json(self) -> dict:
        return {
            "ring": list(self.ring.names),
            "d": self.d,
            "F": [to_text(p) for p in self.F],
            "N": [to_text(p) for p in self.N],
            "P": [to_text(p) for p in self.P],
            "H": [to_text(p) for p in self.H],
        }


def append_equation(sys: SemiAlgSystem, B: Polynomial) -> SemiAlgSystem:
    """``sys`` with ``B = 0`` added; a parameter of ``B`` of lowest positive
    degree (ring order on ties) becomes a new, last unknown."""
    cands = [v for v in sys.params if B.involves(v)]
    if not cands:
        raise UnsatisfiableSplit(f"{to_text(B)} involves no parameter")
    names = sys.ring.names
    v = min(cands, key=lambda u: (B.degree(u), names.index(u)))
    grown = SemiAlgSystem(sys.ring, sys.d, sys.F + (B,), sys.N, sys.P, sys.H)
    return grown.reorder(sys.unknowns + (v,), tuple(u for u in sys.params if u != v))


@dataclass(frozen=True)
class CountTarget:
    """``exact(n)``, ``range(lo, hi)`` or ``range(lo, None)`` (no upper bound)."""

    lo: int
    hi: int | None

    def __post_init__(self):
        if self.lo < 0 or (self.hi is not None and self.hi < self.lo):
            raise BadInput(f"bad count target {self.lo}..{self.hi}")

    @classmethod
    def exact(cls, n: int) -> "CountTarget":
        return cls(n, n)

    @classmethod
    def at_least(cls, n: int) -> "CountTarget":
        return cls(n, None)

    def meets(self, count: int) -> bool:
        return count >= self.lo and (self.hi is None or count <= self.hi)

    def __str__(self):
        if self.hi == self.lo:
            return str(self.lo)
        return f"{self.lo}..{'inf' if self.hi is None else self.hi}"

    def to_json(self):
        return {"lo": self.lo, "hi": self.hi}
