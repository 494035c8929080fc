"""Exponential polynomials in time.

An :class:`ExpPoly` is ``sum c_{a,b,p} * t^p * exp((a*gamma/2 + i*b*Omega) t)``
with :class:`~ckbateman.scalarring.ScalarPoly` coefficients.  The ring is
closed under ``+``, ``*`` and ``d/dt``, and every value is kept in canonical
form so an identity holds exactly when the difference has no terms.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Dict, Mapping, Tuple

from .scalarring import I_UNIT, Omega, ScalarPoly, gamma

Key = Tuple[int, int, int]  # (a, b, p)


class ExpPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, object] | None = None):
        clean: Dict[Key, ScalarPoly] = {}
        for key, coeff in (terms or {}).items():
            a, b, p = (int(v) for v in key)
            if p < 0:
                raise ValueError("t-power must be nonnegative")
            c = ScalarPoly.coerce(coeff)
            key = (a, b, p)
            if key in clean:
                c = clean[key] + c
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def const(cls, value) -> "ExpPoly":
        return cls({(0, 0, 0): value})

    @classmethod
    def exp(cls, a: int = 0, b: int = 0, coeff=1, p: int = 0) -> "ExpPoly":
        """``coeff * t^p * exp((a*gamma/2 + i*b*Omega) t)``."""
        return cls({(a, b, p): coeff})

    @classmethod
    def coerce(cls, value) -> "ExpPoly":
        if isinstance(value, ExpPoly):
            return value
        return cls.const(value)

    @property
    def terms(self) -> Dict[Key, ScalarPoly]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(key == (0, 0, 0) for key in self._terms)

    def constant_value(self) -> ScalarPoly:
        if not self.is_constant():
            raise ValueError(f"{self} depends on t")
        return self._terms.get((0, 0, 0), ScalarPoly())

    def is_unit(self) -> bool:
        """Single pure exponential with a monomial coefficient."""
        if len(self._terms) != 1:
            return False
        (key, c), = self._terms.items()
        return key[2] == 0 and len(c.terms) == 1

    def inverse(self) -> "ExpPoly":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of the exponential ring")
        ((a, b, _), c), = self._terms.items()
        return ExpPoly({(-a, -b, 0): c.inverse()})

    def __eq__(self, other):
        try:
            other = ExpPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __neg__(self):
        return ExpPoly({k: -c for k, c in self._terms.items()})

    def __add__(self, other):
        try:
            other = ExpPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return ExpPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = ExpPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return ExpPoly.coerce(other) - self

    def __mul__(self, other):
        try:
            other = ExpPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out: Dict[Key, ScalarPoly] = {}
        for (a1, b1, p1), c1 in self._terms.items():
            for (a2, b2, p2), c2 in other._terms.items():
                key = (a1 + a2, b1 + b2, p1 + p2)
                prod = c1 * c2
                out[key] = out[key] + prod if key in out else prod
        return ExpPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ExpPoly.const(1)
        for _ in range(n):
            result = result * self
        return result

    def __truediv__(self, other):
        if isinstance(other, ExpPoly):
            return self * other.inverse()
        return self * ScalarPoly.coerce(other).inverse()

    def d_dt(self) -> "ExpPoly":
        out = ExpPoly()
        for (a, b, p), c in self._terms.items():
            rate = gamma * Fraction(a, 2) + ScalarPoly.const(I_UNIT * b) * Omega
            out = out + ExpPoly({(a, b, p): c * rate})
            if p:
                out = out + ExpPoly({(a, b, p - 1): c * p})
        return out

    def map_coefficients(self, fn) -> "ExpPoly":
        return ExpPoly({k: fn(c) for k, c in self._terms.items()})

    def subs(self, name: str, value) -> "ExpPoly":
        """Substitute an exact number for a coefficient symbol (not gamma/Omega
        inside the exponent: those stay structural)."""
        return self.map_coefficients(lambda c: c.subs(name, value))

    def conjugate(self) -> "ExpPoly":
        """Complex conjugate for real t and real gamma, Omega."""
        return ExpPoly({(a, -b, p): c.conjugate() for (a, b, p), c in self._terms.items()})

    def eval(self, t: float, params: Mapping[str, complex]) -> complex:
        g = complex(params.get("gamma", 0.0)) if any(a for a, _, _ in self._terms) else 0.0
        w = complex(params.get("Omega", 0.0)) if any(b for _, b, _ in self._terms) else 0.0
        total = 0j
        for (a, b, p), c in sorted(self._terms.items()):
            total += c.eval(params) * t ** p * cmath.exp((a * g / 2 + 1j * b * w) * t)
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (a, b, p), c in sorted(self._terms.items()):
            factors = [f"[{c}]"]
            if p:
                factors.append("t" if p == 1 else f"t^{p}")
            rate = []
            if a:
                rate.append(f"{Fraction(a, 2)}*gamma")
            if b:
                rate.append(f"{b}*i*Omega")
            if rate:
                factors.append(f"exp(({' + '.join(rate)})*t)")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"ExpPoly({str(self)!r})"


def from_trig(kind: str, a: int = 0, coeff=1) -> ExpPoly:
    """``coeff * exp(a*gamma*t/2) * sin(Omega t)`` (or ``cos``) on the lattice."""
    half = Fraction(1, 2)
    c = ScalarPoly.coerce(coeff)
    if kind == "cos":
        return ExpPoly({(a, 1, 0): c * half, (a, -1, 0): c * half})
    if kind == "sin":
        # (e^{i W t} - e^{-i W t}) / (2i) = -i/2 e^{iWt} + i/2 e^{-iWt}
        ih = ScalarPoly.const(I_UNIT * half)
        return ExpPoly({(a, 1, 0): -c * ih, (a, -1, 0): c * ih})
    raise ValueError(f"unknown trig kind {kind!r}")


def mul(f, g) -> ExpPoly:
    return ExpPoly.coerce(f) * ExpPoly.coerce(g)


def d_dt(f) -> ExpPoly:
    return ExpPoly.coerce(f).d_dt()


def eval_at(f, t: float, params: Mapping[str, complex]) -> complex:
    return ExpPoly.coerce(f).eval(t, params)


def dho_solutions() -> Tuple[ExpPoly, ExpPoly]:
    """The damped-oscillator pair with u1(0)=0, u1'(0)=1, u2(0)=1, u2'(0)=0."""
    u1 = from_trig("sin", -1, Omega ** -1)
    u2 = from_trig("cos", -1) + from_trig("sin", -1, gamma * Omega ** -1 * Fraction(1, 2))
    return u1, u2


def wronskian(u1: ExpPoly, u2: ExpPoly) -> ExpPoly:
    return u1.d_dt() * u2 - u1 * u2.d_dt()


def dho_operator(u: ExpPoly) -> ExpPoly:
    """``u'' + gamma u' + omega^2 u`` with omega^2 = Omega^2 + gamma^2/4."""
    from .scalarring import omega2

    du = u.d_dt()
    return du.d_dt() + du * gamma + u * omega2()
